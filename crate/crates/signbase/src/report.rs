//! Analysis reports: canonical JSON (byte-stable across runs) and a
//! human-readable text rendering.

use std::time::Duration;

use serde::Serialize;

use crate::bases::BaseReport;
use crate::digraph::{SignedDigraph, SimpleCycle, DEFAULT_CYCLE_CAP};
use crate::exponents::{CWalkReport, ExponentReport, UpperBoundReport};

pub const SCHEMA: &str = "signbase/1";

#[derive(Clone, Debug, Serialize)]
pub struct CycleJson {
    pub vertices: Vec<usize>,
    pub length: usize,
    pub sign: char,
}

impl CycleJson {
    fn from_cycle(c: &SimpleCycle) -> CycleJson {
        CycleJson {
            vertices: c.vertices.clone(),
            length: c.len(),
            sign: c.sign.symbol(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentsJson {
    pub pairwise: Vec<Vec<u64>>,
    pub per_vertex: Vec<u64>,
    pub ordered: Vec<u64>,
    pub global: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CWalkJson {
    pub pairwise: Vec<Vec<u64>>,
    pub eccentricities: Vec<u64>,
    pub ordered: Vec<u64>,
    pub global: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundJson {
    pub frobenius: u64,
    pub pairwise: Vec<Vec<u64>>,
    pub global: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasesJson {
    pub pairwise: Vec<Vec<u64>>,
    pub per_vertex: Vec<u64>,
    pub ordered: Vec<u64>,
    pub global: u64,
    pub stabilization_time: u64,
}

/// Full analysis of one signed digraph. Serialization is canonical: stable
/// field order, cycles canonically rotated and sorted, no volatile fields
/// (timing lives only in the text rendering).
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub input: String,
    pub order: usize,
    pub arc_count: usize,
    pub strongly_connected: bool,
    pub cycle_count: usize,
    pub cycle_lengths: Vec<usize>,
    pub gcd_of_cycle_lengths: usize,
    pub primitive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonpowerful: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinguished_pair: Option<[CycleJson; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<ExponentsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cwalk: Option<CWalkJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<BoundJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bases: Option<BasesJson>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalysisFailure {
    NotPrimitive { detail: String },
    Powerful,
    Engine(String),
}

impl std::fmt::Display for AnalysisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalysisFailure::NotPrimitive { detail } => write!(f, "not primitive: {detail}"),
            AnalysisFailure::Powerful => {
                write!(f, "powerful sign pattern: no pair of SSSD walks exists at any length")
            }
            AnalysisFailure::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl AnalysisReport {
    /// Analyze a digraph. `exp_only` skips the base computation (and with it
    /// the powerful-input failure mode).
    pub fn build(
        input: impl Into<String>,
        s: &SignedDigraph,
        exp_only: bool,
    ) -> Result<AnalysisReport, AnalysisFailure> {
        let cat = s
            .cycle_catalog(DEFAULT_CYCLE_CAP)
            .map_err(|e| AnalysisFailure::Engine(e.to_string()))?;
        let strongly_connected = s.is_strongly_connected();
        let primitive = s.is_primitive_with(&cat);
        if !primitive {
            return Err(AnalysisFailure::NotPrimitive {
                detail: s.non_primitive_reason(&cat),
            });
        }
        let pair = cat.find_distinguished_pair();
        let nonpowerful = pair.is_some();
        let distinguished_pair =
            pair.map(|(a, b)| [CycleJson::from_cycle(a), CycleJson::from_cycle(b)]);

        let exp = ExponentReport::compute_with(s, &cat)
            .map_err(|e| AnalysisFailure::Engine(e.to_string()))?;
        let cwalk = CWalkReport::compute_with(s, &cat)
            .map_err(|e| AnalysisFailure::Engine(e.to_string()))?;
        let bound = UpperBoundReport::compute_with(s, &cat)
            .map_err(|e| AnalysisFailure::Engine(e.to_string()))?;

        let bases = if exp_only {
            None
        } else {
            if !nonpowerful {
                return Err(AnalysisFailure::Powerful);
            }
            let b = BaseReport::compute_with(s, &cat)
                .map_err(|e| AnalysisFailure::Engine(e.to_string()))?;
            Some(BasesJson {
                pairwise: b.pairwise,
                per_vertex: b.per_vertex,
                ordered: b.ordered,
                global: b.global,
                stabilization_time: b.stabilization_time,
            })
        };

        Ok(AnalysisReport {
            schema: SCHEMA,
            kind: "analysis",
            input: input.into(),
            order: s.order(),
            arc_count: s.arc_count(),
            strongly_connected,
            cycle_count: cat.cycles().len(),
            cycle_lengths: cat.lengths_vec(),
            gcd_of_cycle_lengths: cat.gcd_of_lengths(),
            primitive,
            nonpowerful: Some(nonpowerful),
            distinguished_pair,
            exponents: Some(ExponentsJson {
                pairwise: exp.pairwise,
                per_vertex: exp.per_vertex,
                ordered: exp.ordered,
                global: exp.global,
            }),
            cwalk: Some(CWalkJson {
                pairwise: cwalk.pairwise,
                eccentricities: cwalk.eccentricities,
                ordered: cwalk.ordered,
                global: cwalk.global,
            }),
            upper_bound: Some(BoundJson {
                frobenius: bound.frobenius,
                pairwise: bound.pairwise,
                global: bound.global,
            }),
            bases,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self, elapsed: Option<Duration>) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(&mut out, format!("analysis: {}", self.input));
        push(
            &mut out,
            format!("order n = {}, arcs = {}", self.order, self.arc_count),
        );
        push(
            &mut out,
            format!(
                "strongly connected: {}",
                if self.strongly_connected { "yes" } else { "no" }
            ),
        );
        push(
            &mut out,
            format!(
                "cycle lengths C(S) = {:?} ({} simple cycles, gcd {})",
                self.cycle_lengths, self.cycle_count, self.gcd_of_cycle_lengths
            ),
        );
        push(&mut out, "primitive: yes".to_string());
        if let Some(np) = self.nonpowerful {
            push(&mut out, format!("nonpowerful: {}", if np { "yes" } else { "no" }));
        }
        if let Some([a, b]) = &self.distinguished_pair {
            push(
                &mut out,
                format!(
                    "distinguished pair: ({:?} len {} sign {}) with ({:?} len {} sign {})",
                    a.vertices, a.length, a.sign, b.vertices, b.length, b.sign
                ),
            );
        }
        if let Some(e) = &self.exponents {
            push(&mut out, format!("exp(S) = {}", e.global));
            push(&mut out, format!("  per-vertex exp: {:?}", e.per_vertex));
            push(&mut out, format!("  ordered exp(k): {:?}", e.ordered));
            push(&mut out, render_table("  exp", &e.pairwise));
        }
        if let Some(c) = &self.cwalk {
            push(&mut out, format!("d(C(S)) = {}", c.global));
            push(&mut out, format!("  eccentricities: {:?}", c.eccentricities));
            push(&mut out, format!("  ordered d_k(C(S)): {:?}", c.ordered));
        }
        if let Some(b) = &self.upper_bound {
            push(
                &mut out,
                format!(
                    "exponent upper bound: d(C(S)) + frobenius(C(S)) = {} (frobenius {})",
                    b.global, b.frobenius
                ),
            );
            push(&mut out, render_table("  bound", &b.pairwise));
        }
        if let Some(b) = &self.bases {
            push(
                &mut out,
                format!(
                    "l(S) = {} (all-ambiguous power first at t = {})",
                    b.global, b.stabilization_time
                ),
            );
            push(&mut out, format!("  per-vertex l: {:?}", b.per_vertex));
            push(&mut out, format!("  ordered l(k): {:?}", b.ordered));
            push(&mut out, render_table("  l", &b.pairwise));
        }
        if let Some(d) = elapsed {
            push(&mut out, format!("timing: {:.3} ms", d.as_secs_f64() * 1e3));
        }
        out
    }
}

fn render_table(label: &str, table: &[Vec<u64>]) -> String {
    let width = table
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    let mut s = format!("{label} pairwise:");
    for row in table {
        s.push_str("\n   ");
        for v in row {
            s.push_str(&format!(" {v:>width$}"));
        }
    }
    s
}
