//! Command implementations behind the binary: analyze an edge-list file,
//! generate family members, run verification suites. Each command returns
//! its stdout payload and exit code so the surface is directly testable.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::{ArcSign, ParseError, SignedDigraph};
use crate::families::{FamilyError, FamilyName, FamilySpec, Preset, SignPolicy};
use crate::report::{AnalysisFailure, AnalysisReport, SCHEMA};
use crate::verify::{self, Outcome, DEFAULT_SEED};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("not primitive: {detail}")]
    NotPrimitive { detail: String },
    #[error("powerful sign pattern: no pair of SSSD walks exists at any length")]
    Powerful,
    #[error("{0}")]
    Family(#[from] FamilyError),
    #[error("{0}")]
    Engine(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::NotPrimitive { .. } => 2,
            CliError::Powerful => 3,
            CliError::Family(_) | CliError::Engine(_) | CliError::Usage(_) => 1,
        }
    }
}

#[derive(Debug)]
pub struct CmdOutput {
    pub stdout: String,
    pub exit_code: i32,
}

impl CmdOutput {
    fn ok(stdout: String) -> CmdOutput {
        CmdOutput {
            stdout,
            exit_code: 0,
        }
    }
}

fn failure_to_error(f: AnalysisFailure) -> CliError {
    match f {
        AnalysisFailure::NotPrimitive { detail } => CliError::NotPrimitive { detail },
        AnalysisFailure::Powerful => CliError::Powerful,
        AnalysisFailure::Engine(e) => CliError::Engine(e),
    }
}

#[derive(Clone, Copy, Default)]
pub struct AnalyzeOptions {
    pub exp_only: bool,
    pub json: bool,
}

/// Full analysis of an edge-list document. Exit codes: 1 parse error,
/// 2 non-primitive input, 3 powerful input (unless `exp_only`).
pub fn cmd_analyze(
    input_name: &str,
    text: &str,
    opts: AnalyzeOptions,
) -> Result<CmdOutput, CliError> {
    let start = Instant::now();
    let s = SignedDigraph::parse(text)?;
    let report = AnalysisReport::build(input_name, &s, opts.exp_only).map_err(failure_to_error)?;
    let stdout = if opts.json {
        report.to_json()
    } else {
        report.render_text(Some(start.elapsed()))
    };
    Ok(CmdOutput::ok(stdout))
}

#[derive(Clone, Default)]
pub struct FamilyOptions {
    pub name: String,
    pub n: usize,
    pub k: Option<usize>,
    pub i: Option<usize>,
    pub preset: Option<String>,
    pub all_positive: bool,
    /// arcs of the all-positive member to negate, as (from, to)
    pub negate: Vec<(usize, usize)>,
    /// per-length sign demands solved over the cycle space
    pub require: Vec<(usize, ArcSign)>,
    pub no_analyze: bool,
    pub json: bool,
}

#[derive(Serialize)]
struct FamilyJson<'a> {
    schema: &'static str,
    kind: &'static str,
    family: &'a str,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    sign_policy: String,
    edge_list: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<AnalysisReport>,
}

/// Generate a family member, print it as an edge list and (by default)
/// report on it. Family reports include the base section only when the
/// generated pattern is nonpowerful; generation itself never exits nonzero
/// for powerful outputs.
pub fn cmd_family(opts: &FamilyOptions) -> Result<CmdOutput, CliError> {
    let start = Instant::now();
    let family = FamilyName::parse(&opts.name)
        .ok_or_else(|| CliError::Usage(format!("unknown family name '{}'", opts.name)))?;
    let policy_count = usize::from(opts.preset.is_some())
        + usize::from(opts.all_positive)
        + usize::from(!opts.negate.is_empty())
        + usize::from(!opts.require.is_empty());
    if policy_count > 1 {
        return Err(CliError::Usage(
            "choose one of --preset, --all-positive, --negate, --require".to_string(),
        ));
    }
    let (sign_policy, policy_label) = if let Some(p) = &opts.preset {
        let preset = Preset::parse(p)
            .ok_or_else(|| CliError::Usage(format!("unknown preset '{p}'")))?;
        (SignPolicy::Preset(preset), format!("preset {p}"))
    } else if !opts.negate.is_empty() {
        let map: BTreeMap<(usize, usize), ArcSign> = opts
            .negate
            .iter()
            .map(|&(u, v)| ((u, v), ArcSign::Minus))
            .collect();
        (SignPolicy::Explicit(map), "explicit negations".to_string())
    } else if !opts.require.is_empty() {
        let map: BTreeMap<usize, ArcSign> = opts.require.iter().copied().collect();
        (SignPolicy::Solve(map), "solved sign classes".to_string())
    } else {
        (SignPolicy::AllPositive, "all-positive".to_string())
    };
    let spec = FamilySpec {
        family,
        n: opts.n,
        k: opts.k,
        i: opts.i,
        sign_policy,
    };
    let s = spec.generate()?;
    let edge_list = s.to_edge_list();
    let descriptor = format!(
        "family {} n={}{}{} ({policy_label})",
        family,
        opts.n,
        opts.k.map(|k| format!(" k={k}")).unwrap_or_default(),
        opts.i.map(|i| format!(" i={i}")).unwrap_or_default(),
    );

    let report = if opts.no_analyze {
        None
    } else {
        // a powerful member still reports; the base section degrades away
        match AnalysisReport::build(&descriptor, &s, false) {
            Ok(r) => Some(r),
            Err(AnalysisFailure::Powerful) => {
                Some(AnalysisReport::build(&descriptor, &s, true).map_err(failure_to_error)?)
            }
            Err(e) => return Err(failure_to_error(e)),
        }
    };

    if opts.json {
        let payload = FamilyJson {
            schema: SCHEMA,
            kind: "family",
            family: family.as_str(),
            n: opts.n,
            k: opts.k,
            i: opts.i,
            sign_policy: policy_label,
            edge_list,
            report,
        };
        let mut out = serde_json::to_string_pretty(&payload).expect("family payload serializes");
        out.push('\n');
        Ok(CmdOutput::ok(out))
    } else {
        let mut out = edge_list;
        if let Some(r) = report {
            out.push('\n');
            out.push_str(&r.render_text(Some(start.elapsed())));
        }
        Ok(CmdOutput::ok(out))
    }
}

#[derive(Clone, Default)]
pub struct VerifyOptions {
    pub suite: String,
    /// single order "14" or inclusive range "6..12"
    pub n: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub json: bool,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    schema: &'static str,
    kind: &'static str,
    suite: &'a str,
    seed: u64,
    outcomes: &'a [Outcome],
    passed: usize,
    failed: usize,
}

pub fn parse_order_range(spec: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid order range '{spec}' (use N or A..B)"));
    if let Some((a, b)) = spec.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad())?;
        let hi: usize = b.trim().parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        let n: usize = spec.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(vec![n])
    }
}

const FORMULA_DEFAULT_RANGE: std::ops::RangeInclusive<usize> = 6..=12;
const GAP_DEFAULT_ORDERS: [usize; 2] = [14, 15];
const TINY_DEFAULT_SAMPLES: usize = 100;
const SAMPLED_DEFAULT_SAMPLES: usize = 200;

/// Run a verification suite; one output line per outcome plus a summary.
/// Exit code 1 iff any outcome failed.
pub fn cmd_verify(opts: &VerifyOptions) -> Result<CmdOutput, CliError> {
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let ns = match &opts.n {
        Some(spec) => Some(parse_order_range(spec)?),
        None => None,
    };
    let formula_orders =
        || ns.clone().unwrap_or_else(|| FORMULA_DEFAULT_RANGE.collect());
    let gap_orders = || -> Result<Vec<usize>, CliError> {
        let orders = ns.clone().unwrap_or_else(|| GAP_DEFAULT_ORDERS.to_vec());
        if let Some(&bad) = orders.iter().find(|&&n| n < 14) {
            return Err(CliError::Usage(format!(
                "gap and characterization suites need n >= 14, got {bad}"
            )));
        }
        Ok(orders)
    };

    let mut outcomes: Vec<Outcome> = Vec::new();
    match opts.suite.as_str() {
        "exponents" => outcomes.extend(verify::verify_exponent_formulas(&formula_orders())),
        "bases" => outcomes.extend(verify::verify_base_formulas(&formula_orders())),
        "tiny" => outcomes.extend(verify::exhaustive_tiny(
            opts.samples.unwrap_or(TINY_DEFAULT_SAMPLES),
            seed,
        )),
        "gaps" => {
            let samples = opts.samples.unwrap_or(SAMPLED_DEFAULT_SAMPLES);
            for n in gap_orders()? {
                outcomes.extend(verify::gap_scan(n, samples, seed));
            }
        }
        "characterizations" => {
            let samples = opts.samples.unwrap_or(SAMPLED_DEFAULT_SAMPLES);
            for n in gap_orders()? {
                outcomes.extend(verify::characterization_check(n, samples, seed));
            }
        }
        "all" => {
            outcomes.extend(verify::verify_exponent_formulas(&formula_orders()));
            outcomes.extend(verify::verify_base_formulas(&formula_orders()));
            outcomes.extend(verify::exhaustive_tiny(
                opts.samples.unwrap_or(TINY_DEFAULT_SAMPLES),
                seed,
            ));
            let samples = opts.samples.unwrap_or(SAMPLED_DEFAULT_SAMPLES);
            for n in GAP_DEFAULT_ORDERS {
                outcomes.extend(verify::gap_scan(n, samples, seed));
                outcomes.extend(verify::characterization_check(n, samples, seed));
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite '{other}' (expected exponents, bases, tiny, gaps, characterizations or all)"
            )))
        }
    }
    verify::sort_outcomes(&mut outcomes);
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    let passed = outcomes.len() - failed;

    let stdout = if opts.json {
        let payload = VerifyJson {
            schema: SCHEMA,
            kind: "verification",
            suite: &opts.suite,
            seed,
            outcomes: &outcomes,
            passed,
            failed,
        };
        let mut out = serde_json::to_string_pretty(&payload).expect("outcomes serialize");
        out.push('\n');
        out
    } else {
        let mut out = String::new();
        for o in &outcomes {
            let status = if o.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} [{}] {} :: {} (expected {}; computed {})",
                o.suite, o.instance, o.check, o.expected, o.computed
            ));
            if let Some(w) = &o.witness {
                out.push_str(&format!(" witness: {w}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("summary: {passed} passed, {failed} failed\n"));
        out
    };
    Ok(CmdOutput {
        stdout,
        exit_code: if failed > 0 { 1 } else { 0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "2\n1 1 +\n1 2 +\n2 1 -\n";

    #[test]
    fn analyze_reports_the_running_example() {
        let out = cmd_analyze(
            "example",
            EXAMPLE,
            AnalyzeOptions {
                exp_only: false,
                json: true,
            },
        )
        .unwrap();
        assert_eq!(out.exit_code, 0);
        assert!(out.stdout.contains("\"global\": 4"));
    }

    #[test]
    fn analyze_exit_codes() {
        let err = cmd_analyze("bad", "2\n1 2 *\n", AnalyzeOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let err = cmd_analyze(
            "four-cycle",
            "4\n1 2 +\n2 3 +\n3 4 +\n4 1 +\n",
            AnalyzeOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("gcd of cycle lengths = 4"));
        let err = cmd_analyze(
            "powerful",
            "2\n1 1 +\n1 2 +\n2 1 +\n",
            AnalyzeOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 3);
        // --exp-only sidesteps the powerful failure
        let out = cmd_analyze(
            "powerful",
            "2\n1 1 +\n1 2 +\n2 1 +\n",
            AnalyzeOptions {
                exp_only: true,
                json: false,
            },
        )
        .unwrap();
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn family_command_round_trips_through_analyze() {
        let opts = FamilyOptions {
            name: "dki".to_string(),
            n: 7,
            k: Some(2),
            i: Some(1),
            preset: Some("same-sign".to_string()),
            json: true,
            ..FamilyOptions::default()
        };
        let out = cmd_family(&opts).unwrap();
        let payload: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(payload["report"]["bases"]["global"], 67);
        let edge_list = payload["edge_list"].as_str().unwrap();
        let reparsed = cmd_analyze(
            "reparsed",
            edge_list,
            AnalyzeOptions {
                exp_only: false,
                json: true,
            },
        )
        .unwrap();
        let reparsed_payload: serde_json::Value = serde_json::from_str(&reparsed.stdout).unwrap();
        let mut a = payload["report"].clone();
        let mut b = reparsed_payload.clone();
        a.as_object_mut().unwrap().remove("input");
        b.as_object_mut().unwrap().remove("input");
        assert_eq!(a, b);
    }

    #[test]
    fn family_range_errors_name_the_rule() {
        let opts = FamilyOptions {
            name: "script-l".to_string(),
            n: 8,
            ..FamilyOptions::default()
        };
        let err = cmd_family(&opts).unwrap_err();
        assert!(err.to_string().contains("odd n >= 7"), "{err}");
    }

    #[test]
    fn verify_exponents_small_range_passes() {
        let out = cmd_verify(&VerifyOptions {
            suite: "exponents".to_string(),
            n: Some("6..7".to_string()),
            ..VerifyOptions::default()
        })
        .unwrap();
        assert_eq!(out.exit_code, 0);
        assert!(out.stdout.contains("summary:"));
        assert!(!out.stdout.contains("FAIL"));
    }

    #[test]
    fn verify_rejects_bad_ranges() {
        assert!(parse_order_range("6..12").unwrap().len() == 7);
        assert!(parse_order_range("14").unwrap() == vec![14]);
        assert!(parse_order_range("x").is_err());
        assert!(parse_order_range("9..6").is_err());
        let err = cmd_verify(&VerifyOptions {
            suite: "gaps".to_string(),
            n: Some("12".to_string()),
            ..VerifyOptions::default()
        })
        .unwrap_err();
        assert!(err.to_string().contains("n >= 14"));
    }
}
