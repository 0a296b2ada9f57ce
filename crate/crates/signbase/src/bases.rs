//! Local and global bases of primitive nonpowerful signed digraphs.
//!
//! The engine streams sign-semiring powers of the adjacency sign matrix. A
//! `#` at entry (u, v) of the t-th power says a pair of SSSD walks of length
//! t runs from u to v; the local base l(u, v) is the first time from which
//! every later power keeps `#` there. Since a `#` entry can revert to a pure
//! sign before the matrix finally stabilises all-`#`, the engine records the
//! full history of non-`#` times rather than first-`#` times.
//!
//! An explicit depth-first walk enumeration (`sssd_oracle`) provides the
//! independent ground truth the engine is tested against.

use thiserror::Error;

use crate::digraph::{CycleCatalog, DigraphError, SignedDigraph, DEFAULT_CYCLE_CAP};
use crate::sign::Sign;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("digraph is not primitive: {reason}")]
    NotPrimitive { reason: String },
    #[error("sign pattern is powerful: no SSSD walk pair exists at any length")]
    Powerful,
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error("semiring power iteration passed {cap} steps without stabilising; engine fault")]
    PowerCapExceeded { cap: u64 },
    #[error("walk enumeration budget of {budget} node visits exceeded")]
    BudgetExceeded { budget: u64 },
}

/// Default node-visit budget for the walk-enumeration oracle.
pub const DEFAULT_WALK_BUDGET: u64 = 50_000_000;

/// Iteration ceiling for the base power stream; above every family value
/// with slack.
pub fn power_cap(n: usize) -> u64 {
    (3 * n * n + 2 * n + 5) as u64
}

/// From this time on, an ambiguity-free power of a primitive pattern proves
/// powerfulness: a distinguished cycle pair would have produced an SSSD pair
/// of length at most p1*p2 + d(u,v) <= n^2 + n - 1, and a `#` entry somewhere
/// in the matrix persists at every later time.
pub fn powerful_detection_threshold(n: usize) -> u64 {
    (n * n + n) as u64
}

/// Outcome of streaming semiring powers until all-`#` or a powerfulness proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilization {
    /// First time t at which the t-th power is all-`#` (absorbing).
    AllAmbiguousAt(u64),
    /// An ambiguity-free all-nonzero power at or past the detection
    /// threshold: the pattern is powerful.
    Powerful,
}

/// Raw stabilisation probe; assumes the digraph is primitive but makes no
/// use of cycle information.
pub fn stabilization(s: &SignedDigraph) -> Result<Stabilization, BaseError> {
    let n = s.order();
    let a = s.adjacency_sign();
    let cap = power_cap(n);
    let threshold = powerful_detection_threshold(n);
    let mut power = a.clone();
    let mut t = 1u64;
    loop {
        if power.is_all_ambiguous() {
            return Ok(Stabilization::AllAmbiguousAt(t));
        }
        if t >= threshold && power.is_ambiguity_free() && power.is_all_nonzero() {
            return Ok(Stabilization::Powerful);
        }
        t += 1;
        if t > cap {
            return Err(BaseError::PowerCapExceeded { cap });
        }
        power = power.mul(&a).expect("square powers");
    }
}

/// Pairwise, per-vertex, ordered and global local bases together with the
/// first all-`#` time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseReport {
    pub pairwise: Vec<Vec<u64>>,
    pub per_vertex: Vec<u64>,
    pub ordered: Vec<u64>,
    pub global: u64,
    pub stabilization_time: u64,
}

impl BaseReport {
    pub fn compute(s: &SignedDigraph) -> Result<BaseReport, BaseError> {
        let cat = s.cycle_catalog(DEFAULT_CYCLE_CAP)?;
        BaseReport::compute_with(s, &cat)
    }

    pub fn compute_with(s: &SignedDigraph, cat: &CycleCatalog) -> Result<BaseReport, BaseError> {
        if !s.is_primitive_with(cat) {
            return Err(BaseError::NotPrimitive {
                reason: s.non_primitive_reason(cat),
            });
        }
        if cat.find_distinguished_pair().is_none() {
            return Err(BaseError::Powerful);
        }
        let n = s.order();
        let a = s.adjacency_sign();
        let cap = power_cap(n);
        let mut last_non_hash = vec![vec![0u64; n]; n];
        let mut power = a.clone();
        let mut t = 1u64;
        let stabilization_time = loop {
            for (i, row) in last_non_hash.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    if power.get(i, j) != Sign::Ambiguous {
                        *cell = t;
                    }
                }
            }
            if power.is_all_ambiguous() {
                break t;
            }
            t += 1;
            if t > cap {
                return Err(BaseError::PowerCapExceeded { cap });
            }
            power = power.mul(&a).expect("square powers");
        };
        let pairwise: Vec<Vec<u64>> = last_non_hash
            .into_iter()
            .map(|row| row.into_iter().map(|z| z + 1).collect())
            .collect();
        let per_vertex: Vec<u64> = pairwise
            .iter()
            .map(|row| *row.iter().max().expect("n >= 1"))
            .collect();
        let mut ordered = per_vertex.clone();
        ordered.sort_unstable();
        let global = *ordered.last().expect("n >= 1");
        Ok(BaseReport {
            pairwise,
            per_vertex,
            ordered,
            global,
            stabilization_time,
        })
    }

    /// l(v_u, v_v), 1-based.
    pub fn pair(&self, u: usize, v: usize) -> u64 {
        self.pairwise[u - 1][v - 1]
    }

    /// l(v_m), 1-based.
    pub fn at_vertex(&self, m: usize) -> u64 {
        self.per_vertex[m - 1]
    }

    /// l(k): the k-th smallest per-vertex local base, 1-based.
    pub fn ordered_stat(&self, k: usize) -> u64 {
        self.ordered[k - 1]
    }
}

/// Sign summaries of all walks from a fixed start vertex, per endpoint and
/// length, built by explicit walk enumeration.
pub struct WalkSignTable {
    n: usize,
    t_max: u64,
    masks: Vec<u8>,
}

impl WalkSignTable {
    /// Sign summary of all length-t walks from the table's start vertex to v.
    pub fn sign(&self, v: usize, t: u64) -> Sign {
        Sign::from_bits(self.masks[(v - 1) * (self.t_max as usize + 1) + t as usize])
    }

    pub fn walk_exists(&self, v: usize, t: u64) -> bool {
        self.sign(v, t) != Sign::Zero
    }

    pub fn horizon(&self) -> u64 {
        self.t_max
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

/// Enumerate every walk of length at most `t_max` from `u`, recording at each
/// endpoint/length the set of walk signs seen. Each node visit costs one unit
/// of budget.
pub fn walk_sign_table(
    s: &SignedDigraph,
    u: usize,
    t_max: u64,
    budget: u64,
) -> Result<WalkSignTable, BaseError> {
    let n = s.order();
    let mut masks = vec![0u8; n * (t_max as usize + 1)];
    let mut spent = 0u64;
    // iterative DFS over the walk tree: (vertex, depth, negative?)
    let mut stack: Vec<(usize, u64, bool)> = vec![(u, 0, false)];
    while let Some((v, depth, negative)) = stack.pop() {
        spent += 1;
        if spent > budget {
            return Err(BaseError::BudgetExceeded { budget });
        }
        masks[(v - 1) * (t_max as usize + 1) + depth as usize] |=
            if negative { 0b10 } else { 0b01 };
        if depth == t_max {
            continue;
        }
        for &(w, sign) in s.out_neighbors(v) {
            stack.push((w, depth + 1, negative ^ (sign == crate::digraph::ArcSign::Minus)));
        }
    }
    Ok(WalkSignTable { n, t_max, masks })
}

/// Ground truth for one entry: the sign summary (0 / + / - / #) of all
/// length-t walks from u to v, by exhaustive enumeration.
pub fn sssd_oracle(
    s: &SignedDigraph,
    u: usize,
    v: usize,
    t: u64,
    budget: u64,
) -> Result<Sign, BaseError> {
    let table = walk_sign_table(s, u, t, budget)?;
    Ok(table.sign(v, t))
}

/// Least r such that a pair of SSSD closed walks of length r exists at `u`,
/// i.e. the first time the (u, u) entry of the power stream is `#`. Assumes a
/// primitive nonpowerful input.
pub fn closed_sssd_time(s: &SignedDigraph, u: usize) -> Result<u64, BaseError> {
    let a = s.adjacency_sign();
    let cap = power_cap(s.order());
    let mut power = a.clone();
    let mut t = 1u64;
    loop {
        if power.get(u - 1, u - 1) == Sign::Ambiguous {
            return Ok(t);
        }
        t += 1;
        if t > cap {
            return Err(BaseError::PowerCapExceeded { cap });
        }
        power = power.mul(&a).expect("square powers");
    }
}

/// Closed SSSD times for every vertex in one stream.
pub fn closed_sssd_times(s: &SignedDigraph) -> Result<Vec<u64>, BaseError> {
    let n = s.order();
    let a = s.adjacency_sign();
    let cap = power_cap(n);
    let mut times = vec![0u64; n];
    let mut missing = n;
    let mut power = a.clone();
    let mut t = 1u64;
    loop {
        for (i, slot) in times.iter_mut().enumerate() {
            if *slot == 0 && power.get(i, i) == Sign::Ambiguous {
                *slot = t;
                missing -= 1;
            }
        }
        if missing == 0 {
            return Ok(times);
        }
        t += 1;
        if t > cap {
            return Err(BaseError::PowerCapExceeded { cap });
        }
        power = power.mul(&a).expect("square powers");
    }
}
