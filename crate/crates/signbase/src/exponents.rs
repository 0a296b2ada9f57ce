//! Local and global primitive exponents, reach sets, C(S)-walk distances,
//! Frobenius numbers, and the distance-plus-Frobenius exponent upper bound.

use std::collections::{BTreeSet, VecDeque};

use num_integer::gcd;
use thiserror::Error;

use crate::digraph::{CycleCatalog, DigraphError, SignedDigraph, DEFAULT_CYCLE_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExponentError {
    #[error("digraph is not primitive: {reason}")]
    NotPrimitive { reason: String },
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error("boolean power iteration passed {cap} steps without an all-ones power; engine fault")]
    PowerCapExceeded { cap: u64 },
    #[error("frobenius number is defined only for sets with gcd 1, got gcd {gcd}")]
    NonCoprime { gcd: u64 },
    #[error("frobenius number needs a nonempty set of positive integers")]
    BadSet,
    #[error("{count} distinct cycle lengths exceed the C(S)-walk state-space limit of {limit}")]
    TooManyLengths { count: usize, limit: usize },
}

/// Largest number of distinct cycle lengths the C(S)-walk search will track
/// (the state space is n * 2^count).
pub const MAX_CWALK_LENGTHS: usize = 24;

/// Frobenius number of a set of positive integers with gcd 1: the least m
/// such that every integer >= m is a nonnegative combination of the set.
/// Zero when 1 is in the set; for a coprime pair {a, b} this equals
/// (a-1)(b-1).
pub fn frobenius(values: &[u64]) -> Result<u64, ExponentError> {
    let set: BTreeSet<u64> = values.iter().copied().collect();
    if set.is_empty() || set.contains(&0) {
        return Err(ExponentError::BadSet);
    }
    let g = set.iter().fold(0u64, |acc, &v| gcd(acc, v));
    if g != 1 {
        return Err(ExponentError::NonCoprime { gcd: g });
    }
    let min = *set.first().expect("nonempty");
    if min == 1 {
        return Ok(0);
    }
    let max = *set.last().expect("nonempty");
    // sieve upward; once `min` consecutive integers are representable, every
    // larger integer is too
    let limit = (2 * max * max + max + min + 2) as usize;
    let mut representable = vec![false; limit + 1];
    representable[0] = true;
    let mut run = 0u64;
    let mut last_gap = 0usize;
    for x in 1..=limit {
        let ok = set
            .iter()
            .take_while(|&&s| s as usize <= x)
            .any(|&s| representable[x - s as usize]);
        representable[x] = ok;
        if ok {
            run += 1;
            if run >= min {
                return Ok(last_gap as u64 + 1);
            }
        } else {
            run = 0;
            last_gap = x;
        }
    }
    unreachable!("gcd 1 guarantees a run of `min` representable integers below the sieve limit")
}

/// R_k(v): endpoints of length-k walks from v. R_0(v) = {v}.
pub fn reach_set(s: &SignedDigraph, v: usize, k: u64) -> BTreeSet<usize> {
    let b = s.adjacency_bool();
    let words = b.words_per_row();
    let mut cur = vec![0u64; words];
    cur[(v - 1) / 64] |= 1u64 << ((v - 1) % 64);
    let mut next = vec![0u64; words];
    for _ in 0..k {
        b.advance_set(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    let mut out = BTreeSet::new();
    for (wi, &word) in cur.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out.insert(wi * 64 + b + 1);
        }
    }
    out
}

fn check_primitive(s: &SignedDigraph, cat: &CycleCatalog) -> Result<(), ExponentError> {
    if !s.is_primitive_with(cat) {
        return Err(ExponentError::NotPrimitive {
            reason: s.non_primitive_reason(cat),
        });
    }
    Ok(())
}

/// Pairwise, per-vertex, ordered and global local primitive exponents.
///
/// `pairwise` holds exp(v_i, v_j): the least k such that walks of every
/// length t >= k exist from v_i to v_j. Computed by streaming boolean powers
/// until the absorbing all-ones power, recording per entry the last time a
/// zero was seen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentReport {
    pub pairwise: Vec<Vec<u64>>,
    pub per_vertex: Vec<u64>,
    pub ordered: Vec<u64>,
    pub global: u64,
}

impl ExponentReport {
    pub fn compute(s: &SignedDigraph) -> Result<ExponentReport, ExponentError> {
        let cat = s.cycle_catalog(DEFAULT_CYCLE_CAP)?;
        ExponentReport::compute_with(s, &cat)
    }

    pub fn compute_with(
        s: &SignedDigraph,
        cat: &CycleCatalog,
    ) -> Result<ExponentReport, ExponentError> {
        check_primitive(s, cat)?;
        let n = s.order();
        let b = s.adjacency_bool();
        let cap = ((n as u64) - 1).pow(2) + 2;
        let mut last_zero = vec![vec![0u64; n]; n];
        let mut power = b.clone();
        let mut t = 1u64;
        loop {
            for (i, row) in last_zero.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    if !power.get(i, j) {
                        *cell = t;
                    }
                }
            }
            if power.is_all_ones() {
                break;
            }
            t += 1;
            if t > cap {
                return Err(ExponentError::PowerCapExceeded { cap });
            }
            power = power.mul(&b);
        }
        let pairwise: Vec<Vec<u64>> = last_zero
            .into_iter()
            .map(|row| row.into_iter().map(|z| z + 1).collect())
            .collect();
        Ok(ExponentReport::from_pairwise(pairwise))
    }

    pub(crate) fn from_pairwise(pairwise: Vec<Vec<u64>>) -> ExponentReport {
        let per_vertex: Vec<u64> = pairwise
            .iter()
            .map(|row| *row.iter().max().expect("n >= 1"))
            .collect();
        let mut ordered = per_vertex.clone();
        ordered.sort_unstable();
        let global = *ordered.last().expect("n >= 1");
        ExponentReport {
            pairwise,
            per_vertex,
            ordered,
            global,
        }
    }

    /// exp(v_u, v_v), 1-based vertices.
    pub fn pair(&self, u: usize, v: usize) -> u64 {
        self.pairwise[u - 1][v - 1]
    }

    /// exp(v_m), 1-based.
    pub fn at_vertex(&self, m: usize) -> u64 {
        self.per_vertex[m - 1]
    }

    /// exp(k): the k-th smallest per-vertex exponent, 1-based.
    pub fn ordered_stat(&self, k: usize) -> u64 {
        self.ordered[k - 1]
    }
}

/// C(S)-walk distances: the shortest walk from u to v that meets at least one
/// cycle of every length in C(S). Length-0 walks are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CWalkReport {
    pub pairwise: Vec<Vec<u64>>,
    pub eccentricities: Vec<u64>,
    pub ordered: Vec<u64>,
    pub global: u64,
}

impl CWalkReport {
    pub fn compute_with(s: &SignedDigraph, cat: &CycleCatalog) -> Result<CWalkReport, ExponentError> {
        check_primitive(s, cat)?;
        let n = s.order();
        let lengths = cat.lengths_vec();
        if lengths.len() > MAX_CWALK_LENGTHS {
            return Err(ExponentError::TooManyLengths {
                count: lengths.len(),
                limit: MAX_CWALK_LENGTHS,
            });
        }
        let full: u32 = (1u32 << lengths.len()) - 1;
        let length_index = |len: usize| lengths.iter().position(|&l| l == len).expect("present");
        let mut member_mask = vec![0u32; n + 1];
        for (v, mask) in member_mask.iter_mut().enumerate().skip(1) {
            for &len in cat.vertex_lengths(v) {
                *mask |= 1 << length_index(len);
            }
        }

        let states = n * (full as usize + 1);
        let state = |v: usize, mask: u32| (v - 1) * (full as usize + 1) + mask as usize;
        let mut pairwise = vec![vec![0u64; n]; n];
        let mut dist = vec![u64::MAX; states];
        let mut queue = VecDeque::new();
        for u in 1..=n {
            dist.iter_mut().for_each(|d| *d = u64::MAX);
            queue.clear();
            let start = state(u, member_mask[u]);
            dist[start] = 0;
            queue.push_back((u, member_mask[u]));
            while let Some((v, mask)) = queue.pop_front() {
                let d = dist[state(v, mask)];
                for &(w, _) in s.out_neighbors(v) {
                    let next_mask = mask | member_mask[w];
                    let idx = state(w, next_mask);
                    if dist[idx] == u64::MAX {
                        dist[idx] = d + 1;
                        queue.push_back((w, next_mask));
                    }
                }
            }
            for v in 1..=n {
                let d = dist[state(v, full)];
                if d == u64::MAX {
                    // unreachable for primitive digraphs
                    return Err(ExponentError::NotPrimitive {
                        reason: format!("no C(S)-walk from {u} to {v}"),
                    });
                }
                pairwise[u - 1][v - 1] = d;
            }
        }
        let eccentricities: Vec<u64> = pairwise
            .iter()
            .map(|row| *row.iter().max().expect("n >= 1"))
            .collect();
        let mut ordered = eccentricities.clone();
        ordered.sort_unstable();
        let global = *ordered.last().expect("n >= 1");
        Ok(CWalkReport {
            pairwise,
            eccentricities,
            ordered,
            global,
        })
    }

    pub fn pair(&self, u: usize, v: usize) -> u64 {
        self.pairwise[u - 1][v - 1]
    }

    pub fn eccentricity(&self, v: usize) -> u64 {
        self.eccentricities[v - 1]
    }

    pub fn ordered_stat(&self, k: usize) -> u64 {
        self.ordered[k - 1]
    }
}

/// Entrywise exponent upper bound: d_{C(S)}(u, v) + frobenius(C(S)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperBoundReport {
    pub frobenius: u64,
    pub pairwise: Vec<Vec<u64>>,
    pub global: u64,
}

impl UpperBoundReport {
    pub fn compute_with(
        s: &SignedDigraph,
        cat: &CycleCatalog,
    ) -> Result<UpperBoundReport, ExponentError> {
        let cwalk = CWalkReport::compute_with(s, cat)?;
        let lengths: Vec<u64> = cat.lengths_vec().iter().map(|&l| l as u64).collect();
        let phi = frobenius(&lengths)?;
        let pairwise: Vec<Vec<u64>> = cwalk
            .pairwise
            .iter()
            .map(|row| row.iter().map(|&d| d + phi).collect())
            .collect();
        let global = cwalk.global + phi;
        Ok(UpperBoundReport {
            frobenius: phi,
            pairwise,
            global,
        })
    }

    pub fn pair(&self, u: usize, v: usize) -> u64 {
        self.pairwise[u - 1][v - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::ArcSign;
    use crate::families::{FamilyName, FamilySpec, SignPolicy};

    fn plus(n: usize, arcs: &[(usize, usize)]) -> SignedDigraph {
        SignedDigraph::new(n, arcs.iter().map(|&(u, v)| (u, v, ArcSign::Plus))).unwrap()
    }

    fn two_vertex_example() -> SignedDigraph {
        SignedDigraph::new(
            2,
            [
                (1, 1, ArcSign::Plus),
                (1, 2, ArcSign::Plus),
                (2, 1, ArcSign::Minus),
            ],
        )
        .unwrap()
    }

    fn family(name: FamilyName, n: usize, k: Option<usize>, i: Option<usize>) -> SignedDigraph {
        FamilySpec {
            family: name,
            n,
            k,
            i,
            sign_policy: SignPolicy::AllPositive,
        }
        .generate()
        .unwrap()
    }

    #[test]
    fn frobenius_pairs_and_triples() {
        assert_eq!(frobenius(&[3, 5]).unwrap(), 8);
        assert_eq!(frobenius(&[1, 7]).unwrap(), 0);
        assert_eq!(frobenius(&[4, 6, 9]).unwrap(), 12);
        assert_eq!(frobenius(&[6, 10, 15]).unwrap(), 30);
        assert_eq!(
            frobenius(&[4, 6]).unwrap_err(),
            ExponentError::NonCoprime { gcd: 2 }
        );
        assert!(frobenius(&[]).is_err());
    }

    #[test]
    fn frobenius_pair_formula() {
        // coprime pair formula (a-1)(b-1)
        for a in 2u64..=12 {
            for b in (a + 1)..=13 {
                if gcd(a, b) == 1 {
                    assert_eq!(frobenius(&[a, b]).unwrap(), (a - 1) * (b - 1), "{a},{b}");
                }
            }
        }
    }

    #[test]
    fn frobenius_sieve_witnesses() {
        // {4, 6, 9}: 11 is the largest non-representable integer
        let representable = |x: u64| -> bool {
            let mut reach = vec![false; (x + 1) as usize];
            reach[0] = true;
            for y in 1..=x as usize {
                for s in [4usize, 6, 9] {
                    if y >= s && reach[y - s] {
                        reach[y] = true;
                    }
                }
            }
            reach[x as usize]
        };
        for x in [1u64, 2, 3, 5, 7, 11] {
            assert!(!representable(x));
        }
        for x in 12u64..=40 {
            assert!(representable(x));
        }
    }

    #[test]
    fn reach_sets() {
        let cycle = plus(3, &[(1, 2), (2, 3), (3, 1)]);
        assert_eq!(reach_set(&cycle, 1, 1), BTreeSet::from([2]));
        assert_eq!(reach_set(&cycle, 2, 0), BTreeSet::from([2]));
        // D_{2,1} at n=7: R_6(v_1) contains {v_7, v_5, v_2}
        let dki = family(FamilyName::Dki, 7, Some(2), Some(1));
        let r6 = reach_set(&dki, 1, 6);
        assert!(r6.is_superset(&BTreeSet::from([7, 5, 2])), "R_6 = {r6:?}");
    }

    #[test]
    fn exponent_report_two_vertex_example() {
        let s = two_vertex_example();
        let rep = ExponentReport::compute(&s).unwrap();
        assert_eq!(rep.at_vertex(1), 1);
        assert_eq!(rep.at_vertex(2), 2);
        assert_eq!(rep.global, 2);
        assert_eq!(rep.ordered, vec![1, 2]);
    }

    #[test]
    fn exponent_report_rejects_non_primitive() {
        let four = plus(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert!(matches!(
            ExponentReport::compute(&four),
            Err(ExponentError::NotPrimitive { .. })
        ));
    }

    #[test]
    fn dki_exponents_match_closed_form() {
        // exp(m) = (n-2)(n-k) + 1 - i + m
        let n = 7;
        let (k, i) = (2, 1);
        let s = family(FamilyName::Dki, n, Some(k), Some(i));
        let rep = ExponentReport::compute(&s).unwrap();
        for m in 1..=n {
            let expected = ((n - 2) * (n - k) + 1 - i + m) as u64;
            assert_eq!(rep.ordered_stat(m), expected, "m={m}");
            assert_eq!(rep.at_vertex(m), expected, "v_{m}");
        }
        assert_eq!(rep.global, 32);
    }

    #[test]
    fn d1_has_wielandt_exponent() {
        let n = 6;
        let s = family(FamilyName::D1, n, None, None);
        let rep = ExponentReport::compute(&s).unwrap();
        assert_eq!(rep.global, (n * n - 2 * n + 2) as u64);
    }

    /// Persistence bookkeeping against explicit walk enumeration: exp(u,v) is
    /// the first time from which walks of every length exist.
    #[test]
    fn exponent_matches_walk_enumeration_window() {
        let samples = [
            two_vertex_example(),
            plus(3, &[(1, 1), (1, 2), (2, 3), (3, 1)]),
            plus(4, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]),
        ];
        for s in samples {
            let n = s.order();
            let rep = ExponentReport::compute(&s).unwrap();
            let horizon = 2 * rep.global + 4;
            // walks[t][u][v] = a walk of length t exists
            let b = s.adjacency_bool();
            let mut walks = vec![];
            let mut p = b.clone();
            for _ in 0..horizon {
                walks.push(p.clone());
                p = p.mul(&b);
            }
            for u in 1..=n {
                for v in 1..=n {
                    let e = rep.pair(u, v);
                    for t in e..=horizon {
                        assert!(walks[(t - 1) as usize].get(u - 1, v - 1), "({u},{v}) t={t}");
                    }
                    if e >= 2 {
                        assert!(
                            !walks[(e - 2) as usize].get(u - 1, v - 1),
                            "({u},{v}) should miss a walk at {}",
                            e - 1
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cwalk_two_vertex_example() {
        let s = two_vertex_example();
        let cat = s.cycle_catalog(100).unwrap();
        let rep = CWalkReport::compute_with(&s, &cat).unwrap();
        assert_eq!(rep.pair(1, 1), 0);
        assert_eq!(rep.pair(2, 2), 2);
        assert_eq!(rep.global, 2);
    }

    #[test]
    fn cwalk_dki_formula() {
        // for i-1 < k: d(C) = d_C(v_n, v_{n-k+i}) = n + k - i
        for (n, k, i) in [(7usize, 2usize, 1usize), (8, 3, 2), (9, 2, 2)] {
            let s = family(FamilyName::Dki, n, Some(k), Some(i));
            let cat = s.cycle_catalog(1000).unwrap();
            let rep = CWalkReport::compute_with(&s, &cat).unwrap();
            let expected = (n + k - i) as u64;
            assert_eq!(rep.pair(n, n - k + i), expected, "n={n} k={k} i={i}");
            assert_eq!(rep.global, expected, "n={n} k={k} i={i}");
        }
    }

    #[test]
    fn cwalk_f_family_diameter() {
        // d(C(F)) = d_C(v_n, v_{n-1}) = n
        for n in 6usize..=9 {
            let s = family(FamilyName::F, n, None, None);
            let cat = s.cycle_catalog(1000).unwrap();
            let rep = CWalkReport::compute_with(&s, &cat).unwrap();
            assert_eq!(rep.pair(n, n - 1), n as u64);
            assert_eq!(rep.global, n as u64);
        }
    }

    #[test]
    fn upper_bound_examples() {
        let s = two_vertex_example();
        let cat = s.cycle_catalog(100).unwrap();
        let bound = UpperBoundReport::compute_with(&s, &cat).unwrap();
        assert_eq!(bound.frobenius, 0);
        assert_eq!(bound.global, 2);
        let exp = ExponentReport::compute_with(&s, &cat).unwrap();
        assert_eq!(exp.global, bound.global);

        // D_{k,i} with i-1 < k: global bound = n+k-i + (n-1)(n-k-1)
        let (n, k, i) = (7usize, 2usize, 1usize);
        let dki = family(FamilyName::Dki, n, Some(k), Some(i));
        let cat = dki.cycle_catalog(1000).unwrap();
        let bound = UpperBoundReport::compute_with(&dki, &cat).unwrap();
        assert_eq!(bound.global, (n + k - i + (n - 1) * (n - k - 1)) as u64);

        // a loop collapses the frobenius part entirely
        let loopy = two_vertex_example();
        let cat = loopy.cycle_catalog(100).unwrap();
        let cwalk = CWalkReport::compute_with(&loopy, &cat).unwrap();
        let bound = UpperBoundReport::compute_with(&loopy, &cat).unwrap();
        assert_eq!(bound.pairwise, cwalk.pairwise);
    }

    #[test]
    fn exponent_below_bound_on_families() {
        for (n, k, i) in [(6usize, 1usize, 1usize), (7, 2, 1), (8, 3, 2), (9, 4, 3)] {
            let s = family(FamilyName::Dki, n, Some(k), Some(i));
            let cat = s.cycle_catalog(1000).unwrap();
            let exp = ExponentReport::compute_with(&s, &cat).unwrap();
            let bound = UpperBoundReport::compute_with(&s, &cat).unwrap();
            for u in 1..=n {
                for v in 1..=n {
                    assert!(exp.pair(u, v) <= bound.pair(u, v), "({u},{v}) n={n}");
                }
            }
        }
    }
}
