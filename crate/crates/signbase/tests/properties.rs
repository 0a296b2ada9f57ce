//! Property tests over randomly generated digraphs and matrices.

use proptest::prelude::*;

use signbase::bases::BaseReport;
use signbase::digraph::{ArcSign, SignedDigraph};
use signbase::exponents::ExponentReport;
use signbase::sign::{Sign, SignMatrix};
use signbase::verify::sample_primitive_nonpowerful;

fn arbitrary_digraph(max_n: usize) -> impl Strategy<Value = SignedDigraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * n;
            (Just(n), prop::collection::vec(0u8..3, pairs))
        })
        .prop_map(|(n, cells)| {
            let arcs = cells.iter().enumerate().filter_map(|(idx, &c)| {
                let (u, v) = (idx / n + 1, idx % n + 1);
                match c {
                    1 => Some((u, v, ArcSign::Plus)),
                    2 => Some((u, v, ArcSign::Minus)),
                    _ => None,
                }
            });
            SignedDigraph::new(n, arcs).expect("cells stay in range")
        })
}

fn arbitrary_sign_matrix(n: usize) -> impl Strategy<Value = SignMatrix> {
    prop::collection::vec(0u8..4, n * n).prop_map(move |cells| {
        let mut m = SignMatrix::zero(n);
        for (idx, &c) in cells.iter().enumerate() {
            m.set(idx / n, idx % n, Sign::from_bits(c));
        }
        m
    })
}

proptest! {
    #[test]
    fn edge_list_round_trips(g in arbitrary_digraph(6)) {
        let text = g.to_edge_list();
        let reparsed = SignedDigraph::parse(&text).unwrap();
        prop_assert_eq!(g, reparsed);
    }

    #[test]
    fn cataloged_cycles_are_simple_arcs_with_correct_signs(g in arbitrary_digraph(5)) {
        let cat = g.cycle_catalog(1_000_000).unwrap();
        for c in cat.cycles() {
            // vertex-simple, minimal vertex first
            let mut sorted = c.vertices.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), c.vertices.len());
            prop_assert_eq!(*c.vertices.iter().min().unwrap(), c.vertices[0]);
            // re-multiplying the arc signs reproduces the stored sign
            prop_assert_eq!(g.cycle_sign(&c.vertices), Some(c.sign));
        }
    }

    #[test]
    fn matrix_product_is_associative(
        (a, b, c) in (1usize..=5).prop_flat_map(|n| {
            (arbitrary_sign_matrix(n), arbitrary_sign_matrix(n), arbitrary_sign_matrix(n))
        })
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reports_are_invariant_under_relabelling(seed in 0u64..500, n in 4usize..=7) {
        let Some(g) = sample_primitive_nonpowerful(n, seed, 0) else {
            return Ok(());
        };
        // permute labels by a rotation
        let perm: Vec<usize> = (0..n).map(|v| (v + 1) % n + 1).collect();
        let relabelled = SignedDigraph::new(
            n,
            g.arcs().iter().map(|a| (perm[a.from - 1], perm[a.to - 1], a.sign)),
        )
        .unwrap();
        let exp_a = ExponentReport::compute(&g).unwrap();
        let exp_b = ExponentReport::compute(&relabelled).unwrap();
        prop_assert_eq!(exp_a.ordered, exp_b.ordered);
        let base_a = BaseReport::compute(&g).unwrap();
        let base_b = BaseReport::compute(&relabelled).unwrap();
        prop_assert_eq!(base_a.ordered, base_b.ordered);
        prop_assert_eq!(base_a.stabilization_time, base_b.stabilization_time);
    }

    #[test]
    fn report_shape_invariants(seed in 0u64..300, n in 3usize..=8) {
        let Some(g) = sample_primitive_nonpowerful(n, seed, 1) else {
            return Ok(());
        };
        let exp = ExponentReport::compute(&g).unwrap();
        let base = BaseReport::compute(&g).unwrap();
        for (i, row) in exp.pairwise.iter().enumerate() {
            prop_assert_eq!(exp.per_vertex[i], *row.iter().max().unwrap());
        }
        let mut sorted = exp.per_vertex.clone();
        sorted.sort_unstable();
        prop_assert_eq!(&exp.ordered, &sorted);
        prop_assert_eq!(exp.global, *sorted.last().unwrap());

        prop_assert_eq!(base.global, base.stabilization_time);
        for (i, row) in base.pairwise.iter().enumerate() {
            prop_assert_eq!(base.per_vertex[i], *row.iter().max().unwrap());
            for &l in row {
                prop_assert!(l <= base.stabilization_time);
                // SSSD pairs presuppose walks
                prop_assert!(l >= 1);
            }
        }
        // pairwise base dominates pairwise exponent
        for u in 1..=n {
            for v in 1..=n {
                prop_assert!(base.pair(u, v) >= exp.pair(u, v));
            }
        }

        let cat = g.cycle_catalog(1_000_000).unwrap();
        let cwalk = signbase::exponents::CWalkReport::compute_with(&g, &cat).unwrap();
        for (i, row) in cwalk.pairwise.iter().enumerate() {
            prop_assert_eq!(cwalk.eccentricities[i], *row.iter().max().unwrap());
        }
        let mut ecc = cwalk.eccentricities.clone();
        ecc.sort_unstable();
        prop_assert_eq!(&cwalk.ordered, &ecc);
        prop_assert_eq!(cwalk.global, *ecc.last().unwrap());
    }
}
