//! Randomized structural invariants.

use proptest::prelude::*;

use tdl_core::canon::is_isomorphic;
use tdl_core::digraph::{blow_up, Digraph};
use tdl_core::structure::{non_crossing_count, RPartition};
use tdl_core::weight::{weighted_size, WeightParam};

fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let bits = prop::collection::vec(any::<bool>(), n * n);
            (Just(n), bits)
        })
        .prop_map(|(n, bits)| {
            let mut g = Digraph::empty(n);
            for u in 0..n {
                for v in 0..n {
                    if u != v && bits[u * n + v] {
                        g.add_arc(u, v);
                    }
                }
            }
            g
        })
}

proptest! {
    #[test]
    fn serialization_round_trips(g in arb_digraph(12)) {
        let line = g.to_line();
        let back = Digraph::parse_line(&line).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn arc_count_identity(g in arb_digraph(10)) {
        let (f1, f2) = g.pair_counts();
        prop_assert_eq!(g.arc_count(), f1 + 2 * f2);
        let a2 = WeightParam::digraph_counting();
        prop_assert_eq!(weighted_size(&g, &a2), g.arc_count() as f64);
    }

    #[test]
    fn unit_blow_up_is_identity(g in arb_digraph(6)) {
        prop_assert!(is_isomorphic(&blow_up(&g, 1).unwrap(), &g));
    }

    #[test]
    fn partition_splits_arcs(g in arb_digraph(8), r in 1usize..4) {
        let assign: Vec<usize> = (0..g.n()).map(|v| v % r).collect();
        let q = RPartition::from_assignment(&assign, r).unwrap();
        let nc = non_crossing_count(&g, &q).unwrap();
        let crossing = g.arcs().filter(|&(u, v)| assign[u] != assign[v]).count();
        prop_assert_eq!(nc + crossing, g.arc_count());
    }
}
