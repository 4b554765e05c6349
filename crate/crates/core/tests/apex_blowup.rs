mod common;

use blowup_core::apex_blowup::{apex_clique_size, decompose_apex_free, srooted_ppd};
use blowup_core::combine::Step;
use blowup_core::decomp::{check_kppd, verify_blowup};
use blowup_core::models::{check_model, find_apex_tree_model, find_rooted_tree_model};
use blowup_core::oracles::exact_treewidth;
use blowup_core::tree_blowup::BlowupOutcome;
use blowup_core::{Graph, RootedTree, VertexSet};
use common::gnp;
use proptest::prelude::*;

fn trees() -> Vec<Graph> {
    vec![
        Graph::path(2),
        Graph::path(3),
        Graph::path(4),
        Graph::star(3),
        Graph::path(5),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn apex_outcome_matches_oracle(n in 1usize..=9, p in 10u64..50, seed in any::<u64>(), ti in 0usize..5) {
        let g = gnp(n, p, seed);
        let tree = &trees()[ti];
        let t = RootedTree::rooted_at_center(tree.n(), &tree.edges()).unwrap();
        let free = find_apex_tree_model(&g, &t).unwrap().is_none();
        match decompose_apex_free(&g, tree).unwrap() {
            BlowupOutcome::Certificate(cert) => {
                let w = verify_blowup(&g, &cert).unwrap();
                let bound = 4 * t.height() as i64 - 1;
                prop_assert!(w.partition <= apex_clique_size(&t));
                prop_assert!(w.host <= bound);
                let q = cert.partition.quotient_graph(&g);
                prop_assert!(exact_treewidth(&q).unwrap().value <= bound);
                if free {
                    prop_assert!(exact_treewidth(&g).unwrap().value < tree.n() as i64);
                }
            }
            BlowupOutcome::Counterexample(m) => {
                prop_assert!(!free);
                prop_assert_eq!(check_model(&g, &t.plus_apex(), &m, None, None, &[]), Ok(()));
            }
        }
    }

    #[test]
    fn srooted_matches_oracle(n in 1usize..=9, p in 10u64..50, seed in any::<u64>(), smask in any::<u16>(), ti in 0usize..5) {
        let g = gnp(n, p, seed);
        let s: VertexSet = (0..n).filter(|v| smask >> v & 1 == 1).collect();
        let tree = &trees()[ti];
        let t = RootedTree::rooted_at_center(tree.n(), &tree.edges()).unwrap();
        let has = find_rooted_tree_model(&g, &t, Some(&s), None, &VertexSet::new()).unwrap().is_some();
        match srooted_ppd(&g, &s, &t).unwrap() {
            Step::Done(d) => {
                prop_assert_eq!(check_kppd(&g, &s, &d), Ok(()));
                prop_assert!(d.partition.width() <= apex_clique_size(&t));
                prop_assert!(d.width() < 2 * t.height() as i64);
            }
            Step::Minor(m) => {
                prop_assert!(has);
                prop_assert_eq!(check_model(&g, &t.as_graph(), &m, Some(&s), None, &[]), Ok(()));
            }
        }
    }
}
