mod common;

use blowup_core::models::find_rooted_tree_model;
use blowup_core::oracles::exact_treewidth;
use blowup_core::separator::{check_haven, find_separation, haven_oracle, menger, validate_separation, HavenResult};
use blowup_core::{Graph, RootedTree, VertexSet};
use common::gnp;
use proptest::prelude::*;

fn trees() -> Vec<Graph> {
    vec![Graph::path(2), Graph::path(3), Graph::path(4), Graph::star(3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn menger_paths_match_order(n in 2usize..=10, p in 10u64..60, seed in any::<u64>(), xm in any::<u16>(), ym in any::<u16>()) {
        let g = gnp(n, p, seed);
        let x: VertexSet = (0..n).filter(|v| xm >> v & 1 == 1).collect();
        let y: VertexSet = (0..n).filter(|v| ym >> v & 1 == 1).collect();
        prop_assume!(!x.is_empty() && !y.is_empty());
        let (sep, paths) = menger(&g, &x, &y).unwrap();
        prop_assert_eq!(sep.check(&g), Ok(()));
        prop_assert_eq!(paths.len(), sep.order());
        prop_assert!(x.is_subset(&sep.a) && y.is_subset(&sep.b));
    }

    #[test]
    fn havens_are_consistent(n in 1usize..=9, p in 20u64..80, seed in any::<u64>(), w in 1usize..=4) {
        let g = gnp(n, p, seed);
        let tw = exact_treewidth(&g).unwrap().value;
        match haven_oracle(&g, w).unwrap() {
            HavenResult::Haven(h) => {
                prop_assert!(tw >= w as i64);
                prop_assert_eq!(check_haven(&g, &h), Ok(()));
            }
            HavenResult::TreewidthTooSmall(d) => {
                prop_assert!(tw < w as i64);
                prop_assert!(d.width() < w as i64);
            }
        }
    }

    #[test]
    fn separations_exist_above_width(n in 2usize..=9, p in 30u64..90, seed in any::<u64>(), ti in 0usize..4) {
        let g = gnp(n, p, seed);
        let tree = &trees()[ti];
        prop_assume!(g.is_connected());
        prop_assume!(exact_treewidth(&g).unwrap().value >= tree.n() as i64);
        let (sep, m) = find_separation(&g, tree).unwrap();
        prop_assert_eq!(sep.order(), tree.n());
        prop_assert_eq!(validate_separation(&g, tree, &sep, &m), Ok(()));
        let t = RootedTree::from_edges(tree.n(), &tree.edges(), 0).unwrap();
        prop_assert!(find_rooted_tree_model(&g, &t, None, None, &VertexSet::new()).unwrap().is_some());
    }
}
