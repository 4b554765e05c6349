mod common;

use blowup_core::models::{
    check_model, find_apex_tree_model, find_rooted_forest_model, find_rooted_tree_model, lift_model,
};
use blowup_core::{Graph, RootedForest, RootedTree, VertexSet};
use common::{brute_force_model, gnp};
use proptest::prelude::*;

fn small_trees() -> Vec<RootedTree> {
    vec![
        RootedTree::single(),
        RootedTree::path(2),
        RootedTree::path(3),
        RootedTree::path(4),
        RootedTree::star(3),
        RootedTree::from_edges(4, &[(0, 1), (1, 2), (1, 3)], 0).unwrap(),
        RootedTree::from_edges(5, &[(0, 1), (0, 2), (2, 3), (2, 4)], 0).unwrap(),
        RootedTree::star(4),
        RootedTree::path(5),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn tree_search_agrees_with_brute_force(
        n in 2usize..=7,
        p in 20u64..80,
        seed in any::<u64>(),
        ti in 0usize..9,
        rmask in any::<u8>(),
        smask in any::<u8>(),
        use_s in any::<bool>(),
    ) {
        let g = gnp(n, p, seed);
        let t = &small_trees()[ti];
        let r: VertexSet = (0..n).filter(|v| rmask >> v & 1 == 1).collect();
        let s: VertexSet = (0..n).filter(|v| smask >> v & 1 == 1).collect();
        let s_opt = use_s.then_some(&s);
        let found = find_rooted_tree_model(&g, t, s_opt, Some(&r), &VertexSet::new()).unwrap();
        let pattern = t.as_graph();
        let expected = brute_force_model(&g, &pattern, s_opt, Some(&r), &[t.root()], &VertexSet::new());
        prop_assert_eq!(found.is_some(), expected);
        if let Some(m) = found {
            prop_assert_eq!(check_model(&g, &pattern, &m, s_opt, Some(&r), &[t.root()]), Ok(()));
        }
    }

    #[test]
    fn forest_search_agrees_with_brute_force(
        n in 2usize..=7,
        p in 20u64..80,
        seed in any::<u64>(),
        a in 0usize..4,
        b in 0usize..4,
        rmask in any::<u8>(),
    ) {
        let g = gnp(n, p, seed);
        let trees = small_trees();
        let f = RootedForest::new(vec![trees[a].clone(), trees[b].clone()]);
        let r: VertexSet = (0..n).filter(|v| rmask >> v & 1 == 1).collect();
        let found = find_rooted_forest_model(&g, &f, None, Some(&r), &VertexSet::new()).unwrap();
        let expected = brute_force_model(&g, &f.as_graph(), None, Some(&r), &f.roots(), &VertexSet::new());
        prop_assert_eq!(found.is_some(), expected);
        if let Some(m) = found {
            prop_assert_eq!(check_model(&g, &f.as_graph(), &m, None, Some(&r), &f.roots()), Ok(()));
        }
    }

    #[test]
    fn apex_search_agrees_with_brute_force(
        n in 2usize..=7,
        p in 20u64..70,
        seed in any::<u64>(),
        ti in 0usize..5,
    ) {
        let g = gnp(n, p, seed);
        let t = &small_trees()[ti];
        let plus = t.plus_apex();
        let found = find_apex_tree_model(&g, t).unwrap();
        let expected = brute_force_model(&g, &plus, None, None, &[], &VertexSet::new());
        prop_assert_eq!(found.is_some(), expected);
        if let Some((apex, m)) = found {
            let full = blowup_core::models::apex_model(&apex, &m);
            prop_assert_eq!(check_model(&g, &plus, &full, None, None, &[]), Ok(()));
        }
    }

    #[test]
    fn lifted_models_stay_valid(
        n in 3usize..=8,
        p in 20u64..70,
        seed in any::<u64>(),
        ti in 0usize..6,
    ) {
        let g = gnp(n, p, seed);
        let comps = g.connected_components();
        let big = comps.iter().max_by_key(|c| c.len()).unwrap().clone();
        let keep: VertexSet = big.iter().take(big.len() / 2 + 1).collect();
        // Contract a connected piece of the largest component, if one exists.
        let piece = g.components_within(&keep).into_iter().next().unwrap();
        let via = g.contract_connected_set(&piece).unwrap();
        let t = &small_trees()[ti];
        if let Some(m) = find_rooted_tree_model(&via.image, t, None, None, &VertexSet::new()).unwrap() {
            let lifted = lift_model(&m, &via, &g).unwrap();
            prop_assert_eq!(check_model(&g, &t.as_graph(), &lifted, None, None, &[]), Ok(()));
        }
    }
}

#[test]
fn k4_rooted_path_matches_brute_force() {
    let k4 = Graph::complete(4);
    let p3 = RootedTree::path(3);
    let r = VertexSet::from([0]);
    let all = k4.vertices();
    let found = find_rooted_tree_model(&k4, &p3, Some(&all), Some(&r), &VertexSet::new()).unwrap();
    let expected = brute_force_model(&k4, &p3.as_graph(), Some(&all), Some(&r), &[0], &VertexSet::new());
    assert!(expected);
    assert!(found.is_some());
}
