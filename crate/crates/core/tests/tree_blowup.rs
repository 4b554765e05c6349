mod common;

use blowup_core::decomp::verify_blowup;
use blowup_core::models::{check_model, find_rooted_tree_model};
use blowup_core::oracles::exact_pathwidth;
use blowup_core::tree_blowup::{decompose_tree_free, tree_clique_size, BlowupOutcome};
use blowup_core::{Graph, RootedTree, VertexSet};
use common::gnp;
use proptest::prelude::*;

fn tree_graphs() -> Vec<Graph> {
    let star = |l: usize| Graph::star(l);
    vec![
        Graph::path(3),
        Graph::path(4),
        star(3),
        Graph::path(5),
        Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap(),
        star(4),
        Graph::path(6),
        Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap(),
        Graph::from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap(),
    ]
}

fn contains(g: &Graph, tree: &Graph) -> bool {
    let t = RootedTree::from_edges(tree.n(), &tree.edges(), 0).unwrap();
    find_rooted_tree_model(g, &t, None, None, &VertexSet::new()).unwrap().is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn outcome_matches_oracle(n in 1usize..=11, p in 5u64..45, seed in any::<u64>(), ti in 0usize..9) {
        let g = gnp(n, p, seed);
        let tree = &tree_graphs()[ti];
        let t = RootedTree::rooted_at_center(tree.n(), &tree.edges()).unwrap();
        let free = !contains(&g, tree);
        match decompose_tree_free(&g, tree).unwrap() {
            BlowupOutcome::Certificate(cert) => {
                let w = verify_blowup(&g, &cert).unwrap();
                prop_assert!(w.partition <= tree_clique_size(tree.n()));
                prop_assert!(w.host < 2 * t.height() as i64);
                let q = cert.partition.quotient_graph(&g);
                prop_assert!(exact_pathwidth(&q).unwrap().value < 2 * t.height() as i64);
            }
            BlowupOutcome::Counterexample(m) => {
                prop_assert!(!free);
                prop_assert_eq!(check_model(&g, tree, &m, None, None, &[]), Ok(()));
            }
        }
    }
}

#[test]
fn long_paths_exclude_claws() {
    // Paths and cycles have maximum degree two, so no claw.
    for g in [Graph::path(12), Graph::cycle(14)] {
        let out = decompose_tree_free(&g, &Graph::star(3)).unwrap();
        let BlowupOutcome::Certificate(cert) = out else { panic!("unexpected claw model") };
        let w = verify_blowup(&g, &cert).unwrap();
        assert!(w.partition <= 2 && w.host <= 1);
    }
}

#[test]
fn caterpillar_excludes_deep_tree() {
    // Binary tree of height 2 on 7 vertices; a star has no such minor.
    let tree = &tree_graphs()[8];
    let g = Graph::star(9);
    let out = decompose_tree_free(&g, tree).unwrap();
    let BlowupOutcome::Certificate(cert) = out else { panic!("star has no deep minor") };
    let w = verify_blowup(&g, &cert).unwrap();
    assert!(w.partition <= 5 && w.host <= 3);
}

#[test]
fn complete_graph_lower_bound() {
    // K_{t−1} excludes P4 (t = 4); any blow-up of it needs c ≥ (t − 1)/(2h).
    let out = decompose_tree_free(&Graph::complete(3), &Graph::path(4)).unwrap();
    let BlowupOutcome::Certificate(cert) = out else { panic!("K3 has no P4 minor") };
    let w = verify_blowup(&Graph::complete(3), &cert).unwrap();
    assert!((1..=2).contains(&w.partition));
}
