//! Minor models of rooted trees and forests: representation, checking,
//! exact search, and lifting through contractions.

mod search;
mod tree;

use serde::{Deserialize, Serialize};

use crate::diag::{Check, Violation};
use crate::error::{Error, Result};
use crate::graph::{mask_is_connected, mask_neighborhood, ContractionMap, Graph, Mask, VertexSet};

use search::{ForestPattern, Query};
pub use tree::{RootedForest, RootedTree};

/// Largest pattern (number of vertices) the exact search accepts.
pub const PATTERN_LIMIT: usize = 8;
/// Largest host graph the exact search accepts.
pub const HOST_LIMIT: usize = 24;
/// Largest host graph for the apex search, which enumerates connected apex sets.
pub const APEX_HOST_LIMIT: usize = 20;

#[derive(Serialize, Deserialize)]
struct ModelJson {
    branch: Vec<(usize, VertexSet)>,
}

/// Branch set per pattern vertex, indexed by pattern vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct MinorModel {
    pub branch: Vec<VertexSet>,
}

impl TryFrom<ModelJson> for MinorModel {
    type Error = Error;

    fn try_from(j: ModelJson) -> Result<Self> {
        let t = j.branch.len();
        let mut branch = vec![None; t];
        for (pv, set) in j.branch {
            if pv >= t || branch[pv].is_some() {
                return Err(Error::InvalidPattern(format!("bad pattern vertex {pv} in model")));
            }
            branch[pv] = Some(set);
        }
        Ok(MinorModel {
            branch: branch.into_iter().map(Option::unwrap).collect(),
        })
    }
}

impl From<MinorModel> for ModelJson {
    fn from(m: MinorModel) -> Self {
        ModelJson {
            branch: m.branch.into_iter().enumerate().collect(),
        }
    }
}

impl MinorModel {
    pub fn new(branch: Vec<VertexSet>) -> MinorModel {
        MinorModel { branch }
    }

    fn from_masks(masks: &[Mask]) -> MinorModel {
        MinorModel::new(masks.iter().map(|&m| VertexSet::from_mask(m)).collect())
    }

    pub fn len(&self) -> usize {
        self.branch.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branch.is_empty()
    }

    /// Union of all branch sets.
    pub fn vertices(&self) -> VertexSet {
        self.branch.iter().flat_map(|b| b.iter()).collect()
    }

    pub fn map(&self, f: impl Fn(usize) -> usize + Copy) -> MinorModel {
        MinorModel::new(self.branch.iter().map(|b| b.map(f)).collect())
    }

    /// Branch sets of pattern vertices `range`, as a model of their own.
    pub fn slice(&self, range: std::ops::Range<usize>) -> MinorModel {
        MinorModel::new(self.branch[range].to_vec())
    }
}

/// Validates the model axioms for `pattern`, plus optional rootedness: every
/// branch set meets `s`, and each pattern vertex in `roots` has a branch set
/// meeting `r`.
pub fn check_model(
    g: &Graph,
    pattern: &Graph,
    m: &MinorModel,
    s: Option<&VertexSet>,
    r: Option<&VertexSet>,
    roots: &[usize],
) -> Check {
    if m.len() != pattern.n() {
        return Err(Violation::BranchCount {
            expected: pattern.n(),
            actual: m.len(),
        });
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (pv, b) in m.branch.iter().enumerate() {
        if b.is_empty() {
            return Err(Violation::BranchEmpty { pattern_vertex: pv });
        }
        for v in b.iter() {
            if v >= g.n() {
                return Err(Violation::VertexOutOfRange { vertex: v });
            }
            if owner[v] != usize::MAX {
                return Err(Violation::BranchOverlap { vertex: v });
            }
            owner[v] = pv;
        }
        if !g.is_connected_set(b) {
            return Err(Violation::Connectivity { pattern_vertex: pv });
        }
    }
    for (a, b) in pattern.edges() {
        let realized = m.branch[a]
            .iter()
            .any(|v| g.neighbors(v).iter().any(|&w| owner[w] == b));
        if !realized {
            return Err(Violation::PatternEdgeMissing { a, b });
        }
    }
    if let Some(s) = s {
        if let Some(pv) = m.branch.iter().position(|b| b.is_disjoint(s)) {
            return Err(Violation::NotSRooted { pattern_vertex: pv });
        }
    }
    if let Some(r) = r {
        for &root in roots {
            if root >= m.len() || m.branch[root].is_disjoint(r) {
                return Err(Violation::NotRRooted { pattern_vertex: root });
            }
        }
    }
    Ok(())
}

fn guard(g: &Graph, pattern_size: usize, host_limit: usize) -> Result<Vec<Mask>> {
    if pattern_size > PATTERN_LIMIT {
        return Err(Error::SizeLimit {
            what: "pattern vertices",
            actual: pattern_size,
            limit: PATTERN_LIMIT,
        });
    }
    if g.n() > host_limit {
        return Err(Error::SizeLimit {
            what: "host vertices for exact model search",
            actual: g.n(),
            limit: host_limit,
        });
    }
    g.masks()
}

/// Exact search for a model of the forest `f` avoiding `forbidden`, with every
/// branch set meeting `s` (if given) and every root's branch set meeting `r`
/// (if given). Pattern vertices use the forest's global numbering.
pub fn find_rooted_forest_model(
    g: &Graph,
    f: &RootedForest,
    s: Option<&VertexSet>,
    r: Option<&VertexSet>,
    forbidden: &VertexSet,
) -> Result<Option<MinorModel>> {
    let adj = guard(g, f.size(), HOST_LIMIT)?;
    for set in [s, r, Some(forbidden)].into_iter().flatten() {
        g.check_set(set)?;
    }
    if f.is_empty() {
        return Ok(Some(MinorModel::default()));
    }
    let alive = VertexSet::range(g.n()).to_mask() & !forbidden.to_mask();
    let q = Query {
        adj: &adj,
        alive,
        s: s.map(VertexSet::to_mask),
        r: r.map(VertexSet::to_mask),
    };
    Ok(search::search(&q, &ForestPattern::new(f)).map(|b| MinorModel::from_masks(&b)))
}

/// Exact search for a model of `t` avoiding `forbidden`; `r` constrains the
/// root's branch set and `s` every branch set.
pub fn find_rooted_tree_model(
    g: &Graph,
    t: &RootedTree,
    s: Option<&VertexSet>,
    r: Option<&VertexSet>,
    forbidden: &VertexSet,
) -> Result<Option<MinorModel>> {
    find_rooted_forest_model(g, &RootedForest::new(vec![t.clone()]), s, r, forbidden)
}

/// Exact search for a `T⁺`-model: a connected apex set `A` and a `T`-model in
/// `G − A` whose every branch set meets `N(A)`. Apex sets are tried by size,
/// then by bitmask order, so the result is deterministic.
pub fn find_apex_tree_model(g: &Graph, t: &RootedTree) -> Result<Option<(VertexSet, MinorModel)>> {
    let adj = guard(g, t.t(), APEX_HOST_LIMIT)?;
    let n = g.n();
    let full: Mask = if n == 0 { 0 } else { Mask::MAX >> (64 - n) };
    let pat = ForestPattern::new(&RootedForest::new(vec![t.clone()]));
    for size in 1..=n.saturating_sub(t.t()) {
        let mut a: Mask = (1 << size) - 1;
        while a & !full == 0 {
            if mask_is_connected(&adj, a) {
                let nb = mask_neighborhood(&adj, a);
                if nb.count_ones() as usize >= t.t() {
                    let q = Query {
                        adj: &adj,
                        alive: full & !a,
                        s: Some(nb),
                        r: None,
                    };
                    if let Some(b) = search::search(&q, &pat) {
                        return Ok(Some((VertexSet::from_mask(a), MinorModel::from_masks(&b))));
                    }
                }
            }
            // Next mask with the same popcount.
            let c = a & a.wrapping_neg();
            let r = a + c;
            if r == 0 {
                break;
            }
            a = (((r ^ a) >> 2) / c) | r;
        }
    }
    Ok(None)
}

/// Replaces each branch set by the union of the origins of its image vertices.
pub fn lift_model(m: &MinorModel, via: &ContractionMap, original: &Graph) -> Result<MinorModel> {
    let mut out = Vec::with_capacity(m.len());
    for b in &m.branch {
        let lifted = via.lift_set(b);
        if !original.is_connected_set(&lifted) {
            return Err(Error::Disconnected);
        }
        out.push(lifted);
    }
    Ok(MinorModel::new(out))
}

/// Combines an apex set and a `T`-model into a model of `T⁺` (apex is pattern vertex `t`).
pub fn apex_model(apex: &VertexSet, m: &MinorModel) -> MinorModel {
    let mut branch = m.branch.clone();
    branch.push(apex.clone());
    MinorModel::new(branch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs<const N: usize>(a: [usize; N]) -> VertexSet {
        VertexSet::from(a)
    }

    fn none() -> VertexSet {
        VertexSet::new()
    }

    #[test]
    fn check_model_examples() {
        let k4 = Graph::complete(4);
        let claw = RootedTree::star(3).as_graph();
        let m = MinorModel::new((0..4).map(VertexSet::singleton).collect());
        assert_eq!(check_model(&k4, &claw, &m, None, None, &[]), Ok(()));

        let p4 = Graph::path(4);
        let p3 = RootedTree::path(3);
        let m = MinorModel::new(vec![vs([0]), vs([1]), vs([2])]);
        assert_eq!(check_model(&p4, &p3.as_graph(), &m, None, Some(&vs([0])), &[0]), Ok(()));
        assert_eq!(
            check_model(&p4, &p3.as_graph(), &m, Some(&vs([0, 3])), None, &[]),
            Err(Violation::NotSRooted { pattern_vertex: 1 })
        );
    }

    #[test]
    fn find_tree_model_examples() {
        let p4 = Graph::path(4);
        let claw = RootedTree::star(3);
        assert_eq!(find_rooted_tree_model(&p4, &claw, None, Some(&vs([0])), &none()).unwrap(), None);

        let c4 = Graph::cycle(4);
        let p3 = RootedTree::path(3);
        let m = find_rooted_tree_model(&c4, &p3, None, Some(&vs([0])), &none())
            .unwrap()
            .unwrap();
        assert_eq!(check_model(&c4, &p3.as_graph(), &m, None, Some(&vs([0])), &[0]), Ok(()));
        assert_eq!(m.branch, vec![vs([0]), vs([1]), vs([2])]);

        let k4 = Graph::complete(4);
        let all = k4.vertices();
        let m = find_rooted_tree_model(&k4, &p3, Some(&all), Some(&vs([0])), &none())
            .unwrap()
            .unwrap();
        assert_eq!(check_model(&k4, &p3.as_graph(), &m, Some(&all), Some(&vs([0])), &[0]), Ok(()));
    }

    #[test]
    fn s_extension_grows_branch_sets() {
        // Star with S = leaves: the K2 pattern needs the center in some branch.
        let star = Graph::star(3);
        let k2 = RootedTree::path(2);
        let s = vs([1, 2, 3]);
        let m = find_rooted_tree_model(&star, &k2, Some(&s), None, &none())
            .unwrap()
            .unwrap();
        assert_eq!(check_model(&star, &k2.as_graph(), &m, Some(&s), None, &[]), Ok(()));
        // P3 needs the center inside the middle branch set.
        let p3 = RootedTree::path(3);
        let m = find_rooted_tree_model(&star, &p3, Some(&s), None, &none())
            .unwrap()
            .unwrap();
        assert_eq!(m.branch[1].len(), 2);
        // The claw needs four disjoint branch sets meeting three S vertices.
        let claw = RootedTree::star(3);
        assert_eq!(find_rooted_tree_model(&star, &claw, Some(&s), None, &none()).unwrap(), None);
    }

    #[test]
    fn find_forest_model_examples() {
        let two_edges = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let f = RootedForest::new(vec![RootedTree::path(2), RootedTree::path(2)]);
        let m = find_rooted_forest_model(&two_edges, &f, None, Some(&vs([0, 2])), &none())
            .unwrap()
            .unwrap();
        assert_eq!(
            check_model(&two_edges, &f.as_graph(), &m, None, Some(&vs([0, 2])), &f.roots()),
            Ok(())
        );

        let edge = Graph::path(2);
        assert_eq!(find_rooted_forest_model(&edge, &f, None, Some(&vs([0, 1])), &none()).unwrap(), None);

        let c4 = Graph::cycle(4);
        let m = find_rooted_forest_model(&c4, &f, None, Some(&c4.vertices()), &none())
            .unwrap()
            .unwrap();
        assert_eq!(m.branch, vec![vs([0]), vs([1]), vs([2]), vs([3])]);
    }

    #[test]
    fn forbidden_equals_deletion() {
        let g = Graph::grid(2, 3);
        let t = RootedTree::star(3);
        let x = vs([1]);
        let with = find_rooted_tree_model(&g, &t, None, None, &x).unwrap();
        let (h, _) = g.delete_vertices(&x);
        let without = find_rooted_tree_model(&h, &t, None, None, &none()).unwrap();
        assert_eq!(with.is_some(), without.is_some());
        assert!(find_rooted_tree_model(&g, &t, None, None, &none()).unwrap().is_some());
    }

    #[test]
    fn apex_examples() {
        let k2 = RootedTree::path(2);
        assert!(find_apex_tree_model(&Graph::complete(4), &k2).unwrap().is_some());
        assert!(find_apex_tree_model(&Graph::path(4), &k2).unwrap().is_none());
        let (a, m) = find_apex_tree_model(&Graph::cycle(4), &k2).unwrap().unwrap();
        let full = apex_model(&a, &m);
        assert_eq!(check_model(&Graph::cycle(4), &k2.plus_apex(), &full, None, None, &[]), Ok(()));
    }

    #[test]
    fn lift_examples() {
        let p4 = Graph::path(4);
        let via = p4.contract_connected_set(&vs([1, 2])).unwrap();
        let image_model = MinorModel::new(vec![vs([0]), vs([1]), vs([2])]);
        let lifted = lift_model(&image_model, &via, &p4).unwrap();
        assert_eq!(lifted.branch, vec![vs([0]), vs([1, 2]), vs([3])]);
        assert_eq!(check_model(&p4, &RootedTree::path(3).as_graph(), &lifted, None, None, &[]), Ok(()));

        let id = p4.contract_groups((0..4).map(VertexSet::singleton).collect()).unwrap();
        let m = MinorModel::new(vec![vs([1]), vs([2])]);
        assert_eq!(lift_model(&m, &id, &p4).unwrap(), m);
    }

    #[test]
    fn size_guards() {
        let big = RootedTree::path(9);
        assert!(matches!(
            find_rooted_tree_model(&Graph::path(9), &big, None, None, &none()),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            find_rooted_tree_model(&Graph::path(25), &RootedTree::path(2), None, None, &none()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn model_json_shape() {
        let m = MinorModel::new(vec![vs([0, 1]), vs([2])]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"branch":[[0,[0,1]],[1,[2]]]}"#);
        assert_eq!(serde_json::from_str::<MinorModel>(&s).unwrap(), m);
    }
}
