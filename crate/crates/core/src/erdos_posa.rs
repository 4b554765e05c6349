//! Packing or covering of rooted tree models: either many disjoint rooted
//! models, or a small vertex set whose removal destroys all models of one tree.

use crate::decomp::{check_pair_path_decomposition, PairPathDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::models::{find_rooted_forest_model, find_rooted_tree_model, MinorModel, RootedForest, RootedTree};
use crate::oracles::{diestel_extract, pathwidth_of_set};

/// Result of the packing/covering dichotomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpOutcome {
    /// `(tree index, model)` pairs with pairwise disjoint supports.
    Packing(Vec<(usize, MinorModel)>),
    /// Removing `x` leaves no weakly rooted model of tree `tree`.
    Cover { x: VertexSet, tree: usize },
}

/// A component of a forest together with a set hitting all its rooted models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub tree: usize,
    pub x: VertexSet,
}

struct Instance<'a> {
    g: &'a Graph,
    r: &'a VertexSet,
    trees: &'a [RootedTree],
}

impl Instance<'_> {
    fn model_in(&self, i: usize, within: &VertexSet) -> Result<Option<MinorModel>> {
        let outside = self.g.vertices().difference(within);
        find_rooted_tree_model(self.g, &self.trees[i], None, Some(self.r), &outside)
    }

    fn bound(&self, x: &[usize]) -> usize {
        let used: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0).collect();
        let total: usize = used.iter().map(|&i| x[i] * self.trees[i].t()).sum();
        total - self.trees[*used.last().unwrap()].t()
    }

    fn solve(&self, alive: &VertexSet, x: &mut Vec<usize>) -> Result<EpOutcome> {
        let used: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0).collect();
        let m = used[0];
        if x.iter().sum::<usize>() == 1 {
            return Ok(match self.model_in(m, alive)? {
                Some(model) => EpOutcome::Packing(vec![(m, model)]),
                None => EpOutcome::Cover {
                    x: VertexSet::new(),
                    tree: m,
                },
            });
        }
        let mut any = false;
        for &i in &used {
            if self.model_in(i, alive)?.is_some() {
                any = true;
                break;
            }
        }
        if !any {
            return Ok(EpOutcome::Cover {
                x: VertexSet::new(),
                tree: m,
            });
        }

        let alive: VertexSet = self
            .g
            .components_within(alive)
            .into_iter()
            .filter(|c| !c.is_disjoint(self.r))
            .flat_map(|c| c.into_vec())
            .collect();

        let tm = self.trees[m].t() as i64;
        let whole = pathwidth_of_set(self.g, &alive)?;
        let bags = if whole.value < tm - 1 {
            whole.witness.bags
        } else {
            let mut wide = None;
            for c in self.g.components_within(&alive) {
                if pathwidth_of_set(self.g, &c)?.value >= tm - 1 {
                    wide = Some(c);
                    break;
                }
            }
            let c = wide.ok_or_else(|| Error::contract("no component attains the pathwidth"))?;
            let root = c
                .intersection(self.r)
                .first()
                .ok_or_else(|| Error::contract("component without a root vertex"))?;
            let (h, origin) = self.g.induced_subgraph(&c);
            let local = origin.iter().position(|&v| v == root).unwrap();
            let (_, d) = diestel_extract(&h, local, &self.trees[m])?;
            d.bags.iter().map(|b| b.map(|v| origin[v])).collect()
        };

        // Smallest prefix of bags holding a rooted model of some used tree.
        let mut prefix = VertexSet::new();
        let mut found = None;
        'scan: for (l, bag) in bags.iter().enumerate() {
            prefix = prefix.union(bag);
            for &i in &used {
                if let Some(model) = self.model_in(i, &prefix)? {
                    found = Some((l, i, model));
                    break 'scan;
                }
            }
        }
        let (l, chosen, model) = found.ok_or_else(|| Error::contract("no prefix holds a model"))?;
        let bag = &bags[l];
        let rest = alive.difference(&prefix);
        for u in prefix.difference(bag).iter() {
            if let Some(&v) = self.g.neighbors(u).iter().find(|&&v| rest.contains(v)) {
                return Err(Error::falsified(
                    "prefix separation",
                    format!("edge {u}-{v} leaves the prefix outside its last bag"),
                ));
            }
        }

        x[chosen] -= 1;
        let sub = self.solve(&rest, x)?;
        x[chosen] += 1;
        match sub {
            EpOutcome::Packing(mut models) => {
                models.push((chosen, model));
                Ok(EpOutcome::Packing(models))
            }
            EpOutcome::Cover { x: xs, tree } => {
                let cover = xs.union(bag);
                let limit = self.bound(x);
                if cover.len() > limit {
                    return Err(Error::falsified(
                        "cover size",
                        format!("|X| = {} exceeds {limit}", cover.len()),
                    ));
                }
                Ok(EpOutcome::Cover { x: cover, tree })
            }
        }
    }
}

/// Either `x[i]` disjoint weakly `R`-rooted `T_i`-models for every `i`, or a
/// set `X` with `|X| ≤ Σ x_i t_i − t_max` and an index `i` with no weakly
/// `R`-rooted `T_i`-model in `G − X`. Trees must be sorted by size.
pub fn ep_rooted_forest(g: &Graph, r: &VertexSet, trees: &[RootedTree], x: &[usize]) -> Result<EpOutcome> {
    g.check_set(r)?;
    if trees.len() != x.len() {
        return Err(Error::Precondition("one multiplicity per tree".into()));
    }
    if trees.windows(2).any(|w| w[0].t() > w[1].t()) {
        return Err(Error::Precondition("trees must be sorted by size".into()));
    }
    if x.iter().all(|&k| k == 0) {
        return Err(Error::Precondition("some multiplicity must be positive".into()));
    }
    let inst = Instance { g, r, trees };
    let mut xs = x.to_vec();
    let out = inst.solve(&g.vertices(), &mut xs)?;
    if let EpOutcome::Cover { x: cover, tree } = &out {
        if find_rooted_tree_model(g, &trees[*tree], None, Some(r), cover)?.is_some() {
            return Err(Error::falsified("cover", "a rooted model survives the cover"));
        }
    }
    Ok(out)
}

/// A component `T′` of `F` and `X` with `|X| < |V(F)|` such that `G − X` has no
/// weakly `R`-rooted `T′`-model. Fails with the packing if `G` has a weakly
/// `R`-rooted model of `F`.
pub fn hitting_set_for_forest(g: &Graph, r: &VertexSet, f: &RootedForest) -> Result<Hit> {
    if f.is_empty() {
        return Err(Error::InvalidPattern("empty forest".into()));
    }
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by_key(|&i| f.trees[i].t());
    let sorted: Vec<RootedTree> = order.iter().map(|&i| f.trees[i].clone()).collect();
    match ep_rooted_forest(g, r, &sorted, &vec![1; sorted.len()])? {
        EpOutcome::Packing(models) => {
            let mut branch = vec![None; f.len()];
            for (i, m) in models {
                branch[order[i]] = Some(m);
            }
            let model = MinorModel::new(branch.into_iter().flat_map(|m| m.unwrap().branch).collect());
            Err(Error::PackingExists(model))
        }
        EpOutcome::Cover { x, tree } => {
            if x.len() >= f.size() {
                return Err(Error::falsified("forest hitting set", "cover is too large"));
            }
            Ok(Hit { tree: order[tree], x })
        }
    }
}

/// For `G` with no `(S, R)`-rooted `F`-model and a path-decomposition `d` of
/// `(G, S)` of width `p`: a component `T` of `F` and `X` with
/// `|X| ≤ (d − 1)(p + 1)` such that `G − X` has no `(S, R)`-rooted `T`-model.
pub fn ep_general(g: &Graph, s: &VertexSet, r: &VertexSet, f: &RootedForest, d: &PairPathDecomposition) -> Result<Hit> {
    g.check_set(s)?;
    g.check_set(r)?;
    if f.is_empty() {
        return Err(Error::InvalidPattern("empty forest".into()));
    }
    check_pair_path_decomposition(g, s, d)
        .map_err(|v| Error::Precondition(format!("invalid pair decomposition: {v}")))?;
    if let Some(model) = find_rooted_forest_model(g, f, Some(s), Some(r), &VertexSet::new())? {
        return Err(Error::PackingExists(model));
    }
    let p = d.width();
    let mut comps: Vec<usize> = (0..f.len()).collect();
    let hit = general_rec(g, s, r, f, d, &g.vertices(), &mut comps)?;
    let limit = (f.len() as i64 - 1) * (p + 1);
    if hit.x.len() as i64 > limit {
        return Err(Error::falsified(
            "general cover size",
            format!("|X| = {} exceeds {limit}", hit.x.len()),
        ));
    }
    if find_rooted_tree_model(g, &f.trees[hit.tree], Some(s), Some(r), &hit.x)?.is_some() {
        return Err(Error::falsified("general cover", "a rooted model survives the cover"));
    }
    Ok(hit)
}

fn general_rec(
    g: &Graph,
    s: &VertexSet,
    r: &VertexSet,
    f: &RootedForest,
    d: &PairPathDecomposition,
    alive: &VertexSet,
    comps: &mut Vec<usize>,
) -> Result<Hit> {
    if comps.len() == 1 {
        return Ok(Hit {
            tree: comps[0],
            x: VertexSet::new(),
        });
    }
    let model_in = |i: usize, within: &VertexSet| {
        let outside = g.vertices().difference(within);
        find_rooted_tree_model(g, &f.trees[i], Some(s), Some(r), &outside)
    };
    for &i in comps.iter() {
        if model_in(i, alive)?.is_none() {
            return Ok(Hit {
                tree: i,
                x: VertexSet::new(),
            });
        }
    }
    let alive: VertexSet = g
        .components_within(alive)
        .into_iter()
        .filter(|c| !c.is_disjoint(s))
        .flat_map(|c| c.into_vec())
        .collect();
    let dead = g.vertices().difference(&alive);
    let local = d.restrict_away(g, &dead)?;

    // Hanging components grouped by their hang bag, then prefix unions.
    let mut hung = vec![VertexSet::new(); local.bags.len()];
    for c in g.components_within(&alive.difference(&local.subgraph)) {
        let bag = local.hang_map[&c.first().unwrap()];
        hung[bag] = hung[bag].union(&c);
    }
    let mut prefix = VertexSet::new();
    let mut found = None;
    'scan: for (j, bag) in local.bags.bags.iter().enumerate() {
        prefix = prefix.union(bag).union(&hung[j]);
        for &i in comps.iter() {
            if model_in(i, &prefix)?.is_some() {
                found = Some((j, i));
                break 'scan;
            }
        }
    }
    let (j, chosen) = found.ok_or_else(|| Error::contract("no prefix holds a model"))?;
    let bag = local.bags.bags[j].clone();
    let rest = alive.difference(&prefix);
    for u in prefix.difference(&bag).iter() {
        if let Some(&v) = g.neighbors(u).iter().find(|&&v| rest.contains(v)) {
            return Err(Error::falsified(
                "bag separation",
                format!("edge {u}-{v} crosses the prefix boundary"),
            ));
        }
    }
    comps.retain(|&i| i != chosen);
    let sub = general_rec(g, s, r, f, d, &alive.difference(&bag), comps)?;
    Ok(Hit {
        tree: sub.tree,
        x: sub.x.union(&bag),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::check_model;
    use crate::oracles::exact_pw_pair;

    fn vs<const N: usize>(a: [usize; N]) -> VertexSet {
        VertexSet::from(a)
    }

    #[test]
    fn packing_in_two_triangles() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let r = g.vertices();
        let p2 = RootedTree::path(2);
        match ep_rooted_forest(&g, &r, std::slice::from_ref(&p2), &[2]).unwrap() {
            EpOutcome::Packing(models) => {
                assert_eq!(models.len(), 2);
                let (a, b) = (&models[0].1, &models[1].1);
                assert!(a.vertices().is_disjoint(&b.vertices()));
                for (_, m) in &models {
                    assert_eq!(check_model(&g, &p2.as_graph(), m, None, Some(&r), &[0]), Ok(()));
                }
            }
            other => panic!("expected packing, got {other:?}"),
        }
    }

    #[test]
    fn trivial_covers() {
        let k1 = Graph::empty(1);
        assert_eq!(
            ep_rooted_forest(&k1, &vs([0]), &[RootedTree::path(2)], &[1]).unwrap(),
            EpOutcome::Cover {
                x: VertexSet::new(),
                tree: 0
            }
        );
        let p4 = Graph::path(4);
        assert_eq!(
            ep_rooted_forest(&p4, &vs([0]), &[RootedTree::star(3)], &[1]).unwrap(),
            EpOutcome::Cover {
                x: VertexSet::new(),
                tree: 0
            }
        );
    }

    #[test]
    fn hitting_set_examples() {
        let p4 = Graph::path(4);
        let f = RootedForest::new(vec![RootedTree::star(3)]);
        assert_eq!(
            hitting_set_for_forest(&p4, &vs([0]), &f).unwrap(),
            Hit {
                tree: 0,
                x: VertexSet::new()
            }
        );

        let f = RootedForest::new(vec![RootedTree::path(2), RootedTree::path(2)]);
        let hit = hitting_set_for_forest(&Graph::empty(1), &vs([0]), &f).unwrap();
        assert!(hit.x.is_empty());

        let c4 = Graph::cycle(4);
        let f = RootedForest::new(vec![RootedTree::path(2); 3]);
        let hit = hitting_set_for_forest(&c4, &c4.vertices(), &f).unwrap();
        assert!(hit.x.len() <= 5);
        let t = &f.trees[hit.tree];
        assert!(find_rooted_tree_model(&c4, t, None, Some(&c4.vertices()), &hit.x).unwrap().is_none());
    }

    #[test]
    fn hitting_set_reports_packing() {
        let c4 = Graph::cycle(4);
        let f = RootedForest::new(vec![RootedTree::path(2); 2]);
        match hitting_set_for_forest(&c4, &c4.vertices(), &f) {
            Err(Error::PackingExists(m)) => {
                assert_eq!(check_model(&c4, &f.as_graph(), &m, None, Some(&c4.vertices()), &f.roots()), Ok(()));
            }
            other => panic!("expected packing, got {other:?}"),
        }
    }

    #[test]
    fn general_examples() {
        let g = Graph::grid(2, 4);
        let all = g.vertices();
        let single = RootedForest::new(vec![RootedTree::path(3)]);
        let edge = Graph::path(2);
        let (_, de) = exact_pw_pair(&edge, &edge.vertices()).unwrap();
        assert_eq!(
            ep_general(&edge, &edge.vertices(), &edge.vertices(), &single, &de).unwrap(),
            Hit {
                tree: 0,
                x: VertexSet::new()
            }
        );

        // No S vertices: nothing is S-rooted.
        let none = VertexSet::new();
        let (_, d0) = exact_pw_pair(&g, &none).unwrap();
        let f = RootedForest::new(vec![RootedTree::path(2), RootedTree::path(2)]);
        assert_eq!(ep_general(&g, &none, &all, &f, &d0).unwrap().x, VertexSet::new());

        // Two P4s need 8 > 6 vertices of the 2×3 grid, so no packing; a cover exists.
        let g = Graph::grid(2, 3);
        let all = g.vertices();
        let (_, d) = exact_pw_pair(&g, &all).unwrap();
        let f = RootedForest::new(vec![RootedTree::path(4); 2]);
        let hit = ep_general(&g, &all, &all, &f, &d).unwrap();
        assert!(hit.x.len() as i64 <= d.width() + 1);
        assert!(find_rooted_tree_model(&g, &f.trees[hit.tree], Some(&all), Some(&all), &hit.x)
            .unwrap()
            .is_none());
    }
}
