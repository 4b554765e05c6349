//! Graphs excluding `T⁺` (a tree plus a dominating apex): a partition of width
//! at most `(2t − 1)d` whose quotient has treewidth at most `4h − 1`, or a
//! `T⁺`-model. Built from rooted path-decompositions of `(G − u, N(u))`.

use std::collections::BTreeMap;

use log::debug;

use crate::combine::{combine_produit, root_part_in_first_bag, Step};
use crate::decomp::{
    verify_blowup, BlowupCertificate, CertificateKind, Host, Kppd, PairPathDecomposition, TreeDecomposition,
    VertexPartition,
};
use crate::erdos_posa::ep_general;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::models::{
    apex_model, check_model, find_rooted_tree_model, lift_model, MinorModel, RootedForest, RootedTree,
};
use crate::oracles::{exact_pathwidth, exact_pw_pair, PAIR_LIMIT};
use crate::tree_blowup::BlowupOutcome;

/// Part budget `(2t − 1)d`.
pub fn apex_clique_size(t: &RootedTree) -> usize {
    ((2 * t.t()).saturating_sub(1) * t.max_degree()).max(1)
}

/// A path-decomposition of `(G, S)`: exact when small enough, otherwise a
/// decomposition of the whole graph.
fn pair_decomposition(g: &Graph, s: &VertexSet) -> Result<(PairPathDecomposition, bool)> {
    if g.n() <= PAIR_LIMIT {
        return Ok((exact_pw_pair(g, s)?.1, true));
    }
    let w = exact_pathwidth(g)?;
    let d = PairPathDecomposition {
        subgraph: g.vertices(),
        bags: w.witness,
        hang_map: BTreeMap::new(),
    };
    Ok((d, false))
}

/// Base case `h = 1`: layers of the graph with the components of
/// `G − (S ∪ {r})` contracted, grouped as `{r}`, `V₁ ∪ V₂`, `V₃ ∪ V₄`, ….
fn s_base(t: &RootedTree, g: &Graph, s: &VertexSet, r: usize, k: usize) -> Result<Step> {
    let a = s.union(&VertexSet::singleton(r));
    let mut groups: Vec<VertexSet> = a.iter().map(VertexSet::singleton).collect();
    groups.extend(g.components_within(&g.vertices().difference(&a)));
    let via = g.contract_groups(groups)?;
    let dist = via.image.distances(via.image_of(r).unwrap());
    let depth = dist.iter().flatten().copied().max().unwrap_or(0);
    let mut full = vec![VertexSet::new(); depth + 1];
    for (x, d) in dist.iter().enumerate() {
        full[d.expect("graph is connected")] = full[d.unwrap()].union(&via.origin[x]);
    }
    let layers: Vec<VertexSet> = full.iter().map(|l| l.intersection(&a)).collect();

    let leaves = t.children(t.root()).len();
    let mut inner = VertexSet::new();
    for i in 1..=depth {
        inner = inner.union(&full[i - 1]);
        let extra = usize::from(inner.is_disjoint(s));
        if layers[i].len() >= leaves + extra {
            let mut picks = layers[i].iter();
            let mut root_branch = inner.clone();
            if extra == 1 {
                root_branch.insert(picks.next().unwrap());
            }
            let mut branch = vec![root_branch; t.t()];
            for &c in t.children(t.root()) {
                branch[c] = VertexSet::singleton(picks.next().unwrap());
            }
            return Ok(Step::Minor(MinorModel::new(branch)));
        }
    }

    let mut parts = vec![VertexSet::singleton(r)];
    for pair in layers[1..].chunks(2) {
        let part = pair.iter().fold(VertexSet::new(), |acc, l| acc.union(l));
        if part.is_empty() {
            break;
        }
        parts.push(part);
    }
    let bags = if parts.len() == 1 {
        vec![VertexSet::singleton(0)]
    } else {
        (1..parts.len()).map(|i| VertexSet::from([i - 1, i])).collect()
    };
    let mut d = Kppd {
        subgraph: a,
        partition: VertexPartition::new(parts),
        bags,
        hang_map: BTreeMap::new(),
        k,
    };
    d.attach_hangs(g)?;
    Ok(Step::Done(d))
}

/// For connected `g` without an `(S, {r})`-rooted `t`-model: a `k`-partition
/// path-decomposition of `(G, S)` of width at most `2h − 1` with `{r}` a part
/// in the first bag. Otherwise such a model.
pub fn decompose_s_rooted_rec(t: &RootedTree, g: &Graph, s: &VertexSet, r: usize, k: usize) -> Result<Step> {
    g.check_vertex(r)?;
    g.check_set(s)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if t.t() < 2 {
        return Err(Error::InvalidPattern("rooted pattern needs at least two vertices".into()));
    }
    if g.n() == 1 {
        let mut d = Kppd::trivial(r, k);
        d.attach_hangs(g)?;
        return Ok(Step::Done(d));
    }
    let h = t.height();
    let step = if h == 1 {
        s_base(t, g, s, r, k)?
    } else {
        s_recurse(t, g, s, r, k)?
    };
    if let Step::Done(d) = &step {
        let bound = 2 * h as i64 - 1;
        if d.partition.width() > k || d.width() > bound {
            return Err(Error::falsified(
                "rooted partition decomposition",
                format!("widths ({}, {}) exceed ({k}, {bound})", d.partition.width(), d.width()),
            ));
        }
        if root_part_in_first_bag(d, r).is_none() {
            return Err(Error::falsified("rooted partition decomposition", "{r} is not in the first bag"));
        }
    }
    Ok(step)
}

fn s_recurse(t: &RootedTree, g: &Graph, s: &VertexSet, r: usize, k: usize) -> Result<Step> {
    let rset = VertexSet::singleton(r);
    let rr: VertexSet = g.neighbors(r).iter().copied().collect();
    let children = t.child_forest();
    let fmap = t.child_forest_map();
    let mut trees = children.trees.clone();
    trees.push(RootedTree::single());
    let forest = RootedForest::new(trees);

    let (gr, origin) = g.delete_vertices(&rset);
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in origin.iter().enumerate() {
        index[v] = i;
    }
    let s_loc = s.difference(&rset).map(|v| index[v]);
    let r_loc = rr.map(|v| index[v]);

    // A rooted model in G − r, with r joined to the root branch.
    let lift_with_r = |m: &MinorModel, root_from: usize| {
        let mut branch = vec![VertexSet::new(); t.t()];
        for (i, b) in m.branch.iter().enumerate() {
            let b = b.map(|v| origin[v]);
            if i == root_from {
                branch[t.root()] = b.union(&rset);
            } else {
                branch[fmap[i]] = b;
            }
        }
        MinorModel::new(branch)
    };

    let (pd, exact) = pair_decomposition(&gr, &s_loc)?;
    let p_bound = 2 * t.t() as i64 - 2;
    if pd.width() > p_bound && !exact {
        return Err(Error::SizeLimit {
            what: "vertices for an exact rooted pair decomposition",
            actual: gr.n(),
            limit: PAIR_LIMIT,
        });
    }
    if pd.width() > p_bound {
        let whole = find_rooted_tree_model(&gr, t, Some(&s_loc), Some(&r_loc), &VertexSet::new())?
            .ok_or_else(|| Error::falsified("rooted pathwidth bound", format!("pw(G − r, S) = {}", pd.width())))?;
        let m = whole.map(|v| origin[v]);
        let mut branch = m.branch;
        branch[t.root()].insert(r);
        return Ok(Step::Minor(MinorModel::new(branch)));
    }
    let hit = match ep_general(&gr, &s_loc, &r_loc, &forest, &pd) {
        Ok(hit) => hit,
        Err(Error::PackingExists(m)) => return Ok(Step::Minor(lift_with_r(&m, forest.size() - 1))),
        Err(e) => return Err(e),
    };
    let mut x = hit.x.map(|v| origin[v]);
    let sub_index = if forest.trees[hit.tree].height() == 0 {
        // A single vertex was hit: nothing rooted survives, so any taller tree is hit too.
        (0..children.len())
            .find(|&i| children.trees[i].height() >= 1)
            .expect("height ≥ 2 leaves a child subtree of height ≥ 1")
    } else {
        hit.tree
    };
    let sub = &children.trees[sub_index];
    let forbidden = x.union(&rset);
    if find_rooted_tree_model(g, sub, Some(s), Some(&rr), &forbidden)?.is_some() {
        return Err(Error::falsified("general cover", "the chosen subtree survives X"));
    }
    for v in x.clone().iter() {
        let mut trial = x.clone();
        trial.remove(v);
        if find_rooted_tree_model(g, sub, Some(s), Some(&rr), &trial.union(&rset))?.is_none() {
            x = trial;
        }
    }
    debug!("s-rooted recursion: n = {}, h = {}, |X| = {}", g.n(), t.height(), x.len());

    let rest = g.vertices().difference(&x).difference(&rset);
    let mut components = Vec::new();
    for c in g.components_within(&rest) {
        let Some(v) = c.intersection(&rr).first() else { continue };
        let (gc, origin_c) = g.induced_subgraph(&c);
        let rc = origin_c.iter().position(|&w| w == v).unwrap();
        let sc = c.intersection(s).map(|w| origin_c.iter().position(|&o| o == w).unwrap());
        match decompose_s_rooted_rec(sub, &gc, &sc, rc, k)? {
            Step::Done(d) => components.push(d.relabel(&origin_c)),
            Step::Minor(_) => return Err(Error::contract("a component escaped the cover")),
        }
    }
    let n = g.n();
    combine_produit(g, s, r, &x, k, components, |minor, s2, r2| {
        if minor.n() >= n {
            return Err(Error::contract("recursion did not shrink the graph"));
        }
        decompose_s_rooted_rec(t, minor, s2, r2, k)
    })
}

/// A `(2t − 1)d`-partition path-decomposition of `(G, S)` of width at most
/// `2h − 1`, or an `S`-rooted model of `t`. Each component is handled from its
/// smallest vertex.
pub fn srooted_ppd(g: &Graph, s: &VertexSet, t: &RootedTree) -> Result<Step> {
    g.check_set(s)?;
    let k = apex_clique_size(t);
    let mut pieces = Vec::new();
    for c in g.connected_components() {
        let (gc, origin) = g.induced_subgraph(&c);
        let sc = c.intersection(s).map(|w| origin.iter().position(|&o| o == w).unwrap());
        match decompose_s_rooted_rec(t, &gc, &sc, 0, k)? {
            Step::Done(d) => pieces.push(d.relabel(&origin)),
            Step::Minor(m) => return Ok(Step::Minor(m.map(|v| origin[v]))),
        }
    }
    let mut d = Kppd::concat(pieces, k);
    d.attach_hangs(g)?;
    Ok(Step::Done(d))
}

/// Restricts a decomposition to `a ⊆ subgraph`: parts and bags are
/// intersected with `a`, empty ones dropped.
fn restrict_kppd(g: &Graph, d: &Kppd, a: &VertexSet) -> Result<Kppd> {
    let mut index = vec![usize::MAX; d.partition.len()];
    let mut parts = Vec::new();
    for (i, p) in d.partition.parts().iter().enumerate() {
        let q = p.intersection(a);
        if !q.is_empty() {
            index[i] = parts.len();
            parts.push(q);
        }
    }
    let bags = d
        .bags
        .iter()
        .map(|b| b.iter().filter(|&p| index[p] != usize::MAX).map(|p| index[p]).collect())
        .collect();
    let mut out = Kppd {
        subgraph: a.clone(),
        partition: VertexPartition::new(parts),
        bags,
        hang_map: BTreeMap::new(),
        k: d.k,
    };
    out.attach_hangs(g)?;
    Ok(out)
}

/// A component `C` of `G − u − V(H)` with `G − V(C)` disconnected, and a
/// component of `G − V(C)` avoiding `u` and `N(u)`.
fn violation(g: &Graph, u: usize, subgraph: &VertexSet) -> Option<VertexSet> {
    let keep = subgraph.union(&VertexSet::singleton(u));
    let mut closed: VertexSet = g.neighbors(u).iter().copied().collect();
    closed.insert(u);
    for c in g.components_within(&g.vertices().difference(&keep)) {
        let rest = g.components_within(&g.vertices().difference(&c));
        if rest.len() > 1 {
            return rest.into_iter().find(|part| part.is_disjoint(&closed));
        }
    }
    None
}

/// Shrinks a decomposition `d` of `(G − u, N(u))` (in `G`'s vertex ids) until
/// `G − V(C)` is connected for every component `C` of `G − u − V(H)`. Each
/// round removes a component of `G − V(C)` from `H`, so the loop terminates.
pub fn shrink_to_connected(g: &Graph, u: usize, d: &Kppd) -> Result<Kppd> {
    g.check_vertex(u)?;
    if d.subgraph.contains(u) {
        return Err(Error::Precondition("decomposition must avoid u".into()));
    }
    let (gu, origin) = g.delete_vertices(&VertexSet::singleton(u));
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in origin.iter().enumerate() {
        index[v] = i;
    }
    let mut local = d.relabel(&index);
    local.attach_hangs(&gu)?;
    loop {
        let sub = local.subgraph.map(|v| origin[v]);
        let Some(cc) = violation(g, u, &sub) else { break };
        let a = local.subgraph.difference(&cc.map(|v| index[v]));
        if a.len() >= local.subgraph.len() {
            return Err(Error::contract("shrinking did not remove any vertex"));
        }
        local = restrict_kppd(&gu, &local, &a)?;
    }
    // Hangs stay relative to G − u; keys are minimum vertices, which the
    // increasing relabeling preserves.
    let mut out = local.relabel(&origin);
    out.hang_map = local.hang_map.iter().map(|(&c, &b)| (origin[c], b)).collect();
    Ok(out)
}

/// Partition with `{u}` as part `u_part`, and a tree-decomposition of the
/// quotient in which bags containing `u_part` have at most `2h + 1` parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApexRec {
    pub partition: VertexPartition,
    pub tree: TreeDecomposition,
    pub u_part: usize,
}

#[derive(Clone, Debug)]
pub enum ApexStep {
    Done(ApexRec),
    /// A `T⁺`-model; the apex is pattern vertex `t`.
    Minor(MinorModel),
}

fn apex_rec_components(g: &Graph, t: &RootedTree, u: usize, k: usize) -> Result<ApexStep> {
    let mut parts = Vec::new();
    let mut tree = TreeDecomposition::default();
    let mut u_part = 0;
    for c in g.connected_components() {
        let (gc, origin) = g.induced_subgraph(&c);
        let root = if c.contains(u) { u } else { c.first().unwrap() };
        let local = origin.iter().position(|&v| v == root).unwrap();
        let rec = match decompose_apex_rec(&gc, t, local, k)? {
            ApexStep::Done(rec) => rec,
            ApexStep::Minor(m) => return Ok(ApexStep::Minor(m.map(|v| origin[v]))),
        };
        let off = parts.len();
        if root == u {
            u_part = off + rec.u_part;
        }
        parts.extend(rec.partition.into_parts().into_iter().map(|p| p.map(|v| origin[v])));
        let shifted = TreeDecomposition {
            edges: rec.tree.edges,
            bags: rec.tree.bags.iter().map(|b| b.map(|p| p + off)).collect(),
        };
        let had = !tree.bags.is_empty();
        let node = tree.append(shifted);
        if had {
            tree.edges.push((0, node));
        }
    }
    Ok(ApexStep::Done(ApexRec {
        partition: VertexPartition::new(parts),
        tree,
        u_part,
    }))
}

/// For `g` without a `T⁺` minor: the structure of [`ApexRec`] with parts of
/// size at most `k` and bags of at most `4h` parts. Otherwise a `T⁺`-model.
pub fn decompose_apex_rec(g: &Graph, t: &RootedTree, u: usize, k: usize) -> Result<ApexStep> {
    g.check_vertex(u)?;
    let h = t.height();
    if g.n() == 1 {
        return Ok(ApexStep::Done(ApexRec {
            partition: VertexPartition::new(vec![VertexSet::singleton(u)]),
            tree: TreeDecomposition {
                edges: vec![],
                bags: vec![VertexSet::singleton(0)],
            },
            u_part: 0,
        }));
    }
    if !g.is_connected() {
        return apex_rec_components(g, t, u, k);
    }

    let uset = VertexSet::singleton(u);
    let s: VertexSet = g.neighbors(u).iter().copied().collect();
    let (gu, origin) = g.delete_vertices(&uset);
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in origin.iter().enumerate() {
        index[v] = i;
    }
    let d = match srooted_ppd(&gu, &s.map(|v| index[v]), t)? {
        Step::Done(d) => d.relabel(&origin),
        Step::Minor(m) => return Ok(ApexStep::Minor(apex_model(&uset, &m.map(|v| origin[v])))),
    };
    let d = shrink_to_connected(g, u, &d)?;

    let mut parts = vec![uset.clone()];
    parts.extend(d.partition.parts().iter().cloned());
    let path_bags: Vec<VertexSet> = d
        .bags
        .iter()
        .map(|b| {
            let mut bag = b.map(|p| p + 1);
            bag.insert(0);
            bag
        })
        .collect();
    let mut tree = TreeDecomposition {
        edges: (1..path_bags.len()).map(|i| (i - 1, i)).collect(),
        bags: path_bags,
    };

    let outside = g.vertices().difference(&d.subgraph).difference(&uset);
    for c in g.components_within(&outside) {
        let bi = *d
            .hang_map
            .get(&c.first().unwrap())
            .ok_or_else(|| Error::contract("hanging component without a bag"))?;
        let covering = d.bags[bi].map(|p| p + 1);
        let mut groups = vec![g.vertices().difference(&c)];
        groups.extend(c.iter().map(VertexSet::singleton));
        let via = g.contract_groups(groups)?;
        if via.image.n() >= g.n() {
            return Err(Error::contract("contracted graph is not smaller"));
        }
        let ui = via.image_of(u).unwrap();
        let rec = match decompose_apex_rec(&via.image, t, ui, k)? {
            ApexStep::Done(rec) => rec,
            ApexStep::Minor(m) => return Ok(ApexStep::Minor(lift_model(&m, &via, g)?)),
        };
        let mut map = vec![usize::MAX; rec.partition.len()];
        for (j, part) in rec.partition.parts().iter().enumerate() {
            if j != rec.u_part {
                map[j] = parts.len();
                parts.push(via.lift_set(part));
            }
        }
        let bags: Vec<VertexSet> = rec
            .tree
            .bags
            .iter()
            .map(|b| {
                let mapped: VertexSet = b.iter().filter(|&p| p != rec.u_part).map(|p| map[p]).collect();
                if b.contains(rec.u_part) {
                    mapped.union(&covering)
                } else {
                    mapped
                }
            })
            .collect();
        let link = rec
            .tree
            .bags
            .iter()
            .position(|b| b.contains(rec.u_part))
            .ok_or_else(|| Error::contract("{u_i} appears in no bag"))?;
        let off = tree.append(TreeDecomposition {
            edges: rec.tree.edges,
            bags,
        });
        tree.edges.push((bi, off + link));
    }

    let out = ApexRec {
        partition: VertexPartition::new(parts),
        tree,
        u_part: 0,
    };
    let wide_u = out.tree.bags.iter().filter(|b| b.contains(0)).map(|b| b.len()).max().unwrap_or(0);
    let widest = out.tree.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    if out.partition.width() > k || wide_u > 2 * h + 1 || widest > 4 * h {
        return Err(Error::falsified(
            "apex recursion",
            format!(
                "part width {}, bags with u {wide_u}, bags {widest} (limits {k}, {}, {})",
                out.partition.width(),
                2 * h + 1,
                4 * h
            ),
        ));
    }
    Ok(ApexStep::Done(out))
}

/// Top level: roots `tree` at a center and decomposes every component.
/// Models are of `T⁺` with tree vertices numbered as in `tree` and the apex
/// numbered `t`.
pub fn decompose_apex_free(g: &Graph, tree: &Graph) -> Result<BlowupOutcome> {
    let t = RootedTree::rooted_at_center(tree.n(), &tree.edges())?;
    let pattern = t.plus_apex();
    let out = if t.t() == 1 {
        match g.edges().first() {
            Some(&(a, b)) => BlowupOutcome::Counterexample(MinorModel::new(vec![
                VertexSet::singleton(a),
                VertexSet::singleton(b),
            ])),
            None => BlowupOutcome::Certificate(BlowupCertificate {
                kind: CertificateKind::Apex,
                clique_size: 1,
                partition: VertexPartition::singletons(g.n()),
                host: Host::Tree(TreeDecomposition {
                    edges: (1..g.n()).map(|i| (i - 1, i)).collect(),
                    bags: (0..g.n()).map(VertexSet::singleton).collect(),
                }),
            }),
        }
    } else if g.n() == 0 {
        BlowupOutcome::Certificate(BlowupCertificate {
            kind: CertificateKind::Apex,
            clique_size: apex_clique_size(&t),
            partition: VertexPartition::new(vec![]),
            host: Host::Tree(TreeDecomposition::default()),
        })
    } else {
        let k = apex_clique_size(&t);
        match decompose_apex_rec(g, &t, 0, k)? {
            ApexStep::Minor(m) => BlowupOutcome::Counterexample(m),
            ApexStep::Done(rec) => {
                let mut cert = BlowupCertificate {
                    kind: CertificateKind::Apex,
                    clique_size: k,
                    partition: rec.partition,
                    host: Host::Tree(rec.tree),
                };
                cert.canonicalize();
                BlowupOutcome::Certificate(cert)
            }
        }
    };
    match &out {
        BlowupOutcome::Counterexample(m) => {
            check_model(g, &pattern, m, None, None, &[]).map_err(|v| Error::falsified("apex model", v.to_string()))?;
        }
        BlowupOutcome::Certificate(cert) => {
            let w = verify_blowup(g, cert).map_err(|v| Error::falsified("apex blow-up", v.to_string()))?;
            let bound = 4 * t.height() as i64 - 1;
            if t.t() > 1 && (w.partition > cert.clique_size || w.host > bound) {
                return Err(Error::falsified(
                    "apex blow-up",
                    format!("widths ({}, {}) exceed ({}, {bound})", w.partition, w.host, cert.clique_size),
                ));
            }
        }
    }
    Ok(out)
}
