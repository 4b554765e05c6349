//! Graphs excluding a tree `T` of height `h` on `t` vertices: a partition of
//! width at most `t − 2` whose quotient has pathwidth at most `2h − 1`, or a
//! model of `T` showing the premise fails.

use std::collections::BTreeMap;

use log::debug;

use crate::combine::{combine, root_part_in_first_bag, Step};
use crate::decomp::{
    verify_blowup, BlowupCertificate, CertificateKind, Host, Kppd, PathDecomposition, VertexPartition,
};
use crate::diag::Violation;
use crate::erdos_posa::hitting_set_for_forest;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::models::{check_model, find_rooted_tree_model, MinorModel, RootedTree};

/// Either a certificate `G ⊆ H ⊠ K_c` or a model of the excluded pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowupOutcome {
    Certificate(BlowupCertificate),
    Counterexample(MinorModel),
}

/// Partition budget for a tree on `t` vertices.
pub fn tree_clique_size(t: usize) -> usize {
    t.saturating_sub(2).max(1)
}

/// Model of `T` with every branch a single vertex given by `pick(pattern vertex)`.
fn model_from(t: &RootedTree, mut pick: impl FnMut(usize) -> VertexSet) -> MinorModel {
    MinorModel::new((0..t.t()).map(&mut pick).collect())
}

/// Base case `h = 1`: BFS layers from `r`, or a star model if a layer is too big.
fn bfs_base(t: &RootedTree, g: &Graph, r: usize, k: usize) -> Result<Step> {
    let layers = g.bfs_layers(r)?;
    let leaves = t.t() - 1;
    if let Some(i) = (1..layers.len()).find(|&i| layers[i].len() >= leaves) {
        let inner: VertexSet = layers[..i].iter().flat_map(|l| l.iter()).collect();
        let mut picks = layers[i].iter();
        let root = t.root();
        let m = model_from(t, |pv| {
            if pv == root {
                inner.clone()
            } else {
                VertexSet::singleton(picks.next().expect("layer has enough vertices"))
            }
        });
        return Ok(Step::Minor(m));
    }
    let bags = if layers.len() == 1 {
        vec![VertexSet::singleton(0)]
    } else {
        (1..layers.len()).map(|i| VertexSet::from([i - 1, i])).collect()
    };
    Ok(Step::Done(Kppd {
        subgraph: g.vertices(),
        partition: VertexPartition::new(layers),
        bags,
        hang_map: BTreeMap::new(),
        k,
    }))
}

/// For connected `g` without a model of `t` whose root branch contains `r`: a
/// partition of width at most `k ≥ max(1, t − 2)` with `{r}` a part, and a
/// path-decomposition of the quotient of width at most `2h − 1` whose first
/// bag contains `{r}`. Otherwise such a model (branch sets indexed by the
/// vertices of `t`).
pub fn decompose_rooted(t: &RootedTree, g: &Graph, r: usize, k: usize) -> Result<Step> {
    g.check_vertex(r)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let root = t.root();
    if t.t() == 1 {
        return Ok(Step::Minor(model_from(t, |_| VertexSet::singleton(r))));
    }
    if g.n() == 1 {
        return Ok(Step::Done(Kppd::trivial(r, k)));
    }
    if t.t() == 2 {
        let w = g.neighbors(r)[0];
        return Ok(Step::Minor(model_from(t, |pv| {
            VertexSet::singleton(if pv == root { r } else { w })
        })));
    }
    let h = t.height();
    if k < tree_clique_size(t.t()) {
        return Err(Error::Precondition(format!("part budget {k} below t − 2")));
    }
    let step = if h == 1 {
        bfs_base(t, g, r, k)?
    } else {
        recurse(t, g, r, k)?
    };
    if let Step::Done(d) = &step {
        let bound = 2 * h as i64 - 1;
        if d.partition.width() > k || d.width() > bound {
            return Err(Error::falsified(
                "rooted tree decomposition",
                format!("widths ({}, {}) exceed ({k}, {bound})", d.partition.width(), d.width()),
            ));
        }
        if root_part_in_first_bag(d, r).is_none() {
            return Err(Error::falsified("rooted tree decomposition", "{r} is not in the first bag"));
        }
    }
    Ok(step)
}

fn recurse(t: &RootedTree, g: &Graph, r: usize, k: usize) -> Result<Step> {
    let rset = VertexSet::singleton(r);
    let rr: VertexSet = g.neighbors(r).iter().copied().collect();
    let forest = t.child_forest();
    let fmap = t.child_forest_map();

    let (gr, origin) = g.delete_vertices(&rset);
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in origin.iter().enumerate() {
        index[v] = i;
    }
    let hit = match hitting_set_for_forest(&gr, &rr.map(|v| index[v]), &forest) {
        Ok(hit) => hit,
        Err(Error::PackingExists(m)) => {
            let mut branch = vec![rset.clone(); t.t()];
            for (i, b) in m.branch.iter().enumerate() {
                branch[fmap[i]] = b.map(|v| origin[v]);
            }
            return Ok(Step::Minor(MinorModel::new(branch)));
        }
        Err(e) => return Err(e),
    };
    let sub = &forest.trees[hit.tree];
    let mut x = hit.x.map(|v| origin[v]);

    // Inclusion-minimal X, greedily in ascending order.
    for v in x.clone().iter() {
        let mut trial = x.clone();
        trial.remove(v);
        let forbidden = trial.union(&rset);
        if find_rooted_tree_model(g, sub, None, Some(&rr), &forbidden)?.is_none() {
            x = trial;
        }
    }
    debug!("tree recursion: n = {}, h = {}, |X| = {}", g.n(), t.height(), x.len());

    let rest = g.vertices().difference(&x).difference(&rset);
    let mut components = Vec::new();
    for c in g.components_within(&rest) {
        let Some(v) = c.intersection(&rr).first() else { continue };
        let (gc, origin_c) = g.induced_subgraph(&c);
        let rc = origin_c.iter().position(|&w| w == v).expect("v lies in its component");
        match decompose_rooted(sub, &gc, rc, tree_clique_size(sub.t()))? {
            Step::Done(d) => components.push(d.relabel(&origin_c)),
            Step::Minor(_) => {
                return Err(Error::contract("a component escaped the hitting set"));
            }
        }
    }
    let n = g.n();
    combine(g, r, &x, k, components, |minor, r2| {
        if minor.n() >= n {
            return Err(Error::contract("recursion did not shrink the graph"));
        }
        decompose_rooted(t, minor, r2, k)
    })
}

fn certificate(clique_size: usize, parts: Vec<VertexSet>, bags: Vec<VertexSet>) -> BlowupCertificate {
    BlowupCertificate {
        kind: CertificateKind::Tree,
        clique_size,
        partition: VertexPartition::new(parts),
        host: Host::Path(PathDecomposition::new(bags)),
    }
}

/// Top level: roots `tree` at a center, runs [`decompose_rooted`] on every
/// component from its smallest vertex and places the results side by side.
/// Model branch sets are indexed by the vertices of `tree`.
pub fn decompose_tree_free(g: &Graph, tree: &Graph) -> Result<BlowupOutcome> {
    let t = RootedTree::rooted_at_center(tree.n(), &tree.edges())?;
    let c = tree_clique_size(t.t());
    let out = match t.t() {
        1 => match g.vertices().first() {
            Some(v) => BlowupOutcome::Counterexample(model_from(&t, |_| VertexSet::singleton(v))),
            None => BlowupOutcome::Certificate(certificate(c, vec![], vec![])),
        },
        2 => match g.edges().first() {
            Some(&(u, v)) => BlowupOutcome::Counterexample(model_from(&t, |pv| {
                VertexSet::singleton(if pv == 0 { u } else { v })
            })),
            None => {
                let parts = (0..g.n()).map(VertexSet::singleton).collect();
                let bags = (0..g.n()).map(VertexSet::singleton).collect();
                BlowupOutcome::Certificate(certificate(c, parts, bags))
            }
        },
        _ => per_component(g, &t, c)?,
    };
    match &out {
        BlowupOutcome::Counterexample(m) => {
            check_model(g, tree, m, None, None, &[])
                .map_err(|v| Error::falsified("tree model", v.to_string()))?;
        }
        BlowupOutcome::Certificate(cert) => {
            let widths = verify_blowup(g, cert).map_err(|v| Error::falsified("tree blow-up", v.to_string()))?;
            let bound = (2 * t.height() as i64 - 1).max(0);
            if widths.partition > c || widths.host > bound {
                let v = Violation::WidthBound {
                    field: "host",
                    width: widths.host,
                    bound,
                };
                return Err(Error::falsified("tree blow-up", v.to_string()));
            }
        }
    }
    Ok(out)
}

fn per_component(g: &Graph, t: &RootedTree, c: usize) -> Result<BlowupOutcome> {
    let mut pieces = Vec::new();
    for comp in g.connected_components() {
        let (gc, origin) = g.induced_subgraph(&comp);
        match decompose_rooted(t, &gc, 0, c)? {
            Step::Done(d) => pieces.push(d.relabel(&origin)),
            Step::Minor(m) => return Ok(BlowupOutcome::Counterexample(m.map(|v| origin[v]))),
        }
    }
    let d = Kppd::concat(pieces, c);
    let mut cert = certificate(c, d.partition.into_parts(), d.bags);
    cert.canonicalize();
    Ok(BlowupOutcome::Certificate(cert))
}
