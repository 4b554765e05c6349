//! Partitions, path/tree decompositions, their pair and partitioned variants,
//! and the blow-up certificate verifier.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diag::{Check, Violation};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Partition of a vertex set into nonempty parts. Part order is significant:
/// decompositions over the quotient refer to parts by index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexPartition {
    parts: Vec<VertexSet>,
}

impl VertexPartition {
    pub fn new(parts: Vec<VertexSet>) -> Self {
        VertexPartition { parts }
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition::new((0..n).map(VertexSet::singleton).collect())
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<VertexSet> {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Maximum part size (0 for the empty partition).
    pub fn width(&self) -> usize {
        self.parts.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Union of all parts.
    pub fn ground(&self) -> VertexSet {
        self.parts.iter().flat_map(|p| p.iter()).collect()
    }

    pub fn position(&self, part: &VertexSet) -> Option<usize> {
        self.parts.iter().position(|p| p == part)
    }

    /// Checks that the parts partition exactly `ground`.
    pub fn check_on(&self, ground: &VertexSet, n: usize) -> Check {
        let mut seen = vec![false; n];
        for (i, p) in self.parts.iter().enumerate() {
            if p.is_empty() {
                return Err(Violation::PartitionEmptyPart { part: i });
            }
            for v in p.iter() {
                if v >= n {
                    return Err(Violation::VertexOutOfRange { vertex: v });
                }
                if !ground.contains(v) {
                    return Err(Violation::PartitionOverlap { vertex: v });
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Violation::PartitionOverlap { vertex: v });
                }
            }
        }
        match ground.iter().find(|&v| !seen[v]) {
            Some(v) => Err(Violation::PartitionGap { vertex: v }),
            None => Ok(()),
        }
    }

    pub fn check(&self, n: usize) -> Check {
        self.check_on(&VertexSet::range(n), n)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.check(n)
            .map_err(|v| Error::InvalidPartition(v.to_string()))
    }

    /// `part_of[v]` for every `v < n` covered by the partition, `usize::MAX` otherwise.
    pub fn part_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                out[v] = i;
            }
        }
        out
    }

    /// Sorts parts by minimum vertex. Returns `old index -> new index`.
    pub fn canonicalize(&mut self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.parts.len()).collect();
        order.sort_by_key(|&i| self.parts[i].first());
        let mut remap = vec![0; self.parts.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let parts = std::mem::take(&mut self.parts);
        let mut slots: Vec<Option<VertexSet>> = parts.into_iter().map(Some).collect();
        self.parts = order.iter().map(|&i| slots[i].take().unwrap()).collect();
        remap
    }

    /// Quotient `G[ground]/P` with image vertex `i` equal to part `i`.
    pub fn quotient_graph(&self, g: &Graph) -> Graph {
        let part_of = self.part_of(g.n());
        let edges = g.edges().into_iter().filter_map(|(u, v)| {
            let (a, b) = (part_of[u], part_of[v]);
            (a != usize::MAX && b != usize::MAX && a != b).then_some((a.min(b), a.max(b)))
        });
        Graph::from_edges(self.parts.len(), edges).expect("part indices in range")
    }
}

/// Width of a sequence of bags: max bag size minus one, −1 when there is none.
fn bags_width(bags: &[VertexSet]) -> i64 {
    bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathDecomposition {
    pub bags: Vec<VertexSet>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<VertexSet>) -> Self {
        PathDecomposition { bags }
    }

    pub fn width(&self) -> i64 {
        bags_width(&self.bags)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn check(&self, g: &Graph) -> Check {
        check_path_decomposition(g, self)
    }

    pub fn to_tree(&self) -> TreeDecomposition {
        TreeDecomposition {
            edges: (1..self.bags.len()).map(|i| (i - 1, i)).collect(),
            bags: self.bags.clone(),
        }
    }
}

/// Path-decomposition axioms: coverage, contiguity, and edge coverage.
pub fn check_path_decomposition(g: &Graph, d: &PathDecomposition) -> Check {
    let n = g.n();
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0usize; n];
    let mut count = vec![0usize; n];
    for (i, bag) in d.bags.iter().enumerate() {
        for v in bag.iter() {
            if v >= n {
                return Err(Violation::VertexOutOfRange { vertex: v });
            }
            if first[v] == usize::MAX {
                first[v] = i;
            }
            last[v] = i;
            count[v] += 1;
        }
    }
    for v in 0..n {
        if count[v] == 0 {
            return Err(Violation::VertexUncovered { vertex: v });
        }
        if last[v] - first[v] + 1 != count[v] {
            return Err(Violation::NotContiguous { vertex: v });
        }
    }
    for (u, v) in g.edges() {
        // Intervals of u and v must intersect.
        if first[u].max(first[v]) > last[u].min(last[v]) {
            return Err(Violation::EdgeUncovered { u, v });
        }
    }
    Ok(())
}

/// Tree-decomposition with skeleton nodes `0..bags.len()`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub edges: Vec<(usize, usize)>,
    pub bags: Vec<VertexSet>,
}

impl TreeDecomposition {
    pub fn width(&self) -> i64 {
        bags_width(&self.bags)
    }

    pub fn check(&self, g: &Graph) -> Check {
        check_tree_decomposition(g, self)
    }

    /// Appends `other`'s nodes, returning the node offset applied to them.
    pub fn append(&mut self, other: TreeDecomposition) -> usize {
        let off = self.bags.len();
        self.bags.extend(other.bags);
        self.edges
            .extend(other.edges.into_iter().map(|(a, b)| (a + off, b + off)));
        off
    }
}

pub fn check_tree_decomposition(g: &Graph, d: &TreeDecomposition) -> Check {
    let nodes = d.bags.len();
    if nodes == 0 {
        return match g.n() {
            0 => Ok(()),
            _ => Err(Violation::VertexUncovered { vertex: 0 }),
        };
    }
    if d.edges.len() + 1 != nodes {
        return Err(Violation::SkeletonNotTree);
    }
    if d.edges.iter().any(|&(a, b)| a >= nodes || b >= nodes || a == b) {
        return Err(Violation::SkeletonNotTree);
    }
    let skeleton = Graph::from_edges(nodes, d.edges.iter().copied())
        .map_err(|_| Violation::SkeletonNotTree)?;
    if skeleton.m() != d.edges.len() || !skeleton.is_connected() {
        return Err(Violation::SkeletonNotTree);
    }

    let n = g.n();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (x, bag) in d.bags.iter().enumerate() {
        for v in bag.iter() {
            if v >= n {
                return Err(Violation::VertexOutOfRange { vertex: v });
            }
            holders[v].push(x);
        }
    }
    for (v, h) in holders.iter().enumerate() {
        if h.is_empty() {
            return Err(Violation::VertexUncovered { vertex: v });
        }
        if !skeleton.is_connected_set(&VertexSet::from(h.clone())) {
            return Err(Violation::SubtreeDisconnected { vertex: v });
        }
    }
    for (u, v) in g.edges() {
        if !d.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            return Err(Violation::EdgeUncovered { u, v });
        }
    }
    Ok(())
}

/// Hanging components of `G − H`, each keyed by its minimum vertex.
fn hanging_components(g: &Graph, subgraph: &VertexSet) -> Vec<VertexSet> {
    g.components_within(&g.vertices().difference(subgraph))
}

fn check_hangs<F>(g: &Graph, subgraph: &VertexSet, hang_map: &BTreeMap<usize, usize>, bag_count: usize, covers: F) -> Check
where
    F: Fn(usize, usize) -> bool,
{
    let comps = hanging_components(g, subgraph);
    for key in hang_map.keys() {
        if !comps.iter().any(|c| c.first() == Some(*key)) {
            return Err(Violation::HangUnknownComponent { component: *key });
        }
    }
    for c in &comps {
        let key = c.first().unwrap();
        let bag = *hang_map
            .get(&key)
            .ok_or(Violation::HangMissing { component: key })?;
        if bag >= bag_count {
            return Err(Violation::BagIndexOutOfRange { bag });
        }
        let nb = g.neighborhood(c).expect("component in range");
        let uncovered = nb.iter().find(|&v| !covers(bag, v));
        if let Some(v) = uncovered {
            return Err(Violation::HangUncovered {
                component: key,
                vertex: v,
            });
        }
    }
    Ok(())
}

/// Path-decomposition of a pair `(G, S)`: an induced subgraph `H ⊇ S`, a
/// path-decomposition of `H` (bags over original ids), and for each component
/// of `G − V(H)` a bag holding its whole neighborhood.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairPathDecomposition {
    pub subgraph: VertexSet,
    pub bags: PathDecomposition,
    pub hang_map: BTreeMap<usize, usize>,
}

impl PairPathDecomposition {
    pub fn width(&self) -> i64 {
        self.bags.width()
    }

    /// Fills `hang_map` with the first bag covering each hanging component.
    pub fn attach_hangs(&mut self, g: &Graph) -> Result<()> {
        self.hang_map.clear();
        for c in hanging_components(g, &self.subgraph) {
            let nb = g.neighborhood(&c)?;
            let bag = self
                .bags
                .bags
                .iter()
                .position(|b| nb.is_subset(b))
                .ok_or_else(|| Error::contract(format!("no bag covers N({c:?})")))?;
            self.hang_map.insert(c.first().unwrap(), bag);
        }
        Ok(())
    }

    /// Removes `x` from the subgraph and from every bag.
    pub fn restrict_away(&self, g: &Graph, x: &VertexSet) -> Result<PairPathDecomposition> {
        let mut out = PairPathDecomposition {
            subgraph: self.subgraph.difference(x),
            bags: PathDecomposition::new(self.bags.bags.iter().map(|b| b.difference(x)).collect()),
            hang_map: BTreeMap::new(),
        };
        let alive = g.vertices().difference(x);
        out.hang_map.clear();
        for c in g.components_within(&alive.difference(&out.subgraph)) {
            let nb = g.neighborhood(&c)?.difference(x);
            let bag = out
                .bags
                .bags
                .iter()
                .position(|b| nb.is_subset(b))
                .ok_or_else(|| Error::contract("restriction lost a hanging bag"))?;
            out.hang_map.insert(c.first().unwrap(), bag);
        }
        Ok(out)
    }
}

pub fn check_pair_path_decomposition(g: &Graph, s: &VertexSet, d: &PairPathDecomposition) -> Check {
    if let Some(v) = d.subgraph.iter().find(|&v| v >= g.n()) {
        return Err(Violation::VertexOutOfRange { vertex: v });
    }
    if let Some(v) = s.iter().find(|&v| !d.subgraph.contains(v)) {
        return Err(Violation::SubgraphMissing { vertex: v });
    }
    let (h, origin) = g.induced_subgraph(&d.subgraph);
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in origin.iter().enumerate() {
        local[v] = i;
    }
    let mut bags = Vec::with_capacity(d.bags.len());
    for b in &d.bags.bags {
        if let Some(v) = b.iter().find(|&v| v >= g.n() || local[v] == usize::MAX) {
            return Err(Violation::VertexOutOfRange { vertex: v });
        }
        bags.push(b.map(|v| local[v]));
    }
    check_path_decomposition(&h, &PathDecomposition::new(bags))?;
    check_hangs(g, &d.subgraph, &d.hang_map, d.bags.len(), |bag, v| {
        d.bags.bags[bag].contains(v)
    })
}

/// k-partition-path-decomposition of `(G, S)`: induced subgraph `H ⊇ S`, a
/// partition of `V(H)` into parts of size at most `k`, a path-decomposition
/// of `H/partition` (bags hold part indices), and hanging bags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Kppd {
    pub subgraph: VertexSet,
    pub partition: VertexPartition,
    pub bags: Vec<VertexSet>,
    pub hang_map: BTreeMap<usize, usize>,
    pub k: usize,
}

impl Kppd {
    /// The one-vertex decomposition `{{r}}` with a single bag.
    pub fn trivial(r: usize, k: usize) -> Kppd {
        Kppd {
            subgraph: VertexSet::singleton(r),
            partition: VertexPartition::new(vec![VertexSet::singleton(r)]),
            bags: vec![VertexSet::singleton(0)],
            hang_map: BTreeMap::new(),
            k,
        }
    }

    pub fn width(&self) -> i64 {
        bags_width(&self.bags)
    }

    /// Union of the parts listed in bag `b`.
    pub fn bag_vertices(&self, b: usize) -> VertexSet {
        self.bags[b]
            .iter()
            .flat_map(|p| self.partition.parts()[p].iter())
            .collect()
    }

    pub fn part_index(&self, part: &VertexSet) -> Option<usize> {
        self.partition.position(part)
    }

    /// Recomputes `hang_map` by scanning bags for one covering each component.
    pub fn attach_hangs(&mut self, g: &Graph) -> Result<()> {
        self.hang_map.clear();
        let unions: Vec<VertexSet> = (0..self.bags.len()).map(|b| self.bag_vertices(b)).collect();
        for c in hanging_components(g, &self.subgraph) {
            let nb = g.neighborhood(&c)?;
            let bag = unions
                .iter()
                .position(|u| nb.is_subset(u))
                .ok_or_else(|| Error::contract(format!("no bag covers N({c:?})")))?;
            self.hang_map.insert(c.first().unwrap(), bag);
        }
        Ok(())
    }

    /// Relabels every vertex through `origin` (a subgraph's origin table).
    pub fn relabel(&self, origin: &[usize]) -> Kppd {
        Kppd {
            subgraph: self.subgraph.map(|v| origin[v]),
            partition: VertexPartition::new(
                self.partition.parts().iter().map(|p| p.map(|v| origin[v])).collect(),
            ),
            bags: self.bags.clone(),
            hang_map: BTreeMap::new(),
            k: self.k,
        }
    }

    /// Sorts parts by minimum vertex and renumbers bags accordingly.
    pub fn canonicalize(&mut self) {
        let remap = self.partition.canonicalize();
        for b in &mut self.bags {
            *b = b.map(|p| remap[p]);
        }
    }

    /// Places several decompositions (over disjoint vertex sets) side by side.
    pub fn concat(parts: Vec<Kppd>, k: usize) -> Kppd {
        let mut out = Kppd {
            k,
            ..Kppd::default()
        };
        let mut all_parts = Vec::new();
        let mut subgraph = VertexSet::new();
        for d in parts {
            let off = all_parts.len();
            subgraph = subgraph.union(&d.subgraph);
            all_parts.extend(d.partition.into_parts());
            out.bags.extend(d.bags.into_iter().map(|b| b.map(|p| p + off)));
        }
        out.subgraph = subgraph;
        out.partition = VertexPartition::new(all_parts);
        out
    }
}

pub fn check_kppd(g: &Graph, s: &VertexSet, d: &Kppd) -> Check {
    if let Some(v) = d.subgraph.iter().find(|&v| v >= g.n()) {
        return Err(Violation::VertexOutOfRange { vertex: v });
    }
    if let Some(v) = s.iter().find(|&v| !d.subgraph.contains(v)) {
        return Err(Violation::SubgraphMissing { vertex: v });
    }
    d.partition.check_on(&d.subgraph, g.n())?;
    if d.partition.width() > d.k {
        return Err(Violation::PartitionWidth {
            width: d.partition.width(),
            limit: d.k,
        });
    }
    if let Some(b) = d
        .bags
        .iter()
        .flat_map(|b| b.iter())
        .find(|&p| p >= d.partition.len())
    {
        return Err(Violation::BagIndexOutOfRange { bag: b });
    }
    let quotient = d.partition.quotient_graph(g);
    check_path_decomposition(&quotient, &PathDecomposition::new(d.bags.clone()))?;
    if !hanging_components(g, &d.subgraph).is_empty() && d.bags.is_empty() {
        return Err(Violation::HangMissing {
            component: g.vertices().difference(&d.subgraph).first().unwrap(),
        });
    }
    let unions: Vec<VertexSet> = (0..d.bags.len()).map(|b| d.bag_vertices(b)).collect();
    check_hangs(g, &d.subgraph, &d.hang_map, d.bags.len(), |bag, v| {
        unions[bag].contains(v)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    #[serde(rename = "tree-blowup")]
    Tree,
    #[serde(rename = "apex-blowup")]
    Apex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Host {
    Path(PathDecomposition),
    Tree(TreeDecomposition),
}

impl Host {
    pub fn width(&self) -> i64 {
        match self {
            Host::Path(d) => d.width(),
            Host::Tree(d) => d.width(),
        }
    }

    pub fn check(&self, quotient: &Graph) -> Check {
        match self {
            Host::Path(d) => check_path_decomposition(quotient, d),
            Host::Tree(d) => check_tree_decomposition(quotient, d),
        }
    }
}

/// Witness that `G ⊆ H ⊠ K_c`: a partition of `V(G)` of width at most `c`
/// and a decomposition of the quotient `G/P` (which plays the role of `H`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupCertificate {
    pub kind: CertificateKind,
    pub clique_size: usize,
    pub partition: VertexPartition,
    pub host: Host,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupWidths {
    pub partition: usize,
    pub host: i64,
}

impl BlowupCertificate {
    /// Sorts parts by minimum vertex and every bag ascending, for byte-stable output.
    pub fn canonicalize(&mut self) {
        let remap = self.partition.canonicalize();
        let fix = |bags: &mut Vec<VertexSet>| {
            for b in bags.iter_mut() {
                *b = b.map(|p| remap[p]);
            }
        };
        match &mut self.host {
            Host::Path(d) => fix(&mut d.bags),
            Host::Tree(d) => {
                fix(&mut d.bags);
                for e in &mut d.edges {
                    *e = (e.0.min(e.1), e.0.max(e.1));
                }
                d.edges.sort_unstable();
            }
        }
    }

    /// `v ↦ (part, index within part)`, the explicit embedding into `H ⊠ K_c`.
    pub fn embedding(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = vec![(usize::MAX, usize::MAX); n];
        for (p, part) in self.partition.parts().iter().enumerate() {
            for (i, v) in part.iter().enumerate() {
                if v < n {
                    out[v] = (p, i);
                }
            }
        }
        out
    }
}

/// Checks a blow-up certificate against `g` and returns the widths it achieves.
pub fn verify_blowup(g: &Graph, cert: &BlowupCertificate) -> Result<BlowupWidths, Violation> {
    let n = g.n();
    cert.partition.check(n)?;
    let width = cert.partition.width();
    if width > cert.clique_size.max(1) && n > 0 {
        return Err(Violation::PartitionWidth {
            width,
            limit: cert.clique_size,
        });
    }
    let host = cert.partition.quotient_graph(g);
    cert.host.check(&host)?;

    let emb = cert.embedding(n);
    let mut used = std::collections::HashSet::new();
    for (v, &(p, i)) in emb.iter().enumerate() {
        if p == usize::MAX || i >= cert.clique_size.max(1) || !used.insert((p, i)) {
            return Err(Violation::PartitionOverlap { vertex: v });
        }
    }
    for (u, v) in g.edges() {
        let ((pu, _), (pv, _)) = (emb[u], emb[v]);
        if pu != pv && !host.has_edge(pu, pv) {
            return Err(Violation::EmbeddingEdge { u, v });
        }
    }
    Ok(BlowupWidths {
        partition: width,
        host: cert.host.width(),
    })
}

/// Concatenates path-decompositions of vertex-disjoint graphs.
pub fn concat_path_decompositions(parts: impl IntoIterator<Item = PathDecomposition>) -> PathDecomposition {
    PathDecomposition::new(parts.into_iter().flat_map(|d| d.bags).collect())
}

pub fn partition_width(p: &VertexPartition) -> usize {
    p.width()
}

pub fn decomposition_width(h: &Host) -> i64 {
    h.width()
}
