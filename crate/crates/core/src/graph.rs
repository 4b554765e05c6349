//! Simple undirected graphs over dense vertex ids and the elementary
//! operations the decomposition algorithms are built from.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decomp::VertexPartition;
use crate::error::{Error, Result};

/// Bitmask over at most 64 vertices, used by the exact searches.
pub type Mask = u64;

pub const MASK_LIMIT: usize = 64;

#[inline]
pub fn bit(v: usize) -> Mask {
    1u64 << v
}

/// Iterates the set bits of a mask in ascending order.
pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn range(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn from_mask(m: Mask) -> Self {
        VertexSet(bits(m).collect())
    }

    /// Panics if a member is 64 or larger; callers guard with [`MASK_LIMIT`].
    pub fn to_mask(&self) -> Mask {
        self.0.iter().fold(0, |m, &v| m | bit(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    /// Maps every member through `f` (e.g. an origin table) and re-sorts.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> VertexSet {
        self.iter().map(f).collect()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(a: [usize; N]) -> Self {
        VertexSet::from(a.to_vec())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Result of contracting or relabeling: the image graph plus, for each image
/// vertex, the set of original vertices it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    pub image: Graph,
    pub origin: Vec<VertexSet>,
}

impl ContractionMap {
    /// Image vertex representing original vertex `v`, if it survived.
    pub fn image_of(&self, v: usize) -> Option<usize> {
        self.origin.iter().position(|o| o.contains(v))
    }

    /// Union of origins of the given image vertices.
    pub fn lift_set(&self, s: &VertexSet) -> VertexSet {
        s.iter().flat_map(|x| self.origin[x].iter()).collect()
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list; duplicate edges collapse, loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("valid edges")
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid edges")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least three vertices");
        let edges = (0..n).map(|v| (v, (v + 1) % n));
        Graph::from_edges(n, edges).expect("valid edges")
    }

    /// Star K_{1,leaves} with center 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid edges")
    }

    /// rows × cols grid, vertex (i, j) numbered i·cols + j.
    pub fn grid(rows: usize, cols: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                let v = i * cols + j;
                if j + 1 < cols {
                    edges.push((v, v + 1));
                }
                if i + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::from_edges(rows * cols, edges).expect("valid edges")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(self.n())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.last() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// Vertices outside `s` adjacent to some vertex of `s`.
    pub fn neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        Ok(s.iter()
            .flat_map(|v| self.adj[v].iter().copied())
            .filter(|&w| !s.contains(w))
            .collect())
    }

    /// Vertices of `s` with a neighbor outside `s`.
    pub fn boundary(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        Ok(s.iter()
            .filter(|&v| self.adj[v].iter().any(|&w| !s.contains(w)))
            .collect())
    }

    /// `G[s]` relabeled to `0..|s|`; `origin[i]` is the original id of vertex `i`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let origin: Vec<usize> = s.iter().collect();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in origin.iter().enumerate() {
            index[v] = i;
        }
        let adj = origin
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| index[w] != usize::MAX)
                    .map(|&w| index[w])
                    .collect()
            })
            .collect();
        (Graph { adj }, origin)
    }

    pub fn delete_vertices(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        self.induced_subgraph(&self.vertices().difference(s))
    }

    /// Connected components ordered by minimum vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices())
    }

    /// Components of `G[alive]`, ordered by minimum vertex.
    pub fn components_within(&self, alive: &VertexSet) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in alive.iter() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] && alive.contains(w) {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            out.push(VertexSet::from(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Whether `s` is nonempty and induces a connected subgraph.
    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        !s.is_empty() && self.components_within(s).len() == 1
    }

    /// Distance layers from `r`; vertices not reachable from `r` are omitted.
    pub fn bfs_layers(&self, r: usize) -> Result<Vec<VertexSet>> {
        self.check_vertex(r)?;
        let dist = self.distances(r);
        let depth = dist.iter().flatten().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); depth + 1];
        for (v, d) in dist.iter().enumerate() {
            if let Some(d) = d {
                layers[*d].push(v);
            }
        }
        Ok(layers.into_iter().map(VertexSet::from).collect())
    }

    pub fn distances(&self, r: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[r] = Some(0);
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest `r`–`v` path whose internal vertices avoid `forbidden`.
    /// The endpoints themselves may lie in `forbidden`.
    pub fn path_avoiding(&self, r: usize, v: usize, forbidden: &VertexSet) -> Option<Vec<usize>> {
        if r == v {
            return Some(vec![r]);
        }
        let mut pred = vec![usize::MAX; self.n()];
        pred[r] = r;
        let mut queue = VecDeque::from([r]);
        while let Some(x) = queue.pop_front() {
            if x != r && forbidden.contains(x) {
                continue;
            }
            for &w in &self.adj[x] {
                if pred[w] == usize::MAX {
                    pred[w] = x;
                    if w == v {
                        let mut path = vec![v];
                        let mut cur = v;
                        while cur != r {
                            cur = pred[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Contracts `s` into a single vertex; every other vertex survives as a singleton.
    pub fn contract_connected_set(&self, s: &VertexSet) -> Result<ContractionMap> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_set(s)?;
        if !self.is_connected_set(s) {
            return Err(Error::Disconnected);
        }
        let mut groups = vec![s.clone()];
        groups.extend(self.vertices().difference(s).iter().map(VertexSet::singleton));
        self.contract_groups(groups)
    }

    /// Contracts each group (disjoint, each connected) into one vertex.
    /// Vertices in no group are deleted. Image vertices are ordered by
    /// the minimum original vertex of their group.
    pub fn contract_groups(&self, mut groups: Vec<VertexSet>) -> Result<ContractionMap> {
        let mut owner = vec![usize::MAX; self.n()];
        groups.sort_by_key(|g| g.first());
        for (i, g) in groups.iter().enumerate() {
            if g.is_empty() {
                return Err(Error::EmptySet);
            }
            self.check_set(g)?;
            for v in g.iter() {
                if owner[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {v} in two groups")));
                }
                owner[v] = i;
            }
        }
        let mut edges = Vec::new();
        for (u, v) in self.edges() {
            let (a, b) = (owner[u], owner[v]);
            if a != usize::MAX && b != usize::MAX && a != b {
                edges.push((a.min(b), a.max(b)));
            }
        }
        let image = Graph::from_edges(groups.len(), edges)?;
        Ok(ContractionMap {
            image,
            origin: groups,
        })
    }

    /// The quotient `G/P`; image vertex `i` is the part with the `i`-th smallest minimum.
    pub fn quotient(&self, p: &VertexPartition) -> Result<ContractionMap> {
        p.validate(self.n())?;
        self.contract_groups(p.parts().to_vec())
    }

    /// Strong product; vertex `(v, w)` is encoded as `v * |V(H)| + w`.
    pub fn strong_product(&self, h: &Graph) -> Graph {
        let nh = h.n();
        let mut edges = Vec::new();
        for v in 0..self.n() {
            let mut row: Vec<usize> = self.adj[v].clone();
            row.push(v);
            for &v2 in &row {
                for w in 0..nh {
                    let mut col: Vec<usize> = h.adj[w].clone();
                    col.push(w);
                    for &w2 in &col {
                        let a = v * nh + w;
                        let b = v2 * nh + w2;
                        if a < b {
                            edges.push((a, b));
                        }
                    }
                }
            }
        }
        Graph::from_edges(self.n() * nh, edges).expect("valid edges")
    }

    /// Adjacency bitmasks; fails for graphs with more than 64 vertices.
    pub fn masks(&self) -> Result<Vec<Mask>> {
        if self.n() > MASK_LIMIT {
            return Err(Error::SizeLimit {
                what: "graph (bitmask routines)",
                actual: self.n(),
                limit: MASK_LIMIT,
            });
        }
        Ok(self
            .adj
            .iter()
            .map(|l| l.iter().fold(0, |m, &w| m | bit(w)))
            .collect())
    }

    /// Adds the edges of a clique on `s` (used to force `s` into one bag).
    pub fn with_clique(&self, s: &VertexSet) -> Graph {
        let mut edges = self.edges();
        let members = s.as_slice();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                edges.push((u, v));
            }
        }
        Graph::from_edges(self.n(), edges).expect("valid edges")
    }
}

/// Mask-level helpers shared by the exact searches.
pub(crate) fn mask_neighborhood(adj: &[Mask], s: Mask) -> Mask {
    bits(s).fold(0, |acc, v| acc | adj[v]) & !s
}

pub(crate) fn mask_component(adj: &[Mask], start: usize, alive: Mask) -> Mask {
    let mut comp = bit(start);
    let mut frontier = comp;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= adj[v];
        }
        next &= alive & !comp;
        comp |= next;
        frontier = next;
    }
    comp
}

pub(crate) fn mask_is_connected(adj: &[Mask], s: Mask) -> bool {
    s != 0 && mask_component(adj, s.trailing_zeros() as usize, s) == s
}

pub(crate) fn mask_components(adj: &[Mask], mut alive: Mask) -> Vec<Mask> {
    let mut out = Vec::new();
    while alive != 0 {
        let c = mask_component(adj, alive.trailing_zeros() as usize, alive);
        out.push(c);
        alive &= !c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        Graph::cycle(4)
    }

    #[test]
    fn neighborhood_examples() {
        assert_eq!(c4().neighborhood(&[0].into()).unwrap(), [1, 3].into());
        assert_eq!(c4().neighborhood(&c4().vertices()).unwrap(), VertexSet::new());
        assert_eq!(Graph::path(4).neighborhood(&[1, 2].into()).unwrap(), [0, 3].into());
        assert!(c4().neighborhood(&[7].into()).is_err());
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(c4().boundary(&[0, 1].into()).unwrap(), [0, 1].into());
        assert!(c4().boundary(&c4().vertices()).unwrap().is_empty());
        assert_eq!(Graph::path(4).boundary(&[0, 1].into()).unwrap(), [1].into());
    }

    #[test]
    fn quotient_examples() {
        let p = VertexPartition::new(vec![[0, 1].into(), [2, 3].into()]);
        let q = c4().quotient(&p).unwrap();
        assert_eq!(q.image, Graph::complete(2));

        let singletons = VertexPartition::singletons(4);
        assert_eq!(c4().quotient(&singletons).unwrap().image, c4());

        let p = VertexPartition::new(vec![[0].into(), [1, 2].into(), [3].into()]);
        assert_eq!(Graph::path(4).quotient(&p).unwrap().image, Graph::path(3));

        let bad = VertexPartition::new(vec![[0, 1].into(), [1, 2, 3].into()]);
        assert!(c4().quotient(&bad).is_err());
        let gap = VertexPartition::new(vec![[0, 1].into(), [2].into()]);
        assert!(c4().quotient(&gap).is_err());
    }

    #[test]
    fn strong_product_examples() {
        let k2 = Graph::path(2);
        assert_eq!(k2.strong_product(&k2), Graph::complete(4));
        let g = Graph::cycle(5);
        assert_eq!(g.strong_product(&Graph::complete(1)), g);
        // P3 ⊠ K2 counted directly from the adjacency definition.
        let p3 = Graph::path(3);
        let prod = p3.strong_product(&k2);
        let mut expected = 0;
        for a in 0..6usize {
            for b in a + 1..6 {
                let (v, w, v2, w2) = (a / 2, a % 2, b / 2, b % 2);
                let c1 = v == v2 || p3.has_edge(v, v2);
                let c2 = w == w2 || k2.has_edge(w, w2);
                if c1 && c2 {
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, 11);
        assert_eq!(prod.n(), 6);
        assert_eq!(prod.m(), 11);
    }

    #[test]
    fn contraction_examples() {
        let cm = Graph::path(4).contract_connected_set(&[1, 2].into()).unwrap();
        assert_eq!(cm.image, Graph::path(3));
        assert_eq!(cm.origin[1], [1, 2].into());

        let k = c4().contract_connected_set(&c4().vertices()).unwrap();
        assert_eq!(k.image.n(), 1);

        // Contracting {0,1} in C4 leaves a vertex adjacent to 2 and 3, with 2-3 an edge: a triangle.
        let cm = c4().contract_connected_set(&[0, 1].into()).unwrap();
        assert_eq!(cm.image, Graph::complete(3));

        assert!(matches!(
            c4().contract_connected_set(&[0, 2].into()),
            Err(Error::Disconnected)
        ));
        assert!(matches!(
            c4().contract_connected_set(&VertexSet::new()),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn bfs_layer_examples() {
        let layers = Graph::path(4).bfs_layers(0).unwrap();
        assert_eq!(layers, vec![[0].into(), [1].into(), [2].into(), [3].into()]);
        let layers = Graph::complete(4).bfs_layers(2).unwrap();
        assert_eq!(layers, vec![[2].into(), [0, 1, 3].into()]);
        let layers = c4().bfs_layers(0).unwrap();
        assert_eq!(layers, vec![[0].into(), [1, 3].into(), [2].into()]);
    }

    #[test]
    fn path_avoiding_respects_forbidden_interior() {
        let g = c4();
        assert_eq!(g.path_avoiding(0, 2, &[1].into()), Some(vec![0, 3, 2]));
        assert_eq!(g.path_avoiding(0, 2, &[1, 3].into()), None);
        assert_eq!(g.path_avoiding(0, 1, &[1].into()), Some(vec![0, 1]));
    }

    #[test]
    fn empty_graph_is_fine() {
        let g = Graph::empty(0);
        assert!(g.connected_components().is_empty());
        assert!(g.is_connected());
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }
}
