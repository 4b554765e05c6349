use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Serialize, Deserialize)]
struct TreeJson {
    t: usize,
    edges: Vec<(usize, usize)>,
    root: usize,
}

/// Rooted tree on pattern vertices `0..t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    root: usize,
    children: Vec<Vec<usize>>,
}

impl TryFrom<TreeJson> for RootedTree {
    type Error = Error;

    fn try_from(j: TreeJson) -> Result<Self> {
        RootedTree::from_edges(j.t, &j.edges, j.root)
    }
}

impl From<RootedTree> for TreeJson {
    fn from(t: RootedTree) -> Self {
        TreeJson {
            t: t.t(),
            edges: t.edges(),
            root: t.root,
        }
    }
}

impl RootedTree {
    pub fn from_edges(t: usize, edges: &[(usize, usize)], root: usize) -> Result<RootedTree> {
        if t == 0 {
            return Err(Error::InvalidPattern("tree with no vertices".into()));
        }
        if root >= t {
            return Err(Error::InvalidPattern(format!("root {root} out of range")));
        }
        if edges.len() + 1 != t {
            return Err(Error::InvalidPattern(format!(
                "{} edges on {t} vertices is not a tree",
                edges.len()
            )));
        }
        let g = Graph::from_edges(t, edges.iter().copied())
            .map_err(|e| Error::InvalidPattern(e.to_string()))?;
        if g.m() != edges.len() || !g.is_connected() {
            return Err(Error::InvalidPattern("edges do not form a tree".into()));
        }
        Ok(Self::from_graph(&g, root))
    }

    /// Roots a tree graph at `root`. The graph must be a tree.
    fn from_graph(g: &Graph, root: usize) -> RootedTree {
        let t = g.n();
        let mut parent = vec![None; t];
        let mut children = vec![Vec::new(); t];
        let mut seen = vec![false; t];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                    stack.push(w);
                }
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }
        RootedTree {
            parent,
            root,
            children,
        }
    }

    /// Roots at a center (minimum eccentricity, ties to the smallest id), so
    /// that the height equals the radius.
    pub fn rooted_at_center(t: usize, edges: &[(usize, usize)]) -> Result<RootedTree> {
        let tree = RootedTree::from_edges(t, edges, 0)?;
        let g = tree.as_graph();
        let ecc = |v: usize| g.distances(v).into_iter().flatten().max().unwrap_or(0);
        let center = (0..t).min_by_key(|&v| (ecc(v), v)).unwrap();
        Ok(Self::from_graph(&g, center))
    }

    pub fn single() -> RootedTree {
        RootedTree::from_edges(1, &[], 0).unwrap()
    }

    /// Path on `t` vertices rooted at endpoint 0.
    pub fn path(t: usize) -> RootedTree {
        let edges: Vec<_> = (1..t).map(|i| (i - 1, i)).collect();
        RootedTree::from_edges(t, &edges, 0).expect("path is a tree")
    }

    /// Star with `leaves` leaves, rooted at the center 0.
    pub fn star(leaves: usize) -> RootedTree {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        RootedTree::from_edges(leaves + 1, &edges, 0).expect("star is a tree")
    }

    pub fn t(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Edges as `(parent, child)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = (0..self.t())
            .filter_map(|v| self.parent[v].map(|p| (p.min(v), p.max(v))))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn as_graph(&self) -> Graph {
        Graph::from_edges(self.t(), self.edges()).expect("tree edges in range")
    }

    pub fn depth(&self, v: usize) -> usize {
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Maximum distance from the root.
    pub fn height(&self) -> usize {
        (0..self.t()).map(|v| self.depth(v)).max().unwrap_or(0)
    }

    /// Maximum (unrooted) degree.
    pub fn max_degree(&self) -> usize {
        (0..self.t())
            .map(|v| self.children[v].len() + usize::from(self.parent[v].is_some()))
            .max()
            .unwrap_or(0)
    }

    /// Vertices in preorder, children visited in ascending id order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.t());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    /// Vertices of the subtree at `v` in preorder; this is the relabeling
    /// used by [`RootedTree::subtree`].
    pub fn subtree_vertices(&self, v: usize) -> Vec<usize> {
        let mut order = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            order.push(x);
            stack.extend(self.children[x].iter().rev());
        }
        order
    }

    /// The subtree hanging at `v`, relabeled in preorder with `v` as root 0.
    pub fn subtree(&self, v: usize) -> RootedTree {
        let order = self.subtree_vertices(v);
        let mut index = vec![usize::MAX; self.t()];
        for (i, &x) in order.iter().enumerate() {
            index[x] = i;
        }
        let edges: Vec<_> = order[1..]
            .iter()
            .map(|&x| (index[self.parent[x].unwrap()], index[x]))
            .collect();
        RootedTree::from_edges(order.len(), &edges, 0).expect("subtree is a tree")
    }

    /// The forest obtained by deleting the root: one rooted subtree per child.
    pub fn child_forest(&self) -> RootedForest {
        RootedForest::new(self.children[self.root].iter().map(|&c| self.subtree(c)).collect())
    }

    /// `map[i]` is the vertex of this tree that vertex `i` of
    /// [`RootedTree::child_forest`] (global numbering) comes from.
    pub fn child_forest_map(&self) -> Vec<usize> {
        self.children[self.root]
            .iter()
            .flat_map(|&c| self.subtree_vertices(c))
            .collect()
    }

    /// `T⁺`: the tree plus a vertex `t` adjacent to every vertex.
    pub fn plus_apex(&self) -> Graph {
        let t = self.t();
        let mut edges = self.edges();
        edges.extend((0..t).map(|v| (v, t)));
        Graph::from_edges(t + 1, edges).expect("apex edges in range")
    }
}

/// Disjoint union of rooted trees. Pattern vertices are numbered tree by tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootedForest {
    pub trees: Vec<RootedTree>,
}

impl RootedForest {
    pub fn new(trees: Vec<RootedTree>) -> RootedForest {
        RootedForest { trees }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Total number of pattern vertices.
    pub fn size(&self) -> usize {
        self.trees.iter().map(RootedTree::t).sum()
    }

    /// Offset of tree `i` in the global pattern numbering.
    pub fn offset(&self, i: usize) -> usize {
        self.trees[..i].iter().map(RootedTree::t).sum()
    }

    /// Global ids of the roots.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.len())
            .map(|i| self.offset(i) + self.trees[i].root())
            .collect()
    }

    /// Parent array over the global numbering.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut out = Vec::with_capacity(self.size());
        for (i, tree) in self.trees.iter().enumerate() {
            let off = self.offset(i);
            out.extend((0..tree.t()).map(|v| tree.parent(v).map(|p| p + off)));
        }
        out
    }

    pub fn as_graph(&self) -> Graph {
        let parents = self.parents();
        let edges = parents
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)));
        Graph::from_edges(parents.len(), edges).expect("forest edges in range")
    }
}
