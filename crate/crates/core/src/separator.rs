//! Separations, Menger paths, havens from the cops-and-robber game, and the
//! search for a separation of order `w` that left-contains a tree on `w`
//! vertices with a connected right side. Exhaustive, for small graphs only.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::decomp::TreeDecomposition;
use crate::diag::{Check, Violation};
use crate::error::{Error, Result};
use crate::graph::{bits, mask_component, mask_components, mask_neighborhood, Graph, Mask, VertexSet};
use crate::models::{check_model, find_rooted_tree_model, MinorModel, RootedTree};
use crate::oracles::exact_treewidth;

pub const HAVEN_VERTEX_LIMIT: usize = 12;
pub const HAVEN_ORDER_LIMIT: usize = 6;
pub const SEPARATION_LIMIT: usize = 10;

/// A pair `(A, B)` with `A ∪ B = V(G)` and no edge between `A ∖ B` and `B ∖ A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    #[serde(rename = "A")]
    pub a: VertexSet,
    #[serde(rename = "B")]
    pub b: VertexSet,
}

impl Separation {
    pub fn order(&self) -> usize {
        self.separator().len()
    }

    pub fn separator(&self) -> VertexSet {
        self.a.intersection(&self.b)
    }

    pub fn check(&self, g: &Graph) -> Check {
        if let Some(v) = self.a.union(&self.b).iter().find(|&v| v >= g.n()) {
            return Err(Violation::VertexOutOfRange { vertex: v });
        }
        if let Some(v) = (0..g.n()).find(|&v| !self.a.contains(v) && !self.b.contains(v)) {
            return Err(Violation::SeparationCover { vertex: v });
        }
        for (u, v) in g.edges() {
            let inside = |s: &VertexSet| s.contains(u) && s.contains(v);
            if !inside(&self.a) && !inside(&self.b) {
                return Err(Violation::SeparationEdge { u, v });
            }
        }
        Ok(())
    }
}

/// Unit-capacity vertex flow network: `v_in = 2v`, `v_out = 2v + 1`,
/// source `2n`, sink `2n + 1`.
struct Flow {
    cap: Vec<HashMap<usize, i32>>,
}

impl Flow {
    fn add(&mut self, a: usize, b: usize, c: i32) {
        *self.cap[a].entry(b).or_insert(0) += c;
        self.cap[b].entry(a).or_insert(0);
    }

    fn reachable(&self, s: usize) -> (Vec<bool>, Vec<usize>) {
        let mut seen = vec![false; self.cap.len()];
        let mut prev = vec![usize::MAX; self.cap.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let mut next: Vec<usize> = self.cap[x].iter().filter(|&(_, &c)| c > 0).map(|(&y, _)| y).collect();
            next.sort_unstable();
            for y in next {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        (seen, prev)
    }
}

/// A separation `(A, B)` with `X ⊆ A`, `Y ⊆ B`, and `|A ∩ B|` pairwise
/// disjoint `X`–`Y` paths (a vertex of `X ∩ Y` is a one-vertex path).
pub fn menger(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<(Separation, Vec<Vec<usize>>)> {
    g.check_set(x)?;
    g.check_set(y)?;
    let n = g.n();
    let (src, snk) = (2 * n, 2 * n + 1);
    let big = n as i32 + 1;
    let mut f = Flow {
        cap: vec![HashMap::new(); 2 * n + 2],
    };
    for v in 0..n {
        f.add(2 * v, 2 * v + 1, 1);
    }
    for (u, v) in g.edges() {
        f.add(2 * u + 1, 2 * v, big);
        f.add(2 * v + 1, 2 * u, big);
    }
    for v in x.iter() {
        f.add(src, 2 * v, big);
    }
    for v in y.iter() {
        f.add(2 * v + 1, snk, big);
    }
    let mut value = 0;
    loop {
        let (seen, prev) = f.reachable(src);
        if !seen[snk] {
            break;
        }
        let mut cur = snk;
        while cur != src {
            let p = prev[cur];
            *f.cap[p].get_mut(&cur).unwrap() -= 1;
            *f.cap[cur].get_mut(&p).unwrap() += 1;
            cur = p;
        }
        value += 1;
    }

    let (seen, _) = f.reachable(src);
    let a: VertexSet = (0..n).filter(|&v| seen[2 * v]).collect();
    let cut: VertexSet = a.iter().filter(|&v| !seen[2 * v + 1]).collect();
    let b = g.vertices().difference(&a).union(&cut);
    let sep = Separation { a, b };

    // Decompose the flow into vertex paths, then trim to X–Y paths.
    let used = |f: &Flow, v: usize| f.cap[2 * v + 1].get(&(2 * v)).copied().unwrap_or(0) > 0;
    let mut paths = Vec::new();
    let starts: Vec<usize> = x
        .iter()
        .filter(|&v| f.cap[2 * v].get(&src).copied().unwrap_or(0) > 0)
        .collect();
    for s in starts {
        let mut path = vec![s];
        let mut cur = s;
        while !(y.contains(cur) && f.cap[snk].get(&(2 * cur + 1)).copied().unwrap_or(0) > 0) {
            let next = g
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| used(&f, w) && f.cap[2 * w].get(&(2 * cur + 1)).copied().unwrap_or(0) > 0)
                .ok_or_else(|| Error::contract("flow path breaks off"))?;
            // Consume the edge so that paths through the same vertex pair are not reused.
            *f.cap[2 * next].get_mut(&(2 * cur + 1)).unwrap() -= 1;
            path.push(next);
            cur = next;
        }
        *f.cap[snk].get_mut(&(2 * cur + 1)).unwrap() -= 1;
        let from = path.iter().rposition(|&v| x.contains(v)).unwrap();
        let to = from + path[from..].iter().position(|&v| y.contains(v)).unwrap();
        paths.push(path[from..=to].to_vec());
    }
    if paths.len() != value || sep.order() != value {
        return Err(Error::falsified(
            "max-flow min-cut",
            format!("{} paths, flow {value}, separator {}", paths.len(), sep.order()),
        ));
    }
    Ok((sep, paths))
}

/// `β(X)` for every `X` with `|X| ≤ w`: a component of `G − X`, pairwise
/// touching. Certifies treewidth at least `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Haven {
    pub w: usize,
    beta: HashMap<Mask, Mask>,
}

impl Haven {
    pub fn beta(&self, x: &VertexSet) -> Option<VertexSet> {
        self.beta.get(&x.to_mask()).map(|&c| VertexSet::from_mask(c))
    }

    /// The sets `X` on which `β` is defined, by size then bitmask.
    pub fn domain(&self) -> Vec<VertexSet> {
        let mut keys: Vec<Mask> = self.beta.keys().copied().collect();
        keys.sort_unstable_by_key(|&m| (m.count_ones(), m));
        keys.into_iter().map(VertexSet::from_mask).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HavenResult {
    Haven(Haven),
    /// A tree-decomposition of width below `w`: no haven of this order exists.
    TreewidthTooSmall(TreeDecomposition),
}

fn touch(adj: &[Mask], a: Mask, b: Mask) -> bool {
    a & b != 0 || mask_neighborhood(adj, a) & b != 0
}

fn small_sets(n: usize, w: usize) -> Vec<Mask> {
    let mut out: Vec<Mask> = (0..1u64 << n).filter(|m| m.count_ones() as usize <= w).collect();
    out.sort_unstable_by_key(|&m| (m.count_ones(), m));
    out
}

/// Robber-winning positions `(X, C)` of the game against `w` cops, as the
/// greatest fixed point: from a winning position, every cop move `Y` leaves a
/// winning component of `G − Y` reachable inside `G − (X ∩ Y)`.
fn winning_positions(adj: &[Mask], full: Mask, sets: &[Mask]) -> HashMap<Mask, Vec<(Mask, bool)>> {
    let mut pos: HashMap<Mask, Vec<(Mask, bool)>> = sets
        .iter()
        .map(|&x| (x, mask_components(adj, full & !x).into_iter().map(|c| (c, true)).collect()))
        .collect();
    loop {
        let mut changed = false;
        for &x in sets {
            for ci in 0..pos[&x].len() {
                let (c, alive) = pos[&x][ci];
                if !alive {
                    continue;
                }
                let start = c.trailing_zeros() as usize;
                let escapes = sets.iter().all(|&y| {
                    let room = mask_component(adj, start, full & !(x & y));
                    pos[&y].iter().any(|&(c2, ok)| ok && c2 & !room == 0)
                });
                if !escapes {
                    pos.get_mut(&x).unwrap()[ci].1 = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return pos;
        }
    }
}

/// A haven of order `w + 1` (defined on all `|X| ≤ w`), or a tree-decomposition
/// of width below `w` showing none exists.
pub fn haven_oracle(g: &Graph, w: usize) -> Result<HavenResult> {
    let n = g.n();
    if n > HAVEN_VERTEX_LIMIT {
        return Err(Error::SizeLimit {
            what: "vertices for haven search",
            actual: n,
            limit: HAVEN_VERTEX_LIMIT,
        });
    }
    if w > HAVEN_ORDER_LIMIT {
        return Err(Error::SizeLimit {
            what: "haven order",
            actual: w,
            limit: HAVEN_ORDER_LIMIT,
        });
    }
    let adj = g.masks()?;
    let full: Mask = if n == 0 { 0 } else { Mask::MAX >> (64 - n) };
    let tw = exact_treewidth(g)?;
    let sets = small_sets(n, w);
    let pos = winning_positions(&adj, full, &sets);
    let robber_wins = pos[&0].iter().any(|&(_, ok)| ok);
    if robber_wins != (tw.value >= w as i64) {
        return Err(Error::falsified(
            "cops and robber",
            format!("robber wins: {robber_wins}, treewidth {}", tw.value),
        ));
    }
    if !robber_wins {
        return Ok(HavenResult::TreewidthTooSmall(tw.witness));
    }

    // Backtracking choice of β, keeping all chosen components pairwise touching.
    let candidates = |i: usize, chosen: &[Mask]| -> Vec<Mask> {
        pos[&sets[i]]
            .iter()
            .filter(|&&(c, ok)| ok && chosen.iter().all(|&b| touch(&adj, c, b)))
            .map(|&(c, _)| c)
            .collect()
    };
    let mut chosen: Vec<Mask> = Vec::with_capacity(sets.len());
    let mut stack: Vec<(Vec<Mask>, usize)> = vec![(candidates(0, &chosen), 0)];
    while chosen.len() < sets.len() {
        let Some((cands, next)) = stack.last_mut() else {
            return Err(Error::falsified("haven", "no touching choice of components"));
        };
        if *next >= cands.len() {
            stack.pop();
            chosen.pop();
            continue;
        }
        chosen.push(cands[*next]);
        *next += 1;
        if chosen.len() < sets.len() {
            let c = candidates(chosen.len(), &chosen);
            stack.push((c, 0));
        }
    }
    let haven = Haven {
        w,
        beta: sets.iter().copied().zip(chosen).collect(),
    };
    check_haven(g, &haven).map_err(|v| Error::falsified("haven", v.to_string()))?;
    Ok(HavenResult::Haven(haven))
}

/// Every `β(X)` is a component of `G − X` and every two of them touch (which
/// also gives `β(Y) ⊆ β(X)` for `X ⊆ Y`).
pub fn check_haven(g: &Graph, h: &Haven) -> Check {
    let adj = g.masks().map_err(|_| Violation::VertexOutOfRange { vertex: g.n() })?;
    let n = g.n();
    let full: Mask = if n == 0 { 0 } else { Mask::MAX >> (64 - n) };
    let set = |m: Mask| bits(m).collect::<Vec<_>>();
    let entries: Vec<(Mask, Mask)> = small_sets(n, h.w)
        .into_iter()
        .map(|x| h.beta.get(&x).map(|&c| (x, c)).ok_or(Violation::HavenNotComponent { set: set(x) }))
        .collect::<std::result::Result<_, _>>()?;
    for &(x, c) in &entries {
        if c == 0 || c & x != 0 || mask_component(&adj, c.trailing_zeros() as usize, full & !x) != c {
            return Err(Violation::HavenNotComponent { set: set(x) });
        }
    }
    for (i, &(x, c)) in entries.iter().enumerate() {
        for &(y, d) in &entries[i + 1..] {
            let nested = (x & !y == 0 && d & !c != 0) || (y & !x == 0 && c & !d != 0);
            if !touch(&adj, c, d) || nested {
                return Err(Violation::HavenNotTouching { x: set(x), y: set(y) });
            }
        }
    }
    Ok(())
}

fn rooted(tree: &Graph) -> Result<RootedTree> {
    RootedTree::from_edges(tree.n(), &tree.edges(), 0)
}

/// A model of `tree` in `G[A]` whose branch sets each meet `A ∩ B` exactly
/// once, if one exists. The separation's order must equal `|V(tree)|`.
pub fn check_left_contains(g: &Graph, sep: &Separation, tree: &Graph) -> Result<Option<MinorModel>> {
    sep.check(g).map_err(|v| Error::Precondition(format!("not a separation: {v}")))?;
    let q = sep.separator();
    if q.len() != tree.n() {
        return Err(Error::Precondition(format!(
            "separation order {} differs from |V(T)| = {}",
            q.len(),
            tree.n()
        )));
    }
    let t = rooted(tree)?;
    // |A ∩ B| disjoint branch sets each meeting A ∩ B meet it exactly once.
    let outside = sep.b.difference(&sep.a);
    find_rooted_tree_model(g, &t, Some(&q), None, &outside)
}

/// Checks the three separation properties and the left-containment model.
pub fn validate_separation(g: &Graph, tree: &Graph, sep: &Separation, m: &MinorModel) -> Check {
    sep.check(g)?;
    let q = sep.separator();
    if q.len() != tree.n() {
        return Err(Violation::SeparationOrder {
            order: q.len(),
            expected: tree.n(),
        });
    }
    let right = sep.b.difference(&sep.a);
    if right.is_empty() || !g.is_connected_set(&right) {
        return Err(Violation::SeparationRightDisconnected);
    }
    if let Some(v) = q.iter().find(|&v| !g.neighbors(v).iter().any(|&w| right.contains(w))) {
        return Err(Violation::SeparationNoRightNeighbor { vertex: v });
    }
    check_model(g, tree, m, None, None, &[])?;
    for b in &m.branch {
        if !b.is_subset(&sep.a) || b.intersection(&q).len() != 1 {
            return Err(Violation::LeftContainment);
        }
    }
    Ok(())
}

/// Every separation whose separator has between 1 and `w` vertices: the
/// components of `G − Q` are split between the sides in every way.
fn separations(adj: &[Mask], full: Mask, w: usize) -> Vec<(Mask, Mask)> {
    let mut out = Vec::new();
    for q in small_sets(adj.len(), w).into_iter().filter(|&q| q != 0) {
        let comps = mask_components(adj, full & !q);
        for pick in 0..1u64 << comps.len() {
            let right: Mask = bits(pick).fold(0, |m, i| m | comps[i]);
            out.push((full & !right, q | right));
        }
    }
    out
}

/// A separation of order `|V(tree)|` with a connected right side, every
/// separator vertex adjacent to it, that left-contains `tree`; plus the model.
/// Requires treewidth at least `|V(tree)|`. Among separations of order at most
/// `w` that left-contain the matching subtree, keep `β(A ∩ B)` on the right
/// and admit no smaller such separation nested inside, the one maximizing
/// `|A| − |B|` is returned (ties: smallest separator, then smallest `A`).
pub fn find_separation(g: &Graph, tree: &Graph) -> Result<(Separation, MinorModel)> {
    let n = g.n();
    let w = tree.n();
    if n > SEPARATION_LIMIT {
        return Err(Error::SizeLimit {
            what: "vertices for separation search",
            actual: n,
            limit: SEPARATION_LIMIT,
        });
    }
    let t = rooted(tree)?;
    let tw = exact_treewidth(g)?.value;
    if tw < w as i64 {
        return Err(Error::Precondition(format!("treewidth {tw} is below {w}")));
    }
    let HavenResult::Haven(haven) = haven_oracle(g, w)? else {
        return Err(Error::falsified("haven", "treewidth is large enough but no haven was found"));
    };
    let adj = g.masks()?;
    let full: Mask = Mask::MAX >> (64 - n);

    // t₁, …, t_w in preorder from vertex 0, so every prefix induces a subtree.
    let order = t.preorder();
    let mut position = vec![0; w];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let prefix_tree = |k: usize| {
        let edges = tree
            .edges()
            .into_iter()
            .filter(|&(a, b)| position[a] < k && position[b] < k)
            .map(|(a, b)| (position[a], position[b]));
        Graph::from_edges(k, edges).expect("prefix edges in range")
    };
    let beta = |q: Mask| haven.beta[&q];

    let all = separations(&adj, full, w);
    let beta_ok: Vec<&(Mask, Mask)> = all.iter().filter(|&&(a, b)| beta(a & b) & !b == 0).collect();
    let mut best: Option<(i64, Mask, Mask, Mask, MinorModel)> = None;
    for &&(a, b) in &beta_ok {
        let q = a & b;
        let k = q.count_ones() as usize;
        let nested_smaller = beta_ok.iter().any(|&&(a2, b2)| {
            ((a2 & b2).count_ones() as usize) < k && a & !a2 == 0 && b2 & !b == 0 && b2 != b
        });
        if nested_smaller {
            continue;
        }
        let sep = Separation {
            a: VertexSet::from_mask(a),
            b: VertexSet::from_mask(b),
        };
        let Some(model) = check_left_contains(g, &sep, &prefix_tree(k))? else { continue };
        let score = a.count_ones() as i64 - b.count_ones() as i64;
        let key = (score, std::cmp::Reverse(VertexSet::from_mask(q).into_vec()), std::cmp::Reverse(a));
        let better = match &best {
            None => true,
            Some((s, bq, _, ba, _)) => {
                key > (*s, std::cmp::Reverse(VertexSet::from_mask(*bq).into_vec()), std::cmp::Reverse(*ba))
            }
        };
        if better {
            best = Some((score, q, b, a, model));
        }
    }
    let (_, _, b, a, model) = best.ok_or_else(|| Error::falsified("separation", "no candidate separation"))?;
    let sep = Separation {
        a: VertexSet::from_mask(a),
        b: VertexSet::from_mask(b),
    };
    if sep.order() != w {
        return Err(Error::falsified("separation order", format!("optimal order {} < {w}", sep.order())));
    }
    // Branch sets were found for t₁, …, t_w; reindex by tree vertex.
    let model = MinorModel::new((0..w).map(|v| model.branch[position[v]].clone()).collect());
    validate_separation(g, tree, &sep, &model).map_err(|v| Error::falsified("separation", v.to_string()))?;
    Ok((sep, model))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs<const N: usize>(a: [usize; N]) -> VertexSet {
        VertexSet::from(a)
    }

    fn disjoint_paths(g: &Graph, x: &VertexSet, y: &VertexSet, paths: &[Vec<usize>]) {
        let mut seen = VertexSet::new();
        for p in paths {
            assert!(x.contains(p[0]) && y.contains(*p.last().unwrap()));
            for w in p.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
            for &v in &p[1..p.len().saturating_sub(1)] {
                assert!(!x.contains(v) && !y.contains(v));
            }
            for &v in p {
                assert!(seen.insert(v));
            }
        }
    }

    #[test]
    fn menger_examples() {
        let c4 = Graph::cycle(4);
        let (sep, paths) = menger(&c4, &vs([0]), &vs([2])).unwrap();
        assert_eq!((sep.order(), paths.len()), (1, 1));
        assert_eq!(sep.check(&c4), Ok(()));
        disjoint_paths(&c4, &vs([0]), &vs([2]), &paths);

        let (sep, paths) = menger(&c4, &vs([1]), &vs([1])).unwrap();
        assert_eq!((sep.order(), paths), (1, vec![vec![1]]));

        let k4 = Graph::complete(4);
        let (sep, paths) = menger(&k4, &vs([0, 1]), &vs([2, 3])).unwrap();
        assert_eq!(sep.order(), 2);
        disjoint_paths(&k4, &vs([0, 1]), &vs([2, 3]), &paths);
        assert!(sep.a.is_subset(&k4.vertices()) && vs([0, 1]).is_subset(&sep.a) && vs([2, 3]).is_subset(&sep.b));
    }

    #[test]
    fn haven_examples() {
        let k4 = Graph::complete(4);
        let HavenResult::Haven(h) = haven_oracle(&k4, 3).unwrap() else { panic!("tw(K4) = 3") };
        for x in h.domain() {
            assert_eq!(h.beta(&x).unwrap(), k4.vertices().difference(&x));
        }
        assert!(matches!(haven_oracle(&Graph::path(4), 2).unwrap(), HavenResult::TreewidthTooSmall(_)));
        let c4 = Graph::cycle(4);
        let HavenResult::Haven(h) = haven_oracle(&c4, 2).unwrap() else { panic!("tw(C4) = 2") };
        assert_eq!(check_haven(&c4, &h), Ok(()));
    }

    #[test]
    fn left_containment_examples() {
        let k4 = Graph::complete(4);
        let sep = Separation {
            a: vs([0, 1, 2]),
            b: vs([0, 1, 2, 3]),
        };
        let m = check_left_contains(&k4, &sep, &Graph::path(3)).unwrap().unwrap();
        assert_eq!(m.branch.iter().map(|b| b.len()).sum::<usize>(), 3);

        let p4 = Graph::path(4);
        let sep = Separation {
            a: vs([0, 1]),
            b: vs([1, 2, 3]),
        };
        assert!(check_left_contains(&p4, &sep, &Graph::path(2)).is_err());
        let m = check_left_contains(&p4, &sep, &Graph::empty(1)).unwrap().unwrap();
        assert!(m.branch[0].contains(1));
    }

    #[test]
    fn separation_examples() {
        let k4 = Graph::complete(4);
        let (sep, m) = find_separation(&k4, &Graph::path(3)).unwrap();
        assert_eq!(validate_separation(&k4, &Graph::path(3), &sep, &m), Ok(()));

        let c5 = Graph::cycle(5);
        let (sep, m) = find_separation(&c5, &Graph::path(2)).unwrap();
        assert_eq!(sep.order(), 2);
        assert_eq!(validate_separation(&c5, &Graph::path(2), &sep, &m), Ok(()));

        assert!(matches!(
            find_separation(&Graph::path(4), &Graph::path(2)),
            Err(Error::Precondition(_))
        ));
    }
}
