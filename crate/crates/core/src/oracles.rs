//! Exact width computations by subset dynamic programming, and the
//! extraction of a rooted tree model together with a narrow decomposition.

use std::collections::BTreeMap;

use crate::decomp::{PairPathDecomposition, PathDecomposition, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{bit, bits, mask_component, mask_neighborhood, Graph, Mask, VertexSet};
use crate::models::{find_rooted_tree_model, RootedTree};

pub const PATHWIDTH_LIMIT: usize = 22;
pub const TREEWIDTH_LIMIT: usize = 18;
pub const PAIR_LIMIT: usize = 14;

/// An exact width together with a decomposition attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthResult<D> {
    pub value: i64,
    pub witness: D,
}

fn limit(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::SizeLimit { what, actual, limit });
    }
    Ok(())
}

/// Minimum over orderings of `domain` of the largest boundary `|N(L) \ L|`
/// of a prefix `L`, with boundaries taken in the whole graph. Returns the
/// value and an optimal ordering.
fn vertex_separation(adj: &[Mask], domain: Mask) -> (usize, Vec<usize>) {
    let dom: Vec<usize> = bits(domain).collect();
    let k = dom.len();
    let size = 1usize << k;
    // closed[idx] = N[L] for the prefix set L encoded by idx.
    let mut closed = vec![0 as Mask; size];
    let mut best = vec![0u8; size];
    for idx in 1..size {
        let low = idx.trailing_zeros() as usize;
        let rest = idx & (idx - 1);
        let v = dom[low];
        closed[idx] = closed[rest] | adj[v] | bit(v);
        let boundary = closed[idx].count_ones() - idx.count_ones();
        let mut m = u8::MAX;
        let mut it = idx;
        while it != 0 {
            let j = it.trailing_zeros() as usize;
            it &= it - 1;
            m = m.min(best[idx ^ (1 << j)]);
        }
        best[idx] = m.max(boundary as u8);
    }
    // Peel vertices off the full set to recover an ordering.
    let mut order = Vec::with_capacity(k);
    let mut idx = size - 1;
    while idx != 0 {
        let mut it = idx;
        let j = loop {
            let j = it.trailing_zeros() as usize;
            it &= it - 1;
            if best[idx ^ (1 << j)] <= best[idx] {
                break j;
            }
        };
        order.push(dom[j]);
        idx ^= 1 << j;
    }
    order.reverse();
    (best[size - 1] as usize, order)
}

/// Bags `{v_i} ∪ (N(L_i) \ L_i)` along an ordering, in graph ids.
fn bags_from_order(adj: &[Mask], order: &[usize]) -> Vec<VertexSet> {
    let mut prefix: Mask = 0;
    let mut out = Vec::with_capacity(order.len());
    for &v in order {
        prefix |= bit(v);
        let boundary = mask_neighborhood(adj, prefix);
        out.push(VertexSet::from_mask(boundary | bit(v)));
    }
    out
}

fn set_masks(g: &Graph, y: &VertexSet) -> Result<(Vec<Mask>, Mask)> {
    g.check_set(y)?;
    let adj = g.masks()?;
    let ym = y.to_mask();
    Ok((adj.iter().map(|&a| a & ym).collect(), ym))
}

/// Pathwidth of `G[y]`, with a witness in `G`'s vertex ids.
pub fn pathwidth_of_set(g: &Graph, y: &VertexSet) -> Result<WidthResult<PathDecomposition>> {
    pathwidth_with_last_bag(g, y, &VertexSet::new())
}

/// Minimum width of a path-decomposition of `G[y]` whose last bag contains `last`.
/// Orders `y \ last` first and closes with the bag `last`; an optimal
/// decomposition with `last` in its final bag always has this shape.
pub fn pathwidth_with_last_bag(
    g: &Graph,
    y: &VertexSet,
    last: &VertexSet,
) -> Result<WidthResult<PathDecomposition>> {
    limit("vertices for exact pathwidth", y.len(), PATHWIDTH_LIMIT)?;
    if !last.is_subset(y) {
        return Err(Error::Precondition("last bag must lie inside the vertex set".into()));
    }
    let (adj, ym) = set_masks(g, y)?;
    if ym == 0 {
        return Ok(WidthResult {
            value: -1,
            witness: PathDecomposition::default(),
        });
    }
    let lm = last.to_mask();
    let (vs, order) = vertex_separation(&adj, ym & !lm);
    let mut bags = bags_from_order(&adj, &order);
    if lm != 0 {
        bags.push(last.clone());
    }
    let value = (vs as i64).max(last.len() as i64 - 1);
    Ok(WidthResult {
        value,
        witness: PathDecomposition::new(bags),
    })
}

pub fn exact_pathwidth(g: &Graph) -> Result<WidthResult<PathDecomposition>> {
    limit("vertices for exact pathwidth", g.n(), PATHWIDTH_LIMIT)?;
    pathwidth_of_set(g, &g.vertices())
}

pub fn exact_treewidth(g: &Graph) -> Result<WidthResult<TreeDecomposition>> {
    let n = g.n();
    limit("vertices for exact treewidth", n, TREEWIDTH_LIMIT)?;
    if n == 0 {
        return Ok(WidthResult {
            value: -1,
            witness: TreeDecomposition::default(),
        });
    }
    let adj = g.masks()?;
    let full: Mask = (1 << n) - 1;
    // q(S, v): vertices outside S ∪ {v} reachable from v through S.
    let q = |s: Mask, v: usize| -> Mask {
        let comp = mask_component(&adj, v, s | bit(v));
        mask_neighborhood(&adj, comp) & !s & !bit(v)
    };
    let size = 1usize << n;
    let mut best = vec![0u8; size];
    for s in 1..size {
        let mut m = u8::MAX;
        for v in bits(s as Mask) {
            let rest = s as Mask & !bit(v);
            m = m.min(best[rest as usize].max(q(rest, v).count_ones() as u8));
        }
        best[s] = m;
    }
    // Recover an elimination ordering.
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = bits(s)
            .find(|&v| {
                let rest = s & !bit(v);
                best[rest as usize].max(q(rest, v).count_ones() as u8) <= best[s as usize]
            })
            .unwrap();
        order.push(v);
        s &= !bit(v);
    }
    order.reverse();

    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut eliminated: Mask = 0;
    for (i, &v) in order.iter().enumerate() {
        let qv = q(eliminated, v);
        bags.push(VertexSet::from_mask(qv | bit(v)));
        if i + 1 < n {
            // Attach to the earliest-eliminated vertex of q(v), or to the last bag.
            let parent = bits(qv).min_by_key(|&w| pos[w]).map_or(n - 1, |w| pos[w]);
            edges.push((i, parent));
        }
        eliminated |= bit(v);
    }
    Ok(WidthResult {
        value: best[full as usize] as i64,
        witness: TreeDecomposition { edges, bags },
    })
}

/// `pw(G, S)`: the minimum width of a path-decomposition of some induced
/// subgraph `H ⊇ S` in which every component of `G − V(H)` has its
/// neighborhood inside one bag.
pub fn exact_pw_pair(g: &Graph, s: &VertexSet) -> Result<(i64, PairPathDecomposition)> {
    let n = g.n();
    limit("vertices for exact pair pathwidth", n, PAIR_LIMIT)?;
    g.check_set(s)?;
    let adj = g.masks()?;
    let full: Mask = if n == 0 { 0 } else { (1 << n) - 1 };
    let sm = s.to_mask();
    let lower = pathwidth_of_set(g, s)?.value;
    let optional: Vec<usize> = bits(full & !sm).collect();

    let mut best: Option<(i64, Mask, PathDecomposition)> = None;
    for sub in 0..(1usize << optional.len()) {
        let h = optional
            .iter()
            .enumerate()
            .filter(|(i, _)| sub >> i & 1 == 1)
            .fold(sm, |m, (_, &v)| m | bit(v));
        // G[H] plus a clique on the neighborhood of every hanging component.
        let mut aug: Vec<Mask> = adj.iter().map(|&a| a & h).collect();
        for c in crate::graph::mask_components(&adj, full & !h) {
            let nb = mask_neighborhood(&adj, c);
            for v in bits(nb) {
                aug[v] |= nb & !bit(v);
            }
        }
        let value = if h == 0 {
            -1
        } else {
            vertex_separation(&aug, h).0 as i64
        };
        if best.as_ref().is_none_or(|b| value < b.0) {
            let witness = if h == 0 {
                PathDecomposition::new(vec![VertexSet::new()])
            } else {
                PathDecomposition::new(bags_from_order(&aug, &vertex_separation(&aug, h).1))
            };
            best = Some((value, h, witness));
            if value <= lower {
                break;
            }
        }
    }
    let (value, h, bags) = best.expect("at least H = S is tried");
    let mut d = PairPathDecomposition {
        subgraph: VertexSet::from_mask(h),
        bags,
        hang_map: BTreeMap::new(),
    };
    d.attach_hangs(g)?;
    Ok((value, d))
}

/// Finds `Y ∋ r` such that `G[Y]` has a weakly `{r}`-rooted `T`-model and a
/// path-decomposition of width at most `t − 1` whose last bag contains
/// `∂_G(Y)`. Candidates are tried by size, then in bitmask order.
pub fn diestel_extract(g: &Graph, r: usize, t: &RootedTree) -> Result<(VertexSet, PathDecomposition)> {
    g.check_vertex(r)?;
    limit("vertices for model extraction", g.n(), PATHWIDTH_LIMIT)?;
    if !g.is_connected() {
        return Err(Error::Precondition("graph must be connected".into()));
    }
    let target = t.t() as i64 - 1;
    if exact_pathwidth(g)?.value < target {
        return Err(Error::Precondition(format!("pathwidth below {target}")));
    }
    let adj = g.masks()?;
    let others: Vec<usize> = (0..g.n()).filter(|&v| v != r).collect();
    let root = VertexSet::singleton(r);
    for extra in t.t() - 1..=others.len() {
        let mut pick: Mask = (1 << extra) - 1;
        while pick < (1 << others.len()) {
            let ym = bits(pick).fold(bit(r), |m, i| m | bit(others[i]));
            if mask_component(&adj, r, ym) == ym {
                let y = VertexSet::from_mask(ym);
                let outside = g.vertices().difference(&y);
                if find_rooted_tree_model(g, t, None, Some(&root), &outside)?.is_some() {
                    let boundary = g.boundary(&y)?;
                    let w = pathwidth_with_last_bag(g, &y, &boundary)?;
                    if w.value <= target {
                        return Ok((y, w.witness));
                    }
                }
            }
            if pick == 0 {
                break;
            }
            let c = pick & pick.wrapping_neg();
            let next = pick + c;
            pick = (((next ^ pick) >> 2) / c) | next;
        }
    }
    Err(Error::contract("no set with a rooted model and a narrow decomposition"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{check_pair_path_decomposition, check_path_decomposition, check_tree_decomposition};
    use crate::models::check_model;

    #[test]
    fn pathwidth_examples() {
        for (g, expected) in [
            (Graph::path(4), 1),
            (Graph::complete(4), 3),
            (Graph::cycle(5), 2),
            (Graph::empty(0), -1),
            (Graph::empty(3), 0),
        ] {
            let r = exact_pathwidth(&g).unwrap();
            assert_eq!(r.value, expected);
            assert_eq!(r.witness.width(), expected);
            assert_eq!(check_path_decomposition(&g, &r.witness), Ok(()));
        }
    }

    #[test]
    fn treewidth_examples() {
        for (g, expected) in [
            (Graph::star(4), 1),
            (Graph::path(6), 1),
            (Graph::complete(5), 4),
            (Graph::grid(3, 3), 3),
            (Graph::cycle(6), 2),
            (Graph::empty(0), -1),
        ] {
            let r = exact_treewidth(&g).unwrap();
            assert_eq!(r.value, expected, "{g:?}");
            assert_eq!(r.witness.width(), expected);
            assert_eq!(check_tree_decomposition(&g, &r.witness), Ok(()));
        }
    }

    #[test]
    fn last_bag_constraint() {
        // P4 with both ends forced into the last bag: width 2 (a cycle's worth).
        let p4 = Graph::path(4);
        let r = pathwidth_with_last_bag(&p4, &p4.vertices(), &VertexSet::from([0, 3])).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(check_path_decomposition(&p4, &r.witness), Ok(()));
        assert!(VertexSet::from([0, 3]).is_subset(r.witness.bags.last().unwrap()));
    }

    #[test]
    fn pair_pathwidth_examples() {
        let star = Graph::star(4);
        let (v, d) = exact_pw_pair(&star, &VertexSet::from([0])).unwrap();
        assert_eq!(v, 0);
        assert_eq!(check_pair_path_decomposition(&star, &VertexSet::from([0]), &d), Ok(()));

        let c5 = Graph::cycle(5);
        let (v, _) = exact_pw_pair(&c5, &c5.vertices()).unwrap();
        assert_eq!(v, exact_pathwidth(&c5).unwrap().value);

        let p4 = Graph::path(4);
        let s = VertexSet::from([0, 3]);
        let (v, d) = exact_pw_pair(&p4, &s).unwrap();
        assert!(v <= 1);
        assert_eq!(check_pair_path_decomposition(&p4, &s, &d), Ok(()));

        let (v, d) = exact_pw_pair(&p4, &VertexSet::new()).unwrap();
        assert_eq!(v, -1);
        assert_eq!(check_pair_path_decomposition(&p4, &VertexSet::new(), &d), Ok(()));
    }

    fn check_extract(g: &Graph, r: usize, t: &RootedTree) {
        let (y, d) = diestel_extract(g, r, t).unwrap();
        assert!(y.contains(r));
        let outside = g.vertices().difference(&y);
        let m = find_rooted_tree_model(g, t, None, Some(&VertexSet::singleton(r)), &outside)
            .unwrap()
            .unwrap();
        assert_eq!(check_model(g, &t.as_graph(), &m, None, Some(&VertexSet::singleton(r)), &[t.root()]), Ok(()));
        assert!(d.width() < t.t() as i64);
        let (h, origin) = g.induced_subgraph(&y);
        let mut local = vec![0; g.n()];
        for (i, &v) in origin.iter().enumerate() {
            local[v] = i;
        }
        let relabeled = PathDecomposition::new(d.bags.iter().map(|b| b.map(|v| local[v])).collect());
        assert_eq!(check_path_decomposition(&h, &relabeled), Ok(()));
        assert!(g.boundary(&y).unwrap().is_subset(d.bags.last().unwrap()));
    }

    #[test]
    fn extraction_examples() {
        check_extract(&Graph::complete(4), 0, &RootedTree::path(3));
        check_extract(&Graph::path(4), 0, &RootedTree::path(2));
        check_extract(&Graph::cycle(5), 0, &RootedTree::path(3));
    }

    #[test]
    fn extraction_requires_wide_graph() {
        assert!(matches!(
            diestel_extract(&Graph::path(4), 0, &RootedTree::path(3)),
            Err(Error::Precondition(_))
        ));
    }
}
