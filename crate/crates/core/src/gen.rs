//! Seeded instance families and isomorphism-class enumeration of small graphs.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::models::{find_apex_tree_model, find_rooted_tree_model, RootedTree};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("u < v < n")
}

/// A path of `spine` vertices, each with between 0 and `legs` pendant leaves.
pub fn caterpillar(spine: usize, legs: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges: Vec<(usize, usize)> = (1..spine).map(|i| (i - 1, i)).collect();
    let mut n = spine;
    for s in 0..spine {
        for _ in 0..r.gen_range(0..=legs) {
            edges.push((s, n));
            n += 1;
        }
    }
    Graph::from_edges(n, edges).expect("fresh leaves")
}

/// A random spanning-vertex subgraph of `P_len ⊠ K_c`; each edge is kept with
/// probability 1/2. Vertex `(i, j)` is `i·c + j`.
pub fn blowup_of_path(len: usize, c: usize, seed: u64) -> Graph {
    let full = Graph::path(len).strong_product(&Graph::complete(c));
    let mut r = rng(seed);
    let edges: Vec<_> = full.edges().into_iter().filter(|_| r.gen_bool(0.5)).collect();
    Graph::from_edges(full.n(), edges).expect("subgraph")
}

/// Draws from `family(seed')` for derived seeds until the pattern is absent.
/// With `apex`, absence of the apex-tree `T⁺` is required instead of `T`.
pub fn sample_minor_free(
    mut family: impl FnMut(u64) -> Graph,
    pattern: &RootedTree,
    apex: bool,
    seed: u64,
    attempts: usize,
) -> Result<Graph> {
    let mut r = rng(seed);
    for _ in 0..attempts {
        let g = family(r.gen());
        let present = if apex {
            find_apex_tree_model(&g, pattern)?.is_some()
        } else {
            find_rooted_tree_model(&g, pattern, None, None, &VertexSet::new())?.is_some()
        };
        if !present {
            return Ok(g);
        }
    }
    Err(Error::Precondition(format!(
        "no minor-free instance within {attempts} attempts"
    )))
}

fn edge_bit(n: usize, u: usize, v: usize) -> u32 {
    let (u, v) = (u.min(v), u.max(v));
    (u * (2 * n - u - 1) / 2 + (v - u - 1)) as u32
}

fn adjacency_code(g: &Graph, perm: &[usize]) -> u64 {
    let n = g.n();
    g.edges()
        .into_iter()
        .fold(0u64, |acc, (u, v)| acc | 1 << edge_bit(n, perm[u], perm[v]))
}

/// Canonical code of a graph on at most 11 vertices: the minimum adjacency
/// code over relabelings that order vertices by a refined degree invariant.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= 11, "canonical_code is for tiny graphs");
    let inv: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    // Blocks of equal invariant; vertices may only permute inside a block.
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match blocks.last_mut() {
            Some(b) if inv[b[0]] == inv[v] => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    let mut perm = vec![0; n];
    let mut best = u64::MAX;
    fn rec(g: &Graph, blocks: &mut [Vec<usize>], bi: usize, base: usize, perm: &mut Vec<usize>, best: &mut u64) {
        if bi == blocks.len() {
            *best = (*best).min(adjacency_code(g, perm));
            return;
        }
        let len = blocks[bi].len();
        permute(g, blocks, bi, base, 0, len, perm, best);
    }
    #[allow(clippy::too_many_arguments)]
    fn permute(g: &Graph, blocks: &mut [Vec<usize>], bi: usize, base: usize, i: usize, len: usize, perm: &mut Vec<usize>, best: &mut u64) {
        if i == len {
            for (k, &v) in blocks[bi].iter().enumerate() {
                perm[v] = base + k;
            }
            rec(g, blocks, bi + 1, base + len, perm, best);
            return;
        }
        for j in i..len {
            blocks[bi].swap(i, j);
            permute(g, blocks, bi, base, i + 1, len, perm, best);
            blocks[bi].swap(i, j);
        }
    }
    rec(g, &mut blocks, 0, 0, &mut perm, &mut best);
    if g.m() == 0 {
        0
    } else {
        best
    }
}

/// One representative per isomorphism class of graphs on `n` vertices, built
/// by extending the classes on `n − 1` vertices with a new vertex.
pub fn iso_classes(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0)];
    for k in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 0u64..1 << (k - 1) {
                let mut edges = g.edges();
                edges.extend((0..k - 1).filter(|&u| mask >> u & 1 == 1).map(|u| (u, k - 1)));
                let h = Graph::from_edges(k, edges).expect("simple");
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

pub fn connected_iso_classes(n: usize) -> Vec<Graph> {
    iso_classes(n).into_iter().filter(|g| g.is_connected()).collect()
}
