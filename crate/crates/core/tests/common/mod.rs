#![allow(dead_code)]

use blowup_core::{Graph, VertexSet};

/// Whether `g` has a model of `pattern`, by trying every map from `V(G)` to
/// pattern vertices or "unused". Independent of the library's search.
pub fn brute_force_model(
    g: &Graph,
    pattern: &Graph,
    s: Option<&VertexSet>,
    r: Option<&VertexSet>,
    roots: &[usize],
    forbidden: &VertexSet,
) -> bool {
    let n = g.n();
    let t = pattern.n();
    if t == 0 {
        return true;
    }
    let mut assign: Vec<usize> = (0..n).map(|v| if forbidden.contains(v) { t } else { 0 }).collect();
    loop {
        if valid(g, pattern, &assign, s, r, roots) {
            return true;
        }
        // Odometer increment, skipping forbidden vertices.
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            if forbidden.contains(i) {
                i += 1;
                continue;
            }
            assign[i] += 1;
            if assign[i] <= t {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

fn valid(
    g: &Graph,
    pattern: &Graph,
    assign: &[usize],
    s: Option<&VertexSet>,
    r: Option<&VertexSet>,
    roots: &[usize],
) -> bool {
    let t = pattern.n();
    let mut branch = vec![Vec::new(); t];
    for (v, &a) in assign.iter().enumerate() {
        if a < t {
            branch[a].push(v);
        }
    }
    if branch.iter().any(Vec::is_empty) {
        return false;
    }
    for b in &branch {
        let mut seen = vec![b[0]];
        let mut stack = vec![b[0]];
        while let Some(x) = stack.pop() {
            for &y in g.neighbors(x) {
                if assign[y] == assign[b[0]] && !seen.contains(&y) {
                    seen.push(y);
                    stack.push(y);
                }
            }
        }
        if seen.len() != b.len() {
            return false;
        }
    }
    for (a, b) in pattern.edges() {
        if !g.edges().iter().any(|&(u, v)| {
            (assign[u] == a && assign[v] == b) || (assign[u] == b && assign[v] == a)
        }) {
            return false;
        }
    }
    if let Some(s) = s {
        if branch.iter().any(|b| b.iter().all(|&v| !s.contains(v))) {
            return false;
        }
    }
    if let Some(r) = r {
        if roots.iter().any(|&x| branch[x].iter().all(|&v| !r.contains(v))) {
            return false;
        }
    }
    true
}

/// Deterministic pseudo-random graph for property tests.
pub fn gnp(n: usize, p_percent: u64, seed: u64) -> Graph {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            if (state >> 33) % 100 < p_percent {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}
