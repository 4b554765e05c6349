//! Exact backtracking search for rooted forest models on bitmask graphs.
//!
//! Branch sets are grown in pattern preorder. Each non-root pattern vertex
//! gets a seed, joined to its parent's branch set by an induced path whose
//! internal vertices are added to the parent. Any model contains one of this
//! shape (restrict each branch set to the paths actually used), so the search
//! is complete. Rootedness in `S` is repaired at the end by induced paths
//! into `S`.

use crate::graph::{bit, bits, mask_neighborhood, Mask};

use super::tree::RootedForest;

pub(crate) struct ForestPattern {
    parent: Vec<Option<usize>>,
    order: Vec<usize>,
}

impl ForestPattern {
    pub(crate) fn new(f: &RootedForest) -> ForestPattern {
        let mut order = Vec::with_capacity(f.size());
        for (i, tree) in f.trees.iter().enumerate() {
            let off = f.offset(i);
            order.extend(tree.preorder().into_iter().map(|v| v + off));
        }
        ForestPattern {
            parent: f.parents(),
            order,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.order.len()
    }
}

pub(crate) struct Query<'a> {
    pub adj: &'a [Mask],
    pub alive: Mask,
    pub s: Option<Mask>,
    pub r: Option<Mask>,
}

struct Engine<'a> {
    adj: &'a [Mask],
    pat: &'a ForestPattern,
    s: Option<Mask>,
    r: Mask,
    branch: Vec<Mask>,
    free: Mask,
}

pub(crate) fn search(q: &Query<'_>, pat: &ForestPattern) -> Option<Vec<Mask>> {
    let mut e = Engine {
        adj: q.adj,
        pat,
        s: q.s.map(|s| s & q.alive),
        r: q.r.unwrap_or(Mask::MAX) & q.alive,
        branch: vec![0; pat.len()],
        free: q.alive,
    };
    e.place(0).then_some(e.branch)
}

impl Engine<'_> {
    fn feasible(&self, k: usize) -> bool {
        let remaining = self.pat.len() - k;
        if (self.free.count_ones() as usize) < remaining {
            return false;
        }
        if let Some(s) = self.s {
            let lacking = self.pat.order[..k]
                .iter()
                .filter(|&&v| self.branch[v] & s == 0)
                .count();
            if ((self.free & s).count_ones() as usize) < lacking + remaining {
                return false;
            }
        }
        true
    }

    fn place(&mut self, k: usize) -> bool {
        if !self.feasible(k) {
            return false;
        }
        if k == self.pat.len() {
            return self.extend_s();
        }
        let v = self.pat.order[k];
        match self.pat.parent[v] {
            None => {
                for seed in bits(self.free & self.r) {
                    self.branch[v] = bit(seed);
                    self.free &= !bit(seed);
                    if self.place(k + 1) {
                        return true;
                    }
                    self.free |= bit(seed);
                    self.branch[v] = 0;
                }
                false
            }
            Some(p) => {
                let b = self.branch[p];
                let nb = mask_neighborhood(self.adj, b);
                self.connect(k, v, p, 0, nb & self.free, nb | b)
            }
        }
    }

    /// Tries every induced path `internals + x` leaving `branch[p]`, with `x`
    /// as the seed of `v`. `avoid` collects vertices that would create a chord.
    fn connect(&mut self, k: usize, v: usize, p: usize, internals: Mask, cands: Mask, avoid: Mask) -> bool {
        for x in bits(cands) {
            let used = internals | bit(x);
            self.branch[p] |= internals;
            self.branch[v] = bit(x);
            self.free &= !used;
            if self.place(k + 1) {
                return true;
            }
            self.free |= used;
            self.branch[v] = 0;
            self.branch[p] &= !internals;

            let next = self.adj[x] & self.free & !avoid & !used;
            if next != 0 && self.connect(k, v, p, used, next, avoid | self.adj[x]) {
                return true;
            }
        }
        false
    }

    fn extend_s(&mut self) -> bool {
        let Some(s) = self.s else {
            return true;
        };
        let Some(v) = (0..self.pat.len()).find(|&v| self.branch[v] & s == 0) else {
            return true;
        };
        let b = self.branch[v];
        let nb = mask_neighborhood(self.adj, b);
        self.s_connect(v, s, 0, nb & self.free, nb | b)
    }

    fn s_connect(&mut self, v: usize, s: Mask, internals: Mask, cands: Mask, avoid: Mask) -> bool {
        for x in bits(cands) {
            let used = internals | bit(x);
            if s & bit(x) != 0 {
                self.branch[v] |= used;
                self.free &= !used;
                if self.extend_s() {
                    return true;
                }
                self.free |= used;
                self.branch[v] &= !used;
            } else {
                let next = self.adj[x] & self.free & !avoid & !used;
                if next != 0 && self.s_connect(v, s, used, next, avoid | self.adj[x]) {
                    return true;
                }
            }
        }
        false
    }
}
