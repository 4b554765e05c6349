//! Assembling a partitioned path-decomposition of `(G, S)` around a root `r`
//! from decompositions of the pieces left after deleting `X ∪ {r}` and from a
//! decomposition of a strictly smaller minor.

use std::collections::BTreeMap;

use crate::decomp::{check_kppd, Kppd, VertexPartition};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::models::{lift_model, MinorModel};

/// Outcome of a recursive step: a decomposition, or a model certifying that
/// the excluded pattern is present after all.
#[derive(Clone, Debug)]
pub enum Step {
    Done(Kppd),
    Minor(MinorModel),
}

/// The part index of `{v}` in `d`, if `{v}` is a part and sits in the first bag.
pub(crate) fn root_part_in_first_bag(d: &Kppd, v: usize) -> Option<usize> {
    let idx = d.part_index(&VertexSet::singleton(v))?;
    d.bags.first().filter(|b| b.contains(idx)).map(|_| idx)
}

/// Builds a `k`-partition-path-decomposition of `(G, S)` with `{r}` a part in
/// the first bag. `components` are decompositions (in `G`'s ids) of the
/// components of `G − X − r` that meet `N(r)`; `minor` decomposes the graph
/// obtained by contracting `r`–`X` paths into one vertex `r′`, given as
/// `(G′, S′, r′)`. A model returned by `minor` is lifted back to `G`.
pub fn combine_produit<F>(
    g: &Graph,
    s: &VertexSet,
    r: usize,
    x: &VertexSet,
    k: usize,
    components: Vec<Kppd>,
    mut minor: F,
) -> Result<Step>
where
    F: FnMut(&Graph, &VertexSet, usize) -> Result<Step>,
{
    g.check_vertex(r)?;
    g.check_set(x)?;
    if x.contains(r) {
        return Err(Error::Precondition("X must not contain r".into()));
    }
    if x.len() > k {
        return Err(Error::contract(format!("|X| = {} exceeds part budget {k}", x.len())));
    }
    let rset = VertexSet::singleton(r);
    if g.neighbors(r).is_empty() {
        let mut d = Kppd::trivial(r, k);
        d.attach_hangs(g)?;
        return Ok(Step::Done(d));
    }

    if x.is_empty() {
        let mut parts = vec![rset.clone()];
        let mut bags = Vec::new();
        let mut subgraph = rset.clone();
        for c in components {
            let off = parts.len();
            subgraph = subgraph.union(&c.subgraph);
            parts.extend(c.partition.into_parts());
            for b in c.bags {
                let mut bag = b.map(|p| p + off);
                bag.insert(0);
                bags.push(bag);
            }
        }
        if bags.is_empty() {
            bags.push(VertexSet::singleton(0));
        }
        let mut d = Kppd {
            subgraph,
            partition: VertexPartition::new(parts),
            bags,
            hang_map: BTreeMap::new(),
            k,
        };
        d.attach_hangs(g)?;
        return Ok(Step::Done(d));
    }

    // Paths from r to each vertex of X, internally avoiding X.
    let mut u = rset.clone();
    for v in x.iter() {
        let path = g
            .path_avoiding(r, v, x)
            .ok_or_else(|| Error::contract(format!("no path from {r} to {v} avoiding X")))?;
        for w in path {
            u.insert(w);
        }
    }
    let rest = g.vertices().difference(x).difference(&rset);
    let neighbors: VertexSet = g.neighbors(r).iter().copied().collect();
    let z: VertexSet = g
        .components_within(&rest)
        .into_iter()
        .filter(|c| c.is_disjoint(&neighbors))
        .flat_map(|c| c.into_vec())
        .collect();
    if !u.is_disjoint(&z) {
        return Err(Error::contract("connecting paths meet a rootless component"));
    }
    let mut groups = vec![u.clone()];
    groups.extend(z.iter().map(VertexSet::singleton));
    let via = g.contract_groups(groups)?;
    let r_img = via.image_of(r).expect("r is contracted into r'");
    let mut s_img: VertexSet = z.intersection(s).iter().filter_map(|v| via.image_of(v)).collect();
    if !u.is_disjoint(s) {
        s_img.insert(r_img);
    }
    if via.image.n() >= g.n() {
        return Err(Error::contract("minor is not smaller than the graph"));
    }

    let sub = match minor(&via.image, &s_img, r_img)? {
        Step::Minor(m) => return Ok(Step::Minor(lift_model(&m, &via, g)?)),
        Step::Done(d) => d,
    };
    check_kppd(&via.image, &s_img, &sub)
        .map_err(|v| Error::contract(format!("minor decomposition invalid: {v}")))?;
    let r_part = root_part_in_first_bag(&sub, r_img)
        .ok_or_else(|| Error::contract("minor decomposition lacks {r'} in its first bag"))?;

    let mut parts = vec![rset.clone(), x.clone()];
    let mut bags = vec![VertexSet::from([0, 1])];
    let mut subgraph = rset.union(x);
    for c in components {
        let off = parts.len();
        subgraph = subgraph.union(&c.subgraph);
        parts.extend(c.partition.into_parts());
        for b in c.bags {
            let mut bag = b.map(|p| p + off);
            bag.insert(0);
            bag.insert(1);
            bags.push(bag);
        }
    }
    let mut index = vec![1; sub.partition.len()];
    for (j, part) in sub.partition.parts().iter().enumerate() {
        if j != r_part {
            index[j] = parts.len();
            let lifted = via.lift_set(part);
            subgraph = subgraph.union(&lifted);
            parts.push(lifted);
        }
    }
    for b in &sub.bags {
        bags.push(b.map(|p| index[p]));
    }
    let mut d = Kppd {
        subgraph,
        partition: VertexPartition::new(parts),
        bags,
        hang_map: BTreeMap::new(),
        k,
    };
    d.attach_hangs(g)?;
    Ok(Step::Done(d))
}

/// The special case `S = V(G)`: every vertex lies in the decomposed subgraph.
pub fn combine<F>(g: &Graph, r: usize, x: &VertexSet, k: usize, components: Vec<Kppd>, mut minor: F) -> Result<Step>
where
    F: FnMut(&Graph, usize) -> Result<Step>,
{
    combine_produit(g, &g.vertices(), r, x, k, components, |h, _, r2| minor(h, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::check_kppd;

    fn vs<const N: usize>(a: [usize; N]) -> VertexSet {
        VertexSet::from(a)
    }

    fn path_kppd(vertices: &[usize]) -> Kppd {
        let parts: Vec<VertexSet> = vertices.iter().map(|&v| VertexSet::singleton(v)).collect();
        let bags = if parts.len() == 1 {
            vec![VertexSet::singleton(0)]
        } else {
            (1..parts.len()).map(|i| VertexSet::from([i - 1, i])).collect()
        };
        Kppd {
            subgraph: vertices.iter().copied().collect(),
            partition: VertexPartition::new(parts),
            bags,
            hang_map: BTreeMap::new(),
            k: 1,
        }
    }

    fn never(_: &Graph, _: usize) -> Result<Step> {
        panic!("minor callback must not run")
    }

    #[test]
    fn empty_x_adds_root_everywhere() {
        // Star with center 0; G − 0 is three isolated leaves.
        let g = Graph::star(3);
        let comps = vec![path_kppd(&[1]), path_kppd(&[2]), path_kppd(&[3])];
        let Step::Done(d) = combine(&g, 0, &VertexSet::new(), 1, comps, never).unwrap() else {
            panic!("expected a decomposition");
        };
        assert_eq!(check_kppd(&g, &g.vertices(), &d), Ok(()));
        assert_eq!(d.width(), 1);
        assert!(d.bags.iter().all(|b| b.contains(0)));
    }

    #[test]
    fn lone_root_is_trivial() {
        let g = Graph::empty(1);
        let Step::Done(d) = combine(&g, 0, &VertexSet::new(), 1, vec![], never).unwrap() else {
            panic!("expected a decomposition");
        };
        assert_eq!(d, Kppd::trivial(0, 1));
    }

    #[test]
    fn two_components_and_a_minor() {
        // r = 0 adjacent to 1 and 4; X = {2}; components {1} and {4,5}; Z = {3}.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5)]).unwrap();
        let comps = vec![path_kppd(&[1]), path_kppd(&[4, 5])];
        let mut seen = None;
        let out = combine(&g, 0, &vs([2]), 2, comps, |h, r2| {
            seen = Some((h.n(), r2));
            // G′ is the edge r′–3.
            let mut d = path_kppd(&[r2, 1 - r2]);
            d.k = 2;
            Ok(Step::Done(d))
        })
        .unwrap();
        assert_eq!(seen, Some((2, 0)));
        let Step::Done(d) = out else { panic!("expected a decomposition") };
        assert_eq!(check_kppd(&g, &g.vertices(), &d), Ok(()));
        assert_eq!(root_part_in_first_bag(&d, 0), Some(0));
        assert!(d.width() <= 3);
    }

    #[test]
    fn minor_models_are_lifted() {
        let g = Graph::path(3);
        let comps = vec![path_kppd(&[1])];
        let out = combine(&g, 1, &vs([2]), 1, comps, |h, r2| {
            assert_eq!(h.n(), 1);
            Ok(Step::Minor(MinorModel::new(vec![VertexSet::singleton(r2)])))
        });
        // r = 1 has neighbors 0 and 2; X = {2}; the minor is the single vertex r′.
        match out.unwrap() {
            Step::Minor(m) => assert_eq!(m.branch, vec![vs([1, 2])]),
            Step::Done(_) => panic!("expected the lifted model"),
        }
    }
}
