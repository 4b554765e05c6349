//! Text and JSON interchange: edge lists and blow-up certificates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::decomp::{
    verify_blowup, BlowupCertificate, BlowupWidths, CertificateKind, Host, PathDecomposition,
    TreeDecomposition, VertexPartition,
};
use crate::diag::Violation;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses the `n m` / `u v` edge-list format. Lines are 1-based in errors.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut rows = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    });
    let nums = |line: usize, l: &str| -> Result<Vec<usize>> {
        let v = l
            .split_whitespace()
            .map(|w| w.parse::<usize>().map_err(|_| parse_err(line, format!("not a vertex count or id: {w:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if v.len() != 2 {
            return Err(parse_err(line, format!("expected 2 fields, found {}", v.len())));
        }
        Ok(v)
    };
    let (hl, header) = rows.next().ok_or_else(|| parse_err(1, "missing header \"n m\""))?;
    let h = nums(hl, header)?;
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::with_capacity(m);
    let mut last = hl;
    for (line, l) in rows {
        let e = nums(line, l)?;
        let (u, v) = (e[0], e[1]);
        if u >= v || v >= n {
            return Err(parse_err(line, format!("edge ({u}, {v}) needs 0 <= u < v < {n}")));
        }
        edges.push((u, v));
        last = line;
    }
    if edges.len() != m {
        return Err(parse_err(last, format!("header declares {m} edges, found {}", edges.len())));
    }
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(parse_err(last, format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
    }
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    edges: Vec<[usize; 2]>,
    bags: BTreeMap<String, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HostJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    path_bags: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<TreeJson>,
}

#[derive(Serialize, Deserialize)]
struct WidthsJson {
    partition: i64,
    host: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertJson {
    kind: CertificateKind,
    clique_size: usize,
    partition: Vec<Vec<usize>>,
    host: HostJson,
    widths: WidthsJson,
}

fn sorted(v: &VertexSet) -> Vec<usize> {
    v.as_slice().to_vec()
}

/// Serializes a certificate with its validator-derived widths. The
/// certificate should be canonicalized first for byte-stable output.
pub fn certificate_to_json(cert: &BlowupCertificate, widths: BlowupWidths) -> serde_json::Value {
    let host = match &cert.host {
        Host::Path(d) => HostJson {
            path_bags: Some(d.bags.iter().map(sorted).collect()),
            tree: None,
        },
        Host::Tree(d) => HostJson {
            path_bags: None,
            tree: Some(TreeJson {
                edges: d.edges.iter().map(|&(a, b)| [a.min(b), a.max(b)]).collect(),
                bags: d.bags.iter().enumerate().map(|(i, b)| (i.to_string(), sorted(b))).collect(),
            }),
        },
    };
    let j = CertJson {
        kind: cert.kind,
        clique_size: cert.clique_size,
        partition: cert.partition.parts().iter().map(sorted).collect(),
        host,
        widths: WidthsJson {
            partition: widths.partition as i64,
            host: widths.host,
        },
    };
    serde_json::to_value(j).expect("certificate serializes")
}

/// A parsed certificate plus the widths it claims.
pub struct LoadedCertificate {
    pub cert: BlowupCertificate,
    pub claimed: BlowupWidths,
}

pub fn certificate_from_json(text: &str) -> Result<LoadedCertificate> {
    let j: CertJson = serde_json::from_str(text)?;
    let host = match (j.host.path_bags, j.host.tree) {
        (Some(bags), None) => Host::Path(PathDecomposition::new(bags.into_iter().map(VertexSet::from_iter).collect())),
        (None, Some(t)) => {
            let mut bags = vec![None; t.bags.len()];
            for (k, b) in t.bags {
                let i: usize = k.parse().map_err(|_| parse_err(0, format!("bag key {k:?} is not a node id")))?;
                let slot = bags
                    .get_mut(i)
                    .ok_or_else(|| parse_err(0, format!("bag key {i} out of range")))?;
                *slot = Some(VertexSet::from_iter(b));
            }
            let bags = bags.into_iter().map(|b| b.unwrap_or_default()).collect();
            Host::Tree(TreeDecomposition {
                edges: t.edges.into_iter().map(|[a, b]| (a, b)).collect(),
                bags,
            })
        }
        _ => return Err(parse_err(0, "host needs exactly one of \"path_bags\" or \"tree\"")),
    };
    Ok(LoadedCertificate {
        cert: BlowupCertificate {
            kind: j.kind,
            clique_size: j.clique_size,
            partition: VertexPartition::new(j.partition.into_iter().map(VertexSet::from_iter).collect()),
            host,
        },
        claimed: BlowupWidths {
            partition: j.widths.partition.max(0) as usize,
            host: j.widths.host,
        },
    })
}

/// Runs `verify_blowup` and also checks that the claimed widths are the real ones.
pub fn verify_loaded(g: &Graph, c: &LoadedCertificate) -> Result<BlowupWidths, Violation> {
    let w = verify_blowup(g, &c.cert)?;
    if w.partition != c.claimed.partition {
        return Err(Violation::WidthClaim {
            field: "partition",
            claimed: c.claimed.partition as i64,
            actual: w.partition as i64,
        });
    }
    if w.host != c.claimed.host {
        return Err(Violation::WidthClaim {
            field: "host",
            claimed: c.claimed.host,
            actual: w.host,
        });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = parse_edge_list("# square\n4 4\n0 1\n1 2\n2 3 # last\n0 3\n").unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap().edges(), g.edges());
        assert_eq!(parse_edge_list("0 0\n").unwrap().n(), 0);
    }

    #[test]
    fn edge_list_errors() {
        for (text, line) in [
            ("", 1),
            ("3 1\n0 x\n", 2),
            ("3 2\n0 1\n", 2),
            ("3 1\n2 1\n", 2),
            ("3 1\n0 3\n", 2),
            ("3 2\n0 1\n0 1\n", 3),
            ("3\n", 1),
        ] {
            match parse_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn certificate_round_trip() {
        let g = Graph::cycle(4);
        let cert = BlowupCertificate {
            kind: CertificateKind::Apex,
            clique_size: 2,
            partition: VertexPartition::new(vec![VertexSet::from([0, 1]), VertexSet::from([2, 3])]),
            host: Host::Tree(TreeDecomposition {
                edges: vec![],
                bags: vec![VertexSet::from([0, 1])],
            }),
        };
        let w = verify_blowup(&g, &cert).unwrap();
        let text = certificate_to_json(&cert, w).to_string();
        assert!(text.contains("\"bags\":{\"0\":[0,1]}"));
        let back = certificate_from_json(&text).unwrap();
        assert_eq!(back.cert, cert);
        assert_eq!(verify_loaded(&g, &back), Ok(w));

        let lying = text.replace("\"host\":1,", "\"host\":0,");
        let back = certificate_from_json(&lying).unwrap();
        assert!(matches!(verify_loaded(&g, &back), Err(Violation::WidthClaim { field: "host", .. })));
    }
}
