use std::fs;

use blowup_core::apex_blowup::decompose_apex_free;
use blowup_core::decomp::verify_blowup;
use blowup_core::erdos_posa::hitting_set_for_forest;
use blowup_core::gen;
use blowup_core::io::{certificate_from_json, certificate_to_json, verify_loaded, write_edge_list};
use blowup_core::models::{check_model, find_apex_tree_model, find_rooted_tree_model};
use blowup_core::separator::{find_separation, validate_separation, Separation};
use blowup_core::tree_blowup::{decompose_tree_free, BlowupOutcome};
use blowup_core::{BlowupCertificate, Error, Graph, MinorModel, RootedTree, Violation, VertexSet};
use serde_json::{json, Value};

use crate::files::{self, fail, print, EXIT_MINOR, EXIT_OK, EXIT_REJECTED};
use crate::{DecomposeArgs, Family, GenArgs, Mode, VerifyArgs};

pub fn graph_json(g: &Graph) -> Value {
    json!({"n": g.n(), "edges": g.edges().iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>()})
}

fn graph_from_json(v: &Value) -> Result<Graph, Error> {
    #[derive(serde::Deserialize)]
    struct G {
        n: usize,
        edges: Vec<(usize, usize)>,
    }
    let g: G = serde_json::from_value(v.clone())?;
    Graph::from_edges(g.n, g.edges)
}

/// Model JSON with the pattern graph and rootedness data embedded.
pub fn model_json(m: &MinorModel, pattern: &Graph, r: Option<&VertexSet>, roots: &[usize]) -> Value {
    let mut v = serde_json::to_value(m).expect("model serializes");
    v["kind"] = json!("model");
    v["pattern"] = graph_json(pattern);
    if let Some(r) = r {
        v["R"] = json!(r);
        v["roots"] = json!(roots);
    }
    v
}

/// Certificate JSON with validator-derived widths.
pub fn cert_json(g: &Graph, cert: &BlowupCertificate) -> Result<Value, Error> {
    let w = verify_blowup(g, cert).map_err(|v| Error::Contract(format!("emitted certificate rejected: {v}")))?;
    Ok(certificate_to_json(cert, w))
}

pub fn apex_model(apex: VertexSet, mut m: MinorModel) -> MinorModel {
    m.branch.push(apex);
    m
}

/// Runs the tree or apex pipeline; `Ok((json, exit code))`.
pub fn run_blowup(g: &Graph, t: &RootedTree, apex: bool, assume_free: bool) -> Result<(Value, u8), Error> {
    let tg = t.as_graph();
    if !assume_free {
        if apex {
            if let Some((a, m)) = find_apex_tree_model(g, t)? {
                return Ok((model_json(&apex_model(a, m), &t.plus_apex(), None, &[]), EXIT_MINOR));
            }
        } else if let Some(m) = find_rooted_tree_model(g, t, None, None, &VertexSet::new())? {
            return Ok((model_json(&m, &tg, None, &[]), EXIT_MINOR));
        }
    }
    let out = if apex {
        decompose_apex_free(g, &tg)?
    } else {
        decompose_tree_free(g, &tg)?
    };
    match out {
        BlowupOutcome::Certificate(c) => Ok((cert_json(g, &c)?, EXIT_OK)),
        BlowupOutcome::Counterexample(m) => {
            let p = if apex { t.plus_apex() } else { tg };
            Ok((model_json(&m, &p, None, &[]), EXIT_MINOR))
        }
    }
}

fn decompose_inner(a: &DecomposeArgs) -> Result<(Value, u8), Error> {
    let g = files::graph(&a.graph)?;
    match a.mode {
        Mode::Tree | Mode::Apex => {
            let t = files::tree(&a.pattern)?;
            run_blowup(&g, &t, a.mode == Mode::Apex, a.assume_minor_free)
        }
        Mode::Ep => {
            let f = files::pattern(&a.pattern)?.forest();
            let sets = files::sets(a.sets.as_deref(), &g)?;
            let r = sets.r.unwrap_or_else(|| g.vertices());
            match hitting_set_for_forest(&g, &r, &f) {
                Ok(hit) => Ok((json!({"kind": "cover", "tree": hit.tree, "X": hit.x}), EXIT_OK)),
                Err(Error::PackingExists(m)) => Ok((model_json(&m, &f.as_graph(), Some(&r), &f.roots()), EXIT_MINOR)),
                Err(e) => Err(e),
            }
        }
        Mode::Separation => {
            let tg = files::tree(&a.pattern)?.as_graph();
            let (sep, m) = find_separation(&g, &tg)?;
            Ok((
                json!({"kind": "separation", "A": sep.a, "B": sep.b, "model": m, "pattern": graph_json(&tg)}),
                EXIT_OK,
            ))
        }
    }
}

pub fn decompose(a: &DecomposeArgs) -> u8 {
    match decompose_inner(a) {
        Ok((v, code)) => {
            print(&v);
            code
        }
        Err(e) => fail(&e),
    }
}

enum Verdict {
    Accepted(Value),
    Rejected(Violation),
}

fn pattern_for(doc: &Value, a: &VerifyArgs) -> Result<Graph, Error> {
    if let Some(p) = doc.get("pattern") {
        return graph_from_json(p);
    }
    match &a.pattern {
        Some(p) => Ok(files::pattern(p)?.forest().as_graph()),
        None => Err(Error::Precondition("no pattern in file and no --pattern given".into())),
    }
}

fn verify_inner(a: &VerifyArgs) -> Result<Verdict, Error> {
    let g = files::graph(&a.graph)?;
    let text = files::read(&a.certificate)?;
    let doc: Value = serde_json::from_str(&text)?;
    let kind = doc.get("kind").and_then(Value::as_str).unwrap_or("model");
    let verdict = |c: Result<Value, Violation>| match c {
        Ok(v) => Verdict::Accepted(v),
        Err(v) => Verdict::Rejected(v),
    };
    Ok(match kind {
        "tree-blowup" | "apex-blowup" => {
            let c = certificate_from_json(&text)?;
            verdict(verify_loaded(&g, &c).map(|w| json!({"partition": w.partition, "host": w.host})))
        }
        "model" => {
            let m: MinorModel = serde_json::from_value(doc.clone())?;
            let p = pattern_for(&doc, a)?;
            let r: Option<VertexSet> = doc.get("R").map(|v| serde_json::from_value(v.clone())).transpose()?;
            let roots: Vec<usize> = doc.get("roots").map(|v| serde_json::from_value(v.clone())).transpose()?.unwrap_or_default();
            verdict(check_model(&g, &p, &m, None, r.as_ref(), &roots).map(|_| json!({"branch_sets": m.len()})))
        }
        "separation" => {
            let sep: Separation = serde_json::from_value(doc.clone())?;
            let m: MinorModel = serde_json::from_value(doc["model"].clone())?;
            let p = pattern_for(&doc, a)?;
            verdict(validate_separation(&g, &p, &sep, &m).map(|_| json!({"order": sep.order()})))
        }
        other => return Err(Error::Precondition(format!("unknown kind {other:?}"))),
    })
}

pub fn verify(a: &VerifyArgs) -> u8 {
    match verify_inner(a) {
        Ok(Verdict::Accepted(v)) => {
            print(&json!({"ok": true, "widths": v}));
            EXIT_OK
        }
        Ok(Verdict::Rejected(v)) => {
            print(&json!({"ok": false, "diagnostic": v}));
            EXIT_REJECTED
        }
        Err(e) => fail(&e),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::Precondition(format!("--{flag} is required for this family")))
}

fn gen_inner(a: &GenArgs) -> Result<Graph, Error> {
    let seeded = matches!(a.family, Family::Gnp | Family::Caterpillar | Family::BlowupOfPath);
    let seed = if seeded || a.minor_free.is_some() { need(a.seed, "seed")? } else { a.seed.unwrap_or(0) };
    let family = |s: u64| -> Result<Graph, Error> {
        Ok(match a.family {
            Family::Gnp => gen::gnp(need(a.n, "n")?, need(a.p, "p")?, s),
            Family::Grid => Graph::grid(need(a.rows, "rows")?, need(a.cols, "cols")?),
            Family::Caterpillar => gen::caterpillar(need(a.spine, "spine")?, need(a.legs, "legs")?, s),
            Family::Complete => Graph::complete(need(a.n, "n")?),
            Family::BlowupOfPath => gen::blowup_of_path(need(a.len, "len")?, need(a.c, "c")?, s),
        })
    };
    // Surface flag errors before sampling.
    let first = family(seed)?;
    match &a.minor_free {
        None => Ok(first),
        Some(p) => {
            let t = files::tree(p)?;
            gen::sample_minor_free(|s| family(s).expect("flags checked"), &t, a.apex, seed, a.attempts)
        }
    }
}

pub fn gen(a: &GenArgs) -> u8 {
    let g = match gen_inner(a) {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };
    let text = write_edge_list(&g);
    match &a.out {
        Some(path) => match fs::write(path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => fail(&e.into()),
        },
        None => {
            print!("{text}");
            EXIT_OK
        }
    }
}

