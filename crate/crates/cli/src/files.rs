use std::fs;
use std::path::Path;

use blowup_core::io::parse_edge_list;
use blowup_core::{Error, Graph, RootedForest, RootedTree, VertexSet};
use serde::Deserialize;
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_MINOR: u8 = 2;
pub const EXIT_REJECTED: u8 = 3;
pub const EXIT_FALSIFIED: u8 = 4;

pub fn read(path: &Path) -> Result<String, Error> {
    Ok(fs::read_to_string(path)?)
}

pub fn graph(path: &Path) -> Result<Graph, Error> {
    parse_edge_list(&read(path)?)
}

/// A single tree or a forest, as given by a pattern file.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum PatternFile {
    Tree(RootedTree),
    Forest(Vec<RootedTree>),
}

impl PatternFile {
    pub fn forest(self) -> RootedForest {
        match self {
            PatternFile::Tree(t) => RootedForest::new(vec![t]),
            PatternFile::Forest(ts) => RootedForest::new(ts),
        }
    }
}

pub fn pattern(path: &Path) -> Result<PatternFile, Error> {
    Ok(serde_json::from_str(&read(path)?)?)
}

pub fn tree(path: &Path) -> Result<RootedTree, Error> {
    match pattern(path)? {
        PatternFile::Tree(t) => Ok(t),
        PatternFile::Forest(_) => Err(Error::InvalidPattern("expected a single tree".into())),
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Sets {
    #[serde(rename = "S")]
    pub s: Option<VertexSet>,
    #[serde(rename = "R")]
    pub r: Option<VertexSet>,
}

pub fn sets(path: Option<&Path>, g: &Graph) -> Result<Sets, Error> {
    let Some(p) = path else { return Ok(Sets::default()) };
    let sets: Sets = serde_json::from_str(&read(p)?)?;
    for s in sets.s.iter().chain(sets.r.iter()) {
        g.check_set(s)?;
    }
    Ok(sets)
}

pub fn print(v: &Value) {
    println!("{v}");
}

/// Prints a structured error and returns its exit code.
pub fn fail(e: &Error) -> u8 {
    print(&json!({"error": {"kind": e.kind(), "message": e.to_string()}}));
    match e {
        Error::TheoremFalsified { .. } => EXIT_FALSIFIED,
        _ => EXIT_ERROR,
    }
}
