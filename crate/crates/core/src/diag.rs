//! Structured validator diagnostics: an axiom id plus the witness that broke it.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum Violation {
    VertexOutOfRange { vertex: usize },
    BagIndexOutOfRange { bag: usize },
    VertexUncovered { vertex: usize },
    NotContiguous { vertex: usize },
    SubtreeDisconnected { vertex: usize },
    EdgeUncovered { u: usize, v: usize },
    SkeletonNotTree,
    PartitionOverlap { vertex: usize },
    PartitionGap { vertex: usize },
    PartitionEmptyPart { part: usize },
    PartitionWidth { width: usize, limit: usize },
    SubgraphMissing { vertex: usize },
    HangMissing { component: usize },
    HangUncovered { component: usize, vertex: usize },
    HangUnknownComponent { component: usize },
    WidthClaim { field: &'static str, claimed: i64, actual: i64 },
    WidthBound { field: &'static str, width: i64, bound: i64 },
    EmbeddingEdge { u: usize, v: usize },
    BranchCount { expected: usize, actual: usize },
    BranchEmpty { pattern_vertex: usize },
    BranchOverlap { vertex: usize },
    Connectivity { pattern_vertex: usize },
    PatternEdgeMissing { a: usize, b: usize },
    NotSRooted { pattern_vertex: usize },
    NotRRooted { pattern_vertex: usize },
    Forbidden { vertex: usize },
    SeparationCover { vertex: usize },
    SeparationEdge { u: usize, v: usize },
    SeparationOrder { order: usize, expected: usize },
    SeparationRightDisconnected,
    SeparationNoRightNeighbor { vertex: usize },
    LeftContainment,
    HavenNotComponent { set: Vec<usize> },
    HavenNotTouching { x: Vec<usize>, y: Vec<usize> },
}

impl Violation {
    /// The axiom id, as it appears in the JSON `axiom` field.
    pub fn axiom(&self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.get("axiom").and_then(|a| a.as_str()).map(str::to_owned))
            .unwrap_or_default()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match serde_json::to_string(self) {
            Ok(s) => f.write_str(&s),
            Err(_) => write!(f, "{self:?}"),
        }
    }
}

impl std::error::Error for Violation {}

pub type Check = Result<(), Violation>;
