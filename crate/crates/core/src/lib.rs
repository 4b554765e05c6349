//! Certifying decompositions of graphs excluding a tree or an apex-forest as a
//! minor: explicit embeddings into strong products `H ⊠ K_c` with `H` of
//! bounded path- or treewidth, or a minor model showing the premise fails.

pub mod apex_blowup;
pub mod combine;
pub mod decomp;
pub mod diag;
pub mod erdos_posa;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod models;
pub mod oracles;
pub mod separator;
pub mod tree_blowup;

pub use decomp::{
    BlowupCertificate, BlowupWidths, CertificateKind, Host, Kppd, PairPathDecomposition,
    PathDecomposition, TreeDecomposition, VertexPartition,
};
pub use diag::Violation;
pub use error::{Error, Result};
pub use graph::{ContractionMap, Graph, VertexSet};
pub use models::{MinorModel, RootedForest, RootedTree};
