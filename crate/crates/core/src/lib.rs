//! Graphical small cancellation toolkit.
//!
//! Words over a bouquet of circles, labelled graphs and Stallings folding,
//! piece enumeration with the graphical `Gr'(α)` and classical `C'(α)`
//! checkers, builders for the presentations assembled from such graphs, and
//! a seeded harness for random labellings of subdivided graphs.

pub mod alpha;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod presentation;
pub mod random_lab;
pub mod small_cancellation;
pub mod word;

pub use alpha::Alpha;
pub use error::{Error, Result};
pub use graph::{Dart, Edge, FoldedGraph, GraphMetrics, LabeledGraph, SubdivisionSpec};
pub use presentation::Presentation;
pub use small_cancellation::{
    check_cprime, check_gr, enumerate_pieces, find_missing_word, MissingWordCertificate, Piece,
    PieceEnumeration, SmallCancellationReport, Variant, Verdict,
};
pub use word::{gross_cogrowth, Alphabet, Letter, Word};

/// Version string stamped into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
