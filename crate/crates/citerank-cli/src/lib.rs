//! Command-line front end for the citation ranking library: corpus
//! ingestion, synthetic corpus generation, and the analysis pipeline
//! behind the `citerank` binary.

pub mod config;
pub mod io;
pub mod pipeline;
pub mod synth;
