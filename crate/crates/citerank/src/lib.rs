//! Citation-impact normalization against field reference sets.
//!
//! The crate scores publications by their citation counts relative to the
//! papers of the same subject category and document type: percentile scores
//! in three formula variants, the InCites and SCImago conventions, the P100
//! scale over distinct citation values, and fractional top-class
//! attribution. On top of the per-set scores it builds year-by-year score
//! matrices, top-x% class series with persistence, and rank correlations of
//! sampled research units against the final year of the citation window.

pub mod classes;
pub mod longitudinal;
pub mod model;
pub mod ranking;
pub mod refsets;

pub use model::{Approach, ApproachSpec, BoundaryRule, Corpus, PaperId, PaperRecord, TieRule};
