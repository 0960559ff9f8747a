//! Core domain types: papers, validated corpora, and scoring configuration.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Opaque identifier of a single publication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PaperId(String);

impl PaperId {
    pub fn new(id: impl Into<String>) -> Self {
        PaperId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PaperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PaperId {
    fn from(id: &str) -> Self {
        PaperId(id.to_owned())
    }
}

impl From<String> for PaperId {
    fn from(id: String) -> Self {
        PaperId(id)
    }
}

/// One publication and its citation history over a fixed window of years.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperRecord {
    pub paper_id: PaperId,
    pub doc_type: String,
    /// Subject categories the paper belongs to; at least one, no duplicates.
    pub subject_categories: Vec<String>,
    /// Journal prestige value used as a secondary sort key; may be absent.
    pub journal_metric: Option<f64>,
    /// Citations received in each year; index 0 is the publication year.
    pub yearly_citations: Vec<u32>,
}

impl PaperRecord {
    /// Citations accumulated from publication through year `year` (1-based).
    pub fn cumulative_citations(&self, year: usize) -> Result<u64, YearOutOfRange> {
        if year == 0 || year > self.yearly_citations.len() {
            return Err(YearOutOfRange {
                year,
                horizon: self.yearly_citations.len(),
            });
        }
        Ok(self.yearly_citations[..year]
            .iter()
            .map(|&c| u64::from(c))
            .sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("year {year} is outside the citation window 1..={horizon}")]
pub struct YearOutOfRange {
    pub year: usize,
    pub horizon: usize,
}

/// A validated set of papers sharing one citation window.
///
/// Construction goes through [`Corpus::validate`]; afterwards the contents
/// are immutable, every paper id is unique, and every citation history has
/// exactly `horizon` entries.
#[derive(Debug, Clone)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    index: HashMap<PaperId, usize>,
    horizon: usize,
}

impl Corpus {
    pub fn validate(records: Vec<PaperRecord>, horizon: usize) -> Result<Self, CorpusError> {
        if horizon == 0 {
            return Err(CorpusError::InvalidHorizon);
        }
        if records.is_empty() {
            return Err(CorpusError::Empty);
        }
        let mut index = HashMap::with_capacity(records.len());
        for (row, paper) in records.iter().enumerate() {
            if index.insert(paper.paper_id.clone(), row).is_some() {
                return Err(CorpusError::DuplicatePaperId(paper.paper_id.clone()));
            }
            if paper.subject_categories.is_empty() {
                return Err(CorpusError::NoCategories(paper.paper_id.clone()));
            }
            let mut seen = HashSet::with_capacity(paper.subject_categories.len());
            for category in &paper.subject_categories {
                if !seen.insert(category.as_str()) {
                    return Err(CorpusError::DuplicateCategory {
                        paper_id: paper.paper_id.clone(),
                        category: category.clone(),
                    });
                }
            }
            if paper.yearly_citations.len() != horizon {
                return Err(CorpusError::HorizonMismatch {
                    paper_id: paper.paper_id.clone(),
                    expected: horizon,
                    actual: paper.yearly_citations.len(),
                });
            }
            if let Some(metric) = paper.journal_metric {
                if !metric.is_finite() || metric < 0.0 {
                    return Err(CorpusError::InvalidJournalMetric {
                        paper_id: paper.paper_id.clone(),
                        value: metric,
                    });
                }
            }
        }
        Ok(Corpus {
            papers: records,
            index,
            horizon,
        })
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn get(&self, id: &PaperId) -> Option<&PaperRecord> {
        self.position(id).map(|row| &self.papers[row])
    }

    /// Row of the paper in [`Corpus::papers`], if present.
    pub fn position(&self, id: &PaperId) -> Option<usize> {
        self.index.get(id).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("corpus has no papers")]
    Empty,
    #[error("citation window must cover at least one year")]
    InvalidHorizon,
    #[error("duplicate paper id {0}")]
    DuplicatePaperId(PaperId),
    #[error("paper {0} has no subject categories")]
    NoCategories(PaperId),
    #[error("paper {paper_id} lists category {category} more than once")]
    DuplicateCategory { paper_id: PaperId, category: String },
    #[error("paper {paper_id} has {actual} yearly citation counts, expected {expected}")]
    HorizonMismatch {
        paper_id: PaperId,
        expected: usize,
        actual: usize,
    },
    #[error("paper {paper_id} has an invalid journal metric {value}")]
    InvalidJournalMetric { paper_id: PaperId, value: f64 },
}

/// How papers with identical sort keys share a rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// Mean of the positions the tied group occupies. Keeps the rank sum of
    /// n papers at n*(n+1)/2 regardless of ties.
    #[default]
    Average,
    /// First position of the tied group.
    Min,
    /// Last position of the tied group.
    Max,
}

/// Whether a paper sitting exactly on a class threshold belongs to the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryRule {
    /// Score >= threshold is in (default).
    #[default]
    Inclusive,
    /// Score must exceed the threshold strictly.
    Strict,
}

/// A scoring approach applied within one reference set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Approach {
    /// Ascending percentile 100*(i-1)/n: share of the set strictly below.
    PercentileLow,
    /// Ascending percentile 100*i/n: share of the set at or below.
    PercentileInclusive,
    /// Ascending percentile 100*(i-0.5)/n: midpoint variant whose mean is 50.
    Hazen,
    /// Descending max-tie rank i, complemented to 100 - 100*i/n.
    InCites,
    /// Ascending percentile with a journal-prestige secondary sort key.
    Scimago,
    /// Rank over the distinct citation values only, scaled to span 0..=100.
    P100,
    /// Fractional attribution to the top `top_percent` class.
    Cwts { top_percent: f64 },
}

impl Approach {
    /// Stable lowercase label used in output files and logs.
    pub fn label(&self) -> String {
        match self {
            Approach::PercentileLow => "p_low".to_owned(),
            Approach::PercentileInclusive => "p_inc".to_owned(),
            Approach::Hazen => "hazen".to_owned(),
            Approach::InCites => "incites".to_owned(),
            Approach::Scimago => "scimago".to_owned(),
            Approach::P100 => "p100".to_owned(),
            Approach::Cwts { top_percent } => format!("cwts{top_percent}"),
        }
    }

    /// True for the approach whose scores are class fractions in [0, 1]
    /// rather than percentile-like scores in [0, 100].
    pub fn is_fractional(&self) -> bool {
        matches!(self, Approach::Cwts { .. })
    }
}

/// An [`Approach`] together with the conventions it is evaluated under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproachSpec {
    pub approach: Approach,
    pub tie_rule: TieRule,
    /// Overwrite scores of papers with zero citations to 0. On by default for
    /// the percentile approaches; InCites and P100 place uncited papers at 0
    /// structurally, so the flag does not apply to them.
    pub zero_rule: bool,
    pub boundary_rule: BoundaryRule,
}

impl ApproachSpec {
    /// Default conventions for `approach`: average ties, inclusive boundary,
    /// and the zero adjustment wherever it is not already built in.
    pub fn new(approach: Approach) -> Self {
        let zero_rule = matches!(
            approach,
            Approach::PercentileLow
                | Approach::PercentileInclusive
                | Approach::Hazen
                | Approach::Scimago
        );
        ApproachSpec {
            approach,
            tie_rule: TieRule::Average,
            zero_rule,
            boundary_rule: BoundaryRule::Inclusive,
        }
    }

    pub fn with_tie_rule(mut self, tie_rule: TieRule) -> Self {
        self.tie_rule = tie_rule;
        self
    }

    pub fn with_zero_rule(mut self, zero_rule: bool) -> Self {
        self.zero_rule = zero_rule;
        self
    }

    pub fn with_boundary_rule(mut self, boundary_rule: BoundaryRule) -> Self {
        self.boundary_rule = boundary_rule;
        self
    }
}
