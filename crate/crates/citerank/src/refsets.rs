//! Reference-set construction, per-set scoring, and multi-set aggregation.
//!
//! Papers are compared only against papers of the same subject category and
//! document type. A paper carrying several categories belongs to several
//! sets; sets below a minimum size are dropped, and papers whose sets were
//! all dropped leave the analysis entirely. A paper scored in several sets
//! is reduced to one value per year: the mean for every approach except the
//! InCites convention, which keeps the best set score.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::classes::{self, ClassError};
use crate::model::{Approach, ApproachSpec, Corpus, PaperId, YearOutOfRange};
use crate::ranking::{self, PercentileFormula, RankError};

/// Grouping key: one subject category paired with one document type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefSetKey {
    pub category: String,
    pub doc_type: String,
}

impl fmt::Display for RefSetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.category, self.doc_type)
    }
}

/// One surviving reference set with its members in corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    key: RefSetKey,
    member_ids: Vec<PaperId>,
    member_rows: Vec<usize>,
}

impl ReferenceSet {
    pub fn key(&self) -> &RefSetKey {
        &self.key
    }

    pub fn member_ids(&self) -> &[PaperId] {
        &self.member_ids
    }

    /// Corpus rows of the members, aligned with [`ReferenceSet::member_ids`].
    pub fn member_rows(&self) -> &[usize] {
        &self.member_rows
    }

    pub fn size(&self) -> usize {
        self.member_ids.len()
    }
}

/// What the size filter removed and why.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExclusionReport {
    /// Keys that fell below the minimum size, with their would-be sizes.
    pub dropped_sets: Vec<(RefSetKey, usize)>,
    /// Papers left without any surviving reference set.
    pub dropped_papers: Vec<DroppedPaper>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DroppedPaper {
    pub paper_id: PaperId,
    pub reason: String,
}

/// Groups the corpus into (category, doc_type) sets and drops those smaller
/// than `min_size`. Sets and members come out in deterministic order: keys
/// lexicographic, members in corpus order.
pub fn build_reference_sets(
    corpus: &Corpus,
    min_size: usize,
) -> (Vec<ReferenceSet>, ExclusionReport) {
    let mut groups: BTreeMap<RefSetKey, Vec<usize>> = BTreeMap::new();
    for (row, paper) in corpus.papers().iter().enumerate() {
        for category in &paper.subject_categories {
            groups
                .entry(RefSetKey {
                    category: category.clone(),
                    doc_type: paper.doc_type.clone(),
                })
                .or_default()
                .push(row);
        }
    }
    let mut sets = Vec::new();
    let mut report = ExclusionReport::default();
    let mut covered = vec![false; corpus.len()];
    for (key, rows) in groups {
        if rows.len() >= min_size {
            for &row in &rows {
                covered[row] = true;
            }
            let member_ids = rows
                .iter()
                .map(|&row| corpus.papers()[row].paper_id.clone())
                .collect();
            sets.push(ReferenceSet {
                key,
                member_ids,
                member_rows: rows,
            });
        } else {
            report.dropped_sets.push((key, rows.len()));
        }
    }
    for (row, paper) in corpus.papers().iter().enumerate() {
        if !covered[row] {
            report.dropped_papers.push(DroppedPaper {
                paper_id: paper.paper_id.clone(),
                reason: "all reference sets containing this paper fall below the minimum size"
                    .to_owned(),
            });
        }
    }
    (sets, report)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error(transparent)]
    Year(#[from] YearOutOfRange),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("no reference sets to score against")]
    NoReferenceSets,
}

/// Scores every member of `set` at `year`, aligned with the member order.
///
/// Citation counts are cumulative through `year`. The SCImago secondary key
/// is the paper's journal metric, with 0 substituted when absent; the CWTS
/// approach yields class fractions in [0, 1] instead of percentile scores.
pub fn score_set_values(
    set: &ReferenceSet,
    corpus: &Corpus,
    spec: &ApproachSpec,
    year: usize,
) -> Result<Vec<f64>, ScoreError> {
    let citations = set
        .member_rows
        .iter()
        .map(|&row| corpus.papers()[row].cumulative_citations(year))
        .collect::<Result<Vec<u64>, _>>()?;
    let scores = match spec.approach {
        Approach::PercentileLow => {
            ranking::percentile(&citations, PercentileFormula::Low, spec.tie_rule, spec.zero_rule)?
                .into_scores()
        }
        Approach::PercentileInclusive => ranking::percentile(
            &citations,
            PercentileFormula::Inclusive,
            spec.tie_rule,
            spec.zero_rule,
        )?
        .into_scores(),
        Approach::Hazen => ranking::percentile(
            &citations,
            PercentileFormula::Hazen,
            spec.tie_rule,
            spec.zero_rule,
        )?
        .into_scores(),
        Approach::InCites => ranking::incites_rank(&citations)?.into_scores(),
        Approach::Scimago => {
            let keys: Vec<f64> = set
                .member_rows
                .iter()
                .map(|&row| corpus.papers()[row].journal_metric.unwrap_or(0.0))
                .collect();
            ranking::scimago_rank(&citations, &keys, spec.zero_rule)?.into_scores()
        }
        Approach::P100 => ranking::p100_rank(&citations)?.into_scores(),
        Approach::Cwts { top_percent } => classes::cwts_fractions(&citations, top_percent)?,
    };
    Ok(scores)
}

/// Same as [`score_set_values`] but keyed by paper id.
pub fn score_paper_set(
    set: &ReferenceSet,
    corpus: &Corpus,
    spec: &ApproachSpec,
    year: usize,
) -> Result<HashMap<PaperId, f64>, ScoreError> {
    let values = score_set_values(set, corpus, spec, year)?;
    Ok(set.member_ids.iter().cloned().zip(values).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot aggregate an empty list of set scores")]
pub struct EmptyAggregate;

/// Reduces a paper's per-set scores to one value: the best set score under
/// the InCites convention, the mean under every other approach.
pub fn aggregate(per_set_scores: &[f64], approach: Approach) -> Result<f64, EmptyAggregate> {
    if per_set_scores.is_empty() {
        return Err(EmptyAggregate);
    }
    let value = match approach {
        Approach::InCites => per_set_scores.iter().copied().fold(f64::MIN, f64::max),
        _ => per_set_scores.iter().sum::<f64>() / per_set_scores.len() as f64,
    };
    Ok(value)
}
