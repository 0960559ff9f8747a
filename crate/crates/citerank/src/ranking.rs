//! Tie-aware ranking and the per-set scoring formulas.
//!
//! All scores are computed within one reference set at a time. The
//! percentile family maps the ascending tie-collapsed rank i of a paper
//! among n set members through one of three formulas:
//!
//! * low:       100 * (i - 1) / n
//! * inclusive: 100 * i / n
//! * hazen:     100 * (i - 0.5) / n
//!
//! The InCites convention ranks descending with maximum tied ranks and
//! reports the complement 100 - 100 * i / n. The SCImago convention breaks
//! citation ties with a journal-prestige key before applying the inclusive
//! formula. The P100 scale ranks the distinct citation values only.

use std::cmp::Ordering;

use thiserror::Error;

use crate::model::TieRule;

/// Sort direction for ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

/// Tie-collapsed 1-based ranks aligned with the input order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    ranks: Vec<f64>,
    direction: Direction,
}

impl RankVector {
    pub fn ranks(&self) -> &[f64] {
        &self.ranks
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn into_ranks(self) -> Vec<f64> {
        self.ranks
    }
}

/// Per-paper scores aligned with the input order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    scores: Vec<f64>,
}

impl ScoreVector {
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn into_scores(self) -> Vec<f64> {
        self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("cannot rank an empty set")]
    EmptyInput,
    #[error("citation vector has {citations} entries but {keys} secondary keys were given")]
    KeyLengthMismatch { citations: usize, keys: usize },
}

/// Percentile formula applied to an ascending tie-collapsed rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PercentileFormula {
    /// 100 * (i - 1) / n.
    Low,
    /// 100 * i / n.
    Inclusive,
    /// 100 * (i - 0.5) / n.
    Hazen,
}

impl PercentileFormula {
    fn apply(self, rank: f64, n: f64) -> f64 {
        match self {
            PercentileFormula::Low => 100.0 * ((rank - 1.0) / n),
            PercentileFormula::Inclusive => 100.0 * (rank / n),
            PercentileFormula::Hazen => 100.0 * ((rank - 0.5) / n),
        }
    }
}

/// Sorts positions by `cmp` and assigns each tied run one rank according to
/// `tie_rule`. Positions are 1-based; the result is aligned with the input.
fn rank_by<F>(n: usize, cmp: F, tie_rule: TieRule) -> Vec<f64>
where
    F: Fn(usize, usize) -> Ordering,
{
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp(a, b));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cmp(order[start], order[end]) == Ordering::Equal {
            end += 1;
        }
        // the run occupies positions start+1..=end
        let rank = match tie_rule {
            TieRule::Average => (start + 1 + end) as f64 / 2.0,
            TieRule::Min => (start + 1) as f64,
            TieRule::Max => end as f64,
        };
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Ranks `values` in the given direction, collapsing ties per `tie_rule`.
pub fn rank_ties(
    values: &[f64],
    direction: Direction,
    tie_rule: TieRule,
) -> Result<RankVector, RankError> {
    if values.is_empty() {
        return Err(RankError::EmptyInput);
    }
    let ranks = match direction {
        Direction::Ascending => rank_by(
            values.len(),
            |a, b| values[a].total_cmp(&values[b]),
            tie_rule,
        ),
        Direction::Descending => rank_by(
            values.len(),
            |a, b| values[b].total_cmp(&values[a]),
            tie_rule,
        ),
    };
    Ok(RankVector { ranks, direction })
}

/// Percentile score of every paper in a set from its citation count.
///
/// With `zero_rule` set, papers with zero citations are assigned score 0
/// after the formula is applied, whatever their formula value was.
pub fn percentile(
    citations: &[u64],
    formula: PercentileFormula,
    tie_rule: TieRule,
    zero_rule: bool,
) -> Result<ScoreVector, RankError> {
    if citations.is_empty() {
        return Err(RankError::EmptyInput);
    }
    let n = citations.len() as f64;
    let ranks = rank_by(
        citations.len(),
        |a, b| citations[a].cmp(&citations[b]),
        tie_rule,
    );
    let mut scores: Vec<f64> = ranks.iter().map(|&r| formula.apply(r, n)).collect();
    if zero_rule {
        for (score, &count) in scores.iter_mut().zip(citations) {
            if count == 0 {
                *score = 0.0;
            }
        }
    }
    Ok(ScoreVector { scores })
}

/// InCites-style score: descending maximum tied rank i mapped to
/// 100 - 100 * i / n.
///
/// Papers with zero citations land on rank n and therefore score exactly 0;
/// a single-paper set scores 0.
pub fn incites_rank(citations: &[u64]) -> Result<ScoreVector, RankError> {
    if citations.is_empty() {
        return Err(RankError::EmptyInput);
    }
    let n = citations.len() as f64;
    let ranks = rank_by(
        citations.len(),
        |a, b| citations[b].cmp(&citations[a]),
        TieRule::Max,
    );
    let scores = ranks.iter().map(|&r| 100.0 - 100.0 * (r / n)).collect();
    Ok(ScoreVector { scores })
}

/// SCImago-style score: ascending sort on (citations, secondary key), then
/// the inclusive percentile formula. A missing key must be passed as 0.
///
/// Ties remaining after both keys are collapsed with the average rule.
pub fn scimago_rank(
    citations: &[u64],
    secondary_keys: &[f64],
    zero_rule: bool,
) -> Result<ScoreVector, RankError> {
    if citations.is_empty() {
        return Err(RankError::EmptyInput);
    }
    if citations.len() != secondary_keys.len() {
        return Err(RankError::KeyLengthMismatch {
            citations: citations.len(),
            keys: secondary_keys.len(),
        });
    }
    let n = citations.len() as f64;
    let ranks = rank_by(
        citations.len(),
        |a, b| {
            citations[a]
                .cmp(&citations[b])
                .then_with(|| secondary_keys[a].total_cmp(&secondary_keys[b]))
        },
        TieRule::Average,
    );
    let mut scores: Vec<f64> = ranks.iter().map(|&r| 100.0 * (r / n)).collect();
    if zero_rule {
        for (score, &count) in scores.iter_mut().zip(citations) {
            if count == 0 {
                *score = 0.0;
            }
        }
    }
    Ok(ScoreVector { scores })
}

/// P100 score: the distinct citation values are sorted ascending and indexed
/// 0..=i_max; a paper with the value at index i scores 100 * i / i_max.
///
/// Tied papers share an index, so every occupied score step has the same
/// width regardless of how many papers sit on it. When all papers are tied
/// there is a single distinct value and every paper scores 0.
pub fn p100_rank(citations: &[u64]) -> Result<ScoreVector, RankError> {
    if citations.is_empty() {
        return Err(RankError::EmptyInput);
    }
    let mut distinct = citations.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let i_max = distinct.len() - 1;
    if i_max == 0 {
        return Ok(ScoreVector {
            scores: vec![0.0; citations.len()],
        });
    }
    let scale = i_max as f64;
    let scores = citations
        .iter()
        .map(|c| {
            let index = distinct
                .binary_search(c)
                .expect("every input value is in the distinct list");
            100.0 * (index as f64 / scale)
        })
        .collect();
    Ok(ScoreVector { scores })
}
