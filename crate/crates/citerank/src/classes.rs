//! Top-x% class membership, both crisp and fractional.
//!
//! A score threshold of x percent cuts a set at 100 - x: papers at or above
//! the cut (or strictly above, under the strict boundary rule) form the
//! top-x% class. The fractional variant instead distributes exactly
//! n * x / 100 class slots over the descending citation ranking, splitting
//! the slot mass that falls on a tied group equally among its members.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::{BoundaryRule, PaperId};

/// Fractional class attribution of one paper.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFraction {
    pub paper_id: PaperId,
    /// Share of the paper counted inside the top class, in [0, 1].
    pub p: f64,
    /// Class width as a percentage of the set, in (0, 100].
    pub top_percent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ClassError {
    #[error("class threshold {0} is outside (0, 100]")]
    ThresholdOutOfRange(f64),
    #[error("cannot classify an empty set")]
    EmptyInput,
    #[error("requested threshold {requested} does not match the threshold {built} the scores were computed for")]
    ThresholdMismatch { requested: f64, built: f64 },
}

fn check_threshold(top_percent: f64) -> Result<(), ClassError> {
    if !(top_percent > 0.0 && top_percent <= 100.0) {
        return Err(ClassError::ThresholdOutOfRange(top_percent));
    }
    Ok(())
}

/// Indices of the papers whose score puts them in the top `top_percent`
/// class. Scores are percentile-like values in [0, 100].
pub fn top_class_members(
    scores: &[f64],
    top_percent: f64,
    boundary_rule: BoundaryRule,
) -> Result<HashSet<usize>, ClassError> {
    check_threshold(top_percent)?;
    let cut = 100.0 - top_percent;
    Ok(scores
        .iter()
        .enumerate()
        .filter(|&(_, &score)| match boundary_rule {
            BoundaryRule::Inclusive => score >= cut,
            BoundaryRule::Strict => score > cut,
        })
        .map(|(index, _)| index)
        .collect())
}

/// Fractional membership of every paper in the top `top_percent` class.
///
/// The class holds n * top_percent / 100 slots. Walking the papers in
/// descending citation order, each tied group covers an interval of
/// positions; the group receives the overlap of its interval with the slot
/// budget, shared equally among members. The fractions sum to the slot
/// count exactly and never increase as citation counts decrease.
pub fn cwts_fractions(citations: &[u64], top_percent: f64) -> Result<Vec<f64>, ClassError> {
    check_threshold(top_percent)?;
    if citations.is_empty() {
        return Err(ClassError::EmptyInput);
    }
    let n = citations.len();
    let slots = n as f64 * top_percent / 100.0;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| citations[b].cmp(&citations[a]));
    let mut fractions = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && citations[order[end]] == citations[order[start]] {
            end += 1;
        }
        // the group occupies positions (start, end]; its share of the slot
        // budget is the overlap of that interval with [0, slots]
        let size = (end - start) as f64;
        let share = (slots.min(end as f64) - start as f64).clamp(0.0, size);
        let each = share / size;
        for &i in &order[start..end] {
            fractions[i] = each;
        }
        start = end;
    }
    Ok(fractions)
}

/// Expected number of class members: the sum of the fractions. Empty input
/// sums to 0.
pub fn expected_top_count(fractions: &[ClassFraction]) -> f64 {
    fractions.iter().map(|f| f.p).sum()
}
