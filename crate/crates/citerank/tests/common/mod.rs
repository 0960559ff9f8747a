//! Counting-based reference implementations used to cross-check the fast
//! paths. Nothing here sorts or groups: every rank is derived by comparing
//! a paper against the whole set, so a sorting or run-collapsing bug in the
//! library cannot hide behind a shared code path.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use citerank::model::TieRule;
use citerank::ranking::{Direction, PercentileFormula};

fn tie_rank(before: usize, equal: usize, tie_rule: TieRule) -> f64 {
    let first = (before + 1) as f64;
    let last = (before + equal) as f64;
    match tie_rule {
        TieRule::Min => first,
        TieRule::Max => last,
        TieRule::Average => (first + last) / 2.0,
    }
}

pub fn brute_rank(values: &[f64], direction: Direction, tie_rule: TieRule) -> Vec<f64> {
    (0..values.len())
        .map(|i| {
            let mut before = 0;
            let mut equal = 0;
            for j in 0..values.len() {
                match values[j].total_cmp(&values[i]) {
                    Ordering::Less if direction == Direction::Ascending => before += 1,
                    Ordering::Greater if direction == Direction::Descending => before += 1,
                    Ordering::Equal => equal += 1,
                    _ => {}
                }
            }
            tie_rank(before, equal, tie_rule)
        })
        .collect()
}

pub fn brute_percentile(
    citations: &[u64],
    formula: PercentileFormula,
    tie_rule: TieRule,
    zero_rule: bool,
) -> Vec<f64> {
    let n = citations.len() as f64;
    citations
        .iter()
        .map(|&c| {
            if zero_rule && c == 0 {
                return 0.0;
            }
            let before = citations.iter().filter(|&&x| x < c).count();
            let equal = citations.iter().filter(|&&x| x == c).count();
            let rank = tie_rank(before, equal, tie_rule);
            match formula {
                PercentileFormula::Low => 100.0 * ((rank - 1.0) / n),
                PercentileFormula::Inclusive => 100.0 * (rank / n),
                PercentileFormula::Hazen => 100.0 * ((rank - 0.5) / n),
            }
        })
        .collect()
}

/// InCites score through the equivalent closed form: the share of the set
/// cited strictly less.
pub fn brute_incites(citations: &[u64]) -> Vec<f64> {
    let n = citations.len() as f64;
    citations
        .iter()
        .map(|&c| {
            let below = citations.iter().filter(|&&x| x < c).count();
            100.0 * (below as f64 / n)
        })
        .collect()
}

pub fn brute_scimago(citations: &[u64], keys: &[f64], zero_rule: bool) -> Vec<f64> {
    let n = citations.len() as f64;
    (0..citations.len())
        .map(|i| {
            if zero_rule && citations[i] == 0 {
                return 0.0;
            }
            let mut before = 0;
            let mut equal = 0;
            for j in 0..citations.len() {
                let pair = citations[j]
                    .cmp(&citations[i])
                    .then(keys[j].total_cmp(&keys[i]));
                match pair {
                    Ordering::Less => before += 1,
                    Ordering::Equal => equal += 1,
                    Ordering::Greater => {}
                }
            }
            100.0 * (tie_rank(before, equal, TieRule::Average) / n)
        })
        .collect()
}

pub fn brute_p100(citations: &[u64]) -> Vec<f64> {
    let distinct: BTreeSet<u64> = citations.iter().copied().collect();
    let i_max = distinct.len() - 1;
    if i_max == 0 {
        return vec![0.0; citations.len()];
    }
    citations
        .iter()
        .map(|&c| {
            let below = distinct.iter().filter(|&&v| v < c).count();
            100.0 * (below as f64 / i_max as f64)
        })
        .collect()
}

/// Fractional top-class attribution, position by position: the descending
/// position p covers the unit interval [p, p+1) and receives its overlap
/// with [0, slots]; a tied group averages the shares of its positions.
pub fn brute_cwts(citations: &[u64], top_percent: f64) -> Vec<f64> {
    let n = citations.len();
    let slots = n as f64 * top_percent / 100.0;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| citations[b].cmp(&citations[a]));
    let share_at: Vec<f64> = (0..n)
        .map(|position| (slots - position as f64).clamp(0.0, 1.0))
        .collect();
    (0..n)
        .map(|i| {
            let positions: Vec<usize> = (0..n)
                .filter(|&p| citations[order[p]] == citations[i])
                .collect();
            let total: f64 = positions.iter().map(|&p| share_at[p]).sum();
            total / positions.len() as f64
        })
        .collect()
}

/// Rank correlation from scratch: counting-based average ranks fed through
/// a plain product-moment correlation.
pub fn brute_spearman(a: &[f64], b: &[f64]) -> f64 {
    let ra = brute_rank(a, Direction::Ascending, TieRule::Average);
    let rb = brute_rank(b, Direction::Ascending, TieRule::Average);
    let n = ra.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (&x, &y) in ra.iter().zip(&rb) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
}
