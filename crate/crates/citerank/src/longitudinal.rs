//! Score trajectories across the citation window: per-year matrices, class
//! counts and persistence, and rank correlation of unit scores against the
//! final year.

use std::collections::{HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::classes::{self, ClassError, ClassFraction};
use crate::model::{Approach, ApproachSpec, BoundaryRule, Corpus, PaperId, TieRule};
use crate::ranking::{self, Direction};
use crate::refsets::{self, ReferenceSet, ScoreError};

/// Aggregated scores of every surviving paper for every year of the window.
///
/// Rows are papers in corpus order, columns are years 1..=horizon. A matrix
/// is complete: each cell holds the paper's aggregated score at that year
/// under the one approach the matrix was built for.
#[derive(Debug, Clone)]
pub struct ScoreMatrix {
    approach: Approach,
    paper_ids: Vec<PaperId>,
    row_index: HashMap<PaperId, usize>,
    horizon: usize,
    /// Column-major: the column for year y starts at (y - 1) * papers.
    values: Vec<f64>,
}

impl ScoreMatrix {
    pub fn approach(&self) -> Approach {
        self.approach
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn paper_ids(&self) -> &[PaperId] {
        &self.paper_ids
    }

    pub fn len(&self) -> usize {
        self.paper_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paper_ids.is_empty()
    }

    pub fn row(&self, id: &PaperId) -> Option<usize> {
        self.row_index.get(id).copied()
    }

    pub fn get(&self, id: &PaperId, year: usize) -> Option<f64> {
        if year == 0 || year > self.horizon {
            return None;
        }
        self.row(id)
            .map(|row| self.values[(year - 1) * self.paper_ids.len() + row])
    }

    /// All scores for one year, aligned with [`ScoreMatrix::paper_ids`].
    /// Panics if `year` is outside 1..=horizon.
    pub fn year_scores(&self, year: usize) -> &[f64] {
        assert!(
            year >= 1 && year <= self.horizon,
            "year {year} outside 1..={}",
            self.horizon
        );
        let n = self.paper_ids.len();
        &self.values[(year - 1) * n..year * n]
    }

    /// Labeled class fractions for one year; `None` unless the matrix was
    /// built for the fractional approach.
    pub fn class_fractions(&self, year: usize) -> Option<Vec<ClassFraction>> {
        let Approach::Cwts { top_percent } = self.approach else {
            return None;
        };
        let fractions = self
            .paper_ids
            .iter()
            .zip(self.year_scores(year))
            .map(|(id, &p)| ClassFraction {
                paper_id: id.clone(),
                p,
                top_percent,
            })
            .collect();
        Some(fractions)
    }
}

/// Precomputed lookup from surviving papers to their sets.
struct SurvivorIndex {
    /// Corpus rows of surviving papers, in corpus order.
    paper_rows: Vec<usize>,
    /// For each survivor: (set index, position inside that set).
    memberships: Vec<Vec<(usize, usize)>>,
}

fn index_survivors(corpus: &Corpus, sets: &[ReferenceSet]) -> Result<SurvivorIndex, ScoreError> {
    if sets.is_empty() {
        return Err(ScoreError::NoReferenceSets);
    }
    let mut covered = vec![false; corpus.len()];
    for set in sets {
        for &row in set.member_rows() {
            covered[row] = true;
        }
    }
    let paper_rows: Vec<usize> = (0..corpus.len()).filter(|&row| covered[row]).collect();
    let mut matrix_row = vec![usize::MAX; corpus.len()];
    for (row, &corpus_row) in paper_rows.iter().enumerate() {
        matrix_row[corpus_row] = row;
    }
    let mut memberships: Vec<Vec<(usize, usize)>> = vec![Vec::new(); paper_rows.len()];
    for (set_index, set) in sets.iter().enumerate() {
        for (position, &corpus_row) in set.member_rows().iter().enumerate() {
            memberships[matrix_row[corpus_row]].push((set_index, position));
        }
    }
    Ok(SurvivorIndex {
        paper_rows,
        memberships,
    })
}

fn aggregated_column(
    corpus: &Corpus,
    sets: &[ReferenceSet],
    spec: &ApproachSpec,
    index: &SurvivorIndex,
    year: usize,
) -> Result<Vec<f64>, ScoreError> {
    let per_set: Vec<Vec<f64>> = sets
        .iter()
        .map(|set| refsets::score_set_values(set, corpus, spec, year))
        .collect::<Result<_, _>>()?;
    let mut column = Vec::with_capacity(index.memberships.len());
    let mut buffer = Vec::new();
    for sets_of_paper in &index.memberships {
        buffer.clear();
        buffer.extend(
            sets_of_paper
                .iter()
                .map(|&(set_index, position)| per_set[set_index][position]),
        );
        let score = refsets::aggregate(&buffer, spec.approach)
            .expect("every surviving paper belongs to at least one set");
        column.push(score);
    }
    Ok(column)
}

/// Aggregated scores of all surviving papers at a single year, as
/// (paper ids in corpus order, aligned scores).
pub fn scores_at_year(
    corpus: &Corpus,
    sets: &[ReferenceSet],
    spec: &ApproachSpec,
    year: usize,
) -> Result<(Vec<PaperId>, Vec<f64>), ScoreError> {
    let index = index_survivors(corpus, sets)?;
    let column = aggregated_column(corpus, sets, spec, &index, year)?;
    let ids = index
        .paper_rows
        .iter()
        .map(|&row| corpus.papers()[row].paper_id.clone())
        .collect();
    Ok((ids, column))
}

/// Builds the complete score matrix over years 1..=horizon. Reference-set
/// membership is fixed once; only the citation counts move with the year.
pub fn scores_by_year(
    corpus: &Corpus,
    sets: &[ReferenceSet],
    spec: &ApproachSpec,
) -> Result<ScoreMatrix, ScoreError> {
    let index = index_survivors(corpus, sets)?;
    let columns: Vec<Vec<f64>> = (1..=corpus.horizon())
        .into_par_iter()
        .map(|year| aggregated_column(corpus, sets, spec, &index, year))
        .collect::<Result<_, _>>()?;
    let paper_ids: Vec<PaperId> = index
        .paper_rows
        .iter()
        .map(|&row| corpus.papers()[row].paper_id.clone())
        .collect();
    let row_index = paper_ids
        .iter()
        .enumerate()
        .map(|(row, id)| (id.clone(), row))
        .collect();
    let mut values = Vec::with_capacity(paper_ids.len() * corpus.horizon());
    for column in columns {
        values.extend(column);
    }
    Ok(ScoreMatrix {
        approach: spec.approach,
        paper_ids,
        row_index,
        horizon: corpus.horizon(),
        values,
    })
}

fn validate_threshold(matrix: &ScoreMatrix, top_percent: f64) -> Result<(), ClassError> {
    if !(top_percent > 0.0 && top_percent <= 100.0) {
        return Err(ClassError::ThresholdOutOfRange(top_percent));
    }
    if let Approach::Cwts { top_percent: built } = matrix.approach {
        if (built - top_percent).abs() > 1e-9 {
            return Err(ClassError::ThresholdMismatch {
                requested: top_percent,
                built,
            });
        }
    }
    Ok(())
}

/// Rows of the papers in the top class at `year`.
///
/// For percentile-like matrices this cuts scores at 100 - top_percent. The
/// fractional approach has no score cut; a paper counts as a member when
/// the majority of it sits in the class (p >= 0.5, or > 0.5 under the
/// strict boundary rule).
pub fn class_members(
    matrix: &ScoreMatrix,
    year: usize,
    top_percent: f64,
    boundary_rule: BoundaryRule,
) -> Result<HashSet<usize>, ClassError> {
    validate_threshold(matrix, top_percent)?;
    let scores = matrix.year_scores(year);
    match matrix.approach {
        Approach::Cwts { .. } => Ok(scores
            .iter()
            .enumerate()
            .filter(|&(_, &p)| match boundary_rule {
                BoundaryRule::Inclusive => p >= 0.5,
                BoundaryRule::Strict => p > 0.5,
            })
            .map(|(row, _)| row)
            .collect()),
        _ => classes::top_class_members(scores, top_percent, boundary_rule),
    }
}

/// Class size per year: the member count for percentile-like approaches,
/// the expected member count (sum of fractions) for the fractional one.
pub fn class_count_series(
    matrix: &ScoreMatrix,
    top_percent: f64,
    boundary_rule: BoundaryRule,
) -> Result<Vec<f64>, ClassError> {
    validate_threshold(matrix, top_percent)?;
    (1..=matrix.horizon())
        .map(|year| match matrix.approach {
            Approach::Cwts { .. } => {
                let fractions = matrix
                    .class_fractions(year)
                    .expect("fractional matrix yields fractions");
                Ok(classes::expected_top_count(&fractions))
            }
            _ => classes::top_class_members(matrix.year_scores(year), top_percent, boundary_rule)
                .map(|members| members.len() as f64),
        })
        .collect()
}

/// How much of the final-year class was already in the class earlier.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceSeries {
    /// Per year: |class(year) intersected with class(horizon)|.
    pub counts: Vec<usize>,
    /// Counts as a percentage of the final class size; 0 when the final
    /// class is empty. The last entry is 100 whenever the final class is
    /// not empty.
    pub percents: Vec<f64>,
}

pub fn persistence_series(
    matrix: &ScoreMatrix,
    top_percent: f64,
    boundary_rule: BoundaryRule,
) -> Result<PersistenceSeries, ClassError> {
    let final_class = class_members(matrix, matrix.horizon(), top_percent, boundary_rule)?;
    let mut counts = Vec::with_capacity(matrix.horizon());
    let mut percents = Vec::with_capacity(matrix.horizon());
    for year in 1..=matrix.horizon() {
        let class = class_members(matrix, year, top_percent, boundary_rule)?;
        let count = class.intersection(&final_class).count();
        counts.push(count);
        if final_class.is_empty() {
            percents.push(0.0);
        } else {
            percents.push(100.0 * count as f64 / final_class.len() as f64);
        }
    }
    Ok(PersistenceSeries { counts, percents })
}

/// A fictitious research unit: a drawn subset of papers evaluated together.
#[derive(Debug, Clone, PartialEq)]
pub struct ResearchUnit {
    pub unit_id: String,
    pub member_ids: Vec<PaperId>,
}

impl ResearchUnit {
    pub fn size(&self) -> usize {
        self.member_ids.len()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 observations, got {0}")]
    TooFewObservations(usize),
    #[error("correlation is undefined for a constant vector")]
    ConstantInput,
    #[error("need at least 2 units, got {0}")]
    TooFewUnits(usize),
    #[error("unit size {requested} is outside 1..={available}")]
    UnitSizeOutOfRange { requested: usize, available: usize },
    #[error("unit {0} has no members")]
    EmptyUnit(String),
    #[error("paper {0} is not in the score matrix")]
    UnknownPaper(PaperId),
}

/// Draws `n_samples` units of `unit_size` papers each, uniformly without
/// replacement within a unit, from a fixed seed. The same seed, pool, and
/// sizes reproduce the same units.
pub fn sample_units(
    paper_ids: &[PaperId],
    unit_size: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<ResearchUnit>, StatsError> {
    if unit_size == 0 || unit_size > paper_ids.len() {
        return Err(StatsError::UnitSizeOutOfRange {
            requested: unit_size,
            available: paper_ids.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_samples)
        .map(|k| {
            let member_ids = rand::seq::index::sample(&mut rng, paper_ids.len(), unit_size)
                .into_iter()
                .map(|i| paper_ids[i].clone())
                .collect();
            ResearchUnit {
                unit_id: format!("unit-{k:04}"),
                member_ids,
            }
        })
        .collect())
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

/// Tie-corrected rank correlation: Pearson correlation of the average-tie
/// ranks. Constant input has no defined rank correlation and is rejected.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(StatsError::TooFewObservations(a.len()));
    }
    if a.iter().all(|&v| v == a[0]) || b.iter().all(|&v| v == b[0]) {
        return Err(StatsError::ConstantInput);
    }
    let ranks_a = ranking::rank_ties(a, Direction::Ascending, TieRule::Average)
        .expect("length checked above")
        .into_ranks();
    let ranks_b = ranking::rank_ties(b, Direction::Ascending, TieRule::Average)
        .expect("length checked above")
        .into_ranks();
    Ok(pearson(&ranks_a, &ranks_b).clamp(-1.0, 1.0))
}

/// Correlation of unit mean scores at each year against the final year.
///
/// Entry t-1 holds the rank correlation between the units' mean scores at
/// year t and at the horizon; a year where either vector is constant has
/// no defined correlation and yields `None`.
pub fn correlation_series(
    units: &[ResearchUnit],
    matrix: &ScoreMatrix,
) -> Result<Vec<Option<f64>>, StatsError> {
    if units.len() < 2 {
        return Err(StatsError::TooFewUnits(units.len()));
    }
    let unit_rows: Vec<Vec<usize>> = units
        .iter()
        .map(|unit| {
            if unit.member_ids.is_empty() {
                return Err(StatsError::EmptyUnit(unit.unit_id.clone()));
            }
            unit.member_ids
                .iter()
                .map(|id| {
                    matrix
                        .row(id)
                        .ok_or_else(|| StatsError::UnknownPaper(id.clone()))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let means_at = |year: usize| -> Vec<f64> {
        let scores = matrix.year_scores(year);
        unit_rows
            .iter()
            .map(|rows| rows.iter().map(|&row| scores[row]).sum::<f64>() / rows.len() as f64)
            .collect()
    };
    let final_means = means_at(matrix.horizon());
    (1..=matrix.horizon())
        .map(|year| {
            let means = means_at(year);
            match spearman(&means, &final_means) {
                Ok(r) => Ok(Some(r)),
                Err(StatsError::ConstantInput) => Ok(None),
                Err(other) => Err(other),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::model::PaperRecord;
    use crate::refsets::build_reference_sets;

    const TOL: f64 = 1e-9;

    fn record(id: &str, categories: &[&str], yearly: &[u32]) -> PaperRecord {
        PaperRecord {
            paper_id: PaperId::new(id),
            doc_type: "article".to_owned(),
            subject_categories: categories.iter().map(|&c| c.to_owned()).collect(),
            journal_metric: None,
            yearly_citations: yearly.to_vec(),
        }
    }

    fn small_world() -> (Corpus, Vec<ReferenceSet>) {
        let corpus = Corpus::validate(
            vec![
                record("A", &["X"], &[1, 0]),
                record("B", &["X"], &[0, 3]),
                record("C", &["X"], &[2, 2]),
            ],
            2,
        )
        .unwrap();
        let (sets, _) = build_reference_sets(&corpus, 1);
        (corpus, sets)
    }

    #[test]
    fn matrix_is_complete_over_survivors_and_years() {
        let (corpus, sets) = small_world();
        let spec = ApproachSpec::new(Approach::P100);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        assert_eq!(matrix.len(), 3);
        assert_eq!(matrix.horizon(), 2);
        // year 1 counts 1,0,2; year 2 counts 1,3,4
        assert_abs_diff_eq!(matrix.get(&PaperId::new("A"), 1).unwrap(), 50.0, epsilon = TOL);
        assert_abs_diff_eq!(matrix.get(&PaperId::new("B"), 1).unwrap(), 0.0, epsilon = TOL);
        assert_abs_diff_eq!(matrix.get(&PaperId::new("B"), 2).unwrap(), 50.0, epsilon = TOL);
        assert_abs_diff_eq!(matrix.get(&PaperId::new("C"), 2).unwrap(), 100.0, epsilon = TOL);
        assert_eq!(matrix.get(&PaperId::new("A"), 3), None);
        assert_eq!(matrix.get(&PaperId::new("Z"), 1), None);
        assert_eq!(matrix.year_scores(1).len(), 3);
    }

    #[test]
    fn multi_set_papers_average_their_set_scores() {
        let corpus = Corpus::validate(
            vec![
                record("A", &["X"], &[4]),
                record("B", &["X"], &[0]),
                record("M", &["X", "Y"], &[2]),
                record("C", &["Y"], &[8]),
                record("D", &["Y"], &[1]),
            ],
            1,
        )
        .unwrap();
        let (sets, _) = build_reference_sets(&corpus, 1);
        let spec = ApproachSpec::new(Approach::Hazen);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let x_scores = refsets::score_paper_set(&sets[0], &corpus, &spec, 1).unwrap();
        let y_scores = refsets::score_paper_set(&sets[1], &corpus, &spec, 1).unwrap();
        let m = PaperId::new("M");
        let expected = (x_scores[&m] + y_scores[&m]) / 2.0;
        assert_abs_diff_eq!(matrix.get(&m, 1).unwrap(), expected, epsilon = TOL);
        // single-set papers match their set score directly
        let a = PaperId::new("A");
        assert_abs_diff_eq!(matrix.get(&a, 1).unwrap(), x_scores[&a], epsilon = TOL);
    }

    #[test]
    fn incites_aggregation_keeps_the_best_set_score() {
        let corpus = Corpus::validate(
            vec![
                record("A", &["X"], &[4]),
                record("B", &["X"], &[0]),
                record("M", &["X", "Y"], &[2]),
                record("C", &["Y"], &[1]),
                record("D", &["Y"], &[0]),
            ],
            1,
        )
        .unwrap();
        let (sets, _) = build_reference_sets(&corpus, 1);
        let spec = ApproachSpec::new(Approach::InCites);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let x_scores = refsets::score_paper_set(&sets[0], &corpus, &spec, 1).unwrap();
        let y_scores = refsets::score_paper_set(&sets[1], &corpus, &spec, 1).unwrap();
        let m = PaperId::new("M");
        let expected = x_scores[&m].max(y_scores[&m]);
        assert_abs_diff_eq!(matrix.get(&m, 1).unwrap(), expected, epsilon = TOL);
    }

    #[test]
    fn empty_set_list_is_rejected() {
        let (corpus, _) = small_world();
        let spec = ApproachSpec::new(Approach::Hazen);
        assert!(matches!(
            scores_by_year(&corpus, &[], &spec),
            Err(ScoreError::NoReferenceSets)
        ));
    }

    #[test]
    fn single_year_scores_match_the_matrix_column() {
        let (corpus, sets) = small_world();
        let spec = ApproachSpec::new(Approach::Hazen);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let (ids, scores) = scores_at_year(&corpus, &sets, &spec, 2).unwrap();
        assert_eq!(ids, matrix.paper_ids());
        assert_eq!(scores, matrix.year_scores(2));
    }

    #[test]
    fn full_width_class_counts_everyone() {
        let (corpus, sets) = small_world();
        let spec = ApproachSpec::new(Approach::Hazen);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let counts = class_count_series(&matrix, 100.0, BoundaryRule::Inclusive).unwrap();
        assert_eq!(counts, [3.0, 3.0]);
    }

    #[test]
    fn fractional_counts_equal_the_slot_budget_in_a_single_set() {
        let corpus = Corpus::validate(
            (0..10)
                .map(|i| record(&format!("P{i}"), &["X"], &[i, 2 * i]))
                .collect(),
            2,
        )
        .unwrap();
        let (sets, _) = build_reference_sets(&corpus, 1);
        let spec = ApproachSpec::new(Approach::Cwts { top_percent: 20.0 });
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let counts = class_count_series(&matrix, 20.0, BoundaryRule::Inclusive).unwrap();
        for count in counts {
            assert_abs_diff_eq!(count, 2.0, epsilon = TOL);
        }
    }

    #[test]
    fn fractional_matrices_reject_foreign_thresholds() {
        let (corpus, sets) = small_world();
        let spec = ApproachSpec::new(Approach::Cwts { top_percent: 10.0 });
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        assert!(matches!(
            class_count_series(&matrix, 5.0, BoundaryRule::Inclusive),
            Err(ClassError::ThresholdMismatch { .. })
        ));
        assert!(matrix.class_fractions(1).is_some());
        let hazen = scores_by_year(&corpus, &sets, &ApproachSpec::new(Approach::Hazen)).unwrap();
        assert!(hazen.class_fractions(1).is_none());
    }

    #[test]
    fn persistence_ends_at_one_hundred_percent() {
        let (corpus, sets) = small_world();
        let spec = ApproachSpec::new(Approach::Hazen);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let series = persistence_series(&matrix, 50.0, BoundaryRule::Inclusive).unwrap();
        assert_eq!(series.counts.len(), 2);
        assert_abs_diff_eq!(series.percents[1], 100.0, epsilon = TOL);
    }

    #[test]
    fn persistence_counts_the_overlap_with_the_final_class() {
        // leader swaps between years: A tops year 1, B tops year 2
        let corpus = Corpus::validate(
            vec![
                record("A", &["X"], &[5, 0]),
                record("B", &["X"], &[1, 9]),
                record("C", &["X"], &[0, 1]),
                record("D", &["X"], &[2, 1]),
            ],
            2,
        )
        .unwrap();
        let (sets, _) = build_reference_sets(&corpus, 1);
        let spec = ApproachSpec::new(Approach::PercentileLow);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let series = persistence_series(&matrix, 25.0, BoundaryRule::Inclusive).unwrap();
        // top-25% class holds exactly the top paper each year
        assert_eq!(series.counts, [0, 1]);
        assert_abs_diff_eq!(series.percents[0], 0.0, epsilon = TOL);
        assert_abs_diff_eq!(series.percents[1], 100.0, epsilon = TOL);
    }

    #[test]
    fn sampling_is_seeded_and_bounded() {
        let pool: Vec<PaperId> = (0..20).map(|i| PaperId::new(format!("P{i}"))).collect();
        let a = sample_units(&pool, 5, 3, 99).unwrap();
        let b = sample_units(&pool, 5, 3, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_units(&pool, 5, 3, 100).unwrap();
        assert_ne!(a, c);
        assert_eq!(a.len(), 3);
        for unit in &a {
            assert_eq!(unit.size(), 5);
            let distinct: HashSet<&PaperId> = unit.member_ids.iter().collect();
            assert_eq!(distinct.len(), 5);
        }
        // ids are distinct across units of one draw
        assert_ne!(a[0].unit_id, a[1].unit_id);

        let whole = sample_units(&pool, 20, 1, 1).unwrap();
        let members: HashSet<&PaperId> = whole[0].member_ids.iter().collect();
        assert_eq!(members.len(), 20);

        assert!(matches!(
            sample_units(&pool, 21, 1, 1),
            Err(StatsError::UnitSizeOutOfRange { .. })
        ));
        assert!(matches!(
            sample_units(&pool, 0, 1, 1),
            Err(StatsError::UnitSizeOutOfRange { .. })
        ));
    }

    #[test]
    fn spearman_handles_ties_and_rejects_degenerate_input() {
        assert_abs_diff_eq!(
            spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap(),
            1.0,
            epsilon = TOL
        );
        assert_abs_diff_eq!(
            spearman(&[1.0, 2.0, 3.0], &[5.0, 3.0, 1.0]).unwrap(),
            -1.0,
            epsilon = TOL
        );
        // identical tie structure correlates perfectly
        assert_abs_diff_eq!(
            spearman(&[1.0, 2.0, 2.0, 4.0], &[10.0, 20.0, 20.0, 40.0]).unwrap(),
            1.0,
            epsilon = TOL
        );
        assert_eq!(
            spearman(&[1.0, 1.0], &[1.0, 2.0]).unwrap_err(),
            StatsError::ConstantInput
        );
        assert_eq!(
            spearman(&[1.0], &[1.0]).unwrap_err(),
            StatsError::TooFewObservations(1)
        );
        assert_eq!(
            spearman(&[1.0, 2.0], &[1.0]).unwrap_err(),
            StatsError::LengthMismatch { left: 2, right: 1 }
        );
    }

    #[test]
    fn correlation_series_ends_at_unity() {
        let corpus = Corpus::validate(
            (0..8)
                .map(|i| record(&format!("P{i}"), &["X"], &[i, i, i]))
                .collect(),
            3,
        )
        .unwrap();
        let (sets, _) = build_reference_sets(&corpus, 1);
        let spec = ApproachSpec::new(Approach::Hazen);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let units = sample_units(matrix.paper_ids(), 3, 10, 7).unwrap();
        let series = correlation_series(&units, &matrix).unwrap();
        assert_eq!(series.len(), 3);
        // rankings never change, so every year correlates perfectly
        for r in &series {
            assert_abs_diff_eq!(r.unwrap(), 1.0, epsilon = TOL);
        }
    }

    #[test]
    fn degenerate_years_yield_no_correlation() {
        // year 1 has no citations at all: every unit mean is 0
        let corpus = Corpus::validate(
            (0..8)
                .map(|i| record(&format!("P{i}"), &["X"], &[0, i + 1]))
                .collect(),
            2,
        )
        .unwrap();
        let (sets, _) = build_reference_sets(&corpus, 1);
        let spec = ApproachSpec::new(Approach::Hazen);
        let matrix = scores_by_year(&corpus, &sets, &spec).unwrap();
        let units = sample_units(matrix.paper_ids(), 2, 6, 3).unwrap();
        let series = correlation_series(&units, &matrix).unwrap();
        assert_eq!(series[0], None);
        assert_abs_diff_eq!(series[1].unwrap(), 1.0, epsilon = TOL);
    }

    #[test]
    fn correlation_series_validates_units() {
        let (corpus, sets) = small_world();
        let matrix =
            scores_by_year(&corpus, &sets, &ApproachSpec::new(Approach::Hazen)).unwrap();
        let units = sample_units(matrix.paper_ids(), 2, 5, 1).unwrap();
        assert!(matches!(
            correlation_series(&units[..1], &matrix),
            Err(StatsError::TooFewUnits(1))
        ));
        let stranger = vec![
            ResearchUnit {
                unit_id: "u0".to_owned(),
                member_ids: vec![PaperId::new("NOPE")],
            },
            units[0].clone(),
        ];
        assert!(matches!(
            correlation_series(&stranger, &matrix),
            Err(StatsError::UnknownPaper(_))
        ));
        let empty = vec![
            ResearchUnit {
                unit_id: "u0".to_owned(),
                member_ids: vec![],
            },
            units[0].clone(),
        ];
        assert!(matches!(
            correlation_series(&empty, &matrix),
            Err(StatsError::EmptyUnit(_))
        ));
    }
}
