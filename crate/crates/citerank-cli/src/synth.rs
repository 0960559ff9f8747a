//! Synthetic corpus generation with heavy-tailed citation counts.
//!
//! Each paper draws a latent citation rate from a log-normal, an aging
//! profile spreads that rate over the window (activity peaks in year 3 and
//! decays after), and yearly counts are Poisson draws around the faded
//! rate. A share of papers stays uncited for good, mirroring the mass of
//! never-cited papers in real fields.

use citerank::model::{Corpus, CorpusError, PaperId, PaperRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Poisson};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub fields: usize,
    pub papers_per_field: usize,
    pub horizon: usize,
    /// Sigma of the log-normal latent rate; larger means heavier tails.
    pub skew: f64,
    /// Share of papers that never collect a citation, in [0, 1].
    pub uncited_share: f64,
    /// Share of papers assigned a second subject category, in [0, 1].
    pub multi_category_share: f64,
    /// Citation-level gradient across fields: rates in field k are scaled
    /// by 1 + field_spread * k / (fields - 1). Zero keeps all fields
    /// statistically identical.
    pub field_spread: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            fields: 3,
            papers_per_field: 500,
            horizon: 31,
            skew: 1.4,
            uncited_share: 0.2,
            multi_category_share: 0.0,
            field_spread: 0.0,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("generator parameters invalid: {0}")]
    BadParams(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

fn category_label(field: usize) -> String {
    format!("F{:02}", field + 1)
}

/// Citation activity relative to the latent rate: ramps up to a peak in
/// year 3, then decays exponentially.
fn aging_weight(year: usize) -> f64 {
    let t = year as f64 / 3.0;
    t * (1.0 - t).exp()
}

pub fn generate(params: &SynthParams) -> Result<Corpus, SynthError> {
    if params.fields == 0 || params.papers_per_field == 0 {
        return Err(SynthError::BadParams(
            "fields and papers per field must be at least 1".to_owned(),
        ));
    }
    if params.horizon == 0 {
        return Err(SynthError::BadParams(
            "the citation window must cover at least one year".to_owned(),
        ));
    }
    if !params.skew.is_finite() || params.skew <= 0.0 {
        return Err(SynthError::BadParams(format!(
            "skew must be a positive finite number, got {}",
            params.skew
        )));
    }
    for (name, share) in [
        ("uncited share", params.uncited_share),
        ("multi-category share", params.multi_category_share),
    ] {
        if !(0.0..=1.0).contains(&share) {
            return Err(SynthError::BadParams(format!(
                "{name} must lie in [0, 1], got {share}"
            )));
        }
    }
    if !params.field_spread.is_finite() || params.field_spread < 0.0 {
        return Err(SynthError::BadParams(format!(
            "field spread must be a non-negative finite number, got {}",
            params.field_spread
        )));
    }

    let field_level = |field: usize| {
        if params.fields == 1 {
            1.0
        } else {
            1.0 + params.field_spread * field as f64 / (params.fields - 1) as f64
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let rate_dist = LogNormal::new(1.0, params.skew).expect("validated sigma");
    let metric_dist = LogNormal::new(0.0, 0.8).expect("constant parameters");
    let mut records = Vec::with_capacity(params.fields * params.papers_per_field);
    for field in 0..params.fields {
        for serial in 0..params.papers_per_field {
            let index = field * params.papers_per_field + serial;
            let mut subject_categories = vec![category_label(field)];
            if params.fields > 1 && rng.gen_bool(params.multi_category_share) {
                let mut other = rng.gen_range(0..params.fields - 1);
                if other >= field {
                    other += 1;
                }
                subject_categories.push(category_label(other));
            }
            let journal_metric = Some(metric_dist.sample(&mut rng));
            let uncited = rng.gen_bool(params.uncited_share);
            let rate: f64 = rate_dist.sample(&mut rng) * field_level(field);
            let yearly_citations = (1..=params.horizon)
                .map(|year| {
                    if uncited {
                        return 0;
                    }
                    let mean = (rate * aging_weight(year)).max(1e-12);
                    let draw: f64 = Poisson::new(mean).expect("positive mean").sample(&mut rng);
                    draw.min(u32::MAX as f64) as u32
                })
                .collect();
            records.push(PaperRecord {
                paper_id: PaperId::new(format!("P{:06}", index + 1)),
                doc_type: "article".to_owned(),
                subject_categories,
                journal_metric,
                yearly_citations,
            });
        }
    }
    Ok(Corpus::validate(records, params.horizon)?)
}

#[cfg(test)]
mod tests {
    use citerank::refsets::build_reference_sets;

    use super::*;

    #[test]
    fn shape_follows_the_parameters() {
        let params = SynthParams {
            fields: 3,
            papers_per_field: 200,
            horizon: 10,
            ..SynthParams::default()
        };
        let corpus = generate(&params).unwrap();
        assert_eq!(corpus.len(), 600);
        assert_eq!(corpus.horizon(), 10);
        // single-category default: exactly one article set per field
        let (sets, report) = build_reference_sets(&corpus, 100);
        assert_eq!(sets.len(), 3);
        assert!(sets.iter().all(|s| s.size() == 200));
        assert!(report.dropped_papers.is_empty());
    }

    #[test]
    fn same_seed_reproduces_the_corpus() {
        let params = SynthParams {
            fields: 2,
            papers_per_field: 50,
            horizon: 5,
            multi_category_share: 0.4,
            ..SynthParams::default()
        };
        let a = generate(&params).unwrap();
        let b = generate(&params).unwrap();
        assert_eq!(a.papers(), b.papers());
        let different = generate(&SynthParams {
            seed: 43,
            ..params
        })
        .unwrap();
        assert_ne!(a.papers(), different.papers());
    }

    #[test]
    fn uncited_share_is_honored_at_the_extremes() {
        let all_uncited = generate(&SynthParams {
            fields: 1,
            papers_per_field: 40,
            horizon: 4,
            uncited_share: 1.0,
            ..SynthParams::default()
        })
        .unwrap();
        assert!(all_uncited
            .papers()
            .iter()
            .all(|p| p.yearly_citations.iter().all(|&c| c == 0)));

        let all_cited = generate(&SynthParams {
            fields: 1,
            papers_per_field: 40,
            horizon: 8,
            uncited_share: 0.0,
            ..SynthParams::default()
        })
        .unwrap();
        // with the aging profile over 8 years nearly every rate produces
        // at least one citation
        let cited = all_cited
            .papers()
            .iter()
            .filter(|p| p.yearly_citations.iter().any(|&c| c > 0))
            .count();
        assert!(cited > 30, "only {cited} of 40 papers collected citations");
    }

    #[test]
    fn multi_category_share_adds_second_fields() {
        let corpus = generate(&SynthParams {
            fields: 3,
            papers_per_field: 100,
            horizon: 3,
            multi_category_share: 0.5,
            ..SynthParams::default()
        })
        .unwrap();
        let multi = corpus
            .papers()
            .iter()
            .filter(|p| p.subject_categories.len() == 2)
            .count();
        assert!((100..=200).contains(&multi), "got {multi} two-field papers");
        for paper in corpus.papers() {
            assert!(paper.subject_categories.len() <= 2);
        }
    }

    #[test]
    fn field_spread_grades_citation_levels() {
        let corpus = generate(&SynthParams {
            fields: 3,
            papers_per_field: 300,
            horizon: 5,
            skew: 1.0,
            uncited_share: 0.0,
            field_spread: 2.0,
            ..SynthParams::default()
        })
        .unwrap();
        let mut totals = [0u64; 3];
        for (row, paper) in corpus.papers().iter().enumerate() {
            totals[row / 300] += paper.cumulative_citations(5).unwrap();
        }
        assert!(
            totals[0] < totals[1] && totals[1] < totals[2],
            "field totals not graded: {totals:?}"
        );
    }

    #[test]
    fn bad_parameters_are_rejected() {
        for params in [
            SynthParams {
                fields: 0,
                ..SynthParams::default()
            },
            SynthParams {
                horizon: 0,
                ..SynthParams::default()
            },
            SynthParams {
                skew: -1.0,
                ..SynthParams::default()
            },
            SynthParams {
                uncited_share: 1.5,
                ..SynthParams::default()
            },
            SynthParams {
                multi_category_share: -0.1,
                ..SynthParams::default()
            },
            SynthParams {
                field_spread: -0.5,
                ..SynthParams::default()
            },
        ] {
            assert!(matches!(generate(&params), Err(SynthError::BadParams(_))));
        }
    }
}
