//! End-to-end run orchestration: corpus acquisition, reference set
//! construction, per-command analysis, and file emission.
//!
//! Every run writes `config.json` (the resolved configuration) and
//! `exclusions.json` (what the minimum-size filter removed) next to the
//! analysis tables. Each TSV starts with a `#` comment line carrying the
//! approach, its parameters, and a hash of the configuration, so a table
//! can always be traced back to the run that produced it.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use citerank::classes::ClassError;
use citerank::longitudinal::{
    class_count_series, class_members, correlation_series, persistence_series, sample_units,
    scores_at_year, scores_by_year, ScoreMatrix, StatsError,
};
use citerank::model::{Corpus, PaperId};
use citerank::refsets::{
    build_reference_sets, score_set_values, ExclusionReport, ReferenceSet, ScoreError,
};
use serde::Serialize;
use thiserror::Error;

use crate::config::{ApproachKind, CommandKind, Resolved, RunConfig, Source};
use crate::io::{load_csv, load_jsonl, InputFormat, LoadError};
use crate::synth::{generate, SynthError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("the input file holds {actual} yearly columns but --horizon demands {demanded}")]
    HorizonMismatch { demanded: usize, actual: usize },
    #[error("--year {year} is beyond the corpus window of {horizon} years")]
    YearBeyondWindow { year: usize, horizon: usize },
    #[error(
        "this command needs at least one score approach; the fractional approach \
         yields class fractions, not scores"
    )]
    NoScoreApproaches,
}

/// What a run produced, for the caller to report.
#[derive(Debug)]
pub struct RunSummary {
    pub config_hash: String,
    pub papers_total: usize,
    pub survivors: usize,
    pub sets_kept: usize,
    pub sets_dropped: usize,
    pub files: Vec<PathBuf>,
    pub notices: Vec<String>,
}

pub fn run(resolved: &Resolved) -> Result<RunSummary, PipelineError> {
    let corpus = acquire(resolved)?;
    let horizon = corpus.horizon();
    if matches!(resolved.source, Source::File { .. }) {
        if let Some(demanded) = resolved.horizon {
            if demanded != horizon {
                return Err(PipelineError::HorizonMismatch {
                    demanded,
                    actual: horizon,
                });
            }
        }
    }
    let year = resolved.year.unwrap_or(horizon);
    if year > horizon {
        return Err(PipelineError::YearBeyondWindow { year, horizon });
    }

    let (sets, exclusions) = build_reference_sets(&corpus, resolved.min_size);
    let config = RunConfig::assemble(resolved, horizon, year);
    let hash = config.hash();

    fs::create_dir_all(&resolved.out).map_err(|source| PipelineError::Io {
        path: resolved.out.clone(),
        source,
    })?;

    let mut files = Vec::new();
    let config_path = resolved.out.join("config.json");
    write_text(&config_path, &config.to_json())?;
    files.push(config_path);
    let exclusions_path = resolved.out.join("exclusions.json");
    write_text(&exclusions_path, &exclusions_json(&exclusions))?;
    files.push(exclusions_path);

    let mut notices = Vec::new();
    let mut emit = Emit {
        out: &resolved.out,
        hash: &hash,
        files: &mut files,
    };
    match resolved.command {
        CommandKind::Rank => run_rank(&corpus, &sets, resolved, year, &mut emit)?,
        CommandKind::Compare => {
            run_compare(&corpus, &sets, resolved, year, &mut emit, &mut notices)?
        }
        CommandKind::Timeline => run_timeline(&corpus, &sets, resolved, &mut emit)?,
        CommandKind::Units => run_units(&corpus, &sets, resolved, &mut emit, &mut notices)?,
    }

    let survivors = sets
        .iter()
        .flat_map(|set| set.member_rows().iter().copied())
        .collect::<HashSet<_>>()
        .len();

    Ok(RunSummary {
        config_hash: hash,
        papers_total: corpus.len(),
        survivors,
        sets_kept: sets.len(),
        sets_dropped: exclusions.dropped_sets.len(),
        files,
        notices,
    })
}

fn acquire(resolved: &Resolved) -> Result<Corpus, PipelineError> {
    match &resolved.source {
        Source::File { path, format } => Ok(match format {
            InputFormat::Csv => load_csv(path)?,
            InputFormat::Jsonl => load_jsonl(path)?,
        }),
        Source::Generate(params) => Ok(generate(params)?),
    }
}

struct Emit<'a> {
    out: &'a Path,
    hash: &'a str,
    files: &'a mut Vec<PathBuf>,
}

impl Emit<'_> {
    fn tsv(
        &mut self,
        name: &str,
        meta: &str,
        columns: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), PipelineError> {
        let mut text = String::new();
        let _ = writeln!(text, "# {meta}\tconfig={}", self.hash);
        let _ = writeln!(text, "{}", columns.join("\t"));
        for row in rows {
            let _ = writeln!(text, "{}", row.join("\t"));
        }
        let path = self.out.join(name);
        write_text(&path, &text)?;
        self.files.push(path);
        Ok(())
    }
}

/// Writes through a sibling temp file so a crash never leaves a truncated
/// table behind.
fn write_text(path: &Path, text: &str) -> Result<(), PipelineError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|source| PipelineError::Io {
        path: tmp.clone(),
        source,
    })?;
    fs::rename(&tmp, path).map_err(|source| PipelineError::Io {
        path: path.to_owned(),
        source,
    })
}

fn exclusions_json(report: &ExclusionReport) -> String {
    #[derive(Serialize)]
    struct DroppedSetJson<'a> {
        category: &'a str,
        doc_type: &'a str,
        size: usize,
    }
    #[derive(Serialize)]
    struct DroppedPaperJson<'a> {
        paper_id: &'a str,
        reason: &'a str,
    }
    #[derive(Serialize)]
    struct ExclusionsJson<'a> {
        dropped_sets: Vec<DroppedSetJson<'a>>,
        dropped_papers: Vec<DroppedPaperJson<'a>>,
    }
    let doc = ExclusionsJson {
        dropped_sets: report
            .dropped_sets
            .iter()
            .map(|(key, size)| DroppedSetJson {
                category: &key.category,
                doc_type: &key.doc_type,
                size: *size,
            })
            .collect(),
        dropped_papers: report
            .dropped_papers
            .iter()
            .map(|paper| DroppedPaperJson {
                paper_id: paper.paper_id.as_str(),
                reason: &paper.reason,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("exclusion report serializes") + "\n"
}

fn rank_rows(corpus: &Corpus, ids: &[PaperId], scores: &[f64], year: usize) -> Vec<Vec<String>> {
    ids.iter()
        .zip(scores)
        .map(|(id, &score)| {
            let paper = corpus.get(id).expect("scored ids come from the corpus");
            let citations = paper
                .cumulative_citations(year)
                .expect("year checked against the horizon");
            vec![id.to_string(), citations.to_string(), format!("{score:.4}")]
        })
        .collect()
}

fn run_rank(
    corpus: &Corpus,
    sets: &[ReferenceSet],
    resolved: &Resolved,
    year: usize,
    emit: &mut Emit,
) -> Result<(), PipelineError> {
    const COLUMNS: [&str; 3] = ["paper_id", "citations", "score"];
    for &kind in &resolved.approaches {
        if kind == ApproachKind::Cwts {
            for &x in &resolved.thresholds {
                let spec = resolved.spec_for(kind, x);
                let (ids, scores) = scores_at_year(corpus, sets, &spec, year)?;
                let rows = rank_rows(corpus, &ids, &scores, year);
                emit.tsv(
                    &format!("rank_cwts{x}.tsv"),
                    &format!("approach=cwts{x}\tthreshold={x}\tyear={year}"),
                    &COLUMNS,
                    &rows,
                )?;
            }
        } else {
            // the threshold argument only lands inside the fractional approach
            let spec = resolved.spec_for(kind, 10.0);
            let (ids, scores) = scores_at_year(corpus, sets, &spec, year)?;
            let rows = rank_rows(corpus, &ids, &scores, year);
            emit.tsv(
                &format!("rank_{}.tsv", kind.label()),
                &format!("approach={}\tthreshold=-\tyear={year}", kind.label()),
                &COLUMNS,
                &rows,
            )?;
        }
    }
    Ok(())
}

/// Side-by-side scores for the members of the largest reference set. Ties
/// on size go to the lexicographically first key so the pick is stable.
fn run_compare(
    corpus: &Corpus,
    sets: &[ReferenceSet],
    resolved: &Resolved,
    year: usize,
    emit: &mut Emit,
    notices: &mut Vec<String>,
) -> Result<(), PipelineError> {
    let set = sets
        .iter()
        .max_by(|a, b| a.size().cmp(&b.size()).then_with(|| b.key().cmp(a.key())))
        .ok_or(ScoreError::NoReferenceSets)?;

    let mut labels = Vec::new();
    let mut per_approach = Vec::new();
    let mut skipped_fractional = false;
    for &kind in &resolved.approaches {
        if kind == ApproachKind::Cwts {
            skipped_fractional = true;
            continue;
        }
        labels.push(kind.label());
        per_approach.push(score_set_values(
            set,
            corpus,
            &resolved.spec_for(kind, 10.0),
            year,
        )?);
    }
    if labels.is_empty() {
        return Err(PipelineError::NoScoreApproaches);
    }
    if skipped_fractional {
        notices.push(
            "compare: the fractional approach has no single score column; skipped".to_owned(),
        );
    }

    let citations: Vec<u64> = set
        .member_rows()
        .iter()
        .map(|&row| {
            corpus.papers()[row]
                .cumulative_citations(year)
                .expect("year checked against the horizon")
        })
        .collect();
    let mut order: Vec<usize> = (0..set.size()).collect();
    order.sort_by(|&a, &b| {
        citations[b]
            .cmp(&citations[a])
            .then_with(|| set.member_ids()[a].as_str().cmp(set.member_ids()[b].as_str()))
    });

    let rows: Vec<Vec<String>> = order
        .iter()
        .map(|&member| {
            let mut row = vec![
                set.member_ids()[member].to_string(),
                citations[member].to_string(),
            ];
            row.extend(
                per_approach
                    .iter()
                    .map(|scores| format!("{:.4}", scores[member])),
            );
            row
        })
        .collect();

    let mut columns = vec!["paper_id", "citations"];
    columns.extend(labels);
    emit.tsv(
        "compare.tsv",
        &format!("set={}\tyear={year}", set.key()),
        &columns,
        &rows,
    )
}

fn run_timeline(
    corpus: &Corpus,
    sets: &[ReferenceSet],
    resolved: &Resolved,
    emit: &mut Emit,
) -> Result<(), PipelineError> {
    for &kind in &resolved.approaches {
        if kind == ApproachKind::Cwts {
            for &x in &resolved.thresholds {
                let spec = resolved.spec_for(kind, x);
                let matrix = scores_by_year(corpus, sets, &spec)?;
                let expected = class_count_series(&matrix, x, resolved.boundary_rule)?;
                let persistence = persistence_series(&matrix, x, resolved.boundary_rule)?;
                let mut rows = Vec::with_capacity(matrix.horizon());
                for year in 1..=matrix.horizon() {
                    let members = class_members(&matrix, year, x, resolved.boundary_rule)?.len();
                    rows.push(vec![
                        year.to_string(),
                        format!("{:.4}", expected[year - 1]),
                        members.to_string(),
                        persistence.counts[year - 1].to_string(),
                        format!("{:.4}", persistence.percents[year - 1]),
                    ]);
                }
                emit.tsv(
                    &format!("timeline_cwts{x}.tsv"),
                    &format!("approach=cwts{x}\tthreshold={x}"),
                    &["year", "count", "count_p50", "persistent_count", "persistent_percent"],
                    &rows,
                )?;
            }
        } else {
            let spec = resolved.spec_for(kind, 10.0);
            let matrix = scores_by_year(corpus, sets, &spec)?;
            for &x in &resolved.thresholds {
                let counts = class_count_series(&matrix, x, resolved.boundary_rule)?;
                let persistence = persistence_series(&matrix, x, resolved.boundary_rule)?;
                let rows: Vec<Vec<String>> = (1..=matrix.horizon())
                    .map(|year| {
                        vec![
                            year.to_string(),
                            format!("{}", counts[year - 1] as u64),
                            persistence.counts[year - 1].to_string(),
                            format!("{:.4}", persistence.percents[year - 1]),
                        ]
                    })
                    .collect();
                emit.tsv(
                    &format!("timeline_{}_top{x}.tsv", kind.label()),
                    &format!("approach={}\tthreshold={x}", kind.label()),
                    &["year", "count", "persistent_count", "persistent_percent"],
                    &rows,
                )?;
            }
        }
    }
    Ok(())
}

fn run_units(
    corpus: &Corpus,
    sets: &[ReferenceSet],
    resolved: &Resolved,
    emit: &mut Emit,
    notices: &mut Vec<String>,
) -> Result<(), PipelineError> {
    let score_kinds: Vec<ApproachKind> = resolved
        .approaches
        .iter()
        .copied()
        .filter(|&kind| kind != ApproachKind::Cwts)
        .collect();
    if score_kinds.len() < resolved.approaches.len() {
        notices.push(
            "units: the fractional approach yields class fractions, not scores; skipped"
                .to_owned(),
        );
    }
    if score_kinds.is_empty() {
        return Err(PipelineError::NoScoreApproaches);
    }
    let seed = resolved
        .seed
        .expect("unit sampling without a seed is rejected at resolve time");

    let matrices: Vec<(ApproachKind, ScoreMatrix)> = score_kinds
        .iter()
        .map(|&kind| {
            scores_by_year(corpus, sets, &resolved.spec_for(kind, 10.0))
                .map(|matrix| (kind, matrix))
        })
        .collect::<Result<_, _>>()?;
    let ids = matrices[0].1.paper_ids().to_vec();

    for (offset, &size) in resolved.unit_sizes.iter().enumerate() {
        // one draw per size, shared by every approach
        let units = sample_units(&ids, size, resolved.samples, seed.wrapping_add(offset as u64))?;
        for (kind, matrix) in &matrices {
            let series = correlation_series(&units, matrix)?;
            let rows: Vec<Vec<String>> = series
                .iter()
                .enumerate()
                .map(|(index, r)| {
                    vec![
                        (index + 1).to_string(),
                        r.map_or_else(|| "NA".to_owned(), |v| format!("{v:.4}")),
                    ]
                })
                .collect();
            emit.tsv(
                &format!("units_{}_size{size}.tsv", kind.label()),
                &format!(
                    "approach={}\tunit_size={size}\tsamples={}",
                    kind.label(),
                    resolved.samples
                ),
                &["year", "spearman"],
                &rows,
            )?;
        }
    }
    Ok(())
}
