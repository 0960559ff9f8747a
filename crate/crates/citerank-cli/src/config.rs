//! Run configuration: flag resolution, validation, and the serialized echo
//! that stamps every output file with a reproducibility hash.

use std::path::PathBuf;

use citerank::model::{Approach, ApproachSpec, BoundaryRule, TieRule};
use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::io::InputFormat;
use crate::synth::SynthParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ApproachKind {
    #[value(name = "p_low")]
    PLow,
    #[value(name = "p_inc")]
    PInc,
    #[value(name = "hazen")]
    Hazen,
    #[value(name = "incites")]
    InCites,
    #[value(name = "scimago")]
    Scimago,
    #[value(name = "p100")]
    P100,
    #[value(name = "cwts")]
    Cwts,
}

impl ApproachKind {
    pub fn label(self) -> &'static str {
        match self {
            ApproachKind::PLow => "p_low",
            ApproachKind::PInc => "p_inc",
            ApproachKind::Hazen => "hazen",
            ApproachKind::InCites => "incites",
            ApproachKind::Scimago => "scimago",
            ApproachKind::P100 => "p100",
            ApproachKind::Cwts => "cwts",
        }
    }

    /// The fractional approach needs a class threshold; the others ignore it.
    pub fn to_approach(self, top_percent: f64) -> Approach {
        match self {
            ApproachKind::PLow => Approach::PercentileLow,
            ApproachKind::PInc => Approach::PercentileInclusive,
            ApproachKind::Hazen => Approach::Hazen,
            ApproachKind::InCites => Approach::InCites,
            ApproachKind::Scimago => Approach::Scimago,
            ApproachKind::P100 => Approach::P100,
            ApproachKind::Cwts => Approach::Cwts { top_percent },
        }
    }
}

pub const DEFAULT_APPROACHES: [ApproachKind; 5] = [
    ApproachKind::Hazen,
    ApproachKind::InCites,
    ApproachKind::Scimago,
    ApproachKind::P100,
    ApproachKind::Cwts,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatOpt {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryOpt {
    Inclusive,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieOpt {
    Average,
    Min,
    Max,
}

/// Which analysis the run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Rank,
    Compare,
    Timeline,
    Units,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Rank => "rank",
            CommandKind::Compare => "compare",
            CommandKind::Timeline => "timeline",
            CommandKind::Units => "units",
        }
    }
}

/// Where the corpus comes from.
#[derive(Debug, Clone)]
pub enum Source {
    File { path: PathBuf, format: InputFormat },
    Generate(SynthParams),
}

/// Everything a run needs, validated and defaulted.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub command: CommandKind,
    pub source: Source,
    pub approaches: Vec<ApproachKind>,
    pub min_size: usize,
    pub thresholds: Vec<f64>,
    pub unit_sizes: Vec<usize>,
    pub samples: usize,
    pub seed: Option<u64>,
    /// Demanded window length; checked against the file when loading.
    pub horizon: Option<usize>,
    /// Evaluation year for rank/compare; defaults to the horizon.
    pub year: Option<usize>,
    pub tie_rule: TieRule,
    pub boundary_rule: BoundaryRule,
    pub out: PathBuf,
}

impl Resolved {
    pub fn spec_for(&self, kind: ApproachKind, top_percent: f64) -> ApproachSpec {
        ApproachSpec::new(kind.to_approach(top_percent))
            .with_tie_rule(self.tie_rule)
            .with_boundary_rule(self.boundary_rule)
    }
}

/// Raw option values as they arrive from the command line.
#[derive(Debug, Clone, Default)]
pub struct RawOptions {
    pub input: Option<PathBuf>,
    pub format: Option<FormatOpt>,
    pub generate: Option<String>,
    pub approaches: Option<Vec<ApproachKind>>,
    pub min_size: usize,
    pub thresholds: Option<Vec<f64>>,
    pub horizon: Option<usize>,
    pub unit_sizes: Option<Vec<usize>>,
    pub samples: usize,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub boundary: Option<BoundaryOpt>,
    pub ties: Option<TieOpt>,
    pub year: Option<usize>,
    pub skew: f64,
    pub uncited_share: f64,
    pub multi_cat_share: f64,
    pub field_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("exactly one of --input or --generate must be given")]
    SourceRequired,
    #[error("--generate expects FIELDSxPAPERS (for example 3x500), got {0:?}")]
    BadGenerateShape(String),
    #[error("--format is only meaningful with --input")]
    FormatWithoutInput,
    #[error("cannot infer the input format of {0}; pass --format")]
    UnknownFormat(String),
    #[error("--seed is required when generating a corpus or sampling units")]
    SeedRequired,
    #[error("threshold {0} is outside (0, 100]")]
    BadThreshold(f64),
    #[error("{0} must not be empty")]
    EmptyList(&'static str),
    #[error("unit sizes must be at least 1")]
    BadUnitSize,
    #[error("--samples must be at least 2 to correlate units")]
    TooFewSamples,
    #[error("--min-size must be at least 1")]
    BadMinSize,
    #[error("--year {0} must be at least 1")]
    BadYear(usize),
    #[error("--horizon {0} must be at least 1")]
    BadHorizon(usize),
}

fn parse_generate(shape: &str) -> Result<(usize, usize), ConfigError> {
    let (fields, papers) = shape
        .split_once(['x', 'X'])
        .ok_or_else(|| ConfigError::BadGenerateShape(shape.to_owned()))?;
    let fields: usize = fields
        .trim()
        .parse()
        .map_err(|_| ConfigError::BadGenerateShape(shape.to_owned()))?;
    let papers: usize = papers
        .trim()
        .parse()
        .map_err(|_| ConfigError::BadGenerateShape(shape.to_owned()))?;
    if fields == 0 || papers == 0 {
        return Err(ConfigError::BadGenerateShape(shape.to_owned()));
    }
    Ok((fields, papers))
}

fn dedup_preserving<T: PartialEq + Copy>(values: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(values.len());
    for &value in values {
        if !out.contains(&value) {
            out.push(value);
        }
    }
    out
}

pub fn resolve(command: CommandKind, raw: RawOptions) -> Result<Resolved, ConfigError> {
    let source = match (&raw.input, &raw.generate) {
        (Some(_), Some(_)) | (None, None) => return Err(ConfigError::SourceRequired),
        (Some(path), None) => {
            let format = match raw.format {
                Some(FormatOpt::Csv) => InputFormat::Csv,
                Some(FormatOpt::Jsonl) => InputFormat::Jsonl,
                None => crate::io::infer_format(path)
                    .ok_or_else(|| ConfigError::UnknownFormat(path.display().to_string()))?,
            };
            Source::File {
                path: path.clone(),
                format,
            }
        }
        (None, Some(shape)) => {
            if raw.format.is_some() {
                return Err(ConfigError::FormatWithoutInput);
            }
            let (fields, papers_per_field) = parse_generate(shape)?;
            let horizon = raw.horizon.unwrap_or(31);
            if horizon == 0 {
                return Err(ConfigError::BadHorizon(horizon));
            }
            Source::Generate(SynthParams {
                fields,
                papers_per_field,
                horizon,
                skew: raw.skew,
                uncited_share: raw.uncited_share,
                multi_category_share: raw.multi_cat_share,
                field_spread: raw.field_spread,
                seed: raw.seed.ok_or(ConfigError::SeedRequired)?,
            })
        }
    };

    if raw.seed.is_none() && command == CommandKind::Units {
        return Err(ConfigError::SeedRequired);
    }
    if let Some(horizon) = raw.horizon {
        if horizon == 0 {
            return Err(ConfigError::BadHorizon(horizon));
        }
    }
    if let Some(year) = raw.year {
        if year == 0 {
            return Err(ConfigError::BadYear(year));
        }
    }
    if raw.min_size == 0 {
        return Err(ConfigError::BadMinSize);
    }
    if raw.samples < 2 {
        return Err(ConfigError::TooFewSamples);
    }

    let approaches = dedup_preserving(
        raw.approaches
            .as_deref()
            .unwrap_or(&DEFAULT_APPROACHES),
    );
    if approaches.is_empty() {
        return Err(ConfigError::EmptyList("--approaches"));
    }

    let thresholds = dedup_preserving(
        raw.thresholds
            .as_deref()
            .unwrap_or(&[50.0, 10.0, 5.0, 1.0]),
    );
    if thresholds.is_empty() {
        return Err(ConfigError::EmptyList("--thresholds"));
    }
    for &threshold in &thresholds {
        if !(threshold > 0.0 && threshold <= 100.0) {
            return Err(ConfigError::BadThreshold(threshold));
        }
    }

    let unit_sizes = dedup_preserving(
        raw.unit_sizes
            .as_deref()
            .unwrap_or(&[50, 100, 500, 1000]),
    );
    if unit_sizes.is_empty() {
        return Err(ConfigError::EmptyList("--unit-sizes"));
    }
    if unit_sizes.contains(&0) {
        return Err(ConfigError::BadUnitSize);
    }

    Ok(Resolved {
        command,
        source,
        approaches,
        min_size: raw.min_size,
        thresholds,
        unit_sizes,
        samples: raw.samples,
        seed: raw.seed,
        horizon: raw.horizon,
        year: raw.year,
        tie_rule: match raw.ties.unwrap_or(TieOpt::Average) {
            TieOpt::Average => TieRule::Average,
            TieOpt::Min => TieRule::Min,
            TieOpt::Max => TieRule::Max,
        },
        boundary_rule: match raw.boundary.unwrap_or(BoundaryOpt::Inclusive) {
            BoundaryOpt::Inclusive => BoundaryRule::Inclusive,
            BoundaryOpt::Strict => BoundaryRule::Strict,
        },
        out: raw.out,
    })
}

/// The resolved configuration as written to config.json. The output
/// directory is deliberately not part of it, so the same analysis written
/// to two directories carries the same hash.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub source: SourceConfig,
    pub horizon: usize,
    pub year: usize,
    pub approaches: Vec<String>,
    pub min_size: usize,
    pub thresholds: Vec<f64>,
    pub unit_sizes: Vec<usize>,
    pub samples: usize,
    pub seed: Option<u64>,
    pub tie_rule: String,
    pub boundary_rule: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceConfig {
    File {
        path: String,
        format: String,
    },
    Generated {
        fields: usize,
        papers_per_field: usize,
        skew: f64,
        uncited_share: f64,
        multi_category_share: f64,
        field_spread: f64,
    },
}

impl RunConfig {
    pub fn assemble(resolved: &Resolved, horizon: usize, year: usize) -> Self {
        let source = match &resolved.source {
            Source::File { path, format } => SourceConfig::File {
                path: path.display().to_string(),
                format: match format {
                    InputFormat::Csv => "csv".to_owned(),
                    InputFormat::Jsonl => "jsonl".to_owned(),
                },
            },
            Source::Generate(params) => SourceConfig::Generated {
                fields: params.fields,
                papers_per_field: params.papers_per_field,
                skew: params.skew,
                uncited_share: params.uncited_share,
                multi_category_share: params.multi_category_share,
                field_spread: params.field_spread,
            },
        };
        RunConfig {
            command: resolved.command.name().to_owned(),
            source,
            horizon,
            year,
            approaches: resolved
                .approaches
                .iter()
                .map(|kind| kind.label().to_owned())
                .collect(),
            min_size: resolved.min_size,
            thresholds: resolved.thresholds.clone(),
            unit_sizes: resolved.unit_sizes.clone(),
            samples: resolved.samples,
            seed: resolved.seed,
            tie_rule: match resolved.tie_rule {
                TieRule::Average => "average",
                TieRule::Min => "min",
                TieRule::Max => "max",
            }
            .to_owned(),
            boundary_rule: match resolved.boundary_rule {
                BoundaryRule::Inclusive => "inclusive",
                BoundaryRule::Strict => "strict",
            }
            .to_owned(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    /// Twelve hex characters over the serialized configuration.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        hex[..12].to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw() -> RawOptions {
        RawOptions {
            min_size: 100,
            samples: 1000,
            out: PathBuf::from("out"),
            skew: 1.4,
            uncited_share: 0.2,
            multi_cat_share: 0.0,
            ..RawOptions::default()
        }
    }

    #[test]
    fn generate_shapes_parse() {
        assert_eq!(parse_generate("3x500").unwrap(), (3, 500));
        assert_eq!(parse_generate("10X1000").unwrap(), (10, 1000));
        assert!(parse_generate("3").is_err());
        assert!(parse_generate("0x5").is_err());
        assert!(parse_generate("axb").is_err());
    }

    #[test]
    fn source_is_required_and_exclusive() {
        assert_eq!(
            resolve(CommandKind::Rank, raw()).unwrap_err(),
            ConfigError::SourceRequired
        );
        let mut both = raw();
        both.input = Some(PathBuf::from("c.csv"));
        both.generate = Some("3x500".to_owned());
        both.seed = Some(1);
        assert_eq!(
            resolve(CommandKind::Rank, both).unwrap_err(),
            ConfigError::SourceRequired
        );
    }

    #[test]
    fn generation_requires_a_seed() {
        let mut options = raw();
        options.generate = Some("3x500".to_owned());
        assert_eq!(
            resolve(CommandKind::Rank, options.clone()).unwrap_err(),
            ConfigError::SeedRequired
        );
        options.seed = Some(7);
        let resolved = resolve(CommandKind::Rank, options).unwrap();
        match resolved.source {
            Source::Generate(params) => {
                assert_eq!(params.fields, 3);
                assert_eq!(params.papers_per_field, 500);
                assert_eq!(params.horizon, 31);
                assert_eq!(params.seed, 7);
            }
            other => panic!("unexpected source {other:?}"),
        }
    }

    #[test]
    fn units_require_a_seed_even_with_input() {
        let mut options = raw();
        options.input = Some(PathBuf::from("c.csv"));
        assert_eq!(
            resolve(CommandKind::Units, options.clone()).unwrap_err(),
            ConfigError::SeedRequired
        );
        assert!(resolve(CommandKind::Rank, options).is_ok());
    }

    #[test]
    fn format_inference_and_override() {
        let mut options = raw();
        options.input = Some(PathBuf::from("corpus.jsonl"));
        let resolved = resolve(CommandKind::Rank, options.clone()).unwrap();
        assert!(matches!(
            resolved.source,
            Source::File {
                format: InputFormat::Jsonl,
                ..
            }
        ));
        options.input = Some(PathBuf::from("corpus.dat"));
        assert!(matches!(
            resolve(CommandKind::Rank, options.clone()).unwrap_err(),
            ConfigError::UnknownFormat(_)
        ));
        options.format = Some(FormatOpt::Csv);
        assert!(resolve(CommandKind::Rank, options).is_ok());
    }

    #[test]
    fn defaults_fill_in() {
        let mut options = raw();
        options.input = Some(PathBuf::from("c.csv"));
        let resolved = resolve(CommandKind::Timeline, options).unwrap();
        assert_eq!(resolved.thresholds, [50.0, 10.0, 5.0, 1.0]);
        assert_eq!(resolved.unit_sizes, [50, 100, 500, 1000]);
        assert_eq!(
            resolved.approaches,
            [
                ApproachKind::Hazen,
                ApproachKind::InCites,
                ApproachKind::Scimago,
                ApproachKind::P100,
                ApproachKind::Cwts
            ]
        );
        assert_eq!(resolved.tie_rule, TieRule::Average);
        assert_eq!(resolved.boundary_rule, BoundaryRule::Inclusive);
    }

    #[test]
    fn lists_are_validated_and_deduplicated() {
        let mut options = raw();
        options.input = Some(PathBuf::from("c.csv"));
        options.thresholds = Some(vec![10.0, 10.0, 5.0]);
        let resolved = resolve(CommandKind::Timeline, options.clone()).unwrap();
        assert_eq!(resolved.thresholds, [10.0, 5.0]);

        options.thresholds = Some(vec![0.0]);
        assert_eq!(
            resolve(CommandKind::Timeline, options.clone()).unwrap_err(),
            ConfigError::BadThreshold(0.0)
        );
        options.thresholds = Some(vec![101.0]);
        assert!(resolve(CommandKind::Timeline, options.clone()).is_err());
        options.thresholds = None;
        options.unit_sizes = Some(vec![0]);
        assert_eq!(
            resolve(CommandKind::Timeline, options).unwrap_err(),
            ConfigError::BadUnitSize
        );
    }

    #[test]
    fn hashes_are_stable_and_sensitive() {
        let mut options = raw();
        options.generate = Some("2x100".to_owned());
        options.seed = Some(5);
        let resolved = resolve(CommandKind::Rank, options).unwrap();
        let config = RunConfig::assemble(&resolved, 31, 31);
        let again = RunConfig::assemble(&resolved, 31, 31);
        assert_eq!(config.hash(), again.hash());
        assert_eq!(config.hash().len(), 12);

        let mut moved = resolved.clone();
        moved.out = PathBuf::from("elsewhere");
        let rehomed = RunConfig::assemble(&moved, 31, 31);
        assert_eq!(config.hash(), rehomed.hash());

        let mut reseeded = resolved.clone();
        reseeded.seed = Some(6);
        let changed = RunConfig::assemble(&reseeded, 31, 31);
        assert_ne!(config.hash(), changed.hash());
    }

    #[test]
    fn approach_kinds_map_to_approaches() {
        assert_eq!(
            ApproachKind::Hazen.to_approach(10.0),
            Approach::Hazen
        );
        assert_eq!(
            ApproachKind::Cwts.to_approach(5.0),
            Approach::Cwts { top_percent: 5.0 }
        );
        assert_eq!(ApproachKind::PInc.label(), "p_inc");
    }
}
