//! Command-line interface. Every subcommand prints one JSON document (to
//! stdout or `--out`) that embeds a [`RunManifest`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use codesep_core::classifiers::{train, ClassifierKind, ClassifierSpec};
use codesep_core::coding::{CodingConfig, Variant};
use codesep_core::datagen::{build_snr_taskset, generate, preprocess, GeneratorSpec, NoiseSplit, Preprocess, Shape};
use codesep_core::harness::{
    estimate_ability, estimate_ability_on, fit_difficulty_polynomials, fit_sigmoid, AbilityEstimate, SigmoidFit,
    SvmFamily, SweepResult, TaskCurveSet,
};
use codesep_core::measures::{
    DensityScaling, DistanceMode, MeasureConfig, MeasureReport, MeasureSelection, NeighborScope,
    DEFAULT_DENSITY_THRESHOLD,
};
use codesep_core::probe::{synthetic_progressive_dump, ProbeConfig, ProbeReport};
use codesep_core::{stats, LabeledMatrix};

use crate::delimited::{load_delimited, save_delimited, DelimitedOptions, Header, LabelColumn};
use crate::dump::load_dump;
use crate::error::{Error, Result};
use crate::model_io::save_model;
use crate::parallel;
use crate::report::{emit, to_json, CsvTable, Envelope, RunManifest};

pub const DEFAULT_SNR_LO: f64 = 5.0;
pub const DEFAULT_SNR_HI: f64 = 20.0;
pub const DEFAULT_LEVELS: usize = 16;
pub const DEFAULT_TRIALS: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "codesep",
    version,
    about = "Coding-rate data separability measures and experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute separability measures for one dataset.
    Measure(MeasureArgs),
    /// Sample a synthetic dataset and save it as delimited text.
    Generate(GenerateArgs),
    /// Apply a feature preprocessing method and save the result.
    Preprocess(PreprocessArgs),
    /// Accuracy and RS across SNR levels, averaged over noisy trials.
    Sweep(SweepArgs),
    /// Fit task curves, difficulty polynomials and a held-out ability.
    Fit(FitArgs),
    /// Per-layer RS of a feature dump.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pin epsilon, variant, density threshold and the SNR protocol to the
    /// reference settings.
    #[arg(long)]
    pub paper_defaults: bool,
    /// Record the wall-clock time in the manifest (breaks byte-reproducibility).
    #[arg(long)]
    pub record_time: bool,
    /// JSON report path (stdout when omitted).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum VariantArg {
    ZeroMean,
    NonZeroMean,
}

#[derive(Debug, Clone, Args)]
pub struct CodingArgs {
    /// Encoding precision.
    #[arg(long, conflicts_with = "paper_defaults")]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, conflicts_with = "paper_defaults")]
    pub variant: Option<VariantArg>,
}

impl CodingArgs {
    fn config(&self) -> Result<CodingConfig> {
        let d = CodingConfig::default();
        let variant = match self.variant {
            Some(VariantArg::ZeroMean) => Variant::ZeroMean,
            Some(VariantArg::NonZeroMean) => Variant::NonZeroMean,
            None => d.variant,
        };
        Ok(CodingConfig::new(self.epsilon.unwrap_or(d.epsilon), variant)?)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ShapeArg {
    Blobs,
    Moons,
    Circles,
    Xor,
    Spirals,
    Random,
    Boundary,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Blobs => Shape::Blobs,
            ShapeArg::Moons => Shape::Moons,
            ShapeArg::Circles => Shape::Circles,
            ShapeArg::Xor => Shape::Xor,
            ShapeArg::Spirals => Shape::Spirals,
            ShapeArg::Random => Shape::Random,
            ShapeArg::Boundary => Shape::Boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum HeaderArg {
    Auto,
    Yes,
    No,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Delimited dataset file.
    #[arg(long, required_unless_present = "shape", conflicts_with = "shape")]
    pub input: Option<PathBuf>,
    /// Label column index (0-based) or `last`.
    #[arg(long, default_value = "last", requires = "input")]
    pub label_col: LabelColumn,
    #[arg(long, default_value_t = ',', requires = "input")]
    pub delimiter: char,
    #[arg(long, value_enum, default_value_t = HeaderArg::Auto, requires = "input")]
    pub header: HeaderArg,
    /// Synthetic shape instead of a file.
    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
    /// Samples per class for synthetic data.
    #[arg(long, default_value_t = 1000, requires = "shape")]
    pub n: usize,
    /// Jitter or cluster SD for synthetic data (shape default when omitted).
    #[arg(long, requires = "shape")]
    pub sd: Option<f64>,
    /// Sine frequency for the boundary shape.
    #[arg(long, default_value_t = 1, requires = "shape")]
    pub level: u32,
}

/// Where a dataset came from; stored in manifests so runs can be rebuilt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DataSource {
    File {
        path: PathBuf,
        label_col: String,
        delimiter: char,
        header: HeaderArg,
    },
    Generator {
        spec: GeneratorSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub id: String,
    pub samples: usize,
    pub dim: usize,
    pub classes: usize,
    pub dropped_rows: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub class_names: Vec<String>,
}

pub struct Loaded {
    pub data: LabeledMatrix,
    pub info: DatasetInfo,
    pub source: DataSource,
}

impl InputArgs {
    fn source(&self, seed: u64) -> Result<DataSource> {
        match (&self.input, self.shape) {
            (Some(path), None) => Ok(DataSource::File {
                path: path.clone(),
                label_col: match self.label_col {
                    LabelColumn::Index(i) => i.to_string(),
                    LabelColumn::Last => "last".into(),
                },
                delimiter: self.delimiter,
                header: self.header,
            }),
            (None, Some(shape)) => {
                let mut spec = GeneratorSpec::new(shape.into(), self.n, seed).with_level(self.level);
                if let Some(sd) = self.sd {
                    spec = spec.with_noise(sd);
                }
                Ok(DataSource::Generator { spec })
            }
            _ => Err(Error::Usage("exactly one of --input or --shape is required".into())),
        }
    }
}

pub fn load_source(source: &DataSource) -> Result<Loaded> {
    match source {
        DataSource::File {
            path,
            label_col,
            delimiter,
            header,
        } => {
            if !delimiter.is_ascii() {
                return Err(Error::Usage(format!(
                    "delimiter `{delimiter}` must be a single ASCII character"
                )));
            }
            let opts = DelimitedOptions {
                label_column: label_col.parse().map_err(Error::Usage)?,
                delimiter: *delimiter as u8,
                header: match header {
                    HeaderArg::Auto => Header::Auto,
                    HeaderArg::Yes => Header::Present,
                    HeaderArg::No => Header::Absent,
                },
            };
            let ds = load_delimited(path, &opts)?;
            let id = path
                .file_name()
                .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
            let info = DatasetInfo {
                id,
                samples: ds.data.len(),
                dim: ds.data.dim(),
                classes: ds.data.classes(),
                dropped_rows: ds.dropped_rows,
                class_names: ds.class_names,
            };
            Ok(Loaded {
                data: ds.data,
                info,
                source: source.clone(),
            })
        }
        DataSource::Generator { spec } => {
            let data = generate(spec)?;
            let info = DatasetInfo {
                id: format!(
                    "{}-n{}-sd{}-seed{}",
                    spec.shape.name(),
                    spec.samples_per_class,
                    spec.noise_or_sd,
                    spec.seed
                ),
                samples: data.len(),
                dim: data.dim(),
                classes: data.classes(),
                dropped_rows: 0,
                class_names: Vec::new(),
            };
            Ok(Loaded {
                data,
                info,
                source: source.clone(),
            })
        }
    }
}

fn manifest(
    sub: &str,
    common: &CommonArgs,
    config: &impl Serialize,
    source: Option<&DataSource>,
) -> Result<RunManifest> {
    let mut m = RunManifest::new(sub, common.seed, serde_json::to_value(config)?);
    if let Some(DataSource::File { path, .. }) = source {
        m.add_input(path)?;
    }
    if common.record_time {
        m.stamp_time();
    }
    Ok(m)
}

fn write_report<T: Serialize>(common: &CommonArgs, manifest: RunManifest, report: T) -> Result<()> {
    emit(common.out.as_deref(), &to_json(&Envelope { manifest, report })?)
}

// ---------------------------------------------------------------- measure

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum MeasureArg {
    Rs,
    Dsi,
    N2,
    Lsc,
    Density,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum PreprocessArg {
    MinMax,
    MeanNorm,
    L2Norm,
    Center,
    Standardize,
}

impl From<PreprocessArg> for Preprocess {
    fn from(p: PreprocessArg) -> Self {
        match p {
            PreprocessArg::MinMax => Preprocess::MinMax,
            PreprocessArg::MeanNorm => Preprocess::MeanNorm,
            PreprocessArg::L2Norm => Preprocess::L2Norm,
            PreprocessArg::Center => Preprocess::Center,
            PreprocessArg::Standardize => Preprocess::Standardize,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Preprocessing applied before measuring.
    #[arg(long, value_enum)]
    pub preprocess: Option<PreprocessArg>,
    /// Measures to compute (all when omitted).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub measures: Vec<MeasureArg>,
    #[command(flatten)]
    pub coding: CodingArgs,
    #[arg(long, conflicts_with = "paper_defaults")]
    pub density_threshold: Option<f64>,
    /// Min-max scale features before building the density graph.
    #[arg(long)]
    pub density_min_max: bool,
    /// N2 uses the nearest point of any class instead of the same class.
    #[arg(long)]
    pub n2_any_neighbor: bool,
    /// Recompute distance rows instead of caching the full matrix.
    #[arg(long)]
    pub streaming: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Serialize)]
struct MeasureOutput {
    dataset: DatasetInfo,
    preprocess: Option<PreprocessArg>,
    measures: MeasureReport,
}

fn cmd_measure(a: &MeasureArgs) -> Result<()> {
    let source = a.input.source(a.common.seed)?;
    let loaded = load_source(&source)?;
    let data = match a.preprocess {
        Some(p) => preprocess(&loaded.data, p.into())?,
        None => loaded.data,
    };
    let config = MeasureConfig {
        coding: a.coding.config()?,
        density_threshold: a.density_threshold.unwrap_or(DEFAULT_DENSITY_THRESHOLD),
        density_scaling: if a.density_min_max {
            DensityScaling::MinMax
        } else {
            DensityScaling::Raw
        },
        n2_neighbor: if a.n2_any_neighbor {
            NeighborScope::Any
        } else {
            NeighborScope::SameClass
        },
        distance_mode: if a.streaming {
            DistanceMode::Streaming
        } else {
            DistanceMode::Dense
        },
    };
    let selection = if a.measures.is_empty() {
        MeasureSelection::ALL
    } else {
        let has = |m| a.measures.contains(&m);
        MeasureSelection {
            rs: has(MeasureArg::Rs),
            dsi: has(MeasureArg::Dsi),
            n2: has(MeasureArg::N2),
            lsc: has(MeasureArg::Lsc),
            density: has(MeasureArg::Density),
        }
    };
    let report = parallel::measure_many(&[(loaded.info.id.clone(), data)], &config, selection).remove(0);
    let cfg = serde_json::json!({
        "source": source,
        "preprocess": a.preprocess,
        "measure": config,
        "selection": selection,
        "paper_defaults": a.common.paper_defaults,
    });
    let m = manifest("measure", &a.common, &cfg, Some(&source))?;
    write_report(
        &a.common,
        m,
        MeasureOutput {
            dataset: loaded.info,
            preprocess: a.preprocess,
            measures: report,
        },
    )
}

// ---------------------------------------------------------------- generate

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeArg,
    /// Samples per class.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long)]
    pub sd: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    /// Destination of the delimited dataset.
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Serialize)]
struct FileOutput {
    dataset: DatasetInfo,
    path: String,
    sha256: String,
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let mut spec = GeneratorSpec::new(a.shape.into(), a.n, a.common.seed).with_level(a.level);
    if let Some(sd) = a.sd {
        spec = spec.with_noise(sd);
    }
    let source = DataSource::Generator { spec };
    let loaded = load_source(&source)?;
    let meta = vec![
        ("shape".to_string(), spec.shape.name().to_string()),
        ("seed".to_string(), spec.seed.to_string()),
        ("sd".to_string(), spec.noise_or_sd.to_string()),
        ("n".to_string(), spec.samples_per_class.to_string()),
        ("level".to_string(), spec.level.to_string()),
    ];
    save_delimited(&a.data, &loaded.data, None, &meta)?;
    let m = manifest("generate", &a.common, &serde_json::json!({ "source": source }), None)?;
    let out = FileOutput {
        dataset: loaded.info,
        path: a.data.display().to_string(),
        sha256: crate::report::hash_path(&a.data)?,
    };
    write_report(&a.common, m, out)
}

// ---------------------------------------------------------------- preprocess

#[derive(Debug, Clone, Args)]
pub struct PreprocessArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub method: PreprocessArg,
    /// Destination of the processed dataset.
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn cmd_preprocess(a: &PreprocessArgs) -> Result<()> {
    let source = a.input.source(a.common.seed)?;
    let loaded = load_source(&source)?;
    let out = preprocess(&loaded.data, a.method.into())?;
    let names = (!loaded.info.class_names.is_empty()).then_some(loaded.info.class_names.as_slice());
    let meta = vec![("preprocess".to_string(), Preprocess::from(a.method).name().to_string())];
    save_delimited(&a.data, &out, names, &meta)?;
    let cfg = serde_json::json!({ "source": source, "method": a.method });
    let m = manifest("preprocess", &a.common, &cfg, Some(&source))?;
    let out = FileOutput {
        dataset: loaded.info,
        path: a.data.display().to_string(),
        sha256: crate::report::hash_path(&a.data)?,
    };
    write_report(&a.common, m, out)
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierArg {
    Knn,
    LogReg,
    LinearSvm,
}

impl From<ClassifierArg> for ClassifierKind {
    fn from(c: ClassifierArg) -> Self {
        match c {
            ClassifierArg::Knn => ClassifierKind::Knn,
            ClassifierArg::LogReg => ClassifierKind::LogReg,
            ClassifierArg::LinearSvm => ClassifierKind::LinearSvm,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SnrArgs {
    #[arg(long, conflicts_with = "paper_defaults")]
    pub snr_lo: Option<f64>,
    #[arg(long, conflicts_with = "paper_defaults")]
    pub snr_hi: Option<f64>,
    /// Number of SNR levels, evenly spaced and inclusive.
    #[arg(long, conflicts_with = "paper_defaults")]
    pub levels: Option<usize>,
    /// Noisy copies per level.
    #[arg(long, conflicts_with = "paper_defaults")]
    pub trials: Option<usize>,
    /// Split noise power across features in proportion to their own power.
    #[arg(long)]
    pub proportional_noise: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrProtocol {
    pub snr_lo: f64,
    pub snr_hi: f64,
    pub levels: usize,
    pub trials: usize,
    pub split: NoiseSplit,
}

impl SnrArgs {
    fn protocol(&self) -> SnrProtocol {
        SnrProtocol {
            snr_lo: self.snr_lo.unwrap_or(DEFAULT_SNR_LO),
            snr_hi: self.snr_hi.unwrap_or(DEFAULT_SNR_HI),
            levels: self.levels.unwrap_or(DEFAULT_LEVELS),
            trials: self.trials.unwrap_or(DEFAULT_TRIALS),
            split: if self.proportional_noise {
                NoiseSplit::Proportional
            } else {
                NoiseSplit::Equal
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [ClassifierArg::Knn, ClassifierArg::LogReg, ClassifierArg::LinearSvm])]
    pub classifiers: Vec<ClassifierArg>,
    #[arg(long, default_value_t = codesep_core::classifiers::DEFAULT_K)]
    pub k_neighbors: usize,
    #[arg(long, default_value_t = codesep_core::classifiers::DEFAULT_C)]
    pub c_reg: f64,
    #[arg(long, default_value_t = codesep_core::classifiers::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = codesep_core::classifiers::DEFAULT_EPOCHS)]
    pub epochs: usize,
    #[arg(long, default_value_t = codesep_core::classifiers::DEFAULT_LEARNING_RATE)]
    pub learning_rate: f64,
    #[command(flatten)]
    pub snr: SnrArgs,
    #[command(flatten)]
    pub coding: CodingArgs,
    /// Directory for the accuracy-vs-SNR and RS-vs-SNR CSV files.
    #[arg(long)]
    pub csv_dir: Option<PathBuf>,
    /// Directory for text dumps of the trained models.
    #[arg(long)]
    pub save_models: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// The configuration a sweep runs with; `fit` reads it back from the
/// sweep's manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub source: DataSource,
    pub snr: SnrProtocol,
    pub classifiers: Vec<ClassifierSpec>,
    pub coding: CodingConfig,
    pub paper_defaults: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub classifier: ClassifierKind,
    pub pearson: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub dataset: DatasetInfo,
    pub sweep: SweepResult,
    /// Pearson correlation of mean accuracy with `1 − mean RS`.
    pub correlations: Vec<Correlation>,
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let source = a.input.source(a.common.seed)?;
    let classifiers = a
        .classifiers
        .iter()
        .map(|&c| ClassifierSpec {
            kind: c.into(),
            k_neighbors: a.k_neighbors,
            c_reg: a.c_reg,
            alpha_reg: a.alpha,
            epochs: a.epochs,
            learning_rate: a.learning_rate,
            seed: a.common.seed,
        })
        .collect();
    let config = SweepConfig {
        source,
        snr: a.snr.protocol(),
        classifiers,
        coding: a.coding.config()?,
        paper_defaults: a.common.paper_defaults,
    };
    let (loaded, out) = run_sweep(&config, a.common.seed)?;
    if let Some(dir) = &a.csv_dir {
        write_sweep_csvs(dir, &out.sweep)?;
    }
    if let Some(dir) = &a.save_models {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for spec in &config.classifiers {
            let model = train(spec, &loaded.data)?;
            save_model(dir.join(format!("{}.model", spec.kind.name())), &model)?;
        }
    }
    let m = manifest("sweep", &a.common, &config, Some(&config.source))?;
    write_report(&a.common, m, out)
}

pub fn run_sweep(config: &SweepConfig, seed: u64) -> Result<(Loaded, SweepOutput)> {
    let loaded = load_source(&config.source)?;
    let p = config.snr;
    let taskset = build_snr_taskset(&loaded.data, p.snr_lo, p.snr_hi, p.levels, p.trials, seed, p.split)?;
    let sweep = parallel::snr_sweep(&taskset, &config.classifiers, &config.coding)?;
    let sep: Vec<f64> = sweep.rs_mean.iter().map(|r| 1.0 - r).collect();
    let correlations = sweep
        .classifiers
        .iter()
        .zip(&sweep.accuracy_mean)
        .map(|(spec, acc)| match stats::pearson(acc, &sep) {
            Ok(r) => Correlation {
                classifier: spec.kind,
                pearson: Some(r),
                error: None,
            },
            Err(e) => Correlation {
                classifier: spec.kind,
                pearson: None,
                error: Some(e.code().to_string()),
            },
        })
        .collect();
    let out = SweepOutput {
        dataset: loaded.info.clone(),
        sweep,
        correlations,
    };
    Ok((loaded, out))
}

fn write_sweep_csvs(dir: &Path, s: &SweepResult) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut header = vec!["snr_db".to_string()];
    for c in &s.classifiers {
        header.push(format!("{}_mean", c.kind.name()));
        header.push(format!("{}_std", c.kind.name()));
    }
    let mut acc = CsvTable::new(&["mean test accuracy (± std over trials) per classifier vs SNR"], &[]);
    acc.header = header;
    for (l, snr) in s.snr_db.iter().enumerate() {
        let mut row = vec![snr.to_string()];
        for c in 0..s.classifiers.len() {
            row.push(s.accuracy_mean[c][l].to_string());
            row.push(s.accuracy_std[c][l].to_string());
        }
        acc.rows.push(row);
    }
    acc.write(&dir.join("accuracy_vs_snr.csv"))?;
    let mut rs = CsvTable::new(
        &["mean RS (± std over trials) of the noisy test sets vs SNR"],
        &["snr_db", "rs_mean", "rs_std"],
    );
    for (l, snr) in s.snr_db.iter().enumerate() {
        rs.push([*snr, s.rs_mean[l], s.rs_std[l]]);
    }
    rs.write(&dir.join("rs_vs_snr.csv"))
}

// ---------------------------------------------------------------- fit

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// JSON report written by `sweep`; its dataset and SNR protocol are reused.
    #[arg(long, required_unless_present = "curves", conflicts_with = "curves")]
    pub sweep: Option<PathBuf>,
    /// JSON fixture with `theta`, `p_acc`, `rs` and optional `held_out`.
    #[arg(long)]
    pub curves: Option<PathBuf>,
    /// Number of SVM variants.
    #[arg(long, default_value_t = SvmFamily::default().k)]
    pub variants: usize,
    #[arg(long, default_value_t = SvmFamily::default().c_min)]
    pub c_min: f64,
    #[arg(long, default_value_t = SvmFamily::default().c_max)]
    pub c_max: f64,
    #[arg(long, default_value_t = SvmFamily::default().epochs_min)]
    pub epochs_min: usize,
    #[arg(long, default_value_t = SvmFamily::default().epochs_max)]
    pub epochs_max: usize,
    /// Classifier whose ability is estimated on the fitted curves.
    #[arg(long, value_enum, default_value_t = ClassifierArg::LogReg)]
    pub held_out: ClassifierArg,
    /// Size of the consecutive task windows used for the spread of θ̂.
    #[arg(long, default_value_t = 4)]
    pub window: usize,
    #[arg(long)]
    pub csv_dir: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Input of `fit --curves`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvesFixture {
    pub theta: Vec<f64>,
    /// One row per task.
    pub p_acc: Vec<Vec<f64>>,
    pub rs: Vec<f64>,
    #[serde(default)]
    pub held_out: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskFit {
    pub task: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub snr_db: Option<f64>,
    pub rs: f64,
    pub fit: SigmoidFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeldOut {
    pub classifier: Option<ClassifierKind>,
    pub accuracies: Vec<f64>,
    pub estimate: Option<AbilityEstimate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    /// θ̂ from each window of consecutive non-saturated tasks (by RS).
    pub window_thetas: Vec<f64>,
    pub window_spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutput {
    pub theta: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub variants: Vec<ClassifierSpec>,
    pub p_acc: Vec<Vec<f64>>,
    pub tasks: Vec<TaskFit>,
    pub curve_set: TaskCurveSet,
    /// Spearman correlation of fitted `b` with task RS.
    pub b_vs_rs: Option<f64>,
    /// Spearman correlation of `(u − l)·a` with task RS.
    pub slope_vs_rs: Option<f64>,
    pub held_out: Option<HeldOut>,
}

/// Sigmoid per task, polynomials over RS, and the held-out ability.
pub fn fit_pipeline(
    theta: &[f64],
    p_acc: &[Vec<f64>],
    rs: &[f64],
    snr: Option<&[f64]>,
    held_out: Option<(Option<ClassifierKind>, Vec<f64>)>,
    window: usize,
) -> Result<FitOutput> {
    if rs.len() != p_acc.len() {
        return Err(codesep_core::Error::DimensionMismatch {
            expected: p_acc.len(),
            found: rs.len(),
        }
        .into());
    }
    let fits = p_acc
        .iter()
        .map(|row| fit_sigmoid(theta, row))
        .collect::<codesep_core::Result<Vec<_>>>()?;
    let pairs: Vec<_> = rs.iter().zip(&fits).map(|(&r, f)| (r, f.params)).collect();
    let curve_set = fit_difficulty_polynomials(&pairs)?;
    let b: Vec<f64> = fits.iter().map(|f| f.params.b).collect();
    let slope: Vec<f64> = fits.iter().map(|f| (f.params.u - f.params.l) * f.params.a).collect();
    let tasks = fits
        .iter()
        .enumerate()
        .map(|(i, f)| TaskFit {
            task: i,
            snr_db: snr.map(|s| s[i]),
            rs: rs[i],
            fit: *f,
        })
        .collect();
    let held_out =
        held_out.map(|(classifier, accuracies)| held_out_ability(&curve_set, classifier, accuracies, window));
    Ok(FitOutput {
        theta: theta.to_vec(),
        variants: Vec::new(),
        p_acc: p_acc.to_vec(),
        tasks,
        b_vs_rs: stats::spearman(rs, &b).ok(),
        slope_vs_rs: stats::spearman(rs, &slope).ok(),
        curve_set,
        held_out,
    })
}

fn held_out_ability(
    set: &TaskCurveSet,
    classifier: Option<ClassifierKind>,
    accuracies: Vec<f64>,
    window: usize,
) -> HeldOut {
    let (estimate, error) = match estimate_ability(set, &accuracies) {
        Ok(e) => (Some(e), None),
        Err(e) => (None, Some(e.code().to_string())),
    };
    let mut window_thetas = Vec::new();
    if let Some(est) = &estimate {
        let mid: Vec<usize> = set
            .tasks
            .iter()
            .map(|t| t.task)
            .filter(|&t| !est.saturated[t])
            .collect();
        if window >= 1 && mid.len() >= window {
            for w in mid.windows(window) {
                if let Ok(e) = estimate_ability_on(set, &accuracies, w) {
                    window_thetas.push(e.theta);
                }
            }
        }
    }
    let window_spread = (!window_thetas.is_empty()).then(|| stats::std_dev(&window_thetas));
    HeldOut {
        classifier,
        accuracies,
        estimate,
        error,
        window_thetas,
        window_spread,
    }
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let family = SvmFamily {
        k: a.variants,
        c_min: a.c_min,
        c_max: a.c_max,
        epochs_min: a.epochs_min,
        epochs_max: a.epochs_max,
    };
    let (out, cfg, input) = if let Some(path) = &a.sweep {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let env: Envelope<SweepOutput> = serde_json::from_str(&text)?;
        let sweep_cfg: SweepConfig = serde_json::from_value(env.manifest.config.clone())?;
        let seed = env.manifest.seed;
        let loaded = load_source(&sweep_cfg.source)?;
        let p = sweep_cfg.snr;
        let taskset = build_snr_taskset(&loaded.data, p.snr_lo, p.snr_hi, p.levels, p.trials, seed, p.split)?;
        let specs = family.specs(seed)?;
        let curves = parallel::build_task_curves(&specs, &taskset)?;
        let rs = &env.report.sweep.rs_mean;
        let base = sweep_cfg
            .classifiers
            .iter()
            .find(|c| c.kind == a.held_out.into())
            .copied();
        let spec = base.unwrap_or_else(|| ClassifierSpec {
            seed,
            ..ClassifierSpec::new(a.held_out.into())
        });
        let model = train(&spec, &taskset.train)?;
        let acc = codesep_core::harness::task_accuracies(&model, &taskset)?;
        let mut out = fit_pipeline(
            &curves.theta,
            &curves.p_acc,
            rs,
            Some(&env.report.sweep.snr_db),
            Some((Some(spec.kind), acc)),
            a.window,
        )?;
        out.variants = curves.variants;
        let cfg = serde_json::json!({ "sweep": path, "family": family, "held_out": spec, "window": a.window });
        (out, cfg, path.clone())
    } else {
        let path = a.curves.as_ref().expect("clap enforces one source");
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let fx: CurvesFixture = serde_json::from_str(&text)?;
        let held = fx.held_out.clone().map(|h| (None, h));
        let out = fit_pipeline(&fx.theta, &fx.p_acc, &fx.rs, None, held, a.window)?;
        (
            out,
            serde_json::json!({ "curves": path, "window": a.window }),
            path.clone(),
        )
    };
    if let Some(dir) = &a.csv_dir {
        write_fit_csvs(dir, &out)?;
    }
    let mut m = manifest("fit", &a.common, &cfg, None)?;
    m.add_input(&input)?;
    write_report(&a.common, m, out)
}

fn write_fit_csvs(dir: &Path, out: &FitOutput) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut curves = CsvTable::new(
        &["accuracy of each variant (columns sorted by theta) on each task"],
        &[],
    );
    curves.header = std::iter::once("task".to_string())
        .chain(out.theta.iter().map(|t| format!("theta={t}")))
        .collect();
    for (i, row) in out.p_acc.iter().enumerate() {
        curves.rows.push(
            std::iter::once(i.to_string())
                .chain(row.iter().map(|v| v.to_string()))
                .collect(),
        );
    }
    curves.write(&dir.join("task_curves.csv"))?;
    let mut params = CsvTable::new(
        &["fitted sigmoid per task and the polynomial a(rs), b(rs) evaluated at the task rs"],
        &["task", "rs", "u", "l", "a", "b", "rmse", "a_poly", "b_poly"],
    );
    let mut by_rs = out.tasks.clone();
    by_rs.sort_by(|x, y| x.rs.total_cmp(&y.rs));
    for t in &by_rs {
        let p = t.fit.params;
        params.push([
            t.task as f64,
            t.rs,
            p.u,
            p.l,
            p.a,
            p.b,
            t.fit.rmse,
            out.curve_set.a_at(t.rs),
            out.curve_set.b_at(t.rs),
        ]);
    }
    params.write(&dir.join("difficulty.csv"))?;
    if let Some(h) = &out.held_out {
        let mut ab = CsvTable::new(
            &["held-out accuracy, modeled accuracy at theta-hat, saturation flag"],
            &["task", "rs", "accuracy", "model", "saturated"],
        );
        if let Some(est) = &h.estimate {
            for t in &by_rs {
                let i = out
                    .curve_set
                    .tasks
                    .iter()
                    .position(|c| c.task == t.task)
                    .expect("task present");
                ab.rows.push(vec![
                    t.task.to_string(),
                    t.rs.to_string(),
                    h.accuracies[t.task].to_string(),
                    out.curve_set.model(i, est.theta).to_string(),
                    est.saturated[t.task].to_string(),
                ]);
            }
        }
        ab.write(&dir.join("ability.csv"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- probe

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    /// Binary dump file or directory of per-layer CSV files.
    #[arg(long, required_unless_present = "synthetic", conflicts_with = "synthetic")]
    pub dump: Option<PathBuf>,
    /// Probe a generated progressive-separation dump instead.
    #[arg(long)]
    pub synthetic: bool,
    #[arg(long, default_value_t = 4, requires = "synthetic")]
    pub layers: usize,
    #[arg(long, default_value_t = 10, requires = "synthetic")]
    pub epochs: u32,
    #[arg(long, default_value_t = 100, requires = "synthetic")]
    pub per_class: usize,
    #[arg(long, default_value_t = 3, requires = "synthetic")]
    pub classes: usize,
    #[arg(long, default_value_t = 16, requires = "synthetic")]
    pub dim: usize,
    /// 2×2 average pooling of spatial records before flattening.
    #[arg(long)]
    pub pool: bool,
    /// Split tag echoed in the report (e.g. `train` or `test`).
    #[arg(long)]
    pub split: Option<String>,
    /// Largest n·d per record before samples are subsampled.
    #[arg(long, default_value_t = ProbeConfig::default().max_elements)]
    pub max_elements: usize,
    #[command(flatten)]
    pub coding: CodingArgs,
    /// Per-layer CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn cmd_probe(a: &ProbeArgs) -> Result<()> {
    let dump = match &a.dump {
        Some(p) => load_dump(p)?,
        None => synthetic_progressive_dump(a.layers, a.epochs, a.per_class, a.classes, a.dim, a.common.seed)?,
    };
    let config = ProbeConfig {
        coding: a.coding.config()?,
        pool: a.pool,
        max_elements: a.max_elements,
        seed: a.common.seed,
        split: a.split.clone(),
    };
    let report: ProbeReport = parallel::probe(&dump, &config)?;
    if let Some(path) = &a.csv {
        let mut t = CsvTable::new(&["RS per layer and epoch"], &["layer", "epoch", "dim", "rs"]);
        for e in &report.entries {
            t.rows.push(vec![
                e.layer.clone(),
                e.epoch.to_string(),
                e.dim.to_string(),
                e.rs.to_string(),
            ]);
        }
        t.write(path)?;
    }
    let cfg = serde_json::json!({
        "dump": a.dump,
        "synthetic": a.synthetic.then(|| serde_json::json!({
            "layers": a.layers, "epochs": a.epochs, "per_class": a.per_class, "classes": a.classes, "dim": a.dim,
        })),
        "probe": config,
    });
    let mut m = manifest("probe", &a.common, &cfg, None)?;
    if let Some(p) = &a.dump {
        m.add_input(p)?;
    }
    write_report(&a.common, m, report)
}

pub fn run(cli: Cli) -> Result<()> {
    parallel::init_threads();
    match &cli.command {
        Command::Measure(a) => cmd_measure(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Preprocess(a) => cmd_preprocess(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Probe(a) => cmd_probe(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}
