//! Command implementations for the `qfourier` binary.
//!
//! Every command writes plot data (CSV) plus a JSON summary. Data files are
//! a pure function of the inputs; the only wall-clock value lives in the
//! training manifest.

use std::ffi::OsString;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arch::{ArchitectureSpec, Family};
use crate::diffset::{search_perfect, SearchOutcome};
use crate::spectrum::{
    accessibility_sample, encoding_profile, model_spectrum, upper_bound_for, PairOccupancy,
    OCCUPANCY_BINS,
};
use crate::train::{top_hat_dataset, top_hat_value, train, TrainConfig, TrainResult};

/// Environment variable overriding the worker-thread count.
pub const THREADS_ENV: &str = "QFOURIER_THREADS";

/// Points in the model-evaluation grid written as `fit.csv`.
pub const FIT_GRID_POINTS: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "qfourier", version, about = "Fourier analysis of data re-uploading quantum circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predicted wavenumbers and degeneracies of an architecture.
    Spectrum {
        /// Architecture JSON: {"family", "n", "var_depth"}.
        #[arg(long)]
        spec: PathBuf,
        /// CSV (k, degeneracy); the summary goes to <output>.summary.json.
        #[arg(long)]
        output: PathBuf,
    },
    /// Fit architectures to the top-hat target.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Amplitude/phase statistics over random parameter draws.
    Accessibility {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        realizations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV (realization, k, amplitude, phase); occupancy summary goes to
        /// <output>.summary.json.
        #[arg(long)]
        output: PathBuf,
    },
    /// Exhaustive search for perfect difference lists.
    Diffsearch {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_element: i64,
        #[arg(long)]
        output: PathBuf,
    },
}

/// Parses arguments and dispatches; the caller maps errors to an exit code.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::Spectrum { spec, output } => {
            let summary = cmd_spectrum(&spec, &output)?;
            println!(
                "{}: {} frequencies (k_max = {}, bound {})",
                summary.spec,
                summary.frequencies.len(),
                summary.k_max,
                summary.upper_bound
            );
        }
        Command::Train { config, output } => {
            let manifest = cmd_train(&config, &output)?;
            println!("wrote {} files to {}", manifest.files.len(), output.display());
        }
        Command::Accessibility { spec, realizations, seed, output } => {
            let summary = cmd_accessibility(&spec, realizations, seed, &output)?;
            for p in &summary.pairs {
                println!("arg c{} vs arg c{}: occupancy {:.4}", p.k_i, p.k_j, p.occupancy);
            }
        }
        Command::Diffsearch { m, max_element, output } => {
            let outcome = cmd_diffsearch(m, max_element, &output)?;
            println!(
                "m = {}, max_element = {}: {} solution(s), {} nodes explored",
                outcome.m,
                outcome.max_element,
                outcome.solutions.len(),
                outcome.nodes_explored
            );
            for s in &outcome.solutions {
                println!("  {s}");
            }
        }
    }
    Ok(())
}

/// Sibling path for the JSON summary of a CSV output.
pub fn summary_path(output: &Path) -> PathBuf {
    output.with_extension("summary.json")
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub spec: ArchitectureSpec,
    pub frequencies: Vec<u64>,
    pub k_max: u64,
    pub upper_bound: f64,
}

pub fn cmd_spectrum(spec_path: &Path, output: &Path) -> Result<SpectrumSummary> {
    let spec: ArchitectureSpec = read_json(spec_path)?;
    let profile = encoding_profile(&spec);
    profile.write_csv(create(output)?)?;
    let summary = SpectrumSummary {
        spec,
        frequencies: profile.frequencies(),
        k_max: profile.k_max(),
        upper_bound: upper_bound_for(&spec),
    };
    write_json(&summary_path(output), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub num_points: usize,
}

/// Experiment definition for `train`. `var_depth` may be omitted, in which
/// case each family uses its default depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub families: Vec<Family>,
    pub n: usize,
    #[serde(default)]
    pub var_depth: Option<usize>,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seeds: Vec<u64>,
    pub dataset: DatasetConfig,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.families.is_empty(), "families: at least one family is required");
        ensure!(!self.seeds.is_empty(), "seeds: at least one seed is required");
        ensure!(self.dataset.num_points >= 2, "dataset.num_points: must be at least 2, got {}", self.dataset.num_points);
        ensure!(
            self.learning_rate > 0.0 && self.learning_rate.is_finite(),
            "learning_rate: must be positive, got {}",
            self.learning_rate
        );
        ensure!(self.var_depth != Some(0), "var_depth: must be at least 1");
        for &family in &self.families {
            self.spec_for(family).context("n")?;
        }
        let mut seen = self.families.clone();
        seen.sort();
        seen.dedup();
        ensure!(seen.len() == self.families.len(), "families: duplicate entries");
        let mut seeds = self.seeds.clone();
        seeds.sort();
        seeds.dedup();
        ensure!(seeds.len() == self.seeds.len(), "seeds: duplicate entries");
        Ok(())
    }

    pub fn spec_for(&self, family: Family) -> crate::Result<ArchitectureSpec> {
        ArchitectureSpec::new(family, self.n, self.var_depth.unwrap_or_else(|| family.default_var_depth()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: PathBuf,
    pub output_dir: PathBuf,
    pub timestamp_unix: u64,
    pub seeds: Vec<u64>,
    pub version: String,
    /// Output files relative to `output_dir`.
    pub files: Vec<PathBuf>,
}

/// Directory name for one training run.
pub fn run_dir_name(family: Family, seed: u64) -> String {
    format!("{family}_seed{seed}")
}

pub fn cmd_train(config_path: &Path, output_dir: &Path) -> Result<RunManifest> {
    let config: ExperimentConfig = read_json(config_path)?;
    config.validate().with_context(|| format!("invalid config {}", config_path.display()))?;
    let data = top_hat_dataset(config.dataset.num_points)?;

    let jobs: Vec<(Family, u64)> = config
        .families
        .iter()
        .flat_map(|&f| config.seeds.iter().map(move |&s| (f, s)))
        .collect();
    let results: Vec<(Vec<PathBuf>, TrainResult)> = jobs
        .par_iter()
        .map(|&(family, seed)| {
            let spec = config.spec_for(family)?;
            let train_cfg = TrainConfig {
                epochs: config.epochs,
                learning_rate: config.learning_rate,
                seed,
                ..TrainConfig::default()
            };
            let result = train(&spec, &train_cfg, &data)?;
            let files = write_run(output_dir, &run_dir_name(family, seed), &result)?;
            Ok((files, result))
        })
        .collect::<Result<_>>()?;

    let mut files: Vec<PathBuf> = results.iter().flat_map(|(f, _)| f.iter().cloned()).collect();
    let summary = PathBuf::from("summary.csv");
    let mut w = csv::Writer::from_writer(create(&output_dir.join(&summary))?);
    w.write_record(["family", "seed", "initial_loss", "final_loss"])?;
    for (_, r) in &results {
        w.write_record([
            r.spec.family().to_string(),
            r.config.seed.to_string(),
            r.initial_loss.to_string(),
            r.final_loss.to_string(),
        ])?;
    }
    w.flush()?;
    files.push(summary);

    let manifest = RunManifest {
        command: "train".into(),
        config_path: config_path.to_path_buf(),
        output_dir: output_dir.to_path_buf(),
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        seeds: config.seeds.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        files,
    };
    let tmp = output_dir.join("manifest.json.tmp");
    write_json(&tmp, &manifest)?;
    fs::rename(&tmp, output_dir.join("manifest.json"))?;
    Ok(manifest)
}

fn write_run(output_dir: &Path, name: &str, result: &TrainResult) -> Result<Vec<PathBuf>> {
    let rel = PathBuf::from(name);
    let dir = output_dir.join(&rel);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut w = csv::Writer::from_writer(create(&dir.join("loss.csv"))?);
    w.write_record(["epoch", "loss"])?;
    for (e, loss) in result.loss_history.iter().enumerate() {
        w.write_record([(e + 1).to_string(), loss.to_string()])?;
    }
    w.flush()?;

    model_spectrum(&result.spec, &result.final_params)?.write_csv(create(&dir.join("spectrum.csv"))?)?;

    let mut w = csv::Writer::from_writer(create(&dir.join("fit.csv"))?);
    w.write_record(["x", "prediction", "target"])?;
    for j in 0..FIT_GRID_POINTS {
        let x = std::f64::consts::TAU * j as f64 / FIT_GRID_POINTS as f64;
        let f = result.spec.evaluate(&result.final_params, x)?;
        w.write_record([x.to_string(), f.to_string(), top_hat_value(j, FIT_GRID_POINTS).to_string()])?;
    }
    w.flush()?;

    write_json(&dir.join("result.json"), result)?;
    Ok(["loss.csv", "spectrum.csv", "fit.csv", "result.json"].iter().map(|f| rel.join(f)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccessibilitySummary {
    pub spec: ArchitectureSpec,
    pub realizations: usize,
    pub seed: u64,
    pub bins: usize,
    pub pairs: Vec<PairOccupancy>,
}

pub fn cmd_accessibility(spec_path: &Path, realizations: usize, seed: u64, output: &Path) -> Result<AccessibilitySummary> {
    let spec: ArchitectureSpec = read_json(spec_path)?;
    if realizations == 0 {
        bail!("realizations: must be at least 1");
    }
    let table = accessibility_sample(&spec, realizations, seed)?;
    table.write_csv(create(output)?)?;
    let summary = AccessibilitySummary {
        spec,
        realizations,
        seed,
        bins: OCCUPANCY_BINS,
        pairs: table.all_pair_occupancies(OCCUPANCY_BINS)?,
    };
    write_json(&summary_path(output), &summary)?;
    Ok(summary)
}

pub fn cmd_diffsearch(m: usize, max_element: i64, output: &Path) -> Result<SearchOutcome> {
    let outcome = search_perfect(m, max_element)?;
    let mut w = create(output)?;
    serde_json::to_writer_pretty(&mut w, &outcome)?;
    std::io::Write::write_all(&mut w, b"\n")?;
    std::io::Write::flush(&mut w)?;
    Ok(outcome)
}
