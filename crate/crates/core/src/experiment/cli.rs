use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;

use super::compare::{compare_groups, ComparisonReport};
use super::heatmap::{annotate_misclassified, heatmap_grid, write_heatmap_csv};
use super::plan::{ExperimentPlan, SelectionScope, TreePolicy};
use super::report::{
    problem_key, read_versioned, write_importance_csv, write_json, write_out_of_fold_roc, RunReport,
    Versioned,
};
use super::run::{fit_final_prepared, prepare_problem, FinalModel};
use super::summary::summarize_cohort;
use super::{all_problems, run_problems};
use crate::dataset::{
    generate_synthetic_cohort, load_cohort_csv, Cohort, CohortSpec, Endpoint, FeatureCodebook, Group,
};
use crate::error::{Error, Result};

const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "stroke-rf",
    version,
    about = "Random forest mortality and morbidity prediction for stroke cohorts"
)]
struct Cli {
    /// Master seed [default: the config's seed, else 1].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory receiving every output file.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// JSON configuration: a cohort spec for `generate`, an experiment plan
    /// for `run`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads [default: one per core]. Outputs do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic cohort calibrated to the registry statistics.
    Generate {
        /// Patients after exclusions [default: from the cohort spec].
        #[arg(long)]
        n: Option<usize>,
        /// File name inside --out-dir.
        #[arg(long, default_value = "cohort.csv")]
        output: String,
    },
    /// Repeated undersampled cross-validation of the prediction problems.
    Run {
        /// Registry CSV.
        #[arg(long)]
        cohort: PathBuf,
        /// Patient groups (ALL, IS, ICH) [default: all three].
        #[arg(long = "group", value_parser = parse_group)]
        groups: Vec<Group>,
        /// Endpoints (mortality, morbidity) [default: both].
        #[arg(long = "endpoint", value_parser = parse_endpoint)]
        endpoints: Vec<Endpoint>,
        /// Undersampling repetitions [default: 100].
        #[arg(long)]
        reps: Option<usize>,
        /// Cross-validation folds [default: 10].
        #[arg(long)]
        folds: Option<usize>,
        /// Features kept by the t-test filter.
        #[arg(long)]
        k: Option<usize>,
        /// Fixed tree count instead of inner-CV tuning.
        #[arg(long)]
        trees: Option<usize>,
        /// Where the t-test filter runs: per-fold (default) or global.
        #[arg(long, value_parser = parse_scope)]
        selection_scope: Option<SelectionScope>,
        /// Skip fitting the per-problem model files.
        #[arg(long)]
        no_model: bool,
    },
    /// Decision-surface grid of a fitted model over two features.
    Heatmap {
        /// A model_<group>_<endpoint>.json written by `run`.
        #[arg(long)]
        model: PathBuf,
        /// Registry CSV the model was fitted from.
        #[arg(long)]
        cohort: PathBuf,
        /// Feature on the horizontal axis.
        #[arg(long, default_value = "NIHSS48")]
        x: String,
        /// Feature on the vertical axis.
        #[arg(long, default_value = "NIHSS24")]
        y: String,
        /// Grid points per axis.
        #[arg(long, default_value_t = 50)]
        resolution: usize,
    },
    /// Normality checks and paired tests on the AUC vectors of run reports.
    Compare {
        /// report.json files written by `run`.
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        /// Only problems with this endpoint.
        #[arg(long, value_parser = parse_endpoint)]
        endpoint: Option<Endpoint>,
        /// Only problems of this group.
        #[arg(long, value_parser = parse_group)]
        group: Option<Group>,
    },
    /// Descriptive statistics per patient group.
    Summarize {
        /// Registry CSV.
        #[arg(long)]
        cohort: PathBuf,
    },
}

fn parse_group(s: &str) -> std::result::Result<Group, String> {
    Group::parse(s).ok_or_else(|| format!("unknown group `{s}` (expected ALL, IS or ICH)"))
}

fn parse_endpoint(s: &str) -> std::result::Result<Endpoint, String> {
    Endpoint::parse(s).ok_or_else(|| format!("unknown endpoint `{s}` (expected mortality or morbidity)"))
}

fn parse_scope(s: &str) -> std::result::Result<SelectionScope, String> {
    match s {
        "per-fold" => Ok(SelectionScope::PerFold),
        "global" => Ok(SelectionScope::Global),
        _ => Err(format!("unknown selection scope `{s}` (expected per-fold or global)")),
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit status.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Config(format!("cannot start {n} workers: {e}"))),
        },
        None => execute(&cli),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            1
        }
    }
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn load_cohort(path: &Path) -> Result<Cohort> {
    load_cohort_csv(path, Arc::new(FeatureCodebook::stroke_registry()))
}

fn out_file(cli: &Cli, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(&cli.out_dir).map_err(|e| Error::io(&cli.out_dir, e))?;
    Ok(cli.out_dir.join(name))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_versioned<T: Serialize>(path: &Path, body: T) -> Result<()> {
    write_json(path, &Versioned::new(body))?;
    println!("{}", path.display());
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate { n, output } => {
            let mut spec = match &cli.config {
                Some(p) => CohortSpec::from_json(
                    &std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
                )?,
                None => CohortSpec::registry_default(),
            };
            if let Some(n) = n {
                spec.n_total = *n;
            }
            let cohort = generate_synthetic_cohort(&spec, cli.seed.unwrap_or(DEFAULT_SEED))?;
            let path = out_file(cli, output)?;
            cohort.write_csv(&path)?;
            println!("{}", path.display());
            Ok(())
        }
        Command::Run {
            cohort,
            groups,
            endpoints,
            reps,
            folds,
            k,
            trees,
            selection_scope,
            no_model,
        } => {
            let mut plan: ExperimentPlan = match &cli.config {
                Some(p) => read_json(p)?,
                None => ExperimentPlan {
                    master_seed: DEFAULT_SEED,
                    ..ExperimentPlan::default()
                },
            };
            if let Some(s) = cli.seed {
                plan.master_seed = s;
            }
            if let Some(r) = reps {
                plan.repetitions = *r;
            }
            if let Some(f) = folds {
                plan.folds = *f;
            }
            if let Some(k) = k {
                plan.k_features = *k;
            }
            if let Some(t) = trees {
                plan.trees = TreePolicy::Fixed { n_trees: *t };
            }
            if let Some(s) = selection_scope {
                plan.selection_scope = *s;
            }
            plan.validate()?;
            let problems: Vec<(Group, Endpoint)> = all_problems()
                .into_iter()
                .filter(|(g, e)| {
                    (groups.is_empty() || groups.contains(g)) && (endpoints.is_empty() || endpoints.contains(e))
                })
                .collect();
            let cohort = load_cohort(cohort)?;
            let (report, results) = run_problems(&cohort, &plan, &problems)?;
            for result in &results {
                let path = out_file(cli, &format!("roc_{}.csv", problem_key(result.group, result.endpoint)))?;
                write_out_of_fold_roc(result, create(&path)?)?;
            }
            write_importance_csv(&report.problems, create(&out_file(cli, "importance.csv")?)?)?;
            if !no_model {
                for &(g, e) in &problems {
                    let p = plan.for_problem(g, e);
                    let model = fit_final_prepared(&prepare_problem(&cohort, &p)?, &p)?;
                    let path = out_file(cli, &format!("model_{}.json", problem_key(g, e)))?;
                    serde_json::to_writer(create(&path)?, &model)?;
                }
            }
            write_versioned(&out_file(cli, "report.json")?, report)
        }
        Command::Heatmap {
            model,
            cohort,
            x,
            y,
            resolution,
        } => {
            let model: FinalModel = read_json(model)?;
            if model.schema_version != super::run::MODEL_SCHEMA_VERSION {
                return Err(Error::Config(format!(
                    "model schema_version {} is not supported",
                    model.schema_version
                )));
            }
            let cohort = load_cohort(cohort)?;
            let plan = ExperimentPlan {
                morbidity_population: model.morbidity_population,
                candidates: Some(model.forest.feature_names.clone()),
                ..ExperimentPlan::new(model.group, model.endpoint, 0)
            };
            let data = prepare_problem(&cohort, &plan)?;
            // annotate the training records when the population matches
            let rows: Vec<usize> = if data.labels.len() == model.n_population {
                model.training_records.clone()
            } else {
                (0..data.labels.len()).collect()
            };
            let subset = data.cohort.select(&rows);
            let labels: Vec<bool> = rows.iter().map(|&i| data.labels[i]).collect();
            let subset = model.impute(&subset)?;
            let mut grid = heatmap_grid(&model.forest, &subset, x, y, *resolution)?;
            grid.endpoint = Some(model.endpoint);
            annotate_misclassified(&mut grid, &model.forest, &subset, &labels, plan.threshold)?;
            let path = out_file(cli, "heatmap.csv")?;
            write_heatmap_csv(&grid, create(&path)?)?;
            println!("{}", path.display());
            Ok(())
        }
        Command::Compare {
            reports,
            endpoint,
            group,
        } => {
            let mut vectors = Vec::new();
            for path in reports {
                let report: RunReport = read_versioned(path)?;
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                for p in &report.problems {
                    if endpoint.is_some_and(|e| e != p.endpoint) || group.is_some_and(|g| g != p.group) {
                        continue;
                    }
                    let name = if reports.len() > 1 { format!("{stem}/{}", p.key()) } else { p.key() };
                    vectors.push((name, p.aggregate.auc_values.clone()));
                }
            }
            let comparison: ComparisonReport = compare_groups(&vectors)?;
            write_versioned(&out_file(cli, "compare.json")?, comparison)
        }
        Command::Summarize { cohort } => {
            let summary = summarize_cohort(&load_cohort(cohort)?)?;
            write_versioned(&out_file(cli, "summary.json")?, summary)
        }
    }
}
