//! Command-line front end over the evaluation library.
//!
//! Exit codes: 0 success, 1 validation failure, 2 evaluation degeneracy,
//! 3 I/O error, 64 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bravo_eval::aggregate::rank;
use bravo_eval::analysis::{write_analysis, AnalysisError, SubmissionPoint};
use bravo_eval::core::SubmissionManifest;
use bravo_eval::engine::{evaluate_submission, validate_submission, RunConfig};
use bravo_eval::pngio::{read_conf_png, write_class_png, write_conf_png};
use bravo_eval::report::{
    read_report_json, render_leaderboard, render_report_table, render_validation_json,
    render_validation_text, write_report_json,
};
use bravo_eval::tools::{
    argmax_decode, ensemble_mean, read_probmap, renormalize_map, synth_fixture, write_probmap,
    CalibrationModel, FixtureSpec, ToolError,
};

#[derive(Parser)]
#[command(name = "bravo", version, about = "Reliability scoring for semantic segmentation submissions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a submission against the format rules and report every issue
    Validate {
        /// Submission directory (discovered by naming convention) or manifest file
        submission: PathBuf,
        /// Separate root for ground-truth sidecars
        #[arg(long)]
        gt_root: Option<PathBuf>,
        /// Also reject frames that contribute nothing (all-void ground truth)
        #[arg(long)]
        strict: bool,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Write the machine-readable issue report to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a submission and emit the aggregate report
    Evaluate {
        submission: PathBuf,
        #[arg(long)]
        gt_root: Option<PathBuf>,
        /// Calibration bins for the expected calibration error
        #[arg(long, default_value_t = 15)]
        ece_bins: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        strict: bool,
        /// Track label recorded in the report
        #[arg(long, default_value_t = 1)]
        track: u8,
        /// Directory receiving report.json and report.txt
        #[arg(long, default_value = "bravo-out")]
        out: PathBuf,
    },
    /// Order report files into a leaderboard
    Rank {
        /// Report JSON files produced by evaluate
        reports: Vec<PathBuf>,
        /// Also write the table to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Average probability-map containers into an ensemble posterior
    Combine {
        /// Input .bpm containers
        inputs: Vec<PathBuf>,
        /// Output container for the mean posterior
        #[arg(long)]
        out: PathBuf,
        /// Also decode the mean into a class prediction PNG
        #[arg(long)]
        pred: Option<PathBuf>,
        /// Also decode the mean into a confidence PNG
        #[arg(long)]
        conf: Option<PathBuf>,
    },
    /// Stretch quantized confidence through the piecewise-linear map
    Renormalize {
        /// Input 16-bit confidence PNG
        input: PathBuf,
        /// Output 16-bit confidence PNG
        output: PathBuf,
    },
    /// Generate a deterministic synthetic benchmark fixture
    Synth {
        /// Output directory for the fixture tree
        #[arg(long, default_value = "fixture")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 128)]
        width: u32,
        #[arg(long, default_value_t = 64)]
        height: u32,
        /// Frames generated per subset
        #[arg(long, default_value_t = 4)]
        frames: u32,
        #[arg(long, default_value_t = 0.25)]
        error_rate: f64,
        #[arg(long, default_value_t = 0.2)]
        ood_fraction: f64,
        /// Report confidence shifted up by this amount
        #[arg(long, conflicts_with = "underconfident")]
        overconfident: Option<f64>,
        /// Report confidence shifted down by this amount
        #[arg(long)]
        underconfident: Option<f64>,
    },
    /// Cross-submission scatter, regression, and correlogram
    Analyze {
        /// Report JSON files produced by evaluate
        reports: Vec<PathBuf>,
        /// Output directory for the plot and tables
        #[arg(long, default_value = "analysis")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(err.as_ref());
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::from(exit_code_of(err.as_ref()))
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn exit_code_of(err: &(dyn std::error::Error + 'static)) -> u8 {
    use bravo_eval::core::ManifestError;
    use bravo_eval::engine::EvalError;
    use bravo_eval::pngio::PngError;
    use bravo_eval::report::ReportError;
    if let Some(e) = err.downcast_ref::<EvalError>() {
        return e.exit_code() as u8;
    }
    if let Some(e) = err.downcast_ref::<ToolError>() {
        return match e {
            ToolError::Io { .. } | ToolError::Png(_) | ToolError::Manifest(_) => 3,
            _ => 1,
        };
    }
    if let Some(e) = err.downcast_ref::<AnalysisError>() {
        return match e {
            AnalysisError::Io { .. } => 3,
            _ => 2,
        };
    }
    if err.downcast_ref::<PngError>().is_some()
        || err.downcast_ref::<ReportError>().is_some()
        || err.downcast_ref::<ManifestError>().is_some()
        || err.downcast_ref::<std::io::Error>().is_some()
    {
        return 3;
    }
    1
}

fn run(cli: Cli) -> Result<ExitCode, AnyError> {
    match cli.command {
        Command::Validate {
            submission,
            gt_root,
            strict,
            threads,
            out,
        } => {
            let manifest = SubmissionManifest::load_or_discover(&submission, gt_root.as_deref())?;
            let config = RunConfig {
                strict,
                threads,
                ..RunConfig::default()
            };
            let outcome = validate_submission(&manifest, &config);
            print!("{}", render_validation_text(&outcome));
            if let Some(path) = out {
                std::fs::write(&path, render_validation_json(&outcome))?;
            }
            Ok(if outcome.is_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Evaluate {
            submission,
            gt_root,
            ece_bins,
            threads,
            strict,
            track,
            out,
        } => {
            if ece_bins == 0 {
                return Err("--ece-bins must be at least 1".into());
            }
            let manifest = SubmissionManifest::load_or_discover(&submission, gt_root.as_deref())?;
            let config = RunConfig {
                ece_bins,
                threads,
                strict,
                track,
            };
            let report = evaluate_submission(&manifest, &config).inspect_err(|err| {
                if let bravo_eval::engine::EvalError::Validation(outcome) = err {
                    eprint!("{}", render_validation_text(outcome));
                }
            })?;
            std::fs::create_dir_all(&out)?;
            write_report_json(&report, &out.join("report.json"))?;
            let table = render_report_table(&report);
            std::fs::write(out.join("report.txt"), &table)?;
            print!("{table}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Rank { reports, out } => {
            if reports.is_empty() {
                return Err("rank needs at least one report file".into());
            }
            let loaded = reports
                .iter()
                .map(|p| read_report_json(p))
                .collect::<Result<Vec<_>, _>>()?;
            let table = render_leaderboard(&rank(&loaded));
            print!("{table}");
            if let Some(path) = out {
                std::fs::write(&path, &table)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Combine {
            inputs,
            out,
            pred,
            conf,
        } => {
            if inputs.is_empty() {
                return Err("combine needs at least one probability map".into());
            }
            let maps = inputs
                .iter()
                .map(|p| {
                    let map = read_probmap(p)?;
                    // f32 containers round, so gate the simplex loosely.
                    map.validate_simplex(1e-4)
                        .map_err(|e| ToolError::ShapeMismatch(format!("{}: {e}", p.display())))?;
                    Ok::<_, ToolError>(map)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mean = ensemble_mean(&maps)?;
            write_probmap(&mean, &out)?;
            if pred.is_some() || conf.is_some() {
                let (classes, confidence) = argmax_decode(&mean)?;
                if let Some(path) = pred {
                    write_class_png(&classes, &path)?;
                }
                if let Some(path) = conf {
                    write_conf_png(&confidence, &path)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Renormalize { input, output } => {
            let map = read_conf_png(&input)?;
            write_conf_png(&renormalize_map(&map), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth {
            out,
            seed,
            width,
            height,
            frames,
            error_rate,
            ood_fraction,
            overconfident,
            underconfident,
        } => {
            let calibration = match (overconfident, underconfident) {
                (Some(d), _) => CalibrationModel::OverConfident(d),
                (_, Some(d)) => CalibrationModel::UnderConfident(d),
                _ => CalibrationModel::Perfect,
            };
            let spec = FixtureSpec {
                width,
                height,
                frames_per_subset: frames,
                error_rate,
                calibration,
                ood_fraction,
                seed,
            };
            let manifest = synth_fixture(&spec, &out)?;
            println!(
                "wrote {} frames to {} (manifest.toml included)",
                manifest.entries.len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { reports, out } => {
            if reports.is_empty() {
                return Err("analyze needs at least one report file".into());
            }
            let points = reports
                .iter()
                .map(|p| Ok(SubmissionPoint::from_report(&read_report_json(p)?)))
                .collect::<Result<Vec<_>, AnyError>>()?;
            let outputs = write_analysis(&points, &out)?;
            println!("wrote {}", outputs.scatter_svg.display());
            println!("wrote {}", outputs.scatter_csv.display());
            match &outputs.correlogram_csv {
                Some(path) => println!("wrote {}", path.display()),
                None => eprintln!("note: correlogram needs at least 3 reports, skipped"),
            }
            if let Some(reg) = outputs.regression {
                println!(
                    "regression: semantic = {:.4} * ood + {:.4} (r = {:.4})",
                    reg.slope, reg.intercept, reg.r
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
