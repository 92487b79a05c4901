//! Score a small cohort of synthetic submissions, then reproduce the
//! figure content: the OOD-vs-semantic scatter with its regression line and
//! ranking-index level sets, and the per-subset summary correlogram.
//!
//! ```text
//! cargo run --example cohort_analysis
//! ```

use bravo_eval::analysis::{correlogram, correlogram_csv, write_analysis, SubmissionPoint};
use bravo_eval::engine::{evaluate_submission, RunConfig};
use bravo_eval::tools::{synth_fixture, CalibrationModel, FixtureSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::temp_dir().join("bravo-eval-examples/cohort_analysis");
    std::fs::create_dir_all(&root)?;

    // Five submissions of varying quality and calibration.
    let cohort = [
        ("crisp", 0.10, CalibrationModel::Perfect),
        ("steady", 0.20, CalibrationModel::Perfect),
        ("boastful", 0.25, CalibrationModel::OverConfident(0.15)),
        ("shy", 0.25, CalibrationModel::UnderConfident(0.15)),
        ("noisy", 0.40, CalibrationModel::Perfect),
    ];

    let mut points = Vec::new();
    for (i, (name, error_rate, calibration)) in cohort.into_iter().enumerate() {
        let spec = FixtureSpec {
            width: 96,
            height: 64,
            frames_per_subset: 3,
            error_rate,
            calibration,
            ood_fraction: 0.2,
            seed: 100 + i as u64,
        };
        let manifest = synth_fixture(&spec, &root.join(name))?;
        let config = RunConfig {
            track: 1 + (i % 2) as u8,
            ..RunConfig::default()
        };
        let mut report = evaluate_submission(&manifest, &config)?;
        report.submission_id = name.to_string();
        println!(
            "{name:<10} semantic {:.3}  ood {:.3}  index {:.3}",
            report.semantic_agg, report.ood_agg, report.bravo_index
        );
        points.push(SubmissionPoint::from_report(&report));
    }

    let out = root.join("figures");
    let outputs = write_analysis(&points, &out)?;
    println!("\nscatter: {}", outputs.scatter_svg.display());
    println!("table:   {}", outputs.scatter_csv.display());
    if let Some(path) = &outputs.correlogram_csv {
        println!("correlogram: {path:?}");
    }
    if let Some(reg) = outputs.regression {
        println!(
            "regression: semantic = {:.3} * ood + {:.3}   (r = {:.3})",
            reg.slope, reg.intercept, reg.r
        );
    }

    let c = correlogram(&points)?;
    println!("\n{}", correlogram_csv(&c));
    Ok(())
}
