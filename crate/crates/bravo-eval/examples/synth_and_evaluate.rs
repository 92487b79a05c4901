//! Generate a synthetic six-subset benchmark fixture and score it end to
//! end, printing the per-subset table and the final ranking index.
//!
//! ```text
//! cargo run --example synth_and_evaluate
//! ```

use bravo_eval::engine::{evaluate_submission, RunConfig};
use bravo_eval::report::{render_report_json, render_report_table};
use bravo_eval::tools::{synth_fixture, CalibrationModel, FixtureSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("bravo-eval-examples/synth_and_evaluate");
    std::fs::create_dir_all(&out)?;

    let spec = FixtureSpec {
        width: 160,
        height: 96,
        frames_per_subset: 4,
        error_rate: 0.2,
        calibration: CalibrationModel::Perfect,
        ood_fraction: 0.25,
        seed: 2024,
    };
    println!("generating fixture under {} ...", out.display());
    let manifest = synth_fixture(&spec, &out)?;
    println!(
        "{} frames across {} subsets\n",
        manifest.entries.len(),
        6
    );

    let report = evaluate_submission(&manifest, &RunConfig::default())?;
    print!("{}", render_report_table(&report));

    let json_path = out.join("report.json");
    std::fs::write(&json_path, render_report_json(&report))?;
    println!("\nmachine-readable report: {}", json_path.display());
    Ok(())
}
