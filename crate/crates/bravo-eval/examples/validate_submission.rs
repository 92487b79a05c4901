//! Break a clean fixture in three different ways and watch the validator
//! name every violation: wrong bit depth, wrong dimensions, and an illegal
//! class label.
//!
//! ```text
//! cargo run --example validate_submission
//! ```

use bravo_eval::core::{ClassMap, ConfidenceMap};
use bravo_eval::engine::{validate_submission, RunConfig};
use bravo_eval::pngio::{write_class_png, write_conf_png};
use bravo_eval::report::render_validation_text;
use bravo_eval::tools::{synth_fixture, FixtureSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("bravo-eval-examples/validate_submission");
    if out.exists() {
        std::fs::remove_dir_all(&out)?;
    }

    let spec = FixtureSpec {
        width: 64,
        height: 48,
        frames_per_subset: 2,
        seed: 7,
        ..FixtureSpec::default()
    };
    let manifest = synth_fixture(&spec, &out)?;

    let outcome = validate_submission(&manifest, &RunConfig::default());
    println!("clean fixture:");
    print!("{}", render_validation_text(&outcome));
    assert!(outcome.is_ok());

    // An 8-bit file where 16-bit confidence belongs.
    let eight_bit = ClassMap::new(spec.width, spec.height, vec![0; 64 * 48])?;
    write_class_png(&eight_bit, &manifest.entries[0].conf)?;

    // A confidence map with the wrong dimensions.
    let squashed = ConfidenceMap::new(spec.width / 2, spec.height, vec![9; 32 * 48])?;
    write_conf_png(&squashed, &manifest.entries[5].conf)?;

    // A prediction using the twentieth class of a nineteen-class problem.
    let illegal = ClassMap::new(spec.width, spec.height, vec![19; 64 * 48])?;
    write_class_png(&illegal, &manifest.entries[9].pred)?;

    let outcome = validate_submission(&manifest, &RunConfig::default());
    println!("\nafter injecting three faults:");
    print!("{}", render_validation_text(&outcome));
    assert_eq!(outcome.issues.len(), 3);
    Ok(())
}
