//! The piecewise-linear confidence stretch: scores calibrated to an
//! in-distribution false-positive rate live almost entirely below 0.05, so
//! the map expands [0, 0.05] onto [0, 0.8] before 16-bit quantization.
//!
//! ```text
//! cargo run --example confidence_renormalization
//! ```

use bravo_eval::core::ConfidenceMap;
use bravo_eval::pngio::{read_conf_png, write_conf_png};
use bravo_eval::tools::{renormalize_confidence, renormalize_level, renormalize_map};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("score    renormalized");
    for s in [0.0, 0.01, 0.025, 0.05, 0.1, 0.5, 1.0] {
        println!("{s:<9}{:.6}", renormalize_confidence(s)?);
    }

    println!("\nquantized levels:");
    for level in [0u16, 655, 3277, 32768, 65535] {
        println!("{level:>6} -> {:>6}", renormalize_level(level));
    }

    // Apply to a file the way the command line does.
    let out = std::env::temp_dir().join("bravo-eval-examples/renormalization");
    std::fs::create_dir_all(&out)?;
    let raw = ConfidenceMap::new(4, 1, vec![0, 3277, 32768, 65535])?;
    write_conf_png(&raw, &out.join("raw.png"))?;
    let stretched = renormalize_map(&raw);
    write_conf_png(&stretched, &out.join("stretched.png"))?;
    let back = read_conf_png(&out.join("stretched.png"))?;
    println!("\nfile round trip: {:?} -> {:?}", raw.values(), back.values());
    Ok(())
}
