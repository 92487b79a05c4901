//! Blend two model posteriors into an ensemble prediction: softmax the
//! logits, average the probability maps, argmax-decode into the submission
//! file pair, and round-trip the posterior through its binary container.
//!
//! ```text
//! cargo run --example ensemble_blend
//! ```

use bravo_eval::pngio::{write_class_png, write_conf_png};
use bravo_eval::tools::{
    argmax_decode, ensemble_mean, read_probmap, softmax, write_probmap, ProbabilityMap,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("bravo-eval-examples/ensemble_blend");
    std::fs::create_dir_all(&out)?;

    // Two 2x2 members over 19 classes, from logits.
    let mut logits_a = vec![0.0f64; 4 * 19];
    let mut logits_b = vec![0.0f64; 4 * 19];
    for pixel in 0..4 {
        logits_a[pixel * 19 + 5] = 3.0; // member A likes class 5
        logits_b[pixel * 19 + 5] = 1.0; // member B leans class 7
        logits_b[pixel * 19 + 7] = 2.5;
    }
    let member_a = softmax(2, 2, 19, &logits_a)?;
    let member_b = softmax(2, 2, 19, &logits_b)?;

    let mean = ensemble_mean(&[member_a, member_b])?;
    let (classes, confidence) = argmax_decode(&mean)?;
    println!(
        "ensemble decodes to class {} with confidence {}/65535",
        classes.labels()[0],
        confidence.values()[0]
    );

    write_class_png(&classes, &out.join("ensemble_pred.png"))?;
    write_conf_png(&confidence, &out.join("ensemble_conf.png"))?;

    // The posterior travels between processes as a small binary container.
    let container = out.join("mean.bpm");
    write_probmap(&mean, &container)?;
    let back = read_probmap(&container)?;
    println!(
        "container round trip: {} pixels x {} classes, first prob {:.6}",
        back.pixel_count(),
        back.classes(),
        back.pixel(0)[5]
    );

    // The two-member hand example: mean of [0.6, 0.4] and [0.2, 0.8].
    let a = ProbabilityMap::new(1, 1, 2, vec![0.6, 0.4])?;
    let b = ProbabilityMap::new(1, 1, 2, vec![0.2, 0.8])?;
    let (cls, conf) = argmax_decode(&ensemble_mean(&[a, b])?)?;
    println!(
        "hand example: class {} at confidence {} (= round(0.6 * 65535))",
        cls.labels()[0],
        conf.values()[0]
    );
    println!("\nfiles under {}", out.display());
    Ok(())
}
