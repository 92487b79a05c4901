//! The metric kernel on data small enough to check by hand: a six-pixel
//! frame through role assignment and accumulation, then each metric, plus
//! the classic tied-score ROC example.
//!
//! ```text
//! cargo run --example metric_primitives
//! ```

use bravo_eval::core::{
    pixel_roles, ClassMap, ConfidenceMap, EvalMode, GroundTruthFrame, SubsetKind, OOD_LABEL,
    VOID_LABEL,
};
use bravo_eval::metrics::{
    accumulate_ood, accumulate_semantic, aupr, aupr_error, auroc, ece, fpr_at_95tpr, miou,
    ScoreHistogram, SemanticAccumulator,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A 6-pixel frame: four valid-class pixels (one mislabeled), one pixel
    // under an unknown object, one void pixel.
    let gt = GroundTruthFrame::new(6, 1, vec![2, 2, 7, 11, OOD_LABEL, VOID_LABEL])?;
    let pred = ClassMap::new(6, 1, vec![2, 7, 7, 11, 0, 3])?;
    let conf = ConfidenceMap::new(6, 1, vec![60000, 20000, 50000, 58000, 9000, 30000])?;

    let semantic_roles = pixel_roles(&gt, SubsetKind::SynObjs, EvalMode::Semantic);
    let mut acc = SemanticAccumulator::new(15);
    accumulate_semantic(&mut acc, &pred, &conf, &gt, &semantic_roles)?;

    println!("semantic population: {} pixels", acc.total());
    println!("  miou        = {:.4}", miou(acc.confusion())?);
    println!("  ece         = {:.4}", ece(acc.calibration())?);
    println!("  auroc       = {:.4}", auroc(acc.correctness())?);
    println!("  fpr@95tpr   = {:.4}", fpr_at_95tpr(acc.correctness())?);
    println!("  aupr-success= {:.4}", aupr(acc.correctness())?);
    println!("  aupr-error  = {:.4}", aupr_error(acc.correctness())?);

    let ood_roles = pixel_roles(&gt, SubsetKind::SynObjs, EvalMode::Ood);
    let mut hist = ScoreHistogram::new();
    accumulate_ood(&mut hist, &conf, &ood_roles)?;
    println!(
        "\nood population: {} positives, {} negatives",
        hist.total_pos(),
        hist.total_neg()
    );
    println!("  auroc       = {:.4}", auroc(&hist)?);
    println!("  auprc       = {:.4}", aupr(&hist)?);

    // Tied scores contribute half a win: positives at levels 4,3,2,1
    // against negatives at 3 and 0 give (4 + 1 + 0.5) / 8.
    let tied = ScoreHistogram::from_samples([
        (4u16, true),
        (3, true),
        (2, true),
        (1, true),
        (3, false),
        (0, false),
    ]);
    println!("\ntied-score worked example:");
    println!("  auroc       = {} (exactly 11/16)", auroc(&tied)?);
    println!("  fpr@95tpr   = {}", fpr_at_95tpr(&tied)?);

    // Exact rational behind the area: doubled wins over doubled pairs.
    let (wins2, pairs2) = tied.pair_counts();
    println!("  pair counts = {wins2}/{pairs2}");
    Ok(())
}
