//! Build aggregate reports for a cohort of submissions and rank them by
//! the harmonic-mean index. The aggregate pairs below are the published
//! track-1 results; the harmonic mean reproduces the published ranking.
//!
//! ```text
//! cargo run --example leaderboard
//! ```

use bravo_eval::aggregate::{
    aggregate_submission, rank, AggregateReport, OodMetrics, SemanticMetrics, SubsetResult,
};
use bravo_eval::core::SubsetKind;
use bravo_eval::report::render_leaderboard;

/// A report whose aggregates land exactly on (semantic, ood): every subset
/// carries the same metrics and every transformed value equals the target.
fn report_for(id: &str, semantic: f64, ood: f64) -> AggregateReport {
    let m = SemanticMetrics {
        miou: semantic,
        ece: 1.0 - semantic,
        auroc: semantic,
        fpr95: 1.0 - semantic,
        aupr_success: semantic,
        aupr_error: semantic,
    };
    let o = OodMetrics {
        auroc: ood,
        fpr95: 1.0 - ood,
        auprc: ood,
    };
    let per_subset = SubsetKind::ALL
        .into_iter()
        .map(|s| {
            SubsetResult::new(
                s,
                s.semantic_eval().then_some(m),
                s.ood_eval().then_some(o),
            )
            .unwrap()
        })
        .collect();
    aggregate_submission(id, 1, per_subset).unwrap()
}

fn main() {
    let reports = vec![
        report_for("pixood-r101-dlv3", 0.587, 0.640),
        report_for("dinov2-ood", 0.698, 0.881),
        report_for("phyfea", 0.663, 0.225),
        report_for("ensemble-c", 0.643, 0.582),
    ];
    let board = rank(&reports);
    print!("{}", render_leaderboard(&board));

    assert_eq!(board[0].submission_id, "dinov2-ood");
    println!(
        "\nwinner index {:.3} = harmonic mean of ({:.3}, {:.3})",
        board[0].bravo_index, board[0].semantic_agg, board[0].ood_agg
    );
}
