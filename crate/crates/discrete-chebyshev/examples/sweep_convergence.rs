//! Error sweeps along the canonical regime paths: exact-vs-asymptotic
//! records, median errors per support size, fitted convergence order, and
//! the machine-readable CSV the harness emits.
//!
//! Run with: cargo run --release --example sweep_convergence

use discrete_chebyshev::harness::{
    convergence_order, median_errors_by_n, sweep, to_csv, SweepPath, SweepSpec,
};
use discrete_chebyshev::regime::Thresholds;

fn main() {
    let t = Thresholds::default();

    // A fast path first: fixed b = 1/2 quarters the error per N-quadrupling.
    let spec = SweepSpec::new(SweepPath::FixedB, vec![200, 800, 3200]);
    let out = sweep(&spec, &t);
    println!(
        "fixed-b path ({} records, {} failures):",
        out.records.len(),
        out.failures.len()
    );
    for (cap_n, med) in median_errors_by_n(&out.records) {
        println!("  N = {cap_n:>5}: median rel err {med:.3e}");
    }
    println!(
        "  fitted convergence order: {:.3}",
        convergence_order(&out.records).unwrap()
    );

    // The Kummer path with the small-ratio scaling.
    let spec = SweepSpec::new(SweepPath::Kummer, vec![1000, 4000, 16000]);
    let out = sweep(&spec, &t);
    println!("\nkummer path:");
    for (cap_n, med) in median_errors_by_n(&out.records) {
        println!("  N = {cap_n:>5}: median rel err {med:.3e}");
    }
    println!(
        "  fitted convergence order: {:.3}",
        convergence_order(&out.records).unwrap()
    );

    // Records serialize to a fixed CSV schema (and JSON) losslessly.
    let spec = SweepSpec::new(SweepPath::Bessel, vec![500]);
    let out = sweep(&spec, &t);
    println!(
        "\nbessel path at N = 500, as CSV:\n{}",
        to_csv(&out.records)
    );
}
