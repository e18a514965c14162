//! Leading-order asymptotic evaluation in every regime, checked against the
//! exact oracle at desk-scale parameters.
//!
//! Run with: cargo run --release --example approximate

use discrete_chebyshev::asymptotic::{approx_auto, approx_series_partial};
use discrete_chebyshev::exact::{eval_exact_series, to_signed_log, PolyTriple};
use discrete_chebyshev::regime::Thresholds;

fn main() {
    let t = Thresholds::default();
    println!("point                          regime           rel err    audit");
    for (n, x, cap_n) in [
        (10u64, 2500i64, 10_000u64), // Bessel
        (1392, 5, 16_000),           // Kummer, ratio small
        (400, 160, 10_000),          // Airy
        (63, -3, 1_000),             // gamma-type, x < 0
        (100, 25, 200),              // fixed b = 1/2
        (10, 9990, 10_000),          // folded by symmetry onto x = 10
    ] {
        let p = PolyTriple::from_ints(n, x, cap_n).unwrap();
        let exact = to_signed_log(&eval_exact_series(&p).unwrap());
        let r = approx_auto(&p, &t, 2).unwrap();
        let rel = ((r.value.log_abs - exact.log_abs).exp() - 1.0).abs();
        let sign_ok = r.value.sign == exact.sign;
        println!(
            "t_{n:<5}({x:>5}, {:>6})  {:<16} {rel:<10.3e} {:.1e}{}",
            cap_n + 1,
            r.regime.to_string(),
            r.audit_residual(),
            if sign_ok { "" } else { "  SIGN MISMATCH" }
        );
    }

    // The series regime: truncations of the defining sum with an a priori
    // error estimate from the first omitted term.
    let p = PolyTriple::from_ints(5, 1, 1_000_000).unwrap();
    let exact = to_signed_log(&eval_exact_series(&p).unwrap());
    println!("\nseries regime at (n=5, x=1, capN=10^6):");
    for k in [1, 2, 6] {
        let s = approx_series_partial(&p, k).unwrap();
        let rel = ((s.value.log_abs - exact.log_abs).exp() - 1.0).abs();
        println!(
            "  K={k}: rel err {:.3e}, first omitted term ratio {:.3e}",
            rel, s.first_omitted_ratio
        );
    }
}
