//! Regime classification: how (n, x, capN) maps to an approximant family
//! through the scaled parameters a = x/capN, b = n/capN, rho = x capN / n^2.
//!
//! Run with: cargo run --example classify_regimes

use discrete_chebyshev::exact::PolyTriple;
use discrete_chebyshev::regime::{classify, scaled_params, Thresholds};

fn main() {
    let t = Thresholds::default();
    println!(
        "thresholds: rho in [{}, {}], x_hi = {}, b_hi = {}, eta_n_min = {}",
        t.rho_lo, t.rho_hi, t.x_hi, t.b_hi, t.eta_n_min
    );
    println!("\n n      x      capN    rho        a        b        regime");
    let cases: &[(u64, i64, u64)] = &[
        (10, 2500, 10_000),  // ratio and x both large -> Bessel
        (1000, 2, 10_000),   // ratio small, n^2/capN large -> Kummer
        (400, 160, 10_000),  // ratio pinned, x large -> Airy
        (300, 5, 1_000_000), // ratio large, x bounded -> plain series
        (63, -3, 1_000),     // negative x -> gamma-type
        (500, 125, 1_000),   // b = 1/2 -> fixed-b Kummer
        (400, 5, 10_000),    // Airy window but x too small -> exact fallback
        (0, 7, 100),         // degree zero -> exact fallback
    ];
    for &(n, x, cap_n) in cases {
        let p = PolyTriple::from_ints(n, x, cap_n).unwrap();
        let tag = classify(&p, &t);
        match scaled_params(&p) {
            Ok(s) => println!(
                "{n:>5} {x:>6} {cap_n:>8}  {:<9.4} {:<8.4} {:<8.4} {tag}",
                s.rho, s.a, s.b
            ),
            Err(_) => println!(
                "{n:>5} {x:>6} {cap_n:>8}  {:<9} {:<8} {:<8} {tag}",
                "-", "-", "-"
            ),
        }
    }

    // Thresholds are plain key=value configuration.
    let custom = Thresholds::from_str_config("x_hi = 2000\n").unwrap();
    let p = PolyTriple::from_ints(10, 1500, 10_000).unwrap();
    println!(
        "\nwith x_hi raised to 2000, (10, 1500, 10000) moves {} -> {}",
        classify(&p, &t),
        classify(&p, &custom)
    );
}
