//! The self-contained special-function kernels: Airy, Bessel J0/J1, the
//! regularized Kummer function, and log-gamma, all in signed-log form.
//!
//! Run with: cargo run --example special_functions

use discrete_chebyshev::signed_log::signed_log_linear;
use discrete_chebyshev::specfun::{airy, bessel_j01, kummer_reg, log_gamma};

fn main() {
    // Airy functions across the turning point.
    println!("z      Ai(z)        Bi(z)        Wronskian defect");
    for z in [-8.0, -2.0, 0.0, 1.0, 5.0, 12.0] {
        let q = airy(z);
        let w = signed_log_linear(&[(1.0, q.ai.mul(&q.bi_prime)), (-1.0, q.ai_prime.mul(&q.bi))]);
        println!(
            "{z:>5} {:>12.6e} {:>12.6e} {:.2e}",
            q.ai.to_f64(),
            q.bi.to_f64(),
            (w.to_f64() * std::f64::consts::PI - 1.0).abs()
        );
    }

    // Bessel J0 and J1, from the power series to the far oscillatory zone.
    println!("\nz        J0(z)         J1(z)");
    for z in [0.0, 2.404825557695773, 10.0, 1000.0] {
        let (j0, j1) = bessel_j01(z).unwrap();
        println!("{z:>8} {:>13.6e} {:>13.6e}", j0.to_f64(), j1.to_f64());
    }

    // Regularized Kummer function; M(1,1,z) = e^z is an exact identity.
    let k = kummer_reg(1.0, 3.0);
    println!(
        "\nM(1,1,3) = {:.12} (e^3 = {:.12})",
        k.m_val.to_f64(),
        3.0_f64.exp()
    );

    // Large parameters with a huge negative argument trip the exact
    // rational fallback; the flag reports it.
    let k = kummer_reg(401.0, -640.0);
    println!(
        "M(401,1,-640): sign {}, ln|M| = {:.6}, exact fallback used: {}",
        k.m_val.sign, k.m_val.log_abs, k.degraded
    );

    // log-gamma far beyond f64 range of Gamma itself.
    println!("\nln Gamma(10.5)   = {:.12}", log_gamma(10.5).unwrap());
    println!("ln Gamma(100000) = {:.6}", log_gamma(1e5).unwrap());
}
