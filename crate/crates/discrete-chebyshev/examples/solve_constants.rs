//! The implicit constants of each canonical transformation: eta and gamma of
//! the logarithmic mapping, zeta and A of the cubic one, m and gamma of the
//! u - 1/u mapping, and the gamma-type constant for x < 0 — each with its
//! defining-relation residual.
//!
//! Run with: cargo run --example solve_constants

use discrete_chebyshev::regime::*;

fn main() {
    // Kummer mapping on the real-saddle side; eta -> -b^2 as a/b^2 -> 0.
    for &(a, b) in &[(1e-4, 0.1), (1e-6, 0.1), (0.0001, 0.05)] {
        let RegimeConstants::Kummer { eta, gamma } = solve_kummer_constants(a, b).unwrap() else {
            unreachable!()
        };
        println!(
            "kummer  a={a:<8} b={b:<5} eta={eta:>12.8} gamma={gamma:>12.8} \
             |eta+b^2|/b^2={:.2e} residual={:.1e}",
            (eta + b * b).abs() / (b * b),
            kummer_defining_residual(a, b, eta, gamma)
        );
    }

    // The same mapping at fixed b crosses to complex-conjugate saddles.
    let (a, b) = (0.125, 0.5);
    let RegimeConstants::Kummer { eta, gamma } = solve_kummer_constants_fixed_b(a, b).unwrap()
    else {
        unreachable!()
    };
    println!(
        "fixed-b a={a:<8} b={b:<5} eta={eta:>12.8} gamma={gamma:>12.8} residual={:.1e}",
        kummer_defining_residual(a, b, eta, gamma)
    );

    // Cubic transformation: zeta changes sign exactly at b^2 = 4a(1-a).
    println!();
    for &(a, b) in &[(1e-4, 0.1), (0.01, 0.19899748742132397), (0.25, 0.01)] {
        let RegimeConstants::Airy { zeta, a_const } = solve_airy_constants(a, b).unwrap() else {
            unreachable!()
        };
        println!(
            "airy    a={a:<8} b={b:<20} zeta={zeta:>13.6e} A={a_const:>12.8} residual={:.1e}",
            airy_defining_residual(a, b, zeta, a_const)
        );
    }

    // Bessel constants have closed forms; gamma follows b ln b - b + O(b^3).
    println!();
    for &b in &[0.05, 0.01, 0.001] {
        let RegimeConstants::Bessel { m, gamma } = bessel_constants(0.25, b).unwrap() else {
            unreachable!()
        };
        println!(
            "bessel  a=0.25   b={b:<6} m={m:>12.8e} gamma={gamma:>12.8} \
             (gamma - (b ln b - b))/b^3 = {:.4}",
            bessel_gamma_defect(b) / (b * b * b)
        );
    }

    // Gamma-type constant for x < 0.
    println!();
    for &(a, b) in &[(-0.001, 0.05), (-0.063, 0.063)] {
        let RegimeConstants::GammaNeg { gamma } = gamma_neg_constant(a, b).unwrap() else {
            unreachable!()
        };
        println!(
            "gamma-  a={a:<8} b={b:<6} gamma={gamma:>12.8} residual={:.1e}",
            gamma_neg_defining_residual(a, b, gamma)
        );
    }

    // Saddle-point geometry behind the solves.
    println!();
    let (wp, wm) = saddles_w(0.25, 0.01);
    println!("w-saddles at (a=0.25, b=0.01): {wp:.6} and {wm:.6} (sum = 1)");
    let (vp, vm) = saddles_v(0.25, 0.01).unwrap();
    println!("v-saddles: {vp:.6e} and {vm:.6e} (product = b^2/(a(1-a)))");
    let t0 = saddle_t0(wp, 0.01).unwrap();
    println!("interior saddle t0(w_+) = {t0:.6}");
}
