//! Exact evaluation of t_n(x, capN+1) in big-rational arithmetic: the two
//! independent oracles, the parity symmetry, discrete orthogonality and the
//! degree check.
//!
//! Run with: cargo run --example exact_evaluation

use discrete_chebyshev::exact::{
    degree_check, eval_exact_recurrence, eval_exact_series, orthogonality_sum, reflect, PolyTriple,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn main() {
    // Small values print as exact rationals.
    for (n, x, cap_n) in [(0i64, 7i64, 10u64), (1, 3, 10), (2, 1, 3), (3, 0, 9)] {
        let p = PolyTriple::from_ints(n as u64, x, cap_n).unwrap();
        let v = eval_exact_series(&p).unwrap();
        println!("t_{n}({x}, {}) = {}", cap_n + 1, v.value);
    }

    // The series and the three-term recurrence are independent routes to the
    // same rational number, including at rational x.
    let x = BigRational::new(BigInt::from(7), BigInt::from(3));
    let p = PolyTriple::new(4, x, 9).unwrap();
    let s = eval_exact_series(&p).unwrap().value;
    let r = eval_exact_recurrence(&p).unwrap().value;
    println!("series    t_4(7/3, 10) = {s}");
    println!("recurrence t_4(7/3, 10) = {r}");
    assert_eq!(s, r);

    // Parity symmetry: t_n(x, N+1) = (-1)^n t_n(N - x, N+1).
    let p = PolyTriple::from_ints(5, 2, 12).unwrap();
    let lhs = eval_exact_series(&p).unwrap().value;
    let rhs = eval_exact_series(&reflect(&p)).unwrap().value;
    println!("t_5(2, 13) = {lhs}, t_5(10, 13) = {rhs} (odd degree flips the sign)");
    assert_eq!(lhs, -rhs);

    // Discrete orthogonality on the support grid, exactly zero.
    let ip = orthogonality_sum(3, 7, 20).unwrap();
    println!("<t_3, t_7> on x = 0..20: {ip}");
    assert!(ip.is_zero());

    // Degree check: the (n+1)-th forward difference vanishes identically.
    assert!(degree_check(6, 15).unwrap());
    println!("degree check passed: the 7th forward difference of t_6 vanishes");

    // Values grow fast; the signed-log view never overflows.
    let p = PolyTriple::from_ints(400, 100, 1000).unwrap();
    let v = eval_exact_series(&p).unwrap();
    let sl = v.to_signed_log();
    println!(
        "t_400(100, 1001): sign {}, ln|t| = {:.6} (about {} decimal digits)",
        sl.sign,
        sl.log_abs,
        (sl.log_abs / std::f64::consts::LN_10) as u64
    );
}
