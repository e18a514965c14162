//! Sign-plus-log representation of real numbers.
//!
//! Gamma-ratio prefactors in the asymptotic expansions reach e^(±10^5), far
//! beyond f64 range, so every magnitude that can grow is carried as a sign in
//! {-1, 0, +1} and the natural log of the absolute value.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// A real number stored as `sign * exp(log_abs)`.
///
/// Invariant: `sign == 0` if and only if `log_abs == -inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLogValue {
    pub sign: i8,
    pub log_abs: f64,
}

impl SignedLogValue {
    pub fn zero() -> Self {
        SignedLogValue {
            sign: 0,
            log_abs: f64::NEG_INFINITY,
        }
    }

    /// Normalizing constructor: a zero sign forces `log_abs = -inf` and a
    /// `-inf` log forces the sign to zero.
    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::zero()
        } else {
            SignedLogValue {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::zero()
        } else {
            SignedLogValue {
                sign: if v > 0.0 { 1 } else { -1 },
                log_abs: v.abs().ln(),
            }
        }
    }

    pub fn from_big_rational(v: &BigRational) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        let sign = if v.numer().sign() == Sign::Minus {
            -1
        } else {
            1
        };
        let log_abs = ln_biguint(v.numer().magnitude()) - ln_biguint(v.denom().magnitude());
        SignedLogValue { sign, log_abs }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Value as f64; overflows to +-inf outside f64 range.
    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.log_abs.exp()
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.sign, self.log_abs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.sign * other.sign, self.log_abs + other.log_abs)
    }

    /// Multiply by exp(delta) without leaving log space.
    pub fn scale_exp(&self, delta: f64) -> Self {
        Self::new(self.sign, self.log_abs + delta)
    }

    /// Multiply by a plain f64 coefficient.
    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        let s = if c > 0.0 { self.sign } else { -self.sign };
        Self::new(s, self.log_abs + c.abs().ln())
    }
}

/// Linear combination of signed-log values with f64 coefficients,
/// evaluated by factoring out the largest magnitude first.
pub fn signed_log_linear(terms: &[(f64, SignedLogValue)]) -> SignedLogValue {
    let peak = terms
        .iter()
        .filter(|(c, v)| *c != 0.0 && v.sign != 0)
        .map(|(_, v)| v.log_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return SignedLogValue::zero();
    }
    let mut acc = 0.0_f64;
    for (c, v) in terms {
        if *c != 0.0 && v.sign != 0 {
            acc += c * v.sign as f64 * (v.log_abs - peak).exp();
        }
    }
    if acc == 0.0 {
        SignedLogValue::zero()
    } else {
        SignedLogValue::new(if acc > 0.0 { 1 } else { -1 }, peak + acc.abs().ln())
    }
}

/// Natural log of a nonzero big integer magnitude, safe for operands far
/// beyond f64 range: top 63 bits give the mantissa, the rest contributes
/// `shift * ln 2`.
pub fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 63 {
        return (n.to_u64().expect("fits u64") as f64).ln();
    }
    let shift = bits - 63;
    let top: BigUint = n >> shift;
    (top.to_u64().expect("fits u64") as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of |n| for a nonzero `BigInt`.
pub fn ln_bigint_abs(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    #[test]
    fn zero_invariant() {
        let z = SignedLogValue::from_f64(0.0);
        assert_eq!(z.sign, 0);
        assert_eq!(z.log_abs, f64::NEG_INFINITY);
        assert_eq!(SignedLogValue::new(1, f64::NEG_INFINITY), z);
        assert_eq!(SignedLogValue::new(0, 5.0), z);
    }

    #[test]
    fn from_rational_matches_f64_logs() {
        let v = BigRational::new(BigInt::from(-6), BigInt::one());
        let s = SignedLogValue::from_big_rational(&v);
        assert_eq!(s.sign, -1);
        assert!((s.log_abs - 6.0_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn huge_rational_log() {
        // 2^100000 / 3^50000: log = 100000 ln2 - 50000 ln3, far beyond f64 range.
        let n = BigInt::from(2).pow(100_000);
        let d = BigInt::from(3).pow(50_000);
        let v = BigRational::new(n, d);
        let s = SignedLogValue::from_big_rational(&v);
        let expect = 100_000.0 * std::f64::consts::LN_2 - 50_000.0 * 3.0_f64.ln();
        assert!((s.log_abs - expect).abs() / expect.abs() < 1e-14);
        assert_eq!(s.sign, 1);
    }

    #[test]
    fn linear_combination_factors_peak() {
        // 3*e^10 - 2*e^9 computed in log space.
        let a = SignedLogValue::new(1, 10.0);
        let b = SignedLogValue::new(1, 9.0);
        let r = signed_log_linear(&[(3.0, a), (-2.0, b)]);
        let expect = 3.0 * 10.0_f64.exp() - 2.0 * 9.0_f64.exp();
        assert_eq!(r.sign, 1);
        assert!((r.log_abs - expect.ln()).abs() < 1e-13);
    }

    #[test]
    fn linear_combination_exact_cancellation() {
        let a = SignedLogValue::new(1, 4.0);
        let r = signed_log_linear(&[(1.0, a), (-1.0, a)]);
        assert!(r.is_zero());
    }
}
