//! Double-double arithmetic: an unevaluated sum of two f64s giving roughly
//! 32 significant digits.
//!
//! Used for the power-series regions of the Airy and Bessel kernels, where
//! alternating terms cancel by factors up to e^36 and plain f64 would lose
//! the answer. Algorithms are the classical error-free transforms (Dekker,
//! Knuth) with FMA for the product splits.

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

pub const DD_EPS: f64 = 4.93e-32; // 2^-104

pub const DD_PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.2246467991473532e-16,
};

pub const DD_LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    /// Exact small rational p/q (both exactly representable).
    pub fn from_ratio(p: f64, q: f64) -> Dd {
        Dd::from(p).div(Dd::from(q))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn add_f64(self, o: f64) -> Dd {
        self.add(Dd::from(o))
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, o: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, o);
        let p2 = p2 + self.lo * o;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add_f64(q3)
    }

    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // y0 from f64, one dd Newton step: y -> y + (a - y^2) / (2 y)
        let y0 = Dd::from(self.hi.sqrt());
        let corr = self.sub(y0.mul(y0)).div(y0.mul_f64(2.0));
        y0.add(corr)
    }

    /// exp(x) for |x| up to a few hundred: reduce by ln 2, Taylor-sum the
    /// remainder, rescale by 2^k.
    pub fn exp(self) -> Dd {
        let k = (self.hi / DD_LN2.hi).round();
        let r = self.sub(DD_LN2.mul_f64(k));
        let mut sum = Dd::ONE;
        let mut term = Dd::ONE;
        for i in 1..32 {
            term = term.mul(r).div(Dd::from(i as f64));
            sum = sum.add(term);
            if term.hi.abs() < DD_EPS * sum.hi.abs() {
                break;
            }
        }
        let scale = (2.0_f64).powi(k as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }

    /// ln(x) for x > 0 via Newton iterations on exp.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let mut y = Dd::from(self.hi.ln());
        for _ in 0..2 {
            // y += x * exp(-y) - 1
            let e = self.mul(y.neg().exp());
            y = y.add(e.sub(Dd::ONE));
        }
        y
    }

    /// ln|hi + lo| evaluated in plain f64, adequate once the value itself is
    /// only needed to f64 accuracy.
    pub fn ln_abs_f64(self) -> f64 {
        let a = self.abs();
        a.hi.ln() + (a.lo / a.hi).ln_1p()
    }

    pub fn signum(self) -> i8 {
        if self.hi > 0.0 || (self.hi == 0.0 && self.lo > 0.0) {
            1
        } else if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -1
        } else {
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representation_constants_round_trip() {
        // exp(ln 2) must come back to 2 at dd accuracy.
        let two = DD_LN2.exp();
        assert!((two.hi - 2.0).abs() < 1e-15 && two.add_f64(-2.0).to_f64().abs() < 1e-30);
        let l = Dd::from(2.0).ln();
        assert!(l.sub(DD_LN2).to_f64().abs() < 1e-30);
    }

    #[test]
    fn sqrt_and_div() {
        let s3 = Dd::from(3.0).sqrt();
        let back = s3.mul(s3).add_f64(-3.0);
        assert!(back.to_f64().abs() < 1e-30);
        let third = Dd::ONE.div(Dd::from(3.0));
        let resid = third.mul_f64(3.0).sub(Dd::ONE);
        assert!(resid.to_f64().abs() < 1e-31);
    }

    #[test]
    fn exp_matches_f64_scale() {
        for &x in &[-5.0, -0.3, 0.0, 0.7, 3.0, 20.0] {
            let e = Dd::from(x).exp().to_f64();
            assert!((e - x.exp()).abs() / x.exp() < 1e-15, "exp({x})");
        }
    }

    #[test]
    fn cancellation_survives() {
        // (1 + 1e-20) - 1 in dd keeps the 1e-20.
        let a = Dd::ONE.add(Dd::from(1e-20));
        let d = a.sub(Dd::ONE);
        assert!((d.to_f64() - 1e-20).abs() < 1e-33);
    }
}
