//! Regime classification and the implicit constants of each canonical
//! transformation.
//!
//! The evaluation point (n, x, capN) is reduced to a = x/capN, b = n/capN
//! and the ratio rho = a/b^2 = x capN / n^2, then routed to one of the
//! approximant families (Kummer, Airy, Bessel, gamma, plain series). Each
//! family's mapping constants come from matching saddle values of the phase
//! function onto its model phase:
//!
//!   Kummer:  f(t0(w), w) = a ln u - a ln(u-1) + eta u + gamma
//!   Airy:    fbar(t0(w), w) = u^3/3 - zeta u + A
//!   Bessel:  fhat(t0(v), v) = m (u - 1/u) + gamma
//!   Gamma:   ftilde(t0(w), w) = a ln(-u) - u + gamma      (x < 0)
//!
//! All solved constants are real; solves are one-dimensional and bracketed.

use crate::error::{Error, Result};
use crate::exact::PolyTriple;
use num_complex::Complex64;
use std::path::Path;

/// Scaled parameters of the double-scaling limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledParams {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
}

/// Approximant family for one evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    SeriesAsymptotic,
    KummerSmallB,
    AirySmallB,
    BesselSmallB,
    GammaNegSmallB,
    KummerFixedB,
    ExactFallback,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::SeriesAsymptotic => "SeriesAsymptotic",
            Regime::KummerSmallB => "KummerSmallB",
            Regime::AirySmallB => "AirySmallB",
            Regime::BesselSmallB => "BesselSmallB",
            Regime::GammaNegSmallB => "GammaNegSmallB",
            Regime::KummerFixedB => "KummerFixedB",
            Regime::ExactFallback => "ExactFallback",
        }
    }

    pub fn from_tag(s: &str) -> Option<Regime> {
        Some(match s {
            "SeriesAsymptotic" => Regime::SeriesAsymptotic,
            "KummerSmallB" => Regime::KummerSmallB,
            "AirySmallB" => Regime::AirySmallB,
            "BesselSmallB" => Regime::BesselSmallB,
            "GammaNegSmallB" => Regime::GammaNegSmallB,
            "KummerFixedB" => Regime::KummerFixedB,
            "ExactFallback" => Regime::ExactFallback,
            _ => return None,
        })
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Solved mapping constants, one variant per canonical transformation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RegimeConstants {
    Kummer { eta: f64, gamma: f64 },
    Airy { zeta: f64, a_const: f64 },
    Bessel { m: f64, gamma: f64 },
    GammaNeg { gamma: f64 },
}

/// Classification cutoffs. The limit statements behind the regime table are
/// open-ended ("small", "fixed", "large"); these constants make them
/// reproducible decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub b_hi: f64,
    /// Minimum |eta| N ~ n^2/capN for the Kummer path to be asymptotic.
    pub eta_n_min: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            rho_lo: 0.05,
            rho_hi: 20.0,
            x_lo: 1.0,
            x_hi: 30.0,
            b_hi: 0.1,
            eta_n_min: 10.0,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho_lo > 0.0 && self.rho_lo < self.rho_hi) {
            return Err(Error::Parse(format!(
                "need 0 < rho_lo < rho_hi, got {} and {}",
                self.rho_lo, self.rho_hi
            )));
        }
        if !(self.x_lo > 0.0 && self.x_lo < self.x_hi) {
            return Err(Error::Parse(format!(
                "need 0 < x_lo < x_hi, got {} and {}",
                self.x_lo, self.x_hi
            )));
        }
        if !(self.b_hi > 0.0 && self.eta_n_min > 0.0) {
            return Err(Error::Parse("b_hi and eta_n_min must be positive".into()));
        }
        Ok(())
    }

    /// Parse a plain-text `key=value` config; `#` starts a comment. Unknown
    /// keys are an error, missing keys keep their defaults.
    pub fn from_str_config(text: &str) -> Result<Thresholds> {
        let mut t = Thresholds::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "line {}: expected key=value, got {raw:?}",
                    lineno + 1
                ))
            })?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number {value:?}", lineno + 1)))?;
            match key.trim() {
                "rho_lo" => t.rho_lo = v,
                "rho_hi" => t.rho_hi = v,
                "x_lo" => t.x_lo = v,
                "x_hi" => t.x_hi = v,
                "b_hi" => t.b_hi = v,
                "eta_n_min" => t.eta_n_min = v,
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown threshold key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        t.validate()?;
        Ok(t)
    }

    pub fn from_file(path: &Path) -> Result<Thresholds> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_config(&text)
    }
}

/// a = x/capN, b = n/capN, rho = a/b^2; n = 0 is degenerate (no scaling).
pub fn scaled_params(p: &PolyTriple) -> Result<ScaledParams> {
    if p.n() == 0 {
        return Err(Error::DegenerateInput(
            "n = 0 has no scaled parameters; use the exact evaluator".into(),
        ));
    }
    let cap_n = p.cap_n() as f64;
    let x = p.x_f64();
    let n = p.n() as f64;
    // rho in the x capN / n^2 form: exact f64 arithmetic for integer inputs
    Ok(ScaledParams {
        a: x / cap_n,
        b: n / cap_n,
        rho: x * cap_n / (n * n),
    })
}

/// Total, deterministic decision procedure over the regime table.
pub fn classify(p: &PolyTriple, t: &Thresholds) -> Regime {
    let n = p.n();
    if n == 0 {
        return Regime::ExactFallback;
    }
    let x = p.x_f64();
    let cap_n = p.cap_n() as f64;
    let b = n as f64 / cap_n;
    let rho = x * cap_n / (n as f64 * n as f64);
    if x < 0.0 {
        return if b <= t.b_hi {
            Regime::GammaNegSmallB
        } else {
            Regime::ExactFallback
        };
    }
    if b > t.b_hi {
        return Regime::KummerFixedB;
    }
    if rho > t.rho_hi {
        if x >= t.x_hi {
            Regime::BesselSmallB
        } else {
            Regime::SeriesAsymptotic
        }
    } else if rho >= t.rho_lo {
        if x >= t.x_hi {
            Regime::AirySmallB
        } else {
            // Airy-type expansions need x = aN large; fall back to exact
            Regime::ExactFallback
        }
    } else if (n as f64) * (n as f64) / cap_n >= t.eta_n_min {
        Regime::KummerSmallB
    } else {
        Regime::SeriesAsymptotic
    }
}

// ---------------------------------------------------------------------------
// saddle points
// ---------------------------------------------------------------------------

/// Complex square root of a real number (principal branch).
fn sqrt_real(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

/// Saddle points w+- = (b +- sqrt(b^2 - 4a + 4a^2)) / (2b) of the w-phase.
/// Real when b^2 >= 4a(1-a), a complex-conjugate pair otherwise.
pub fn saddles_w(a: f64, b: f64) -> (Complex64, Complex64) {
    let d = sqrt_real(b * b - 4.0 * a + 4.0 * a * a);
    let bb = Complex64::new(b, 0.0);
    ((bb + d) / (2.0 * b), (bb - d) / (2.0 * b))
}

/// Interior saddle t0(w) = (2w - 1 + sqrt(1 + 4 b^2 (w-1) w)) / (2 (1+b) w),
/// principal branch.
pub fn saddle_t0(w: Complex64, b: f64) -> Result<Complex64> {
    if w.norm() == 0.0 {
        return Err(Error::Domain("saddle_t0 undefined at w = 0".into()));
    }
    let s = (Complex64::new(1.0, 0.0) + 4.0 * b * b * (w - 1.0) * w).sqrt();
    Ok((2.0 * w - 1.0 + s) / (2.0 * (1.0 + b) * w))
}

/// Saddle points of the v = 1/w representation,
/// v+- = (b^2 -+ b i sqrt(4a - 4a^2 - b^2)) / (2a(1-a)).
pub fn saddles_v(a: f64, b: f64) -> Result<(Complex64, Complex64)> {
    let disc = 4.0 * a - 4.0 * a * a - b * b;
    if disc <= 0.0 {
        return Err(Error::Domain(format!(
            "saddles_v needs 4a(1-a) > b^2, got a={a} b={b}"
        )));
    }
    let s = disc.sqrt();
    let den = 2.0 * a * (1.0 - a);
    Ok((
        Complex64::new(b * b / den, -b * s / den),
        Complex64::new(b * b / den, b * s / den),
    ))
}

/// w-saddles in stable real form for the real-saddle regime:
/// w_minus = 2a(1-a) / (b (b + D)) avoids the b - D cancellation when
/// a/b^2 is tiny. Returns (w_plus, w_minus, D) with D = sqrt(b^2-4a+4a^2).
fn saddles_w_real(a: f64, b: f64) -> Option<(f64, f64, f64)> {
    let disc = b * b - 4.0 * a + 4.0 * a * a;
    if disc <= 0.0 {
        return None;
    }
    let d = disc.sqrt();
    let w_m = if a == 0.0 {
        0.0
    } else {
        2.0 * a * (1.0 - a) / (b * (b + d))
    };
    Some((1.0 - w_m, w_m, d))
}

/// t0 at a saddle of the w-phase, where sqrt(1 + 4b^2 w (w-1)) collapses to
/// 1 - 2a: t0(w+-) = (w+- - a) / ((1+b) w+-).
fn t0_at_saddle(a: f64, b: f64, w: Complex64) -> Complex64 {
    (w - a) / ((1.0 + b) * w)
}

fn t0_at_saddle_real(a: f64, b: f64, w: f64) -> f64 {
    (w - a) / ((1.0 + b) * w)
}

// ---------------------------------------------------------------------------
// phase-function values at saddles
// ---------------------------------------------------------------------------

/// fbar(t0(w), w) for real w in (0,1): the cut-adjusted phase with
/// -a ln(1-w); identical to f up to the -+ a pi i edge term that cancels in
/// every defining combination.
fn fbar_real(a: f64, b: f64, w: f64) -> f64 {
    let t = t0_at_saddle_real(a, b, w);
    let q = 1.0 - (1.0 - t) * w;
    b * (1.0 - t).ln() + (1.0 - b) * t.ln() + a * w.ln() - a * (1.0 - w).ln() + q.ln() * b
}

/// fbar(t0(w), w) for complex w off the real axis, principal logs.
fn fbar_complex(a: f64, b: f64, w: Complex64) -> Complex64 {
    let t = t0_at_saddle(a, b, w);
    let one = Complex64::new(1.0, 0.0);
    let q = one - (one - t) * w;
    b * (one - t).ln() + (1.0 - b) * t.ln() + a * w.ln() - a * (one - w).ln() + b * q.ln()
}

/// f(t0(w), w) for complex w in the upper half plane, principal logs
/// (equals fbar + a pi i there).
fn f_complex(a: f64, b: f64, w: Complex64) -> Complex64 {
    let t = t0_at_saddle(a, b, w);
    let one = Complex64::new(1.0, 0.0);
    let q = one - (one - t) * w;
    b * (one - t).ln() + (1.0 - b) * t.ln() + a * w.ln() - a * (w - one).ln() + b * q.ln()
}

/// ftilde(t0(w), w) for w < 0 real (the x < 0 phase), all-real logs.
fn ftilde_real(a: f64, b: f64, w: f64) -> f64 {
    let t = t0_at_saddle_real(a, b, w);
    let q = 1.0 - (1.0 - t) * w;
    b * (1.0 - t).ln() + (1.0 - b) * t.ln() + a * (-w).ln() - a * (1.0 - w).ln() + b * q.ln()
}

// ---------------------------------------------------------------------------
// Kummer constants
// ---------------------------------------------------------------------------

/// u-saddles for eta < -4a (real branch): u+- = (1 -+ r)/2, r = sqrt(1+4a/eta).
fn u_saddles_real(a: f64, eta: f64) -> (f64, f64) {
    let r = (1.0 + 4.0 * a / eta).max(0.0).sqrt();
    (0.5 * (1.0 - r), 0.5 * (1.0 + r))
}

/// psi(u) = a ln u - a ln(1-u) + eta u for u in (0,1) (edge term dropped; it
/// cancels against the matching edge term of f in gamma and the residual).
fn psi_real(a: f64, eta: f64, u: f64) -> f64 {
    if a == 0.0 {
        return eta * u;
    }
    a * u.ln() - a * (1.0 - u).ln() + eta * u
}

/// psi(u_minus) - psi(u_plus) = 2a ln(u_-/u_+) + eta sqrt(1 + 4a/eta).
fn psi_gap(a: f64, eta: f64) -> f64 {
    let r = (1.0 + 4.0 * a / eta).max(0.0).sqrt();
    if a == 0.0 {
        return eta * r;
    }
    2.0 * a * ((1.0 + r) / (1.0 - r)).ln() + eta * r
}

/// Saddle-value gap f(w_+) - f(w_-) as an all-real expression (the a pi i
/// edge terms cancel, and 1 - w_+ = w_- collapses the ln(w-1) pieces).
fn f_gap_real(a: f64, b: f64, w_p: f64, w_m: f64) -> f64 {
    let t_p = t0_at_saddle_real(a, b, w_p);
    let t_m = t0_at_saddle_real(a, b, w_m);
    let q_p = 1.0 - (1.0 - t_p) * w_p;
    let q_m = 1.0 - (1.0 - t_m) * w_m;
    let log_w = if a == 0.0 {
        0.0
    } else {
        2.0 * a * (w_p / w_m).ln()
    };
    b * ((1.0 - t_p) / (1.0 - t_m)).ln()
        + (1.0 - b) * (t_p / t_m).ln()
        + log_w
        + b * (q_p / q_m).ln()
}

/// Solve eta and gamma of the logarithmic mapping on the real-saddle side
/// (a/b^2 < 1/(4(1-a))). This is the small-b Kummer regime entry point; it
/// rejects the complex-saddle side.
pub fn solve_kummer_constants(a: f64, b: f64) -> Result<RegimeConstants> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!("need 0 < b < 1, got b={b}")));
    }
    if a < 0.0 {
        return Err(Error::Domain(format!(
            "Kummer constants need a >= 0, got a={a}"
        )));
    }
    if a > 0.0 && a / (b * b) >= 1.0 / (4.0 * (1.0 - a)) {
        return Err(Error::Domain(format!(
            "Kummer regime requires a/b^2 < 1/(4(1-a)); got a={a} b={b}"
        )));
    }
    if a == 0.0 {
        // closed forms from the w-saddle limit w_- -> 0, all a ln(.) -> 0
        let eta = -(1.0 + b) * (1.0 + b).ln() - (1.0 - b) * (1.0 - b).ln();
        let gamma = b * b.ln() + (1.0 - b) * (1.0 - b).ln();
        return Ok(RegimeConstants::Kummer { eta, gamma });
    }
    let (w_p, w_m, _d) = saddles_w_real(a, b).expect("real side checked");
    let target = f_gap_real(a, b, w_p, w_m);
    if target >= 0.0 {
        return Err(Error::Branch(format!(
            "saddle-value gap must be negative, got {target} at a={a} b={b}"
        )));
    }
    // psi_gap(eta) increases from -inf to 0 on (-inf, -4a]; bracket and bisect
    let mut hi = -4.0 * a;
    let mut lo = -4.0 * a - (b * b).max(8.0 * a).max(1e-8);
    let mut tries = 0;
    while psi_gap(a, lo) > target {
        lo = -4.0 * a + (lo + 4.0 * a) * 4.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::NoConvergence(format!(
                "Kummer eta bracket failed: lo={lo}, gap(lo)={}, target={target}",
                psi_gap(a, lo)
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if psi_gap(a, mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let eta = 0.5 * (lo + hi);
    let (u_p, _u_m) = u_saddles_real(a, eta);
    let gamma = fbar_real(a, b, w_m) - psi_real(a, eta, u_p);
    Ok(RegimeConstants::Kummer { eta, gamma })
}

/// psi(u) with complex u (principal logs), for the complex-saddle branch.
fn psi_complex(a: f64, eta: f64, u: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    a * u.ln() - a * (u - one).ln() + eta * u
}

/// Upper u-saddle for -4a < eta < 0: u_- = (1 + i sqrt(-(1+4a/eta)))/2.
fn u_minus_complex(a: f64, eta: f64) -> Complex64 {
    let rho = (-(1.0 + 4.0 * a / eta)).max(0.0).sqrt();
    Complex64::new(0.5, 0.5 * rho)
}

/// Solve eta and gamma of the same logarithmic mapping for the fixed-b
/// regime, covering both saddle configurations: real saddles when
/// b^2 > 4a(1-a) (same equations as the small-b solver) and the
/// complex-conjugate pair otherwise, where eta lies in (-4a, 0) and is fixed
/// by the imaginary part of the saddle value.
pub fn solve_kummer_constants_fixed_b(a: f64, b: f64) -> Result<RegimeConstants> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!("need 0 < b < 1, got b={b}")));
    }
    if a < 0.0 {
        return Err(Error::Domain(format!(
            "fixed-b Kummer constants need a >= 0, got a={a}"
        )));
    }
    let disc = b * b - 4.0 * a + 4.0 * a * a;
    if disc > 0.0 || a == 0.0 {
        return solve_kummer_constants(a, b);
    }
    if disc.abs() < 1e-12 {
        return Err(Error::Domain(format!(
            "saddles too close to coalescence for the fixed-b solve: a={a} b={b}"
        )));
    }
    let s = (-disc).sqrt() / (2.0 * b);
    let w_p = Complex64::new(0.5, s);
    let f_p = f_complex(a, b, w_p);
    // Im psi(u_-) increases from -a pi (eta -> -4a) to 0 (eta -> 0)
    let target = f_p.im;
    if !(target > -a * std::f64::consts::PI && target < 0.0) {
        return Err(Error::Branch(format!(
            "Im f(w_+) = {target} outside (-a pi, 0) at a={a} b={b}"
        )));
    }
    let mut lo = -4.0 * a * (1.0 - 1e-15);
    let mut hi = -4.0 * a * 1e-18;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if psi_complex(a, mid, u_minus_complex(a, mid)).im < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eta = 0.5 * (lo + hi);
    let u_m = u_minus_complex(a, eta);
    let gamma = (f_p - psi_complex(a, eta, u_m)).re;
    let resid = (f_p - psi_complex(a, eta, u_m) - gamma).norm();
    if resid > 1e-10 * (1.0 + f_p.norm()) {
        return Err(Error::NoConvergence(format!(
            "fixed-b eta solve residual {resid} at a={a} b={b}"
        )));
    }
    Ok(RegimeConstants::Kummer { eta, gamma })
}

/// Residual of the defining relation at the non-anchored saddle,
/// |f(w_+) - psi(u_-) - gamma|, for solver validation.
pub fn kummer_defining_residual(a: f64, b: f64, eta: f64, gamma: f64) -> f64 {
    let disc = b * b - 4.0 * a + 4.0 * a * a;
    if disc >= 0.0 {
        if a == 0.0 {
            // anchored identity only
            return 0.0;
        }
        let (w_p, _w_m, _) = saddles_w_real(a, b).expect("real side");
        let (_u_p, u_m) = u_saddles_real(a, eta);
        (fbar_real(a, b, w_p) - psi_real(a, eta, u_m) - gamma).abs()
    } else {
        let s = (-disc).sqrt() / (2.0 * b);
        let w_p = Complex64::new(0.5, s);
        (f_complex(a, b, w_p)
            - psi_complex(a, eta, u_minus_complex(a, eta))
            - Complex64::new(gamma, 0.0))
        .norm()
    }
}

// ---------------------------------------------------------------------------
// Airy constants
// ---------------------------------------------------------------------------

/// zeta and A of the cubic transformation: (4/3) zeta^{3/2} is the
/// saddle-value gap of fbar and A is the mean of the two saddle values.
/// No iteration is needed.
pub fn solve_airy_constants(a: f64, b: f64) -> Result<RegimeConstants> {
    if !(a > 0.0 && b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!(
            "Airy constants need a > 0 and 0 < b < 1, got a={a} b={b}"
        )));
    }
    let disc = b * b - 4.0 * a + 4.0 * a * a;
    let im_tol = 1e-10;
    if disc > 0.0 {
        let (w_p, w_m, _) = saddles_w_real(a, b).expect("real side");
        let f_p = fbar_real(a, b, w_p);
        let f_m = fbar_real(a, b, w_m);
        let gap = f_m - f_p;
        if gap < -im_tol {
            return Err(Error::Branch(format!(
                "negative saddle gap {gap} on the real side at a={a} b={b}"
            )));
        }
        let zeta = (0.75 * gap.max(0.0)).powf(2.0 / 3.0);
        Ok(RegimeConstants::Airy {
            zeta,
            a_const: 0.5 * (f_p + f_m),
        })
    } else {
        let s = (-disc).sqrt() / (2.0 * b);
        let w_p = Complex64::new(0.5, s);
        let f_p = fbar_complex(a, b, w_p);
        if f_p.im < -im_tol {
            return Err(Error::Branch(format!(
                "Im fbar(w_+) = {} negative on the complex side at a={a} b={b}",
                f_p.im
            )));
        }
        let zeta = -(1.5 * f_p.im.max(0.0)).powf(2.0 / 3.0);
        Ok(RegimeConstants::Airy {
            zeta,
            a_const: f_p.re,
        })
    }
}

/// Residuals of the two defining equations fbar(w+-) = -+(2/3) zeta^{3/2} + A
/// evaluated with principal powers; used by validation.
pub fn airy_defining_residual(a: f64, b: f64, zeta: f64, a_const: f64) -> f64 {
    let zc = Complex64::new(zeta, 0.0);
    let gap_half = 2.0 / 3.0 * zc.powf(1.5);
    let disc = b * b - 4.0 * a + 4.0 * a * a;
    if disc >= 0.0 {
        let (w_p, w_m, _) = match saddles_w_real(a, b) {
            Some(v) => v,
            None => (0.5, 0.5, 0.0),
        };
        let r1 = (Complex64::new(fbar_real(a, b, w_p), 0.0)
            - (Complex64::new(a_const, 0.0) - gap_half))
            .norm();
        let r2 = (Complex64::new(fbar_real(a, b, w_m), 0.0)
            - (Complex64::new(a_const, 0.0) + gap_half))
            .norm();
        r1.max(r2)
    } else {
        let s = (-disc).sqrt() / (2.0 * b);
        let w_p = Complex64::new(0.5, s);
        // zeta < 0: zeta^{3/2} = -i |zeta|^{3/2}, so A - (2/3) zeta^{3/2} has
        // positive imaginary part matching fbar(w_+)
        (fbar_complex(a, b, w_p) - (Complex64::new(a_const, 0.0) - gap_half)).norm()
    }
}

// ---------------------------------------------------------------------------
// Bessel constants
// ---------------------------------------------------------------------------

/// gamma - (b ln b - b), evaluated without cancellation; this is the part of
/// the exponent that survives after the prefactor grouping.
pub fn bessel_gamma_defect(b: f64) -> f64 {
    // gamma = 0.5 ln((1-b)/(1+b)) + b ln b - 0.5 b ln(1 - b^2)
    0.5 * ((-b).ln_1p() - b.ln_1p()) + b - 0.5 * b * (-b * b).ln_1p()
}

/// Closed-form m and gamma of the u - 1/u mapping.
pub fn bessel_constants(a: f64, b: f64) -> Result<RegimeConstants> {
    if !(b > 0.0 && b < 1.0 && a > 0.0 && a <= 0.5) {
        return Err(Error::Domain(format!(
            "Bessel constants need a in (0, 1/2] and b in (0,1), got a={a} b={b}"
        )));
    }
    let disc = 4.0 * a - 4.0 * a * a - b * b;
    if disc <= 0.0 {
        return Err(Error::Domain(format!(
            "Bessel constants need 4a(1-a) > b^2, got a={a} b={b}"
        )));
    }
    let s = disc.sqrt();
    let gamma = b * b.ln() - b + bessel_gamma_defect(b);
    let m = -0.5
        * ((1.0 - b) * f64::atan2(b * s, 2.0 - 2.0 * a - b * b)
            - a * f64::atan2(b * s, 2.0 * a - 2.0 * a * a - b * b)
            - 2.0 * b * f64::atan2(s, 2.0 + b - 2.0 * a));
    if !(m > 0.0) {
        return Err(Error::Branch(format!(
            "solved m = {m} not positive at a={a} b={b}"
        )));
    }
    Ok(RegimeConstants::Bessel { m, gamma })
}

// ---------------------------------------------------------------------------
// gamma-type constant for x < 0
// ---------------------------------------------------------------------------

/// gamma of the a ln(-u) - u mapping anchored at u(w_-) = a, for a < 0.
pub fn gamma_neg_constant(a: f64, b: f64) -> Result<RegimeConstants> {
    if !(a < 0.0 && b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!(
            "gamma_neg_constant needs a < 0 and 0 < b < 1, got a={a} b={b}"
        )));
    }
    let w_m = 0.5 - 0.5 * (1.0 - 4.0 * a * (1.0 - a) / (b * b)).sqrt();
    debug_assert!(w_m < 0.0);
    let gamma = ftilde_real(a, b, w_m) - (a * (-a).ln() - a);
    Ok(RegimeConstants::GammaNeg { gamma })
}

/// Residual of the anchored defining relation for validation:
/// ftilde(t0(w_-), w_-) - (a ln(-a) - a) - gamma.
pub fn gamma_neg_defining_residual(a: f64, b: f64, gamma: f64) -> f64 {
    let w_m = 0.5 - 0.5 * (1.0 - 4.0 * a * (1.0 - a) / (b * b)).sqrt();
    (ftilde_real(a, b, w_m) - (a * (-a).ln() - a) - gamma).abs()
}

/// Negative w-saddle for a < 0 (used by the gamma-type coefficient).
pub(crate) fn w_minus_neg(a: f64, b: f64) -> f64 {
    0.5 - 0.5 * (1.0 - 4.0 * a * (1.0 - a) / (b * b)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::PolyTriple;

    fn p(n: u64, x: i64, cap_n: u64) -> PolyTriple {
        PolyTriple::from_ints(n, x, cap_n).unwrap()
    }

    #[test]
    fn scaled_params_examples() {
        let s = scaled_params(&p(10, 50, 10000)).unwrap();
        assert_eq!((s.a, s.b, s.rho), (0.005, 0.001, 5000.0));
        // rho = x capN / n^2 exactly, and equals a/b^2 to machine precision
        let s = scaled_params(&p(100, 1, 10000)).unwrap();
        assert_eq!(s.rho, 1.0);
        assert!((s.rho - s.a / (s.b * s.b)).abs() <= 1e-15 * s.rho);
        let s = scaled_params(&p(100, 25, 10000)).unwrap();
        assert_eq!(s.rho, 25.0);
        assert!((s.rho - s.a / (s.b * s.b)).abs() <= 1e-13 * s.rho);
        assert!(scaled_params(&p(0, 3, 10)).is_err());
    }

    #[test]
    fn classify_examples() {
        let t = Thresholds::default();
        assert_eq!(classify(&p(10, 2500, 10000), &t), Regime::BesselSmallB);
        // rho = 5*10000/300^2 = 0.5556 lands in the Airy window with x below
        // x_hi, which the procedure routes to the exact evaluator
        assert_eq!(classify(&p(300, 5, 10000), &t), Regime::ExactFallback);
        // rho above rho_hi with bounded x is the plain-series regime
        assert_eq!(
            classify(&p(300, 5, 1_000_000), &t),
            Regime::SeriesAsymptotic
        );
        // rho below rho_lo with n^2/capN under eta_n_min is series as well
        assert_eq!(
            classify(&p(300, 0, 1_000_000), &t),
            Regime::SeriesAsymptotic
        );
        assert_eq!(classify(&p(400, 160, 10000), &t), Regime::AirySmallB);
        assert_eq!(classify(&p(0, 7, 100), &t), Regime::ExactFallback);
        assert_eq!(classify(&p(50, -3, 1000), &t), Regime::GammaNegSmallB);
        assert_eq!(classify(&p(500, -3, 1000), &t), Regime::ExactFallback);
        assert_eq!(classify(&p(500, 125, 1000), &t), Regime::KummerFixedB);
        // rho in window but x below x_hi
        assert_eq!(classify(&p(400, 5, 10000), &t), Regime::ExactFallback);
        // rho small, n^2/capN large
        assert_eq!(classify(&p(1000, 2, 10000), &t), Regime::KummerSmallB);
    }

    #[test]
    fn saddles_w_examples() {
        let (wp, wm) = saddles_w(0.0, 0.3);
        assert!((wp - 1.0).norm() < 1e-15 && wm.norm() < 1e-15);
        let (wp, wm) = saddles_w(0.25, 0.01);
        assert!((wp.re - 0.5).abs() < 1e-14 && wp.im > 0.0);
        assert!((wp + wm - 1.0).norm() < 1e-13);
        for &(a, b) in &[(0.1, 0.7), (0.3, 0.2), (0.45, 0.05)] {
            let (wp, wm) = saddles_w(a, b);
            assert!((wp + wm - 1.0).norm() < 1e-13, "sum rule at a={a} b={b}");
        }
    }

    #[test]
    fn saddle_t0_examples() {
        // w = 1, b = 0.2: (2 - 1 + 1)/2.4
        let t = saddle_t0(Complex64::new(1.0, 0.0), 0.2).unwrap();
        assert!((t.re - 1.0 / 1.2).abs() < 1e-15 && t.im.abs() < 1e-15);
        // t0(w_+) = t_+ of the closed form
        for &(a, b) in &[(0.01, 0.3), (0.2, 0.8), (0.002, 0.15)] {
            let (wp, _) = saddles_w(a, b);
            let d = (b * b - 4.0 * a + 4.0 * a * a).sqrt();
            let t_plus = (2.0 - 2.0 * a - b * b + b * d) / (2.0 * (1.0 - a) * (1.0 + b));
            let got = saddle_t0(wp, b).unwrap();
            assert!(
                (got.re - t_plus).abs() < 1e-12,
                "t0(w_+) vs t_+ at a={a} b={b}"
            );
            // also matches the saddle-collapsed form (w - a)/((1+b) w)
            let col = t0_at_saddle(a, b, wp);
            assert!((got - col).norm() < 1e-12);
        }
        // b -> 0 with w fixed: t0 = 1 - b + O(b^2)
        let b = 1e-3;
        let t = saddle_t0(Complex64::new(2.0, 0.0), b).unwrap();
        assert!((t.re - (1.0 - b)).abs() < 5.0 * b * b);
        assert!(saddle_t0(Complex64::new(0.0, 0.0), 0.3).is_err());
    }

    #[test]
    fn saddles_v_identities() {
        let (vp, vm) = saddles_v(0.25, 0.01).unwrap();
        let prod = vp * vm;
        let expect = 1e-4 / 0.1875;
        assert!((prod.re - expect).abs() / expect < 1e-12 && prod.im.abs() < 1e-18);
        // real part at a = 1/2
        let (vp, _) = saddles_v(0.5, 0.1).unwrap();
        assert!((vp.re - 0.02).abs() < 1e-15);
        assert!(saddles_v(0.001, 0.1).is_err());
    }

    #[test]
    fn kummer_eta_matches_lemma_limit() {
        // along a/b^2 = 0.01 the defect |eta + b^2|/b^2 decreases with b
        let mut prev = f64::INFINITY;
        for &b in &[0.1, 0.05, 0.02, 0.01] {
            let a = 0.01 * b * b;
            let RegimeConstants::Kummer { eta, gamma } = solve_kummer_constants(a, b).unwrap()
            else {
                panic!()
            };
            let defect = (eta + b * b).abs() / (b * b);
            assert!(defect < prev, "defect not decreasing at b={b}");
            prev = defect;
            let resid = kummer_defining_residual(a, b, eta, gamma);
            assert!(resid < 1e-12, "residual {resid} at b={b}");
        }
        assert!(prev < 0.2);
    }

    #[test]
    fn kummer_eta_defect_shrinks_with_ratio() {
        let b = 0.1;
        let d1 = {
            let RegimeConstants::Kummer { eta, .. } = solve_kummer_constants(1e-4, b).unwrap()
            else {
                panic!()
            };
            (eta + b * b).abs() / (b * b)
        };
        assert!(d1 < 0.1);
        let d2 = {
            let RegimeConstants::Kummer { eta, .. } = solve_kummer_constants(1e-6, b).unwrap()
            else {
                panic!()
            };
            (eta + b * b).abs() / (b * b)
        };
        assert!(d2 < d1);
    }

    #[test]
    fn kummer_rejects_complex_side() {
        assert!(solve_kummer_constants(0.25, 0.01).is_err());
    }

    #[test]
    fn kummer_zero_a_closed_form() {
        let b = 0.05;
        let RegimeConstants::Kummer { eta, .. } = solve_kummer_constants(0.0, b).unwrap() else {
            panic!()
        };
        // Lemma limit holds exactly at a = 0: eta = -b^2 + O(b^4)
        assert!((eta + b * b).abs() < 2.0 * b.powi(4));
    }

    #[test]
    fn fixed_b_solver_complex_side() {
        let (a, b) = (0.125, 0.5);
        let RegimeConstants::Kummer { eta, gamma } = solve_kummer_constants_fixed_b(a, b).unwrap()
        else {
            panic!()
        };
        assert!(eta < 0.0 && eta > -4.0 * a);
        let resid = kummer_defining_residual(a, b, eta, gamma);
        assert!(resid < 1e-12, "residual {resid}");
    }

    #[test]
    fn fixed_b_solver_agrees_on_real_side() {
        let (a, b) = (1e-4, 0.1);
        let r1 = solve_kummer_constants(a, b).unwrap();
        let r2 = solve_kummer_constants_fixed_b(a, b).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn airy_turning_point() {
        let a = 0.01_f64;
        let b = (4.0 * a * (1.0 - a)).sqrt();
        let RegimeConstants::Airy { zeta, .. } = solve_airy_constants(a, b).unwrap() else {
            panic!()
        };
        assert!(zeta.abs() < 1e-6, "zeta at coalescence: {zeta}");
        let RegimeConstants::Airy { zeta, .. } = solve_airy_constants(1e-4, 0.1).unwrap() else {
            panic!()
        };
        assert!(zeta > 0.0);
        let RegimeConstants::Airy { zeta, .. } = solve_airy_constants(0.25, 0.01).unwrap() else {
            panic!()
        };
        assert!(zeta < 0.0);
    }

    #[test]
    fn airy_sign_and_residual_random_grid() {
        // deterministic xorshift grid over the admissible parameter strip
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let a = 1e-4 + 0.45 * rnd();
            let b = 1e-3 + 0.5 * rnd();
            let Ok(RegimeConstants::Airy { zeta, a_const }) = solve_airy_constants(a, b) else {
                continue;
            };
            let disc = b * b - 4.0 * a * (1.0 - a);
            if disc.abs() > 1e-8 {
                assert_eq!(
                    zeta > 0.0,
                    disc > 0.0,
                    "zeta sign mismatch at a={a} b={b}: zeta={zeta}"
                );
            }
            let resid = airy_defining_residual(a, b, zeta, a_const);
            assert!(
                resid < 1e-12 * (1.0 + a_const.abs()),
                "residual {resid} at a={a} b={b}"
            );
        }
    }

    #[test]
    fn bessel_closed_forms() {
        let RegimeConstants::Bessel { m, gamma } = bessel_constants(0.25, 0.01).unwrap() else {
            panic!()
        };
        // two algebraic routes for gamma agree
        let naive = 0.5 * (0.99_f64 / 1.01).ln() + 0.5 * 0.01 * (1e-4_f64 / (1.0 - 1e-4)).ln();
        assert!((gamma - naive).abs() < 1e-14);
        assert!((gamma + 0.0560525).abs() < 1e-6);
        // m close to the b -> 0 limit b arctan sqrt(a/(1-a))
        let limit = 0.01 * (1.0_f64 / 3.0).sqrt().atan();
        assert!((m - limit).abs() / limit < 1e-2);
        assert!(m > 0.0);
        assert!(bessel_constants(0.25, 0.999).is_err());
    }

    #[test]
    fn bessel_m_limit_tightens() {
        let a = 0.25_f64;
        let limit = (a / (1.0 - a)).sqrt().atan();
        let RegimeConstants::Bessel { m, .. } = bessel_constants(a, 1e-3).unwrap() else {
            panic!()
        };
        assert!((m / 1e-3 - limit).abs() / limit < 1e-2);
    }

    #[test]
    fn bessel_gamma_small_b_law() {
        // |gamma - (b ln b - b)| / b^3 bounded by 10 across the small-b range
        let mut b = 1e-3;
        while b <= 0.1 {
            let d = bessel_gamma_defect(b);
            assert!(d.abs() / (b * b * b) < 10.0, "defect law at b={b}");
            b *= 1.3;
        }
    }

    #[test]
    fn gamma_neg_examples() {
        let RegimeConstants::GammaNeg { gamma } = gamma_neg_constant(-0.001, 0.05).unwrap() else {
            panic!()
        };
        assert!(gamma_neg_defining_residual(-0.001, 0.05, gamma) < 1e-12);
        for &(a, b) in &[(-0.01, 0.1), (-0.5, 0.3), (-3.0, 0.05)] {
            assert!(w_minus_neg(a, b) < 0.0);
            let RegimeConstants::GammaNeg { gamma } = gamma_neg_constant(a, b).unwrap() else {
                panic!()
            };
            assert!(gamma.is_finite());
        }
        assert!(gamma_neg_constant(0.1, 0.1).is_err());
    }

    #[test]
    fn thresholds_config() {
        let t = Thresholds::from_str_config("rho_lo = 0.1\n# comment\nb_hi=0.2\n").unwrap();
        assert_eq!(t.rho_lo, 0.1);
        assert_eq!(t.b_hi, 0.2);
        assert_eq!(t.rho_hi, Thresholds::default().rho_hi);
        assert!(Thresholds::from_str_config("bogus=1\n").is_err());
        assert!(Thresholds::from_str_config("rho_lo=30\n").is_err());
    }
}
