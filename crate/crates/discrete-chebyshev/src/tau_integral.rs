//! Laplace-weight averaging of the inner-saddle derivative dt/dtau.
//!
//! The leading coefficients of every small-b expansion are integrals of the
//! coefficient functions against the weight tau^n e^{-N tau} (normalized by
//! N^{n+1}/Gamma(n+1)). All tau-dependence sits in one factor, dt/dtau along
//! the mapped descent path, so each coefficient reduces to a tau-independent
//! prefactor times
//!
//! ```text
//! J = integral dt/dtau(tau) tau^n e^{-N tau} N^{n+1}/Gamma(n+1) dtau.
//! ```
//!
//! Evaluating dt/dtau at the weight peak tau = b instead (the closed-form
//! saddle value) leaves an O(1/n) bias. Here J is computed by Gauss-Legendre
//! quadrature: t(tau) is marched away from the saddle with RK4 on the
//! branch-free rational ODE
//!
//! ```text
//! dt/dtau = (tau - b) P(t) / (tau (1+b) Q(t)),
//! ```
//!
//! polished at each node by a local Newton step on the phase matching
//! f(t) - f(t_prev) = R(tau) - R(tau_prev), R(tau) = b ln(tau/b) - (tau - b),
//! which never crosses a log branch over one substep.

use crate::error::{Error, Result};
use crate::specfun::log_gamma;
use num_complex::Complex64;
use std::sync::OnceLock;

/// Which integral representation the t-saddle lives in.
#[derive(Clone, Copy, Debug)]
pub enum TauPlane {
    /// w-plane phase: f_t = b ln(1-t) + (1-b) ln t + b ln(1 - (1-t) w).
    W { w: Complex64 },
    /// v = 1/w phase: f_t = b ln(1-t) + (1-b) ln t + b ln(t + v - 1).
    V { v: Complex64 },
}

impl TauPlane {
    /// Both roots of the inner saddle equation; `.0` is the relevant one.
    fn t_roots(&self, b: f64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            TauPlane::W { w } => {
                let s = (one + 4.0 * b * b * (w - one) * w).sqrt();
                (
                    (2.0 * w - one + s) / (2.0 * (1.0 + b) * w),
                    (2.0 * w - one - s) / (2.0 * (1.0 + b) * w),
                )
            }
            TauPlane::V { v } => {
                let s = (4.0 * b * b * (one - v) + v * v).sqrt();
                (
                    (2.0 * one - v + s) / (2.0 * (1.0 + b)),
                    (2.0 * one - v - s) / (2.0 * (1.0 + b)),
                )
            }
        }
    }

    /// t-dependent part of the phase (principal logs; only differences over
    /// small steps are ever used).
    fn f_t(&self, b: f64, t: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            TauPlane::W { w } => {
                b * (one - t).ln() + (1.0 - b) * t.ln() + b * (one - (one - t) * w).ln()
            }
            TauPlane::V { v } => b * (one - t).ln() + (1.0 - b) * t.ln() + b * (t + v - one).ln(),
        }
    }

    /// dt/dtau away from tau = b, with the sign carried by the root
    /// configuration itself (no square root involved).
    fn dt_dtau(&self, b: f64, tau: f64, t: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let (t0p, t0m) = self.t_roots(b);
        match *self {
            TauPlane::W { w } => {
                (tau - b) * t * (one - t) * (one - (one - t) * w)
                    / (tau * (1.0 + b) * w * (t - t0p) * (t - t0m))
            }
            TauPlane::V { v } => {
                (tau - b) * t * (one - t) * (t + v - one)
                    / (tau * (1.0 + b) * (t - t0p) * (t - t0m))
            }
        }
    }

    /// Magnitude of dt/dtau at the saddle (positive root of the collapsed
    /// closed form); the descent slope is the negative root.
    fn saddle_slope(&self, b: f64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let (t0, _) = self.t_roots(b);
        match *self {
            TauPlane::W { w } => {
                let s = (one + 4.0 * b * b * (w - one) * w).sqrt();
                (t0 * (one - t0) * (one - (one - t0) * w) / (b * s)).sqrt()
            }
            TauPlane::V { v } => {
                let s = (4.0 * b * b * (one - v) + v * v).sqrt();
                (t0 * (one - t0) * (t0 + v - one) / (b * s)).sqrt()
            }
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre polynomial.
fn gauss_legendre_64() -> &'static [(f64, f64); 64] {
    static NODES: OnceLock<[(f64, f64); 64]> = OnceLock::new();
    NODES.get_or_init(|| {
        let m = 64usize;
        let mut out = [(0.0, 0.0); 64];
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0_f64, x);
                for k in 2..=m {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            out[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

/// Weighted average J of dt/dtau against tau^n e^{-N tau} N^{n+1}/Gamma(n+1),
/// sign-matched to the positive-root tau = b closed forms (so callers keep
/// the same calibration conventions): J -> +saddle_slope as n -> infinity.
pub fn laplace_weighted_dtdtau(plane: &TauPlane, b: f64, n: u64, cap_n: u64) -> Result<Complex64> {
    let nf = cap_n as f64;
    let nn = n as f64;
    let b_hat = (nn + 1.0) / nf;
    let sigma = (nn + 1.0).sqrt() / nf;
    let lo = (b_hat - 9.0 * sigma).max(0.015 * b_hat);
    let hi = b_hat + 9.0 * sigma;
    if !(lo < b && b < hi) {
        return Err(Error::Domain(format!(
            "weight peak left the integration window: b={b}, window [{lo}, {hi}]"
        )));
    }
    let lg = log_gamma(nn + 1.0).expect("n + 1 > 0");
    let log_weight = |tau: f64| nn * tau.ln() - nf * tau + (nn + 1.0) * nf.ln() - lg;

    let mut taus: Vec<(f64, f64)> = gauss_legendre_64()
        .iter()
        .map(|&(x, w)| (lo + (hi - lo) * 0.5 * (x + 1.0), w * 0.5 * (hi - lo)))
        .collect();
    taus.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite nodes"));
    let split = taus.partition_point(|p| p.0 < b);

    let (t0p, t0m) = plane.t_roots(b);
    let sep = (t0p - t0m).norm();
    // descent direction: t decreases through the saddle as tau increases
    let slope = -plane.saddle_slope(b);

    let r_of = |tau: f64| b * (tau / b).ln() - (tau - b);

    // March one side of tau = b in order, RK4 predictor + one local Newton
    // corrector per substep; accumulate the weighted stream at the nodes.
    let march = |nodes: &[(f64, f64)], acc: &mut Complex64| -> Result<()> {
        let mut tau_cur = b;
        let mut t_cur = t0p;
        let mut f_cur = plane.f_t(b, t_cur);
        for &(tau_node, w_node) in nodes {
            let dist = (tau_node - tau_cur).abs();
            let steps = (dist / (0.125 * sigma)).ceil().max(1.0) as usize;
            let h = (tau_node - tau_cur) / steps as f64;
            for _ in 0..steps {
                // seed the first step off the saddle with the linearization
                // (the ODE right side is 0/0 exactly at the saddle)
                let (k1, use_lin) = if (tau_cur - b).abs() < 1e-12 * b {
                    (slope, true)
                } else {
                    (plane.dt_dtau(b, tau_cur, t_cur), false)
                };
                let t_mid1 = t_cur + 0.5 * h * k1;
                let k2 = plane.dt_dtau(b, tau_cur + 0.5 * h, t_mid1);
                let k3 = plane.dt_dtau(b, tau_cur + 0.5 * h, t_cur + 0.5 * h * k2);
                let k4 = plane.dt_dtau(b, tau_cur + h, t_cur + h * k3);
                let mut t_next = if use_lin {
                    t_cur + h * slope
                } else {
                    t_cur + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                };
                let tau_next = tau_cur + h;
                // local Newton polish: match the phase increment over this
                // substep only (no branch can be crossed in one small step)
                let target = r_of(tau_next) - r_of(tau_cur) + f_cur;
                for _ in 0..4 {
                    let one = Complex64::new(1.0, 0.0);
                    let df = match *plane {
                        TauPlane::W { w } => {
                            -b / (one - t_next)
                                + (1.0 - b) / t_next
                                + b * w / (one - (one - t_next) * w)
                        }
                        TauPlane::V { v } => {
                            -b / (one - t_next) + (1.0 - b) / t_next + b / (t_next + v - one)
                        }
                    };
                    let g = plane.f_t(b, t_next) - target;
                    let step = g / df;
                    if !step.is_finite() {
                        return Err(Error::NoConvergence(
                            "tau march hit a singular phase".into(),
                        ));
                    }
                    t_next -= step;
                    if step.norm() < 1e-14 {
                        break;
                    }
                }
                if !t_next.is_finite() || (t_next - t0m).norm() < 0.02 * sep {
                    return Err(Error::NoConvergence(format!(
                        "tau march left the saddle basin near tau = {tau_next}"
                    )));
                }
                f_cur = plane.f_t(b, t_next);
                t_cur = t_next;
                tau_cur = tau_next;
            }
            *acc += w_node * log_weight(tau_node).exp() * plane.dt_dtau(b, tau_node, t_cur);
        }
        Ok(())
    };

    let mut acc = Complex64::new(0.0, 0.0);
    let upper: Vec<(f64, f64)> = taus[split..].to_vec();
    let lower: Vec<(f64, f64)> = taus[..split].iter().rev().cloned().collect();
    march(&upper, &mut acc)?;
    march(&lower, &mut acc)?;
    // the stream is built from the true (descent) slope, which is the
    // negative root; flip to the positive-root convention of the closed forms
    Ok(-acc)
}
