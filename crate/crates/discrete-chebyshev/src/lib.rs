//! Discrete Chebyshev polynomials t_n(x, N+1): exact big-rational evaluation
//! and leading-order uniform asymptotic approximation in every parameter
//! regime, with a harness that measures one against the other.
//!
//! The layers, bottom up:
//!
//! - [`signed_log`]: sign + ln|value| carrier for magnitudes far beyond f64.
//! - [`exact`]: the exact oracle (terminating series and Hahn recurrence).
//! - [`specfun`]: Airy, Bessel J0/J1, regularized Kummer, log-gamma kernels.
//! - [`regime`]: the classifier and the mapping-constant solvers.
//! - [`tau_integral`]: Laplace-weight averaging of the inner saddle slope.
//! - [`asymptotic`]: leading coefficients and the assembled approximations.
//! - [`harness`]: error records, sweeps, convergence orders, CSV/JSON.
//!
//! Everything is a pure function of its arguments; there is no shared
//! mutable state anywhere, so all entry points are safe to call
//! concurrently.
//!
//! ```
//! use discrete_chebyshev::asymptotic::approx_auto;
//! use discrete_chebyshev::exact::{eval_exact_series, to_signed_log, PolyTriple};
//! use discrete_chebyshev::regime::Thresholds;
//!
//! // exact: t_2(1, 4) = -6
//! let p = PolyTriple::from_ints(2, 1, 3).unwrap();
//! assert_eq!(eval_exact_series(&p).unwrap().value.to_string(), "-6");
//!
//! // asymptotic: a Bessel-regime point, accurate to a few parts in 10^3
//! let p = PolyTriple::from_ints(10, 2500, 10_000).unwrap();
//! let exact = to_signed_log(&eval_exact_series(&p).unwrap());
//! let approx = approx_auto(&p, &Thresholds::default(), 2).unwrap();
//! assert_eq!(approx.value.sign, exact.sign);
//! assert!((approx.value.log_abs - exact.log_abs).abs() < 5e-3);
//! ```

pub mod asymptotic;
pub mod error;
pub mod exact;
pub mod harness;
pub mod regime;
pub mod signed_log;
pub mod specfun;
pub mod tau_integral;
