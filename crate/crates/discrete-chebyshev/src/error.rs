//! Error type shared across the crate.

use std::fmt;

/// Errors surfaced by evaluators, solvers and the harness.
#[derive(Debug)]
pub enum Error {
    /// Input violates a precondition (e.g. degree above the support size).
    DegenerateInput(String),
    /// Parameters outside the domain of a solver or closed form.
    Domain(String),
    /// A bracketed root search failed to converge; carries bracket diagnostics.
    NoConvergence(String),
    /// A square-root/log branch produced a non-negligible imaginary residue.
    Branch(String),
    /// Exact-oracle work would exceed the big-rational feasibility guard.
    Infeasible(String),
    /// The classified regime has no asymptotic evaluator (exact fallback).
    RegimeUnavailable(String),
    /// I/O failure while emitting records.
    Io(std::io::Error),
    /// Malformed input text (CLI arguments, config files, record files).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateInput(m) => write!(f, "degenerate input: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::NoConvergence(m) => write!(f, "no convergence: {m}"),
            Error::Branch(m) => write!(f, "branch error: {m}"),
            Error::Infeasible(m) => write!(f, "infeasible size: {m}"),
            Error::RegimeUnavailable(m) => write!(f, "regime unavailable: {m}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
