use thiserror::Error;

use crate::model::ParitySector;

/// Errors raised by the physics and numerics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsingError {
    #[error("invalid system size {n}: {reason}")]
    InvalidSize { n: usize, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate mode at g = {g}, k = {k}: dispersion vanishes")]
    DegenerateMode { g: f64, k: f64 },

    #[error("correlation length diverges at |g| = 1 (g = {0})")]
    CriticalDivergence(f64),

    #[error("ground-state parity is ambiguous for odd N = {0} at g = 0")]
    AmbiguousParity(usize),

    #[error("fields {g_lo} and {g_hi} select different ground-state sectors ({lo:?} vs {hi:?})")]
    ParityMismatch {
        g_lo: f64,
        g_hi: f64,
        lo: ParitySector,
        hi: ParitySector,
    },

    #[error(
        "quadrature did not converge: estimated error {achieved:e} exceeds tolerance {requested:e}"
    )]
    Quadrature { achieved: f64, requested: f64 },

    #[error("integration failed at t = {t}: step size {h:e} underflowed")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integration of mode k = {k} failed: {source}")]
    ModeIntegration {
        k: f64,
        #[source]
        source: Box<IsingError>,
    },

    #[error("degenerate fit input: {0}")]
    DegenerateFit(&'static str),

    #[error("no bracketing root found in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, IsingError>;
