//! Semi-Lagrangian solver for time-dependent first-order
//! Hamilton-Jacobi-Bellman equations
//!
//! The scheme marches `u^{n+1}_i = min over controls { R[u^n](foot) + cost }`
//! where the foot of the characteristic is traced backward with an explicit
//! Runge-Kutta method and `R` is a CWENO or CWENOZ reconstruction of the
//! previous time level. Works in one and two space dimensions on uniform
//! Cartesian grids.
//!
//! Modules:
//! - [`grid`]: grids, boundary policies, stencil gathering
//! - [`recon`]: CWENO/CWENOZ candidate fitting, oscillation indicators, blending
//! - [`characteristics`]: Runge-Kutta foot tracing and running-cost quadrature
//! - [`control`]: coarse tabulation + bounded Nelder-Mead over the control set
//! - [`solver`]: time marching, obstacle constraint, reachable sets
//! - [`problems`]: the five benchmark problems with exact solutions
//! - [`harness`]: run configuration, error/order metrics, CSV emission

// indexed loops mirror the matrix formulas; `!(x > 0)` rejects NaN inputs
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod characteristics;
pub mod control;
pub mod grid;
pub mod harness;
pub mod problems;
pub mod rational;
pub mod recon;
pub mod solver;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// A query point lies outside the closed domain hull (foot not clamped).
    FootNotClamped {
        point: [f64; 2],
    },
    /// The dynamics returned a non-finite value during foot tracing.
    DynamicsBlewUp {
        t: f64,
        x: [f64; 2],
        control: [f64; 2],
    },
    /// The minimization objective returned a non-finite value.
    NonFiniteObjective {
        control: Vec<[f64; 2]>,
    },
    /// Inconsistent configuration (grid, quadrature/tableau pairing, ...).
    Config(String),
    /// Unknown benchmark test id.
    InvalidTest(u32),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FootNotClamped { point } => {
                write!(
                    f,
                    "foot not clamped: point ({}, {}) outside domain",
                    point[0], point[1]
                )
            }
            Error::DynamicsBlewUp { t, x, control } => write!(
                f,
                "dynamics blew up at t={t}, x=({}, {}), control=({}, {})",
                x[0], x[1], control[0], control[1]
            ),
            Error::NonFiniteObjective { control } => {
                write!(f, "non-finite objective value at control {control:?}")
            }
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::InvalidTest(k) => write!(f, "invalid test id {k} (expected 1..=5)"),
            Error::Io(e) => write!(f, "io error: {e}"),
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
