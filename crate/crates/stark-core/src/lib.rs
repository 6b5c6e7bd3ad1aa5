//! Spectral analysis of the 1-D Dirac operator with a double point-well
//! potential, with and without a constant electric field.
//!
//! The library computes Weyl-Titchmarsh m-functions and trace spectral
//! densities for three potentials (free, double delta, double delta plus
//! linear field), locates the bound states of the field-free molecule, and
//! tracks the complex resonance poles of the field case as the interatomic
//! distance varies, classifying crossings and avoided crossings.
//!
//! Modules:
//!
//! * [`model`] — physical parameters and the point-well jump matrices.
//! * [`pcf`] — parabolic cylinder function U(a,z) for complex order and
//!   argument, in an overflow-safe scaled representation.
//! * [`zerofield`] — closed-form densities and bound states at F = 0.
//! * [`starkfield`] — field-case basis solutions, m-functions and density.
//! * [`poles`] — complex root finding and continuation in R.

pub mod model;
pub mod pcf;
pub mod poles;
pub mod starkfield;
pub mod zerofield;

pub use model::{JumpMatrix, ModelParams};

/// Library errors. Most numerical routines are total over their stated
/// domains; errors mark genuinely exceptional states (a pole hit exactly,
/// a solver that failed to converge) that callers may want to branch on.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Parameter outside its documented domain.
    InvalidParams(String),
    /// A denominator vanished because the requested energy sits exactly on
    /// a spectral pole (bound state or resonance).
    PoleAtEnergy { e: num_complex::Complex64 },
    /// An evaluation lost its accuracy contract (regime disagreement,
    /// ill-conditioned basis).
    AccuracyLoss(String),
    /// Root finder did not converge; carries the best iterate found.
    NoConvergence {
        best: num_complex::Complex64,
        residual: f64,
        iterations: u32,
    },
    /// A root escaped the configured search strip.
    OutOfStrip { e: num_complex::Complex64 },
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::PoleAtEnergy { e } => write!(f, "energy {e} sits on a spectral pole"),
            Error::AccuracyLoss(msg) => write!(f, "accuracy loss: {msg}"),
            Error::NoConvergence {
                best,
                residual,
                iterations,
            } => write!(
                f,
                "no convergence after {iterations} iterations (best {best}, residual {residual:.3e})"
            ),
            Error::OutOfStrip { e } => write!(f, "root escaped the search strip at {e}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
