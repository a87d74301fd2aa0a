//! Reconstruction of piecewise-smooth periodic functions from finitely many
//! Fourier coefficients, with convergence order above one.
//!
//! The function is split as `f = Psi + Phi`: `Phi` is a sum of periodic
//! Bernoulli polynomials that carries every jump of `f` and of its first `d`
//! derivatives, `Psi` is smooth. Jumps are found roughly by a Prony step,
//! isolated by multiplying with smooth bumps (a convolution on the
//! coefficients), and each one is then resolved to high order from a handful
//! of coefficients by an algebraic elimination. Subtracting the recovered
//! `Phi` leaves a rapidly decaying series for `Psi`.
//!
//! Start with [`pipeline::reconstruct`] or, for a single jump,
//! [`eckhoff::locate_jump`] and [`eckhoff::solve_magnitudes`].

pub mod bump;
pub mod csvfmt;
pub mod dd;
pub mod eckhoff;
pub mod error;
pub mod laguerre;
pub mod linalg;
pub mod localize;
pub mod model;
pub mod oracles;
pub mod pipeline;
pub mod polyroot;
pub mod prony;
pub mod quad;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{Bounds, FourierWindow, Jump, SingularPart, SmoothPart, TestFunction};
