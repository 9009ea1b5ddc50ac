//! Fractional optimal control with Caputo dynamics and Riemann-Liouville costs.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`] evaluates Γ, the two-parameter Mittag-Leffler function and
//!   the α-exponential `e_α(a, t) = t^{α-1} E_{α,α}(a t^α)`.
//! * [`grid`] holds the uniform [`TimeGrid`], sampled [`GridFunction`]s and the
//!   validated [`FractionalOrder`].
//! * [`operators`] discretises the left RL integral (product trapezoid), the
//!   left Caputo derivative (L1) and the right RL derivative (by reflection),
//!   together with residual checks for the classical identities they satisfy.
//! * [`solver`] marches Caputo initial-value problems forward with the
//!   fractional Adams-Bashforth-Moulton scheme and adjoint terminal-value
//!   problems backward by time reversal.
//! * [`pmp`] models the control problem, its Mayer reduction, the Pontryagin
//!   function `H = pᵀf` and the forward-backward sweep.
//! * [`resource`] is the closed-form resource-management example used as an
//!   end-to-end oracle.
//! * [`validation`] bundles the property checks run by `focpc validate`.
//!
//! Only orders `0 < α ≤ 1` are supported.

pub mod error;
pub mod grid;
pub mod operators;
pub mod pmp;
pub mod resource;
pub mod solver;
pub mod special;
pub mod validation;

pub use error::{Error, Result};
pub use grid::{FractionalOrder, GridFunction, TimeGrid};
pub use pmp::{
    ControlMap, ControlSet, ProblemSpec, RunningCost, SweepOptions, SweepResult, TerminalCost,
};
pub use resource::ResourceParams;
pub use solver::{AdjointSpec, IvpSpec, NodeField, VectorField};
pub use special::MLParams;
