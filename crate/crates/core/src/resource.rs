//! Closed-form resource-management example.
//!
//! Minimise `J(u) = -_0I_T^α (1 - u) x` subject to `ᶜD^α x = u x`,
//! `x(0) = x0 > 0`, `u(t) ∈ [0, 1]`, with `T > Γ(α+1)^{1/α}`.
//!
//! After Mayer reduction the state is `(y, x)` with `ᶜD^α y = (1 - u) x` and
//! the cost is `-y(T)`. The adjoint pair is `p₂ ≡ 1` and `p₁`, which on the
//! terminal arc `[t*, T]` (where `u* = 0`) equals `(T - t)^α / Γ(α+1)`. It
//! crosses 1 at the switching time `t* = T - Γ(α+1)^{1/α}`, so the optimal
//! control is bang-bang: 1 before `t*`, 0 after.
//!
//! Two of the closed forms are only exact for `α = 1`:
//!
//! * On `[0, t*)` the adjoint is given as `p₁(t) = e_α(1, t* - t)`, which blows
//!   up as `t → t*⁻` when `α < 1` and so cannot meet `p₁(t*) = 1`.
//! * On `[t*, T]` the state is given as the constant `x0 E_α((t*)^α)`. A Caputo
//!   state keeps the memory of `[0, t*]`, so for `α < 1` the true trajectory
//!   relaxes away from that value after `t*`.
//!
//! Both are exposed as stated; the numerical sweep does not depend on them.
//! The state formula uses growth rate `a = 1`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::FractionalOrder;
use crate::pmp::{ControlMap, ControlSet, ProblemSpec, RunningCost};
use crate::special::{alpha_exponential, gamma_unchecked, mittag_leffler, MLParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceParams {
    alpha: FractionalOrder,
    horizon: f64,
    x0: f64,
}

/// `Γ(α+1)^{1/α}`, the shortest horizon for which a switch exists.
pub fn min_horizon(alpha: FractionalOrder) -> f64 {
    let a = alpha.value();
    gamma_unchecked(a + 1.0).powf(1.0 / a)
}

impl ResourceParams {
    pub fn new(alpha: FractionalOrder, horizon: f64, x0: f64) -> Result<Self> {
        if !(x0.is_finite() && x0 > 0.0) {
            return Err(Error::Precondition(format!("initial resource x0 must be > 0, got {x0}")));
        }
        let bound = min_horizon(alpha);
        if !(horizon.is_finite() && horizon > bound) {
            return Err(Error::Precondition(format!(
                "horizon T = {horizon} must exceed Γ(α+1)^(1/α) = {bound} for alpha = {alpha}"
            )));
        }
        Ok(Self { alpha, horizon, x0 })
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }
}

/// `t* = T - Γ(α+1)^{1/α}`, always in `(0, T)`.
pub fn switch_time(params: &ResourceParams) -> f64 {
    params.horizon - min_horizon(params.alpha)
}

/// Bang-bang optimum: 1 on `[0, t*)`, 0 on `[t*, T]`.
pub fn analytic_control(params: &ResourceParams, t: f64) -> f64 {
    if t < switch_time(params) {
        1.0
    } else {
        0.0
    }
}

/// `x0 E_α(t^α)` up to `t*`, then held at `x0 E_α((t*)^α)`.
pub fn analytic_state(params: &ResourceParams, t: f64, tol: f64) -> Result<f64> {
    check_time(params, t)?;
    let a = params.alpha.value();
    let s = t.min(switch_time(params));
    let ml = MLParams::new(a, 1.0)?.with_tol(tol)?;
    Ok(params.x0 * mittag_leffler(&ml, s.powf(a))?)
}

/// `(T - t)^α / Γ(α+1)` on `[t*, T]`, `e_α(1, t* - t)` before `t*`.
pub fn analytic_adjoint_p1(params: &ResourceParams, t: f64) -> Result<f64> {
    check_time(params, t)?;
    let ts = switch_time(params);
    let a = params.alpha.value();
    if t >= ts {
        Ok((params.horizon - t).powf(a) / gamma_unchecked(a + 1.0))
    } else {
        alpha_exponential(params.alpha, 1.0, ts - t, crate::special::ML_DEFAULT_TOL)
    }
}

/// The multiplier of the accumulated-resource component, constant 1.
pub fn analytic_adjoint_p2(_params: &ResourceParams, _t: f64) -> f64 {
    1.0
}

fn check_time(params: &ResourceParams, t: f64) -> Result<()> {
    if !(0.0..=params.horizon).contains(&t) {
        return Err(Error::Domain(format!("t = {t} lies outside [0, {}]", params.horizon)));
    }
    Ok(())
}

/// Lagrange-form problem: running cost `-(1 - u) x`, dynamics `u x`, `Ω = [0, 1]`.
pub fn make_problem_spec(params: &ResourceParams) -> ProblemSpec {
    ProblemSpec {
        state_dim: 1,
        control_dim: 1,
        dynamics: Arc::new(|_, x, u| vec![u[0] * x[0]]),
        dynamics_jacobian_x: Arc::new(|_, _, u| vec![u[0]]),
        lagrangian: Some(RunningCost {
            integrand: Arc::new(|_, x, u| (1.0 - u[0]) * x[0]),
            gradient_x: Arc::new(|_, _, u| vec![1.0 - u[0]]),
            weight: -1.0,
        }),
        terminal_cost: None,
        control_set: ControlMap::Constant(
            ControlSet::interval(0.0, 1.0).expect("unit interval is a valid box"),
        ),
        x0: vec![params.x0],
        t0: 0.0,
        tf: params.horizon,
        alpha: params.alpha,
    }
}
