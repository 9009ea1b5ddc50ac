//! Fractional time stepping.
//!
//! Forward problems `ᶜD^α x = f(t, x)`, `x(t0) = x0` are solved with the
//! fractional Adams-Bashforth-Moulton scheme in PECE form: a product-rectangle
//! predictor followed by a single product-trapezoidal corrector, `O(N²)` in
//! total with the history weights stored once.
//!
//! Adjoint problems `_tD_{tf}^α p = F(t, p)` with `p(tf)` prescribed are turned
//! into forward problems by the reversal `s = t0 + tf - t`. The reversed problem
//! is marched as the Volterra equation `q(s) = p(tf) + I^α F(q)(s)`, which pins
//! `p(tf)` at the terminal node and keeps components with zero right-hand side
//! constant at their terminal value.

use crate::error::{Error, Result};
use crate::grid::{FractionalOrder, GridFunction, TimeGrid};
use crate::special::{alpha_exponential, gamma_unchecked, ML_DEFAULT_TOL};

/// States whose Euclidean norm exceeds this abort the solve.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// Right-hand side of a fractional system, evaluated only at grid nodes.
///
/// The node index lets callers look up gridded data (controls, frozen
/// trajectories) without interpolating. Plain closures `Fn(t, x) -> dx`
/// implement this trait and ignore the index; wrap index-aware closures in
/// [`NodeField`].
pub trait VectorField {
    fn eval(&self, node: usize, t: f64, state: &[f64]) -> Vec<f64>;
}

impl<F> VectorField for F
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    fn eval(&self, _node: usize, t: f64, state: &[f64]) -> Vec<f64> {
        self(t, state)
    }
}

/// Adapter for closures `Fn(node, t, x) -> dx`.
pub struct NodeField<F>(pub F);

impl<F> VectorField for NodeField<F>
where
    F: Fn(usize, f64, &[f64]) -> Vec<f64>,
{
    fn eval(&self, node: usize, t: f64, state: &[f64]) -> Vec<f64> {
        (self.0)(node, t, state)
    }
}

/// Caputo initial-value problem `ᶜD^α x = rhs(t, x)`, `x(t0) = x0`.
pub struct IvpSpec<F> {
    pub rhs: F,
    pub x0: Vec<f64>,
    pub grid: TimeGrid,
    pub alpha: FractionalOrder,
}

/// Right-RL terminal-value problem `_tD_{tf}^α p = rhs(t, p)`, `p(tf) = p_terminal`.
pub struct AdjointSpec<F> {
    pub rhs: F,
    pub p_terminal: Vec<f64>,
    pub grid: TimeGrid,
    pub alpha: FractionalOrder,
}

struct AbmWeights {
    /// Predictor: `b_k = (k+1)^α - k^α`.
    rect: Vec<f64>,
    /// Corrector interior: `c_k = (k+1)^{α+1} - 2k^{α+1} + (k-1)^{α+1}`.
    trap: Vec<f64>,
    rect_scale: f64,
    trap_scale: f64,
    alpha: f64,
}

impl AbmWeights {
    fn new(alpha: f64, h: f64, n: usize) -> Self {
        let p = alpha + 1.0;
        let rect = (0..=n).map(|k| (k as f64 + 1.0).powf(alpha) - (k as f64).powf(alpha)).collect();
        let trap = (0..=n)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    let k = k as f64;
                    (k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).powf(p)
                }
            })
            .collect();
        Self {
            rect,
            trap,
            rect_scale: h.powf(alpha) / gamma_unchecked(alpha + 1.0),
            trap_scale: h.powf(alpha) / gamma_unchecked(alpha + 2.0),
            alpha,
        }
    }

    /// Weight of `f_0` in the corrector for step `n -> n + 1`.
    fn first(&self, n: usize) -> f64 {
        let n = n as f64;
        n.powf(self.alpha + 1.0) - (n - self.alpha) * (n + 1.0).powf(self.alpha)
    }
}

fn check_state(t: f64, x: &[f64]) -> Result<()> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !norm.is_finite() || norm > DIVERGENCE_LIMIT {
        return Err(Error::Divergence {
            t,
            norm,
            limit: DIVERGENCE_LIMIT,
        });
    }
    Ok(())
}

fn eval_checked<F: VectorField>(rhs: &F, node: usize, t: f64, x: &[f64]) -> Result<Vec<f64>> {
    let dx = rhs.eval(node, t, x);
    if dx.len() != x.len() {
        return Err(Error::InvalidInput(format!(
            "right-hand side returned {} components for a {}-dimensional state",
            dx.len(),
            x.len()
        )));
    }
    Ok(dx)
}

/// Core PECE march; `time_of(k)` and `node_of(k)` translate marching step `k`
/// into the physical time and node index handed to the field.
fn march<F: VectorField>(
    rhs: &F,
    x0: &[f64],
    grid: &TimeGrid,
    alpha: FractionalOrder,
    time_of: impl Fn(usize) -> f64,
    node_of: impl Fn(usize) -> usize,
) -> Result<Vec<f64>> {
    let d = x0.len();
    if d == 0 {
        return Err(Error::InvalidInput("initial state must be nonempty".into()));
    }
    if let Some(v) = x0.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("initial state has non-finite entry {v}")));
    }
    let n = grid.n_steps();
    let w = AbmWeights::new(alpha.value(), grid.step(), n);

    let mut x = vec![0.0; (n + 1) * d];
    let mut f = vec![0.0; (n + 1) * d];
    x[..d].copy_from_slice(x0);
    let f0 = eval_checked(rhs, node_of(0), time_of(0), x0)?;
    f[..d].copy_from_slice(&f0);

    let mut pred = vec![0.0; d];
    let mut hist = vec![0.0; d];
    for step in 0..n {
        // predictor and the known part of the corrector share one history pass
        pred.fill(0.0);
        let first = w.first(step);
        for i in 0..d {
            hist[i] = first * f[i];
        }
        for j in 0..=step {
            let fj = &f[j * d..(j + 1) * d];
            let b = w.rect[step - j];
            let c = if j == 0 { 0.0 } else { w.trap[step - j + 1] };
            for i in 0..d {
                pred[i] += b * fj[i];
                hist[i] += c * fj[i];
            }
        }
        for i in 0..d {
            pred[i] = x0[i] + w.rect_scale * pred[i];
        }
        let t_next = time_of(step + 1);
        check_state(t_next, &pred)?;
        let fp = eval_checked(rhs, node_of(step + 1), t_next, &pred)?;

        let next = step + 1;
        for i in 0..d {
            x[next * d + i] = x0[i] + w.trap_scale * (fp[i] + hist[i]);
        }
        check_state(t_next, &x[next * d..(next + 1) * d])?;
        let fx = eval_checked(rhs, node_of(next), t_next, &x[next * d..(next + 1) * d])?;
        f[next * d..(next + 1) * d].copy_from_slice(&fx);
    }
    Ok(x)
}

/// Solves `ᶜD^α x = rhs(t, x)` forward; `x(t0) = x0` exactly.
pub fn solve_caputo_ivp<F: VectorField>(spec: &IvpSpec<F>) -> Result<GridFunction> {
    let grid = spec.grid;
    let x = march(&spec.rhs, &spec.x0, &grid, spec.alpha, |k| grid.node(k), |k| k)?;
    GridFunction::new(grid, spec.x0.len(), x)
}

/// Solves the adjoint terminal-value problem backward from `p(tf)`.
///
/// The field sees original node indices and times. `p(tf) = p_terminal`
/// holds exactly at the last node.
pub fn solve_adjoint_backward<F: VectorField>(spec: &AdjointSpec<F>) -> Result<GridFunction> {
    let grid = spec.grid;
    let n = grid.n_steps();
    let q = march(
        &spec.rhs,
        &spec.p_terminal,
        &grid,
        spec.alpha,
        |k| grid.node(n - k),
        |k| n - k,
    )?;
    Ok(GridFunction::new(grid, spec.p_terminal.len(), q)?.reflect())
}

/// Scalar fractional transition `Φ_α(tau, t) = e_α(a, tau - t)` for `t < tau`.
///
/// At `t = tau` the kernel is singular unless `α = 1`, where `Φ = 1`.
pub fn linear_transition(alpha: FractionalOrder, a: f64, t: f64, tau: f64) -> Result<f64> {
    let lag = tau - t;
    if lag == 0.0 && alpha.is_integer() {
        return Ok(1.0);
    }
    if !(lag > 0.0) {
        return Err(Error::Domain(format!(
            "transition is propagated backward and needs t < tau (t = {t}, tau = {tau})"
        )));
    }
    alpha_exponential(alpha, a, lag, ML_DEFAULT_TOL)
}
