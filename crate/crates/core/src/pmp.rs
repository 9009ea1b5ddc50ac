//! Fractional optimal control problems and the forward-backward sweep.
//!
//! A problem in Lagrange form minimises `w · _{t0}I_{tf}^α L(t, x, u)` subject
//! to `ᶜD^α x = f(t, x, u)`, `x(t0) = x0`, `u(t) ∈ Ω(t)`. [`ProblemSpec::reduce_to_mayer`]
//! appends the accumulated cost `y` as a leading state component with
//! `ᶜD^α y = L`, `y(t0) = 0`, so that the cost becomes `g = w · y(tf)`.
//!
//! On the Mayer form the necessary conditions are
//!
//! * adjoint: `_tD_{tf}^α pᵀ = pᵀ D_x f(t, x*, u*)` (right RL derivative),
//! * transversality: `p(tf) = -∇g(x*(tf))`,
//! * maximum condition: `u*(t)` maximises `H = pᵀ f(t, x*, ·)` over `Ω(t)`.
//!
//! With the minus sign in the transversality condition, maximising `H`
//! decreases the cost. [`forward_backward_sweep`] iterates those three
//! conditions to a fixed point.
//!
//! The results rely on the usual standing assumptions (not checked): `g` is
//! C¹, `f` is C¹ and Lipschitz in `x`, continuous in `(t, u)`, `Ω` is compact
//! valued and `f(t, x, Ω(t))` is bounded.

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use log::debug;

use crate::error::{Error, Result};
use crate::grid::{FractionalOrder, GridFunction, TimeGrid};
use crate::operators::rl_integral_series;
use crate::solver::{solve_adjoint_backward, solve_caputo_ivp, AdjointSpec, IvpSpec, NodeField};

/// `(t, x, u) -> f(t, x, u)`.
pub type DynamicsFn = Arc<dyn Fn(f64, &[f64], &[f64]) -> Vec<f64> + Send + Sync>;
/// `(t, x, u) -> D_x f`, row-major: entry `[i * d + j]` is `∂f_i/∂x_j`.
pub type JacobianFn = Arc<dyn Fn(f64, &[f64], &[f64]) -> Vec<f64> + Send + Sync>;
/// `(t, x, u) -> scalar`.
pub type ScalarFn = Arc<dyn Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync>;
/// `(t, x, u) -> ∇_x` of a scalar.
pub type GradientFn = Arc<dyn Fn(f64, &[f64], &[f64]) -> Vec<f64> + Send + Sync>;
/// `x -> g(x)`.
pub type TerminalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// `x -> ∇g(x)`.
pub type TerminalGradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Running cost `weight · L(t, x, u)`, integrated with the RL integral of order α.
#[derive(Clone)]
pub struct RunningCost {
    pub integrand: ScalarFn,
    pub gradient_x: GradientFn,
    pub weight: f64,
}

/// Terminal cost `g(x(tf))` with its gradient.
#[derive(Clone)]
pub struct TerminalCost {
    pub value: TerminalFn,
    pub gradient: TerminalGradientFn,
}

/// Admissible control values at one instant.
#[derive(Debug, Clone, PartialEq)]
pub enum ControlSet {
    /// Componentwise box `[lower, upper]`. The Hamiltonian is assumed affine
    /// in the control, so only the vertices are searched.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Explicit candidate list, kept sorted lexicographically.
    Finite(Vec<Vec<f64>>),
}

impl ControlSet {
    pub fn interval(lower: f64, upper: f64) -> Result<Self> {
        Self::boxed(vec![lower], vec![upper])
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidInput("box bounds must be nonempty and of equal length".into()));
        }
        if lower.iter().chain(&upper).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("box bounds must be finite".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidInput("box lower bound exceeds upper bound".into()));
        }
        Ok(Self::Box { lower, upper })
    }

    pub fn finite(mut candidates: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = candidates.first() else {
            return Err(Error::InvalidInput("finite control set is empty".into()));
        };
        let m = first.len();
        if m == 0 || candidates.iter().any(|c| c.len() != m) {
            return Err(Error::InvalidInput("control candidates must share a positive length".into()));
        }
        if candidates.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("control candidates must be finite".into()));
        }
        candidates.sort_by(|a, b| lex_cmp(a, b));
        candidates.dedup();
        Ok(Self::Finite(candidates))
    }

    /// `n` equally spaced values per axis of a box, for Hamiltonians that are
    /// not affine in the control.
    pub fn box_samples(lower: &[f64], upper: &[f64], n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("need at least 2 samples per axis".into()));
        }
        let axes: Vec<Vec<f64>> = lower
            .iter()
            .zip(upper)
            .map(|(l, u)| (0..n).map(|i| l + (u - l) * i as f64 / (n - 1) as f64).collect())
            .collect();
        Self::finite(cartesian(&axes))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Box { lower, .. } => lower.len(),
            Self::Finite(c) => c[0].len(),
        }
    }

    /// Candidates scanned by the maximiser, in ascending lexicographic order.
    pub fn candidates(&self) -> Vec<Vec<f64>> {
        match self {
            Self::Box { lower, upper } => {
                let axes: Vec<Vec<f64>> = lower
                    .iter()
                    .zip(upper)
                    .map(|(&l, &u)| if l == u { vec![l] } else { vec![l, u] })
                    .collect();
                cartesian(&axes)
            }
            Self::Finite(c) => c.clone(),
        }
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        match self {
            Self::Box { lower, upper } => {
                u.len() == lower.len()
                    && u.iter().zip(lower.iter().zip(upper)).all(|(v, (l, h))| *l <= *v && *v <= *h)
            }
            Self::Finite(c) => c.iter().any(|cand| cand.as_slice() == u),
        }
    }

    /// Nearest admissible point; clamping for boxes, nearest candidate (first
    /// on ties) for finite sets.
    pub fn project(&self, u: &[f64]) -> Vec<f64> {
        match self {
            Self::Box { lower, upper } => {
                u.iter().zip(lower.iter().zip(upper)).map(|(v, (l, h))| v.clamp(*l, *h)).collect()
            }
            Self::Finite(c) => {
                let mut best = &c[0];
                let mut best_d = f64::INFINITY;
                for cand in c {
                    let d: f64 = cand.iter().zip(u).map(|(a, b)| (a - b) * (a - b)).sum();
                    if d < best_d {
                        best_d = d;
                        best = cand;
                    }
                }
                best.clone()
            }
        }
    }

    /// Default starting control: box midpoint or first candidate.
    pub fn initial_guess(&self) -> Vec<f64> {
        match self {
            Self::Box { lower, upper } => lower.iter().zip(upper).map(|(l, u)| 0.5 * (l + u)).collect(),
            Self::Finite(c) => c[0].clone(),
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    out
}

/// `Ω(t)`: either fixed or supplied per time.
#[derive(Clone)]
pub enum ControlMap {
    Constant(ControlSet),
    TimeVarying(Arc<dyn Fn(f64) -> ControlSet + Send + Sync>),
}

impl ControlMap {
    pub fn at(&self, t: f64) -> Cow<'_, ControlSet> {
        match self {
            Self::Constant(s) => Cow::Borrowed(s),
            Self::TimeVarying(f) => Cow::Owned(f(t)),
        }
    }
}

impl fmt::Debug for ControlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(s) => f.debug_tuple("Constant").field(s).finish(),
            Self::TimeVarying(_) => f.write_str("TimeVarying(..)"),
        }
    }
}

/// Complete description of a fractional optimal control problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub state_dim: usize,
    pub control_dim: usize,
    pub dynamics: DynamicsFn,
    pub dynamics_jacobian_x: JacobianFn,
    pub lagrangian: Option<RunningCost>,
    pub terminal_cost: Option<TerminalCost>,
    pub control_set: ControlMap,
    pub x0: Vec<f64>,
    pub t0: f64,
    pub tf: f64,
    pub alpha: FractionalOrder,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("state_dim", &self.state_dim)
            .field("control_dim", &self.control_dim)
            .field("has_lagrangian", &self.lagrangian.is_some())
            .field("has_terminal_cost", &self.terminal_cost.is_some())
            .field("control_set", &self.control_set)
            .field("x0", &self.x0)
            .field("t0", &self.t0)
            .field("tf", &self.tf)
            .field("alpha", &self.alpha)
            .finish()
    }
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        if self.state_dim == 0 || self.control_dim == 0 {
            return Err(Error::InvalidInput("state and control dimensions must be positive".into()));
        }
        if self.x0.len() != self.state_dim {
            return Err(Error::InvalidInput(format!(
                "x0 has {} entries, state_dim is {}",
                self.x0.len(),
                self.state_dim
            )));
        }
        if self.x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("x0 must be finite".into()));
        }
        if !(self.t0.is_finite() && self.tf.is_finite() && self.tf > self.t0) {
            return Err(Error::InvalidInput(format!("horizon [{}, {}] is empty", self.t0, self.tf)));
        }
        if self.lagrangian.is_none() && self.terminal_cost.is_none() {
            return Err(Error::InvalidInput("problem has neither running nor terminal cost".into()));
        }
        if let ControlMap::Constant(set) = &self.control_set {
            if set.dim() != self.control_dim {
                return Err(Error::InvalidInput(format!(
                    "control set has dimension {}, control_dim is {}",
                    set.dim(),
                    self.control_dim
                )));
            }
        }
        Ok(())
    }

    /// Terminal cost only.
    pub fn is_mayer(&self) -> bool {
        self.lagrangian.is_none() && self.terminal_cost.is_some()
    }

    /// Augments the state with the accumulated running cost.
    ///
    /// The new state is `col(y, x)` with `y(t0) = 0`, the dynamics are
    /// `col(L, f)` and the terminal cost is `weight · y(tf)` plus any existing
    /// terminal cost of `x`. `self` is left untouched.
    pub fn reduce_to_mayer(&self) -> Result<ProblemSpec> {
        self.validate()?;
        let Some(running) = self.lagrangian.clone() else {
            return Err(Error::InvalidInput("Mayer reduction needs a running cost".into()));
        };
        let d = self.state_dim;
        let n = d + 1;

        let f = self.dynamics.clone();
        let l = running.integrand.clone();
        let dynamics: DynamicsFn = Arc::new(move |t, z, u| {
            let x = &z[1..];
            let mut out = Vec::with_capacity(n);
            out.push(l(t, x, u));
            out.extend(f(t, x, u));
            out
        });

        let jac = self.dynamics_jacobian_x.clone();
        let grad_l = running.gradient_x.clone();
        let dynamics_jacobian_x: JacobianFn = Arc::new(move |t, z, u| {
            let x = &z[1..];
            let inner = jac(t, x, u);
            let gl = grad_l(t, x, u);
            let mut out = vec![0.0; n * n];
            out[1..n].copy_from_slice(&gl);
            for i in 0..d {
                out[(i + 1) * n + 1..(i + 2) * n].copy_from_slice(&inner[i * d..(i + 1) * d]);
            }
            out
        });

        let w = running.weight;
        let existing = self.terminal_cost.clone();
        let terminal_cost = match existing {
            None => TerminalCost {
                value: Arc::new(move |z| w * z[0]),
                gradient: Arc::new(move |z| {
                    let mut g = vec![0.0; z.len()];
                    g[0] = w;
                    g
                }),
            },
            Some(tc) => {
                let (v, gr) = (tc.value.clone(), tc.gradient.clone());
                TerminalCost {
                    value: Arc::new(move |z| w * z[0] + v(&z[1..])),
                    gradient: Arc::new(move |z| {
                        let mut g = Vec::with_capacity(z.len());
                        g.push(w);
                        g.extend(gr(&z[1..]));
                        g
                    }),
                }
            }
        };

        let mut x0 = Vec::with_capacity(n);
        x0.push(0.0);
        x0.extend_from_slice(&self.x0);

        Ok(ProblemSpec {
            state_dim: n,
            control_dim: self.control_dim,
            dynamics,
            dynamics_jacobian_x,
            lagrangian: None,
            terminal_cost: Some(terminal_cost),
            control_set: self.control_set.clone(),
            x0,
            t0: self.t0,
            tf: self.tf,
            alpha: self.alpha,
        })
    }

    /// A grid on this problem's horizon.
    pub fn grid(&self, n_steps: usize) -> Result<TimeGrid> {
        TimeGrid::new(self.t0, self.tf, n_steps)
    }
}

/// Pontryagin function `H(t, x, p, u) = pᵀ f(t, x, u)`.
pub fn hamiltonian(spec: &ProblemSpec, t: f64, x: &[f64], p: &[f64], u: &[f64]) -> f64 {
    (spec.dynamics)(t, x, u).iter().zip(p).map(|(f, p)| f * p).sum()
}

/// Maximiser of `u ↦ H(t, x, p, u)` over `Ω(t)`.
///
/// Candidates are scanned in ascending lexicographic order and only a strictly
/// larger value replaces the incumbent, so ties go to the smallest control.
pub fn maximize_hamiltonian(spec: &ProblemSpec, t: f64, x: &[f64], p: &[f64]) -> Vec<f64> {
    let set = spec.control_set.at(t);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for cand in set.candidates() {
        let h = hamiltonian(spec, t, x, p, &cand);
        match &best {
            Some((bh, _)) if h <= *bh => {}
            _ => best = Some((h, cand)),
        }
    }
    best.expect("control sets are nonempty").1
}

/// Tuning of the forward-backward sweep.
#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub max_iters: usize,
    /// Stop once the sup-norm control change falls below this.
    pub tol: f64,
    /// `u ← θ u_old + (1 - θ) u_new`, with `θ ∈ [0, 1)`.
    pub relaxation: f64,
    /// Starting control; defaults to [`ControlSet::initial_guess`] at every node.
    pub initial_control: Option<GridFunction>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            max_iters: 500,
            tol: 1e-6,
            relaxation: 0.5,
            initial_control: None,
        }
    }
}

/// Outcome of a sweep. `state` and `adjoint` are recomputed for the final `control`.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub control: GridFunction,
    pub state: GridFunction,
    pub adjoint: GridFunction,
    /// `g(x(tf))`.
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Sup-norm control change of the last iteration.
    pub control_change_norm: f64,
    /// Control change of every iteration, in order.
    pub change_history: Vec<f64>,
}

impl SweepResult {
    /// First node whose first control component drops below `threshold`.
    pub fn first_node_below(&self, threshold: f64) -> Option<usize> {
        (0..self.control.n_nodes()).find(|&k| self.control.node(k)[0] < threshold)
    }
}

fn solve_state(spec: &ProblemSpec, grid: TimeGrid, control: &GridFunction) -> Result<GridFunction> {
    let ivp = IvpSpec {
        rhs: NodeField(|k: usize, t: f64, x: &[f64]| (spec.dynamics)(t, x, control.node(k))),
        x0: spec.x0.clone(),
        grid,
        alpha: spec.alpha,
    };
    solve_caputo_ivp(&ivp)
}

fn solve_costate(
    spec: &ProblemSpec,
    grid: TimeGrid,
    state: &GridFunction,
    control: &GridFunction,
    terminal: &TerminalCost,
) -> Result<GridFunction> {
    let d = spec.state_dim;
    let x_final = state.node(grid.n_steps());
    let p_terminal: Vec<f64> = (terminal.gradient)(x_final).into_iter().map(|g| -g).collect();
    let adj = AdjointSpec {
        rhs: NodeField(|k: usize, t: f64, p: &[f64]| {
            let jac = (spec.dynamics_jacobian_x)(t, state.node(k), control.node(k));
            // row vector pᵀ J
            (0..d).map(|j| (0..d).map(|i| p[i] * jac[i * d + j]).sum()).collect()
        }),
        p_terminal,
        grid,
        alpha: spec.alpha,
    };
    solve_adjoint_backward(&adj)
}

fn maximize_on_grid(spec: &ProblemSpec, grid: &TimeGrid, state: &GridFunction, adjoint: &GridFunction) -> GridFunction {
    let m = spec.control_dim;
    let mut values = Vec::with_capacity(grid.n_nodes() * m);
    for (k, t) in grid.nodes().enumerate() {
        values.extend(maximize_hamiltonian(spec, t, state.node(k), adjoint.node(k)));
    }
    GridFunction::from_raw(*grid, m, values)
}

/// Forward-backward sweep on a Mayer-form problem.
///
/// Each iteration solves the state forward under the current control, the
/// adjoint backward from `p(tf) = -∇g(x(tf))`, maximises `H` at every node and
/// relaxes the control towards the maximiser. On convergence the pure
/// maximiser is adopted and state and adjoint are re-solved for it, so the
/// returned triple satisfies the maximum condition node by node.
///
/// Running out of iterations is not an error: the last iterate comes back with
/// `converged = false`.
pub fn forward_backward_sweep(spec: &ProblemSpec, grid: TimeGrid, opts: &SweepOptions) -> Result<SweepResult> {
    spec.validate()?;
    let Some(terminal) = spec.terminal_cost.clone().filter(|_| spec.is_mayer()) else {
        return Err(Error::InvalidInput(
            "the sweep runs on the Mayer form; call reduce_to_mayer first".into(),
        ));
    };
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!("sweep tolerance must be positive, got {}", opts.tol)));
    }
    if !(0.0..1.0).contains(&opts.relaxation) {
        return Err(Error::InvalidInput(format!(
            "relaxation must lie in [0, 1), got {}",
            opts.relaxation
        )));
    }
    if (grid.t0() - spec.t0).abs() > 1e-12 || (grid.tf() - spec.tf).abs() > 1e-12 {
        return Err(Error::InvalidInput("grid does not span the problem horizon".into()));
    }
    let m = spec.control_dim;

    let mut control = match &opts.initial_control {
        Some(u) => {
            if u.grid() != &grid || u.dim() != m {
                return Err(Error::InvalidInput("initial control does not match grid or control_dim".into()));
            }
            u.clone()
        }
        None => {
            let mut values = Vec::with_capacity(grid.n_nodes() * m);
            for t in grid.nodes() {
                values.extend(spec.control_set.at(t).initial_guess());
            }
            GridFunction::new(grid, m, values)?
        }
    };

    let theta = opts.relaxation;
    let mut history = Vec::new();
    let mut converged = false;
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        let state = solve_state(spec, grid, &control)?;
        let adjoint = solve_costate(spec, grid, &state, &control, &terminal)?;
        let target = maximize_on_grid(spec, &grid, &state, &adjoint);

        let mut next = Vec::with_capacity(grid.n_nodes() * m);
        for (k, t) in grid.nodes().enumerate() {
            let blended: Vec<f64> = control
                .node(k)
                .iter()
                .zip(target.node(k))
                .map(|(old, new)| theta * old + (1.0 - theta) * new)
                .collect();
            next.extend(spec.control_set.at(t).project(&blended));
        }
        let next = GridFunction::new(grid, m, next)?;
        change = next.sup_distance(&control)?;
        history.push(change);
        debug!("sweep iteration {iterations}: control change {change:.3e}");

        if change < opts.tol {
            control = target;
            converged = true;
            break;
        }
        control = next;
    }

    let state = solve_state(spec, grid, &control)?;
    let adjoint = solve_costate(spec, grid, &state, &control, &terminal)?;
    let cost = (terminal.value)(state.node(grid.n_steps()));
    Ok(SweepResult {
        control,
        state,
        adjoint,
        cost,
        iterations,
        converged,
        control_change_norm: change,
        change_history: history,
    })
}

/// Lagrange-form cost `weight · _{t0}I_{tf}^α L(t, x, u)`, plus any terminal cost.
pub fn evaluate_cost(spec: &ProblemSpec, x: &GridFunction, u: &GridFunction) -> Result<f64> {
    let Some(running) = &spec.lagrangian else {
        return Err(Error::InvalidInput("evaluate_cost needs a running cost".into()));
    };
    if x.grid() != u.grid() {
        return Err(Error::InvalidInput("state and control live on different grids".into()));
    }
    if x.dim() != spec.state_dim || u.dim() != spec.control_dim {
        return Err(Error::InvalidInput("state or control dimension does not match the problem".into()));
    }
    let grid = x.grid();
    let integrand: Vec<f64> = grid
        .nodes()
        .enumerate()
        .map(|(k, t)| (running.integrand)(t, x.node(k), u.node(k)))
        .collect();
    let n = grid.n_steps();
    let integral = rl_integral_series(&integrand, grid.step(), spec.alpha.value())[n];
    let terminal = spec
        .terminal_cost
        .as_ref()
        .map_or(0.0, |tc| (tc.value)(x.node(n)));
    Ok(running.weight * integral + terminal)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `ᶜD^α x = u`, `L = u²`, box `[-1, 1]`.
    fn quadratic_problem(alpha: f64) -> ProblemSpec {
        ProblemSpec {
            state_dim: 1,
            control_dim: 1,
            dynamics: Arc::new(|_, _, u| vec![u[0]]),
            dynamics_jacobian_x: Arc::new(|_, _, _| vec![0.0]),
            lagrangian: Some(RunningCost {
                integrand: Arc::new(|_, _, u| u[0] * u[0]),
                gradient_x: Arc::new(|_, _, _| vec![0.0]),
                weight: 1.0,
            }),
            terminal_cost: Some(TerminalCost {
                value: Arc::new(|x| 0.5 * x[0] * x[0]),
                gradient: Arc::new(|x| vec![x[0]]),
            }),
            control_set: ControlMap::Constant(ControlSet::interval(-1.0, 1.0).unwrap()),
            x0: vec![2.0],
            t0: 0.0,
            tf: 1.0,
            alpha: FractionalOrder::new(alpha).unwrap(),
        }
    }

    #[test]
    fn control_set_construction() {
        assert!(ControlSet::interval(1.0, 0.0).is_err());
        assert!(ControlSet::finite(vec![]).is_err());
        assert!(ControlSet::finite(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        let s = ControlSet::finite(vec![vec![2.0], vec![-1.0], vec![2.0]]).unwrap();
        assert_eq!(s, ControlSet::Finite(vec![vec![-1.0], vec![2.0]]));
        assert_eq!(s.project(&[0.5]), vec![-1.0]);
        assert_eq!(s.project(&[1.9]), vec![2.0]);
        let b = ControlSet::boxed(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(b.candidates().len(), 4);
        assert_eq!(b.candidates()[0], vec![0.0, -1.0]);
        assert_eq!(b.project(&[2.0, -3.0]), vec![1.0, -1.0]);
        assert!(b.contains(&[0.5, 0.0]));
        assert!(!b.contains(&[1.5, 0.0]));
        let g = ControlSet::box_samples(&[0.0], &[1.0], 5).unwrap();
        assert_eq!(g.candidates().len(), 5);
    }

    #[test]
    fn reduction_shape() {
        let p = quadratic_problem(1.0);
        let r = p.reduce_to_mayer().unwrap();
        assert_eq!(r.state_dim, 2);
        assert_eq!(r.x0, vec![0.0, 2.0]);
        assert!(r.is_mayer());
        assert_eq!((r.dynamics)(0.0, &[5.0, 1.0], &[0.5]), vec![0.25, 0.5]);
        let tc = r.terminal_cost.as_ref().unwrap();
        // y + x²/2
        assert_eq!((tc.value)(&[3.0, 2.0]), 5.0);
        assert_eq!((tc.gradient)(&[3.0, 2.0]), vec![1.0, 2.0]);
        // original untouched
        assert_eq!(p.state_dim, 1);
        assert!(p.lagrangian.is_some());
        assert!(r.reduce_to_mayer().is_err());
    }

    #[test]
    fn bolza_reduction_matches_classical_cost() {
        // α = 1: y(1) + x(1)²/2 must equal ∫u² + x(1)²/2 for any fixed control
        let p = quadratic_problem(1.0);
        let r = p.reduce_to_mayer().unwrap();
        let grid = p.grid(400).unwrap();
        let u = GridFunction::from_fn(grid, |t| (3.0 * t).sin() * 0.8).unwrap();
        let aug = solve_state(&r, grid, &u).unwrap();
        let x = GridFunction::from_components(grid, &[aug.component(1)]).unwrap();
        let direct = evaluate_cost(&p, &x, &u).unwrap();
        let mayer = (r.terminal_cost.as_ref().unwrap().value)(aug.node(400));
        assert!((direct - mayer).abs() < 1e-4);
    }

    #[test]
    fn zero_lagrangian_gives_zero_cost() {
        let mut p = quadratic_problem(0.6);
        p.lagrangian = Some(RunningCost {
            integrand: Arc::new(|_, _, _| 0.0),
            gradient_x: Arc::new(|_, _, _| vec![0.0]),
            weight: 1.0,
        });
        p.terminal_cost = None;
        let r = p.reduce_to_mayer().unwrap();
        let grid = p.grid(100).unwrap();
        let u = GridFunction::from_fn(grid, |t| t - 0.5).unwrap();
        let aug = solve_state(&r, grid, &u).unwrap();
        assert!(aug.component(0).iter().all(|&y| y == 0.0));
        assert_eq!((r.terminal_cost.as_ref().unwrap().value)(aug.node(100)), 0.0);
    }

    #[test]
    fn hamiltonian_basics() {
        let r = quadratic_problem(0.5).reduce_to_mayer().unwrap();
        assert_eq!(hamiltonian(&r, 0.3, &[1.0, 2.0], &[0.0, 0.0], &[0.7]), 0.0);
        // p = e_1 picks the running cost component
        let h = hamiltonian(&r, 0.3, &[1.0, 2.0], &[1.0, 0.0], &[0.7]);
        assert!((h - 0.49).abs() < 1e-15);
    }

    #[test]
    fn argmax_ties_and_singletons() {
        let mut r = quadratic_problem(0.5).reduce_to_mayer().unwrap();
        // H = p_y u² + p_x u; with p = 0 every candidate ties
        assert_eq!(maximize_hamiltonian(&r, 0.0, &[0.0, 1.0], &[0.0, 0.0]), vec![-1.0]);
        assert_eq!(maximize_hamiltonian(&r, 0.0, &[0.0, 1.0], &[0.0, 2.0]), vec![1.0]);
        r.control_set = ControlMap::Constant(ControlSet::finite(vec![vec![0.25]]).unwrap());
        assert_eq!(maximize_hamiltonian(&r, 0.0, &[0.0, 1.0], &[5.0, -3.0]), vec![0.25]);
    }

    #[test]
    fn time_varying_control_set() {
        let mut r = quadratic_problem(0.5).reduce_to_mayer().unwrap();
        r.control_set = ControlMap::TimeVarying(Arc::new(|t| ControlSet::interval(-t, t).unwrap()));
        assert_eq!(maximize_hamiltonian(&r, 0.5, &[0.0, 1.0], &[0.0, 1.0]), vec![0.5]);
    }

    #[test]
    fn singleton_converges_immediately() {
        let mut r = quadratic_problem(0.7).reduce_to_mayer().unwrap();
        r.control_set = ControlMap::Constant(ControlSet::finite(vec![vec![0.3]]).unwrap());
        let grid = r.grid(100).unwrap();
        let res = forward_backward_sweep(&r, grid, &SweepOptions::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
        assert!(res.control.values().iter().all(|&u| u == 0.3));
        assert_eq!(res.state.node(0), r.x0.as_slice());
    }

    #[test]
    fn sweep_rejects_lagrange_form_and_bad_options() {
        let p = quadratic_problem(0.7);
        let grid = p.grid(50).unwrap();
        assert!(forward_backward_sweep(&p, grid, &SweepOptions::default()).is_err());
        let r = p.reduce_to_mayer().unwrap();
        let bad = SweepOptions { relaxation: 1.0, ..Default::default() };
        assert!(forward_backward_sweep(&r, grid, &bad).is_err());
        let bad = SweepOptions { tol: 0.0, ..Default::default() };
        assert!(forward_backward_sweep(&r, grid, &bad).is_err());
        let other = TimeGrid::new(0.0, 2.0, 50).unwrap();
        assert!(forward_backward_sweep(&r, other, &SweepOptions::default()).is_err());
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let r = quadratic_problem(0.7).reduce_to_mayer().unwrap();
        let grid = r.grid(50).unwrap();
        let opts = SweepOptions { max_iters: 1, tol: 1e-12, ..Default::default() };
        let res = forward_backward_sweep(&r, grid, &opts).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 1);
    }
}
