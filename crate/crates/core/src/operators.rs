//! Discrete fractional operators on uniform grids.
//!
//! * Left Riemann-Liouville integral: product-trapezoidal quadrature, exact for
//!   piecewise-linear data, order `1 + α` for smooth data.
//! * Left Caputo derivative: the L1 scheme. The continuum value at `t0` may be
//!   singular, so node 0 repeats the node-1 value. For `α = 1` the ordinary
//!   derivative is returned (central differences inside, one-sided at the ends).
//! * Right Riemann-Liouville derivative: reflect the grid, differentiate the
//!   product-trapezoidal integral of order `1 - α`, reflect back.
//!
//! The `check_*` functions measure residuals of the composition,
//! integration-by-parts and mean-value identities; [`gronwall_bound`] evaluates
//! the right-hand side of the fractional Bellman-Gronwall inequality.
//!
//! Only the left-sided composition identity is checked. The right-sided
//! counterpart `_bI_a^α (ᶜD_b^α f) = f(a) - f(b)` is read as the right integral
//! over the whole interval and is not exercised here.

use crate::error::{Error, Result};
use crate::grid::{FractionalOrder, GridFunction};
use crate::special::gamma_unchecked;

/// Interior corrector weights `c_k = (k+1)^{β+1} - 2 k^{β+1} + (k-1)^{β+1}`, `k ≥ 1`.
fn trapezoid_tail_weights(beta: f64, n: usize) -> Vec<f64> {
    let p = beta + 1.0;
    let mut w = vec![0.0; n + 1];
    for (k, wk) in w.iter_mut().enumerate().skip(1) {
        let k = k as f64;
        *wk = (k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).powf(p);
    }
    w
}

#[inline]
fn trapezoid_first_weight(beta: f64, n: usize) -> f64 {
    let n = n as f64;
    (n - 1.0).powf(beta + 1.0) - (n - 1.0 - beta) * n.powf(beta)
}

fn integral_at(values: &[f64], tail: &[f64], beta: f64, scale: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut acc = trapezoid_first_weight(beta, n) * values[0] + values[n];
    for j in 1..n {
        acc += tail[n - j] * values[j];
    }
    scale * acc
}

/// Product-trapezoidal left RL integral of any order `beta > 0` for one series.
pub(crate) fn rl_integral_series(values: &[f64], h: f64, beta: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let tail = trapezoid_tail_weights(beta, n);
    let scale = h.powf(beta) / gamma_unchecked(beta + 2.0);
    (0..=n).map(|k| integral_at(values, &tail, beta, scale, k)).collect()
}

/// Same quadrature as [`rl_integral_series`] at node `n` only.
pub(crate) fn rl_integral_node(values: &[f64], h: f64, beta: f64, n: usize) -> f64 {
    let tail = trapezoid_tail_weights(beta, n);
    let scale = h.powf(beta) / gamma_unchecked(beta + 2.0);
    integral_at(values, &tail, beta, scale, n)
}

fn l1_caputo_series(values: &[f64], h: f64, alpha: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let p = 1.0 - alpha;
    let b: Vec<f64> = (0..n).map(|k| (k as f64 + 1.0).powf(p) - (k as f64).powf(p)).collect();
    let scale = h.powf(-alpha) / gamma_unchecked(2.0 - alpha);
    let mut out = vec![0.0; n + 1];
    for m in 1..=n {
        let mut acc = 0.0;
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += bk * (values[m - k] - values[m - k - 1]);
        }
        out[m] = scale * acc;
    }
    out[0] = out[1];
    out
}

/// Central differences inside, second-order one-sided differences at both ends.
fn derivative_series(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let mut out = vec![0.0; n + 1];
    for k in 1..n {
        out[k] = (values[k + 1] - values[k - 1]) / (2.0 * h);
    }
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    out[n] = (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * h);
    out
}

/// First-order ends, as documented for the classical Caputo limit.
fn ordinary_derivative_series(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let mut out = vec![0.0; n + 1];
    for k in 1..n {
        out[k] = (values[k + 1] - values[k - 1]) / (2.0 * h);
    }
    out[0] = (values[1] - values[0]) / h;
    out[n] = (values[n] - values[n - 1]) / h;
    out
}

fn map_components(f: &GridFunction, op: impl Fn(&[f64]) -> Vec<f64>) -> GridFunction {
    let comps: Vec<Vec<f64>> = (0..f.dim()).map(|i| op(&f.component(i))).collect();
    let mut values = Vec::with_capacity(f.values().len());
    for k in 0..f.n_nodes() {
        values.extend(comps.iter().map(|c| c[k]));
    }
    GridFunction::from_raw(*f.grid(), f.dim(), values)
}

/// Left RL integral `_{t0}I_t^α f` at every node; `g(t0) = 0`.
pub fn rl_integral_left(f: &GridFunction, alpha: FractionalOrder) -> GridFunction {
    let h = f.grid().step();
    map_components(f, |s| rl_integral_series(s, h, alpha.value()))
}

/// Right RL integral `_tI_{tf}^α f`, via reflection of the left one.
pub fn rl_integral_right(f: &GridFunction, alpha: FractionalOrder) -> GridFunction {
    rl_integral_left(&f.reflect(), alpha).reflect()
}

/// Left Caputo derivative by the L1 scheme.
pub fn caputo_left(f: &GridFunction, alpha: FractionalOrder) -> GridFunction {
    let h = f.grid().step();
    if alpha.is_integer() {
        map_components(f, |s| ordinary_derivative_series(s, h))
    } else {
        map_components(f, |s| l1_caputo_series(s, h, alpha.value()))
    }
}

/// Left RL derivative `d/dt (_{t0}I_t^{1-α} f)`, for `0 < α < 1`.
pub fn rl_derivative_left(f: &GridFunction, alpha: FractionalOrder) -> Result<GridFunction> {
    if alpha.is_integer() {
        return Err(Error::Domain(
            "RL derivative discretisation needs alpha < 1; use the ordinary derivative for alpha = 1".into(),
        ));
    }
    let h = f.grid().step();
    let beta = 1.0 - alpha.value();
    Ok(map_components(f, |s| derivative_series(&rl_integral_series(s, h, beta), h)))
}

/// Right RL derivative `(-d/dt)(_tI_{tf}^{1-α} f)`, for `0 < α < 1`.
///
/// At `α = 1` the operator is `-d/dt`; call [`negative_derivative`] instead.
pub fn rl_derivative_right(f: &GridFunction, alpha: FractionalOrder) -> Result<GridFunction> {
    Ok(rl_derivative_left(&f.reflect(), alpha)?.reflect())
}

/// `-df/dt`, the `α = 1` right derivative.
pub fn negative_derivative(f: &GridFunction) -> GridFunction {
    let h = f.grid().step();
    map_components(f, |s| derivative_series(s, h).into_iter().map(|v| -v).collect())
}

/// Composite trapezoidal rule over the whole grid for one series.
pub(crate) fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    let inner: f64 = values[1..n].iter().sum();
    h * (0.5 * (values[0] + values[n]) + inner)
}

/// `max_k |I^α(derivative)(t_k) - (f(t_k) - f(t0))|` for a supplied derivative.
pub fn composition_residual(
    f: &GridFunction,
    derivative: &GridFunction,
    alpha: FractionalOrder,
) -> Result<f64> {
    f.check_compatible(derivative)?;
    let recovered = rl_integral_left(derivative, alpha);
    let mut worst = 0.0_f64;
    for k in 0..f.n_nodes() {
        for ((r, fk), f0) in recovered.node(k).iter().zip(f.node(k)).zip(f.node(0)) {
            worst = worst.max((r - (fk - f0)).abs());
        }
    }
    Ok(worst)
}

/// Residual of `I^α(ᶜD^α f) = f - f(t0)` over all nodes.
pub fn check_composition(f: &GridFunction, alpha: FractionalOrder) -> f64 {
    let d = caputo_left(f, alpha);
    composition_residual(f, &d, alpha).expect("derivative shares the grid of f")
}

/// Residual of fractional integration by parts, `0 < α < 1`:
///
/// `|∫ g ᶜD^α f - ∫ f (_tD_b^α g) - [(_tI_b^{1-α} g) f]_a^b|`.
///
/// Vector-valued `f`, `g` are paired componentwise.
pub fn check_integration_by_parts(
    f: &GridFunction,
    g: &GridFunction,
    alpha: FractionalOrder,
) -> Result<f64> {
    f.check_compatible(g)?;
    let h = f.grid().step();
    let n = f.grid().n_steps();
    let df = caputo_left(f, alpha);
    let dg = rl_derivative_right(g, alpha)?;
    let beta = FractionalOrder::new(1.0 - alpha.value())?;
    let ig = rl_integral_right(g, beta);

    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for i in 0..f.dim() {
        let fi = f.component(i);
        let gi = g.component(i);
        let dfi = df.component(i);
        let dgi = dg.component(i);
        let igi = ig.component(i);
        let left: Vec<f64> = gi.iter().zip(&dfi).map(|(a, b)| a * b).collect();
        let right: Vec<f64> = fi.iter().zip(&dgi).map(|(a, b)| a * b).collect();
        lhs += trapezoid(&left, h);
        rhs += trapezoid(&right, h) + igi[n] * fi[n] - igi[0] * fi[0];
    }
    Ok((lhs - rhs).abs())
}

/// Right-hand side of the fractional Bellman-Gronwall inequality
///
/// `a(t) + ∫_0^t Σ_{n=1}^{N} (b(t)Γ(α))ⁿ/Γ(nα) (t-s)^{nα-1} a(s) ds`.
///
/// Each summand equals `(b(t)Γ(α))ⁿ I^{nα}a(t)` and is evaluated with the
/// product-trapezoidal integral of order `nα`. Summation stops early once a
/// term's sup-norm drops below `1e-14`.
pub fn gronwall_bound(
    a_fn: &GridFunction,
    b_fn: &GridFunction,
    alpha: FractionalOrder,
    n_series: usize,
) -> Result<GridFunction> {
    a_fn.check_compatible(b_fn)?;
    if a_fn.dim() != 1 {
        return Err(Error::InvalidInput("gronwall_bound expects scalar a and b".into()));
    }
    let a = a_fn.component(0);
    let b = b_fn.component(0);
    if let Some(k) = a.iter().position(|&v| v < 0.0) {
        return Err(Error::Precondition(format!("a must be nonnegative (node {k})")));
    }
    if let Some(k) = b.iter().position(|&v| v < 0.0) {
        return Err(Error::Precondition(format!("b must be nonnegative (node {k})")));
    }
    if let Some(k) = b.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::Precondition(format!(
            "b must be nondecreasing, but decreases between nodes {k} and {}",
            k + 1
        )));
    }

    let h = a_fn.grid().step();
    let gamma_alpha = gamma_unchecked(alpha.value());
    let mut bound = a.clone();
    for n in 1..=n_series {
        let order = n as f64 * alpha.value();
        let integral = rl_integral_series(&a, h, order);
        let mut sup = 0.0_f64;
        for (k, bk) in bound.iter_mut().enumerate() {
            let term = (b[k] * gamma_alpha).powi(n as i32) * integral[k];
            *bk += term;
            sup = sup.max(term.abs());
        }
        if sup < 1e-14 {
            break;
        }
    }
    GridFunction::new(*a_fn.grid(), 1, bound)
}

/// Fractional mean-value ratio `I^α f(x) / ((x - t0)^α / Γ(1+α))` at node `x_index`.
///
/// The mean-value lemma places this ratio in `[min f, max f]` over `[t0, x]`.
pub fn check_mean_value(f: &GridFunction, alpha: FractionalOrder, x_index: usize) -> Result<f64> {
    if f.dim() != 1 {
        return Err(Error::InvalidInput("mean value check expects a scalar function".into()));
    }
    if x_index == 0 || x_index > f.grid().n_steps() {
        return Err(Error::InvalidInput(format!(
            "x_index must lie in 1..={}, got {x_index}",
            f.grid().n_steps()
        )));
    }
    let grid = f.grid();
    let al = alpha.value();
    let values = f.component(0);
    let integral = rl_integral_node(&values, grid.step(), al, x_index);
    let span = grid.node(x_index) - grid.t0();
    Ok(integral * gamma_unchecked(1.0 + al) / span.powf(al))
}

/// `Σ_{k=0}^{n} coeffs[k] (x-a)^{kα} / Γ(kα+1)`, with `coeffs[k] = ᶜD_a^{kα} f(a)`.
pub fn taylor_partial_sum(
    alpha: FractionalOrder,
    n: usize,
    coeffs: &[f64],
    a: f64,
    x: f64,
) -> Result<f64> {
    if coeffs.len() <= n {
        return Err(Error::InvalidInput(format!(
            "need {} coefficients for order {n}, got {}",
            n + 1,
            coeffs.len()
        )));
    }
    if x < a {
        return Err(Error::Domain(format!("expansion point x = {x} lies left of a = {a}")));
    }
    let al = alpha.value();
    let dx = x - a;
    Ok(coeffs[..=n]
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let p = k as f64 * al;
            c * dx.powf(p) / gamma_unchecked(p + 1.0)
        })
        .sum())
}
