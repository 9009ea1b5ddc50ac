//! Fixed-seed property suite behind `focpc validate`.
//!
//! Every check reports the measured quantity next to the threshold it is held
//! to, so failures can be read off directly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{FractionalOrder, GridFunction, TimeGrid};
use crate::operators::{
    check_composition, check_integration_by_parts, check_mean_value, gronwall_bound, rl_integral_node,
    taylor_partial_sum,
};
use crate::special::{gamma_unchecked, mittag_leffler, MLParams};

pub const FAMILIES: [&str; 6] = [
    "mittag-leffler",
    "composition",
    "integration-by-parts",
    "gronwall",
    "mean-value",
    "taylor",
];

const SEED: u64 = 0x5eed_f0c9;
pub const GRONWALL_TERMS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub family: &'static str,
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl PropertyCheck {
    fn at_most(family: &'static str, name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            family,
            name: name.into(),
            measured,
            threshold,
            passed: measured <= threshold,
        }
    }

    fn at_least(family: &'static str, name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            family,
            name: name.into(),
            measured,
            threshold,
            passed: measured >= threshold,
        }
    }
}

/// Runs every family, or only `only` when given. Unknown family names yield no checks.
pub fn run_suite(only: Option<&str>) -> Result<Vec<PropertyCheck>> {
    let mut out = Vec::new();
    for family in FAMILIES {
        if only.is_some_and(|o| o != family) {
            continue;
        }
        out.extend(match family {
            "mittag-leffler" => mittag_leffler_checks()?,
            "composition" => composition_checks()?,
            "integration-by-parts" => integration_by_parts_checks()?,
            "gronwall" => gronwall_checks()?,
            "mean-value" => mean_value_checks()?,
            "taylor" => taylor_checks()?,
            _ => unreachable!(),
        });
    }
    Ok(out)
}

fn unit_grid(n: usize) -> Result<TimeGrid> {
    TimeGrid::new(0.0, 1.0, n)
}

pub fn mittag_leffler_checks() -> Result<Vec<PropertyCheck>> {
    const FAM: &str = "mittag-leffler";
    let mut out = Vec::new();
    let p11 = MLParams::new(1.0, 1.0)?;
    let worst = [-2.0, -1.0, 0.0, 1.0, 2.0]
        .iter()
        .map(|&z: &f64| mittag_leffler(&p11, z).map(|v| (v - z.exp()).abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(PropertyCheck::at_most(FAM, "E_{1,1}(z) = exp(z), z in -2..2", worst, 1e-8));

    let v = mittag_leffler(&MLParams::new(1.0, 2.0)?, 1.0)?;
    out.push(PropertyCheck::at_most(FAM, "E_{1,2}(1) = e - 1", (v - (std::f64::consts::E - 1.0)).abs(), 1e-10));

    let v = mittag_leffler(&MLParams::new(0.0, 1.0)?, 0.5)?;
    out.push(PropertyCheck::at_most(FAM, "E_{0,1}(0.5) = 2", (v - 2.0).abs(), 1e-12));

    let grid = [0.3, 0.5, 0.9, 1.0];
    let mut worst = 0.0_f64;
    for &a in &grid {
        for &b in &grid {
            let v = mittag_leffler(&MLParams::new(a, b)?, 0.0)?;
            worst = worst.max((v - 1.0 / gamma_unchecked(b)).abs());
        }
    }
    out.push(PropertyCheck::at_most(FAM, "E_{a,b}(0) = 1/Gamma(b)", worst, 1e-12));
    Ok(out)
}

pub fn composition_checks() -> Result<Vec<PropertyCheck>> {
    const FAM: &str = "composition";
    let half = FractionalOrder::new(0.5)?;
    let residual = |n: usize| -> Result<f64> {
        let f = GridFunction::from_fn(unit_grid(n)?, |t| t * t)?;
        Ok(check_composition(&f, half))
    };
    let fine = residual(1000)?;
    let coarse = residual(500)?;
    let c = GridFunction::from_fn(unit_grid(200)?, |_| 3.0)?;
    Ok(vec![
        PropertyCheck::at_most(FAM, "I^a(D^a t^2) = t^2, a = 0.5, N = 1000", fine, 0.01),
        PropertyCheck::at_least(FAM, "residual ratio N = 500 / N = 1000", coarse / fine, 1.0),
        PropertyCheck::at_most(FAM, "constant function", check_composition(&c, half), 1e-13),
    ])
}

pub fn integration_by_parts_checks() -> Result<Vec<PropertyCheck>> {
    const FAM: &str = "integration-by-parts";
    let half = FractionalOrder::new(0.5)?;
    let grid = unit_grid(2000)?;
    let f1 = GridFunction::from_fn(grid, |t| t)?;
    let g1 = GridFunction::from_fn(grid, |_| 1.0)?;
    let f2 = GridFunction::from_fn(grid, |t| t * t)?;
    let g2 = GridFunction::from_fn(grid, |t| 1.0 - t)?;
    Ok(vec![
        PropertyCheck::at_most(FAM, "f = t, g = 1, N = 2000", check_integration_by_parts(&f1, &g1, half)?, 0.02),
        PropertyCheck::at_most(FAM, "f = t^2, g = 1 - t, N = 2000", check_integration_by_parts(&f2, &g2, half)?, 0.05),
    ])
}

/// Builds `u` on `grid` with `u = a r + b ∫(t-s)^{α-1} u ds` in the discrete
/// (product-trapezoidal) sense, `r` drawn from `[0.5, 1]`, so that `u` meets
/// the Gronwall hypothesis with constant `a`, `b`.
pub fn gronwall_subsolution(grid: TimeGrid, alpha: FractionalOrder, a: f64, b: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let al = alpha.value();
    let h = grid.step();
    let n = grid.n_steps();
    let kernel = b * gamma_unchecked(al);
    let diag = kernel * h.powf(al) / gamma_unchecked(al + 2.0);
    let mut u = vec![0.0; n + 1];
    u[0] = a * rng.gen_range(0.5..=1.0);
    for k in 1..=n {
        let r: f64 = rng.gen_range(0.5..=1.0);
        // convolution with u_k = 0 isolates the implicit diagonal term
        u[k] = 0.0;
        let known = kernel * rl_integral_node(&u[..=k], h, al, k);
        u[k] = (a * r + known) / (1.0 - diag);
    }
    u
}

pub fn gronwall_checks() -> Result<Vec<PropertyCheck>> {
    const FAM: &str = "gronwall";
    let mut out = Vec::new();
    let grid = unit_grid(200)?;
    let half = FractionalOrder::new(0.5)?;
    let one = GridFunction::from_fn(grid, |_| 1.0)?;
    let bound = gronwall_bound(&one, &one, half, GRONWALL_TERMS)?;
    let slack = 10.0 * grid.step();
    let mut worst = f64::INFINITY;
    for s in 0..5 {
        let u = gronwall_subsolution(grid, half, 1.0, 1.0, SEED + s);
        for (k, uk) in u.iter().enumerate() {
            worst = worst.min(bound.node(k)[0] - uk);
        }
    }
    out.push(PropertyCheck::at_least(FAM, "bound - u >= -10h, a = b = 1, a = 0.5", worst, -slack));

    let bound = gronwall_bound(&one, &one, FractionalOrder::ONE, GRONWALL_TERMS)?;
    let v = bound.node(grid.n_steps())[0];
    out.push(PropertyCheck::at_most(FAM, "classical bound e at t = 1", (v - std::f64::consts::E).abs(), 0.01));
    Ok(out)
}

pub fn mean_value_checks() -> Result<Vec<PropertyCheck>> {
    const FAM: &str = "mean-value";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let grid = unit_grid(400)?;
    let tol = 5.0 * grid.step();
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..20 {
        let degree = rng.gen_range(1..=4);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let alpha = FractionalOrder::new(rng.gen_range(0.2..=1.0))?;
        let x_index = rng.gen_range(40..=grid.n_steps());
        let f = GridFunction::from_fn(grid, |t| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c))?;
        let r = check_mean_value(&f, alpha, x_index)?;
        let window = &f.values()[..=x_index];
        let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        worst_excess = worst_excess.max((lo - r).max(r - hi));
    }
    Ok(vec![PropertyCheck::at_most(
        FAM,
        "ratio within [min f, max f], 20 random polynomials",
        worst_excess,
        tol,
    )])
}

pub fn taylor_checks() -> Result<Vec<PropertyCheck>> {
    const FAM: &str = "taylor";
    let alpha = FractionalOrder::new(0.5)?;
    let x: f64 = 0.5;
    let z = x.powf(alpha.value());
    let coeffs = [1.0; 9];
    let full = mittag_leffler(&MLParams::new(alpha.value(), 1.0)?, z)?;

    let mut worst_mismatch = 0.0_f64;
    let mut remainders = Vec::new();
    let mut truncated = 0.0;
    for n in 0..=8 {
        truncated += z.powi(n as i32) / gamma_unchecked(n as f64 * alpha.value() + 1.0);
        let partial = taylor_partial_sum(alpha, n, &coeffs, 0.0, x)?;
        worst_mismatch = worst_mismatch.max((partial - truncated).abs() / truncated.abs().max(1.0));
        if n >= 1 {
            remainders.push((full - partial).abs());
        }
    }
    let violations = remainders.windows(2).filter(|w| w[1] >= w[0]).count();
    Ok(vec![
        PropertyCheck::at_most(FAM, "partial sums of E_a(x^a) equal truncated series", worst_mismatch, 1e-14),
        PropertyCheck::at_most(FAM, "remainder decreases for n = 1..8", violations as f64, 0.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::rl_integral_series;

    #[test]
    fn full_suite_passes() {
        let checks = run_suite(None).unwrap();
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        let families: std::collections::BTreeSet<_> = checks.iter().map(|c| c.family).collect();
        assert_eq!(families.len(), FAMILIES.len());
    }

    #[test]
    fn filter_selects_one_family() {
        let checks = run_suite(Some("gronwall")).unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.family == "gronwall"));
        assert!(run_suite(Some("nope")).unwrap().is_empty());
    }

    #[test]
    fn subsolution_meets_hypothesis() {
        let grid = unit_grid(100).unwrap();
        let half = FractionalOrder::new(0.5).unwrap();
        let u = gronwall_subsolution(grid, half, 1.0, 1.0, 7);
        let conv = rl_integral_series(&u, grid.step(), 0.5);
        for (k, uk) in u.iter().enumerate() {
            let rhs = 1.0 + gamma_unchecked(0.5) * conv[k];
            assert!(*uk <= rhs + 1e-12);
        }
    }
}
