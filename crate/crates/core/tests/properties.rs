use proptest::prelude::*;

use focpc_core::operators::{caputo_left, check_mean_value, rl_integral_left, rl_integral_right};
use focpc_core::pmp::{hamiltonian, maximize_hamiltonian};
use focpc_core::resource::make_problem_spec;
use focpc_core::solver::solve_caputo_ivp;
use focpc_core::special::{gamma, mittag_leffler, MLParams};
use focpc_core::{FractionalOrder, GridFunction, IvpSpec, ResourceParams, TimeGrid};

fn order() -> impl Strategy<Value = f64> {
    0.05..=1.0f64
}

fn unit_grid(n: usize) -> TimeGrid {
    TimeGrid::new(0.0, 1.0, n).unwrap()
}

fn poly(coeffs: &[f64]) -> impl Fn(f64) -> f64 + '_ {
    move |t| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operators_are_linear(
        alpha in order(),
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        c1 in prop::collection::vec(-1.0..1.0f64, 1..5),
        c2 in prop::collection::vec(-1.0..1.0f64, 1..5),
    ) {
        let alpha = FractionalOrder::new(alpha).unwrap();
        let grid = unit_grid(64);
        let f = GridFunction::from_fn(grid, poly(&c1)).unwrap();
        let g = GridFunction::from_fn(grid, poly(&c2)).unwrap();
        let combo = f.linear_combination(a, &g, b).unwrap();
        type Op = fn(&GridFunction, FractionalOrder) -> GridFunction;
        let ops: [Op; 3] = [rl_integral_left, rl_integral_right, caputo_left];
        for op in ops {
            let lhs = op(&combo, alpha);
            let rhs = op(&f, alpha).linear_combination(a, &op(&g, alpha), b).unwrap();
            let scale = 1.0 + lhs.sup_norm();
            prop_assert!(lhs.sup_distance(&rhs).unwrap() <= 1e-10 * scale);
        }
    }

    #[test]
    fn mittag_leffler_increases_on_positive_axis(
        alpha in 0.3..=1.0f64,
        beta in 0.1..=2.0f64,
        z in 0.0..5.0f64,
        dz in 0.01..1.0f64,
    ) {
        let p = MLParams::new(alpha, beta).unwrap().with_max_terms(2000).unwrap();
        let lo = mittag_leffler(&p, z).unwrap();
        let hi = mittag_leffler(&p, z + dz).unwrap();
        prop_assert!(hi > lo);
        prop_assert_eq!(lo.to_bits(), mittag_leffler(&p, z).unwrap().to_bits());
    }

    #[test]
    fn gamma_recurrence(x in 0.05..20.0f64) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs());
    }

    #[test]
    fn mean_value_ratio_lies_in_range(
        alpha in 0.2..=1.0f64,
        coeffs in prop::collection::vec(-1.0..1.0f64, 2..6),
        x_index in 40usize..=400,
    ) {
        let grid = unit_grid(400);
        let f = GridFunction::from_fn(grid, poly(&coeffs)).unwrap();
        let r = check_mean_value(&f, FractionalOrder::new(alpha).unwrap(), x_index).unwrap();
        let window = &f.values()[..=x_index];
        let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = 5.0 * grid.step();
        prop_assert!(r >= lo - tol && r <= hi + tol, "{r} outside [{lo}, {hi}]");
    }

    #[test]
    fn argmax_invariant_under_positive_scaling(
        alpha in 0.3..=1.0f64,
        y in 0.0..3.0f64,
        x in 0.1..3.0f64,
        p1 in 0.0..2.0f64,
        p2 in 0.0..2.0f64,
        c in 0.01..100.0f64,
    ) {
        let params = ResourceParams::new(FractionalOrder::new(alpha).unwrap(), 3.0, 1.0).unwrap();
        let spec = make_problem_spec(&params).reduce_to_mayer().unwrap();
        let state = [y, x];
        let p = [p2, p1];
        let scaled = [c * p2, c * p1];
        let u = maximize_hamiltonian(&spec, 0.5, &state, &p);
        let v = maximize_hamiltonian(&spec, 0.5, &state, &scaled);
        let hu = hamiltonian(&spec, 0.5, &state, &p, &u);
        let hv = hamiltonian(&spec, 0.5, &state, &p, &v);
        prop_assert!((hu - hv).abs() <= 1e-12 * (1.0 + hu.abs()));
    }

    #[test]
    fn reflection_is_an_involution(values in prop::collection::vec(-1e3..1e3f64, 3..50)) {
        let grid = TimeGrid::new(-1.0, 2.0, values.len() - 1).unwrap();
        let f = GridFunction::new(grid, 1, values).unwrap();
        prop_assert_eq!(f.reflect().reflect(), f);
    }
}

fn max_error(alpha: f64, n: usize, f: impl Fn(f64) -> f64, exact: impl Fn(f64) -> f64) -> f64 {
    let a = FractionalOrder::new(alpha).unwrap();
    let grid = unit_grid(n);
    let g = rl_integral_left(&GridFunction::from_fn(grid, f).unwrap(), a);
    grid.nodes().enumerate().map(|(k, t)| (g.node(k)[0] - exact(t)).abs()).fold(0.0, f64::max)
}

#[test]
fn integral_of_square_converges_at_one_plus_alpha() {
    for &alpha in &[0.3, 0.5, 0.8] {
        let g3 = statrs::function::gamma::gamma(3.0 + alpha);
        let exact = |t: f64| 2.0 * t.powf(2.0 + alpha) / g3;
        let coarse = max_error(alpha, 100, |t| t * t, exact);
        let fine = max_error(alpha, 200, |t| t * t, exact);
        let expected = 2f64.powf(1.0 + alpha) * 0.7;
        assert!(coarse / fine >= expected, "alpha {alpha}: ratio {}", coarse / fine);
    }
}

#[test]
fn caputo_tends_to_ordinary_derivative() {
    let grid = unit_grid(1000);
    let f = GridFunction::from_fn(grid, f64::sin).unwrap();
    let d = caputo_left(&f, FractionalOrder::new(1.0 - 1e-6).unwrap());
    let worst = grid
        .nodes()
        .enumerate()
        .skip(1)
        .map(|(k, t)| (d.node(k)[0] - t.cos()).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-3, "{worst}");
}

#[test]
fn ivp_solution_reproduces_right_hand_side() {
    for &alpha in &[0.5, 0.8] {
        let a = FractionalOrder::new(alpha).unwrap();
        let grid = unit_grid(1000);
        let ivp = IvpSpec {
            rhs: |_t: f64, x: &[f64]| vec![-x[0]],
            x0: vec![1.0],
            grid,
            alpha: a,
        };
        let x = solve_caputo_ivp(&ivp).unwrap();
        let d = caputo_left(&x, a);
        // node 1 sees the t^α layer at t0 and is treated as boundary
        let worst = (2..grid.n_steps()).map(|k| (d.node(k)[0] + x.node(k)[0]).abs()).fold(0.0, f64::max);
        let slack = 20.0 * grid.step().powf(alpha);
        assert!(worst <= slack, "alpha {alpha}: {worst} > {slack}");
    }
}

#[test]
fn ivp_error_shrinks_under_refinement() {
    let alpha = 0.6;
    let a = FractionalOrder::new(alpha).unwrap();
    let ml = MLParams::new(alpha, 1.0).unwrap();
    let mut errors = Vec::new();
    for n in [50, 100, 200, 400] {
        let grid = unit_grid(n);
        let ivp = IvpSpec {
            rhs: |_t: f64, x: &[f64]| vec![x[0]],
            x0: vec![1.0],
            grid,
            alpha: a,
        };
        let x = solve_caputo_ivp(&ivp).unwrap();
        let err = grid
            .nodes()
            .enumerate()
            .map(|(k, t)| (x.node(k)[0] - mittag_leffler(&ml, t.powf(alpha)).unwrap()).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}
