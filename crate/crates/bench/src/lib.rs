//! Shared inputs for the criterion benches.

use focpc_core::resource::{make_problem_spec, ResourceParams};
use focpc_core::{FractionalOrder, GridFunction, ProblemSpec, TimeGrid};

pub fn order(alpha: f64) -> FractionalOrder {
    FractionalOrder::new(alpha).expect("bench orders lie in (0, 1]")
}

pub fn smooth_samples(n_steps: usize) -> GridFunction {
    let grid = TimeGrid::new(0.0, 1.0, n_steps).expect("valid grid");
    GridFunction::from_fn(grid, |t| (2.0 * t).sin() + t * t).expect("finite samples")
}

/// Mayer-form resource problem on `[0, 2]`.
pub fn resource_mayer(alpha: f64) -> ProblemSpec {
    let params = ResourceParams::new(order(alpha), 2.0, 1.0).expect("T = 2 admits a switch");
    make_problem_spec(&params)
        .reduce_to_mayer()
        .expect("resource problem has a running cost")
}
