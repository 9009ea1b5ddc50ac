//! Named problems reachable from `focpc solve --problem`.

use anyhow::Result;

use focpc_core::resource::{make_problem_spec, switch_time};
use focpc_core::{ProblemSpec, ResourceParams};

use crate::config::RunConfig;

/// A problem in Mayer form, with its closed-form switching time when known.
pub struct Instance {
    pub spec: ProblemSpec,
    pub analytic_switch: Option<f64>,
}

pub struct Problem {
    pub name: &'static str,
    pub summary: &'static str,
    build: fn(&RunConfig) -> Result<Instance>,
}

impl Problem {
    pub fn build(&self, cfg: &RunConfig) -> Result<Instance> {
        (self.build)(cfg)
    }
}

const REGISTRY: &[Problem] = &[Problem {
    name: "resource",
    summary: "harvest a growing resource, bang-bang optimum with one switch",
    build: build_resource,
}];

pub fn lookup(name: &str) -> Option<&'static Problem> {
    REGISTRY.iter().find(|p| p.name == name)
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|p| p.name).collect()
}

fn build_resource(cfg: &RunConfig) -> Result<Instance> {
    let params = ResourceParams::new(cfg.alpha, cfg.horizon, cfg.x0)?;
    Ok(Instance {
        spec: make_problem_spec(&params).reduce_to_mayer()?,
        analytic_switch: Some(switch_time(&params)),
    })
}
