//! Restricted path: sweep the targets `f - v g` for increasing `v`,
//! warm-starting each solve from the previous one, and stop at the first
//! target that is not reached.

use serde::{Deserialize, Serialize};

use crate::algebra::{CoordinateRing, LinearTuple, QuadraticForm};
use crate::error::{Error, Result};
use crate::solver::{self, RunRecord, SolverConfig};
use crate::sosmap::{sigma, ObjectiveContext};

/// Target displacement per step used by [`PathConfig::normalized`].
pub const DEFAULT_STEP: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    /// Increment of `v` per step.
    pub step_u: f64,
    pub v_lower: f64,
    /// May be `f64::INFINITY`.
    pub v_upper: f64,
    pub solver: SolverConfig,
    /// Guard for unbounded sweeps.
    pub max_steps: usize,
}

impl PathConfig {
    pub fn new(step_u: f64, v_lower: f64, v_upper: f64, solver: SolverConfig) -> Self {
        Self {
            step_u,
            v_lower,
            v_upper,
            solver,
            max_steps: 100_000,
        }
    }

    /// Step `0.05 / ||g||`, so the target moves by about 0.05 per step.
    pub fn normalized(g: &QuadraticForm, v_lower: f64, v_upper: f64, solver: SolverConfig) -> Self {
        let ng = g.norm();
        let step = if ng > 0.0 {
            DEFAULT_STEP / ng
        } else {
            DEFAULT_STEP
        };
        Self::new(step, v_lower, v_upper, solver)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_u > 0.0 && self.step_u.is_finite()) {
            return Err(Error::Config(format!(
                "step_u must be positive, got {}",
                self.step_u
            )));
        }
        if !self.v_lower.is_finite() || self.v_upper.is_nan() || self.v_lower > self.v_upper {
            return Err(Error::Config(format!(
                "need finite v_lower <= v_upper, got [{}, {}]",
                self.v_lower, self.v_upper
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be positive".into()));
        }
        self.solver.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStop {
    /// The solve at `v_upper` reached its target.
    ReachedUpper,
    /// A solve missed its target; the previous point is returned.
    Infeasible,
    StepLimit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathStep {
    pub step: usize,
    pub v: f64,
    /// `||sigma(l_prev) - (f - v g)||` at the warm start.
    pub start_distance: f64,
    pub record: RunRecord,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathOutcome {
    pub v_final: f64,
    pub l_final: LinearTuple,
    /// `||sigma(l_final) - (f - v_final g)||`.
    pub final_distance: f64,
    pub stop: PathStop,
    pub steps: Vec<PathStep>,
}

fn shifted(f: &QuadraticForm, g: &QuadraticForm, v: f64) -> Result<QuadraticForm> {
    f.add_scaled(-v, g)
}

/// Runs the sweep from a tuple `l0` with `sigma(l0)` within `success_eps`
/// of `f - v_lower g`.
pub fn restricted_path(
    ring: &CoordinateRing,
    f: &QuadraticForm,
    g: &QuadraticForm,
    k: usize,
    l0: &LinearTuple,
    cfg: &PathConfig,
) -> Result<PathOutcome> {
    cfg.validate()?;
    ring.check_quadratic(f)?;
    ring.check_quadratic(g)?;
    ring.check_tuple(l0)?;
    crate::error::check_len(k, l0.k())?;
    let eps = cfg.solver.success_eps;

    let start = sigma(ring, l0)?.sub(&shifted(f, g, cfg.v_lower)?)?.norm();
    if start > eps {
        return Err(Error::InfeasibleStart {
            distance: start,
            eps,
        });
    }

    let mut v = cfg.v_lower;
    let mut l = l0.clone();
    let mut distance = start;
    let mut steps = Vec::new();
    let mut stop = if v >= cfg.v_upper {
        PathStop::ReachedUpper
    } else {
        PathStop::StepLimit
    };
    while stop == PathStop::StepLimit && steps.len() < cfg.max_steps {
        let mut v_next = v + cfg.step_u;
        let last = v_next >= cfg.v_upper;
        if last {
            v_next = cfg.v_upper;
        }
        let target = shifted(f, g, v_next)?;
        let start_distance = sigma(ring, &l)?.sub(&target)?.norm();
        let ctx = ObjectiveContext::new(ring, target, k)?;
        let record = solver::minimize(&ctx, &l, &cfg.solver)?;
        let ok = record.final_distance <= eps;
        if ok {
            v = v_next;
            l = record.final_tuple.clone();
            distance = record.final_distance;
        }
        log::debug!(
            "path step {}: v = {v_next}, start {start_distance:.3e}, final {:.3e}",
            steps.len() + 1,
            record.final_distance
        );
        steps.push(PathStep {
            step: steps.len() + 1,
            v: v_next,
            start_distance,
            record,
        });
        if !ok {
            stop = PathStop::Infeasible;
        } else if last {
            stop = PathStop::ReachedUpper;
        }
    }
    Ok(PathOutcome {
        v_final: v,
        l_final: l,
        final_distance: distance,
        stop,
        steps,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FeasibilityOutcome {
    /// `true` when the sweep reached `v = 1`, so `l_final` is a sum-of-squares
    /// certificate for the target.
    pub certified: bool,
    pub l_final: LinearTuple,
    pub path: PathOutcome,
}

/// Tests whether `target` is a sum of `k` squares by sweeping from
/// `f = sigma(l0)` along `g = f - target` over `v` in `[0, 1]`.
pub fn sos_feasibility_via_path(
    ring: &CoordinateRing,
    target: &QuadraticForm,
    k: usize,
    l0: &LinearTuple,
    step_u: f64,
    solver_cfg: &SolverConfig,
) -> Result<FeasibilityOutcome> {
    let f = sigma(ring, l0)?;
    let g = f.sub(target)?;
    let cfg = PathConfig::new(step_u, 0.0, 1.0, solver_cfg.clone());
    let path = restricted_path(ring, &f, &g, k, l0, &cfg)?;
    Ok(FeasibilityOutcome {
        certified: path.stop == PathStop::ReachedUpper && path.v_final == 1.0,
        l_final: path.l_final.clone(),
        path,
    })
}
