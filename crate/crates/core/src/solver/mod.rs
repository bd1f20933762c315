//! LBFGS minimization of `||sigma_k(l) - f||^2` and the three-way run
//! classification (successful / spurious / unfinished).

mod lbfgs;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use lbfgs::{LbfgsOptions, LbfgsOutcome, Termination};

use crate::algebra::{CoordinateRing, LinearTuple};
use crate::error::{Error, Result};
use crate::sosmap::ObjectiveContext;

/// Doubles NLopt budgets for LBFGS history (10 MiB).
const NLOPT_MEMAVAIL: usize = 1_310_720;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// LBFGS history pairs; `None` uses the NLopt heuristic
    /// `max(1310720 / nvars, 10)`, capped at the evaluation budget.
    pub memory: Option<usize>,
    /// Converged when `||grad|| <= grad_tol * max(1, ||l||)`.
    pub grad_tol: f64,
    /// Converged when the relative objective decrease of a step is at most this.
    pub ftol_rel: f64,
    /// Objective-plus-gradient evaluations; `None` means `20 * dim R1`.
    pub max_evals: Option<usize>,
    /// Wall-clock budget per solve, in seconds.
    pub time_limit: f64,
    /// Distance threshold for a successful run.
    pub success_eps: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            memory: None,
            grad_tol: 1e-10,
            ftol_rel: 1e-12,
            max_evals: None,
            time_limit: 600.0,
            success_eps: 1e-8,
            c1: 1e-4,
            c2: 0.9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("grad_tol", self.grad_tol),
            ("ftol_rel", self.ftol_rel),
            ("time_limit", self.time_limit),
            ("success_eps", self.success_eps),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.memory == Some(0) {
            return Err(Error::Config("memory must be positive".into()));
        }
        if self.max_evals == Some(0) {
            return Err(Error::Config("max_evals must be positive".into()));
        }
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return Err(Error::Config("line search needs 0 < c1 < c2 < 1".into()));
        }
        Ok(())
    }

    /// History size used for `nvars` unknowns under budget `max_evals`.
    pub fn history(&self, nvars: usize, max_evals: usize) -> usize {
        self.memory.unwrap_or_else(|| {
            (NLOPT_MEMAVAIL / nvars.max(1))
                .max(10)
                .min(max_evals.max(1))
        })
    }

    /// Evaluation cap for a ring: explicit value or `20 * dim R1`.
    pub fn eval_cap(&self, ring: &CoordinateRing) -> usize {
        self.max_evals.unwrap_or(20 * ring.dim1())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Successful,
    Spurious,
    Unfinished,
}

/// Outcome of one solve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub final_tuple: LinearTuple,
    /// `||sigma_k(l) - f||` at the returned tuple.
    pub final_distance: f64,
    pub status: RunStatus,
    pub termination: Termination,
    pub converged: bool,
    pub evals: usize,
    pub iterations: usize,
    /// Seconds.
    pub wall_time: f64,
    pub grad_norm: f64,
    /// Objective at each accepted iterate.
    pub trace: Vec<f64>,
    pub diagnostic: Option<String>,
}

/// Successful within `success_eps`; otherwise spurious if the optimizer
/// converged on its own terms, unfinished if it was stopped.
pub fn classify(record: &RunRecord, cfg: &SolverConfig) -> RunStatus {
    if record.final_distance <= cfg.success_eps {
        RunStatus::Successful
    } else if record.converged {
        RunStatus::Spurious
    } else {
        RunStatus::Unfinished
    }
}

pub fn minimize(
    ctx: &ObjectiveContext<'_>,
    l0: &LinearTuple,
    cfg: &SolverConfig,
) -> Result<RunRecord> {
    cfg.validate()?;
    ctx.ring().check_tuple(l0)?;
    crate::error::check_len(ctx.k(), l0.k())?;
    let max_evals = cfg.eval_cap(ctx.ring());
    let opts = LbfgsOptions {
        memory: cfg.history(ctx.nvars(), max_evals),
        c1: cfg.c1,
        c2: cfg.c2,
        grad_tol: cfg.grad_tol,
        ftol_rel: cfg.ftol_rel,
        max_evals,
        time_limit: Duration::from_secs_f64(cfg.time_limit.min(1e9)),
        target_value: cfg.success_eps * cfg.success_eps,
    };
    let start = Instant::now();
    let mut f = |x: &[f64], g: &mut [f64]| ctx.value_and_gradient(x, g);
    let out = lbfgs::minimize(&mut f, l0.as_flat().to_vec(), &opts)
        .map_err(|e| Error::NonFiniteValue(e.0))?;
    let wall_time = start.elapsed().as_secs_f64();

    let final_tuple = LinearTuple::from_flat(ctx.k(), ctx.ring().dim1(), out.x)?;
    let mut record = RunRecord {
        final_distance: out.value.max(0.0).sqrt(),
        final_tuple,
        status: RunStatus::Unfinished,
        converged: out.termination.is_converged(),
        termination: out.termination,
        evals: out.evals,
        iterations: out.iterations,
        wall_time,
        grad_norm: out.grad_norm,
        trace: out.trace,
        diagnostic: out.diagnostic,
    };
    record.status = classify(&record, cfg);
    Ok(record)
}
