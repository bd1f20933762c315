//! The random-target experiment: per trial, a generic full-rank sum of
//! squares `f` and a random start for each `k`, solved and classified.

mod instance;
mod results;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use instance::CertificateInstance;
pub use results::{
    emit_results, write_results, OutputFormat, ResultsRow, ResultsTable, TrialResult,
};

use crate::algebra::{CoordinateRing, LinearTuple, QuadraticForm, VarietySpec};
use crate::error::{Error, Result};
use crate::solver::{self, RunStatus, SolverConfig};
use crate::sosmap::{sigma, ObjectiveContext};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub variety: VarietySpec,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolverConfig,
    /// Worker threads; `None` uses the rayon default.
    pub workers: Option<usize>,
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    pub fn new(variety: VarietySpec, k_values: Vec<usize>) -> Self {
        Self {
            variety,
            k_values,
            trials: 20,
            seed: 42,
            solver: SolverConfig::default(),
            workers: None,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.variety.validate()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return Err(Error::Config(
                "k values must be nonempty and each at least 1".into(),
            ));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        self.solver.validate()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `stream` in trial `trial`; stream 0 draws the target and
/// stream `j + 1` the start for the `j`-th k value.
pub fn sub_seed(seed: u64, trial: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ stream)
}

/// `sigma(l_targ) / ||sigma(l_targ)||` with `l_targ` of `dim1` rows.
pub fn trial_target(ring: &CoordinateRing, seed: u64, trial: u64) -> Result<QuadraticForm> {
    let l = ring.random_linear_tuple(ring.dim1(), sub_seed(seed, trial, 0))?;
    let f = sigma(ring, &l)?;
    let n = f.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::NonFiniteValue(format!("target norm {n}")));
    }
    Ok(f.scaled(1.0 / n))
}

/// Unit-norm random start of `k` forms for the `j`-th k value.
pub fn trial_start(
    ring: &CoordinateRing,
    seed: u64,
    trial: u64,
    j: usize,
    k: usize,
) -> Result<LinearTuple> {
    let l = ring.random_linear_tuple(k, sub_seed(seed, trial, j as u64 + 1))?;
    let n = l.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::NonFiniteValue(format!("start norm {n}")));
    }
    Ok(l.scaled(1.0 / n))
}

fn run_trial(ring: &CoordinateRing, cfg: &ExperimentConfig, trial: usize, j: usize) -> TrialResult {
    let k = cfg.k_values[j];
    let solve = || -> Result<solver::RunRecord> {
        let f = trial_target(ring, cfg.seed, trial as u64)?;
        let l0 = trial_start(ring, cfg.seed, trial as u64, j, k)?;
        let ctx = ObjectiveContext::new(ring, f, k)?;
        solver::minimize(&ctx, &l0, &cfg.solver)
    };
    match solve() {
        Ok(rec) => TrialResult {
            trial,
            k,
            status: rec.status,
            final_distance: Some(rec.final_distance),
            evals: rec.evals,
            wall_time: rec.wall_time,
            converged: rec.converged,
            error: rec.diagnostic,
        },
        Err(e) => {
            log::warn!("trial {trial}, k = {k}: {e}");
            TrialResult {
                trial,
                k,
                status: RunStatus::Unfinished,
                final_distance: None,
                evals: 0,
                wall_time: 0.0,
                converged: false,
                error: Some(e.to_string()),
            }
        }
    }
}

/// Runs every `(trial, k)` pair; the ring is built once and shared.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultsTable> {
    cfg.validate()?;
    let ring = CoordinateRing::build(&cfg.variety)?;
    let pairs: Vec<(usize, usize)> = (0..cfg.trials)
        .flat_map(|t| (0..cfg.k_values.len()).map(move |j| (t, j)))
        .collect();
    let run = || -> Vec<TrialResult> {
        pairs
            .par_iter()
            .map(|&(t, j)| run_trial(&ring, cfg, t, j))
            .collect()
    };
    let trials = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    Ok(ResultsTable::aggregate(
        &cfg.variety.label(),
        &cfg.k_values,
        trials,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_seeds_differ() {
        let a = sub_seed(42, 0, 0);
        assert_ne!(a, sub_seed(42, 1, 0));
        assert_ne!(a, sub_seed(42, 0, 1));
        assert_ne!(a, sub_seed(43, 0, 0));
        assert_eq!(a, sub_seed(42, 0, 0));
    }

    #[test]
    fn normalization() {
        let ring = CoordinateRing::build(&VarietySpec::Veronese { m: 2, d: 2 }).unwrap();
        for t in 0..5 {
            assert!((trial_target(&ring, 7, t).unwrap().norm() - 1.0).abs() < 1e-12);
            assert!((trial_start(&ring, 7, t, 0, 3).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(VarietySpec::Veronese { m: 1, d: 2 }, vec![2]);
        assert!(cfg.validate().is_ok());
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.k_values = vec![];
        assert!(cfg.validate().is_err());
        cfg.k_values = vec![0];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn small_experiment_counts() {
        let mut cfg = ExperimentConfig::new(
            VarietySpec::Scroll {
                heights: vec![1, 2],
            },
            vec![3, 4],
        );
        cfg.trials = 4;
        cfg.workers = Some(2);
        let table = run_experiment(&cfg).unwrap();
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert_eq!(row.successful + row.unfinished + row.spurious, 4);
        }
        let again = run_experiment(&cfg).unwrap();
        assert_eq!(table.counts(), again.counts());
    }
}
