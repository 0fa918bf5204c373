//! Monte Carlo sweeps: random games on one topology, each solved
//! numerically and compared with the exact degree.

use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::tracker::{solve_system, SolveOptions, Tolerances};
use crate::degree::structural_degree;
use crate::error::{Error, Result};
use crate::game::{build_indifference_system, derive_seed, sample_generic_payoffs, Topology, UniformPayoffs};
use crate::game::topology_factory;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub topology: Topology,
    /// Strategy dimension used for every player.
    pub k: usize,
    pub trials: usize,
    pub payoffs: UniformPayoffs,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl SweepConfig {
    pub fn new(topology: Topology, trials: usize, seed: u64) -> Self {
        SweepConfig {
            topology,
            k: 1,
            trials,
            payoffs: UniformPayoffs::PAPER_RANGE,
            seed,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub torus: usize,
    pub real: usize,
    pub feasible: usize,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepAggregate {
    pub topology: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub theory_degree: String,
    pub max_torus: usize,
    pub attain_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<TrialRow>,
    pub aggregate: SweepAggregate,
    pub theory: BigRational,
}

/// Size parameter reported as `N`: the cycle length for the one-parameter
/// families, the player count otherwise.
fn size_parameter(t: &Topology, players: usize) -> usize {
    match t {
        Topology::Cycle(n) | Topology::StdPrism(n) | Topology::CrossPrism(n) => *n,
        Topology::Cartesian { n, .. } => *n,
        _ => players,
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    if config.trials == 0 {
        return Err(Error::invalid("a sweep needs at least one trial"));
    }
    let graph = topology_factory(&config.topology)?;
    let dims = vec![config.k; graph.vertex_count()];
    let theory = structural_degree(&graph, &dims)?;
    let rows: Vec<TrialRow> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(config.seed, trial as u64);
            let start = Instant::now();
            let game = sample_generic_payoffs(&graph, &dims, config.payoffs, seed)?;
            let system = build_indifference_system(&game);
            let opts = SolveOptions {
                tolerances: config.tolerances,
                ..SolveOptions::with_seed(seed)
            };
            let set = solve_system(&system, &opts)?;
            Ok(TrialRow {
                trial,
                seed,
                torus: set.counts.torus,
                real: set.counts.real,
                feasible: set.counts.feasible,
                runtime_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect::<Result<_>>()?;
    let max_torus = rows.iter().map(|r| r.torus).max().unwrap_or(0);
    let attained = rows
        .iter()
        .filter(|r| BigRational::from_integer(r.torus.into()) == theory)
        .count();
    let aggregate = SweepAggregate {
        topology: config.topology.name().to_string(),
        n: size_parameter(&config.topology, graph.vertex_count()),
        theory_degree: theory.to_string(),
        max_torus,
        attain_fraction: attained as f64 / rows.len() as f64,
    };
    Ok(SweepResult {
        rows,
        aggregate,
        theory,
    })
}

impl SweepResult {
    /// `trial,seed,torus,real,runtime_ms`, one row per trial.
    pub fn trials_csv(&self) -> String {
        let mut out = String::from("trial,seed,torus,real,runtime_ms\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{:.3}\n",
                r.trial, r.seed, r.torus, r.real, r.runtime_ms
            ));
        }
        out
    }

    /// Trial table without the timing column, for reproducibility checks.
    pub fn deterministic_csv(&self) -> String {
        let mut out = String::from("trial,seed,torus,real\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.trial, r.seed, r.torus, r.real));
        }
        out
    }

    /// Plot data: real count per trial against the constant theory line.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from("trial,real,theory\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.trial, r.real, self.aggregate.theory_degree));
        }
        out
    }

    pub fn aggregate_json(&self) -> String {
        serde_json::to_string_pretty(&self.aggregate).expect("aggregate serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_is_deterministic() {
        let cfg = SweepConfig::new(Topology::CrossPrism(3), 1, 42);
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a.deterministic_csv(), b.deterministic_csv());
        assert_eq!(a.aggregate, b.aggregate);
        assert_eq!(a.aggregate.theory_degree, "8");
        assert!(a.rows[0].torus <= 8);
        assert!(a.trials_csv().starts_with("trial,seed,torus,real,runtime_ms\n"));
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_sweep(&SweepConfig::new(Topology::Cycle(3), 0, 1)).is_err());
    }
}
