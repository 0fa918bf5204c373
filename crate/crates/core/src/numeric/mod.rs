//! Numerical verification: homotopy continuation on the indifference
//! system, solution classification, solver-input export and Monte Carlo
//! sweeps.

mod eval;
mod export;
mod sweep;
mod tracker;

pub use eval::CompiledSystem;
pub use export::{export_solver_input, parse_solver_input, solver_input_text};
pub use sweep::{run_sweep, SweepAggregate, SweepConfig, SweepResult, TrialRow};
pub use tracker::{
    classify_solutions, solve_system, Classification, ComplexPoint, SolutionCounts, SolutionSet,
    SolveOptions, Tolerances, PATH_CAP, SOLVE_DIM_CAP,
};
