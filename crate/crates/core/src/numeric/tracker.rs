//! Total-degree homotopy continuation.
//!
//! `H(x, t) = (1 - t) γ g(x) + t f(x)` with start system
//! `g_i = x_i^{d_i} - 1`, tracked from `t = 0` to `t = 1` by an Euler
//! predictor and a Newton corrector with adaptive step size.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::eval::{max_norm, CMatrix, CVector, CompiledSystem};
use crate::error::{Error, Result};
use crate::game::{PolynomialSystem, VariableLayout};

pub const SOLVE_DIM_CAP: usize = 10;
pub const PATH_CAP: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Corrector stopping tolerance on the Newton update (relative).
    pub corrector: f64,
    /// Endpoint residual required after polishing.
    pub residual: f64,
    /// Endpoints closer than this (max norm) are the same solution.
    pub dedup: f64,
    pub torus: f64,
    pub real: f64,
    /// Paths whose max norm exceeds this are at infinity.
    pub divergence: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            corrector: 1e-10,
            residual: 1e-8,
            dedup: 1e-8,
            torus: 1e-10,
            real: 1e-6,
            divergence: 1e12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            tolerances: Tolerances::default(),
            initial_step: 0.01,
            max_step: 0.05,
            min_step: 1e-14,
            max_steps: 20_000,
        }
    }
}

impl SolveOptions {
    pub fn with_seed(seed: u64) -> Self {
        SolveOptions {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexPoint {
    pub coordinates: Vec<Complex64>,
    /// Max-norm residual of the target system.
    pub residual: f64,
    /// Infinity-norm condition number of the Jacobian.
    pub condition: f64,
    /// Index of the first path that reached this point.
    pub path: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolutionCounts {
    pub tracked: usize,
    pub converged: usize,
    pub at_infinity: usize,
    pub failed: usize,
    pub distinct: usize,
    pub torus: usize,
    pub real: usize,
    /// Real torus points inside the open probability simplices.
    pub feasible: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSet {
    pub points: Vec<ComplexPoint>,
    pub counts: SolutionCounts,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(skip)]
    layout: VariableLayout,
}

impl SolutionSet {
    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }
}

enum PathEnd {
    Finite(CVector),
    Infinity,
    Failed,
}

struct Homotopy<'a> {
    target: &'a CompiledSystem,
    gamma: Complex64,
    degrees: Vec<i32>,
}

impl Homotopy<'_> {
    fn start(&self, x: &CVector) -> CVector {
        CVector::from_iterator(
            x.len(),
            x.iter().zip(&self.degrees).map(|(z, &d)| z.powi(d) - 1.0),
        )
    }

    fn start_jacobian_diag(&self, x: &CVector) -> Vec<Complex64> {
        x.iter()
            .zip(&self.degrees)
            .map(|(z, &d)| z.powi(d - 1) * d as f64)
            .collect()
    }

    fn value(&self, x: &CVector, t: f64) -> CVector {
        self.start(x) * (self.gamma * (1.0 - t)) + self.target.eval(x) * Complex64::new(t, 0.0)
    }

    fn jacobian(&self, x: &CVector, t: f64) -> CMatrix {
        let mut j = self.target.jacobian(x) * Complex64::new(t, 0.0);
        let s = self.gamma * (1.0 - t);
        for (i, g) in self.start_jacobian_diag(x).into_iter().enumerate() {
            j[(i, i)] += s * g;
        }
        j
    }

    /// `∂H/∂t = f(x) - γ g(x)`.
    fn time_derivative(&self, x: &CVector) -> CVector {
        self.target.eval(x) - self.start(x) * self.gamma
    }
}

fn solve_linear(a: CMatrix, b: &CVector) -> Option<CVector> {
    let sol = a.lu().solve(b)?;
    sol.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(sol)
}

fn correct(h: &Homotopy, mut x: CVector, t: f64, tol: f64) -> Option<CVector> {
    let mut prev = f64::INFINITY;
    for _ in 0..4 {
        let delta = solve_linear(h.jacobian(&x, t), &h.value(&x, t))?;
        let step = max_norm(&delta);
        x -= delta;
        if step <= tol * (1.0 + max_norm(&x)) {
            return Some(x);
        }
        if step > 0.5 * prev {
            return None;
        }
        prev = step;
    }
    None
}

fn track(h: &Homotopy, start: CVector, opts: &SolveOptions) -> PathEnd {
    let tol = opts.tolerances;
    let mut x = start;
    let mut t = 0.0f64;
    let mut step = opts.initial_step;
    let mut streak = 0;
    for _ in 0..opts.max_steps {
        if t >= 1.0 {
            return PathEnd::Finite(x);
        }
        let dt = step.min(1.0 - t);
        let t1 = if dt >= 1.0 - t { 1.0 } else { t + dt };
        let advanced = solve_linear(h.jacobian(&x, t), &(-h.time_derivative(&x)))
            .map(|dx| &x + dx * Complex64::new(t1 - t, 0.0))
            .and_then(|guess| {
                let scale = 1.0 + max_norm(&x);
                let corrected = correct(h, guess, t1, tol.corrector)?;
                // reject steps that jump far relative to the path scale
                (max_norm(&(&corrected - &x)) <= scale).then_some(corrected)
            });
        match advanced {
            Some(next) => {
                x = next;
                t = t1;
                streak += 1;
                if streak >= 3 {
                    step = (step * 2.0).min(opts.max_step);
                    streak = 0;
                }
                if max_norm(&x) > tol.divergence {
                    return PathEnd::Infinity;
                }
            }
            None => {
                step /= 2.0;
                streak = 0;
                if step < opts.min_step {
                    return if max_norm(&x) > tol.divergence.sqrt() {
                        PathEnd::Infinity
                    } else {
                        PathEnd::Failed
                    };
                }
            }
        }
    }
    PathEnd::Failed
}

/// Newton iterations on the target system until the residual stops
/// improving. Returns the point and its residual.
fn polish(f: &CompiledSystem, mut x: CVector) -> (CVector, f64) {
    let mut res = max_norm(&f.eval(&x));
    for _ in 0..8 {
        let Some(delta) = solve_linear(f.jacobian(&x), &f.eval(&x)) else {
            break;
        };
        let cand = &x - delta;
        let r = max_norm(&f.eval(&cand));
        if r.is_nan() || r >= res {
            break;
        }
        x = cand;
        res = r;
        if res < 1e-14 * (1.0 + max_norm(&x)) {
            break;
        }
    }
    (x, res)
}

fn condition(j: &CMatrix) -> f64 {
    let norm = |m: &CMatrix| {
        m.row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    match j.clone().try_inverse() {
        Some(inv) => norm(j) * norm(&inv),
        None => f64::INFINITY,
    }
}

fn start_points(degrees: &[u32]) -> Result<Vec<Vec<Complex64>>> {
    let total = degrees.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d as usize));
    match total {
        Some(n) if n <= PATH_CAP => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "total-degree path count",
                size: total.unwrap_or(usize::MAX),
                cap: PATH_CAP,
            })
        }
    }
    let mut points = vec![Vec::new()];
    for &d in degrees {
        let roots: Vec<Complex64> = (0..d)
            .map(|r| Complex64::from_polar(1.0, TAU * r as f64 / d as f64))
            .collect();
        points = points
            .into_iter()
            .flat_map(|p| {
                roots.iter().map(move |&z| {
                    let mut q = p.clone();
                    q.push(z);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

/// Finds the isolated complex solutions of the system by tracking all
/// `Π d_i` total-degree paths.
pub fn solve_system(system: &PolynomialSystem, opts: &SolveOptions) -> Result<SolutionSet> {
    let d = system.dim();
    if d == 0 {
        return Err(Error::invalid("cannot solve an empty system"));
    }
    Error::check_cap("numeric solve dimension", d, SOLVE_DIM_CAP)?;
    let target = CompiledSystem::new(system)?;
    let tol = opts.tolerances;
    let layout = system.layout().clone();
    if target.degrees().contains(&0) {
        // a nonzero constant equation has no solutions; a zero one is non-generic
        system.ensure_generic()?;
        return Ok(SolutionSet {
            points: Vec::new(),
            counts: SolutionCounts::default(),
            seed: opts.seed,
            tolerances: tol,
            layout,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let gamma = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    let homotopy = Homotopy {
        target: &target,
        gamma,
        degrees: target.degrees().iter().map(|&d| d as i32).collect(),
    };
    let starts = start_points(target.degrees())?;
    let ends: Vec<PathEnd> = starts
        .into_par_iter()
        .map(|s| track(&homotopy, CVector::from_vec(s), opts))
        .collect();

    let mut counts = SolutionCounts {
        tracked: ends.len(),
        ..SolutionCounts::default()
    };
    let mut points: Vec<ComplexPoint> = Vec::new();
    for (path, end) in ends.into_iter().enumerate() {
        let x = match end {
            PathEnd::Infinity => {
                counts.at_infinity += 1;
                continue;
            }
            PathEnd::Failed => {
                counts.failed += 1;
                continue;
            }
            PathEnd::Finite(x) => x,
        };
        let (x, residual) = polish(&target, x);
        if residual.is_nan() || residual >= tol.residual || max_norm(&x) > tol.divergence {
            if max_norm(&x) > tol.divergence.sqrt() {
                counts.at_infinity += 1;
            } else {
                counts.failed += 1;
            }
            continue;
        }
        counts.converged += 1;
        let duplicate = points.iter().any(|p| {
            p.coordinates
                .iter()
                .zip(x.iter())
                .all(|(a, b)| (a - b).norm() < tol.dedup)
        });
        if !duplicate {
            points.push(ComplexPoint {
                condition: condition(&target.jacobian(&x)),
                coordinates: x.iter().copied().collect(),
                residual,
                path,
            });
        }
    }
    let mut set = SolutionSet {
        points,
        counts,
        seed: opts.seed,
        tolerances: tol,
        layout,
    };
    let c = classify_solutions(&set, tol.torus, tol.real);
    set.counts.distinct = set.points.len();
    set.counts.torus = c.torus;
    set.counts.real = c.real;
    set.counts.feasible = c.feasible;
    Ok(set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub torus: usize,
    pub real: usize,
    pub feasible: usize,
}

fn is_torus(p: &ComplexPoint, layout: &VariableLayout, eps: f64) -> bool {
    let x = &p.coordinates;
    x.iter().all(|z| z.norm() > eps)
        && (0..layout.players()).all(|i| {
            let s: Complex64 = layout.block(i).map(|v| x[v]).sum();
            (Complex64::new(1.0, 0.0) - s).norm() > eps
        })
}

fn is_real(p: &ComplexPoint, eps: f64) -> bool {
    p.coordinates.iter().all(|z| z.im.abs() < eps)
}

fn is_feasible(p: &ComplexPoint, layout: &VariableLayout) -> bool {
    let x = &p.coordinates;
    (0..layout.players()).all(|i| {
        let block: Vec<f64> = layout.block(i).map(|v| x[v].re).collect();
        let rest = 1.0 - block.iter().sum::<f64>();
        block.iter().all(|&v| v > 0.0 && v < 1.0) && rest > 0.0 && rest < 1.0
    })
}

/// Counts torus points (all coordinates and every eliminated `x_{i,0}`
/// nonzero), real torus points, and real torus points that are interior
/// points of the strategy simplices.
pub fn classify_solutions(set: &SolutionSet, torus_eps: f64, real_eps: f64) -> Classification {
    let mut c = Classification {
        torus: 0,
        real: 0,
        feasible: 0,
    };
    for p in &set.points {
        if !is_torus(p, &set.layout, torus_eps) {
            continue;
        }
        c.torus += 1;
        if is_real(p, real_eps) {
            c.real += 1;
            if is_feasible(p, &set.layout) {
                c.feasible += 1;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_indifference_system, cyclic_matching_pennies};

    #[test]
    fn matching_pennies_single_solution() {
        for n in 2..=5 {
            let sys = build_indifference_system(&cyclic_matching_pennies(n).unwrap());
            let set = solve_system(&sys, &SolveOptions::with_seed(3)).unwrap();
            assert_eq!(set.counts.torus, 1);
            assert_eq!(set.counts.real, 1);
            assert_eq!(set.counts.feasible, 1);
            for z in &set.points[0].coordinates {
                assert!((z - 0.5).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn start_points_are_roots_of_unity() {
        let pts = start_points(&[2, 3]).unwrap();
        assert_eq!(pts.len(), 6);
        for p in &pts {
            assert!((p[0].powi(2) - 1.0).norm() < 1e-12);
            assert!((p[1].powi(3) - 1.0).norm() < 1e-12);
        }
        assert!(start_points(&[2; 17]).is_err());
    }

    #[test]
    fn classification_flags() {
        let layout = VariableLayout::new(vec![1, 1]);
        let pt = |a: f64, b: f64, im: f64| ComplexPoint {
            coordinates: vec![Complex64::new(a, im), Complex64::new(b, 0.0)],
            residual: 0.0,
            condition: 1.0,
            path: 0,
        };
        let set = SolutionSet {
            points: vec![pt(0.0, 0.3, 0.0), pt(0.2, 0.3, 0.0), pt(1.0, 0.5, 0.0), pt(0.2, 2.0, 0.5)],
            counts: SolutionCounts::default(),
            seed: 0,
            tolerances: Tolerances::default(),
            layout,
        };
        let c = classify_solutions(&set, 1e-10, 1e-6);
        // zero coordinate and x_{1,0} = 0 are excluded
        assert_eq!(c, Classification { torus: 2, real: 1, feasible: 1 });
        assert_eq!(classify_solutions(&set, 1e-10, 1e-6), c);
    }
}
