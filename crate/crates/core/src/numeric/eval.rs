//! Floating-point evaluation of a polynomial system and its Jacobian.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::game::PolynomialSystem;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Debug)]
struct Term {
    coef: f64,
    vars: Vec<usize>,
}

/// A polynomial system compiled to double-precision terms.
#[derive(Clone, Debug)]
pub struct CompiledSystem {
    dim: usize,
    equations: Vec<Vec<Term>>,
    degrees: Vec<u32>,
}

impl CompiledSystem {
    pub fn new(system: &PolynomialSystem) -> Result<Self> {
        let mut equations = Vec::with_capacity(system.dim());
        for (e, poly) in system.equations().iter().enumerate() {
            let mut terms = Vec::with_capacity(poly.len());
            for (mono, coef) in poly.terms() {
                let c = coef.to_f64().filter(|c| c.is_finite()).ok_or_else(|| {
                    Error::invalid(format!(
                        "coefficient of {} is not a finite double",
                        system.layout().eq_name(e)
                    ))
                })?;
                terms.push(Term {
                    coef: c,
                    vars: mono.vars().to_vec(),
                });
            }
            equations.push(terms);
        }
        let degrees = system.equations().iter().map(|p| p.degree() as u32).collect();
        Ok(CompiledSystem {
            dim: system.dim(),
            equations,
            degrees,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total degree of every equation.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn eval(&self, x: &CVector) -> CVector {
        CVector::from_iterator(
            self.dim,
            self.equations.iter().map(|terms| {
                terms
                    .iter()
                    .map(|t| t.vars.iter().fold(Complex64::new(t.coef, 0.0), |acc, &v| acc * x[v]))
                    .sum::<Complex64>()
            }),
        )
    }

    pub fn jacobian(&self, x: &CVector) -> CMatrix {
        let mut j = CMatrix::zeros(self.dim, self.dim);
        for (e, terms) in self.equations.iter().enumerate() {
            for t in terms {
                for (pos, &v) in t.vars.iter().enumerate() {
                    let mut d = Complex64::new(t.coef, 0.0);
                    for (q, &w) in t.vars.iter().enumerate() {
                        if q != pos {
                            d *= x[w];
                        }
                    }
                    j[(e, v)] += d;
                }
            }
        }
        j
    }
}

pub fn max_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
