//! Exact matrix permanents.
//!
//! [`permanent_ryser`] uses Ryser's inclusion–exclusion over column subsets
//! visited in Gray-code order, so each step adds or removes one column from
//! the running row sums. Terms are accumulated in `i128` and spill into a
//! `BigInt` on overflow, so no intermediate ever wraps.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Hard dimension cap for the Ryser permanent.
pub const RYSER_CAP: usize = 30;
/// Hard dimension cap for the permutation-sum oracle.
pub const NAIVE_CAP: usize = 10;

/// Below this dimension the subset loop runs on one thread.
const PARALLEL_MIN_DIM: usize = 14;

#[derive(Default)]
struct Accumulator {
    small: i128,
    big: BigInt,
}

impl Accumulator {
    fn add_small(&mut self, v: i128) {
        match self.small.checked_add(v) {
            Some(s) => self.small = s,
            None => {
                self.big += BigInt::from(self.small);
                self.small = v;
            }
        }
    }

    fn add_big(&mut self, v: BigInt) {
        self.big += v;
    }

    fn finish(self) -> BigInt {
        self.big + BigInt::from(self.small)
    }
}

fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Sum of `(-1)^{|S|} Π_i rowsum_i(S)` over Gray-code indices `start..end`.
fn ryser_range(a: &IntMatrix, start: u64, end: u64) -> BigInt {
    let n = a.dim();
    let mut sums = vec![0i128; n];
    let first = gray(start);
    for c in 0..n {
        if first >> c & 1 == 1 {
            for (r, s) in sums.iter_mut().enumerate() {
                *s += a.get(r, c) as i128;
            }
        }
    }
    let mut acc = Accumulator::default();
    let add_term = |sums: &[i128], subset: u64, acc: &mut Accumulator| {
        let negative = subset.count_ones() % 2 == 1;
        let mut prod: Option<i128> = Some(1);
        for &s in sums {
            if s == 0 {
                return;
            }
            prod = prod.and_then(|p| p.checked_mul(s));
            if prod.is_none() {
                break;
            }
        }
        match prod {
            Some(p) => acc.add_small(if negative { -p } else { p }),
            None => {
                let p: BigInt = sums.iter().map(|&s| BigInt::from(s)).product();
                acc.add_big(if negative { -p } else { p });
            }
        }
    };
    add_term(&sums, first, &mut acc);
    for k in start + 1..end {
        let col = k.trailing_zeros() as usize;
        let subset = gray(k);
        let sign: i128 = if subset >> col & 1 == 1 { 1 } else { -1 };
        for (r, s) in sums.iter_mut().enumerate() {
            *s += sign * a.get(r, col) as i128;
        }
        add_term(&sums, subset, &mut acc);
    }
    acc.finish()
}

pub fn permanent_ryser(a: &IntMatrix) -> Result<BigInt> {
    let n = a.dim();
    Error::check_cap("permanent dimension", n, RYSER_CAP)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let total = 1u64 << n;
    let sum = if n < PARALLEL_MIN_DIM {
        ryser_range(a, 0, total)
    } else {
        let chunks = 256u64;
        let size = total / chunks;
        (0..chunks)
            .into_par_iter()
            .map(|c| ryser_range(a, c * size, (c + 1) * size))
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    };
    Ok(if n % 2 == 1 { -sum } else { sum })
}

/// Oracle: sums `Π a[i][σ(i)]` over all `n!` permutations (Heap's order).
pub fn permanent_naive(a: &IntMatrix) -> Result<BigInt> {
    let n = a.dim();
    Error::check_cap("permanent oracle dimension", n, NAIVE_CAP)?;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::zero();
    let mut term = |p: &[usize]| {
        let mut prod = BigInt::one();
        for (r, &c) in p.iter().enumerate() {
            let v = a.get(r, c);
            if v == 0 {
                return;
            }
            prod *= v;
        }
        total += prod;
    };
    // iterative Heap's algorithm
    let mut counters = vec![0usize; n];
    term(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            term(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// Floating-point Ryser permanent, used only for diagnostics.
pub fn permanent_f64(a: &[Vec<f64>]) -> Result<f64> {
    let n = a.len();
    Error::check_cap("permanent dimension", n, RYSER_CAP)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut sums = vec![0f64; n];
    let mut total = 0f64;
    for k in 1u64..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        let subset = gray(k);
        let sign = if subset >> col & 1 == 1 { 1.0 } else { -1.0 };
        for (r, s) in sums.iter_mut().enumerate() {
            *s += sign * a[r][col];
        }
        let prod: f64 = sums.iter().product();
        if subset.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    Ok(if n % 2 == 1 { -total } else { total })
}
