use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::NetworkGame;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Samples are rounded to this denominator so that every downstream
/// expansion stays exact.
pub const PAYOFF_DENOMINATOR: i64 = 1_000_000;

/// Uniform payoff distribution on `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformPayoffs {
    pub lo: f64,
    pub hi: f64,
}

impl UniformPayoffs {
    pub const PAPER_RANGE: UniformPayoffs = UniformPayoffs { lo: -5.0, hi: 5.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        Ok(UniformPayoffs { lo, hi })
    }
}

impl Default for UniformPayoffs {
    fn default() -> Self {
        Self::PAPER_RANGE
    }
}

/// Draws i.i.d. payoffs for every table entry, player by player in table
/// order, from a ChaCha8 stream seeded with `seed`.
pub fn sample_generic_payoffs(
    topology: &DirectedGraph,
    strategy_dims: &[usize],
    dist: UniformPayoffs,
    seed: u64,
) -> Result<NetworkGame> {
    UniformPayoffs::new(dist.lo, dist.hi)?;
    if strategy_dims.len() != topology.vertex_count() {
        return Err(Error::invalid("strategy_dims length must equal the player count"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo_q = (dist.lo * PAYOFF_DENOMINATOR as f64).ceil() as i64;
    let hi_q = (dist.hi * PAYOFF_DENOMINATOR as f64).floor() as i64;
    let denom = BigInt::from(PAYOFF_DENOMINATOR);
    let mut tables = Vec::with_capacity(strategy_dims.len());
    for i in 0..topology.vertex_count() {
        let size: usize = std::iter::once(i)
            .chain(topology.in_neighbors(i))
            .map(|p| strategy_dims[p] + 1)
            .product();
        let table = (0..size)
            .map(|_| {
                let x: f64 = rng.gen_range(dist.lo..=dist.hi);
                let q = ((x * PAYOFF_DENOMINATOR as f64).round() as i64).clamp(lo_q, hi_q);
                BigRational::new(BigInt::from(q), denom.clone())
            })
            .collect();
        tables.push(table);
    }
    NetworkGame::new(topology.clone(), strategy_dims.to_vec(), tables)
}

/// Per-trial seed derived from a master seed (SplitMix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
