use std::collections::BTreeMap;
use std::ops::Range;

use num_rational::BigRational;
use num_traits::Zero;

use super::NetworkGame;
use crate::error::{Error, Result};

/// Flattening of `(player, strategy)` pairs into variable indices: player
/// `i`'s variables `x_{i,1..=k_i}` occupy a contiguous block starting at
/// `Σ_{j<i} k_j`. Equations use the same flattening.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableLayout {
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl VariableLayout {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        let mut acc = 0;
        for &k in &dims {
            offsets.push(acc);
            acc += k;
        }
        offsets.push(acc);
        VariableLayout { dims, offsets }
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn players(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Variable index of `x_{player, strategy}` with `strategy` in `1..=k`.
    pub fn var(&self, player: usize, strategy: usize) -> usize {
        debug_assert!(strategy >= 1 && strategy <= self.dims[player]);
        self.offsets[player] + strategy - 1
    }

    pub fn block(&self, player: usize) -> Range<usize> {
        self.offsets[player]..self.offsets[player + 1]
    }

    pub fn player_of(&self, var: usize) -> usize {
        // offsets is sorted; last offset equal to or below var owns it
        match self.offsets.binary_search(&var) {
            Ok(mut p) => {
                // skip zero-width blocks (not constructible through games, but cheap)
                while self.dims.get(p) == Some(&0) {
                    p += 1;
                }
                p
            }
            Err(p) => p - 1,
        }
    }

    /// 1-based strategy number of a variable.
    pub fn strategy_of(&self, var: usize) -> usize {
        var - self.offsets[self.player_of(var)] + 1
    }

    pub fn all_unit(&self) -> bool {
        self.dims.iter().all(|&k| k == 1)
    }

    /// Variable name `x_i_s` with 1-based player and strategy.
    pub fn var_name(&self, var: usize) -> String {
        format!("x_{}_{}", self.player_of(var) + 1, self.strategy_of(var))
    }

    /// Equation name `f_i_s`, same numbering as variables.
    pub fn eq_name(&self, eq: usize) -> String {
        format!("f_{}_{}", self.player_of(eq) + 1, self.strategy_of(eq))
    }
}

/// Multilinear monomial stored as its sorted variable support (the
/// exponent vector has a 1 exactly at these indices).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut vars: Vec<usize>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn exponent_vector(&self, d: usize) -> Vec<u8> {
        let mut e = vec![0; d];
        for &v in &self.0 {
            e[v] = 1;
        }
        e
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coef * mono`, dropping the term if it cancels to zero.
    pub fn add_term(&mut self, mono: Monomial, coef: BigRational) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(coef);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Option<&BigRational> {
        self.terms.get(mono)
    }

    /// Total degree (largest monomial support).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Sorted set of variables appearing in some monomial.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self.terms.keys().flat_map(|m| m.0.iter().copied()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }
}

/// The `d` indifference polynomials of a game, indexed with the same
/// flattening as the variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSystem {
    layout: VariableLayout,
    equations: Vec<Polynomial>,
}

impl PolynomialSystem {
    pub fn new(layout: VariableLayout, equations: Vec<Polynomial>) -> Result<Self> {
        if equations.len() != layout.dim() {
            return Err(Error::invalid(format!(
                "{} equations for {} variables",
                equations.len(),
                layout.dim()
            )));
        }
        let d = layout.dim();
        for (e, p) in equations.iter().enumerate() {
            if let Some(v) = p.variables().into_iter().find(|&v| v >= d) {
                return Err(Error::invalid(format!("equation {e} uses unknown variable {v}")));
            }
        }
        Ok(PolynomialSystem { layout, equations })
    }

    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn equation(&self, eq: usize) -> &Polynomial {
        &self.equations[eq]
    }

    /// Equations that cancelled to the zero polynomial.
    pub fn cancelled(&self) -> Vec<usize> {
        (0..self.equations.len())
            .filter(|&e| self.equations[e].is_zero())
            .collect()
    }

    pub fn is_generic(&self) -> bool {
        self.equations.iter().all(|p| !p.is_zero())
    }

    /// Errors with [`Error::NonGeneric`] if any equation cancelled entirely.
    pub fn ensure_generic(&self) -> Result<()> {
        let cancelled = self.cancelled();
        if cancelled.is_empty() {
            Ok(())
        } else {
            let names: Vec<String> = cancelled.iter().map(|&e| self.layout.eq_name(e)).collect();
            Err(Error::NonGeneric(format!(
                "equation(s) {} cancelled to zero",
                names.join(", ")
            )))
        }
    }

    /// No monomial holds two variables of the same player block.
    pub fn is_blockwise_multilinear(&self) -> bool {
        self.equations.iter().all(|p| {
            p.terms().all(|(m, _)| {
                let mut players: Vec<usize> =
                    m.vars().iter().map(|&v| self.layout.player_of(v)).collect();
                let len = players.len();
                players.dedup();
                players.len() == len
            })
        })
    }
}

/// Expands the indifference equations `u_i(s, x_{-i}) - u_i(0, x_{-i})` for
/// every player `i` and strategy `s ≥ 1`, eliminating `x_{j,0} = 1 - Σ_t x_{j,t}`.
///
/// The payoff differences form a tensor over neighbor profiles. Substituting
/// the eliminated variable is a per-axis linear map: along each neighbor axis
/// the coefficient of `x_{j,t}` becomes `c[t] - c[0]` and the constant part
/// keeps `c[0]`. Terms that cancel are dropped.
pub fn build_indifference_system(game: &NetworkGame) -> PolynomialSystem {
    let layout = VariableLayout::new(game.strategy_dims().to_vec());
    let mut equations = Vec::with_capacity(layout.dim());
    for i in 0..game.players() {
        let table = game.payoff_table(i);
        let nbrs = &table.axes()[1..];
        let radices = &table.radices()[1..];
        let block = table.block_len();
        let base = &table.values()[..block];
        for s in 1..=game.strategy_dims()[i] {
            let row = &table.values()[s * block..(s + 1) * block];
            let mut coeffs: Vec<BigRational> =
                row.iter().zip(base).map(|(a, b)| a - b).collect();
            let mut stride = block;
            for &radix in radices {
                stride /= radix;
                for start in 0..block {
                    if !(start / stride).is_multiple_of(radix) {
                        continue;
                    }
                    for t in 1..radix {
                        let delta = coeffs[start].clone();
                        coeffs[start + t * stride] -= delta;
                    }
                }
            }
            let mut poly = Polynomial::new();
            for (idx, c) in coeffs.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut rest = idx;
                let mut vars = Vec::new();
                for pos in (0..nbrs.len()).rev() {
                    let t = rest % radices[pos];
                    rest /= radices[pos];
                    if t > 0 {
                        vars.push(layout.var(nbrs[pos], t));
                    }
                }
                poly.add_term(Monomial::new(vars), c);
            }
            equations.push(poly);
        }
    }
    PolynomialSystem { layout, equations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use num_bigint::BigInt;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn layout_flattening() {
        let l = VariableLayout::new(vec![2, 1, 3]);
        assert_eq!(l.dim(), 6);
        assert_eq!(l.var(0, 2), 1);
        assert_eq!(l.var(2, 1), 3);
        assert_eq!(l.player_of(3), 2);
        assert_eq!(l.player_of(2), 1);
        assert_eq!(l.strategy_of(5), 3);
        assert_eq!(l.var_name(4), "x_3_2");
    }

    /// Hand expansion of a single bilinear node: player 0 depends on players
    /// 1 and 2, payoff difference c(a,b) = u(1,a,b) - u(0,a,b).
    /// With x = x_{1,1}, y = x_{2,1}:
    ///   f = c00 (1-x)(1-y) + c01 (1-x) y + c10 x (1-y) + c11 x y
    ///     = c00 + (c10-c00) x + (c01-c00) y + (c11-c10-c01+c00) x y
    #[test]
    fn bilinear_node_matches_hand_expansion() {
        let g = DirectedGraph::new(3, [(1, 0), (2, 0)]).unwrap();
        // own=0 block then own=1 block; neighbor order (1, 2), player 2 fastest
        let u0 = vec![r(1), r(-2), r(3), r(5)];
        let u1 = vec![r(4), r(0), r(-1), r(2)];
        let table: Vec<_> = u0.iter().chain(u1.iter()).cloned().collect();
        let game = NetworkGame::new(
            g,
            vec![1, 1, 1],
            vec![table, vec![r(0), r(1)], vec![r(0), r(1)]],
        )
        .unwrap();
        let sys = build_indifference_system(&game);
        let f = sys.equation(0);
        let c: Vec<i64> = vec![4 - 1, 0 + 2, -1 - 3, 2 - 5]; // c00, c01, c10, c11
        let (c00, c01, c10, c11) = (c[0], c[1], c[2], c[3]);
        assert_eq!(f.len(), 4);
        assert_eq!(f.coefficient(&Monomial::one()), Some(&r(c00)));
        assert_eq!(f.coefficient(&Monomial::new(vec![1])), Some(&r(c10 - c00)));
        assert_eq!(f.coefficient(&Monomial::new(vec![2])), Some(&r(c01 - c00)));
        assert_eq!(
            f.coefficient(&Monomial::new(vec![1, 2])),
            Some(&r(c11 - c10 - c01 + c00))
        );
        // players 1 and 2 have no neighbors: constant equations u(1)-u(0) = 1
        assert_eq!(sys.equation(1).coefficient(&Monomial::one()), Some(&r(1)));
    }

    #[test]
    fn identical_rows_cancel() {
        let g = DirectedGraph::new(2, [(1, 0), (0, 1)]).unwrap();
        let game = NetworkGame::new(
            g,
            vec![1, 1],
            vec![vec![r(3), r(7), r(3), r(7)], vec![r(1), r(0), r(0), r(1)]],
        )
        .unwrap();
        let sys = build_indifference_system(&game);
        assert!(sys.equation(0).is_zero());
        assert!(!sys.is_generic());
        assert_eq!(sys.cancelled(), vec![0]);
        assert!(matches!(sys.ensure_generic(), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn three_strategy_neighbor_expansion() {
        // player 0 (k=1) depends on player 1 (k=2); c(t) = u(1,t) - u(0,t)
        // f = c0 (1 - y1 - y2) + c1 y1 + c2 y2
        let g = DirectedGraph::new(2, [(1, 0)]).unwrap();
        let game = NetworkGame::new(
            g,
            vec![1, 2],
            vec![
                vec![r(0), r(0), r(0), r(2), r(5), r(-1)],
                vec![r(0), r(1), r(2)],
            ],
        )
        .unwrap();
        let sys = build_indifference_system(&game);
        let f = sys.equation(0);
        assert_eq!(f.coefficient(&Monomial::one()), Some(&r(2)));
        assert_eq!(f.coefficient(&Monomial::new(vec![1])), Some(&r(3)));
        assert_eq!(f.coefficient(&Monomial::new(vec![2])), Some(&r(-3)));
        assert!(sys.is_blockwise_multilinear());
    }
}
