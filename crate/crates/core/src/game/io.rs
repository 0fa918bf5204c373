//! JSON game files.
//!
//! ```json
//! {"players": 2, "strategy_dims": [1, 1], "edges": [[1, 0], [0, 1]],
//!  "payoffs": {"0": [1, -1, -1, 1], "1": ["1/2", 0, 0, "-3/4"]}}
//! ```
//!
//! Indices are 0-based on disk. An edge `[j, i]` means player `i` depends
//! on player `j`. Each payoff array is row-major over the closed
//! neighborhood with the player's own strategy as the slowest axis and the
//! in-neighbors following in ascending order. Entries are JSON numbers
//! (read exactly from their decimal text) or strings `"p/q"`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::NetworkGame;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameFile {
    pub players: usize,
    pub strategy_dims: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub payoffs: BTreeMap<String, Vec<Value>>,
}

impl GameFile {
    pub fn from_game(game: &NetworkGame) -> Self {
        let payoffs = (0..game.players())
            .map(|p| {
                let vals = game.payoff_table(p).values().iter().map(rational_to_json).collect();
                (p.to_string(), vals)
            })
            .collect();
        GameFile {
            players: game.players(),
            strategy_dims: game.strategy_dims().to_vec(),
            edges: game.graph().edges().map(|(a, b)| [a, b]).collect(),
            payoffs,
        }
    }

    pub fn into_game(self) -> Result<NetworkGame> {
        let graph = DirectedGraph::new(self.players, self.edges.iter().map(|&[a, b]| (a, b)))?;
        let mut tables = Vec::with_capacity(self.players);
        for p in 0..self.players {
            let raw = self
                .payoffs
                .get(&p.to_string())
                .ok_or_else(|| Error::Parse(format!("missing payoffs for player {p}")))?;
            let table = raw
                .iter()
                .map(json_to_rational)
                .collect::<Result<Vec<_>>>()?;
            tables.push(table);
        }
        if self.payoffs.len() != self.players {
            return Err(Error::Parse(format!(
                "payoffs given for {} players, expected {}",
                self.payoffs.len(),
                self.players
            )));
        }
        NetworkGame::new(graph, self.strategy_dims, tables)
    }

    pub fn parse(text: &str) -> Result<NetworkGame> {
        let file: GameFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("game file: {e}")))?;
        file.into_game()
    }

    pub fn to_json(game: &NetworkGame) -> String {
        serde_json::to_string_pretty(&Self::from_game(game)).expect("game serializes")
    }
}

fn rational_to_json(q: &BigRational) -> Value {
    if q.is_integer() {
        if let Ok(v) = i64::try_from(q.to_integer()) {
            return Value::from(v);
        }
    }
    Value::String(q.to_string())
}

fn json_to_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("payoff entry {other} is not a number"))),
    }
}

/// Parses `"p"`, `"p/q"`, or a decimal literal such as `"-2.5e-3"` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    if neg {
        value = -value;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{sample_generic_payoffs, topology_factory, Topology, UniformPayoffs};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-2.5e-3").unwrap(), q(-1, 400));
        assert_eq!(parse_rational("1.5E2").unwrap(), q(150, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn game_file_roundtrip() {
        let g = topology_factory(&Topology::StdPrism(3)).unwrap();
        let game = sample_generic_payoffs(&g, &[1; 6], UniformPayoffs::PAPER_RANGE, 5).unwrap();
        let text = GameFile::to_json(&game);
        assert_eq!(GameFile::parse(&text).unwrap(), game);
    }

    #[test]
    fn reads_hand_written_file() {
        let text = r#"{"players": 2, "strategy_dims": [1, 1], "edges": [[1, 0], [0, 1]],
            "payoffs": {"0": [1, -1, -1, 1], "1": ["1/2", 0, 0.25, -1]}}"#;
        let game = GameFile::parse(text).unwrap();
        assert_eq!(game.payoff_table(1).values()[0], q(1, 2));
        assert_eq!(game.payoff_table(1).values()[2], q(1, 4));
        assert!(GameFile::parse(r#"{"players": 1, "strategy_dims": [1], "edges": [], "payoffs": {}}"#).is_err());
    }
}
