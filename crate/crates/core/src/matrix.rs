//! Dense square integer matrices and the plain-text matrix format.
//!
//! The text format is one header line holding the dimension `d`, followed by
//! `d` lines of space-separated integer entries. Export output is
//! byte-stable: entries are written with `Display`, rows end with `\n`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// The all-ones matrix `J_n`.
    pub fn ones(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![1; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "matrix is not square: row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(IntMatrix { n, entries })
    }

    /// Permutation matrix with a one at `(i, perm[i])`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len());
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.n + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(|&v| v == 0 || v == 1)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &IntMatrix) -> Self {
        let (a, b) = (self.n, other.n);
        let mut out = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                if x == 0 {
                    continue;
                }
                for p in 0..b {
                    for q in 0..b {
                        out.set(i * b + p, j * b + q, x * other.get(p, q));
                    }
                }
            }
        }
        out
    }

    /// Principal submatrix on the given (ordered) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len());
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                out.set(r, c, self.get(i, j));
            }
        }
        out
    }

    /// Reorders rows by `row_perm` and columns by `col_perm`
    /// (`out[r][c] = self[row_perm[r]][col_perm[c]]`).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for (r, &i) in row_perm.iter().enumerate() {
            for (c, &j) in col_perm.iter().enumerate() {
                out.set(r, c, self.get(i, j));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension header {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for (r, line) in lines.enumerate() {
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("row {r}: bad entry {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse(format!(
                "header declares {n} rows but {} were given",
                rows.len()
            )));
        }
        Self::from_rows(&rows)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({}x{})", self.n, self.n)?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}
