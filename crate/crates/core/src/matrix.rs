//! Square matrices over exact dyadics and over `f64`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Default bound on mantissa bits per entry for exact powers and products.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 16;

/// Square matrix of non-negative dyadic rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicMatrix {
    dim: usize,
    entries: Vec<Dyadic>,
}

impl DyadicMatrix {
    pub fn zeros(dim: usize) -> Self {
        DyadicMatrix {
            dim,
            entries: vec![Dyadic::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Dyadic::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Dyadic>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(DyadicMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Dyadic {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Dyadic) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: &Dyadic) {
        self.entries[row * self.dim + col] += value;
    }

    pub fn entries(&self) -> &[Dyadic] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[Dyadic] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<Dyadic>> {
        (0..self.dim).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<Dyadic> {
        (0..self.dim).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn total(&self) -> Dyadic {
        self.entries.iter().sum()
    }

    /// Largest entry together with its (row, col) position.
    pub fn max_entry(&self) -> (Dyadic, (usize, usize)) {
        let mut best = (Dyadic::zero(), (0, 0));
        for (i, x) in self.entries.iter().enumerate() {
            if *x > best.0 {
                best = (x.clone(), (i / self.dim, i % self.dim));
            }
        }
        best
    }

    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(Dyadic::bits).max().unwrap_or(0)
    }

    /// Exact product with a fixed summation order per entry.
    pub fn mul(&self, rhs: &DyadicMatrix) -> DyadicMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = DyadicMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Dyadic]) -> Vec<Dyadic> {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn mul_checked(&self, rhs: &DyadicMatrix, bit_budget: u64) -> Result<DyadicMatrix> {
        let out = self.mul(rhs);
        if out.max_bits() > bit_budget {
            return Err(Error::BitBudgetExceeded { budget: bit_budget });
        }
        Ok(out)
    }

    /// Exact `self^n` by repeated squaring; `n = 0` gives the identity.
    pub fn pow(&self, n: u64, bit_budget: u64) -> Result<DyadicMatrix> {
        let mut result = DyadicMatrix::identity(self.dim);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_checked(&base, bit_budget)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_checked(&base, bit_budget)?;
            }
        }
        Ok(result)
    }

    pub fn to_float(&self) -> FloatMatrix {
        FloatMatrix {
            dim: self.dim,
            data: self.entries.iter().map(Dyadic::to_f64).collect(),
        }
    }

    /// Entrywise `self <= other`.
    pub fn dominated_by(&self, other: &DyadicMatrix) -> bool {
        self.dim == other.dim && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    pub fn scale_u64(&self, k: u64) -> DyadicMatrix {
        DyadicMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x.mul_u64(k)).collect(),
        }
    }
}

impl fmt::Display for DyadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dense square `f64` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl FloatMatrix {
    pub fn zeros(dim: usize) -> Self {
        FloatMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(FloatMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> FloatMatrix {
        let n = self.dim;
        let mut out = FloatMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &FloatMatrix) -> FloatMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = FloatMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn scale(&self, k: f64) -> FloatMatrix {
        FloatMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn add_identity(&self, k: f64) -> FloatMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += k;
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.dim.max(1))
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Checks squareness (by construction) and entrywise non-negativity.
    pub fn check_nonnegative(&self) -> Result<()> {
        for (i, &x) in self.data.iter().enumerate() {
            if !(x >= 0.0) {
                return Err(Error::NegativeEntry {
                    row: i / self.dim,
                    col: i % self.dim,
                    value: x,
                });
            }
        }
        Ok(())
    }

    /// Adjacency structure of the non-zero pattern.
    pub fn support(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).filter(|&j| self.data[i * n + j] != 0.0).collect())
            .collect()
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, idx: &[usize]) -> FloatMatrix {
        let m = idx.len();
        let mut out = FloatMatrix::zeros(m);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.data[a * m + b] = self.get(i, j);
            }
        }
        out
    }

    /// Entrywise `self <= other`.
    pub fn dominated_by(&self, other: &FloatMatrix) -> bool {
        self.dim == other.dim && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }
}
