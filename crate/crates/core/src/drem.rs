//! Dynamic regressor extension and mixing.
//!
//! A q-dimensional LRE `y = φᵀθ` is extended by stacking delayed copies of
//! `(φᵀ, y)` into a square system `Φ_e θ = Y_e`, then mixed by multiplying with
//! `adj(Φ_e)`. Since `adj(Φ_e)·Φ_e = det(Φ_e)·I` this yields q decoupled
//! scalar LREs `Y_i = Δ·θ_i` sharing `Δ = det(Φ_e)`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::lre::VectorLreSample;
use crate::scalar::Scalar;

/// Largest dimension handled by the cofactor expansion.
pub const MAX_DIM: usize = 5;

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + *a * *b))
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).fold(T::zero(), |acc, k| acc + self[(i, k)] * other[(k, j)]);
            }
        }
        out
    }
}

impl<T> std::ops::Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

// Laplace expansion along the first of the selected rows.
fn cofactor_det<T: Scalar>(m: &SquareMatrix<T>, rows: &[usize], cols: &[usize]) -> T {
    match rows.len() {
        0 => T::one(),
        1 => m[(rows[0], cols[0])],
        2 => {
            m[(rows[0], cols[0])] * m[(rows[1], cols[1])] - m[(rows[0], cols[1])] * m[(rows[1], cols[0])]
        }
        _ => {
            let mut acc = T::zero();
            let mut sub_cols = Vec::with_capacity(cols.len() - 1);
            for (j, &c) in cols.iter().enumerate() {
                let a = m[(rows[0], c)];
                if a == T::zero() {
                    continue;
                }
                sub_cols.clear();
                sub_cols.extend(cols.iter().copied().filter(|&x| x != c));
                let minor = cofactor_det(m, &rows[1..], &sub_cols);
                if j % 2 == 0 {
                    acc = acc + a * minor;
                } else {
                    acc = acc - a * minor;
                }
            }
            acc
        }
    }
}

/// Adjugate and determinant by explicit cofactors; finite even when the
/// matrix is singular.
pub fn adjugate_and_det<T: Scalar>(m: &SquareMatrix<T>) -> Result<(SquareMatrix<T>, T)> {
    let n = m.dim();
    if n == 0 || n > MAX_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    let all: Vec<usize> = (0..n).collect();
    let det = cofactor_det(m, &all, &all);
    let mut adj = SquareMatrix::zeros(n);
    if n == 1 {
        adj[(0, 0)] = T::one();
        return Ok((adj, det));
    }
    for i in 0..n {
        for j in 0..n {
            // adj[i][j] = (-1)^{i+j} · minor with row j and column i removed
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
            let minor = cofactor_det(m, &rows, &cols);
            adj[(i, j)] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    Ok((adj, det))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedRegressor<T> {
    pub phi_e: SquareMatrix<T>,
    pub y_e: Vec<T>,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedScalarLres<T> {
    pub delta: T,
    pub y_mixed: Vec<T>,
    pub k: usize,
}

fn validate_lags(lags: &[usize], q: usize) -> Result<()> {
    if lags.len() != q {
        return Err(Error::InvalidLags(format!("expected {q} lags, got {}", lags.len())));
    }
    if lags.first() != Some(&0) {
        return Err(Error::InvalidLags("first lag must be 0".into()));
    }
    if lags.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidLags(format!("lags must be strictly increasing: {lags:?}")));
    }
    Ok(())
}

/// Stacks `φᵀ(k − lag_j)` and `y(k − lag_j)` for every lag; indices before the
/// start of the history are zero-filled. `history[j]` is the sample at index `j`.
pub fn extend<T: Scalar>(
    history: &[VectorLreSample<T>],
    lags: &[usize],
    k: usize,
) -> Result<ExtendedRegressor<T>> {
    let q = history
        .first()
        .map(|s| s.phi.len())
        .ok_or_else(|| Error::InvalidLags("empty history".into()))?;
    validate_lags(lags, q)?;
    if k >= history.len() {
        return Err(Error::InvalidLags(format!(
            "history covers indices < {}, requested k = {k}",
            history.len()
        )));
    }
    let mut phi_e = SquareMatrix::zeros(q);
    let mut y_e = vec![T::zero(); q];
    for (row, &lag) in lags.iter().enumerate() {
        let Some(idx) = k.checked_sub(lag) else { continue };
        let sample = &history[idx];
        if sample.phi.len() != q {
            return Err(Error::DimensionMismatch { expected: q, actual: sample.phi.len() });
        }
        for (col, &v) in sample.phi.iter().enumerate() {
            phi_e[(row, col)] = v;
        }
        y_e[row] = sample.y;
    }
    Ok(ExtendedRegressor { phi_e, y_e, k })
}

/// `Δ = det(Φ_e)` and `Y = adj(Φ_e)·Y_e`.
pub fn mix<T: Scalar>(ext: &ExtendedRegressor<T>) -> Result<MixedScalarLres<T>> {
    let (adj, delta) = adjugate_and_det(&ext.phi_e)?;
    Ok(MixedScalarLres { delta, y_mixed: adj.mul_vec(&ext.y_e), k: ext.k })
}

/// Streaming delay line that produces an extended regressor per pushed sample
/// while keeping only the last `max(lags) + 1` samples.
#[derive(Debug, Clone)]
pub struct DelayStack<T> {
    q: usize,
    lags: Vec<usize>,
    buf: VecDeque<VectorLreSample<T>>,
    k: usize,
}

impl<T: Scalar> DelayStack<T> {
    pub fn new(q: usize, lags: Vec<usize>) -> Result<Self> {
        if q == 0 || q > MAX_DIM {
            return Err(Error::UnsupportedDimension(q));
        }
        validate_lags(&lags, q)?;
        let depth = lags[q - 1] + 1;
        Ok(Self { q, lags, buf: VecDeque::with_capacity(depth), k: 0 })
    }

    pub fn lags(&self) -> &[usize] {
        &self.lags
    }

    /// Appends the sample for the next index and returns the extension at it.
    pub fn push(&mut self, sample: VectorLreSample<T>) -> Result<ExtendedRegressor<T>> {
        if sample.phi.len() != self.q {
            return Err(Error::DimensionMismatch { expected: self.q, actual: sample.phi.len() });
        }
        let depth = self.lags[self.q - 1] + 1;
        if self.buf.len() == depth {
            self.buf.pop_front();
        }
        self.buf.push_back(sample);
        let newest = self.buf.len() - 1;
        let mut phi_e = SquareMatrix::zeros(self.q);
        let mut y_e = vec![T::zero(); self.q];
        for (row, &lag) in self.lags.iter().enumerate() {
            let Some(idx) = newest.checked_sub(lag) else { continue };
            let s = &self.buf[idx];
            for (col, &v) in s.phi.iter().enumerate() {
                phi_e[(row, col)] = v;
            }
            y_e[row] = s.y;
        }
        let k = self.k;
        self.k += 1;
        Ok(ExtendedRegressor { phi_e, y_e, k })
    }
}
