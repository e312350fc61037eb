//! Small dense/sparse helpers shared by the algebraic modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Column-compressed sparse matrix. Each column stores `(row, value)` pairs
/// sorted by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ncols];
        for &(r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            cols[c].push((r, v));
        }
        for col in &mut cols {
            col.sort_by_key(|&(r, _)| r);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0.0);
            *col = merged;
        }
        Self { nrows, ncols, cols }
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let cols = (0..m.ncols())
            .map(|c| {
                (0..m.nrows())
                    .filter_map(|r| {
                        let v = m[(r, c)];
                        (v != 0.0).then_some((r, v))
                    })
                    .collect()
            })
            .collect();
        Self {
            nrows: m.nrows(),
            ncols: m.ncols(),
            cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Nonzero entries of column `c`.
    pub fn col(&self, c: usize) -> &[(usize, f64)] {
        &self.cols[c]
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] = v;
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = DVector::zeros(self.nrows);
        for (c, col) in self.cols.iter().enumerate() {
            let xc = x[c];
            if xc == 0.0 {
                continue;
            }
            for &(r, v) in col {
                y[r] += v * xc;
            }
        }
        y
    }

    /// `self * rhs` with a dense right-hand side.
    pub fn mul_dense(&self, rhs: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(rhs.nrows(), self.ncols);
        let mut out = DMatrix::zeros(self.nrows, rhs.ncols());
        for j in 0..rhs.ncols() {
            for (c, col) in self.cols.iter().enumerate() {
                let x = rhs[(c, j)];
                if x == 0.0 {
                    continue;
                }
                for &(r, v) in col {
                    out[(r, j)] += v * x;
                }
            }
        }
        out
    }
}

/// Symmetric part `(m + mᵀ)/2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest entry of `|m - mᵀ|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs_diff(m, &m.transpose())
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Frobenius pairing `Σ a_ij b_ij`.
pub fn frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn spectrum(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    spectrum(m).first().copied().unwrap_or(f64::INFINITY)
}

/// Smallest eigenvalue together with a unit eigenvector.
pub fn min_eigenpair(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let (idx, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("empty matrix has no eigenpair");
    (val, eig.eigenvectors.column(idx).into_owned())
}

/// Max distance between two sorted spectra of equal length.
pub fn spectral_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Symmetric matrix with entries drawn uniformly from `[-1, 1]`, then symmetrized.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..=1.0));
    symmetrize(&m)
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col.neg_mut();
        }
    }
    q
}

/// Orthonormal basis of the column space of `m`, assumed to have full column rank.
pub fn orthonormal_columns(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    m.clone().qr().q()
}

/// Dot product in twice the working precision (Ogita, Rump and Oishi's Dot2).
pub fn dot_compensated(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let (mut s, mut c) = (0.0_f64, 0.0_f64);
    for (&x, &y) in a.iter().zip(b) {
        let prod = x * y;
        let prod_err = x.mul_add(y, -prod);
        let sum = s + prod;
        let z = sum - s;
        c += prod_err + ((s - (sum - z)) + (prod - z));
        s = sum;
    }
    s + c
}

/// `aᵀb` with every entry from [`dot_compensated`].
pub fn gram_compensated(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(a.nrows(), b.nrows(), "row mismatch in gram_compensated");
    let cols: Vec<Vec<f64>> = (0..b.ncols())
        .into_par_iter()
        .map(|j| {
            let bj = b.column(j);
            (0..a.ncols())
                .map(|i| dot_compensated(a.column(i).as_slice(), bj.as_slice()))
                .collect()
        })
        .collect();
    DMatrix::from_fn(a.ncols(), b.ncols(), |i, j| cols[j][i])
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}
