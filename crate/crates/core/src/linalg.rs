//! Dense real matrices: a packed symmetric type, a general rectangular type, and the
//! spectral routines built on a cyclic Jacobi eigensolver.

use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 4096;

/// Relative eigenvalue cutoff deciding support membership in [`pinv_sqrt`].
pub const PINV_CUTOFF: f64 = 1e-12;

/// Relative tolerance on negative eigenvalues for numerically psd input.
pub const PSD_TOLERANCE: f64 = 1e-10;

const JACOBI_TOLERANCE: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// General dense matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(bad.len(), cols));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Copy the sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }
}

/// Dense real symmetric matrix. Only the lower triangle is stored, so symmetry is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    lower: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix { dim, lower: vec![0.0; dim * (dim + 1) / 2] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Fill from `f(i, j)` evaluated on the lower triangle `j <= i`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut lower = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in 0..=i {
                lower.push(f(i, j));
            }
        }
        SymMatrix { dim, lower }
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[f64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j])
    }

    /// Accept a square matrix only if it is exactly symmetric.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch(m.rows(), m.cols()));
        }
        for i in 0..m.rows() {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Precondition(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self::from_fn(m.rows(), |i, j| m.get(i, j)))
    }

    /// Symmetric part `(M + Mᵀ)/2` of a square matrix.
    pub fn symmetrize(m: &Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch(m.rows(), m.cols()));
        }
        Ok(Self::from_fn(m.rows(), |i, j| 0.5 * (m.get(i, j) + m.get(j, i))))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_matrix(&Matrix::from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[packed(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.lower[packed(i, j)] = v;
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: f64) -> SymMatrix {
        SymMatrix { dim: self.dim, lower: self.lower.iter().map(|v| v * factor).collect() }
    }

    /// `self += factor · |v⟩⟨v|`.
    pub fn add_outer(&mut self, factor: f64, v: &[f64]) {
        let mut k = 0;
        for i in 0..self.dim {
            let fi = factor * v[i];
            for &vj in &v[..=i] {
                self.lower[k] += fi * vj;
                k += 1;
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in 0..=i {
                let v = self.get(i, j);
                sum += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        sum.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.lower.iter().all(|v| v.is_finite())
    }

    /// Principal sub-matrix on rows/columns `start..start+len`.
    pub fn principal_block(&self, start: usize, len: usize) -> SymMatrix {
        SymMatrix::from_fn(len, |i, j| self.get(start + i, start + j))
    }

    pub fn matmul(&self, other: &SymMatrix) -> Result<Matrix> {
        self.to_matrix().matmul(&other.to_matrix())
    }

    /// `self · other · self`, symmetric by construction.
    pub fn sandwich(&self, other: &SymMatrix) -> Result<SymMatrix> {
        let left = self.matmul(other)?;
        let full = left.matmul(&self.to_matrix())?;
        SymMatrix::symmetrize(&full)
    }

    /// `Tr(self · other)`.
    pub fn trace_product(&self, other: &SymMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in 0..=i {
                let v = self.get(i, j) * other.get(i, j);
                sum += if i == j { v } else { 2.0 * v };
            }
        }
        Ok(sum)
    }

    fn zip_with(&self, other: &SymMatrix, op: impl Fn(f64, f64) -> f64) -> Result<SymMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let lower = self.lower.iter().zip(&other.lower).map(|(&a, &b)| op(a, b)).collect();
        Ok(SymMatrix { dim: self.dim, lower })
    }

    pub fn try_add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a - b)
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        self.try_add(rhs).expect("dimension mismatch in SymMatrix addition")
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        self.try_sub(rhs).expect("dimension mismatch in SymMatrix subtraction")
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scale(rhs)
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Matrix,
}

impl EigenDecomposition {
    /// `V f(Λ) Vᵀ` for a spectral function `f`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let dim = self.eigenvalues.len();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        // Row i of V, scaled column-wise by the weights, dotted with row j.
        let v = &self.eigenvectors;
        SymMatrix::from_fn(dim, |i, j| v.row(i).iter().zip(v.row(j)).zip(&weights).map(|((a, b), w)| a * w * b).sum())
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.apply(|l| l)
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn smallest(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Which eigensolver [`sym_eigen`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    /// Cyclic Jacobi rotations.
    Jacobi,
    /// Householder reduction to tridiagonal form followed by implicit QL.
    TridiagonalQl,
    /// Jacobi up to [`JACOBI_MAX_DIM`], tridiagonal QL above.
    Auto,
}

/// Largest dimension handled by Jacobi under [`EigenMethod::Auto`].
pub const JACOBI_MAX_DIM: usize = 128;

impl EigenMethod {
    fn resolve(self, dim: usize) -> EigenMethod {
        match self {
            EigenMethod::Auto if dim <= JACOBI_MAX_DIM => EigenMethod::Jacobi,
            EigenMethod::Auto => EigenMethod::TridiagonalQl,
            m => m,
        }
    }
}

fn check_input(a: &SymMatrix) -> Result<()> {
    if a.dim() > MAX_DIM {
        return Err(Error::SizeOverflow(a.dim()));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Full symmetric eigendecomposition.
pub fn sym_eigen(a: &SymMatrix) -> Result<EigenDecomposition> {
    sym_eigen_with(a, EigenMethod::Auto)
}

pub fn sym_eigen_with(a: &SymMatrix, method: EigenMethod) -> Result<EigenDecomposition> {
    check_input(a)?;
    let dim = a.dim();
    let (values, vt) = match method.resolve(dim) {
        EigenMethod::Jacobi => jacobi(a, true)?,
        _ => tridiagonal_ql(a, true)?,
    };
    let vt = vt.expect("eigenvectors requested");
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    // vt holds eigenvectors as rows; transpose into sorted columns.
    let eigenvectors = Matrix::from_fn(dim, dim, |i, k| vt[order[k] * dim + i]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Eigenvalues only, descending. Skips eigenvector accumulation.
pub fn sym_eigenvalues(a: &SymMatrix) -> Result<Vec<f64>> {
    sym_eigenvalues_with(a, EigenMethod::Auto)
}

pub fn sym_eigenvalues_with(a: &SymMatrix, method: EigenMethod) -> Result<Vec<f64>> {
    check_input(a)?;
    let (mut values, _) = match method.resolve(a.dim()) {
        EigenMethod::Jacobi => jacobi(a, false)?,
        _ => tridiagonal_ql(a, false)?,
    };
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

fn jacobi(a: &SymMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let n = a.dim();
    let mut m = a.to_matrix().data;
    let mut vt = want_vectors.then(|| Matrix::identity(n).data);
    let norm = a.frobenius_norm();
    let target = JACOBI_TOLERANCE * norm;

    let off_norm = |m: &[f64]| -> f64 {
        let mut sum = 0.0;
        for i in 0..n {
            for &v in &m[i * n..i * n + i] {
                sum += v * v;
            }
        }
        (2.0 * sum).sqrt()
    };

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&m) <= target {
            return Ok(((0..n).map(|i| m[i * n + i]).collect(), vt));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                // Negligible against both diagonal entries: annihilate without rotating.
                if apq.abs() < f64::EPSILON * 1e-3 * app.abs().min(aqq.abs()) {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                rotate_rows(&mut m, n, p, q, c, s);
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        m[k * n + p] = m[p * n + k];
                        m[k * n + q] = m[q * n + k];
                    }
                }
                if let Some(v) = vt.as_mut() {
                    rotate_rows(v, n, p, q, c, s);
                }
            }
        }
    }
    if off_norm(&m) <= target {
        return Ok(((0..n).map(|i| m[i * n + i]).collect(), vt));
    }
    Err(Error::NoConvergence(JACOBI_MAX_SWEEPS))
}

/// Householder tridiagonalization and implicit QL, after the EISPACK `tred2`/`tql2` pair.
/// Eigenvectors, when requested, are returned as rows.
fn tridiagonal_ql(a: &SymMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let n = a.dim();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(Vec::new)));
    }
    let mut v = a.to_matrix().data;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let at = |i: usize, j: usize| i * n + j;

    // Reduction. Only the lower triangle of v is read.
    d.copy_from_slice(&v[at(n - 1, 0)..at(n - 1, 0) + n]);
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = if f > 0.0 { -h.sqrt() } else { h.sqrt() };
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    let vkj = v[at(k, j)];
                    g += vkj * d[k];
                    e[k] += vkj * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    let mut w = None;
    if want_vectors {
        for i in 0..n - 1 {
            v[at(n - 1, i)] = v[at(i, i)];
            v[at(i, i)] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = v[at(k, i + 1)] / h;
                }
                for j in 0..=i {
                    let g: f64 = (0..=i).map(|k| v[at(k, i + 1)] * v[at(k, j)]).sum();
                    for k in 0..=i {
                        v[at(k, j)] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                v[at(k, i + 1)] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = v[at(n - 1, j)];
            v[at(n - 1, j)] = 0.0;
        }
        v[at(n - 1, n - 1)] = 1.0;
        // Work on the transpose so QL rotations touch contiguous rows.
        w = Some(Matrix { rows: n, cols: n, data: v }.transpose().data);
    } else {
        for (i, di) in d.iter_mut().enumerate() {
            *di = v[at(i, i)];
        }
    }
    e[0] = 0.0;

    // Implicit QL on the tridiagonal (d, e).
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    let max_iterations = 30 * n.max(1);
    let mut iterations = 0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iterations {
                    return Err(Error::NoConvergence(iterations));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(w) = w.as_mut() {
                        rotate_rows(w, n, i, i + 1, c, s);
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok((d, w))
}

/// Rows `p < q` become `c·r_p − s·r_q` and `s·r_p + c·r_q`.
#[inline]
fn rotate_rows(m: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = m.split_at_mut(q * n);
    let row_p = &mut head[p * n..p * n + n];
    let row_q = &mut tail[..n];
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(a: &SymMatrix) -> Result<f64> {
    Ok(sym_eigenvalues(a)?.iter().map(|l| l.abs()).sum())
}

fn check_psd(eig: &EigenDecomposition) -> Result<f64> {
    let largest = eig.largest().max(0.0);
    let smallest = eig.smallest();
    if smallest < -PSD_TOLERANCE * largest.max(f64::MIN_POSITIVE) && smallest < -f64::EPSILON {
        return Err(Error::NotPsd { eigenvalue: smallest, largest });
    }
    Ok(largest)
}

/// Square root of a numerically psd matrix; slightly negative eigenvalues are clipped to 0.
pub fn psd_sqrt(a: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eigen(a)?;
    check_psd(&eig)?;
    Ok(eig.apply(|l| l.max(0.0).sqrt()))
}

/// Pseudo-inverse square root: eigenvalues above `PINV_CUTOFF · λ_max` map to `λ^{-1/2}`,
/// everything else to 0. The zero matrix maps to itself.
pub fn pinv_sqrt(a: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eigen(a)?;
    let largest = check_psd(&eig)?;
    if largest == 0.0 {
        return Ok(SymMatrix::zeros(a.dim()));
    }
    let cutoff = PINV_CUTOFF * largest;
    Ok(eig.apply(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Kronecker product.
pub fn kron(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da.checked_mul(db).ok_or(Error::SizeOverflow(usize::MAX))?;
    if dim > MAX_DIM {
        return Err(Error::SizeOverflow(dim));
    }
    Ok(SymMatrix::from_fn(dim, |i, j| a.get(i / db, j / db) * b.get(i % db, j % db)))
}

/// `⊗^k a`; the empty power is the 1×1 identity.
pub fn kron_power(a: &SymMatrix, k: usize) -> Result<SymMatrix> {
    (0..k).try_fold(SymMatrix::identity(1), |acc, _| kron(&acc, a))
}

/// `‖AB − BA‖_F`.
pub fn commutator_residual(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    // For symmetric A, B: BA = (AB)ᵀ.
    let ab = a.matmul(b)?;
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..i {
            let d = ab.get(i, j) - ab.get(j, i);
            sum += 2.0 * d * d;
        }
    }
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// `|ψ0⟩⟨ψ0| − |ψ1⟩⟨ψ1|` for the symmetric parametrization.
    fn state_difference(s: f64) -> SymMatrix {
        let c = ((1.0 + s) / 2.0).sqrt();
        let d = ((1.0 - s) / 2.0).sqrt();
        &SymMatrix::outer(&[c, d]) - &SymMatrix::outer(&[c, -d])
    }

    #[test]
    fn eigen_examples() {
        let e = sym_eigen(&SymMatrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
        let e = sym_eigen(&SymMatrix::from_diag(&[3.0, -4.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, -4.0]);
        // characteristic polynomial of [[0, 2cd],[2cd, 0]]: λ = ±2cd = ±√(1−s²)
        let e = sym_eigen(&state_difference(0.6)).unwrap();
        assert!(close(e.eigenvalues[0], 0.8, 1e-14));
        assert!(close(e.eigenvalues[1], -0.8, 1e-14));
    }

    #[test]
    fn eigen_rejects_non_finite() {
        let mut m = SymMatrix::identity(2);
        m.set(0, 1, f64::NAN);
        assert_eq!(sym_eigen(&m).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn trace_norm_examples() {
        assert!(close(trace_norm(&SymMatrix::identity(2)).unwrap(), 2.0, 1e-15));
        assert!(close(trace_norm(&state_difference(0.6)).unwrap(), 1.6, 1e-14));
        let c = (0.75f64).sqrt();
        let d = (0.25f64).sqrt();
        let sum = &SymMatrix::outer(&[c, d]) + &SymMatrix::outer(&[c, -d]);
        assert!(close(trace_norm(&sum).unwrap(), 2.0, 1e-14));
    }

    #[test]
    fn psd_sqrt_examples() {
        assert_eq!(psd_sqrt(&SymMatrix::identity(3)).unwrap(), SymMatrix::identity(3));
        let r = psd_sqrt(&SymMatrix::from_diag(&[4.0, 9.0])).unwrap();
        assert!(close(r.get(0, 0), 2.0, 1e-15) && close(r.get(1, 1), 3.0, 1e-15));
        assert_eq!(r.get(0, 1), 0.0);
        assert!(matches!(psd_sqrt(&SymMatrix::from_diag(&[1.0, -0.5])), Err(Error::NotPsd { .. })));
        // tiny negative noise is clipped
        let r = psd_sqrt(&SymMatrix::from_diag(&[1.0, -1e-14])).unwrap();
        assert_eq!(r.get(1, 1), 0.0);
    }

    #[test]
    fn pinv_sqrt_examples() {
        let r = pinv_sqrt(&SymMatrix::from_diag(&[4.0, 0.0])).unwrap();
        assert!(close(r.get(0, 0), 0.5, 1e-15));
        assert_eq!(r.get(1, 1), 0.0);
        assert_eq!(pinv_sqrt(&SymMatrix::identity(2)).unwrap(), SymMatrix::identity(2));
        assert_eq!(pinv_sqrt(&SymMatrix::zeros(3)).unwrap(), SymMatrix::zeros(3));
    }

    #[test]
    fn pinv_sqrt_single_qubit_average() {
        // ρ = ½(|ψ0⟩⟨ψ0| + |ψ1⟩⟨ψ1|) = diag((1+s)/2, (1−s)/2) in this basis.
        let s = 0.5f64;
        let c = ((1.0 + s) / 2.0).sqrt();
        let d = ((1.0 - s) / 2.0).sqrt();
        let rho = (&SymMatrix::outer(&[c, d]) + &SymMatrix::outer(&[c, -d])).scale(0.5);
        let x = pinv_sqrt(&rho).unwrap();
        let expected = [1.0 / ((1.0 + s) / 2.0f64).sqrt(), 1.0 / ((1.0 - s) / 2.0f64).sqrt()];
        assert!(close(x.get(0, 0), expected[0], 1e-13));
        assert!(close(x.get(1, 1), expected[1], 1e-13));
        assert!(x.get(0, 1).abs() < 1e-14);
        let projector = x.sandwich(&rho).unwrap();
        assert!((&projector - &SymMatrix::identity(2)).max_abs() < 1e-13);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&SymMatrix::identity(2), &SymMatrix::identity(2)).unwrap(), SymMatrix::identity(4));
        let k = kron(&SymMatrix::from_diag(&[2.0, 3.0]), &SymMatrix::from_diag(&[5.0, 7.0])).unwrap();
        assert_eq!(k, SymMatrix::from_diag(&[10.0, 14.0, 15.0, 21.0]));
        let rho = SymMatrix::from_rows(&[vec![0.75, 0.1], vec![0.1, 0.25]]).unwrap();
        assert!(close(kron(&rho, &rho).unwrap().trace(), 1.0, 1e-15));
        assert_eq!(kron(&SymMatrix::identity(64), &SymMatrix::identity(65)).unwrap_err(), Error::SizeOverflow(4160));
    }

    #[test]
    fn commutator_examples() {
        let a = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 5.0]]).unwrap();
        assert_eq!(commutator_residual(&a, &a).unwrap(), 0.0);
        let d1 = SymMatrix::from_diag(&[1.0, 2.0, 3.0]);
        let d2 = SymMatrix::from_diag(&[4.0, -1.0, 0.5]);
        assert_eq!(commutator_residual(&d1, &d2).unwrap(), 0.0);
        // X-like [[0,a],[a,0]] and Z-like [[b,0],[0,-b]]: XZ − ZX = [[0,-2ab],[2ab,0]]
        let (x, z) = (0.7, 1.3);
        let xm = SymMatrix::from_rows(&[vec![0.0, x], vec![x, 0.0]]).unwrap();
        let zm = SymMatrix::from_diag(&[z, -z]);
        let r = commutator_residual(&xm, &zm).unwrap();
        assert!(close(r, 2.0 * 2f64.sqrt() * x * z, 1e-14));
        assert!(commutator_residual(&d1, &a).is_err());
    }

    #[test]
    fn symmetric_storage() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 2, 5.0);
        assert_eq!(m.get(2, 0), 5.0);
        let mut g = Matrix::identity(2);
        g.set(0, 1, 1.0);
        assert!(SymMatrix::from_matrix(&g).is_err());
    }

    #[test]
    fn solvers_agree() {
        // Deterministic pseudo-random symmetric matrix with a repeated eigenvalue block.
        let n = 37;
        let mut a = SymMatrix::from_fn(n, |i, j| (((i * 31 + j * 17) % 23) as f64 - 11.0) / 7.0);
        for i in 0..5 {
            a.set(i, i, 3.0);
        }
        for method in [EigenMethod::Jacobi, EigenMethod::TridiagonalQl] {
            let e = sym_eigen_with(&a, method).unwrap();
            let residual = (&e.reconstruct() - &a).frobenius_norm();
            assert!(residual < 1e-10 * a.frobenius_norm(), "{method:?}: {residual}");
            let vtv = e.eigenvectors.transpose().matmul(&e.eigenvectors).unwrap();
            assert!(vtv.try_sub(&Matrix::identity(n)).unwrap().frobenius_norm() < 1e-10);
        }
        let j = sym_eigenvalues_with(&a, EigenMethod::Jacobi).unwrap();
        let q = sym_eigenvalues_with(&a, EigenMethod::TridiagonalQl).unwrap();
        for (x, y) in j.iter().zip(&q) {
            assert!(close(*x, *y, 1e-11), "{x} vs {y}");
        }
    }

    #[test]
    fn jacobi_handles_clustered_spectrum() {
        // Tridiagonal Toeplitz matrix with known eigenvalues 2 − 2cos(kπ/(n+1)).
        let n = 40;
        let a = SymMatrix::from_fn(n, |i, j| match i - j {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let e = sym_eigen_with(&a, EigenMethod::Jacobi).unwrap();
        for (k, &l) in e.eigenvalues.iter().enumerate() {
            let idx = (n - k) as f64;
            let expected = 2.0 - 2.0 * (idx * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!(close(l, expected, 1e-12), "{k}: {l} vs {expected}");
        }
        let residual = (&e.reconstruct() - &a).frobenius_norm();
        assert!(residual < 1e-10 * a.frobenius_norm());
    }
}
