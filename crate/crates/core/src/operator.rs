//! Dense complex operators: construction, tensor products, Hermitian
//! exponentials and eigensystems with gauge-continuous eigenvectors.
//!
//! Basis index convention for tensor products: the first factor is the
//! slow (most significant) index, so `|ab⟩` sits at `a * dim(b) + b`.
//! Single-qubit operators use the ordering `(|0⟩, |1⟩)` with
//! `σz|0⟩ = +|0⟩` and `σ₊ = |0⟩⟨1|`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for Hermiticity checks, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for unitarity checks (max-norm of `U†U − I`).
pub const UNITARY_TOL: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Operator {
    m: DMatrix<C64>,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.m[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self { m: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: DMatrix::identity(dim, dim) }
    }

    /// Wraps a square matrix; panics on a non-square input.
    pub fn from_matrix(m: DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator matrix must be square");
        Self { m }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { m: DMatrix::from_fn(dim, dim, f) }
    }

    /// Builds from row-major entries.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        for r in rows {
            assert_eq!(r.len(), dim, "operator rows must form a square matrix");
        }
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| c(rows[i][j], 0.0))
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let dim = entries.len();
        Self::from_fn(dim, |i, j| if i == j { entries[i] } else { C64::default() })
    }

    pub fn real_diagonal(entries: &[f64]) -> Self {
        let v: Vec<C64> = entries.iter().map(|&x| c(x, 0.0)).collect();
        Self::diagonal(&v)
    }

    /// `|i⟩⟨j|` in a space of dimension `dim`.
    pub fn outer_basis(dim: usize, i: usize, j: usize) -> Self {
        let mut op = Self::zeros(dim);
        op.m[(i, j)] = c(1.0, 0.0);
        op
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.m[(i, j)] = z;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, z: C64) {
        self.m[(i, j)] += z;
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn dagger(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { m: &self.m * z }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(c(x, 0.0))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    /// Max-norm distance to another operator of the same dimension.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.m
            .iter()
            .zip(other.m.iter())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-norm of `H − H†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.m[(i, j)] - self.m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOL * self.max_abs().max(1.0)
    }

    /// Max-norm of `U†U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.m.adjoint() * &self.m;
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - c(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= UNITARY_TOL
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim());
        let x = DVector::from_column_slice(v);
        (&self.m * x).iter().copied().collect()
    }

    /// Principal submatrix on the given (ordered) indices.
    pub fn submatrix(&self, indices: &[usize]) -> Operator {
        Operator::from_fn(indices.len(), |a, b| self.m[(indices[a], indices[b])])
    }

    /// Conjugation `P · self · P†`.
    pub fn conjugate_by(&self, p: &Operator) -> Operator {
        Operator { m: &p.m * &self.m * p.m.adjoint() }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator { m: &self.m + &rhs.m }
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator { m: self.m + rhs.m }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator { m: &self.m - &rhs.m }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator { m: &self.m * &rhs.m }
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        Operator { m: self.m * rhs.m }
    }
}

/// Pauli and ladder operators on a single qubit.
pub mod pauli {
    use super::*;

    pub fn identity() -> Operator {
        Operator::identity(2)
    }

    pub fn x() -> Operator {
        Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y() -> Operator {
        Operator::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
    }

    pub fn z() -> Operator {
        Operator::real_diagonal(&[1.0, -1.0])
    }

    /// `σ₊ = |0⟩⟨1|`.
    pub fn plus() -> Operator {
        Operator::outer_basis(2, 0, 1)
    }

    /// `σ₋ = |1⟩⟨0|`.
    pub fn minus() -> Operator {
        Operator::outer_basis(2, 1, 0)
    }
}

/// Kronecker product; the first factor is the slow index.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator { m: a.m.kronecker(&b.m) }
}

/// Eigenvalues (ascending) with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Column `α` is the eigenvector paired with `values[α]`.
    pub vectors: DMatrix<C64>,
    /// Set when two levels coincide and no gauge reference was supplied.
    pub degenerate: bool,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, alpha: usize) -> Vec<C64> {
        self.vectors.column(alpha).iter().copied().collect()
    }

    /// `Σ λ_α v_α v_α†`.
    pub fn reconstruct(&self) -> Operator {
        let n = self.dim();
        let lam = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            self.values.iter().map(|&x| c(x, 0.0)),
        ));
        Operator::from_matrix(&self.vectors * lam * self.vectors.adjoint())
    }

    /// Smallest gap between consecutive eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_hermitian(h: &Operator) -> Result<()> {
    let dev = h.hermiticity_deviation();
    if dev > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

fn raw_eigen(h: &Operator) -> (Vec<f64>, DMatrix<C64>) {
    let n = h.dim();
    // symmetrize so the solver sees an exactly Hermitian input
    let sym = (&h.m + h.m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// `exp(−i·h·t)` by spectral decomposition.
pub fn unitary_exp(h: &Operator, t: f64) -> Result<Operator> {
    check_hermitian(h)?;
    Ok(unitary_exp_unchecked(h, t))
}

pub(crate) fn unitary_exp_unchecked(h: &Operator, t: f64) -> Operator {
    let n = h.dim();
    if n == 2 {
        return exp2(h, t);
    }
    let (values, v) = raw_eigen(h);
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        values.iter().map(|&lam| C64::from_polar(1.0, -lam * t)),
    ));
    Operator::from_matrix(&v * phases * v.adjoint())
}

/// Closed form for 2x2 Hermitian generators: `h = a·I + n⃗·σ⃗`.
fn exp2(h: &Operator, t: f64) -> Operator {
    let h00 = h.entry(0, 0).re;
    let h11 = h.entry(1, 1).re;
    let off = (h.entry(0, 1) + h.entry(1, 0).conj()) * 0.5;
    let a = 0.5 * (h00 + h11);
    let nz = 0.5 * (h00 - h11);
    let (nx, ny) = (off.re, -off.im);
    let r = (nx * nx + ny * ny + nz * nz).sqrt();
    let global = C64::from_polar(1.0, -a * t);
    let (cs, sn_over_r) = if r * t.abs() < 1e-8 {
        (1.0 - 0.5 * (r * t).powi(2), t * (1.0 - (r * t).powi(2) / 6.0))
    } else {
        ((r * t).cos(), (r * t).sin() / r)
    };
    // exp(-i t n·σ) = cos(rt) I − i sin(rt)/r (n·σ)
    let mi = c(0.0, -sn_over_r);
    let u00 = c(cs, 0.0) + mi * nz;
    let u11 = c(cs, 0.0) - mi * nz;
    let u01 = mi * c(nx, -ny);
    let u10 = mi * c(nx, ny);
    Operator::from_rows(&[&[global * u00, global * u01], &[global * u10, global * u11]])
}

fn degeneracy_tol(h: &Operator) -> f64 {
    1e-10 * h.max_abs().max(1e-300).max(1.0)
}

/// Phase fixing so the largest-magnitude component (first index on ties)
/// is real and positive.
fn canonical_phase(v: &mut [C64]) {
    let max = v.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let k = v.iter().position(|z| z.norm() >= max - 1e-9).unwrap_or(0);
    let ph = v[k].conj() / v[k].norm();
    for z in v.iter_mut() {
        *z *= ph;
    }
}

fn lex_cmp(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Hermitian eigensystem with ascending eigenvalues.
///
/// Without `gauge_ref`, every eigenvector is phase-fixed canonically (largest
/// component real positive) and degenerate clusters are ordered by a
/// lexicographic comparison of their entries; the result carries
/// `degenerate = true`. With `gauge_ref`, each vector's phase is chosen so its
/// overlap with the reference vector of the same index is real and positive,
/// and degenerate clusters are rotated onto the projected reference vectors.
pub fn eigensystem(h: &Operator, gauge_ref: Option<&Spectrum>) -> Result<Spectrum> {
    check_hermitian(h)?;
    let n = h.dim();
    if let Some(r) = gauge_ref {
        if r.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: r.dim() });
        }
    }
    let (values, raw) = raw_eigen(h);
    let tol = degeneracy_tol(h);

    // clusters of (numerically) equal eigenvalues
    let mut clusters: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || values[k] - values[k - 1] > tol {
            clusters.push(start..k);
            start = k;
        }
    }
    let degenerate = clusters.iter().any(|r| r.len() > 1);

    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| raw.column(j).iter().copied().collect()).collect();

    for range in &clusters {
        match gauge_ref {
            Some(r) if range.len() > 1 => {
                // project reference vectors onto the cluster, then Gram-Schmidt
                let basis: Vec<Vec<C64>> = range.clone().map(|j| cols[j].clone()).collect();
                let mut new_cols: Vec<Vec<C64>> = Vec::new();
                for j in range.clone() {
                    let rv = r.vector(j);
                    let mut p = vec![C64::default(); n];
                    for b in &basis {
                        let ov = inner(b, &rv);
                        for (pi, bi) in p.iter_mut().zip(b) {
                            *pi += ov * bi;
                        }
                    }
                    for q in &new_cols {
                        let ov = inner(q, &p);
                        for (pi, qi) in p.iter_mut().zip(q) {
                            *pi -= ov * qi;
                        }
                    }
                    let nrm = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if nrm < 1e-6 {
                        // reference has no weight here; fall back to the solver's vector
                        let mut f = basis[j - range.start].clone();
                        for q in &new_cols {
                            let ov = inner(q, &f);
                            for (fi, qi) in f.iter_mut().zip(q) {
                                *fi -= ov * qi;
                            }
                        }
                        let nf = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                        new_cols.push(f.into_iter().map(|z| z / nf).collect());
                    } else {
                        new_cols.push(p.into_iter().map(|z| z / nrm).collect());
                    }
                }
                for (k, j) in range.clone().enumerate() {
                    cols[j] = new_cols[k].clone();
                }
            }
            None if range.len() > 1 => {
                for j in range.clone() {
                    canonical_phase(&mut cols[j]);
                }
                let mut block: Vec<Vec<C64>> = range.clone().map(|j| cols[j].clone()).collect();
                block.sort_by(|a, b| lex_cmp(a, b));
                for (k, j) in range.clone().enumerate() {
                    cols[j] = block[k].clone();
                }
            }
            _ => {}
        }
    }

    for (j, col) in cols.iter_mut().enumerate() {
        match gauge_ref {
            Some(r) => {
                let ov = inner(&r.vector(j), col);
                if ov.norm() > 1e-12 {
                    let ph = ov.conj() / ov.norm();
                    for z in col.iter_mut() {
                        *z *= ph;
                    }
                } else {
                    canonical_phase(col);
                }
            }
            None => canonical_phase(col),
        }
    }

    let vectors = DMatrix::from_fn(n, n, |i, j| cols[j][i]);
    Ok(Spectrum { values, vectors, degenerate: degenerate && gauge_ref.is_none() })
}
