//! Dense complex matrices, bipartite index reshuffles and spectra.
//!
//! Bipartite matrices on `C^d ⊗ C^d` use the row-major pair index
//! `|ij⟩ ↦ i*d + j`, so `⟨ij|X|kl⟩` lives at row `i*d + j`, column `k*d + l`.
//! With this convention the matrix representation of a linear map acts on
//! row-major vectorizations, `M(Φ) vec(X) = vec(Φ(X))`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Numerical tolerances shared by the classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|λ - 1| ≤ eig` counts as a unit eigenvalue.
    pub eig: f64,
    /// `|λ| ≥ 1 - peri` counts as peripheral.
    pub peri: f64,
    /// Entries with modulus `≤ zero` are treated as structural zeros.
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eig: 1e-9, peri: 1e-9, zero: 1e-12 }
    }
}

/// Square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidMatrix(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(ComplexMatrix(m))
    }

    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        ComplexMatrix(m)
    }

    pub fn zeros(d: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(d, d))
    }

    pub fn identity(d: usize) -> Self {
        ComplexMatrix(DMatrix::identity(d, d))
    }

    /// All-ones matrix.
    pub fn ones(d: usize) -> Self {
        ComplexMatrix(DMatrix::from_element(d, d, C64::new(1.0, 0.0)))
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        ComplexMatrix(DMatrix::from_fn(d, d, |i, j| f(i, j)))
    }

    /// Builds a matrix from real rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidMatrix("rows must have equal length d".into()));
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidMatrix("rows must have equal length d".into()));
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// Diagonal matrix with the given diagonal.
    pub fn from_diagonal(v: &[C64]) -> Self {
        let d = v.len();
        ComplexMatrix(DMatrix::from_fn(d, d, |i, j| if i == j { v[i] } else { C64::new(0.0, 0.0) }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.0[(i, j)] = z;
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// `diag Z`: the diagonal part as a matrix.
    pub fn diag_part(&self) -> Self {
        Self::from_diagonal(&self.diagonal())
    }

    /// `Z̃ = Z - diag Z`.
    pub fn off_diag_part(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim() {
            m.set(i, i, C64::new(0.0, 0.0));
        }
        m
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff dimension mismatch");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `‖M†M - 𝟙‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let p = ComplexMatrix(self.0.adjoint() * &self.0);
        p.max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_same_dim(self, other)?;
        Ok(ComplexMatrix(&self.0 * &other.0))
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::identity(self.dim());
        for _ in 0..n {
            acc = ComplexMatrix(&acc.0 * &self.0);
        }
        acc
    }

    /// `M v` for a column vector.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// Largest imaginary part in modulus.
    pub fn max_imag(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("{} vs {}", a.dim(), b.dim())));
    }
    Ok(())
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix addition dimension mismatch");
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix subtraction dimension mismatch");
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix product dimension mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Matrix on `C^d ⊗ C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteMatrix {
    local_dim: usize,
    matrix: ComplexMatrix,
}

impl BipartiteMatrix {
    pub fn new(local_dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if local_dim == 0 || matrix.dim() != local_dim * local_dim {
            return Err(Error::Dimension(format!(
                "bipartite matrix of size {} is not {}^2",
                matrix.dim(),
                local_dim
            )));
        }
        Ok(BipartiteMatrix { local_dim, matrix })
    }

    /// Infers the local dimension from a perfect-square size.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.dim();
        let d = (n as f64).sqrt().round() as usize;
        Self::new(d, matrix)
    }

    pub fn from_entries(d: usize, mut f: impl FnMut(usize, usize, usize, usize) -> C64) -> Self {
        let m = ComplexMatrix::from_fn(d * d, |r, c| f(r / d, r % d, c / d, c % d));
        BipartiteMatrix { local_dim: d, matrix: m }
    }

    pub fn zeros(d: usize) -> Self {
        BipartiteMatrix { local_dim: d, matrix: ComplexMatrix::zeros(d * d) }
    }

    pub fn identity(d: usize) -> Self {
        BipartiteMatrix { local_dim: d, matrix: ComplexMatrix::identity(d * d) }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `⟨ij|X|kl⟩`.
    #[inline]
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        let d = self.local_dim;
        self.matrix.get(i * d + j, k * d + l)
    }

    #[inline]
    pub fn set_entry(&mut self, i: usize, j: usize, k: usize, l: usize, z: C64) {
        let d = self.local_dim;
        self.matrix.set(i * d + j, k * d + l, z);
    }

    pub fn adjoint(&self) -> Self {
        BipartiteMatrix { local_dim: self.local_dim, matrix: self.matrix.adjoint() }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.local_dim != other.local_dim {
            return Err(Error::Dimension(format!("local dims {} vs {}", self.local_dim, other.local_dim)));
        }
        Ok(BipartiteMatrix { local_dim: self.local_dim, matrix: &self.matrix * &other.matrix })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.matrix.is_unitary(tol)
    }

    /// Interprets `self` as the matrix representation `M(Φ)` of a map on
    /// `d x d` matrices and applies it.
    pub fn apply_map(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.local_dim;
        if x.dim() != d {
            return Err(Error::Dimension(format!("map on {d}x{d} applied to {}x{}", x.dim(), x.dim())));
        }
        Ok(ComplexMatrix::from_fn(d, |i, j| {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..d {
                for l in 0..d {
                    s += self.entry(i, j, k, l) * x.get(k, l);
                }
            }
            s
        }))
    }
}

/// `⟨ij|X^R|kl⟩ = ⟨ik|X|jl⟩`.
pub fn realign(x: &BipartiteMatrix) -> BipartiteMatrix {
    BipartiteMatrix::from_entries(x.local_dim(), |i, j, k, l| x.entry(i, k, j, l))
}

/// Which tensor factor a partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

/// `(transp ⊗ id)(X)` for `First`, `(id ⊗ transp)(X)` for `Second`.
pub fn partial_transpose(x: &BipartiteMatrix, side: Side) -> BipartiteMatrix {
    match side {
        Side::First => BipartiteMatrix::from_entries(x.local_dim(), |i, j, k, l| x.entry(k, j, i, l)),
        Side::Second => BipartiteMatrix::from_entries(x.local_dim(), |i, j, k, l| x.entry(i, l, k, j)),
    }
}

/// Entrywise (Hadamard) product.
pub fn schur_product(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_dim(m, n)?;
    Ok(ComplexMatrix(m.0.component_mul(&n.0)))
}

pub fn kron(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<BipartiteMatrix> {
    check_same_dim(m, n)?;
    let d = m.dim();
    Ok(BipartiteMatrix::from_entries(d, |i, j, k, l| m.get(i, k) * n.get(j, l)))
}

/// Swap operator, `F|ij⟩ = |ji⟩`.
pub fn flip(d: usize) -> BipartiteMatrix {
    BipartiteMatrix::from_entries(d, |i, j, k, l| {
        if i == l && j == k {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Partial trace over the first factor.
pub fn partial_trace_first(x: &BipartiteMatrix) -> ComplexMatrix {
    let d = x.local_dim();
    ComplexMatrix::from_fn(d, |j, l| (0..d).map(|i| x.entry(i, j, i, l)).sum())
}

/// Partial trace over the second factor.
pub fn partial_trace_second(x: &BipartiteMatrix) -> ComplexMatrix {
    let d = x.local_dim();
    ComplexMatrix::from_fn(d, |i, k| (0..d).map(|j| x.entry(i, j, k, j)).sum())
}

/// Eigenvalues with multiplicities, in reporting order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<C64>,
    pub peripheral: Vec<C64>,
    pub unit_multiplicity: usize,
}

impl SpectrumResult {
    pub fn from_eigenvalues(mut eigenvalues: Vec<C64>, tol: &Tolerances) -> Self {
        sort_spectrum(&mut eigenvalues);
        let peripheral: Vec<C64> =
            eigenvalues.iter().copied().filter(|z| z.norm() >= 1.0 - tol.peri).collect();
        let unit_multiplicity = eigenvalues.iter().filter(|z| (*z - 1.0).norm() <= tol.eig).count();
        SpectrumResult { eigenvalues, peripheral, unit_multiplicity }
    }

    pub fn peripheral_count(&self) -> usize {
        self.peripheral.len()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Descending modulus, then descending real part, then descending imaginary part.
pub fn sort_spectrum(v: &mut [C64]) {
    v.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
}

pub fn raw_eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let d = m.dim();
    let data: Vec<C64> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| m.get(i, j)).collect();
    eigen::eigenvalues_row_major(d, data)
}

pub fn eigenvalues(m: &ComplexMatrix, tol: &Tolerances) -> Result<SpectrumResult> {
    if m.0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(SpectrumResult::from_eigenvalues(raw_eigenvalues(m)?, tol))
}

/// Eigenvalues of the Hermitian part `(M + M†)/2`, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = (m + &m.adjoint()).scale_real(0.5);
    let mut v: Vec<f64> = raw_eigenvalues(&h)?.into_iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Right singular vectors of `m` paired with their singular values,
/// ascending in the singular value.
pub fn singular_vectors_ascending(m: &ComplexMatrix) -> Vec<(f64, Vec<C64>)> {
    let d = m.dim();
    let svd = m.inner().clone().svd(false, true);
    let vt = svd.v_t.expect("requested V†");
    let mut out: Vec<(f64, Vec<C64>)> = (0..d)
        .map(|k| (svd.singular_values[k], (0..d).map(|j| vt[(k, j)].conj()).collect()))
        .collect();
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Matches two eigenvalue lists as multisets: greedy nearest pairing after
/// sorting; returns the largest pairing distance.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    let mut a_sorted = a.to_vec();
    sort_spectrum(&mut a_sorted);
    for z in a_sorted {
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (k, w) in b.iter().enumerate() {
            if !used[k] {
                let dist = (z - w).norm();
                if dist < best_d {
                    best_d = dist;
                    best = Some(k);
                }
            }
        }
        if let Some(k) = best {
            used[k] = true;
        }
        worst = worst.max(best_d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_spectrum() {
        let s = eigenvalues(&ComplexMatrix::identity(3), &Tolerances::default()).unwrap();
        assert_eq!(s.eigenvalues, vec![c(1.0); 3]);
        assert_eq!(s.unit_multiplicity, 3);
        assert_eq!(s.peripheral_count(), 3);
    }

    #[test]
    fn rank_one_averaging_matrix() {
        // Oracle: characteristic polynomial of a rank-1 matrix with trace 1 is
        // λ^2 (λ - 1), so the spectrum is {1, 0, 0}.
        let a = ComplexMatrix::from_real_rows(&[&[0.5, 0.5, 0.5], &[0.5, 0.5, 0.5], &[0.0, 0.0, 0.0]]).unwrap();
        let s = eigenvalues(&a, &Tolerances::default()).unwrap();
        assert!((s.eigenvalues[0] - 1.0).norm() < 1e-14);
        assert!(s.eigenvalues[1].norm() < 1e-14 && s.eigenvalues[2].norm() < 1e-14);
        assert_eq!(s.unit_multiplicity, 1);
    }

    #[test]
    fn two_by_two_all_half_block() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let s = eigenvalues(&m, &Tolerances::default()).unwrap();
        assert!((s.eigenvalues[0] - 1.0).norm() < 1e-14);
        assert!(s.eigenvalues[1].norm() < 1e-14);
    }

    #[test]
    fn ordering_is_modulus_then_real_then_imag() {
        let mut v = vec![C64::new(0.0, 1.0), c(-1.0), c(0.5), C64::new(0.0, -1.0), c(1.0)];
        sort_spectrum(&mut v);
        assert_eq!(v, vec![c(1.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), c(-1.0), c(0.5)]);
    }

    #[test]
    fn non_finite_is_rejected() {
        let m = DMatrix::from_element(2, 2, C64::new(f64::NAN, 0.0));
        assert!(matches!(ComplexMatrix::new(m), Err(Error::InvalidMatrix(_))));
    }

    #[test]
    fn realign_of_identity_is_maximally_entangled_pattern() {
        // ⟨ij|𝟙^R|kl⟩ = ⟨ik|jl⟩ = δ_ij δ_kl, enumerated for d = 2.
        let r = realign(&BipartiteMatrix::identity(2));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let want = if i == j && k == l { 1.0 } else { 0.0 };
                        assert_eq!(r.entry(i, j, k, l), c(want), "{i}{j}{k}{l}");
                    }
                }
            }
        }
    }

    #[test]
    fn realign_of_flip_is_flip() {
        // ⟨ij|F^R|kl⟩ = ⟨ik|F|jl⟩ = δ_il δ_jk.
        for d in 2..=4 {
            assert_eq!(realign(&flip(d)), flip(d));
        }
    }

    #[test]
    fn partial_transpose_of_identity() {
        let id = BipartiteMatrix::identity(3);
        assert_eq!(partial_transpose(&id, Side::First), id);
        assert_eq!(partial_transpose(&id, Side::Second), id);
    }

    #[test]
    fn flip_squares_to_identity() {
        let f = flip(3);
        assert_eq!(f.matmul(&f).unwrap(), BipartiteMatrix::identity(3));
    }

    #[test]
    fn kron_of_identities() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(k.matrix(), &ComplexMatrix::identity(4));
    }

    #[test]
    fn schur_with_ones_is_identity_op() {
        let m = ComplexMatrix::from_fn(3, |i, j| C64::new(i as f64, j as f64 - 1.0));
        assert_eq!(schur_product(&m, &ComplexMatrix::ones(3)).unwrap(), m);
    }

    #[test]
    fn dimension_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(schur_product(&a, &b), Err(Error::Dimension(_))));
        assert!(matches!(kron(&a, &b), Err(Error::Dimension(_))));
        assert!(BipartiteMatrix::new(2, ComplexMatrix::identity(5)).is_err());
    }

    #[test]
    fn partial_traces_of_product() {
        let a = ComplexMatrix::from_fn(2, |i, j| C64::new((i + 2 * j) as f64, 1.0));
        let b = ComplexMatrix::from_fn(2, |i, j| C64::new(1.0, (i * j) as f64));
        let ab = kron(&a, &b).unwrap();
        assert!(partial_trace_first(&ab).max_abs_diff(&b.scale(a.trace())) < 1e-14);
        assert!(partial_trace_second(&ab).max_abs_diff(&a.scale(b.trace())) < 1e-14);
    }
}
