//! Fixed-size complex linear algebra for two-qubit spin states.
//!
//! Everything here is 2×2 or 4×4. The two-spin basis is ordered
//! `{↑↑, ↑↓, ↓↑, ↓↓}` throughout the crate, i.e. index `2 * i + j` for the
//! first spin in state `i` and the second in state `j`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical tolerances shared by every module.
///
/// Quadrature and Monte Carlo errors are reported separately by the
/// integrators; these values only cover algebraic round-off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Algebraic identities (Kronecker products, unitarity).
    pub algebraic: f64,
    /// Maximum entrywise `|m - m†|` accepted as Hermitian.
    pub hermiticity: f64,
    /// Spectral comparisons.
    pub spectral: f64,
    /// Negative eigenvalues above `-eigen_clip` are clipped to zero.
    pub eigen_clip: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances =
        Tolerances { algebraic: 1e-12, hermiticity: 1e-10, spectral: 1e-9, eigen_clip: 1e-10 };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmathError {
    #[error("matrix is not Hermitian (max |m - m†| = {defect:e}, tolerance {tolerance:e})")]
    NotHermitian { defect: f64, tolerance: f64 },
    #[error("eigensolver did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMat2(pub [[C64; 2]; 2]);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMat4(pub [[C64; 4]; 4]);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexVec4(pub [C64; 4]);

impl ComplexMat2 {
    pub const fn new(entries: [[C64; 2]; 2]) -> Self {
        Self(entries)
    }

    pub const fn zeros() -> Self {
        Self([[ZERO; 2]; 2])
    }

    pub const fn identity() -> Self {
        Self([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn pauli_x() -> Self {
        Self([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Self([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn determinant(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().flatten().zip(other.0.iter().flatten()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Eigenvalues of a Hermitian 2×2 matrix, descending.
    pub fn hermitian_eigenvalues(&self) -> Result<[f64; 2], QmathError> {
        check_hermitian(self.hermiticity_defect(), Tolerances::DEFAULT.hermiticity)?;
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = 0.5 * (self.0[0][1] + self.0[1][0].conj());
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        Ok([mean + radius, mean - radius])
    }
}

impl Mul for ComplexMat2 {
    type Output = ComplexMat2;

    fn mul(self, rhs: ComplexMat2) -> ComplexMat2 {
        let mut out = ComplexMat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }
}

impl Add for ComplexMat2 {
    type Output = ComplexMat2;

    fn add(mut self, rhs: ComplexMat2) -> ComplexMat2 {
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl Index<(usize, usize)> for ComplexMat2 {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl ComplexVec4 {
    pub const fn new(entries: [C64; 4]) -> Self {
        Self(entries)
    }

    pub const fn zeros() -> Self {
        Self([ZERO; 4])
    }

    pub fn basis(index: usize) -> Self {
        let mut v = Self::zeros();
        v.0[index] = ONE;
        v
    }

    pub fn from_real(entries: [f64; 4]) -> Self {
        Self(entries.map(|x| C64::new(x, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn normalized(&self) -> Self {
        self.scale(C64::new(1.0 / self.norm(), 0.0))
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> ComplexMat4 {
        self.outer(self)
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> ComplexMat4 {
        let mut out = ComplexMat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[i] * other.0[j].conj();
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Add for ComplexVec4 {
    type Output = ComplexVec4;

    fn add(self, rhs: ComplexVec4) -> ComplexVec4 {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for ComplexVec4 {
    type Output = ComplexVec4;

    fn sub(self, rhs: ComplexVec4) -> ComplexVec4 {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Index<usize> for ComplexVec4 {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl ComplexMat4 {
    pub const fn new(entries: [[C64; 4]; 4]) -> Self {
        Self(entries)
    }

    pub const fn zeros() -> Self {
        Self([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_real_diagonal([1.0; 4])
    }

    pub fn from_real_diagonal(d: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = C64::new(x, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].conj())))
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn transpose(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|row| row.map(|z| z.conj())))
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn apply(&self, v: &ComplexVec4) -> ComplexVec4 {
        ComplexVec4(std::array::from_fn(|i| (0..4).map(|k| self.0[i][k] * v.0[k]).sum()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().flatten().zip(other.0.iter().flatten()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Reduced state of the first spin (trace over the second).
    pub fn partial_trace_second(&self) -> ComplexMat2 {
        let mut out = ComplexMat2::zeros();
        for i in 0..2 {
            for k in 0..2 {
                out.0[i][k] = (0..2).map(|j| self.0[2 * i + j][2 * k + j]).sum();
            }
        }
        out
    }

    /// Reduced state of the second spin (trace over the first).
    pub fn partial_trace_first(&self) -> ComplexMat2 {
        let mut out = ComplexMat2::zeros();
        for j in 0..2 {
            for l in 0..2 {
                out.0[j][l] = (0..2).map(|i| self.0[2 * i + j][2 * i + l]).sum();
            }
        }
        out
    }
}

impl Mul for ComplexMat4 {
    type Output = ComplexMat4;

    fn mul(self, rhs: ComplexMat4) -> ComplexMat4 {
        ComplexMat4(std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum())))
    }
}

impl Add for ComplexMat4 {
    type Output = ComplexMat4;

    fn add(self, rhs: ComplexMat4) -> ComplexMat4 {
        ComplexMat4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}

impl Sub for ComplexMat4 {
    type Output = ComplexMat4;

    fn sub(self, rhs: ComplexMat4) -> ComplexMat4 {
        ComplexMat4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl Index<(usize, usize)> for ComplexMat4 {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

/// `a ⊗ b` with the first factor acting on the first spin.
pub fn kron2x2(a: &ComplexMat2, b: &ComplexMat2) -> ComplexMat4 {
    let mut out = ComplexMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

fn check_hermitian(defect: f64, tolerance: f64) -> Result<(), QmathError> {
    if defect.is_nan() || defect > tolerance {
        return Err(QmathError::NotHermitian { defect, tolerance });
    }
    Ok(())
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Real eigenvalues of a Hermitian 4×4 matrix in descending order.
///
/// Cyclic complex Jacobi rotations; the input is symmetrised first so that
/// round-off below the hermiticity tolerance does not leak into the spectrum.
pub fn hermitian_eigenvalues(m: &ComplexMat4) -> Result<[f64; 4], QmathError> {
    Ok(hermitian_eigen(m)?.0)
}

/// Eigenvalues in descending order with the matching orthonormal
/// eigenvectors as the columns of the returned matrix.
pub fn hermitian_eigen(m: &ComplexMat4) -> Result<([f64; 4], ComplexMat4), QmathError> {
    check_hermitian(m.hermiticity_defect(), Tolerances::DEFAULT.hermiticity)?;
    let mut a = (*m + m.adjoint()).scale(C64::new(0.5, 0.0));
    for i in 0..4 {
        a.0[i][i] = C64::new(a.0[i][i].re, 0.0);
    }
    let mut v = ComplexMat4::identity();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.0[i][j].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if let Some(j) = jacobi_rotate(&mut a, p, q) {
                    // V <- V J
                    for row in v.0.iter_mut() {
                        let (xp, xq) = (row[p], row[q]);
                        row[p] = xp * j[0][0] + xq * j[1][0];
                        row[q] = xp * j[0][1] + xq * j[1][1];
                    }
                }
            }
        }
    }

    let mut order = [0, 1, 2, 3];
    order.sort_by(|&x, &y| a.0[y][y].re.total_cmp(&a.0[x][x].re));
    let eig = order.map(|k| a.0[k][k].re);
    let mut vecs = ComplexMat4::zeros();
    for (col, &k) in order.iter().enumerate() {
        for row in 0..4 {
            vecs.0[row][col] = v.0[row][k];
        }
    }
    Ok((eig, vecs))
}

/// Singular values of a 4×4 complex matrix in descending order.
///
/// One-sided Jacobi orthogonalisation of the columns, which keeps small
/// singular values accurate to round-off relative to the largest one.
pub fn singular_values(m: &ComplexMat4) -> Result<[f64; 4], QmathError> {
    let mut a = *m;
    let col_dot = |a: &ComplexMat4, i: usize, j: usize| -> C64 { (0..4).map(|r| a.0[r][i].conj() * a.0[r][j]).sum() };
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..3 {
            for j in (i + 1)..4 {
                let alpha = col_dot(&a, i, i).re;
                let beta = col_dot(&a, j, j).re;
                let gamma = col_dot(&a, i, j);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..4 {
                    let xi = a.0[r][i];
                    let xj = a.0[r][j] * phase.conj();
                    a.0[r][i] = xi * c - xj * s;
                    a.0[r][j] = xi * s + xj * c;
                }
            }
        }
        if !rotated {
            let mut sv: [f64; 4] = std::array::from_fn(|k| col_dot(&a, k, k).re.max(0.0).sqrt());
            sv.sort_by(|x, y| y.total_cmp(x));
            return Ok(sv);
        }
    }
    Err(QmathError::ConvergenceFailure { iterations: JACOBI_MAX_SWEEPS })
}

/// Annihilates `a[p][q]`, returning the rotation's `(p, q)` block.
fn jacobi_rotate(a: &mut ComplexMat4, p: usize, q: usize) -> Option<[[C64; 2]; 2]> {
    let apq = a.0[p][q];
    let mag = apq.norm();
    if mag == 0.0 {
        return None;
    }
    // Phase-rotate the (p, q) block to a real symmetric one, then apply the
    // classical real rotation.
    let phase = apq / mag;
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Columns p and q of J: J e_p = c e_p - s conj(phase) e_q,
    //                       J e_q = s e_p + c conj(phase) e_q.
    let jpp = C64::new(c, 0.0);
    let jqp = -phase.conj() * s;
    let jpq = C64::new(s, 0.0);
    let jqq = phase.conj() * c;

    // A <- A J
    for row in a.0.iter_mut() {
        let (xp, xq) = (row[p], row[q]);
        row[p] = xp * jpp + xq * jqp;
        row[q] = xp * jpq + xq * jqq;
    }
    // A <- J† A
    for col in 0..4 {
        let (xp, xq) = (a.0[p][col], a.0[q][col]);
        a.0[p][col] = jpp.conj() * xp + jqp.conj() * xq;
        a.0[q][col] = jpq.conj() * xp + jqq.conj() * xq;
    }
    a.0[p][q] = ZERO;
    a.0[q][p] = ZERO;
    a.0[p][p] = C64::new(a.0[p][p].re, 0.0);
    a.0[q][q] = C64::new(a.0[q][q].re, 0.0);
    Some([[jpp, jpq], [jqp, jqq]])
}

/// Iteration budget for the shifted QR eigensolver.
pub const QR_MAX_ITERATIONS: usize = 400;

/// All four eigenvalues of a general complex 4×4 matrix (unordered).
///
/// Householder reduction to upper Hessenberg form followed by single-shift
/// complex QR sweeps with Wilkinson shifts and deflation.
pub fn general_eigenvalues(m: &ComplexMat4) -> Result<[C64; 4], QmathError> {
    general_eigenvalues_with_budget(m, QR_MAX_ITERATIONS)
}

pub fn general_eigenvalues_with_budget(m: &ComplexMat4, max_iterations: usize) -> Result<[C64; 4], QmathError> {
    const N: usize = 4;
    let mut h = hessenberg(m);
    let norm = h.max_abs();
    let mut eig = [ZERO; N];
    if norm == 0.0 {
        return Ok(eig);
    }
    if !h.is_finite() {
        return Err(QmathError::ConvergenceFailure { iterations: 0 });
    }

    let eps = f64::EPSILON;
    let mut hi = N - 1;
    let mut iterations = 0usize;
    let mut since_deflation = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h.0[0][0];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h.0[lo][lo - 1].norm();
            let diag = h.0[lo][lo].norm() + h.0[lo - 1][lo - 1].norm();
            if sub <= eps * diag || sub <= eps * norm * 1e-3 {
                h.0[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h.0[hi][hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if iterations >= max_iterations {
            return Err(QmathError::ConvergenceFailure { iterations });
        }
        iterations += 1;
        since_deflation += 1;

        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            h.0[hi][hi] + C64::new(0.75 * h.0[hi][hi - 1].norm(), 0.0)
        } else {
            wilkinson_shift(h.0[hi - 1][hi - 1], h.0[hi - 1][hi], h.0[hi][hi - 1], h.0[hi][hi])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Ok(eig)
}

/// Eigenvalue magnitudes of a general complex 4×4 matrix, descending.
pub fn general_eigenvalue_moduli(m: &ComplexMat4) -> Result<[f64; 4], QmathError> {
    let eig = general_eigenvalues(m)?;
    let mut moduli = eig.map(|z| z.norm());
    moduli.sort_by(|x, y| y.total_cmp(x));
    Ok(moduli)
}

fn hessenberg(m: &ComplexMat4) -> ComplexMat4 {
    let mut h = *m;
    for k in 0..2 {
        let x: Vec<C64> = (k + 1..4).map(|i| h.0[i][k]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // H <- (I - 2 v v†) H on rows k+1..4
        for col in 0..4 {
            let dot: C64 = v.iter().enumerate().map(|(r, vr)| vr.conj() * h.0[k + 1 + r][col]).sum();
            for (r, vr) in v.iter().enumerate() {
                h.0[k + 1 + r][col] -= vr * dot * 2.0;
            }
        }
        // H <- H (I - 2 v v†) on columns k+1..4
        for row in 0..4 {
            let dot: C64 = v.iter().enumerate().map(|(c, vc)| h.0[row][k + 1 + c] * vc).sum();
            for (c, vc) in v.iter().enumerate() {
                h.0[row][k + 1 + c] -= dot * vc.conj() * 2.0;
            }
        }
        for i in (k + 2)..4 {
            h.0[i][k] = ZERO;
        }
    }
    h
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One implicit single-shift QR step on the active block `lo..=hi`.
fn qr_sweep(h: &mut ComplexMat4, lo: usize, hi: usize, shift: C64) {
    for k in lo..=hi {
        h.0[k][k] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h.0[k][k];
        let b = h.0[k + 1][k];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (a / r, b / r) };
        // G = [[c*, s*], [-s, c]] zeroes b
        for col in k..=hi {
            let x = h.0[k][col];
            let y = h.0[k + 1][col];
            h.0[k][col] = c.conj() * x + s.conj() * y;
            h.0[k + 1][col] = -s * x + c * y;
        }
        rotations.push((k, c, s));
    }
    for (k, c, s) in rotations {
        // H <- H G†
        for row in lo..=(k + 1).min(hi) {
            let x = h.0[row][k];
            let y = h.0[row][k + 1];
            h.0[row][k] = x * c + y * s;
            h.0[row][k + 1] = -x * s.conj() + y * c.conj();
        }
    }
    for k in lo..=hi {
        h.0[k][k] += shift;
    }
}
