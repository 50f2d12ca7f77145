//! Concurrence, von Neumann entropy and Bell fidelities of reduced spin
//! states.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boost_engine::{SingleSpinDensity, SpinDensityMatrix};
use crate::qmath::{self, ComplexMat2, ComplexMat4, QmathError, Tolerances, C64};
use crate::spin::{sigma_y_sigma_y, BellState};

#[derive(Debug, Error, PartialEq)]
pub enum EntanglementError {
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error(transparent)]
    Numerics(#[from] QmathError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Square roots of the spectrum of `ρρ̃`, descending.
    pub lambda: [f64; 4],
    pub error_bound: f64,
}

fn invalid(msg: String) -> EntanglementError {
    EntanglementError::InvalidDensityMatrix(msg)
}

/// Checks hermiticity, unit trace and positivity, allowing `slack` on top
/// of the default tolerances.
fn validate4(rho: &ComplexMat4, slack: f64) -> Result<[f64; 4], EntanglementError> {
    let tol = Tolerances::DEFAULT;
    if !rho.is_finite() {
        return Err(invalid("non-finite entries".into()));
    }
    let herm = rho.hermiticity_defect();
    if herm > tol.hermiticity + slack {
        return Err(invalid(format!("hermiticity defect {herm:e}")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol.hermiticity + 4.0 * slack || tr.im.abs() > tol.hermiticity + slack {
        return Err(invalid(format!("trace {tr}")));
    }
    let eig = qmath::hermitian_eigenvalues(rho)?;
    if eig[3] < -(tol.eigen_clip + 4.0 * slack) {
        return Err(invalid(format!("negative eigenvalue {:e}", eig[3])));
    }
    Ok(eig)
}

fn validate2(rho: &ComplexMat2, slack: f64) -> Result<[f64; 2], EntanglementError> {
    let tol = Tolerances::DEFAULT;
    if !rho.is_finite() {
        return Err(invalid("non-finite entries".into()));
    }
    let herm = rho.hermiticity_defect();
    if herm > tol.hermiticity + slack {
        return Err(invalid(format!("hermiticity defect {herm:e}")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol.hermiticity + 2.0 * slack || tr.im.abs() > tol.hermiticity + slack {
        return Err(invalid(format!("trace {tr}")));
    }
    let eig = rho.hermitian_eigenvalues()?;
    if eig[1] < -(tol.eigen_clip + 2.0 * slack) {
        return Err(invalid(format!("negative eigenvalue {:e}", eig[1])));
    }
    Ok(eig)
}

/// Spin-flipped state `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &ComplexMat4) -> ComplexMat4 {
    let yy = sigma_y_sigma_y();
    yy * rho.conj() * yy
}

/// Square roots of the spectrum of `ρρ̃`, descending.
///
/// With `ρ = W W†` these are the singular values of `Wᵀ (σ_y ⊗ σ_y) W`,
/// which avoids taking square roots of eigenvalues that are zero up to
/// round-off. Eigenvalues of `ρ` below `-floor` are rejected.
fn lambdas(rho: &ComplexMat4, floor: f64) -> Result<[f64; 4], EntanglementError> {
    let symmetric = (*rho + rho.adjoint()).scale(C64::new(0.5, 0.0));
    let (mu, v) = qmath::hermitian_eigen(&symmetric)?;
    let mut w = ComplexMat4::zeros();
    for (k, &m) in mu.iter().enumerate() {
        if m < -floor {
            return Err(invalid(format!("negative eigenvalue {m:e}")));
        }
        let r = m.max(0.0).sqrt();
        for row in 0..4 {
            w.0[row][k] = v.0[row][k] * r;
        }
    }
    let tau = w.transpose() * sigma_y_sigma_y() * w;
    Ok(qmath::singular_values(&tau)?)
}

/// Same spectrum from the general eigensolver applied to `ρρ̃` directly.
/// Eigenvalues in `[-floor, 0)` are clipped to zero.
pub fn lambdas_via_product(rho: &ComplexMat4, floor: f64) -> Result<[f64; 4], EntanglementError> {
    let r = *rho * spin_flip(rho);
    let eig = qmath::general_eigenvalues(&r)?;
    let mut lambda = [0.0; 4];
    for (l, e) in lambda.iter_mut().zip(eig) {
        // ρρ̃ is similar to a positive matrix; imaginary parts are noise
        if e.re < -floor {
            return Err(invalid(format!("negative eigenvalue {:e} of rho*rho_tilde", e.re)));
        }
        *l = e.re.max(0.0).sqrt();
    }
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok(lambda)
}

/// Concurrence from [`lambdas_via_product`], for cross-checks.
pub fn concurrence_via_product(rho: &ComplexMat4) -> Result<f64, EntanglementError> {
    validate4(rho, 0.0)?;
    Ok(wootters(&lambdas_via_product(rho, Tolerances::DEFAULT.eigen_clip)?))
}

fn wootters(lambda: &[f64; 4]) -> f64 {
    (lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0)
}

/// Hermitian unit perturbations, one per real degree of freedom, paired
/// with the entry whose error scales them.
fn hermitian_directions() -> Vec<((usize, usize), ComplexMat4)> {
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in i..4 {
            let mut re = ComplexMat4::zeros();
            re.0[i][j] = C64::new(1.0, 0.0);
            re.0[j][i] = C64::new(1.0, 0.0);
            out.push(((i, j), re));
            if i != j {
                let mut im = ComplexMat4::zeros();
                im.0[i][j] = C64::new(0.0, 1.0);
                im.0[j][i] = C64::new(0.0, -1.0);
                out.push(((i, j), im));
            }
        }
    }
    out
}

/// Concurrence of a matrix whose `(i, j)` entry is uncertain by
/// `entry_errors[i][j]`.
///
/// The bound sums, over every Hermitian degree of freedom, the largest
/// change in `C` when that entry is moved by its full error in either
/// direction, so square-root growth near vanishing `λ` is kept.
pub fn concurrence_with_errors(
    rho: &ComplexMat4,
    entry_errors: &[[f64; 4]; 4],
) -> Result<ConcurrenceResult, EntanglementError> {
    let max_error = entry_errors.iter().flatten().copied().fold(0.0, f64::max);
    validate4(rho, max_error)?;
    let clip = Tolerances::DEFAULT.eigen_clip;
    let lambda = lambdas(rho, clip + 4.0 * max_error)?;
    let value = wootters(&lambda);
    let mut error_bound = 0.0;
    if max_error > 0.0 {
        for ((i, j), dir) in hermitian_directions() {
            let e = entry_errors[i][j];
            if e == 0.0 {
                continue;
            }
            let mut worst: f64 = 0.0;
            for sign in [1.0, -1.0] {
                let moved = *rho + dir.scale(C64::new(sign * e, 0.0));
                let c = wootters(&lambdas(&moved, f64::INFINITY)?);
                worst = worst.max((c - value).abs());
            }
            error_bound += worst;
        }
    }
    Ok(ConcurrenceResult { value, lambda, error_bound })
}

/// Concurrence of a bare matrix whose entries are uncertain by at most
/// `entry_error`.
pub fn concurrence_of(rho: &ComplexMat4, entry_error: f64) -> Result<ConcurrenceResult, EntanglementError> {
    concurrence_with_errors(rho, &[[entry_error.max(0.0); 4]; 4])
}

pub fn concurrence(rho: &SpinDensityMatrix) -> Result<ConcurrenceResult, EntanglementError> {
    concurrence_with_errors(&rho.rho, &rho.entry_errors)
}

/// Density matrices with a spectrum, in bits.
pub trait Entropy {
    fn von_neumann_entropy(&self) -> Result<f64, EntanglementError>;
}

fn shannon_bits(p: &[f64]) -> f64 {
    let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum();
    s.max(0.0)
}

impl Entropy for ComplexMat4 {
    fn von_neumann_entropy(&self) -> Result<f64, EntanglementError> {
        Ok(shannon_bits(&validate4(self, 0.0)?))
    }
}

impl Entropy for ComplexMat2 {
    fn von_neumann_entropy(&self) -> Result<f64, EntanglementError> {
        Ok(shannon_bits(&validate2(self, 0.0)?))
    }
}

impl Entropy for SpinDensityMatrix {
    fn von_neumann_entropy(&self) -> Result<f64, EntanglementError> {
        Ok(shannon_bits(&validate4(&self.rho, self.error_estimate)?))
    }
}

impl Entropy for SingleSpinDensity {
    fn von_neumann_entropy(&self) -> Result<f64, EntanglementError> {
        Ok(shannon_bits(&validate2(&self.rho, self.error_estimate)?))
    }
}

pub fn von_neumann_entropy<R: Entropy + ?Sized>(rho: &R) -> Result<f64, EntanglementError> {
    rho.von_neumann_entropy()
}

/// Entropy of the first spin's marginal.
pub fn marginal_entropy(rho: &SpinDensityMatrix) -> Result<f64, EntanglementError> {
    rho.single_spin(crate::boost_engine::Particle::First).von_neumann_entropy()
}

pub fn bell_fidelity_of(rho: &ComplexMat4, which: BellState, slack: f64) -> Result<f64, EntanglementError> {
    validate4(rho, slack)?;
    let v = which.vector();
    let f = v.inner(&rho.apply(&v));
    Ok(f.re.clamp(0.0, 1.0))
}

pub fn bell_fidelity(rho: &SpinDensityMatrix, which: BellState) -> Result<f64, EntanglementError> {
    bell_fidelity_of(&rho.rho, which, rho.error_estimate)
}
