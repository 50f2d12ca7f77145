//! Boosted two-particle spin states and their momentum-traced reductions.
//!
//! A rest-frame state `g(p, q) |s⟩` is seen from a frame boosted along z as
//! `g(p, q) (U_p ⊗ U_q) |s⟩`, labelled by the boosted momenta. The Wigner
//! rotations are evaluated at the rest-frame momenta, and because the
//! integration measure is invariant no Jacobian enters the reduction
//! `ρ = ∬ Ψ' Ψ'† d̃p d̃q`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::{DistributionError, DistributionKind, MomentumDistribution};
use crate::integrate::{Backend, Estimate, IntegrationError, IntegratorSpec};
use crate::kinematics::{boost_momentum, wigner_coefficients, FourMomentum, Rapidity};
use crate::qmath::{ComplexMat2, ComplexMat4, ComplexVec4, C64, ZERO};
use crate::spin::{BellState, AZIMUTHAL_CHARGE};
use crate::support::{self, Integrated, Kin, Summable};

#[derive(Debug, Error)]
pub enum BoostError {
    #[error("spin state must have unit norm, got norm {0}")]
    SpinNotNormalized(f64),
    #[error("momentum distribution has not been normalized")]
    DistributionNotNormalized,
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

/// Rest-frame state `g(p, q) ⊗ |s⟩` with no spin–momentum entanglement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteState {
    distribution: MomentumDistribution,
    spin_state: ComplexVec4,
}

impl BipartiteState {
    pub fn new(distribution: MomentumDistribution, spin_state: ComplexVec4) -> Result<Self, BoostError> {
        let norm = spin_state.norm();
        let unit = (norm - 1.0).abs() <= 1e-12;
        if !unit {
            return Err(BoostError::SpinNotNormalized(norm));
        }
        if !distribution.is_normalized() {
            return Err(BoostError::DistributionNotNormalized);
        }
        Ok(Self { distribution, spin_state })
    }

    /// Normalizes `distribution` with `spec` and pairs it with `spin`.
    pub fn prepare(
        distribution: &MomentumDistribution,
        spin_state: ComplexVec4,
        spec: &IntegratorSpec,
    ) -> Result<Self, BoostError> {
        Self::new(distribution.normalize(spec)?, spin_state)
    }

    pub fn bell(distribution: MomentumDistribution, which: BellState) -> Result<Self, BoostError> {
        Self::new(distribution, which.vector())
    }

    pub fn singlet(distribution: MomentumDistribution) -> Result<Self, BoostError> {
        Self::bell(distribution, BellState::PsiMinus)
    }

    pub fn distribution(&self) -> &MomentumDistribution {
        &self.distribution
    }

    pub fn spin_state(&self) -> &ComplexVec4 {
        &self.spin_state
    }

    /// Always true: the rest-frame spin part does not depend on momentum.
    pub fn spin_is_momentum_independent(&self) -> bool {
        true
    }

    /// `g(p, q)`. For delta-correlated distributions this is the manifold
    /// amplitude when `q` is the partner of `p`, and zero otherwise.
    pub fn momentum_amplitude(&self, p: &FourMomentum, q: &FourMomentum) -> Result<f64, BoostError> {
        let d = &self.distribution;
        if !d.is_constrained() {
            return Ok(d.gaussian_amplitude(p, q)?);
        }
        let partner = d.partner(p)?;
        let gap = partner.cartesian().iter().zip(q.cartesian()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let on_support = match d.kind() {
            DistributionKind::CollinearBeam { theta, .. } => {
                gap <= 1e-9 && (p.magnitude() == 0.0 || ((p.theta() - theta).abs() <= 1e-9 && p.phi() == 0.0))
            }
            _ => gap <= 1e-9,
        };
        Ok(if on_support { d.manifold_amplitude(p)? } else { 0.0 })
    }
}

/// Spin amplitudes of the boosted state at one momentum pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostedAmplitude {
    /// Boosted momenta `(Λp, Λq)` labelling the amplitude.
    pub momentum_pair: (FourMomentum, FourMomentum),
    pub amplitudes: ComplexVec4,
}

#[inline]
pub(crate) fn wigner_of(k: &Kin, xi: Rapidity) -> [[C64; 2]; 2] {
    let (alpha, b) = wigner_coefficients(k.px, k.py, k.pz, k.e, 1.0, xi);
    let a = C64::new(alpha, 0.0);
    [[a, b], [-b.conj(), a]]
}

/// `(U_p ⊗ U_q) s`, computed as `U_p S U_qᵀ` with `S_kl = s_{2k+l}`.
#[inline]
fn apply_pair(up: &[[C64; 2]; 2], uq: &[[C64; 2]; 2], s: &[C64; 4]) -> [C64; 4] {
    // T = S U_qᵀ
    let t00 = s[0] * uq[0][0] + s[1] * uq[0][1];
    let t01 = s[0] * uq[1][0] + s[1] * uq[1][1];
    let t10 = s[2] * uq[0][0] + s[3] * uq[0][1];
    let t11 = s[2] * uq[1][0] + s[3] * uq[1][1];
    [
        up[0][0] * t00 + up[0][1] * t10,
        up[0][0] * t01 + up[0][1] * t11,
        up[1][0] * t00 + up[1][1] * t10,
        up[1][0] * t01 + up[1][1] * t11,
    ]
}

/// `(U_p ⊗ U_q) |s⟩` for rest-frame momenta `p`, `q` (unit mass).
pub fn boosted_spin(spin: &ComplexVec4, p: &FourMomentum, q: &FourMomentum, xi: Rapidity) -> ComplexVec4 {
    let kp = kin_of(p);
    let kq = kin_of(q);
    ComplexVec4(apply_pair(&wigner_of(&kp, xi), &wigner_of(&kq, xi), &spin.0))
}

fn kin_of(p: &FourMomentum) -> Kin {
    let [x, y, z] = p.cartesian();
    // rescale to unit mass
    let m = p.mass();
    Kin::new(x / m, y / m, z / m)
}

/// Boosted amplitude vector `g(p, q) (U_p ⊗ U_q) |s⟩` at rest-frame
/// momenta `p`, `q`.
pub fn boost_amplitude(
    state: &BipartiteState,
    p: &FourMomentum,
    q: &FourMomentum,
    xi: Rapidity,
) -> Result<BoostedAmplitude, BoostError> {
    let g = state.momentum_amplitude(p, q)?;
    let v = boosted_spin(&state.spin_state, p, q, xi);
    Ok(BoostedAmplitude {
        momentum_pair: (boost_momentum(p, xi), boost_momentum(q, xi)),
        amplitudes: v.scale(C64::new(g, 0.0)),
    })
}

/// Reduced spin state with an entrywise error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinDensityMatrix {
    pub rho: ComplexMat4,
    /// Largest entry of `entry_errors`.
    pub error_estimate: f64,
    pub entry_errors: [[f64; 4]; 4],
    /// Integrator description, e.g. `quadrature(n=24)`.
    pub method: String,
    /// `∬ |Ψ'|² d̃p d̃q` under the distribution's normalization.
    pub total_probability: Estimate,
}

/// Reduced single-spin state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleSpinDensity {
    pub rho: ComplexMat2,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Particle {
    First,
    Second,
}

impl SpinDensityMatrix {
    pub fn single_spin(&self, which: Particle) -> SingleSpinDensity {
        let rho = match which {
            Particle::First => self.rho.partial_trace_second(),
            Particle::Second => self.rho.partial_trace_first(),
        };
        SingleSpinDensity {
            rho,
            // two entries are summed per reduced entry
            error_estimate: 2.0 * self.error_estimate,
        }
    }
}

/// Spin vector split by azimuthal charge (`+1`, `0`, `-1`).
struct ChargeSplit {
    parts: Vec<(i32, [C64; 4])>,
}

impl ChargeSplit {
    fn new(s: &ComplexVec4) -> Self {
        let mut parts = Vec::new();
        for charge in [1, 0, -1] {
            let mut v = [ZERO; 4];
            let mut any = false;
            for i in 0..4 {
                if AZIMUTHAL_CHARGE[i] == charge && s.0[i] != ZERO {
                    v[i] = s.0[i];
                    any = true;
                }
            }
            if any {
                parts.push((charge, v));
            }
        }
        Self { parts }
    }
}

/// Accumulated `Σ w M` (upper triangle) plus the second moments needed for
/// Monte Carlo standard errors.
#[derive(Clone)]
struct SpinSum {
    track_moments: bool,
    w: f64,
    w2: f64,
    count: u64,
    wm: [C64; 10],
    w2m: [C64; 10],
    w2_re2: [f64; 10],
    w2_im2: [f64; 10],
}

/// Upper-triangle index pairs.
const UPPER: [(usize, usize); 10] = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

impl SpinSum {
    fn new(track_moments: bool) -> Self {
        Self {
            track_moments,
            w: 0.0,
            w2: 0.0,
            count: 0,
            wm: [ZERO; 10],
            w2m: [ZERO; 10],
            w2_re2: [0.0; 10],
            w2_im2: [0.0; 10],
        }
    }

    #[inline]
    fn push(&mut self, w: f64, m: &[C64; 10]) {
        self.w += w;
        for (acc, v) in self.wm.iter_mut().zip(m) {
            *acc += v * w;
        }
        if self.track_moments {
            let w2 = w * w;
            self.w2 += w2;
            self.count += 1;
            for (k, z) in m.iter().enumerate() {
                self.w2m[k] += z * w2;
                self.w2_re2[k] += w2 * z.re * z.re;
                self.w2_im2[k] += w2 * z.im * z.im;
            }
        }
    }

    fn rho(&self) -> ComplexMat4 {
        let mut rho = ComplexMat4::zeros();
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            let v = self.wm[k] / self.w;
            rho.0[i][j] = v;
            rho.0[j][i] = v.conj();
        }
        for i in 0..4 {
            rho.0[i][i].im = 0.0;
        }
        rho
    }

    /// Ratio-estimator standard errors of `rho()`.
    fn standard_errors(&self, rho: &ComplexMat4) -> [[f64; 4]; 4] {
        let n = self.count as f64;
        let scale = n / ((n - 1.0) * self.w * self.w);
        let mut out = [[0.0; 4]; 4];
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            let r = rho.0[i][j];
            let var_re = self.w2_re2[k] - 2.0 * r.re * self.w2m[k].re + r.re * r.re * self.w2;
            let var_im = self.w2_im2[k] - 2.0 * r.im * self.w2m[k].im + r.im * r.im * self.w2;
            let se = (scale * (var_re.max(0.0) + var_im.max(0.0))).sqrt();
            out[i][j] = se;
            out[j][i] = se;
        }
        out
    }
}

impl Summable for SpinSum {
    fn merge(&mut self, o: Self) {
        self.w += o.w;
        self.w2 += o.w2;
        self.count += o.count;
        for k in 0..10 {
            self.wm[k] += o.wm[k];
            self.w2m[k] += o.w2m[k];
            self.w2_re2[k] += o.w2_re2[k];
            self.w2_im2[k] += o.w2_im2[k];
        }
    }
}

/// Upper triangle of the integrand `v v†`, averaged over a common rotation
/// of both momenta about z when `averaged` is set.
#[inline]
fn integrand(up: &[[C64; 2]; 2], uq: &[[C64; 2]; 2], split: &ChargeSplit, averaged: bool) -> [C64; 10] {
    let mut out = [ZERO; 10];
    if !averaged || split.parts.len() == 1 {
        let mut v = [ZERO; 4];
        for (_, s) in &split.parts {
            let w = apply_pair(up, uq, s);
            for i in 0..4 {
                v[i] += w[i];
            }
        }
        let single_charge = split.parts.len() == 1;
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            if averaged && single_charge && AZIMUTHAL_CHARGE[i] != AZIMUTHAL_CHARGE[j] {
                continue;
            }
            out[k] = v[i] * v[j].conj();
        }
        return out;
    }
    // Under a common rotation by γ the (i, j) entry built from charge
    // components a, b picks up e^{iγ(a - b - ω_i + ω_j)}; only the
    // phase-free combinations survive the average.
    let vs: Vec<(i32, [C64; 4])> = split.parts.iter().map(|(c, s)| (*c, apply_pair(up, uq, s))).collect();
    for (k, &(i, j)) in UPPER.iter().enumerate() {
        let target = AZIMUTHAL_CHARGE[i] - AZIMUTHAL_CHARGE[j];
        let mut acc = ZERO;
        for (a, va) in &vs {
            for (b, vb) in &vs {
                if a - b == target {
                    acc += va[i] * vb[j].conj();
                }
            }
        }
        out[k] = acc;
    }
    out
}

/// Traces the boosted state over both momenta.
pub fn reduce_spin_density(
    state: &BipartiteState,
    xi: Rapidity,
    spec: &IntegratorSpec,
) -> Result<SpinDensityMatrix, BoostError> {
    let dist = &state.distribution;
    let averaged = support::azimuth_averaged(dist, spec);
    let split = ChargeSplit::new(&state.spin_state);
    let track = spec.backend == Backend::MonteCarlo;
    let sums = support::integrate(
        dist,
        spec,
        || SpinSum::new(track),
        |acc, p, q, w| {
            if w == 0.0 {
                // keeps the Monte Carlo sample count honest
                acc.push(0.0, &[ZERO; 10]);
                return;
            }
            let m = integrand(&wigner_of(p, xi), &wigner_of(q, xi), &split, averaged);
            acc.push(w, &m);
        },
    )?;
    let norm = dist.normalization();
    let (rho, entry_errors, total_probability) = match sums {
        Integrated::Quadrature { fine, coarse } => {
            let rho = fine.rho();
            let coarse_rho = coarse.rho();
            let errors = std::array::from_fn(|i| std::array::from_fn(|j| (rho.0[i][j] - coarse_rho.0[i][j]).norm()));
            let total = Estimate { value: fine.w / norm.value, error: (fine.w - coarse.w).abs() / norm.value };
            (rho, errors, total)
        }
        Integrated::MonteCarlo(sum) => {
            let rho = sum.rho();
            let errors = sum.standard_errors(&rho);
            let n = sum.count as f64;
            let mean = sum.w / n;
            let var = (sum.w2 / n - mean * mean).max(0.0) * n / (n - 1.0);
            let total = Estimate { value: mean / norm.value, error: (var / n).sqrt() / norm.value };
            (rho, errors, total)
        }
    };
    let error_estimate = entry_errors.iter().flatten().copied().fold(0.0, f64::max);
    spec.check_convergence(error_estimate)?;
    Ok(SpinDensityMatrix { rho, error_estimate, entry_errors, method: spec.describe(), total_probability })
}

/// Reduced state of one spin after tracing out momenta and the other spin.
pub fn reduce_single_spin(
    state: &BipartiteState,
    xi: Rapidity,
    spec: &IntegratorSpec,
    which: Particle,
) -> Result<SingleSpinDensity, BoostError> {
    Ok(reduce_spin_density(state, xi, spec)?.single_spin(which))
}
