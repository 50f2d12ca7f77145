//! Frame-independent logical qubit carried by a pair of spins in a collinear
//! beam: `|0̃⟩ = g̃ |φ+⟩`, `|1̃⟩ = g̃ |ψ−⟩`.

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boost_engine::{reduce_spin_density, wigner_of, BipartiteState, BoostError};
use crate::distributions::{DistributionKind, MomentumDistribution};
use crate::integrate::{Backend, IntegrationError, IntegratorSpec, RandomStream};
use crate::kinematics::Rapidity;
use crate::qmath::{kron2x2, ComplexMat2, ComplexMat4, ComplexVec4, C64, ZERO};
use crate::spin::BellState;
use crate::support;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("logical amplitudes must satisfy |a|² + |b|² = 1, got {0}")]
    NotNormalized(f64),
    #[error("logical qubits require a collinear beam distribution")]
    NotCollinearBeam,
    #[error("beam distribution has not been normalized")]
    BeamNotNormalized,
    #[error("operator maps the state to zero")]
    ZeroState,
    #[error("register checks need the tensor quadrature backend")]
    UnsupportedBackend,
    #[error(transparent)]
    Boost(#[from] BoostError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalQubit {
    a: C64,
    b: C64,
    beam: MomentumDistribution,
}

fn check_beam(beam: &MomentumDistribution) -> Result<(), ProtocolError> {
    if !matches!(beam.kind(), DistributionKind::CollinearBeam { .. }) {
        return Err(ProtocolError::NotCollinearBeam);
    }
    if !beam.is_normalized() {
        return Err(ProtocolError::BeamNotNormalized);
    }
    Ok(())
}

pub fn encode(a: C64, b: C64, beam: MomentumDistribution) -> Result<LogicalQubit, ProtocolError> {
    let n = a.norm_sqr() + b.norm_sqr();
    let unit = (n - 1.0).abs() <= 1e-12;
    if !unit {
        return Err(ProtocolError::NotNormalized(n));
    }
    check_beam(&beam)?;
    Ok(LogicalQubit { a, b, beam })
}

impl LogicalQubit {
    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn beam(&self) -> &MomentumDistribution {
        &self.beam
    }

    /// `a |φ+⟩ + b |ψ−⟩`.
    pub fn spin_state(&self) -> ComplexVec4 {
        BellState::PhiPlus.vector().scale(self.a) + BellState::PsiMinus.vector().scale(self.b)
    }

    pub fn physical_state(&self) -> Result<BipartiteState, ProtocolError> {
        Ok(BipartiteState::new(self.beam.clone(), self.spin_state().normalized())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogicalOperator {
    pub lambda: [[C64; 2]; 2],
}

impl LogicalOperator {
    pub fn new(lambda: [[C64; 2]; 2]) -> Self {
        Self { lambda }
    }

    pub fn identity() -> Self {
        Self::new(ComplexMat2::identity().0)
    }

    pub fn not() -> Self {
        Self::new(ComplexMat2::pauli_x().0)
    }

    pub fn hadamard() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new([[h, h], [h, -h]])
    }

    /// Action on the spin space: `Σ λ_ij |e_i⟩⟨e_j|` with `e = (φ+, ψ−)`.
    pub fn spin_matrix(&self) -> ComplexMat4 {
        let e = [BellState::PhiPlus.vector(), BellState::PsiMinus.vector()];
        let mut m = ComplexMat4::zeros();
        for (i, ei) in e.iter().enumerate() {
            for (j, ej) in e.iter().enumerate() {
                m = m + ei.outer(ej).scale(self.lambda[i][j]);
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppliedOperator {
    pub qubit: LogicalQubit,
    /// `‖λ (a, b)‖` before renormalization.
    pub norm: f64,
    pub renormalized: bool,
}

pub fn apply_operator(q: &LogicalQubit, op: &LogicalOperator) -> Result<AppliedOperator, ProtocolError> {
    let l = &op.lambda;
    let a = l[0][0] * q.a + l[0][1] * q.b;
    let b = l[1][0] * q.a + l[1][1] * q.b;
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if !norm.is_finite() || norm <= 1e-300 {
        return Err(ProtocolError::ZeroState);
    }
    let renormalized = (norm - 1.0).abs() > 1e-12;
    let (a, b) = if renormalized { (a / norm, b / norm) } else { (a, b) };
    Ok(AppliedOperator { qubit: LogicalQubit { a, b, beam: q.beam.clone() }, norm, renormalized })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Largest entry of `|ρ(ξ) − ρ(0)|`.
    pub max_deviation: f64,
    pub integrator_error: f64,
    /// `max(1e-8, integrator_error)`.
    pub tolerance: f64,
    pub passed: bool,
}

impl InvarianceReport {
    pub(crate) fn new(max_deviation: f64, integrator_error: f64) -> Self {
        let tolerance = integrator_error.max(1e-8);
        Self { max_deviation, integrator_error, tolerance, passed: max_deviation <= tolerance }
    }
}

/// Compares the boosted reduced spin state with the rest-frame projector.
pub fn verify_invariance(
    q: &LogicalQubit,
    xi: Rapidity,
    spec: &IntegratorSpec,
) -> Result<InvarianceReport, ProtocolError> {
    let state = q.physical_state()?;
    let rho = reduce_spin_density(&state, xi, spec)?;
    let expected = state.spin_state().projector();
    Ok(InvarianceReport::new(rho.rho.max_abs_diff(&expected), rho.error_estimate))
}

/// Compares `O ρ_q(ξ) O†` with `ρ_{λq}(ξ)`, i.e. applying the operator
/// before or after the boost. The tolerance is `max(1e-8, ε_q + ε_{λq})`.
pub fn verify_operator_commutes(
    q: &LogicalQubit,
    op: &LogicalOperator,
    xi: Rapidity,
    spec: &IntegratorSpec,
) -> Result<InvarianceReport, ProtocolError> {
    let applied = apply_operator(q, op)?;
    let before = reduce_spin_density(&q.physical_state()?, xi, spec)?;
    let after = reduce_spin_density(&applied.qubit.physical_state()?, xi, spec)?;
    let o = op.spin_matrix();
    let moved = (o * before.rho * o.adjoint()).scale(C64::new(1.0 / (applied.norm * applied.norm), 0.0));
    Ok(InvarianceReport::new(moved.max_abs_diff(&after.rho), before.error_estimate + after.error_estimate))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementCounts {
    pub n0: u64,
    pub n1: u64,
}

/// Samples `shots` logical-basis measurements.
pub fn measure_logical(q: &LogicalQubit, stream: &mut RandomStream, shots: u64) -> MeasurementCounts {
    let p1 = (q.b.norm_sqr() / (q.a.norm_sqr() + q.b.norm_sqr())).clamp(0.0, 1.0);
    let n1 = Binomial::new(shots, p1).expect("probability in [0, 1]").sample(stream.rng());
    MeasurementCounts { n0: shots - n1, n1 }
}

/// Two logical qubits on independent beams with joint logical amplitudes
/// `c[2σ + τ]` on `|σ̃⟩|τ̃⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalRegister {
    amplitudes: [C64; 4],
    beams: [MomentumDistribution; 2],
}

/// Dense 16×16 complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat16(pub Vec<C64>);

impl Mat16 {
    fn zeros() -> Self {
        Self(vec![ZERO; 256])
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[16 * i + j]
    }

    pub fn trace(&self) -> C64 {
        (0..16).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl LogicalRegister {
    pub fn new(amplitudes: [C64; 4], beams: [MomentumDistribution; 2]) -> Result<Self, ProtocolError> {
        let n: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        let unit = (n - 1.0).abs() <= 1e-12;
        if !unit {
            return Err(ProtocolError::NotNormalized(n));
        }
        for b in &beams {
            check_beam(b)?;
        }
        Ok(Self { amplitudes, beams })
    }

    pub fn product(first: &LogicalQubit, second: &LogicalQubit) -> Self {
        let (x, y) = ([first.a, first.b], [second.a, second.b]);
        Self {
            amplitudes: [x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]],
            beams: [first.beam.clone(), second.beam.clone()],
        }
    }

    /// Physical four-spin amplitudes, spins ordered (1a, 1b, 2a, 2b).
    pub fn spin_state(&self) -> [C64; 16] {
        let basis = [BellState::PhiPlus.vector(), BellState::PsiMinus.vector()];
        let mut out = [ZERO; 16];
        for s in 0..2 {
            for t in 0..2 {
                let c = self.amplitudes[2 * s + t];
                for i in 0..4 {
                    for j in 0..4 {
                        out[4 * i + j] += c * basis[s].0[i] * basis[t].0[j];
                    }
                }
            }
        }
        out
    }

    fn boosted_sum(&self, xi: Rapidity, spec: &IntegratorSpec, n: usize) -> Mat16 {
        let s = self.spin_state();
        let pair_map = |k: &support::Kin| -> ComplexMat4 {
            let u = ComplexMat2::new(wigner_of(k, xi));
            kron2x2(&u, &u)
        };
        let first: Vec<(ComplexMat4, f64)> =
            support::grid_points(&self.beams[0], spec, n).iter().map(|(p, _, w)| (pair_map(p), *w)).collect();
        let second: Vec<(ComplexMat4, f64)> =
            support::grid_points(&self.beams[1], spec, n).iter().map(|(p, _, w)| (pair_map(p), *w)).collect();
        let mut rho = Mat16::zeros();
        let mut total = 0.0;
        for (a1, w1) in &first {
            for (a2, w2) in &second {
                let w = w1 * w2;
                if w == 0.0 {
                    continue;
                }
                let mut v = [ZERO; 16];
                for i in 0..4 {
                    for j in 0..4 {
                        let mut acc = ZERO;
                        for k in 0..4 {
                            for l in 0..4 {
                                acc += a1.0[i][k] * a2.0[j][l] * s[4 * k + l];
                            }
                        }
                        v[4 * i + j] = acc;
                    }
                }
                for i in 0..16 {
                    for j in 0..16 {
                        rho.0[16 * i + j] += v[i] * v[j].conj() * w;
                    }
                }
                total += w;
            }
        }
        for e in rho.0.iter_mut() {
            *e /= total;
        }
        rho
    }

    /// Reduced four-spin density matrix seen from the boosted frame, with
    /// its quadrature error estimate.
    pub fn reduced_spin_density(&self, xi: Rapidity, spec: &IntegratorSpec) -> Result<(Mat16, f64), ProtocolError> {
        if spec.backend != Backend::TensorQuadrature {
            return Err(ProtocolError::UnsupportedBackend);
        }
        spec.validate()?;
        let n = spec.nodes_per_axis;
        let c = spec.coarse_nodes();
        spec.check_budget((n * n + c * c) as u64)?;
        let fine = self.boosted_sum(xi, spec, n);
        let coarse = self.boosted_sum(xi, spec, c);
        let err = fine.max_abs_diff(&coarse);
        Ok((fine, err))
    }

    pub fn verify_invariance(&self, xi: Rapidity, spec: &IntegratorSpec) -> Result<InvarianceReport, ProtocolError> {
        let (rho, err) = self.reduced_spin_density(xi, spec)?;
        let s = self.spin_state();
        let mut expected = Mat16::zeros();
        for i in 0..16 {
            for j in 0..16 {
                expected.0[16 * i + j] = s[i] * s[j].conj();
            }
        }
        Ok(InvarianceReport::new(rho.max_abs_diff(&expected), err))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::RadialProfile;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn beam(theta: f64) -> MomentumDistribution {
        MomentumDistribution::collinear_beam(RadialProfile::gaussian(1.0).unwrap(), theta)
            .unwrap()
            .normalize(&IntegratorSpec::quadrature(32))
            .unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn encoding_checks() {
        let b = beam(1.0);
        assert!(matches!(encode(c(1.0), c(1.0), b.clone()), Err(ProtocolError::NotNormalized(_))));
        let gauss = MomentumDistribution::entangled_gaussian(1.0, 0.0).unwrap();
        assert!(matches!(encode(c(1.0), c(0.0), gauss), Err(ProtocolError::NotCollinearBeam)));
        let raw = MomentumDistribution::collinear_beam(RadialProfile::gaussian(1.0).unwrap(), 1.0).unwrap();
        assert!(matches!(encode(c(1.0), c(0.0), raw), Err(ProtocolError::BeamNotNormalized)));
        let zero = encode(c(1.0), c(0.0), b.clone()).unwrap();
        assert_eq!(zero.spin_state(), BellState::PhiPlus.vector());
        let one = encode(c(0.0), c(1.0), b).unwrap();
        assert_eq!(one.spin_state(), BellState::PsiMinus.vector());
        assert_eq!(zero.spin_state().inner(&one.spin_state()), ZERO);
    }

    #[test]
    fn operators_act_on_logical_coordinates() {
        let q = encode(c(1.0), c(0.0), beam(0.5)).unwrap();
        let same = apply_operator(&q, &LogicalOperator::identity()).unwrap();
        assert_eq!(same.qubit, q);
        assert!(!same.renormalized);
        let flipped = apply_operator(&q, &LogicalOperator::not()).unwrap().qubit;
        assert_eq!((flipped.a(), flipped.b()), (ZERO, c(1.0)));
        let h = apply_operator(&q, &LogicalOperator::hadamard()).unwrap().qubit;
        assert_abs_diff_eq!(h.a().re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(h.b().re, FRAC_1_SQRT_2, epsilon = 1e-15);
        let scaled = apply_operator(&q, &LogicalOperator::new([[c(2.0), ZERO], [ZERO, c(1.0)]])).unwrap();
        assert!(scaled.renormalized);
        assert_abs_diff_eq!(scaled.norm, 2.0);
        let kill = LogicalOperator::new([[ZERO, ZERO], [ZERO, c(1.0)]]);
        assert!(matches!(apply_operator(&q, &kill), Err(ProtocolError::ZeroState)));
    }

    #[test]
    fn rest_frame_is_exact() {
        let q = encode(c(0.6), C64::new(0.0, 0.8), beam(1.2)).unwrap();
        let r = verify_invariance(&q, Rapidity::IDENTITY, &IntegratorSpec::quadrature(16)).unwrap();
        assert!(r.max_deviation <= 1e-12 && r.passed);
    }

    #[test]
    fn boosted_logical_states_are_invariant() {
        let spec = IntegratorSpec::quadrature(24);
        for (a, b, theta, xi) in [(0.0, 1.0, 1.0, 5.0), (FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.3, 2.0), (0.6, 0.8, 2.9, 1.0)]
        {
            let q = encode(c(a), c(b), beam(theta)).unwrap();
            let r = verify_invariance(&q, Rapidity::new(xi).unwrap(), &spec).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn spin_matrix_embeds_the_logical_operator() {
        let q = encode(c(0.6), C64::new(0.0, 0.8), beam(1.0)).unwrap();
        for op in [LogicalOperator::not(), LogicalOperator::hadamard()] {
            let moved = op.spin_matrix().apply(&q.spin_state());
            let expected = apply_operator(&q, &op).unwrap().qubit.spin_state();
            assert!(moved.max_abs_diff(&expected) < 1e-15);
        }
        let id = LogicalOperator::identity().spin_matrix();
        let p = BellState::PhiPlus.projector() + BellState::PsiMinus.projector();
        assert!(id.max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn operators_commute_with_boosts() {
        let spec = IntegratorSpec::quadrature(16);
        let q = encode(c(0.6), C64::new(0.0, 0.8), beam(0.7)).unwrap();
        for op in [LogicalOperator::not(), LogicalOperator::hadamard()] {
            let r = verify_operator_commutes(&q, &op, Rapidity::new(3.0).unwrap(), &spec).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn measurement_counts() {
        let mut s = RandomStream::new(7, 0);
        let zero = encode(c(1.0), c(0.0), beam(1.0)).unwrap();
        assert_eq!(measure_logical(&zero, &mut s, 1000), MeasurementCounts { n0: 1000, n1: 0 });
        let one = encode(c(0.0), c(1.0), beam(1.0)).unwrap();
        assert_eq!(measure_logical(&one, &mut s, 1000), MeasurementCounts { n0: 0, n1: 1000 });
        let plus = encode(c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), beam(1.0)).unwrap();
        let m = measure_logical(&plus, &mut RandomStream::new(2024, 0), 1_000_000);
        assert_eq!(m.n0 + m.n1, 1_000_000);
        let f = m.n0 as f64 / 1e6;
        assert!((0.4985..=0.5015).contains(&f), "{f}");
    }

    #[test]
    fn register_is_invariant() {
        let q1 = encode(c(0.6), c(0.8), beam(std::f64::consts::FRAC_PI_6)).unwrap();
        let q2 = encode(c(FRAC_1_SQRT_2), C64::new(0.0, FRAC_1_SQRT_2), beam(std::f64::consts::FRAC_PI_3)).unwrap();
        let reg = LogicalRegister::product(&q1, &q2);
        let r = reg.verify_invariance(Rapidity::new(2.0).unwrap(), &IntegratorSpec::quadrature(16)).unwrap();
        assert!(r.passed, "{r:?}");
        let entangled = LogicalRegister::new(
            [c(FRAC_1_SQRT_2), ZERO, ZERO, c(FRAC_1_SQRT_2)],
            [q1.beam().clone(), q2.beam().clone()],
        )
        .unwrap();
        let (rho, _) =
            entangled.reduced_spin_density(Rapidity::new(2.0).unwrap(), &IntegratorSpec::quadrature(12)).unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
    }
}
