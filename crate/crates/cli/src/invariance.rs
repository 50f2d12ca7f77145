//! Frame-invariance checks for the Bell manifolds and the logical qubit.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use relspin::distributions::RadialProfile;
use relspin::protocol::{encode, verify_invariance};
use relspin::{
    reduce_spin_density, BellState, BipartiteState, BoostError, DistributionError, IntegrationError, IntegratorSpec,
    KinematicsError, MomentumDistribution, ProtocolError, RandomStream, Rapidity, C64,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InvarianceError {
    #[error(transparent)]
    Boost(#[from] BoostError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

impl InvarianceError {
    pub fn is_non_convergence(&self) -> bool {
        let integration = match self {
            InvarianceError::Boost(BoostError::Integration(e))
            | InvarianceError::Boost(BoostError::Distribution(DistributionError::Integration(e)))
            | InvarianceError::Protocol(ProtocolError::Integration(e))
            | InvarianceError::Protocol(ProtocolError::Boost(BoostError::Integration(e)))
            | InvarianceError::Distribution(DistributionError::Integration(e)) => e,
            _ => return false,
        };
        matches!(integration, IntegrationError::NonConvergent { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteVariant {
    /// Spin state on its own `q = ±p` or `q = ±p̄` manifold.
    Bell(BellState),
    /// Logical qubit with random amplitudes in a collinear beam.
    Protocol,
}

impl SuiteVariant {
    pub const ALL: [SuiteVariant; 5] = [
        SuiteVariant::Bell(BellState::PhiPlus),
        SuiteVariant::Bell(BellState::PhiMinus),
        SuiteVariant::Bell(BellState::PsiPlus),
        SuiteVariant::Bell(BellState::PsiMinus),
        SuiteVariant::Protocol,
    ];
}

impl fmt::Display for SuiteVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteVariant::Bell(b) => b.fmt(f),
            SuiteVariant::Protocol => f.write_str("protocol"),
        }
    }
}

impl FromStr for SuiteVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "protocol" => Ok(SuiteVariant::Protocol),
            other => other.parse().map(SuiteVariant::Bell),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub sigma_over_m: f64,
    /// Beam polar angle for the protocol variant.
    pub theta: f64,
    /// Seed for the protocol amplitudes.
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { sigma_over_m: 1.0, theta: std::f64::consts::FRAC_PI_4, seed: 2002 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceRow {
    pub variant: String,
    pub xi: f64,
    /// Largest entry of `|ρ(ξ) − ρ(0)|`.
    pub max_deviation: f64,
    pub integrator_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl InvarianceRow {
    fn new(variant: SuiteVariant, xi: f64, max_deviation: f64, integrator_error: f64) -> Self {
        let tolerance = integrator_error.max(1e-8);
        Self {
            variant: variant.to_string(),
            xi,
            max_deviation,
            integrator_error,
            tolerance,
            passed: max_deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceSuiteReport {
    pub rows: Vec<InvarianceRow>,
    pub passed: bool,
}

/// `(a, b)` uniform on the Bloch sphere of the logical qubit.
pub fn random_logical_amplitudes(stream: &mut RandomStream) -> (C64, C64) {
    let rng = stream.rng();
    let cos_t: f64 = rng.random_range(-1.0..=1.0);
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let half = 0.5 * cos_t.acos();
    (C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), phase))
}

/// Compares each boosted reduced spin state with its rest-frame projector.
pub fn run_invariance_suite(
    variants: &[SuiteVariant],
    xi_list: &[f64],
    spec: &IntegratorSpec,
    options: &SuiteOptions,
) -> Result<InvarianceSuiteReport, InvarianceError> {
    let profile = RadialProfile::gaussian(options.sigma_over_m)?;
    let mut rows = Vec::with_capacity(variants.len() * xi_list.len());
    for &variant in variants {
        match variant {
            SuiteVariant::Bell(b) => {
                let dist = MomentumDistribution::bell_manifold(b, profile.clone());
                let state = BipartiteState::prepare(&dist, b.vector(), spec)?;
                for &xi in xi_list {
                    let rho = reduce_spin_density(&state, Rapidity::along_z(xi)?, spec)?;
                    let dev = rho.rho.max_abs_diff(&b.projector());
                    rows.push(InvarianceRow::new(variant, xi, dev, rho.error_estimate));
                }
            }
            SuiteVariant::Protocol => {
                let beam = MomentumDistribution::collinear_beam(profile.clone(), options.theta)?.normalize(spec)?;
                let (a, b) = random_logical_amplitudes(&mut RandomStream::new(options.seed, 0));
                let q = encode(a, b, beam)?;
                for &xi in xi_list {
                    let r = verify_invariance(&q, Rapidity::along_z(xi)?, spec)?;
                    rows.push(InvarianceRow::new(variant, xi, r.max_deviation, r.integrator_error));
                }
            }
        }
    }
    let passed = rows.iter().all(|r| r.passed);
    Ok(InvarianceSuiteReport { rows, passed })
}
