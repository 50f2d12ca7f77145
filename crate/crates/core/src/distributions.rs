//! Two-particle momentum amplitudes `g(p, q)`.
//!
//! All momenta are in units of the particle mass. Integrals use the
//! invariant measure `d³p / (2E_p)` for each particle.
//!
//! Delta-correlated families are represented by their support manifold: the
//! second momentum is a fixed function of the first, and integrals run over
//! the first momentum only. The deltas are taken to consume the whole
//! `d³q` measure, leaving the weight `f(p) / (4 E_p²) d³p` on the manifold.
//! The collinear beam fixes the direction as well, leaving
//! `f(p) p² / (4 E_p²) dp`.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::integrate::{Estimate, IntegrationError, IntegratorSpec, RandomStream, Rule};
use crate::kinematics::{FourMomentum, KinematicsError};
use crate::spin::BellState;
use crate::support::{self, Kin, Summable};

#[derive(Debug, Error)]
pub enum DistributionError {
    #[error("invalid distribution parameter: {0}")]
    InvalidParameter(String),
    #[error("distribution norm {0:e} is degenerate")]
    DegenerateDistribution(f64),
    #[error("operation needs a delta-correlated distribution")]
    NotConstrained,
    #[error("operation needs an entangled Gaussian distribution")]
    NotGaussian,
    #[error("radial profile table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("cannot read radial profile: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileShape {
    /// `exp(-p² / 2σ²)`.
    Gaussian { sigma_over_m: f64 },
    /// Piecewise-linear interpolation of tabulated `(p, f(p))` values.
    Tabulated { p: Vec<f64>, f: Vec<f64> },
}

/// Non-negative radial density `f(p)` supported on `[0, p_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    shape: ProfileShape,
    p_max: f64,
}

impl RadialProfile {
    /// Gaussian profile with the default cutoff `max(6σ, 10)`.
    pub fn gaussian(sigma_over_m: f64) -> Result<Self, DistributionError> {
        Self::gaussian_with_cutoff(sigma_over_m, (6.0 * sigma_over_m).max(10.0))
    }

    pub fn gaussian_with_cutoff(sigma_over_m: f64, p_max: f64) -> Result<Self, DistributionError> {
        if !(sigma_over_m.is_finite() && sigma_over_m > 0.0) {
            return Err(DistributionError::InvalidParameter(format!("sigma/m must be positive, got {sigma_over_m}")));
        }
        if !(p_max.is_finite() && p_max > 0.0) {
            return Err(DistributionError::InvalidParameter(format!("cutoff must be positive, got {p_max}")));
        }
        Ok(Self { shape: ProfileShape::Gaussian { sigma_over_m }, p_max })
    }

    /// Tabulated profile; `p` strictly increasing from a non-negative start,
    /// `f` non-negative. The cutoff is the last abscissa.
    pub fn tabulated(points: &[(f64, f64)]) -> Result<Self, DistributionError> {
        let invalid = |m: String| Err(DistributionError::InvalidParameter(m));
        if points.len() < 2 {
            return invalid("a tabulated profile needs at least two points".into());
        }
        if points.iter().any(|&(p, f)| !(p.is_finite() && f.is_finite())) {
            return invalid("tabulated values must be finite".into());
        }
        if points[0].0 < 0.0 {
            return invalid("tabulated momenta must be non-negative".into());
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return invalid("tabulated momenta must be strictly increasing".into());
        }
        if points.iter().any(|&(_, f)| f < 0.0) {
            return invalid("tabulated profile values must be non-negative".into());
        }
        let (p, f): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
        let p_max = *p.last().unwrap();
        Ok(Self { shape: ProfileShape::Tabulated { p, f }, p_max })
    }

    /// Parses two whitespace-separated columns `p f(p)`; `#` starts a comment.
    pub fn parse_table(text: &str) -> Result<Self, DistributionError> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(DistributionError::Table {
                    line: idx + 1,
                    message: format!("expected 2 columns, found {}", cols.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| DistributionError::Table { line: idx + 1, message: format!("'{s}': {e}") })
            };
            points.push((parse(cols[0])?, parse(cols[1])?));
        }
        Self::tabulated(&points)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DistributionError> {
        Self::parse_table(&std::fs::read_to_string(path)?)
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn gaussian_sigma(&self) -> Option<f64> {
        match self.shape {
            ProfileShape::Gaussian { sigma_over_m } => Some(sigma_over_m),
            ProfileShape::Tabulated { .. } => None,
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        if !(0.0..=self.p_max).contains(&p) {
            return 0.0;
        }
        match &self.shape {
            ProfileShape::Gaussian { sigma_over_m } => (-p * p / (2.0 * sigma_over_m * sigma_over_m)).exp(),
            ProfileShape::Tabulated { p: xs, f } => {
                if p < xs[0] {
                    return 0.0;
                }
                let k = xs.partition_point(|&x| x <= p).min(xs.len() - 1).max(1);
                let (x0, x1) = (xs[k - 1], xs[k]);
                let t = ((p - x0) / (x1 - x0)).clamp(0.0, 1.0);
                f[k - 1] + t * (f[k] - f[k - 1])
            }
        }
    }

    /// Fraction of `∫ f(p) p² dp` lying beyond the cutoff. Zero for tables.
    pub fn tail_mass(&self) -> f64 {
        match self.shape {
            ProfileShape::Gaussian { sigma_over_m: s } => {
                let far = self.p_max + 12.0 * s;
                let g = |p: f64| p * p * (-p * p / (2.0 * s * s)).exp();
                let tail = Rule::gauss_legendre(64, self.p_max, far).integrate(g);
                let head = Rule::gauss_legendre(96, 0.0, self.p_max).integrate(g);
                tail / (head + tail)
            }
            ProfileShape::Tabulated { .. } => 0.0,
        }
    }
}

/// Momentum families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DistributionKind {
    /// `|g|² ∝ exp[-(p²+q²)/4σ²] exp[-(p²+q²-2x p·q)/4σ²(1-x²)]`.
    EntangledGaussian { sigma_over_m: f64, x: f64 },
    /// `q = p` with radial profile `f`.
    DeltaCorrelated { profile: RadialProfile },
    /// Equal magnitudes and polar angles, azimuths tied by the variant.
    BellManifold { variant: BellState, profile: RadialProfile },
    /// Both momenta equal and fixed to the direction `(θ, φ = 0)`.
    CollinearBeam { profile: RadialProfile, theta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumDistribution {
    kind: DistributionKind,
    /// `N` such that `|g|² = density / N`.
    norm: f64,
    norm_error: f64,
    normalized: bool,
}

impl MomentumDistribution {
    fn unnormalized(kind: DistributionKind) -> Self {
        Self { kind, norm: 1.0, norm_error: 0.0, normalized: false }
    }

    pub fn entangled_gaussian(sigma_over_m: f64, x: f64) -> Result<Self, DistributionError> {
        if !(sigma_over_m.is_finite() && sigma_over_m > 0.0) {
            return Err(DistributionError::InvalidParameter(format!("sigma/m must be positive, got {sigma_over_m}")));
        }
        if !(0.0..1.0).contains(&x) {
            return Err(DistributionError::InvalidParameter(format!("x must lie in [0, 1), got {x}")));
        }
        Ok(Self::unnormalized(DistributionKind::EntangledGaussian { sigma_over_m, x }))
    }

    pub fn delta_correlated(profile: RadialProfile) -> Self {
        Self::unnormalized(DistributionKind::DeltaCorrelated { profile })
    }

    pub fn bell_manifold(variant: BellState, profile: RadialProfile) -> Self {
        Self::unnormalized(DistributionKind::BellManifold { variant, profile })
    }

    pub fn collinear_beam(profile: RadialProfile, theta: f64) -> Result<Self, DistributionError> {
        if !(0.0..=PI).contains(&theta) {
            return Err(DistributionError::InvalidParameter(format!(
                "beam polar angle must lie in [0, pi], got {theta}"
            )));
        }
        Ok(Self::unnormalized(DistributionKind::CollinearBeam { profile, theta }))
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Normalization constant `N` and its integration error.
    pub fn normalization(&self) -> Estimate {
        Estimate { value: self.norm, error: self.norm_error }
    }

    pub fn is_constrained(&self) -> bool {
        !matches!(self.kind, DistributionKind::EntangledGaussian { .. })
    }

    /// `|g(p, q)|` for the entangled Gaussian (3-vector dot product).
    pub fn gaussian_amplitude(&self, p: &FourMomentum, q: &FourMomentum) -> Result<f64, DistributionError> {
        let DistributionKind::EntangledGaussian { sigma_over_m, x } = self.kind else {
            return Err(DistributionError::NotGaussian);
        };
        let [a, b, c] = p.cartesian();
        let [d, e, f] = q.cartesian();
        let density = gaussian_density(sigma_over_m, x, [a, b, c], [d, e, f]);
        Ok((density / self.norm).sqrt())
    }

    /// `√(f(p) / N)` on the support manifold of a constrained distribution.
    pub fn manifold_amplitude(&self, p: &FourMomentum) -> Result<f64, DistributionError> {
        let profile = self.profile().ok_or(DistributionError::NotConstrained)?;
        Ok((profile.eval(p.magnitude()) / self.norm).sqrt())
    }

    pub fn profile(&self) -> Option<&RadialProfile> {
        match &self.kind {
            DistributionKind::EntangledGaussian { .. } => None,
            DistributionKind::DeltaCorrelated { profile }
            | DistributionKind::BellManifold { profile, .. }
            | DistributionKind::CollinearBeam { profile, .. } => Some(profile),
        }
    }

    /// The second momentum paired with `p` on the support manifold.
    pub fn partner(&self, p: &FourMomentum) -> Result<FourMomentum, DistributionError> {
        let phi = p.phi();
        Ok(match &self.kind {
            DistributionKind::EntangledGaussian { .. } => return Err(DistributionError::NotConstrained),
            DistributionKind::DeltaCorrelated { .. } | DistributionKind::CollinearBeam { .. } => *p,
            DistributionKind::BellManifold { variant, .. } => match variant {
                BellState::PhiPlus => p.with_azimuth(-phi),
                BellState::PhiMinus => p.with_azimuth(PI - phi),
                BellState::PsiPlus => p.with_azimuth(phi - PI),
                BellState::PsiMinus => *p,
            },
        })
    }

    /// Computes `N` with the given integrator and returns the normalized
    /// distribution.
    pub fn normalize(&self, spec: &IntegratorSpec) -> Result<Self, DistributionError> {
        let raw = self.raw_norm(spec)?;
        if !raw.value.is_finite() || raw.value < 1e-300 {
            return Err(DistributionError::DegenerateDistribution(raw.value));
        }
        Ok(Self { kind: self.kind.clone(), norm: raw.value, norm_error: raw.error, normalized: true })
    }

    /// `∬ |g|² d̃p d̃q` with the current normalization.
    pub fn norm_integral(&self, spec: &IntegratorSpec) -> Result<Estimate, DistributionError> {
        let raw = self.raw_norm(spec)?;
        Ok(Estimate { value: raw.value / self.norm, error: raw.error / self.norm })
    }

    fn raw_norm(&self, spec: &IntegratorSpec) -> Result<Estimate, DistributionError> {
        let sum = support::integrate(self, spec, NormSum::default, |acc, _, _, w| acc.add(w))?;
        match sum {
            support::Integrated::Quadrature { fine, coarse } => {
                Ok(Estimate { value: fine.total, error: (fine.total - coarse.total).abs() })
            }
            support::Integrated::MonteCarlo(s) => {
                let n = s.count as f64;
                let mean = s.total / n;
                let var = (s.total_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
                Ok(Estimate { value: mean, error: (var / n).sqrt() })
            }
        }
    }

    pub(crate) fn gaussian_widths(&self) -> Option<GaussianWidths> {
        match self.kind {
            DistributionKind::EntangledGaussian { sigma_over_m, x } => Some(GaussianWidths::new(sigma_over_m, x)),
            _ => None,
        }
    }
}

/// Unnormalized `|g|²` of the entangled Gaussian at Cartesian momenta.
pub(crate) fn gaussian_density(sigma: f64, x: f64, p: [f64; 3], q: [f64; 3]) -> f64 {
    let pp: f64 = p.iter().map(|v| v * v).sum();
    let qq: f64 = q.iter().map(|v| v * v).sum();
    let pq: f64 = p.iter().zip(&q).map(|(a, b)| a * b).sum();
    let s2 = sigma * sigma;
    (-(pp + qq) / (4.0 * s2) - (pp + qq - 2.0 * x * pq) / (4.0 * s2 * (1.0 - x * x))).exp()
}

/// The entangled Gaussian factorizes in `P = (p + q)/2` and `k = p - q`:
/// `|g|² ∝ exp(-a_P P² - a_k k²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GaussianWidths {
    pub a_centre: f64,
    pub a_relative: f64,
}

impl GaussianWidths {
    pub fn new(sigma: f64, x: f64) -> Self {
        let s2 = sigma * sigma;
        Self { a_centre: (1.0 + 1.0 / (1.0 + x)) / (2.0 * s2), a_relative: (1.0 + 1.0 / (1.0 - x)) / (8.0 * s2) }
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct NormSum {
    total: f64,
    total_sq: f64,
    count: u64,
}

impl NormSum {
    fn add(&mut self, w: f64) {
        self.total += w;
        self.total_sq += w * w;
        self.count += 1;
    }
}

impl Summable for NormSum {
    fn merge(&mut self, other: Self) {
        self.total += other.total;
        self.total_sq += other.total_sq;
        self.count += other.count;
    }
}

/// Draws a momentum pair on the support manifold together with its
/// importance weight. The weights average to the normalization integral.
pub fn sample_manifold_point(
    dist: &MomentumDistribution,
    stream: &mut RandomStream,
) -> Result<(FourMomentum, FourMomentum, f64), DistributionError> {
    if !dist.is_constrained() {
        return Err(DistributionError::NotConstrained);
    }
    let (p, q, w) = support::sample_pair(dist, stream);
    Ok((p.to_four_momentum()?, q.to_four_momentum()?, w))
}

pub(crate) fn isotropic_direction(rng: &mut impl Rng) -> [f64; 3] {
    let cos_t: f64 = rng.random_range(-1.0..=1.0);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let phi: f64 = rng.random_range(0.0..TAU);
    [sin_t * phi.cos(), sin_t * phi.sin(), cos_t]
}

pub(crate) fn normal3(rng: &mut impl Rng, std: f64) -> [f64; 3] {
    std::array::from_fn(|_| std * rng.sample::<f64, _>(StandardNormal))
}

impl Kin {
    pub(crate) fn to_four_momentum(self) -> Result<FourMomentum, KinematicsError> {
        FourMomentum::from_cartesian(self.px, self.py, self.pz, 1.0)
    }
}
