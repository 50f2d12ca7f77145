//! Integration supports for the momentum distributions: tensor grids,
//! Monte Carlo samplers and the deterministic reduction drivers.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;

use crate::distributions::{
    isotropic_direction, normal3, DistributionKind, GaussianWidths, MomentumDistribution, ProfileShape, RadialProfile,
};
use crate::integrate::{Backend, IntegrationError, IntegratorSpec, RandomStream, Rule, MC_CHUNK};
use crate::spin::BellState;

/// Cartesian momentum with its energy, in units of the mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Kin {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub e: f64,
}

impl Kin {
    #[inline]
    pub fn new(px: f64, py: f64, pz: f64) -> Self {
        Self { px, py, pz, e: (px * px + py * py + pz * pz + 1.0).sqrt() }
    }

    fn from_polar(p: f64, sin_t: f64, cos_t: f64, phi: f64) -> Self {
        Self::new(p * sin_t * phi.cos(), p * sin_t * phi.sin(), p * cos_t)
    }
}

/// Partial sums that can be combined in a fixed order.
pub(crate) trait Summable: Send {
    fn merge(&mut self, other: Self);
}

pub(crate) enum Integrated<A> {
    /// Sums on the requested grid and on the half-resolution grid.
    Quadrature {
        fine: A,
        coarse: A,
    },
    MonteCarlo(A),
}

/// Number of integrand evaluations the spec will need for `dist`.
pub(crate) fn evaluation_count(dist: &MomentumDistribution, spec: &IntegratorSpec) -> u64 {
    match spec.backend {
        Backend::MonteCarlo => spec.samples as u64,
        Backend::TensorQuadrature => {
            let dims = Grid::dimension(dist, spec);
            let n = spec.nodes_per_axis as u64;
            let c = spec.coarse_nodes() as u64;
            n.saturating_pow(dims).saturating_add(c.saturating_pow(dims))
        }
    }
}

/// Integrates `visit` over the support of `dist`. `visit` receives the
/// momentum pair and the full weight (density × measure × rule weight).
pub(crate) fn integrate<A, I, F>(
    dist: &MomentumDistribution,
    spec: &IntegratorSpec,
    init: I,
    visit: F,
) -> Result<Integrated<A>, IntegrationError>
where
    A: Summable,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &Kin, &Kin, f64) + Sync,
{
    spec.validate()?;
    spec.check_budget(evaluation_count(dist, spec))?;
    Ok(match spec.backend {
        Backend::TensorQuadrature => {
            let fine = Grid::new(dist, spec, spec.nodes_per_axis);
            let coarse = Grid::new(dist, spec, spec.coarse_nodes());
            Integrated::Quadrature { fine: grid_sum(&fine, &init, &visit), coarse: grid_sum(&coarse, &init, &visit) }
        }
        Backend::MonteCarlo => Integrated::MonteCarlo(monte_carlo_sum(dist, spec, &init, &visit)),
    })
}

/// Whether integration results have been averaged over a common rotation of
/// both momenta about z. When true, the caller must apply the same average
/// to whatever it accumulates.
pub(crate) fn azimuth_averaged(dist: &MomentumDistribution, spec: &IntegratorSpec) -> bool {
    dist.gaussian_widths().is_some() && spec.azimuth_reduction
}

fn grid_sum<A, I, F>(grid: &Grid, init: &I, visit: &F) -> A
where
    A: Summable,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &Kin, &Kin, f64) + Sync,
{
    let parts: Vec<A> = (0..grid.outer_len())
        .into_par_iter()
        .map(|i| {
            let mut acc = init();
            grid.visit_slice(i, &mut |p, q, w| visit(&mut acc, p, q, w));
            acc
        })
        .collect();
    parts.into_iter().fold(init(), |mut total, part| {
        total.merge(part);
        total
    })
}

fn monte_carlo_sum<A, I, F>(dist: &MomentumDistribution, spec: &IntegratorSpec, init: &I, visit: &F) -> A
where
    A: Summable,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &Kin, &Kin, f64) + Sync,
{
    let chunks = spec.samples.div_ceil(MC_CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            let mut stream = RandomStream::new(spec.seed, c as u64);
            let count = MC_CHUNK.min(spec.samples - c * MC_CHUNK);
            for _ in 0..count {
                let (p, q, w) = sample_pair(dist, &mut stream);
                visit(&mut acc, &p, &q, w);
            }
            acc
        })
        .collect();
    parts.into_iter().fold(init(), |mut total, part| {
        total.merge(part);
        total
    })
}

/// One importance sample: momentum pair and weight whose expectation is
/// the normalization integral.
pub(crate) fn sample_pair(dist: &MomentumDistribution, stream: &mut RandomStream) -> (Kin, Kin, f64) {
    let rng = stream.rng();
    match dist.kind() {
        DistributionKind::EntangledGaussian { .. } => {
            let w = dist.gaussian_widths().expect("gaussian");
            let centre = normal3(rng, (0.5 / w.a_centre).sqrt());
            let rel = normal3(rng, (0.5 / w.a_relative).sqrt());
            let p = Kin::new(centre[0] + 0.5 * rel[0], centre[1] + 0.5 * rel[1], centre[2] + 0.5 * rel[2]);
            let q = Kin::new(centre[0] - 0.5 * rel[0], centre[1] - 0.5 * rel[1], centre[2] - 0.5 * rel[2]);
            // ∫ exp(-a r²) d³r = (π / a)^{3/2}
            let volume = (PI * PI / (w.a_centre * w.a_relative)).powf(1.5);
            (p, q, volume / (4.0 * p.e * q.e))
        }
        DistributionKind::DeltaCorrelated { profile } => sample_sphere(profile, rng, BellState::PsiMinus),
        DistributionKind::BellManifold { variant, profile } => sample_sphere(profile, rng, *variant),
        DistributionKind::CollinearBeam { profile, theta } => {
            let (p, w) = match profile.shape() {
                ProfileShape::Gaussian { sigma_over_m } => {
                    let v = normal3(rng, *sigma_over_m);
                    let p = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                    // density of |v| is 4π p² (2πσ²)^{-3/2} exp(-p²/2σ²)
                    let w = (TAU * sigma_over_m * sigma_over_m).powf(1.5) / (4.0 * PI);
                    (p, if p <= profile.p_max() { w } else { 0.0 })
                }
                ProfileShape::Tabulated { .. } => {
                    let p = rng.random_range(0.0..=profile.p_max());
                    (p, profile.eval(p) * p * p * profile.p_max())
                }
            };
            let k = Kin::from_polar(p, theta.sin(), theta.cos(), 0.0);
            (k, k, w / (4.0 * k.e * k.e))
        }
    }
}

fn sample_sphere(profile: &RadialProfile, rng: &mut impl Rng, variant: BellState) -> (Kin, Kin, f64) {
    let (v, w) = match profile.shape() {
        ProfileShape::Gaussian { sigma_over_m } => {
            let v = normal3(rng, *sigma_over_m);
            let r2: f64 = v.iter().map(|c| c * c).sum();
            let w = (TAU * sigma_over_m * sigma_over_m).powf(1.5);
            (v, if r2 <= profile.p_max() * profile.p_max() { w } else { 0.0 })
        }
        ProfileShape::Tabulated { .. } => {
            let p = rng.random_range(0.0..=profile.p_max());
            let dir = isotropic_direction(rng);
            let v = dir.map(|c| c * p);
            (v, profile.eval(p) * 4.0 * PI * p * p * profile.p_max())
        }
    };
    let p = Kin::new(v[0], v[1], v[2]);
    let q = manifold_partner(variant, &p);
    (p, q, w / (4.0 * p.e * p.e))
}

#[inline]
fn manifold_partner(variant: BellState, p: &Kin) -> Kin {
    match variant {
        // φ_q = -φ_p
        BellState::PhiPlus => Kin { py: -p.py, ..*p },
        // φ_q = π - φ_p
        BellState::PhiMinus => Kin { px: -p.px, ..*p },
        // φ_q = φ_p - π
        BellState::PsiPlus => Kin { px: -p.px, py: -p.py, ..*p },
        BellState::PsiMinus => *p,
    }
}

/// Largest momentum correlation integrated on the `(p, q)` grid; above it
/// the centre/relative grid converges faster.
const PAIR_GRID_MAX_X: f64 = 0.85;

/// Tensor-product quadrature grid over the support of a distribution.
enum Grid<'a> {
    /// `(|P|, θ_P, |k|, θ_k, φ_k)` with `φ_P = 0`; radial axes in units of
    /// the Gaussian widths.
    GaussianCentreRelative {
        widths: GaussianWidths,
        radial: Rule,
        polar: Trig,
        azimuth: Trig,
    },
    /// `(|p|, θ_p, |q|, θ_q, φ_q)` with `φ_p = 0`. Resolves the Wigner
    /// structure at `|p| ~ m` better than the centre/relative grid unless
    /// the momenta are tightly correlated.
    GaussianPair {
        sigma: f64,
        x: f64,
        radial: Rule,
        polar: Trig,
        azimuth: Trig,
    },
    /// `(|p|, θ_p, φ_p, |q|, θ_q, φ_q)` directly.
    GaussianDirect {
        sigma: f64,
        x: f64,
        radial: Rule,
        polar: Trig,
        azimuth: Trig,
    },
    /// `(|p|, θ, φ)` with the partner momentum fixed by the manifold.
    Sphere {
        variant: BellState,
        profile: &'a RadialProfile,
        radial: Rule,
        polar: Trig,
        azimuth: Trig,
    },
    Beam {
        profile: &'a RadialProfile,
        radial: Rule,
        sin_t: f64,
        cos_t: f64,
    },
}

/// Rule nodes with their sines and cosines precomputed.
struct Trig {
    weights: Vec<f64>,
    sin: Vec<f64>,
    cos: Vec<f64>,
}

impl Trig {
    fn new(rule: Rule) -> Self {
        Self {
            sin: rule.nodes.iter().map(|t| t.sin()).collect(),
            cos: rule.nodes.iter().map(|t| t.cos()).collect(),
            weights: rule.weights,
        }
    }

    fn len(&self) -> usize {
        self.weights.len()
    }
}

impl<'a> Grid<'a> {
    fn dimension(dist: &MomentumDistribution, spec: &IntegratorSpec) -> u32 {
        match dist.kind() {
            DistributionKind::EntangledGaussian { .. } if spec.azimuth_reduction => 5,
            DistributionKind::EntangledGaussian { .. } => 6,
            DistributionKind::DeltaCorrelated { .. } | DistributionKind::BellManifold { .. } => 3,
            DistributionKind::CollinearBeam { .. } => 1,
        }
    }

    fn new(dist: &'a MomentumDistribution, spec: &IntegratorSpec, n: usize) -> Self {
        let cutoff = spec.gaussian_cutoff;
        match dist.kind() {
            DistributionKind::EntangledGaussian { sigma_over_m, x } => {
                let widths = GaussianWidths::new(*sigma_over_m, *x);
                if spec.azimuth_reduction && *x <= PAIR_GRID_MAX_X {
                    // width of |g|² along p with q = 0
                    let scale = 1.0 / (0.25 * widths.a_centre + widths.a_relative).sqrt();
                    Grid::GaussianPair {
                        sigma: *sigma_over_m,
                        x: *x,
                        radial: Rule::gauss_legendre(n, 0.0, cutoff * scale),
                        polar: Trig::new(Rule::polar(n)),
                        azimuth: Trig::new(Rule::periodic(n, 0.0)),
                    }
                } else if spec.azimuth_reduction {
                    Grid::GaussianCentreRelative {
                        widths,
                        radial: Rule::gauss_legendre(n, 0.0, cutoff),
                        polar: Trig::new(Rule::polar(n)),
                        azimuth: Trig::new(Rule::periodic(n, 0.0)),
                    }
                } else {
                    let p_cut = cutoff * (1.0 / widths.a_centre.sqrt() + 0.5 / widths.a_relative.sqrt());
                    Grid::GaussianDirect {
                        sigma: *sigma_over_m,
                        x: *x,
                        radial: Rule::gauss_legendre(n, 0.0, p_cut),
                        polar: Trig::new(Rule::polar(n)),
                        azimuth: Trig::new(Rule::periodic(n, 0.0)),
                    }
                }
            }
            DistributionKind::DeltaCorrelated { profile } => Self::sphere(BellState::PsiMinus, profile, n),
            DistributionKind::BellManifold { variant, profile } => Self::sphere(*variant, profile, n),
            DistributionKind::CollinearBeam { profile, theta } => Grid::Beam {
                profile,
                radial: Rule::gauss_legendre(n, 0.0, profile.p_max()),
                sin_t: theta.sin(),
                cos_t: theta.cos(),
            },
        }
    }

    fn sphere(variant: BellState, profile: &'a RadialProfile, n: usize) -> Self {
        Grid::Sphere {
            variant,
            profile,
            radial: Rule::gauss_legendre(n, 0.0, profile.p_max()),
            polar: Trig::new(Rule::polar(n)),
            azimuth: Trig::new(Rule::periodic(n, 0.0)),
        }
    }

    fn outer_len(&self) -> usize {
        match self {
            Grid::GaussianCentreRelative { radial, .. }
            | Grid::GaussianPair { radial, .. }
            | Grid::GaussianDirect { radial, .. }
            | Grid::Sphere { radial, .. }
            | Grid::Beam { radial, .. } => radial.len(),
        }
    }

    fn visit_slice(&self, i: usize, f: &mut impl FnMut(&Kin, &Kin, f64)) {
        match self {
            Grid::GaussianCentreRelative { widths, radial, polar, azimuth } => {
                let (sc, sk) = (1.0 / widths.a_centre.sqrt(), 1.0 / widths.a_relative.sqrt());
                let t_c = radial.nodes[i];
                let big_p = t_c * sc;
                // 2π from the factored-out common azimuth
                let w_c = TAU * radial.weights[i] * sc * big_p * big_p * (-t_c * t_c).exp();
                for a in 0..polar.len() {
                    let (cx, cz) = (big_p * polar.sin[a], big_p * polar.cos[a]);
                    let w_a = w_c * polar.weights[a] * polar.sin[a];
                    for (&t_k, &w_tk) in radial.nodes.iter().zip(&radial.weights) {
                        let k = t_k * sk;
                        let w_k = w_a * w_tk * sk * k * k * (-t_k * t_k).exp();
                        for b in 0..polar.len() {
                            let (kt, kz) = (0.5 * k * polar.sin[b], 0.5 * k * polar.cos[b]);
                            let w_b = w_k * polar.weights[b] * polar.sin[b];
                            for c in 0..azimuth.len() {
                                let (kx, ky) = (kt * azimuth.cos[c], kt * azimuth.sin[c]);
                                let p = Kin::new(cx + kx, ky, cz + kz);
                                let q = Kin::new(cx - kx, -ky, cz - kz);
                                f(&p, &q, w_b * azimuth.weights[c] / (4.0 * p.e * q.e));
                            }
                        }
                    }
                }
            }
            Grid::GaussianPair { sigma, x, radial, polar, azimuth, .. } => {
                let pr = radial.nodes[i];
                // 2π from the factored-out common azimuth
                let w_p = TAU * radial.weights[i] * pr * pr;
                for a in 0..polar.len() {
                    let p = Kin::new(pr * polar.sin[a], 0.0, pr * polar.cos[a]);
                    let w_pa = w_p * polar.weights[a] * polar.sin[a];
                    for (&qr, &wq) in radial.nodes.iter().zip(&radial.weights) {
                        let w_q = w_pa * wq * qr * qr;
                        for b in 0..polar.len() {
                            let w_b = w_q * polar.weights[b] * polar.sin[b];
                            for c in 0..azimuth.len() {
                                let q = Kin::new(
                                    qr * polar.sin[b] * azimuth.cos[c],
                                    qr * polar.sin[b] * azimuth.sin[c],
                                    qr * polar.cos[b],
                                );
                                let density = crate::distributions::gaussian_density(
                                    *sigma,
                                    *x,
                                    [p.px, p.py, p.pz],
                                    [q.px, q.py, q.pz],
                                );
                                f(&p, &q, w_b * azimuth.weights[c] * density / (4.0 * p.e * q.e));
                            }
                        }
                    }
                }
            }
            Grid::GaussianDirect { sigma, x, radial, polar, azimuth } => {
                let pr = radial.nodes[i];
                let w_p = radial.weights[i] * pr * pr;
                for a in 0..polar.len() {
                    for c in 0..azimuth.len() {
                        let p = Kin::new(
                            pr * polar.sin[a] * azimuth.cos[c],
                            pr * polar.sin[a] * azimuth.sin[c],
                            pr * polar.cos[a],
                        );
                        let w_pa = w_p * polar.weights[a] * polar.sin[a] * azimuth.weights[c];
                        for (&qr, &wq) in radial.nodes.iter().zip(&radial.weights) {
                            for b in 0..polar.len() {
                                for d in 0..azimuth.len() {
                                    let q = Kin::new(
                                        qr * polar.sin[b] * azimuth.cos[d],
                                        qr * polar.sin[b] * azimuth.sin[d],
                                        qr * polar.cos[b],
                                    );
                                    let density = crate::distributions::gaussian_density(
                                        *sigma,
                                        *x,
                                        [p.px, p.py, p.pz],
                                        [q.px, q.py, q.pz],
                                    );
                                    let w = w_pa * wq * qr * qr * polar.weights[b] * polar.sin[b] * azimuth.weights[d];
                                    f(&p, &q, w * density / (4.0 * p.e * q.e));
                                }
                            }
                        }
                    }
                }
            }
            Grid::Sphere { variant, profile, radial, polar, azimuth } => {
                let pr = radial.nodes[i];
                let w_p = radial.weights[i] * pr * pr * profile.eval(pr);
                for a in 0..polar.len() {
                    for c in 0..azimuth.len() {
                        let p = Kin::new(
                            pr * polar.sin[a] * azimuth.cos[c],
                            pr * polar.sin[a] * azimuth.sin[c],
                            pr * polar.cos[a],
                        );
                        let q = manifold_partner(*variant, &p);
                        let w = w_p * polar.weights[a] * polar.sin[a] * azimuth.weights[c];
                        f(&p, &q, w / (4.0 * p.e * p.e));
                    }
                }
            }
            Grid::Beam { profile, radial, sin_t, cos_t } => {
                let pr = radial.nodes[i];
                let p = Kin::from_polar(pr, *sin_t, *cos_t, 0.0);
                let w = radial.weights[i] * pr * pr * profile.eval(pr);
                f(&p, &p, w / (4.0 * p.e * p.e));
            }
        }
    }
}

/// All quadrature points of `dist` at `n` nodes per axis, in grid order.
pub(crate) fn grid_points(dist: &MomentumDistribution, spec: &IntegratorSpec, n: usize) -> Vec<(Kin, Kin, f64)> {
    let grid = Grid::new(dist, spec, n);
    let mut out = Vec::new();
    for i in 0..grid.outer_len() {
        grid.visit_slice(i, &mut |p, q, w| out.push((*p, *q, w)));
    }
    out
}
