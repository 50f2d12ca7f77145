//! Quadrature rules, random streams and integrator configuration.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrationError {
    #[error("invalid integrator configuration: {0}")]
    InvalidSpec(String),
    #[error("integration needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("refinements disagree by {difference:e}, more than 10x the target tolerance {tolerance:e}")]
    NonConvergent { difference: f64, tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[serde(alias = "quadrature")]
    TensorQuadrature,
    #[serde(alias = "mc")]
    MonteCarlo,
}

impl Backend {
    pub fn label(self) -> &'static str {
        match self {
            Backend::TensorQuadrature => "quadrature",
            Backend::MonteCarlo => "monte_carlo",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quadrature" | "tensor_quadrature" => Ok(Backend::TensorQuadrature),
            "mc" | "monte_carlo" | "montecarlo" => Ok(Backend::MonteCarlo),
            other => Err(format!("unknown backend '{other}'")),
        }
    }
}

/// How the momentum integrals are evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorSpec {
    pub backend: Backend,
    /// Nodes per axis of the tensor grid (≥ 4).
    pub nodes_per_axis: usize,
    /// Monte Carlo sample count (≥ 1000).
    pub samples: usize,
    /// Monte Carlo seed.
    pub seed: u64,
    /// Gaussian integrals are truncated at this many e-folding widths
    /// `1/√a` of each radial factor `exp(-a r²)`.
    pub gaussian_cutoff: f64,
    /// Factor out the common azimuth of both momenta (5D instead of 6D).
    pub azimuth_reduction: bool,
    /// Upper bound on integrand evaluations for one reduction.
    pub max_evaluations: u64,
    /// When set, a quadrature refinement difference above ten times this
    /// value is treated as non-convergence.
    pub target_tolerance: Option<f64>,
}

pub const DEFAULT_SEED: u64 = 0x5EED_2002_1113;

impl Default for IntegratorSpec {
    fn default() -> Self {
        Self {
            backend: Backend::TensorQuadrature,
            nodes_per_axis: 24,
            samples: 1_000_000,
            seed: DEFAULT_SEED,
            gaussian_cutoff: 7.0,
            azimuth_reduction: true,
            max_evaluations: 2_000_000_000,
            target_tolerance: None,
        }
    }
}

impl IntegratorSpec {
    pub fn quadrature(nodes_per_axis: usize) -> Self {
        Self { nodes_per_axis, ..Self::default() }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self { backend: Backend::MonteCarlo, samples, seed, ..Self::default() }
    }

    /// Short human-readable description, e.g. `quadrature(n=24)`.
    pub fn describe(&self) -> String {
        match self.backend {
            Backend::TensorQuadrature => format!("quadrature(n={})", self.nodes_per_axis),
            Backend::MonteCarlo => format!("monte_carlo(samples={}, seed={})", self.samples, self.seed),
        }
    }

    pub fn validate(&self) -> Result<(), IntegrationError> {
        self.check().map_err(IntegrationError::InvalidSpec)
    }

    fn check(&self) -> Result<(), String> {
        match self.backend {
            Backend::TensorQuadrature if self.nodes_per_axis < 4 => {
                Err(format!("nodes_per_axis must be at least 4, got {}", self.nodes_per_axis))
            }
            Backend::MonteCarlo if self.samples < 1000 => {
                Err(format!("samples must be at least 1000, got {}", self.samples))
            }
            _ if !(self.gaussian_cutoff.is_finite() && self.gaussian_cutoff > 0.0) => {
                Err(format!("gaussian_cutoff must be positive, got {}", self.gaussian_cutoff))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn check_budget(&self, required: u64) -> Result<(), IntegrationError> {
        if required > self.max_evaluations {
            return Err(IntegrationError::BudgetExceeded { required, budget: self.max_evaluations });
        }
        Ok(())
    }

    pub(crate) fn check_convergence(&self, difference: f64) -> Result<(), IntegrationError> {
        match self.target_tolerance {
            Some(tolerance) if difference.is_nan() || difference > 10.0 * tolerance => {
                Err(IntegrationError::NonConvergent { difference, tolerance })
            }
            _ => Ok(()),
        }
    }

    /// Node count of the coarse grid used for the refinement error estimate.
    pub(crate) fn coarse_nodes(&self) -> usize {
        (self.nodes_per_axis / 2).max(2)
    }
}

/// A value together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One-dimensional quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Gauss–Legendre rule with `n` nodes on `[a, b]`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Self {
        let (x, w) = gauss_legendre_unit(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Self { nodes: x.iter().map(|t| mid + half * t).collect(), weights: w.iter().map(|v| v * half).collect() }
    }

    /// Periodic trapezoid rule with `n` nodes on `[offset, offset + 2π)`.
    pub fn periodic(n: usize, offset: f64) -> Self {
        let h = TAU / n as f64;
        Self { nodes: (0..n).map(|k| offset + h * k as f64).collect(), weights: vec![h; n] }
    }

    /// Gauss–Legendre on `[0, π]` for polar angles.
    pub fn polar(n: usize) -> Self {
        Self::gauss_legendre(n, 0.0, PI)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Newton iteration on `P_n` from Chebyshev-like initial guesses.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Independent random stream. Streams derived from the same seed with
/// different ids never overlap.
#[derive(Debug, Clone)]
pub struct RandomStream(ChaCha8Rng);

impl RandomStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}

impl rand::RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
}

/// Monte Carlo samples are drawn in chunks of this size, chunk `c` using
/// stream `c`, so results do not depend on the thread count.
pub(crate) const MC_CHUNK: usize = 1 << 14;
