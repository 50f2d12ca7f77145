//! On-shell momenta, boosts along z and the spin-1/2 Wigner rotation.
//!
//! Momenta and energies are measured in units of the rest mass unless a
//! different mass is supplied explicitly; natural units with `c = 1`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qmath::{ComplexMat2, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("momentum magnitude must be finite and non-negative, got {0}")]
    InvalidMagnitude(f64),
    #[error("polar angle must lie in [0, pi], got {0}")]
    InvalidPolarAngle(f64),
    #[error("azimuthal angle must be finite, got {0}")]
    InvalidAzimuth(f64),
    #[error("mass must be finite and positive, got {0}")]
    InvalidMass(f64),
    #[error("rapidity must be finite, got {0}")]
    InvalidRapidity(f64),
}

/// Slack for polar angles produced by floating-point arithmetic.
const ANGLE_SLACK: f64 = 1e-12;

/// On-shell four-momentum in polar form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    p: f64,
    theta: f64,
    phi: f64,
    mass: f64,
}

impl FourMomentum {
    /// Builds a momentum with unit mass.
    pub fn new(p: f64, theta: f64, phi: f64) -> Result<Self, KinematicsError> {
        Self::with_mass(p, theta, phi, 1.0)
    }

    /// `theta` is clamped into `[0, π]` when it is off by round-off only;
    /// `phi` is wrapped into `[0, 2π)`.
    pub fn with_mass(p: f64, theta: f64, phi: f64, mass: f64) -> Result<Self, KinematicsError> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(KinematicsError::InvalidMagnitude(p));
        }
        if !(theta.is_finite() && (-ANGLE_SLACK..=PI + ANGLE_SLACK).contains(&theta)) {
            return Err(KinematicsError::InvalidPolarAngle(theta));
        }
        if !phi.is_finite() {
            return Err(KinematicsError::InvalidAzimuth(phi));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(KinematicsError::InvalidMass(mass));
        }
        Ok(Self { p, theta: theta.clamp(0.0, PI), phi: wrap_azimuth(phi), mass })
    }

    /// Builds a momentum from Cartesian components. A vanishing transverse
    /// part gives `phi = 0`.
    pub fn from_cartesian(px: f64, py: f64, pz: f64, mass: f64) -> Result<Self, KinematicsError> {
        let pt = px.hypot(py);
        let p = pt.hypot(pz);
        let theta = pt.atan2(pz);
        let phi = if pt == 0.0 { 0.0 } else { py.atan2(px) };
        Self::with_mass(p, theta, phi, mass)
    }

    pub fn magnitude(&self) -> f64 {
        self.p
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn energy(&self) -> f64 {
        self.p.hypot(self.mass)
    }

    pub fn pz(&self) -> f64 {
        self.p * self.theta.cos()
    }

    pub fn transverse(&self) -> f64 {
        self.p * self.theta.sin()
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let pt = self.transverse();
        [pt * self.phi.cos(), pt * self.phi.sin(), self.pz()]
    }

    /// `E² - |p|²`, which equals `m²` on shell.
    pub fn invariant_mass_sqr(&self) -> f64 {
        let e = self.energy();
        e * e - self.p * self.p
    }

    /// Same magnitude and polar angle, different azimuth.
    pub fn with_azimuth(&self, phi: f64) -> Self {
        Self { phi: wrap_azimuth(phi), ..*self }
    }
}

fn wrap_azimuth(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoostDirection {
    PlusZ,
    MinusZ,
}

/// Boost rapidity along the z axis, stored as a magnitude and a direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rapidity {
    xi: f64,
    direction: BoostDirection,
}

impl Rapidity {
    pub const IDENTITY: Rapidity = Rapidity { xi: 0.0, direction: BoostDirection::PlusZ };

    /// Boost along +z by a non-negative rapidity.
    pub fn new(xi: f64) -> Result<Self, KinematicsError> {
        if !xi.is_finite() || xi < 0.0 {
            return Err(KinematicsError::InvalidRapidity(xi));
        }
        Ok(Self { xi, direction: BoostDirection::PlusZ })
    }

    pub fn with_direction(xi: f64, direction: BoostDirection) -> Result<Self, KinematicsError> {
        Ok(Self { direction, ..Self::new(xi)? })
    }

    /// Signed rapidity along z; the sign selects the direction.
    pub fn along_z(signed: f64) -> Result<Self, KinematicsError> {
        let direction = if signed < 0.0 { BoostDirection::MinusZ } else { BoostDirection::PlusZ };
        Self::with_direction(signed.abs(), direction)
    }

    pub fn magnitude(&self) -> f64 {
        self.xi
    }

    pub fn direction(&self) -> BoostDirection {
        self.direction
    }

    pub fn signed(&self) -> f64 {
        match self.direction {
            BoostDirection::PlusZ => self.xi,
            BoostDirection::MinusZ => -self.xi,
        }
    }

    fn sign(&self) -> f64 {
        match self.direction {
            BoostDirection::PlusZ => 1.0,
            BoostDirection::MinusZ => -1.0,
        }
    }
}

/// Boosted energy `E' = E cosh ξ + p_z sinh ξ`.
pub fn boosted_energy(p: &FourMomentum, xi: Rapidity) -> f64 {
    let s = xi.signed();
    p.energy() * s.cosh() + p.pz() * s.sinh()
}

/// Applies the z boost to the four-vector; the transverse part is unchanged.
pub fn boost_momentum(p: &FourMomentum, xi: Rapidity) -> FourMomentum {
    let s = xi.signed();
    let pt = p.transverse();
    let pz = p.pz() * s.cosh() + p.energy() * s.sinh();
    FourMomentum { p: pt.hypot(pz), theta: pt.atan2(pz), phi: p.phi, mass: p.mass }
}

/// Phase-space weight of the invariant measure `d³p / (2E)` in polar
/// coordinates: `p² sin θ / (2E)`.
pub fn invariant_measure_weight(p: &FourMomentum) -> f64 {
    p.p * p.p * p.theta.sin() / (2.0 * p.energy())
}

/// Spin-1/2 Wigner rotation `[[α, β e^{-iφ}], [-β e^{iφ}, α]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerMatrix {
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

impl WignerMatrix {
    pub const IDENTITY: WignerMatrix = WignerMatrix { alpha: 1.0, beta: 0.0, phi: 0.0 };

    pub fn matrix(&self) -> ComplexMat2 {
        let e = Complex64::from_polar(1.0, -self.phi);
        let a = C64::new(self.alpha, 0.0);
        ComplexMat2::new([[a, e * self.beta], [-e.conj() * self.beta, a]])
    }

    /// `α² + β² - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta - 1.0
    }
}

/// `α` and `β e^{-iφ}` evaluated from Cartesian components.
///
/// The `e^{|ξ|/2}` growth of the boosted energy is divided out analytically,
/// so arbitrarily large rapidities stay finite.
#[inline]
pub(crate) fn wigner_coefficients(px: f64, py: f64, pz: f64, energy: f64, mass: f64, xi: Rapidity) -> (f64, C64) {
    let sign = xi.sign();
    let pz_eff = sign * pz;
    let u = (-xi.xi).exp();
    let one_minus_u = -(-xi.xi).exp_m1();
    let pt_sqr = px * px + py * py;
    // E + p_z without cancellation for p_z close to -E
    let e_plus = if pz_eff >= 0.0 { energy + pz_eff } else { (mass * mass + pt_sqr) / (energy - pz_eff) };
    let e_minus = if pz_eff <= 0.0 { energy - pz_eff } else { (mass * mass + pt_sqr) / (energy + pz_eff) };
    // (E' + m) e^{-|ξ|}
    let scaled_boosted = 0.5 * e_plus + 0.5 * e_minus * u * u + mass * u;
    let em = energy + mass;
    let alpha = (em / scaled_boosted).sqrt() * (0.5 * (1.0 + u) + pz_eff / em * 0.5 * one_minus_u);
    let scale = sign * 0.5 * one_minus_u / (em * scaled_boosted).sqrt();
    (alpha, C64::new(px * scale, -py * scale))
}

/// Wigner rotation for a particle of rest-frame momentum `p` seen from a frame
/// boosted by `xi` along z.
pub fn wigner_matrix(p: &FourMomentum, xi: Rapidity) -> WignerMatrix {
    let pt = p.transverse();
    // β e^{-iφ} = (p_x - i p_y) s with s real; evaluate with (pt, 0) and
    // restore the azimuth afterwards.
    let (alpha, b) = wigner_coefficients(pt, 0.0, p.pz(), p.energy(), p.mass, xi);
    WignerMatrix { alpha, beta: b.re, phi: p.phi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn rap(x: f64) -> Rapidity {
        Rapidity::new(x).unwrap()
    }

    /// Direct transcription of the closed-form coefficients (no rescaling).
    fn naive(p: &FourMomentum, xi: f64) -> (f64, f64) {
        let (e, m, pp, th) = (p.energy(), p.mass(), p.magnitude(), p.theta());
        let ep = e * xi.cosh() + pp * th.cos() * xi.sinh();
        let a = ((e + m) / (ep + m)).sqrt() * ((xi / 2.0).cosh() + pp * th.cos() / (e + m) * (xi / 2.0).sinh());
        let b = pp * th.sin() / ((e + m) * (ep + m)).sqrt() * (xi / 2.0).sinh();
        (a, b)
    }

    #[test]
    fn construction_validates_domain() {
        assert!(FourMomentum::new(-1.0, 0.0, 0.0).is_err());
        assert!(FourMomentum::new(1.0, 4.0, 0.0).is_err());
        assert!(FourMomentum::new(1.0, 0.0, f64::NAN).is_err());
        assert!(FourMomentum::with_mass(1.0, 0.0, 0.0, 0.0).is_err());
        let p = FourMomentum::new(1.0, PI + 1e-14, -1.0).unwrap();
        assert_eq!(p.theta(), PI);
        assert_abs_diff_eq!(p.phi(), TAU - 1.0, epsilon = 1e-15);
        assert!(Rapidity::new(-0.5).is_err());
        assert_eq!(Rapidity::along_z(-0.5).unwrap().signed(), -0.5);
    }

    #[test]
    fn boosted_rest_particle() {
        let p = FourMomentum::new(0.0, 1.0, 2.0).unwrap();
        let b = boost_momentum(&p, rap(1.0));
        assert_abs_diff_eq!(b.energy(), 1f64.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(b.magnitude(), 1f64.sinh(), epsilon = 1e-14);
        assert_eq!(b.theta(), 0.0);
    }

    #[test]
    fn identity_boost_leaves_momentum() {
        let p = FourMomentum::new(2.5, 0.7, 4.0).unwrap();
        let b = boost_momentum(&p, Rapidity::IDENTITY);
        assert_abs_diff_eq!(b.magnitude(), p.magnitude(), epsilon = 1e-15);
        assert_abs_diff_eq!(b.theta(), p.theta(), epsilon = 1e-15);
        assert_eq!(b.phi(), p.phi());
    }

    #[test]
    fn transverse_boost_energy_and_mass_shell() {
        let p = FourMomentum::new(1.0, FRAC_PI_2, 0.0).unwrap();
        let b = boost_momentum(&p, rap(2.0));
        assert_abs_diff_eq!(b.energy(), 2f64.sqrt() * 2f64.cosh(), epsilon = 1e-12);
        assert_abs_diff_eq!(boosted_energy(&p, rap(2.0)), b.energy(), epsilon = 1e-12);
        let [x, y, z] = b.cartesian();
        let e = b.energy();
        assert_abs_diff_eq!(e * e - (x * x + y * y + z * z), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn wigner_at_rest_and_collinear_is_identity() {
        for xi in [0.3, 1.0, 7.0, 40.0] {
            let rest = wigner_matrix(&FourMomentum::new(0.0, 1.1, 0.4).unwrap(), rap(xi));
            assert_abs_diff_eq!(rest.alpha, 1.0, epsilon = 1e-14);
            assert_eq!(rest.beta, 0.0);
            for theta in [0.0, PI] {
                let w = wigner_matrix(&FourMomentum::new(3.0, theta, 0.0).unwrap(), rap(xi));
                assert_abs_diff_eq!(w.alpha, 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(w.beta, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn wigner_golden_values() {
        // 40-digit evaluation of the closed form (tools/goldens.py)
        let p = FourMomentum::new(2.0, PI / 3.0, 1.2).unwrap();
        let w = wigner_matrix(&p, rap(1.5));
        assert_abs_diff_eq!(w.alpha, 0.961_913_621_660_228_9, epsilon = 1e-14);
        assert_abs_diff_eq!(w.beta, 0.273_353_588_717_071_8, epsilon = 1e-14);
        assert_abs_diff_eq!(w.unitarity_defect(), 0.0, epsilon = 1e-12);
        assert_eq!(w.phi, 1.2);
    }

    #[test]
    fn rescaled_form_matches_direct_formula() {
        for (pp, th, xi) in [(0.3, 0.2, 0.1), (5.0, 2.5, 3.0), (1.0, FRAC_PI_2, 10.0)] {
            let p = FourMomentum::new(pp, th, 0.0).unwrap();
            let (a, b) = naive(&p, xi);
            let w = wigner_matrix(&p, rap(xi));
            assert_abs_diff_eq!(w.alpha, a, epsilon = 1e-12);
            assert_abs_diff_eq!(w.beta, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn negative_direction_uses_signed_formula() {
        let p = FourMomentum::new(1.7, 0.9, 0.0).unwrap();
        let (a, b) = naive(&p, -1.3);
        let w = wigner_matrix(&p, Rapidity::along_z(-1.3).unwrap());
        assert_abs_diff_eq!(w.alpha, a, epsilon = 1e-12);
        assert_abs_diff_eq!(w.beta, b, epsilon = 1e-12);
    }

    #[test]
    fn huge_rapidity_stays_finite_and_unitary() {
        let p = FourMomentum::new(2.0, 2.9, 0.3).unwrap();
        let w = wigner_matrix(&p, rap(800.0));
        assert!(w.alpha.is_finite() && w.beta.is_finite());
        assert_abs_diff_eq!(w.unitarity_defect(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn measure_weight_values() {
        assert_eq!(invariant_measure_weight(&FourMomentum::new(0.0, 1.0, 0.0).unwrap()), 0.0);
        assert_eq!(invariant_measure_weight(&FourMomentum::new(2.0, 0.0, 0.0).unwrap()), 0.0);
        let w = invariant_measure_weight(&FourMomentum::new(1.0, FRAC_PI_2, 0.0).unwrap());
        assert_abs_diff_eq!(w, 0.353_553_390_593_273_8, epsilon = 1e-15);
    }

    #[test]
    fn matrix_layout() {
        let w = WignerMatrix { alpha: 0.6, beta: 0.8, phi: 0.5 };
        let m = w.matrix();
        assert_abs_diff_eq!(m[(0, 1)].re, 0.8 * 0.5f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 1)].im, -0.8 * 0.5f64.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 0)].im, -0.8 * 0.5f64.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(m.determinant().re, 1.0, epsilon = 1e-15);
    }
}
