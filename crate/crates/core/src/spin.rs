//! Two-spin basis states.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qmath::{ComplexMat2, ComplexMat4, ComplexVec4};

/// The four Bell states in the `{↑↑, ↑↓, ↓↑, ↓↓}` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    pub fn vector(self) -> ComplexVec4 {
        let h = FRAC_1_SQRT_2;
        ComplexVec4::from_real(match self {
            BellState::PhiPlus => [h, 0.0, 0.0, h],
            BellState::PhiMinus => [h, 0.0, 0.0, -h],
            BellState::PsiPlus => [0.0, h, h, 0.0],
            BellState::PsiMinus => [0.0, h, -h, 0.0],
        })
    }

    pub fn projector(self) -> ComplexMat4 {
        self.vector().projector()
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BellState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "phi+" | "phiplus" | "phi_plus" => Ok(BellState::PhiPlus),
            "phi-" | "phiminus" | "phi_minus" => Ok(BellState::PhiMinus),
            "psi+" | "psiplus" | "psi_plus" => Ok(BellState::PsiPlus),
            "psi-" | "psiminus" | "psi_minus" | "singlet" => Ok(BellState::PsiMinus),
            other => Err(format!("unknown Bell state '{other}'")),
        }
    }
}

/// `σ_y ⊗ σ_y`, used for the spin-flipped state.
pub fn sigma_y_sigma_y() -> ComplexMat4 {
    crate::qmath::kron2x2(&ComplexMat2::pauli_y(), &ComplexMat2::pauli_y())
}

/// Charge of each basis vector under a common rotation of both spins about z:
/// `R_z(γ) ⊗ R_z(γ) = diag(e^{-i ω γ})`.
pub(crate) const AZIMUTHAL_CHARGE: [i32; 4] = [1, 0, 0, -1];
