//! Seeded random matrices and operator tuples that satisfy the hypotheses of
//! the catalog entries, with recomputable certificates.

mod random;
mod recipes;
mod rng;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{absolute_value, hermitian_eigenvalues, ComplexMatrix, LinalgError};

pub use random::{
    ginibre, intertwined_from, intertwined_operator, make_a_with_moduli, random_hermitian,
    random_psd, random_psd_form, random_unit_vector, random_unitary, ModuliFactors,
    MIN_WEIGHT_EIGENVALUE, SPECTRUM_RANGE,
};
pub use recipes::{
    generate, lin_dragomir_instance, multi_operator_instance, reid_instance, theorem1_instance,
    GenOptions, Recipe,
};
pub use rng::{Rng, RNG_ALGORITHM};

pub const MAX_DIM: usize = 64;
/// A certificate passes when `residual ≤ CERT_TOL · scale`.
pub const CERT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("dimension {0} outside [1, {MAX_DIM}]")]
    BadDimension(usize),
    #[error("bad spectrum range [{lo}, {hi}]")]
    BadRange { lo: f64, hi: f64 },
    #[error("operator count {0} must be at least 1")]
    BadCount(usize),
    #[error("unknown recipe {0:?}")]
    UnknownRecipe(String),
    #[error("bundle has no operator for role {0:?}")]
    MissingRole(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Residual of one hypothesis together with the scale it is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub residual: f64,
    pub scale: f64,
}

impl Certificate {
    pub fn passes(&self) -> bool {
        self.residual.is_finite() && self.residual <= CERT_TOL * self.scale
    }
}

/// Which modulus acts as the weight in an intertwining relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    /// `|X|`
    Modulus(String),
    /// `|X*|`
    CoModulus(String),
}

/// A hypothesis on the operators of a bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// `M·B = B*·M` with `M` the given weight.
    Intertwine {
        weight: Weight,
        op: String,
    },
    /// `L·R` is selfadjoint.
    SelfAdjointProduct {
        left: String,
        right: String,
    },
    Hermitian(String),
    /// Hermitian with nonnegative spectrum.
    Positive(String),
}

impl Constraint {
    pub fn intertwine_modulus(of: &str, op: &str) -> Self {
        Self::Intertwine {
            weight: Weight::Modulus(of.to_string()),
            op: op.to_string(),
        }
    }

    pub fn intertwine_co_modulus(of: &str, op: &str) -> Self {
        Self::Intertwine {
            weight: Weight::CoModulus(of.to_string()),
            op: op.to_string(),
        }
    }

    /// Recomputes the residual from the operators.
    pub fn certify(
        &self,
        operators: &BTreeMap<String, ComplexMatrix>,
    ) -> Result<Certificate, GenError> {
        let get = |role: &str| {
            operators
                .get(role)
                .ok_or_else(|| GenError::MissingRole(role.to_string()))
        };
        match self {
            Self::Intertwine { weight, op } => {
                let m = match weight {
                    Weight::Modulus(r) => absolute_value(get(r)?)?,
                    Weight::CoModulus(r) => absolute_value(&get(r)?.adjoint())?,
                };
                let b = get(op)?;
                Ok(intertwining_certificate(&m, b))
            }
            Self::SelfAdjointProduct { left, right } => {
                let (l, r) = (get(left)?, get(right)?);
                let product = l * r;
                Ok(Certificate {
                    residual: product.hermitian_defect(),
                    scale: l.frobenius_norm() * r.frobenius_norm(),
                })
            }
            Self::Hermitian(role) => {
                let x = get(role)?;
                Ok(Certificate {
                    residual: x.hermitian_defect(),
                    scale: x.frobenius_norm(),
                })
            }
            Self::Positive(role) => positivity_certificate(get(role)?),
        }
    }
}

/// `‖MB − B*M‖_F` judged against `‖M‖_F·‖B‖_F`.
pub fn intertwining_certificate(m: &ComplexMatrix, b: &ComplexMatrix) -> Certificate {
    let residual = (&(m * b) - &(&b.adjoint() * m)).frobenius_norm();
    Certificate {
        residual,
        scale: m.frobenius_norm() * b.frobenius_norm(),
    }
}

/// Hermitian defect, or the negative part of the smallest eigenvalue.
pub fn positivity_certificate(m: &ComplexMatrix) -> Result<Certificate, GenError> {
    let scale = m.frobenius_norm();
    let defect = m.hermitian_defect();
    if defect > CERT_TOL * scale {
        return Ok(Certificate {
            residual: defect,
            scale,
        });
    }
    let values = hermitian_eigenvalues(&m.hermitian_part())?;
    Ok(Certificate {
        residual: (-values[0]).max(0.0),
        scale,
    })
}

/// A generated operator tuple with its hypothesis certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceBundle {
    pub recipe: String,
    pub seed: u64,
    pub n: usize,
    pub operators: BTreeMap<String, ComplexMatrix>,
    pub certificates: BTreeMap<String, Certificate>,
}

impl InstanceBundle {
    /// Bundle from explicit operators, with certificates computed and seed 0.
    /// Every role of the recipe must be present and share one dimension.
    pub fn from_operators(
        recipe: &str,
        operators: impl IntoIterator<Item = (String, ComplexMatrix)>,
    ) -> Result<Self, GenError> {
        let (kind, count) = Recipe::parse(recipe)?;
        let operators: BTreeMap<String, ComplexMatrix> = operators.into_iter().collect();
        for role in kind.roles(count) {
            if !operators.contains_key(&role) {
                return Err(GenError::MissingRole(role));
            }
        }
        let n = operators.values().next().map_or(1, ComplexMatrix::n);
        if let Some(m) = operators.values().find(|m| m.n() != n) {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                actual: m.n(),
            }
            .into());
        }
        let mut bundle = Self {
            recipe: kind.label(count),
            seed: 0,
            n,
            operators,
            certificates: BTreeMap::new(),
        };
        bundle.certificates = bundle.recompute_certificates()?;
        Ok(bundle)
    }

    pub fn operator(&self, role: &str) -> Option<&ComplexMatrix> {
        self.operators.get(role)
    }

    /// Recomputes every certificate declared by the bundle's recipe.
    pub fn recompute_certificates(&self) -> Result<BTreeMap<String, Certificate>, GenError> {
        let (recipe, count) = Recipe::parse(&self.recipe)?;
        let mut out = BTreeMap::new();
        for (label, constraint) in recipe.constraints(count) {
            out.insert(label, constraint.certify(&self.operators)?);
        }
        Ok(out)
    }

    /// First failing certificate after recomputation, if any.
    pub fn first_failure(&self) -> Result<Option<(String, Certificate)>, GenError> {
        Ok(self
            .recompute_certificates()?
            .into_iter()
            .find(|(_, c)| !c.passes()))
    }
}
