//! Registry of inequalities, each with a hypothesis check, a left-hand side
//! and a chain of right-hand bounds, evaluated into [`InequalityResult`]s.

mod entries;
mod params;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{GenError, InstanceBundle, Recipe};
use crate::linalg::{ComplexVector, LinalgError};

pub use entries::registry;
pub use params::{validate, CountRule, ParamGrid, ParamKind, Params};
pub use search::{
    run_trial, run_trial_mutated, sup_search, Fingerprint, TrialOptions, FINGERPRINT_FORMAT,
    SEARCH_ITERATIONS,
};

/// Default satisfaction tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown inequality {0:?}")]
    UnknownSpec(String),
    #[error("hypothesis {certificate} violated: residual {residual:e} against scale {scale:e}")]
    HypothesisViolated {
        certificate: String,
        residual: f64,
        scale: f64,
    },
    #[error("{0}")]
    ParamOutOfRange(String),
    #[error("inequality needs a {expected} bundle, got {found}")]
    RecipeMismatch { expected: String, found: String },
    #[error("evaluation of {0} produced a non-finite value")]
    NonFinite(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Whether violations of an entry count as failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Asserted,
    /// Computed and reported only.
    Measured,
}

/// Vectors an entry quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    None,
    /// One vector `x`.
    One,
    /// Two vectors `x`, `y`.
    Two,
}

impl Arity {
    pub fn count(self) -> usize {
        match self {
            Arity::None => 0,
            Arity::One => 1,
            Arity::Two => 2,
        }
    }
}

/// Left-hand side and right-hand chain at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub lhs: f64,
    pub rhs: Vec<f64>,
}

pub(crate) type VectorFn = Box<dyn Fn(&ComplexVector, &ComplexVector) -> Evaluation>;

/// An entry ready to be evaluated: either fixed numbers or a function of the
/// quantified vectors.
pub(crate) enum Prepared {
    Fixed(Evaluation),
    Vectors(VectorFn),
}

pub(crate) type PrepareFn = fn(&InstanceBundle, &Params, f64) -> Result<Prepared, CatalogError>;

/// One registry entry.
pub struct InequalitySpec {
    pub id: &'static str,
    /// Citation phrase locating the statement.
    pub anchor: &'static str,
    pub recipe: Recipe,
    pub counts: CountRule,
    pub vectors: Arity,
    pub params: ParamKind,
    pub mode: Mode,
    /// Caveat attached to every row of this entry.
    pub note: Option<&'static str>,
    /// Number of right-hand bounds.
    pub chain: usize,
    pub(crate) prepare: PrepareFn,
}

impl std::fmt::Debug for InequalitySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InequalitySpec")
            .field("id", &self.id)
            .field("recipe", &self.recipe)
            .finish_non_exhaustive()
    }
}

impl InequalitySpec {
    /// Recipe label used for a binding, e.g. `multi:3`.
    pub fn recipe_label(&self, params: &Params) -> Result<String, CatalogError> {
        let count = match self.counts {
            CountRule::None => None,
            CountRule::Fixed(k) => Some(k),
            CountRule::Swept => Some(params.count()?),
        };
        Ok(self.recipe.label(count))
    }

    pub fn recipe_count(&self, params: &Params) -> Option<usize> {
        match self.counts {
            CountRule::None => None,
            CountRule::Fixed(k) => Some(k),
            CountRule::Swept => params.count,
        }
    }

    pub fn bindings(&self, grid: &ParamGrid) -> Vec<Params> {
        grid.bindings(self.params, self.counts)
    }

    /// Roles, vectors and parameters, e.g. `A,B,C; x,y; pair`.
    pub fn signature(&self) -> String {
        let count = match self.counts {
            CountRule::None => None,
            _ => Some(0),
        };
        let roles = if count.is_some() {
            match self.recipe {
                Recipe::Multi => "A_i,B_i,C_i".to_string(),
                _ => "A_i".to_string(),
            }
        } else {
            self.recipe.roles(None).join(",")
        };
        let vectors = match self.vectors {
            Arity::None => "-",
            Arity::One => "x",
            Arity::Two => "x,y",
        };
        let params = match self.params {
            ParamKind::None => "-",
            ParamKind::Pair => "pair",
            ParamKind::PowerPair => "alpha",
            ParamKind::PairHolder => "pair,p",
            ParamKind::PowerPairHolder => "alpha,p",
            ParamKind::McCarty => "p",
            ParamKind::Young => "a,b,young,p",
            ParamKind::HigherPower => "pair,p,young",
        };
        let roles = if roles.is_empty() {
            "-".to_string()
        } else {
            roles
        };
        format!("{roles}; {vectors}; {params}")
    }

    fn check(&self, bundle: &InstanceBundle, params: &Params) -> Result<(), CatalogError> {
        validate(self.params, params)?;
        let expected = self.recipe_label(params)?;
        if bundle.recipe != expected {
            return Err(CatalogError::RecipeMismatch {
                expected,
                found: bundle.recipe.clone(),
            });
        }
        if let Some((certificate, cert)) = bundle.first_failure()? {
            return Err(CatalogError::HypothesisViolated {
                certificate,
                residual: cert.residual,
                scale: cert.scale,
            });
        }
        Ok(())
    }

    pub(crate) fn prepare_checked(
        &self,
        bundle: &InstanceBundle,
        params: &Params,
        tol: f64,
    ) -> Result<Prepared, CatalogError> {
        self.check(bundle, params)?;
        self.prepare_unchecked(bundle, params, tol)
    }

    /// Skips the hypothesis certificates; used to show that they matter.
    pub(crate) fn prepare_unchecked(
        &self,
        bundle: &InstanceBundle,
        params: &Params,
        tol: f64,
    ) -> Result<Prepared, CatalogError> {
        check_tol(tol)?;
        (self.prepare)(bundle, params, tol)
    }
}

fn check_tol(tol: f64) -> Result<(), CatalogError> {
    if !(tol >= crate::radii::MIN_TOL && tol.is_finite()) {
        return Err(CatalogError::ParamOutOfRange(format!(
            "tolerance {tol} below {}",
            crate::radii::MIN_TOL
        )));
    }
    Ok(())
}

/// Identifies the inputs of a result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputFingerprint {
    pub recipe: String,
    pub seed: u64,
    pub n: usize,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityResult {
    pub id: String,
    pub mode: Mode,
    pub lhs: f64,
    /// Right-hand bounds in chain order.
    pub rhs: Vec<f64>,
    pub slack: f64,
    pub relative_slack: f64,
    pub sharpness: Option<f64>,
    pub satisfied: bool,
    pub chain_monotone: bool,
    pub tol: f64,
    pub input: InputFingerprint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InequalityResult {
    pub(crate) fn new(
        spec: &InequalitySpec,
        eval: Evaluation,
        tol: f64,
        input: InputFingerprint,
    ) -> Result<Self, CatalogError> {
        if !eval.lhs.is_finite() || eval.rhs.iter().any(|v| !v.is_finite()) {
            return Err(CatalogError::NonFinite(spec.id.to_string()));
        }
        let rhs0 = eval.rhs[0];
        let slack = rhs0 - eval.lhs;
        Ok(Self {
            id: spec.id.to_string(),
            mode: spec.mode,
            lhs: eval.lhs,
            slack,
            relative_slack: slack / rhs0.max(1.0),
            sharpness: sharpness(eval.lhs, rhs0),
            satisfied: satisfied(eval.lhs, rhs0, tol),
            chain_monotone: chain_monotone(&eval.rhs, tol),
            rhs: eval.rhs,
            tol,
            input,
            note: spec.note.map(str::to_string),
        })
    }

    /// Whether this row counts against an asserted entry.
    pub fn is_violation(&self) -> bool {
        !self.satisfied
    }
}

pub fn sharpness(lhs: f64, rhs0: f64) -> Option<f64> {
    (rhs0 > 0.0).then(|| lhs / rhs0)
}

/// `rhs − lhs ≥ −tol·max(1, |rhs|)`.
pub fn satisfied(lhs: f64, rhs0: f64, tol: f64) -> bool {
    rhs0 - lhs >= -tol * rhs0.abs().max(1.0)
}

/// Each bound dominates the previous one up to `tol` relative.
pub fn chain_monotone(rhs: &[f64], tol: f64) -> bool {
    rhs.windows(2)
        .all(|w| w[1] >= w[0] - tol * w[0].abs().max(1.0))
}

/// Every entry once, in registry order: `(id, anchor, signature)`.
pub fn list_specs() -> Vec<(&'static str, &'static str, String)> {
    registry()
        .iter()
        .map(|s| (s.id, s.anchor, s.signature()))
        .collect()
}

pub fn find_spec(id: &str) -> Result<&'static InequalitySpec, CatalogError> {
    registry()
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| CatalogError::UnknownSpec(id.to_string()))
}

/// Unit vectors for an evaluation; `y` is ignored by one-vector entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Vectors {
    pub x: ComplexVector,
    pub y: ComplexVector,
}

impl Vectors {
    pub fn new(x: ComplexVector, y: ComplexVector) -> Self {
        Self { x, y }
    }

    pub fn single(x: ComplexVector) -> Self {
        Self { y: x.clone(), x }
    }

    pub fn none() -> Self {
        Self {
            x: ComplexVector(Vec::new()),
            y: ComplexVector(Vec::new()),
        }
    }
}

/// Evaluates one entry at fixed vectors after checking its hypotheses.
pub fn evaluate(
    spec_id: &str,
    bundle: &InstanceBundle,
    vectors: &Vectors,
    params: &Params,
    tol: f64,
) -> Result<InequalityResult, CatalogError> {
    let spec = find_spec(spec_id)?;
    let prepared = spec.prepare_checked(bundle, params, tol)?;
    let eval = match prepared {
        Prepared::Fixed(eval) => eval,
        Prepared::Vectors(f) => {
            let n = bundle.n;
            let needed: &[&ComplexVector] = match spec.vectors {
                Arity::None => &[],
                Arity::One => &[&vectors.x],
                Arity::Two => &[&vectors.x, &vectors.y],
            };
            for v in needed {
                if v.len() != n {
                    return Err(LinalgError::DimensionMismatch {
                        expected: n,
                        actual: v.len(),
                    }
                    .into());
                }
                if !v.is_finite() {
                    return Err(LinalgError::NonFinite.into());
                }
            }
            f(&vectors.x, &vectors.y)
        }
    };
    InequalityResult::new(spec, eval, tol, input_of(bundle, params))
}

pub(crate) fn input_of(bundle: &InstanceBundle, params: &Params) -> InputFingerprint {
    InputFingerprint {
        recipe: bundle.recipe.clone(),
        seed: bundle.seed,
        n: bundle.n,
        params: params.clone(),
    }
}
