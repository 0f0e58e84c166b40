use serde::{Deserialize, Serialize};

use super::CatalogError;
use crate::linalg::FunctionPair;

/// Scalar parameters bound to one evaluation. Unused fields stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<FunctionPair>,
    /// Hölder exponent `p` (with `q = p/(p−1)`), McCarty power, or the outer
    /// power of the power-Young and higher-power bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Young exponent `α` with conjugate `β = α/(α−1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub young: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Number of operator triples for multi-operator entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl Params {
    pub fn with_pair(pair: FunctionPair) -> Self {
        Self {
            pair: Some(pair),
            ..Self::default()
        }
    }

    pub(crate) fn pair(&self) -> Result<FunctionPair, CatalogError> {
        self.pair.ok_or_else(|| missing("pair"))
    }

    pub(crate) fn power_alpha(&self) -> Result<f64, CatalogError> {
        match self.pair()? {
            FunctionPair::PowerSplit { alpha } => Ok(alpha),
            other => Err(CatalogError::ParamOutOfRange(format!(
                "power pair required, got {}",
                other.name()
            ))),
        }
    }

    pub(crate) fn p(&self) -> Result<f64, CatalogError> {
        self.p.ok_or_else(|| missing("p"))
    }

    pub(crate) fn young(&self) -> Result<(f64, f64), CatalogError> {
        let alpha = self.young.ok_or_else(|| missing("young"))?;
        Ok((alpha, alpha / (alpha - 1.0)))
    }

    pub(crate) fn count(&self) -> Result<usize, CatalogError> {
        self.count.ok_or_else(|| missing("count"))
    }

    /// Short label such as `pair=power(0.5) p=2`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(pair) = &self.pair {
            parts.push(format!("pair={}", pair.name()));
        }
        for (name, v) in [
            ("p", self.p),
            ("young", self.young),
            ("a", self.a),
            ("b", self.b),
        ] {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        if let Some(k) = self.count {
            parts.push(format!("count={k}"));
        }
        parts.join(" ")
    }
}

fn missing(name: &str) -> CatalogError {
    CatalogError::ParamOutOfRange(format!("parameter {name} is required"))
}

/// Which parameters an entry takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    None,
    /// Any function pair.
    Pair,
    /// `f = t^α`, `g = t^{1−α}` only.
    PowerPair,
    /// Function pair and Hölder exponent.
    PairHolder,
    /// Power pair and Hölder exponent.
    PowerPairHolder,
    /// McCarty power `p ≥ 1`.
    McCarty,
    /// Scalars `a`, `b ≥ 0`, Young exponent and outer power.
    Young,
    /// Function pair, outer power `p` and Young exponent with `βp ≥ 2`.
    HigherPower,
}

/// Parameter values swept by a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamGrid {
    /// Exponents `α` of the power pairs.
    pub alphas: Vec<f64>,
    /// Also sweep `f(t) = t/(1+t)`, `g(t) = 1+t` where any pair is allowed.
    pub ratio_pair: bool,
    pub holder: Vec<f64>,
    pub mccarty: Vec<f64>,
    pub young: Vec<f64>,
    pub young_power: Vec<f64>,
    pub higher_power: Vec<f64>,
    pub higher_young: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        Self {
            alphas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            ratio_pair: true,
            holder: vec![1.5, 2.0, 3.0],
            mccarty: vec![1.0, 1.5, 2.0, 3.0],
            young: vec![1.5, 2.0, 3.0],
            young_power: vec![1.0, 2.0, 3.0],
            higher_power: vec![1.0, 1.5, 2.0],
            higher_young: vec![2.0, 3.0],
            counts: vec![2, 3, 4],
        }
    }
}

impl ParamGrid {
    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |what: &str| Err(CatalogError::ParamOutOfRange(what.to_string()));
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return bad("alphas must be nonempty and lie in [0, 1]");
        }
        if self.holder.is_empty() || self.holder.iter().any(|&p| !(p > 1.0 && p.is_finite())) {
            return bad("Hölder exponents must exceed 1");
        }
        if self.mccarty.is_empty() || self.mccarty.iter().any(|&p| !(p >= 1.0 && p.is_finite())) {
            return bad("McCarty powers must be at least 1");
        }
        if self.young.is_empty() || self.young.iter().any(|&a| !(a > 1.0 && a.is_finite())) {
            return bad("Young exponents must exceed 1");
        }
        if self.young_power.is_empty()
            || self
                .young_power
                .iter()
                .any(|&p| !(p >= 1.0 && p.is_finite()))
        {
            return bad("power-Young outer powers must be at least 1");
        }
        if self.counts.is_empty() || self.counts.contains(&0) {
            return bad("operator counts must be at least 1");
        }
        if self.higher_pairs().is_empty() {
            return bad("higher-power grid has no admissible (p, α) with α ≥ β and βp ≥ 2");
        }
        Ok(())
    }

    fn pairs(&self, power_only: bool) -> Vec<FunctionPair> {
        let mut pairs: Vec<FunctionPair> = self
            .alphas
            .iter()
            .map(|&alpha| FunctionPair::PowerSplit { alpha })
            .collect();
        if self.ratio_pair && !power_only {
            pairs.push(FunctionPair::Ratio);
        }
        pairs
    }

    /// Admissible `(p, α)` for the higher-power bounds.
    pub fn higher_pairs(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &p in &self.higher_power {
            for &alpha in &self.higher_young {
                if higher_power_admissible(p, alpha) {
                    out.push((p, alpha));
                }
            }
        }
        out
    }

    /// Every parameter binding for an entry, in a fixed order. Trial `t`
    /// uses binding `t mod len`.
    pub fn bindings(&self, kind: ParamKind, counts: CountRule) -> Vec<Params> {
        let base: Vec<Params> = match kind {
            ParamKind::None => vec![Params::default()],
            ParamKind::Pair | ParamKind::PowerPair => self
                .pairs(kind == ParamKind::PowerPair)
                .into_iter()
                .map(Params::with_pair)
                .collect(),
            ParamKind::PairHolder | ParamKind::PowerPairHolder => {
                let power_only = kind == ParamKind::PowerPairHolder;
                let mut out = Vec::new();
                for pair in self.pairs(power_only) {
                    for &p in &self.holder {
                        out.push(Params {
                            p: Some(p),
                            ..Params::with_pair(pair)
                        });
                    }
                }
                out
            }
            ParamKind::McCarty => self
                .mccarty
                .iter()
                .map(|&p| Params {
                    p: Some(p),
                    ..Params::default()
                })
                .collect(),
            ParamKind::Young => {
                let mut out = Vec::new();
                for &young in &self.young {
                    for &p in &self.young_power {
                        out.push(Params {
                            p: Some(p),
                            young: Some(young),
                            ..Params::default()
                        });
                    }
                }
                out
            }
            ParamKind::HigherPower => {
                let mut out = Vec::new();
                for (p, young) in self.higher_pairs() {
                    for pair in self.pairs(false) {
                        out.push(Params {
                            p: Some(p),
                            young: Some(young),
                            ..Params::with_pair(pair)
                        });
                    }
                }
                out
            }
        };
        let counts: Vec<usize> = match counts {
            CountRule::None => return base,
            CountRule::Fixed(k) => vec![k],
            CountRule::Swept => self.counts.clone(),
        };
        let mut out = Vec::with_capacity(base.len() * counts.len());
        for k in counts {
            for params in &base {
                out.push(Params {
                    count: Some(k),
                    ..params.clone()
                });
            }
        }
        out
    }
}

/// How an entry picks its operator count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountRule {
    None,
    Fixed(usize),
    Swept,
}

pub(crate) fn higher_power_admissible(p: f64, alpha: f64) -> bool {
    if !(p >= 1.0 && alpha > 1.0 && p.is_finite() && alpha.is_finite()) {
        return false;
    }
    let beta = alpha / (alpha - 1.0);
    alpha >= beta && beta * p >= 2.0 - 1e-12
}

/// Checks `params` against the ranges declared by `kind`.
pub fn validate(kind: ParamKind, params: &Params) -> Result<(), CatalogError> {
    let out = |msg: String| Err(CatalogError::ParamOutOfRange(msg));
    let check_pair = |params: &Params| -> Result<(), CatalogError> {
        if let FunctionPair::PowerSplit { alpha } = params.pair()? {
            if !(0.0..=1.0).contains(&alpha) {
                return out(format!("power pair exponent {alpha} outside [0, 1]"));
            }
        }
        Ok(())
    };
    match kind {
        ParamKind::None => Ok(()),
        ParamKind::Pair => check_pair(params),
        ParamKind::PowerPair => {
            params.power_alpha()?;
            check_pair(params)
        }
        ParamKind::PairHolder | ParamKind::PowerPairHolder => {
            if kind == ParamKind::PowerPairHolder {
                params.power_alpha()?;
            }
            check_pair(params)?;
            let p = params.p()?;
            if !(p > 1.0 && p.is_finite()) {
                return out(format!("Hölder exponent {p} must exceed 1"));
            }
            Ok(())
        }
        ParamKind::McCarty => {
            let p = params.p()?;
            if !(p >= 1.0 && p.is_finite()) {
                return out(format!("power {p} must be at least 1"));
            }
            Ok(())
        }
        ParamKind::Young => {
            let p = params.p()?;
            let (alpha, _) = params.young()?;
            if !(p >= 1.0 && p.is_finite()) {
                return out(format!("outer power {p} must be at least 1"));
            }
            if !(alpha > 1.0 && alpha.is_finite()) {
                return out(format!("Young exponent {alpha} must exceed 1"));
            }
            for (name, v) in [("a", params.a), ("b", params.b)] {
                match v {
                    Some(v) if v >= 0.0 && v.is_finite() => {}
                    Some(v) => return out(format!("{name} = {v} must be nonnegative")),
                    None => return out(format!("parameter {name} is required")),
                }
            }
            Ok(())
        }
        ParamKind::HigherPower => {
            check_pair(params)?;
            let p = params.p()?;
            let (alpha, _) = params.young()?;
            if !higher_power_admissible(p, alpha) {
                return out(format!(
                    "(p, α) = ({p}, {alpha}) needs p ≥ 1, α ≥ β > 1 and βp ≥ 2"
                ));
            }
            Ok(())
        }
    }
}
