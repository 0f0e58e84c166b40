use std::collections::BTreeMap;

use num_complex::Complex64;

use super::random::{
    check_dim, ginibre, intertwined_from, random_hermitian, random_psd_form, random_unitary,
    ModuliFactors, SPECTRUM_RANGE,
};
use super::{Constraint, GenError, InstanceBundle, Rng};
use crate::linalg::{ComplexMatrix, SpectralForm};

/// Generation recipes, addressed by stable labels such as `"thm1"` or
/// `"multi:3"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recipe {
    /// `A` positive definite.
    Psd,
    /// `A`, `B` positive definite.
    PsdPair,
    /// `A` Ginibre (Hermitian under [`GenOptions::hermitian`]).
    Ginibre,
    /// `A`, `B` Ginibre.
    Pair,
    /// `A`, `D`, `C` Ginibre.
    Lemma,
    /// No operators; scalar entries draw their inputs themselves.
    Scalar,
    /// `A` with `|A|B = B*|A|` and `|A*|C = C*|A*|`.
    Thm1,
    /// `T > 0`, `TS` and `TC` selfadjoint, `A`, `B` Hermitian.
    Ld,
    /// `A > 0`, `AB` selfadjoint.
    Reid,
    /// `count` independent [`Recipe::Thm1`] triples `A_i`, `B_i`, `C_i`.
    Multi,
    /// `count` Ginibre matrices `A_i`.
    MultiPlain,
    /// `A = I` with Hermitian `B`, `C`.
    IdentityModulus,
    /// Hermitian `C`, so that `|C*|C = C*|C*|`.
    Thm3p,
    /// Normal `A` and `C` intertwined with `|A| = |A*|`.
    Cor9,
}

/// Switches that change how a recipe draws its operators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenOptions {
    /// Draw the single-operator Ginibre recipe as a Hermitian matrix.
    pub hermitian: bool,
}

impl Recipe {
    pub const ALL: [Recipe; 14] = [
        Recipe::Psd,
        Recipe::PsdPair,
        Recipe::Ginibre,
        Recipe::Pair,
        Recipe::Lemma,
        Recipe::Scalar,
        Recipe::Thm1,
        Recipe::Ld,
        Recipe::Reid,
        Recipe::Multi,
        Recipe::MultiPlain,
        Recipe::IdentityModulus,
        Recipe::Thm3p,
        Recipe::Cor9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Recipe::Psd => "psd",
            Recipe::PsdPair => "psd_pair",
            Recipe::Ginibre => "ginibre",
            Recipe::Pair => "pair",
            Recipe::Lemma => "lemma",
            Recipe::Scalar => "scalar",
            Recipe::Thm1 => "thm1",
            Recipe::Ld => "ld",
            Recipe::Reid => "reid",
            Recipe::Multi => "multi",
            Recipe::MultiPlain => "multi_plain",
            Recipe::IdentityModulus => "identity_modulus",
            Recipe::Thm3p => "thm3p",
            Recipe::Cor9 => "cor9",
        }
    }

    pub fn takes_count(self) -> bool {
        matches!(self, Recipe::Multi | Recipe::MultiPlain)
    }

    /// Full label, e.g. `"multi:3"`.
    pub fn label(self, count: Option<usize>) -> String {
        match (self.takes_count(), count) {
            (true, Some(k)) => format!("{}:{k}", self.name()),
            _ => self.name().to_string(),
        }
    }

    pub fn parse(label: &str) -> Result<(Recipe, Option<usize>), GenError> {
        let (name, count) = match label.split_once(':') {
            Some((name, k)) => {
                let k: usize = k
                    .parse()
                    .map_err(|_| GenError::UnknownRecipe(label.to_string()))?;
                (name, Some(k))
            }
            None => (label, None),
        };
        let recipe = Recipe::ALL
            .into_iter()
            .find(|r| r.name() == name)
            .ok_or_else(|| GenError::UnknownRecipe(label.to_string()))?;
        if recipe.takes_count() != count.is_some() {
            return Err(GenError::UnknownRecipe(label.to_string()));
        }
        Ok((recipe, count))
    }

    /// Role labels produced by the recipe.
    pub fn roles(self, count: Option<usize>) -> Vec<String> {
        let fixed: &[&str] = match self {
            Recipe::Psd | Recipe::Ginibre => &["A"],
            Recipe::PsdPair | Recipe::Pair | Recipe::Reid => &["A", "B"],
            Recipe::Lemma => &["A", "C", "D"],
            Recipe::Scalar => &[],
            Recipe::Thm1 | Recipe::IdentityModulus => &["A", "B", "C"],
            Recipe::Ld => &["A", "B", "C", "S", "T"],
            Recipe::Thm3p => &["C"],
            Recipe::Cor9 => &["A", "C"],
            Recipe::Multi | Recipe::MultiPlain => &[],
        };
        let mut roles: Vec<String> = fixed.iter().map(|s| s.to_string()).collect();
        let k = count.unwrap_or(0);
        for i in 1..=k {
            roles.push(format!("A_{i}"));
            if self == Recipe::Multi {
                roles.push(format!("B_{i}"));
                roles.push(format!("C_{i}"));
            }
        }
        roles
    }

    /// Hypotheses certified for every bundle of this recipe.
    pub fn constraints(self, count: Option<usize>) -> Vec<(String, Constraint)> {
        let c = |label: &str, constraint: Constraint| (label.to_string(), constraint);
        match self {
            Recipe::Psd => vec![c("positive_A", Constraint::Positive("A".into()))],
            Recipe::PsdPair => vec![
                c("positive_A", Constraint::Positive("A".into())),
                c("positive_B", Constraint::Positive("B".into())),
            ],
            Recipe::Ginibre | Recipe::Pair | Recipe::Lemma | Recipe::Scalar => vec![],
            Recipe::MultiPlain => vec![],
            Recipe::Thm1 | Recipe::IdentityModulus => vec![
                c("intertwine_A_B", Constraint::intertwine_modulus("A", "B")),
                c(
                    "intertwine_Astar_C",
                    Constraint::intertwine_co_modulus("A", "C"),
                ),
            ],
            Recipe::Ld => vec![
                c(
                    "selfadjoint_TS",
                    Constraint::SelfAdjointProduct {
                        left: "T".into(),
                        right: "S".into(),
                    },
                ),
                c(
                    "selfadjoint_TC",
                    Constraint::SelfAdjointProduct {
                        left: "T".into(),
                        right: "C".into(),
                    },
                ),
                c("hermitian_A", Constraint::Hermitian("A".into())),
                c("hermitian_B", Constraint::Hermitian("B".into())),
                c("positive_T", Constraint::Positive("T".into())),
            ],
            Recipe::Reid => vec![
                c(
                    "selfadjoint_AB",
                    Constraint::SelfAdjointProduct {
                        left: "A".into(),
                        right: "B".into(),
                    },
                ),
                c("positive_A", Constraint::Positive("A".into())),
            ],
            Recipe::Multi => (1..=count.unwrap_or(0))
                .flat_map(|i| {
                    let (a, b, cc) = (format!("A_{i}"), format!("B_{i}"), format!("C_{i}"));
                    [
                        (
                            format!("intertwine_A_{i}_B_{i}"),
                            Constraint::intertwine_modulus(&a, &b),
                        ),
                        (
                            format!("intertwine_Astar_{i}_C_{i}"),
                            Constraint::intertwine_co_modulus(&a, &cc),
                        ),
                    ]
                })
                .collect(),
            Recipe::Thm3p => vec![c(
                "intertwine_Cstar_C",
                Constraint::intertwine_co_modulus("C", "C"),
            )],
            Recipe::Cor9 => vec![
                c("intertwine_A_C", Constraint::intertwine_modulus("A", "C")),
                c(
                    "intertwine_Astar_C",
                    Constraint::intertwine_co_modulus("A", "C"),
                ),
            ],
        }
    }
}

fn bundle(
    recipe: String,
    n: usize,
    rng: &Rng,
    operators: BTreeMap<String, ComplexMatrix>,
) -> Result<InstanceBundle, GenError> {
    let mut b = InstanceBundle {
        recipe,
        seed: rng.seed(),
        n,
        operators,
        certificates: BTreeMap::new(),
    };
    b.certificates = b.recompute_certificates()?;
    Ok(b)
}

/// Draws one bundle for `recipe`.
pub fn generate(
    recipe: Recipe,
    n: usize,
    count: Option<usize>,
    options: GenOptions,
    rng: &mut Rng,
) -> Result<InstanceBundle, GenError> {
    check_dim(n)?;
    let (lo, hi) = SPECTRUM_RANGE;
    let mut ops = BTreeMap::new();
    match recipe {
        Recipe::Psd => {
            ops.insert("A".into(), random_psd_form(n, lo, hi, rng)?.to_matrix());
        }
        Recipe::PsdPair => {
            ops.insert("A".into(), random_psd_form(n, lo, hi, rng)?.to_matrix());
            ops.insert("B".into(), random_psd_form(n, lo, hi, rng)?.to_matrix());
        }
        Recipe::Ginibre => {
            let a = if options.hermitian {
                random_hermitian(n, rng)?
            } else {
                ginibre(n, rng)?
            };
            ops.insert("A".into(), a);
        }
        Recipe::Pair => {
            ops.insert("A".into(), ginibre(n, rng)?);
            ops.insert("B".into(), ginibre(n, rng)?);
        }
        Recipe::Lemma => {
            ops.insert("A".into(), ginibre(n, rng)?);
            ops.insert("D".into(), ginibre(n, rng)?);
            ops.insert("C".into(), ginibre(n, rng)?);
        }
        Recipe::Scalar => {}
        Recipe::Thm1 => return theorem1_instance(n, rng),
        Recipe::Ld => return lin_dragomir_instance(n, rng),
        Recipe::Reid => return reid_instance(n, rng),
        Recipe::Multi => return multi_operator_instance(n, count.unwrap_or(0), rng),
        Recipe::MultiPlain => {
            let k = count.unwrap_or(0);
            if k == 0 {
                return Err(GenError::BadCount(k));
            }
            for i in 1..=k {
                ops.insert(format!("A_{i}"), ginibre(n, rng)?);
            }
        }
        Recipe::IdentityModulus => {
            ops.insert("A".into(), ComplexMatrix::identity(n));
            ops.insert("B".into(), random_hermitian(n, rng)?);
            ops.insert("C".into(), random_hermitian(n, rng)?);
        }
        Recipe::Thm3p => {
            ops.insert("C".into(), random_hermitian(n, rng)?);
        }
        Recipe::Cor9 => {
            let u = random_unitary(n, rng)?;
            let moduli: Vec<f64> = (0..n).map(|_| rng.uniform(lo, hi)).collect();
            let phases: Vec<f64> = (0..n)
                .map(|_| rng.uniform(0.0, std::f64::consts::TAU))
                .collect();
            let eigenvalues: Vec<Complex64> = moduli
                .iter()
                .zip(&phases)
                .map(|(&r, &t)| Complex64::from_polar(r, t))
                .collect();
            let a = &(&u * &ComplexMatrix::from_diagonal(&eigenvalues)) * &u.adjoint();
            let weight = SpectralForm {
                values: moduli,
                vectors: u,
            };
            let h = random_hermitian(n, rng)?;
            ops.insert("A".into(), a);
            ops.insert("C".into(), intertwined_from(&weight, &h)?);
        }
    }
    bundle(recipe.label(count), n, rng, ops)
}

/// `A` with `|A|B = B*|A|` and `|A*|C = C*|A*|`, `B` and `C` built by weighted
/// similarity of random Hermitian matrices.
pub fn theorem1_instance(n: usize, rng: &mut Rng) -> Result<InstanceBundle, GenError> {
    check_dim(n)?;
    let mut ops = BTreeMap::new();
    insert_triple(&mut ops, "A", "B", "C", n, rng)?;
    bundle(Recipe::Thm1.label(None), n, rng, ops)
}

fn insert_triple(
    ops: &mut BTreeMap<String, ComplexMatrix>,
    a: &str,
    b: &str,
    c: &str,
    n: usize,
    rng: &mut Rng,
) -> Result<(), GenError> {
    let factors = ModuliFactors::random(n, rng)?;
    let h = random_hermitian(n, rng)?;
    let k = random_hermitian(n, rng)?;
    ops.insert(b.to_string(), intertwined_from(&factors.modulus, &h)?);
    ops.insert(c.to_string(), intertwined_from(&factors.co_modulus, &k)?);
    ops.insert(a.to_string(), factors.a);
    Ok(())
}

/// `T > 0`, `S = T⁻¹H`, `C = T⁻¹K` and independent Hermitian `A`, `B`.
pub fn lin_dragomir_instance(n: usize, rng: &mut Rng) -> Result<InstanceBundle, GenError> {
    check_dim(n)?;
    let (lo, hi) = SPECTRUM_RANGE;
    let t = random_psd_form(n, lo, hi, rng)?;
    let t_inv = t.map(|x| 1.0 / x);
    let h = random_hermitian(n, rng)?;
    let k = random_hermitian(n, rng)?;
    let mut ops = BTreeMap::new();
    ops.insert("S".into(), &t_inv * &h);
    ops.insert("C".into(), &t_inv * &k);
    ops.insert("A".into(), random_hermitian(n, rng)?);
    ops.insert("B".into(), random_hermitian(n, rng)?);
    ops.insert("T".into(), t.to_matrix());
    bundle(Recipe::Ld.label(None), n, rng, ops)
}

/// `A > 0` and `B = A⁻¹H`.
pub fn reid_instance(n: usize, rng: &mut Rng) -> Result<InstanceBundle, GenError> {
    check_dim(n)?;
    let (lo, hi) = SPECTRUM_RANGE;
    let a = random_psd_form(n, lo, hi, rng)?;
    let h = random_hermitian(n, rng)?;
    let mut ops = BTreeMap::new();
    ops.insert("B".into(), &a.map(|x| 1.0 / x) * &h);
    ops.insert("A".into(), a.to_matrix());
    bundle(Recipe::Reid.label(None), n, rng, ops)
}

/// `count` independent intertwined triples `A_i`, `B_i`, `C_i`.
pub fn multi_operator_instance(
    n: usize,
    count: usize,
    rng: &mut Rng,
) -> Result<InstanceBundle, GenError> {
    check_dim(n)?;
    if count == 0 {
        return Err(GenError::BadCount(count));
    }
    let mut ops = BTreeMap::new();
    for i in 1..=count {
        insert_triple(
            &mut ops,
            &format!("A_{i}"),
            &format!("B_{i}"),
            &format!("C_{i}"),
            n,
            rng,
        )?;
    }
    bundle(Recipe::Multi.label(Some(count)), n, rng, ops)
}
