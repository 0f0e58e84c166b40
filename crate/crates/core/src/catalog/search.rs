use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    find_spec, input_of, Arity, CatalogError, Evaluation, InequalityResult, InequalitySpec,
    ParamKind, Params, Prepared, VectorFn, DEFAULT_TOL,
};
use crate::generators::{generate, random_unit_vector, GenOptions, InstanceBundle, Recipe, Rng};
use crate::linalg::ComplexVector;

/// Version tag of [`Fingerprint`]; replay refuses other versions.
pub const FINGERPRINT_FORMAT: &str = "1";

/// Ascent steps per restart.
pub const SEARCH_ITERATIONS: usize = 60;

/// Range of the scalars drawn for the power-Young entry.
const SCALAR_RANGE: (f64, f64) = (0.0, 3.0);

const STEP_START: f64 = 0.3;
const STEP_MAX: f64 = 2.0;
const STEP_MIN: f64 = 1e-6;

/// Per-trial sampling settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOptions {
    /// Random unit-vector tuples before the ascent.
    pub samples: usize,
    pub restarts: usize,
    pub tol: f64,
    /// Draw Hermitian instead of Ginibre matrices.
    pub hermitian: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        Self {
            samples: 8,
            restarts: 4,
            tol: DEFAULT_TOL,
            hermitian: false,
        }
    }
}

/// Everything needed to recompute one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub format: String,
    pub spec: String,
    pub recipe: String,
    pub seed: u64,
    pub dim: usize,
    pub trial: u64,
    /// Binding before any per-trial draws.
    pub params: Params,
    pub samples: usize,
    pub restarts: usize,
    pub tol: f64,
    pub hermitian: bool,
}

impl Fingerprint {
    pub fn new(
        spec: &InequalitySpec,
        seed: u64,
        dim: usize,
        trial: u64,
        params: Params,
        options: TrialOptions,
    ) -> Result<Self, CatalogError> {
        Ok(Self {
            format: FINGERPRINT_FORMAT.to_string(),
            spec: spec.id.to_string(),
            recipe: spec.recipe_label(&params)?,
            seed,
            dim,
            trial,
            params,
            samples: options.samples,
            restarts: options.restarts,
            tol: options.tol,
            hermitian: options.hermitian,
        })
    }

    pub fn options(&self) -> TrialOptions {
        TrialOptions {
            samples: self.samples,
            restarts: self.restarts,
            tol: self.tol,
            hermitian: self.hermitian,
        }
    }
}

/// Generates, validates and evaluates one trial. The returned row is the
/// evaluation with the smallest relative slack.
pub fn run_trial(fp: &Fingerprint) -> Result<InequalityResult, CatalogError> {
    let (spec, bundle, params, mut rng) = trial_inputs(fp)?;
    let prepared = spec.prepare_checked(&bundle, &params, fp.tol)?;
    worst_of(spec, prepared, &bundle, &params, &fp.options(), &mut rng)
}

/// [`run_trial`] on a bundle altered by `mutate` after generation, with the
/// hypothesis certificates skipped.
pub fn run_trial_mutated(
    fp: &Fingerprint,
    mutate: impl FnOnce(&mut InstanceBundle, &mut Rng),
) -> Result<InequalityResult, CatalogError> {
    let (spec, mut bundle, params, mut rng) = trial_inputs(fp)?;
    mutate(&mut bundle, &mut rng);
    let prepared = spec.prepare_unchecked(&bundle, &params, fp.tol)?;
    worst_of(spec, prepared, &bundle, &params, &fp.options(), &mut rng)
}

fn trial_inputs(
    fp: &Fingerprint,
) -> Result<(&'static InequalitySpec, InstanceBundle, Params, Rng), CatalogError> {
    if fp.format != FINGERPRINT_FORMAT {
        return Err(CatalogError::ParamOutOfRange(format!(
            "fingerprint format {:?}, expected {FINGERPRINT_FORMAT:?}",
            fp.format
        )));
    }
    let spec = find_spec(&fp.spec)?;
    let expected = spec.recipe_label(&fp.params)?;
    if fp.recipe != expected {
        return Err(CatalogError::RecipeMismatch {
            expected,
            found: fp.recipe.clone(),
        });
    }
    let mut rng = Rng::split(fp.seed, spec.id, fp.dim, fp.trial);
    let (recipe, count) = Recipe::parse(&fp.recipe)?;
    let options = GenOptions {
        hermitian: fp.hermitian,
    };
    let bundle = generate(recipe, fp.dim, count, options, &mut rng)?;
    let mut params = fp.params.clone();
    if spec.params == ParamKind::Young {
        params.a = Some(rng.uniform(SCALAR_RANGE.0, SCALAR_RANGE.1));
        params.b = Some(rng.uniform(SCALAR_RANGE.0, SCALAR_RANGE.1));
    }
    Ok((spec, bundle, params, rng))
}

fn worst_of(
    spec: &InequalitySpec,
    prepared: Prepared,
    bundle: &InstanceBundle,
    params: &Params,
    options: &TrialOptions,
    rng: &mut Rng,
) -> Result<InequalityResult, CatalogError> {
    let eval = match prepared {
        Prepared::Fixed(eval) => eval,
        Prepared::Vectors(f) => {
            let mut best = None;
            for _ in 0..options.samples {
                let point = Point::random(spec.vectors, bundle.n, rng)?;
                best = Some(keep_worse(best, point.evaluate(&f)));
            }
            let search = ascend(
                &f,
                spec.vectors,
                bundle.n,
                options.restarts,
                best.clone(),
                rng,
            )?;
            match (best, search) {
                (Some(b), s) => keep_worse(Some(b), s).1,
                (None, s) => s.1,
            }
        }
    };
    InequalityResult::new(spec, eval, options.tol, input_of(bundle, params))
}

/// Maximizes `lhs/rhs₀` over unit vectors by random restarts and a
/// perturbative ascent, returning the smallest-slack evaluation found.
/// Matrix-only entries are evaluated once.
pub fn sup_search(
    spec_id: &str,
    bundle: &InstanceBundle,
    params: &Params,
    restarts: usize,
    tol: f64,
    rng: &mut Rng,
) -> Result<InequalityResult, CatalogError> {
    let spec = find_spec(spec_id)?;
    let eval = match spec.prepare_checked(bundle, params, tol)? {
        Prepared::Fixed(eval) => eval,
        Prepared::Vectors(f) => ascend(&f, spec.vectors, bundle.n, restarts.max(1), None, rng)?.1,
    };
    InequalityResult::new(spec, eval, tol, input_of(bundle, params))
}

#[derive(Clone)]
struct Point {
    x: ComplexVector,
    y: ComplexVector,
}

impl Point {
    fn random(arity: Arity, n: usize, rng: &mut Rng) -> Result<Self, CatalogError> {
        let x = random_unit_vector(n, rng)?;
        let y = match arity {
            Arity::Two => random_unit_vector(n, rng)?,
            _ => x.clone(),
        };
        Ok(Self { x, y })
    }

    fn evaluate(&self, f: &VectorFn) -> (Point, Evaluation) {
        (self.clone(), f(&self.x, &self.y))
    }

    /// Moves `x` on even steps and `y` on odd steps of a two-vector search.
    fn perturb(&self, arity: Arity, sigma: f64, step: usize, rng: &mut Rng) -> Self {
        match arity {
            Arity::Two if step % 2 == 1 => Self {
                x: self.x.clone(),
                y: jitter(&self.y, sigma, rng),
            },
            Arity::Two => Self {
                x: jitter(&self.x, sigma, rng),
                y: self.y.clone(),
            },
            _ => {
                let x = jitter(&self.x, sigma, rng);
                Self { y: x.clone(), x }
            }
        }
    }
}

fn jitter(v: &ComplexVector, sigma: f64, rng: &mut Rng) -> ComplexVector {
    let scale = sigma / (v.len() as f64).sqrt();
    let moved = ComplexVector(
        v.0.iter()
            .map(|z| z + rng.complex_normal() * Complex64::new(scale, 0.0))
            .collect(),
    );
    let norm = moved.norm();
    if norm > 1e-150 {
        moved.normalized()
    } else {
        v.clone()
    }
}

/// `lhs/rhs₀`, infinite when a positive left side meets a zero bound.
fn ratio(eval: &Evaluation) -> f64 {
    let rhs = eval.rhs[0];
    if rhs > 0.0 {
        eval.lhs / rhs
    } else if eval.lhs > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

fn relative_slack(eval: &Evaluation) -> f64 {
    (eval.rhs[0] - eval.lhs) / eval.rhs[0].max(1.0)
}

fn keep_worse(
    current: Option<(Point, Evaluation)>,
    candidate: (Point, Evaluation),
) -> (Point, Evaluation) {
    match current {
        Some(c)
            if relative_slack(&candidate.1).partial_cmp(&relative_slack(&c.1))
                != Some(Ordering::Less) =>
        {
            c
        }
        _ => candidate,
    }
}

fn ascend(
    f: &VectorFn,
    arity: Arity,
    n: usize,
    restarts: usize,
    start: Option<(Point, Evaluation)>,
    rng: &mut Rng,
) -> Result<(Point, Evaluation), CatalogError> {
    let mut worst: Option<(Point, Evaluation)> = start.clone();
    let mut top: Option<(Point, Evaluation)> = None;
    for restart in 0..restarts {
        let (mut point, mut eval) = match (&start, restart) {
            (Some(s), 0) => s.clone(),
            _ => Point::random(arity, n, rng)?.evaluate(f),
        };
        let mut score = ratio(&eval);
        let mut sigma = STEP_START;
        for step in 0..SEARCH_ITERATIONS {
            let (candidate, next) = point.perturb(arity, sigma, step, rng).evaluate(f);
            let next_score = ratio(&next);
            if next_score > score {
                point = candidate;
                eval = next;
                score = next_score;
                sigma = (sigma * 2.0).min(STEP_MAX);
            } else {
                sigma = (sigma * 0.85).max(STEP_MIN);
            }
        }
        if top.as_ref().is_none_or(|t| score > ratio(&t.1)) {
            top = Some((point.clone(), eval.clone()));
        }
        worst = Some(keep_worse(worst, (point, eval)));
    }
    if let Some((point, _)) = top {
        worst = Some(keep_worse(worst, polish(f, arity, point)));
    }
    worst.ok_or_else(|| CatalogError::ParamOutOfRange("search needs at least one restart".into()))
}

/// Forward-difference step in the real coordinates of the vectors.
const DIFF_STEP: f64 = 1e-7;

/// Gradient ascent of `lhs/rhs₀` from `point` with a doubling/halving step.
fn polish(f: &VectorFn, arity: Arity, point: Point) -> (Point, Evaluation) {
    let score_at = |z: &[f64]| {
        let p = unpack(z, arity);
        let eval = f(&p.x, &p.y);
        (ratio(&eval), p, eval)
    };
    let mut z = pack(&point, arity);
    let (mut score, mut point, mut eval) = score_at(&z);
    let mut step = 0.1;
    'outer: for _ in 0..POLISH_ITERATIONS {
        if !score.is_finite() {
            break;
        }
        let mut grad = vec![0.0; z.len()];
        for i in 0..z.len() {
            let mut moved = z.clone();
            moved[i] += DIFF_STEP;
            grad[i] = (score_at(&moved).0 - score) / DIFF_STEP;
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            break;
        }
        loop {
            let candidate: Vec<f64> = z
                .iter()
                .zip(&grad)
                .map(|(a, g)| a + step * g / norm)
                .collect();
            let (s, p, e) = score_at(&candidate);
            if s > score {
                (score, point, eval) = (s, p, e);
                z = pack(&point, arity);
                step = (step * 2.0).min(1.0);
                break;
            }
            step *= 0.5;
            if step < 1e-12 {
                break 'outer;
            }
        }
    }
    (point, eval)
}

/// Gradient steps of [`polish`].
const POLISH_ITERATIONS: usize = 40;

fn pack(point: &Point, arity: Arity) -> Vec<f64> {
    let mut z: Vec<f64> = point.x.0.iter().flat_map(|c| [c.re, c.im]).collect();
    if arity == Arity::Two {
        z.extend(point.y.0.iter().flat_map(|c| [c.re, c.im]));
    }
    z
}

fn unpack(z: &[f64], arity: Arity) -> Point {
    let vector = |part: &[f64]| {
        let v = ComplexVector(part.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
        let norm = v.norm();
        if norm > 1e-150 {
            v.normalized()
        } else {
            v
        }
    };
    match arity {
        Arity::Two => {
            let half = z.len() / 2;
            Point {
                x: vector(&z[..half]),
                y: vector(&z[half..]),
            }
        }
        _ => {
            let x = vector(z);
            Point { y: x.clone(), x }
        }
    }
}
