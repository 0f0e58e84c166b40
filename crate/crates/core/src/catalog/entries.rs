use super::params::{CountRule, ParamKind, Params};
use super::{Arity, CatalogError, Evaluation, InequalitySpec, Mode, Prepared};
use crate::generators::{GenError, InstanceBundle, Recipe};
use crate::linalg::{cartesian, ComplexMatrix, ComplexVector, FunctionPair, Side, SpectralForm};
use crate::radii::{aluthge, numerical_radius, operator_norm, spectral_radius, MIN_TOL};

pub fn registry() -> &'static [InequalitySpec] {
    REGISTRY
}

const fn spec(
    id: &'static str,
    anchor: &'static str,
    recipe: Recipe,
    vectors: Arity,
    params: ParamKind,
    chain: usize,
    prepare: super::PrepareFn,
) -> InequalitySpec {
    InequalitySpec {
        id,
        anchor,
        recipe,
        counts: CountRule::None,
        vectors,
        params,
        mode: Mode::Asserted,
        note: None,
        chain,
        prepare,
    }
}

const fn measured(mut s: InequalitySpec, note: &'static str) -> InequalitySpec {
    s.mode = Mode::Measured;
    s.note = Some(note);
    s
}

const fn noted(mut s: InequalitySpec, note: &'static str) -> InequalitySpec {
    s.note = Some(note);
    s
}

const fn counted(mut s: InequalitySpec, counts: CountRule) -> InequalitySpec {
    s.counts = counts;
    s
}

use Arity::{None as NoVec, One, Two};
use ParamKind as K;

static REGISTRY: &[InequalitySpec] = &[
    spec("SCHWARZ_POS", "The Schwarz inequality for positive operators", Recipe::Psd, Two, K::None, 1, schwarz_pos),
    spec("REID", "a variant of Schwarz inequality", Recipe::Reid, One, K::None, 1, reid),
    spec("HALMOS_REID", "his stronger version of Reid inequality", Recipe::Reid, One, K::None, 1, halmos_reid),
    spec("KATO", "called the mixed Schwarz inequality", Recipe::Ginibre, Two, K::PowerPair, 1, kato),
    noted(
        spec("KITTANEH_MIXED", "combining both the Halmos--Reid inequality", Recipe::Thm1, Two, K::Pair, 1, kittaneh_mixed),
        "fails for f other than t^(1/2) under |A|B = B*|A| alone: A = diag(1,4), B = A^-1 [[0,1],[1,0]], f = 1, x = e2, y = e1 gives 1 > 1/2",
    ),
    spec("LD1", "inequalities of Halmos--Ried's type (first line)", Recipe::Ld, Two, K::None, 1, ld1),
    spec("LD2", "inequalities of Halmos--Ried's type (second line)", Recipe::Ld, Two, K::None, 1, ld2),
    noted(
        spec("LD3", "inequalities of Halmos--Ried's type (third line)", Recipe::Ld, One, K::None, 1, ld3),
        "printed left side lacks C; evaluated as |<TSx,Cx>| <= r(S)r(C)<Tx,x>, see LD3_AS_PRINTED",
    ),
    measured(
        spec("LD3_AS_PRINTED", "inequalities of Halmos--Ried's type (third line)", Recipe::Ld, One, K::None, 1, ld3_as_printed),
        "literal |<TSx,x>| <= r(S)r(C)<Tx,x>; not implied by the hypotheses, measured only",
    ),
    spec("LD4", "inequalities of Halmos--Ried's type (fourth line)", Recipe::Ld, Two, K::None, 1, ld4),
    spec("NORM_RADIUS_SANDWICH_LOWER", "equivalent to operator norm", Recipe::Ginibre, NoVec, K::None, 1, sandwich_lower),
    spec("NORM_RADIUS_SANDWICH_UPPER", "equivalent to operator norm", Recipe::Ginibre, NoVec, K::None, 1, sandwich_upper),
    spec("KITTANEH_2003", "refined the right-hand side", Recipe::Ginibre, NoVec, K::None, 1, kittaneh_2003),
    spec("KITTANEH_2005_LOWER", "also reformulated and generalized", Recipe::Ginibre, NoVec, K::None, 1, kittaneh_2005_lower),
    spec("KITTANEH_2005_UPPER", "also reformulated and generalized", Recipe::Ginibre, NoVec, K::None, 1, kittaneh_2005_upper),
    spec("YAMAZAKI", "with unitary U", Recipe::Ginibre, NoVec, K::None, 2, yamazaki),
    noted(
        spec("DRAGOMIR_BUZANO", "used Buzano inequality to improve", Recipe::Ginibre, NoVec, K::None, 1, dragomir_buzano),
        "homogeneous form w^2(T) <= (||T||^2 + w(T^2))/2",
    ),
    measured(
        spec("DRAGOMIR_BUZANO_AS_PRINTED", "used Buzano inequality to improve", Recipe::Ginibre, NoVec, K::None, 1, dragomir_buzano_as_printed),
        "literal w^2(T) <= (||T|| + w(T^2))/2 is not scale invariant; measured only",
    ),
    spec("LEMMA_DCV", "the following elementary result", Recipe::Lemma, Two, K::Pair, 1, lemma_dcv),
    noted(
        spec("GEN_MIXED_SCHWARZ", "|A|B=B^*|A| and |A^*|C=C^*|A^*|", Recipe::Thm1, Two, K::Pair, 1, gen_mixed_schwarz),
        "fails for f other than t^(1/2): A = diag(1,4), B = I, C = [[0,2],[1/2,0]], alpha = 0, x = e2, u = e1 gives 2 > 1",
    ),
    noted(
        spec("COR1", "Setting B=1_H", Recipe::Thm1, Two, K::Pair, 1, cor1),
        "fails for alpha other than 1/2, same counterexample as GEN_MIXED_SCHWARZ",
    ),
    noted(
        spec("COR2", "In particular we have", Recipe::Thm1, Two, K::PowerPair, 1, cor2),
        "fails for alpha other than 1/2, same counterexample as GEN_MIXED_SCHWARZ",
    ),
    spec("COR2_PARTICULAR", "In particular we have", Recipe::IdentityModulus, Two, K::None, 1, cor2_particular),
    counted(
        noted(
        spec("COR3", "A more general mixed Schwarz inequality", Recipe::Multi, Two, K::PairHolder, 2, multi_op),
        "fails for f other than t^(1/2); take one triple from the GEN_MIXED_SCHWARZ counterexample and a zero second triple",
    ),
        CountRule::Fixed(2),
    ),
    counted(
        noted(
        spec("COR4", "Setting f(t)=t^alpha and g(t)=t^(1-alpha) in the two-operator form", Recipe::Multi, Two, K::PowerPair, 1, cor4),
        "squared sum form; fails for every alpha since the square of a sum exceeds the sum of squares",
    ),
        CountRule::Fixed(2),
    ),
    counted(
        noted(
        spec("MULTI_OP", "to several operators, by letting", Recipe::Multi, Two, K::PairHolder, 2, multi_op),
        "fails for f other than t^(1/2), as COR3",
    ),
        CountRule::Swept,
    ),
    counted(
        spec("MULTI_OP_NORM", "following norm inequality", Recipe::Multi, NoVec, K::PairHolder, 1, multi_op_norm),
        CountRule::Swept,
    ),
    counted(
        spec("MULTI_OP_NORM_UNWEIGHTED", "following norm inequality (C_i = B_i = 1)", Recipe::MultiPlain, NoVec, K::PowerPairHolder, 1, multi_op_norm_unweighted),
        CountRule::Swept,
    ),
    spec("HYBRID", "the Cartesian decomposition A=P+iQ", Recipe::Ginibre, Two, K::Pair, 1, hybrid),
    noted(
        spec("HYBRID_POWER", "the Cartesian decomposition A=P+iQ, power functions", Recipe::Ginibre, Two, K::PowerPair, 1, hybrid),
        "uses f(t)=t^alpha, g(t)=t^(1-alpha), the stated choice of f and g",
    ),
    noted(
        spec("HYBRID_KATO", "Cartesian companion decomposition of Kato's", Recipe::Ginibre, Two, K::PowerPair, 1, hybrid_kato),
        "squared sum form; fails for every alpha since the square of a sum exceeds the sum of squares",
    ),
    spec("POWER_YOUNG", "The Power-Young inequality reads that", Recipe::Scalar, NoVec, K::Young, 2, power_young),
    spec("MCCARTY", "(The McCarty inequality)", Recipe::Psd, One, K::McCarty, 1, mccarty),
    spec("SPECTRAL_PRODUCT", "where m(A,B):=min", Recipe::Pair, NoVec, K::None, 1, spectral_product),
    spec("NORM_SUM", "two fundamental norm estimates", Recipe::PsdPair, NoVec, K::None, 2, norm_sum),
    spec("SQRT_PRODUCT", "two fundamental norm estimates", Recipe::PsdPair, NoVec, K::None, 1, sqrt_product),
    spec("THM3", "by taking the supremum over", Recipe::Thm1, NoVec, K::Pair, 2, thm3),
    spec("THM3_PARTICULAR", "by setting B=I and A=C", Recipe::Thm3p, NoVec, K::Pair, 2, thm3_particular),
    spec("COR8", "Setting f(t)=t^alpha and g(t)=t^(1-alpha) in the numerical radius bound", Recipe::Thm1, NoVec, K::PowerPair, 2, thm3),
    spec("REMARK_HALF", "Setting alpha=1/2 and then employing the square-root estimate", Recipe::Thm1, NoVec, K::None, 1, remark_half),
    spec("REMARK_CC", "use the square-root estimate with the fact", Recipe::Thm3p, NoVec, K::None, 1, remark_cc),
    spec("COR9", "Setting B=C in Theorem", Recipe::Cor9, NoVec, K::Pair, 2, cor9),
    spec("THM4", "to higher order power", Recipe::Thm1, NoVec, K::HigherPower, 1, thm4),
    noted(
        spec("THM4_REFINED", "where gamma = max", Recipe::Thm1, NoVec, K::HigherPower, 2, thm4_refined),
        "cross term uses the half powers f^(alpha p/2), g^(beta p/2) that the two-operator norm estimate requires",
    ),
    measured(
        spec("THM4_REFINED_AS_PRINTED", "where gamma = max", Recipe::Thm1, NoVec, K::HigherPower, 2, thm4_refined_as_printed),
        "literal cross term ||f^(alpha p)(|A|) g^(beta p)(|A*|)||^2; measured only",
    ),
    counted(
        spec("MULTI_OP_W", "by taking the supremum over (several operators)", Recipe::Multi, NoVec, K::PairHolder, 2, multi_op_w),
        CountRule::Swept,
    ),
    noted(
        spec("THM5", "for all p,q >= 2 with", Recipe::Ginibre, NoVec, K::Pair, 1, thm5),
        "evaluated at p = q = 2, the only conjugate pair with p, q >= 2",
    ),
    noted(
        spec("THM5_REFINED", "a little more manipulation", Recipe::Ginibre, NoVec, K::Pair, 2, thm5_refined),
        "evaluated at p = q = 2",
    ),
    spec("REMARK_PQ", "our estimate is better than the previous one", Recipe::Ginibre, NoVec, K::None, 2, remark_pq),
];

type R = Result<Prepared, CatalogError>;

fn op<'a>(b: &'a InstanceBundle, role: &str) -> Result<&'a ComplexMatrix, CatalogError> {
    b.operator(role)
        .ok_or_else(|| GenError::MissingRole(role.to_string()).into())
}

fn norm(m: &ComplexMatrix) -> Result<f64, CatalogError> {
    Ok(operator_norm(m)?)
}

fn rad(m: &ComplexMatrix) -> Result<f64, CatalogError> {
    Ok(spectral_radius(m)?)
}

/// Numerical radius at a tenth of the comparison tolerance.
fn w(m: &ComplexMatrix, tol: f64) -> Result<f64, CatalogError> {
    Ok(numerical_radius(m, (tol / 10.0).max(MIN_TOL))?.value)
}

/// `‖M‖ + ‖M²‖^{1/2}`.
fn kf(m: &ComplexMatrix) -> Result<f64, CatalogError> {
    Ok(norm(m)? + norm(&(m * m))?.sqrt())
}

/// `½(x + y + √((x − y)² + 4c²))`, the two-operator norm estimate.
fn pair_bound(x: f64, y: f64, cross: f64) -> f64 {
    0.5 * (x + y + ((x - y).powi(2) + 4.0 * cross * cross).sqrt())
}

fn moduli(a: &ComplexMatrix) -> Result<(SpectralForm, SpectralForm), CatalogError> {
    Ok((
        SpectralForm::modulus(a)?,
        SpectralForm::modulus(&a.adjoint())?,
    ))
}

/// `‖φ(M)‖` from the spectrum of a PSD form.
fn spectral_norm(form: &SpectralForm, phi: impl Fn(f64) -> f64) -> f64 {
    form.values
        .iter()
        .map(|&t| phi(t.max(0.0)).abs())
        .fold(0.0, f64::max)
}

fn fixed(lhs: f64, rhs: Vec<f64>) -> R {
    Ok(Prepared::Fixed(Evaluation { lhs, rhs }))
}

fn vectors(f: impl Fn(&ComplexVector, &ComplexVector) -> Evaluation + 'static) -> R {
    Ok(Prepared::Vectors(Box::new(f)))
}

fn ev(lhs: f64, rhs: Vec<f64>) -> Evaluation {
    Evaluation { lhs, rhs }
}

fn nv(m: &ComplexMatrix, x: &ComplexVector) -> f64 {
    m.mul_vec(x).norm()
}

fn qf(m: &ComplexMatrix, x: &ComplexVector) -> f64 {
    m.quadratic_form(x).max(0.0)
}

fn power_map(form: &SpectralForm, exponent: f64) -> ComplexMatrix {
    form.map(|t| t.max(0.0).powf(exponent))
}

fn schwarz_pos(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let a = op(b, "A")?.clone();
    vectors(move |x, y| ev(a.form(x, y).norm_sqr(), vec![qf(&a, x) * qf(&a, y)]))
}

fn reid_with(b: &InstanceBundle, spectral: bool) -> R {
    let (a, bb) = (op(b, "A")?.clone(), op(b, "B")?);
    let k = if spectral { rad(bb)? } else { norm(bb)? };
    let ab = &a * bb;
    vectors(move |x, _| ev(ab.form(x, x).norm(), vec![k * qf(&a, x)]))
}

fn reid(b: &InstanceBundle, _: &Params, _: f64) -> R {
    reid_with(b, false)
}

fn halmos_reid(b: &InstanceBundle, _: &Params, _: f64) -> R {
    reid_with(b, true)
}

fn kato(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let alpha = p.power_alpha()?;
    let a = op(b, "A")?.clone();
    let (m, ms) = moduli(&a)?;
    let x_side = power_map(&m, 2.0 * alpha);
    let y_side = power_map(&ms, 2.0 * (1.0 - alpha));
    vectors(move |x, y| {
        ev(
            a.form(x, y).norm_sqr(),
            vec![qf(&x_side, x) * qf(&y_side, y)],
        )
    })
}

fn kittaneh_mixed(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let pair = p.pair()?;
    let (a, bb) = (op(b, "A")?, op(b, "B")?);
    let (m, ms) = moduli(a)?;
    let (f, g) = (m.apply(&pair, Side::F), ms.apply(&pair, Side::G));
    let k = rad(bb)?;
    let ab = a * bb;
    vectors(move |x, y| ev(ab.form(x, y).norm(), vec![k * nv(&f, x) * nv(&g, y)]))
}

fn ld1(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let t = op(b, "T")?.clone();
    let k = rad(&t)?;
    vectors(move |x, y| ev(t.form(x, y).norm_sqr(), vec![k * qf(&t, x) * y.norm_sqr()]))
}

fn ld_common(b: &InstanceBundle) -> Result<(ComplexMatrix, ComplexMatrix, f64), CatalogError> {
    let (t, s, c) = (op(b, "T")?, op(b, "S")?, op(b, "C")?);
    let k = rad(s)? * rad(c)?;
    Ok((t.clone(), &c.adjoint() * &(t * s), k))
}

fn ld2(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let (t, cts, k) = ld_common(b)?;
    vectors(move |x, y| {
        ev(
            cts.form(x, y).norm(),
            vec![k * (qf(&t, x) * qf(&t, y)).sqrt()],
        )
    })
}

fn ld3(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let (t, cts, k) = ld_common(b)?;
    vectors(move |x, _| ev(cts.form(x, x).norm(), vec![k * qf(&t, x)]))
}

fn ld3_as_printed(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let (t, _, k) = ld_common(b)?;
    let ts = &t * op(b, "S")?;
    vectors(move |x, _| ev(ts.form(x, x).norm(), vec![k * qf(&t, x)]))
}

fn ld4(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let (a, bb) = (op(b, "A")?.clone(), op(b, "B")?.clone());
    let k = rad(&a)? * rad(&bb)?;
    vectors(move |x, y| {
        let (ax, by) = (a.mul_vec(x), bb.mul_vec(y));
        let lhs = crate::linalg::inner_unchecked(ax.as_slice(), by.as_slice()).norm_sqr();
        ev(lhs, vec![k * ax.norm() * by.norm() * x.norm() * y.norm()])
    })
}

fn sandwich_lower(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    fixed(0.5 * norm(a)?, vec![w(a, tol)?])
}

fn sandwich_upper(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    fixed(w(a, tol)?, vec![norm(a)?])
}

fn kittaneh_2003(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    fixed(w(a, tol)?, vec![0.5 * kf(a)?])
}

fn gram_sum(a: &ComplexMatrix) -> Result<f64, CatalogError> {
    let s = &(&a.adjoint() * a) + &(a * &a.adjoint());
    norm(&s)
}

fn kittaneh_2005_lower(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    fixed(0.25 * gram_sum(a)?, vec![w(a, tol)?.powi(2)])
}

fn kittaneh_2005_upper(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    fixed(w(a, tol)?.powi(2), vec![0.5 * gram_sum(a)?])
}

fn yamazaki(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    let n = norm(a)?;
    let tilde = aluthge(a)?;
    fixed(w(a, tol)?, vec![0.5 * (n + w(&tilde, tol)?), 0.5 * kf(a)?])
}

fn dragomir_buzano(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    fixed(
        w(a, tol)?.powi(2),
        vec![0.5 * (norm(a)?.powi(2) + w(&(a * a), tol)?)],
    )
}

fn dragomir_buzano_as_printed(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    fixed(
        w(a, tol)?.powi(2),
        vec![0.5 * (norm(a)? + w(&(a * a), tol)?)],
    )
}

fn lemma_dcv(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let pair = p.pair()?;
    let (a, d, c) = (op(b, "A")?, op(b, "D")?, op(b, "C")?);
    let (m, ms) = moduli(a)?;
    let f2 = m.apply_pow(&pair, Side::F, 2.0);
    let g2 = ms.apply_pow(&pair, Side::G, 2.0);
    let u_side = &(&d.adjoint() * &f2) * d;
    let v_side = &(&c.adjoint() * &g2) * c;
    let cad = &(&c.adjoint() * a) * d;
    vectors(move |x, y| {
        ev(
            cad.form(x, y).norm_sqr(),
            vec![qf(&u_side, x) * qf(&v_side, y)],
        )
    })
}

/// `C*AB`, `r(B)r(C)`, `f(|A|)` and `g(|A*|)`; `B = I` when `b` is `None`.
pub(crate) struct MixedParts {
    pub product: ComplexMatrix,
    pub weight: f64,
    pub f: ComplexMatrix,
    pub g: ComplexMatrix,
}

pub(crate) fn mixed_parts(
    a: &ComplexMatrix,
    b: Option<&ComplexMatrix>,
    c: &ComplexMatrix,
    pair: &FunctionPair,
) -> Result<MixedParts, CatalogError> {
    let (m, ms) = moduli(a)?;
    let ca = &c.adjoint() * a;
    let (product, rb) = match b {
        Some(b) => (&ca * b, rad(b)?),
        None => (ca, 1.0),
    };
    Ok(MixedParts {
        product,
        weight: rb * rad(c)?,
        f: m.apply(pair, Side::F),
        g: ms.apply(pair, Side::G),
    })
}

fn mixed_vectors(parts: MixedParts) -> R {
    let MixedParts {
        product,
        weight,
        f,
        g,
    } = parts;
    vectors(move |x, u| {
        ev(
            product.form(x, u).norm(),
            vec![weight * nv(&f, x) * nv(&g, u)],
        )
    })
}

fn gen_mixed_schwarz(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let parts = mixed_parts(op(b, "A")?, Some(op(b, "B")?), op(b, "C")?, &p.pair()?)?;
    mixed_vectors(parts)
}

fn cor1(b: &InstanceBundle, p: &Params, _: f64) -> R {
    mixed_vectors(mixed_parts(op(b, "A")?, None, op(b, "C")?, &p.pair()?)?)
}

fn cor2(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let alpha = p.power_alpha()?;
    let (a, bb, c) = (op(b, "A")?, op(b, "B")?, op(b, "C")?);
    let (m, ms) = moduli(a)?;
    let k = (rad(bb)? * rad(c)?).powi(2);
    let product = &(&c.adjoint() * a) * bb;
    let x_side = power_map(&m, 2.0 * alpha);
    let u_side = power_map(&ms, 2.0 * (1.0 - alpha));
    vectors(move |x, u| {
        ev(
            product.form(x, u).norm_sqr(),
            vec![k * qf(&x_side, x) * qf(&u_side, u)],
        )
    })
}

fn cor2_particular(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let (bb, c) = (op(b, "B")?, op(b, "C")?);
    let k = rad(bb)? * rad(c)?;
    let product = &c.adjoint() * bb;
    vectors(move |x, u| ev(product.form(x, u).norm(), vec![k]))
}

fn triples(b: &InstanceBundle, p: &Params) -> Result<Vec<MixedParts>, CatalogError> {
    let pair = p.pair()?;
    let count = p.count()?;
    (1..=count)
        .map(|i| {
            mixed_parts(
                op(b, &format!("A_{i}"))?,
                Some(op(b, &format!("B_{i}"))?),
                op(b, &format!("C_{i}"))?,
                &pair,
            )
        })
        .collect()
}

fn sum_products(parts: &[MixedParts]) -> ComplexMatrix {
    let n = parts[0].product.n();
    parts
        .iter()
        .fold(ComplexMatrix::zeros(n), |acc, t| &acc + &t.product)
}

fn holder(values_p: impl Iterator<Item = f64>, p: f64) -> f64 {
    values_p.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
}

fn multi_op(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let exponent = p.p()?;
    let conj = exponent / (exponent - 1.0);
    let parts = triples(b, p)?;
    let total = sum_products(&parts);
    let max_weight = parts.iter().map(|t| t.weight).fold(0.0, f64::max);
    vectors(move |x, u| {
        let fx: Vec<f64> = parts.iter().map(|t| nv(&t.f, x)).collect();
        let gu: Vec<f64> = parts.iter().map(|t| nv(&t.g, u)).collect();
        let sum: f64 = parts
            .iter()
            .zip(fx.iter().zip(&gu))
            .map(|(t, (a, b))| t.weight * a * b)
            .sum();
        let hold =
            max_weight * holder(fx.iter().copied(), exponent) * holder(gu.iter().copied(), conj);
        ev(total.form(x, u).norm(), vec![sum, hold])
    })
}

fn cor4(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let alpha = p.power_alpha()?;
    let mut terms = Vec::new();
    let mut total: Option<ComplexMatrix> = None;
    for i in 1..=2 {
        let (a, bb, c) = (
            op(b, &format!("A_{i}"))?,
            op(b, &format!("B_{i}"))?,
            op(b, &format!("C_{i}"))?,
        );
        let (m, ms) = moduli(a)?;
        let k = (rad(bb)? * rad(c)?).powi(2);
        let product = &(&c.adjoint() * a) * bb;
        total = Some(match total {
            Some(t) => &t + &product,
            None => product,
        });
        terms.push((
            k,
            power_map(&m, 2.0 * alpha),
            power_map(&ms, 2.0 * (1.0 - alpha)),
        ));
    }
    let total = total.expect("two terms");
    vectors(move |x, u| {
        let rhs = terms
            .iter()
            .map(|(k, xs, us)| k * qf(xs, x) * qf(us, u))
            .sum();
        ev(total.form(x, u).norm_sqr(), vec![rhs])
    })
}

/// `‖f(|A_i|)‖`, `‖g(|A_i*|)‖` per term.
fn term_norms(
    b: &InstanceBundle,
    pair: &FunctionPair,
    count: usize,
) -> Result<Vec<(f64, f64)>, CatalogError> {
    (1..=count)
        .map(|i| {
            let (m, ms) = moduli(op(b, &format!("A_{i}"))?)?;
            Ok((
                spectral_norm(&m, |t| pair.f(t)),
                spectral_norm(&ms, |t| pair.g(t)),
            ))
        })
        .collect()
}

fn multi_norm_rhs(weights: &[f64], norms: &[(f64, f64)], p: f64) -> f64 {
    let q = p / (p - 1.0);
    weights.iter().copied().fold(0.0, f64::max)
        * holder(norms.iter().map(|n| n.0), p)
        * holder(norms.iter().map(|n| n.1), q)
}

fn multi_weights(
    b: &InstanceBundle,
    count: usize,
) -> Result<(ComplexMatrix, Vec<f64>), CatalogError> {
    let mut total = ComplexMatrix::zeros(b.n);
    let mut weights = Vec::with_capacity(count);
    for i in 1..=count {
        let (a, bb, c) = (
            op(b, &format!("A_{i}"))?,
            op(b, &format!("B_{i}"))?,
            op(b, &format!("C_{i}"))?,
        );
        total = &total + &(&(&c.adjoint() * a) * bb);
        weights.push(rad(bb)? * rad(c)?);
    }
    Ok((total, weights))
}

fn multi_op_norm(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let count = p.count()?;
    let (total, weights) = multi_weights(b, count)?;
    let norms = term_norms(b, &p.pair()?, count)?;
    fixed(
        norm(&total)?,
        vec![multi_norm_rhs(&weights, &norms, p.p()?)],
    )
}

fn multi_op_norm_unweighted(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let count = p.count()?;
    let mut total = ComplexMatrix::zeros(b.n);
    for i in 1..=count {
        total = &total + op(b, &format!("A_{i}"))?;
    }
    let norms = term_norms(b, &p.pair()?, count)?;
    fixed(
        norm(&total)?,
        vec![multi_norm_rhs(&vec![1.0; count], &norms, p.p()?)],
    )
}

fn multi_op_w(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let count = p.count()?;
    let (total, weights) = multi_weights(b, count)?;
    let norms = term_norms(b, &p.pair()?, count)?;
    let sum = weights
        .iter()
        .zip(&norms)
        .map(|(k, (f, g))| k * f * g)
        .sum();
    fixed(
        w(&total, tol)?,
        vec![sum, multi_norm_rhs(&weights, &norms, p.p()?)],
    )
}

/// `|P|`, `|Q|` for `A = P + iQ`.
fn cartesian_moduli(a: &ComplexMatrix) -> Result<(SpectralForm, SpectralForm), CatalogError> {
    let parts = cartesian(a);
    Ok((
        SpectralForm::hermitian_modulus(&parts.real_part)?,
        SpectralForm::hermitian_modulus(&parts.imag_part)?,
    ))
}

fn hybrid(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let pair = p.pair()?;
    let a = op(b, "A")?.clone();
    let (mp, mq) = cartesian_moduli(&a)?;
    let (fp, gp) = (mp.apply(&pair, Side::F), mp.apply(&pair, Side::G));
    let (fq, gq) = (mq.apply(&pair, Side::F), mq.apply(&pair, Side::G));
    vectors(move |x, y| {
        let rhs = nv(&fp, x) * nv(&gp, y) + nv(&fq, x) * nv(&gq, y);
        ev(a.form(x, y).norm(), vec![rhs])
    })
}

fn hybrid_kato(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let alpha = p.power_alpha()?;
    let a = op(b, "A")?.clone();
    let (mp, mq) = cartesian_moduli(&a)?;
    let (px, py) = (
        power_map(&mp, 2.0 * alpha),
        power_map(&mp, 2.0 * (1.0 - alpha)),
    );
    let (qx, qy) = (
        power_map(&mq, 2.0 * alpha),
        power_map(&mq, 2.0 * (1.0 - alpha)),
    );
    vectors(move |x, y| {
        let rhs = qf(&px, x) * qf(&py, y) + qf(&qx, x) * qf(&qy, y);
        ev(a.form(x, y).norm_sqr(), vec![rhs])
    })
}

fn power_young(_: &InstanceBundle, p: &Params, _: f64) -> R {
    let (alpha, beta) = p.young()?;
    let outer = p.p()?;
    let (a, b) = (p.a.unwrap_or(0.0), p.b.unwrap_or(0.0));
    let first = a.powf(alpha) / alpha + b.powf(beta) / beta;
    let second = (a.powf(outer * alpha) / alpha + b.powf(outer * beta) / beta).powf(1.0 / outer);
    fixed(a * b, vec![first, second])
}

fn mccarty(b: &InstanceBundle, p: &Params, _: f64) -> R {
    let exponent = p.p()?;
    let a = op(b, "A")?.clone();
    let powered = power_map(&SpectralForm::psd(&a)?, exponent);
    vectors(move |x, _| ev(qf(&a, x).powf(exponent), vec![qf(&powered, x)]))
}

fn spectral_product(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let (a, bb) = (op(b, "A")?, op(b, "B")?);
    let (ab, ba) = (a * bb, bb * a);
    let (nab, nba) = (norm(&ab)?, norm(&ba)?);
    let m = (norm(a)? * norm(&(&ba * bb))?).min(norm(bb)? * norm(&(&ab * a))?);
    let rhs = 0.25 * (nab + nba + ((nab - nba).powi(2) + 4.0 * m).sqrt());
    fixed(rad(&ab)?, vec![rhs])
}

fn psd_roots(b: &InstanceBundle) -> Result<(ComplexMatrix, ComplexMatrix), CatalogError> {
    let ra = SpectralForm::psd(op(b, "A")?)?.map(f64::sqrt);
    let rb = SpectralForm::psd(op(b, "B")?)?.map(f64::sqrt);
    Ok((ra, rb))
}

fn norm_sum(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let (a, bb) = (op(b, "A")?, op(b, "B")?);
    let (ra, rb) = psd_roots(b)?;
    let (na, nb) = (norm(a)?, norm(bb)?);
    let cross = norm(&(&ra * &rb))?;
    fixed(norm(&(a + bb))?, vec![pair_bound(na, nb, cross), na + nb])
}

fn sqrt_product(b: &InstanceBundle, _: &Params, _: f64) -> R {
    let (ra, rb) = psd_roots(b)?;
    let ab = op(b, "A")? * op(b, "B")?;
    fixed(norm(&(&ra * &rb))?, vec![norm(&ab)?.sqrt()])
}

/// `‖f²(|A|) + g²(|A*|)‖` and the braced two-operator expression.
fn squares_terms(a: &ComplexMatrix, pair: &FunctionPair) -> Result<(f64, f64), CatalogError> {
    let (m, ms) = moduli(a)?;
    let (f, g) = (m.apply(pair, Side::F), ms.apply(pair, Side::G));
    let (f2, g2) = (
        m.apply_pow(pair, Side::F, 2.0),
        ms.apply_pow(pair, Side::G, 2.0),
    );
    let sum = norm(&(&f2 + &g2))?;
    let braced = 2.0 * pair_bound(norm(&f2)?, norm(&g2)?, norm(&(&f * &g))?);
    Ok((sum, braced))
}

fn thm3(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let (a, bb, c) = (op(b, "A")?, op(b, "B")?, op(b, "C")?);
    let (sum, braced) = squares_terms(a, &p.pair()?)?;
    let lhs = w(&(&(&c.adjoint() * a) * bb), tol)?;
    fixed(
        lhs,
        vec![
            0.5 * rad(bb)? * rad(c)? * sum,
            kf(bb)? * kf(c)? * braced / 16.0,
        ],
    )
}

fn thm3_particular(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let c = op(b, "C")?;
    let (sum, braced) = squares_terms(c, &p.pair()?)?;
    let lhs = w(&(&c.adjoint() * c), tol)?;
    fixed(lhs, vec![0.5 * rad(c)? * sum, kf(c)? * braced / 8.0])
}

fn remark_half(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let (a, bb, c) = (op(b, "A")?, op(b, "B")?, op(b, "C")?);
    let lhs = w(&(&(&c.adjoint() * a) * bb), tol)?;
    fixed(lhs, vec![kf(bb)? * kf(c)? * kf(a)? / 8.0])
}

fn remark_cc(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let c = op(b, "C")?;
    fixed(w(&(&c.adjoint() * c), tol)?, vec![0.25 * kf(c)?.powi(2)])
}

fn cor9(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let (a, c) = (op(b, "A")?, op(b, "C")?);
    let (sum, braced) = squares_terms(a, &p.pair()?)?;
    let lhs = w(&(&(&c.adjoint() * a) * c), tol)?;
    fixed(
        lhs,
        vec![0.5 * rad(c)?.powi(2) * sum, kf(c)?.powi(2) * braced / 16.0],
    )
}

struct HigherPower {
    lhs: f64,
    first: f64,
    /// `(‖B‖ + ‖B²‖^{1/2})^p (‖C‖ + ‖C²‖^{1/2})^p γ / 2^{p+2}`.
    factor: f64,
    x_norm: f64,
    y_norm: f64,
    /// `‖f^{αp/2}(|A|) g^{βp/2}(|A*|)‖`.
    half_cross: f64,
    /// `‖f^{αp}(|A|) g^{βp}(|A*|)‖`.
    full_cross: f64,
}

fn higher_power(b: &InstanceBundle, p: &Params, tol: f64) -> Result<HigherPower, CatalogError> {
    let pair = p.pair()?;
    let outer = p.p()?;
    let (alpha, beta) = p.young()?;
    let (a, bb, c) = (op(b, "A")?, op(b, "B")?, op(b, "C")?);
    let (m, ms) = moduli(a)?;
    let x = m.apply_pow(&pair, Side::F, alpha * outer);
    let y = ms.apply_pow(&pair, Side::G, beta * outer);
    let xh = m.apply_pow(&pair, Side::F, alpha * outer / 2.0);
    let yh = ms.apply_pow(&pair, Side::G, beta * outer / 2.0);
    let mix = &x.scale_real(1.0 / alpha) + &y.scale_real(1.0 / beta);
    let lhs = w(&(&(&c.adjoint() * a) * bb), tol)?.powf(outer);
    let first = (rad(bb)? * rad(c)?).powf(outer) * norm(&mix)?;
    let gamma = (1.0 / alpha).max(1.0 / beta);
    let factor = gamma * (kf(bb)? * kf(c)?).powf(outer) / 2f64.powf(outer + 2.0);
    Ok(HigherPower {
        lhs,
        first,
        factor,
        x_norm: norm(&x)?,
        y_norm: norm(&y)?,
        half_cross: norm(&(&xh * &yh))?,
        full_cross: norm(&(&x * &y))?,
    })
}

fn thm4(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let h = higher_power(b, p, tol)?;
    fixed(h.lhs, vec![h.first])
}

fn refined(h: &HigherPower, cross: f64) -> f64 {
    h.factor * 2.0 * pair_bound(h.x_norm, h.y_norm, cross)
}

fn thm4_refined(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let h = higher_power(b, p, tol)?;
    fixed(h.lhs, vec![h.first, refined(&h, h.half_cross)])
}

fn thm4_refined_as_printed(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let h = higher_power(b, p, tol)?;
    fixed(h.lhs, vec![h.first, refined(&h, h.full_cross)])
}

struct HybridNorms {
    f_sum: f64,
    g_sum: f64,
    f_bound: f64,
    g_bound: f64,
}

fn hybrid_norms(a: &ComplexMatrix, pair: &FunctionPair) -> Result<HybridNorms, CatalogError> {
    let (mp, mq) = cartesian_moduli(a)?;
    let (fp, fq) = (mp.apply(pair, Side::F), mq.apply(pair, Side::F));
    let (gp, gq) = (mp.apply(pair, Side::G), mq.apply(pair, Side::G));
    let (fp2, fq2) = (
        mp.apply_pow(pair, Side::F, 2.0),
        mq.apply_pow(pair, Side::F, 2.0),
    );
    let (gp2, gq2) = (
        mp.apply_pow(pair, Side::G, 2.0),
        mq.apply_pow(pair, Side::G, 2.0),
    );
    Ok(HybridNorms {
        f_sum: norm(&(&fp2 + &fq2))?,
        g_sum: norm(&(&gp2 + &gq2))?,
        f_bound: pair_bound(norm(&fp2)?, norm(&fq2)?, norm(&(&fp * &fq))?),
        g_bound: pair_bound(norm(&gp2)?, norm(&gq2)?, norm(&(&gp * &gq))?),
    })
}

fn thm5(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    let h = hybrid_norms(a, &p.pair()?)?;
    fixed(w(a, tol)?, vec![(h.f_sum * h.g_sum).sqrt()])
}

fn thm5_refined(b: &InstanceBundle, p: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    let h = hybrid_norms(a, &p.pair()?)?;
    fixed(
        w(a, tol)?,
        vec![(h.f_sum * h.g_sum).sqrt(), (h.f_bound * h.g_bound).sqrt()],
    )
}

fn remark_pq(b: &InstanceBundle, _: &Params, tol: f64) -> R {
    let a = op(b, "A")?;
    let (mp, mq) = cartesian_moduli(a)?;
    let (np, nq) = (mp.norm(), mq.norm());
    let cross = norm(&(&mp.to_matrix() * &mq.to_matrix()))?;
    let bound = 0.5 * (np + nq + ((np - nq).powi(2) + 4.0 * cross).sqrt());
    fixed(w(a, tol)?, vec![bound, np + nq])
}
