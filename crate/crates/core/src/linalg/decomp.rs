use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigen;
use super::{ComplexMatrix, ComplexVector, LinalgError};

/// Relative threshold below which a negative eigenvalue of a PSD matrix is
/// treated as rounding noise.
pub const PSD_CLAMP: f64 = 1e-8;

const RANK_TOL: f64 = 1e-10;

/// Eigenpairs of a Hermitian matrix, kept so several functions of the same
/// matrix can be formed without re-decomposing.
#[derive(Debug, Clone)]
pub struct SpectralForm {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl SpectralForm {
    /// Eigendecomposition of a Hermitian matrix, values unmodified.
    pub fn hermitian(h: &ComplexMatrix) -> Result<Self, LinalgError> {
        let eig = hermitian_eigen(h)?;
        Ok(Self {
            values: eig.values,
            vectors: eig.vectors,
        })
    }

    /// Eigendecomposition of a PSD matrix with small negative eigenvalues
    /// clamped to zero.
    pub fn psd(m: &ComplexMatrix) -> Result<Self, LinalgError> {
        let mut form = Self::hermitian(m)?;
        let norm = form.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        for v in form.values.iter_mut() {
            if *v < 0.0 {
                if *v < -PSD_CLAMP * norm {
                    return Err(LinalgError::NotPsd { eigenvalue: *v });
                }
                *v = 0.0;
            }
        }
        Ok(form)
    }

    /// Spectral form of `|A| = (A*A)^{1/2}`.
    ///
    /// The eigenvalues are taken as `‖A v_i‖` rather than `sqrt(λ_i(A*A))`,
    /// which keeps small singular values accurate.
    pub fn modulus(a: &ComplexMatrix) -> Result<Self, LinalgError> {
        let gram = (&a.adjoint() * a).hermitian_part();
        let eig = hermitian_eigen(&gram)?;
        let values = (0..a.n())
            .map(|i| a.mul_vec(&eig.vectors.column(i)).norm())
            .collect();
        Ok(Self {
            values,
            vectors: eig.vectors,
        })
    }

    /// Spectral form of `|H|` for Hermitian `H`.
    pub fn hermitian_modulus(h: &ComplexMatrix) -> Result<Self, LinalgError> {
        let mut form = Self::hermitian(h)?;
        for v in form.values.iter_mut() {
            *v = v.abs();
        }
        Ok(form)
    }

    pub fn n(&self) -> usize {
        self.vectors.n()
    }

    /// Largest eigenvalue modulus; the operator norm of the represented matrix.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// `V · diag(φ(λ_i)) · V*`, returned exactly Hermitian.
    pub fn map(&self, phi: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.n();
        let weights: Vec<f64> = self.values.iter().map(|&v| phi(v)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &w) in weights.iter().enumerate() {
                    if w != 0.0 {
                        acc += self.vectors[(i, k)] * self.vectors[(j, k)].conj() * w;
                    }
                }
                if i == j {
                    out[(i, i)] = Complex64::new(acc.re, 0.0);
                } else {
                    out[(i, j)] = acc;
                    out[(j, i)] = acc.conj();
                }
            }
        }
        out
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        self.map(|t| t)
    }

    pub fn apply(&self, pair: &FunctionPair, side: Side) -> ComplexMatrix {
        self.map(|t| pair.eval(side, t.max(0.0)))
    }

    /// Applies `pair.side(t)^power`.
    pub fn apply_pow(&self, pair: &FunctionPair, side: Side, power: f64) -> ComplexMatrix {
        self.map(|t| pair.eval(side, t.max(0.0)).powf(power))
    }
}

/// `|A| = (A*A)^{1/2}`.
pub fn absolute_value(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    Ok(SpectralForm::modulus(a)?.to_matrix())
}

#[derive(Debug, Clone)]
pub struct PolarParts {
    pub unitary: ComplexMatrix,
    pub modulus: ComplexMatrix,
    pub spectral: SpectralForm,
}

/// Polar decomposition `A = U|A|` with `U` unitary.
///
/// Columns `A v_i / ‖A v_i‖` give the partial isometry on the range of `|A|`;
/// for singular `A` the remaining columns come from the null eigenvectors of
/// `AA*`, orthonormalized against the ones already fixed.
pub fn polar(a: &ComplexMatrix) -> Result<PolarParts, LinalgError> {
    let n = a.n();
    let spectral = SpectralForm::modulus(a)?;
    let threshold = RANK_TOL * a.frobenius_norm().max(1.0);

    let mut columns: Vec<Option<ComplexVector>> = vec![None; n];
    let mut accepted: Vec<ComplexVector> = Vec::with_capacity(n);
    for (i, slot) in columns.iter_mut().enumerate() {
        let sigma = spectral.values[i];
        if sigma > threshold {
            let w = a
                .mul_vec(&spectral.vectors.column(i))
                .scale(Complex64::new(1.0 / sigma, 0.0));
            accepted.push(w.clone());
            *slot = Some(w);
        }
    }

    let missing = columns.iter().filter(|c| c.is_none()).count();
    if missing > 0 {
        let co_gram = (a * &a.adjoint()).hermitian_part();
        let co_eig = hermitian_eigen(&co_gram)?;
        let candidates = (0..n)
            .map(|i| co_eig.vectors.column(i))
            .chain((0..n).map(|i| ComplexVector::basis(n, i)));
        let mut fill = Vec::with_capacity(missing);
        for candidate in candidates {
            if fill.len() == missing {
                break;
            }
            if let Some(w) = orthonormalize_against(&candidate, &accepted) {
                accepted.push(w.clone());
                fill.push(w);
            }
        }
        let mut fill = fill.into_iter();
        for slot in columns.iter_mut().filter(|c| c.is_none()) {
            *slot = fill.next();
        }
    }

    let mut w = ComplexMatrix::zeros(n);
    for (j, col) in columns.into_iter().enumerate() {
        let col = col.ok_or(LinalgError::NoConvergence {
            routine: "polar completion",
        })?;
        w.set_column(j, &col);
    }
    let unitary = &w * &spectral.vectors.adjoint();
    let modulus = spectral.to_matrix();
    Ok(PolarParts {
        unitary,
        modulus,
        spectral,
    })
}

/// Two passes of Gram-Schmidt; `None` if the candidate is (numerically) in the
/// span of `basis`.
fn orthonormalize_against(
    candidate: &ComplexVector,
    basis: &[ComplexVector],
) -> Option<ComplexVector> {
    let mut v = candidate.clone();
    for _ in 0..2 {
        for b in basis {
            let coeff = super::inner_unchecked(v.as_slice(), b.as_slice());
            v = v.axpy(-coeff, b);
        }
    }
    let norm = v.norm();
    if norm < 1e-6 {
        return None;
    }
    Some(v.scale(Complex64::new(1.0 / norm, 0.0)))
}

#[derive(Debug, Clone)]
pub struct CartesianParts {
    pub real_part: ComplexMatrix,
    pub imag_part: ComplexMatrix,
}

impl CartesianParts {
    /// `P + iQ`.
    pub fn reassemble(&self) -> ComplexMatrix {
        &self.real_part + &self.imag_part.scale(Complex64::new(0.0, 1.0))
    }
}

/// `A = P + iQ` with `P = (A + A*)/2`, `Q = (A − A*)/(2i)`, both exactly
/// Hermitian.
pub fn cartesian(a: &ComplexMatrix) -> CartesianParts {
    let n = a.n();
    let mut p = ComplexMatrix::zeros(n);
    let mut q = ComplexMatrix::zeros(n);
    for i in 0..n {
        p[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        q[(i, i)] = Complex64::new(a[(i, i)].im, 0.0);
        for j in (i + 1)..n {
            let aij = a[(i, j)];
            let aji = a[(j, i)].conj();
            let pij = (aij + aji) * 0.5;
            // (aij - aji) / 2i
            let d = (aij - aji) * 0.5;
            let qij = Complex64::new(d.im, -d.re);
            p[(i, j)] = pij;
            p[(j, i)] = pij.conj();
            q[(i, j)] = qij;
            q[(j, i)] = qij.conj();
        }
    }
    CartesianParts {
        real_part: p,
        imag_part: q,
    }
}

/// Which member of a [`FunctionPair`] to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    F,
    G,
}

/// Nonnegative functions `f`, `g` on `[0, ∞)` with `f(t)·g(t) = t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionPair {
    /// `f(t) = t^α`, `g(t) = t^{1−α}`, `α ∈ [0, 1]`, with `0^0 = 1`.
    PowerSplit { alpha: f64 },
    /// `f(t) = t/(1+t)`, `g(t) = 1+t`.
    Ratio,
}

impl FunctionPair {
    pub fn power(alpha: f64) -> Result<Self, LinalgError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(LinalgError::BadParameter(format!(
                "power split exponent {alpha} outside [0, 1]"
            )));
        }
        Ok(Self::PowerSplit { alpha })
    }

    pub fn name(&self) -> String {
        match self {
            Self::PowerSplit { alpha } => format!("power({alpha})"),
            Self::Ratio => "ratio".to_string(),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Self::PowerSplit { alpha } => Some(*alpha),
            Self::Ratio => None,
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        match self {
            Self::PowerSplit { alpha } => t.powf(*alpha),
            Self::Ratio => t / (1.0 + t),
        }
    }

    pub fn g(&self, t: f64) -> f64 {
        match self {
            Self::PowerSplit { alpha } => t.powf(1.0 - alpha),
            Self::Ratio => 1.0 + t,
        }
    }

    pub fn eval(&self, side: Side, t: f64) -> f64 {
        match side {
            Side::F => self.f(t),
            Side::G => self.g(t),
        }
    }
}

/// `side(M)` through the spectral decomposition of a PSD matrix.
pub fn apply_function(
    pair: &FunctionPair,
    side: Side,
    m: &ComplexMatrix,
) -> Result<ComplexMatrix, LinalgError> {
    Ok(SpectralForm::psd(m)?.apply(pair, side))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn modulus_fixtures() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let m = absolute_value(&a).unwrap();
        assert!(m.relative_distance(&ComplexMatrix::from_real_diagonal(&[0.0, 2.0])) < 1e-15);

        let psd = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, 0.5)],
            vec![c(0.5, -0.5), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(absolute_value(&psd).unwrap().relative_distance(&psd) < 1e-14);

        let s = 0.5f64.sqrt();
        let u = ComplexMatrix::from_rows(&[vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]])
            .unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(absolute_value(&u).unwrap().relative_distance(&id) < 1e-14);
    }

    #[test]
    fn polar_of_positive_diagonal() {
        let a = ComplexMatrix::from_real_diagonal(&[2.0, 3.0]);
        let parts = polar(&a).unwrap();
        assert!(parts.unitary.relative_distance(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(parts.modulus.relative_distance(&a) < 1e-14);
    }

    #[test]
    fn polar_of_nilpotent_completes_to_swap() {
        let parts = polar(&nilpotent()).unwrap();
        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let modulus = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert!(parts.modulus.relative_distance(&modulus) < 1e-15);
        assert!((&parts.unitary * &parts.modulus).relative_distance(&nilpotent()) < 1e-15);
        let uu = &parts.unitary.adjoint() * &parts.unitary;
        assert!(uu.relative_distance(&ComplexMatrix::identity(2)) < 1e-15);
        assert!(parts.unitary.relative_distance(&swap) < 1e-15);
    }

    #[test]
    fn polar_of_unitary_is_itself() {
        let s = 0.5f64.sqrt();
        let u = ComplexMatrix::from_rows(&[vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]])
            .unwrap();
        let parts = polar(&u).unwrap();
        assert!(parts.unitary.relative_distance(&u) < 1e-14);
    }

    #[test]
    fn polar_of_zero_matrix_is_unitary() {
        let parts = polar(&ComplexMatrix::zeros(3)).unwrap();
        let uu = &parts.unitary.adjoint() * &parts.unitary;
        assert!(uu.relative_distance(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn cartesian_fixtures() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let parts = cartesian(&a);
        let p = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let q = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(parts.real_part, p);
        assert_eq!(parts.imag_part, q);

        let h = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0)],
            vec![c(2.0, -1.0), c(-3.0, 0.0)],
        ])
        .unwrap();
        let parts = cartesian(&h);
        assert_eq!(parts.real_part, h);
        assert_eq!(parts.imag_part.frobenius_norm(), 0.0);

        let parts = cartesian(&h.scale(c(0.0, 1.0)));
        assert_eq!(parts.real_part.frobenius_norm(), 0.0);
        assert!(parts.imag_part.relative_distance(&h) < 1e-16);
    }

    #[test]
    fn functional_calculus_fixtures() {
        let d = ComplexMatrix::from_real_diagonal(&[4.0, 9.0]);
        let half = FunctionPair::power(0.5).unwrap();
        let root = apply_function(&half, Side::F, &d).unwrap();
        assert!(root.relative_distance(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0])) < 1e-15);

        let id = ComplexMatrix::identity(3);
        for alpha in [0.0, 0.3, 1.0] {
            let pair = FunctionPair::power(alpha).unwrap();
            assert!(
                apply_function(&pair, Side::F, &id)
                    .unwrap()
                    .relative_distance(&id)
                    < 1e-15
            );
        }

        let pair = FunctionPair::power(0.3).unwrap();
        let product = &apply_function(&pair, Side::F, &d).unwrap()
            * &apply_function(&pair, Side::G, &d).unwrap();
        assert!(product.relative_distance(&d) < 1e-14);
    }

    #[test]
    fn negative_eigenvalues_beyond_clamp_are_rejected() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-3]);
        assert!(matches!(
            apply_function(&FunctionPair::Ratio, Side::F, &m),
            Err(LinalgError::NotPsd { .. })
        ));
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-12]);
        let out = apply_function(&FunctionPair::Ratio, Side::G, &m).unwrap();
        assert_eq!(out[(1, 1)].re, 1.0);
    }

    #[test]
    fn pairs_multiply_to_identity_function() {
        let pairs = [
            FunctionPair::power(0.0).unwrap(),
            FunctionPair::power(0.25).unwrap(),
            FunctionPair::power(0.5).unwrap(),
            FunctionPair::power(1.0).unwrap(),
            FunctionPair::Ratio,
        ];
        for pair in pairs {
            for k in 0..64 {
                let t = 10.0 * k as f64 / 63.0;
                let (f, g) = (pair.f(t), pair.g(t));
                assert!(f >= 0.0 && g >= 0.0);
                assert!(
                    (f * g - t).abs() <= 1e-9 * t.max(1.0),
                    "{} at {t}",
                    pair.name()
                );
            }
        }
    }

    #[test]
    fn power_split_rejects_exponent_outside_unit_interval() {
        assert!(FunctionPair::power(1.5).is_err());
        assert!(FunctionPair::power(-0.1).is_err());
    }
}
