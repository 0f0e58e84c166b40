use num_complex::Complex64;

use super::{GenError, Rng, MAX_DIM};
use crate::linalg::{inner_unchecked, ComplexMatrix, ComplexVector, LinalgError, SpectralForm};

/// Smallest eigenvalue accepted for a weight in [`intertwined_operator`].
pub const MIN_WEIGHT_EIGENVALUE: f64 = 1e-6;
/// Singular values and PSD spectra are drawn from this range.
pub const SPECTRUM_RANGE: (f64, f64) = (0.1, 2.0);

pub(crate) fn check_dim(n: usize) -> Result<(), GenError> {
    if n == 0 || n > MAX_DIM {
        return Err(GenError::BadDimension(n));
    }
    Ok(())
}

/// Matrix with independent standard complex Gaussian entries.
pub fn ginibre(n: usize, rng: &mut Rng) -> Result<ComplexMatrix, GenError> {
    check_dim(n)?;
    let data = (0..n * n).map(|_| rng.complex_normal()).collect();
    Ok(ComplexMatrix::from_row_major(n, data)?)
}

/// Hermitian matrix with `N(0, 1)` real diagonal and standard complex
/// Gaussian off-diagonal entries.
pub fn random_hermitian(n: usize, rng: &mut Rng) -> Result<ComplexMatrix, GenError> {
    check_dim(n)?;
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.normal(), 0.0);
        for j in (i + 1)..n {
            let z = rng.complex_normal();
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    Ok(h)
}

/// Haar-distributed unitary: Gram-Schmidt (two passes) on Ginibre columns.
pub fn random_unitary(n: usize, rng: &mut Rng) -> Result<ComplexMatrix, GenError> {
    let g = ginibre(n, rng)?;
    let mut columns: Vec<ComplexVector> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &columns {
                let coeff = inner_unchecked(v.as_slice(), q.as_slice());
                v = v.axpy(-coeff, q);
            }
        }
        let norm = v.norm();
        if norm < 1e-12 {
            return Err(GenError::Linalg(LinalgError::NoConvergence {
                routine: "random_unitary",
            }));
        }
        columns.push(v.scale(Complex64::new(1.0 / norm, 0.0)));
    }
    let mut u = ComplexMatrix::zeros(n);
    for (j, col) in columns.iter().enumerate() {
        u.set_column(j, col);
    }
    Ok(u)
}

fn check_range(lo: f64, hi: f64) -> Result<(), GenError> {
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(GenError::BadRange { lo, hi });
    }
    Ok(())
}

/// Spectral form `U · diag(λ) · U*` with `λ_i` uniform in `[lo, hi]`.
pub fn random_psd_form(
    n: usize,
    lo: f64,
    hi: f64,
    rng: &mut Rng,
) -> Result<SpectralForm, GenError> {
    check_range(lo, hi)?;
    let vectors = random_unitary(n, rng)?;
    let values = (0..n).map(|_| rng.uniform(lo, hi)).collect();
    Ok(SpectralForm { values, vectors })
}

/// Hermitian positive definite matrix with eigenvalues uniform in `[lo, hi]`.
pub fn random_psd(n: usize, lo: f64, hi: f64, rng: &mut Rng) -> Result<ComplexMatrix, GenError> {
    Ok(random_psd_form(n, lo, hi, rng)?.to_matrix())
}

/// `A = WΣV*` together with its moduli in factored form.
#[derive(Debug, Clone)]
pub struct ModuliFactors {
    pub a: ComplexMatrix,
    /// `|A| = VΣV*`.
    pub modulus: SpectralForm,
    /// `|A*| = WΣW*`.
    pub co_modulus: SpectralForm,
}

impl ModuliFactors {
    /// Builds `A = W·diag(σ)·V*` from explicit factors.
    pub fn from_factors(w: &ComplexMatrix, sigma: &[f64], v: &ComplexMatrix) -> Self {
        let n = sigma.len();
        let mut ws = w.clone();
        for j in 0..n {
            for i in 0..n {
                ws[(i, j)] *= sigma[j];
            }
        }
        let a = &ws * &v.adjoint();
        Self {
            a,
            modulus: SpectralForm {
                values: sigma.to_vec(),
                vectors: v.clone(),
            },
            co_modulus: SpectralForm {
                values: sigma.to_vec(),
                vectors: w.clone(),
            },
        }
    }

    pub fn random(n: usize, rng: &mut Rng) -> Result<Self, GenError> {
        let w = random_unitary(n, rng)?;
        let v = random_unitary(n, rng)?;
        let (lo, hi) = SPECTRUM_RANGE;
        let sigma: Vec<f64> = (0..n).map(|_| rng.uniform(lo, hi)).collect();
        Ok(Self::from_factors(&w, &sigma, &v))
    }
}

/// Random `A` with prescribed singular values in `[0.1, 2]`; returns
/// `(A, |A|, |A*|)`.
pub fn make_a_with_moduli(
    n: usize,
    rng: &mut Rng,
) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix), GenError> {
    let f = ModuliFactors::random(n, rng)?;
    Ok((f.a, f.modulus.to_matrix(), f.co_modulus.to_matrix()))
}

/// `M^{-1/2} · H · M^{1/2}`, which satisfies `MB = B*M` whenever `H` is
/// Hermitian.
pub fn intertwined_from(
    weight: &SpectralForm,
    h: &ComplexMatrix,
) -> Result<ComplexMatrix, GenError> {
    let min = weight.values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < MIN_WEIGHT_EIGENVALUE {
        return Err(GenError::Linalg(LinalgError::NotInvertible {
            min_eigenvalue: min,
        }));
    }
    let root = weight.map(f64::sqrt);
    let inv_root = weight.map(|t| 1.0 / t.sqrt());
    Ok(&(&inv_root * h) * &root)
}

/// Random operator intertwined with the PSD weight `M`.
pub fn intertwined_operator(m: &ComplexMatrix, rng: &mut Rng) -> Result<ComplexMatrix, GenError> {
    let weight = SpectralForm::hermitian(m)?;
    let h = random_hermitian(m.n(), rng)?;
    intertwined_from(&weight, &h)
}

pub fn random_unit_vector(n: usize, rng: &mut Rng) -> Result<ComplexVector, GenError> {
    check_dim(n)?;
    loop {
        let v = ComplexVector((0..n).map(|_| rng.complex_normal()).collect());
        let norm = v.norm();
        if norm > 1e-150 {
            return Ok(v.scale(Complex64::new(1.0 / norm, 0.0)));
        }
    }
}
