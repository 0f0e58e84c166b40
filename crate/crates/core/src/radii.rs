//! Operator norm, spectral radius, numerical radius and the Aluthge transform.

use serde::{Deserialize, Serialize};

use crate::linalg::{
    cartesian, general_eigenvalues, hermitian_eigenvalues_unchecked, jacobi_eigenvalues, polar,
    ComplexMatrix, EigenScratch, LinalgError, SpectralForm,
};

/// Coarse θ grid over `[0, 2π)`; only half of it needs eigen-solves because
/// `λ_max(H_{θ+π}) = −λ_min(H_θ)`.
pub const THETA_GRID: usize = 360;
/// Local grid maxima refined by golden-section search.
pub const REFINED_PEAKS: usize = 5;
pub const THETA_RESOLUTION: f64 = 1e-10;
pub const MIN_TOL: f64 = 1e-12;

/// A value with a bracketing interval and the method that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub value: f64,
    pub method: String,
    pub lo: f64,
    pub hi: f64,
}

impl RadiusEstimate {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    let gram = (&a.adjoint() * a).hermitian_part();
    let values = hermitian_eigenvalues_unchecked(&gram)?;
    Ok(values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(general_eigenvalues(a)?
        .into_iter()
        .fold(0.0f64, |acc, z| acc.max(z.norm())))
}

/// `‖A^{2^k}‖^{1/2^k}` by repeated squaring with Frobenius renormalization.
pub fn spectral_radius_gelfand(a: &ComplexMatrix, doublings: u32) -> Result<f64, LinalgError> {
    if !(1..=60).contains(&doublings) {
        return Err(LinalgError::BadParameter(format!(
            "doublings {doublings} outside [1, 60]"
        )));
    }
    // A^{2^k} = exp(log_scale) · m
    let mut m = a.clone();
    let mut log_scale = 0.0f64;
    for _ in 0..doublings {
        let f = m.frobenius_norm();
        if f == 0.0 {
            return Ok(0.0);
        }
        if !f.is_finite() {
            return Err(LinalgError::Overflow {
                routine: "spectral_radius_gelfand",
            });
        }
        m = m.scale_real(1.0 / f);
        log_scale = 2.0 * (log_scale + f.ln());
        m = &m * &m;
    }
    if !m.is_finite() || !log_scale.is_finite() {
        return Err(LinalgError::Overflow {
            routine: "spectral_radius_gelfand",
        });
    }
    let norm = operator_norm(&m)?;
    if norm == 0.0 {
        return Ok(0.0);
    }
    let exponent = (log_scale + norm.ln()) / 2f64.powi(doublings as i32);
    Ok(exponent.exp())
}

/// Numerical radius `w(A) = max_θ λ_max(cos θ·P − sin θ·Q)` with `A = P + iQ`.
///
/// A 360-point θ grid locates candidate peaks; the best five are refined by
/// golden-section search. Peaks whose grid value plus the Lipschitz allowance
/// cannot beat the incumbent are skipped. The interval is
/// `[value, value + ‖A‖·δ]` where `δ` is the final bracket width.
pub fn numerical_radius(a: &ComplexMatrix, tol: f64) -> Result<RadiusEstimate, LinalgError> {
    if tol.is_nan() || tol < MIN_TOL {
        return Err(LinalgError::BadParameter(format!(
            "tolerance {tol} below {MIN_TOL}"
        )));
    }
    let method = "theta-grid+golden".to_string();
    let lipschitz = operator_norm(a)?;
    if lipschitz == 0.0 {
        return Ok(RadiusEstimate {
            value: 0.0,
            method,
            lo: 0.0,
            hi: 0.0,
        });
    }
    let mut scan = ThetaScan::new(a);
    let half = THETA_GRID / 2;
    let step = std::f64::consts::TAU / THETA_GRID as f64;
    let mut grid = vec![0.0; THETA_GRID];
    for k in 0..half {
        let (lo, hi) = scan.extremes(k as f64 * step)?;
        grid[k] = hi;
        grid[k + half] = -lo;
    }

    let mut peaks: Vec<usize> = (0..THETA_GRID)
        .filter(|&k| {
            let prev = grid[(k + THETA_GRID - 1) % THETA_GRID];
            let next = grid[(k + 1) % THETA_GRID];
            grid[k] >= prev && grid[k] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| grid[j].total_cmp(&grid[i]).then(i.cmp(&j)));
    peaks.truncate(REFINED_PEAKS);

    let delta = THETA_RESOLUTION.min(tol / lipschitz);
    let mut best = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut bracket = 0.0f64;
    for &k in &peaks {
        if grid[k] + lipschitz * step < best {
            continue;
        }
        let centre = k as f64 * step;
        let (found, width) = golden_max(&mut scan, centre - step, centre + step, delta)?;
        best = best.max(found);
        bracket = bracket.max(width);
    }
    let value = best.max(0.0);
    Ok(RadiusEstimate {
        value,
        method,
        lo: value,
        hi: value + lipschitz * bracket,
    })
}

/// Brute-force numerical radius over a uniform θ grid using Jacobi
/// eigenvalues; always a lower bound of `w(A)`.
pub fn numerical_radius_grid_oracle(a: &ComplexMatrix, points: usize) -> Result<f64, LinalgError> {
    if points < 4 {
        return Err(LinalgError::BadParameter(format!(
            "grid of {points} points, need at least 4"
        )));
    }
    let parts = cartesian(a);
    let mut best = f64::NEG_INFINITY;
    // An even grid contains θ + π with every θ, and H_{θ+π} = −H_θ.
    let paired = points.is_multiple_of(2);
    let scanned = if paired { points / 2 } else { points };
    for k in 0..scanned {
        let theta = std::f64::consts::TAU * k as f64 / points as f64;
        let h = &parts.real_part.scale_real(theta.cos()) - &parts.imag_part.scale_real(theta.sin());
        let values = jacobi_eigenvalues(&h)?;
        best = best.max(values[values.len() - 1]);
        if paired {
            best = best.max(-values[0]);
        }
    }
    Ok(best.max(0.0))
}

/// `|A|^{1/2} · U · |A|^{1/2}` from the polar decomposition `A = U|A|`.
pub fn aluthge(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let parts = polar(a)?;
    Ok(aluthge_from(&parts.unitary, &parts.spectral))
}

pub(crate) fn aluthge_from(unitary: &ComplexMatrix, modulus: &SpectralForm) -> ComplexMatrix {
    let root = modulus.map(|t| t.max(0.0).sqrt());
    &(&root * unitary) * &root
}

struct ThetaScan {
    p: ComplexMatrix,
    q: ComplexMatrix,
    scratch: EigenScratch,
}

impl ThetaScan {
    fn new(a: &ComplexMatrix) -> Self {
        let parts = cartesian(a);
        Self {
            p: parts.real_part,
            q: parts.imag_part,
            scratch: EigenScratch::new(a.n()),
        }
    }

    /// `(λ_min, λ_max)` of `H_θ = cos θ·P − sin θ·Q`.
    fn extremes(&mut self, theta: f64) -> Result<(f64, f64), LinalgError> {
        let (s, c) = theta.sin_cos();
        let cells = self.p.as_slice().iter().zip(self.q.as_slice());
        for (h, (p, q)) in self.scratch.a.iter_mut().zip(cells) {
            *h = p * c - q * s;
        }
        self.scratch.extremes()
    }

    fn top(&mut self, theta: f64) -> Result<f64, LinalgError> {
        Ok(self.extremes(theta)?.1)
    }
}

/// Golden-section maximization of `λ_max(H_θ)` on `[a, b]` down to width
/// `delta`; returns the best value evaluated and the final bracket width.
fn golden_max(
    scan: &mut ThetaScan,
    mut a: f64,
    mut b: f64,
    delta: f64,
) -> Result<(f64, f64), LinalgError> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = scan.top(x1)?;
    let mut f2 = scan.top(x2)?;
    let mut best = f1.max(f2);
    while b - a > delta {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = scan.top(x2)?;
            best = best.max(f2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = scan.top(x1)?;
            best = best.max(f1);
        }
    }
    Ok((best, b - a))
}
