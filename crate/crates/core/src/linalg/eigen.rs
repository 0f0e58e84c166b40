//! Eigenvalue routines.
//!
//! * [`hermitian_eigen`] is cyclic complex Jacobi; it returns eigenvectors and
//!   is the reference path for the functional calculus.
//! * [`hermitian_eigenvalues`] reduces to real tridiagonal form with
//!   Householder reflections and runs implicit QL. It is values only and is
//!   used in the hot θ-scan of the numerical radius.
//! * [`general_eigenvalues`] is Hessenberg reduction followed by shifted
//!   complex QR.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

const JACOBI_SWEEP_CAP: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-13;
const HERMITIAN_PRE_TOL: f64 = 1e-8;
const QR_DEFLATION_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues in ascending order with the matching unitary eigenvector
/// matrix (eigenvectors are columns).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `‖H·V − V·diag(values)‖_F`.
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        let hv = h * &self.vectors;
        let n = h.n();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (hv[(i, j)] - self.vectors[(i, j)] * self.values[j]).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖V*V − I‖_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        let vv = &self.vectors.adjoint() * &self.vectors;
        (&vv - &ComplexMatrix::identity(self.vectors.n())).frobenius_norm()
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<(), LinalgError> {
    if !h.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_PRE_TOL * h.frobenius_norm().max(1.0) {
        return Err(LinalgError::NotHermitian { defect });
    }
    Ok(())
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    check_hermitian(h)?;
    let n = h.n();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = JACOBI_OFF_TOL * scale;

    let mut converged = off_diagonal_mass(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_SWEEP_CAP {
            return Err(LinalgError::NoConvergence {
                routine: "hermitian_eigen",
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, Some(&mut v), p, q);
            }
        }
        converged = off_diagonal_mass(&a) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates into `v`.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let g = a[(p, q)];
    let modulus = g.norm();
    if modulus == 0.0 {
        return;
    }
    let n = a.n();
    let phase = g / modulus;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * modulus);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let j00 = Complex64::new(c, 0.0);
    let j01 = Complex64::new(s, 0.0);
    let j10 = -phase.conj() * s;
    let j11 = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j00 + akq * j10;
        a[(k, q)] = akp * j01 + akq * j11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j00.conj() * apk + j10.conj() * aqk;
        a[(q, k)] = j01.conj() * apk + j11.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * j00 + vkq * j10;
            v[(k, q)] = vkp * j01 + vkq * j11;
        }
    }
}

/// Jacobi eigenvalues without accumulating vectors, ascending. Kept separate
/// from the tridiagonal path so it can serve as an independent oracle.
pub(crate) fn jacobi_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let n = h.n();
    let mut a = h.hermitian_part();
    let target = JACOBI_OFF_TOL * a.frobenius_norm();
    let mut sweeps = 0;
    while off_diagonal_mass(&a) > target {
        if sweeps == JACOBI_SWEEP_CAP {
            return Err(LinalgError::NoConvergence {
                routine: "jacobi_eigenvalues",
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, None, p, q);
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalues of a Hermitian matrix in ascending order, without vectors.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    check_hermitian(h)?;
    hermitian_eigenvalues_unchecked(&h.hermitian_part())
}

/// Values-only path for a matrix already known to be exactly Hermitian.
pub(crate) fn hermitian_eigenvalues_unchecked(h: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let mut scratch = EigenScratch::new(h.n());
    scratch.a.copy_from_slice(h.as_slice());
    scratch.solve()?;
    let mut d = scratch.d;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Reusable buffers for repeated values-only solves of one size.
pub(crate) struct EigenScratch {
    n: usize,
    /// Row-major input; overwritten by the solve.
    pub(crate) a: Vec<Complex64>,
    d: Vec<f64>,
    e: Vec<f64>,
    v: Vec<Complex64>,
    w: Vec<Complex64>,
}

impl EigenScratch {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            n,
            a: vec![ZERO; n * n],
            d: vec![0.0; n],
            e: vec![0.0; n],
            v: vec![ZERO; n],
            w: vec![ZERO; n],
        }
    }

    /// `(λ_min, λ_max)` of the Hermitian matrix held in `a`.
    pub(crate) fn extremes(&mut self) -> Result<(f64, f64), LinalgError> {
        self.solve()?;
        Ok(self
            .d
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            }))
    }

    fn solve(&mut self) -> Result<(), LinalgError> {
        self.tridiagonalize();
        tqli(&mut self.d, &mut self.e)
    }

    /// Householder reduction to tridiagonal form: real diagonal in `d`, moduli
    /// of the subdiagonal in `e` (`e[k]` couples `k` and `k + 1`).
    fn tridiagonalize(&mut self) {
        let n = self.n;
        let Self { a, d, e, v, w, .. } = self;
        e.iter_mut().for_each(|x| *x = 0.0);
        for k in 0..n.saturating_sub(2) {
            let s = k + 1;
            let sub_rest: f64 = ((k + 2)..n).map(|i| a[i * n + k].norm_sqr()).sum();
            let x0 = a[s * n + k];
            let x0_abs = x0.norm_sqr().sqrt();
            if sub_rest == 0.0 {
                e[k] = x0_abs;
                continue;
            }
            let norm_x = (sub_rest + x0.norm_sqr()).sqrt();
            let phase = if x0_abs == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                x0 / x0_abs
            };
            let alpha = -phase * norm_x;
            for i in s..n {
                v[i] = a[i * n + k];
            }
            v[s] -= alpha;
            let vnorm = v[s..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in v[s..].iter_mut() {
                *z /= vnorm;
            }
            // p = H v on the trailing block, stored in w.
            for i in s..n {
                let row = &a[i * n + s..i * n + n];
                w[i] = row.iter().zip(&v[s..]).map(|(x, y)| x * y).sum();
            }
            let kk: f64 = (s..n).map(|i| (v[i].conj() * w[i]).re).sum();
            for i in s..n {
                w[i] = (w[i] - v[i] * kk) * 2.0;
            }
            for i in s..n {
                let (vi, wi) = (v[i], w[i]);
                let row = &mut a[i * n + s..i * n + n];
                for ((x, vj), wj) in row.iter_mut().zip(&v[s..]).zip(&w[s..]) {
                    *x -= vi * wj.conj() + wi * vj.conj();
                }
            }
            e[k] = norm_x;
        }
        if n >= 2 {
            e[n - 2] = a[(n - 1) * n + (n - 2)].norm_sqr().sqrt();
        }
        for (i, x) in d.iter_mut().enumerate() {
            *x = a[i * n + i].re;
        }
    }
}

/// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
/// matrix. Eigenvalues overwrite `d`.
fn tqli(d: &mut [f64], e: &mut [f64]) -> Result<(), LinalgError> {
    let n = d.len();
    if n < 2 {
        return Ok(());
    }
    let scale = d.iter().chain(e.iter()).fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(());
    }
    d.iter_mut().chain(e.iter_mut()).for_each(|x| *x /= scale);
    let result = tqli_scaled(d, e);
    d.iter_mut().for_each(|x| *x *= scale);
    result
}

fn tqli_scaled(d: &mut [f64], e: &mut [f64]) -> Result<(), LinalgError> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(LinalgError::NoConvergence {
                    routine: "hermitian_eigenvalues",
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// All eigenvalues of a general square matrix, with multiplicity.
pub fn general_eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.n();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(vec![ZERO; n]);
    }
    let mut h = hessenberg(a);
    let small = QR_DEFLATION_TOL * scale;
    let cap = 100 * n * n;
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iterations = 0;
    let mut since_deflation = 0;
    loop {
        if hi == 0 {
            eigs.push(h[(0, 0)]);
            break;
        }
        let mut l = hi;
        while l > 0 && h[(l, l - 1)].norm() > small {
            l -= 1;
        }
        if l > 0 {
            h[(l, l - 1)] = ZERO;
        }
        if l == hi {
            eigs.push(h[(hi, hi)]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if l + 1 == hi {
            let (e1, e2) = eig2(h[(l, l)], h[(l, hi)], h[(hi, l)], h[(hi, hi)]);
            eigs.push(e1);
            eigs.push(e2);
            if l == 0 {
                break;
            }
            hi = l - 1;
            since_deflation = 0;
            continue;
        }
        if iterations == cap {
            return Err(LinalgError::NoConvergence {
                routine: "general_eigenvalues",
            });
        }
        iterations += 1;
        since_deflation += 1;
        let shift = if since_deflation % 11 == 10 {
            let sub = h[(hi, hi - 1)].norm() + h[(hi - 1, hi - 2)].norm();
            h[(hi, hi)] + Complex64::new(0.75 * sub, 0.3 * sub)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, l, hi, shift);
    }
    Ok(eigs)
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    (half_tr + disc, half_tr - disc)
}

fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let (e1, e2) = eig2(
        h[(hi - 1, hi - 1)],
        h[(hi - 1, hi)],
        h[(hi, hi - 1)],
        h[(hi, hi)],
    );
    let corner = h[(hi, hi)];
    if (e1 - corner).norm() <= (e2 - corner).norm() {
        e1
    } else {
        e2
    }
}

/// One explicit shifted QR step on the active block `l..=hi` using Givens
/// rotations.
fn qr_step(h: &mut ComplexMatrix, l: usize, hi: usize, shift: Complex64) {
    for k in l..=hi {
        h[(k, k)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - l);
    for k in l..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), ZERO)
        } else {
            (a / r, b / r)
        };
        // rows k, k+1 <- [[c̄, s̄], [-s, c]] · rows
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c.conj() * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        h[(k + 1, k)] = ZERO;
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = l + offset;
        let last = (k + 2).min(hi);
        for i in l..=last {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s;
            h[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
    }
    for k in l..=hi {
        h[(k, k)] += shift;
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.n();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let sub_rest: f64 = ((k + 2)..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if sub_rest == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let norm_x = (sub_rest + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        let mut v = vec![ZERO; n];
        for i in (k + 1)..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2vv*) H
        for j in 0..n {
            let dot: Complex64 = ((k + 1)..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            for i in (k + 1)..n {
                h[(i, j)] -= v[i] * dot * 2.0;
            }
        }
        // H <- H (I - 2vv*)
        for i in 0..n {
            let dot: Complex64 = ((k + 1)..n).map(|j| h[(i, j)] * v[j]).sum();
            for j in (k + 1)..n {
                h[(i, j)] -= dot * v[j].conj() * 2.0;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}
