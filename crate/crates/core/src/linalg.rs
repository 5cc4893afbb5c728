//! Dense linear-algebra helpers and the Hermitian eigensystem used for all
//! propagation.
//!
//! Real symmetric tridiagonal matrices (every Dicke-sector Hamiltonian built
//! from `Jz`, `Jz^2` and `Jx`) are routed to LAPACK `dstevd`, which is two
//! orders of magnitude faster than a dense Hermitian solve at dimension ~1000.
//! Everything else goes through `zheev` via `ndarray-linalg`.

use std::os::raw::{c_char, c_int};

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ShapeBuilder};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Conjugate transpose.
pub fn dagger(a: &ArrayView2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

pub fn max_abs(a: &ArrayView2<C64>) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &ArrayView2<C64>, b: &ArrayView2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub fn hermiticity_error(a: &ArrayView2<C64>) -> f64 {
    let n = a.nrows();
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            err = err.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    err
}

pub fn commutator(a: &ArrayView2<C64>, b: &ArrayView2<C64>) -> Array2<C64> {
    a.dot(b) - b.dot(a)
}

pub fn anticommutator(a: &ArrayView2<C64>, b: &ArrayView2<C64>) -> Array2<C64> {
    a.dot(b) + b.dot(a)
}

/// `<a|b>`, antilinear in the first argument.
pub fn inner(a: &ArrayView1<C64>, b: &ArrayView1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &ArrayView1<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Real part of the trace inner product `tr(a^dagger b)`.
pub fn trace_inner(a: &ArrayView2<C64>, b: &ArrayView2<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn frobenius(a: &ArrayView2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn expectation(op: &ArrayView2<C64>, psi: &ArrayView1<C64>) -> f64 {
    inner(psi, &op.dot(psi).view()).re
}

/// `<A^2> - <A>^2` for a Hermitian `A`, computed as `|A psi|^2 - <A>^2`.
pub fn variance(op: &ArrayView2<C64>, psi: &ArrayView1<C64>) -> f64 {
    let a_psi = op.dot(psi);
    let mean = inner(psi, &a_psi.view()).re;
    norm(&a_psi.view()).powi(2) - mean * mean
}

/// If `a` is real symmetric tridiagonal, return its diagonal and
/// sub-diagonal.
pub fn as_real_tridiagonal(a: &ArrayView2<C64>) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = a.nrows();
    for ((i, j), z) in a.indexed_iter() {
        if z.im != 0.0 {
            return None;
        }
        if i.abs_diff(j) > 1 && z.re != 0.0 {
            return None;
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        if a[(i + 1, i)].re != a[(i, i + 1)].re {
            return None;
        }
        off.push(a[(i + 1, i)].re);
    }
    Some((diag, off))
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix (LAPACK
/// `dstevr`). Eigenvalues ascending, eigenvectors in columns.
///
/// `dstevd` is not used: the divide-and-conquer build shipped with common
/// OpenBLAS packages returns non-orthogonal vectors above a few hundred rows.
pub fn tridiagonal_eigh(diag: &[f64], offdiag: &[f64]) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    if offdiag.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: offdiag.len(),
        });
    }
    let mut d = diag.to_vec();
    // Length n is required even though only n-1 entries are read.
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut w = vec![0.0f64; n];
    let mut z = vec![0.0f64; n * n];
    let mut isuppz = vec![0 as c_int; 2 * n];
    let nn = n as c_int;
    let lwork = (20 * n) as c_int;
    let liwork = (10 * n) as c_int;
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0 as c_int; liwork as usize];
    let (mut found, mut info): (c_int, c_int) = (0, 0);
    let (jobz, range) = (b'V' as c_char, b'A' as c_char);
    // SAFETY: all buffers are sized per the dstevr documentation and outlive
    // the call; LAPACK reads/writes only within those bounds.
    unsafe {
        lapack_sys::dstevr_(
            &jobz,
            &range,
            &nn,
            d.as_mut_ptr(),
            e.as_mut_ptr(),
            &0.0,
            &0.0,
            &0,
            &0,
            &0.0,
            &mut found,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &nn,
            isuppz.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 || found != nn {
        return Err(Error::Linalg(format!(
            "dstevr returned info = {info}, {found} of {n} eigenpairs"
        )));
    }
    let vecs = Array2::from_shape_vec((n, n).f(), z).map_err(|e| Error::Linalg(e.to_string()))?;
    Ok((Array1::from(w), vecs))
}

/// Spectral decomposition `H = V diag(lambda) V^dagger` of a Hermitian
/// matrix. Built once per Hamiltonian; every propagation afterwards costs two
/// matrix-vector products.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<C64>,
}

impl Eigensystem {
    /// Decompose a matrix assumed Hermitian (only the lower triangle is read
    /// on the dense path).
    pub fn of_matrix(h: &ArrayView2<C64>) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::DimensionMismatch {
                expected: h.nrows(),
                found: h.ncols(),
            });
        }
        if let Some((d, e)) = as_real_tridiagonal(h) {
            let (vals, vecs) = tridiagonal_eigh(&d, &e)?;
            return Ok(Self {
                eigenvalues: vals,
                eigenvectors: vecs.mapv(c),
            });
        }
        // Column-major input: on row-major storage LAPACK sees the transpose,
        // which for complex H is conj(H) and returns conjugated vectors.
        let mut a = Array2::<C64>::zeros((h.nrows(), h.ncols()).f());
        a.assign(h);
        let (vals, vecs) = a
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Linalg(e.to_string()))?;
        Ok(Self {
            eigenvalues: vals,
            eigenvectors: vecs,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Array2<C64> {
        &self.eigenvectors
    }

    /// Coefficients of `psi` in the eigenbasis, `V^dagger psi`.
    pub fn to_eigenbasis(&self, psi: &ArrayView1<C64>) -> Array1<C64> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = Array1::zeros(n);
        for k in 0..n {
            let col = v.column(k);
            out[k] = inner(&col, psi);
        }
        out
    }

    /// `exp(-i H t) psi`.
    pub fn evolve(&self, psi: &ArrayView1<C64>, t: f64) -> Result<Array1<C64>> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.len(),
            });
        }
        Ok(self.evolve_coefficients(&self.to_eigenbasis(psi), t))
    }

    /// Propagate from precomputed eigenbasis coefficients.
    pub fn evolve_coefficients(&self, coeffs: &Array1<C64>, t: f64) -> Array1<C64> {
        let phased: Array1<C64> = coeffs
            .iter()
            .zip(self.eigenvalues.iter())
            .map(|(ck, &lk)| ck * C64::from_polar(1.0, -lk * t))
            .collect();
        self.eigenvectors.dot(&phased)
    }

    /// The full propagator matrix `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> Array2<C64> {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, mut col) in scaled.columns_mut().into_iter().enumerate() {
            let phase = C64::from_polar(1.0, -self.eigenvalues[k] * t);
            col.mapv_inplace(|z| z * phase);
        }
        scaled.dot(&dagger(&v.view()))
    }

    /// `max |H - V Lambda V^dagger|`.
    pub fn reconstruction_error(&self, h: &ArrayView2<C64>) -> f64 {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, mut col) in scaled.columns_mut().into_iter().enumerate() {
            let l = self.eigenvalues[k];
            col.mapv_inplace(|z| z * l);
        }
        max_abs_diff(h, &scaled.dot(&dagger(&v.view())).view())
    }

    /// `max |V^dagger V - 1|`.
    pub fn unitarity_error(&self) -> f64 {
        let v = &self.eigenvectors;
        let g = dagger(&v.view()).dot(v);
        let id = Array2::from_diag(&Array1::from_elem(self.dim(), c(1.0)));
        max_abs_diff(&g.view(), &id.view())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton iteration on the
/// Legendre polynomial, ascending nodes).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n <= 1 {
        return (vec![0.0; n], vec![2.0; n]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn large_tridiagonal_vectors_orthonormal() {
        // Equally spaced spectrum, as for f Jz + d Jx at j = 400.
        let n = 801;
        let j = 400.0;
        let d: Vec<f64> = (0..n).map(|k| 2.0 * (k as f64 - j)).collect();
        let e: Vec<f64> = (1..n)
            .map(|k| {
                let m = k as f64 - j;
                (j * (j + 1.0) - m * (m - 1.0)).sqrt() / 2.0
            })
            .collect();
        let (vals, v) = tridiagonal_eigh(&d, &e).unwrap();
        let mut err = 0.0f64;
        for a in 0..n {
            for b in 0..=a {
                let s: f64 = v
                    .column(a)
                    .iter()
                    .zip(v.column(b))
                    .map(|(x, y)| x * y)
                    .sum();
                err = err.max((s - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        assert!(err < 1e-10, "{err}");
        let r = 5.0f64.sqrt();
        assert!((vals[0] + j * r).abs() < 1e-9 && (vals[n - 1] - j * r).abs() < 1e-9);
    }

    #[test]
    fn tridiagonal_path_matches_dense_path() {
        let d = [0.3, -1.2, 2.0, 0.7];
        let e = [0.5, -0.25, 1.5];
        let mut h = Array2::<C64>::zeros((4, 4));
        for i in 0..4 {
            h[(i, i)] = c(d[i]);
        }
        for i in 0..3 {
            h[(i + 1, i)] = c(e[i]);
            h[(i, i + 1)] = c(e[i]);
        }
        let fast = Eigensystem::of_matrix(&h.view()).unwrap();
        let (dense_vals, _) = h.clone().eigh(UPLO::Lower).unwrap();
        for (a, b) in fast.eigenvalues().iter().zip(dense_vals.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(fast.reconstruction_error(&h.view()) < 1e-12);
        assert!(fast.unitarity_error() < 1e-12);
    }

    #[test]
    fn complex_hermitian_goes_dense() {
        let h = array![[c(1.0), C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), c(-1.0)]];
        assert!(as_real_tridiagonal(&h.view()).is_none());
        let es = Eigensystem::of_matrix(&h.view()).unwrap();
        let s2 = 2f64.sqrt();
        assert!((es.eigenvalues()[0] + s2).abs() < 1e-12);
        assert!((es.eigenvalues()[1] - s2).abs() < 1e-12);
        assert!(es.reconstruction_error(&h.view()) < 1e-12);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // exact up to degree 13
        let i12: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((i12 - 2.0 / 13.0).abs() < 1e-14);
        let (x1, w1) = gauss_legendre(1);
        assert_eq!(x1, vec![0.0]);
        assert!((w1[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn evolve_checks_dimension() {
        let h = Array2::from_diag(&array![c(1.0), c(2.0)]);
        let es = Eigensystem::of_matrix(&h.view()).unwrap();
        let psi = array![c(1.0), c(0.0), c(0.0)];
        assert!(matches!(
            es.evolve(&psi.view(), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
