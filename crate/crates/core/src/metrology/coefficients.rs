//! Expansion of the generator on the operator basis
//! `{Jx, Jy, Jz, Jx^2-Jy^2, Jy^2-Jz^2, {Jx,Jy}, {Jy,Jz}, {Jz,Jx}}`.

use ndarray::{Array1, Array2};
use ndarray_linalg::Solve;
use serde::{Deserialize, Serialize};

use super::{Method, QfiResult};
use crate::error::{domain, Error, Result};
use crate::linalg::{c, trace_inner, C64};
use crate::model::{EffectiveModelParams, DF_DDELTA};
use crate::spin::{
    build_spin_operators, initial_probe_state, BasisLabel, HermitianOperator, LadderAction,
    SpinQuantum,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCoefficients {
    pub c_x: f64,
    pub c_y: f64,
    pub c_z: f64,
    /// Coefficient of `Jx^2 - Jy^2`.
    pub c_xx: f64,
    /// Coefficient of `Jy^2 - Jz^2`.
    pub c_yy: f64,
    pub c_xy: f64,
    pub c_yz: f64,
    pub c_zx: f64,
}

impl GeneratorCoefficients {
    pub fn linear(c_x: f64, c_y: f64, c_z: f64) -> Self {
        Self {
            c_x,
            c_y,
            c_z,
            ..Self::default()
        }
    }

    /// `[c_x, c_y, c_z, c_xx, c_yy, c_xy, c_yz, c_zx]`.
    pub fn to_array(&self) -> [f64; 8] {
        [
            self.c_x, self.c_y, self.c_z, self.c_xx, self.c_yy, self.c_xy, self.c_yz, self.c_zx,
        ]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        Self {
            c_x: a[0],
            c_y: a[1],
            c_z: a[2],
            c_xx: a[3],
            c_yy: a[4],
            c_xy: a[5],
            c_yz: a[6],
            c_zx: a[7],
        }
    }

    /// `[c_xx, c_yy, c_xy, c_yz, c_zx]`.
    pub fn quadratic(&self) -> [f64; 5] {
        [self.c_xx, self.c_yy, self.c_xy, self.c_yz, self.c_zx]
    }

    pub fn with_quadratic(mut self, q: [f64; 5]) -> Self {
        [self.c_xx, self.c_yy, self.c_xy, self.c_yz, self.c_zx] = q;
        self
    }

    pub fn is_linear(&self) -> bool {
        self.quadratic().iter().all(|&q| q == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }
}

/// Linear-model coefficients
/// `C_x = (d f / r^3) f' [sin(rt) - rt]`,
/// `C_y = (d / r^2) f' [cos(rt) - 1]`,
/// `C_z = -(f' / r^3) [d^2 sin(rt) + f^2 r t]`, with `f' = df/dDelta = 2`.
pub fn linear_coeffs(p: &EffectiveModelParams) -> Result<GeneratorCoefficients> {
    p.validate()?;
    let (f, d, t) = (p.f, p.d, p.t);
    if t == 0.0 {
        return Ok(GeneratorCoefficients::default());
    }
    let r = p.r();
    if r == 0.0 {
        return Err(domain(
            "f = d = 0 makes r = 0; the generator formulas are singular there",
        ));
    }
    let fp = DF_DDELTA;
    let (s, co) = ((r * t).sin(), (r * t).cos());
    Ok(GeneratorCoefficients::linear(
        d * f / r.powi(3) * fp * (s - r * t),
        d / (r * r) * fp * (co - 1.0),
        -fp / r.powi(3) * (d * d * s + f * f * r * t),
    ))
}

/// Constants entering the closed-form first-order nonlinear coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonlinearIntermediates {
    pub r: f64,
    pub eta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
}

pub fn nonlinear_intermediates(f: f64, d: f64) -> NonlinearIntermediates {
    let (f2, d2) = (f * f, d * d);
    let eta = (f2 * f2 + d2 * d2 + 14.0 * f2 * d2).sqrt();
    NonlinearIntermediates {
        r: f.hypot(d),
        eta,
        lambda1: ((3.0 * f2 + 3.0 * d2 - eta) / 2.0).sqrt(),
        lambda2: ((3.0 * f2 + 3.0 * d2 + eta) / 2.0).sqrt(),
        a: [
            d2 - 4.0 * f2,
            f2 - d2,
            2.0 * f2 * f2 + d2 * d2 - 6.0 * f2 * d2,
        ],
        b: [
            (f2 - d2) * (4.0 * f2 + d2),
            f2 * f2 - d2 * d2 + 6.0 * f2 * d2,
            2.0 * f2 * f2 * f2 + d2 * d2 * d2 + 8.0 * f2 * f2 * d2 + f2 * d2 * d2,
        ],
    }
}

/// Closed-form first-order nonlinear coefficients: the linear part plus the
/// five quadratic coefficients written in terms of the frequencies
/// `r, Lambda_1, Lambda_2` and the `A_i, B_i` constants.
pub fn nonlinear_coeffs(p: &EffectiveModelParams) -> Result<GeneratorCoefficients> {
    let (f, d, e, t) = (p.f, p.d, p.e, p.t);
    if f == 0.0 || d == 0.0 {
        return Err(domain(
            "closed-form nonlinear coefficients carry 1/f, 1/f^2 and 1/(f^2 d) prefactors; \
             f and d must be nonzero",
        ));
    }
    let lin = linear_coeffs(p)?;
    let k = nonlinear_intermediates(f, d);
    let (r, eta, l1, l2) = (k.r, k.eta, k.lambda1, k.lambda2);
    let [a1, a2, a3] = k.a;
    let [b1, b2, b3] = k.b;
    let fp = DF_DDELTA;
    let cm = |x: f64| (x * t).cos() - 1.0;
    let sm = |x: f64| (x * t).sin() - x * t;

    let c_xy = -e / (6.0 * f * f)
        * fp
        * (2.0 * a1 / (r * r) * cm(r)
            - (a1 - b1 / eta) / (l1 * l1) * cm(l1)
            - (a1 + b1 / eta) / (l2 * l2) * cm(l2));
    let c_yz = e / (3.0 * f * d)
        * fp
        * (a2 / (r * r) * cm(r)
            - (a2 + b2 / eta) / (2.0 * l1.powi(3)) * cm(l1)
            - (a2 - b2 / eta) / (2.0 * l2.powi(3)) * cm(l2));
    let c_zx = e / (3.0 * f * f * d)
        * fp
        * ((a3 + f * f * d * d) / r.powi(3) * sm(r)
            - (a3 + b3 / eta) / (2.0 * l1.powi(3)) * sm(l1)
            - (a3 - b3 / eta) / (2.0 * l2.powi(3)) * sm(l2));
    let c_xx = -e / (6.0 * f)
        * fp
        * (2.0 * a1 / r.powi(3) * sm(r)
            - (a1 - b1 / eta) / l1.powi(3) * sm(l1)
            - (a1 + b1 / eta) / l2.powi(3) * sm(l2));
    let c_yy = e / (3.0 * f)
        * fp
        * (2.0 * a2 / r.powi(3) * sm(r)
            - (a2 + b2 / eta) / l1.powi(3) * sm(l1)
            - (a2 - b2 / eta) / l2.powi(3) * sm(l2));
    Ok(lin.with_quadratic([c_xx, c_yy, c_xy, c_yz, c_zx]))
}

/// Rotate `v` about the unit axis `n` by `angle`.
fn rotate(v: [f64; 3], n: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, co) = angle.sin_cos();
    let dot = n[0] * v[0] + n[1] * v[1] + n[2] * v[2];
    let cr = cross(n, v);
    std::array::from_fn(|i| v[i] * co + cr[i] * s + n[i] * dot * (1.0 - co))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// First-order-in-`e` coefficients from time-dependent perturbation theory.
///
/// With `H0 = f Jz + d Jx`, the Heisenberg-picture `Jz(s)` is `b(s) . J`
/// where `b(s)` is `z` rotated by `-r s` about `(d, 0, f)/r`. The first-order
/// correction to the generator is
/// `-e f' int_0^t ds int_0^s du i[b(u).J b(u).J, b(s).J]`, which reduces to a
/// symmetric quadratic form `sum_kl S_kl {J_k, J_l}` with
/// `S = int int b(u) (b(u) x b(s))^T`. The double integral is done by
/// Gauss-Legendre quadrature.
pub fn perturbative_coeffs(p: &EffectiveModelParams) -> Result<GeneratorCoefficients> {
    let lin = linear_coeffs(p)?;
    let (f, d, e, t) = (p.f, p.d, p.e, p.t);
    if t == 0.0 || e == 0.0 {
        return Ok(lin);
    }
    let r = p.r();
    let n = [d / r, 0.0, f / r];
    let b = |s: f64| rotate([0.0, 0.0, 1.0], n, -r * s);
    let nodes = ((3.0 * r * t).ceil() as usize + 40).min(1500);
    let (x, w) = crate::linalg::gauss_legendre(nodes);
    let mut s_mat = [[0.0f64; 3]; 3];
    for (&xs, &ws) in x.iter().zip(&w) {
        let s = 0.5 * t * (xs + 1.0);
        let bs = b(s);
        for (&xu, &wu) in x.iter().zip(&w) {
            let u = 0.5 * s * (xu + 1.0);
            let bu = b(u);
            let q = cross(bu, bs);
            let weight = 0.25 * ws * wu * t * s;
            for k in 0..3 {
                for l in 0..3 {
                    s_mat[k][l] += weight * bu[k] * q[l];
                }
            }
        }
    }
    let sym = |k: usize, l: usize| s_mat[k][l] + s_mat[l][k];
    let scale = e * DF_DDELTA;
    // tr S = 0 since b(u) . (b(u) x b(s)) = 0, so the diagonal part
    // sum_k sym(k,k) J_k^2 is sym(x,x) (Jx^2 - Jy^2) - sym(z,z) (Jy^2 - Jz^2).
    Ok(lin.with_quadratic([
        scale * sym(0, 0),
        -scale * sym(2, 2),
        scale * sym(0, 1),
        scale * sym(1, 2),
        scale * sym(2, 0),
    ]))
}

/// The nine Hermitian operators `{1, Jx, Jy, Jz, Jx^2-Jy^2, Jy^2-Jz^2,
/// {Jx,Jy}, {Jy,Jz}, {Jz,Jx}}` on the Dicke sector of `j`.
pub fn operator_basis(j: SpinQuantum) -> Vec<HermitianOperator> {
    let ops = build_spin_operators(j);
    let (x2, y2, z2) = (ops.jx.squared(), ops.jy.squared(), ops.jz.squared());
    let diff = |a: &HermitianOperator, b: &HermitianOperator| {
        HermitianOperator::linear_combination(&[(1.0, a), (-1.0, b)]).expect("same sector")
    };
    let id = Array2::from_diag(&Array1::from_elem(j.dim(), c(1.0)));
    vec![
        HermitianOperator::new(id, BasisLabel::Dicke(j)).expect("identity"),
        ops.jx.clone(),
        ops.jy.clone(),
        ops.jz.clone(),
        diff(&x2, &y2),
        diff(&y2, &z2),
        ops.jx.anticommutator(&ops.jy),
        ops.jy.anticommutator(&ops.jz),
        ops.jz.anticommutator(&ops.jx),
    ]
}

/// `sum_i c_i B_i` over the eight non-identity basis operators.
pub fn generator_from_coeffs(coeffs: &GeneratorCoefficients, j: SpinQuantum) -> HermitianOperator {
    let basis = operator_basis(j);
    let a = coeffs.to_array();
    let terms: Vec<(f64, &HermitianOperator)> = a.iter().copied().zip(basis[1..].iter()).collect();
    HermitianOperator::linear_combination(&terms).expect("same sector")
}

/// Least-squares projection of an operator onto the generator basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub coeffs: GeneratorCoefficients,
    /// Coefficient of the identity.
    pub scalar_part: f64,
    /// Frobenius norm of the part outside the span.
    pub residual: f64,
}

/// Solve the 9x9 normal equations of the fit under `Re tr(A^dagger B)`.
pub fn decompose_generator(g: &HermitianOperator, j: SpinQuantum) -> Result<Decomposition> {
    if j.two_j() < 3 {
        return Err(domain(format!(
            "decomposition needs j >= 3/2; at j = {j} the quadratic operators are linearly dependent"
        )));
    }
    if g.dim() != j.dim() {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            found: g.dim(),
        });
    }
    let basis = operator_basis(j);
    let gram = Array2::from_shape_fn((9, 9), |(a, b)| {
        trace_inner(&basis[a].matrix().view(), &basis[b].matrix().view())
    });
    let rhs = Array1::from_shape_fn(9, |a| {
        trace_inner(&basis[a].matrix().view(), &g.matrix().view())
    });
    let sol = gram.solve(&rhs).map_err(|e| Error::Linalg(e.to_string()))?;
    let mut resid = g.matrix().clone();
    for (k, b) in basis.iter().enumerate() {
        resid.scaled_add(c(-sol[k]), b.matrix());
    }
    let mut coeffs = [0.0; 8];
    coeffs.copy_from_slice(&sol.as_slice().expect("contiguous")[1..]);
    Ok(Decomposition {
        coeffs: GeneratorCoefficients::from_array(coeffs),
        scalar_part: sol[0],
        residual: crate::linalg::frobenius(&resid.view()),
    })
}

/// `4 Var(G)` for `G = generator_from_coeffs(coeffs)` on `psi`, without
/// forming any matrix.
pub fn qfi_from_coeffs(j: SpinQuantum, coeffs: &GeneratorCoefficients, psi: &[C64]) -> Result<f64> {
    if psi.len() != j.dim() {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            found: psi.len(),
        });
    }
    let g_psi = apply_generator(&LadderAction::new(j), coeffs, psi);
    let mean: C64 = psi.iter().zip(&g_psi).map(|(a, b)| a.conj() * b).sum();
    let sq: f64 = g_psi.iter().map(|z| z.norm_sqr()).sum();
    Ok((4.0 * (sq - mean.re * mean.re)).max(0.0))
}

fn apply_generator(l: &LadderAction, k: &GeneratorCoefficients, psi: &[C64]) -> Vec<C64> {
    let x = l.jx(psi);
    let y = l.jy(psi);
    let z = l.jz(psi);
    let mut out: Vec<C64> = (0..psi.len())
        .map(|i| k.c_x * x[i] + k.c_y * y[i] + k.c_z * z[i])
        .collect();
    if k.is_linear() {
        return out;
    }
    let (xx, yy, zz) = (l.jx(&x), l.jy(&y), l.jz(&z));
    let (xy, yx) = (l.jx(&y), l.jy(&x));
    let (yz, zy) = (l.jy(&z), l.jz(&y));
    let (zx, xz) = (l.jz(&x), l.jx(&z));
    for i in 0..psi.len() {
        out[i] += k.c_xx * (xx[i] - yy[i])
            + k.c_yy * (yy[i] - zz[i])
            + k.c_xy * (xy[i] + yx[i])
            + k.c_yz * (yz[i] + zy[i])
            + k.c_zx * (zx[i] + xz[i]);
    }
    out
}

/// `F = (j(j+1) - 1) C_x^2 + 2 (j(j+1) - 1/2) C_y^2 + C_z^2` on the probe.
pub fn closed_form_qfi_linear(j: SpinQuantum, coeffs: &GeneratorCoefficients) -> Result<QfiResult> {
    if !coeffs.is_linear() {
        return Err(Error::Contract(
            "closed-form linear QFI needs vanishing quadratic coefficients".into(),
        ));
    }
    let jj = j.casimir();
    let v = (jj - 1.0) * coeffs.c_x.powi(2)
        + 2.0 * (jj - 0.5) * coeffs.c_y.powi(2)
        + coeffs.c_z.powi(2);
    Ok(QfiResult::new(v, Method::ClosedFormLinear).with_param("j", j.j()))
}

/// `<{Jx, Jx^2 - Jy^2}> - 2 <Jx><Jx^2 - Jy^2>` on the probe state.
pub fn cubic_term_moment(j: SpinQuantum) -> Result<f64> {
    let probe = initial_probe_state(j)?;
    let psi = probe.amplitudes().as_slice().expect("contiguous");
    let l = LadderAction::new(j);
    let x = l.jx(psi);
    let q: Vec<C64> = {
        let xx = l.jx(&x);
        let yy = l.jy(&l.jy(psi));
        xx.iter().zip(&yy).map(|(a, b)| a - b).collect()
    };
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(u, v)| u.conj() * v).sum() };
    let anti = 2.0 * dot(&x, &q).re;
    Ok(anti - 2.0 * dot(psi, &x).re * dot(psi, &q).re)
}
