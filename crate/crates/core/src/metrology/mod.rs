//! Quantum Fisher information for the Sagnac shift `Delta`.
//!
//! Four independent routes are provided: central differences of the state
//! family ([`qfi_state_fd`]), the variance of the numerically exact
//! generator ([`generator_numeric`] with [`qfi_from_generator`]), the
//! closed-form linear expansion ([`closed_form_qfi_linear`]), and the
//! first-order nonlinear expansions in [`coefficients`]. Appendix-style
//! phase/amplitude bookkeeping lives in [`split`].
//!
//! The generator convention is `G = -i U^dagger dU/dDelta`, so for a
//! Hamiltonian commuting with its derivative `G = -t dH/dDelta`.

pub mod coefficients;
pub mod split;

use std::collections::BTreeMap;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, inner, norm, variance, Eigensystem, C64};
use crate::model::{delta_derivative, effective_hamiltonian, EffectiveModelParams};
use crate::propagation::{mz_output_state, phase_only_output_state};
use crate::spin::{initial_probe_state, HermitianOperator, SpinQuantum, SpinState};

pub use coefficients::{
    closed_form_qfi_linear, cubic_term_moment, decompose_generator, generator_from_coeffs,
    linear_coeffs, nonlinear_coeffs, nonlinear_intermediates, perturbative_coeffs, qfi_from_coeffs,
    Decomposition, GeneratorCoefficients, NonlinearIntermediates,
};
pub use split::{phase_amplitude_qfi, PhaseAmplitudeSplit};

/// States handed to the QFI routines must have unit norm to this tolerance.
pub const FAMILY_NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FiniteDifference,
    GeneratorNumeric,
    ClosedFormLinear,
    FirstOrderNonlinear,
    FirstOrderPerturbative,
    PhaseAmplitudeSplit,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::FiniteDifference => "finite_difference",
            Method::GeneratorNumeric => "generator_numeric",
            Method::ClosedFormLinear => "closed_form_linear",
            Method::FirstOrderNonlinear => "first_order_nonlinear",
            Method::FirstOrderPerturbative => "first_order_perturbative",
            Method::PhaseAmplitudeSplit => "phase_amplitude_split",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QfiResult {
    pub value: f64,
    pub method: Method,
    /// Estimated absolute numerical error; zero for closed forms.
    pub error_estimate: f64,
    pub parameters: BTreeMap<String, f64>,
}

impl QfiResult {
    pub fn new(value: f64, method: Method) -> Self {
        Self {
            value,
            method,
            error_estimate: 0.0,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with_error(mut self, err: f64) -> Self {
        self.error_estimate = err;
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn with_model(self, p: &EffectiveModelParams) -> Self {
        self.with_param("j", p.j.j())
            .with_param("f", p.f)
            .with_param("d", p.d)
            .with_param("e", p.e)
            .with_param("t", p.t)
    }
}

/// Pure-state QFI from a state and its derivative,
/// `4 (<dpsi|dpsi> - |<psi|dpsi>|^2)`.
pub fn qfi_from_derivative(psi: &Array1<C64>, dpsi: &Array1<C64>) -> f64 {
    let overlap = inner(&psi.view(), &dpsi.view());
    4.0 * (norm(&dpsi.view()).powi(2) - overlap.norm_sqr())
}

/// Settings for [`qfi_state_fd_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdOptions {
    /// Initial step; `None` picks `max(|Delta|, 1) * 1e-5`.
    pub step: Option<f64>,
    /// Stop halving once the error estimate is below `rel_tol * F`.
    pub rel_tol: f64,
    pub max_halvings: u32,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            step: None,
            rel_tol: 1e-6,
            max_halvings: 8,
        }
    }
}

pub fn default_step(delta: f64) -> f64 {
    delta.abs().max(1.0) * 1e-5
}

/// QFI of `Delta -> psi(Delta)` by central differences with one
/// Richardson refinement, halving the step until two successive
/// extrapolations agree.
pub fn qfi_state_fd<F>(family: F, delta: f64, step: f64) -> Result<QfiResult>
where
    F: Fn(f64) -> Result<Array1<C64>>,
{
    qfi_state_fd_with(
        family,
        delta,
        &FdOptions {
            step: Some(step),
            ..FdOptions::default()
        },
    )
}

pub fn qfi_state_fd_with<F>(family: F, delta: f64, opts: &FdOptions) -> Result<QfiResult>
where
    F: Fn(f64) -> Result<Array1<C64>>,
{
    let h0 = opts.step.unwrap_or_else(|| default_step(delta));
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::Domain(format!(
            "finite-difference step must be > 0, got {h0}"
        )));
    }
    let eval = |x: f64| -> Result<Array1<C64>> {
        let psi = family(x)?;
        let n = norm(&psi.view());
        if (n - 1.0).abs() > FAMILY_NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(psi)
    };
    let psi = eval(delta)?;
    let central = |h: f64| -> Result<Array1<C64>> {
        let plus = eval(delta + h)?;
        let minus = eval(delta - h)?;
        Ok((plus - minus).mapv(|z| z / (2.0 * h)))
    };

    let mut h = h0;
    let mut d_prev = central(h)?;
    let mut f_prev: Option<f64> = None;
    let mut best = (f64::NAN, f64::INFINITY);
    for _ in 0..=opts.max_halvings {
        h *= 0.5;
        let d_half = central(h)?;
        let d_rich = (&d_half * c(4.0) - &d_prev) / c(3.0);
        let f_rich = qfi_from_derivative(&psi, &d_rich);
        // First level: compare against the plain half-step estimate, which
        // bounds the extrapolation error from above.
        let reference = f_prev.unwrap_or_else(|| qfi_from_derivative(&psi, &d_half));
        let est = (f_rich - reference).abs();
        if est < best.1 {
            best = (f_rich, est);
        }
        if est <= opts.rel_tol * f_rich.abs() || est < 1e-12 {
            break;
        }
        f_prev = Some(f_rich);
        d_prev = d_half;
    }
    if best.1 > opts.rel_tol * best.0.abs() && best.1 >= 1e-12 {
        log::warn!(
            "finite-difference QFI did not reach rel_tol {}: F = {}, error estimate {}",
            opts.rel_tol,
            best.0,
            best.1
        );
    }
    Ok(QfiResult::new(best.0.max(0.0), Method::FiniteDifference)
        .with_error(best.1)
        .with_param("delta", delta)
        .with_param("step", h0))
}

/// `Delta -> exp(-i H(Delta) t) |in>` for the effective model, where `p.f`
/// is replaced by `2 Delta`.
pub fn effective_family(p: EffectiveModelParams) -> Result<impl Fn(f64) -> Result<Array1<C64>>> {
    let probe = initial_probe_state(p.j)?;
    Ok(move |delta: f64| {
        let h = effective_hamiltonian(&p.with_delta(delta));
        h.eigensystem()?.evolve(&probe.amplitudes().view(), p.t)
    })
}

/// Finite-difference QFI of the effective model at `Delta = f / 2`.
pub fn qfi_effective_fd(p: &EffectiveModelParams) -> Result<QfiResult> {
    let family = effective_family(*p)?;
    Ok(qfi_state_fd_with(family, p.delta(), &FdOptions::default())?.with_model(p))
}

/// `G = -i U^dagger dU/dDelta` for `U = exp(-i H t)`, from the spectral
/// integral `G = -int_0^t e^{iHs} dH e^{-iHs} ds`.
pub fn generator_numeric(
    h: &HermitianOperator,
    dh: &HermitianOperator,
    t: f64,
) -> Result<HermitianOperator> {
    if h.dim() != dh.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: dh.dim(),
        });
    }
    let eig = h.eigensystem()?;
    Ok(generator_in_eigenbasis(&eig, dh, t, h.basis()))
}

fn generator_in_eigenbasis(
    eig: &Eigensystem,
    dh: &HermitianOperator,
    t: f64,
    basis: crate::spin::BasisLabel,
) -> HermitianOperator {
    let v = eig.eigenvectors();
    let lam = eig.eigenvalues();
    let vh = v.t().mapv(|z| z.conj());
    let b = vh.dot(dh.matrix()).dot(v);
    let n = lam.len();
    let mut k = Array2::<C64>::zeros((n, n));
    for a in 0..n {
        for bb in 0..n {
            let w = lam[a] - lam[bb];
            let x = w * t;
            // int_0^t e^{i w s} ds
            k[(a, bb)] = if x.abs() < 1e-8 {
                C64::new(t, 0.5 * w * t * t)
            } else {
                C64::new(x.sin(), 1.0 - x.cos()) / w
            };
        }
    }
    let g = -v.dot(&(b * k)).dot(&vh);
    HermitianOperator::symmetrized(g, basis)
}

/// Numeric generator of the effective model with respect to `Delta`.
pub fn effective_generator(p: &EffectiveModelParams) -> Result<HermitianOperator> {
    generator_numeric(&effective_hamiltonian(p), &delta_derivative(p.j), p.t)
}

/// `4 Var(G)` on `psi0`.
pub fn qfi_from_generator(g: &HermitianOperator, psi0: &SpinState) -> Result<QfiResult> {
    qfi_from_generator_vec(g, psi0.amplitudes())
}

pub fn qfi_from_generator_vec(g: &HermitianOperator, psi0: &Array1<C64>) -> Result<QfiResult> {
    if g.dim() != psi0.len() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: psi0.len(),
        });
    }
    let v = 4.0 * variance(&g.matrix().view(), &psi0.view());
    Ok(QfiResult::new(v.max(0.0), Method::GeneratorNumeric))
}

/// QFI of the effective model from its numeric generator on the probe.
pub fn qfi_effective_generator(p: &EffectiveModelParams) -> Result<QfiResult> {
    let g = effective_generator(p)?;
    let probe = initial_probe_state(p.j)?;
    Ok(qfi_from_generator(&g, &probe)?.with_model(p))
}

/// Finite-difference QFI in `phi` of the Mach-Zehnder output, with or
/// without the two beam splitters.
pub fn mz_qfi(j: SpinQuantum, with_beam_splitters: bool) -> Result<QfiResult> {
    initial_probe_state(j)?;
    let family = move |phi: f64| -> Result<Array1<C64>> {
        let s = if with_beam_splitters {
            mz_output_state(j, phi)?
        } else {
            phase_only_output_state(j, phi)?
        };
        Ok(s.into_amplitudes())
    };
    let opts = FdOptions {
        step: Some(1e-3),
        rel_tol: 1e-11,
        max_halvings: 6,
    };
    Ok(qfi_state_fd_with(family, 0.0, &opts)?
        .with_param("j", j.j())
        .with_param(
            "beam_splitters",
            if with_beam_splitters { 1.0 } else { 0.0 },
        ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{build_spin_operators, BasisLabel};
    use proptest::prelude::*;

    fn spin(j: f64) -> SpinQuantum {
        SpinQuantum::new(j).unwrap()
    }

    #[test]
    fn constant_and_global_phase_families_have_zero_qfi() {
        let probe = initial_probe_state(spin(3.0)).unwrap().into_amplitudes();
        let p2 = probe.clone();
        let f = qfi_state_fd(move |_| Ok(p2.clone()), 0.4, 1e-4).unwrap();
        assert_eq!(f.value, 0.0);
        let t = 7.0;
        let g = qfi_state_fd(
            move |x| Ok(probe.mapv(|z| z * C64::from_polar(1.0, -x * t))),
            0.4,
            1e-4,
        )
        .unwrap();
        assert!(g.value < 1e-8);
    }

    #[test]
    fn pure_detuning_gives_four_t_squared() {
        let p = EffectiveModelParams::new(spin(4.0), 0.6, 0.0, 0.0, 3.0).unwrap();
        let r = qfi_effective_fd(&p).unwrap();
        assert!((r.value - 36.0).abs() < 1e-8 * 36.0, "{}", r.value);
    }

    #[test]
    fn fd_rejects_bad_step_and_unnormalized_family() {
        let v = Array1::from(vec![c(1.0), c(1.0)]);
        let v2 = v.clone();
        assert!(matches!(
            qfi_state_fd(move |_| Ok(v2.clone()), 0.0, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            qfi_state_fd(move |_| Ok(v.clone()), 0.0, 1e-3),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn mz_closed_forms() {
        for (j, with, want) in [(1.0, true, 3.0), (5.0, true, 59.0), (5.0, false, 1.0)] {
            let r = mz_qfi(spin(j), with).unwrap();
            assert!((r.value - want).abs() < 1e-8 * want, "j={j} {}", r.value);
        }
        assert!(mz_qfi(spin(0.5), true).is_err());
    }

    #[test]
    fn generator_commuting_case_and_zero_time() {
        let j = spin(2.0);
        let ops = build_spin_operators(j);
        let h = HermitianOperator::linear_combination(&[(0.7, &ops.jz), (0.3, &ops.jsq)]).unwrap();
        let dh = delta_derivative(j);
        let t = 2.5;
        let g = generator_numeric(&h, &dh, t).unwrap();
        let want = dh.matrix().mapv(|z| -t * z);
        assert!(crate::linalg::max_abs_diff(&g.matrix().view(), &want.view()) < 1e-12);
        let g0 = generator_numeric(&h, &dh, 0.0).unwrap();
        assert!(crate::linalg::max_abs(&g0.matrix().view()) < 1e-15);
    }

    #[test]
    fn generator_matches_finite_difference_unitary() {
        let j = spin(1.0);
        let p = EffectiveModelParams::new(j, 1.0, 1.0, 0.0, 1.0).unwrap();
        let g = effective_generator(&p).unwrap();
        let delta = p.delta();
        let d = 1e-5;
        let u = |x: f64| {
            effective_hamiltonian(&p.with_delta(x))
                .eigensystem()
                .unwrap()
                .propagator(p.t)
        };
        let du = (u(delta + d) - u(delta - d)).mapv(|z| z / (2.0 * d));
        let fd = u(delta)
            .t()
            .mapv(|z| z.conj())
            .dot(&du)
            .mapv(|z| -crate::linalg::I * z);
        assert!(crate::linalg::max_abs_diff(&g.matrix().view(), &fd.view()) < 1e-8);
        assert!(crate::linalg::hermiticity_error(&g.matrix().view()) < 1e-10);
    }

    #[test]
    fn generator_rejects_dimension_mismatch() {
        let a = build_spin_operators(spin(1.0)).jz;
        let b = build_spin_operators(spin(2.0)).jz;
        assert!(matches!(
            generator_numeric(&a, &b, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn generator_variance_examples() {
        for jj in [1.0, 3.0, 10.0] {
            let j = spin(jj);
            let ops = build_spin_operators(j);
            let probe = initial_probe_state(j).unwrap();
            let fz = qfi_from_generator(&ops.jz, &probe).unwrap().value;
            let fy = qfi_from_generator(&ops.jy, &probe).unwrap().value;
            assert!((fz - 1.0).abs() < 1e-12);
            assert!((fy - (2.0 * j.casimir() - 1.0)).abs() < 1e-10);
        }
        let j = spin(2.0);
        let psi = SpinState::basis_state(j, 1.0).unwrap();
        let fz = qfi_from_generator(&build_spin_operators(j).jz, &psi).unwrap();
        assert!(fz.value.abs() < 1e-14);
        let other = HermitianOperator::zeros(3, BasisLabel::Dicke(spin(1.0)));
        assert!(qfi_from_generator(&other, &psi).is_err());
    }

    #[test]
    fn fd_and_generator_agree_on_effective_model() {
        for (f, d, t, e) in [
            (0.5, 1.0, 5.0, 0.0),
            (2.0, 1.0, 10.0, 0.0),
            (1.0, 1.0, 10.0, 0.05),
        ] {
            let p = EffectiveModelParams::new(spin(6.0), f, d, e, t).unwrap();
            let a = qfi_effective_fd(&p).unwrap().value;
            let b = qfi_effective_generator(&p).unwrap().value;
            assert!((a - b).abs() < 1e-6 * b, "{a} vs {b}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn gauge_invariance(f in 0.1f64..2.0, d in 0.1f64..2.0, t in 0.5f64..8.0, k in -3.0f64..3.0) {
            let p = EffectiveModelParams::new(spin(3.0), f, d, 0.0, t).unwrap();
            let fam = effective_family(p).unwrap();
            let plain = qfi_state_fd_with(&fam, p.delta(), &FdOptions::default()).unwrap().value;
            let phased = qfi_state_fd_with(
                |x| Ok(fam(x)?.mapv(|z| z * C64::from_polar(1.0, k * x * x + (3.0 * x).sin()))),
                p.delta(),
                &FdOptions::default(),
            ).unwrap().value;
            prop_assert!((plain - phased).abs() < 1e-8 * plain.max(1.0));
        }
    }
}
