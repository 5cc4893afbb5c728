//! QFI split into the part carried by the component phases and the part
//! carried by the component moduli, for states written as
//! `sum_n a_n e^{i phi_n} |n>`.

use std::f64::consts::{FRAC_PI_2, PI};

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use super::FAMILY_NORM_TOL;
use crate::error::{Error, Result};
use crate::linalg::{norm, C64};

/// Components below this modulus at all three samples have no usable phase.
pub const AMPLITUDE_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseAmplitudeSplit {
    /// `4 [sum a^2 phi'^2 - (sum a^2 phi')^2]`.
    pub f1: f64,
    /// `f1 + amplitude_term`.
    pub f2: f64,
    /// `4 sum (a')^2`.
    pub amplitude_term: f64,
    /// Step at which the estimate was accepted.
    pub step: f64,
    /// Components left out of the phase sums.
    pub excluded: usize,
}

const MAX_HALVINGS: u32 = 10;
const REL_TOL: f64 = 1e-8;

/// Phase/amplitude decomposition of the QFI of `Delta -> psi(Delta)`.
///
/// The global phase is fixed by making the largest component at `Delta` real
/// and positive at every sample, and component phases are continued to the
/// nearest branch of their central value. A phase jump above pi/2 between
/// neighbouring samples means a modulus passed through zero; the step is
/// then halved and the estimate redone.
pub fn phase_amplitude_qfi<F>(family: F, delta: f64, step: f64) -> Result<PhaseAmplitudeSplit>
where
    F: Fn(f64) -> Result<Array1<C64>>,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be > 0, got {step}")));
    }
    let eval = |x: f64| -> Result<Array1<C64>> {
        let psi = family(x)?;
        let n = norm(&psi.view());
        if (n - 1.0).abs() > FAMILY_NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(psi)
    };
    let center = eval(delta)?;
    let anchor = center
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (k, z)| {
            if z.norm() > best.1 {
                (k, z.norm())
            } else {
                best
            }
        })
        .0;
    let gauge = |v: Array1<C64>| -> Array1<C64> {
        let ph = v[anchor].conj() / v[anchor].norm();
        v.mapv(|z| z * ph)
    };
    let center = gauge(center);
    let amp0: Vec<f64> = center.iter().map(|z| z.norm()).collect();
    let phase0: Vec<f64> = center.iter().map(|z| z.arg()).collect();

    // Central differences of moduli and unwrapped phases at step h; None if
    // some phase jumps by more than pi/2.
    let diffs = |h: f64| -> Result<Option<(Vec<f64>, Vec<f64>, usize)>> {
        let plus = gauge(eval(delta + h)?);
        let minus = gauge(eval(delta - h)?);
        let n = center.len();
        let mut da = vec![0.0; n];
        let mut dphi = vec![0.0; n];
        let mut excluded = 0;
        for k in 0..n {
            da[k] = (plus[k].norm() - minus[k].norm()) / (2.0 * h);
            let top = amp0[k].max(plus[k].norm()).max(minus[k].norm());
            if top < AMPLITUDE_FLOOR {
                excluded += 1;
                continue;
            }
            let jp = wrap(plus[k].arg() - phase0[k]);
            let jm = wrap(minus[k].arg() - phase0[k]);
            if jp.abs() > FRAC_PI_2 || jm.abs() > FRAC_PI_2 {
                return Ok(None);
            }
            dphi[k] = (jp - jm) / (2.0 * h);
        }
        Ok(Some((da, dphi, excluded)))
    };

    let split = |da: &[f64], dphi: &[f64]| -> (f64, f64) {
        let (mut s1, mut s2, mut amp) = (0.0, 0.0, 0.0);
        for k in 0..da.len() {
            let w = amp0[k] * amp0[k];
            s1 += w * dphi[k] * dphi[k];
            s2 += w * dphi[k];
            amp += da[k] * da[k];
        }
        ((4.0 * (s1 - s2 * s2)).max(0.0), 4.0 * amp)
    };

    let mut h = step;
    let mut coarse: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut prev: Option<f64> = None;
    let mut accepted: Option<PhaseAmplitudeSplit> = None;
    for _ in 0..=MAX_HALVINGS {
        let Some((da, dphi, excluded)) = diffs(h)? else {
            log::debug!("phase jump at step {h}; refining");
            coarse = None;
            prev = None;
            h *= 0.5;
            continue;
        };
        if let Some((ca, cphi)) = coarse.take() {
            let ra: Vec<f64> = da
                .iter()
                .zip(&ca)
                .map(|(f, c)| (4.0 * f - c) / 3.0)
                .collect();
            let rphi: Vec<f64> = dphi
                .iter()
                .zip(&cphi)
                .map(|(f, c)| (4.0 * f - c) / 3.0)
                .collect();
            let (f1, amplitude_term) = split(&ra, &rphi);
            let f2 = f1 + amplitude_term;
            let reference = prev.unwrap_or_else(|| {
                let (p1, pa) = split(&da, &dphi);
                p1 + pa
            });
            let result = PhaseAmplitudeSplit {
                f1,
                f2,
                amplitude_term,
                step: h,
                excluded,
            };
            accepted = Some(result);
            if (f2 - reference).abs() <= REL_TOL * f2 || (f2 - reference).abs() < 1e-12 {
                break;
            }
            prev = Some(f2);
        }
        coarse = Some((da, dphi));
        h *= 0.5;
    }
    accepted.ok_or_else(|| {
        Error::Domain(format!(
            "component phases are discontinuous down to step {h}; a modulus vanishes at Delta = {delta}"
        ))
    })
}

/// Map an angle to `(-pi, pi]`.
fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrology::{effective_family, qfi_state_fd_with, FdOptions};
    use crate::model::EffectiveModelParams;
    use crate::spin::SpinQuantum;
    use proptest::prelude::*;

    fn model(j: f64, f: f64, d: f64, t: f64) -> EffectiveModelParams {
        EffectiveModelParams::new(SpinQuantum::new(j).unwrap(), f, d, 0.0, t).unwrap()
    }

    #[test]
    fn wrap_range() {
        assert!((wrap(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap(-0.1) + 0.1).abs() < 1e-15);
        assert!((wrap(2.0 * PI + 0.2) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn phase_only_encoding() {
        let t = 4.0;
        let p = model(5.0, 0.9, 0.0, t);
        let s = phase_amplitude_qfi(effective_family(p).unwrap(), p.delta(), 1e-5).unwrap();
        assert!(s.amplitude_term < 1e-10);
        assert!((s.f1 - 4.0 * t * t).abs() < 1e-7 * s.f1);
        assert_eq!(s.excluded, 9);
    }

    #[test]
    fn coupling_moves_information_into_amplitudes() {
        let p = model(5.0, 1.0, 1.0, 10.0);
        let fam = effective_family(p).unwrap();
        let s = phase_amplitude_qfi(&fam, p.delta(), 1e-5).unwrap();
        assert!(s.amplitude_term > 0.0);
        assert_eq!(s.f2, s.f1 + s.amplitude_term);
        let fd = qfi_state_fd_with(&fam, p.delta(), &FdOptions::default())
            .unwrap()
            .value;
        assert!((s.f2 - fd).abs() < 1e-5 * fd, "{} vs {fd}", s.f2);
    }

    #[test]
    fn rejects_bad_step() {
        let p = model(2.0, 1.0, 1.0, 1.0);
        assert!(phase_amplitude_qfi(effective_family(p).unwrap(), 0.5, -1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn monotone(f in -2.0f64..2.0, d in -2.0f64..2.0, t in 0.1f64..10.0, jj in 1u32..8) {
            prop_assume!(f.hypot(d) > 1e-3);
            let p = model(jj as f64, f, d, t);
            let s = phase_amplitude_qfi(effective_family(p).unwrap(), p.delta(), 1e-5).unwrap();
            prop_assert!(s.f1 >= 0.0);
            prop_assert!(s.f2 >= s.f1);
            prop_assert_eq!(s.f2, s.f1 + s.amplitude_term);
        }
    }
}
