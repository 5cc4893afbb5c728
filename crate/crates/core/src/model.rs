//! Model Hamiltonians: the Sagnac splitting of a spinning resonator, the
//! effective SU(2) spin model, the exact atom plus two-mode Hamiltonian on a
//! conserved-excitation sector, and the two-mode Bose-Hubbard form.
//!
//! Units are SI throughout and every frequency is angular (rad/s).

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::{self, c, C64};
use crate::spin::{build_spin_operators, BasisLabel, HermitianOperator, SpinQuantum};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Rotation rate of the Earth, rad/s.
pub const EARTH_ROTATION_RATE: f64 = 7.292e-5;

/// `df/dDelta` for `f = 2 Delta`.
pub const DF_DDELTA: f64 = 2.0;

/// Ratio `g / |detuning|` above which the dispersive elimination of the atom
/// is reported as questionable.
pub const DISPERSIVE_WARN_RATIO: f64 = 0.1;

/// Geometry and material of the spinning resonator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SagnacParams {
    /// Refractive index.
    pub n0: f64,
    /// Resonator radius, m.
    pub radius: f64,
    /// Angular velocity of the resonator, rad/s.
    pub rotation_rate: f64,
    /// Optical resonance angular frequency, rad/s.
    pub omega_l: f64,
    /// Probe wavelength, m.
    pub wavelength: f64,
    /// Material dispersion `dn0/dlambda`, 1/m.
    pub dn_dlambda: f64,
    /// Speed of light, m/s.
    pub c: f64,
}

impl SagnacParams {
    pub fn new(
        n0: f64,
        radius: f64,
        rotation_rate: f64,
        omega_l: f64,
        wavelength: f64,
        dn_dlambda: f64,
    ) -> Result<Self> {
        let p = Self {
            n0,
            radius,
            rotation_rate,
            omega_l,
            wavelength,
            dn_dlambda,
            c: SPEED_OF_LIGHT,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n0", self.n0),
            ("radius", self.radius),
            ("omega_l", self.omega_l),
            ("wavelength", self.wavelength),
            ("c", self.c),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !self.rotation_rate.is_finite() || !self.dn_dlambda.is_finite() {
            return Err(domain("rotation rate and dispersion must be finite"));
        }
        Ok(())
    }

    pub fn with_rotation_rate(mut self, rotation_rate: f64) -> Self {
        self.rotation_rate = rotation_rate;
        self
    }
}

/// Rotation-induced splitting `Delta`: the CW and CCW resonances move to
/// `omega_l +/- Delta`.
pub fn sagnac_shift(p: &SagnacParams) -> Result<f64> {
    p.validate()?;
    let prefactor = p.n0 * p.radius * p.rotation_rate * p.omega_l / p.c;
    let bracket = 1.0 - 1.0 / (p.n0 * p.n0) - p.wavelength / p.n0 * p.dn_dlambda;
    Ok(prefactor * bracket)
}

/// Second-order mode-mode coupling mediated by a far-detuned atom,
/// `g_eff = (1/det_cw + 1/det_ccw) g_cw g_ccw / 2`.
pub fn effective_coupling(g_cw: f64, g_ccw: f64, det_cw: f64, det_ccw: f64) -> Result<f64> {
    if det_cw == 0.0 || det_ccw == 0.0 {
        return Err(domain(
            "zero atom-mode detuning: resonant regime, dispersive coupling undefined",
        ));
    }
    Ok(0.5 * (1.0 / det_cw + 1.0 / det_ccw) * g_cw * g_ccw)
}

/// Coupling coefficient `d` of the spin model that describes the modes while
/// the atom remains in its ground state.
///
/// Adiabatic elimination from the ground manifold lowers the photon energies,
/// so the induced hopping enters with the opposite sign to `g_eff`:
/// `d = -2 g_eff`. The sign is invisible to every QFI but fixes the phase of
/// the beat note seen in the exact dynamics.
pub fn ground_manifold_coupling(g_eff: f64) -> f64 {
    -2.0 * g_eff
}

/// Parameters of `f Jz + d Jx + e Jz^2` evolved for a time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveModelParams {
    /// `f = 2 Delta`, rad/s.
    pub f: f64,
    /// `d = 2 g_eff`, rad/s.
    pub d: f64,
    /// `e = 2 U` (Kerr strength), rad/s.
    pub e: f64,
    /// Evolution time, s.
    pub t: f64,
    pub j: SpinQuantum,
}

impl EffectiveModelParams {
    pub fn new(j: SpinQuantum, f: f64, d: f64, e: f64, t: f64) -> Result<Self> {
        let p = Self { f, d, e, t, j };
        p.validate()?;
        Ok(p)
    }

    /// Parameters fixed through the dimensionless products `f t`, `d t` and
    /// the ratio `e / d`, with `d` setting the frequency unit.
    pub fn from_products(j: SpinQuantum, d: f64, ft: f64, dt: f64, e_over_d: f64) -> Result<Self> {
        if d == 0.0 {
            return Err(domain("d must be nonzero to fix t from d t"));
        }
        let t = dt / d;
        if t == 0.0 {
            return Self::new(j, ft, d, e_over_d * d, 0.0);
        }
        Self::new(j, ft / t, d, e_over_d * d, t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f.is_finite() && self.d.is_finite() && self.e.is_finite()) {
            return Err(domain("f, d, e must be finite"));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(domain(format!("t must be finite and >= 0, got {}", self.t)));
        }
        Ok(())
    }

    /// `r = sqrt(f^2 + d^2)`.
    pub fn r(&self) -> f64 {
        self.f.hypot(self.d)
    }

    /// The Sagnac shift the model encodes, `Delta = f / 2`.
    pub fn delta(&self) -> f64 {
        self.f / DF_DDELTA
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.f = DF_DDELTA * delta;
        self
    }

    pub fn with_e(mut self, e: f64) -> Self {
        self.e = e;
        self
    }

    pub fn with_spin(mut self, j: SpinQuantum) -> Self {
        self.j = j;
        self
    }
}

/// `f Jz + d Jx + e Jz^2` on the Dicke sector of `p.j`. Real symmetric
/// tridiagonal.
pub fn effective_hamiltonian(p: &EffectiveModelParams) -> HermitianOperator {
    let j = p.j;
    let n = j.dim();
    let mut h = Array2::<C64>::zeros((n, n));
    for k in 0..n {
        let m = j.m(k);
        h[(k, k)] = c(p.f * m + p.e * m * m);
    }
    for k in 0..n - 1 {
        let x = 0.5 * p.d * j.ladder_coefficient(j.m(k), true);
        h[(k + 1, k)] = c(x);
        h[(k, k + 1)] = c(x);
    }
    HermitianOperator::new(h, BasisLabel::Dicke(j)).expect("real symmetric by construction")
}

/// `dH/dDelta = (df/dDelta) Jz` for the effective model.
pub fn delta_derivative(j: SpinQuantum) -> HermitianOperator {
    let ops = build_spin_operators(j);
    HermitianOperator::linear_combination(&[(DF_DDELTA, &ops.jz)]).expect("single term")
}

/// Exact atom plus two-mode model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MicroscopicParams {
    /// Bare resonance, rad/s.
    pub omega_l: f64,
    /// Sagnac shift, rad/s.
    pub delta: f64,
    /// Atomic transition, rad/s.
    pub omega_a: f64,
    pub g_cw: f64,
    pub g_ccw: f64,
    /// Total excitation number of the sector.
    pub n_total: u32,
}

impl MicroscopicParams {
    pub fn omega_cw(&self) -> f64 {
        self.omega_l + self.delta
    }

    pub fn omega_ccw(&self) -> f64 {
        self.omega_l - self.delta
    }

    /// `omega_a - omega_cw`.
    pub fn detuning_cw(&self) -> f64 {
        self.omega_a - self.omega_cw()
    }

    pub fn detuning_ccw(&self) -> f64 {
        self.omega_a - self.omega_ccw()
    }

    pub fn g_eff(&self) -> Result<f64> {
        effective_coupling(
            self.g_cw,
            self.g_ccw,
            self.detuning_cw(),
            self.detuning_ccw(),
        )
    }

    /// Checks the detunings; logs a warning outside the dispersive regime.
    pub fn validate(&self) -> Result<()> {
        if self.detuning_cw() == 0.0 || self.detuning_ccw() == 0.0 {
            return Err(domain("atom resonant with a cavity mode (zero detuning)"));
        }
        for (name, g, det) in [
            ("cw", self.g_cw, self.detuning_cw()),
            ("ccw", self.g_ccw, self.detuning_ccw()),
        ] {
            if g.abs() > DISPERSIVE_WARN_RATIO * det.abs() {
                log::warn!(
                    "g_{name} = {g} is not small against detuning {det}; \
                     the dispersive approximation may fail"
                );
            }
        }
        Ok(())
    }
}

/// One basis vector `|n_cw, n_ccw, atom>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockAtomState {
    pub n_cw: u32,
    pub n_ccw: u32,
    pub excited: bool,
}

impl FockAtomState {
    pub fn excitations(&self) -> u32 {
        self.n_cw + self.n_ccw + u32::from(self.excited)
    }
}

/// Basis of the sector with `n_total` excitations: ground-manifold states
/// first (`n_cw` descending), then the excited manifold (`n_cw` descending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MicroscopicSector {
    n_total: u32,
    states: Vec<FockAtomState>,
}

impl MicroscopicSector {
    pub fn new(n_total: u32) -> Result<Self> {
        if n_total < 1 {
            return Err(domain("microscopic sector needs n_total >= 1"));
        }
        let ground = (0..=n_total).rev().map(|n_cw| FockAtomState {
            n_cw,
            n_ccw: n_total - n_cw,
            excited: false,
        });
        let excited = (0..n_total).rev().map(|n_cw| FockAtomState {
            n_cw,
            n_ccw: n_total - 1 - n_cw,
            excited: true,
        });
        Ok(Self {
            n_total,
            states: ground.chain(excited).collect(),
        })
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockAtomState] {
        &self.states
    }

    pub fn index_of(&self, s: FockAtomState) -> Option<usize> {
        if s.excitations() != self.n_total {
            return None;
        }
        let n = self.n_total as usize;
        Some(if s.excited {
            n + 1 + (n - 1 - s.n_cw as usize)
        } else {
            n - s.n_cw as usize
        })
    }

    pub fn ground_indices(&self) -> std::ops::Range<usize> {
        0..self.n_total as usize + 1
    }

    pub fn excited_indices(&self) -> std::ops::Range<usize> {
        self.n_total as usize + 1..self.dim()
    }

    /// Total excitation operator `n_cw + n_ccw + |e><e|` on the sector.
    pub fn excitation_operator(&self) -> HermitianOperator {
        let diag = Array1::from_iter(self.states.iter().map(|s| c(s.excitations() as f64)));
        HermitianOperator::new(
            Array2::from_diag(&diag),
            BasisLabel::Microscopic {
                n_total: self.n_total,
            },
        )
        .expect("diagonal")
    }
}

/// `H0 + HI` restricted to the sector with `p.n_total` excitations, where
/// `H0 = sum omega_g a_g^dag a_g + omega_a |e><e|` and
/// `HI = sum g_g (a_g |e><g| + h.c.)`.
pub fn microscopic_hamiltonian(p: &MicroscopicParams) -> Result<HermitianOperator> {
    p.validate()?;
    let sector = MicroscopicSector::new(p.n_total)?;
    let n = sector.dim();
    let mut h = Array2::<C64>::zeros((n, n));
    for (i, s) in sector.states().iter().enumerate() {
        h[(i, i)] = c(p.omega_cw() * s.n_cw as f64
            + p.omega_ccw() * s.n_ccw as f64
            + if s.excited { p.omega_a } else { 0.0 });
        if s.excited {
            continue;
        }
        // a_cw |e><g| : |n_cw, n_ccw, g> -> sqrt(n_cw) |n_cw - 1, n_ccw, e>
        let hops = [
            (s.n_cw, p.g_cw, (s.n_cw.wrapping_sub(1), s.n_ccw)),
            (s.n_ccw, p.g_ccw, (s.n_cw, s.n_ccw.wrapping_sub(1))),
        ];
        for (count, g, (n_cw, n_ccw)) in hops {
            if count == 0 {
                continue;
            }
            let target = FockAtomState {
                n_cw,
                n_ccw,
                excited: true,
            };
            let k = sector.index_of(target).expect("target lies in sector");
            let amp = c(g * (count as f64).sqrt());
            h[(k, i)] += amp;
            h[(i, k)] += amp;
        }
    }
    HermitianOperator::new(h, BasisLabel::Microscopic { n_total: p.n_total })
}

/// Two-mode Bose-Hubbard Hamiltonian
/// `sum_g [omega_g n_g + U (n_g^2 - n_g)] + g_eff (a_cw^dag a_ccw + h.c.)`
/// on the sector `n_cw + n_ccw = n_total`, basis ordered by `n_cw`
/// ascending (equivalently `m = (n_cw - n_ccw)/2` ascending).
pub fn bose_hubbard_hamiltonian(
    omega_l: f64,
    delta: f64,
    u: f64,
    g_eff: f64,
    n_total: u32,
) -> HermitianOperator {
    let n = n_total as usize + 1;
    let mut h = Array2::<C64>::zeros((n, n));
    for n_cw in 0..=n_total {
        let n_ccw = n_total - n_cw;
        let (a, b) = (n_cw as f64, n_ccw as f64);
        let k = n_cw as usize;
        h[(k, k)] = c((omega_l + delta) * a + (omega_l - delta) * b + u * (a * a - a + b * b - b));
        if n_ccw > 0 {
            // a_cw^dag a_ccw |n_cw, n_ccw> = sqrt((n_cw + 1) n_ccw) |n_cw + 1, n_ccw - 1>
            let amp = c(g_eff * ((a + 1.0) * b).sqrt());
            h[(k + 1, k)] = amp;
            h[(k, k + 1)] = amp;
        }
    }
    HermitianOperator::new(h, BasisLabel::TwoModeFock { n_total }).expect("real symmetric")
}

/// The constant that the Bose-Hubbard form contributes on a fixed photon
/// number sector `n`: `(omega_l - U) n + (U/2) n^2`.
pub fn schwinger_constant_offset(omega_l: f64, u: f64, n: u32) -> f64 {
    let n = n as f64;
    (omega_l - u) * n + 0.5 * u * n * n
}

/// The Bose-Hubbard Hamiltonian rewritten with Schwinger spin operators,
/// `offset + 2U Jz^2 + 2 Delta Jz + 2 g_eff Jx`, on the Dicke sector `j`.
pub fn schwinger_hamiltonian(
    omega_l: f64,
    delta: f64,
    u: f64,
    g_eff: f64,
    j: SpinQuantum,
) -> HermitianOperator {
    let spin_part = effective_hamiltonian(&EffectiveModelParams {
        f: 2.0 * delta,
        d: 2.0 * g_eff,
        e: 2.0 * u,
        t: 0.0,
        j,
    });
    let offset = schwinger_constant_offset(omega_l, u, j.photons());
    let mut m = spin_part.into_matrix();
    for k in 0..j.dim() {
        m[(k, k)] += c(offset);
    }
    HermitianOperator::new(m, BasisLabel::Dicke(j)).expect("real symmetric")
}

/// Max entrywise deviation between the Bose-Hubbard matrix on the Fock
/// sector `n_cw + n_ccw = 2j` and its Schwinger form on the Dicke sector,
/// identifying `|n_cw, n_ccw>` with `|j, (n_cw - n_ccw)/2>`.
pub fn schwinger_equivalence_check(
    omega_l: f64,
    delta: f64,
    u: f64,
    g_eff: f64,
    j: SpinQuantum,
) -> f64 {
    let fock = bose_hubbard_hamiltonian(omega_l, delta, u, g_eff, j.photons());
    let spin = schwinger_hamiltonian(omega_l, delta, u, g_eff, j);
    // n_cw ascending and m ascending are the same ordering.
    linalg::max_abs_diff(&fock.matrix().view(), &spin.matrix().view())
}
