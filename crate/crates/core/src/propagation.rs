//! Unitary evolution by spectral decomposition, the Mach-Zehnder reference
//! interferometer, and the exact-versus-effective dynamics comparison for the
//! atom-mediated mode coupling.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};
use crate::linalg::{c, Eigensystem, C64};
use crate::model::{
    effective_hamiltonian, ground_manifold_coupling, microscopic_hamiltonian, EffectiveModelParams,
    FockAtomState, MicroscopicParams, MicroscopicSector,
};
use crate::spin::{
    build_spin_operators, initial_probe_state, HermitianOperator, SpinQuantum, SpinState,
};
use crate::table::DatTable;

/// Default cap on the dimension of exact-dynamics sectors.
pub const DEFAULT_MAX_SECTOR_DIM: usize = 4096;

/// A Hamiltonian together with its cached eigensystem.
#[derive(Clone, Debug)]
pub struct Propagator {
    hamiltonian: HermitianOperator,
    eig: Eigensystem,
}

impl Propagator {
    pub fn new(hamiltonian: HermitianOperator) -> Result<Self> {
        let eig = hamiltonian.eigensystem()?;
        Ok(Self { hamiltonian, eig })
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn eigensystem(&self) -> &Eigensystem {
        &self.eig
    }

    /// `exp(-i H t) psi`.
    pub fn evolve(&self, psi: &ArrayView1<C64>, t: f64) -> Result<Array1<C64>> {
        self.eig.evolve(psi, t)
    }

    /// Evolve one initial state to every time in `times`, reusing the
    /// eigenbasis projection.
    pub fn trajectory(&self, psi: &ArrayView1<C64>, times: &[f64]) -> Result<Vec<Array1<C64>>> {
        if psi.len() != self.eig.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.eig.dim(),
                found: psi.len(),
            });
        }
        let coeffs = self.eig.to_eigenbasis(psi);
        Ok(times
            .iter()
            .map(|&t| self.eig.evolve_coefficients(&coeffs, t))
            .collect())
    }
}

/// `exp(-i H t) psi0`.
pub fn evolve(h: &HermitianOperator, psi0: &ArrayView1<C64>, t: f64) -> Result<Array1<C64>> {
    if psi0.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.len(),
        });
    }
    h.eigensystem()?.evolve(psi0, t)
}

/// Evolve a spin state under a Dicke-sector Hamiltonian.
pub fn evolve_state(h: &HermitianOperator, psi0: &SpinState, t: f64) -> Result<SpinState> {
    let out = evolve(h, &psi0.amplitudes().view(), t)?;
    SpinState::normalized(psi0.spin(), out)
}

/// The effective model evolved from the probe state.
pub fn evolve_probe(p: &EffectiveModelParams) -> Result<SpinState> {
    let probe = initial_probe_state(p.j)?;
    evolve_state(&effective_hamiltonian(p), &probe, p.t)
}

/// Mach-Zehnder output `e^{i pi/2 Jx} e^{-i phi Jz} e^{-i pi/2 Jx} |in>`.
pub fn mz_output_state(j: SpinQuantum, phi: f64) -> Result<SpinState> {
    let probe = initial_probe_state(j)?;
    mz_apply(j, phi, probe.amplitudes().view(), true).and_then(|psi| SpinState::normalized(j, psi))
}

/// Phase-shifter-only output `e^{-i phi Jz} |in>`.
pub fn phase_only_output_state(j: SpinQuantum, phi: f64) -> Result<SpinState> {
    let probe = initial_probe_state(j)?;
    mz_apply(j, phi, probe.amplitudes().view(), false).and_then(|psi| SpinState::normalized(j, psi))
}

fn mz_apply(
    j: SpinQuantum,
    phi: f64,
    psi: ArrayView1<C64>,
    beam_splitters: bool,
) -> Result<Array1<C64>> {
    let shift = |v: &Array1<C64>| -> Array1<C64> {
        v.iter()
            .enumerate()
            .map(|(k, z)| z * C64::from_polar(1.0, -phi * j.m(k)))
            .collect()
    };
    if !beam_splitters {
        return Ok(shift(&psi.to_owned()));
    }
    let jx = Eigensystem::of_matrix(&build_spin_operators(j).jx.matrix().view())?;
    let first = jx.evolve(&psi, FRAC_PI_2)?;
    let shifted = shift(&first);
    jx.evolve(&shifted.view(), -FRAC_PI_2)
}

/// Exact and effective populations sampled on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsTrace {
    pub times: Vec<f64>,
    /// `|<n, n, g | psi_exact(t)>|^2`.
    pub p_exact: Vec<f64>,
    /// `|<j, 0 | psi_effective(t)>|^2`.
    pub p_approx: Vec<f64>,
    /// Total population of the excited-atom manifold.
    pub p_atom: Vec<f64>,
    pub params: MicroscopicParams,
    pub n: u32,
    pub g_eff: f64,
    /// `d` used in the effective model.
    pub d_effective: f64,
}

impl DynamicsTrace {
    pub fn max_p_atom(&self) -> f64 {
        self.p_atom.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_deviation(&self) -> f64 {
        self.p_exact
            .iter()
            .zip(&self.p_approx)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_table(&self) -> DatTable {
        let p = &self.params;
        DatTable::new()
            .comment("exact atom + two-mode dynamics against the effective spin model")
            .comment(format!(
                "n = {}  omega_l = {:e}  delta = {:e}  omega_a = {:e}  g_cw = {:e}  g_ccw = {:e}",
                self.n, p.omega_l, p.delta, p.omega_a, p.g_cw, p.g_ccw
            ))
            .comment(format!(
                "g_eff = {:e}  effective model: j = {}, f = 2 delta, d = {:e}",
                self.g_eff, self.n, self.d_effective
            ))
            .column("t", self.times.clone())
            .column("p_exact", self.p_exact.clone())
            .column("p_approx", self.p_approx.clone())
            .column("p_atom", self.p_atom.clone())
    }

    pub fn write_dat(&self, path: &Path) -> Result<()> {
        self.to_table().write(path)
    }
}

/// Compare the exact sector dynamics from `(|n,n,g> + |n+1,n-1,g>)/sqrt(2)`
/// with the effective spin model (`j = n`, `f = 2 delta`) started from
/// `(|j,0> + |j,1>)/sqrt(2)`.
pub fn dynamics_trace(p: &MicroscopicParams, n: u32, t_grid: &[f64]) -> Result<DynamicsTrace> {
    dynamics_trace_with_budget(p, n, t_grid, DEFAULT_MAX_SECTOR_DIM)
}

pub fn dynamics_trace_with_budget(
    p: &MicroscopicParams,
    n: u32,
    t_grid: &[f64],
    max_dim: usize,
) -> Result<DynamicsTrace> {
    if n < 1 {
        return Err(Error::Domain("dynamics trace needs n >= 1".into()));
    }
    if p.n_total != 2 * n {
        return Err(Error::Contract(format!(
            "initial state lives in the sector n_total = 2n = {}, params give {}",
            2 * n,
            p.n_total
        )));
    }
    let dim = 2 * p.n_total as usize + 1;
    if dim > max_dim {
        return Err(Error::Resource(format!(
            "sector n_total = {} has dimension {dim} > budget {max_dim}",
            p.n_total
        )));
    }
    let sector = MicroscopicSector::new(p.n_total)?;
    let exact = Propagator::new(microscopic_hamiltonian(p)?)?;
    let ground = |n_cw, n_ccw| {
        sector
            .index_of(FockAtomState {
                n_cw,
                n_ccw,
                excited: false,
            })
            .expect("state in sector")
    };
    let k_nn = ground(n, n);
    let mut psi0 = Array1::<C64>::zeros(sector.dim());
    psi0[k_nn] = c(std::f64::consts::FRAC_1_SQRT_2);
    psi0[ground(n + 1, n - 1)] = c(std::f64::consts::FRAC_1_SQRT_2);

    let g_eff = p.g_eff()?;
    let d_effective = ground_manifold_coupling(g_eff);
    let j = SpinQuantum::from_photons(2 * n)?;
    let eff = EffectiveModelParams::new(j, 2.0 * p.delta, d_effective, 0.0, 0.0)?;
    let approx = Propagator::new(effective_hamiltonian(&eff))?;
    let probe = initial_probe_state(j)?;
    let k_m0 = j.index_of(0.0).expect("integer j");

    let exact_states = exact.trajectory(&psi0.view(), t_grid)?;
    let approx_states = approx.trajectory(&probe.amplitudes().view(), t_grid)?;
    let excited = sector.excited_indices();
    let clamp = |x: f64| x.clamp(0.0, 1.0);

    Ok(DynamicsTrace {
        times: t_grid.to_vec(),
        p_exact: exact_states
            .iter()
            .map(|s| clamp(s[k_nn].norm_sqr()))
            .collect(),
        p_approx: approx_states
            .iter()
            .map(|s| clamp(s[k_m0].norm_sqr()))
            .collect(),
        p_atom: exact_states
            .iter()
            .map(|s| clamp(excited.clone().map(|k| s[k].norm_sqr()).sum()))
            .collect(),
        params: *p,
        n,
        g_eff,
        d_effective,
    })
}
