//! Angular-momentum algebra on a fixed-`j` Dicke sector.
//!
//! Basis vectors `|j, m>` are ordered by `m` ascending, `m = -j ..= j`, so
//! index `k` holds `m = k - j`. Every operator and state in the crate uses
//! this ordering.

use std::fmt;

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{self, c, Eigensystem, C64};

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;

/// Total angular momentum `j`, stored as the integer `2j` (= photon number
/// `n` in the two-mode Schwinger picture).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpinQuantum {
    two_j: u32,
}

impl SpinQuantum {
    pub fn from_two_j(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(domain("j must be at least 1/2"));
        }
        Ok(Self { two_j })
    }

    /// Parse a half-integer `j`.
    pub fn new(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !two_j.is_finite() || two_j < 0.0 || (two_j - two_j.round()).abs() > 1e-9 {
            return Err(domain(format!(
                "j = {j} is not a non-negative half-integer"
            )));
        }
        Self::from_two_j(two_j.round() as u32)
    }

    /// The spin sector holding `n` photons, `j = n / 2`.
    pub fn from_photons(n: u32) -> Result<Self> {
        Self::from_two_j(n)
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn photons(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `j (j + 1)`.
    pub fn casimir(&self) -> f64 {
        let j = self.j();
        j * (j + 1.0)
    }

    pub fn is_integer(&self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    pub fn m(&self, index: usize) -> f64 {
        index as f64 - self.j()
    }

    pub fn m_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(|k| self.m(k))
    }

    pub fn index_of(&self, m: f64) -> Option<usize> {
        let k = m + self.j();
        if k < -1e-9 || (k - k.round()).abs() > 1e-9 {
            return None;
        }
        let k = k.round() as usize;
        (k < self.dim()).then_some(k)
    }

    /// `<j, m +/- 1 | J_(+/-) | j, m> = sqrt(j(j+1) - m(m +/- 1))`.
    pub fn ladder_coefficient(&self, m: f64, raising: bool) -> f64 {
        let mm = if raising {
            m * (m + 1.0)
        } else {
            m * (m - 1.0)
        };
        (self.casimir() - mm).max(0.0).sqrt()
    }
}

impl fmt::Display for SpinQuantum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Which Hilbert space an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisLabel {
    Dicke(SpinQuantum),
    /// Atom plus two cavity modes with a fixed total excitation number.
    Microscopic {
        n_total: u32,
    },
    /// Two cavity modes with fixed total photon number, ordered by
    /// `n_cw` ascending.
    TwoModeFock {
        n_total: u32,
    },
}

/// A dense Hermitian matrix tagged with its basis.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    matrix: Array2<C64>,
    basis: BasisLabel,
}

impl HermitianOperator {
    pub fn new(matrix: Array2<C64>, basis: BasisLabel) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let scale = linalg::max_abs(&matrix.view()).max(1.0);
        let err = linalg::hermiticity_error(&matrix.view());
        if err > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(err));
        }
        Ok(Self { matrix, basis })
    }

    /// Build from a matrix that is Hermitian up to rounding; the result is
    /// symmetrized exactly.
    pub(crate) fn symmetrized(matrix: Array2<C64>, basis: BasisLabel) -> Self {
        let adj = linalg::dagger(&matrix.view());
        let matrix = (matrix + adj).mapv(|z| z * 0.5);
        Self { matrix, basis }
    }

    pub fn zeros(dim: usize, basis: BasisLabel) -> Self {
        Self {
            matrix: Array2::zeros((dim, dim)),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn basis(&self) -> BasisLabel {
        self.basis
    }

    pub fn apply(&self, psi: &ArrayView1<C64>) -> Result<Array1<C64>> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.len(),
            });
        }
        Ok(self.matrix.dot(psi))
    }

    pub fn eigensystem(&self) -> Result<Eigensystem> {
        Eigensystem::of_matrix(&self.matrix.view())
    }

    /// Real linear combination `sum_k w_k A_k`; all terms must share a basis.
    pub fn linear_combination(terms: &[(f64, &HermitianOperator)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::Contract("empty linear combination".into()))?;
        let mut matrix = Array2::zeros(first.matrix.raw_dim());
        for (w, op) in terms {
            if op.basis != first.basis || op.dim() != first.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: op.dim(),
                });
            }
            matrix.scaled_add(c(*w), &op.matrix);
        }
        Ok(Self {
            matrix,
            basis: first.basis,
        })
    }

    /// The symmetrized product `A B + B A`, which is Hermitian.
    pub fn anticommutator(&self, other: &HermitianOperator) -> Self {
        Self {
            matrix: linalg::anticommutator(&self.matrix.view(), &other.matrix.view()),
            basis: self.basis,
        }
    }

    pub fn squared(&self) -> Self {
        Self::symmetrized(self.matrix.dot(&self.matrix), self.basis)
    }
}

/// A normalized pure state on a Dicke sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    j: SpinQuantum,
    amplitudes: Array1<C64>,
}

impl SpinState {
    pub fn new(j: SpinQuantum, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != j.dim() {
            return Err(Error::DimensionMismatch {
                expected: j.dim(),
                found: amplitudes.len(),
            });
        }
        let n = linalg::norm(&amplitudes.view());
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { j, amplitudes })
    }

    /// Normalizes `amplitudes` before wrapping. Fails on the zero vector.
    pub fn normalized(j: SpinQuantum, amplitudes: Array1<C64>) -> Result<Self> {
        let n = linalg::norm(&amplitudes.view());
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Self::new(j, amplitudes.mapv(|z| z / n))
    }

    pub fn basis_state(j: SpinQuantum, m: f64) -> Result<Self> {
        let k = j
            .index_of(m)
            .ok_or_else(|| domain(format!("m = {m} is not in the j = {j} sector")))?;
        let mut amps = Array1::zeros(j.dim());
        amps[k] = c(1.0);
        Ok(Self {
            j,
            amplitudes: amps,
        })
    }

    /// `|j, -j>`.
    pub fn lowest_weight(j: SpinQuantum) -> Self {
        let mut amps = Array1::zeros(j.dim());
        amps[0] = c(1.0);
        Self {
            j,
            amplitudes: amps,
        }
    }

    pub fn spin(&self) -> SpinQuantum {
        self.j
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Array1<C64> {
        self.amplitudes
    }

    pub fn amplitude(&self, m: f64) -> Option<C64> {
        self.j.index_of(m).map(|k| self.amplitudes[k])
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes.view())
    }

    pub fn expectation(&self, op: &HermitianOperator) -> f64 {
        linalg::expectation(&op.matrix().view(), &self.amplitudes.view())
    }

    pub fn variance(&self, op: &HermitianOperator) -> f64 {
        linalg::variance(&op.matrix().view(), &self.amplitudes.view())
    }

    /// Symmetrized covariance `<{A, B}>/2 - <A><B>`.
    pub fn covariance(&self, a: &HermitianOperator, b: &HermitianOperator) -> f64 {
        let psi = self.amplitudes.view();
        let anti = linalg::anticommutator(&a.matrix().view(), &b.matrix().view());
        0.5 * linalg::expectation(&anti.view(), &psi) - self.expectation(a) * self.expectation(b)
    }
}

/// `Jx, Jy, Jz` and `J^2` on one Dicke sector.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub j: SpinQuantum,
    pub jx: HermitianOperator,
    pub jy: HermitianOperator,
    pub jz: HermitianOperator,
    pub jsq: HermitianOperator,
}

impl SpinOperators {
    /// The raising operator `J+` (not Hermitian, so returned as a raw matrix).
    pub fn raising(&self) -> Array2<C64> {
        raising_matrix(self.j)
    }

    pub fn component(&self, axis: Axis) -> &HermitianOperator {
        match axis {
            Axis::X => &self.jx,
            Axis::Y => &self.jy,
            Axis::Z => &self.jz,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

fn raising_matrix(j: SpinQuantum) -> Array2<C64> {
    let n = j.dim();
    let mut jp = Array2::zeros((n, n));
    for k in 0..n - 1 {
        jp[(k + 1, k)] = c(j.ladder_coefficient(j.m(k), true));
    }
    jp
}

pub fn build_spin_operators(j: SpinQuantum) -> SpinOperators {
    let n = j.dim();
    let basis = BasisLabel::Dicke(j);
    let jp = raising_matrix(j);
    let jm = linalg::dagger(&jp.view());
    let jx = (&jp + &jm).mapv(|z| z * 0.5);
    let jy = (&jp - &jm).mapv(|z| z * C64::new(0.0, -0.5));
    let jz = Array2::from_diag(&Array1::from_iter(j.m_values().map(c)));
    let jsq = Array2::from_diag(&Array1::from_elem(n, c(j.casimir())));
    SpinOperators {
        j,
        jx: HermitianOperator { matrix: jx, basis },
        jy: HermitianOperator { matrix: jy, basis },
        jz: HermitianOperator { matrix: jz, basis },
        jsq: HermitianOperator { matrix: jsq, basis },
    }
}

/// The entangled probe `(|j,0> + |j,1>)/sqrt(2)`.
pub fn initial_probe_state(j: SpinQuantum) -> Result<SpinState> {
    if !j.is_integer() {
        return Err(domain(format!(
            "probe state needs integer j >= 1 (m = 0 and m = 1 must exist), got j = {j}"
        )));
    }
    let k0 = j.index_of(0.0).expect("integer j holds m = 0");
    let k1 = j.index_of(1.0).expect("j >= 1 holds m = 1");
    let mut amps = Array1::zeros(j.dim());
    let a = c(std::f64::consts::FRAC_1_SQRT_2);
    amps[k0] = a;
    amps[k1] = a;
    Ok(SpinState {
        j,
        amplitudes: amps,
    })
}

/// `exp{i theta0 [Jx sin(phi0) - Jy cos(phi0)]} |j, -j>`, computed by
/// exponentiating the Hermitian generator's spectrum.
pub fn coherent_spin_state(j: SpinQuantum, theta0: f64, phi0: f64) -> Result<SpinState> {
    let ops = build_spin_operators(j);
    // exp(i theta K) = exp(-i G) with G = -theta K
    let g = HermitianOperator::linear_combination(&[
        (-theta0 * phi0.sin(), &ops.jx),
        (theta0 * phi0.cos(), &ops.jy),
    ])?;
    let psi = g
        .eigensystem()?
        .evolve(&SpinState::lowest_weight(j).amplitudes.view(), 1.0)?;
    SpinState::normalized(j, psi)
}

/// Matrix-free action of the spin components on amplitude vectors, O(dim).
#[derive(Clone, Debug)]
pub struct LadderAction {
    j: SpinQuantum,
    // up[k] = <m_k + 1| J+ |m_k>
    up: Vec<f64>,
}

impl LadderAction {
    pub fn new(j: SpinQuantum) -> Self {
        let up = (0..j.dim() - 1)
            .map(|k| j.ladder_coefficient(j.m(k), true))
            .collect();
        Self { j, up }
    }

    pub fn spin(&self) -> SpinQuantum {
        self.j
    }

    pub fn jz(&self, v: &[C64]) -> Vec<C64> {
        v.iter().enumerate().map(|(k, z)| z * self.j.m(k)).collect()
    }

    pub fn jx(&self, v: &[C64]) -> Vec<C64> {
        self.ladder(v, c(0.5), c(0.5))
    }

    pub fn jy(&self, v: &[C64]) -> Vec<C64> {
        // Jy = (J+ - J-) / 2i
        self.ladder(v, C64::new(0.0, -0.5), C64::new(0.0, 0.5))
    }

    /// `(a J+ + b J-) v`.
    fn ladder(&self, v: &[C64], a: C64, b: C64) -> Vec<C64> {
        let n = v.len();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for k in 0..n.saturating_sub(1) {
            let u = self.up[k];
            out[k + 1] += a * u * v[k];
            out[k] += b * u * v[k + 1];
        }
        out
    }
}
