//! Dicke-basis populations and the Husimi Q function on the sphere.

use std::f64::consts::PI;
use std::path::Path;

use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{hermiticity_error, Eigensystem, C64};
use crate::spin::{build_spin_operators, SpinQuantum, SpinState};
use crate::table::DatTable;

const PROB_TOL: f64 = 1e-10;

/// Populations `|<j,m|psi>|^2`, `m` ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DickeDistribution {
    j: SpinQuantum,
    probabilities: Vec<f64>,
}

impl DickeDistribution {
    pub fn new(j: SpinQuantum, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != j.dim() {
            return Err(Error::DimensionMismatch {
                expected: j.dim(),
                found: probabilities.len(),
            });
        }
        if probabilities.iter().any(|&p| !(p >= 0.0)) {
            return Err(domain("probabilities must be finite and non-negative"));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { j, probabilities })
    }

    pub fn spin(&self) -> SpinQuantum {
        self.j
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn to_table(&self) -> DatTable {
        DatTable::new()
            .comment(format!("Dicke populations, j = {}, m ascending", self.j))
            .column("m", self.j.m_values().collect())
            .column("p", self.probabilities.clone())
    }

    pub fn write_dat(&self, path: &Path) -> Result<()> {
        self.to_table().write(path)
    }
}

pub fn dicke_distribution(psi: &SpinState) -> DickeDistribution {
    let total = psi.norm().powi(2);
    DickeDistribution {
        j: psi.spin(),
        probabilities: psi
            .amplitudes()
            .iter()
            .map(|z| z.norm_sqr() / total)
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadMetrics {
    pub mean_m: f64,
    pub std_m: f64,
    /// `1 / sum p_m^2`.
    pub participation_ratio: f64,
}

pub fn spread_metrics(dist: &DickeDistribution) -> SpreadMetrics {
    let j = dist.j;
    let p = &dist.probabilities;
    let mean: f64 = p.iter().enumerate().map(|(k, w)| w * j.m(k)).sum();
    let var: f64 = p
        .iter()
        .enumerate()
        .map(|(k, w)| w * (j.m(k) - mean).powi(2))
        .sum();
    SpreadMetrics {
        mean_m: mean,
        std_m: var.max(0.0).sqrt(),
        participation_ratio: 1.0 / p.iter().map(|w| w * w).sum::<f64>(),
    }
}

/// Sample points on the sphere with quadrature weights in `d(cos theta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereGrid {
    /// Ascending in `[0, pi]`.
    pub theta: Vec<f64>,
    /// Uniform in `[0, 2 pi)`.
    pub phi: Vec<f64>,
    /// Weights for `int_0^pi g(theta) sin(theta) d theta`.
    pub theta_weights: Vec<f64>,
}

pub const DEFAULT_GRID: (usize, usize) = (181, 181);

impl SphereGrid {
    /// Gauss-Legendre nodes in `cos theta`, uniform `phi`.
    pub fn gauss(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(domain("grid sizes must be >= 1"));
        }
        let (x, w) = crate::linalg::gauss_legendre(n_theta);
        // x ascending means theta descending; flip.
        let theta = x.iter().rev().map(|c| c.acos()).collect();
        let theta_weights = w.into_iter().rev().collect();
        Ok(Self {
            theta,
            phi: uniform_phi(n_phi),
            theta_weights,
        })
    }

    /// Equally spaced `theta` including both poles, trapezoid weights.
    pub fn uniform(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi == 0 {
            return Err(domain("uniform grid needs n_theta >= 2 and n_phi >= 1"));
        }
        let h = PI / (n_theta - 1) as f64;
        let theta: Vec<f64> = (0..n_theta).map(|k| k as f64 * h).collect();
        let theta_weights = theta
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let end = k == 0 || k == n_theta - 1;
                t.sin() * h * if end { 0.5 } else { 1.0 }
            })
            .collect();
        Ok(Self {
            theta,
            phi: uniform_phi(n_phi),
            theta_weights,
        })
    }

    pub fn default_grid() -> Self {
        Self::gauss(DEFAULT_GRID.0, DEFAULT_GRID.1).expect("nonempty")
    }

    fn phi_weight(&self) -> f64 {
        2.0 * PI / self.phi.len() as f64
    }
}

fn uniform_phi(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// Husimi function `Q(theta, phi) = <theta,phi|rho|theta,phi> / pi` on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct QGrid {
    pub j: SpinQuantum,
    pub grid: SphereGrid,
    /// `values[(i, k)] = Q(theta_i, phi_k)`.
    pub values: Array2<f64>,
}

impl QGrid {
    /// `int Q sin(theta) d theta d phi`, equal to `4 / (2j + 1)` for unit
    /// trace.
    pub fn sphere_integral(&self) -> f64 {
        self.weighted_sum(|q| q)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `(theta, phi)` of the largest value.
    pub fn argmax(&self) -> (f64, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for ((i, k), &q) in self.values.indexed_iter() {
            if q > best.2 {
                best = (i, k, q);
            }
        }
        (self.grid.theta[best.0], self.grid.phi[best.1])
    }

    /// Effective solid angle `(int Q)^2 / int Q^2`; `4 pi` for a uniform Q.
    pub fn occupied_solid_angle(&self) -> f64 {
        let s1 = self.sphere_integral();
        s1 * s1 / self.weighted_sum(|q| q * q)
    }

    fn weighted_sum(&self, g: impl Fn(f64) -> f64) -> f64 {
        let wphi = self.grid.phi_weight();
        self.values
            .outer_iter()
            .zip(&self.grid.theta_weights)
            .map(|(row, w)| w * wphi * row.iter().map(|&q| g(q)).sum::<f64>())
            .sum()
    }

    pub fn to_table(&self) -> DatTable {
        let n = self.values.len();
        let (mut th, mut ph, mut q) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for ((i, k), &v) in self.values.indexed_iter() {
            th.push(self.grid.theta[i]);
            ph.push(self.grid.phi[k]);
            q.push(v);
        }
        DatTable::new()
            .comment(format!(
                "Husimi Q = <theta,phi|rho|theta,phi>/pi, j = {}",
                self.j
            ))
            .comment(format!(
                "{} x {} grid, theta outer, phi inner",
                self.grid.theta.len(),
                self.grid.phi.len()
            ))
            .column("theta", th)
            .column("phi", ph)
            .column("Q", q)
    }

    pub fn metadata(&self) -> serde_json::Value {
        serde_json::json!({
            "j": self.j.j(),
            "n_theta": self.grid.theta.len(),
            "n_phi": self.grid.phi.len(),
            "theta_quadrature": "weights for sin(theta) d theta",
            "theta_weights": self.grid.theta_weights,
            "prefactor": "1/pi",
            "sphere_integral": self.sphere_integral(),
            "expected_integral": 4.0 / self.j.dim() as f64,
            "max": self.max(),
            "occupied_solid_angle": self.occupied_solid_angle(),
        })
    }

    /// Write `<stem>.dat` and `<stem>.json`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        self.to_table().write(&dir.join(format!("{stem}.dat")))?;
        let text = serde_json::to_string_pretty(&self.metadata())?;
        std::fs::write(dir.join(format!("{stem}.json")), text + "\n")?;
        Ok(())
    }
}

/// `e^{-i theta Jy} |j,-j>` for each `theta`; the coherent state at
/// `(theta, phi)` is `e^{-i phi Jz}` applied to this row, up to a global
/// phase.
fn coherent_rows(j: SpinQuantum, theta: &[f64]) -> Result<Vec<Array1<C64>>> {
    let jy = Eigensystem::of_matrix(&build_spin_operators(j).jy.matrix().view())?;
    let low = SpinState::lowest_weight(j);
    theta
        .iter()
        .map(|&t| jy.evolve(&low.amplitudes().view(), t))
        .collect()
}

fn evaluate<F>(j: SpinQuantum, grid: &SphereGrid, node: F) -> Result<QGrid>
where
    F: Fn(&[C64]) -> f64 + Sync,
{
    if grid.theta.is_empty() || grid.phi.is_empty() {
        return Err(domain("grid must be nonempty"));
    }
    let rows = coherent_rows(j, &grid.theta)?;
    let n = j.dim();
    let ms: Vec<f64> = j.m_values().collect();
    let values: Vec<Vec<f64>> = rows
        .par_iter()
        .map(|row| {
            let mut cs = vec![C64::new(0.0, 0.0); n];
            grid.phi
                .iter()
                .map(|&phi| {
                    for k in 0..n {
                        cs[k] = row[k] * C64::from_polar(1.0, -phi * ms[k]);
                    }
                    (node(&cs) / PI).max(0.0)
                })
                .collect()
        })
        .collect();
    let flat: Vec<f64> = values.into_iter().flatten().collect();
    Ok(QGrid {
        j,
        grid: grid.clone(),
        values: Array2::from_shape_vec((grid.theta.len(), grid.phi.len()), flat)
            .expect("rows have phi length"),
    })
}

/// Q function of a pure state.
pub fn husimi_q(psi: &SpinState, grid: &SphereGrid) -> Result<QGrid> {
    let amps = psi.amplitudes().clone();
    evaluate(psi.spin(), grid, move |cs| {
        cs.iter()
            .zip(amps.iter())
            .map(|(c, a)| c.conj() * a)
            .sum::<C64>()
            .norm_sqr()
    })
}

/// Q function of a density matrix on the Dicke sector of `j`.
pub fn husimi_q_density(rho: &Array2<C64>, j: SpinQuantum, grid: &SphereGrid) -> Result<QGrid> {
    if rho.nrows() != j.dim() || rho.ncols() != j.dim() {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            found: rho.nrows(),
        });
    }
    let herm = hermiticity_error(&rho.view());
    if herm > 1e-10 {
        return Err(Error::NotHermitian(herm));
    }
    let tr: C64 = rho.diag().sum();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(domain(format!("density matrix trace is {tr}, not 1")));
    }
    let rho = rho.clone();
    evaluate(j, grid, move |cs| {
        let v = ndarray::ArrayView1::from(cs);
        let w = rho.dot(&v);
        v.iter()
            .zip(w.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::spin::{coherent_spin_state, initial_probe_state};
    use proptest::prelude::*;

    fn spin(j: f64) -> SpinQuantum {
        SpinQuantum::new(j).unwrap()
    }

    #[test]
    fn distribution_examples() {
        let j = spin(4.0);
        let probe = dicke_distribution(&initial_probe_state(j).unwrap());
        let k0 = j.index_of(0.0).unwrap();
        assert!((probe.probabilities()[k0] - 0.5).abs() < 1e-15);
        assert!((probe.probabilities()[k0 + 1] - 0.5).abs() < 1e-15);
        let m = spread_metrics(&probe);
        assert!((m.mean_m - 0.5).abs() < 1e-15);
        assert!((m.std_m - 0.5).abs() < 1e-15);
        assert!((m.participation_ratio - 2.0).abs() < 1e-12);

        let low = dicke_distribution(&SpinState::lowest_weight(j));
        assert_eq!(low.probabilities()[0], 1.0);
        let m = spread_metrics(&low);
        assert_eq!((m.mean_m, m.std_m, m.participation_ratio), (-4.0, 0.0, 1.0));

        let n = j.dim();
        let uniform = DickeDistribution::new(j, vec![1.0 / n as f64; n]).unwrap();
        assert!((spread_metrics(&uniform).participation_ratio - n as f64).abs() < 1e-10);
    }

    #[test]
    fn distribution_validation() {
        let j = spin(1.0);
        assert!(DickeDistribution::new(j, vec![0.5, 0.5]).is_err());
        assert!(DickeDistribution::new(j, vec![0.5, 0.6, -0.1]).is_err());
        assert!(DickeDistribution::new(j, vec![0.5, 0.6, 0.0]).is_err());
    }

    #[test]
    fn row_cache_matches_direct_coherent_states() {
        let j = spin(3.5);
        let grid = SphereGrid::gauss(7, 5).unwrap();
        let rows = coherent_rows(j, &grid.theta).unwrap();
        for (i, &theta) in grid.theta.iter().enumerate() {
            for &phi in &grid.phi {
                let direct = coherent_spin_state(j, theta, phi).unwrap();
                let cached: Array1<C64> = rows[i]
                    .iter()
                    .enumerate()
                    .map(|(k, z)| z * C64::from_polar(1.0, -phi * j.m(k)))
                    .collect();
                let ov: C64 = direct
                    .amplitudes()
                    .iter()
                    .zip(cached.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                assert!((ov.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lowest_weight_peaks_at_north_pole() {
        let j = spin(5.0);
        let grid = SphereGrid::uniform(37, 12).unwrap();
        let q = husimi_q(&SpinState::lowest_weight(j), &grid).unwrap();
        assert!((q.max() - 1.0 / PI).abs() < 1e-12);
        assert_eq!(q.argmax().0, 0.0);
    }

    #[test]
    fn maximally_mixed_is_flat() {
        let j = spin(2.0);
        let n = j.dim();
        let rho = Array2::from_diag(&Array1::from_elem(n, c(1.0 / n as f64)));
        let q = husimi_q_density(&rho, j, &SphereGrid::gauss(9, 8).unwrap()).unwrap();
        let want = 1.0 / (PI * n as f64);
        assert!(q.values.iter().all(|v| (v - want).abs() < 1e-12));
        assert!((q.occupied_solid_angle() - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn density_validation() {
        let j = spin(1.0);
        let grid = SphereGrid::gauss(3, 3).unwrap();
        let mut rho = Array2::from_diag(&Array1::from_elem(3, c(0.5)));
        assert!(husimi_q_density(&rho, j, &grid).is_err());
        rho[(0, 0)] = c(0.0);
        rho[(0, 1)] = C64::new(0.0, 0.3);
        assert!(matches!(
            husimi_q_density(&rho, j, &grid),
            Err(Error::NotHermitian(_))
        ));
        assert!(husimi_q_density(&Array2::zeros((2, 2)), j, &grid).is_err());
    }

    #[test]
    fn pure_and_density_paths_agree() {
        let j = spin(3.0);
        let psi = coherent_spin_state(j, 1.1, 0.4).unwrap();
        let a = psi.amplitudes();
        let rho = Array2::from_shape_fn((j.dim(), j.dim()), |(r, s)| a[r] * a[s].conj());
        let grid = SphereGrid::gauss(11, 10).unwrap();
        let q1 = husimi_q(&psi, &grid).unwrap();
        let q2 = husimi_q_density(&rho, j, &grid).unwrap();
        assert!(q1
            .values
            .iter()
            .zip(q2.values.iter())
            .all(|(x, y)| (x - y).abs() < 1e-13));
    }

    #[test]
    fn rotation_about_z_shifts_phi() {
        let j = spin(4.0);
        let grid = SphereGrid::gauss(15, 24).unwrap();
        let psi = coherent_spin_state(j, 0.9, 0.3).unwrap();
        let shift = 5;
        let alpha = grid.phi[shift];
        let rotated: Array1<C64> = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(k, z)| z * C64::from_polar(1.0, -alpha * j.m(k)))
            .collect();
        let q0 = husimi_q(&psi, &grid).unwrap();
        let q1 = husimi_q(&SpinState::new(j, rotated).unwrap(), &grid).unwrap();
        let n_phi = grid.phi.len();
        for i in 0..grid.theta.len() {
            for k in 0..n_phi {
                let a = q1.values[(i, (k + shift) % n_phi)];
                assert!((a - q0.values[(i, k)]).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn normalization_and_positivity(two_j in 1u32..30, theta in 0.0f64..PI, phi in 0.0f64..std::f64::consts::TAU) {
            let j = SpinQuantum::from_two_j(two_j).unwrap();
            let psi = coherent_spin_state(j, theta, phi).unwrap();
            let q = husimi_q(&psi, &SphereGrid::gauss(41, 41).unwrap()).unwrap();
            prop_assert!(q.min() >= 0.0);
            prop_assert!((q.sphere_integral() - 4.0 / j.dim() as f64).abs() < 1e-10);
            prop_assert!((dicke_distribution(&psi).total() - 1.0).abs() < 1e-10);
        }
    }
}
