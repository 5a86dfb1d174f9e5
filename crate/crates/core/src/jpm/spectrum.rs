use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::tridiag::{eigenvectors, lowest_eigenvalues, sturm_count};
use super::{jpm_potential, jpm_potential_curvature, jpm_potential_slope, JpmSpec};
use crate::error::{Error, Result};
use crate::numeric::bisect;

/// Uniform phase grid centred on `2πΦ_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub points: usize,
    /// The grid spans `2πΦ_b ± half_width`.
    pub half_width: f64,
}

impl Default for GridSpec {
    /// 12001 points over `2πΦ_b ± 2π`, a spacing of `2π/6000`.
    fn default() -> Self {
        GridSpec {
            points: 12001,
            half_width: 2.0 * PI,
        }
    }
}

impl GridSpec {
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// Same range with twice the resolution.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            points: 2 * self.points - 1,
            half_width: self.half_width,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.points < 1001 {
            return Err(Error::Config(format!(
                "grid needs at least 1001 points, got {}",
                self.points
            )));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::Config("grid half_width must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WellLabel {
    LeftWell,
    RightWell,
    Superbarrier,
}

/// Extrema of a double-well potential. Energies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleWell {
    /// Bottom of the shallow well `(φ_btm, U(φ_btm))`.
    pub shallow_bottom: (f64, f64),
    pub deep_bottom: (f64, f64),
    /// Barrier top `(φ_top, U(φ_top))`.
    pub barrier_top: (f64, f64),
    /// Small-oscillation frequency at the shallow-well bottom.
    pub shallow_plasma_frequency: f64,
}

impl DoubleWell {
    pub fn shallow_is_left(&self) -> bool {
        self.shallow_bottom.0 < self.barrier_top.0
    }

    pub fn shallow_label(&self) -> WellLabel {
        if self.shallow_is_left() {
            WellLabel::LeftWell
        } else {
            WellLabel::RightWell
        }
    }

    pub fn deep_label(&self) -> WellLabel {
        if self.shallow_is_left() {
            WellLabel::RightWell
        } else {
            WellLabel::LeftWell
        }
    }
}

/// Eigenindices (0-based) of the working levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleMap {
    pub g: usize,
    pub e: usize,
    pub f: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JpmSpectrum {
    pub spec: JpmSpec,
    pub grid: GridSpec,
    /// Grid abscissae.
    pub phi: Vec<f64>,
    /// Dimensionless eigenvalues in units of `8Ẽ_C`.
    pub eigenvalues: Vec<f64>,
    /// `8Ẽ_C` (rad/s).
    pub energy_unit: f64,
    /// Wavefunctions normalised so `Σ h ψ² = 1`.
    pub wavefunctions: Vec<Vec<f64>>,
    /// `⟨φ⟩` of each state.
    pub mean_phase: Vec<f64>,
    /// `None` when the potential has a single well.
    pub wells: Option<DoubleWell>,
    /// Empty when `wells` is `None`.
    pub labels: Vec<WellLabel>,
    pub roles: Option<RoleMap>,
}

impl JpmSpectrum {
    /// `E_λ` in rad/s.
    pub fn energy(&self, i: usize) -> f64 {
        self.eigenvalues[i] * self.energy_unit
    }

    /// `ω_λλ' = (E_λ − E_λ')` in rad/s.
    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.energy(from) - self.energy(to)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn roles(&self) -> Result<RoleMap> {
        self.roles
            .ok_or_else(|| Error::InsufficientStates("g, e and f could not be assigned".into()))
    }

    pub fn count(&self, label: WellLabel) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }

    /// Trapezoidal overlap of two retained states.
    pub fn overlap(&self, a: usize, b: usize) -> f64 {
        let h = self.grid.spacing();
        let (x, y) = (&self.wavefunctions[a], &self.wavefunctions[b]);
        let n = x.len();
        let inner: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
        h * (inner - 0.5 * (x[0] * y[0] + x[n - 1] * y[n - 1]))
    }

    /// Largest `|ψ|²` at either end of the grid.
    pub fn boundary_density(&self) -> f64 {
        self.wavefunctions
            .iter()
            .map(|w| (w[0] * w[0]).max(w[w.len() - 1] * w[w.len() - 1]))
            .fold(0.0, f64::max)
    }
}

/// States kept when the potential has only one well.
const SINGLE_WELL_STATES: usize = 20;
/// Extra retention above the barrier, in shallow-well plasma quanta.
const PLASMA_MARGIN: f64 = 10.0;
/// States closer than this to the barrier top (units of `8Ẽ_C`) count as above it.
const BARRIER_TIE: f64 = 1e-6;
/// `|⟨φ⟩ − φ_top|` below which a state is not assigned to the shallow side.
const MEAN_PHASE_TIE: f64 = 1e-9;
/// Relative splitting below which two levels are treated as degenerate.
const DEGENERATE: f64 = 1e-9;
const BOUNDARY_LEAK: f64 = 1e-12;

/// Locate the extrema of the JPM potential between `lo` and `hi`.
pub(crate) fn double_well(spec: &JpmSpec, lo: f64, hi: f64) -> Option<DoubleWell> {
    let n = 20_000;
    let step = (hi - lo) / n as f64;
    let slope = |x: f64| jpm_potential_slope(x, spec);
    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    let mut prev = slope(lo);
    for i in 1..=n {
        let b = lo + step * i as f64;
        let cur = slope(b);
        if prev.signum() != cur.signum() && cur != 0.0 {
            if let Ok(x) = bisect(slope, b - step, b, 1e-14) {
                if prev < 0.0 {
                    minima.push(x);
                } else {
                    maxima.push(x);
                }
            }
        }
        prev = cur;
    }
    if minima.len() < 2 {
        return None;
    }
    let u = |x: f64| jpm_potential(x, spec);
    let mut sorted = minima.clone();
    sorted.sort_by(|a, b| u(*a).total_cmp(&u(*b)));
    let tol = 1e-12 * spec.josephson_energy();
    // Equal depths: the left well is called shallow, deterministically.
    let (shallow, deep) = if (u(sorted[0]) - u(sorted[1])).abs() <= tol {
        (sorted[0].min(sorted[1]), sorted[0].max(sorted[1]))
    } else {
        (sorted[1], sorted[0])
    };
    let (a, b) = if shallow < deep {
        (shallow, deep)
    } else {
        (deep, shallow)
    };
    let top = maxima
        .iter()
        .cloned()
        .filter(|x| *x > a && *x < b)
        .max_by(|p, q| u(*p).total_cmp(&u(*q)))?;
    let ec_unit = 8.0 * spec.loaded_charging_energy();
    Some(DoubleWell {
        shallow_bottom: (shallow, u(shallow)),
        deep_bottom: (deep, u(deep)),
        barrier_top: (top, u(top)),
        shallow_plasma_frequency: (ec_unit * jpm_potential_curvature(shallow, spec)).sqrt(),
    })
}

/// Eigenpairs of `−½∂² + U/8Ẽ_C` by central differences with Dirichlet ends.
pub fn solve_spectrum(spec: &JpmSpec, grid: &GridSpec) -> Result<JpmSpectrum> {
    spec.validate()?;
    grid.validate()?;
    let n = grid.points;
    let h = grid.spacing();
    let lo = spec.parabola_centre() - grid.half_width;
    let phi: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    let unit = 8.0 * spec.loaded_charging_energy();
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = phi
        .iter()
        .map(|&x| inv_h2 + jpm_potential(x, spec) / unit)
        .collect();
    let off = -0.5 * inv_h2;

    let wells = double_well(spec, phi[0], phi[n - 1]);
    let keep = match &wells {
        Some(w) => {
            let top = w.barrier_top.1 / unit;
            let margin = PLASMA_MARGIN * w.shallow_plasma_frequency / unit;
            let below_top = sturm_count(&diag, off, top);
            sturm_count(&diag, off, top + margin).max(below_top + 2)
        }
        None => SINGLE_WELL_STATES,
    }
    .min(n);

    let values = lowest_eigenvalues(&diag, off, keep);
    let mut vectors = eigenvectors(&diag, off, &values, |lam| 1e-3 * lam.abs().max(1.0));
    localize_degenerate(&values, &mut vectors, &phi);
    let norm = 1.0 / h.sqrt();
    for v in vectors.iter_mut() {
        v.iter_mut().for_each(|x| *x *= norm);
    }
    let mean_phase: Vec<f64> = vectors
        .iter()
        .map(|v| h * v.iter().zip(&phi).map(|(p, x)| p * p * x).sum::<f64>())
        .collect();

    let mut spectrum = JpmSpectrum {
        spec: *spec,
        grid: *grid,
        phi,
        eigenvalues: values,
        energy_unit: unit,
        wavefunctions: vectors,
        mean_phase,
        wells,
        labels: Vec::new(),
        roles: None,
    };
    let leak = spectrum.boundary_density();
    if leak > BOUNDARY_LEAK {
        return Err(Error::BoundaryLeak(format!(
            "retained |ψ|² reaches {leak:e} at the grid edge; widen half_width"
        )));
    }
    if spectrum.wells.is_some() {
        spectrum.labels = classify_states(&spectrum)?;
        spectrum.roles = assign_roles(&spectrum);
    }
    Ok(spectrum)
}

/// Rotate exactly degenerate pairs (tunnelling splitting below machine
/// resolution) into the basis that diagonalises `φ`, so that each member
/// sits in one well. Without this the split between the two members would
/// be an accident of the start vectors.
fn localize_degenerate(values: &[f64], vectors: &mut [Vec<f64>], phi: &[f64]) {
    let mut i = 0;
    while i + 1 < values.len() {
        if values[i + 1] - values[i] <= DEGENERATE * values[i].abs().max(1.0) {
            let (a, b) = (&vectors[i], &vectors[i + 1]);
            let xaa: f64 = a.iter().zip(phi).map(|(p, x)| p * p * x).sum();
            let xbb: f64 = b.iter().zip(phi).map(|(p, x)| p * p * x).sum();
            let xab: f64 = a.iter().zip(b).zip(phi).map(|((p, q), x)| p * q * x).sum();
            let t = 0.5 * (2.0 * xab).atan2(xaa - xbb);
            let (s, c) = t.sin_cos();
            let na: Vec<f64> = a.iter().zip(b).map(|(p, q)| c * p + s * q).collect();
            let nb: Vec<f64> = a.iter().zip(b).map(|(p, q)| -s * p + c * q).collect();
            // Left-localised member first, each with a positive peak.
            let mean = |v: &[f64]| v.iter().zip(phi).map(|(p, x)| p * p * x).sum::<f64>();
            let (mut first, mut second) = if mean(&na) <= mean(&nb) {
                (na, nb)
            } else {
                (nb, na)
            };
            for v in [&mut first, &mut second] {
                let big = v
                    .iter()
                    .cloned()
                    .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
                if big < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            vectors[i] = first;
            vectors[i + 1] = second;
            i += 2;
        } else {
            i += 1;
        }
    }
}

/// Well labels by energy and mean phase.
///
/// Above the barrier top (or within `10⁻⁶` of it in units of `8Ẽ_C`) a state is
/// `Superbarrier`. Below the shallow-well bottom it belongs to the deep
/// well. Otherwise `⟨φ⟩` decides; a mean phase within `10⁻⁹` of `φ_top`
/// goes to the deep side.
pub fn classify_states(spectrum: &JpmSpectrum) -> Result<Vec<WellLabel>> {
    let wells = spectrum.wells.ok_or_else(|| {
        Error::NoBarrier(format!(
            "single-well potential at Φ_b = {}",
            spectrum.spec.bias_flux
        ))
    })?;
    let (phi_top, u_top) = wells.barrier_top;
    let u_btm = wells.shallow_bottom.1;
    let shallow_left = wells.shallow_is_left();
    Ok((0..spectrum.len())
        .map(|i| {
            let e = spectrum.energy(i);
            if e > u_top - BARRIER_TIE * spectrum.energy_unit {
                WellLabel::Superbarrier
            } else if e < u_btm {
                wells.deep_label()
            } else {
                let m = spectrum.mean_phase[i];
                let on_shallow_side = if shallow_left {
                    m < phi_top - MEAN_PHASE_TIE
                } else {
                    m > phi_top + MEAN_PHASE_TIE
                };
                if on_shallow_side {
                    wells.shallow_label()
                } else {
                    wells.deep_label()
                }
            }
        })
        .collect())
}

fn assign_roles(spectrum: &JpmSpectrum) -> Option<RoleMap> {
    let wells = spectrum.wells?;
    let shallow: Vec<usize> = (0..spectrum.len())
        .filter(|&i| spectrum.labels[i] == wells.shallow_label())
        .collect();
    let f = (0..spectrum.len())
        .filter(|&i| spectrum.labels[i] == wells.deep_label())
        .max()?;
    if shallow.len() < 2 {
        return None;
    }
    Some(RoleMap {
        g: shallow[0],
        e: shallow[1],
        f,
    })
}

/// Effect of halving the grid spacing on the levels below the barrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConvergence {
    /// Largest relative eigenvalue change (relative to `max(|ε|, 1)`).
    pub max_relative_change: f64,
    /// Richardson order estimate from three successive refinements.
    pub observed_order: f64,
}

/// Doubling test over the states below the barrier (or all retained
/// states for a single well). Runs three extra solves.
pub fn grid_convergence(
    spec: &JpmSpec,
    grid: &GridSpec,
    tolerance: Option<f64>,
) -> Result<GridConvergence> {
    let s0 = solve_spectrum(spec, grid)?;
    let g1 = grid.refined();
    let g2 = g1.refined();
    let s1 = solve_spectrum(spec, &g1)?;
    let s2 = solve_spectrum(spec, &g2)?;
    let window: Vec<usize> = (0..s0.len())
        .filter(|&i| {
            s0.labels
                .get(i)
                .map_or(true, |l| *l != WellLabel::Superbarrier)
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut orders = Vec::new();
    for &i in &window {
        let (a, b, c) = (s0.eigenvalues[i], s1.eigenvalues[i], s2.eigenvalues[i]);
        worst = worst.max((b - a).abs() / a.abs().max(1.0));
        let (d1, d2) = (a - b, b - c);
        if d1.abs() > 1e-9 && d2.abs() > 1e-12 {
            orders.push((d1 / d2).abs().log2());
        }
    }
    orders.sort_by(f64::total_cmp);
    let observed_order = if orders.is_empty() {
        f64::NAN
    } else {
        orders[orders.len() / 2]
    };
    if let Some(tol) = tolerance {
        if worst > tol {
            return Err(Error::NotConverged(format!(
                "grid doubling changes eigenvalues by {worst:e} (tolerance {tol:e})"
            )));
        }
    }
    Ok(GridConvergence {
        max_relative_change: worst,
        observed_order,
    })
}
