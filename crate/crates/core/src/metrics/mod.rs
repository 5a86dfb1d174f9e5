//! Detection fidelity, parameter maps and optimisation.

mod optimize;
mod sweep;

pub use optimize::{optimize, OptimizeSpec, Optimum};
pub use sweep::{
    sweep, Axis, AxisParameter, AxisScale, FidelityMap, MapCell, RwaGuards, SweepSpec,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lindblad::{
    build_dissipators, build_hamiltonian, click_probability, evolve, false_click_probability,
    DensityOperator, EvolveOptions, HilbertSpace, ModelParams, Tolerances,
};

/// How a single fidelity evaluation is run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FidelityOptions {
    #[serde(default = "default_photons")]
    pub input_photons: usize,
    /// Defaults to the smallest truncation that is exact for the input.
    #[serde(default)]
    pub truncation: Option<HilbertSpace>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_photons() -> usize {
    2
}

impl Default for FidelityOptions {
    fn default() -> Self {
        FidelityOptions {
            input_photons: 2,
            truncation: None,
            tolerances: Tolerances::default(),
        }
    }
}

impl FidelityOptions {
    pub fn space(&self) -> HilbertSpace {
        self.truncation
            .unwrap_or_else(|| HilbertSpace::exact_for_input(self.input_photons))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    /// Click probability for the photon-number input.
    pub p_click: f64,
    /// Dark-count probability standing in for all fewer-photon inputs.
    pub p_dark: f64,
    pub fidelity: f64,
    pub rhs_evals: usize,
}

/// `(1 + P_clk|n − P_dark)/2`.
pub fn combine(p_click: f64, p_dark: f64) -> f64 {
    0.5 * (1.0 + p_click - p_dark)
}

/// Fidelity at the default truncation `(5, 3, 3)` for a two-photon input.
pub fn fidelity(p: &ModelParams) -> Result<FidelityPoint> {
    fidelity_with(
        p,
        &FidelityOptions {
            truncation: Some(HilbertSpace::default()),
            ..FidelityOptions::default()
        },
    )
}

pub fn fidelity_with(p: &ModelParams, options: &FidelityOptions) -> Result<FidelityPoint> {
    let space = options.space();
    let h = build_hamiltonian(&space, p)?;
    let d = build_dissipators(&space, p)?;
    let rho0 = DensityOperator::storage_fock(space, options.input_photons)?;
    let run = evolve(
        &rho0,
        &h,
        &d,
        &[p.capture_time],
        &EvolveOptions {
            tolerances: options.tolerances,
        },
    )?;
    let p_click = click_probability(&run.final_state, p.efficiency);
    let p_dark = false_click_probability(p.sink_g, p.capture_time, p.efficiency);
    Ok(FidelityPoint {
        p_click,
        p_dark,
        fidelity: combine(p_click, p_dark),
        rhs_evals: run.stats.rhs_evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::set_a;

    #[test]
    fn blind_detector_is_a_coin_flip() {
        let mut c = set_a();
        c.efficiency = 0.0;
        let f = fidelity_with(&c.to_params().unwrap(), &FidelityOptions::default()).unwrap();
        assert_eq!(f.fidelity, 0.5);
    }

    #[test]
    fn dark_counts_only_hurt() {
        let mut last = f64::INFINITY;
        for gt in [0.0, 0.01, 0.1, 1.0, 10.0] {
            let f = combine(0.9, false_click_probability(gt, 1.0, 0.995));
            assert!(f < last);
            last = f;
        }
    }
}
