#![allow(dead_code)]

use twophoton::config::{set_a, DetectorConfig};
use twophoton::lindblad::*;

/// Set A frequencies with every coupling and rate switched off.
pub fn quiet_config() -> DetectorConfig {
    DetectorConfig {
        kerr1_mhz: 0.0,
        kerr2_mhz: 0.0,
        g21_mhz: 0.0,
        coupling_mhz: 0.0,
        rabi_mhz: 0.0,
        loss1_mhz: 0.0,
        loss2_mhz: 0.0,
        gamma_eg_mhz: 0.0,
        kappa_eg_mhz: 0.0,
        dephasing_e_mhz: 0.0,
        dephasing_f_mhz: 0.0,
        ..set_a()
    }
}

pub fn quiet() -> ModelParams {
    quiet_config().to_params().unwrap()
}

pub fn run(
    p: &ModelParams,
    space: HilbertSpace,
    rho0: &DensityOperator,
    times: &[f64],
) -> EvolutionResult {
    let h = build_hamiltonian(&space, p).unwrap();
    let d = build_dissipators(&space, p).unwrap();
    evolve(rho0, &h, &d, times, &EvolveOptions::default()).unwrap()
}

pub fn linspace(t_end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
}
