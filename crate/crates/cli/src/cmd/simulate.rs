use serde::{Deserialize, Serialize};
use twophoton::config::DetectorConfig;
use twophoton::lindblad::{
    build_dissipators, build_hamiltonian, click_probability, evolve, false_click_probability,
    DensityOperator, EvolveOptions, HilbertSpace, Observables, Tolerances,
};
use twophoton::metrics::combine;

use crate::io::{read_config, write_json, write_text, CliError};
use crate::source::DetectorSource;
use crate::Context;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub detector: DetectorSource,
    #[serde(default = "default_photons")]
    pub input_photons: usize,
    /// Defaults to the smallest truncation exact for the input.
    #[serde(default)]
    pub truncation: Option<HilbertSpace>,
    /// Output instants, evenly spaced from 0 to `t_end_ns` inclusive.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Defaults to the detector's capture time.
    #[serde(default)]
    pub t_end_ns: Option<f64>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

fn default_photons() -> usize {
    2
}

fn default_samples() -> usize {
    101
}

#[derive(Serialize)]
struct Summary {
    detector: DetectorConfig,
    truncation: HilbertSpace,
    input_photons: usize,
    t_end_ns: f64,
    tolerances: Tolerances,
    p_click: f64,
    p_dark: f64,
    /// Only defined for a two-photon input.
    fidelity: Option<f64>,
    final_state: Observables,
    min_eigenvalue: f64,
    max_trace_drift: f64,
    max_hermiticity_error: f64,
    steps: usize,
    rejected_steps: usize,
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg: SimulateConfig = read_config(ctx.config.as_deref())?;
    let detector = cfg.detector.resolve()?;
    let p = detector.to_params()?;
    let space = cfg
        .truncation
        .unwrap_or_else(|| HilbertSpace::exact_for_input(cfg.input_photons));
    let t_end = cfg.t_end_ns.map_or(p.capture_time, |t| t * 1e-9);
    if cfg.samples < 2 || !(t_end > 0.0 && t_end.is_finite()) {
        return Err(CliError::config("need samples ≥ 2 and a positive end time"));
    }
    let tolerances = ctx.tolerances(cfg.tolerances.unwrap_or_default());
    tolerances.validate()?;

    let h = build_hamiltonian(&space, &p)?;
    let d = build_dissipators(&space, &p)?;
    let rho0 = DensityOperator::storage_fock(space, cfg.input_photons)?;
    let n = cfg.samples - 1;
    let times: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
    let run = evolve(&rho0, &h, &d, &times, &EvolveOptions { tolerances })?;
    write_text(&ctx.out, "trajectory.csv", &run.to_csv())?;

    let p_click = click_probability(&run.final_state, p.efficiency);
    let p_dark = false_click_probability(p.sink_g, t_end, p.efficiency);
    let summary = Summary {
        truncation: space,
        input_photons: cfg.input_photons,
        t_end_ns: cfg.t_end_ns.unwrap_or(detector.capture_time_ns),
        tolerances,
        p_click,
        p_dark,
        fidelity: (cfg.input_photons == 2).then(|| combine(p_click, p_dark)),
        final_state: run.final_state.observables(),
        min_eigenvalue: run.final_state.min_eigenvalue(),
        max_trace_drift: run.max_trace_drift,
        max_hermiticity_error: run.max_hermiticity_error,
        steps: run.stats.steps,
        rejected_steps: run.stats.rejected,
        detector,
    };
    write_json(&ctx.out, "summary.json", &summary)
}
