use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use twophoton::circuit::ResonatorSpec;
use twophoton::config::{reference_jpm, reference_resonators, Preset};
use twophoton::jpm::{
    charge_matrix, dephasing_rates, rate_table, solve_spectrum, GridSpec, JpmSpec, RateTable,
    DEFAULT_FLUX_STEP,
};
use twophoton::metrics::{fidelity_with, FidelityOptions, FidelityPoint};
use twophoton::units::{
    charging_energy, from_hz, inductive_energy, josephson_energy, to_ghz, to_mhz,
};

use crate::io::{read_config, write_json, CliError};
use crate::Context;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablesConfig {
    #[serde(default = "reference_jpm")]
    pub jpm: JpmSpec,
    #[serde(default = "reference_resonators")]
    pub resonators: [ResonatorSpec; 2],
    /// Critical current of the coupler's reference junction (A).
    #[serde(default = "default_coupler_current")]
    pub coupler_critical_current: f64,
    #[serde(default)]
    pub grid: GridSpec,
    /// 1/f flux-noise amplitude (units of `Φ0`) for the dephasing rates.
    #[serde(default = "default_noise")]
    pub noise_amplitude: f64,
    #[serde(default = "default_cutoff")]
    pub noise_cutoff_hz: f64,
    /// Evaluating the preset fidelities dominates the run time.
    #[serde(default = "default_true")]
    pub fidelities: bool,
    #[serde(default)]
    pub options: FidelityOptions,
}

fn default_coupler_current() -> f64 {
    50e-9
}

fn default_noise() -> f64 {
    1e-6
}

fn default_cutoff() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

impl Default for TablesConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields default")
    }
}

#[derive(Serialize)]
struct Dephasing {
    gamma_e_mhz: f64,
    gamma_f_mhz: f64,
}

#[derive(Serialize)]
struct Tables {
    /// Circuit energies `E/h`, in GHz.
    energies_ghz: BTreeMap<&'static str, f64>,
    omega_ge_ghz: f64,
    omega_ef_ghz: f64,
    rate_ratios: RateTable,
    dephasing: Dephasing,
    fidelities: BTreeMap<&'static str, FidelityPoint>,
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg: TablesConfig = match &ctx.config {
        Some(p) => read_config(Some(p))?,
        None => TablesConfig::default(),
    };
    let [r1, r2] = cfg.resonators;
    let energies_ghz = BTreeMap::from([
        (
            "E_J_coupler",
            to_ghz(josephson_energy(cfg.coupler_critical_current)),
        ),
        ("E_C1", to_ghz(charging_energy(r1.capacitance))),
        ("E_L1", to_ghz(inductive_energy(r1.inductance))),
        ("E_C2", to_ghz(charging_energy(r2.capacitance))),
        ("E_L2", to_ghz(inductive_energy(r2.inductance))),
        ("E_J_jpm", to_ghz(cfg.jpm.josephson_energy())),
        ("E_L_jpm", to_ghz(cfg.jpm.inductive_energy())),
        ("E_C_jpm", to_ghz(cfg.jpm.charging_energy())),
    ]);

    let s = solve_spectrum(&cfg.jpm, &cfg.grid)?;
    let r = s.roles()?;
    let rate_ratios = rate_table(&charge_matrix(&s, 0..s.len())?, &s)?;
    let d = dephasing_rates(
        &cfg.jpm,
        &cfg.grid,
        cfg.noise_amplitude,
        from_hz(cfg.noise_cutoff_hz),
        DEFAULT_FLUX_STEP,
    )?;

    let mut options = cfg.options;
    options.tolerances = ctx.tolerances(options.tolerances);
    let mut fidelities = BTreeMap::new();
    if cfg.fidelities {
        for (name, preset) in [("set_a", Preset::SetA), ("set_b", Preset::SetB)] {
            fidelities.insert(
                name,
                fidelity_with(&preset.config().to_params()?, &options)?,
            );
        }
    }
    let tables = Tables {
        energies_ghz,
        omega_ge_ghz: to_ghz(s.transition(r.e, r.g)),
        omega_ef_ghz: to_ghz(s.transition(r.f, r.e)),
        rate_ratios,
        dephasing: Dephasing {
            gamma_e_mhz: to_mhz(d.gamma_e),
            gamma_f_mhz: to_mhz(d.gamma_f),
        },
        fidelities,
    };
    write_json(&ctx.out, "tables.json", &tables)
}
