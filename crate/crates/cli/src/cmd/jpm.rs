use serde::{Deserialize, Serialize};
use twophoton::jpm::{
    charge_matrix, dephasing_rates, jpm_potential, rate_table, solve_spectrum, AbsoluteRates,
    DephasingRates, GridSpec, JpmSpec, RateTable, RoleMap, WellLabel, DEFAULT_FLUX_STEP,
};
use twophoton::units::{from_hz, from_mhz, to_ghz, to_mhz};

use crate::io::{read_config, write_json, write_text, CliError};
use crate::Context;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingConfig {
    /// 1/f flux-noise amplitude `A_Φ` (units of `Φ0`).
    pub amplitude: f64,
    pub cutoff_hz: f64,
    #[serde(default = "default_step")]
    pub flux_step: f64,
}

fn default_step() -> f64 {
    DEFAULT_FLUX_STEP
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JpmConfig {
    pub jpm: JpmSpec,
    #[serde(default)]
    pub grid: GridSpec,
    /// Extra bias fluxes for which the potential is tabulated.
    #[serde(default)]
    pub biases: Vec<f64>,
    #[serde(default)]
    pub dephasing: Option<DephasingConfig>,
    /// With both set the relative rate table is also given in MHz.
    #[serde(default)]
    pub gamma_eg_mhz: Option<f64>,
    #[serde(default)]
    pub kappa_eg_mhz: Option<f64>,
    /// Every n-th grid point goes to the wavefunction and potential tables.
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_stride() -> usize {
    10
}

#[derive(Serialize)]
struct Absolute {
    /// All entries in MHz (`rate/2π`).
    gamma_fe: f64,
    gamma_fg: f64,
    kappa_fe: f64,
    kappa_fg: f64,
    sink_g: f64,
    sink_e: f64,
    sink_f: f64,
}

impl From<AbsoluteRates> for Absolute {
    fn from(r: AbsoluteRates) -> Self {
        Absolute {
            gamma_fe: to_mhz(r.gamma_fe),
            gamma_fg: to_mhz(r.gamma_fg),
            kappa_fe: to_mhz(r.kappa_fe),
            kappa_fg: to_mhz(r.kappa_fg),
            sink_g: to_mhz(r.sink_g),
            sink_e: to_mhz(r.sink_e),
            sink_f: to_mhz(r.sink_f),
        }
    }
}

#[derive(Serialize)]
struct Dephasing {
    gamma_e_mhz: f64,
    gamma_f_mhz: f64,
    zeta_e: f64,
    zeta_f: f64,
}

impl From<DephasingRates> for Dephasing {
    fn from(d: DephasingRates) -> Self {
        Dephasing {
            gamma_e_mhz: to_mhz(d.gamma_e),
            gamma_f_mhz: to_mhz(d.gamma_f),
            zeta_e: d.zeta_e,
            zeta_f: d.zeta_f,
        }
    }
}

#[derive(Serialize, Default)]
struct Summary {
    retained_states: usize,
    double_well: bool,
    shallow_states: usize,
    deep_states: usize,
    /// 1-based eigenindices of g, e and f.
    roles: Option<[usize; 3]>,
    omega_ge_ghz: Option<f64>,
    omega_ef_ghz: Option<f64>,
    charge_asymmetry: Option<f64>,
    rates: Option<RateTable>,
    absolute_rates: Option<Absolute>,
    dephasing: Option<Dephasing>,
    note: Option<String>,
}

fn label(l: WellLabel) -> &'static str {
    match l {
        WellLabel::LeftWell => "left",
        WellLabel::RightWell => "right",
        WellLabel::Superbarrier => "above",
    }
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg: JpmConfig = read_config(ctx.config.as_deref())?;
    if cfg.stride == 0 {
        return Err(CliError::config("stride must be at least 1"));
    }
    let s = solve_spectrum(&cfg.jpm, &cfg.grid)?;

    let mut csv = String::from("index,energy_GHz,well,mean_phase\n");
    for i in 0..s.len() {
        let well = s.labels.get(i).map_or("none", |l| label(*l));
        csv.push_str(&format!(
            "{},{:.12e},{well},{:.9e}\n",
            i + 1,
            to_ghz(s.energy(i)),
            s.mean_phase[i]
        ));
    }
    write_text(&ctx.out, "spectrum.csv", &csv)?;

    let mut pot = String::from("bias_flux,phi,U_GHz\n");
    let mut biases = vec![cfg.jpm.bias_flux];
    biases.extend(&cfg.biases);
    for b in biases {
        let spec = cfg.jpm.with_bias(b);
        for &phi in s.phi.iter().step_by(cfg.stride) {
            let phi = phi - cfg.jpm.parabola_centre() + spec.parabola_centre();
            pot.push_str(&format!(
                "{b:.6},{phi:.9e},{:.9e}\n",
                to_ghz(jpm_potential(phi, &spec))
            ));
        }
    }
    write_text(&ctx.out, "potential.csv", &pot)?;

    let mut summary = Summary {
        retained_states: s.len(),
        ..Summary::default()
    };
    let Some(wells) = s.wells else {
        summary.note = Some(format!(
            "single-well potential at bias {}: no g, e, f assignment",
            cfg.jpm.bias_flux
        ));
        return write_json(&ctx.out, "jpm_summary.json", &summary);
    };
    summary.double_well = true;
    summary.shallow_states = s.count(wells.shallow_label());
    summary.deep_states = s.count(wells.deep_label());
    let r: RoleMap = s.roles()?;
    summary.roles = Some([r.g + 1, r.e + 1, r.f + 1]);
    summary.omega_ge_ghz = Some(to_ghz(s.transition(r.e, r.g)));
    summary.omega_ef_ghz = Some(to_ghz(s.transition(r.f, r.e)));

    let mut wf = String::from("phi,U_GHz,psi_g,psi_e,psi_f\n");
    for j in (0..s.phi.len()).step_by(cfg.stride) {
        let (g, e, f) = (
            s.wavefunctions[r.g][j],
            s.wavefunctions[r.e][j],
            s.wavefunctions[r.f][j],
        );
        wf.push_str(&format!(
            "{:.9e},{:.9e},{g:.9e},{e:.9e},{f:.9e}\n",
            s.phi[j],
            to_ghz(jpm_potential(s.phi[j], &s.spec))
        ));
    }
    write_text(&ctx.out, "wavefunctions.csv", &wf)?;

    let c = charge_matrix(&s, 0..s.len())?;
    let mut cm = String::from("a,b,re,im\n");
    for a in 0..s.len() {
        for b in 0..s.len() {
            let m = c.get(a, b);
            cm.push_str(&format!(
                "{},{},{:.12e},{:.12e}\n",
                a + 1,
                b + 1,
                m.re,
                m.im
            ));
        }
    }
    write_text(&ctx.out, "charge_matrix.csv", &cm)?;
    summary.charge_asymmetry = Some(c.asymmetry);

    let table = rate_table(&c, &s)?;
    summary.rates = Some(table);
    summary.absolute_rates = match (cfg.gamma_eg_mhz, cfg.kappa_eg_mhz) {
        (Some(g), Some(k)) => Some(table.absolute(from_mhz(g), from_mhz(k)).into()),
        (None, None) => None,
        _ => {
            return Err(CliError::config(
                "give both gamma_eg_mhz and kappa_eg_mhz, or neither",
            ))
        }
    };
    if let Some(d) = cfg.dephasing {
        summary.dephasing = Some(
            dephasing_rates(
                &cfg.jpm,
                &cfg.grid,
                d.amplitude,
                from_hz(d.cutoff_hz),
                d.flux_step,
            )?
            .into(),
        );
    }
    write_json(&ctx.out, "jpm_summary.json", &summary)
}
