use serde::{Deserialize, Serialize};
use twophoton::circuit::{
    coupler_off_point, coupling_set, odd_parity_fluxes, CouplerKind, CouplerSpec, OddParityPoint,
    ResonatorSpec, DEFAULT_K_MAX,
};
use twophoton::config::reference_resonators;
use twophoton::units::{to_ghz, to_mhz};

use crate::io::{read_config, write_json, write_text, CliError};
use crate::Context;

/// Inclusive flux range in units of `Φ0`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl FluxRange {
    fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        if self.points == 0
            || !self.min.is_finite()
            || !self.max.is_finite()
            || (self.points > 1 && self.max <= self.min)
        {
            return Err(CliError::config(format!(
                "{name}: need points ≥ 1 and max > min"
            )));
        }
        if self.points == 1 {
            return Ok(vec![self.min]);
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| self.min + step * i as f64)
            .collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplerConfig {
    #[serde(default = "reference_resonators")]
    pub resonators: [ResonatorSpec; 2],
    pub coupler: CouplerSpec,
    pub flux: FluxRange,
    /// Scanned only for a BiSQUID; otherwise the coupler's own value is used.
    #[serde(default)]
    pub flux_prime: Option<FluxRange>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
}

fn default_k_max() -> usize {
    DEFAULT_K_MAX
}

#[derive(Serialize)]
struct ParityPoint {
    flux: f64,
    flux_prime: f64,
    delta: f64,
    effective_energy_ghz: f64,
    coupling_vanishes: bool,
}

impl From<OddParityPoint> for ParityPoint {
    fn from(p: OddParityPoint) -> Self {
        ParityPoint {
            flux: p.flux,
            flux_prime: p.flux_prime,
            delta: p.delta,
            effective_energy_ghz: to_ghz(p.effective_energy),
            coupling_vanishes: p.coupling_vanishes,
        }
    }
}

#[derive(Serialize)]
struct Summary {
    odd_parity: Vec<ParityPoint>,
    /// `(Φ_c, Φ'_c)` that switch a BiSQUID off, if it can be.
    off_point: Option<[f64; 2]>,
    g21_max_mhz: f64,
    g21_max_at: [f64; 2],
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg: CouplerConfig = read_config(ctx.config.as_deref())?;
    cfg.coupler.validate()?;
    let fluxes = cfg.flux.values("flux")?;
    let primes = match cfg.flux_prime {
        Some(r) if cfg.coupler.kind == CouplerKind::BiSquid => r.values("flux_prime")?,
        Some(_) => {
            return Err(CliError::config(
                "flux_prime applies only to a bi_squid coupler",
            ))
        }
        None => vec![cfg.coupler.flux_prime],
    };

    let mut csv = String::from("phi_c,phi_c_prime,E_eff_GHz,g21_MHz,parity_residual\n");
    let mut best = (0.0_f64, [f64::NAN; 2]);
    for &fp in &primes {
        for &f in &fluxes {
            let d = coupling_set(&cfg.resonators, &cfg.coupler.with_fluxes(f, fp), cfg.k_max)?;
            // Adding zero folds -0 into +0.
            let g21 = to_mhz(d.couplings.g21) + 0.0;
            if g21.abs() > best.0.abs() || best.1[0].is_nan() {
                best = (g21, [f, fp]);
            }
            let residual = d.coupler.delta.cos().abs();
            csv.push_str(&format!(
                "{f:.9},{fp:.9},{:.12e},{g21:.12e},{residual:.12e}\n",
                to_ghz(d.coupler.effective_energy)
            ));
        }
    }
    write_text(&ctx.out, "coupler_map.csv", &csv)?;

    let off_point = match cfg.coupler.kind {
        CouplerKind::BiSquid if cfg.coupler.asymmetry <= 1.0 => {
            Some(coupler_off_point(&cfg.coupler)?.into())
        }
        _ => None,
    };
    let summary = Summary {
        odd_parity: odd_parity_fluxes(&cfg.resonators, &cfg.coupler)?
            .into_iter()
            .map(Into::into)
            .collect(),
        off_point,
        g21_max_mhz: best.0,
        g21_max_at: best.1,
    };
    write_json(&ctx.out, "coupler_summary.json", &summary)
}
