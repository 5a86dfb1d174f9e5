use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lumped LC resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorSpec {
    /// Farads.
    pub capacitance: f64,
    /// Henries.
    pub inductance: f64,
    /// Single-photon loss rate `Γ_j` (rad/s).
    #[serde(default)]
    pub single_photon_loss: f64,
}

impl ResonatorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.capacitance > 0.0 && self.capacitance.is_finite()) {
            return Err(Error::Config(
                "resonator capacitance must be positive".into(),
            ));
        }
        if !(self.inductance > 0.0 && self.inductance.is_finite()) {
            return Err(Error::Config(
                "resonator inductance must be positive".into(),
            ));
        }
        if !(self.single_photon_loss >= 0.0) {
            return Err(Error::Config("resonator loss must be non-negative".into()));
        }
        Ok(())
    }
}

/// Quantities of one resonator dressed by the coupler. Energies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorDerived {
    /// Bare `E_C = e^2/2C`.
    pub charging_energy: f64,
    /// Bare `E_L`.
    pub inductive_energy: f64,
    /// `Ẽ_C` from the loaded capacitance.
    pub loaded_charging_energy: f64,
    /// `Ẽ_L = E_L − E_eff u_2`.
    pub renormalized_inductive_energy: f64,
    /// `ω_osc = sqrt(8 Ẽ_C Ẽ_L)`.
    pub bare_frequency: f64,
    /// `ω = ω_osc − 2K`.
    pub frequency: f64,
    pub phase_zpf: f64,
    pub charge_zpf: f64,
    pub self_kerr: f64,
    /// `G_3` of the cubic term.
    pub cubic_strength: f64,
    /// `Λ = G_3/ω`.
    pub sw_parameter: f64,
    /// Set when `|Λ| ≥ 0.1` and the Kerr estimate is unreliable.
    pub sw_flag: bool,
}
