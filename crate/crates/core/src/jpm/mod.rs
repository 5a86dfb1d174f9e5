//! Flux-biased rf-SQUID photomultiplier: spectrum, well classification,
//! charge matrix elements and everything derived from them.

mod charge;
mod dephasing;
mod drive;
mod spectrum;
mod tridiag;

pub use charge::{charge_matrix, rate_table, AbsoluteRates, ChargeMatrix, RateTable};
pub use dephasing::{dephasing_rates, DephasingRates, DEFAULT_FLUX_STEP};
pub use drive::{
    drive_and_coupling, drive_product_for_rabi, gate_capacitance_for_coupling, DriveCoupling,
};
pub use spectrum::{
    classify_states, grid_convergence, solve_spectrum, DoubleWell, GridConvergence, GridSpec,
    JpmSpectrum, RoleMap, WellLabel,
};
pub use tridiag::{lowest_eigenvalues, sturm_count};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

/// JPM circuit parameters (SI units, flux in units of `Φ0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JpmSpec {
    /// Junction critical current `I0` (A).
    pub critical_current: f64,
    /// Loop inductance `L_S` (H).
    pub loop_inductance: f64,
    /// Shunt plus junction capacitance `C_d` (F).
    pub capacitance: f64,
    /// Capacitance `C_G` to the buffer resonator.
    #[serde(default)]
    pub gate_capacitance: f64,
    /// Capacitance `C_x` to the drive line.
    #[serde(default)]
    pub drive_capacitance: f64,
    /// Capacitance `C_κ` to the waveguide.
    #[serde(default)]
    pub waveguide_capacitance: f64,
    pub bias_flux: f64,
    /// Waveguide impedance `Z_w` (Ω).
    #[serde(default = "default_impedance")]
    pub waveguide_impedance: f64,
    /// Drive amplitude `V_dr` (V).
    #[serde(default)]
    pub drive_voltage: f64,
}

fn default_impedance() -> f64 {
    50.0
}

impl JpmSpec {
    pub fn validate(&self) -> Result<()> {
        let pos = [
            self.critical_current,
            self.loop_inductance,
            self.capacitance,
        ];
        if pos.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::Config(
                "jpm: critical_current, loop_inductance and capacitance must be positive".into(),
            ));
        }
        let nonneg = [
            self.gate_capacitance,
            self.drive_capacitance,
            self.waveguide_capacitance,
            self.drive_voltage,
        ];
        if nonneg.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(Error::Config(
                "jpm: coupling capacitances and drive voltage must be non-negative".into(),
            ));
        }
        if !self.bias_flux.is_finite() || !(self.waveguide_impedance > 0.0) {
            return Err(Error::Config(
                "jpm: bias_flux must be finite and waveguide_impedance positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_bias(mut self, bias_flux: f64) -> Self {
        self.bias_flux = bias_flux;
        self
    }

    /// `E_J^d` (rad/s).
    pub fn josephson_energy(&self) -> f64 {
        units::josephson_energy(self.critical_current)
    }

    /// `E_L^d` (rad/s).
    pub fn inductive_energy(&self) -> f64 {
        units::inductive_energy(self.loop_inductance)
    }

    /// Bare `E_C^d = e^2/2C_d` (rad/s).
    pub fn charging_energy(&self) -> f64 {
        units::charging_energy(self.capacitance)
    }

    /// `C̃_d = C_d + C_G + C_x + C_κ`.
    pub fn loaded_capacitance(&self) -> f64 {
        self.capacitance
            + self.gate_capacitance
            + self.drive_capacitance
            + self.waveguide_capacitance
    }

    /// `Ẽ_C^d`, the charging energy used in the Schrödinger equation.
    pub fn loaded_charging_energy(&self) -> f64 {
        units::charging_energy(self.loaded_capacitance())
    }

    /// Centre of the inductive parabola, `2πΦ_b`.
    pub fn parabola_centre(&self) -> f64 {
        2.0 * PI * self.bias_flux
    }
}

/// `U(φ) = ½E_L(φ − 2πΦ_b)² − E_J cos φ` (rad/s).
pub fn jpm_potential(phi: f64, spec: &JpmSpec) -> f64 {
    let x = phi - spec.parabola_centre();
    0.5 * spec.inductive_energy() * x * x - spec.josephson_energy() * phi.cos()
}

/// `dU/dφ`.
pub fn jpm_potential_slope(phi: f64, spec: &JpmSpec) -> f64 {
    spec.inductive_energy() * (phi - spec.parabola_centre()) + spec.josephson_energy() * phi.sin()
}

/// `d²U/dφ²`.
pub fn jpm_potential_curvature(phi: f64, spec: &JpmSpec) -> f64 {
    spec.inductive_energy() + spec.josephson_energy() * phi.cos()
}
