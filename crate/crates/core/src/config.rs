//! Human-facing parameter sets and the built-in presets.
//!
//! [`DetectorConfig`] is written in lab units (GHz for frequencies, MHz
//! for couplings and rates, ns for times, all divided by 2π where it
//! applies) and converts to the angular [`ModelParams`] the engine uses.

use serde::{Deserialize, Serialize};

use crate::circuit::{CouplerKind, CouplerSpec, ResonatorSpec};
use crate::error::{config, Result};
use crate::jpm::JpmSpec;
use crate::lindblad::ModelParams;
use crate::units::{from_ghz, from_mhz};

/// Ratios of the JPM decay rates to the waveguide (`κ_eg`) and intrinsic
/// (`Γ_eg`) e→g rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateRatios {
    /// `Γ_fg/Γ_eg = κ_fg/κ_eg`.
    pub fg: f64,
    /// `Γ_fe/Γ_eg = κ_fe/κ_eg`.
    pub fe: f64,
    /// `γ_g/(Γ_eg + κ_eg)`.
    pub sink_g: f64,
    /// `γ_e/(Γ_eg + κ_eg)`.
    pub sink_e: f64,
    /// `γ_f/(Γ_eg + κ_eg)`.
    pub sink_f: f64,
}

impl Default for RateRatios {
    /// Values for the reference JPM at `Φ_b = 0.6316 Φ0`.
    fn default() -> Self {
        RateRatios {
            fg: 0.0184,
            fe: 0.0458,
            sink_g: 0.0007,
            sink_e: 0.4817,
            sink_f: 121.56,
        }
    }
}

fn default_filter_ratio() -> f64 {
    100.0
}

/// Full detector model in lab units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    pub omega1_ghz: f64,
    pub omega2_ghz: f64,
    pub omega_ge_ghz: f64,
    pub omega_ef_ghz: f64,
    pub omega_dr_ghz: f64,
    /// Filter frequency; defaults to `omega_ge_ghz`.
    #[serde(default)]
    pub omega_filter_ghz: Option<f64>,
    pub kerr1_mhz: f64,
    pub kerr2_mhz: f64,
    pub g21_mhz: f64,
    pub coupling_mhz: f64,
    pub rabi_mhz: f64,
    pub loss1_mhz: f64,
    pub loss2_mhz: f64,
    pub gamma_eg_mhz: f64,
    pub kappa_eg_mhz: f64,
    /// `κ_f/κ_eg`.
    #[serde(default = "default_filter_ratio")]
    pub filter_ratio: f64,
    #[serde(default)]
    pub rate_ratios: RateRatios,
    pub dephasing_e_mhz: f64,
    pub dephasing_f_mhz: f64,
    pub efficiency: f64,
    pub capture_time_ns: f64,
}

impl DetectorConfig {
    pub fn to_params(&self) -> Result<ModelParams> {
        if !(self.filter_ratio.is_finite() && self.filter_ratio >= 0.0) {
            return config(format!(
                "filter_ratio must be non-negative, got {}",
                self.filter_ratio
            ));
        }
        let r = self.rate_ratios;
        for (name, v) in [
            ("fg", r.fg),
            ("fe", r.fe),
            ("sink_g", r.sink_g),
            ("sink_e", r.sink_e),
            ("sink_f", r.sink_f),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return config(format!("rate_ratios.{name} must be non-negative, got {v}"));
            }
        }
        let gamma = from_mhz(self.gamma_eg_mhz);
        let kappa = from_mhz(self.kappa_eg_mhz);
        let total = gamma + kappa;
        let p = ModelParams {
            omega1: from_ghz(self.omega1_ghz),
            omega2: from_ghz(self.omega2_ghz),
            omega_ge: from_ghz(self.omega_ge_ghz),
            omega_gf: from_ghz(self.omega_ge_ghz + self.omega_ef_ghz),
            omega_dr: from_ghz(self.omega_dr_ghz),
            omega_filter: from_ghz(self.omega_filter_ghz.unwrap_or(self.omega_ge_ghz)),
            kerr1: from_mhz(self.kerr1_mhz),
            kerr2: from_mhz(self.kerr2_mhz),
            g21: from_mhz(self.g21_mhz),
            coupling: from_mhz(self.coupling_mhz),
            rabi: from_mhz(self.rabi_mhz),
            loss1: from_mhz(self.loss1_mhz),
            loss2: from_mhz(self.loss2_mhz),
            gamma_eg: gamma,
            kappa_eg: kappa,
            kappa_filter: self.filter_ratio * kappa,
            sink_g: r.sink_g * total,
            sink_e: r.sink_e * total,
            sink_f: r.sink_f * total,
            gamma_fe: r.fe * gamma,
            gamma_fg: r.fg * gamma,
            kappa_fe: r.fe * kappa,
            kappa_fg: r.fg * kappa,
            dephasing_e: from_mhz(self.dephasing_e_mhz),
            dephasing_f: from_mhz(self.dephasing_f_mhz),
            efficiency: self.efficiency,
            capture_time: self.capture_time_ns * 1e-9,
        };
        p.validate()?;
        Ok(p)
    }
}

/// Named built-in detector parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    SetA,
    SetB,
}

impl Preset {
    pub fn config(self) -> DetectorConfig {
        match self {
            Preset::SetA => set_a(),
            Preset::SetB => set_b(),
        }
    }
}

fn resonant_frame() -> DetectorConfig {
    DetectorConfig {
        omega1_ghz: 5.379,
        omega2_ghz: 10.758,
        omega_ge_ghz: 10.758,
        omega_ef_ghz: 3.566,
        omega_dr_ghz: 3.566,
        omega_filter_ghz: None,
        kerr1_mhz: 0.0,
        kerr2_mhz: 0.0,
        g21_mhz: 0.0,
        coupling_mhz: 0.0,
        rabi_mhz: 0.0,
        loss1_mhz: 0.0,
        loss2_mhz: 0.0,
        gamma_eg_mhz: 0.0,
        kappa_eg_mhz: 0.0,
        filter_ratio: default_filter_ratio(),
        rate_ratios: RateRatios::default(),
        dephasing_e_mhz: 1.3,
        dephasing_f_mhz: 30.0,
        efficiency: 0.0,
        capture_time_ns: 0.0,
    }
}

/// Parameter set A.
pub fn set_a() -> DetectorConfig {
    DetectorConfig {
        kerr1_mhz: 0.2774,
        kerr2_mhz: 0.1387,
        g21_mhz: 20.4,
        coupling_mhz: 50.0,
        rabi_mhz: 220.6,
        loss1_mhz: 0.010,
        loss2_mhz: 0.100,
        gamma_eg_mhz: 1.0,
        kappa_eg_mhz: 4.0,
        efficiency: 0.995,
        capture_time_ns: 50.0,
        ..resonant_frame()
    }
}

/// Parameter set B.
pub fn set_b() -> DetectorConfig {
    DetectorConfig {
        kerr1_mhz: 0.3969,
        kerr2_mhz: 0.1985,
        g21_mhz: 24.4,
        coupling_mhz: 60.0,
        rabi_mhz: 188.2,
        loss1_mhz: 0.002,
        loss2_mhz: 0.020,
        gamma_eg_mhz: 0.1,
        kappa_eg_mhz: 5.0,
        efficiency: 0.999,
        capture_time_ns: 30.0,
        ..resonant_frame()
    }
}

/// The reference rf-SQUID photomultiplier, biased at `0.6316 Φ0`. The
/// 405 fF is taken as the loaded capacitance, so the coupling
/// capacitances are left at zero.
pub fn reference_jpm() -> JpmSpec {
    JpmSpec {
        critical_current: 2.5e-6,
        loop_inductance: 300e-12,
        capacitance: 405e-15,
        gate_capacitance: 0.0,
        drive_capacitance: 0.0,
        waveguide_capacitance: 0.0,
        bias_flux: 0.6316,
        waveguide_impedance: 50.0,
        drive_voltage: 0.0,
    }
}

/// Storage (1 pF, 1 nH) and buffer (0.5 pF, 0.5 nH) resonators.
pub fn reference_resonators() -> [ResonatorSpec; 2] {
    [
        ResonatorSpec {
            capacitance: 1e-12,
            inductance: 1e-9,
            single_photon_loss: 0.0,
        },
        ResonatorSpec {
            capacitance: 0.5e-12,
            inductance: 0.5e-9,
            single_photon_loss: 0.0,
        },
    ]
}

/// Junction capacitances assumed for the coupler presets; the reference
/// design does not fix them.
pub const COUPLER_JUNCTION_CAPACITANCE: f64 = 2e-15;

/// Asymmetric dc-SQUID coupler with a 50 nA reference junction.
pub fn reference_squid(asymmetry: f64, flux: f64) -> CouplerSpec {
    CouplerSpec {
        kind: CouplerKind::AsymmetricSquid,
        critical_current: 50e-9,
        asymmetry,
        junction_capacitance: COUPLER_JUNCTION_CAPACITANCE,
        alpha_junction_capacitance: asymmetry * COUPLER_JUNCTION_CAPACITANCE,
        flux,
        flux_prime: 0.0,
    }
}

/// BiSQUID coupler with 60 nA reference junctions.
pub fn reference_bisquid(asymmetry: f64, flux: f64, flux_prime: f64) -> CouplerSpec {
    CouplerSpec {
        kind: CouplerKind::BiSquid,
        critical_current: 60e-9,
        asymmetry,
        junction_capacitance: COUPLER_JUNCTION_CAPACITANCE,
        alpha_junction_capacitance: asymmetry * COUPLER_JUNCTION_CAPACITANCE,
        flux,
        flux_prime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_resonant() {
        for p in [set_a(), set_b()] {
            let m = p.to_params().unwrap();
            let r = m.resonance();
            assert!(r.two_photon && r.buffer_jpm && r.drive);
            let d = m.detunings();
            assert!(
                d.buffer.abs() < 1e-3
                    && d.e.abs() < 1e-3
                    && d.f.abs() < 1e-3
                    && d.filter.abs() < 1e-3
            );
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut v = serde_json::to_value(set_a()).unwrap();
        v.as_object_mut()
            .unwrap()
            .insert("bogus".into(), 1.0.into());
        assert!(serde_json::from_value::<DetectorConfig>(v).is_err());
    }

    #[test]
    fn derived_rates() {
        let m = set_a().to_params().unwrap();
        assert!((m.kappa_filter / m.kappa_eg - 100.0).abs() < 1e-12);
        assert!((m.sink_f / from_mhz(5.0) - 121.56).abs() < 1e-9);
    }
}
