use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// Parameters of the reduced detector model. Frequencies and rates are
/// angular (rad/s), times in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub omega1: f64,
    pub omega2: f64,
    pub omega_ge: f64,
    pub omega_gf: f64,
    pub omega_dr: f64,
    /// Filter resonator frequency.
    pub omega_filter: f64,
    pub kerr1: f64,
    pub kerr2: f64,
    pub g21: f64,
    /// Buffer to JPM coupling `G`.
    pub coupling: f64,
    /// Drive amplitude `Ω` on the e-f transition.
    pub rabi: f64,
    pub loss1: f64,
    pub loss2: f64,
    pub gamma_eg: f64,
    pub kappa_eg: f64,
    pub kappa_filter: f64,
    pub sink_g: f64,
    pub sink_e: f64,
    pub sink_f: f64,
    pub gamma_fe: f64,
    pub gamma_fg: f64,
    pub kappa_fe: f64,
    pub kappa_fg: f64,
    pub dephasing_e: f64,
    pub dephasing_f: f64,
    pub efficiency: f64,
    pub capture_time: f64,
}

/// Which resonance conditions hold, to a relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceFlags {
    pub two_photon: bool,
    pub buffer_jpm: bool,
    pub drive: bool,
}

/// Rotating-frame detunings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detunings {
    pub buffer: f64,
    pub e: f64,
    pub f: f64,
    pub filter: f64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega_ge", self.omega_ge),
            ("omega_gf", self.omega_gf),
            ("omega_dr", self.omega_dr),
            ("omega_filter", self.omega_filter),
            ("loss1", self.loss1),
            ("loss2", self.loss2),
            ("gamma_eg", self.gamma_eg),
            ("kappa_eg", self.kappa_eg),
            ("kappa_filter", self.kappa_filter),
            ("sink_g", self.sink_g),
            ("sink_e", self.sink_e),
            ("sink_f", self.sink_f),
            ("gamma_fe", self.gamma_fe),
            ("gamma_fg", self.gamma_fg),
            ("kappa_fe", self.kappa_fe),
            ("kappa_fg", self.kappa_fg),
            ("dephasing_e", self.dephasing_e),
            ("dephasing_f", self.dephasing_f),
            ("capture_time", self.capture_time),
        ];
        for (name, v) in rates {
            if !(v.is_finite() && v >= 0.0) {
                return config(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        for (name, v) in [
            ("kerr1", self.kerr1),
            ("kerr2", self.kerr2),
            ("g21", self.g21),
            ("coupling", self.coupling),
            ("rabi", self.rabi),
        ] {
            if !v.is_finite() {
                return config(format!("{name} must be finite, got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&self.efficiency) {
            return config(format!(
                "efficiency must lie in [0, 1], got {}",
                self.efficiency
            ));
        }
        Ok(())
    }

    pub fn detunings(&self) -> Detunings {
        let two = 2.0 * self.omega1;
        Detunings {
            buffer: self.omega2 - two,
            e: self.omega_ge - two,
            f: self.omega_gf - two - self.omega_dr,
            filter: self.omega_filter - two,
        }
    }

    pub fn resonance(&self) -> ResonanceFlags {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        ResonanceFlags {
            two_photon: close(2.0 * self.omega1, self.omega2),
            buffer_jpm: close(self.omega2, self.omega_ge),
            drive: close(self.omega_dr, self.omega_gf - self.omega_ge),
        }
    }
}
