use serde::{Deserialize, Serialize};

use super::spectrum::{solve_spectrum, GridSpec};
use super::JpmSpec;
use crate::error::{Error, Result};

/// Default flux step for the bias derivative (units of `Φ0`).
pub const DEFAULT_FLUX_STEP: f64 = 1e-4;

/// Pure-dephasing rates of `e` and `f` from 1/f flux noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingRates {
    /// `Γ^φ_e` (rad/s).
    pub gamma_e: f64,
    pub gamma_f: f64,
    pub zeta_e: f64,
    pub zeta_f: f64,
    /// `∂ω_eg/∂Φ_b` (rad/s per `Φ0`).
    pub slope_e: f64,
    pub slope_f: f64,
    /// Noise amplitude `A_Φ` (units of `Φ0`).
    pub amplitude: f64,
    /// Low-frequency cutoff `ϖ_cut` (rad/s).
    pub cutoff: f64,
}

/// `Γ = sqrt(ζ) A |∂ω/∂Φ_b|` with `ζ = ln(2.516 Γ/ϖ_cut)`, iterated from
/// `ζ = 10` until it moves by less than `10⁻⁶`.
fn self_consistent(amplitude: f64, slope: f64, cutoff: f64) -> Result<(f64, f64)> {
    let base = amplitude * slope.abs();
    if base == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut zeta: f64 = 10.0;
    for _ in 0..500 {
        let next = (2.516 * zeta.sqrt() * base / cutoff).ln();
        if !next.is_finite() || next <= 0.0 {
            return Err(Error::FixedPointDiverged(format!(
                "ζ left the physical range; last iterate {next}"
            )));
        }
        let done = (next - zeta).abs() < 1e-6;
        zeta = next;
        if done {
            return Ok((zeta.sqrt() * base, zeta));
        }
    }
    Err(Error::FixedPointDiverged(format!(
        "no convergence; last iterate ζ = {zeta}"
    )))
}

/// Bias-flux derivatives by central difference and the resulting rates.
pub fn dephasing_rates(
    spec: &JpmSpec,
    grid: &GridSpec,
    amplitude: f64,
    cutoff: f64,
    step: f64,
) -> Result<DephasingRates> {
    if !(amplitude >= 0.0) || !(cutoff > 0.0) || !(step > 0.0) {
        return Err(Error::Config(
            "dephasing needs amplitude ≥ 0, cutoff > 0 and step > 0".into(),
        ));
    }
    let plus = solve_spectrum(&spec.with_bias(spec.bias_flux + step), grid)?;
    let minus = solve_spectrum(&spec.with_bias(spec.bias_flux - step), grid)?;
    let (rp, rm) = (plus.roles()?, minus.roles()?);
    if rp != rm {
        return Err(Error::NotConverged(format!(
            "level roles change within ±{step} Φ0: {rp:?} vs {rm:?}"
        )));
    }
    let slope_e = (plus.transition(rp.e, rp.g) - minus.transition(rm.e, rm.g)) / (2.0 * step);
    let slope_f = (plus.transition(rp.f, rp.g) - minus.transition(rm.f, rm.g)) / (2.0 * step);
    let (gamma_e, zeta_e) = self_consistent(amplitude, slope_e, cutoff)?;
    let (gamma_f, zeta_f) = self_consistent(amplitude, slope_f, cutoff)?;
    Ok(DephasingRates {
        gamma_e,
        gamma_f,
        zeta_e,
        zeta_f,
        slope_e,
        slope_f,
        amplitude,
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_satisfies_its_equation() {
        let (g, z) = self_consistent(1e-6, 2e12, 2.0 * std::f64::consts::PI).unwrap();
        assert!((z - (2.516 * g / (2.0 * std::f64::consts::PI)).ln()).abs() < 1e-5);
    }

    #[test]
    fn silent_noise_gives_zero() {
        assert_eq!(self_consistent(0.0, 1e12, 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn tiny_noise_diverges() {
        assert!(matches!(
            self_consistent(1e-30, 1.0, 1.0),
            Err(Error::FixedPointDiverged(_))
        ));
    }
}
