//! Physical constants and energy conversions.
//!
//! Every energy in this crate is stored as an angular frequency `E/ħ` in
//! rad/s. Constructors take SI inputs (amperes, henries, farads) and the
//! helpers at the bottom convert to the cyclic GHz/MHz figures used in
//! tables and configuration files.

use std::f64::consts::PI;

/// Elementary charge in coulombs (exact, 2019 SI).
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant in J s (exact, 2019 SI).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Magnetic flux quantum `h / 2e` in webers.
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * E_CHARGE);
/// Reduced flux quantum `Φ0 / 2π`.
pub const REDUCED_FLUX_QUANTUM: f64 = FLUX_QUANTUM / (2.0 * PI);

/// Josephson energy `I0 Φ0 / 2π` of a junction with critical current `i0` (A).
pub fn josephson_energy(i0: f64) -> f64 {
    i0 * REDUCED_FLUX_QUANTUM / HBAR
}

/// Inductive energy `(Φ0/2π)^2 / L` for an inductance in henries.
pub fn inductive_energy(inductance: f64) -> f64 {
    REDUCED_FLUX_QUANTUM * REDUCED_FLUX_QUANTUM / inductance / HBAR
}

/// Charging energy `e^2 / 2C` for a capacitance in farads.
pub fn charging_energy(capacitance: f64) -> f64 {
    E_CHARGE * E_CHARGE / (2.0 * capacitance) / HBAR
}

/// Angular frequency to cyclic frequency in Hz.
pub fn to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

pub fn to_ghz(omega: f64) -> f64 {
    to_hz(omega) * 1e-9
}

pub fn to_mhz(omega: f64) -> f64 {
    to_hz(omega) * 1e-6
}

pub fn from_hz(f: f64) -> f64 {
    2.0 * PI * f
}

pub fn from_ghz(f: f64) -> f64 {
    from_hz(f * 1e9)
}

pub fn from_mhz(f: f64) -> f64 {
    from_hz(f * 1e6)
}
