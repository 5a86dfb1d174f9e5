use serde::{Deserialize, Serialize};

use super::charge::ChargeMatrix;
use super::spectrum::RoleMap;
use super::JpmSpec;
use crate::circuit::ResonatorDerived;
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::units::{E_CHARGE, FLUX_QUANTUM, HBAR};

/// Drive and buffer coupling of the working transitions (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveCoupling {
    /// `Ω = |Ω_ef|/2`.
    pub rabi: f64,
    /// `G = |G_ge|`.
    pub coupling: f64,
    /// `E_g/ħ`.
    pub coupling_energy: f64,
}

fn buffer_capacitance(buffer: &ResonatorDerived) -> f64 {
    E_CHARGE * E_CHARGE / (2.0 * HBAR * buffer.loaded_charging_energy)
}

fn coupling_energy(spec: &JpmSpec, buffer: &ResonatorDerived) -> f64 {
    let c2 = buffer_capacitance(buffer) + spec.gate_capacitance;
    4.0 * E_CHARGE * E_CHARGE * spec.gate_capacitance / (c2 * spec.loaded_capacitance()) / HBAR
}

/// `Ω_λλ' = 2π m (C_x/C̃_d)(V_dr/Φ0)` and `G_λλ' = n_zpf,2 |m| E_g/ħ`.
pub fn drive_and_coupling(
    spec: &JpmSpec,
    charge: &ChargeMatrix,
    roles: RoleMap,
    buffer: &ResonatorDerived,
) -> DriveCoupling {
    let m_ef = charge.get(roles.e, roles.f).norm();
    let m_ge = charge.get(roles.g, roles.e).norm();
    let omega_ef = 2.0 * std::f64::consts::PI * m_ef * spec.drive_capacitance
        / spec.loaded_capacitance()
        * spec.drive_voltage
        / FLUX_QUANTUM;
    let eg = coupling_energy(spec, buffer);
    DriveCoupling {
        rabi: 0.5 * omega_ef,
        coupling: buffer.charge_zpf * m_ge * eg,
        coupling_energy: eg,
    }
}

/// `C_G` giving the requested `G` (rad/s), holding every other capacitance.
///
/// `G` grows with `C_G` up to `sqrt(C̃_2 C̃_d)`, so the root is bracketed there.
pub fn gate_capacitance_for_coupling(
    spec: &JpmSpec,
    charge: &ChargeMatrix,
    roles: RoleMap,
    buffer: &ResonatorDerived,
    target: f64,
) -> Result<f64> {
    let base = JpmSpec {
        gate_capacitance: 0.0,
        ..*spec
    };
    let g_of = |cg: f64| {
        drive_and_coupling(
            &JpmSpec {
                gate_capacitance: cg,
                ..base
            },
            charge,
            roles,
            buffer,
        )
        .coupling
    };
    let top = (buffer_capacitance(buffer) * base.loaded_capacitance()).sqrt();
    if target > g_of(top) {
        return Err(Error::NoRoot(format!(
            "coupling {target:e} rad/s exceeds the reachable maximum"
        )));
    }
    bisect(|cg| g_of(cg) - target, 0.0, top, 1e-30)
}

/// `V_dr C_x / C̃_d` (volts) giving the requested `Ω` (rad/s).
pub fn drive_product_for_rabi(charge: &ChargeMatrix, roles: RoleMap, target: f64) -> Result<f64> {
    let m_ef = charge.get(roles.e, roles.f).norm();
    if m_ef == 0.0 {
        return Err(Error::DegenerateAnchor("m_ef vanishes".into()));
    }
    Ok(target * FLUX_QUANTUM / (std::f64::consts::PI * m_ef))
}
