//! Two resonators coupled through a nonlinear SQUID-type coupler.
//!
//! The chain runs from circuit elements and static fluxes to the
//! equilibrium of the coupled potential, the Taylor coefficients `u_k` of
//! the coupler cosine around it, and from there to the dressed resonator
//! parameters and every mixing strength `g_{k−l,l}`.

mod coupler;
mod equilibrium;
mod resonator;

pub use coupler::{
    effective_josephson_energy, phase_shift, CouplerKind, CouplerSpec, EffectiveJunction,
};
pub use equilibrium::solve_equilibrium_phases;
pub use resonator::{ResonatorDerived, ResonatorSpec};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::units::{self, E_CHARGE, HBAR};

pub const DEFAULT_K_MAX: usize = 6;

/// Coupler quantities at the working point. Energies in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplerDerived {
    pub josephson_energy: f64,
    pub effective_energy: f64,
    pub xi: f64,
    pub phase_shift: f64,
    pub phi1_min: f64,
    pub phi2_min: f64,
    /// `δ = φ1_min − φ2_min − ϑ`.
    pub delta: f64,
    /// `u[k]` for `k = 0..=k_max`; entries below 2 are unused and zero.
    pub u: Vec<f64>,
    pub total_capacitance: f64,
    /// Capacitive coupling energy `E_C^c`.
    pub capacitive_energy: f64,
}

/// One mixed inductive term `g_{k−l,l} (a1 + a1†)^{k−l} (a2 + a2†)^l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InductiveTerm {
    pub k: usize,
    pub l: usize,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    /// `g_c` (rad/s).
    pub capacitive: f64,
    pub inductive: Vec<InductiveTerm>,
    /// Signed two-photon coupling `g_21`.
    pub g21: f64,
    /// Linear inductive coupling `g_11`.
    pub g11: f64,
}

impl CouplingSet {
    /// `g_{m,l}` with `m = k − l`, if it was computed.
    pub fn get(&self, m: usize, l: usize) -> Option<f64> {
        self.inductive
            .iter()
            .find(|t| t.k == m + l && t.l == l)
            .map(|t| t.strength)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitDerived {
    pub storage: ResonatorDerived,
    pub buffer: ResonatorDerived,
    pub coupler: CouplerDerived,
    pub couplings: CouplingSet,
}

/// `u_k = (−1)^⌈k/2⌉ · (cos δ for even k, sin δ for odd k)`.
pub fn taylor_coefficient(k: usize, delta: f64) -> f64 {
    let sign = if k.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
    if k % 2 == 0 {
        sign * delta.cos()
    } else {
        sign * delta.sin()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Equilibrium phase drop `δ` over the coupler.
pub fn equilibrium_delta(
    resonators: &[ResonatorSpec; 2],
    coupler: &CouplerSpec,
) -> Result<(f64, f64, f64)> {
    let ej = coupler.effective_junction();
    let el1 = units::inductive_energy(resonators[0].inductance);
    let el2 = units::inductive_energy(resonators[1].inductance);
    let (p1, p2) = solve_equilibrium_phases(el1, el2, ej.energy, ej.phase_shift)?;
    Ok((p1, p2, p1 - p2 - ej.phase_shift))
}

/// Full derived chain for a resonator pair and coupler.
pub fn coupling_set(
    resonators: &[ResonatorSpec; 2],
    coupler: &CouplerSpec,
    k_max: usize,
) -> Result<CircuitDerived> {
    if k_max < 3 {
        return Err(Error::Config(format!(
            "k_max must be at least 3, got {k_max}"
        )));
    }
    resonators[0].validate()?;
    resonators[1].validate()?;
    coupler.validate()?;

    let ej = coupler.effective_junction();
    let e = ej.energy;
    let (p1, p2, delta) = equilibrium_delta(resonators, coupler)?;
    let u: Vec<f64> = (0..=k_max)
        .map(|k| {
            if k < 2 {
                0.0
            } else {
                taylor_coefficient(k, delta)
            }
        })
        .collect();

    let (c1, c2) = (resonators[0].capacitance, resonators[1].capacitance);
    let cc = coupler.total_capacitance();
    let loaded = [c1 + c2 * cc / (c2 + cc), c2 + c1 * cc / (c1 + cc)];
    let ecc = 4.0 * E_CHARGE * E_CHARGE / (c1 * c2 * (1.0 / c1 + 1.0 / c2 + 1.0 / cc)) / HBAR;

    let dress = |j: usize| -> Result<ResonatorDerived> {
        let ec = units::charging_energy(resonators[j].capacitance);
        let el = units::inductive_energy(resonators[j].inductance);
        let ec_t = units::charging_energy(loaded[j]);
        let el_t = el - e * u[2];
        if el_t <= 0.0 {
            return Err(Error::PreconditionViolated(
                "renormalized inductive energy is not positive".into(),
            ));
        }
        let w_osc = (8.0 * ec_t * el_t).sqrt();
        let phase_zpf = (2.0 * ec_t / el_t).powf(0.25);
        let charge_zpf = (el_t / (32.0 * ec_t)).powf(0.25);
        let g3 = e * phase_zpf.powi(3) * u[3] / factorial(3);
        let kerr = 30.0 * g3 * g3 / w_osc;
        let w = w_osc - 2.0 * kerr;
        let lambda = g3 / w;
        Ok(ResonatorDerived {
            charging_energy: ec,
            inductive_energy: el,
            loaded_charging_energy: ec_t,
            renormalized_inductive_energy: el_t,
            bare_frequency: w_osc,
            frequency: w,
            phase_zpf,
            charge_zpf,
            self_kerr: kerr,
            cubic_strength: g3,
            sw_parameter: lambda,
            sw_flag: lambda.abs() >= 0.1,
        })
    };
    let storage = dress(0)?;
    let buffer = dress(1)?;

    let (z1, z2) = (storage.phase_zpf, buffer.phase_zpf);
    let mut inductive = Vec::new();
    for k in 2..=k_max {
        for l in 1..k {
            let sign = if (l + 1) % 2 == 0 { 1.0 } else { -1.0 };
            let strength = sign * e * z1.powi((k - l) as i32) * z2.powi(l as i32) * u[k]
                / (factorial(k - l) * factorial(l));
            inductive.push(InductiveTerm { k, l, strength });
        }
    }
    let g21 = 0.5 * e * z1 * z1 * z2 * delta.sin();
    let g11 = e * z1 * z2 * u[2];

    Ok(CircuitDerived {
        storage,
        buffer,
        coupler: CouplerDerived {
            josephson_energy: coupler.josephson_energy(),
            effective_energy: e,
            xi: coupler.xi(),
            phase_shift: ej.phase_shift,
            phi1_min: p1,
            phi2_min: p2,
            delta,
            u,
            total_capacitance: cc,
            capacitive_energy: ecc,
        },
        couplings: CouplingSet {
            capacitive: ecc * storage.charge_zpf * buffer.charge_zpf,
            inductive,
            g21,
            g11,
        },
    })
}

/// A coupler flux where even-order couplings vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddParityPoint {
    pub flux: f64,
    pub flux_prime: f64,
    pub delta: f64,
    pub effective_energy: f64,
    /// The coupler is switched off here, so `g21` vanishes too.
    pub coupling_vanishes: bool,
}

const PARITY_SCAN: usize = 512;

/// All `Φ_c ∈ [0, 1)` (units of `Φ0`) with `cos δ = 0`, at the coupler's
/// fixed `Φ'_c`. Roots are bracketed on a uniform scan and bisected.
pub fn odd_parity_fluxes(
    resonators: &[ResonatorSpec; 2],
    coupler: &CouplerSpec,
) -> Result<Vec<OddParityPoint>> {
    coupler.validate()?;
    let cos_delta = |f: f64| -> Result<f64> {
        Ok(
            equilibrium_delta(resonators, &coupler.with_fluxes(f, coupler.flux_prime))?
                .2
                .cos(),
        )
    };
    let mut roots = Vec::new();
    let mut prev_f = 0.0;
    let mut prev = cos_delta(0.0)?;
    for i in 1..=PARITY_SCAN {
        let f = i as f64 / PARITY_SCAN as f64;
        let cur = cos_delta(f)?;
        if prev == 0.0 {
            roots.push(prev_f);
        } else if prev.signum() != cur.signum() && cur != 0.0 {
            let root = bisect(|x| cos_delta(x).unwrap_or(f64::NAN), prev_f, f, 1e-15)?;
            roots.push(root);
        }
        prev_f = f;
        prev = cur;
    }
    let e_j = coupler.josephson_energy();
    let mut out = Vec::new();
    for flux in roots {
        let c = coupler.with_fluxes(flux, coupler.flux_prime);
        let (_, _, delta) = equilibrium_delta(resonators, &c)?;
        // A jump of the global minimum also flips the sign; keep only true zeros.
        if delta.cos().abs() > 1e-10 {
            continue;
        }
        let e = c.effective_junction().energy;
        out.push(OddParityPoint {
            flux,
            flux_prime: coupler.flux_prime,
            delta,
            effective_energy: e,
            coupling_vanishes: e < 1e-9 * e_j,
        });
    }
    Ok(out)
}

/// The first odd-parity flux in `[0, 1)`.
pub fn find_odd_parity_flux(
    resonators: &[ResonatorSpec; 2],
    coupler: &CouplerSpec,
) -> Result<OddParityPoint> {
    odd_parity_fluxes(resonators, coupler)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoRoot("δ never reaches ±(n+½)π for Φ_c in [0, Φ0)".into()))
}

/// BiSQUID fluxes `(Φ_c, Φ'_c)` that switch the coupler fully off.
pub fn coupler_off_point(coupler: &CouplerSpec) -> Result<(f64, f64)> {
    if coupler.kind != CouplerKind::BiSquid {
        return Err(Error::PreconditionViolated(
            "only a BiSQUID can be switched off".into(),
        ));
    }
    if coupler.asymmetry > 1.0 {
        return Err(Error::PreconditionViolated(format!(
            "asymmetry {} exceeds 1",
            coupler.asymmetry
        )));
    }
    let flux_prime = coupler.asymmetry.acos() / PI;
    let flux = 0.5 - 0.5 * flux_prime;
    let e = coupler
        .with_fluxes(flux, flux_prime)
        .effective_junction()
        .energy;
    if e > 1e-10 * coupler.josephson_energy() {
        return Err(Error::NotConverged(format!(
            "residual Josephson energy {e:e} at the off point"
        )));
    }
    Ok((flux, flux_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::reference_resonators;
    use approx::assert_relative_eq;

    fn squid(alpha: f64, i0: f64, flux: f64) -> CouplerSpec {
        CouplerSpec {
            kind: CouplerKind::AsymmetricSquid,
            critical_current: i0,
            asymmetry: alpha,
            junction_capacitance: 2e-15,
            alpha_junction_capacitance: 1e-15,
            flux,
            flux_prime: 0.0,
        }
    }

    #[test]
    fn taylor_signs() {
        let d = 0.3f64;
        assert_relative_eq!(taylor_coefficient(2, d), -d.cos());
        assert_relative_eq!(taylor_coefficient(3, d), d.sin());
        assert_relative_eq!(taylor_coefficient(4, d), d.cos());
        assert_relative_eq!(taylor_coefficient(5, d), -d.sin());
    }

    #[test]
    fn zero_point_product_is_half() {
        let cd = coupling_set(&reference_resonators(), &squid(0.4, 50e-9, 0.2), 6).unwrap();
        for r in [cd.storage, cd.buffer] {
            assert_relative_eq!(r.phase_zpf * r.charge_zpf, 0.5, max_relative = 1e-15);
        }
    }

    #[test]
    fn g21_matches_general_formula() {
        let cd = coupling_set(&reference_resonators(), &squid(0.4, 50e-9, 0.23), 6).unwrap();
        assert_relative_eq!(
            cd.couplings.get(2, 1).unwrap(),
            cd.couplings.g21,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            cd.couplings.get(1, 1).unwrap(),
            cd.couplings.g11,
            max_relative = 1e-12
        );
    }

    #[test]
    fn switched_off_coupler_kills_inductive_terms() {
        let cd = coupling_set(&reference_resonators(), &squid(1.0, 50e-9, 0.5), 6).unwrap();
        assert!(cd
            .couplings
            .inductive
            .iter()
            .all(|t| t.strength.abs() < 1e-6));
        assert!(cd.couplings.capacitive > 0.0);
    }

    #[test]
    fn odd_parity_point_kills_even_orders() {
        let res = reference_resonators();
        let p = find_odd_parity_flux(&res, &squid(0.4, 50e-9, 0.0)).unwrap();
        let cd = coupling_set(&res, &squid(0.4, 50e-9, p.flux), 8).unwrap();
        let g21 = cd.couplings.g21.abs();
        for t in &cd.couplings.inductive {
            if t.k % 2 == 0 {
                assert!(t.strength.abs() < 1e-10 * g21, "k={} l={}", t.k, t.l);
            }
        }
    }

    #[test]
    fn off_point_examples() {
        let b = CouplerSpec {
            kind: CouplerKind::BiSquid,
            ..squid(1.0, 50e-9, 0.0)
        };
        assert_eq!(coupler_off_point(&b).unwrap(), (0.5, 0.0));
        let (f, fp) = coupler_off_point(&CouplerSpec {
            asymmetry: 0.0,
            ..b
        })
        .unwrap();
        assert_relative_eq!(fp, 0.5, max_relative = 1e-15);
        assert_relative_eq!(f, 0.25, max_relative = 1e-15);
        assert!(coupler_off_point(&CouplerSpec {
            asymmetry: 1.2,
            ..b
        })
        .is_err());
    }

    #[test]
    fn k_max_below_three_is_rejected() {
        assert!(coupling_set(&reference_resonators(), &squid(0.4, 50e-9, 0.2), 2).is_err());
    }
}
