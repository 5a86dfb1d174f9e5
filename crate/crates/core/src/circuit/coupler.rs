use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

/// Coupler topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplerKind {
    /// dc SQUID with junctions `I0` and `α I0`.
    AsymmetricSquid,
    /// The `I0` junction replaced by a flux-biased symmetric SQUID.
    BiSquid,
}

impl CouplerKind {
    /// Number of extra junctions in the secondary loop (0 or 1).
    pub fn beta(self) -> f64 {
        match self {
            CouplerKind::AsymmetricSquid => 0.0,
            CouplerKind::BiSquid => 1.0,
        }
    }
}

/// Coupler circuit parameters. Fluxes are in units of `Φ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplerSpec {
    pub kind: CouplerKind,
    /// Critical current `I0` in amperes.
    pub critical_current: f64,
    /// Asymmetry `α` of the small junction.
    pub asymmetry: f64,
    /// Self-capacitance of an `I0` junction (farads).
    pub junction_capacitance: f64,
    /// Self-capacitance of the `α I0` junction (farads).
    pub alpha_junction_capacitance: f64,
    pub flux: f64,
    #[serde(default)]
    pub flux_prime: f64,
}

impl CouplerSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("coupler: {m}")));
        if !(self.critical_current > 0.0 && self.critical_current.is_finite()) {
            return bad("critical_current must be positive");
        }
        if !(self.asymmetry >= 0.0 && self.asymmetry.is_finite()) {
            return bad("asymmetry must be non-negative");
        }
        if !(self.junction_capacitance > 0.0 && self.alpha_junction_capacitance > 0.0) {
            return bad("junction capacitances must be positive");
        }
        if !self.flux.is_finite() || !self.flux_prime.is_finite() {
            return bad("fluxes must be finite");
        }
        if self.kind == CouplerKind::AsymmetricSquid && self.flux_prime != 0.0 {
            return bad("flux_prime must be 0 for an asymmetric SQUID");
        }
        Ok(())
    }

    pub fn with_fluxes(mut self, flux: f64, flux_prime: f64) -> Self {
        self.flux = flux;
        self.flux_prime = flux_prime;
        self
    }

    /// `E_J = I0 Φ0 / 2π` (rad/s).
    pub fn josephson_energy(&self) -> f64 {
        units::josephson_energy(self.critical_current)
    }

    /// `C_c = C_αJJ + (1 + β) C_JJ`.
    pub fn total_capacitance(&self) -> f64 {
        self.alpha_junction_capacitance + (1.0 + self.kind.beta()) * self.junction_capacitance
    }

    /// Signed weight of the flux-carrying branch: 1 for the SQUID,
    /// `cos(πΦ')` for the BiSQUID.
    fn branch_weight(&self) -> f64 {
        match self.kind {
            CouplerKind::AsymmetricSquid => 1.0,
            CouplerKind::BiSquid => (PI * self.flux_prime).cos(),
        }
    }

    /// Total phase `2π(Φ + βΦ'/2)` seen by the flux-carrying branch.
    fn loop_phase(&self) -> f64 {
        2.0 * PI * (self.flux + 0.5 * self.kind.beta() * self.flux_prime)
    }

    /// Asymmetry factor `ξ`.
    pub fn xi(&self) -> f64 {
        let c = self.branch_weight();
        (c - self.asymmetry) / (c + self.asymmetry)
    }

    /// Effective Josephson energy and phase shift of the coupler.
    pub fn effective_junction(&self) -> EffectiveJunction {
        let (mag, theta) = phasor(self.asymmetry, self.branch_weight(), self.loop_phase());
        EffectiveJunction {
            energy: self.josephson_energy() * mag,
            phase_shift: theta,
        }
    }
}

/// The coupler reduced to a single junction `−E cos(φ1 − φ2 − ϑ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveJunction {
    /// `E_JJ,eff` (rad/s), never negative.
    pub energy: f64,
    /// `ϑ` on the branch that is continuous in `Φ_c`.
    pub phase_shift: f64,
}

pub fn effective_josephson_energy(coupler: &CouplerSpec) -> f64 {
    coupler.effective_junction().energy
}

pub fn phase_shift(coupler: &CouplerSpec) -> f64 {
    coupler.effective_junction().phase_shift
}

/// Magnitude and continuous argument of `a + b e^{iϕ}`.
///
/// The two junction branches add as phasors. When `|b| ≥ |a|` the phasor
/// winds once per period of `ϕ`, so the argument is written as
/// `ϕ + arg(1 + (a/b) e^{−iϕ})`, whose second term never crosses the cut.
/// Otherwise the argument stays bounded and the principal value is used.
fn phasor(a: f64, b: f64, phi: f64) -> (f64, f64) {
    let z = Complex64::new(a, 0.0) + Complex64::from_polar(b, phi);
    let theta = if b.abs() >= a.abs() && b != 0.0 {
        let w = Complex64::new(1.0, 0.0) + Complex64::from_polar(a / b, -phi);
        let base = if b < 0.0 { PI } else { 0.0 };
        phi + w.arg() + base
    } else if a == 0.0 {
        0.0
    } else {
        let w = Complex64::new(1.0, 0.0) + Complex64::from_polar(b / a, phi);
        w.arg()
    };
    (z.norm(), theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn squid(alpha: f64, flux: f64) -> CouplerSpec {
        CouplerSpec {
            kind: CouplerKind::AsymmetricSquid,
            critical_current: 50e-9,
            asymmetry: alpha,
            junction_capacitance: 2e-15,
            alpha_junction_capacitance: 1e-15,
            flux,
            flux_prime: 0.0,
        }
    }

    // Closed forms written out independently of the phasor route.
    fn textbook(alpha: f64, flux: f64) -> (f64, f64) {
        let xi = (1.0 - alpha) / (1.0 + alpha);
        let x = PI * flux;
        let e = (1.0 + alpha) * (x.cos().powi(2) + xi * xi * x.sin().powi(2)).sqrt();
        (e, x + (xi * x.tan()).atan())
    }

    #[test]
    fn prefactor_at_zero_flux() {
        for alpha in [0.0, 0.3, 1.0, 2.5] {
            let c = squid(alpha, 0.0);
            assert_relative_eq!(
                c.effective_junction().energy,
                c.josephson_energy() * (1.0 + alpha),
                max_relative = 1e-14
            );
            assert_eq!(c.effective_junction().phase_shift, 0.0);
        }
    }

    #[test]
    fn symmetric_squid_vanishes_at_half_flux() {
        let c = squid(1.0, 0.5);
        assert!(c.effective_junction().energy < 1e-12 * c.josephson_energy());
    }

    #[test]
    fn single_junction_limit_is_linear_in_flux() {
        for f in [0.1, 0.37, 0.5, 0.8, 0.99] {
            assert_relative_eq!(
                squid(0.0, f).effective_junction().phase_shift,
                2.0 * PI * f,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn matches_closed_form_inside_principal_strip() {
        for alpha in [0.1, 0.4, 0.9] {
            for f in [-0.45, -0.2, 0.05, 0.25, 0.45] {
                let c = squid(alpha, f);
                let (e, t) = textbook(alpha, f);
                let ej = c.effective_junction();
                assert_relative_eq!(ej.energy / c.josephson_energy(), e, max_relative = 1e-12);
                assert_relative_eq!(ej.phase_shift, t, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn phase_shift_is_continuous_across_half_flux() {
        for alpha in [0.0, 0.4, 0.8, 1.5] {
            let lo = squid(alpha, 0.5 - 1e-9).effective_junction().phase_shift;
            let hi = squid(alpha, 0.5 + 1e-9).effective_junction().phase_shift;
            assert!((hi - lo).abs() < 1e-6, "alpha {alpha}: {lo} vs {hi}");
        }
    }

    #[test]
    fn bisquid_switch_off_point() {
        let phi_p = 0.5f64.acos() / PI;
        let c = CouplerSpec {
            kind: CouplerKind::BiSquid,
            asymmetry: 0.5,
            ..squid(0.5, 0.5 - phi_p / 2.0)
        }
        .with_fluxes(0.5 - phi_p / 2.0, phi_p);
        assert!(c.effective_junction().energy < 1e-12 * c.josephson_energy());
    }

    #[test]
    fn total_capacitance_counts_extra_junction() {
        let s = squid(0.4, 0.0);
        let b = CouplerSpec {
            kind: CouplerKind::BiSquid,
            ..s
        };
        assert_relative_eq!(s.total_capacitance(), 3e-15, max_relative = 1e-12);
        assert_relative_eq!(b.total_capacitance(), 5e-15, max_relative = 1e-12);
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(squid(-0.1, 0.0).validate().is_err());
        assert!(squid(0.4, 0.0).with_fluxes(0.0, 0.2).validate().is_err());
        let mut c = squid(0.4, 0.0);
        c.critical_current = 0.0;
        assert!(c.validate().is_err());
    }
}
