use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectrum::{JpmSpectrum, WellLabel};
use crate::error::{Error, Result};

/// `m_λλ' = ⟨λ| −i∂_φ |λ'⟩` over a contiguous window of retained states.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeMatrix {
    /// First global eigenindex of the window.
    pub offset: usize,
    pub elements: DMatrix<Complex64>,
    /// `max |m_ab − conj(m_ba)|` before symmetrisation.
    pub asymmetry: f64,
}

impl ChargeMatrix {
    /// Element by global eigenindices.
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.elements[(a - self.offset, b - self.offset)]
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= self.offset && i < self.offset + self.elements.nrows()
    }
}

/// Charge matrix over eigenindices `window` by centred differences.
///
/// With real wavefunctions the element is `−i` times a real matrix that
/// summation by parts makes exactly antisymmetric, so Hermiticity holds
/// up to rounding; the result is symmetrised anyway and the residue kept.
pub fn charge_matrix(
    spectrum: &JpmSpectrum,
    window: std::ops::Range<usize>,
) -> Result<ChargeMatrix> {
    if window.end > spectrum.len() || window.is_empty() {
        return Err(Error::InsufficientStates(format!(
            "window {window:?} outside the {} retained states",
            spectrum.len()
        )));
    }
    let h = spectrum.grid.spacing();
    let derivs: Vec<Vec<f64>> = window
        .clone()
        .map(|i| {
            let w = &spectrum.wavefunctions[i];
            let n = w.len();
            (0..n)
                .map(|j| {
                    let up = if j + 1 < n { w[j + 1] } else { 0.0 };
                    let dn = if j > 0 { w[j - 1] } else { 0.0 };
                    (up - dn) / (2.0 * h)
                })
                .collect()
        })
        .collect();
    let k = window.len();
    let mut raw = DMatrix::<f64>::zeros(k, k);
    for (a, ia) in window.clone().enumerate() {
        let wa = &spectrum.wavefunctions[ia];
        for (b, db) in derivs.iter().enumerate() {
            raw[(a, b)] = h * wa.iter().zip(db).map(|(p, q)| p * q).sum::<f64>();
        }
    }
    let mut asymmetry: f64 = 0.0;
    let mut elements = DMatrix::<Complex64>::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            // m = −i raw; Hermitian means raw antisymmetric.
            asymmetry = asymmetry.max((raw[(a, b)] + raw[(b, a)]).abs());
            let anti = 0.5 * (raw[(a, b)] - raw[(b, a)]);
            elements[(a, b)] = Complex64::new(0.0, -anti);
        }
    }
    Ok(ChargeMatrix {
        offset: window.start,
        elements,
        asymmetry,
    })
}

/// Relaxation rates relative to the `e → g` anchor.
///
/// The internal and engineered baths share the same ratios, so one table
/// serves both `Γ/Γ_eg` and `κ/κ_eg`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub fg: f64,
    pub fe: f64,
    /// Summed decay into deep-well states below `g`, `e`, `f`.
    pub sink_g: f64,
    pub sink_e: f64,
    pub sink_f: f64,
    pub m_ge: f64,
    pub m_ef: f64,
    pub m_gf: f64,
}

/// Absolute rates (rad/s) once `Γ_eg` and `κ_eg` are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsoluteRates {
    pub gamma_fe: f64,
    pub gamma_fg: f64,
    pub kappa_fe: f64,
    pub kappa_fg: f64,
    /// `γ_λ = Γ̃_λ + κ̃_λ`.
    pub sink_g: f64,
    pub sink_e: f64,
    pub sink_f: f64,
}

impl RateTable {
    pub fn absolute(&self, gamma_eg: f64, kappa_eg: f64) -> AbsoluteRates {
        let total = gamma_eg + kappa_eg;
        AbsoluteRates {
            gamma_fe: self.fe * gamma_eg,
            gamma_fg: self.fg * gamma_eg,
            kappa_fe: self.fe * kappa_eg,
            kappa_fg: self.fg * kappa_eg,
            sink_g: self.sink_g * total,
            sink_e: self.sink_e * total,
            sink_f: self.sink_f * total,
        }
    }
}

/// Ohmic-bath ratios `(ω_λλ'/ω_eg)|m_λλ'/m_ge|²`.
pub fn rate_table(charge: &ChargeMatrix, spectrum: &JpmSpectrum) -> Result<RateTable> {
    let r = spectrum.roles()?;
    let deep = spectrum
        .wells
        .map(|w| w.deep_label())
        .unwrap_or(WellLabel::RightWell);
    for i in [r.g, r.e, r.f] {
        if !charge.contains(i) {
            return Err(Error::InsufficientStates(format!(
                "state {i} outside the charge-matrix window"
            )));
        }
    }
    let m_ge = charge.get(r.g, r.e).norm();
    if m_ge < 1e-12 {
        return Err(Error::DegenerateAnchor(format!("|m_ge| = {m_ge:e}")));
    }
    let w_eg = spectrum.transition(r.e, r.g);
    let ratio = |a: usize, b: usize| {
        (spectrum.transition(a, b).abs() / w_eg) * (charge.get(a, b).norm() / m_ge).powi(2)
    };
    let sink = |a: usize| -> Result<f64> {
        let mut s = 0.0;
        for b in 0..spectrum.len() {
            if spectrum.labels[b] == deep && spectrum.energy(b) < spectrum.energy(a) {
                if !charge.contains(b) {
                    return Err(Error::InsufficientStates(format!(
                        "deep state {b} outside the window"
                    )));
                }
                s += ratio(a, b);
            }
        }
        Ok(s)
    };
    Ok(RateTable {
        fg: ratio(r.f, r.g),
        fe: ratio(r.f, r.e),
        sink_g: sink(r.g)?,
        sink_e: sink(r.e)?,
        sink_f: sink(r.f)?,
        m_ge,
        m_ef: charge.get(r.e, r.f).norm(),
        m_gf: charge.get(r.g, r.f).norm(),
    })
}
