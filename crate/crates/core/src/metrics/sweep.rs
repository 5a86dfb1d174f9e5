use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::optimize::{optimize_config, OptimizeSpec, Optimum};
use super::{fidelity_with, FidelityOptions, FidelityPoint};
use crate::config::DetectorConfig;
use crate::error::{Error, Result};

/// Detector parameter an axis can drive, in the units of
/// [`DetectorConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParameter {
    G21Mhz,
    RabiMhz,
    CouplingMhz,
    GammaEgMhz,
    KappaEgMhz,
    CaptureTimeNs,
    Efficiency,
}

impl AxisParameter {
    pub fn name(self) -> &'static str {
        match self {
            AxisParameter::G21Mhz => "g21_mhz",
            AxisParameter::RabiMhz => "rabi_mhz",
            AxisParameter::CouplingMhz => "coupling_mhz",
            AxisParameter::GammaEgMhz => "gamma_eg_mhz",
            AxisParameter::KappaEgMhz => "kappa_eg_mhz",
            AxisParameter::CaptureTimeNs => "capture_time_ns",
            AxisParameter::Efficiency => "efficiency",
        }
    }

    pub fn set(self, c: &mut DetectorConfig, v: f64) {
        match self {
            AxisParameter::G21Mhz => c.g21_mhz = v,
            AxisParameter::RabiMhz => c.rabi_mhz = v,
            AxisParameter::CouplingMhz => c.coupling_mhz = v,
            AxisParameter::GammaEgMhz => c.gamma_eg_mhz = v,
            AxisParameter::KappaEgMhz => c.kappa_eg_mhz = v,
            AxisParameter::CaptureTimeNs => c.capture_time_ns = v,
            AxisParameter::Efficiency => c.efficiency = v,
        }
    }

    pub fn get(self, c: &DetectorConfig) -> f64 {
        match self {
            AxisParameter::G21Mhz => c.g21_mhz,
            AxisParameter::RabiMhz => c.rabi_mhz,
            AxisParameter::CouplingMhz => c.coupling_mhz,
            AxisParameter::GammaEgMhz => c.gamma_eg_mhz,
            AxisParameter::KappaEgMhz => c.kappa_eg_mhz,
            AxisParameter::CaptureTimeNs => c.capture_time_ns,
            AxisParameter::Efficiency => c.efficiency,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub parameter: AxisParameter,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: AxisScale,
}

impl Axis {
    pub fn linear(parameter: AxisParameter, min: f64, max: f64, points: usize) -> Self {
        Axis {
            parameter,
            min,
            max,
            points,
            scale: AxisScale::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let name = self.parameter.name();
        if self.points == 0 {
            return Err(Error::AxisInvalid(format!(
                "{name}: need at least one point"
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(Error::AxisInvalid(format!(
                "{name}: need finite min ≤ max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points > 1 && self.min == self.max {
            return Err(Error::AxisInvalid(format!(
                "{name}: {} points on an empty interval",
                self.points
            )));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::AxisInvalid(format!(
                "{name}: log axis needs min > 0"
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                match self.scale {
                    AxisScale::Linear => self.min + s * (self.max - self.min),
                    AxisScale::Log => (self.min.ln() + s * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

fn default_g21_fraction() -> f64 {
    1.0 / 20.0
}

fn default_rabi_fraction() -> f64 {
    1.0 / 5.0
}

/// Rotating-wave validity limits `|g21| < f1 ω1` and `Ω < f2 ω_ef`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RwaGuards {
    #[serde(default = "default_g21_fraction")]
    pub g21_fraction: f64,
    #[serde(default = "default_rabi_fraction")]
    pub rabi_fraction: f64,
}

impl Default for RwaGuards {
    fn default() -> Self {
        RwaGuards {
            g21_fraction: default_g21_fraction(),
            rabi_fraction: default_rabi_fraction(),
        }
    }
}

impl RwaGuards {
    pub fn check(&self, c: &DetectorConfig) -> Result<()> {
        let g21_limit = self.g21_fraction * c.omega1_ghz * 1e3;
        let rabi_limit = self.rabi_fraction * c.omega_ef_ghz * 1e3;
        if c.g21_mhz.abs() >= g21_limit {
            return Err(Error::AxisInvalid(format!(
                "|g21| = {} MHz breaks the RWA limit {g21_limit} MHz",
                c.g21_mhz
            )));
        }
        if c.rabi_mhz.abs() >= rabi_limit {
            return Err(Error::AxisInvalid(format!(
                "Ω = {} MHz breaks the RWA limit {rabi_limit} MHz",
                c.rabi_mhz
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub baseline: DetectorConfig,
    /// One or two axes; the first varies slowest.
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub options: FidelityOptions,
    #[serde(default)]
    pub guards: RwaGuards,
    /// When present every cell reports the fidelity maximised over
    /// `(g21, Ω)` instead of the fidelity at the baseline drive.
    #[serde(default)]
    pub optimize: Option<OptimizeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapCell {
    pub index: Vec<usize>,
    pub values: Vec<f64>,
    pub point: Option<FidelityPoint>,
    /// Inner optimum when the sweep optimises each cell.
    pub optimum: Option<Optimum>,
    pub error: Option<String>,
}

impl MapCell {
    pub fn fidelity(&self) -> Option<f64> {
        self.point.map(|p| p.fidelity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityMap {
    pub axes: Vec<Axis>,
    /// Row-major over the axes.
    pub cells: Vec<MapCell>,
    pub argmax: Option<usize>,
    pub f_max: Option<f64>,
}

impl FidelityMap {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.points).collect()
    }

    pub fn best(&self) -> Option<&MapCell> {
        self.argmax.map(|i| &self.cells[i])
    }

    pub fn failures(&self) -> impl Iterator<Item = &MapCell> {
        self.cells.iter().filter(|c| c.error.is_some())
    }

    pub fn is_boundary(&self, cell: &MapCell) -> bool {
        cell.index
            .iter()
            .zip(&self.axes)
            .any(|(&i, a)| i == 0 || i + 1 == a.points)
    }

    /// True when the maximum lies strictly above every boundary cell.
    pub fn has_interior_maximum(&self) -> bool {
        let Some(best) = self.best() else {
            return false;
        };
        if self.is_boundary(best) {
            return false;
        }
        let f = best.fidelity().unwrap();
        self.cells
            .iter()
            .filter(|c| self.is_boundary(c))
            .all(|c| c.fidelity().is_some_and(|x| x < f))
    }

    /// `axis1,axis2,P_clk2,P_dark,F`; failed cells carry `NaN`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("axis1,axis2,P_clk2,P_dark,F\n");
        for c in &self.cells {
            let a1 = c.values[0];
            let a2 = c
                .values
                .get(1)
                .map_or(String::new(), |v| format!("{v:.9e}"));
            let (p, d, f) = c.point.map_or((f64::NAN, f64::NAN, f64::NAN), |p| {
                (p.p_click, p.p_dark, p.fidelity)
            });
            s.push_str(&format!("{a1:.9e},{a2},{p:.12e},{d:.12e},{f:.12e}\n"));
        }
        s
    }
}

fn cell_config(spec: &SweepSpec, values: &[f64]) -> DetectorConfig {
    let mut c = spec.baseline.clone();
    for (a, &v) in spec.axes.iter().zip(values) {
        a.parameter.set(&mut c, v);
    }
    c
}

fn evaluate(
    spec: &SweepSpec,
    values: &[f64],
) -> (Option<FidelityPoint>, Option<Optimum>, Option<String>) {
    let c = cell_config(spec, values);
    let result = match &spec.optimize {
        Some(o) => optimize_config(&c, o, &spec.options).map(|opt| (opt.point, Some(opt))),
        None => c
            .to_params()
            .and_then(|p| fidelity_with(&p, &spec.options))
            .map(|p| (p, None)),
    };
    match result {
        Ok((p, o)) => (Some(p), o, None),
        Err(e) => (None, None, Some(e.to_string())),
    }
}

/// Evaluates the fidelity on the axis grid in parallel. Cells that fail
/// numerically are recorded and skipped for the maximum.
pub fn sweep(spec: &SweepSpec) -> Result<FidelityMap> {
    if spec.axes.is_empty() || spec.axes.len() > 2 {
        return Err(Error::AxisInvalid(format!(
            "need one or two axes, got {}",
            spec.axes.len()
        )));
    }
    for a in &spec.axes {
        a.validate()?;
    }
    if spec.axes.len() == 2 && spec.axes[0].parameter == spec.axes[1].parameter {
        return Err(Error::AxisInvalid(
            "both axes drive the same parameter".into(),
        ));
    }
    spec.options.space().validate()?;
    spec.baseline.to_params()?;
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let mut index: Vec<Vec<usize>> = vec![vec![]];
    for g in &grids {
        index = index
            .into_iter()
            .flat_map(|p| (0..g.len()).map(move |i| [p.clone(), vec![i]].concat()))
            .collect();
    }
    // Every corner must respect the guards, which bounds the whole box
    // when only the inner optimiser moves g21 and Ω.
    for idx in &index {
        let values: Vec<f64> = idx.iter().zip(&grids).map(|(&i, g)| g[i]).collect();
        let c = cell_config(spec, &values);
        spec.guards.check(&c)?;
        if let Some(o) = &spec.optimize {
            o.check_box(&c, &spec.guards)?;
        }
    }
    let cells: Vec<MapCell> = index
        .into_par_iter()
        .map(|idx| {
            let values: Vec<f64> = idx.iter().zip(&grids).map(|(&i, g)| g[i]).collect();
            let (point, optimum, error) = evaluate(spec, &values);
            MapCell {
                index: idx,
                values,
                point,
                optimum,
                error,
            }
        })
        .collect();
    let mut argmax: Option<usize> = None;
    for (i, c) in cells.iter().enumerate() {
        if let Some(f) = c.fidelity() {
            if argmax.map_or(true, |b| f > cells[b].fidelity().unwrap()) {
                argmax = Some(i);
            }
        }
    }
    let f_max = argmax.and_then(|i| cells[i].fidelity());
    Ok(FidelityMap {
        axes: spec.axes.clone(),
        cells,
        argmax,
        f_max,
    })
}
