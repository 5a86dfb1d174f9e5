use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::RwaGuards;
use super::{fidelity_with, FidelityOptions, FidelityPoint};
use crate::config::DetectorConfig;
use crate::error::{Error, Result};
use crate::lindblad::ModelParams;
use crate::units::from_mhz;

fn default_coarse() -> usize {
    7
}

fn default_xtol() -> f64 {
    1e-3
}

fn default_ftol() -> f64 {
    1e-6
}

fn default_max_evals() -> usize {
    400
}

/// Search box for `(g21, Ω)` in MHz and the stopping rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSpec {
    pub g21_mhz: [f64; 2],
    pub rabi_mhz: [f64; 2],
    #[serde(default = "default_coarse")]
    pub coarse_points: usize,
    /// Smallest step, as a fraction of each box side.
    #[serde(default = "default_xtol")]
    pub xtol: f64,
    /// Refinement stops once a full sweep gains less than this.
    #[serde(default = "default_ftol")]
    pub ftol: f64,
    #[serde(default = "default_max_evals")]
    pub max_evals: usize,
}

impl OptimizeSpec {
    pub fn new(g21_mhz: [f64; 2], rabi_mhz: [f64; 2]) -> Self {
        OptimizeSpec {
            g21_mhz,
            rabi_mhz,
            coarse_points: default_coarse(),
            xtol: default_xtol(),
            ftol: default_ftol(),
            max_evals: default_max_evals(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("g21_mhz", self.g21_mhz), ("rabi_mhz", self.rabi_mhz)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::AxisInvalid(format!(
                    "{name}: need finite lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        if self.coarse_points < 2 {
            return Err(Error::AxisInvalid(
                "coarse_points must be at least 2".into(),
            ));
        }
        if !(self.xtol > 0.0 && self.xtol < 1.0 && self.ftol >= 0.0) {
            return Err(Error::AxisInvalid("need 0 < xtol < 1 and ftol ≥ 0".into()));
        }
        Ok(())
    }

    /// Rejects boxes that leave the rotating-wave regime of `c`.
    pub fn check_box(&self, c: &DetectorConfig, guards: &RwaGuards) -> Result<()> {
        self.validate()?;
        for g in self.g21_mhz {
            for r in self.rabi_mhz {
                guards.check(&DetectorConfig {
                    g21_mhz: g,
                    rabi_mhz: r,
                    ..c.clone()
                })?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub g21_mhz: f64,
    pub rabi_mhz: f64,
    pub point: FidelityPoint,
    /// The optimum touches the search box, which is then too small.
    pub at_boundary: bool,
    pub evaluations: usize,
}

struct Objective<'a> {
    baseline: &'a ModelParams,
    options: &'a FidelityOptions,
    cache: HashMap<(u64, u64), FidelityPoint>,
}

impl Objective<'_> {
    fn params(&self, x: [f64; 2]) -> ModelParams {
        ModelParams {
            g21: from_mhz(x[0]),
            rabi: from_mhz(x[1]),
            ..self.baseline.clone()
        }
    }

    fn eval(&mut self, x: [f64; 2]) -> Result<FidelityPoint> {
        let key = (x[0].to_bits(), x[1].to_bits());
        if let Some(p) = self.cache.get(&key) {
            return Ok(*p);
        }
        let p = fidelity_with(&self.params(x), self.options)?;
        self.cache.insert(key, p);
        Ok(p)
    }
}

/// Maximises the fidelity over `(g21, Ω)`: a coarse grid followed by a
/// compass search whose steps halve until they fall below `xtol`.
pub fn optimize(
    baseline: &ModelParams,
    spec: &OptimizeSpec,
    options: &FidelityOptions,
) -> Result<Optimum> {
    spec.validate()?;
    baseline.validate()?;
    let lo = [spec.g21_mhz[0], spec.rabi_mhz[0]];
    let hi = [spec.g21_mhz[1], spec.rabi_mhz[1]];
    let width = [hi[0] - lo[0], hi[1] - lo[1]];
    let n = spec.coarse_points;
    let at = |i: usize, k: usize| lo[k] + width[k] * i as f64 / (n - 1) as f64;
    let grid: Vec<[f64; 2]> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| [at(i, 0), at(j, 1)])
        .collect();

    let mut obj = Objective {
        baseline,
        options,
        cache: HashMap::new(),
    };
    let coarse: Vec<Result<FidelityPoint>> = grid
        .par_iter()
        .map(|&x| fidelity_with(&obj.params(x), options))
        .collect();
    let mut best: Option<([f64; 2], FidelityPoint)> = None;
    for (x, r) in grid.iter().zip(coarse) {
        let p = r?;
        obj.cache.insert((x[0].to_bits(), x[1].to_bits()), p);
        if best.map_or(true, |(_, b)| p.fidelity > b.fidelity) {
            best = Some((*x, p));
        }
    }
    let (mut x, mut fx) = best.expect("coarse grid is non-empty");
    let mut step = [width[0] / (n - 1) as f64, width[1] / (n - 1) as f64];
    let min_step = [spec.xtol * width[0], spec.xtol * width[1]];

    while obj.cache.len() < spec.max_evals && (step[0] >= min_step[0] || step[1] >= min_step[1]) {
        let start = fx.fidelity;
        let mut moved = false;
        for k in 0..2 {
            if step[k] < min_step[k] {
                continue;
            }
            for sign in [1.0, -1.0] {
                let mut y = x;
                y[k] = (x[k] + sign * step[k]).clamp(lo[k], hi[k]);
                if y == x {
                    continue;
                }
                let p = obj.eval(y)?;
                if p.fidelity > fx.fidelity {
                    x = y;
                    fx = p;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step = [step[0] / 2.0, step[1] / 2.0];
        } else if fx.fidelity - start < spec.ftol
            && step.iter().zip(&min_step).all(|(s, m)| *s < 8.0 * m)
        {
            break;
        }
    }
    let edge =
        |k: usize| (x[k] - lo[k]).abs() <= min_step[k] || (hi[k] - x[k]).abs() <= min_step[k];
    Ok(Optimum {
        g21_mhz: x[0],
        rabi_mhz: x[1],
        point: fx,
        at_boundary: edge(0) || edge(1),
        evaluations: obj.cache.len(),
    })
}

pub(crate) fn optimize_config(
    c: &DetectorConfig,
    spec: &OptimizeSpec,
    options: &FidelityOptions,
) -> Result<Optimum> {
    optimize(&c.to_params()?, spec, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::set_a;

    #[test]
    fn flat_objective_reports_boundary() {
        let mut c = set_a();
        c.efficiency = 0.0;
        let o = optimize(
            &c.to_params().unwrap(),
            &OptimizeSpec::new([5.0, 30.0], [50.0, 300.0]),
            &FidelityOptions::default(),
        )
        .unwrap();
        assert_eq!(o.point.fidelity, 0.5);
        assert!(o.at_boundary);
    }
}
