use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use twophoton::config::DetectorConfig;
use twophoton::metrics::{
    sweep, Axis, FidelityOptions, OptimizeSpec, Optimum, RwaGuards, SweepSpec,
};

use crate::io::{read_config, write_json, write_text, CliError};
use crate::source::DetectorSource;
use crate::Context;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub baseline: DetectorSource,
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub options: FidelityOptions,
    #[serde(default)]
    pub guards: RwaGuards,
    #[serde(default)]
    pub optimize: Option<OptimizeSpec>,
}

#[derive(Serialize)]
struct Argmax {
    index: Vec<usize>,
    values: BTreeMap<String, f64>,
    p_click: f64,
    p_dark: f64,
    optimum: Option<Optimum>,
}

#[derive(Serialize)]
struct Summary {
    #[serde(rename = "F_max")]
    f_max: Option<f64>,
    argmax: Option<Argmax>,
    interior_maximum: bool,
    cells: usize,
    failures: usize,
    axes: Vec<Axis>,
    options: FidelityOptions,
    baseline: DetectorConfig,
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg: SweepConfig = read_config(ctx.config.as_deref())?;
    let mut options = cfg.options;
    options.tolerances = ctx.tolerances(options.tolerances);
    let spec = SweepSpec {
        baseline: cfg.baseline.resolve()?,
        axes: cfg.axes,
        options,
        guards: cfg.guards,
        optimize: cfg.optimize,
    };
    let map = sweep(&spec)?;
    write_text(&ctx.out, "sweep.csv", &map.to_csv())?;

    let mut log = String::new();
    for c in map.failures() {
        log.push_str(&format!(
            "{:?} {:?}: {}\n",
            c.index,
            c.values,
            c.error.as_deref().unwrap_or_default()
        ));
    }
    write_text(&ctx.out, "failures.log", &log)?;

    if spec.optimize.is_some() {
        let mut csv = String::from("axis1,axis2,g21_MHz,rabi_MHz,at_boundary,evaluations\n");
        for c in &map.cells {
            let a2 = c
                .values
                .get(1)
                .map_or(String::new(), |v| format!("{v:.9e}"));
            match c.optimum {
                Some(o) => csv.push_str(&format!(
                    "{:.9e},{a2},{:.9e},{:.9e},{},{}\n",
                    c.values[0], o.g21_mhz, o.rabi_mhz, o.at_boundary, o.evaluations
                )),
                None => csv.push_str(&format!("{:.9e},{a2},NaN,NaN,,\n", c.values[0])),
            }
        }
        write_text(&ctx.out, "optima.csv", &csv)?;
    }

    let argmax = map.best().map(|c| {
        let point = c.point.expect("the maximum has a value");
        Argmax {
            index: c.index.clone(),
            values: map
                .axes
                .iter()
                .zip(&c.values)
                .map(|(a, v)| (a.parameter.name().to_string(), *v))
                .collect(),
            p_click: point.p_click,
            p_dark: point.p_dark,
            optimum: c.optimum,
        }
    });
    let summary = Summary {
        f_max: map.f_max,
        argmax,
        interior_maximum: map.has_interior_maximum(),
        cells: map.cells.len(),
        failures: map.failures().count(),
        axes: map.axes.clone(),
        options: spec.options,
        baseline: spec.baseline,
    };
    write_json(&ctx.out, "summary.json", &summary)?;
    match map.f_max {
        Some(_) => Ok(()),
        None => Err(CliError {
            code: crate::io::EXIT_NUMERIC,
            message: "every cell of the sweep failed".into(),
        }),
    }
}
