use std::f64::consts::PI;

use approx::assert_relative_eq;
use twophoton::config::reference_jpm;
use twophoton::jpm::*;
use twophoton::units::{to_ghz, to_mhz};
use twophoton::Error;

fn spectrum() -> JpmSpectrum {
    solve_spectrum(&reference_jpm(), &GridSpec::default()).unwrap()
}

#[test]
fn reference_energies() {
    let s = reference_jpm();
    assert_relative_eq!(to_ghz(s.josephson_energy()), 1243.4, max_relative = 5e-3);
    assert_relative_eq!(to_ghz(s.inductive_energy()), 544.0, max_relative = 5e-3);
    assert_relative_eq!(to_mhz(s.charging_energy()), 47.9, max_relative = 5e-3);
}

#[test]
fn working_point_levels() {
    let s = spectrum();
    let w = s.wells.unwrap();
    assert_eq!(s.count(w.shallow_label()), 2);
    assert_eq!(s.count(w.deep_label()), 94);
    let r = s.roles().unwrap();
    assert_eq!((r.g, r.e, r.f), (92, 94, 95));
    assert_relative_eq!(to_ghz(s.transition(r.e, r.g)), 10.758, max_relative = 1e-2);
    assert_relative_eq!(to_ghz(s.transition(r.f, r.e)), 3.566, max_relative = 1e-2);
}

#[test]
fn orthonormal_and_contained() {
    let s = spectrum();
    let mut total = 0.0;
    for a in 0..s.len() {
        for b in 0..s.len() {
            total += (s.overlap(a, b) - if a == b { 1.0 } else { 0.0 }).abs();
        }
    }
    assert!(total < 1e-6, "Σ|⟨a|b⟩ − δ| = {total:e}");
    assert!(s.boundary_density() < 1e-12);
}

#[test]
fn well_counts_survive_grid_changes() {
    let base = GridSpec::default();
    let h = base.spacing();
    for grid in [
        base.refined(),
        GridSpec {
            points: (2.0 * 0.9 * base.half_width / h).round() as usize + 1,
            half_width: 0.9 * base.half_width,
        },
        GridSpec {
            points: (2.0 * 1.1 * base.half_width / h).round() as usize + 1,
            half_width: 1.1 * base.half_width,
        },
    ] {
        let s = solve_spectrum(&reference_jpm(), &grid).unwrap();
        let w = s.wells.unwrap();
        assert_eq!(
            (s.count(w.shallow_label()), s.count(w.deep_label())),
            (2, 94),
            "{grid:?}"
        );
    }
}

#[test]
fn second_order_in_grid_spacing() {
    let c = grid_convergence(&reference_jpm(), &GridSpec::default(), None).unwrap();
    assert!(
        (c.observed_order - 2.0).abs() < 0.2,
        "order {}",
        c.observed_order
    );
    // A 1e-8 doubling tolerance is not met at this resolution and is
    // reported rather than enforced.
    assert!(c.max_relative_change > 1e-8);
    assert!(matches!(
        grid_convergence(&reference_jpm(), &GridSpec::default(), Some(1e-8)),
        Err(Error::NotConverged(_))
    ));
}

#[test]
fn charge_matrix_and_rates() {
    let s = spectrum();
    let c = charge_matrix(&s, 0..s.len()).unwrap();
    assert!(c.asymmetry < 1e-6);
    for a in 0..s.len() {
        for b in 0..s.len() {
            assert!((c.get(a, b) - c.get(b, a).conj()).norm() < 1e-15);
        }
    }
    let t = rate_table(&c, &s).unwrap();
    for (got, want) in [
        (t.fg, 0.0184),
        (t.fe, 0.0458),
        (t.sink_f, 121.56),
        (t.sink_e, 0.4817),
        (t.sink_g, 0.0007),
    ] {
        assert_relative_eq!(got, want, max_relative = 1e-2);
    }
    let abs = t.absolute(1.0, 4.0);
    assert_relative_eq!(abs.sink_f, 5.0 * t.sink_f);
    assert_relative_eq!(abs.kappa_fe, 4.0 * t.fe);
}

#[test]
fn flux_noise_dephasing() {
    let d = dephasing_rates(
        &reference_jpm(),
        &GridSpec::default(),
        1e-6,
        2.0 * PI,
        DEFAULT_FLUX_STEP,
    )
    .unwrap();
    assert_relative_eq!(to_mhz(d.gamma_e), 1.3, max_relative = 0.1);
    assert_relative_eq!(to_mhz(d.gamma_f), 30.0, max_relative = 0.1);
}

#[test]
fn potential_shapes_across_bias() {
    let shape =
        |b: f64| solve_spectrum(&reference_jpm().with_bias(b), &GridSpec::default()).unwrap();
    let sym = shape(0.5);
    let w = sym.wells.unwrap();
    assert_relative_eq!(w.shallow_bottom.1, w.deep_bottom.1, max_relative = 1e-9);
    // The degenerate ground doublet is split one state per well.
    assert_ne!(sym.labels[0], sym.labels[1]);
    assert!(sym.labels[..2]
        .iter()
        .all(|l| *l != WellLabel::Superbarrier));
    assert!(shape(0.6).wells.is_some());
    assert!(shape(0.6316).wells.is_some());
    let single = shape(0.0);
    assert!(single.wells.is_none() && single.labels.is_empty());
    assert!(single.roles().is_err());
}

#[test]
fn json_config_is_strict() {
    let v = serde_json::to_value(reference_jpm()).unwrap();
    assert_eq!(
        serde_json::from_value::<JpmSpec>(v.clone()).unwrap(),
        reference_jpm()
    );
    let mut bad = v;
    bad.as_object_mut()
        .unwrap()
        .insert("shunt".into(), 1.0.into());
    assert!(serde_json::from_value::<JpmSpec>(bad).is_err());
}
