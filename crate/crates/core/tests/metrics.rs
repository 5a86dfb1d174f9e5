mod common;

use twophoton::config::{set_a, set_b};
use twophoton::lindblad::HilbertSpace;
use twophoton::metrics::*;
use twophoton::Error;

fn small_spec(axes: Vec<Axis>) -> SweepSpec {
    SweepSpec {
        baseline: set_a(),
        axes,
        options: FidelityOptions::default(),
        guards: RwaGuards::default(),
        optimize: None,
    }
}

#[test]
fn preset_fidelities() {
    let a = fidelity(&set_a().to_params().unwrap()).unwrap();
    let b = fidelity(&set_b().to_params().unwrap()).unwrap();
    assert!((a.fidelity - 0.9924).abs() < 3e-3, "{a:?}");
    assert!((b.fidelity - 0.9979).abs() < 3e-3, "{b:?}");
    assert!((a.fidelity - combine(a.p_click, a.p_dark)).abs() < 1e-15);
    assert!(a.p_click <= 0.995 && a.p_dark <= 0.995);
}

#[test]
fn minimal_truncation_is_exact_for_pairs() {
    let p = set_a().to_params().unwrap();
    let small = fidelity_with(&p, &FidelityOptions::default()).unwrap();
    let large = fidelity(&p).unwrap();
    assert_eq!(
        FidelityOptions::default().space(),
        HilbertSpace::new(3, 2, 2).unwrap()
    );
    assert!((small.p_click - large.p_click).abs() < 1e-8);
}

#[test]
fn sign_of_g21_is_a_gauge() {
    for g in [2.0, 8.0, 15.0, 20.4, 30.0] {
        let mut c = set_a();
        c.g21_mhz = g;
        let plus = fidelity_with(&c.to_params().unwrap(), &FidelityOptions::default()).unwrap();
        c.g21_mhz = -g;
        let minus = fidelity_with(&c.to_params().unwrap(), &FidelityOptions::default()).unwrap();
        assert!((plus.fidelity - minus.fidelity).abs() < 1e-8);
    }
}

#[test]
fn single_cell_sweep() {
    let spec = small_spec(vec![Axis::linear(AxisParameter::G21Mhz, 20.4, 20.4, 1)]);
    let m = sweep(&spec).unwrap();
    assert_eq!(m.cells.len(), 1);
    let direct = fidelity_with(&set_a().to_params().unwrap(), &FidelityOptions::default()).unwrap();
    assert_eq!(m.cells[0].point.unwrap(), direct);
    assert_eq!(m.argmax, Some(0));
    assert!(!m.has_interior_maximum());
}

#[test]
fn sweeps_are_reproducible_and_ordered() {
    let spec = small_spec(vec![
        Axis::linear(AxisParameter::G21Mhz, 10.0, 30.0, 3),
        Axis {
            parameter: AxisParameter::RabiMhz,
            min: 100.0,
            max: 300.0,
            points: 3,
            scale: AxisScale::Log,
        },
    ]);
    let a = sweep(&spec).unwrap();
    let b = sweep(&spec).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert!(a.to_csv().starts_with("axis1,axis2,P_clk2,P_dark,F\n"));
    let idx: Vec<Vec<usize>> = a.cells.iter().map(|c| c.index.clone()).collect();
    assert_eq!(idx[1], vec![0, 1]);
    assert_eq!(idx[3], vec![1, 0]);
    let best = a.best().unwrap().fidelity().unwrap();
    assert_eq!(Some(best), a.f_max);
    assert!(a.cells.iter().all(|c| c.fidelity().unwrap() <= best));
    assert!((a.cells[1].values[1] - (100.0f64 * 300.0).sqrt()).abs() < 1e-9);
}

#[test]
fn failed_cells_are_recorded() {
    let spec = small_spec(vec![Axis::linear(AxisParameter::Efficiency, 0.9, 1.1, 3)]);
    let m = sweep(&spec).unwrap();
    assert_eq!(m.failures().count(), 1);
    assert!(m.cells[2].point.is_none() && m.cells[2].error.is_some());
    assert!(m.to_csv().lines().last().unwrap().ends_with("NaN,NaN,NaN"));
    assert_eq!(m.argmax, Some(1));
}

#[test]
fn invalid_axes_are_rejected() {
    for axes in [
        vec![],
        vec![Axis::linear(AxisParameter::G21Mhz, 10.0, 300.0, 3)],
        vec![Axis::linear(AxisParameter::RabiMhz, 100.0, 800.0, 3)],
        vec![Axis::linear(AxisParameter::G21Mhz, 30.0, 10.0, 3)],
        vec![Axis::linear(AxisParameter::G21Mhz, 10.0, 10.0, 3)],
        vec![Axis::linear(AxisParameter::G21Mhz, 10.0, 20.0, 0)],
        vec![
            Axis::linear(AxisParameter::G21Mhz, 1.0, 2.0, 2),
            Axis::linear(AxisParameter::G21Mhz, 1.0, 2.0, 2),
        ],
    ] {
        let e = sweep(&small_spec(axes.clone())).unwrap_err();
        assert!(matches!(e, Error::AxisInvalid(_)), "{axes:?}: {e}");
        assert!(e.is_config());
    }
}

#[test]
fn optimum_near_reference_drive() {
    let bx = OptimizeSpec::new([2.0, 40.0], [20.0, 400.0]);
    for (c, g21, rabi) in [(set_a(), 20.4, 220.6), (set_b(), 24.4, 188.2)] {
        let o = optimize(&c.to_params().unwrap(), &bx, &FidelityOptions::default()).unwrap();
        assert!(!o.at_boundary);
        assert!((o.g21_mhz / g21 - 1.0).abs() < 0.1, "{o:?}");
        assert!((o.rabi_mhz / rabi - 1.0).abs() < 0.1, "{o:?}");
        let at_reference =
            fidelity_with(&c.to_params().unwrap(), &FidelityOptions::default()).unwrap();
        assert!(o.point.fidelity >= at_reference.fidelity - 1e-6);
    }
}

#[test]
fn optimiser_box_must_respect_rwa() {
    let spec = SweepSpec {
        optimize: Some(OptimizeSpec::new([2.0, 400.0], [20.0, 400.0])),
        ..small_spec(vec![Axis::linear(AxisParameter::KappaEgMhz, 1.0, 2.0, 2)])
    };
    assert!(matches!(sweep(&spec), Err(Error::AxisInvalid(_))));
}

#[test]
fn spec_round_trips_through_json() {
    let spec = SweepSpec {
        optimize: Some(OptimizeSpec::new([2.0, 40.0], [20.0, 400.0])),
        ..small_spec(vec![Axis::linear(
            AxisParameter::CaptureTimeNs,
            20.0,
            100.0,
            9,
        )])
    };
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<SweepSpec>(&text).unwrap(), spec);
    let bad = text.replacen("\"axes\"", "\"axis\"", 1);
    assert!(serde_json::from_str::<SweepSpec>(&bad).is_err());
}
