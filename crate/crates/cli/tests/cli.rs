use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twophoton"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .arg(sub)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn subcommand(file: &str) -> &str {
    file.split(['_', '.']).next().unwrap()
}

#[test]
fn every_example_config_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let o = run(subcommand(&name), &path, &tmp.path().join(&name), &[]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn outputs_have_fixed_headers() {
    let tmp = tempfile::tempdir().unwrap();
    let first = |p: PathBuf| {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    let c = tmp.path().join("c");
    assert!(run("coupler", &configs().join("coupler.json"), &c, &[])
        .status
        .success());
    assert_eq!(
        first(c.join("coupler_map.csv")),
        "phi_c,phi_c_prime,E_eff_GHz,g21_MHz,parity_residual"
    );
    let s = tmp.path().join("s");
    assert!(run("simulate", &configs().join("simulate.json"), &s, &[])
        .status
        .success());
    assert_eq!(
        first(s.join("trajectory.csv")),
        "time_ns,pop_g,pop_e,pop_f,pop_s,n_storage,n_buffer,n_filter"
    );
    let w = tmp.path().join("w");
    assert!(run("sweep", &configs().join("sweep.json"), &w, &[])
        .status
        .success());
    assert_eq!(first(w.join("sweep.csv")), "axis1,axis2,P_clk2,P_dark,F");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(w.join("summary.json")).unwrap()).unwrap();
    assert!(summary["F_max"].as_f64().unwrap() > 0.99);
    assert_eq!(summary["baseline"]["capture_time_ns"], 40.0);
    assert_eq!(summary["argmax"]["index"].as_array().unwrap().len(), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for (sub, file) in [
        ("simulate", "simulate.json"),
        ("sweep", "sweep.json"),
        ("coupler", "coupler_bisquid.json"),
    ] {
        let (a, b) = (
            tmp.path().join(format!("{file}.a")),
            tmp.path().join(format!("{file}.b")),
        );
        assert!(run(sub, &configs().join(file), &a, &[]).status.success());
        assert!(run(sub, &configs().join(file), &b, &["--threads", "2"])
            .status
            .success());
        for entry in std::fs::read_dir(&a).unwrap() {
            let name = entry.unwrap().file_name();
            let (x, y) = (
                std::fs::read(a.join(&name)).unwrap(),
                std::fs::read(b.join(&name)).unwrap(),
            );
            assert!(x == y, "{sub}: {name:?} differs between runs");
        }
    }
}

#[test]
fn unknown_keys_exit_with_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        (
            "simulate",
            r#"{"detector": {"preset": "set_a"}, "sampels": 5}"#,
            "sampels",
        ),
        (
            "simulate",
            r#"{"detector": {"preset": "set_a", "overrides": {"rabbi_mhz": 1.0}}}"#,
            "rabbi_mhz",
        ),
        (
            "sweep",
            r#"{"baseline": {"preset": "set_b"}, "axes": [{"parameter": "g21_mhz", "min": 1, "max": 2, "points": 2, "step": 1}]}"#,
            "step",
        ),
        (
            "jpm",
            r#"{"jpm": {"critical_current": 2.5e-6, "loop_inductance": 3e-10, "capacitance": 4e-13, "bias_flux": 0.6, "bias": 1}}"#,
            "bias",
        ),
        ("tables", r#"{"fidelity": false}"#, "fidelity"),
    ];
    for (i, (sub, text, key)) in cases.iter().enumerate() {
        let p = write(tmp.path(), &format!("{i}.json"), text);
        let o = run(sub, &p, &tmp.path().join("out"), &[]);
        assert_eq!(o.status.code(), Some(2), "{sub}: {}", stderr(&o));
        assert!(stderr(&o).contains(key), "{sub}: {}", stderr(&o));
    }
}

#[test]
fn bad_inputs_exit_with_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let broken = write(tmp.path(), "broken.json", "{\"detector\": ");
    assert_eq!(run("simulate", &broken, &out, &[]).status.code(), Some(2));
    assert_eq!(
        run("simulate", &tmp.path().join("missing.json"), &out, &[])
            .status
            .code(),
        Some(2)
    );
    let ok = configs().join("simulate.json");
    assert_eq!(
        run("simulate", &ok, &out, &["--threads", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run("simulate", &ok, &out, &["--tol-rel", "-1"])
            .status
            .code(),
        Some(2)
    );
    let neither = write(tmp.path(), "neither.json", r#"{"detector": {}}"#);
    assert_eq!(run("simulate", &neither, &out, &[]).status.code(), Some(2));
    let short = write(
        tmp.path(),
        "short.json",
        r#"{"detector": {"preset": "set_a"}, "samples": 1}"#,
    );
    assert_eq!(run("simulate", &short, &out, &[]).status.code(), Some(2));
    let axis = write(
        tmp.path(),
        "axis.json",
        r#"{"baseline": {"preset": "set_a"}, "axes": [{"parameter": "g21_mhz", "min": 30, "max": 10, "points": 3}]}"#,
    );
    assert_eq!(run("sweep", &axis, &out, &[]).status.code(), Some(2));
    let o = bin()
        .arg("coupler")
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    // A grid far narrower than the wells pushes the states onto its edge.
    let p = write(
        tmp.path(),
        "narrow.json",
        r#"{"jpm": {"critical_current": 2.5e-6, "loop_inductance": 3e-10, "capacitance": 4.05e-13, "bias_flux": 0.6316},
            "grid": {"points": 2001, "half_width": 0.5}}"#,
    );
    let o = run("jpm", &p, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn tolerance_flags_reach_the_integrator() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(
        "simulate",
        &configs().join("simulate.json"),
        tmp.path(),
        &["--tol-rel", "1e-6", "--tol-abs", "1e-9"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let s: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(s["tolerances"]["rel"], 1e-6);
    assert!((s["fidelity"].as_f64().unwrap() - 0.99259).abs() < 1e-4);
}

#[test]
fn documented_examples_match_the_shipped_files() {
    let doc = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src/configuration.md"),
    )
    .unwrap();
    let shipped: Vec<(String, serde_json::Value)> = std::fs::read_dir(configs())
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap().to_str().unwrap().to_string();
            (
                name,
                serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap(),
            )
        })
        .collect();
    let mut found = Vec::new();
    for block in doc.split("<!-- subcommand: ").skip(1) {
        let (sub, rest) = block.split_once(" -->").unwrap();
        let body = rest
            .split("```json")
            .nth(1)
            .unwrap()
            .split("```")
            .next()
            .unwrap();
        let value: serde_json::Value = serde_json::from_str(body).unwrap();
        let hit = shipped
            .iter()
            .find(|(name, v)| subcommand(name) == sub && *v == value);
        assert!(
            hit.is_some(),
            "documented {sub} example has no copy in configs/"
        );
        found.push(sub.to_string());
    }
    for sub in ["coupler", "jpm", "simulate", "sweep", "tables"] {
        assert!(
            found.iter().any(|s| s == sub),
            "no documented example for {sub}"
        );
    }
}
