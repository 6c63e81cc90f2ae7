use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fiberdyn::cli::{EXIT_CONFIG, EXIT_HALT, EXIT_OK, EXIT_VIOLATION};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fiberdyn"));
    c.env_remove("FIBERDYN_THREADS");
    c
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/scenarios")
        .join(name)
}

fn write_cfg(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn simulate(configs: &[&Path], out: &Path) -> Output {
    let mut c = bin();
    c.arg("simulate");
    for p in configs {
        c.arg("--config").arg(p);
    }
    c.arg("--out").arg(out).output().unwrap()
}

const MONOPOLE: &str = "system.id = monopole\nsystem.params.n = 1\ninitial.x = 1, 0, 0\ninitial.v = 0, 1, 0.3\nstepper.dt = 1e-3\nstepper.t_end = 1\n";

#[test]
fn monopole_scenario_writes_csv_and_report() {
    let out = TempDir::new().unwrap();
    let o = simulate(&[&scenario_path("monopole.cfg")], out.path());
    assert_eq!(code(&o), EXIT_OK, "{}", stderr(&o));
    let csv = fs::read_to_string(out.path().join("monopole.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        header,
        [
            "t", "x1", "x2", "x3", "v1", "v2", "v3", "J", "helicity", "speed"
        ]
    );
    let row: Vec<&str> = lines.nth(3).unwrap().split(',').collect();
    assert_eq!(row.len(), header.len());
    // full precision: a non-trivial value carries 17 significant digits
    let x2 = row[header.iter().position(|h| *h == "x2").unwrap()];
    let digits = x2
        .trim_start_matches('-')
        .replace('.', "")
        .split(['e', 'E'])
        .next()
        .unwrap()
        .trim_start_matches('0')
        .len();
    assert_eq!(digits, 17, "{x2}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("monopole.report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["exit_code"], 0);
}

#[test]
fn free_particle_moves_in_a_straight_line() {
    let out = TempDir::new().unwrap();
    let o = simulate(&[&scenario_path("free.cfg")], out.path());
    assert_eq!(code(&o), EXIT_OK, "{}", stderr(&o));
    let csv = fs::read_to_string(out.path().join("free.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |n: &str| header.iter().position(|h| *h == n).unwrap();
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let t = v[col("t")];
        assert!((v[col("x1")] - t).abs() < 1e-12);
        assert!((v[col("x2")] + 0.5 * t).abs() < 1e-12);
        assert!((v[col("x3")] - 0.25 * t).abs() < 1e-12);
    }
}

#[test]
fn malformed_config_is_line_anchored() {
    let dir = TempDir::new().unwrap();
    let bad = write_cfg(
        &dir,
        "bad.cfg",
        "system.id = monopole\nsystem.params.n = 1\nthis line has no equals\n",
    );
    let o = simulate(&[&bad], dir.path());
    assert_eq!(code(&o), EXIT_CONFIG);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let unknown = write_cfg(
        &dir,
        "unknown.cfg",
        &format!("{MONOPOLE}stepper.tolerance = 3\n"),
    );
    let o = simulate(&[&unknown], dir.path());
    assert_eq!(code(&o), EXIT_CONFIG);
    assert!(
        stderr(&o).contains("line 7") && stderr(&o).contains("stepper.tolerance"),
        "{}",
        stderr(&o)
    );

    let number = write_cfg(
        &dir,
        "number.cfg",
        &MONOPOLE.replace("initial.v = 0, 1, 0.3", "initial.v = 0, one, 0.3"),
    );
    let o = simulate(&[&number], dir.path());
    assert_eq!(code(&o), EXIT_CONFIG);
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn violation_and_halt_codes() {
    let dir = TempDir::new().unwrap();
    let strict = write_cfg(
        &dir,
        "strict.cfg",
        &format!("{MONOPOLE}monitor.J = 1e-300\n"),
    );
    let o = simulate(&[&strict], dir.path());
    assert_eq!(code(&o), EXIT_VIOLATION, "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("strict.report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], false);

    let infall = write_cfg(
        &dir,
        "infall.cfg",
        "system.id = monopole\nsystem.params.n = 1\ninitial.x = 1, 0, 0\ninitial.v = -1, 0, 0\nstepper.dt = 1e-3\nstepper.t_end = 2\n",
    );
    let o = simulate(&[&infall], dir.path());
    assert_eq!(code(&o), EXIT_HALT, "{}", stderr(&o));
    assert!(dir.path().join("infall.csv").exists());

    // batch: config error outranks halt and violation
    let bad = write_cfg(&dir, "bad.cfg", "nonsense\n");
    assert_eq!(
        code(&simulate(&[&strict, &infall, &bad], dir.path())),
        EXIT_CONFIG
    );
    assert_eq!(code(&simulate(&[&strict, &infall], dir.path())), EXIT_HALT);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let cfgs = [
        scenario_path("monopole.cfg"),
        scenario_path("spin_monopole.cfg"),
        scenario_path("bmt.cfg"),
    ];
    let refs: Vec<&Path> = cfgs.iter().map(PathBuf::as_path).collect();
    assert_eq!(code(&simulate(&refs, a.path())), EXIT_OK);
    let mut c = bin();
    c.env("FIBERDYN_THREADS", "3").arg("simulate");
    for p in &refs {
        c.arg("--config").arg(p);
    }
    assert_eq!(
        code(&c.arg("--out").arg(b.path()).output().unwrap()),
        EXIT_OK
    );
    for name in [
        "monopole.csv",
        "monopole.report.json",
        "spin_monopole.csv",
        "bmt.csv",
        "bmt.report.json",
    ] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn thread_variable_is_validated() {
    let dir = TempDir::new().unwrap();
    let o = bin()
        .env("FIBERDYN_THREADS", "many")
        .args(["simulate", "--config"])
        .arg(scenario_path("free.cfg"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), EXIT_CONFIG);
    assert!(stderr(&o).contains("FIBERDYN_THREADS"));
}

#[test]
fn reduce_reports_every_sample() {
    let dir = TempDir::new().unwrap();
    let o = bin()
        .arg("reduce")
        .arg("--config")
        .arg(scenario_path("hedgehog.cfg"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), EXIT_OK, "{}", stderr(&o));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hedgehog.reduce.json")).unwrap())
            .unwrap();
    let samples = r["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 501);
    assert!(
        samples
            .iter()
            .all(|s| s["bound_margin"].as_f64().unwrap() >= 0.0)
    );
}

#[test]
fn zero_isospin_reduces_to_free_motion() {
    let dir = TempDir::new().unwrap();
    let text = fs::read_to_string(scenario_path("hedgehog.cfg"))
        .unwrap()
        .replace("system.params.k = 0, 0, 1", "system.params.k = 0, 0, 0");
    let cfg = write_cfg(
        &dir,
        "still.cfg",
        &text.replace("stepper.t_end = 5", "stepper.t_end = 1"),
    );
    let o = bin()
        .arg("reduce")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), EXIT_OK, "{}", stderr(&o));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("still.reduce.json")).unwrap())
            .unwrap();
    assert_eq!(r["n0"].as_f64().unwrap(), 0.0);
    for s in r["samples"].as_array().unwrap() {
        assert_eq!(s["divergence"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn reduce_rejects_non_hedgehog_scenarios() {
    let dir = TempDir::new().unwrap();
    let o = bin()
        .arg("reduce")
        .arg("--config")
        .arg(scenario_path("monopole.cfg"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), EXIT_CONFIG);
}

#[test]
fn check_suites_pass_and_unknown_suite_fails() {
    let dir = TempDir::new().unwrap();
    for suite in ["identities", "grassmann", "cocycle", "flux"] {
        let o = bin()
            .args(["check", "--suite", suite, "--seed", "3", "--out"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(code(&o), EXIT_OK, "{suite}: {}", stderr(&o));
        let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(r["passed"], true);
        for item in r["items"].as_array().unwrap() {
            assert!(
                item.get("residual").is_some()
                    && item.get("tolerance").is_some()
                    && item.get("passed").is_some()
            );
        }
        assert!(dir.path().join(format!("check-{suite}.json")).exists());
    }
    assert_eq!(
        code(
            &bin()
                .args(["check", "--suite", "everything"])
                .output()
                .unwrap()
        ),
        EXIT_CONFIG
    );
    assert_eq!(code(&bin().arg("simulate").output().unwrap()), EXIT_CONFIG);
}

#[test]
fn flux_and_cocycle_commands() {
    let dir = TempDir::new().unwrap();
    let o = bin()
        .arg("flux")
        .arg("--config")
        .arg(scenario_path("flux.cfg"))
        .output()
        .unwrap();
    assert_eq!(code(&o), EXIT_OK, "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["flux"]["triangles"], 20480);
    assert_eq!(r["quantization"]["commensurable"], true);

    let off = fiberdyn::fluxaction::icosphere(3, fiberdyn::Vec3::new(0.1, 0.0, 0.0), 1.5).to_off();
    fs::write(dir.path().join("sphere.off"), off).unwrap();
    let cfg = write_cfg(
        &dir,
        "off.cfg",
        "mesh.kind = off\nmesh.path = sphere.off\nform = magnetic\nexpected = -12.566370614359172\ntolerance = 1e-2\n",
    );
    let o = bin()
        .arg("flux")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), EXIT_OK, "{}", stderr(&o));
    assert!(dir.path().join("flux.json").exists());

    let o = bin()
        .arg("cocycle")
        .arg("--config")
        .arg(scenario_path("cocycle.cfg"))
        .output()
        .unwrap();
    assert_eq!(code(&o), EXIT_OK, "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["seed"], 7);

    // a non-integral λ_w breaks the cocycle condition
    let cfg = write_cfg(&dir, "bad_cocycle.cfg", "n = 1\nlambda_w = 0.7\n");
    assert_eq!(
        code(
            &bin()
                .arg("cocycle")
                .arg("--config")
                .arg(&cfg)
                .output()
                .unwrap()
        ),
        EXIT_VIOLATION
    );
}
