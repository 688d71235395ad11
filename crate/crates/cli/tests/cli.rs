use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;
use proptest::prelude::*;
use willmore_cli::config::{Cli, GridSpec, MeshSurface, RunConfig, Suite};
use willmore_cli::verify::{Check, Comparison, Report};
use willmore_cli::CliError;

fn resolve(args: &[&str]) -> Result<RunConfig, CliError> {
    let mut argv = vec!["willmore"];
    argv.extend_from_slice(args);
    RunConfig::resolve(Cli::try_parse_from(argv).map_err(|e| CliError::invalid(e.to_string()))?)
}

fn willmore(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_willmore")).args(args).current_dir(dir).output().unwrap()
}

fn assert_error_record(out: &Output, code: i32, kind: &str) {
    assert_eq!(out.status.code(), Some(code));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    let v: serde_json::Value = serde_json::from_str(err.trim_end()).unwrap();
    assert_eq!(v["error"]["kind"], kind);
    assert!(v["error"]["message"].is_string());
}

#[test]
fn defaults() {
    let RunConfig::Profile(p) = resolve(&["profile"]).unwrap() else { panic!() };
    assert_eq!((p.c, p.periods, p.samples, p.rtol), (1.0, 1, 512, 1e-12));
    let RunConfig::Sweep(s) = resolve(&["sweep"]).unwrap() else { panic!() };
    assert_eq!(s.grid, GridSpec { lo: 1e-3, hi: 1e2, n: 400 });
    assert_eq!(s.m, vec![2, 3, 4]);
    let RunConfig::Verify(v) = resolve(&["verify"]).unwrap() else { panic!() };
    assert_eq!((v.suite, v.tol), (Suite::All, 1e-6));
    let RunConfig::Mesh(m) = resolve(&["mesh", "--family", "cone"]).unwrap() else { panic!() };
    assert_eq!(m.surface, MeshSurface::Cone { a: 1.0, r0: 0.5, r1: 2.0, nr: 16, ns: 200 });
}

#[test]
fn flags_override_file_override_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"command": "profile", "c": 4, "periods": 3, "branch-out": "b.csv"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let RunConfig::Profile(p) = resolve(&["--config", cfg, "profile", "--c", "0.25"]).unwrap() else { panic!() };
    assert_eq!(p.c, 0.25);
    assert_eq!(p.periods, 3);
    assert_eq!(p.samples, 512);
    assert_eq!(p.branch_out.as_deref(), Some(Path::new("b.csv")));
    // the global flag may also follow the subcommand
    let RunConfig::Profile(q) = resolve(&["profile", "--config", cfg]).unwrap() else { panic!() };
    assert_eq!(q.c, 4.0);
}

#[test]
fn config_file_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"c": 1, "colour": "red"}"#, "unknown field"),
        (r#"{"command": "cone", "a": 1}"#, "does not match"),
        (r#"[1, 2]"#, "expected a JSON object"),
        (r#"{"c": "one"}"#, "invalid type"),
        (r#"{"c": 1"#, "config"),
    ];
    for (text, msg) in cases {
        let cfg = dir.path().join("c.json");
        std::fs::write(&cfg, text).unwrap();
        let e = resolve(&["--config", cfg.to_str().unwrap(), "profile"]).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{text}");
        assert!(e.to_string().contains(msg), "{text}: {e}");
    }
    let e = resolve(&["--config", "/definitely/missing.json", "profile"]).unwrap_err();
    assert_eq!(e.exit_code(), 4);
}

#[test]
fn parameter_validation() {
    for args in [
        &["profile", "--c", "0"][..],
        &["profile", "--c", "nan"],
        &["profile", "--periods", "0"],
        &["profile", "--rtol", "0.5"],
        &["cone", "--a", "-2"],
        &["cone", "--samples", "1"],
        &["sweep", "--grid", "1:1:10"],
        &["sweep", "--grid", "0:1:10"],
        &["sweep", "--grid", "1e-3:1:1"],
        &["sweep", "--m", "0"],
        &["closed-cones", "--m", "1"],
        &["verify", "--tol", "0"],
        &["mesh", "--family", "cone", "--r0", "2", "--r1", "1"],
        &["mesh", "--family", "cone", "--ny", "3"],
        &["mesh", "--a", "2"],
        &["mesh", "--step", "-0.1"],
    ] {
        let e = resolve(args).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{args:?}: {e}");
    }
}

#[test]
fn invalid_input_gives_one_line_json_error() {
    let dir = tempfile::tempdir().unwrap();
    for args in
        [&["profile", "--c", "-1"][..], &["profile", "--nope"], &["frobnicate"], &["closed-cones", "--m", "1"], &[]]
    {
        let out = willmore(args, dir.path());
        assert_error_record(&out, 2, "invalid_input");
        assert!(out.stdout.is_empty());
    }
    let out = willmore(&["sweep", "--grid", "1:2:3", "--out", "no/such/dir/x.csv"], dir.path());
    assert_error_record(&out, 4, "io");
    let out = willmore(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn profile_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = willmore(
        &["profile", "--c", "1.0", "--periods", "2", "--samples", "512", "--out", "p.csv", "--branch-out", "b.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,z,H,gradH2");
    assert_eq!(lines.len(), 1 + 2 * 512 + 1);
    let rows: Vec<Vec<f64>> = lines[1..].iter().map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 4));
    // H stays within [−√2, √2], and |∇H|² = C² − H⁴/4 along the profile
    for r in &rows {
        assert!(r[2].abs() <= 2f64.sqrt() + 1e-9);
        assert!((r[3] - (1.0 - r[2].powi(4) / 4.0)).abs() < 1e-6, "{r:?}");
    }
    // two periods: the middle and last rows are the first translated by the same vector
    let (a, m, b) = (&rows[0], &rows[512], &rows[1024]);
    assert!(((m[0] - a[0]) - (b[0] - m[0])).abs() < 1e-9);
    assert!(((m[1] - a[1]) - (b[1] - m[1])).abs() < 1e-9);
    let branch = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(branch.starts_with("x,u,w,dw,H,gradH2\n"));
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn cone_and_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = willmore(&["cone", "--a", "1", "--samples", "40", "--periods", "2", "--sphere-out", "g.csv"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(text.lines().next(), Some("s,H,dH"));
    assert_eq!(rows.len(), 81);
    assert_eq!(rows[0], vec![0.0, 1.0, 0.0]);
    assert!((rows[40][1] - 1.0).abs() < 1e-9 && (rows[80][1] - 1.0).abs() < 1e-9);
    let sphere = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert!(sphere.starts_with("s,x,y,z,tx,ty,tz,H\n"));
    for l in sphere.lines().skip(1) {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] * v[1] + v[2] * v[2] + v[3] * v[3] - 1.0).abs() < 1e-9);
    }

    let out = willmore(&["sweep", "--grid", "0.01:50:37", "--m", "2,5"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("a,c_a,energy,T_a,length_m2,length_m5"));
    let a: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(a.len(), 37);
    assert!(a.windows(2).all(|w| w[1] > w[0]), "rows follow the grid order");
}

#[test]
fn closed_cones_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = willmore(&["closed-cones", "--m", "2", "--grid", "1e-3:1e2:400"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let list = v.as_array().unwrap();
    assert!(!list.is_empty());
    for c in list {
        let length = c["length"].as_f64().unwrap();
        assert!(length > 2.0 * std::f64::consts::PI);
        assert!(c["margin_over_2pi"].as_f64().unwrap() > 0.0);
        assert!((c["arc_length_oracle"].as_f64().unwrap() - length).abs() < 1e-4);
        assert_eq!(c["m"], 2);
    }
}

#[test]
fn mesh_obj_and_scalars() {
    let dir = tempfile::tempdir().unwrap();
    for (args, n_vertices) in [
        (&["mesh", "--family", "cone", "--nr", "4", "--ns", "30", "--out", "m.obj", "--scalars", "m.csv"][..], 120),
        (&["mesh", "--periods", "1", "--step", "0.05", "--ny", "5", "--out", "m.obj", "--scalars", "m.csv"], 0),
    ] {
        let out = willmore(args, dir.path());
        assert!(out.status.success(), "{:?}", out);
        let obj = std::fs::read_to_string(dir.path().join("m.obj")).unwrap();
        let v = obj.lines().filter(|l| l.starts_with("v ")).count();
        if n_vertices > 0 {
            assert_eq!(v, n_vertices);
        }
        for l in obj.lines().filter(|l| l.starts_with("f ")) {
            let idx: Vec<usize> = l[2..].split(' ').map(|x| x.parse().unwrap()).collect();
            assert!(idx.iter().all(|&i| (1..=v).contains(&i)));
        }
        let csv = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
        assert_eq!(csv.lines().next(), Some("index,H,K"));
        assert_eq!(csv.lines().count(), v + 1);
    }
}

#[test]
fn artifacts_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["profile", "--c", "2", "--periods", "2"][..],
        &["sweep", "--grid", "0.01:10:64"],
        &["closed-cones", "--m", "3"],
        &["mesh", "--family", "cone", "--ns", "50"],
        &["verify", "--suite", "cone"],
    ] {
        let a = willmore(args, dir.path());
        let b = willmore(args, dir.path());
        assert!(a.status.success(), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_report_layout_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = willmore(&["verify", "--suite", "profile"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "willmore-verify/1");
    assert_eq!(v["suite"], "profile");
    assert_eq!(v["status"], "pass");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| (1..=5).contains(&c["criterion"].as_u64().unwrap())));
    for key in ["name", "anchor", "measured", "tolerance", "comparison", "pass"] {
        assert!(checks.iter().all(|c| !c[key].is_null()), "{key}");
    }

    // an impossible tolerance fails some checks: report still written, exit 1
    let out = willmore(&["verify", "--suite", "cone", "--tol", "1e-30", "--out", "r.json"], dir.path());
    assert_error_record(&out, 1, "verification_failed");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["status"], "fail");
}

fn comparison() -> impl Strategy<Value = Comparison> {
    prop_oneof![Just(Comparison::AtMost), Just(Comparison::Below), Just(Comparison::Above), Just(Comparison::AtLeast)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn report_passes_iff_every_check_passes(
        entries in prop::collection::vec((1u32..12, -1.0f64..1.0, -1.0f64..1.0, comparison()), 0..20)
    ) {
        let checks: Vec<Check> =
            entries.iter().map(|&(n, m, t, c)| Check::new(n, "c", "a", m, c, t)).collect();
        let all = checks.iter().all(|c| c.pass);
        let r = Report { suite: Suite::All, tolerance: 1e-6, checks };
        prop_assert_eq!(r.passed(), all);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(v["status"].as_str().unwrap(), if all { "pass" } else { "fail" });
        prop_assert_eq!(v["failed"].as_u64().unwrap() == 0, all);
    }

    #[test]
    fn unknown_config_keys_are_rejected(key in "[a-z][a-z-]{0,12}") {
        let known = ["c", "periods", "samples", "rtol", "out", "branch-out", "command"];
        prop_assume!(!known.contains(&key.as_str()));
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        std::fs::write(&cfg, format!("{{\"{key}\": 1}}")).unwrap();
        let e = resolve(&["--config", cfg.to_str().unwrap(), "profile"]).unwrap_err();
        prop_assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn nonpositive_parameters_are_rejected(x in -1e6f64..=0.0) {
        let s = x.to_string();
        for args in [["profile", "--c", &s], ["cone", "--a", &s], ["verify", "--tol", &s], ["mesh", "--step", &s]] {
            let e = resolve(&args).unwrap_err();
            prop_assert_eq!(e.exit_code(), 2);
        }
    }

    #[test]
    fn valid_parameters_resolve_to_themselves(c in 1e-3f64..1e3, periods in 1usize..10, samples in 4usize..5000) {
        let (cs, ps, ss) = (c.to_string(), periods.to_string(), samples.to_string());
        let RunConfig::Profile(p) =
            resolve(&["profile", "--c", &cs, "--periods", &ps, "--samples", &ss]).unwrap() else { panic!() };
        prop_assert_eq!((p.c, p.periods, p.samples), (c, periods, samples));
    }
}
