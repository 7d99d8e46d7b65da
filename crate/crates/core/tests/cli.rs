use std::fs;
use std::process::{Command, Output};

use shapeinv::cli::{self, RunConfig, Sampler};
use shapeinv::superpotential::ClassicalFamily;
use shapeinv::{FamilyTag, GridSpec};

fn shapeinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapeinv")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn all_families_verify_with_sampled_params() {
    for tag in FamilyTag::ALL {
        let o = shapeinv(&["verify", "--family", tag.as_str(), "--sample", "3", "--seed", "5", "--no-timestamp"]);
        assert_eq!(code(&o), 0, "{tag}: {}", stderr(&o));
        let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(report["pass"], true);
        assert_eq!(report["points"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn singular_parameters_exit_two_naming_the_inequality() {
    let o = shapeinv(&["verify", "--family", "X1-radial-oscillator", "--params", "omega=1,d=1,m=-1"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("m < -(1 + 2d)/2"), "{err}");
}

#[test]
fn injected_perturbation_exits_one() {
    let o = shapeinv(&[
        "verify", "--family", "Xl-Poschl-Teller", "--sample", "2", "--no-timestamp", "--perturb", "1e-2",
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["points"][0]["checks"]["translation"]["pass"], false);
    for kind in ["compatibility", "translation-only", "infeld-hull"] {
        let o = shapeinv(&[
            "verify", "--family", "X1-hyperbolic", "--sample", "1", "--perturb", "0.01", "--perturb-kind", kind,
        ]);
        assert_eq!(code(&o), 1, "{kind}: {}", stderr(&o));
    }
}

#[test]
fn perturb_flag_is_hidden() {
    let o = shapeinv(&["verify", "--help"]);
    assert_eq!(code(&o), 0);
    let help = String::from_utf8_lossy(&o.stdout);
    assert!(help.contains("--family") && !help.contains("perturb"), "{help}");
}

#[test]
fn input_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["verify", "--family", "X7-nothing", "--sample", "1"],
        &["verify", "--family", "X1-hyperbolic", "--params", "c=1,beta=0.5,m=-3"],
        &["verify", "--family", "X1-hyperbolic", "--sample", "1", "--tol", "-1"],
        &["verify", "--family", "X1-hyperbolic", "--sample", "1", "--checks", "bogus"],
        &["verify", "--family", "X1-hyperbolic"],
        &["verify", "--family", "X1-hyperbolic", "--sample", "1", "--out", "/nonexistent-dir/x/report.json"],
        &["verify", "--family", "X1-hyperbolic", "--sample", "1", "--m-list", "-3,-4"],
        &["verify", "--family", "Xl-PT-Scarf", "--sample", "1", "--checks", "remainder"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = shapeinv(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn complex_family_skips_default_remainder() {
    let o = shapeinv(&["verify", "--family", "Xl-PT-Scarf", "--sample", "2", "--no-timestamp"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let note = report["points"][0]["checks"]["remainder"]["note"].as_str().unwrap();
    assert!(note.starts_with("skipped"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let base = ["verify", "--family", "Xl-radial-oscillator", "--sample", "6", "--seed", "3", "--no-timestamp"];
    let run = |path: &std::path::Path, jobs: &str| {
        let mut args = base.to_vec();
        args.extend(["--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&shapeinv(&args)), 0);
    };
    run(&a, "1");
    run(&b, "4");
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert!(!text.contains("generated_unix"));
    let with_time = shapeinv(&["verify", "--family", "Xl-radial-oscillator", "--sample", "1"]);
    assert!(String::from_utf8_lossy(&with_time.stdout).contains("generated_unix"));
}

#[test]
fn points_keep_input_order() {
    let mut config = RunConfig::new(FamilyTag::X1Trigonometric);
    config.sample = Some(Sampler { count: 8, seed: 2 });
    config.timestamp = false;
    config.jobs = Some(3);
    let report = cli::verify(&config).unwrap();
    let indices: Vec<usize> = report.points.iter().map(|p| p.index).collect();
    assert_eq!(indices, (0..8).collect::<Vec<_>>());
    let sampled = shapeinv::sample_valid_params(FamilyTag::X1Trigonometric, 8, 2).unwrap();
    for (p, s) in report.points.iter().zip(&sampled) {
        assert_eq!(&p.residuals.params, s);
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"family": "X1-radial-oscillator", "params": {"omega": 2.0, "d": 1.0, "m": -3.0},
            "checks": ["translation", "algebra"], "grid": {"n_points": 128}, "timestamp": false}"#,
    )
    .unwrap();
    let o = shapeinv(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = report["points"][0]["checks"].as_object().unwrap();
    assert_eq!(checks.keys().collect::<Vec<_>>(), ["algebra", "translation"]);
    assert_eq!(report["points"][0]["grid"]["n_points"], 128);

    let o = shapeinv(&["verify", "--config", cfg.to_str().unwrap(), "--params", "omega=2,d=1,m=-1"]);
    assert_eq!(code(&o), 2);
    fs::write(&cfg, r#"{"family": "X1-radial-oscillator", "surprise": 1}"#).unwrap();
    assert_eq!(code(&shapeinv(&["verify", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn explicit_m_list_and_spectrum_check() {
    let o = shapeinv(&[
        "verify", "--family", "X1-radial-oscillator", "--params", "omega=1,d=0.5,m=-2.5",
        "--m-list=-2.5,-3.5,-4.5,-5", "--checks", "compatibility,spectrum", "-k", "3", "--no-timestamp",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let p = &report["points"][0];
    assert_eq!(p["m_list"].as_array().unwrap().len(), 4);
    assert!(p["checks"]["spectrum"]["residual"].as_f64().unwrap() < 1e-4);
    assert_eq!(p["spectrum"]["plus"]["eigenvalues"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_csv_has_one_row_per_check() {
    let o = shapeinv(&["verify", "--family", "X1-hyperbolic", "--sample", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["point", "check", "residual", "tolerance", "pass", "note"]);
    assert_eq!(rdr.records().count(), 12);
}

#[test]
fn scan_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = shapeinv(&[
        "scan", "--family", "X1-hyperbolic", "--sample", "1", "--seed", "4", "--grid-points", "64",
        "--format", "csv", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let mut config = RunConfig::new(FamilyTag::X1Hyperbolic);
    config.sample = Some(Sampler { count: 1, seed: 4 });
    config.grid = GridSpec::with_points(64);
    let table = cli::scan(&config).unwrap();

    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, table.columns);
    assert_eq!(header[0], "x");
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows, table.rows);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));

    // epsilon side by side at m, m-1, m-2
    let re: Vec<_> = header.iter().filter(|h| h.starts_with("eps_re")).collect();
    assert_eq!(re.len(), 3);
    let a = table.column(re[0]).unwrap();
    let b = table.column(re[1]).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));
    assert!(header.iter().any(|h| h.starts_with("v_minus")));
}

#[test]
fn scan_of_unextended_family_is_zero() {
    let f = ClassicalFamily::radial_oscillator(1.0);
    let table = cli::scan_table(&f, &[-2.0, -3.0], &GridSpec::with_points(32)).unwrap();
    for col in ["eps_re[m=-2]", "eps_im[m=-2]", "eps_re[m=-3]"] {
        assert!(table.column(col).unwrap().iter().all(|v| *v == 0.0), "{col}");
    }
}

#[test]
fn spectrum_command() {
    let o = shapeinv(&["spectrum", "--family", "X1-radial-oscillator", "--sample", "1", "-k", "5", "--no-timestamp"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let p = &report["points"][0];
    assert!(p["mismatch"].as_f64().unwrap() < 1e-4);
    assert_eq!(p["plus"]["eigenvalues"].as_array().unwrap().len(), 5);
    assert!(p["remainder"]["r"].is_number());

    let o = shapeinv(&["spectrum", "--family", "Xl-PT-Scarf", "--sample", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("complex family unsupported for spectra"));

    let o = shapeinv(&["spectrum", "--family", "X1-radial-oscillator", "--sample", "1", "-k", "0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("usage"));

    let o = shapeinv(&["spectrum", "--family", "X1-radial-oscillator", "--sample", "1", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 6);
}
