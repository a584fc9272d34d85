use std::process::{Command, Output};

fn entnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entnet")).args(args).env_remove("ENTNET_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

fn floats(csv: &str, name: &str) -> Vec<f64> {
    column(csv, name).iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn swap_zz_gives_scp_point_six() {
    let o = entnet(&["swap", "--alpha0", "0.7", "--beta0", "0.7", "--basis", "zz"]);
    assert!(o.status.success());
    assert!((floats(&stdout(&o), "scp")[0] - 0.6).abs() < 1e-15);
}

#[test]
fn swap_singlets_xz_wce_one() {
    let o = entnet(&["swap", "--alpha0", "0.5", "--beta0", "0.5", "--basis", "xz"]);
    assert_eq!(floats(&stdout(&o), "wce")[0], 1.0);
}

#[test]
fn swap_custom_probabilities_round_trip() {
    let o = entnet(&["swap", "--alpha0", "0.7", "--beta0", "0.6", "--probs", "0.245,0.265,0.25,0.24"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    for (col, want) in [("p1", 0.245), ("p2", 0.265), ("p3", 0.25), ("p4", 0.24)] {
        assert!((floats(&s, col)[0] - want).abs() < 1e-8);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(entnet(&["swap", "--alpha0", "1.5", "--beta0", "0.7"]).status.code(), Some(2));
    assert_eq!(entnet(&["swap", "--alpha0", "0.7"]).status.code(), Some(2));
    assert_eq!(entnet(&["swap", "--alpha0", "0.7", "--beta0", "0.7", "--probs", "0.1,0.1,0.4,0.4"]).status.code(), Some(3));
    assert_eq!(entnet(&["recursion", "--kind", "spiral"]).status.code(), Some(2));
    // p_ok = 0.3 is outside the window where the asymmetric mapping helps
    let o = entnet(&["percolate", "--lattice", "asymmetric_triangular", "--transform", "--p", "0.3", "--p-dashed", "0.01", "--L", "16", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}

#[test]
fn recursion_threshold_column() {
    let o = entnet(&["recursion", "--kind", "diamond", "--sweep", "0:1:0.001"]);
    let s = stdout(&o);
    let e = floats(&s, "e");
    let grows = column(&s, "grows");
    assert_eq!(e.len(), 1001);
    let first = grows.iter().position(|g| g == "true" ).unwrap();
    let cross = e[first];
    // 1 is fixed; everything strictly between threshold and 1 grows
    assert!((cross - 0.349).abs() <= 1.5e-3, "{cross}");
    assert!((floats(&s, "threshold")[0] - 0.349).abs() < 1e-3);
}

#[test]
fn chain_zz_matches_closed_form() {
    let o = entnet(&["chain", "--strategy", "zz", "--N", "1..30", "--phi0", "0.7"]);
    let s = stdout(&o);
    let phi = entnet::PureState::new(0.7).unwrap();
    for (n, v) in floats(&s, "n").iter().zip(floats(&s, "scp")) {
        assert_eq!(v, entnet::chain::scp_zz_closed_form(*n as usize, &phi));
    }
}

#[test]
fn percolate_reports_theta_and_error() {
    let o = entnet(&["percolate", "--lattice", "triangular", "--p", "0.36", "--L", "64", "--trials", "300", "--seed", "7"]);
    let s = stdout(&o);
    let theta = floats(&s, "estimate")[0];
    let err = floats(&s, "std_err")[0];
    assert!(theta > 3.0 * err && err > 0.0);
}

#[test]
fn json_mirrors_csv() {
    let args = ["compare", "--mode", "thresholds"];
    let csv = stdout(&entnet(&args));
    let mut with_json = args.to_vec();
    with_json.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&entnet(&with_json))).unwrap();
    let names = column(&csv, "name");
    let values = floats(&csv, "value");
    for (i, row) in json.as_array().unwrap().iter().enumerate() {
        assert_eq!(row["name"], names[i].as_str());
        assert_eq!(row["value"].as_f64().unwrap(), values[i]);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("entnet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("c.toml");
    std::fs::write(&cfg, "phi0 = 0.9\nstrategy = \"cs\"\nN = \"1..2\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&entnet(&["chain", "--config", cfg]));
    assert_eq!(floats(&from_file, "phi0"), vec![0.9, 0.9]);
    let overridden = stdout(&entnet(&["chain", "--config", cfg, "--phi0", "0.6"]));
    assert_eq!(floats(&overridden, "phi0"), vec![0.6, 0.6]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn env_seed_and_output_file() {
    let dir = std::env::temp_dir().join(format!("entnet-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("o.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_entnet"))
        .args(["percolate", "--lattice", "square", "--p", "0.5", "--L", "16", "--trials", "20", "--output"])
        .arg(&path)
        .env("ENTNET_SEED", "99")
        .output()
        .unwrap();
    assert!(o.status.success());
    let s = std::fs::read_to_string(&path).unwrap();
    assert_eq!(column(&s, "seed"), vec!["99"]);
    std::fs::remove_dir_all(&dir).ok();
}
