use std::path::Path;
use std::process::{Command, Output};

fn randturn(args: &[&str], out_dir: &Path) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_randturn"))
        .args(args)
        .env("RANDTURN_OUT_DIR", out_dir)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn box_writes_one_csv_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("box.csv");
    let args = ["box", "--n", "100", "--uniform-size", "5", "--p", "0.2", "--trials", "20", "--seed", "1"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    randturn(&with_out, dir.path());
    let csv = std::fs::read_to_string(&path).unwrap();
    let rows = randturn::harness::parse_csv(&csv).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].game.as_str(), rows[0].n, rows[0].trials), ("box", 100, 20));
    assert_eq!(stdout(&randturn(&args, dir.path())), csv);
}

#[test]
fn box_accepts_mixed_sizes() {
    let dir = tempfile::tempdir().unwrap();
    for side in ["boxmaker", "boxbreaker", "both"] {
        let out = randturn(&["box", "--sizes", "3,4,6,8", "--p", "0.5", "--side", side, "--trials", "10"], dir.path());
        let rows = randturn::harness::parse_csv(&stdout(&out)).unwrap();
        assert_eq!((rows[0].n, rows[0].trials), (4, 10));
    }
}

#[test]
fn play_dumps_graphs_that_check_reads() {
    let dir = tempfile::tempdir().unwrap();
    let maker = dir.path().join("maker.txt");
    let breaker = dir.path().join("breaker.txt");
    let out = randturn(
        &[
            "play", "--game", "ham", "--n", "20", "--p", "1", "--d", "2", "--beta", "0.2", "--trials", "2",
            "--dump-maker", maker.to_str().unwrap(), "--dump-breaker", breaker.to_str().unwrap(),
        ],
        dir.path(),
    );
    let rows = randturn::harness::parse_csv(&stdout(&out)).unwrap();
    assert_eq!(rows[0].wins, 2);
    assert_eq!(std::fs::read_to_string(&breaker).unwrap(), "");
    let report = stdout(&randturn(&["check", maker.to_str().unwrap(), "--property", "ham"], dir.path()));
    let v: serde_json::Value = serde_json::from_str(report.trim()).unwrap();
    assert_eq!(v["hamiltonian"], true);
    assert_eq!(v["cycle"].as_array().unwrap().len(), 20);
}

#[test]
fn check_reports_every_property() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.txt");
    std::fs::write(&path, "0 1\n1 2\n2 3\n").unwrap();
    let file = path.to_str().unwrap();
    let run = |extra: &[&str]| -> serde_json::Value {
        let mut args = vec!["check", file];
        args.extend(extra);
        serde_json::from_str(stdout(&randturn(&args, dir.path())).trim()).unwrap()
    };
    assert_eq!(run(&["--property", "ham"])["hamiltonian"], false);
    let kconn = run(&["--property", "kconn", "--k", "2"]);
    assert_eq!(kconn["k_connected"], false);
    assert_eq!(kconn["separator"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["--property", "expander", "--R", "1", "--c", "2"])["passes"], false);
    assert_eq!(run(&["--property", "expander", "--mode", "sampled", "--samples", "50"])["passes"], false);
    assert!(run(&["--property", "boosters"])["boosters"].as_u64().unwrap() >= 1);
    assert_eq!(run(&["--property", "components", "--vertices", "6"])["count"], 3);
}

#[test]
fn oracle_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let family = dir.path().join("family.txt");
    std::fs::write(&family, "0 1\n2 3\n").unwrap();
    let out = dir.path().join("oracle.json");
    randturn(
        &["oracle", "--board-size", "4", "--family", family.to_str().unwrap(), "--p", "1/3,1/2", "--out", out.to_str().unwrap()],
        dir.path(),
    );
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let values = doc["families"][0]["values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    // 1 - (1 - 1/9)^2
    assert_eq!(values[0]["expectimax"], "17/81");
    assert!(values.iter().all(|v| v["agree"] == true && v["expectimax"] == v["random_subset"]));

    let random = stdout(&randturn(
        &["oracle", "--board-size", "6", "--family", "random-monotone", "--count", "4", "--p", "0.3", "--arithmetic", "float"],
        dir.path(),
    ));
    let doc: serde_json::Value = serde_json::from_str(&random).unwrap();
    let families = doc["families"].as_array().unwrap();
    assert_eq!(families.len(), 4);
    assert!(families.iter().all(|f| f["values"][0]["agree"] == true));
}

#[test]
fn experiment_defaults_to_the_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"game": "isolate", "n_values": [10, 14], "p_values": [0.5], "trials": 6, "base_seed": 9}"#)
        .unwrap();
    let printed = stdout(&randturn(&["experiment", "--config", config.to_str().unwrap(), "--workers", "2"], dir.path()));
    let paths: Vec<&str> = printed.lines().collect();
    assert_eq!(paths.len(), 2);
    assert!(paths.iter().all(|p| Path::new(p).starts_with(dir.path())));
    let rows = randturn::harness::parse_csv(&std::fs::read_to_string(paths[0]).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
}
