use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vvlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vvlc")).args(args).output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn snapshot_is_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = vvlc(&["snapshot", "--seed", "7", "--out", dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let names = [
        "taps_p_q.csv",
        "taps_p_qprime.csv",
        "taps_pprime_q.csv",
        "taps_pprime_qprime.csv",
        "stats.json",
        "manifest.json",
    ];
    for name in names {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
    let taps = read(&a, "taps_p_q.csv");
    assert_eq!(taps.lines().next(), Some("delay_s,amplitude,family"));
    assert_eq!(taps.lines().count(), 301);
    let manifest: serde_json::Value = serde_json::from_str(&read(&a, "manifest.json")).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["mode"], "snapshot");
}

#[test]
fn snapshot_taps_round_trip() {
    use vvlc_core::cir::mimo_matrix;
    use vvlc_core::scatter::populate;
    use vvlc_core::scene::{build_scene, ScenarioConfig};

    let tmp = tempfile::tempdir().unwrap();
    let out = vvlc(&["snapshot", "--seed", "3", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let config = ScenarioConfig { seed: 3, ..Default::default() };
    let scene = populate(&build_scene(config).unwrap(), 0).unwrap();
    let matrix = mimo_matrix(&scene).unwrap();
    let cir = matrix.iter().next().unwrap();
    let text = read(tmp.path(), "taps_p_q.csv");
    for (line, tap) in text.lines().skip(1).zip(cir.taps()) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0].parse::<f64>().unwrap(), tap.delay);
        assert_eq!(fields[1].parse::<f64>().unwrap(), tap.amplitude);
        assert_eq!(fields[2], tap.family.label());
    }
}

#[test]
fn monte_carlo_two_realizations() {
    let tmp = tempfile::tempdir().unwrap();
    let out = vvlc(&["monte-carlo", "--realizations", "2", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read(tmp.path(), "realizations.csv");
    assert_eq!(rows.lines().count(), 3);
    assert!(rows.lines().nth(2).unwrap().starts_with("1,"));
    let summary: serde_json::Value = serde_json::from_str(&read(tmp.path(), "summary.json")).unwrap();
    assert_eq!(summary["realizations"], 2);
    assert_eq!(summary["gain_db"]["count"], 2);
}

#[test]
fn timeline_has_41_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let out = vvlc(&["timeline", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let rows = read(tmp.path(), "timeline.csv");
    assert_eq!(rows.lines().next(), Some("t_s,total_power,min_delay_s"));
    assert_eq!(rows.lines().count(), 42);
    assert!(rows.lines().last().unwrap().starts_with("4e0,"));
}

#[test]
fn config_file_and_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("scene.toml");
    fs::write(&cfg, "# wider receiver\nfov_deg = 85\nn3 = 20\n").unwrap();
    let out_dir = tmp.path().join("out");
    let out = vvlc(&[
        "snapshot",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "n1=10",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // n1 + n2 + n3 taps
    assert_eq!(read(&out_dir, "taps_p_q.csv").lines().count(), 1 + 10 + 100 + 20);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();

    let out = vvlc(&["snapshot", "--set", "rho_wall=1.5", "--out", dir]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho_wall"));

    let cfg = tmp.path().join("typo.toml");
    fs::write(&cfg, "alpha = 1\nfovv = 1.0\n").unwrap();
    let out = vvlc(&["snapshot", "--config", cfg.to_str().unwrap(), "--out", dir]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = vvlc(&["monte-carlo", "--realizations", "0", "--out", dir]);
    assert_eq!(out.status.code(), Some(1));

    // Tx drives into W1 before the horizon.
    let out = vvlc(&["timeline", "--set", "h_t1=1", "--out", dir]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("geometry"));

    let missing = tmp.path().join("absent.toml");
    let out = vvlc(&["snapshot", "--config", missing.to_str().unwrap(), "--out", dir]);
    assert_eq!(out.status.code(), Some(3));

    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = vvlc(&["snapshot", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
