//! End-to-end checks of the `permutest` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn permutest(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permutest"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn unknown_preset_exits_one_and_lists_presets() {
    let tmp = tempdir("unknown");
    let out = permutest(&["run", "no-such-preset"], &tmp);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("fig1b"), "{stderr}");
}

#[test]
fn list_presets_names_every_grid() {
    let tmp = tempdir("list");
    let out = permutest(&["list-presets"], &tmp);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    for name in ["fig1a", "fig1b", "fig3", "fig4", "fig9a", "fig10", "fig11", "highdim"] {
        assert!(stdout.contains(name), "missing {name}: {stdout}");
    }
}

#[test]
fn run_and_plot_are_reproducible() {
    let tmp = tempdir("run");
    // A small custom grid keeps this fast while exercising the full path.
    let cfg = r#"
id = "demo"
n = 16
p = 4
replications = 8
permutations = 40
effects = [0.0, 0.5]
statistics = ["goeman", "sd", "lda.CV.1"]
"#;
    fs::write(tmp.join("demo.toml"), cfg).unwrap();

    let first = permutest(
        &["run", "demo.toml", "--seed", "7", "--out", "a", "--threads", "2"],
        &tmp,
    );
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let csv_a = fs::read_to_string(tmp.join("a/power.csv")).unwrap();
    assert!(csv_a.starts_with("scenario,statistic,effect,replications,rejections,power,mc_se,seed\n"));
    assert_eq!(csv_a.lines().count(), 1 + 2 * 3, "one row per (effect, statistic)");

    let second = permutest(
        &["run", "demo.toml", "--seed", "7", "--out", "b", "--threads", "1"],
        &tmp,
    );
    assert!(second.status.success());
    let csv_b = fs::read_to_string(tmp.join("b/power.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "identical seed must give identical bytes");

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 7);
    assert_eq!(manifest["files"][0]["path"], "power.csv");
    let digest = manifest["files"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);

    // Plot: byte-identical across runs.
    let plot_a = permutest(&["plot", "a/power.csv", "--out", "plots1"], &tmp);
    assert!(plot_a.status.success(), "{}", String::from_utf8_lossy(&plot_a.stderr));
    let plot_b = permutest(&["plot", "a/power.csv", "--out", "plots2"], &tmp);
    assert!(plot_b.status.success());
    let svg_a = fs::read(tmp.join("plots1/demo.svg")).unwrap();
    let svg_b = fs::read(tmp.join("plots2/demo.svg")).unwrap();
    assert!(!svg_a.is_empty());
    assert_eq!(svg_a, svg_b);
}

#[test]
fn selftest_passes() {
    let tmp = tempdir("selftest");
    let out = permutest(&["selftest"], &tmp);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("all checks passed"), "{stdout}");
}

#[test]
fn bad_config_field_is_diagnosed() {
    let tmp = tempdir("badcfg");
    fs::write(tmp.join("bad.toml"), "id = \"x\"\nn = 16\np = 4\nbogus = true\n").unwrap();
    let out = permutest(&["run", "bad.toml"], &tmp);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bogus"), "{stderr}");
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("permutest-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}
