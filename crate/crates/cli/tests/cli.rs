//! End-to-end tests of the binary: exit codes, output determinism, and the
//! representation-file front end.

use quivex::couples::{moore_couple, sphere_couple};
use quivex::linalg::graded::Window;
use quivex::linalg::scalar::Prime;
use quivex::quiver::ext::ext;
use quivex::quiver::preset::integral_preset;
use quivex::quiver::serial::{chart_from_json, chart_to_json, preset_to_json, rep_to_json};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quivex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("quivex-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file written");
    path
}

#[test]
fn bp_modes_agree_byte_for_byte_and_runs_are_deterministic() {
    let mv = run(&["chart", "bp", "--prime", "2", "--max-t", "8", "--mode", "mv"]);
    let cf = run(&["chart", "bp", "--prime", "2", "--max-t", "8", "--mode", "closed-form"]);
    let mv2 = run(&["chart", "bp", "--prime", "2", "--max-t", "8", "--mode", "mv"]);
    assert!(mv.status.success() && cf.status.success());
    assert_eq!(mv.stdout, cf.stdout);
    assert_eq!(mv.stdout, mv2.stdout);
    // and the JSON round-trips through the reader
    let chart = chart_from_json(&stdout(&mv)).unwrap();
    assert_eq!(chart_to_json(&chart), stdout(&mv));
}

#[test]
fn integral_sphere_ascii_has_z_at_the_origin_and_an_empty_zero_stem_above() {
    let out = run(&[
        "chart",
        "integral-sphere",
        "--prime",
        "2",
        "--max-stem",
        "6",
        "--format",
        "ascii",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    let origin_row = rows
        .iter()
        .find(|r| r.trim_start().starts_with("0 |"))
        .expect("filtration-0 row present");
    assert!(origin_row.contains("| Z"), "Z at the origin: {origin_row}");
    for row in &rows {
        let t = row.trim_start();
        if let Some(rest) = t.strip_prefix(|c: char| c.is_ascii_digit()) {
            if t.starts_with('0') || !rest.starts_with(" |") && !t.contains('|') {
                continue;
            }
            if let Some(cells) = t.split('|').nth(1) {
                // first column is the 0-stem: empty in positive filtration
                assert!(
                    cells.trim_start().starts_with('.') || t.starts_with("0 "),
                    "0-stem must be empty above filtration 0: {row}"
                );
            }
        }
    }
}

#[test]
fn verifiers_succeed_on_good_inputs() {
    for args in [
        vec!["verify", "moore", "--prime", "3", "--k", "2"],
        vec!["verify", "toda", "--prime", "2", "--max-n", "8"],
        vec!["verify", "einfty-bp", "--prime", "2", "--max-t", "6"],
        vec!["verify", "cobar", "--prime", "2", "--max-t", "6"],
    ] {
        let out = run(&args);
        assert!(
            out.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(stdout(&out).starts_with("ok:"), "{args:?} output");
    }
}

#[test]
fn usage_errors_exit_with_code_two() {
    for args in [
        vec!["chart", "bp", "--prime", "2"],                       // missing --mode/--max-t
        vec!["chart", "bp", "--frobnicate"],                       // unknown flag
        vec!["verify", "moore", "--prime", "3"],                   // missing --k
        vec!["chart", "ext-a", "--prime", "3", "--max-t", "5"],    // unsupported prime
        vec!["couples", "ext", "--input", "/no/such/file", "--max-s", "2", "--max-t", "2"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn couples_ext_matches_the_library_computation() {
    let pre = Arc::new(integral_preset(Prime(2)));
    let x = sphere_couple(&pre);
    let y = moore_couple(&pre, 1);
    let doc = format!(
        "{{\n\"preset\": {},\n\"x\": {},\n\"y\": {}\n}}\n",
        preset_to_json(&pre),
        rep_to_json(&x),
        rep_to_json(&y)
    );
    let path = temp_file("couple.json", &doc);
    let out = run(&[
        "couples",
        "ext",
        "--input",
        path.to_str().unwrap(),
        "--max-s",
        "3",
        "--max-t",
        "6",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let expected = ext(&x, &y, 3, 0, 6, Window::new(-8, 8)).unwrap();
    assert_eq!(stdout(&out), chart_to_json(&expected));
    let header = String::from_utf8_lossy(&out.stderr);
    assert!(header.contains("# prime: 2") && header.contains("fnv1a="));
    std::fs::remove_file(path).ok();
}

#[test]
fn config_file_presets_options_and_flags_override() {
    let path = temp_file("config.txt", "prime=3\nk=2\n");
    let out = run(&["verify", "moore", "--config", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("mod 3^2"));
    // explicit flag wins over the config value
    let out = run(&["verify", "moore", "--config", path.to_str().unwrap(), "--k", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mod 3^3"));
    std::fs::remove_file(path).ok();
}

#[test]
fn svg_export_is_a_wellformed_static_document() {
    let out = run(&[
        "chart", "ext-a", "--prime", "2", "--max-t", "6", "--format", "svg",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("<svg "));
    assert!(text.contains("version=\"1.1\""));
    assert!(text.trim_end().ends_with("</svg>"));
    assert!(!text.contains("<script"));
}

#[test]
fn invalid_thread_cap_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_quivex"))
        .args(["verify", "moore", "--prime", "2", "--k", "2"])
        .env("QA_THREADS", "many")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_quivex"))
        .args(["verify", "moore", "--prime", "2", "--k", "2"])
        .env("QA_THREADS", "1")
        .output()
        .expect("binary runs");
    assert!(capped.status.success());
}
