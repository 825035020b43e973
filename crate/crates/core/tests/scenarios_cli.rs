//! The shipped scenario files, checked from disk and through the binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use entwb::harness::parse_scenario;

fn scenario_files() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut files: Vec<PathBuf> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "scn")).collect();
    files.sort();
    files
}

fn entwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entwb")).args(args).output().unwrap()
}

#[test]
fn every_file_is_in_the_embedded_corpus() {
    let embedded: Vec<&str> = entwb::harness::repro::CORPUS.iter().map(|(name, _)| *name).collect();
    for f in scenario_files() {
        let name = f.file_name().unwrap().to_str().unwrap();
        assert!(embedded.iter().any(|e| e.ends_with(name)), "{name} missing from CORPUS");
    }
}

#[test]
fn every_file_parses_round_trips_and_meets_its_expectations() {
    for f in scenario_files() {
        let text = std::fs::read_to_string(&f).unwrap();
        let sc = parse_scenario(&text).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        let again = parse_scenario(&sc.to_string()).unwrap();
        assert_eq!(again, sc, "{}", f.display());
        let checks = sc.check().unwrap();
        assert!(!checks.is_empty(), "{} has no expectations", f.display());
        for c in checks {
            assert!(c.pass, "{}: {} expected {} got {}", f.display(), c.name, c.expected, c.actual);
        }
    }
}

#[test]
fn check_subcommand_reports_gaps_and_expectations() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/bell_pair.scn");
    let out = entwb(&["check", "--scenario", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.contains("gap(P1, P2) = 0.250000"), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("pass ")).count() >= 5, "{text}");
}

#[test]
fn classify_and_qfi_subcommands() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let out = entwb(&["classify", "--scenario", dir.join("bell_pair.scn").to_str().unwrap(), "--definition", "V"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("V: entangled"));

    let out = entwb(&["qfi", "--scenario", dir.join("metrology_fock.scn").to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "4.000000");
}

#[test]
fn bad_input_exits_with_status_2() {
    let dir = std::env::temp_dir().join(format!("entwb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.scn");
    std::fs::write(&bad, "scenario broken\nstatistics = bose\nmodes = a\nstate = adag(b)|vac>\n").unwrap();
    let out = entwb(&["classify", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error"));

    let out = entwb(&["classify", "--scenario", dir.join("missing.scn").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn props_subcommand_passes_and_honours_the_seed() {
    let a = entwb(&["props", "--seed", "11", "--samples", "20", "--format", "csv"]);
    let b = entwb(&["props", "--seed", "11", "--samples", "20", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_csv_lists_every_cell_once() {
    let out = entwb(&["table1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.lines().skip(1).all(|l| !l.ends_with(',')));
}
