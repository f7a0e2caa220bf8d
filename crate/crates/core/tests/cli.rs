use std::process::Command;

use asdim_lab::cli::{run, RunConfig, EXIT_OK, EXIT_SCOPE, EXIT_USAGE};
use clap::Parser;

fn lib_run(args: &[&str]) -> (i32, String) {
    let cfg = RunConfig::try_parse_from(std::iter::once("asdim-lab").chain(args.iter().copied())).unwrap();
    let out = run(&cfg);
    (out.code, out.text)
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no {key} in report"))
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_asdim-lab")).args(args).output().unwrap()
}

#[test]
fn cover_on_broom() {
    let (code, text) = lib_run(&["cover", "--space", "broom:120", "--r", "1", "--ell", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(value(&text, "max_mult").parse::<u32>().unwrap() <= 2);
    assert_eq!(value(&text, "premises"), "verified");
    assert_eq!(value(&text, "asdim_upper"), "1");
}

#[test]
fn asdim_surface() {
    let (code, text) = lib_run(&["asdim", "--surface", "0,6"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("asdim Mod(S_{0,6}) : lower=3 upper=3 exact=y"));
    let (_, text) = lib_run(&["asdim", "--surface", "3,0"]);
    assert!(text.contains("asdim Mod(S_{3,0}) : lower=7 upper=unknown exact=n"));
}

#[test]
fn propb_on_grid_is_a_measurement() {
    let (code, text) = lib_run(&["propb", "--space", "grid:8", "--ell", "0", "--rmax", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(value(&text, "observed_D").parse::<u32>().unwrap() > 1);
    let (code, text) = lib_run(&["propb", "--space", "grid:8", "--ell", "0", "--k", "0", "--rmax", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&text, "observed_D"), "1");
    assert!(value(&text, "violations").parse::<u32>().unwrap() > 0);
}

#[test]
fn a1_scope_and_pass() {
    let (code, text) = lib_run(&["a1", "--space", "broom:40", "--r", "1"]);
    assert_eq!(code, EXIT_SCOPE);
    assert_eq!(value(&text, "status"), "scope-too-small");
    let (code, text) = lib_run(&["a1", "--space", "broom:400", "--r", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(!text.contains("FAIL"));
    assert_eq!(value(&text, "premises"), "verified");
}

#[test]
fn usage_errors() {
    let (code, _) = lib_run(&["cover", "--space", "farey:20", "--r", "1", "--ell", "0"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = lib_run(&["gen", "--space", "broom:x"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = lib_run(&["asdim", "--braid", "2"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = lib_run(&["delta", "--space", "grid:3", "--family", "nope"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn reports_are_deterministic() {
    let args = ["delta", "--space", "grid:9", "--budget", "2000", "--seed", "7"];
    let (_, a) = lib_run(&args);
    let (_, b) = lib_run(&args);
    assert_eq!(a, b);
    assert_eq!(value(&a, "exhaustive"), "false");
    let (_, c) = lib_run(&["delta", "--space", "grid:9", "--budget", "2000", "--seed", "8"]);
    assert_eq!(value(&c, "exhaustive"), "false");
}

#[test]
fn gen_and_probe() {
    let (code, text) = lib_run(&["gen", "--space", "tree:3,2", "--labels"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("# graph\ngraph tree:3,2 10\n0: 1 2 3\n"));
    assert_eq!(value(&text, "4"), "e.0.0");
    let (code, text) = lib_run(&["probe", "--space", "farey", "--params", "25,50", "--d", "2", "--radius", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&text, "verdict"), "UNBOUNDED-TREND");
    let (_, text) = lib_run(&["probe", "--space", "tree:4", "--params", "4,5,6", "--d", "2", "--radius", "3"]);
    assert_eq!(value(&text, "verdict"), "BOUNDED");
    let (_, text) = lib_run(&["probe", "--space", "broom:10", "--d", "2", "--radius", "2"]);
    assert_eq!(value(&text, "cardinality"), "10");
}

#[test]
fn binary_exit_codes_and_out_file() {
    let out = bin(&["asdim", "--surface", "2,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("lower=7 upper=7 exact=y"));
    assert_eq!(bin(&["a1", "--space", "broom:40", "--r", "1"]).status.code(), Some(3));
    assert_eq!(bin(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bin(&["cover", "--space", "broom:20"]).status.code(), Some(2));
    let path = std::env::temp_dir().join(format!("asdim-lab-cli-{}.txt", std::process::id()));
    let out = bin(&["cover", "--space", "broom:60", "--r", "1", "--ell", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let first = std::fs::read_to_string(&path).unwrap();
    bin(&["cover", "--space", "broom:60", "--r", "1", "--ell", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(first, std::fs::read_to_string(&path).unwrap());
    std::fs::remove_file(path).unwrap();
}
