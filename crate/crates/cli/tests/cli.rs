use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_omega-psido"));
    c.env_remove("OMEGA_PSIDO_OUT");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("omega-psido-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn only_bundle(root: &Path) -> PathBuf {
    let mut dirs: Vec<PathBuf> = fs::read_dir(root).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs.pop().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn default_suite_passes_with_eight_reports() {
    let root = scratch("default");
    let o = bin().args(["suite", "--out"]).arg(&root).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = only_bundle(&root);
    let reports = fs::read_dir(&dir)
        .unwrap()
        .filter(|e| {
            let p = e.as_ref().unwrap().path();
            p.extension().is_some_and(|x| x == "json") && !p.ends_with("summary.json")
        })
        .count();
    assert_eq!(reports, 8);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert!(summary["suites"].as_array().unwrap().iter().all(|s| s["pass"] == true));
}

#[test]
fn linear_weight_fails_the_beta_axiom() {
    let root = scratch("linear");
    let o = bin().args(["suite", "--weight", "power:1", "--suites", "axioms", "--out"]).arg(&root).output().unwrap();
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("\"axiom\":\"beta\""), "{err}");
}

#[test]
fn empty_selection_gives_empty_bundle() {
    let root = scratch("empty");
    let o = bin().args(["suite", "--suites", "", "--out"]).arg(&root).output().unwrap();
    assert_eq!(code(&o), 0);
    let dir = only_bundle(&root);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["suites"].as_array().unwrap().len(), 0);
}

#[test]
fn fixed_seed_runs_are_byte_identical_and_do_not_overwrite() {
    let root = scratch("seeded");
    for _ in 0..2 {
        let o = bin().args(["suite", "--seed", "11", "--suites", "conjugate,inequalities,kernel-decay", "--out"]).arg(&root).output().unwrap();
        assert_eq!(code(&o), 0);
    }
    let mut dirs: Vec<PathBuf> = fs::read_dir(&root).unwrap().map(|e| e.unwrap().path()).collect();
    dirs.sort();
    assert_eq!(dirs.len(), 2);
    for f in fs::read_dir(&dirs[0]).unwrap() {
        let name = f.unwrap().file_name();
        assert_eq!(fs::read(dirs[0].join(&name)).unwrap(), fs::read(dirs[1].join(&name)).unwrap(), "{name:?}");
    }
}

#[test]
fn output_directory_from_environment() {
    let root = scratch("env");
    let o = Command::new(env!("CARGO_BIN_EXE_omega-psido"))
        .env("OMEGA_PSIDO_OUT", &root)
        .args(["weights", "axioms", "--weight", "gevrey:0.5"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(root.join("weights_axioms.json").is_file());
    assert!(root.join("weights_axioms.csv").is_file());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = scratch("config");
    let bad = write(&dir, "bad.json", "{ not json");
    let cases: Vec<Vec<String>> = vec![
        vec!["weights".into(), "axioms".into(), "--weight".into(), "bogus".into()],
        vec!["weights".into(), "axioms".into(), "--weight".into(), "gevrey:1.5".into()],
        vec!["op".into(), "kernel".into(), "--amplitude".into(), bad.display().to_string()],
        vec!["suite".into(), "--suites".into(), "nope".into(), "--out".into(), dir.display().to_string()],
        vec!["weights".into()],
    ];
    for args in cases {
        let o = bin().args(&args).output().unwrap();
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn operator_checks_from_files() {
    let dir = scratch("ops");
    let p = write(&dir, "p.json", r#"{"dim":1,"terms":[{"c_re":1.0,"mu":[0],"nu":[1]}]}"#);
    let q = write(&dir, "q.json", r#"{"dim":1,"terms":[{"c_re":1.0,"mu":[1],"nu":[0]}]}"#);
    let u = write(&dir, "u.json", r#"{"dim":1,"terms":[{"c_re":1.0,"mu":[0],"s":1.0}]}"#);
    let v = write(&dir, "v.json", r#"{"dim":1,"terms":[{"c_re":1.0,"mu":[1],"s":0.5}]}"#);
    let a = write(&dir, "a.json", r#"{"dim":1,"terms":[{"c_re":1.0,"mu":[0],"eta":[0],"nu":[0],"s":0.5,"r":0.5,"t":0.5}]}"#);
    let run = |args: &[&str], files: &[&Path]| {
        let mut c = bin();
        c.args(args);
        for f in files {
            c.arg(f);
        }
        c.output().unwrap()
    };
    let o = bin().args(["op", "compose-check", "--p"]).arg(&p).arg("--q").arg(&q).arg("--input").arg(&u).output().unwrap();
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["predicted_index"], 2);

    let o = bin().args(["op", "transpose-check", "--symbol"]).arg(&p).arg("--input").arg(&u).arg("--pair").arg(&v).output().unwrap();
    assert_eq!(code(&o), 0);

    let o = run(&["op", "decay", "--lambda", "1,2,4", "--format", "csv", "--amplitude"], &[&a]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("c_half_radius,c_lambda,lambda"));

    let o = run(&["op", "convergence", "--deltas", "1/4,1/8,1/16,1/32", "--amplitude"], &[&a, Path::new("--input"), &u]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let dump = dir.join("out.bin");
    let o = bin()
        .args(["op", "apply", "--grid", "X=12,N=256", "--format", "csv", "--symbol"])
        .arg(&p)
        .arg("--input")
        .arg(&u)
        .arg("--dump")
        .arg(&dump)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 257);
    let g = omega_psido::function_spaces::GridFunction::read_binary(fs::File::open(&dump).unwrap()).unwrap();
    assert_eq!(g.values().len(), 256);
}

#[test]
fn calculus_compose_emits_a_formal_sum() {
    let dir = scratch("calc");
    let p = write(&dir, "p.json", r#"{"dim":1,"terms":[{"c_re":1.0,"mu":[0],"nu":[1]}]}"#);
    let q = write(&dir, "q.json", r#"{"dim":1,"terms":[{"c_re":1.0,"mu":[1],"nu":[0]}]}"#);
    let o = bin().args(["calculus", "compose", "--p"]).arg(&p).arg("--q").arg(&q).output().unwrap();
    assert_eq!(code(&o), 0);
    let s = omega_psido::calculus::FormalSum::from_json(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(s.termination_index(), Some(2));
}
