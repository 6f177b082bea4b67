use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Args;
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use omega_psido::calculus::{amplitude_reduction, build_partition, equivalence_check, realize_symbol, JRule};
use omega_psido::entire::{gevrey_langenbruch, q_derivative_bounds, taylor_coefficient_bounds};
use omega_psido::function_spaces::{GridSpec, TestFunction};
use omega_psido::operators::{compose_and_compare, kernel, kernel_quadrature_check, offdiagonal_decay_report, transpose_and_compare, KernelGrid};
use omega_psido::sampling::geometric_grid;
use omega_psido::symbols::{check_symbol_class, class_grid, AmplitudeExpr, SymbolExpr};
use omega_psido::weights::{conjugate_suite, default_grids, inequality_suite, verify_weight_axioms, WeightFunction, WeightKind};

use crate::io::{load_amplitude, load_symbol, parse_grid, parse_list, parse_weight, to_csv, write_bundle, CliResult, ConfigError, Report};

pub const ALL: [&str; 8] =
    ["axioms", "conjugate", "inequalities", "symbol-class", "calculus", "operators", "kernel-decay", "entire"];

#[derive(Args)]
pub struct SuiteArgs {
    /// JSON run configuration; flags given here override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// gevrey:D, log_power:S, gevrey_log:D,S, power:D, inline JSON or a JSON file.
    #[arg(long)]
    weight: Option<String>,
    /// `X=12,N=512` for the operator residuals.
    #[arg(long)]
    grid: Option<String>,
    /// Symbol for the class and operator suites.
    #[arg(long)]
    symbol: Option<PathBuf>,
    /// Amplitude for the reduction and kernel suites.
    #[arg(long)]
    amplitude: Option<PathBuf>,
    /// Comma-separated suite names; an empty list runs nothing.
    #[arg(long)]
    suites: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    weight: Option<Value>,
    grid: Option<String>,
    symbol: Option<PathBuf>,
    amplitude: Option<PathBuf>,
    suites: Option<Vec<String>>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    m: Option<f64>,
    rho: Option<f64>,
}

struct Ctx {
    weight: WeightFunction,
    grid: Option<String>,
    symbol: Option<SymbolExpr>,
    amplitude: Option<AmplitudeExpr>,
    m: f64,
    rho: f64,
    seed: u64,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn axioms(x: &Ctx) -> CliResult<Report> {
    let (t, s) = default_grids();
    let r = verify_weight_axioms(&x.weight, &t, &s);
    Report::new("axioms", Some(r.pass()), &r)
}

fn conjugate(x: &Ctx) -> CliResult<Report> {
    let r = conjugate_suite(&x.weight, 10_000, x.seed);
    Report::new("conjugate", Some(r.pass), &r)
}

fn inequalities(x: &Ctx) -> CliResult<Report> {
    let r = inequality_suite(&x.weight, 10_000, x.seed);
    Report::new("inequalities", Some(r.pass()), &r)
}

fn symbol_class(x: &Ctx) -> CliResult<Report> {
    let p = x.symbol.clone().unwrap_or_else(|| SymbolExpr::gaussian(1));
    let grid = class_grid(2 * p.dim(), 300, 256.0, x.seed);
    let r = check_symbol_class(&p, x.m, x.rho, &x.weight, &[1, 2, 4], &grid, 6)?;
    Report::new("symbol-class", Some(r.pass), &r)
}

/// Reduce the amplitude, realize the sum and check class and equivalence.
fn calculus(x: &Ctx) -> CliResult<Report> {
    let a = match &x.amplitude {
        Some(a) => a.clone(),
        None => AmplitudeExpr::gaussian(1, 0.05, 0.05, 0.05)?,
    };
    let s = amplitude_reduction(&a, x.m, x.rho, 1.0, 6)?;
    let fam = build_partition(a.dim(), &x.weight, 1.0, x.rho, &JRule::Default, 6)?;
    let e = realize_symbol(&s, &fam)?;
    let class = check_symbol_class(&e, x.m, x.rho, &x.weight, &[1, 2, 4], &class_grid(2 * a.dim(), 300, 256.0, x.seed), 6)?;
    let eq = equivalence_check(&e, &s, &x.weight, &[1, 2], &[1, 2, 3, 4], &class_grid(2 * a.dim(), 800, 512.0, x.seed + 1), 4)?;
    let pass = class.pass && eq.pass;
    let rows = serde_json::to_value(&eq.rows)?.as_array().cloned().unwrap_or_default();
    Ok(Report::new("calculus", Some(pass), &json!({ "class": class, "equivalence": eq }))?.with_table(rows))
}

fn operators(x: &Ctx) -> CliResult<Report> {
    // Default p = x·D, composed after multiplication by x.
    let p = match &x.symbol {
        Some(p) => p.clone(),
        None => SymbolExpr::term(1, c(1.0 / (2.0 * PI)), vec![1], vec![1], 0.0, 0.0)?,
    };
    let d = p.dim();
    let spec: GridSpec = parse_grid(x.grid.as_deref(), d)?;
    let u = TestFunction::gaussian(d, 1.0)?;
    let mut mu = vec![0; d];
    mu[0] = 1;
    let v = TestFunction::term(d, c(1.0), mu, 0.5)?;
    let compose = compose_and_compare(&p, &SymbolExpr::x(d, 0), &u, &spec, 1e-8)?;
    let transpose = transpose_and_compare(&p, &u, &v, &spec, 1e-8)?;
    let pass = compose.pass && transpose.pass;
    let rows = vec![serde_json::to_value(&compose)?, serde_json::to_value(&transpose)?];
    Report::new("operators", Some(pass), &json!({ "rows": rows }))
}

fn kernel_decay(x: &Ctx) -> CliResult<Report> {
    let a = match &x.amplitude {
        Some(a) => a.clone(),
        None => AmplitudeExpr::gaussian(1, 0.5, 0.5, 0.5)?,
    };
    let kg = KernelGrid::new(kernel(&a)?, 8.0, 41, 1.0)?;
    let decay = offdiagonal_decay_report(&kg, &x.weight, &[1.0, 2.0, 4.0], 6)?;
    let quad = kernel_quadrature_check(&a, 100, 4.0, x.seed)?;
    let pass = decay.pass && quad.max_error <= 1e-7;
    let rows = serde_json::to_value(&decay.rows)?.as_array().cloned().unwrap_or_default();
    Ok(Report::new("kernel-decay", Some(pass), &json!({ "decay": decay, "quadrature": quad }))?.with_table(rows))
}

fn entire(x: &Ctx) -> CliResult<Report> {
    let WeightKind::Gevrey { d } = *x.weight.kind() else {
        let body = json!({ "weight": x.weight.name(), "status": "not applicable: the canonical product is built for Gevrey weights" });
        return Report::new("entire", Some(true), &body);
    };
    let (g, band) = gevrey_langenbruch(d, 2000, 0.02)?;
    let coef = taylor_coefficient_bounds(&g, 1, 40, &[1, 2, 3])?;
    let grid: Vec<f64> = std::iter::once(0.0).chain(geometric_grid(0.5, 1e3, 40)).collect();
    let q = q_derivative_bounds(&g, &[1, 2, 3], 6, &grid, 1.0, 1.0, 64)?;
    let pass = band.stable
        && !coef.unreliable
        && coef.power_checks.iter().all(|(_, holds, _)| *holds)
        && q.scaling_ok
        && q.rows.iter().all(|r| r.bound_holds);
    let rows = serde_json::to_value(&q.rows)?.as_array().cloned().unwrap_or_default();
    Ok(Report::new("entire", Some(pass), &json!({ "band": band, "coefficients": coef, "q_bounds": q }))?.with_table(rows))
}

fn dispatch(name: &str, x: &Ctx) -> CliResult<Report> {
    match name {
        "axioms" => axioms(x),
        "conjugate" => conjugate(x),
        "inequalities" => inequalities(x),
        "symbol-class" => symbol_class(x),
        "calculus" => calculus(x),
        "operators" => operators(x),
        "kernel-decay" => kernel_decay(x),
        "entire" => entire(x),
        other => Err(ConfigError(format!("unknown suite `{other}`"))),
    }
}

/// A fresh directory under `root`; earlier bundles are never touched.
fn bundle_dir(root: &Path) -> CliResult<PathBuf> {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    fs::create_dir_all(root)?;
    for k in 0.. {
        let name = if k == 0 { format!("suite-{secs}") } else { format!("suite-{secs}-{k}") };
        let dir = root.join(name);
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e.into()),
        }
    }
    unreachable!()
}

pub fn run(args: SuiteArgs, seed: Option<u64>, out: Option<PathBuf>) -> CliResult<i32> {
    let cfg: RunConfig = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| ConfigError(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    let weight = match (&args.weight, &cfg.weight) {
        (Some(w), _) => parse_weight(w)?,
        (None, Some(Value::String(w))) => parse_weight(w)?,
        (None, Some(v)) => parse_weight(&v.to_string())?,
        (None, None) => WeightFunction::gevrey(0.5)?,
    };
    let suites: Vec<String> = match (&args.suites, cfg.suites) {
        (Some(s), _) => parse_list::<String>(s)?,
        (None, Some(s)) => s,
        (None, None) => ALL.iter().map(|s| s.to_string()).collect(),
    };
    if let Some(bad) = suites.iter().find(|s| !ALL.contains(&s.as_str())) {
        return Err(ConfigError(format!("unknown suite `{bad}`; known: {}", ALL.join(", "))));
    }
    let symbol = args.symbol.as_ref().or(cfg.symbol.as_ref()).map(|p| load_symbol(p)).transpose()?;
    let amplitude = args.amplitude.as_ref().or(cfg.amplitude.as_ref()).map(|p| load_amplitude(p)).transpose()?;
    let ctx = Ctx {
        weight,
        grid: args.grid.or(cfg.grid),
        symbol,
        amplitude,
        m: cfg.m.unwrap_or(0.0),
        rho: cfg.rho.unwrap_or(1.0),
        seed: seed.or(cfg.seed).unwrap_or(0),
    };
    let root = out.or(cfg.out).unwrap_or_else(|| PathBuf::from("reports"));
    let dir = bundle_dir(&root)?;

    let results: Vec<(String, CliResult<Report>)> = std::thread::scope(|s| {
        let handles: Vec<_> = suites.iter().map(|name| (name.clone(), s.spawn(|| dispatch(name, &ctx)))).collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let r = h.join().unwrap_or_else(|_| Err(ConfigError(format!("suite `{name}` panicked"))));
                (name, r)
            })
            .collect()
    });

    let mut summary = Vec::new();
    let mut failed = false;
    for (name, r) in results {
        let report = match r {
            Ok(rep) => rep,
            Err(ConfigError(msg)) => Report::new(&name, Some(false), &json!({ "error": msg }))?,
        };
        write_bundle(&dir, &report)?;
        let pass = report.pass.unwrap_or(true);
        failed |= !pass;
        println!("{:<14} {}", name, if pass { "pass" } else { "FAIL" });
        if !pass {
            if let Some(err) = report.json.get("error") {
                eprintln!("{name}: {err}");
            }
            for w in report.witness_rows() {
                eprintln!("{name} witness: {w}");
            }
        }
        summary.push(json!({ "suite": name, "pass": pass }));
    }
    let body = json!({ "weight": ctx.weight.name(), "seed": ctx.seed, "suites": summary });
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&body)? + "\n")?;
    fs::write(dir.join("summary.csv"), to_csv(&summary)?)?;
    println!("bundle {}", dir.display());
    Ok(if failed { 1 } else { 0 })
}
