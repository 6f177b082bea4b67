mod io;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use omega_psido::calculus::{
    amplitude_reduction, build_partition, check_formal_sum, compose_formal, equivalence_check, realize_symbol,
    transpose_formal, JRule,
};
use omega_psido::entire::{gevrey_langenbruch, lift_to_several_variables, q_derivative_bounds, taylor_coefficient_bounds};
use omega_psido::function_spaces::{box_points, check_s_omega_membership, seminorm_lambda};
use omega_psido::operators::{
    apply_amplitude_op, apply_symbol_op, compose_and_compare, kernel, kernel_of_symbol, kernel_quadrature_check,
    offdiagonal_decay_report, regularization_study, standard_regularizer, transpose_and_compare, KernelGrid,
};
use omega_psido::sampling::geometric_grid;
use omega_psido::symbols::{check_amplitude_class, check_symbol_class, class_grid};
use omega_psido::weights::{conjugate_suite, default_grids, inequality_suite, verify_weight_axioms, YoungConjugate};

use io::{
    emit, formal_sum_rows, load_amplitude, load_formal_sum, load_symbol, load_test_function, parse_deltas, parse_grid,
    parse_list, parse_weight, CliResult, ConfigError, Format, Report,
};

#[derive(Parser)]
#[command(name = "omega-psido", version, about = "Weight functions, ω-symbol classes and pseudodifferential operators")]
struct Cli {
    /// Output format when printing to stdout.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Seed for every randomized sample (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for report bundles; without it reports go to stdout.
    #[arg(long, global = true, env = "OMEGA_PSIDO_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight axioms, Young conjugates and the inequality suite.
    Weights {
        #[command(subcommand)]
        cmd: WeightsCmd,
    },
    /// Seminorms and membership in the test-function space.
    Space {
        #[command(subcommand)]
        cmd: SpaceCmd,
    },
    /// Symbol and amplitude class checks.
    Symbol {
        #[command(subcommand)]
        cmd: SymbolCmd,
    },
    /// Formal sums: composition, transpose, reduction, realization, equivalence.
    Calculus {
        #[command(subcommand)]
        cmd: CalculusCmd,
    },
    /// Operators on grids, kernels and residual checks.
    Op {
        #[command(subcommand)]
        cmd: OpCmd,
    },
    /// The Gevrey canonical product and its bounds.
    Entire {
        #[command(subcommand)]
        cmd: EntireCmd,
    },
    /// Run the report suites concurrently into a timestamped directory.
    Suite(suite::SuiteArgs),
}

#[derive(Args, Clone)]
struct WeightArg {
    /// gevrey:D, log_power:S, gevrey_log:D,S, power:D, inline JSON or a JSON file.
    #[arg(long, default_value = "gevrey:0.5")]
    weight: String,
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// Check the axioms (α), (β), (γ), (δ) on sample grids.
    Axioms(WeightArg),
    /// Tabulate φ*(t).
    Conjugate {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, default_value = "0,0.5,1,2,4,8")]
        t: String,
    },
    /// Convexity, monotonicity and biconjugacy of φ*.
    Suite {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Every weight inequality over randomized samples.
    Inequalities {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Args)]
struct BoxArgs {
    #[arg(long, default_value_t = 6.0)]
    half_width: f64,
    #[arg(long, default_value_t = 41)]
    per_axis: usize,
    #[arg(long, default_value_t = 6)]
    order: usize,
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// |f|_λ for each λ.
    Seminorm {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, default_value = "1,2,4")]
        lambda: String,
        #[command(flatten)]
        b: BoxArgs,
    },
    /// Sampled constants D_{λ,μ} certifying membership.
    Membership {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, default_value = "1,2")]
        lambda: String,
        #[arg(long, default_value = "1,2")]
        mu: String,
        #[command(flatten)]
        b: BoxArgs,
    },
}

#[derive(Args)]
struct ClassArgs {
    #[command(flatten)]
    w: WeightArg,
    #[arg(long, default_value = "1,2,4")]
    n: String,
    /// Number of sample points.
    #[arg(long, default_value_t = 300)]
    points: usize,
    #[arg(long, default_value_t = 256.0)]
    radius: f64,
    #[arg(long, default_value_t = 6)]
    order: usize,
}

#[derive(Subcommand)]
enum SymbolCmd {
    /// Minimal class constants C_n for a symbol or an amplitude.
    Class {
        #[arg(long, conflicts_with = "amplitude", required_unless_present = "amplitude")]
        symbol: Option<PathBuf>,
        #[arg(long)]
        amplitude: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[command(flatten)]
        c: ClassArgs,
    },
}

#[derive(Args)]
struct SumMeta {
    /// Order m used when a file holds a single symbol.
    #[arg(long, default_value_t = 0.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long = "radius-r", default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 8)]
    j_max: usize,
}

#[derive(Subcommand)]
enum CalculusCmd {
    /// Formal composition p # q of two formal sums.
    Compose {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[command(flatten)]
        meta: SumMeta,
    },
    /// Formal transpose of a formal sum.
    Transpose {
        #[arg(long)]
        p: PathBuf,
        #[command(flatten)]
        meta: SumMeta,
    },
    /// Reduce an amplitude to a formal sum of symbols.
    Reduce {
        #[arg(long)]
        amplitude: PathBuf,
        #[command(flatten)]
        meta: SumMeta,
    },
    /// Realize a formal sum through the partition family and check its class.
    Realize {
        #[arg(long)]
        sum: PathBuf,
        #[command(flatten)]
        meta: SumMeta,
        #[command(flatten)]
        c: ClassArgs,
        #[arg(long, default_value_t = 100_000)]
        support_points: usize,
    },
    /// Equivalence constants D_n of two formal sums.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        meta: SumMeta,
        #[arg(long = "big-n", default_value = "1,2,3,4")]
        big_n: String,
        #[command(flatten)]
        c: ClassArgs,
    },
    /// Check each term of a formal sum against its strengthened estimate.
    Check {
        #[arg(long)]
        sum: PathBuf,
        #[command(flatten)]
        meta: SumMeta,
        #[command(flatten)]
        c: ClassArgs,
    },
}

#[derive(Args)]
struct GridArg {
    /// `X=12,N=512`.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Subcommand)]
enum OpCmd {
    /// Apply Op(p) or an amplitude operator to a sampled test function.
    Apply {
        #[arg(long, conflicts_with = "amplitude", required_unless_present = "amplitude")]
        symbol: Option<PathBuf>,
        #[arg(long)]
        amplitude: Option<PathBuf>,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        g: GridArg,
        /// Write the result grid in binary form.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Closed-form kernel on a box with a quadrature cross-check.
    Kernel {
        #[arg(long, conflicts_with = "amplitude", required_unless_present = "amplitude")]
        symbol: Option<PathBuf>,
        #[arg(long)]
        amplitude: Option<PathBuf>,
        #[arg(long, default_value_t = 4.0)]
        half_width: f64,
        #[arg(long, default_value_t = 9)]
        per_axis: usize,
        #[arg(long, default_value_t = 20)]
        quadrature_points: usize,
    },
    /// Off-diagonal decay constants C_λ of the kernel.
    Decay {
        #[arg(long)]
        amplitude: PathBuf,
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value = "1,2,4")]
        lambda: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 8.0)]
        half_width: f64,
        #[arg(long, default_value_t = 41)]
        per_axis: usize,
    },
    /// Oscillatory regularization A_δ f as δ → 0.
    Convergence {
        #[arg(long)]
        amplitude: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "1/4,1/8,1/16,1/32")]
        deltas: String,
        #[arg(long, default_value_t = 1e-5)]
        tolerance: f64,
        #[command(flatten)]
        g: GridArg,
    },
    /// Op(p)Op(q) against the operator of the composed formal sum.
    ComposeCheck(ComposeCheckArgs),
    /// ⟨Op(p)u, v⟩ against ⟨u, Op(q)v⟩ with q the formal transpose.
    TransposeCheck {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[command(flatten)]
        g: GridArg,
    },
}

#[derive(Args)]
struct ComposeCheckArgs {
    #[arg(long)]
    p: PathBuf,
    #[arg(long)]
    q: PathBuf,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[command(flatten)]
    g: GridArg,
}

#[derive(Args)]
struct ProductArgs {
    #[arg(long, default_value_t = 0.5)]
    d: f64,
    #[arg(long, default_value_t = 2000)]
    factors: usize,
}

#[derive(Subcommand)]
enum EntireCmd {
    /// Two-sided band for log|G| against ω, stable under doubling the factors.
    Band {
        #[command(flatten)]
        p: ProductArgs,
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
    },
    /// Minimal C in the Taylor coefficient bound, and its n-th power scaling.
    Coefficients {
        #[command(flatten)]
        p: ProductArgs,
        #[arg(long, default_value_t = 40)]
        degree_cap: usize,
        #[arg(long, default_value = "1,2,3")]
        powers: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Derivative bounds for q^n = G^{-n} on the real line.
    QBounds {
        #[command(flatten)]
        p: ProductArgs,
        #[arg(long, default_value = "1,2,3")]
        powers: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        aperture: f64,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
    },
    /// Growth of the lift to several variables on cones.
    Lift {
        #[command(flatten)]
        p: ProductArgs,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 50.0)]
        a_max: f64,
        #[arg(long, default_value_t = 200)]
        per_aperture: usize,
    },
}

fn weights(cmd: WeightsCmd, seed: u64) -> CliResult<Report> {
    match cmd {
        WeightsCmd::Axioms(w) => {
            let w = parse_weight(&w.weight)?;
            let (t, s) = default_grids();
            let r = verify_weight_axioms(&w, &t, &s);
            Report::new("weights_axioms", Some(r.pass()), &r)
        }
        WeightsCmd::Conjugate { w, t } => {
            let w = parse_weight(&w.weight)?;
            let ts = parse_list::<f64>(&t)?;
            if let Some(bad) = ts.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
                return Err(ConfigError(format!("conjugate needs finite t ≥ 0, got {bad}")));
            }
            let rows = YoungConjugate::new(&w).table(&ts);
            Report::new("weights_conjugate", None, &json!({ "weight": w.name(), "rows": rows }))
        }
        WeightsCmd::Suite { w, samples } => {
            let r = conjugate_suite(&parse_weight(&w.weight)?, samples, seed);
            Report::new("weights_conjugate_suite", Some(r.pass), &r)
        }
        WeightsCmd::Inequalities { w, samples } => {
            let r = inequality_suite(&parse_weight(&w.weight)?, samples, seed);
            Report::new("weights_inequalities", Some(r.pass()), &r)
        }
    }
}

fn space(cmd: SpaceCmd) -> CliResult<Report> {
    match cmd {
        SpaceCmd::Seminorm { input, w, lambda, b } => {
            let (f, w) = (load_test_function(&input)?, parse_weight(&w.weight)?);
            let grid = box_points(f.dim(), b.half_width, b.per_axis);
            let rows = parse_list::<f64>(&lambda)?
                .into_iter()
                .map(|l| seminorm_lambda(&f, l, &w, b.order, &grid))
                .collect::<Result<Vec<_>, _>>()?;
            let stable = rows.iter().all(|r| r.stable);
            Report::new("space_seminorm", Some(stable), &json!({ "weight": w.name(), "rows": rows }))
        }
        SpaceCmd::Membership { input, w, lambda, mu, b } => {
            let (f, w) = (load_test_function(&input)?, parse_weight(&w.weight)?);
            let grid = box_points(f.dim(), b.half_width, b.per_axis);
            let r = check_s_omega_membership(&f, &w, &parse_list(&lambda)?, &parse_list(&mu)?, b.order, &grid)?;
            Report::new("space_membership", Some(r.certified), &r)
        }
    }
}

fn symbol(cmd: SymbolCmd, seed: u64) -> CliResult<Report> {
    let SymbolCmd::Class { symbol, amplitude, m, rho, c } = cmd;
    let w = parse_weight(&c.w.weight)?;
    let n = parse_list::<usize>(&c.n)?;
    let r = match (symbol, amplitude) {
        (Some(p), _) => {
            let p = load_symbol(&p)?;
            let grid = class_grid(2 * p.dim(), c.points, c.radius, seed);
            check_symbol_class(&p, m, rho, &w, &n, &grid, c.order)?
        }
        (None, Some(a)) => {
            let a = load_amplitude(&a)?;
            let grid = class_grid(3 * a.dim(), c.points, c.radius, seed);
            check_amplitude_class(&a, m, rho, &w, &n, &grid, c.order)?
        }
        (None, None) => return Err(ConfigError("give --symbol or --amplitude".into())),
    };
    Report::new("symbol_class", Some(r.pass), &r)
}

fn calculus(cmd: CalculusCmd, seed: u64) -> CliResult<Report> {
    match cmd {
        CalculusCmd::Compose { p, q, meta } => {
            let p = load_formal_sum(&p, meta.m, meta.rho, meta.r)?;
            let q = load_formal_sum(&q, meta.m, meta.rho, meta.r)?;
            let s = compose_formal(&p, &q, meta.j_max)?;
            Ok(Report::new("calculus_compose", None, &s.to_json_value())?.with_table(formal_sum_rows(&s)))
        }
        CalculusCmd::Transpose { p, meta } => {
            let s = transpose_formal(&load_formal_sum(&p, meta.m, meta.rho, meta.r)?, meta.j_max)?;
            Ok(Report::new("calculus_transpose", None, &s.to_json_value())?.with_table(formal_sum_rows(&s)))
        }
        CalculusCmd::Reduce { amplitude, meta } => {
            let a = load_amplitude(&amplitude)?;
            let s = amplitude_reduction(&a, meta.m, meta.rho, meta.r, meta.j_max)?;
            Ok(Report::new("calculus_reduce", None, &s.to_json_value())?.with_table(formal_sum_rows(&s)))
        }
        CalculusCmd::Realize { sum, meta, c, support_points } => {
            let w = parse_weight(&c.w.weight)?;
            let s = load_formal_sum(&sum, meta.m, meta.rho, meta.r)?;
            let fam = build_partition(s.dim(), &w, s.radius(), s.rho(), &JRule::Default, meta.j_max)?;
            let support = fam.check_support(support_points, seed);
            let e = realize_symbol(&s, &fam)?;
            let grid = class_grid(2 * s.dim(), c.points, c.radius, seed);
            let class = check_symbol_class(&e, s.m(), s.rho(), &w, &parse_list(&c.n)?, &grid, c.order)?;
            let cutoffs: Vec<f64> = (1..=fam.j_max()).map(|j| fam.cutoff_radius(j)).collect();
            let pass = support.holds && class.pass;
            let body = json!({
                "block_starts": fam.block_starts(),
                "cutoff_radii": cutoffs,
                "support": support,
                "class": class,
            });
            Ok(Report::new("calculus_realize", Some(pass), &body)?.with_table(serde_json::to_value(&class.rows)?.as_array().cloned().unwrap_or_default()))
        }
        CalculusCmd::Equiv { a, b, meta, big_n, c } => {
            let w = parse_weight(&c.w.weight)?;
            let a = load_formal_sum(&a, meta.m, meta.rho, meta.r)?;
            let b = load_formal_sum(&b, meta.m, meta.rho, meta.r)?;
            let grid = class_grid(2 * a.dim(), c.points, c.radius, seed);
            let r = equivalence_check(&a, &b, &w, &parse_list(&c.n)?, &parse_list(&big_n)?, &grid, c.order)?;
            Report::new("calculus_equiv", Some(r.pass), &r)
        }
        CalculusCmd::Check { sum, meta, c } => {
            let w = parse_weight(&c.w.weight)?;
            let s = load_formal_sum(&sum, meta.m, meta.rho, meta.r)?;
            let grid = class_grid(2 * s.dim(), c.points, c.radius, seed);
            let r = check_formal_sum(&s, &w, &parse_list(&c.n)?, &grid, c.order)?;
            Report::new("calculus_check", Some(r.pass), &r)
        }
    }
}

fn grid_rows(g: &omega_psido::function_spaces::GridFunction) -> Vec<serde_json::Value> {
    let sp = g.spec();
    g.values()
        .iter()
        .enumerate()
        .map(|(i, v)| json!({ "x": sp.point(g.space(), i), "re": v.re, "im": v.im }))
        .collect()
}

fn op(cmd: OpCmd, seed: u64) -> CliResult<Report> {
    match cmd {
        OpCmd::Apply { symbol, amplitude, input, g, dump } => {
            let f = load_test_function(&input)?;
            let sp = parse_grid(g.grid.as_deref(), f.dim())?;
            let u = f.sample(&sp);
            let out = match (symbol, amplitude) {
                (Some(p), _) => apply_symbol_op(&load_symbol(&p)?, &u)?,
                (None, Some(a)) => apply_amplitude_op(&load_amplitude(&a)?, &u)?,
                (None, None) => return Err(ConfigError("give --symbol or --amplitude".into())),
            };
            let sup = out.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
            let body = json!({ "grid": sp, "sup_norm": sup, "l2_norm": out.norm_sq().sqrt() });
            let mut r = Report::new("op_apply", None, &body)?.with_table(grid_rows(&out));
            if let Some(path) = dump {
                r.dumps.push((path, out));
            }
            Ok(r)
        }
        OpCmd::Kernel { symbol, amplitude, half_width, per_axis, quadrature_points } => {
            let (k, check) = match (symbol, amplitude) {
                (Some(p), _) => {
                    let p = load_symbol(&p)?;
                    (kernel_of_symbol(&p)?, kernel_quadrature_check(&p.to_amplitude(), quadrature_points, half_width, seed)?)
                }
                (None, Some(a)) => {
                    let a = load_amplitude(&a)?;
                    (kernel(&a)?, kernel_quadrature_check(&a, quadrature_points, half_width, seed)?)
                }
                (None, None) => return Err(ConfigError("give --symbol or --amplitude".into())),
            };
            let d = k.dim;
            let rows: Vec<serde_json::Value> = box_points(2 * d, half_width, per_axis)
                .iter()
                .map(|z| {
                    let v = k.eval(&z[..d], &z[d..]);
                    json!({ "x": &z[..d], "y": &z[d..], "re": v.re, "im": v.im })
                })
                .collect();
            let pass = check.max_error <= 1e-7;
            let body = json!({ "kernel": k, "quadrature_check": check });
            Ok(Report::new("op_kernel", Some(pass), &body)?.with_table(rows))
        }
        OpCmd::Decay { amplitude, w, r, lambda, order, half_width, per_axis } => {
            let w = parse_weight(&w.weight)?;
            let kg = KernelGrid::new(kernel(&load_amplitude(&amplitude)?)?, half_width, per_axis, r)?;
            let rep = offdiagonal_decay_report(&kg, &w, &parse_list(&lambda)?, order)?;
            Report::new("op_decay", Some(rep.pass), &rep)
        }
        OpCmd::Convergence { amplitude, input, deltas, tolerance, g } => {
            let a = load_amplitude(&amplitude)?;
            let f = load_test_function(&input)?;
            let sp = parse_grid(g.grid.as_deref(), f.dim())?;
            let rep = regularization_study(&a, &f, &standard_regularizer(f.dim()), &parse_deltas(&deltas)?, &sp, tolerance)?;
            Report::new("op_convergence", Some(rep.pass), &rep)
        }
        OpCmd::ComposeCheck(c) => {
            let (p, q) = (load_symbol(&c.p)?, load_symbol(&c.q)?);
            let u = load_test_function(&c.input)?;
            let sp = parse_grid(c.g.grid.as_deref(), u.dim())?;
            let rep = compose_and_compare(&p, &q, &u, &sp, c.tolerance)?;
            Report::new("op_compose_check", Some(rep.pass), &rep)
        }
        OpCmd::TransposeCheck { symbol, input, pair, tolerance, g } => {
            let p = load_symbol(&symbol)?;
            let (u, v) = (load_test_function(&input)?, load_test_function(&pair)?);
            let sp = parse_grid(g.grid.as_deref(), u.dim())?;
            let rep = transpose_and_compare(&p, &u, &v, &sp, tolerance)?;
            Report::new("op_transpose_check", Some(rep.pass), &rep)
        }
    }
}

fn entire(cmd: EntireCmd, seed: u64) -> CliResult<Report> {
    match cmd {
        EntireCmd::Band { p, tolerance } => {
            let (_, band) = gevrey_langenbruch(p.d, p.factors, tolerance)?;
            Report::new("entire_band", Some(band.stable), &band)
        }
        EntireCmd::Coefficients { p, degree_cap, powers, dim } => {
            let (g, _) = gevrey_langenbruch(p.d, p.factors, 0.02)?;
            let r = taylor_coefficient_bounds(&g, dim, degree_cap, &parse_list(&powers)?)?;
            let pass = !r.unreliable && r.power_checks.iter().all(|(_, holds, _)| *holds);
            Report::new("entire_coefficients", Some(pass), &r)
        }
        EntireCmd::QBounds { p, powers, order, radius, aperture, nodes } => {
            let (g, _) = gevrey_langenbruch(p.d, p.factors, 0.02)?;
            let grid: Vec<f64> = std::iter::once(0.0).chain(geometric_grid(0.5, 1e3, 40)).collect();
            let r = q_derivative_bounds(&g, &parse_list(&powers)?, order, &grid, radius, aperture, nodes)?;
            let pass = r.scaling_ok && r.rows.iter().all(|row| row.bound_holds);
            Report::new("entire_q_bounds", Some(pass), &r)
        }
        EntireCmd::Lift { p, dim, a_max, per_aperture } => {
            let (g, _) = gevrey_langenbruch(p.d, p.factors, 0.02)?;
            let r = lift_to_several_variables(&g, dim).verify(a_max, per_aperture, seed);
            let pass = r.upper_holds && r.aperture.is_some();
            Report::new("entire_lift", Some(pass), &r)
        }
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    let (format, out) = (cli.format, cli.out);
    let seed = cli.seed.unwrap_or(0);
    let report = match cli.command {
        Command::Weights { cmd } => weights(cmd, seed),
        Command::Space { cmd } => space(cmd),
        Command::Symbol { cmd } => symbol(cmd, seed),
        Command::Calculus { cmd } => calculus(cmd, seed),
        Command::Op { cmd } => op(cmd, seed),
        Command::Entire { cmd } => entire(cmd, seed),
        Command::Suite(args) => return suite::run(args, cli.seed, out),
    }?;
    emit(&report, format, out.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
