use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use omega_psido::calculus::FormalSum;
use omega_psido::function_spaces::{GridFunction, GridSpec, TestFunction};
use omega_psido::symbols::{builtin_symbol, AmplitudeExpr, BuiltinSymbol, SymbolExpr};
use omega_psido::weights::{WeightFunction, WeightKind};
use omega_psido::Error;

/// Failure to run at all, as opposed to a check that ran and failed.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        ConfigError(e.to_string())
    }
}

impl From<std::io::Error> for ConfigError {
    fn from(e: std::io::Error) -> Self {
        ConfigError(e.to_string())
    }
}

impl From<serde_json::Error> for ConfigError {
    fn from(e: serde_json::Error) -> Self {
        ConfigError(e.to_string())
    }
}

impl From<csv::Error> for ConfigError {
    fn from(e: csv::Error) -> Self {
        ConfigError(e.to_string())
    }
}

pub type CliResult<T> = Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One emitted result: a JSON document, an optional detail table, grid dumps.
pub struct Report {
    pub name: String,
    /// `None` for commands that compute without asserting anything.
    pub pass: Option<bool>,
    pub json: Value,
    pub table: Option<Vec<Value>>,
    pub dumps: Vec<(PathBuf, GridFunction)>,
}

impl Report {
    pub fn new(name: &str, pass: Option<bool>, body: &impl Serialize) -> CliResult<Self> {
        let json = serde_json::to_value(body)?;
        let table = find_table(&json);
        Ok(Report { name: name.to_string(), pass, json, table, dumps: Vec::new() })
    }

    pub fn with_table(mut self, rows: Vec<Value>) -> Self {
        self.table = Some(rows);
        self
    }

    /// Rows with a failed boolean field, for diagnostics on exit 1.
    pub fn witness_rows(&self) -> Vec<&Value> {
        let failed = |v: &Value| {
            v.as_object().is_some_and(|o| {
                o.iter().any(|(k, x)| {
                    x == &Value::Bool(false) && !k.starts_with("inconclusive") && k != "unreliable" && k != "tail_unstable"
                }) || o.get("status").and_then(Value::as_str) == Some("unstable")
            })
        };
        self.table.iter().flatten().filter(|v| failed(v)).collect()
    }
}

fn find_table(v: &Value) -> Option<Vec<Value>> {
    let o = v.as_object()?;
    ["rows", "checks", "results", "cones"].iter().find_map(|k| match o.get(*k) {
        Some(Value::Array(a)) if a.iter().all(Value::is_object) && !a.is_empty() => Some(a.clone()),
        _ => None,
    })
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            a.iter().map(cell).collect::<Vec<_>>().join(";")
        }
        Value::Number(_) | Value::Bool(_) => v.to_string(),
        _ => v.to_string(),
    }
}

/// Scalar fields of the top-level object, as a single row.
fn scalar_row(v: &Value) -> Value {
    let mut m = Map::new();
    if let Some(o) = v.as_object() {
        for (k, x) in o {
            if !x.is_object() && !matches!(x, Value::Array(a) if a.iter().any(|e| e.is_object() || e.is_array())) {
                m.insert(k.clone(), x.clone());
            }
        }
    }
    Value::Object(m)
}

pub fn to_csv(rows: &[Value]) -> CliResult<String> {
    if rows.is_empty() {
        return Ok(String::new());
    }
    let mut header: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object().into_iter().flat_map(|o| o.keys()) {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for r in rows {
        let rec: Vec<String> = header.iter().map(|k| r.get(k).map(cell).unwrap_or_default()).collect();
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| ConfigError(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ConfigError(e.to_string()))
}

pub fn table_csv(r: &Report) -> CliResult<String> {
    match &r.table {
        Some(rows) => to_csv(rows),
        None => to_csv(&[scalar_row(&r.json)]),
    }
}

/// Writes `<name>.json`, `<name>.csv` and the grid dumps into `dir`.
pub fn write_bundle(dir: &Path, r: &Report) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{}.json", r.name)), serde_json::to_string_pretty(&r.json)? + "\n")?;
    fs::write(dir.join(format!("{}.csv", r.name)), table_csv(r)?)?;
    for (path, g) in &r.dumps {
        let target = if path.is_absolute() { path.clone() } else { dir.join(path) };
        g.write_binary(fs::File::create(target)?)?;
    }
    Ok(())
}

/// A reader that closed the pipe early (`| head`) is not an error.
fn write_stdout(text: &str) -> CliResult<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Prints or writes a report and returns the process exit code.
pub fn emit(r: &Report, format: Format, out: Option<&Path>) -> CliResult<i32> {
    match out {
        Some(dir) => {
            write_bundle(dir, r)?;
            let status = match r.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "done",
            };
            println!("{} {} -> {}", r.name, status, dir.display());
        }
        None => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&r.json)? + "\n",
                Format::Csv => table_csv(r)?,
            };
            write_stdout(&text)?;
            for (path, g) in &r.dumps {
                g.write_binary(fs::File::create(path)?)?;
            }
        }
    }
    if r.pass == Some(false) {
        eprintln!("{}: assertion failed", r.name);
        for w in r.witness_rows() {
            eprintln!("  witness: {w}");
        }
        return Ok(1);
    }
    Ok(0)
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
}

/// `gevrey:0.5`, `log_power:2`, `gevrey_log:0.5,1`, `power:1`, inline JSON or a JSON file.
pub fn parse_weight(spec: &str) -> CliResult<WeightFunction> {
    let s = spec.trim();
    if s.starts_with('{') {
        return Ok(WeightFunction::from_json(s)?);
    }
    if Path::new(s).is_file() {
        return Ok(WeightFunction::from_json(&read(Path::new(s))?)?);
    }
    let (kind, args) = s.split_once(':').ok_or_else(|| ConfigError(format!("weight `{s}`: expected kind:params")))?;
    let nums = parse_list::<f64>(args)?;
    let need = |n: usize| {
        if nums.len() == n {
            Ok(())
        } else {
            Err(ConfigError(format!("weight `{s}`: {kind} takes {n} parameter(s)")))
        }
    };
    let kind = match kind {
        "gevrey" => need(1).map(|_| WeightKind::Gevrey { d: nums[0] })?,
        "log_power" => need(1).map(|_| WeightKind::LogPower { s: nums[0] })?,
        "gevrey_log" => need(2).map(|_| WeightKind::GevreyLog { d: nums[0], s: nums[1] })?,
        "power" => need(1).map(|_| WeightKind::Power { d: nums[0] })?,
        _ => return Err(ConfigError(format!("unknown weight kind `{kind}`"))),
    };
    Ok(WeightFunction::new(kind)?)
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| ConfigError(format!("cannot parse `{p}` in list `{s}`"))))
        .collect()
}

/// `X=12,N=512`; missing keys fall back to the default grid of the dimension.
pub fn parse_grid(s: Option<&str>, dim: usize) -> CliResult<GridSpec> {
    let def = GridSpec::default_for(dim)?;
    let Some(s) = s else { return Ok(def) };
    let (mut x, mut n) = (def.half_width, def.n);
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| ConfigError(format!("grid entry `{part}`: expected key=value")))?;
        match k.trim() {
            "X" | "x" => x = v.trim().parse().map_err(|_| ConfigError(format!("grid X `{v}`")))?,
            "N" | "n" => n = v.trim().parse().map_err(|_| ConfigError(format!("grid N `{v}`")))?,
            other => return Err(ConfigError(format!("unknown grid key `{other}`"))),
        }
    }
    Ok(GridSpec::new(dim, x, n)?)
}

/// `1/4,1/8,0.0625` as the integers `k = 1/δ`.
pub fn parse_deltas(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let delta = match p.split_once('/') {
                Some((a, b)) => {
                    let (a, b): (f64, f64) = (
                        a.trim().parse().map_err(|_| ConfigError(format!("delta `{p}`")))?,
                        b.trim().parse().map_err(|_| ConfigError(format!("delta `{p}`")))?,
                    );
                    a / b
                }
                None => p.parse().map_err(|_| ConfigError(format!("delta `{p}`")))?,
            };
            let k = (1.0 / delta).round();
            if !(delta > 0.0) || (1.0 / delta - k).abs() > 1e-9 * k {
                return Err(ConfigError(format!("delta `{p}` is not 1/k for a positive integer k")));
            }
            Ok(k as usize)
        })
        .collect()
}

pub fn load_symbol(path: &Path) -> CliResult<SymbolExpr> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)?;
    if v.get("kind").is_some() {
        let b: BuiltinSymbol = serde_json::from_value(v)?;
        Ok(builtin_symbol(&b)?)
    } else {
        Ok(SymbolExpr::from_json(&text)?)
    }
}

pub fn load_amplitude(path: &Path) -> CliResult<AmplitudeExpr> {
    Ok(AmplitudeExpr::from_json(&read(path)?)?)
}

pub fn load_test_function(path: &Path) -> CliResult<TestFunction> {
    Ok(TestFunction::from_json(&read(path)?)?)
}

/// A formal sum file, or a single symbol read as the one-term sum with `(m, ρ, R)`.
pub fn load_formal_sum(path: &Path, m: f64, rho: f64, r: f64) -> CliResult<FormalSum> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)?;
    if v.get("m").is_some() && v.get("rho").is_some() {
        Ok(FormalSum::from_json(&text)?)
    } else {
        Ok(FormalSum::from_symbol(load_symbol(path)?, m, rho, r)?)
    }
}

pub fn formal_sum_rows(s: &FormalSum) -> Vec<Value> {
    s.terms()
        .iter()
        .enumerate()
        .map(|(j, t)| {
            serde_json::json!({
                "j": j,
                "monomials": t.len(),
                "x_degree": t.x_degree(),
                "xi_degree": t.xi_degree(),
                "zero": t.is_zero(),
            })
        })
        .collect()
}
