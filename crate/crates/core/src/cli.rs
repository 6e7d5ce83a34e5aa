//! Command line front end. Every command writes its outputs together with a
//! sibling `<out>.manifest.json` describing the run; CSV headers carry the
//! parameters, tolerances and library version.
//!
//! Exit codes: 0 success, 2 invalid flags, 3 numerical or I/O failure.

use crate::error::{Error, Result};
use crate::fredholm::{check_curve, curve_csv, largest_eigenvalue_cdf};
use crate::io::{self, svg_plot, Series};
use crate::kernel::kernel_grid;
use crate::p34::{series_coeffs, solve_u, u_closed_form_alpha1, Alpha, P34Solution};
use crate::rhcheck::{infinity_decay, det_check, verify_jumps, Builder, DecayFit, JumpReport};
use crate::{finiten, psi};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Largest n accepted by `finite-n`: the Stieltjes procedure loses
/// orthogonality beyond about 60 in double precision.
pub const CLI_N_MAX: usize = 50;
const U_STEP: f64 = 0.01;
const U_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "edge34", version, about = "Generalized Airy edge kernel, Painlevé XXXIV and gap probabilities")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve Painlevé XXXIV for u(s) on a grid
    U(UArgs),
    /// Evaluate the edge kernel on a tensor grid
    Kernel(KernelArgs),
    /// Largest-eigenvalue distribution det(I − K) on (t, ∞)
    Gapdist(GapArgs),
    /// Compare a finite-n ensemble kernel with the edge kernel
    FiniteN(FiniteArgs),
    /// Asymptotic series coefficients bₙ and aₙ
    Coeffs(CoeffArgs),
    /// Verify the model Riemann–Hilbert problem for α ∈ {0, 1}
    Rhcheck(RhArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct UArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
    pub s_min: f64,
    #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
    pub s_max: f64,
    #[arg(long, default_value_t = U_STEP)]
    pub step: f64,
    #[arg(long, default_value_t = U_TOL)]
    pub tol: f64,
    /// add the explicit α = 1 solution as a column
    #[arg(long, value_parser = ["closed-form"])]
    pub oracle: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct KernelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub s: f64,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 21)]
    pub nx: usize,
    /// defaults to the x grid
    #[arg(long, allow_hyphen_values = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_max: Option<f64>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// JSON export of the grid
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct GapArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s: f64,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 37)]
    pub nt: usize,
    #[arg(long, default_value_t = 40)]
    pub m: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct FiniteArgs {
    /// JSON file `{ "v": [c0, c1, c2], "n": 40, "N": 40.0, "alpha": 0.5 }`
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long, default_value_t = -3.75, allow_hyphen_values = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 2.25, allow_hyphen_values = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 13)]
    pub ngrid: usize,
    #[arg(long, default_value_t = 20)]
    pub quad_points: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct CoeffArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct RhArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s: f64,
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub version: String,
    pub tolerances: BTreeMap<String, f64>,
    /// seconds since the Unix epoch
    pub timestamp: u64,
    pub outputs: Vec<String>,
}

enum Failure {
    Usage(String),
    Numerical(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numerical(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn alpha_flag(v: f64) -> CliResult<Alpha> {
    Alpha::new(v).or_else(|e| usage(e.to_string()))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn range_flag(name: &str, lo: f64, hi: f64, n: usize) -> CliResult<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
        return usage(format!("{name}: need finite min < max and at least 2 points"));
    }
    Ok(linspace(lo, hi, n))
}

/// Expand `--config file.json` into flags placed before the user's own flags,
/// so that explicit flags win.
pub fn expand_config(args: Vec<String>) -> std::result::Result<Vec<String>, String> {
    let mut rest = Vec::new();
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or("--config needs a path")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let map: Map<String, Value> = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let mut flags = Vec::new();
    for (k, v) in map {
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => flags.extend([flag, n.to_string()]),
            Value::String(s) => flags.extend([flag, s]),
            other => return Err(format!("{path}: unsupported value for {k}: {other}")),
        }
    }
    // program name and subcommand stay in front
    let head = rest.len().min(2);
    let mut out: Vec<String> = rest[..head].to_vec();
    out.extend(flags);
    out.extend(rest[head..].iter().cloned());
    Ok(out)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn header(command: &str, params: &impl Serialize, tolerances: &BTreeMap<String, f64>, out: &Path) -> Vec<(&'static str, String)> {
    let mut meta = vec![
        ("command", command.to_string()),
        ("version", VERSION.to_string()),
        ("parameters", serde_json::to_string(params).unwrap_or_default()),
        ("tolerances", serde_json::to_string(tolerances).unwrap_or_default()),
    ];
    if let Some(name) = manifest_path(out).file_name() {
        meta.push(("manifest", name.to_string_lossy().into_owned()));
    }
    meta
}

fn write_manifest(command: &str, params: &impl Serialize, tolerances: BTreeMap<String, f64>, out: &Path, outputs: &[&Path]) -> Result<()> {
    let m = RunManifest {
        command: command.to_string(),
        parameters: serde_json::to_value(params).unwrap_or(Value::Null),
        version: VERSION.to_string(),
        tolerances,
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    io::write(&manifest_path(out), &(serde_json::to_string_pretty(&m).unwrap_or_default() + "\n"))
}

fn tolerances(items: &[(&str, f64)]) -> BTreeMap<String, f64> {
    items.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// u on a small range around the requested s values.
fn solve_around(alpha: Alpha, lo: f64, hi: f64) -> Result<P34Solution> {
    solve_u(alpha, lo - 0.5, hi + 0.5, U_STEP, U_TOL)
}

fn cmd_u(a: &UArgs) -> CliResult<()> {
    let alpha = alpha_flag(a.alpha)?;
    if !(a.s_min < a.s_max) || !(a.step > 0.0) {
        return usage("need s-min < s-max and step > 0");
    }
    if !(1e-12..=1e-6).contains(&a.tol) {
        return usage("tol must lie in [1e-12, 1e-6]");
    }
    let oracle = a.oracle.is_some();
    if oracle && a.alpha != 1.0 {
        return usage("--oracle closed-form needs --alpha 1");
    }
    let sol = solve_u(alpha, a.s_min, a.s_max, a.step, a.tol)?;
    let tol = tolerances(&[("ode_tol", a.tol), ("accuracy_target", crate::p34::ACCURACY_TARGET)]);
    let mut meta = header("u", a, &tol, &a.out);
    meta.push(("valid_interval", format!("[{}, {}]", sol.valid_interval.0, sol.valid_interval.1)));
    let text = if oracle {
        let mut worst: f64 = 0.0;
        let rows: Vec<Vec<f64>> = (0..sol.s_grid.len())
            .map(|i| {
                let (c, _) = u_closed_form_alpha1(sol.s_grid[i]);
                let d = (sol.u[i] - c).abs();
                if sol.is_valid_at(sol.s_grid[i]) {
                    worst = worst.max(d);
                }
                vec![sol.s_grid[i], sol.u[i], sol.u_prime[i], c, d]
            })
            .collect();
        println!("max |u - closed form| on the valid interval: {worst:.3e}");
        io::csv(&meta, &["s", "u", "u_prime", "u_closed_form", "abs_diff"], rows)
    } else {
        sol.to_csv(&meta)
    };
    io::write(&a.out, &text)?;
    let mut outputs = vec![a.out.as_path()];
    if let Some(svg) = &a.svg {
        let pts: Vec<(f64, f64)> = sol.s_grid.iter().copied().zip(sol.u.iter().copied()).collect();
        let plot = svg_plot(&format!("u(s), alpha = {}", a.alpha), "s", "u", &[Series { label: "u", points: &pts }]);
        io::write(svg, &plot)?;
        outputs.push(svg);
    }
    write_manifest("u", a, tol, &a.out, &outputs)?;
    println!("valid interval [{}, {}], {} points", sol.valid_interval.0, sol.valid_interval.1, sol.s_grid.len());
    Ok(())
}

/// Grid points may not enter the origin window; 0 itself is allowed for α ≥ 0.
fn origin_flag<'a>(mut pts: impl Iterator<Item = &'a f64>, alpha: f64) -> CliResult<()> {
    match pts.find(|&&v| v.abs() < psi::ORIGIN_WINDOW && (v != 0.0 || alpha < 0.0)) {
        Some(v) => usage(format!("grid point {v} lies within {} of the origin", psi::ORIGIN_WINDOW)),
        None => Ok(()),
    }
}

fn cmd_kernel(a: &KernelArgs) -> CliResult<()> {
    let alpha = alpha_flag(a.alpha)?;
    let xs = range_flag("x", a.x_min, a.x_max, a.nx)?;
    let ys = range_flag("y", a.y_min.unwrap_or(a.x_min), a.y_max.unwrap_or(a.x_max), a.ny.unwrap_or(a.nx))?;
    origin_flag(xs.iter().chain(&ys), a.alpha)?;
    if !a.s.is_finite() {
        return usage("s must be finite");
    }
    let sol = solve_around(alpha, a.s, a.s)?;
    let g = kernel_grid(alpha, a.s, &xs, &ys, &sol)?;
    let tol = tolerances(&[("ode_tol", U_TOL), ("near_diagonal", crate::kernel::NEAR_DIAGONAL), ("max_imag", g.max_imag)]);
    io::write(&a.out, &g.to_csv(&header("kernel", a, &tol, &a.out)))?;
    let mut outputs = vec![a.out.as_path()];
    if let Some(json) = &a.json {
        let doc = serde_json::json!({
            "version": VERSION,
            "tolerances": tol,
            "u_source": { "solver": "solve_u", "step": U_STEP, "tol": U_TOL, "valid_interval": sol.valid_interval },
            "grid": g,
        });
        io::write(json, &(serde_json::to_string_pretty(&doc).unwrap_or_default() + "\n"))?;
        outputs.push(json);
    }
    write_manifest("kernel", a, tol, &a.out, &outputs)?;
    println!("{}x{} kernel values written", xs.len(), ys.len());
    Ok(())
}

fn cmd_gapdist(a: &GapArgs) -> CliResult<()> {
    let alpha = alpha_flag(a.alpha)?;
    let ts = range_flag("t", a.t_min, a.t_max, a.nt)?;
    if !(10..=crate::fredholm::M_CAP).contains(&a.m) {
        return usage(format!("m must lie in [10, {}]", crate::fredholm::M_CAP));
    }
    if a.t_min < crate::fredholm::T_MIN {
        return usage(format!("t-min must be at least {}", crate::fredholm::T_MIN));
    }
    let sol = solve_around(alpha, a.s, a.s)?;
    let curve = largest_eigenvalue_cdf(alpha, a.s, &ts, a.m, &sol)?;
    check_curve(&curve)?;
    let tol = tolerances(&[("det_tol", crate::fredholm::TOLERANCE), ("ode_tol", U_TOL)]);
    io::write(&a.out, &curve_csv(&header("gapdist", a, &tol, &a.out), &curve))?;
    let mut outputs = vec![a.out.as_path()];
    if let Some(svg) = &a.svg {
        let pts: Vec<(f64, f64)> = curve.iter().map(|r| (r.t, r.det_value)).collect();
        let plot = svg_plot(&format!("det(I - K) on (t, inf), alpha = {}, s = {}", a.alpha, a.s), "t", "F(t)", &[Series { label: "F", points: &pts }]);
        io::write(svg, &plot)?;
        outputs.push(svg);
    }
    write_manifest("gapdist", a, tol, &a.out, &outputs)?;
    let worst = curve.iter().map(|r| r.est_error).fold(0.0, f64::max);
    println!("{} points, largest estimated error {worst:.3e}", curve.len());
    Ok(())
}

fn cmd_finite_n(a: &FiniteArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&a.ensemble).map_err(|e| Failure::Usage(format!("{}: {e}", a.ensemble.display())))?;
    let file: finiten::EnsembleFile = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", a.ensemble.display())))?;
    if file.n == 0 || file.n > CLI_N_MAX {
        return usage(format!("n must lie in [1, {CLI_N_MAX}] (double-precision recurrence limit)"));
    }
    alpha_flag(file.alpha)?;
    let grid = range_flag("grid", a.grid_min, a.grid_max, a.ngrid)?;
    origin_flag(grid.iter(), file.alpha)?;
    let cfg = finiten::EnsembleConfig::from_file(&file)?;
    let rec = finiten::build_recurrence(&cfg, a.quad_points)?;
    let sol = solve_around(cfg.alpha, cfg.s, cfg.s)?;
    let cmp = finiten::edge_compare(&cfg, &rec, &sol, &grid)?;
    let tol = tolerances(&[("recurrence_tol", finiten::RECURRENCE_TOL), ("ode_tol", U_TOL)]);
    let mut meta = header("finite-n", a, &tol, &a.out);
    meta.push(("ensemble", serde_json::to_string(&file).unwrap_or_default()));
    meta.push(("c1", io::num(cfg.c1)));
    meta.push(("c2", io::num(cfg.c2)));
    meta.push(("s", io::num(cfg.s)));
    meta.push(("sup_error", io::num(cmp.sup_error)));
    io::write(&a.out, &cmp.to_csv(&meta))?;
    write_manifest("finite-n", a, tol, &a.out, &[a.out.as_path()])?;
    println!("n = {}, s = {:.6}, sup error {:.4e}", cfg.n, cfg.s, cmp.sup_error);
    Ok(())
}

fn cmd_coeffs(a: &CoeffArgs) -> CliResult<()> {
    let alpha = alpha_flag(a.alpha)?;
    if a.n < 2 || a.n > 200 {
        return usage("n must lie in [2, 200]");
    }
    let c = series_coeffs(alpha, a.n + 1)?;
    let tol = BTreeMap::new();
    let mut meta = header("coeffs", a, &tol, &a.out);
    meta.push(("nu", io::num(c.nu)));
    let rows = (0..=a.n).map(|k| vec![k as f64, c.b[k], c.a[k]]);
    io::write(&a.out, &io::csv(&meta, &["n", "b_n", "a_n"], rows))?;
    write_manifest("coeffs", a, tol, &a.out, &[a.out.as_path()])?;
    println!("b_0 = {}, b_1 = {}", c.b[0], c.b[1]);
    Ok(())
}

#[derive(Serialize)]
struct RhReport {
    version: &'static str,
    alpha: f64,
    s: f64,
    jumps: JumpReport,
    det_max_deviation: f64,
    det_pass: bool,
    decay: Vec<DecayFit>,
    decay_pass: bool,
    pass: bool,
}

fn cmd_rhcheck(a: &RhArgs) -> CliResult<()> {
    let builder = Builder::from_alpha(a.alpha).or_else(|e| usage(e.to_string()))?;
    if a.samples < 3 {
        return usage("samples must be at least 3");
    }
    let jumps = verify_jumps(builder, a.s, a.samples)?;
    let det = det_check(builder, a.s, 100, 1)?;
    let decay = [std::f64::consts::FRAC_PI_3, -std::f64::consts::FRAC_PI_3]
        .iter()
        .map(|&phi| infinity_decay(builder, a.s, phi))
        .collect::<Result<Vec<_>>>()?;
    let decay_pass = decay.iter().all(|f| (-0.7..=-0.3).contains(&f.exponent));
    let report = RhReport {
        version: VERSION,
        alpha: a.alpha,
        s: a.s,
        det_pass: det <= 1e-10,
        pass: jumps.pass && det <= 1e-10,
        jumps,
        det_max_deviation: det,
        decay,
        decay_pass,
    };
    let tol = tolerances(&[("jump", crate::rhcheck::JUMP_TOLERANCE), ("det", 1e-10), ("epsilon", crate::rhcheck::EPSILON)]);
    io::write(&a.out, &(serde_json::to_string_pretty(&report).unwrap_or_default() + "\n"))?;
    write_manifest("rhcheck", a, tol, &a.out, &[a.out.as_path()])?;
    for r in &report.jumps.rays {
        println!("{:?}: max residual {:.3e}", r.ray, r.max_residual);
    }
    for f in &report.decay {
        println!("decay exponent along arg {:+.4}: {:.4}", f.phi, f.exponent);
    }
    println!("max |det - 1| {:.3e}; overall {}", report.det_max_deviation, if report.pass { "PASS" } else { "FAIL" });
    if !report.pass {
        return Err(Error::CheckFailed(format!("jump or determinant check above tolerance at s = {}", a.s)).into());
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("EDGE34_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Runs the command line given the full argument list; returns the exit code.
pub fn run_with(args: Vec<String>) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::U(a) => cmd_u(a),
        Command::Kernel(a) => cmd_kernel(a),
        Command::Gapdist(a) => cmd_gapdist(a),
        Command::FiniteN(a) => cmd_finite_n(a),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Rhcheck(a) => cmd_rhcheck(a),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: {}: {e}", e.name());
            3
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn config_flags_come_before_user_flags() {
        let dir = std::env::temp_dir().join(format!("edge34-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("c.json");
        std::fs::write(&cfg, r#"{"alpha": 1, "n": 4, "s_min": -2}"#).unwrap();
        let out = expand_config(argv(&format!("edge34 coeffs --config {} --n 6 --out x.csv", cfg.display()))).unwrap();
        assert_eq!(out[..2], ["edge34", "coeffs"]);
        assert_eq!(out[out.len() - 3], "6");
        assert!(out.contains(&"--s-min".to_string()));
        let cli = Cli::try_parse_from(out.iter().filter(|a| !a.starts_with("--s-min") && *a != "-2")).unwrap();
        match cli.command {
            Command::Coeffs(a) => assert_eq!((a.alpha, a.n), (1.0, 6)),
            _ => panic!(),
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_with(argv("edge34 coeffs --alpha 1")), 2);
        assert_eq!(run_with(argv("edge34 coeffs --alpha -0.7 --n 4 --out /dev/null")), 2);
        assert_eq!(run_with(argv("edge34 rhcheck --alpha 0.5 --out /dev/null")), 2);
        assert_eq!(run_with(argv("edge34 kernel --alpha 0 --s 0 --x-min -0.0005 --x-max 0.0005 --nx 2 --out /dev/null")), 2);
        assert_eq!(run_with(argv("edge34 kernel --alpha -0.25 --s 0 --x-min -1 --x-max 1 --nx 3 --out /dev/null")), 2);
    }

    #[test]
    fn manifest_name() {
        assert_eq!(manifest_path(Path::new("out/u.csv")), PathBuf::from("out/u.csv.manifest.json"));
    }
}
