//! Command-line front end. `run` parses arguments and returns the exit code:
//! 0 on success, 2 when the model fails validation (the report is still
//! written), 1 on usage or I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::asymptotics::{self, AsymptoticSeries};
use crate::constraints::{check_narrowed, Verdict};
use crate::energy::{self, EnergyBreakdown, History, HistoryKind};
use crate::error::Error;
use crate::mittag_leffler::{ml_e, ml_e_integral};
use crate::model_catalog::{build_model, FractionalOrders, ModelCode, ModelDescriptor, ModelSpec, Order};
use crate::pole_finder::classify;
use crate::response::{self, ResponseCurve, Spacing, TimeGrid};

#[derive(Parser, Debug)]
#[command(name = "fzener", version, about = "Fractional Zener and anti-Zener models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check thermodynamical and narrowed restrictions.
    Validate(ModelArgs),
    /// Classify the zeros of phi_sigma (relaxation) or phi_epsilon (creep).
    Poles {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Response::Relaxation)]
        of: Response,
    },
    /// Relaxation modulus on a time grid.
    Relax(CurveArgs),
    /// Creep compliance on a time grid.
    Creep(CurveArgs),
    /// Short- and long-time power series (I+ID.ID only).
    Asympt {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Response::Relaxation)]
        of: Response,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Energy balance for a sampled strain or stress history.
    Energy {
        #[command(flatten)]
        model: ModelArgs,
        /// CSV with header `t,value,kind`, uniform steps starting at t = 0.
        #[arg(long)]
        history: PathBuf,
    },
    /// Evaluate e_{xi,zeta,lambda}(t).
    Ml {
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        zeta: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write the reference curves to a directory.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Model descriptor JSON: {"code", "orders", "a", "b"}.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GridArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub tmin: f64,
    #[arg(long, default_value_t = 1e3)]
    pub tmax: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = GridSpacing::Log)]
    pub spacing: GridSpacing,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpacing {
    Log,
    Linear,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Integral,
    Ml,
    Stable,
    Auto,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Response {
    Relaxation,
    Creep,
}

impl From<GridArgs> for TimeGrid {
    fn from(g: GridArgs) -> Self {
        let spacing = match g.spacing {
            GridSpacing::Log => Spacing::Log,
            GridSpacing::Linear => Spacing::Linear,
        };
        TimeGrid { t_min: g.tmin, t_max: g.tmax, points: g.points, spacing }
    }
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parse `args` (program name first) and execute.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("validation failed: {msg}");
            2
        }
    }
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate(m) => validate(&m),
        Command::Poles { model, of } => poles(&model, of),
        Command::Relax(c) => curve(&c, Response::Relaxation),
        Command::Creep(c) => curve(&c, Response::Creep),
        Command::Asympt { model, of, grid } => asympt(&model, of, grid),
        Command::Energy { model, history } => energy_cmd(&model, &history),
        Command::Ml { xi, zeta, lambda, t, out } => ml(xi, zeta, lambda, t, &out),
        Command::Fixtures { out } => fixtures(&out).map_err(Failure::Usage),
    }
}

fn read_descriptor(path: &Path) -> std::result::Result<ModelDescriptor, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    ModelDescriptor::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Built and thermodynamically admissible model.
fn load(args: &ModelArgs) -> std::result::Result<ModelSpec, Failure> {
    let m = read_descriptor(&args.model)?.build().map_err(|e| Failure::Invalid(e.to_string()))?;
    let rep = check_narrowed(&m);
    if rep.overall == Verdict::ThermoFail {
        let ids: Vec<_> = rep.failures().map(|q| q.id.as_str()).collect();
        return Err(Failure::Invalid(format!("{} violates {}", m.code, ids.join(", "))));
    }
    Ok(m)
}

fn emit(out: &OutArgs, text: &str) -> Outcome {
    match &out.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn validate(args: &ModelArgs) -> Outcome {
    let desc = read_descriptor(&args.model)?;
    let m = match desc.build() {
        Ok(m) => m,
        Err(e) => {
            let report = json!({ "code": desc.code, "error": e.to_string() });
            emit(&args.out, &pretty(&report))?;
            return Err(Failure::Invalid(e.to_string()));
        }
    };
    let rep = check_narrowed(&m);
    let mut text = rep.to_json();
    text.push('\n');
    emit(&args.out, &text)?;
    match rep.overall {
        Verdict::ThermoFail => Err(Failure::Invalid(format!("{}: {:?}", m.code, rep.overall))),
        _ => Ok(()),
    }
}

fn poles(args: &ModelArgs, of: Response) -> Outcome {
    let m = read_descriptor(&args.model)?.build().map_err(|e| Failure::Invalid(e.to_string()))?;
    let f = match of {
        Response::Relaxation => &m.phi_sigma,
        Response::Creep => &m.phi_epsilon,
    };
    emit(&args.out, &pretty(&classify(f)?.to_json()))
}

/// `{:.16e}`: 17 significant digits, enough to round-trip an f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn response_csv(c: &ResponseCurve) -> String {
    let mut s = String::from("t,value,np,branch,method\n");
    for i in 0..c.times.len() {
        let (np, br) = match &c.branch_values {
            Some(b) => (fmt_f64(b.np[i]), fmt_f64(b.branch[i])),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(s, "{},{},{np},{br},{}", fmt_f64(c.times[i]), fmt_f64(c.values[i]), c.method.as_str());
    }
    s
}

fn response_json(c: &ResponseCurve) -> String {
    pretty(&serde_json::to_value(c).expect("curve serializes"))
}

/// Curve for the requested method; `auto` picks the split form for I+ID.ID
/// creep and the cut integral otherwise.
pub fn compute_curve(m: &ModelSpec, which: Response, method: MethodArg, grid: &TimeGrid) -> crate::Result<ResponseCurve> {
    match (which, method) {
        (Response::Relaxation, MethodArg::Integral | MethodArg::Auto) => response::relaxation(m, grid),
        (Response::Relaxation, MethodArg::Ml) => response::relaxation_ml_curve(m, grid),
        (Response::Relaxation, MethodArg::Stable) => {
            Err(Error::WrongModelShape { code: m.code.to_string(), what: "a split relaxation form" })
        }
        (Response::Creep, MethodArg::Auto) => response::creep(m, grid),
        (Response::Creep, MethodArg::Integral) => response::creep_integral(m, grid),
        (Response::Creep, MethodArg::Ml) => response::creep_ml_curve(m, grid),
        (Response::Creep, MethodArg::Stable) => response::creep_stable(m, grid),
    }
}

fn curve(args: &CurveArgs, which: Response) -> Outcome {
    let m = load(&args.model)?;
    let c = compute_curve(&m, which, args.method, &args.grid.into())?;
    let text = match args.model.out.format.unwrap_or(Format::Csv) {
        Format::Csv => response_csv(&c),
        Format::Json => response_json(&c),
    };
    emit(&args.model.out, &text)
}

pub fn series_pair(m: &ModelSpec, which: Response) -> crate::Result<(AsymptoticSeries, AsymptoticSeries)> {
    Ok(match which {
        Response::Relaxation => (asymptotics::relax_short(m)?, asymptotics::relax_long(m)?),
        Response::Creep => (asymptotics::creep_short(m)?, asymptotics::creep_long(m)?),
    })
}

fn asympt(args: &ModelArgs, which: Response, grid: GridArgs) -> Outcome {
    let m = load(args)?;
    let (short, long) = series_pair(&m, which)?;
    let text = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({ "short": short.to_json(), "long": long.to_json() })),
        Format::Csv => {
            let mut s = String::from("t,short,long\n");
            for t in TimeGrid::from(grid).times()? {
                let _ = writeln!(s, "{},{},{}", fmt_f64(t), fmt_f64(short.eval(t)), fmt_f64(long.eval(t)));
            }
            s
        }
    };
    emit(&args.out, &text)
}

/// Parse a `t,value,kind` history; every row must carry the same kind.
pub fn parse_history(text: &str) -> crate::Result<History> {
    let bad = |line: usize, why: &str| Error::InvalidHistory(format!("line {line}: {why}"));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.split(',').map(str::trim).eq(["t", "value", "kind"]) => {}
        _ => return Err(Error::InvalidHistory("header must be `t,value,kind`".into())),
    }
    let (mut ts, mut vs, mut kind) = (Vec::new(), Vec::new(), None);
    for (i, line) in lines {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(bad(i + 1, "expected 3 fields"));
        }
        let t: f64 = f[0].parse().map_err(|_| bad(i + 1, "bad t"))?;
        let v: f64 = f[1].parse().map_err(|_| bad(i + 1, "bad value"))?;
        let k = match f[2] {
            "strain" => HistoryKind::Strain,
            "stress" => HistoryKind::Stress,
            _ => return Err(bad(i + 1, "kind must be strain or stress")),
        };
        if kind.is_some_and(|k0| k0 != k) {
            return Err(bad(i + 1, "mixed kinds"));
        }
        kind = Some(k);
        ts.push(t);
        vs.push(v);
    }
    History::new(ts, vs, kind.unwrap_or(HistoryKind::Strain))
}

pub fn energy_csv(e: &EnergyBreakdown) -> String {
    let mut s = String::from("t,P,W,Pdiss,residual\n");
    for i in 0..e.times.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_f64(e.times[i]),
            fmt_f64(e.power[i]),
            fmt_f64(e.stored[i]),
            fmt_f64(e.dissipated[i]),
            fmt_f64(e.residual[i])
        );
    }
    s
}

fn energy_cmd(args: &ModelArgs, path: &Path) -> Outcome {
    let m = load(args)?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let h = parse_history(&text)?;
    let e = match h.kind {
        HistoryKind::Strain => energy::energy_from_strain(&m, &h)?,
        HistoryKind::Stress => energy::energy_from_stress(&m, &h)?,
    };
    let text = match args.out.format.unwrap_or(Format::Csv) {
        Format::Csv => energy_csv(&e),
        Format::Json => pretty(&serde_json::to_value(&e).expect("breakdown serializes")),
    };
    emit(&args.out, &text)?;
    eprintln!("identity residual {:e} (max |P| = {:e})", e.identity_residual, e.max_power());
    Ok(())
}

fn ml(xi: f64, zeta: f64, lambda: f64, t: f64, out: &OutArgs) -> Outcome {
    let v = ml_e(xi, zeta, lambda, t)?;
    let ir = ml_e_integral(xi, zeta, lambda, t).ok();
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({ "xi": xi, "zeta": zeta, "lambda": lambda, "t": t, "value": v, "integral": ir })),
        Format::Csv => format!("xi,zeta,lambda,t,value\n{},{},{},{},{}\n", xi, zeta, lambda, t, fmt_f64(v)),
    };
    emit(out, &text)
}

/// The three I+ID.ID parameter rows used for the reference curves: no poles,
/// a real pole (a3 on the exact tangency value) and a complex pair.
pub fn reference_models() -> Vec<(&'static str, ModelSpec)> {
    let mut o = FractionalOrders::default();
    o.set(Order::Alpha, 0.35);
    o.set(Order::Beta, 0.55);
    o.set(Order::Nu, 0.4);
    let rp_a2 = 2.0 * (11.0f64 * 20.27).sqrt() * (0.9 * std::f64::consts::PI).cos().abs();
    let rows: [(&str, [f64; 3]); 3] =
        [("nopole", [0.05, 1.5, 0.45]), ("rp", [11.0, rp_a2, 20.27]), ("ccp", [11.0, 15.0, 20.27])];
    rows.iter()
        .map(|(name, a)| {
            let b = if *name == "nopole" { [0.7, 0.95] } else { [7.0, 9.5] };
            (*name, build_model(ModelCode::IPlusIdId, o, a, &b).expect("reference row builds"))
        })
        .collect()
}

/// Reference-curve files, in write order.
pub fn fixture_files() -> std::result::Result<Vec<(String, String)>, String> {
    let e = |x: Error| x.to_string();
    let grid = TimeGrid::default();
    let times = grid.times().map_err(e)?;
    let models = reference_models();
    let mut files = Vec::new();

    let rows: Vec<_> = models.iter().map(|(n, m)| json!({ "name": n, "model": m.descriptor() })).collect();
    files.push(("models.json".to_string(), pretty(&json!(rows))));

    for (name, m) in &models {
        let c = response::relaxation(m, &grid).map_err(e)?;
        files.push((format!("relax_{name}.csv"), response_csv(&c)));
    }
    for (name, m) in models.iter().filter(|(n, _)| *n != "rp") {
        let int = response::creep_integral(m, &grid).map_err(e)?;
        let st = response::creep_stable(m, &grid).map_err(e)?;
        let ml = response::creep_ml_curve(m, &grid).map_err(e)?;
        let mut s = String::from("t,integral,stable,ml\n");
        for (i, &t) in times.iter().enumerate() {
            let _ = writeln!(s, "{},{},{},{}", fmt_f64(t), fmt_f64(int.values[i]), fmt_f64(st.values[i]), fmt_f64(ml.values[i]));
        }
        files.push((format!("creep_{name}.csv"), s));
    }
    let (_, m) = &models[0];
    for which in [Response::Relaxation, Response::Creep] {
        let (short, long) = series_pair(m, which).map_err(e)?;
        let exact = match which {
            Response::Relaxation => response::relaxation(m, &grid).map_err(e)?,
            Response::Creep => response::creep(m, &grid).map_err(e)?,
        };
        let mut s = String::from("t,value,short,long\n");
        for (i, &t) in times.iter().enumerate() {
            let _ = writeln!(s, "{},{},{},{}", fmt_f64(t), fmt_f64(exact.values[i]), fmt_f64(short.eval(t)), fmt_f64(long.eval(t)));
        }
        let tag = if which == Response::Relaxation { "relax" } else { "creep" };
        files.push((format!("asympt_{tag}_nopole.csv"), s));
    }
    Ok(files)
}

fn fixtures(dir: &Path) -> std::result::Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for (name, text) in fixture_files()? {
        let p = dir.join(&name);
        fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?;
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn history_parsing() {
        let h = parse_history("t,value,kind\n0,0,strain\n0.5,1,strain\n1,2,strain\n").unwrap();
        assert_eq!(h.kind, HistoryKind::Strain);
        assert_eq!(h.values, vec![0.0, 1.0, 2.0]);
        assert!(parse_history("t,value\n0,0\n").is_err());
        assert!(parse_history("t,value,kind\n0,0,strain\n0.5,1,stress\n1,2,strain\n").is_err());
        assert!(parse_history("t,value,kind\n0,0,strain\n0.5,x,strain\n1,2,strain\n").is_err());
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.046734521138795e-7, -5e300] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["fzener", "relax"]), 1);
        assert_eq!(run(["fzener", "nope"]), 1);
        assert_eq!(run(["fzener", "relax", "--model", "/nonexistent.json"]), 1);
    }

    #[test]
    fn reference_rows() {
        let ms = reference_models();
        assert_eq!(ms.len(), 3);
        assert!((ms[1].1.a[1] - 28.4026942114927550).abs() < 1e-12);
    }
}
