//! Argument definitions and dispatch for every `qcurv` subcommand.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcurv_core::curvature::{
    bianchi_check, dk_expansion_check, maurer_cartan_tower, omega_tower, product_identity_check, source_residual,
    trace_identity_check, Connection, VectorField,
};
use qcurv_core::propagator::{invertibility_scan, Metric, NumericQMatrix};
use qcurv_core::symmetrize::{check_qsymmetry, em_field_strength, qsymmetrize, ComponentTensor, QMatrix};
use qcurv_core::{
    qbinom, qfact, qint, sample, Base, CheckReport, Coefficient, FormExpr, Gen, MatrixForm, Modes, Nilpotency,
    QFactorTable, RingMode,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::{checks, input, CliError};

#[derive(Debug, Parser)]
#[command(name = "qcurv", version, about = "Exact q-deformed exterior calculus: curvature towers, identities, q-symmetrisation")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text, env = "QCURV_FORMAT")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    MostlyMinus,
    MostlyPlus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-integers, q-factorials and q-binomials.
    Qnum(QnumArgs),
    /// Exchange factors Q_p for every permutation of S_m.
    Qtable(QtableArgs),
    /// The curvature tower Omega_1 .. Omega_k of a connection.
    Tower(TowerArgs),
    /// D Omega_k = 0 for the generic connection.
    Bianchi(PairedArgs),
    /// Cyclic and closed trace identities.
    Trace(PairedArgs),
    /// Maurer-Cartan tower of a pure-gauge connection.
    Mc(McArgs),
    /// Binomial expansion of d^k on a vector field.
    Binomial(BinomialArgs),
    /// Omega_r = Omega_{r1} Omega_{r-r1} on flat generators.
    Product(ProductArgs),
    /// Residual source current of the field equation.
    Source(SourceArgs),
    /// q-symmetrise a generic rank-m tensor.
    Symmetrize(SymmetrizeArgs),
    /// q-deformed electromagnetic field strength.
    Em(EmArgs),
    /// Invertibility scan of the propagator kernel.
    Propagator(PropagatorArgs),
    /// Run every built-in identity check.
    CheckAll(CheckAllArgs),
}

fn parse_ring(s: &str) -> Result<RingMode, String> {
    s.parse().map_err(|e: qcurv_core::Error| e.to_string())
}

fn parse_nil(s: &str) -> Result<Nilpotency, String> {
    if s == "unbounded" {
        return Ok(Nilpotency::Unbounded);
    }
    match s.parse::<u32>() {
        Ok(n) if n >= 2 => Ok(Nilpotency::Order(n)),
        _ => Err(format!("expected 'unbounded' or an integer >= 2, got '{s}'")),
    }
}

#[derive(Debug, Args)]
pub struct QnumArgs {
    #[arg(long)]
    pub n: u32,
    /// `free`, `root:N` or `prim:N`.
    #[arg(long, default_value = "free", value_parser = parse_ring)]
    pub ring: RingMode,
}

#[derive(Debug, Args)]
pub struct QtableArgs {
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Args)]
pub struct TowerArgs {
    #[arg(long)]
    pub k: usize,
    /// Matrix dimension of the generic connection.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value = "free", value_parser = parse_ring)]
    pub ring: RingMode,
    #[arg(long, default_value = "unbounded", value_parser = parse_nil)]
    pub nil: Nilpotency,
    /// JSON file `{"n": .., "entries": [[..]]}` of grade-1 expressions.
    #[arg(long)]
    pub connection: Option<PathBuf>,
}

/// Ring and nilpotency default to the paired choice for `k`.
#[derive(Debug, Args)]
pub struct PairedArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_parser = parse_ring)]
    pub ring: Option<RingMode>,
    #[arg(long, value_parser = parse_nil)]
    pub nil: Option<Nilpotency>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value = "free", value_parser = parse_ring)]
    pub ring: RingMode,
}

#[derive(Debug, Args)]
pub struct BinomialArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub r1: u32,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub connection: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SymmetrizeArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// JSON exchange matrix; defaults to symbolic q[i,j] with diagonal -1.
    #[arg(long)]
    pub q_matrix: Option<PathBuf>,
    /// Let component symbols commute.
    #[arg(long)]
    pub abelian: bool,
}

#[derive(Debug, Args)]
pub struct EmArgs {
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long)]
    pub q_matrix: Option<PathBuf>,
    #[arg(long)]
    pub abelian: bool,
}

#[derive(Debug, Args)]
pub struct PropagatorArgs {
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    /// JSON matrix of complex entries; drawn from the seed when absent.
    #[arg(long)]
    pub q_matrix: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = MetricArg::MostlyMinus)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = checks::PROPAGATOR_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CheckAllArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

/// Everything one invocation prints.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: String,
    pub modes: String,
    pub results: Vec<Value>,
    #[serde(skip)]
    pub pass: bool,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Report {
    fn new(command: &str, modes: impl ToString) -> Self {
        Report {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            modes: modes.to_string(),
            results: Vec::new(),
            pass: true,
            text: Vec::new(),
        }
    }

    fn check(&mut self, r: CheckReport) {
        self.check_with(r, Map::new());
    }

    /// Adds a check result with extra fields merged into its JSON object.
    fn check_with(&mut self, r: CheckReport, extra: Map<String, Value>) {
        self.pass &= r.pass;
        self.text.push(r.to_string());
        let mut v = serde_json::to_value(&r).expect("report serialises");
        if let Value::Object(obj) = &mut v {
            obj.extend(extra);
        }
        self.results.push(v);
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.text.join("\n");
                s.push('\n');
                s
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serialises");
                s.push('\n');
                s
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn matrix_json(m: &MatrixForm) -> Value {
    let mut obj = Map::new();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            obj.insert(format!("{},{}", i + 1, j + 1), Value::String(m.get(i, j).to_string()));
        }
    }
    Value::Object(obj)
}

fn tensor_json(t: &ComponentTensor) -> Value {
    let obj = t
        .iter()
        .map(|(ix, e)| {
            let key: Vec<String> = ix.iter().map(u32::to_string).collect();
            (key.join(","), Value::String(e.to_string()))
        })
        .collect();
    Value::Object(obj)
}

fn tensor_text(t: &ComponentTensor) -> Vec<String> {
    t.iter()
        .map(|(ix, e)| {
            let key: Vec<String> = ix.iter().map(u32::to_string).collect();
            format!("[{}] {e}", key.join(","))
        })
        .collect()
}

/// Connection from a file or the generic `w[i,j]` one; `dim` must agree with the file.
fn load_connection(path: Option<&PathBuf>, dim: Option<usize>) -> Result<Connection, CliError> {
    match path {
        None => Ok(Connection::generic(dim.unwrap_or(2))),
        Some(p) => {
            let c = input::connection(p)?;
            match dim {
                Some(n) if n != c.dim() => Err(usage(format!("--dim {n} disagrees with the {}x{0} connection file", c.dim()))),
                _ => Ok(c),
            }
        }
    }
}

fn load_qmatrix(path: Option<&PathBuf>, n: usize) -> Result<QMatrix, CliError> {
    let q = match path {
        Some(p) => input::symbolic_qmatrix(p)?,
        None => QMatrix::symbolic_uniform(n, Coefficient::from_integer(-1))?,
    };
    if q.n() != n {
        return Err(usage(format!("--dim {n} disagrees with the {}x{0} exchange matrix", q.n())));
    }
    Ok(q)
}

/// Checks that need `d^k = 0` only make sense when `q` is a `k`-th root.
fn paired_modes(a: &PairedArgs) -> Result<Modes, CliError> {
    if a.k < 2 {
        return Err(usage("--k must be at least 2"));
    }
    let paired = Modes::paired(a.k);
    let ring = a.ring.unwrap_or(paired.ring);
    let nil = a.nil.unwrap_or(paired.nil);
    if let Some(n) = ring.order() {
        if n != a.k {
            return Err(usage(format!("--ring {ring} has order {n} but --k is {}", a.k)));
        }
    }
    if nil != Nilpotency::Order(a.k) {
        return Err(usage(format!("--nil {nil} must equal --k {}", a.k)));
    }
    Ok(Modes::new(ring, nil))
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Qnum(a) => qnum(a),
        Command::Qtable(a) => qtable(a),
        Command::Tower(a) => tower(a),
        Command::Bianchi(a) => {
            let modes = paired_modes(a)?;
            let mut rep = Report::new("bianchi", modes);
            rep.check(bianchi_check(a.k, a.dim, modes)?);
            Ok(rep)
        }
        Command::Trace(a) => {
            let modes = paired_modes(a)?;
            if modes.ring.is_free() {
                return Err(usage("the cyclic trace needs a root-of-unity ring"));
            }
            let mut rep = Report::new("trace", modes);
            for r in trace_identity_check(a.k, a.dim, modes)? {
                rep.check(r);
            }
            Ok(rep)
        }
        Command::Mc(a) => {
            if a.k < 1 {
                return Err(usage("--k must be at least 1"));
            }
            let mut rep = Report::new("mc", Modes::new(a.ring, Nilpotency::Order(a.k.max(2))));
            for r in maurer_cartan_tower(a.k, a.ring)? {
                rep.check(r);
            }
            Ok(rep)
        }
        Command::Binomial(a) => {
            let out = dk_expansion_check(a.k, &VectorField::generic(a.dim))?;
            let mut rep = Report::new("binomial", Modes::free());
            let coeffs: Vec<Value> = out.coefficients.iter().map(|c| Value::String(c.to_string())).collect();
            for (r, c) in out.coefficients.iter().enumerate() {
                rep.line(format!("C_{r} = {c}"));
            }
            let mut extra = Map::new();
            extra.insert("coefficients".into(), Value::Array(coeffs));
            rep.check_with(out.report, extra);
            Ok(rep)
        }
        Command::Product(a) => {
            if a.k < 2 || a.r < 1 || a.r1 < 1 || a.r1 >= a.r.max(2) {
                return Err(usage("need k >= 2, r >= 1 and 1 <= r1 < max(r, 2)"));
            }
            let r = product_identity_check(a.k, a.r, a.r1, a.dim)?;
            let mut rep = Report::new("product", r.modes.clone());
            rep.check(r);
            Ok(rep)
        }
        Command::Source(a) => source(a),
        Command::Symmetrize(a) => symmetrize(a),
        Command::Em(a) => em(a),
        Command::Propagator(a) => propagator(a),
        Command::CheckAll(a) => check_all(a),
    }
}

fn qnum(a: &QnumArgs) -> Result<Report, CliError> {
    let mut rep = Report::new("qnum", a.ring);
    let binoms: Vec<Coefficient> = (0..=a.n as i64).map(|r| qbinom(a.n, r, a.ring)).collect();
    let (int, fact) = (qint(a.n, a.ring), qfact(a.n, a.ring));
    rep.line(format!("[{}]_q = {int}", a.n));
    rep.line(format!("[{}]_q! = {fact}", a.n));
    for (r, b) in binoms.iter().enumerate() {
        rep.line(format!("[{} {r}]_q = {b}", a.n));
    }
    rep.results.push(json!({
        "n": a.n,
        "qint": int.to_string(),
        "qfact": fact.to_string(),
        "qbinom": binoms.iter().map(ToString::to_string).collect::<Vec<_>>(),
    }));
    Ok(rep)
}

fn qtable(a: &QtableArgs) -> Result<Report, CliError> {
    if a.m == 0 || a.m > 8 {
        return Err(usage("--m must be between 1 and 8"));
    }
    let table = QFactorTable::new(a.m)?;
    let mut rep = Report::new("qtable", "exact");
    for (p, c) in table.iter() {
        rep.line(format!("{p} {c}"));
        rep.results.push(json!({ "permutation": p.to_string(), "factor": c.to_string() }));
    }
    Ok(rep)
}

fn tower(a: &TowerArgs) -> Result<Report, CliError> {
    if a.k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    let c = load_connection(a.connection.as_ref(), a.dim)?;
    let modes = Modes::new(a.ring, a.nil);
    let t = omega_tower(&c, a.k, modes)?;
    let mut rep = Report::new("tower", modes);
    for r in 1..=a.k {
        let level = t.level(r);
        rep.line(format!("Omega_{r}:"));
        rep.text.extend(level.to_string().lines().map(|l| format!("  {l}")));
        rep.results.push(json!({ "level": r, "entries": matrix_json(level) }));
    }
    Ok(rep)
}

fn source(a: &SourceArgs) -> Result<Report, CliError> {
    if a.k < 2 {
        return Err(usage("--k must be at least 2"));
    }
    let c = load_connection(a.connection.as_ref(), a.dim)?;
    let alpha = FormExpr::gen(Gen::new(Base::Alpha));
    let j = source_residual(&c, a.k, &alpha, Modes::free())?;
    let reduced = j.reimpose_paired();
    let paired = Modes::paired(a.k);
    let mut rep = Report::new("source", paired);
    let r = CheckReport::new(
        format!("source current k={} vanishes under the paired relations", a.k),
        paired,
        reduced.term_count(),
        reduced.is_zero(),
    )
    .with_detail(format!("{} terms before reduction", j.current.term_count()));
    let mut extra = Map::new();
    extra.insert("current".into(), matrix_json(&j.current));
    rep.check_with(r, extra);
    Ok(rep)
}

fn symmetrize(a: &SymmetrizeArgs) -> Result<Report, CliError> {
    if a.rank < 2 || a.dim == 0 {
        return Err(usage("--rank must be at least 2 and --dim at least 1"));
    }
    let q = load_qmatrix(a.q_matrix.as_ref(), a.dim)?;
    let t = ComponentTensor::generic(a.rank, a.dim, a.abelian)?;
    let f = qsymmetrize(&t, &q)?;
    let mut rep = Report::new("symmetrize", "exact");
    rep.text.extend(tensor_text(&f));
    let mut extra = Map::new();
    extra.insert("components".into(), tensor_json(&f));
    rep.check_with(check_qsymmetry(&f, &q)?, extra);
    Ok(rep)
}

fn em(a: &EmArgs) -> Result<Report, CliError> {
    if a.dim < 2 {
        return Err(usage("--dim must be at least 2"));
    }
    let q = load_qmatrix(a.q_matrix.as_ref(), a.dim)?;
    let field = em_field_strength(a.dim, a.abelian, &q)?;
    let mut rep = Report::new("em", "exact");
    rep.text.extend(tensor_text(&field.lower));
    let lagrangian = field.lagrangian();
    rep.line(format!("L = {lagrangian}"));
    let mut extra = Map::new();
    extra.insert("components".into(), tensor_json(&field.lower));
    extra.insert("lagrangian".into(), Value::String(lagrangian.to_string()));
    rep.check_with(field.diagonal, extra);
    rep.check(field.raised);
    Ok(rep)
}

fn propagator(a: &PropagatorArgs) -> Result<Report, CliError> {
    if a.dim < 3 {
        return Err(usage("--dim must be at least 3"));
    }
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(usage("--tol must be positive"));
    }
    let (metric, name) = match a.metric {
        MetricArg::MostlyMinus => (Metric::mostly_minus(a.dim), "mostly-minus"),
        MetricArg::MostlyPlus => (Metric::mostly_plus(a.dim), "mostly-plus"),
    };
    let q = match &a.q_matrix {
        Some(p) => input::numeric_qmatrix(p)?,
        None => NumericQMatrix::random(a.dim, &mut sample::rng(a.seed ^ 0x5eed)),
    };
    if q.dim() != a.dim {
        return Err(usage(format!("--dim {} disagrees with the {}x{1} exchange matrix", a.dim, q.dim())));
    }
    let scan = invertibility_scan(&q, a.samples, a.seed, &metric, a.tol)?;
    let mut rep = Report::new("propagator", format!("metric={name} tol={:e}", a.tol));
    rep.line(format!("invertible {}/{} (fraction {})", scan.successes, scan.samples, scan.fraction));
    let fmt = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), |v| format!("{v:e}"));
    rep.line(format!("worst condition {}", fmt(scan.worst_condition)));
    rep.line(format!("worst residual {}", fmt(scan.worst_residual)));
    for s in &scan.examples {
        rep.line(format!("k = {:?} invertible={} condition={}", s.momentum, s.invertible, fmt(s.condition)));
    }
    rep.results.push(serde_json::to_value(&scan).expect("scan serialises"));
    Ok(rep)
}

fn check_all(a: &CheckAllArgs) -> Result<Report, CliError> {
    let criteria = checks::all(a.seed)?;
    let mut rep = Report::new("check-all", format!("seed={}", a.seed));
    for c in &criteria {
        rep.pass &= c.pass;
        rep.line(format!("{} {:>2} {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.title));
        rep.text.extend(c.reports.iter().map(|r| format!("     {r}")));
        rep.results.push(serde_json::to_value(c).expect("criterion serialises"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qcurv").chain(args.iter().copied())).unwrap()
    }

    fn go(args: &[&str]) -> Result<Report, CliError> {
        run(&cli(args).command)
    }

    #[test]
    fn bianchi_defaults_to_paired_modes() {
        let rep = go(&["bianchi", "--k", "2", "--dim", "2"]).unwrap();
        assert_eq!(rep.exit_code(), 0);
        assert_eq!(rep.modes, "ring=prim:2 nil=2");
        assert_eq!(rep.results[0]["residual_term_count"], 0);
    }

    #[test]
    fn free_bianchi_fails() {
        assert_eq!(go(&["bianchi", "--k", "2", "--ring", "free"]).unwrap().exit_code(), 1);
    }

    #[test]
    fn mismatched_modes_are_usage_errors() {
        assert!(matches!(go(&["bianchi", "--k", "2", "--ring", "prim:3"]), Err(CliError::Usage(_))));
        assert!(matches!(go(&["trace", "--k", "3", "--nil", "2"]), Err(CliError::Usage(_))));
        assert!(Cli::try_parse_from(["qcurv", "bianchi", "--k", "2", "--ring", "weird"]).is_err());
    }

    #[test]
    fn qtable_has_m_factorial_rows() {
        assert_eq!(go(&["qtable", "--m", "3"]).unwrap().results.len(), 6);
        assert_eq!(go(&["qtable", "--m", "4"]).unwrap().results.len(), 24);
    }

    #[test]
    fn json_schema_keys() {
        let rep = go(&["qnum", "--n", "3"]).unwrap();
        let v: Value = serde_json::from_str(&rep.render(Format::Json)).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["tool_version", "command", "modes", "results"]);
        assert_eq!(v["results"][0]["qint"], "1 + q + q^2");
    }

    #[test]
    fn tower_prints_every_level() {
        let rep = go(&["tower", "--k", "2", "--dim", "1"]).unwrap();
        assert_eq!(rep.results[1]["entries"]["1,1"], "q*w[1,1]*w[1,1] + d(w[1,1])");
    }

    #[test]
    fn output_is_deterministic() {
        let a = go(&["propagator", "--samples", "20", "--seed", "3"]).unwrap().render(Format::Json);
        let b = go(&["propagator", "--samples", "20", "--seed", "3"]).unwrap().render(Format::Json);
        assert_eq!(a, b);
    }

    #[test]
    fn format_flag_is_global() {
        assert_eq!(cli(&["qtable", "--m", "2", "--format", "json"]).format, Format::Json);
    }
}
