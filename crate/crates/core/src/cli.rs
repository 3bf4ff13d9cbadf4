//! The `flagkin` command line.
//!
//! Exit status: 0 on success, 1 on any usage or validation error, 2 when a
//! verification suite fails (the first counterexample goes to stderr).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::combinat::{chord_count, narayana};
use crate::error::Error;
use crate::invariant::FlagContext;
use crate::kinematics::{verify_closed_forms, verify_structure, Engine, KinematicTable, Report};
use crate::measures::{basis_labels, verify_basis_changes, Basis, MeasureLabel};
use crate::oracle::verify_pairings;
use crate::render::{render_tables, Format};
use crate::rotation::{chord_basis, graded_dimension, multiply};

pub const DEFAULT_MAX_N: usize = 8;
/// Hard ceiling for `--max-n` / `FLAGKIN_MAX_N`.
pub const MAX_N_CAP: usize = 16;
pub const MAX_N_ENV: &str = "FLAGKIN_MAX_N";

#[derive(Debug, Parser)]
#[command(name = "flagkin", version, about = "Exact kinematic formulas for flag area measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "text", ignore_case = true)]
    pub format: FormatArg,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest accepted n (default 8, or $FLAGKIN_MAX_N; at most 16).
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded dimensions of the rotation algebra.
    Dim {
        #[arg(long)]
        n: usize,
    },
    /// Chord-monomial basis of one degree, or with --p the measure basis and its duals.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, value_enum, default_value = "phi", ignore_case = true)]
        basis: BasisArg,
    },
    /// Product of two dual elements, expanded in the dual basis.
    Product {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Kinematic formula of one basis measure.
    Coproduct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value = "phi", ignore_case = true)]
        basis: BasisArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        /// A label such as `Phi[2,1]`, `S[1,0]`, `PhiEx`; overrides --basis/--k/--i/--a.
        #[arg(long)]
        label: Option<String>,
    },
    /// All kinematic formulas of a basis (optionally one degree).
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value = "phi", ignore_case = true)]
        basis: BasisArg,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the identity suites for one p, or every p when omitted.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Latex,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Latex => Format::Latex,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Phi,
    S,
    HugWeil,
}

/// Result of a successful dispatch.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    /// First counterexample of a failed suite, if any.
    pub failure: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Effective `--max-n`: the flag, else the environment, else the default.
pub fn resolve_max_n(flag: Option<usize>, env: Option<&str>) -> Result<usize, CliError> {
    let v = match (flag, env) {
        (Some(v), _) => v,
        (None, Some(s)) => s.trim().parse().map_err(|_| usage(format!("{MAX_N_ENV}={s} is not a number")))?,
        (None, None) => DEFAULT_MAX_N,
    };
    if v > MAX_N_CAP {
        return Err(usage(format!("max-n {v} exceeds the cap {MAX_N_CAP}")));
    }
    Ok(v)
}

fn check_n(n: usize, max_n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(usage("n must be positive"));
    }
    if n > max_n {
        return Err(usage(format!("n={n} exceeds max-n={max_n}; raise --max-n or {MAX_N_ENV} (cap {MAX_N_CAP})")));
    }
    Ok(())
}

fn context(n: usize, p: usize, max_n: usize) -> Result<FlagContext, CliError> {
    check_n(n, max_n)?;
    Ok(FlagContext::new(n, p)?)
}

/// Header, rows and a JSON document for the small listing commands.
struct Listing {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Value,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn latex_escape(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}").replace('{', "\\{").replace('}', "\\}").replace('_', "\\_").replace('^', "\\^{}")
}

impl Listing {
    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Json => {
                out = serde_json::to_string_pretty(&self.json).expect("json value serializes");
                out.push('\n');
            }
            Format::Csv => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&r.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
            }
            Format::Latex => {
                let _ = writeln!(out, "\\begin{{tabular}}{{{}}}", "l".repeat(self.header.len()));
                let _ = writeln!(out, "{} \\\\ \\hline", self.header.join(" & "));
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|c| latex_escape(c)).collect();
                    let _ = writeln!(out, "{} \\\\", cells.join(" & "));
                }
                out.push_str("\\end{tabular}\n");
            }
            Format::Text => {
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|c| self.rows.iter().map(|r| r[c].len()).chain([self.header[c].len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: Vec<&str>| {
                    let parts: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    parts.join("  ").trim_end().to_string()
                };
                out.push_str(&line(self.header.clone()));
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&line(r.iter().map(String::as_str).collect()));
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn dim_listing(n: usize) -> Listing {
    let mut rows = Vec::new();
    let mut degrees = Vec::new();
    for k in 0..n {
        let d = graded_dimension(n, k);
        let nar = narayana(n, k);
        rows.push(vec![k.to_string(), d.to_string(), nar.to_string(), chord_count(n, k).to_string()]);
        degrees.push(json!({"k": k, "dimension": d, "narayana": nar.to_string(), "chord_count": chord_count(n, k).to_string()}));
    }
    Listing {
        header: vec!["k", "dimension", "narayana", "chord_count"],
        rows,
        json: json!({"schema": "flagkin.dim/1", "n": n, "degrees": degrees}),
    }
}

fn to_basis(b: BasisArg) -> Result<Basis, CliError> {
    match b {
        BasisArg::Phi => Ok(Basis::Phi),
        BasisArg::S => Ok(Basis::S),
        BasisArg::HugWeil => Err(usage("the Hug-Weil family is only available for coproduct and table")),
    }
}

fn basis_listing(n: usize, k: usize, p: Option<usize>, basis: BasisArg, max_n: usize) -> Result<Listing, CliError> {
    check_n(n, max_n)?;
    if k >= n {
        return Err(usage(format!("k={k} must be below n={n}")));
    }
    match p {
        None => {
            let monos = chord_basis(n, k);
            let rows: Vec<Vec<String>> = monos.iter().enumerate().map(|(i, m)| vec![i.to_string(), m.to_string()]).collect();
            let items: Vec<String> = monos.iter().map(ToString::to_string).collect();
            Ok(Listing {
                header: vec!["index", "monomial"],
                rows,
                json: json!({"schema": "flagkin.basis/1", "n": n, "k": k, "chord_monomials": items}),
            })
        }
        Some(p) => {
            let ctx = context(n, p, max_n)?;
            let engine = Engine::new(&ctx)?;
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for l in basis_labels(&ctx, to_basis(basis)?, k) {
                let d = engine.dual(l)?;
                let units = d.units().to_string();
                rows.push(vec![l.to_string(), d.to_string()]);
                items.push(json!({"label": l.to_string(), "dual": d.body().to_json_terms(), "units": units}));
            }
            Ok(Listing {
                header: vec!["label", "dual"],
                rows,
                json: json!({"schema": "flagkin.basis/1", "n": n, "p": p, "k": k, "measures": items}),
            })
        }
    }
}

fn parse_label(s: &str) -> Result<MeasureLabel, CliError> {
    Ok(s.parse::<MeasureLabel>()?)
}

fn product_listing(n: usize, p: usize, left: &str, right: &str, max_n: usize) -> Result<Listing, CliError> {
    let ctx = context(n, p, max_n)?;
    let (l, r) = (parse_label(left)?, parse_label(right)?);
    let basis_of = |x: MeasureLabel| match x {
        MeasureLabel::S(..) => Ok(Basis::S),
        MeasureLabel::Phi(..) | MeasureLabel::PhiEx => Ok(Basis::Phi),
        other => Err(usage(format!("{other} has no dual in the flag algebra"))),
    };
    let basis = basis_of(l)?;
    basis_of(r)?;
    l.validate(&ctx)?;
    r.validate(&ctx)?;
    let k = l.degree(&ctx) + r.degree(&ctx);
    if k >= n {
        return Err(usage(format!("degrees add up to {k}, beyond the top degree {}", n - 1)));
    }
    let engine = Engine::new(&ctx)?;
    let prod = multiply(engine.dual(l)?, engine.dual(r)?)?;
    let mut rows = Vec::new();
    let mut terms = Vec::new();
    for x in basis_labels(&ctx, basis, k) {
        let c = engine.evaluate(x, &prod)?;
        if c.is_zero() {
            continue;
        }
        rows.push(vec![format!("{x}*"), c.to_string()]);
        terms.push(json!({"label": x.to_string(), "coefficient": c.to_json_value(), "text": c.to_string()}));
    }
    Ok(Listing {
        header: vec!["dual", "coefficient"],
        rows,
        json: json!({"schema": "flagkin.product/1", "n": n, "p": p, "left": l.to_string(), "right": r.to_string(), "terms": terms}),
    })
}

fn coproduct_label(
    ctx: &FlagContext,
    basis: BasisArg,
    k: Option<usize>,
    i: Option<usize>,
    a: Option<usize>,
    label: Option<&str>,
) -> Result<MeasureLabel, CliError> {
    if let Some(s) = label {
        return parse_label(s);
    }
    let k = k.ok_or_else(|| usage("--k is required (or pass --label)"))?;
    let l = match basis {
        BasisArg::Phi => MeasureLabel::Phi(k, a.ok_or_else(|| usage("--a is required for the Phi basis"))?),
        BasisArg::S => MeasureLabel::S(k, i.ok_or_else(|| usage("--i is required for the S basis"))?),
        BasisArg::HugWeil => MeasureLabel::HugWeil(k),
    };
    l.validate(ctx)?;
    Ok(l)
}

fn tables(ctx: &FlagContext, basis: BasisArg, k: Option<usize>) -> Result<Vec<KinematicTable>, CliError> {
    if let Some(k) = k {
        if k >= ctx.n {
            return Err(usage(format!("k={k} must be below n={}", ctx.n)));
        }
    }
    let engine = Engine::new(ctx)?;
    let degrees: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..ctx.n).collect(),
    };
    let labels: Vec<MeasureLabel> = match basis {
        BasisArg::HugWeil => degrees.into_iter().filter(|&d| d <= ctx.q).map(MeasureLabel::HugWeil).collect(),
        b => {
            let b = to_basis(b)?;
            degrees.into_iter().flat_map(|d| basis_labels(ctx, b, d)).collect()
        }
    };
    Ok(labels.into_iter().map(|l| engine.coproduct(l)).collect::<Result<_, _>>()?)
}

/// All convention-independent suites for one flag context.
pub fn verification_report(ctx: &FlagContext) -> crate::Result<Report> {
    let mut r = verify_basis_changes(ctx)?;
    r.extend(verify_pairings(ctx)?);
    r.extend(verify_closed_forms(ctx)?);
    r.extend(verify_structure(ctx)?);
    Ok(r)
}

fn verify(n: usize, p: Option<usize>, max_n: usize, format: Format) -> Result<Outcome, CliError> {
    check_n(n, max_n)?;
    let ps: Vec<usize> = match p {
        Some(p) => vec![p],
        None => (0..n).collect(),
    };
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut failure = None;
    for p in ps {
        let ctx = context(n, p, max_n)?;
        let report = verification_report(&ctx)?;
        for c in &report.checks {
            let detail = c.detail.clone().unwrap_or_default();
            rows.push(vec![
                n.to_string(),
                p.to_string(),
                c.name.clone(),
                if c.passed { "ok" } else { "FAIL" }.to_string(),
                detail.clone(),
            ]);
            checks.push(json!({"n": n, "p": p, "name": c.name, "passed": c.passed, "detail": c.detail}));
        }
        if failure.is_none() {
            failure = report.first_failure().map(|c| format!("{ctx}: {} ({})", c.name, c.detail.clone().unwrap_or_default()));
        }
    }
    let listing = Listing {
        header: vec!["n", "p", "suite", "status", "detail"],
        rows,
        json: json!({"schema": "flagkin.verify/1", "passed": failure.is_none(), "checks": checks}),
    };
    Ok(Outcome { output: listing.render(format), failure })
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli, env_max_n: Option<&str>) -> Result<Outcome, CliError> {
    let max_n = resolve_max_n(cli.max_n, env_max_n)?;
    let format: Format = cli.format.into();
    let ok = |output: String| Ok(Outcome { output, failure: None });
    match &cli.command {
        Command::Dim { n } => {
            check_n(*n, max_n)?;
            ok(dim_listing(*n).render(format))
        }
        Command::Basis { n, k, p, basis } => ok(basis_listing(*n, *k, *p, *basis, max_n)?.render(format)),
        Command::Product { n, p, left, right } => ok(product_listing(*n, *p, left, right, max_n)?.render(format)),
        Command::Coproduct { n, p, basis, k, i, a, label } => {
            let ctx = context(*n, *p, max_n)?;
            let l = coproduct_label(&ctx, *basis, *k, *i, *a, label.as_deref())?;
            let t = Engine::new(&ctx)?.coproduct(l)?;
            ok(render_tables(&[t], format))
        }
        Command::Table { n, p, basis, k } => {
            let ctx = context(*n, *p, max_n)?;
            ok(render_tables(&tables(&ctx, *basis, *k)?, format))
        }
        Command::Verify { n, p } => verify(*n, *p, max_n, format),
    }
}

/// Full entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
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
    let env = std::env::var(MAX_N_ENV).ok();
    match run(&cli, env.as_deref()) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.output).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{}", out.output);
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return 1;
            }
            match out.failure {
                Some(f) => {
                    eprintln!("verification failed: {f}");
                    2
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("flagkin").chain(args.iter().copied())).unwrap();
        run(&cli, None)
    }

    #[test]
    fn max_n_resolution() {
        assert_eq!(resolve_max_n(None, None).unwrap(), 8);
        assert_eq!(resolve_max_n(None, Some("10")).unwrap(), 10);
        assert_eq!(resolve_max_n(Some(5), Some("10")).unwrap(), 5);
        assert!(resolve_max_n(Some(17), None).is_err());
        assert!(resolve_max_n(None, Some("ten")).is_err());
        assert!(matches!(run_args(&["dim", "--n", "9"]), Err(CliError::Usage(_))));
    }

    #[test]
    fn dim_text() {
        let out = run_args(&["dim", "--n", "5"]).unwrap().output;
        let dims: Vec<&str> = out.lines().skip(1).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
        assert_eq!(dims, ["1", "10", "20", "10", "1"]);
    }

    #[test]
    fn coproduct_requires_indices() {
        assert!(matches!(run_args(&["coproduct", "--n", "4", "--p", "1", "--k", "1"]), Err(CliError::Usage(_))));
        assert!(matches!(
            run_args(&["coproduct", "--n", "4", "--p", "1", "--basis", "S", "--k", "1", "--i", "3"]),
            Err(CliError::Lib(Error::IndexOutOfRange(_)))
        ));
        let out = run_args(&["coproduct", "--n", "3", "--p", "1", "--label", "PhiEx"]).unwrap().output;
        assert!(out.contains("PhiEx (x) Phi[0,0]"));
    }

    #[test]
    fn product_of_duals() {
        let out = run_args(&["product", "--n", "3", "--p", "1", "--left", "PhiEx", "--right", "PhiEx"]).unwrap();
        assert!(out.output.contains("Phi[2,1]*"), "{}", out.output);
        assert!(out.output.contains("-1/2 * omega(3)^-1"), "{}", out.output);
    }
}
