//! Command-line front end. Exit status: 0 success, 2 validation failure,
//! 1 usage or operational error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::export;
use crate::fibration::{FamilySpec, Kernel, TwistFamily};
use crate::galois::{Field, Poly};
use crate::klcert::{self, KlCertificate};
use crate::lfun::{self, LPolynomial};
use crate::ortho::{self, Form, OrthoCensus};
use crate::scan::{self, FamilyStats, ScanOptions};
use crate::store::{cached, Store, StoreKey};

#[derive(Parser, Debug)]
#[command(name = "twistlab", version, about = "L-functions of quadratic twists over F_q(t)")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Result store directory; falls back to TWISTLAB_STORE.
    #[arg(long, global = true)]
    pub store: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (scan and ortho only).
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact L-polynomial of one curve.
    Lfun(LfunArgs),
    /// All admissible twists E_{d,alpha} over F_{p^n}.
    Scan(ScanArgs),
    /// Lefschetz / Katz-Lefschetz certificate for a twisting polynomial.
    Klcheck(KlArgs),
    /// Exhaustive census of O(N, F_l).
    Ortho(OrthoArgs),
    /// Empirical mod-l extra vanishing against the census density.
    Compare(CompareArgs),
    /// Fit the L-degree from trace sums alone.
    ProbeDegree(ProbeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// `legendre` or a path to a family JSON `{p, n?, a, b, c, g?}`.
    #[arg(long, default_value = "legendre")]
    pub family: String,
    #[arg(long)]
    pub p: Option<u32>,
    /// Twist by f_d - alpha (legendre only; omit for the base curve).
    #[arg(long)]
    pub d: Option<usize>,
    /// Element encoding of alpha in F_{p^n}.
    #[arg(long, default_value_t = 0)]
    pub alpha: u64,
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Args, Debug)]
pub struct LfunArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Count points directly instead of character sums.
    #[arg(long)]
    pub direct: bool,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Primes for mod-l reductions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<u64>,
    #[arg(long, default_value_t = scan::DEFAULT_BUDGET)]
    pub budget: f64,
    /// Run even when the work estimate exceeds the budget.
    #[arg(long)]
    pub force: bool,
    /// Emit the average-rank report instead of the full statistics.
    #[arg(long)]
    pub average: bool,
}

#[derive(Args, Debug)]
pub struct KlArgs {
    #[arg(long, requires = "d")]
    pub p: Option<u32>,
    /// Check f_d = t^d - dt - 1 against the Legendre curve over F_p.
    #[arg(long, requires = "p")]
    pub d: Option<usize>,
    /// Polynomial JSON (inline or path): `{p, n?, coeffs}`, low degree first.
    #[arg(long, conflicts_with_all = ["p", "d"])]
    pub poly: Option<String>,
    /// `legendre` (default) or a family JSON path; `none` checks (i), (ii) only.
    #[arg(long, requires = "poly")]
    pub family: Option<String>,
}

#[derive(Args, Debug)]
pub struct OrthoArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub ell: u64,
    /// Gram matrix JSON (inline or path); identity by default.
    #[arg(long)]
    pub form: Option<String>,
    #[arg(long)]
    pub keep_elements: bool,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long)]
    pub ell: u64,
    #[arg(long, default_value_t = scan::DEFAULT_BUDGET)]
    pub budget: f64,
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Largest extension degree to count over.
    #[arg(long, default_value_t = 4)]
    pub max_m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// `klcheck` output.
#[derive(Clone, Debug, Serialize)]
pub struct KlReport {
    pub p: u32,
    pub d: Option<usize>,
    /// Only for `f_d`.
    pub lemma_predicate: Option<bool>,
    pub reverified: bool,
    pub certificate: KlCertificate,
}

#[derive(Deserialize)]
struct PolySpec {
    p: u32,
    #[serde(default = "one")]
    n: u32,
    coeffs: Vec<i64>,
}

fn one() -> u32 {
    1
}

/// Inline JSON if it parses, otherwise a path to read.
fn json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(serde_json::from_str(arg)?);
    }
    let text = fs::read_to_string(arg).map_err(|e| Error::io(arg, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn resolve_curve(c: &CurveArgs) -> Result<(TwistFamily, Arc<Field>, Value)> {
    if c.family == "legendre" {
        let p = c.p.ok_or_else(|| usage("--p is required for the legendre family"))?;
        let n = c.n.unwrap_or(1);
        let field = Field::new(p, n)?;
        let alpha = field.elem(c.alpha)?;
        let fam = match c.d {
            Some(d) => TwistFamily::twisted_legendre(&field, d, alpha)?,
            None => TwistFamily::legendre(&field, Poly::one(&field))?,
        };
        let desc = serde_json::json!({"family": "legendre", "p": p, "n": n, "d": c.d, "alpha": c.alpha});
        Ok((fam, field, desc))
    } else {
        let spec: FamilySpec = json_arg(&c.family)?;
        if c.p.is_some_and(|p| p != spec.p) || c.n.is_some_and(|n| n != spec.n) {
            return Err(usage("--p/--n disagree with the family file"));
        }
        if c.d.is_some() {
            return Err(usage("--d applies to the legendre family only"));
        }
        let fam = TwistFamily::from_spec(&spec)?;
        let field = fam.field().clone();
        Ok((fam, field, serde_json::to_value(&spec)?))
    }
}

struct Ctx {
    store: Option<Store>,
    out: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn emit_bytes(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, bytes).map_err(|e| Error::io(path, e)),
            None => {
                let mut so = std::io::stdout().lock();
                so.write_all(bytes).map_err(|e| Error::io("<stdout>", e))?;
                so.flush().map_err(|e| Error::io("<stdout>", e))
            }
        }
    }

    fn emit_json<T: Serialize>(&self, v: &T) -> Result<()> {
        if self.format == Format::Csv {
            return Err(usage("--csv is available for scan and ortho only"));
        }
        let mut s = serde_json::to_string_pretty(v)?;
        s.push('\n');
        self.emit_bytes(s.as_bytes())
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<()> {
    let format = if cli.global.csv { Format::Csv } else { Format::Json };
    let store = match &cli.global.store {
        Some(p) => Some(Store::open(p)?),
        None => Store::from_env()?,
    };
    let ctx = Ctx { store, out: cli.global.out.clone(), format };
    let run = || dispatch(&cli.command, &ctx);
    match cli.global.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| usage(e.to_string()))?;
            pool.install(run)
        }
        None => run(),
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<()> {
    match cmd {
        Command::Lfun(a) => {
            let (fam, field, desc) = resolve_curve(&a.curve)?;
            let kernel = if a.direct { Kernel::Direct } else { Kernel::CharacterSum };
            let key = StoreKey::new("lfun").param("curve", desc);
            let l: LPolynomial = cached(ctx.store.as_ref(), &key, || lfun::l_polynomial_with(&fam, &field, kernel))?;
            ctx.emit_json(&l)
        }
        Command::Scan(a) => {
            let stats = run_scan(ctx, a.p, a.d, a.n, &a.ell, a.budget, a.force)?;
            if a.average {
                ctx.emit_json(&scan::average_rank_report(&stats))
            } else if ctx.format == Format::Csv {
                let mut buf = Vec::new();
                export::write_family_csv(&stats, &mut buf)?;
                ctx.emit_bytes(&buf)
            } else {
                ctx.emit_json(&stats)
            }
        }
        Command::Klcheck(a) => {
            let report = klcheck(a)?;
            ctx.emit_json(&report)?;
            if !report.reverified {
                return Err(Error::Validation("certificate witness does not reverify".into()));
            }
            if report.lemma_predicate == Some(true) && !report.certificate.passed() {
                return Err(Error::Validation(format!(
                    "lemma holds for (p, d) = ({}, {}) but certification fails",
                    report.p,
                    report.d.unwrap_or(0)
                )));
            }
            Ok(())
        }
        Command::Ortho(a) => {
            let form: Option<Form> = match &a.form {
                Some(s) => Some(Form { gram: json_arg(s)? }),
                None => None,
            };
            let census = run_census(ctx, a.n, a.ell, form.as_ref(), a.keep_elements)?;
            if ctx.format == Format::Csv {
                let mut buf = Vec::new();
                export::write_census_csv(&census, &mut buf)?;
                ctx.emit_bytes(&buf)?;
            } else {
                ctx.emit_json(&census)?;
            }
            if census.forced_violations > 0 || census.fe_violations > 0 {
                return Err(Error::Validation(format!(
                    "{} forced-eigenvalue and {} functional-equation violations",
                    census.forced_violations, census.fe_violations
                )));
            }
            Ok(())
        }
        Command::Compare(a) => {
            let stats = run_scan(ctx, a.p, a.d, a.n, &[a.ell], a.budget, a.force)?;
            let census = run_census(ctx, 2 * a.d, a.ell, None, false)?;
            ctx.emit_json(&scan::chebotarev_compare(&stats, &census, a.ell)?)
        }
        Command::ProbeDegree(a) => {
            let (fam, field, _) = resolve_curve(&a.curve)?;
            let probe = lfun::probe_degree(&fam, &field, a.max_m)?;
            ctx.emit_json(&probe)?;
            if let Some(n) = probe.classified_n {
                // with a_1..a_{N} known the true degree must fit
                if a.max_m >= n && !probe.consistent.iter().any(|&(m, _)| m == n) {
                    return Err(Error::Validation(format!("traces are inconsistent with N = {n}")));
                }
            }
            Ok(())
        }
    }
}

fn run_scan(ctx: &Ctx, p: u32, d: usize, n: u32, ells: &[u64], budget: f64, force: bool) -> Result<FamilyStats> {
    let mut ells = ells.to_vec();
    ells.sort_unstable();
    ells.dedup();
    let key = StoreKey::new("scan").param("p", p).param("d", d).param("n", n).param("ells", &ells);
    let opts = ScanOptions { ells, budget, force };
    cached(ctx.store.as_ref(), &key, || scan::scan_family(p, d, n, &opts))
}

fn run_census(ctx: &Ctx, n: usize, ell: u64, form: Option<&Form>, keep: bool) -> Result<OrthoCensus> {
    let gram = form.map(|f| f.gram.clone()).unwrap_or_else(|| Form::identity(n).gram);
    let key = StoreKey::new("ortho").param("n", n).param("ell", ell).param("gram", gram).param("keep", keep);
    cached(ctx.store.as_ref(), &key, || ortho::enumerate_group(n, ell, form, keep))
}

fn klcheck(a: &KlArgs) -> Result<KlReport> {
    if let (Some(p), Some(d)) = (a.p, a.d) {
        if d < 2 {
            return Err(usage("d must be at least 2"));
        }
        let cert = klcert::certify_fd(p, d)?;
        return Ok(KlReport {
            p,
            d: Some(d),
            lemma_predicate: Some(klcert::lemma_predicate(p as u64, d as u64)),
            reverified: cert.reverify(),
            certificate: cert,
        });
    }
    let spec: PolySpec = json_arg(a.poly.as_deref().ok_or_else(|| usage("give --p/--d or --poly"))?)?;
    let field = Field::new(spec.p, spec.n)?;
    let f = if spec.n == 1 {
        Poly::from_ints(&field, &spec.coeffs)
    } else {
        let enc: Vec<u64> = spec
            .coeffs
            .iter()
            .map(|&x| u64::try_from(x).map_err(|_| usage("negative element encoding")))
            .collect::<Result<_>>()?;
        Poly::from_encodings(&field, &enc)?
    };
    let cert = match a.family.as_deref().unwrap_or("legendre") {
        "none" => klcert::is_lefschetz(&f)?,
        "legendre" => klcert::is_katz_lefschetz(&f, &TwistFamily::legendre(&field, Poly::one(&field))?)?,
        path => {
            let fs: FamilySpec = json_arg(path)?;
            if (fs.p, fs.n) != (spec.p, spec.n) {
                return Err(usage("polynomial and family live over different fields"));
            }
            klcert::is_katz_lefschetz(&f, &TwistFamily::from_spec(&fs)?)?
        }
    };
    Ok(KlReport {
        p: spec.p,
        d: None,
        lemma_predicate: None,
        reverified: cert.reverify(),
        certificate: cert,
    })
}

fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        2
    } else {
        1
    }
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    run_from(std::env::args_os())
}

