//! The `klm` command line: compute, verify, certify, with a JSON-lines result cache.

use std::ffi::OsString;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::{parse_rational, render_rational};
use crate::certificate::Certificate;
use crate::error::{invalid, Error, Result};
use crate::hooklen::verify_hook_factorizations;
use crate::klcoeff::{kl_poly, route_table, verify_proof_identities, verify_routes, Route};
use crate::oracle::{char_poly, oracle_agreement, restriction_contraction_audit, RankedLattice};
use crate::polyring::Poly;
use crate::realroot::{certify_negative_zeros, hurwitz_positivity_symbolic, n_sequence_test};
use crate::seqfactor::{
    diagonal_check, falling_basis_check, gy_poly, gy_poly_symbolic, kl_reformulation_check,
    qr_poly, sequence, Family, SeqSpec,
};
use crate::zcoeff::{narayana_check, verify_z_routes, z_alternating, z_from_kl, z_from_kl_route, z_positive};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_CACHE: &str = ".klm/cache.jsonl";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "klm", version, about = "KL and Z-polynomials of uniform matroids, exactly")]
pub struct Cli {
    /// Result cache (JSON lines, append-only).
    #[arg(long, global = true, env = "KLM_CACHE")]
    pub cache: Option<PathBuf>,
    /// Skip the cache entirely.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Keep measured milliseconds in emitted certificates.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print one polynomial.
    Compute(ComputeArgs),
    /// Run a cross-check grid.
    Verify(VerifyArgs),
    /// Emit one certificate per instance.
    Certify(CertifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Kind {
    #[value(name = "kl")]
    Kl,
    #[value(name = "z")]
    Z,
    #[value(name = "char")]
    Char,
    #[value(name = "G")]
    G,
    #[value(name = "Y")]
    Y,
    #[value(name = "Q")]
    Q,
    #[value(name = "R")]
    R,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Kl => "kl",
            Kind::Z => "z",
            Kind::Char => "char",
            Kind::G => "G",
            Kind::Y => "Y",
            Kind::Q => "Q",
            Kind::R => "R",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct ComputeArgs {
    pub kind: Kind,
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub d: Option<i64>,
    #[arg(long, value_parser = parse_route)]
    #[serde(serialize_with = "ser_route")]
    pub route: Option<Route>,
    /// Leave `d` symbolic (G and Y only).
    #[arg(long)]
    pub symbolic_d: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Formulas,
    ZFormulas,
    Hooks,
    Oracle,
    Identities,
    Narayana,
    Reform,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    pub suite: Suite,
    #[arg(long, default_value_t = 4)]
    pub m_max: i64,
    #[arg(long, default_value_t = 12)]
    pub d_max: i64,
    /// Per-(m,d,i) route table (formulas and z-formulas only); disables the cache.
    #[arg(long)]
    #[serde(skip)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    KlRoots,
    ZRoots,
    DseqF,
    DseqB,
    #[value(name = "hurwitz-G")]
    #[serde(rename = "hurwitz-G")]
    HurwitzG,
    #[value(name = "hurwitz-Y")]
    #[serde(rename = "hurwitz-Y")]
    HurwitzY,
}

#[derive(Args, Debug, Serialize)]
pub struct CertifyArgs {
    pub target: Target,
    /// Single value or inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    pub m: (i64, i64),
    #[arg(long, value_parser = parse_range)]
    pub d: Option<(i64, i64)>,
}

fn parse_route(s: &str) -> std::result::Result<Route, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn ser_route<S: serde::Serializer>(r: &Option<Route>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(r.name()),
        None => s.serialize_none(),
    }
}

/// `7`, `2..6` or `2..=6`, inclusive.
pub fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => (num(s)?, num(s)?),
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// Wire format of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyPayload {
    pub kind: String,
    pub m: i64,
    pub d: Option<i64>,
    /// Ascending; exact decimal or `p/q` strings, or `d`-polynomials when `d` is null.
    pub coeffs: Vec<String>,
}

impl PolyPayload {
    pub fn numeric(kind: &str, m: i64, d: i64, p: &Poly) -> Self {
        PolyPayload {
            kind: kind.to_string(),
            m,
            d: Some(d),
            coeffs: p.coeffs().iter().map(render_rational).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        let coeffs = self.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

/// One line of the cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub hash: String,
    pub command: String,
    pub parameters: Value,
    pub payload: String,
    pub exit_code: i32,
    pub wall_millis: u64,
    pub workers: usize,
    pub engine: String,
}

/// Content hash of a command invocation under the current engine.
pub fn run_hash(command: &str, parameters: &Value) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(parameters.to_string().as_bytes());
    h.update([0]);
    h.update(ENGINE_VERSION.as_bytes());
    hex::encode(h.finalize())
}

/// Latest record with `hash`; unreadable lines (e.g. a torn final write) are skipped.
pub fn cache_lookup(path: &Path, hash: &str) -> Option<RunRecord> {
    let file = fs::File::open(path).ok()?;
    BufReader::new(file)
        .lines()
        .map_while(std::io::Result::ok)
        .filter_map(|l| serde_json::from_str::<RunRecord>(&l).ok())
        .filter(|r| r.hash == hash)
        .last()
}

pub fn cache_append(path: &Path, record: &RunRecord) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut line = serde_json::to_string(record).expect("record serializes");
    line.push('\n');
    OpenOptions::new().create(true).append(true).open(path)?.write_all(line.as_bytes())
}

struct Outcome {
    payload: String,
    exit_code: i32,
}

fn cert_lines(certs: &[Certificate], timing: bool) -> Outcome {
    let mut payload = String::new();
    for c in certs {
        let mut c = c.clone();
        if !timing {
            c.millis = 0;
        }
        payload.push_str(&c.to_json());
        payload.push('\n');
    }
    let exit_code = if certs.iter().all(Certificate::passed) { EXIT_PASS } else { EXIT_FAIL };
    Outcome { payload, exit_code }
}

fn timed(f: impl FnOnce() -> Result<Certificate>) -> Result<Certificate> {
    crate::certificate::timed(f)
}

fn compute(a: &ComputeArgs) -> Result<Outcome> {
    let family = match a.kind {
        Kind::G | Kind::Q => Family::F,
        _ => Family::B,
    };
    if a.symbolic_d {
        if !matches!(a.kind, Kind::G | Kind::Y) {
            return Err(invalid!("--symbolic-d is only available for G and Y"));
        }
        if a.m < 1 {
            return Err(invalid!("need m >= 1, got {}", a.m));
        }
        let p = gy_poly_symbolic(family, a.m);
        let payload = if a.json {
            let body = PolyPayload {
                kind: a.kind.name().to_string(),
                m: a.m,
                d: None,
                coeffs: p.coeffs().iter().map(|c| c.render_descending("d")).collect(),
            };
            serde_json::to_string(&body).expect("payload serializes")
        } else {
            p.render("t", "d")
        };
        return Ok(Outcome { payload: payload + "\n", exit_code: EXIT_PASS });
    }
    let d = a.d.ok_or_else(|| invalid!("--d is required unless --symbolic-d is given"))?;
    if a.route.is_some() && !matches!(a.kind, Kind::Kl | Kind::Z) {
        return Err(invalid!("--route applies to kl and z only"));
    }
    let route = a.route.unwrap_or(Route::Positive);
    let p = match a.kind {
        Kind::Kl => kl_poly(a.m, d, route)?,
        Kind::Z => z_from_kl_route(a.m, d, route)?,
        Kind::Char => {
            if a.m < 0 || d < 0 {
                return Err(invalid!("need m, d >= 0"));
            }
            char_poly(&RankedLattice::Uniform { m: a.m as usize, d: d as usize })
        }
        Kind::G | Kind::Y => gy_poly(SeqSpec::new(family, a.m, d)?),
        Kind::Q | Kind::R => qr_poly(SeqSpec::new(family, a.m, d)?)?,
    };
    let payload = if a.json {
        serde_json::to_string(&PolyPayload::numeric(a.kind.name(), a.m, d, &p)).expect("payload serializes")
    } else {
        p.render("t")
    };
    Ok(Outcome { payload: payload + "\n", exit_code: EXIT_PASS })
}

fn verify(a: &VerifyArgs, timing: bool) -> Result<Outcome> {
    if a.m_max < 1 || a.d_max < 1 {
        return Err(invalid!("bounds must be >= 1"));
    }
    let (m, d) = (a.m_max, a.d_max);
    let certs = match a.suite {
        Suite::Formulas => vec![timed(|| verify_routes(m, d))?],
        Suite::ZFormulas => vec![timed(|| verify_z_routes(m, d))?],
        Suite::Hooks => vec![timed(|| verify_hook_factorizations(m, d))?],
        Suite::Oracle => {
            let cells: Vec<(i64, i64)> = (1..=m).flat_map(|m| (1..=d).map(move |d| (m, d))).collect();
            vec![
                timed(|| oracle_agreement(&cells))?,
                timed(|| restriction_contraction_audit((m + d).min(10) as usize))?,
            ]
        }
        Suite::Identities => vec![
            timed(|| verify_proof_identities(m, d))?,
            timed(|| diagonal_check(m, d))?,
        ],
        Suite::Narayana => vec![timed(|| narayana_check(d))?],
        Suite::Reform => vec![
            timed(|| kl_reformulation_check(m, d))?,
            timed(|| falling_basis_check(m))?,
        ],
    };
    if let Some(path) = &a.csv {
        write_csv(a.suite, m, d, path)?;
    }
    Ok(cert_lines(&certs, timing))
}

fn write_csv(suite: Suite, m_max: i64, d_max: i64, path: &Path) -> Result<()> {
    let io = |e: csv::Error| invalid!("cannot write {}: {e}", path.display());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let s = |q: Option<&crate::arith::Rational>| q.map(render_rational).unwrap_or_default();
    match suite {
        Suite::Formulas => {
            w.write_record(["m", "d", "i", "recursive", "hook", "hook_extended", "alternating", "positive"])
                .map_err(io)?;
            for r in route_table(m_max, d_max)? {
                w.write_record([
                    r.m.to_string(),
                    r.d.to_string(),
                    r.i.to_string(),
                    s(Some(&r.recursive)),
                    s(r.hook.as_ref()),
                    s(r.hook_extended.as_ref()),
                    s(Some(&r.alternating)),
                    s(Some(&r.positive)),
                ])
                .map_err(io)?;
            }
        }
        Suite::ZFormulas => {
            w.write_record(["m", "d", "i", "from_kl", "alternating", "positive"]).map_err(io)?;
            for m in 1..=m_max {
                for d in 1..=d_max {
                    let z = z_from_kl(m, d)?;
                    for i in 0..=d {
                        let alt = if i < d { Some(z_alternating(m, d, i)?) } else { None };
                        w.write_record([
                            m.to_string(),
                            d.to_string(),
                            i.to_string(),
                            s(Some(&z.coeff(i as usize))),
                            s(alt.as_ref()),
                            s(Some(&z_positive(m, d, i)?)),
                        ])
                        .map_err(io)?;
                    }
                }
            }
        }
        _ => return Err(invalid!("--csv is available for formulas and z-formulas only")),
    }
    w.flush().map_err(|e| invalid!("cannot write {}: {e}", path.display()))
}

fn certify_one(target: Target, m: i64, d: i64) -> Result<Certificate> {
    timed(|| match target {
        Target::KlRoots => certify_negative_zeros(format!("negative zeros of P_U({m},{d})"), &kl_poly(m, d, Route::Positive)?),
        Target::ZRoots => certify_negative_zeros(format!("negative zeros of Z_U({m},{d})"), &z_from_kl(m, d)?),
        Target::DseqF | Target::DseqB => {
            let family = if target == Target::DseqF { Family::F } else { Family::B };
            let s = SeqSpec::new(family, m, d)?;
            let mut c = n_sequence_test(&sequence(s), d as usize)?;
            c.subject = format!("{}_{m}({d},i) is a {d}-sequence", if family == Family::F { "f" } else { "b" });
            Ok(c)
        }
        Target::HurwitzG => hurwitz_positivity_symbolic(Family::F, m),
        Target::HurwitzY => hurwitz_positivity_symbolic(Family::B, m),
    })
}

fn certify(a: &CertifyArgs, timing: bool) -> Result<Outcome> {
    let symbolic = matches!(a.target, Target::HurwitzG | Target::HurwitzY);
    let cells: Vec<(i64, i64)> = match (symbolic, a.d) {
        (true, Some(_)) => return Err(invalid!("Hurwitz targets are symbolic in d; drop --d")),
        (true, None) => (a.m.0..=a.m.1).map(|m| (m, 0)).collect(),
        (false, None) => return Err(invalid!("--d is required for this target")),
        (false, Some((d0, d1))) => (a.m.0..=a.m.1)
            .flat_map(|m| (d0..=d1).map(move |d| (m, d)))
            .collect(),
    };
    let certs = cells
        .par_iter()
        .map(|&(m, d)| certify_one(a.target, m, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(cert_lines(&certs, timing))
}

fn describe(cmd: &Command) -> (String, Value) {
    let (name, params) = match cmd {
        Command::Compute(a) => ("compute", serde_json::to_value(a)),
        Command::Verify(a) => ("verify", serde_json::to_value(a)),
        Command::Certify(a) => ("certify", serde_json::to_value(a)),
    };
    (name.to_string(), params.expect("arguments serialize"))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Verify(a) => verify(a, cli.timing),
        Command::Certify(a) => certify(a, cli.timing),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (command, mut parameters) = describe(&cli.command);
    parameters["timing"] = json!(cli.timing);
    let hash = run_hash(&command, &parameters);
    let writes_csv = matches!(&cli.command, Command::Verify(a) if a.csv.is_some());
    let cache = (!cli.no_cache && !writes_csv)
        .then(|| cli.cache.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE)));

    if let Some(rec) = cache.as_deref().and_then(|p| cache_lookup(p, &hash)) {
        let _ = out.write_all(rec.payload.as_bytes());
        return rec.exit_code;
    }

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start workers: {e}");
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    let outcome = match pool.install(|| execute(&cli)) {
        Ok(o) => o,
        Err(e @ Error::InvalidArgument(_)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAIL;
        }
    };
    let _ = out.write_all(outcome.payload.as_bytes());
    if outcome.exit_code != EXIT_PASS {
        let first = outcome
            .payload
            .lines()
            .filter_map(|l| Certificate::from_json(l).ok())
            .find(|c| !c.passed());
        if let Some(c) = first {
            let w = c.witness.map(|w| w.to_string()).unwrap_or_default();
            let _ = writeln!(err, "FAIL {}: {w}", c.subject);
        }
    }
    if let Some(path) = cache {
        let record = RunRecord {
            hash,
            command,
            parameters,
            payload: outcome.payload,
            exit_code: outcome.exit_code,
            wall_millis: start.elapsed().as_millis() as u64,
            workers: pool.current_num_threads(),
            engine: ENGINE_VERSION.to_string(),
        };
        if let Err(e) = cache_append(&path, &record) {
            let _ = writeln!(err, "warning: cache not written to {}: {e}", path.display());
        }
    }
    outcome.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["klm", "--no-cache"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..6"), Ok((2, 6)));
        assert_eq!(parse_range("2..=6"), Ok((2, 6)));
        assert_eq!(parse_range("7"), Ok((7, 7)));
        assert!(parse_range("6..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn compute_examples() {
        assert_eq!(run_capture(&["compute", "kl", "--m", "2", "--d", "3"]), (0, "1 + 5*t\n".into(), String::new()));
        assert_eq!(run_capture(&["compute", "z", "--m", "1", "--d", "3"]).1, "1 + 6*t + 6*t^2 + 1*t^3\n");
        assert_eq!(
            run_capture(&["compute", "G", "--m", "2", "--symbolic-d"]).1,
            "1 + (d^2/2 + d/2)*t + (-d^2/2 + d/2)*t^2\n"
        );
        assert_eq!(run_capture(&["compute", "char", "--m", "1", "--d", "2"]).1, "2 - 3*t + 1*t^2\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["compute", "kl", "--m", "0", "--d", "3"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "kl", "--m", "2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "kl", "--m", "2", "--d", "3", "--symbolic-d"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["certify", "hurwitz-G", "--m", "2", "--d", "3"]).0, EXIT_USAGE);
    }

    #[test]
    fn json_payload_round_trips() {
        let (_, out, _) = run_capture(&["compute", "Q", "--m", "2", "--d", "2", "--json"]);
        let p: PolyPayload = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(p.coeffs, vec!["1", "5", "3"]);
        assert_eq!(p.to_poly().unwrap(), Poly::from_ints(&[1, 5, 3]));
        assert_eq!(serde_json::to_string(&p).unwrap(), out.trim());
    }

    #[test]
    fn hash_is_stable() {
        let p = json!({"m": 2});
        assert_eq!(run_hash("compute", &p), run_hash("compute", &p));
        assert_ne!(run_hash("compute", &p), run_hash("verify", &p));
    }
}
