//! Command-line front end: presentation files, zoo specs and JSON reports.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bundlecalc::{cohomology_dims, expected_presentation_counts, normal_bundle_for_length, wedge2, SplittingType};
use crate::freealg::{GenSet, NcPoly, WordOrder};
use crate::matfac;
use crate::ncgb::{derive_check, quadratic_classify, quotient_report, ClaimStatus, DimStatus, GbError, Presentation, QuotientReport};
use crate::rational::{parse_q, Q};
use crate::report::{Check, Status};
use crate::zoo::{self, Lambda, ZooError};

pub const MAX_DEGREE_ENV: &str = "NCDEF_MAX_DEGREE";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Zoo(#[from] ZooError),
}

fn perr(line: usize, col: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, col, message: message.into() }
}

/// Parses the `generators:` / `weights:` / `central:` / `order:` / `relations:` grammar.
pub fn presentation_parse(text: &str) -> Result<Presentation, CliError> {
    let mut gens: Option<(usize, Vec<String>)> = None;
    let mut weights: Option<(usize, Vec<u32>)> = None;
    let mut central: Vec<String> = Vec::new();
    let mut order: Option<WordOrder> = None;
    let mut rels: Vec<(usize, usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(colon) = raw.find(':') else {
            return Err(perr(line, 1, "expected 'key: value'"));
        };
        let key = raw[..colon].trim();
        let body = &raw[colon + 1..];
        match key {
            "generators" => gens = Some((line, body.split_whitespace().map(String::from).collect())),
            "central" => central.extend(body.split_whitespace().map(String::from)),
            "weights" => {
                let mut ws = Vec::new();
                for tok in body.split_whitespace() {
                    let col = raw.find(tok).unwrap_or(0) + 1;
                    ws.push(tok.parse::<u32>().map_err(|_| perr(line, col, format!("bad weight '{tok}'")))?);
                }
                weights = Some((line, ws));
            }
            "order" => {
                order = Some(match body.trim() {
                    "deglex" => WordOrder::Deglex,
                    "wdeglex" => WordOrder::Wdeglex,
                    o => return Err(perr(line, colon + 2, format!("unknown order '{o}'"))),
                })
            }
            "relations" => {
                let mut offset = colon + 1;
                for piece in body.split(';') {
                    let lead = piece.len() - piece.trim_start().len();
                    if !piece.trim().is_empty() {
                        rels.push((line, offset + lead + 1, piece.trim().to_string()));
                    }
                    offset += piece.len() + 1;
                }
            }
            k => return Err(perr(line, 1, format!("unknown key '{k}'"))),
        }
    }
    let (gline, nc) = gens.unwrap_or((1, Vec::new()));
    let mut names = nc.clone();
    names.extend(central.iter().cloned());
    let mut w = vec![1u32; names.len()];
    if let Some((wline, ws)) = &weights {
        if ws.len() != nc.len() && ws.len() != names.len() {
            return Err(perr(*wline, 1, format!("expected {} or {} weights, got {}", nc.len(), names.len(), ws.len())));
        }
        w[..ws.len()].copy_from_slice(ws);
    }
    let flags: Vec<bool> = (0..names.len()).map(|i| i >= nc.len()).collect();
    let gs = if nc.is_empty() { GenSet::commutative(&names, &w, &flags) } else { GenSet::new(&names, &w, &flags) }
        .map_err(|e| perr(gline, 1, e.to_string()))?;
    let order = order.unwrap_or(if weights.is_some() { WordOrder::Wdeglex } else { WordOrder::Deglex });
    let mut polys = Vec::new();
    for (line, col, t) in &rels {
        polys.push(NcPoly::parse_at(t, &gs, *line, *col).map_err(|e| perr(*line, *col, e.to_string()))?);
    }
    Presentation::new(gs, polys, order).map_err(|e| match e {
        GbError::ZeroRelation(i) | GbError::ConstantTerm(i) | GbError::GenSetMismatch(i) => {
            let (l, c, _) = &rels[i];
            perr(*l, *c, e.to_string())
        }
        e => CliError::Gb(e),
    })
}

/// Renders a presentation in the grammar accepted by [`presentation_parse`].
pub fn presentation_render(p: &Presentation) -> String {
    let g = p.gens();
    let pick = |c: bool| -> Vec<String> {
        (0..g.len()).filter(|&i| g.is_central(i) == c).map(|i| g.name(i).to_string()).collect()
    };
    let mut out = format!("generators: {}\n", pick(false).join(" "));
    let c = pick(true);
    if !c.is_empty() {
        out.push_str(&format!("central: {}\n", c.join(" ")));
    }
    let order: Vec<usize> = g.noncentral().into_iter().chain(g.central()).collect();
    let ws: Vec<String> = order.iter().map(|&i| g.weight(i).to_string()).collect();
    out.push_str(&format!("weights: {}\n", ws.join(" ")));
    out.push_str(&format!(
        "order: {}\n",
        match p.order() {
            WordOrder::Deglex => "deglex",
            WordOrder::Wdeglex => "wdeglex",
        }
    ));
    let rs: Vec<String> = p.relations().iter().map(|r| r.to_string()).collect();
    out.push_str(&format!("relations: {}\n", rs.join(" ; ")));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDoc {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub checks: Vec<Check>,
    pub data: Value,
    pub elapsed_ms: u64,
}

impl ReportDoc {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "INCONCLUSIVE",
            };
            if c.detail.is_empty() {
                out.push_str(&format!("{tag} {}\n", c.name));
            } else {
                out.push_str(&format!("{tag} {} ({})\n", c.name, c.detail));
            }
        }
        let pass = self.checks.iter().filter(|c| c.passed()).count();
        out.push_str(&format!("{pass}/{} checks passed\n", self.checks.len()));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "ncdef", version, about = "Exact noncommutative deformation algebra toolkit")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub report: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Inconclusive derivations do not fail the exit code.
    #[arg(long, global = true)]
    pub report_only: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Built-in algebras.
    Zoo {
        #[command(subcommand)]
        family: ZooCmd,
    },
    /// Complete a presentation file and report its quotient.
    Gb(GbArgs),
    /// Matrix factorization checks.
    Matfac {
        #[command(subcommand)]
        action: MatfacCmd,
    },
    /// Splitting-type cohomology and presentation counts.
    Bundle(BundleArgs),
    /// Polynomial identities of the Laufer family.
    Identities {
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZooCmd {
    Laufer {
        #[arg(long)]
        n: u32,
        /// Comma list of rationals or `sym`; defaults to all zero.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        max_degree: Option<u32>,
        /// Also run the specialization check.
        #[arg(long)]
        verify: bool,
    },
    Karmazyn {
        #[arg(long)]
        length: u32,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    Universal {
        #[arg(long)]
        max_degree: Option<u32>,
    },
    Scheme,
    Table {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_degree: Option<u32>,
    },
}

#[derive(Debug, Args)]
pub struct GbArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Semicolon-separated elements to test for membership in the ideal.
    #[arg(long)]
    pub claims: Option<String>,
    #[arg(long)]
    pub max_degree: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum MatfacCmd {
    VerifyAll,
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    /// Comma list of line-bundle degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub degrees: Option<String>,
    /// Use the normal bundle for this contraction length.
    #[arg(long)]
    pub length: Option<u32>,
    /// Include expected generator and relation counts.
    #[arg(long)]
    pub counts: bool,
}

fn max_degree(flag: Option<u32>, default: u32) -> Result<u32, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(MAX_DEGREE_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{MAX_DEGREE_ENV}='{v}' is not a degree"))),
        Err(_) => Ok(default),
    }
}

pub fn parse_lambda(text: &str) -> Result<Vec<Lambda>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            if t == "sym" {
                Ok(Lambda::Symbolic)
            } else {
                parse_q(t).map(Lambda::Value).ok_or_else(|| CliError::Usage(format!("bad lambda entry '{t}'")))
            }
        })
        .collect()
}

fn dim_json(s: &DimStatus) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn quotient_json(p: &Presentation, r: &QuotientReport) -> Value {
    json!({
        "status": dim_json(&r.status),
        "basis": r.basis.iter().map(|w| w.render(p.gens())).collect::<Vec<_>>(),
        "graded_dims": r.graded_dims,
        "weight_list": r.weight_list,
        "basis_counts": r.basis_counts,
        "trunc": r.trunc,
        "rule_count": r.rule_count,
    })
}

fn dim_check(r: &QuotientReport) -> Check {
    match &r.status {
        DimStatus::Finite { dim, certified_at } => {
            Check::new("dimension certified", Status::Pass, format!("dim {dim} at N={certified_at}"))
        }
        DimStatus::NotFiniteUpTo { n } => {
            Check::new("dimension certified", Status::Inconclusive, format!("not finite up to {n}"))
        }
    }
}

fn run_zoo(family: &ZooCmd) -> Result<(Vec<Check>, Value), CliError> {
    match family {
        ZooCmd::Laufer { n, lambda, max_degree: md, verify } => {
            let lam = match lambda {
                Some(t) => parse_lambda(t)?,
                None => vec![Lambda::Value(Q::from_integer(0.into())); 2 * *n as usize],
            };
            let p = zoo::laufer_presentation_with(*n, &lam)?;
            let trunc = max_degree(*md, zoo::laufer_default_max(*n))?;
            let mut checks = Vec::new();
            let qc = quadratic_classify(p.relations());
            checks.push(Check::from_bool(
                "quadratic parts symmetric",
                qc.symmetric_span == 2 && qc.alternating_span == 0,
                format!("sym {} alt {}", qc.symmetric_span, qc.alternating_span),
            ));
            let mut data = json!({ "presentation": presentation_render(&p) });
            if lam.iter().all(|l| *l != Lambda::Symbolic) {
                let r = quotient_report(&p, trunc)?;
                checks.push(dim_check(&r));
                data["quotient"] = quotient_json(&p, &r);
                if *verify {
                    let vals: Vec<Q> = lam
                        .iter()
                        .map(|l| match l {
                            Lambda::Value(v) => v.clone(),
                            Lambda::Symbolic => unreachable!(),
                        })
                        .collect();
                    checks.extend(zoo::laufer_specialization_check(*n, &vals, trunc.max(8))?);
                }
            }
            Ok((checks, data))
        }
        ZooCmd::Karmazyn { length, verify, max_degree: md } => {
            let trunc = max_degree(*md, 10)?;
            let p = zoo::karmazyn_contraction_presentation(*length)?;
            let mut data = json!({ "presentation": presentation_render(&p) });
            if *length == 1 || !*verify {
                if *length == 1 {
                    let r = quotient_report(&p, trunc)?;
                    data["quotient"] = quotient_json(&p, &r);
                    return Ok((vec![dim_check(&r)], data));
                }
                return Ok((vec![], data));
            }
            let rep = zoo::verify_higher_length(*length, trunc)?;
            data["typo_mismatch"] = json!(rep.typo_mismatch);
            data["forward"] = rep
                .forward
                .iter()
                .map(|c| {
                    json!({
                        "claim": c.name,
                        "readings": c.readings.iter().map(|r| json!({
                            "label": r.label,
                            "certified": r.status == ClaimStatus::CertifiedZero,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok((rep.checks(), data))
        }
        ZooCmd::Universal { max_degree: md } => {
            let trunc = max_degree(*md, 8)?;
            let p = zoo::length2_claimed_presentation();
            Ok((zoo::length2_universal_suite(trunc)?, json!({ "presentation": presentation_render(&p) })))
        }
        ZooCmd::Scheme => {
            let p = zoo::length2_scheme_presentation();
            Ok((vec![], json!({ "presentation": presentation_render(&p) })))
        }
        ZooCmd::Table { n, max_degree: md } => {
            let trunc = max_degree(*md, zoo::laufer_default_max(*n))?;
            let t = zoo::invariant_table(*n, trunc)?;
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "dim": dim_json(&r.dim),
                        "ab_dim": r.ab_dim.as_ref().map(dim_json),
                        "graded_dims": r.graded_dims,
                        "weight_list": r.weight_list,
                        "center_dim": r.center_dim,
                        "symmetric_span": r.symmetric_span,
                        "alternating_span": r.alternating_span,
                    })
                })
                .collect();
            Ok((t.checks, json!({ "rows": rows })))
        }
    }
}

fn run_gb(a: &GbArgs) -> Result<(Vec<Check>, Value), CliError> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.input.display())))?;
    let p = presentation_parse(&text)?;
    let trunc = max_degree(a.max_degree, 20)?;
    let mut checks = Vec::new();
    let mut data = json!({ "presentation": presentation_render(&p) });
    match quotient_report(&p, trunc) {
        Ok(r) => {
            checks.push(dim_check(&r));
            data["quotient"] = quotient_json(&p, &r);
        }
        Err(GbError::DimensionUndefined { params, graded_dims }) => {
            checks.push(Check::new(
                "dimension certified",
                Status::Inconclusive,
                format!("free central parameters {}", params.join(" ")),
            ));
            data["graded_dims"] = json!(graded_dims);
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(cs) = &a.claims {
        let mut claims = Vec::new();
        for (k, t) in cs.split(';').filter(|t| !t.trim().is_empty()).enumerate() {
            claims.push((t.trim().to_string(), NcPoly::parse_at(t.trim(), p.gens(), 1, k + 1).map_err(|e| CliError::Usage(e.to_string()))?));
        }
        let polys: Vec<NcPoly> = claims.iter().map(|(_, f)| f.clone()).collect();
        for ((t, _), r) in claims.iter().zip(derive_check(&p, &polys, trunc)?) {
            let (status, detail) = match r.status {
                ClaimStatus::CertifiedZero => (Status::Pass, format!("{} certificate terms", r.certificate.len())),
                ClaimStatus::InconclusiveAt { n } => (Status::Inconclusive, format!("residual {} at N={n}", r.residual)),
            };
            checks.push(Check::new(format!("claim {t}"), status, detail));
        }
    }
    Ok((checks, data))
}

fn run_bundle(a: &BundleArgs) -> Result<(Vec<Check>, Value), CliError> {
    let s = match (&a.degrees, a.length) {
        (Some(d), None) => {
            let ds: Result<Vec<i64>, _> = d.split(',').map(|t| t.trim().parse::<i64>()).collect();
            SplittingType::new(ds.map_err(|_| CliError::Usage(format!("bad degree list '{d}'")))?)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, Some(l)) => normal_bundle_for_length(l).ok_or_else(|| CliError::Usage(format!("length {l} not in 1..=6")))?,
        _ => return Err(CliError::Usage("give exactly one of --degrees or --length".into())),
    };
    let (h0, h1) = cohomology_dims(&s);
    let mut data = json!({ "degrees": s.degrees(), "h0": h0, "h1": h1 });
    if let Ok(w) = wedge2(&s) {
        let (w0, w1) = cohomology_dims(&w);
        data["wedge2"] = json!({ "degrees": w.degrees(), "h0": w0, "h1": w1 });
    }
    if a.counts {
        let c = expected_presentation_counts(&s);
        data["counts"] = json!({
            "generators": c.generators,
            "relations": c.relations,
            "quadratic_relations": c.quadratic_relations,
        });
    }
    Ok((vec![], data))
}

fn dispatch(cli: &Cli) -> Result<(Vec<Check>, Value), CliError> {
    match &cli.cmd {
        Cmd::Zoo { family } => run_zoo(family),
        Cmd::Gb(a) => run_gb(a),
        Cmd::Matfac { action: MatfacCmd::VerifyAll } => {
            let f = matfac::f_poly();
            let mut checks =
                vec![Check::from_bool("phi psi = psi phi = F I", matfac::mf_verify(&matfac::phi(), &matfac::psi(), &f), "")];
            checks.extend(matfac::generator_identity_suite());
            Ok((checks, json!({})))
        }
        Cmd::Bundle(a) => run_bundle(a),
        Cmd::Identities { n } => {
            if *n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            Ok((matfac::polynomial_identity_suite(*n), json!({})))
        }
    }
}

/// Outcome of one invocation: exit code, rendered report (if any) and error text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs a full argument vector (including the program name).
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return RunOutput { code, stdout: if code == 0 { e.to_string() } else { String::new() }, stderr: if code == 2 { e.to_string() } else { String::new() } };
        }
    };
    let start = Instant::now();
    let (checks, data) = match dispatch(&cli) {
        Ok(x) => x,
        Err(e) => return RunOutput { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let failed = checks.iter().any(|c| match c.status {
        Status::Pass => false,
        Status::Fail => true,
        Status::Inconclusive => !cli.report_only,
    });
    let doc = ReportDoc {
        tool: "ncdef",
        version: env!("CARGO_PKG_VERSION"),
        command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        checks,
        data,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    let body = match cli.report {
        Format::Json => doc.to_json(),
        Format::Text => doc.to_text(),
    };
    let code = if failed { 1 } else { 0 };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &body) {
            return RunOutput { code: 2, stdout: String::new(), stderr: format!("error: cannot write {}: {e}\n", path.display()) };
        }
        return RunOutput { code, stdout: String::new(), stderr: String::new() };
    }
    RunOutput { code, stdout: body, stderr: String::new() }
}
