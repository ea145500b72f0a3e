//! The `coxcanon` command line: tables, invariant suites, classification
//! runs, inversion checks and the P-kernel report.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails
//! (the report carries witnesses), 2 on usage or input errors.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classify::{classification_run, default_systems, ClassReport};
use crate::coxeter::CoxeterSystem;
use crate::error::{Error, Result};
use crate::export::{Format, TableExport};
use crate::group::CoxeterGroup;
use crate::hecke::classical::kl_polynomials;
use crate::hecke::{HeckeAlgebra, ParamMode, TableLabel};
use crate::ivmodules::checks::{
    invariant_suite, inversion_check, recurrence_check, structural_suite, CheckOutcome, Report,
};
use crate::ivmodules::{all_blocks, bar_module, canonical_table, AlgebraMode, ModuleBasis, StructureMatrix, Which};
use crate::pkernel::{bar_from_kernel, is_totally_acceptable, kernel_from_bar, kls_function, Grading, GradingKind};

/// Environment variable bounding the word-reduction cache.
pub const CACHE_ENV: &str = "COXCANON_REDUCE_CACHE";

#[derive(Debug, Parser)]
#[command(name = "coxcanon", version, about = "Exact canonical bases for Coxeter systems and twisted involutions")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit an h, pi, pi' or iota table.
    Table(TableArgs),
    /// Run the invariant suite on every requested block.
    Verify(VerifyArgs),
    /// Search for pre-canonical structures and group them into classes.
    Classify(ClassifyArgs),
    /// Check the inversion formula for pi, pi' and iota.
    Invert(SystemArgs),
    /// Kernel roundtrip and KLS report.
    Pkernel(PkernelArgs),
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Coxeter system, e.g. A3, B3, I2(5), A2xA2 or an explicit JSON matrix.
    #[arg(long)]
    pub system: String,
    /// Largest word length explored when building the group.
    #[arg(long, default_value_t = crate::coxeter::DEFAULT_WORD_CAP, value_parser = positive)]
    pub max_length: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// json, csv or text.
    #[arg(long, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Diagram automorphism: `id` or a permutation such as `[1,0]`.
    #[arg(long, default_value = "id")]
    pub theta: String,
    /// h, pi, pi_prime or iota.
    #[arg(long)]
    pub basis: TableLabel,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// `all`, `id` or a permutation.
    #[arg(long, default_value = "all")]
    pub theta: String,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// hi, h2i or hw.
    #[arg(long)]
    pub mode: AlgebraMode,
    /// Comma-separated systems; defaults to I2(2..6), A3, B3, H3.
    #[arg(long, value_delimiter = ',')]
    pub systems: Vec<String>,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PkernelArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// l or rho.
    #[arg(long, default_value = "l")]
    pub grading: GradingKind,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn parse_system(spec: &str) -> Result<CoxeterSystem> {
    let sys = CoxeterSystem::parse(spec)?;
    match std::env::var(CACHE_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| Error::Parse(format!("{CACHE_ENV}={v:?} is not a size")))?;
            Ok(sys.with_cache_limit(n))
        }
        Err(_) => Ok(sys),
    }
}

fn build_group(args: &SystemArgs) -> Result<Arc<CoxeterGroup>> {
    Ok(Arc::new(CoxeterGroup::finite(&parse_system(&args.system)?, args.max_length)?))
}

fn select_blocks(group: &Arc<CoxeterGroup>, theta: &str) -> Result<Vec<ModuleBasis>> {
    if theta.eq_ignore_ascii_case("all") {
        return all_blocks(group);
    }
    let t = group.system().parse_automorphism(theta)?;
    Ok(vec![ModuleBasis::involutions(group.clone(), &t)?])
}

/// The result of a subcommand: serialized output and whether its checks passed.
struct Outcome {
    body: String,
    passed: bool,
    failures: Vec<String>,
}

fn render_reports<T: Serialize>(value: &T, reports: &[Report], format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string())),
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                for c in &r.checks {
                    let status = if c.passed() { "pass" } else { "FAIL" };
                    out.push_str(&format!("{status}  {} theta {}  {}  ({} checked)\n", r.system, r.theta, c.name, c.checked));
                }
                for c in &r.observations {
                    out.push_str(&format!("note  {} theta {}  {}  {} of {} hold\n", r.system, r.theta, c.name, c.checked - c.failed, c.checked));
                }
            }
            Ok(out)
        }
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(Vec::new());
            wr.write_record(["system", "theta", "check", "kind", "checked", "failed"]).map_err(|e| Error::Internal(e.to_string()))?;
            for r in reports {
                for (kind, list) in [("check", &r.checks), ("observation", &r.observations)] {
                    for c in list {
                        wr.write_record([&r.system, &r.theta, &c.name, kind, &c.checked.to_string(), &c.failed.to_string()])
                            .map_err(|e| Error::Internal(e.to_string()))?;
                    }
                }
            }
            String::from_utf8(wr.into_inner().map_err(|e| Error::Internal(e.to_string()))?).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

fn report_outcome(reports: Vec<Report>, format: Format) -> Result<Outcome> {
    let failures = reports
        .iter()
        .flat_map(|r| r.checks.iter().filter(|c| !c.passed()).map(move |c| (r, c)))
        .map(|(r, c)| serde_json::json!({"system": r.system, "theta": r.theta, "check": c.name, "witnesses": c.witnesses}).to_string())
        .collect::<Vec<_>>();
    Ok(Outcome { body: render_reports(&reports, &reports, format)?, passed: failures.is_empty(), failures })
}

fn table(args: &TableArgs) -> Result<Outcome> {
    let group = build_group(&args.system)?;
    let (basis, table) = match args.basis {
        TableLabel::H => {
            let b = ModuleBasis::regular(group.clone())?;
            let t = HeckeAlgebra::new(&group, ParamMode::V)?.kl_table()?;
            (b, t)
        }
        label => {
            let which = Which::from_label(label).ok_or_else(|| Error::Parse(format!("no table for basis {}", label.as_str())))?;
            let b = select_blocks(&group, &args.theta)?.remove(0);
            let t = canonical_table(&b, which)?;
            (b, t)
        }
    };
    let body = TableExport::new(&basis, &table).render(args.system.output.format)?;
    Ok(Outcome { body, passed: true, failures: Vec::new() })
}

/// Every check `verify` runs on a group: structural properties of `H`
/// and, on each requested block, of `L`, `L′`, `I`, then the invariant
/// suite and the recurrences.
pub fn verify_reports(group: &Arc<CoxeterGroup>, theta: &str) -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    let regular = ModuleBasis::regular(group.clone())?;
    let hecke = HeckeAlgebra::new(group, ParamMode::V)?;
    let bar = hecke.bar_matrix();
    let mut h = structural_suite(&regular, &StructureMatrix::kl(), &bar, TableLabel::H)?;
    let mut letterwise = CheckOutcome::new("letterwise bar agrees");
    for w in 0..group.len() {
        letterwise.record(hecke.bar_standard_letterwise(w).support() == bar.column(w), || regular.label(w));
    }
    h.checks.push(letterwise);
    for c in &mut h.checks {
        c.name = format!("h {}", c.name);
    }
    reports.push(h);
    let kl = hecke.kl_table()?;
    for basis in select_blocks(group, theta)? {
        for which in Which::ALL {
            let mut r = structural_suite(&basis, &which.structure(), &bar_module(&basis, which)?, which.label())?;
            for c in &mut r.checks {
                c.name = format!("{} {}", which.label().as_str(), c.name);
            }
            reports.push(r);
        }
        let tables = crate::ivmodules::checks::BlockTables::new(basis.clone(), &kl)?;
        reports.push(invariant_suite(&tables));
        reports.push(recurrence_check(&basis)?);
    }
    Ok(reports)
}

fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let group = build_group(&args.system)?;
    report_outcome(verify_reports(&group, &args.theta)?, args.system.output.format)
}

fn invert(args: &SystemArgs) -> Result<Outcome> {
    let group = build_group(args)?;
    let checks = Which::ALL.iter().map(|&w| inversion_check(w, &group)).collect::<Result<Vec<_>>>()?;
    let report = Report { system: group.system().name(), theta: "all".into(), checks, observations: Vec::new() };
    report_outcome(vec![report], args.output.format)
}

/// Kernel roundtrip and KLS checks for `H` and, per block, `L` and `L′`;
/// whether `ι` has a kernel is reported as an observation.
pub fn pkernel_report(group: &Arc<CoxeterGroup>, kind: GradingKind) -> Result<Report> {
    let regular = ModuleBasis::regular(group.clone())?;
    let r = Grading::length(&regular);
    let bar = HeckeAlgebra::new(group, ParamMode::V)?.bar_matrix();
    let mut roundtrip = CheckOutcome::new("H kernel roundtrip");
    let mut kls = CheckOutcome::new("KLS equals KL polynomials");
    let mut acceptable = CheckOutcome::new("KLS totally acceptable");
    let k = kernel_from_bar(&bar, regular.poset(), &r)?;
    roundtrip.record(bar_from_kernel(&k, &r)? == bar, || "H".into());
    let gamma = kls_function(&k, &r)?;
    let p = kl_polynomials(group)?;
    for y in 0..regular.len() {
        for x in regular.poset().lower(y) {
            kls.record(gamma.get(x, y) == p[y].get(x), || format!("({}, {})", regular.label(x), regular.label(y)));
        }
    }
    acceptable.record(is_totally_acceptable(&k, &gamma, &r)?, || "H".into());
    let mut checks = vec![roundtrip, kls, acceptable];
    let mut observations = Vec::new();
    for which in Which::ALL {
        let mut c = CheckOutcome::new(format!("{} has a kernel ({:?})", which.label().as_str(), kind));
        for b in all_blocks(group)? {
            let bar = bar_module(&b, which)?;
            let g = kind.of(&b);
            let ok = kernel_from_bar(&bar, b.poset(), &g).and_then(|k| Ok(bar_from_kernel(&k, &g)? == bar));
            c.record(matches!(ok, Ok(true)), || format!("theta {}", b.theta().expect("block")));
        }
        if which != Which::I && kind == GradingKind::Length {
            checks.push(c);
        } else {
            observations.push(c);
        }
    }
    Ok(Report { system: group.system().name(), theta: "all".into(), checks, observations })
}

fn pkernel(args: &PkernelArgs) -> Result<Outcome> {
    let group = build_group(&args.system)?;
    report_outcome(vec![pkernel_report(&group, args.grading)?], args.system.output.format)
}

fn classify(args: &ClassifyArgs) -> Result<Outcome> {
    let systems = if args.systems.is_empty() {
        default_systems()
    } else {
        args.systems.iter().map(|s| parse_system(s)).collect::<Result<Vec<_>>>()?
    };
    let report = classification_run(args.mode, &systems)?;
    let named: Vec<StructureMatrix> = match args.mode {
        AlgebraMode::HOnI => vec![
            StructureMatrix::gamma(),
            StructureMatrix::gamma_prime(),
            StructureMatrix::gamma_double_prime(),
            StructureMatrix::gamma_triple_prime(),
        ],
        AlgebraMode::H2OnI => vec![
            StructureMatrix::delta(),
            StructureMatrix::delta_prime(),
            StructureMatrix::delta_double_prime(),
            StructureMatrix::delta_triple_prime(),
        ],
        AlgebraMode::HOnW => vec![StructureMatrix::kl()],
    };
    let failures: Vec<String> = named
        .iter()
        .filter(|g| !report.survivors.iter().any(|c| &c.gamma == *g))
        .map(|g| serde_json::json!({"check": "named structure survives", "structure": g.to_string()}).to_string())
        .collect();
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Internal(e.to_string()))?;
    if let Some(path) = &args.report {
        std::fs::write(path, &json).map_err(|e| Error::Internal(format!("{}: {e}", path.display())))?;
    }
    let body = match args.output.format {
        Format::Json => json,
        _ => class_summary(&report),
    };
    Ok(Outcome { body, passed: failures.is_empty(), failures })
}

fn class_summary(r: &ClassReport) -> String {
    let mut out = format!(
        "mode {}: {} candidates, {} survivors, {} classes on {}\n",
        r.mode.as_str(),
        r.candidates,
        r.survivors.len(),
        r.classes.len(),
        r.systems.join(",")
    );
    for c in &r.classes {
        out.push_str(&format!("class {} ({} members): {}\n", c.representative.provenance, c.members.len(), c.representative.gamma));
    }
    out
}

fn write_output(path: Option<&PathBuf>, body: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Internal(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).and_then(|_| out.flush()).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidSystem(_)
        | Error::InvalidAutomorphism(_)
        | Error::InvalidGenerator { .. }
        | Error::WordTooLong { .. }
        | Error::InfiniteOrTooLarge { .. } => 2,
        _ => 1,
    }
}

/// Run a parsed configuration and return the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let (result, path) = match &config.command {
        Command::Table(a) => (table(a), a.system.output.output.as_ref()),
        Command::Verify(a) => (verify(a), a.system.output.output.as_ref()),
        Command::Classify(a) => (classify(a), a.output.output.as_ref()),
        Command::Invert(a) => (invert(a), a.output.output.as_ref()),
        Command::Pkernel(a) => (pkernel(a), a.system.output.output.as_ref()),
    };
    match result.and_then(|o| write_output(path, &o.body).map(|_| o)) {
        Ok(o) => {
            for f in &o.failures {
                eprintln!("{f}");
            }
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Parse arguments and run; usage errors exit with 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(c) => run(&c),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        std::env::temp_dir().join(format!("coxcanon-cli-{}-{name}", std::process::id()))
    }

    #[test]
    fn table_a1_iota() {
        let out = tmp("iota.json");
        let code = main_with_args(["coxcanon", "table", "--system", "A1", "--theta", "id", "--basis", "iota", "--output", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert!(v["entries"].as_array().unwrap().iter().any(|e| e["poly"] == serde_json::json!({"-1": 1})));
    }

    #[test]
    fn verify_a2_passes() {
        let out = tmp("verify.json");
        assert_eq!(main_with_args(["coxcanon", "verify", "--system", "A2", "--theta", "id", "--output", out.to_str().unwrap()]), 0);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(main_with_args(["coxcanon", "table", "--system", "Q7", "--basis", "h"]), 2);
        assert_eq!(main_with_args(["coxcanon", "table", "--system", "A2"]), 2);
        assert_eq!(main_with_args(["coxcanon", "frobnicate"]), 2);
        assert_eq!(main_with_args(["coxcanon", "verify", "--system", "A2", "--max-length", "0"]), 2);
    }

    #[test]
    fn invert_and_pkernel_pass() {
        for cmd in ["invert", "pkernel"] {
            let out = tmp(cmd);
            assert_eq!(main_with_args(["coxcanon", cmd, "--system", "B2", "--output", out.to_str().unwrap()]), 0, "{cmd}");
        }
    }
}
