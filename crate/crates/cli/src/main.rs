use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use torsionlab::corpus::{bundled_derivation_file, bundled_ring, ring_key, ZERO_DERIVATION};
use torsionlab::derivext::{check_agreement, enumerate_extensions, extend_derivation, AgreementReport, Strategy};
use torsionlab::io::{parse_json, parse_ring, ring_iso_hint, to_json, DerivationFile, ExtensionReport, FilterSpec, ModuleSpecFile, QuotientReport, SymmetricSpec};
use torsionlab::quotient::{module_of_quotients, ring_of_quotients};
use torsionlab::reports::{analyze, census};
use torsionlab::suites::{run_suites, suite, Lab, SUITES};
use torsionlab::symmetric::{
    check_symmetric_agreement, enumerate_symmetric_filters, extend_symmetric_derivation, is_symmetric_differential, qsigma_max_check,
    symmetric_perfect, symmetric_q_kernel, symmetric_quotient, symmetric_total, NamedSymmetric, SymmetricContext, SymmetricFilter,
};
use torsionlab::{check_module_derivation_with, check_ring_derivation, Derivation, Error, FiniteModule, RingRef, Side};

#[derive(Parser)]
#[command(name = "torsionlab", version, about = "Torsion theories, rings of quotients and derivation extension over finite rings")]
struct Cli {
    /// Add wall-clock milliseconds to suite reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RingArg {
    /// Ring JSON file, or a bundled corpus name (z4, z6, z2xz2, f4, dual, t2f2).
    #[arg(long)]
    ring: String,
}

#[derive(Args)]
struct DerivationArgs {
    /// Ring derivation JSON file, or the stem of a bundled one.
    #[arg(long)]
    derivation: String,
    /// Module JSON file; defaults to R itself.
    #[arg(long)]
    module: Option<String>,
    /// Module derivation over the ring derivation; defaults to the ring derivation on R.
    #[arg(long)]
    module_derivation: Option<String>,
}

#[derive(Args)]
struct PairArgs {
    /// Symmetric filter spec: sym-lambek, sym-goldie, sym-classical, sym-trivial or {"left":..,"right":..}.
    #[arg(long, conflicts_with_all = ["left", "right"])]
    filter: Option<String>,
    /// Left filter spec (default trivial).
    #[arg(long)]
    left: Option<String>,
    /// Right filter spec (default trivial).
    #[arg(long)]
    right: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ideals, derivations and named filters.
    Analyze(RingArg),
    /// Module (default R) of quotients for a right filter.
    Quotient {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        filter: String,
        #[arg(long)]
        module: Option<String>,
    },
    /// Extend a derivation to the module of quotients.
    Extend {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        filter: String,
        #[command(flatten)]
        der: DerivationArgs,
        #[arg(long, default_value = "auto")]
        strategy: String,
    },
    /// Agreement of extensions over nested filters.
    Agree {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        filter1: String,
        #[arg(long)]
        filter2: String,
        #[command(flatten)]
        der: DerivationArgs,
    },
    /// Every right filter against every derivation.
    Census(RingArg),
    /// Run theorem suites; `--suite` with no names selects none.
    Verify {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, num_args = 0..)]
        suite: Option<Vec<String>>,
    },
    /// The same verbs for symmetric filters over R tensor R-op.
    #[command(subcommand)]
    Symmetric(SymCmd),
}

#[derive(Subcommand)]
enum SymCmd {
    Analyze(RingArg),
    Quotient {
        #[command(flatten)]
        ring: RingArg,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        module: Option<String>,
    },
    Extend {
        #[command(flatten)]
        ring: RingArg,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        der: DerivationArgs,
        #[arg(long, default_value = "auto")]
        strategy: String,
    },
    Agree {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        filter1: String,
        #[arg(long)]
        filter2: String,
        #[command(flatten)]
        der: DerivationArgs,
    },
}

enum Fail {
    Usage(String),
    Math(Value),
}

type Run<T> = Result<T, Fail>;

fn usage(e: impl ToString) -> Fail {
    Fail::Usage(e.to_string())
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::MalformedSpec(_) => "MalformedSpec",
        Error::AxiomViolation { .. } => "AxiomViolation",
        Error::MissingAction(_) => "MissingAction",
        Error::NotAnIdeal(_) => "NotAnIdeal",
        Error::TooManyIdeals { .. } => "TooManyIdeals",
        Error::NotOre { .. } => "NotOre",
        Error::NotNested => "NotNested",
        Error::InternalInconsistency(_) => "InternalInconsistency",
        Error::CriteriaDisagree(_) => "CriteriaDisagree",
        Error::TorsionNotPreserved { .. } => "TorsionNotPreserved",
        Error::NoExtension => "NoExtension",
        Error::FormulaInapplicable(_) => "FormulaInapplicable",
        Error::SearchSpaceTooLarge { .. } => "SearchSpaceTooLarge",
        Error::ExtensionMissing(_) => "ExtensionMissing",
        Error::EquivalenceBroken(_) => "EquivalenceBroken",
        Error::IllDefined(_) => "IllDefined",
        Error::LawViolation { .. } => "LawViolation",
        Error::IncompatibleActions(_) => "IncompatibleActions",
    }
}

/// Errors raised while computing: input-shaped ones are usage errors, the rest mathematical failures.
fn computed(e: Error) -> Fail {
    match e {
        Error::MalformedSpec(_)
        | Error::NotAnIdeal(_)
        | Error::MissingAction(_)
        | Error::TooManyIdeals { .. }
        | Error::SearchSpaceTooLarge { .. }
        | Error::NotNested
        | Error::FormulaInapplicable(_)
        | Error::IncompatibleActions(_) => usage(e),
        other => Fail::Math(json!({ "error": error_kind(&other), "message": other.to_string() })),
    }
}

trait OrFail<T> {
    fn input(self) -> Run<T>;
    fn math(self) -> Run<T>;
}

impl<T> OrFail<T> for torsionlab::Result<T> {
    fn input(self) -> Run<T> {
        self.map_err(usage)
    }
    fn math(self) -> Run<T> {
        self.map_err(computed)
    }
}

struct Loaded {
    key: Option<&'static str>,
    ring: RingRef,
}

fn read(path: &str) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
}

fn load_ring(arg: &str) -> Run<Loaded> {
    if Path::new(arg).is_file() {
        return Ok(Loaded { key: ring_key(arg), ring: parse_ring(&read(arg)?, arg).input()? });
    }
    match ring_key(arg) {
        Some(key) => Ok(Loaded { key: Some(key), ring: bundled_ring(key).input()? }),
        None => Err(usage(format!("{arg}: no such file or bundled ring"))),
    }
}

fn derivation_text(l: &Loaded, arg: &str) -> Run<String> {
    if Path::new(arg).is_file() {
        return read(arg);
    }
    let stem = Path::new(arg).file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    if let Some(text) = l.key.and_then(|k| bundled_derivation_file(k, stem)) {
        return Ok(text.to_string());
    }
    if stem == "zero" {
        return Ok(ZERO_DERIVATION.to_string());
    }
    Err(usage(format!("{arg}: no such file or bundled derivation")))
}

fn load_derivation(l: &Loaded, arg: &str) -> Run<Derivation> {
    let file: DerivationFile = parse_json(&derivation_text(l, arg)?, arg).input()?;
    let d = file.derivation_on(&l.ring).input()?;
    check_ring_derivation(&l.ring, &d.table).map_err(|e| usage(format!("{arg}: {e}")))?;
    Ok(d)
}

fn load_module(l: &Loaded, arg: Option<&str>, both: bool) -> Run<FiniteModule> {
    match arg {
        None if both => Ok(FiniteModule::regular_bimodule(&l.ring)),
        None => Ok(FiniteModule::regular_right(&l.ring)),
        Some(path) => {
            let spec: ModuleSpecFile = parse_json(&read(path)?, path).input()?;
            let m = spec.to_module(&l.ring).map_err(|e| usage(format!("{path}: {e}")))?;
            if both && (m.left().is_none() || m.right().is_none()) {
                return Err(usage(format!("{path}: a bimodule needs both actions")));
            }
            if !both && m.right().is_none() {
                return Err(usage(format!("{path}: a right module needs a right action")));
            }
            Ok(m)
        }
    }
}

/// Module, ring derivation and module derivation for extension commands.
fn load_case(l: &Loaded, der: &DerivationArgs, both: bool) -> Run<(FiniteModule, Derivation, Vec<usize>)> {
    let delta = load_derivation(l, &der.derivation)?;
    let m = load_module(l, der.module.as_deref(), both)?;
    let d = match &der.module_derivation {
        Some(arg) => {
            let file: DerivationFile = parse_json(&derivation_text(l, arg)?, arg).input()?;
            file.table_for(m.size(), m.zero()).input()?
        }
        None if der.module.is_none() => delta.table.clone(),
        None => return Err(usage("--module needs --module-derivation")),
    };
    let left = both.then_some(delta.table.as_slice());
    check_module_derivation_with(&m, Some(&delta.table), left, &d).map_err(|e| usage(format!("module derivation: {e}")))?;
    Ok((m, delta, d))
}

fn filter_text(arg: &str) -> Run<String> {
    if arg.ends_with(".json") && Path::new(arg).is_file() {
        read(arg)
    } else {
        Ok(arg.to_string())
    }
}

fn load_filter(l: &Loaded, arg: &str) -> Run<torsionlab::gabriel::GabrielFilter> {
    let spec = FilterSpec::parse(&filter_text(arg)?).input()?;
    let f = spec.build(&l.ring, Side::Right).input()?;
    if f.side() != Side::Right {
        return Err(usage("quotients are computed for right filters"));
    }
    Ok(f)
}

fn load_pair(ctx: &std::sync::Arc<SymmetricContext>, p: &PairArgs) -> Run<SymmetricFilter> {
    let spec = match &p.filter {
        Some(s) => SymmetricSpec::parse(&filter_text(s)?).input()?,
        None => {
            let one = |s: &Option<String>| -> Run<FilterSpec> { FilterSpec::parse(&filter_text(s.as_deref().unwrap_or("trivial"))?).input() };
            SymmetricSpec::Pair { left: one(&p.left)?, right: one(&p.right)? }
        }
    };
    spec.build(ctx).input()
}

fn load_symmetric(ctx: &std::sync::Arc<SymmetricContext>, arg: &str) -> Run<SymmetricFilter> {
    SymmetricSpec::parse(&filter_text(arg)?).input()?.build(ctx).input()
}

fn strategy(s: &str) -> Run<Strategy> {
    Strategy::parse(s).ok_or_else(|| usage(format!("unknown strategy `{s}` (auto, formula, search)")))
}

fn agreement_json(r: &AgreementReport) -> Value {
    json!({
        "agree": r.agree,
        "first_commutes": r.first_commutes,
        "second_commutes": r.second_commutes,
        "q12_intertwines": r.q12_intertwines,
        "q12_factors": r.q12_factors,
        "witness": r.witness,
        "first": r.first,
        "second": r.second,
        "q12": r.q12,
    })
}

/// Output lines and whether everything passed.
struct Outcome {
    lines: Vec<String>,
    ok: bool,
}

fn one(v: String) -> Outcome {
    Outcome { lines: vec![v], ok: true }
}

fn run(cli: Cli) -> Run<Outcome> {
    match cli.cmd {
        Cmd::Analyze(a) => {
            let l = load_ring(&a.ring)?;
            Ok(one(to_json(&analyze(&l.ring).math()?)))
        }
        Cmd::Census(a) => {
            let l = load_ring(&a.ring)?;
            Ok(one(to_json(&census(&l.ring).math()?)))
        }
        Cmd::Quotient { ring, filter, module } => {
            let l = load_ring(&ring.ring)?;
            let f = load_filter(&l, &filter)?;
            let m = load_module(&l, module.as_deref(), false)?;
            let qm = module_of_quotients(&f, &m).math()?;
            let hint = if module.is_none() { ring_iso_hint(ring_of_quotients(&f).math()?.ring()) } else { None };
            let report = QuotientReport {
                filter: FilterSpec::of(&f),
                min_ideal: f.min_ideal().members().to_vec(),
                carrier_size: qm.size(),
                ring_iso_hint: hint,
                q_kernel: qm.q_kernel().members().to_vec(),
            };
            Ok(one(to_json(&report)))
        }
        Cmd::Extend { ring, filter, der, strategy: s } => {
            let l = load_ring(&ring.ring)?;
            let f = load_filter(&l, &filter)?;
            let (m, delta, d) = load_case(&l, &der, false)?;
            let ext = extend_derivation(&f, &m, &delta.table, &d, strategy(&s)?).math()?;
            let count = enumerate_extensions(&f, &m, &delta.table, &d).math()?.len();
            let report = ExtensionReport { method: ext.method.as_str().into(), unique: count == 1, commutes: ext.commutes, table: ext.table };
            let ok = report.unique && report.commutes;
            Ok(Outcome { lines: vec![to_json(&report)], ok })
        }
        Cmd::Agree { ring, filter1, filter2, der } => {
            let l = load_ring(&ring.ring)?;
            let f1 = load_filter(&l, &filter1)?;
            let f2 = load_filter(&l, &filter2)?;
            let (m, delta, d) = load_case(&l, &der, false)?;
            let r = check_agreement(&f1, &f2, &m, &delta.table, &d).math()?;
            Ok(Outcome { lines: vec![agreement_json(&r).to_string()], ok: r.agree })
        }
        Cmd::Verify { ring, suite: names } => {
            let l = load_ring(&ring.ring)?;
            let defs = match names {
                None => SUITES.iter().collect(),
                Some(names) => names.iter().map(|n| suite(n).ok_or_else(|| usage(format!("unknown suite `{n}`")))).collect::<Run<Vec<_>>>()?,
            };
            if defs.is_empty() {
                return Ok(Outcome { lines: Vec::new(), ok: true });
            }
            let key = l.key.map(str::to_string).unwrap_or_else(|| l.ring.name().to_string());
            let lab = Lab::new(key, l.ring.clone()).math()?;
            let reports = run_suites(&lab, &defs, cli.timings);
            let ok = reports.iter().all(|r| r.passed());
            Ok(Outcome { lines: reports.iter().map(to_json).collect(), ok })
        }
        Cmd::Symmetric(s) => run_symmetric(s),
    }
}

fn pair_json(sf: &SymmetricFilter) -> Value {
    json!({
        "left": sf.left().min_ideal().members(),
        "right": sf.right().min_ideal().members(),
        "induced_min_ideal_size": sf.induced().min_ideal().len(),
    })
}

fn run_symmetric(cmd: SymCmd) -> Run<Outcome> {
    match cmd {
        SymCmd::Analyze(a) => {
            let l = load_ring(&a.ring)?;
            let ctx = SymmetricContext::shared(&l.ring).math()?;
            let ders = torsionlab::enumerate_derivations(&l.ring);
            let mut pairs = Vec::new();
            for sf in enumerate_symmetric_filters(&ctx).math()? {
                let perfect = symmetric_perfect(&sf).math()?;
                let diff = is_symmetric_differential(&sf, &ders, &[]).math()?;
                let names: Vec<&str> = NamedSymmetric::ALL
                    .into_iter()
                    .filter(|n| n.build(&ctx).map(|g| g == sf).unwrap_or(false))
                    .map(|n| n.as_str())
                    .collect();
                let mut v = pair_json(&sf);
                v["names"] = json!(names);
                v["faithful"] = json!(sf.is_faithful().math()?);
                v["perfect"] = json!(perfect.perfect);
                v["differential"] = json!(diff.differential);
                pairs.push(v);
            }
            let total = symmetric_total(&ctx).math()?;
            let qmax = qsigma_max_check(&ctx).math()?;
            let report = json!({
                "ring": l.ring.name(),
                "tensor_size": ctx.t().size(),
                "right_ideals_of_tensor": ctx.t_ideals().len(),
                "pairs": pairs,
                "qsigma_tot": total.filter.as_ref().map(pair_json),
                "qsigma_tot_size": total.ring.as_ref().map(|r| r.size()),
                "qsigma_max_size": qmax.qsigma_size,
                "qmax_size": qmax.qmax_size,
                "qsigma_max_characterized": qmax.matches,
            });
            let ok = qmax.matches;
            Ok(Outcome { lines: vec![report.to_string()], ok })
        }
        SymCmd::Quotient { ring, pair, module } => {
            let l = load_ring(&ring.ring)?;
            let ctx = SymmetricContext::shared(&l.ring).math()?;
            let sf = load_pair(&ctx, &pair)?;
            let m = load_module(&l, module.as_deref(), true)?;
            let sq = symmetric_quotient(&sf, &m).math()?;
            let hint = if module.is_none() { ring_iso_hint(torsionlab::symmetric::symmetric_ring(&sf).math()?.ring()) } else { None };
            let report = json!({
                "filter": SymmetricSpec::of(&sf),
                "induced_min_ideal": sf.induced().min_ideal().members(),
                "carrier_size": sq.size(),
                "ring_iso_hint": hint,
                "q_kernel": symmetric_q_kernel(&sq).members(),
            });
            Ok(one(report.to_string()))
        }
        SymCmd::Extend { ring, pair, der, strategy: s } => {
            let l = load_ring(&ring.ring)?;
            let ctx = SymmetricContext::shared(&l.ring).math()?;
            let sf = load_pair(&ctx, &pair)?;
            let (m, delta, d) = load_case(&l, &der, true)?;
            let ext = extend_symmetric_derivation(&sf, &m, &delta, &d, strategy(&s)?).math()?;
            let report = ExtensionReport { method: ext.method.as_str().into(), unique: ext.count == Some(1), commutes: ext.commutes, table: ext.table };
            let ok = report.unique && report.commutes;
            Ok(Outcome { lines: vec![to_json(&report)], ok })
        }
        SymCmd::Agree { ring, filter1, filter2, der } => {
            let l = load_ring(&ring.ring)?;
            let ctx = SymmetricContext::shared(&l.ring).math()?;
            let a = load_symmetric(&ctx, &filter1)?;
            let b = load_symmetric(&ctx, &filter2)?;
            let (m, delta, d) = load_case(&l, &der, true)?;
            let r = check_symmetric_agreement(&a, &b, &m, &delta, &d).math()?;
            Ok(Outcome { lines: vec![agreement_json(&r).to_string()], ok: r.agree })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = std::io::stdout().lock();
    match run(cli) {
        Ok(o) => {
            for line in &o.lines {
                let _ = writeln!(out, "{line}");
            }
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(Fail::Math(v)) => {
            let _ = writeln!(out, "{v}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("torsionlab: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes() {
        assert!(matches!(computed(Error::NoExtension), Fail::Math(v) if v["error"] == "NoExtension"));
        assert!(matches!(computed(Error::TorsionNotPreserved { element: 1, image: 2 }), Fail::Math(_)));
        assert!(matches!(computed(Error::NotNested), Fail::Usage(_)));
        assert!(matches!(computed(Error::TooManyIdeals { count: 40, bound: 16 }), Fail::Usage(_)));
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
