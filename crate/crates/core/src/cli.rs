//! Command-line front end. [`run`] returns the exit code and both output
//! streams so the binary stays a thin wrapper.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::abelian_base::{geometric_checkpoints, CountJob, CountKind, FundamentalDiscriminant, MAX_COUNT_BOUND};
use crate::checker::{full_report, scan, Existence, Family, RowOutcome};
use crate::dsl::{parse_atom_list, parse_instance, Instance};
use crate::error::Error;
use crate::invariants::{conjecture_report, BValue, Caps, ConjectureVerdict, Policy};
use crate::report::{
    preset, ConjectureDocument, CountDocument, FamilyFields, PresetsDocument, ReportDocument, ScanDocument, Timing,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_WITNESS: i32 = 3;

/// Bound on `|A|` and `|B|` in scans.
pub const SCAN_ORDER_LIMIT: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "malle", version, about = "Malle invariants and wreath-product hypothesis checks")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Omit timing so repeated runs are byte-identical.
    #[arg(long = "no-timing", global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CapArgs {
    /// Largest group order materialized.
    #[arg(long = "max-order", default_value_t = crate::group::DEFAULT_ORDER_CAP)]
    max_order: usize,
    /// Budget of lift subgroups examined for B.
    #[arg(long = "max-subgroups", default_value_t = crate::subgroups::DEFAULT_MAX_SUBGROUPS)]
    max_subgroups: usize,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps { order: self.max_order, max_subgroups: self.max_subgroups, ..Caps::default() }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PolicyArg {
    Full,
    TrivialCyclotomic,
    Both,
}

impl PolicyArg {
    fn policies(self) -> Vec<Policy> {
        match self {
            PolicyArg::Full => vec![Policy::Full],
            PolicyArg::TrivialCyclotomic => vec![Policy::TrivialCyclotomic],
            PolicyArg::Both => vec![Policy::Full, Policy::TrivialCyclotomic],
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExistenceArg {
    Yes,
    No,
    Unknown,
}

impl From<ExistenceArg> for Existence {
    fn from(e: ExistenceArg) -> Self {
        match e {
            ExistenceArg::Yes => Existence::Yes,
            ExistenceArg::No => Existence::No,
            ExistenceArg::Unknown => Existence::Unknown,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CountKindArg {
    Quadratic,
    V4Fixed,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full invariant report: a, b, B, verdicts, predicted growth.
    Invariants {
        /// Instance in the group-spec language, or a preset name.
        spec: String,
        #[arg(long, value_enum, default_value = "both")]
        policy: PolicyArg,
        /// Whether a G-extension is known to exist (used for nonsolvable G).
        #[arg(long = "has-extension", value_enum, default_value = "unknown")]
        has_extension: ExistenceArg,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Theorem and corollary applicability for a wreath instance.
    Check {
        spec: String,
        #[arg(long = "has-extension", value_enum, default_value = "unknown")]
        has_extension: ExistenceArg,
        #[arg(long = "max-order", default_value_t = crate::group::DEFAULT_ORDER_CAP)]
        max_order: usize,
    },
    /// Check every (A, B, M) in a family.
    Scan {
        /// Largest |A|; every abelian A of order 2..=maxA is used.
        #[arg(long = "maxA", default_value_t = 4)]
        max_a: usize,
        /// Comma-separated B atoms.
        #[arg(long = "B", default_value = "C2,C3,C4,V4,D4")]
        b: String,
        #[arg(long = "max-order", default_value_t = crate::group::DEFAULT_ORDER_CAP)]
        max_order: usize,
    },
    /// Compare b(N) under G with B(T).
    Conjecture {
        spec: String,
        #[arg(long, value_enum, default_value = "both")]
        policy: PolicyArg,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Count quadratic or V4 fields by discriminant.
    Count {
        #[arg(value_enum)]
        kind: CountKindArg,
        /// Upper bound; accepts forms like 1e7.
        #[arg(long = "X", value_parser = parse_bound)]
        x: u64,
        /// Smallest checkpoint (default X/1000).
        #[arg(long, value_parser = parse_bound)]
        from: Option<u64>,
        #[arg(long = "per-decade", default_value_t = 4)]
        per_decade: u32,
        /// Fixed quadratic subfield for v4-fixed.
        #[arg(long, allow_hyphen_values = true)]
        d1: Option<i64>,
        /// Append a fitted exponent.
        #[arg(long)]
        fit: bool,
        /// Output format (`--json` implies json).
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List named instances usable in place of a spec.
    Presets,
}

/// Parses `10000`, `1e7`, `2.5e3` into an integer bound.
pub fn parse_bound(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !f.is_finite() || f < 0.0 || f.fract() != 0.0 || f > u64::MAX as f64 {
        return Err(format!("`{s}` is not a nonnegative integer"));
    }
    Ok(f as u64)
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        e if e.is_cap() => EXIT_CAP,
        Error::PropertyViolation(_) => EXIT_WITNESS,
        _ => EXIT_USAGE,
    }
}

struct Ctx {
    json: bool,
    timing: bool,
    start: Instant,
}

impl Ctx {
    fn timing(&self) -> Option<Timing> {
        self.timing.then(|| Timing { elapsed_ms: self.start.elapsed().as_millis() as u64 })
    }

    fn emit<T: Serialize>(&self, doc: &T, text: impl FnOnce(&T) -> String) -> String {
        if self.json {
            let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
            s.push('\n');
            s
        } else {
            text(doc)
        }
    }
}

fn resolve_spec(spec: &str) -> &str {
    preset(spec.trim()).map_or(spec, |p| p.instance)
}

fn build(spec: &str, order_cap: usize) -> Result<(String, Instance<u16>), Outcome> {
    let text = resolve_spec(spec);
    let parsed = parse_instance(text).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    let inst = parsed.build::<u16>(order_cap).map_err(|e| Outcome::fail(exit_code_for(&e), e))?;
    Ok((parsed.to_string(), inst))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(rendered)
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let ctx = Ctx { json: cli.json, timing: !cli.no_timing, start: Instant::now() };
    match dispatch(&ctx, cli.command) {
        Ok(out) | Err(out) => out,
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<Outcome, Outcome> {
    let lift = |e: Error| Outcome::fail(exit_code_for(&e), e);
    match command {
        Command::Invariants { spec, policy, has_extension, caps } => {
            let caps = caps.caps();
            let (descriptor, inst) = build(&spec, caps.order)?;
            let report = full_report(&inst, &descriptor, &policy.policies(), &caps, has_extension.into(), true)
                .map_err(lift)?;
            let doc = ReportDocument::new("invariants", report, ctx.timing());
            let code = if doc.any_cap_exceeded() { EXIT_CAP } else { EXIT_OK };
            Ok(Outcome { code, ..Outcome::ok(ctx.emit(&doc, ReportDocument::to_text)) })
        }
        Command::Check { spec, has_extension, max_order } => {
            let (descriptor, inst) = build(&spec, max_order)?;
            if matches!(inst, Instance::Plain { .. }) {
                return Err(Outcome::fail(EXIT_USAGE, "check needs a wreath instance wr(A,B)"));
            }
            let caps = Caps { order: max_order, ..Caps::default() };
            let report = full_report(&inst, &descriptor, &[Policy::Full, Policy::TrivialCyclotomic], &caps, has_extension.into(), false)
                .map_err(lift)?;
            let doc = ReportDocument::new("check", report, ctx.timing());
            Ok(Outcome::ok(ctx.emit(&doc, ReportDocument::to_text)))
        }
        Command::Scan { max_a, b, max_order } => {
            if max_a > SCAN_ORDER_LIMIT {
                return Err(Outcome::fail(EXIT_USAGE, format!("--maxA must be at most {SCAN_ORDER_LIMIT}")));
            }
            let atoms = parse_atom_list(&b).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
            for atom in &atoms {
                let order = atom.build::<u16>().map_err(lift)?.order();
                if order > SCAN_ORDER_LIMIT {
                    return Err(Outcome::fail(EXIT_USAGE, format!("|B| = {order} for {atom} exceeds {SCAN_ORDER_LIMIT}")));
                }
            }
            let family = Family::new(max_a, atoms.clone());
            let caps = Caps { order: max_order, ..Caps::default() };
            let table = scan::<u16>(&family, &caps).map_err(lift)?;
            let all_failed = !table.rows.is_empty()
                && table.rows.iter().all(|r| !matches!(r.outcome, RowOutcome::Checked(_)));
            let fields = FamilyFields { max_a, b: atoms.iter().map(ToString::to_string).collect() };
            let doc = ScanDocument::new(fields, table, ctx.timing());
            let code = if all_failed { EXIT_CAP } else { EXIT_OK };
            Ok(Outcome { code, ..Outcome::ok(ctx.emit(&doc, ScanDocument::to_text)) })
        }
        Command::Conjecture { spec, policy, caps } => {
            let caps = caps.caps();
            let (descriptor, inst) = build(&spec, caps.order)?;
            let n = match &inst {
                Instance::Wreath { emb, .. } => emb.base_subgroup(emb.group()),
                Instance::Plain { t, .. } => t.clone(),
            };
            let reports = policy
                .policies()
                .into_iter()
                .map(|p| conjecture_report(inst.group(), inst.target(), &n, p, &caps))
                .collect::<Result<Vec<_>, _>>()
                .map_err(lift)?;
            let witness = reports
                .iter()
                .any(|r| matches!(r.verdict, ConjectureVerdict::Witness { .. } | ConjectureVerdict::Violation { .. }));
            let capped = reports.iter().any(|r| matches!(r.rhs, BValue::CapExceeded { .. }));
            let code = if witness {
                EXIT_WITNESS
            } else if capped {
                EXIT_CAP
            } else {
                EXIT_OK
            };
            let doc = ConjectureDocument::new(descriptor, reports, ctx.timing());
            Ok(Outcome { code, ..Outcome::ok(ctx.emit(&doc, ConjectureDocument::to_text)) })
        }
        Command::Count { kind, x, from, per_decade, d1, fit, format } => {
            if x > MAX_COUNT_BOUND {
                return Err(Outcome::fail(EXIT_CAP, format!("X = {x} exceeds the limit {MAX_COUNT_BOUND}")));
            }
            let (kind, d1) = match (kind, d1) {
                (CountKindArg::Quadratic, _) => (CountKind::Quadratic, None),
                (CountKindArg::V4Fixed, Some(d)) => {
                    (CountKind::V4Fixed, Some(FundamentalDiscriminant::new(d).map_err(lift)?))
                }
                (CountKindArg::V4Fixed, None) => return Err(Outcome::fail(EXIT_USAGE, "v4-fixed needs --d1")),
            };
            let from = from.unwrap_or(x / 1000).max(1);
            let checkpoints = geometric_checkpoints(from, x, per_decade);
            let mut job = CountJob::run(kind, d1, checkpoints).map_err(lift)?;
            if fit {
                job = job.with_fit().map_err(lift)?;
            }
            let doc = CountDocument::new(job, ctx.timing());
            let format = if ctx.json { Format::Json } else { format };
            let out = match format {
                Format::Csv => doc.job.to_csv(),
                Format::Json => Ctx { json: true, ..*ctx }.emit(&doc, CountDocument::to_text),
                Format::Text => doc.to_text(),
            };
            Ok(Outcome::ok(out))
        }
        Command::Presets => {
            let doc = PresetsDocument::new();
            Ok(Outcome::ok(ctx.emit(&doc, PresetsDocument::to_text)))
        }
    }
}
