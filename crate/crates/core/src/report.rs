//! Output documents for the command-line tool: JSON shapes and text
//! rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::abelian_base::CountJob;
use crate::checker::{InvariantReport, RowOutcome, ScanSummary, ScanTable, Verdict};
use crate::invariants::{BValue, ConjectureReport, ConjectureVerdict};

pub const SCHEMA_VERSION: u32 = 1;

/// The published JSON schema for every document.
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantFields {
    pub a_N: usize,
    pub a_T: usize,
    pub a_TmodN: Option<usize>,
    pub abs_A: Option<usize>,
    pub rank_r: Option<usize>,
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub kind: &'static str,
    pub instance: String,
    pub invariants: InvariantFields,
    pub b_by_policy: BTreeMap<String, usize>,
    pub B_value: Option<BTreeMap<String, BValue>>,
    pub verdicts: Option<Verdict>,
    pub predicted: BTreeMap<String, String>,
    pub timing: Option<Timing>,
}

impl ReportDocument {
    pub fn new(kind: &'static str, r: InvariantReport, timing: Option<Timing>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            kind,
            instance: r.instance,
            invariants: InvariantFields {
                a_N: r.a_n,
                a_T: r.a_t,
                a_TmodN: r.a_t_mod_n,
                abs_A: r.abs_a,
                rank_r: r.rank_r,
            },
            b_by_policy: r.b_by_policy,
            B_value: r.big_b_by_policy,
            verdicts: r.verdict,
            predicted: r.predicted,
            timing,
        }
    }

    pub fn any_cap_exceeded(&self) -> bool {
        self.B_value.iter().flat_map(|m| m.values()).any(|b| b.exact().is_none())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let inv = &self.invariants;
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        writeln!(s, "instance: {}", self.instance).unwrap();
        writeln!(s, "a(T) = {}", inv.a_T).unwrap();
        writeln!(s, "a(N) = {}", inv.a_N).unwrap();
        writeln!(s, "a(T/N) = {}", opt(inv.a_TmodN)).unwrap();
        writeln!(s, "|A| = {}", opt(inv.abs_A)).unwrap();
        writeln!(s, "r = {}", opt(inv.rank_r)).unwrap();
        for (policy, b) in &self.b_by_policy {
            writeln!(s, "b[{policy}] = {b}").unwrap();
        }
        for (policy, b) in self.B_value.iter().flatten() {
            match b {
                BValue::Exact { value, .. } => writeln!(s, "B[{policy}] = {value}").unwrap(),
                BValue::CapExceeded { what, partial } => {
                    writeln!(s, "B[{policy}] = cap exceeded ({what}); partial lower bound {}", opt(*partial)).unwrap()
                }
            }
        }
        if let Some(v) = &self.verdicts {
            write_verdict(&mut s, v);
        }
        for (policy, p) in &self.predicted {
            writeln!(s, "predicted[{policy}]: {p}").unwrap();
        }
        write_timing(&mut s, &self.timing);
        s
    }
}

fn write_verdict(s: &mut String, v: &Verdict) {
    for (name, flag) in v.flags.iter() {
        writeln!(s, "{name}: {flag}").unwrap();
    }
    let w = &v.witnesses;
    if let Some(i) = &w.thm_1_6_inequality {
        writeln!(s, "1/a(T/N) < |A|/a(N): {} < {} is {}", i.lhs, i.rhs, i.holds).unwrap();
    }
    if let Some(i) = &w.thm_1_7_inequality {
        writeln!(s, "1/a(T/N) + r/2 < |A|/a(N): {} < {} is {}", i.lhs, i.rhs, i.holds).unwrap();
    }
    writeln!(
        s,
        "nilpotent: {} (lower central series length {}), solvable: {}",
        w.nilpotent, w.lower_central_series_length, w.solvable
    )
    .unwrap();
    writeln!(s, "pure element: {}", w.pure_element.as_deref().unwrap_or("none")).unwrap();
    writeln!(s, "transposition in f0(T): {}", w.transposition.as_deref().unwrap_or("none")).unwrap();
}

fn write_timing(s: &mut String, t: &Option<Timing>) {
    if let Some(t) = t {
        writeln!(s, "time: {} ms", t.elapsed_ms).unwrap();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyFields {
    pub max_a: usize,
    pub b: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanDocument {
    pub schema_version: u32,
    pub kind: &'static str,
    pub family: FamilyFields,
    pub rows: Vec<crate::checker::ScanRow>,
    pub summary: ScanSummary,
    pub timing: Option<Timing>,
}

impl ScanDocument {
    pub fn new(family: FamilyFields, table: ScanTable, timing: Option<Timing>) -> Self {
        ScanDocument { schema_version: SCHEMA_VERSION, kind: "scan", family, rows: table.rows, summary: table.summary, timing }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            match &row.outcome {
                RowOutcome::Checked(v) => {
                    let flags: Vec<String> = v.flags.iter().iter().map(|(n, f)| format!("{n}={f}")).collect();
                    writeln!(s, "{} | {}", row.instance, flags.join(" ")).unwrap();
                }
                RowOutcome::CapExceeded { what } => writeln!(s, "{} | cap-exceeded: {what}", row.instance).unwrap(),
                RowOutcome::Error { message } => writeln!(s, "{} | error: {message}", row.instance).unwrap(),
            }
        }
        let m = &self.summary;
        let applies: Vec<String> = m.applies.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(
            s,
            "summary: {} rows, {} checked, {} cap-exceeded, {} errors; applies: {}",
            m.rows,
            m.checked,
            m.cap_exceeded,
            m.errors,
            applies.join(" ")
        )
        .unwrap();
        write_timing(&mut s, &self.timing);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureDocument {
    pub schema_version: u32,
    pub kind: &'static str,
    pub instance: String,
    pub reports: Vec<ConjectureReport>,
    pub timing: Option<Timing>,
}

impl ConjectureDocument {
    pub fn new(instance: String, reports: Vec<ConjectureReport>, timing: Option<Timing>) -> Self {
        ConjectureDocument { schema_version: SCHEMA_VERSION, kind: "conjecture", instance, reports, timing }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "instance: {}", self.instance).unwrap();
        for r in &self.reports {
            let p = r.policy.as_str();
            writeln!(s, "[{p}] a(T) = {}, a(N) = {}", r.a_t, r.a_n).unwrap();
            writeln!(s, "[{p}] lhs b(N) = {}", r.lhs).unwrap();
            match &r.rhs {
                BValue::Exact { value, .. } => writeln!(s, "[{p}] rhs B(T) = {value}").unwrap(),
                BValue::CapExceeded { what, partial } => writeln!(
                    s,
                    "[{p}] rhs B(T) = cap exceeded ({what}); partial = {}",
                    partial.map_or("none".to_string(), |v| v.to_string())
                )
                .unwrap(),
            }
            let verdict = match &r.verdict {
                ConjectureVerdict::Equal => "equal".to_string(),
                ConjectureVerdict::Witness { lhs, rhs, witness } => format!(
                    "witness: B = {rhs} > b = {lhs} via N1 of order {} and H of order {} generated by {}",
                    witness.n1_order,
                    witness.h_order,
                    witness.h_generators.join(", ")
                ),
                ConjectureVerdict::Violation { lhs, rhs } => format!("violation: B = {rhs} < b = {lhs}"),
                ConjectureVerdict::NotComparable { reason } => format!("not comparable: {reason}"),
                ConjectureVerdict::CapExceeded { what } => format!("cap exceeded: {what}"),
            };
            writeln!(s, "[{p}] verdict: {verdict}").unwrap();
        }
        write_timing(&mut s, &self.timing);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountDocument {
    pub schema_version: u32,
    pub kind: &'static str,
    pub job: CountJob,
    pub timing: Option<Timing>,
}

impl CountDocument {
    pub fn new(job: CountJob, timing: Option<Timing>) -> Self {
        CountDocument { schema_version: SCHEMA_VERSION, kind: "count", job, timing }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (x, c) in self.job.checkpoints.iter().zip(&self.job.counts) {
            writeln!(s, "X = {x}: {c}").unwrap();
        }
        if let Some(f) = &self.job.fit {
            writeln!(s, "fitted exponent: {:.4} (≈ {}), residual {:.2e}", f.exponent, f.rational, f.residual).unwrap();
            if let Some(b) = f.b_diagnostic {
                writeln!(s, "b diagnostic (not asserted): {b:.3}").unwrap();
            }
        }
        write_timing(&mut s, &self.timing);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub instance: &'static str,
    pub note: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "c2-wr-c4",
        instance: "wr(C(2),C(4)) with M = C(2)@2",
        note: "nilpotent tower, thm_1_6 applies",
    },
    Preset { name: "c2-wr-d4", instance: "wr(C(2),D4) with M = center", note: "M central in D4, thm_1_6 applies" },
    Preset {
        name: "c2-wr-c9",
        instance: "wr(C(2),C(9)) with M = C(3)@3",
        note: "not nilpotent, thm_1_7 applies",
    },
    Preset { name: "v4-toy", instance: "V4 with T = gens[(0 1)(2 3)]", note: "V4 regular with T = C2" },
    Preset {
        name: "c2-wr-v4",
        instance: "wr(C(2),V4) with M = gens[(0 1)(2 3)]",
        note: "conjecture probe",
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresetsDocument {
    pub schema_version: u32,
    pub kind: &'static str,
    pub presets: &'static [Preset],
}

impl PresetsDocument {
    pub fn new() -> Self {
        PresetsDocument { schema_version: SCHEMA_VERSION, kind: "presets", presets: PRESETS }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in self.presets {
            writeln!(s, "{:<10} {:<40} {}", p.name, p.instance, p.note).unwrap();
        }
        s
    }
}

impl Default for PresetsDocument {
    fn default() -> Self {
        Self::new()
    }
}
