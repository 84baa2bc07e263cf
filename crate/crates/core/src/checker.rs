//! Hypothesis checks for the wreath-product theorems and corollaries, full
//! invariant reports, and family scans.
//!
//! All inequalities are compared exactly as rationals. `a(T/N)` is always the
//! Malle `a` of `f₀(T)` acting on the `m` blocks.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::constructions::{wreath, WreathEmbedding};
use crate::dsl::{Atom, GroupExpr, Instance, InstanceSpec, SubRole, SubSpec};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::invariants::{b_max_invariant, BValue, Caps, GaloisDatum, Policy};
use crate::perm::{Permutation, Point};
use crate::quotient::QuotientGroup;
use crate::subgroups::normal_subgroups;

use crate::Rational;

/// Whether at least one `G`-extension exists, as supplied by the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    Yes,
    No,
    #[default]
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "kebab-case")]
pub enum Flag {
    Applies,
    Fails(String),
    NotApplicable(String),
}

impl Flag {
    pub fn applies(&self) -> bool {
        matches!(self, Flag::Applies)
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Flag::Applies => None,
            Flag::Fails(r) | Flag::NotApplicable(r) => Some(r),
        }
    }

    fn fails(reason: &str) -> Self {
        Flag::Fails(reason.to_string())
    }

    fn na(reason: &str) -> Self {
        Flag::NotApplicable(reason.to_string())
    }
}

impl std::fmt::Display for Flag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flag::Applies => write!(f, "applies"),
            Flag::Fails(r) => write!(f, "fails({r})"),
            Flag::NotApplicable(r) => write!(f, "not-applicable({r})"),
        }
    }
}

fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `lhs < rhs`, both exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    #[serde(serialize_with = "ser_ratio")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub rhs: Rational,
    pub holds: bool,
}

impl Inequality {
    fn strict<I: Clone + Integer>(lhs: Ratio<I>, rhs: Ratio<I>) -> (Ratio<I>, Ratio<I>, bool) {
        let holds = lhs < rhs;
        (lhs, rhs, holds)
    }

    fn new(lhs: Rational, rhs: Rational) -> Self {
        let (lhs, rhs, holds) = Self::strict(lhs, rhs);
        Inequality { lhs, rhs, holds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub thm_1_6: Flag,
    pub thm_1_7: Flag,
    pub cor_3_2: Flag,
    pub cor_3_4: Flag,
    pub cor_1_3: Flag,
    pub cor_1_4: Flag,
    pub cor_1_5: Flag,
}

impl Flags {
    pub fn iter(&self) -> [(&'static str, &Flag); 7] {
        [
            ("thm_1_6", &self.thm_1_6),
            ("thm_1_7", &self.thm_1_7),
            ("cor_3_2", &self.cor_3_2),
            ("cor_3_4", &self.cor_3_4),
            ("cor_1_3", &self.cor_1_3),
            ("cor_1_4", &self.cor_1_4),
            ("cor_1_5", &self.cor_1_5),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    pub order_g: usize,
    pub order_t: usize,
    pub order_n: usize,
    pub order_t_mod_n: usize,
    pub abs_a: usize,
    pub rank_r: usize,
    pub a_t: usize,
    pub a_n: Option<usize>,
    pub a_t_mod_n: Option<usize>,
    pub tower_type: bool,
    pub nilpotent: bool,
    pub lower_central_series_length: usize,
    pub solvable: bool,
    pub existence: Existence,
    pub pure_element: Option<String>,
    pub transposition: Option<String>,
    pub thm_1_6_inequality: Option<Inequality>,
    pub thm_1_7_inequality: Option<Inequality>,
    /// `1/a(T') < |A|/a(N)` for `T' = f₀(T)`; same values as `thm_1_6_inequality`.
    pub cor_3_2_inequality: Option<Inequality>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub instance: String,
    pub flags: Flags,
    pub witnesses: Witnesses,
}

/// Everything the individual checks read, computed once.
pub struct InstanceContext<'a, P: Point> {
    pub emb: &'a WreathEmbedding<P>,
    pub t: &'a PermGroup<P>,
    pub n: PermGroup<P>,
    /// `f₀(T) ≅ T/N` in degree `m`.
    pub t_prime: PermGroup<P>,
    pub existence: Existence,
    w: Witnesses,
    t_is_g: bool,
    n_in_t: bool,
    t_prime_abelian: bool,
    t_prime_is_b: bool,
    a_cyclic: bool,
    common_prime: bool,
    full_wreath: bool,
}

impl<'a, P: Point> InstanceContext<'a, P> {
    pub fn new(emb: &'a WreathEmbedding<P>, t: &'a PermGroup<P>, existence: Existence) -> Result<Self> {
        let g = emb.group();
        if !g.is_normal(t)? {
            return Err(Error::NotNormal("T is not normal in G".into()));
        }
        let n = emb.base_subgroup(g);
        let t_prime = emb.f0_image(t)?;
        let lcs = g.lower_central_series()?;
        let nilpotent = lcs.last().unwrap().is_trivial();
        let solvable = g.is_solvable()?;
        let n_in_t = n.is_subgroup_of(t);
        let pure = emb.pure_elements(g).into_iter().next();
        let a_n = if n.is_trivial() { None } else { Some(n.min_index()?) };
        let a_t_mod_n = if t_prime.is_trivial() { None } else { Some(t_prime.min_index()?) };
        let a = emb.a();
        let abs_a = a.order();
        let b = emb.b();

        let thm_1_6_inequality = match (a_n, a_t_mod_n) {
            (Some(an), Some(aq)) => Some(Inequality::new(
                Rational::new(1, aq as i64),
                Rational::new(abs_a as i64, an as i64),
            )),
            _ => None,
        };
        let rank_r = a.abelian_rank()?;
        let thm_1_7_inequality = match (a_n, a_t_mod_n) {
            (Some(an), Some(aq)) => Some(Inequality::new(
                Rational::new(1, aq as i64) + Rational::new(rank_r as i64, 2),
                Rational::new(abs_a as i64, an as i64),
            )),
            _ => None,
        };
        let transposition = t_prime.elements().find(|x| x.is_transposition()).map(ToString::to_string);
        let common_prime = matches!((a.p_group_prime(), b.p_group_prime()), (Some(p), Some(q)) if p == q);
        let full_wreath = Some(g.order())
            == abs_a.checked_pow(emb.block_count() as u32).and_then(|x| x.checked_mul(b.order()));

        let w = Witnesses {
            order_g: g.order(),
            order_t: t.order(),
            order_n: n.order(),
            order_t_mod_n: t_prime.order(),
            abs_a,
            rank_r,
            a_t: t.min_index()?,
            a_n,
            a_t_mod_n,
            tower_type: emb.is_tower_type(g)?,
            nilpotent,
            lower_central_series_length: lcs.len(),
            solvable,
            existence,
            pure_element: pure.as_ref().map(ToString::to_string),
            transposition,
            cor_3_2_inequality: thm_1_6_inequality.clone(),
            thm_1_6_inequality,
            thm_1_7_inequality,
        };
        Ok(InstanceContext {
            emb,
            t,
            t_is_g: t.order() == g.order(),
            n_in_t,
            t_prime_abelian: t_prime.is_abelian(),
            t_prime_is_b: t_prime.order() == b.order(),
            a_cyclic: a.is_cyclic(),
            common_prime,
            full_wreath,
            n,
            t_prime,
            existence,
            w,
        })
    }

    pub fn witnesses(&self) -> &Witnesses {
        &self.w
    }

    /// Guards shared by both theorems.
    fn theorem_guards(&self) -> Option<Flag> {
        if !self.w.tower_type {
            return Some(Flag::na("not tower type"));
        }
        if self.t_is_g {
            return Some(Flag::na("T not proper"));
        }
        if !self.n_in_t {
            return Some(Flag::na("N not contained in T"));
        }
        if self.t_prime.is_trivial() {
            return Some(Flag::na("T = N"));
        }
        None
    }

    fn existence_gate(&self) -> Option<Flag> {
        if self.w.solvable || self.w.order_g % 2 == 1 {
            return None;
        }
        match self.existence {
            Existence::Yes => None,
            Existence::No => Some(Flag::fails("no G-extension")),
            Existence::Unknown => Some(Flag::na("existence-unknown")),
        }
    }

    pub fn thm_1_6(&self) -> Flag {
        if let Some(f) = self.theorem_guards() {
            return f;
        }
        if !self.w.nilpotent {
            return Flag::fails("nilpotency");
        }
        if !self.t_prime_abelian {
            return Flag::fails("T/N nonabelian");
        }
        match &self.w.thm_1_6_inequality {
            Some(i) if i.holds => Flag::Applies,
            _ => Flag::fails("inequality"),
        }
    }

    pub fn thm_1_7(&self) -> Flag {
        if let Some(f) = self.theorem_guards() {
            return f;
        }
        if !self.t_prime_abelian {
            return Flag::fails("T/N nonabelian");
        }
        if let Some(f) = self.existence_gate() {
            return f;
        }
        match &self.w.thm_1_7_inequality {
            Some(i) if i.holds => Flag::Applies,
            _ => Flag::fails("inequality"),
        }
    }

    /// Guards for the corollaries phrased through `T' = f₀(T) ≤ B`.
    fn corollary_guards(&self) -> Result<Option<Flag>> {
        if !self.w.tower_type {
            return Ok(Some(Flag::na("not tower type")));
        }
        if !self.n_in_t {
            return Ok(Some(Flag::na("T is not the preimage of T'")));
        }
        if !self.emb.b().is_normal(&self.t_prime)? {
            return Err(Error::NotNormal("T' is not normal in B".into()));
        }
        if self.t_prime.is_trivial() {
            return Ok(Some(Flag::na("T' trivial")));
        }
        Ok(None)
    }

    pub fn cor_3_2(&self) -> Result<Flag> {
        if let Some(f) = self.corollary_guards()? {
            return Ok(f);
        }
        if self.t_prime_is_b {
            return Ok(Flag::na("T' not proper"));
        }
        if !self.t_prime_abelian {
            return Ok(Flag::fails("T' nonabelian"));
        }
        if !self.common_prime {
            return Ok(Flag::fails("A and B not p-groups for one prime"));
        }
        if self.w.pure_element.is_none() {
            return Ok(Flag::fails("no pure element"));
        }
        match &self.w.cor_3_2_inequality {
            Some(i) if i.holds => Ok(Flag::Applies),
            other => Err(Error::PropertyViolation(format!(
                "pure-element corollary applies but 1/a(T') < |A|/a(N) fails: {other:?}"
            ))),
        }
    }

    pub fn cor_3_4(&self) -> Result<Flag> {
        if let Some(f) = self.corollary_guards()? {
            return Ok(f);
        }
        if !self.a_cyclic {
            return Ok(Flag::na("A not cyclic"));
        }
        if self.w.transposition.is_some() {
            return Ok(Flag::fails("transposition"));
        }
        if self.t_prime_is_b {
            return Ok(Flag::na("T' not proper"));
        }
        if !self.t_prime_abelian {
            return Ok(Flag::fails("T' nonabelian"));
        }
        if self.w.pure_element.is_none() {
            return Ok(Flag::fails("no pure element"));
        }
        if let Some(f) = self.existence_gate() {
            return Ok(f);
        }
        let a_tp = self.w.a_t_mod_n.unwrap_or(0);
        if a_tp < 2 {
            return Err(Error::PropertyViolation(format!("no transposition in T' but a(T') = {a_tp}")));
        }
        match &self.w.thm_1_7_inequality {
            Some(i) if i.holds => Ok(Flag::Applies),
            other => Err(Error::PropertyViolation(format!(
                "transposition-free corollary applies but the rank inequality fails: {other:?}"
            ))),
        }
    }

    /// Guards for the family corollaries: `G = A ≀ B`, `T = A ≀ M`,
    /// `M` proper and nontrivial.
    fn family_guards(&self) -> Option<Flag> {
        if !self.full_wreath {
            return Some(Flag::na("G is not the full wreath product"));
        }
        if !self.n_in_t {
            return Some(Flag::na("T is not A wr M"));
        }
        if self.t_prime.is_trivial() {
            return Some(Flag::na("M trivial"));
        }
        if self.t_prime_is_b {
            return Some(Flag::na("M not proper"));
        }
        None
    }

    /// Abelian `p`-groups `A`, `B` for one prime.
    pub fn cor_1_3(&self) -> Flag {
        if let Some(f) = self.family_guards() {
            return f;
        }
        if !self.common_prime {
            return Flag::fails("A and B not p-groups for one prime");
        }
        if !self.emb.b().is_abelian() {
            return Flag::fails("B nonabelian");
        }
        Flag::Applies
    }

    /// `p`-groups with `M` central in `B`.
    pub fn cor_1_4(&self) -> Flag {
        if let Some(f) = self.family_guards() {
            return f;
        }
        if !self.common_prime {
            return Flag::fails("A and B not p-groups for one prime");
        }
        if !self.t_prime.is_subgroup_of(&self.emb.b().center()) {
            return Flag::fails("M not central in B");
        }
        Flag::Applies
    }

    /// Cyclic `A`, odd `|B|`, abelian `M`.
    pub fn cor_1_5(&self) -> Flag {
        if let Some(f) = self.family_guards() {
            return f;
        }
        if !self.a_cyclic {
            return Flag::fails("A not cyclic");
        }
        if self.emb.b().order() % 2 == 0 {
            return Flag::fails("|B| even");
        }
        if !self.t_prime_abelian {
            return Flag::fails("M nonabelian");
        }
        Flag::Applies
    }

    /// Checks `f₀ : T → B` factors through a bijection `T/N → f₀(T)` that is
    /// a homomorphism.
    pub fn quotient_agrees_with_projection(&self) -> Result<bool> {
        if !self.n_in_t {
            return Ok(false);
        }
        let q = QuotientGroup::new(self.t, &self.n)?;
        let images: Vec<Permutation<P>> =
            q.representatives().map(|r| self.emb.f0(r)).collect::<Result<_>>()?;
        let distinct: std::collections::HashSet<_> = images.iter().collect();
        if distinct.len() != q.order() || q.order() != self.t_prime.order() {
            return Ok(false);
        }
        for x in self.t.elements() {
            let c = q.coset_index(x).unwrap();
            if self.emb.f0(x)? != images[c] {
                return Ok(false);
            }
        }
        for a in 0..q.order() {
            for b in 0..q.order() {
                if images[q.multiply(a, b)] != images[a].after(&images[b]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn verdict(&self, instance: &str) -> Result<Verdict> {
        let flags = Flags {
            thm_1_6: self.thm_1_6(),
            thm_1_7: self.thm_1_7(),
            cor_3_2: self.cor_3_2()?,
            cor_3_4: self.cor_3_4()?,
            cor_1_3: self.cor_1_3(),
            cor_1_4: self.cor_1_4(),
            cor_1_5: self.cor_1_5(),
        };
        let w = &self.w;
        let violation = |msg: String| Err(Error::PropertyViolation(format!("{instance}: {msg}")));
        if (flags.thm_1_6.applies() || flags.thm_1_7.applies()) && w.a_n != Some(w.a_t) {
            return violation(format!("a theorem applies but a(T) = {} and a(N) = {:?}", w.a_t, w.a_n));
        }
        if w.pure_element.is_some() && w.a_n.is_none_or(|an| an >= w.abs_a) {
            return violation(format!("pure element present but a(N) = {:?} ≥ |A| = {}", w.a_n, w.abs_a));
        }
        if self.n_in_t && w.order_t_mod_n * w.order_n != w.order_t {
            return violation(format!("|f0(T)| = {} but |T|/|N| = {}/{}", w.order_t_mod_n, w.order_t, w.order_n));
        }
        Ok(Verdict { instance: instance.to_string(), flags, witnesses: self.w.clone() })
    }
}

/// All checks for one wreath instance.
pub fn check<P: Point>(
    emb: &WreathEmbedding<P>,
    t: &PermGroup<P>,
    existence: Existence,
    instance: &str,
) -> Result<Verdict> {
    InstanceContext::new(emb, t, existence)?.verdict(instance)
}

/// `X^(1/a) (log X)^(b-1)`.
pub fn predicted_text(a: usize, b: usize) -> String {
    let x = if a == 1 { "X^1".to_string() } else { format!("X^(1/{a})") };
    format!("{x} (log X)^{}", b.saturating_sub(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub instance: String,
    pub a_t: usize,
    pub a_n: usize,
    pub a_t_mod_n: Option<usize>,
    pub abs_a: Option<usize>,
    pub rank_r: Option<usize>,
    /// `b(N)` with `G` acting.
    pub b_by_policy: BTreeMap<String, usize>,
    /// `B(T)` per policy; absent when not requested.
    pub big_b_by_policy: Option<BTreeMap<String, BValue>>,
    pub verdict: Option<Verdict>,
    pub predicted: BTreeMap<String, String>,
}

/// Invariants, verdicts and predicted growth for a built instance. For a
/// plain group `N` is taken to be `T`.
pub fn full_report<P: Point>(
    instance: &Instance<P>,
    descriptor: &str,
    policies: &[Policy],
    caps: &Caps,
    existence: Existence,
    with_big_b: bool,
) -> Result<InvariantReport> {
    let g = instance.group();
    let t = instance.target();
    if !g.is_normal(t)? {
        return Err(Error::NotNormal("T is not normal in G".into()));
    }
    let (n, verdict, abs_a, rank_r, a_t_mod_n) = match instance {
        Instance::Wreath { emb, .. } => {
            let ctx = InstanceContext::new(emb, t, existence)?;
            let v = ctx.verdict(descriptor)?;
            let w = ctx.witnesses();
            (ctx.n.clone(), Some(v.clone()), Some(w.abs_a), Some(w.rank_r), w.a_t_mod_n)
        }
        Instance::Plain { .. } => (t.clone(), None, None, None, None),
    };
    if !n.is_subgroup_of(t) {
        return Err(Error::NotSubgroup("N is not contained in T".into()));
    }
    let a_t = t.min_index()?;
    let a_n = n.min_index()?;
    let mut b_by_policy = BTreeMap::new();
    let mut big_b_by_policy = BTreeMap::new();
    let mut predicted = BTreeMap::new();
    for &policy in policies {
        let b = GaloisDatum::new(g, &n, policy)?.b_invariant()?;
        b_by_policy.insert(policy.as_str().to_string(), b);
        predicted.insert(policy.as_str().to_string(), predicted_text(a_n, b));
        if with_big_b {
            big_b_by_policy.insert(policy.as_str().to_string(), b_max_invariant(g, t, policy, caps)?);
        }
    }
    Ok(InvariantReport {
        instance: descriptor.to_string(),
        a_t,
        a_n,
        a_t_mod_n,
        abs_a,
        rank_r,
        b_by_policy,
        big_b_by_policy: with_big_b.then_some(big_b_by_policy),
        verdict,
        predicted,
    })
}

/// Ranges for a scan: every `A` given by invariant factors, every `B`
/// atom, every proper normal `M ⊴ B` (including the trivial one).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Family {
    pub a_list: Vec<Vec<usize>>,
    pub b_list: Vec<Atom>,
}

/// Invariant-factor lists `[d₁, …, d_k]`, `d₁ | d₂ | …`, of all abelian
/// groups of order `n`.
pub fn abelian_invariant_factors(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, divides: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            out.push(prefix.clone());
            return;
        }
        for d in 2..=n {
            if n % d == 0 && d % divides == 0 && (n == d || (n / d) % d == 0) {
                prefix.push(d);
                go(n / d, d, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        go(n, 1, &mut Vec::new(), &mut out);
    }
    out
}

impl Family {
    pub fn new(max_a: usize, b_list: Vec<Atom>) -> Self {
        let a_list = (2..=max_a).flat_map(abelian_invariant_factors).collect();
        Family { a_list, b_list }
    }
}

pub fn a_atom(factors: &[usize]) -> Atom {
    match factors {
        [n] => Atom::Cyclic(*n),
        _ => Atom::Abelian(factors.to_vec()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowOutcome {
    Checked(Box<Verdict>),
    CapExceeded { what: String },
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub instance: String,
    pub outcome: RowOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub rows: usize,
    pub checked: usize,
    pub cap_exceeded: usize,
    pub errors: usize,
    pub applies: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

/// `(A, B)` pairs expanded over the proper normal subgroups of `B`.
fn scan_pair<P: Point>(a: &Atom, b: &Atom, caps: &Caps) -> Result<Vec<ScanRow>> {
    let group = GroupExpr::Wreath(a.clone(), b.clone());
    let emb = match wreath(&a.build::<P>()?, &b.build::<P>()?, caps.order) {
        Ok(emb) => emb,
        Err(e) if e.is_cap() => {
            return Ok(vec![ScanRow {
                instance: group.to_string(),
                outcome: RowOutcome::CapExceeded { what: e.to_string() },
            }])
        }
        Err(e) => return Err(e),
    };
    let mut rows = Vec::new();
    for m in normal_subgroups(emb.b(), caps.max_normal_subgroups)? {
        if m.order() == emb.b().order() {
            continue;
        }
        let spec = InstanceSpec {
            group: group.clone(),
            sub: Some((SubRole::M, SubSpec::from_generators(m.generators()))),
        };
        let descriptor = spec.to_string();
        let t = emb.wreath_over(&m)?;
        let outcome = match check(&emb, &t, Existence::Unknown, &descriptor) {
            Ok(v) => RowOutcome::Checked(Box::new(v)),
            Err(e) if e.is_cap() => RowOutcome::CapExceeded { what: e.to_string() },
            Err(e @ Error::PropertyViolation(_)) => return Err(e),
            Err(e) => RowOutcome::Error { message: e.to_string() },
        };
        rows.push(ScanRow { instance: descriptor, outcome });
    }
    Ok(rows)
}

/// Checks every instance of the family in parallel; rows are sorted by
/// descriptor. Property violations abort the scan.
pub fn scan<P: Point>(family: &Family, caps: &Caps) -> Result<ScanTable> {
    let pairs: Vec<(Atom, &Atom)> = family
        .a_list
        .iter()
        .flat_map(|a| family.b_list.iter().map(move |b| (a_atom(a), b)))
        .collect();
    let chunks: Vec<Vec<ScanRow>> =
        pairs.par_iter().map(|(a, b)| scan_pair::<P>(a, b, caps)).collect::<Result<_>>()?;
    let mut rows: Vec<ScanRow> = chunks.into_iter().flatten().collect();
    rows.sort_by(|x, y| x.instance.cmp(&y.instance));

    let mut summary = ScanSummary { rows: rows.len(), ..Default::default() };
    for row in &rows {
        match &row.outcome {
            RowOutcome::Checked(v) => {
                summary.checked += 1;
                for (name, flag) in v.flags.iter() {
                    let count = summary.applies.entry(name.to_string()).or_default();
                    if flag.applies() {
                        *count += 1;
                    }
                }
            }
            RowOutcome::CapExceeded { .. } => summary.cap_exceeded += 1,
            RowOutcome::Error { .. } => summary.errors += 1,
        }
    }
    Ok(ScanTable { rows, summary })
}
