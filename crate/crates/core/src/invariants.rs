//! Minimal-index elements, the `b`-invariant under a Galois datum, the
//! `B`-invariant maximization, and the comparison between the two.
//!
//! A Galois datum is modelled group-theoretically: a subgroup `Δ ≤ H × U(e)`
//! where `H` normalizes the target `T` and `e = exp(T)`. The pair `(h, u)`
//! acts on `T` by `t ↦ (h t h⁻¹)^(u⁻¹ mod e)`.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::numtheory::{inverse_mod, units_mod};
use crate::perm::{Permutation, Point};
use crate::subgroups::{normal_subgroups, DEFAULT_MAX_NORMAL_SUBGROUPS, DEFAULT_MAX_SUBGROUPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// `H × U(e)`: largest cyclotomic image.
    Full,
    /// `H × {1}`: the base field contains the `e`-th roots of unity.
    TrivialCyclotomic,
    /// Explicit generator pairs.
    Custom,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Full => "full",
            Policy::TrivialCyclotomic => "trivial_cyclotomic",
            Policy::Custom => "custom",
        }
    }
}

/// All nonidentity `t ∈ T` with `ind(t) = a(T)`, in `T`'s element order.
pub fn minimal_index_elements<P: Point>(t: &PermGroup<P>) -> Result<Vec<Permutation<P>>> {
    let a = t.min_index()?;
    Ok(t.elements().skip(1).filter(|x| x.index() == a).cloned().collect())
}

#[derive(Clone, Debug)]
pub struct GaloisDatum<'a, P: Point> {
    acting: &'a PermGroup<P>,
    target: &'a PermGroup<P>,
    exponent: u64,
    generators: Vec<(Permutation<P>, u64)>,
    policy: Policy,
}

impl<'a, P: Point> GaloisDatum<'a, P> {
    /// Datum for one of the product policies over `acting`.
    pub fn new(acting: &'a PermGroup<P>, target: &'a PermGroup<P>, policy: Policy) -> Result<Self> {
        let exponent = Self::check_target(acting, target)?;
        let id = acting.identity().clone();
        let mut generators: Vec<(Permutation<P>, u64)> =
            acting.generators().iter().map(|g| (g.clone(), 1 % exponent)).collect();
        match policy {
            Policy::Full => generators.extend(
                units_mod(exponent).into_iter().filter(|&u| u != 1).map(|u| (id.clone(), u)),
            ),
            Policy::TrivialCyclotomic => {}
            Policy::Custom => {
                return Err(Error::InvalidDatum("custom data need explicit generators".into()))
            }
        }
        Ok(GaloisDatum { acting, target, exponent, generators, policy })
    }

    /// Datum generated by explicit pairs `(h, u)` with `h ∈ acting`, `u` a unit
    /// mod `exp(T)`.
    pub fn custom(
        acting: &'a PermGroup<P>,
        target: &'a PermGroup<P>,
        pairs: &[(Permutation<P>, u64)],
    ) -> Result<Self> {
        let exponent = Self::check_target(acting, target)?;
        let mut generators = Vec::with_capacity(pairs.len().max(1));
        for (g, u) in pairs {
            if !acting.contains(g) {
                return Err(Error::InvalidDatum(format!("{g} is not in the acting group")));
            }
            let u = u % exponent;
            if inverse_mod(u, exponent).is_none() {
                return Err(Error::InvalidDatum(format!("{u} is not a unit mod {exponent}")));
            }
            generators.push((g.clone(), u));
        }
        if generators.is_empty() {
            generators.push((acting.identity().clone(), 1 % exponent));
        }
        Ok(GaloisDatum { acting, target, exponent, generators, policy: Policy::Custom })
    }

    fn check_target(acting: &PermGroup<P>, target: &PermGroup<P>) -> Result<u64> {
        if target.is_trivial() {
            return Err(Error::TrivialGroup("Galois datum needs a nontrivial target"));
        }
        if acting.degree() != target.degree() {
            return Err(Error::DegreeMismatch { left: acting.degree(), right: target.degree() });
        }
        if !acting.normalizes(target) {
            return Err(Error::NotNormal("acting group does not normalize the target".into()));
        }
        Ok(target.exponent())
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn acting(&self) -> &PermGroup<P> {
        self.acting
    }

    pub fn target(&self) -> &PermGroup<P> {
        self.target
    }

    pub fn generators(&self) -> &[(Permutation<P>, u64)] {
        &self.generators
    }

    /// `(g t g⁻¹)^(u⁻¹ mod e)`.
    pub fn act(&self, g: &Permutation<P>, u: u64, t: &Permutation<P>) -> Permutation<P> {
        let v = inverse_mod(u, self.exponent).expect("datum units are invertible");
        t.conjugate_by(g).pow(v as i64)
    }

    /// All elements of `Δ`, in breadth-first order from `(1, 1)`.
    pub fn elements(&self, cap: usize) -> Result<Vec<(Permutation<P>, u64)>> {
        let e = self.exponent;
        let start = (self.acting.identity().clone(), 1 % e);
        let mut seen: HashSet<(Permutation<P>, u64)> = HashSet::from([start.clone()]);
        let mut out = vec![start];
        let mut i = 0;
        while i < out.len() {
            let (g, u) = out[i].clone();
            for (h, w) in &self.generators {
                let next = (h.after(&g), (w * u) % e);
                if seen.insert(next.clone()) {
                    if out.len() >= cap {
                        return Err(Error::CapExceeded { what: "datum order", cap });
                    }
                    out.push(next);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// Orbits of `Δ` on the minimal-index elements of the target.
    pub fn twisted_orbit_partition(&self) -> Result<Vec<Vec<Permutation<P>>>> {
        let minimal = minimal_index_elements(self.target)?;
        let position: std::collections::HashMap<&Permutation<P>, usize> =
            minimal.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let moves: Vec<(Permutation<P>, i64)> = self
            .generators
            .iter()
            .map(|(g, u)| (g.clone(), inverse_mod(*u, self.exponent).unwrap() as i64))
            .collect();

        let mut orbit_of = vec![usize::MAX; minimal.len()];
        let mut orbits: Vec<Vec<Permutation<P>>> = Vec::new();
        for start in 0..minimal.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            orbit_of[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for (g, v) in &moves {
                    let image = minimal[i].conjugate_by(g).pow(*v);
                    let j = *position.get(&image).ok_or_else(|| {
                        Error::PropertyViolation(format!(
                            "datum maps minimal element {} outside the minimal-index set",
                            minimal[i]
                        ))
                    })?;
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = id;
                        members.push(j);
                        queue.push_back(j);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(members.into_iter().map(|i| minimal[i].clone()).collect());
        }
        Ok(orbits)
    }

    pub fn b_invariant(&self) -> Result<usize> {
        Ok(self.twisted_orbit_partition()?.len())
    }
}

/// Builds a datum for `policy`; product policies ignore `custom`.
pub fn make_datum<'a, P: Point>(
    ambient: &'a PermGroup<P>,
    target: &'a PermGroup<P>,
    policy: Policy,
    custom: &[(Permutation<P>, u64)],
) -> Result<GaloisDatum<'a, P>> {
    match policy {
        Policy::Custom => GaloisDatum::custom(ambient, target, custom),
        _ => GaloisDatum::new(ambient, target, policy),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Bound on materialized group orders.
    pub order: usize,
    /// Bound on the number of lift subgroups examined by `B`.
    pub max_subgroups: usize,
    pub max_normal_subgroups: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order: crate::group::DEFAULT_ORDER_CAP,
            max_subgroups: DEFAULT_MAX_SUBGROUPS,
            max_normal_subgroups: DEFAULT_MAX_NORMAL_SUBGROUPS,
        }
    }
}

/// The `(N₁, H)` pair attaining a `b` value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BWitness {
    pub policy: Policy,
    pub n1_order: usize,
    pub n1_generators: Vec<String>,
    pub h_order: usize,
    pub h_generators: Vec<String>,
    pub exponent: u64,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BValue {
    Exact { value: usize, witness: BWitness },
    /// Enumeration was truncated; `partial` is the best value seen, which is
    /// only a lower bound.
    CapExceeded { what: String, partial: Option<usize> },
}

impl BValue {
    pub fn exact(&self) -> Option<usize> {
        match self {
            BValue::Exact { value, .. } => Some(*value),
            BValue::CapExceeded { .. } => None,
        }
    }
}

fn render_gens<P: Point>(g: &PermGroup<P>) -> Vec<String> {
    g.generators().iter().map(ToString::to_string).collect()
}

/// Generators of `g` that, with `n1`, generate `g`; chosen greedily.
fn supplement_generators<P: Point>(g: &PermGroup<P>, n1: &PermGroup<P>) -> Result<Vec<Permutation<P>>> {
    let mut chosen = Vec::new();
    let mut current = n1.clone();
    for s in g.generators() {
        if !current.contains(s) {
            chosen.push(s.clone());
            let mut gens = current.generators().to_vec();
            gens.push(s.clone());
            current = PermGroup::generate(&gens, g.order())?;
        }
    }
    Ok(chosen)
}

/// `B`: the largest `b` over normal `N₁ ⊴ G` with `N₁ ⊆ T`, `a(N₁) = a(T)`,
/// and over subgroups `H ≤ G` with `H·N₁ = G` acting on `N₁`.
///
/// `b` can only drop when `H` grows, so it suffices to visit the subgroups
/// generated by one lift `sⱼnⱼ` of each generator `sⱼ` of `G/N₁`; every
/// supplement contains one of these.
pub fn b_max_invariant<P: Point>(
    g: &PermGroup<P>,
    t: &PermGroup<P>,
    policy: Policy,
    caps: &Caps,
) -> Result<BValue> {
    if t.is_trivial() {
        return Err(Error::TrivialGroup("B needs a nontrivial T"));
    }
    if !g.is_normal(t)? {
        return Err(Error::NotNormal("T is not normal in G".into()));
    }
    let a_t = t.min_index()?;
    let normals = match normal_subgroups(g, caps.max_normal_subgroups) {
        Ok(v) => v,
        Err(e) if e.is_cap() => return Ok(BValue::CapExceeded { what: e.to_string(), partial: None }),
        Err(e) => return Err(e),
    };
    let mut budget = caps.max_subgroups;
    let mut best: Option<BWitness> = None;
    for n1 in normals.iter().filter(|n| !n.is_trivial() && n.is_subgroup_of(t)) {
        if n1.min_index()? != a_t {
            continue;
        }
        let lifts = supplement_generators(g, n1)?;
        let combos = (n1.order() as u128).checked_pow(lifts.len() as u32).unwrap_or(u128::MAX);
        if combos > budget as u128 {
            return Ok(BValue::CapExceeded {
                what: format!("lift subgroup count would exceed {}", caps.max_subgroups),
                partial: best.map(|w| w.b),
            });
        }
        budget -= combos as usize;

        let n1_elems: Vec<&Permutation<P>> = n1.elements().collect();
        let mut seen = HashSet::new();
        let mut digits = vec![0usize; lifts.len()];
        loop {
            let h = if lifts.is_empty() {
                PermGroup::trivial(g.degree())
            } else {
                let gens: Vec<_> =
                    lifts.iter().zip(&digits).map(|(s, &d)| s.after(n1_elems[d])).collect();
                PermGroup::generate(&gens, g.order())?
            };
            if seen.insert(h.key_in(g)) {
                let b = GaloisDatum::new(&h, n1, policy)?.b_invariant()?;
                if best.as_ref().is_none_or(|w| b > w.b) {
                    best = Some(BWitness {
                        policy,
                        n1_order: n1.order(),
                        n1_generators: render_gens(n1),
                        h_order: h.order(),
                        h_generators: render_gens(&h),
                        exponent: n1.exponent(),
                        b,
                    });
                }
            }
            // odometer over N₁^k
            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < n1_elems.len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
    }
    let witness = best.expect("T itself qualifies as N₁");
    Ok(BValue::Exact { value: witness.b, witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConjectureVerdict {
    Equal,
    /// `B` exceeds the theorem's `b`: a candidate counterexample.
    Witness { lhs: usize, rhs: usize, witness: BWitness },
    /// `B` below the theorem's `b`; impossible when `N` qualifies as `N₁`.
    Violation { lhs: usize, rhs: usize },
    NotComparable { reason: String },
    CapExceeded { what: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub policy: Policy,
    pub a_t: usize,
    pub a_n: usize,
    /// `b` of `N` under the full ambient group.
    pub lhs: usize,
    pub rhs: BValue,
    pub verdict: ConjectureVerdict,
}

/// Compares `b(N)` under `G` with `B(T)` for `N ⊆ T`, both `⊴ G`.
pub fn conjecture_report<P: Point>(
    g: &PermGroup<P>,
    t: &PermGroup<P>,
    n: &PermGroup<P>,
    policy: Policy,
    caps: &Caps,
) -> Result<ConjectureReport> {
    if !n.is_subgroup_of(t) {
        return Err(Error::NotSubgroup("N is not contained in T".into()));
    }
    if !g.is_normal(n)? {
        return Err(Error::NotNormal("N is not normal in G".into()));
    }
    let a_t = t.min_index()?;
    let a_n = n.min_index()?;
    let lhs = GaloisDatum::new(g, n, policy)?.b_invariant()?;
    let rhs = b_max_invariant(g, t, policy, caps)?;
    let verdict = if a_n != a_t {
        ConjectureVerdict::NotComparable { reason: format!("a(N) = {a_n} differs from a(T) = {a_t}") }
    } else {
        match &rhs {
            BValue::CapExceeded { what, .. } => ConjectureVerdict::CapExceeded { what: what.clone() },
            BValue::Exact { value, witness } => match value.cmp(&lhs) {
                std::cmp::Ordering::Equal => ConjectureVerdict::Equal,
                std::cmp::Ordering::Greater => {
                    ConjectureVerdict::Witness { lhs, rhs: *value, witness: witness.clone() }
                }
                std::cmp::Ordering::Less => ConjectureVerdict::Violation { lhs, rhs: *value },
            },
        }
    };
    Ok(ConjectureReport { policy, a_t, a_n, lhs, rhs, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cyclic, regular_abelian, wreath};
    use crate::group::DEFAULT_ORDER_CAP;

    type Group = PermGroup<u16>;
    type Perm = Permutation<u16>;

    #[test]
    fn minimal_elements_examples() {
        let c2: Group = regular_abelian(&[2]).unwrap();
        assert_eq!(minimal_index_elements(&c2).unwrap().len(), 1);
        let c3: Group = regular_abelian(&[3]).unwrap();
        let m = minimal_index_elements(&c3).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|t| t.index() == 2));
        let emb = wreath(&c2, &cyclic(4).unwrap(), DEFAULT_ORDER_CAP).unwrap();
        let base = emb.base_subgroup(emb.group());
        let m = minimal_index_elements(&base).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.iter().all(|t| emb.is_pure(t) && t.index() == 1));
        assert!(minimal_index_elements(&Group::trivial(3)).is_err());
    }

    #[test]
    fn c3_orbits_by_policy() {
        let c3: Group = regular_abelian(&[3]).unwrap();
        let full = GaloisDatum::new(&c3, &c3, Policy::Full).unwrap();
        assert_eq!(full.elements(100).unwrap().len(), 6);
        assert_eq!(full.b_invariant().unwrap(), 1);
        let triv = GaloisDatum::new(&c3, &c3, Policy::TrivialCyclotomic).unwrap();
        assert_eq!(triv.b_invariant().unwrap(), 2);
        // u = 2 sends t to t^(2⁻¹ mod 3) = t²
        let t = c3.generators()[0].clone();
        assert_eq!(full.act(c3.identity(), 2, &t), t.pow(2));
    }

    #[test]
    fn base_of_c2_wr_c4_has_one_orbit() {
        let c2: Group = regular_abelian(&[2]).unwrap();
        let emb = wreath(&c2, &cyclic(4).unwrap(), DEFAULT_ORDER_CAP).unwrap();
        let base = emb.base_subgroup(emb.group());
        let d = GaloisDatum::new(emb.group(), &base, Policy::Full).unwrap();
        let parts = d.twisted_orbit_partition().unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].len(), 4);
    }

    #[test]
    fn make_datum_examples() {
        let c2: Group = regular_abelian(&[2]).unwrap();
        let full = make_datum(&c2, &c2, Policy::Full, &[]).unwrap();
        assert_eq!(full.exponent(), 2);
        assert_eq!(full.elements(100).unwrap().len(), c2.order());

        let c5: Group = regular_abelian(&[5]).unwrap();
        let id = Perm::identity(5);
        let d = make_datum(&c5, &c5, Policy::Custom, &[(id.clone(), 2)]).unwrap();
        let units: HashSet<u64> = d.elements(100).unwrap().into_iter().map(|(_, u)| u).collect();
        assert_eq!(units.len(), 4);
        assert!(make_datum(&c5, &c5, Policy::Custom, &[(id, 5)]).is_err());
    }

    #[test]
    fn datum_rejects_unnormalized_targets() {
        let s3 = Group::generate(
            &[Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap(), Perm::from_cycles(3, &[vec![0, 1]]).unwrap()],
            10,
        )
        .unwrap();
        let t = s3.subgroup(&[Perm::from_cycles(3, &[vec![0, 1]]).unwrap()]).unwrap();
        assert!(matches!(GaloisDatum::new(&s3, &t, Policy::Full), Err(Error::NotNormal(_))));
    }

    #[test]
    fn b_max_on_v4_over_c2() {
        let v4: Group = regular_abelian(&[2, 2]).unwrap();
        let t = v4.subgroup(&[v4.generators()[0].clone()]).unwrap();
        let b = b_max_invariant(&v4, &t, Policy::Full, &Caps::default()).unwrap();
        assert_eq!(b.exact(), Some(1));
        let rep = conjecture_report(&v4, &t, &t, Policy::Full, &Caps::default()).unwrap();
        assert_eq!(rep.verdict, ConjectureVerdict::Equal);
        assert_eq!((rep.lhs, rep.a_t), (1, 2));
    }

    #[test]
    fn b_max_respects_caps() {
        let c2: Group = regular_abelian(&[2]).unwrap();
        let emb = wreath(&c2, &cyclic(4).unwrap(), DEFAULT_ORDER_CAP).unwrap();
        let base = emb.base_subgroup(emb.group());
        let caps = Caps { max_subgroups: 1, ..Caps::default() };
        let b = b_max_invariant(emb.group(), &base, Policy::Full, &caps).unwrap();
        assert!(matches!(b, BValue::CapExceeded { .. }));
    }
}
