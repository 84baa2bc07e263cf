//! Group-spec mini-language.
//!
//! ```text
//! instance := group [ "with" ("M" | "T") "=" sub ]
//! group    := atom | "wr(" atom "," atom ")"
//! atom     := "C(" n ")" | "C" n | "S(" n ")" | "S" n | "D4" | "V4" | "Ab[" n ("," n)* "]"
//! sub      := "C(" n ")@" k | "center" | "gens[" [perm ("," perm)*] "]"
//! perm     := "()" | ("(" n+ ")")+
//! ```
//!
//! `M` names a subgroup of the wreath's top group `B` (so `T = A ≀ M`);
//! `T` names a subgroup of the whole group directly. `C(n)@k` is the
//! subgroup of order `n` generated by the `k`-th power of the cyclic
//! generator.

use std::fmt;

use crate::constructions::{cyclic, dihedral_on_square, regular_abelian, symmetric, wreath, WreathEmbedding};
use crate::error::{Error as GroupError, Result as GroupResult};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Cyclic(usize),
    Symmetric(usize),
    D4,
    V4,
    Abelian(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Atom(Atom),
    Wreath(Atom, Atom),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubSpec {
    CyclicPower { order: usize, power: usize },
    Center,
    /// Each generator as a list of cycles.
    Gens(Vec<Vec<Vec<usize>>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubRole {
    /// Subgroup of the top group `B`.
    M,
    /// Subgroup of the whole group.
    T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub group: GroupExpr,
    pub sub: Option<(SubRole, SubSpec)>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cyclic(n) => write!(f, "C({n})"),
            Atom::Symmetric(n) => write!(f, "S({n})"),
            Atom::D4 => write!(f, "D4"),
            Atom::V4 => write!(f, "V4"),
            Atom::Abelian(ds) => {
                let parts: Vec<String> = ds.iter().map(ToString::to_string).collect();
                write!(f, "Ab[{}]", parts.join(","))
            }
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Atom(a) => write!(f, "{a}"),
            GroupExpr::Wreath(a, b) => write!(f, "wr({a},{b})"),
        }
    }
}

fn write_cycles(f: &mut fmt::Formatter<'_>, cycles: &[Vec<usize>]) -> fmt::Result {
    if cycles.is_empty() {
        return write!(f, "()");
    }
    for c in cycles {
        let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(" "))?;
    }
    Ok(())
}

impl fmt::Display for SubSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubSpec::CyclicPower { order, power } => write!(f, "C({order})@{power}"),
            SubSpec::Center => write!(f, "center"),
            SubSpec::Gens(gens) => {
                write!(f, "gens[")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_cycles(f, g)?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.group)?;
        if let Some((role, sub)) = &self.sub {
            let r = match role {
                SubRole::M => "M",
                SubRole::T => "T",
            };
            write!(f, " with {r} = {sub}")?;
        }
        Ok(())
    }
}

impl SubSpec {
    /// Generators rendered from permutations, dropping 1-cycles.
    pub fn from_generators<P: Point>(gens: &[Permutation<P>]) -> Self {
        SubSpec::Gens(
            gens.iter()
                .filter(|g| !g.is_identity())
                .map(|g| g.cycles().cycles.into_iter().filter(|c| c.len() > 1).collect())
                .collect(),
        )
    }
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'s> Parser<'s> {
    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> PResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn number(&mut self) -> PResult<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("number out of range")
        })
    }

    fn atom(&mut self) -> PResult<Atom> {
        if self.eat("D4") {
            return Ok(Atom::D4);
        }
        if self.eat("V4") {
            return Ok(Atom::V4);
        }
        if self.eat("Ab[") {
            let mut ds = vec![self.number()?];
            while self.eat(",") {
                ds.push(self.number()?);
            }
            self.expect("]")?;
            return Ok(Atom::Abelian(ds));
        }
        if self.eat("C") {
            if self.eat("(") {
                let n = self.number()?;
                self.expect(")")?;
                return Ok(Atom::Cyclic(n));
            }
            return Ok(Atom::Cyclic(self.number()?));
        }
        if self.eat("S") {
            if self.eat("(") {
                let n = self.number()?;
                self.expect(")")?;
                return Ok(Atom::Symmetric(n));
            }
            return Ok(Atom::Symmetric(self.number()?));
        }
        self.err("expected a group atom (C(n), S(n), D4, V4, Ab[...])")
    }

    fn group(&mut self) -> PResult<GroupExpr> {
        if self.eat("wr(") {
            let a = self.atom()?;
            self.expect(",")?;
            let b = self.atom()?;
            self.expect(")")?;
            return Ok(GroupExpr::Wreath(a, b));
        }
        Ok(GroupExpr::Atom(self.atom()?))
    }

    fn perm(&mut self) -> PResult<Vec<Vec<usize>>> {
        let mut cycles = Vec::new();
        if self.peek() != Some(b'(') {
            return self.err("expected a permutation in cycle notation");
        }
        while self.peek() == Some(b'(') {
            self.pos += 1;
            if self.eat(")") {
                continue;
            }
            let mut cycle = vec![self.number()?];
            loop {
                self.eat(",");
                if self.eat(")") {
                    break;
                }
                cycle.push(self.number()?);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        Ok(cycles)
    }

    fn sub(&mut self) -> PResult<SubSpec> {
        if self.eat("center") {
            return Ok(SubSpec::Center);
        }
        if self.eat("gens[") {
            let mut gens = Vec::new();
            if !self.eat("]") {
                gens.push(self.perm()?);
                while self.eat(",") {
                    gens.push(self.perm()?);
                }
                self.expect("]")?;
            }
            return Ok(SubSpec::Gens(gens));
        }
        if self.eat("C(") {
            let order = self.number()?;
            self.expect(")")?;
            self.expect("@")?;
            let power = self.number()?;
            return Ok(SubSpec::CyclicPower { order, power });
        }
        self.err("expected a subgroup spec (C(n)@k, center, gens[...])")
    }

    fn instance(&mut self) -> PResult<InstanceSpec> {
        let group = self.group()?;
        let sub = if self.eat("with") {
            let role = if self.eat("M") {
                SubRole::M
            } else if self.eat("T") {
                SubRole::T
            } else {
                return self.err("expected `M` or `T`");
            };
            self.expect("=")?;
            Some((role, self.sub()?))
        } else {
            None
        };
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(InstanceSpec { group, sub })
    }
}

pub fn parse_instance(text: &str) -> PResult<InstanceSpec> {
    Parser { src: text.as_bytes(), pos: 0 }.instance()
}

pub fn parse_atom(text: &str) -> PResult<Atom> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let atom = p.atom()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(atom)
}

/// Splits a comma-separated atom list, respecting brackets: `C2,Ab[2,2],D4`.
pub fn parse_atom_list(text: &str) -> PResult<Vec<Atom>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out.into_iter()
        .filter(|(_, s)| !s.trim().is_empty())
        .map(|(offset, s)| {
            parse_atom(s).map_err(|e| ParseError { position: e.position + offset, ..e })
        })
        .collect()
}

impl Atom {
    pub fn build<P: Point>(&self) -> GroupResult<PermGroup<P>> {
        match self {
            Atom::Cyclic(n) => cyclic(*n),
            Atom::Symmetric(n) => symmetric(*n),
            Atom::D4 => Ok(dihedral_on_square()),
            Atom::V4 => regular_abelian(&[2, 2]),
            Atom::Abelian(ds) => regular_abelian(ds),
        }
    }
}

/// A built instance: a wreath embedding with `T ⊴ G`, or a plain group.
#[derive(Clone, Debug)]
pub enum Instance<P: Point> {
    Wreath {
        emb: WreathEmbedding<P>,
        /// `f₀`-side subgroup when given as `with M = …`.
        m: Option<PermGroup<P>>,
        t: PermGroup<P>,
    },
    Plain {
        g: PermGroup<P>,
        t: PermGroup<P>,
    },
}

impl<P: Point> Instance<P> {
    pub fn group(&self) -> &PermGroup<P> {
        match self {
            Instance::Wreath { emb, .. } => emb.group(),
            Instance::Plain { g, .. } => g,
        }
    }

    pub fn target(&self) -> &PermGroup<P> {
        match self {
            Instance::Wreath { t, .. } | Instance::Plain { t, .. } => t,
        }
    }
}

fn cyclic_generator<P: Point>(parent: &PermGroup<P>) -> GroupResult<Permutation<P>> {
    let n = parent.order() as u64;
    parent
        .generators()
        .iter()
        .find(|g| g.order() == n)
        .or_else(|| parent.elements().find(|g| g.order() == n))
        .cloned()
        .ok_or_else(|| GroupError::InvalidConstruction("C(n)@k needs a cyclic parent group".into()))
}

pub fn resolve_sub<P: Point>(parent: &PermGroup<P>, spec: &SubSpec) -> GroupResult<PermGroup<P>> {
    match spec {
        SubSpec::Center => Ok(parent.center()),
        SubSpec::CyclicPower { order, power } => {
            let x = cyclic_generator(parent)?.pow(*power as i64);
            if x.order() as usize != *order {
                return Err(GroupError::InvalidConstruction(format!(
                    "C({order})@{power}: the {power}-th power has order {}",
                    x.order()
                )));
            }
            parent.subgroup(&[x])
        }
        SubSpec::Gens(gens) => {
            let perms: Vec<Permutation<P>> = gens
                .iter()
                .map(|cycles| Permutation::from_cycles(parent.degree(), cycles))
                .collect::<GroupResult<_>>()?;
            parent.subgroup(&perms)
        }
    }
}

impl InstanceSpec {
    pub fn build<P: Point>(&self, order_cap: usize) -> GroupResult<Instance<P>> {
        match &self.group {
            GroupExpr::Wreath(a, b) => {
                let emb = wreath(&a.build()?, &b.build()?, order_cap)?;
                let (m, t) = match &self.sub {
                    None => {
                        let t = emb.base_subgroup(emb.group());
                        (Some(PermGroup::trivial(emb.block_count())), t)
                    }
                    Some((SubRole::M, spec)) => {
                        let m = resolve_sub(emb.b(), spec)?;
                        let t = emb.wreath_over(&m)?;
                        (Some(m), t)
                    }
                    Some((SubRole::T, spec)) => (None, resolve_sub(emb.group(), spec)?),
                };
                Ok(Instance::Wreath { emb, m, t })
            }
            GroupExpr::Atom(atom) => {
                let g = atom.build()?;
                match &self.sub {
                    Some((SubRole::T, spec)) => {
                        let t = resolve_sub(&g, spec)?;
                        Ok(Instance::Plain { g, t })
                    }
                    Some((SubRole::M, _)) => Err(GroupError::InvalidConstruction(
                        "`with M` needs a wreath product; use `with T`".into(),
                    )),
                    None => Err(GroupError::InvalidConstruction(
                        "a plain group needs `with T = …`".into(),
                    )),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_preset_instances() {
        let s = parse_instance("wr(C(2),C(4)) with M = C(2)@2").unwrap();
        assert_eq!(s.group, GroupExpr::Wreath(Atom::Cyclic(2), Atom::Cyclic(4)));
        assert_eq!(s.sub, Some((SubRole::M, SubSpec::CyclicPower { order: 2, power: 2 })));
        let s = parse_instance("wr(C(2),D4) with M = center").unwrap();
        assert_eq!(s.sub, Some((SubRole::M, SubSpec::Center)));
        let s = parse_instance("V4 with T = gens[(0 1)(2 3)]").unwrap();
        assert_eq!(s.sub, Some((SubRole::T, SubSpec::Gens(vec![vec![vec![0, 1], vec![2, 3]]]))));
        assert_eq!(parse_instance("wr(C2, Ab[2,2])").unwrap().to_string(), "wr(C(2),Ab[2,2])");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_instance("wr(C(2),Q8)").unwrap_err();
        assert_eq!(e.position, 8);
        let e = parse_instance("C(3) junk").unwrap_err();
        assert_eq!(e.position, 5);
        assert!(parse_instance("wr(C(2),C(4)) with X = center").is_err());
        assert!(parse_instance("").is_err());
    }

    #[test]
    fn atom_lists_split_at_top_level() {
        let v = parse_atom_list("C2,C3,Ab[2,2],D4").unwrap();
        assert_eq!(v, vec![Atom::Cyclic(2), Atom::Cyclic(3), Atom::Abelian(vec![2, 2]), Atom::D4]);
        assert!(parse_atom_list("").unwrap().is_empty());
        assert_eq!(parse_atom_list("C2,Q").unwrap_err().position, 3);
    }

    #[test]
    fn builds_instances() {
        let inst = parse_instance("wr(C(2),C(9)) with M = C(3)@3").unwrap().build::<u16>(100_000).unwrap();
        assert_eq!(inst.group().order(), 4608);
        assert_eq!(inst.target().order(), 1536);
        let bad = parse_instance("wr(C(2),C(9)) with M = C(3)@2").unwrap().build::<u16>(100_000);
        assert!(bad.is_err());
        let outside = parse_instance("wr(C(2),C(4)) with M = gens[(0 1)]").unwrap().build::<u16>(1000);
        assert!(outside.is_err());
        let toy = parse_instance("V4 with T = gens[(0 1)(2 3)]").unwrap().build::<u16>(1000).unwrap();
        assert_eq!((toy.group().order(), toy.target().order()), (4, 2));
    }

    fn atom_strategy() -> impl Strategy<Value = Atom> {
        prop_oneof![
            (1usize..30).prop_map(Atom::Cyclic),
            (1usize..6).prop_map(Atom::Symmetric),
            Just(Atom::D4),
            Just(Atom::V4),
            prop::collection::vec(2usize..9, 1..4).prop_map(Atom::Abelian),
        ]
    }

    fn sub_strategy() -> impl Strategy<Value = SubSpec> {
        let perm = prop::collection::vec(prop::collection::vec(0usize..20, 2..4), 0..3);
        prop_oneof![
            (1usize..20, 0usize..20).prop_map(|(order, power)| SubSpec::CyclicPower { order, power }),
            Just(SubSpec::Center),
            prop::collection::vec(perm, 0..3).prop_map(SubSpec::Gens),
        ]
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(
            a in atom_strategy(),
            b in atom_strategy(),
            wreath in any::<bool>(),
            sub in prop::option::of((prop_oneof![Just(SubRole::M), Just(SubRole::T)], sub_strategy())),
        ) {
            let group = if wreath { GroupExpr::Wreath(a, b) } else { GroupExpr::Atom(a) };
            let spec = InstanceSpec { group, sub };
            let text = spec.to_string();
            prop_assert_eq!(parse_instance(&text).unwrap(), spec);
        }
    }
}
