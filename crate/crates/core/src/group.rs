//! Finite permutation groups with fully materialized element sets.

use std::collections::VecDeque;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::numtheory::prime_factors;
use crate::perm::{Permutation, Point};

/// Default bound on the number of elements a group may materialize.
pub const DEFAULT_ORDER_CAP: usize = 100_000;

/// A permutation group given by generators, with its elements listed in
/// breadth-first discovery order from the sorted generators. The identity is
/// always element 0.
#[derive(Clone)]
pub struct PermGroup<P: Point> {
    degree: usize,
    generators: Vec<Permutation<P>>,
    elements: IndexSet<Permutation<P>>,
}

impl<P: Point> std::fmt::Debug for PermGroup<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Bitset over the element indices of an ambient group; identifies a subset
/// (typically a subgroup) independently of how it was generated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetKey(Vec<u64>);

impl SubsetKey {
    pub fn contains(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn is_subset_of(&self, other: &SubsetKey) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

impl<P: Point> PermGroup<P> {
    /// Closes `generators` under composition. Fails once the element count
    /// would pass `order_cap`.
    pub fn generate(generators: &[Permutation<P>], order_cap: usize) -> Result<Self> {
        let first = generators.first().ok_or(Error::NoGenerators)?;
        let degree = first.degree();
        if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch { left: degree, right: bad.degree() });
        }
        let mut gens: Vec<Permutation<P>> =
            generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        gens.sort();
        gens.dedup();

        let mut elements = IndexSet::new();
        elements.insert(Permutation::identity(degree));
        let mut i = 0;
        while i < elements.len() {
            let products: Vec<_> = {
                let x = &elements[i];
                gens.iter().map(|s| s.after(x)).collect()
            };
            for y in products {
                if !elements.contains(&y) {
                    if elements.len() >= order_cap {
                        return Err(Error::CapExceeded { what: "group order", cap: order_cap });
                    }
                    elements.insert(y);
                }
            }
            i += 1;
        }
        if gens.is_empty() {
            gens.push(Permutation::identity(degree));
        }
        Ok(PermGroup { degree, generators: gens, elements })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::generate(&[Permutation::identity(degree)], 1).expect("trivial group")
    }

    /// Builds the group on a set already known to be closed, picking a small
    /// generating set greedily in the given order.
    pub fn from_closed_set<'a, I>(degree: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Permutation<P>>,
    {
        let mut current = Self::trivial(degree);
        let mut gens: Vec<Permutation<P>> = Vec::new();
        let mut expected = 0usize;
        for e in elements {
            expected += 1;
            if !current.contains(e) {
                gens.push(e.clone());
                current = Self::generate(&gens, usize::MAX)?;
            }
        }
        if current.order() != expected.max(1) {
            return Err(Error::NotSubgroup(format!(
                "set of {expected} elements is not closed (closure has {})",
                current.order()
            )));
        }
        Ok(current)
    }

    /// Subgroup of the elements satisfying `pred`; the caller guarantees
    /// closure.
    pub fn subgroup_where(&self, mut pred: impl FnMut(&Permutation<P>) -> bool) -> Self {
        let kept: Vec<&Permutation<P>> = self.elements.iter().filter(|g| pred(g)).collect();
        Self::from_closed_set(self.degree, kept).expect("predicate must cut out a subgroup")
    }

    /// Subgroup generated by `gens`, which must lie in `self`.
    pub fn subgroup(&self, gens: &[Permutation<P>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| !self.contains(g)) {
            return Err(Error::NotSubgroup(format!("{g} is not an element of the group")));
        }
        if gens.is_empty() {
            return Ok(Self::trivial(self.degree));
        }
        Self::generate(gens, self.order())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation<P>] {
        &self.generators
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &Permutation<P>> + '_ {
        self.elements.iter()
    }

    pub fn element(&self, i: usize) -> &Permutation<P> {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Permutation<P>) -> Option<usize> {
        self.elements.get_index_of(g)
    }

    pub fn contains(&self, g: &Permutation<P>) -> bool {
        self.elements.contains(g)
    }

    pub fn identity(&self) -> &Permutation<P> {
        &self.elements[0]
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Same element set, regardless of generators.
    pub fn same_elements(&self, other: &Self) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// Key of this group's element set as a subset of `ambient`.
    pub fn key_in(&self, ambient: &Self) -> SubsetKey {
        let mut bits = vec![0u64; ambient.order().div_ceil(64)];
        for g in self.elements() {
            let i = ambient.index_of(g).expect("subgroup element missing from ambient group");
            bits[i / 64] |= 1 << (i % 64);
        }
        SubsetKey(bits)
    }

    /// Partition of the points into orbits, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for s in &self.generators {
                    let y = s.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                        queue.push_back(y);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<Self> {
        if point >= self.degree {
            return Err(Error::InvalidPermutation(format!(
                "point {point} out of range for degree {}",
                self.degree
            )));
        }
        Ok(self.subgroup_where(|g| g.apply(point) == point))
    }

    /// Whether `h ⊴ self`, tested on generator conjugates.
    pub fn is_normal(&self, h: &Self) -> Result<bool> {
        if !h.is_subgroup_of(self) {
            return Err(Error::NotSubgroup("candidate normal subgroup is not contained".into()));
        }
        Ok(self.normalizes(h))
    }

    /// Whether conjugation by every generator of `self` maps `h` into itself.
    /// `h` need not be contained in `self`.
    pub fn normalizes(&self, h: &Self) -> bool {
        self.generators
            .iter()
            .all(|g| h.generators.iter().all(|x| h.contains(&x.conjugate_by(g))))
    }

    /// Conjugacy classes as element indices. Classes are ordered by their
    /// least element index; members within a class are sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes = Vec::new();
        for start in 0..self.order() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let x = &self.elements[i];
                for s in &self.generators {
                    let j = self.index_of(&x.conjugate_by(s)).expect("group is closed");
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        members.push(j);
                        queue.push_back(j);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].commutes_with(&g[j])))
    }

    pub fn center(&self) -> Self {
        let gens = self.generators.clone();
        self.subgroup_where(|x| gens.iter().all(|s| x.commutes_with(s)))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        use num_integer::Integer;
        self.elements().fold(1u64, |acc, g| acc.lcm(&g.order()))
    }

    /// Smallest normal subgroup of `self` containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Permutation<P>]) -> Result<Self> {
        let mut h = self.subgroup(seeds)?;
        'grow: loop {
            for x in h.generators() {
                for s in &self.generators {
                    let c = x.conjugate_by(s);
                    if !h.contains(&c) {
                        let mut gens = h.generators.clone();
                        gens.push(c);
                        h = Self::generate(&gens, self.order())?;
                        continue 'grow;
                    }
                }
            }
            return Ok(h);
        }
    }

    /// `[self, h]` for a subgroup `h` normalized by `self`.
    pub fn commutator_with(&self, h: &Self) -> Result<Self> {
        let mut seeds = Vec::new();
        for s in &self.generators {
            for x in &h.generators {
                let c = Permutation::commutator(s, x);
                if !c.is_identity() {
                    seeds.push(c);
                }
            }
        }
        self.normal_closure(&seeds)
    }

    /// `G = γ₁ ⊇ γ₂ ⊇ …`, stopping at the first repeated term.
    pub fn lower_central_series(&self) -> Result<Vec<Self>> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_with(last)?;
            if next.order() == last.order() {
                return Ok(series);
            }
            series.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.lower_central_series()?.last().unwrap().is_trivial())
    }

    /// `G ⊇ G' ⊇ G'' ⊇ …`, stopping at the first repeated term.
    pub fn derived_series(&self) -> Result<Vec<Self>> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = last.commutator_with(last)?;
            if next.order() == last.order() {
                return Ok(series);
            }
            series.push(next);
        }
    }

    pub fn is_solvable(&self) -> Result<bool> {
        Ok(self.derived_series()?.last().unwrap().is_trivial())
    }

    /// Malle `a`: least index over the nonidentity elements.
    pub fn min_index(&self) -> Result<usize> {
        self.elements()
            .skip(1)
            .map(Permutation::index)
            .min()
            .ok_or(Error::TrivialGroup("a-invariant of the trivial group is undefined"))
    }

    /// Rank of an abelian group: the largest `log_p |{g : g^p = 1}|`.
    pub fn abelian_rank(&self) -> Result<usize> {
        if self.is_trivial() {
            return Err(Error::TrivialGroup("rank needs a nontrivial group"));
        }
        if !self.is_abelian() {
            return Err(Error::NotAbelian("rank is defined for abelian groups only"));
        }
        let mut rank = 0;
        for p in prime_factors(self.order() as u64) {
            let torsion = self.elements().filter(|g| g.pow(p as i64).is_identity()).count();
            let mut k = 0;
            let mut t = torsion as u64;
            while t > 1 {
                debug_assert_eq!(t % p, 0);
                t /= p;
                k += 1;
            }
            rank = rank.max(k);
        }
        Ok(rank)
    }

    /// The prime `p` when the order is a positive power of `p`.
    pub fn p_group_prime(&self) -> Option<u64> {
        match prime_factors(self.order() as u64).as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }

    /// Whether some single element generates the group.
    pub fn is_cyclic(&self) -> bool {
        let n = self.order() as u64;
        self.elements().any(|g| g.order() == n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Perm = Permutation<u16>;
    type Group = PermGroup<u16>;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        let c: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Perm::from_cycles(n, &c).unwrap()
    }

    fn group(gens: &[Perm]) -> Group {
        Group::generate(gens, DEFAULT_ORDER_CAP).unwrap()
    }

    fn s3() -> Group {
        group(&[cyc(3, &[&[0, 1, 2]]), cyc(3, &[&[0, 1]])])
    }

    fn d4() -> Group {
        group(&[cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[1, 3]])])
    }

    #[test]
    fn generate_examples() {
        assert_eq!(group(&[Perm::identity(3)]).order(), 1);
        assert_eq!(group(&[cyc(4, &[&[0, 1, 2, 3]])]).order(), 4);
        assert_eq!(s3().order(), 6);
        assert_eq!(d4().order(), 8);
        assert!(group(&[cyc(4, &[&[0, 1, 2, 3]])]).identity().is_identity());
    }

    #[test]
    fn generate_respects_cap_and_degrees() {
        let err = Group::generate(&[cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1]])], 100);
        assert!(err.unwrap_err().is_cap());
        assert!(matches!(Group::generate(&[], 10), Err(Error::NoGenerators)));
        assert!(Group::generate(&[Perm::identity(3), Perm::identity(4)], 10).is_err());
    }

    #[test]
    fn element_order_is_deterministic() {
        let a = s3();
        let b = group(&[cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])]);
        let ea: Vec<_> = a.elements().cloned().collect();
        let eb: Vec<_> = b.elements().cloned().collect();
        assert_eq!(ea, eb);
    }

    #[test]
    fn orbits_examples() {
        assert_eq!(Group::trivial(3).orbits(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(group(&[cyc(4, &[&[0, 1, 2, 3]])]).orbits(), vec![vec![0, 1, 2, 3]]);
        let g = group(&[cyc(4, &[&[0, 1]]), cyc(4, &[&[2, 3]])]);
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2, 3]]);
        assert!(!g.is_transitive());
        assert!(!group(&[cyc(4, &[&[0, 1]])]).is_transitive());
    }

    #[test]
    fn stabilizer_examples() {
        let reg = group(&[cyc(4, &[&[0, 1, 2, 3]])]);
        assert!(reg.point_stabilizer(2).unwrap().is_trivial());
        assert_eq!(s3().point_stabilizer(0).unwrap().order(), 2);
        let st = d4().point_stabilizer(0).unwrap();
        assert_eq!(st.order(), 2);
        assert!(st.contains(&cyc(4, &[&[1, 3]])));
        assert!(s3().point_stabilizer(3).is_err());
    }

    #[test]
    fn normality_examples() {
        let g = s3();
        assert!(g.is_normal(&Group::trivial(3)).unwrap());
        assert!(g.is_normal(&group(&[cyc(3, &[&[0, 1, 2]])])).unwrap());
        assert!(!g.is_normal(&group(&[cyc(3, &[&[0, 1]])])).unwrap());
        let outside = group(&[cyc(4, &[&[0, 1]])]);
        assert!(d4().is_normal(&outside).is_err());
    }

    #[test]
    fn conjugacy_class_examples() {
        let c4 = group(&[cyc(4, &[&[0, 1, 2, 3]])]);
        assert!(c4.conjugacy_classes().iter().all(|c| c.len() == 1));
        let sizes: Vec<usize> = s3().conjugacy_classes().iter().map(Vec::len).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3]);
        assert_eq!(sizes[0], 1);
        assert_eq!(d4().conjugacy_classes().len(), 5);
    }

    #[test]
    fn classes_are_closed_under_conjugation() {
        let g = d4();
        for class in g.conjugacy_classes() {
            for &i in &class {
                for h in g.elements() {
                    let j = g.index_of(&g.element(i).conjugate_by(h)).unwrap();
                    assert!(class.contains(&j));
                }
            }
        }
    }

    #[test]
    fn abelian_center_nilpotent_examples() {
        let c4 = group(&[cyc(4, &[&[0, 1, 2, 3]])]);
        assert!(c4.is_abelian());
        assert!(c4.is_nilpotent().unwrap());
        assert_eq!(c4.center().order(), 4);

        let d = d4();
        assert!(!d.is_abelian());
        assert!(d.is_nilpotent().unwrap());
        let z = d.center();
        assert_eq!(z.order(), 2);
        assert!(z.contains(&cyc(4, &[&[0, 2], &[1, 3]])));
        let lcs: Vec<usize> = d.lower_central_series().unwrap().iter().map(|h| h.order()).collect();
        assert_eq!(lcs, vec![8, 2, 1]);

        let s = s3();
        assert!(!s.is_abelian());
        assert!(!s.is_nilpotent().unwrap());
        let lcs: Vec<usize> = s.lower_central_series().unwrap().iter().map(|h| h.order()).collect();
        assert_eq!(lcs, vec![6, 3]);
        assert!(s.is_solvable().unwrap());
    }

    #[test]
    fn a5_is_not_solvable() {
        let a5 = group(&[cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1, 2]])]);
        assert_eq!(a5.order(), 60);
        assert!(!a5.is_solvable().unwrap());
    }

    #[test]
    fn min_index_examples() {
        assert_eq!(group(&[cyc(2, &[&[0, 1]])]).min_index().unwrap(), 1);
        assert_eq!(group(&[cyc(4, &[&[0, 2], &[1, 3]])]).min_index().unwrap(), 2);
        assert!(Group::trivial(3).min_index().is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(group(&[cyc(2, &[&[0, 1]])]).abelian_rank().unwrap(), 1);
        // C_2 x C_4 on 6 points
        let c2c4 = group(&[cyc(6, &[&[0, 1]]), cyc(6, &[&[2, 3, 4, 5]])]);
        assert_eq!(c2c4.abelian_rank().unwrap(), 2);
        let c6 = group(&[cyc(6, &[&[0, 1, 2, 3, 4, 5]])]);
        assert_eq!(c6.abelian_rank().unwrap(), 1);
        assert!(matches!(s3().abelian_rank(), Err(Error::NotAbelian(_))));
    }

    #[test]
    fn normal_closure_of_transposition_is_s3() {
        let g = s3();
        assert_eq!(g.normal_closure(&[cyc(3, &[&[0, 1]])]).unwrap().order(), 6);
        assert_eq!(g.normal_closure(&[cyc(3, &[&[0, 1, 2]])]).unwrap().order(), 3);
    }

    #[test]
    fn from_closed_set_rejects_non_subgroups() {
        let g = s3();
        let bad = [g.element(0).clone(), cyc(3, &[&[0, 1]]), cyc(3, &[&[1, 2]])];
        assert!(Group::from_closed_set(3, bad.iter()).is_err());
    }
}
