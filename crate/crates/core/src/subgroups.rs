//! Subgroup lattices: normal subgroups via joins of class closures, and all
//! subgroups via joins of cyclic subgroups.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{PermGroup, SubsetKey};
use crate::perm::Point;

/// Default bound on the number of normal subgroups collected.
pub const DEFAULT_MAX_NORMAL_SUBGROUPS: usize = 10_000;

/// Default bound on intermediate subgroups during full enumeration.
pub const DEFAULT_MAX_SUBGROUPS: usize = 1_000_000;

struct Lattice<'a, P: Point> {
    ambient: &'a PermGroup<P>,
    found: Vec<(SubsetKey, PermGroup<P>)>,
    seen: HashMap<SubsetKey, usize>,
    cap: usize,
    what: &'static str,
}

impl<'a, P: Point> Lattice<'a, P> {
    fn new(ambient: &'a PermGroup<P>, cap: usize, what: &'static str) -> Self {
        Lattice { ambient, found: Vec::new(), seen: HashMap::new(), cap, what }
    }

    fn insert(&mut self, h: PermGroup<P>) -> Result<()> {
        let key = h.key_in(self.ambient);
        if self.seen.contains_key(&key) {
            return Ok(());
        }
        if self.found.len() >= self.cap {
            return Err(Error::CapExceeded { what: self.what, cap: self.cap });
        }
        self.seen.insert(key.clone(), self.found.len());
        self.found.push((key, h));
        Ok(())
    }

    /// Closes the collection under joins with each of `atoms`.
    fn close_under_joins(&mut self, atoms: &[(SubsetKey, PermGroup<P>)]) -> Result<()> {
        let mut i = 0;
        while i < self.found.len() {
            for (akey, atom) in atoms {
                let (hkey, h) = &self.found[i];
                if akey.is_subset_of(hkey) {
                    continue;
                }
                let mut gens = h.generators().to_vec();
                gens.extend_from_slice(atom.generators());
                let join = PermGroup::generate(&gens, self.ambient.order())?;
                self.insert(join)?;
            }
            i += 1;
        }
        Ok(())
    }

    fn into_sorted(self) -> Vec<PermGroup<P>> {
        let mut v = self.found;
        v.sort_by(|(ka, a), (kb, b)| a.order().cmp(&b.order()).then_with(|| ka.cmp(kb)));
        v.into_iter().map(|(_, h)| h).collect()
    }
}

fn dedup_atoms<P: Point>(
    ambient: &PermGroup<P>,
    groups: impl Iterator<Item = Result<PermGroup<P>>>,
) -> Result<Vec<(SubsetKey, PermGroup<P>)>> {
    let mut atoms: Vec<(SubsetKey, PermGroup<P>)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for h in groups {
        let h = h?;
        let key = h.key_in(ambient);
        if seen.insert(key.clone()) {
            atoms.push((key, h));
        }
    }
    Ok(atoms)
}

/// All normal subgroups of `g`, ordered by order then by element set.
///
/// Every normal subgroup is the join of the normal closures of the classes
/// it contains, so closing `{1}` under joins with the class closures reaches
/// each one exactly once.
pub fn normal_subgroups<P: Point>(g: &PermGroup<P>, cap: usize) -> Result<Vec<PermGroup<P>>> {
    let classes = g.conjugacy_classes();
    let atoms = dedup_atoms(
        g,
        classes.iter().skip(1).map(|class| g.normal_closure(&[g.element(class[0]).clone()])),
    )?;
    let mut lattice = Lattice::new(g, cap, "normal subgroup count");
    lattice.insert(PermGroup::trivial(g.degree()))?;
    lattice.close_under_joins(&atoms)?;
    Ok(lattice.into_sorted())
}

/// All subgroups of `g` as joins of cyclic subgroups, ordered like
/// [`normal_subgroups`].
pub fn all_subgroups<P: Point>(g: &PermGroup<P>, cap: usize) -> Result<Vec<PermGroup<P>>> {
    let atoms = dedup_atoms(
        g,
        g.elements().skip(1).map(|x| PermGroup::generate(std::slice::from_ref(x), g.order())),
    )?;
    let mut lattice = Lattice::new(g, cap, "subgroup count");
    lattice.insert(PermGroup::trivial(g.degree()))?;
    lattice.close_under_joins(&atoms)?;
    Ok(lattice.into_sorted())
}
