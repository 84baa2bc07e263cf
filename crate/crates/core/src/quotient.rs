//! Quotients `G/N` by a normal subgroup, with coset arithmetic and a
//! faithful regular representation on the cosets.
//!
//! The regular representation has degree `[G:N]`. It is an abstract model of
//! the quotient and must not be used for Malle `a`-invariants, which depend
//! on the permutation representation.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};

pub struct QuotientGroup<'a, P: Point> {
    ambient: &'a PermGroup<P>,
    kernel: &'a PermGroup<P>,
    /// Ambient element index of the least element of each coset.
    representatives: Vec<usize>,
    /// Coset index of each ambient element.
    coset_of: Vec<usize>,
    regular: PermGroup<P>,
}

impl<'a, P: Point> QuotientGroup<'a, P> {
    pub fn new(ambient: &'a PermGroup<P>, kernel: &'a PermGroup<P>) -> Result<Self> {
        if !ambient.is_normal(kernel)? {
            return Err(Error::NotNormal("quotient by a non-normal subgroup".into()));
        }
        let mut coset_of = vec![usize::MAX; ambient.order()];
        let mut representatives = Vec::with_capacity(ambient.order() / kernel.order());
        for (i, g) in ambient.elements().enumerate() {
            if coset_of[i] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(i);
            for n in kernel.elements() {
                let j = ambient.index_of(&g.after(n)).expect("ambient group is closed");
                coset_of[j] = c;
            }
        }
        let index = representatives.len();
        let gens: Vec<Permutation<P>> = ambient
            .generators()
            .iter()
            .map(|s| {
                let images: Vec<usize> = representatives
                    .iter()
                    .map(|&r| coset_of[ambient.index_of(&s.after(ambient.element(r))).unwrap()])
                    .collect();
                Permutation::from_images(&images)
            })
            .collect::<Result<_>>()?;
        let regular = PermGroup::generate(&gens, index)?;
        Ok(QuotientGroup { ambient, kernel, representatives, coset_of, regular })
    }

    pub fn ambient(&self) -> &PermGroup<P> {
        self.ambient
    }

    pub fn kernel(&self) -> &PermGroup<P> {
        self.kernel
    }

    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative(&self, coset: usize) -> &Permutation<P> {
        self.ambient.element(self.representatives[coset])
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Permutation<P>> + '_ {
        self.representatives.iter().map(|&i| self.ambient.element(i))
    }

    /// The quotient map `G → G/N` on coset indices.
    pub fn coset_index(&self, g: &Permutation<P>) -> Option<usize> {
        self.ambient.index_of(g).map(|i| self.coset_of[i])
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let prod = self.representative(a).after(self.representative(b));
        self.coset_index(&prod).expect("ambient group is closed")
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.coset_index(&self.representative(a).inverse()).expect("ambient group is closed")
    }

    /// Coset of the identity.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn regular_representation(&self) -> &PermGroup<P> {
        &self.regular
    }

    /// Order of a coset as an element of `G/N`.
    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity() {
            x = self.multiply(x, a);
            k += 1;
        }
        k
    }
}
