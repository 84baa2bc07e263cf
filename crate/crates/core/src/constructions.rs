//! Group families: cyclic and dihedral groups, regular abelian groups, and
//! wreath products `A ≀ B` with their block structure.
//!
//! In `A ≀ B` the points are laid out in `m` contiguous blocks of size `|A|`:
//! point `i·|A| + x` is offset `x` of block `i`. `B` permutes blocks and `A`
//! acts on offsets by its regular translations.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};

/// `⟨(0 1 … n-1)⟩`; `cyclic(1)` is the trivial group of degree 1.
pub fn cyclic<P: Point>(n: usize) -> Result<PermGroup<P>> {
    if n == 0 {
        return Err(Error::InvalidConstruction("cyclic group needs n ≥ 1".into()));
    }
    let images: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
    PermGroup::generate(&[Permutation::from_images(&images)?], n)
}

/// `D_4` on the vertices `0, 1, 2, 3` of a square.
pub fn dihedral_on_square<P: Point>() -> PermGroup<P> {
    let r = Permutation::from_images(&[1, 2, 3, 0]).unwrap();
    let s = Permutation::from_images(&[0, 3, 2, 1]).unwrap();
    PermGroup::generate(&[r, s], 8).unwrap()
}

/// `S_n` in its natural action; `symmetric(1)` is trivial.
pub fn symmetric<P: Point>(n: usize) -> Result<PermGroup<P>> {
    if n == 0 {
        return Err(Error::InvalidConstruction("symmetric group needs n ≥ 1".into()));
    }
    let mut gens = vec![Permutation::from_images(&(0..n).map(|x| (x + 1) % n).collect::<Vec<_>>())?];
    if n > 2 {
        gens.push(Permutation::from_cycles(n, &[vec![0, 1]])?);
    }
    PermGroup::generate(&gens, usize::MAX)
}

/// `C_{d₁} × … × C_{d_k}` acting regularly on itself; points are the
/// mixed-radix encodings of tuples, first factor fastest.
pub fn regular_abelian<P: Point>(factors: &[usize]) -> Result<PermGroup<P>> {
    if factors.is_empty() || factors.iter().any(|&d| d < 2) {
        return Err(Error::InvalidConstruction(format!(
            "invariant factors must be ≥ 2, got {factors:?}"
        )));
    }
    let degree: usize = factors.iter().product();
    let mut gens = Vec::with_capacity(factors.len());
    let mut stride = 1;
    for &d in factors {
        let images: Vec<usize> = (0..degree)
            .map(|x| {
                let digit = (x / stride) % d;
                x - digit * stride + ((digit + 1) % d) * stride
            })
            .collect();
        gens.push(Permutation::from_images(&images)?);
        stride *= d;
    }
    PermGroup::generate(&gens, degree)
}

/// A subgroup `G` of `A ≀ B` together with the block data needed for the
/// projections `f₀ : G → B` and `fᵢ : N → A`.
#[derive(Clone, Debug)]
pub struct WreathEmbedding<P: Point> {
    a: PermGroup<P>,
    b: PermGroup<P>,
    g: PermGroup<P>,
}

fn check_regular_abelian<P: Point>(a: &PermGroup<P>) -> Result<()> {
    if a.order() != a.degree() || !a.is_transitive() || !a.is_abelian() {
        return Err(Error::InvalidConstruction(
            "A must be abelian in its regular representation".into(),
        ));
    }
    if a.is_trivial() {
        return Err(Error::InvalidConstruction("A must be nontrivial".into()));
    }
    Ok(())
}

fn wreath_order(a: &PermGroup<impl Point>, b: &PermGroup<impl Point>, m_order: usize) -> Option<usize> {
    a.order().checked_pow(b.degree() as u32)?.checked_mul(m_order)
}

/// The full wreath product `A ≀ B` of degree `m·|A|`.
pub fn wreath<P: Point>(a: &PermGroup<P>, b: &PermGroup<P>, order_cap: usize) -> Result<WreathEmbedding<P>> {
    check_regular_abelian(a)?;
    if !b.is_transitive() {
        return Err(Error::InvalidConstruction("B must be transitive".into()));
    }
    match wreath_order(a, b, b.order()) {
        Some(n) if n <= order_cap => {}
        _ => return Err(Error::CapExceeded { what: "wreath product order", cap: order_cap }),
    }
    let degree = a.degree() * b.degree();
    if degree > P::max_degree() {
        return Err(Error::DegreeTooLarge { degree, max: P::max_degree() });
    }
    let shell = WreathEmbedding { a: a.clone(), b: b.clone(), g: PermGroup::trivial(degree) };
    let mut gens: Vec<Permutation<P>> =
        a.generators().iter().map(|x| shell.in_block(x, 0)).collect();
    gens.extend(b.generators().iter().map(|beta| shell.block_permutation(beta)));
    let g = PermGroup::generate(&gens, order_cap)?;
    Ok(WreathEmbedding { g, ..shell })
}

/// `G = A ≀ B` and `T = A^m ⋊ M` for a subgroup `M ≤ B`, where `M` keeps
/// its degree-`m` action (possibly intransitive).
pub fn wreath_with_subgroup<P: Point>(
    a: &PermGroup<P>,
    b: &PermGroup<P>,
    m_sub: &PermGroup<P>,
    order_cap: usize,
) -> Result<(WreathEmbedding<P>, PermGroup<P>)> {
    if !m_sub.is_subgroup_of(b) {
        return Err(Error::NotSubgroup("M is not a subgroup of B".into()));
    }
    let emb = wreath(a, b, order_cap)?;
    let t = emb.wreath_over(m_sub)?;
    Ok((emb, t))
}

impl<P: Point> WreathEmbedding<P> {
    pub fn a(&self) -> &PermGroup<P> {
        &self.a
    }

    pub fn b(&self) -> &PermGroup<P> {
        &self.b
    }

    pub fn group(&self) -> &PermGroup<P> {
        &self.g
    }

    pub fn block_size(&self) -> usize {
        self.a.degree()
    }

    pub fn block_count(&self) -> usize {
        self.b.degree()
    }

    pub fn degree(&self) -> usize {
        self.block_size() * self.block_count()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let s = self.block_size();
        (0..self.block_count()).map(|i| (i * s..(i + 1) * s).collect()).collect()
    }

    /// Same `A`, `B` and blocks, with `G` replaced by a subgroup `h`.
    pub fn restrict(&self, h: PermGroup<P>) -> Result<Self> {
        if !h.is_subgroup_of(&self.g) {
            return Err(Error::NotSubgroup("restriction target is not inside G".into()));
        }
        Ok(WreathEmbedding { a: self.a.clone(), b: self.b.clone(), g: h })
    }

    /// An element of `A` acting on block `i`, identity elsewhere.
    pub fn in_block(&self, x: &Permutation<P>, i: usize) -> Permutation<P> {
        let s = self.block_size();
        let images: Vec<usize> = (0..self.degree())
            .map(|p| if p / s == i { i * s + x.apply(p % s) } else { p })
            .collect();
        Permutation::from_images(&images).unwrap()
    }

    /// An element of `A` acting identically on every block.
    pub fn diagonal(&self, x: &Permutation<P>) -> Permutation<P> {
        let s = self.block_size();
        let images: Vec<usize> = (0..self.degree()).map(|p| (p / s) * s + x.apply(p % s)).collect();
        Permutation::from_images(&images).unwrap()
    }

    /// Lift of a block permutation `β ∈ B` that keeps offsets.
    pub fn block_permutation(&self, beta: &Permutation<P>) -> Permutation<P> {
        let s = self.block_size();
        let images: Vec<usize> = (0..self.degree()).map(|p| beta.apply(p / s) * s + p % s).collect();
        Permutation::from_images(&images).unwrap()
    }

    /// `A^m ⋊ M` for a subgroup `M ≤ B`.
    pub fn wreath_over(&self, m_sub: &PermGroup<P>) -> Result<PermGroup<P>> {
        if !m_sub.is_subgroup_of(&self.b) {
            return Err(Error::NotSubgroup("M is not a subgroup of B".into()));
        }
        let mut gens = Vec::new();
        for i in 0..self.block_count() {
            gens.extend(self.a.generators().iter().map(|x| self.in_block(x, i)));
        }
        gens.extend(m_sub.generators().iter().map(|beta| self.block_permutation(beta)));
        PermGroup::generate(&gens, self.g.order())
    }

    /// `⟨B's generators acting on blocks⟩`, a complement to the base.
    pub fn block_copy_of_b(&self) -> PermGroup<P> {
        let gens: Vec<_> = self.b.generators().iter().map(|beta| self.block_permutation(beta)).collect();
        PermGroup::generate(&gens, self.b.order()).unwrap()
    }

    /// `⟨diag(A), B on blocks⟩ ≅ A × B`: tower type but without pure elements
    /// once `m ≥ 2`.
    pub fn diagonal_subgroup(&self) -> PermGroup<P> {
        let mut gens: Vec<_> = self.a.generators().iter().map(|x| self.diagonal(x)).collect();
        gens.extend(self.b.generators().iter().map(|beta| self.block_permutation(beta)));
        PermGroup::generate(&gens, self.g.order()).unwrap()
    }

    /// Block permutation induced by `g`.
    pub fn f0(&self, g: &Permutation<P>) -> Result<Permutation<P>> {
        let s = self.block_size();
        let mut images = Vec::with_capacity(self.block_count());
        for i in 0..self.block_count() {
            let target = g.apply(i * s) / s;
            if (i * s..(i + 1) * s).any(|p| g.apply(p) / s != target) {
                return Err(Error::InvalidConstruction(format!("{g} does not permute the blocks")));
            }
            images.push(target);
        }
        Permutation::from_images(&images)
    }

    /// Translation of `A` performed on block `i` by a block-preserving
    /// element.
    pub fn fi(&self, n: &Permutation<P>, i: usize) -> Result<Permutation<P>> {
        if i >= self.block_count() {
            return Err(Error::InvalidConstruction(format!("block {i} out of range")));
        }
        if !self.f0(n)?.is_identity() {
            return Err(Error::NotBlockPreserving);
        }
        let s = self.block_size();
        let images: Vec<usize> = (0..s).map(|x| n.apply(i * s + x) - i * s).collect();
        let x = Permutation::from_images(&images)?;
        if !self.a.contains(&x) {
            return Err(Error::InvalidConstruction(format!("block action {x} is not in A")));
        }
        Ok(x)
    }

    fn is_base_element(&self, g: &Permutation<P>) -> bool {
        let s = self.block_size();
        g.images().enumerate().all(|(p, q)| p / s == q / s)
    }

    /// `N = A^m ∩ H`: the elements of `h` fixing every block setwise.
    pub fn base_subgroup(&self, h: &PermGroup<P>) -> PermGroup<P> {
        h.subgroup_where(|g| self.is_base_element(g))
    }

    /// `f₀(H) ≤ B`, generated by the images of `h`'s generators.
    pub fn f0_image(&self, h: &PermGroup<P>) -> Result<PermGroup<P>> {
        let gens: Vec<_> = h.generators().iter().map(|g| self.f0(g)).collect::<Result<_>>()?;
        PermGroup::generate(&gens, self.b.order().max(h.order()))
    }

    /// `f₀(H) = B` and every `fᵢ(A^m ∩ H) = A`.
    pub fn is_tower_type(&self, h: &PermGroup<P>) -> Result<bool> {
        if self.f0_image(h)?.order() != self.b.order() {
            return Ok(false);
        }
        let base = self.base_subgroup(h);
        for i in 0..self.block_count() {
            let gens: Vec<_> =
                base.generators().iter().map(|n| self.fi(n, i)).collect::<Result<_>>()?;
            if PermGroup::generate(&gens, self.a.order())?.order() != self.a.order() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether a base element is nontrivial in exactly one block.
    pub fn is_pure(&self, g: &Permutation<P>) -> bool {
        if !self.is_base_element(g) {
            return false;
        }
        let s = self.block_size();
        let moved_blocks =
            (0..self.block_count()).filter(|&i| (i * s..(i + 1) * s).any(|p| g.apply(p) != p)).count();
        moved_blocks == 1
    }

    pub fn pure_elements(&self, h: &PermGroup<P>) -> Vec<Permutation<P>> {
        h.elements().filter(|g| self.is_pure(g)).cloned().collect()
    }
}
