//! Permutations of `{0, …, n-1}` stored as image tables.
//!
//! The point type `P` is any unsigned primitive integer; it bounds the
//! largest representable degree (`u8` up to 256 points, `u16` up to 65536).

use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{PrimInt, Unsigned};

use crate::error::{Error, Result};

/// Scalar type used to store points of a permutation.
pub trait Point: PrimInt + Unsigned + Hash + fmt::Debug + Send + Sync + 'static {
    #[inline]
    fn to_index(self) -> usize {
        // always fits: points are bounded by the degree, which is a usize
        num_traits::ToPrimitive::to_usize(&self).unwrap()
    }

    #[inline]
    fn from_index(i: usize) -> Self {
        <Self as num_traits::NumCast>::from(i).expect("point exceeds point type range")
    }

    /// Largest degree whose points all fit in `Self`.
    fn max_degree() -> usize {
        num_traits::ToPrimitive::to_usize(&Self::max_value())
            .map(|m| m.saturating_add(1))
            .unwrap_or(usize::MAX)
    }
}

impl Point for u8 {}
impl Point for u16 {}
impl Point for u32 {}
impl Point for usize {}

/// A bijection of `{0, …, n-1}`; `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation<P: Point> {
    images: Box<[P]>,
}

/// Disjoint cycles of a permutation; fixed points appear as 1-cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

fn check_degree<P: Point>(degree: usize) -> Result<()> {
    if degree == 0 {
        return Err(Error::InvalidPermutation("degree must be positive".into()));
    }
    if degree > P::max_degree() {
        return Err(Error::DegreeTooLarge { degree, max: P::max_degree() });
    }
    Ok(())
}

impl<P: Point> Permutation<P> {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).map(P::from_index).collect() }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        check_degree::<P>(images.len())?;
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in images {
            if y >= n || seen[y] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[y] = true;
        }
        Ok(Permutation { images: images.iter().map(|&y| P::from_index(y)).collect() })
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        check_degree::<P>(degree)?;
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} out of range for degree {degree}"
                    )));
                }
                if touched[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} appears in more than one cycle"
                    )));
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x].to_index()
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|p| p.to_index())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, p)| p.to_index() == i)
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.after(other))
    }

    /// Unchecked `self ∘ other`; degrees must agree.
    #[inline]
    pub(crate) fn after(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&q| self.images[q.to_index()]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![P::zero(); self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y.to_index()] = P::from_index(x);
        }
        Permutation { images: inv.into_boxed_slice() }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        // (g p g⁻¹)(g(x)) = g(p(x))
        let mut out = vec![P::zero(); self.degree()];
        for x in 0..self.degree() {
            out[g.apply(x)] = g.images[self.apply(x)];
        }
        Permutation { images: out.into_boxed_slice() }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        (0..self.degree()).all(|x| self.apply(other.apply(x)) == other.apply(self.apply(x)))
    }

    /// Commutator `a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().after(&b.inverse()).after(a).after(b)
    }

    pub fn cycles(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    fn cycle_count(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
            }
        }
        count
    }

    /// Malle index: degree minus the number of cycles.
    pub fn index(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    pub fn order(&self) -> u64 {
        self.cycles().cycles.iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// `self^k` for any integer `k`, computed cycle by cycle.
    pub fn pow(&self, k: i64) -> Self {
        let mut out = vec![P::zero(); self.degree()];
        for cycle in self.cycles().cycles {
            let len = cycle.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (i, &x) in cycle.iter().enumerate() {
                out[x] = P::from_index(cycle[(i + shift) % cycle.len()]);
            }
        }
        Permutation { images: out.into_boxed_slice() }
    }

    pub fn is_transposition(&self) -> bool {
        let moved = self.images().enumerate().filter(|&(i, y)| i != y).count();
        moved == 2
    }

    /// Same permutation with a different point type.
    pub fn cast<Q: Point>(&self) -> Result<Permutation<Q>> {
        check_degree::<Q>(self.degree())?;
        Ok(Permutation { images: self.images().map(Q::from_index).collect() })
    }
}

impl<P: Point> fmt::Display for Permutation<P> {
    /// Cycle notation without 1-cycles; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().cycles.iter().filter(|c| c.len() > 1) {
            any = true;
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl<P: Point> fmt::Debug for Permutation<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[deg {}]", self.degree())
    }
}
