//! Permutation groups, wreath products and Malle-type invariants, with
//! hypothesis checkers for the wreath-product counting theorems and a
//! numeric check of the abelian base case over ℚ.

pub mod abelian_base;
pub mod checker;
pub mod cli;
pub mod constructions;
pub mod dsl;
pub mod error;
pub mod group;
pub mod invariants;
pub mod numtheory;
pub mod perm;
pub mod quotient;
pub mod report;
pub mod subgroups;

pub use error::{Error, Result};

/// Points stored as `u16`: degrees up to 65535.
pub type Perm = perm::Permutation<u16>;
pub type Group = group::PermGroup<u16>;
pub type Embedding = constructions::WreathEmbedding<u16>;
pub type Datum<'a> = invariants::GaloisDatum<'a, u16>;
pub type Rational = num_rational::Ratio<i64>;
pub type Fit = abelian_base::ExponentFit<f64>;
