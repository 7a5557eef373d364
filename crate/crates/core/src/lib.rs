//! Exact computation of Nichols algebras over prime fields GF(p), p > 2.
//!
//! The crate builds the braided vector spaces made of blocks, points and
//! pale blocks over a fixed odd prime field, computes their Nichols
//! algebras degree by degree via skew-derivation calculus, and verifies
//! presentations, PBW data, Hilbert series and dimension formulas against
//! a built-in catalog of families. Realizations over finite abelian
//! groups and the resulting bosonization dimensions are covered by the
//! [`realize`] module.
//!
//! Layering, bottom to top:
//!
//! * [`ffla`] — dense exact linear algebra over GF(p);
//! * [`freealg`] — the free algebra T(V) on indexed generators and
//!   q-combinatorics;
//! * [`braided`] — braided vector spaces, group actions, brackets, skew
//!   derivations, braided coproduct;
//! * [`engine`] — degreewise computation of B(V), canonical reduction and
//!   the quantum-symmetrizer oracle;
//! * [`catalog`] — the named families with relations, PBW data and
//!   expected dimensions;
//! * [`analyzer`] — the coinvariant space K¹, its diagonal braiding and
//!   Dynkin components, coaction identities;
//! * [`realize`] — Yetter–Drinfeld pairs/triples over finite abelian
//!   groups and bosonization bookkeeping.

pub mod analyzer;
pub mod braided;
pub mod catalog;
pub mod engine;
pub mod ffla;
pub mod freealg;
pub mod realize;

pub use braided::{BraidedSpace, BraidedSpaceSpec, Family};
pub use catalog::{CatalogEntry, FamilyId};
pub use engine::NicholsState;
pub use ffla::{FpMatrix, PrimeField};
pub use freealg::{FreeElement, Word};
