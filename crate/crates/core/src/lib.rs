//! Subgroups of the modular group, their Farey symbols, and the lifts of
//! their projective images from PSL2(Z) to SL2(Z).
//!
//! The pipeline: a membership oracle for a finite-index subgroup yields a
//! signed Farey symbol (a fundamental domain with side pairings), the symbol
//! yields a free-ish presentation, lifts to SL2(Z) correspond to sign vectors
//! over the generators, and writing the generators of a principal congruence
//! group Gamma(M) as words over those generators turns the congruence
//! question for each lift into a linear system over GF(2).  The general
//! (Wohlfahrt) level N pins the only two moduli that can occur, N and 2N.
//!
//! Everything is exact integer arithmetic; there are no tolerances anywhere.

pub mod arith;
pub mod f2;
pub mod farey;
pub mod groups;
pub mod lifts;
pub mod modforms;
pub mod prepared;
pub mod squares;
pub mod verify;

mod exec;

pub use arith::{proj, Cusp, Mat2, ProjMat2};
pub use f2::F2Vec;
pub use farey::{build_farey, BuildOptions, Label, ReducedWord, Reducer, SignedFareySymbol};
pub use groups::{legendre, GroupSpec, Member, StandardOracle};
pub use lifts::{classify_lifts, predicted_counts, Classification, LiftClass, LiftDescriptor};
pub use prepared::{prepare, PreparedGroup};
