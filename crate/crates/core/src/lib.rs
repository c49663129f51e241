//! Combinatorial models of 2-dimensional reflection orbicomplexes, their
//! finite orbifold covers, and the invariants used to tell covers apart.
//!
//! The crate is organised bottom-up:
//!
//! * [`orbicore`]: pieces, marked graphs, orbicomplexes, orbifold Euler
//!   characteristic, singular subspaces, ribbon neighbourhoods and marked
//!   graph isomorphism.
//! * [`coxeter`]: defining graphs of right-angled Coxeter groups, branch
//!   decomposition and the Davis orbicomplex built from reflection polygons.
//! * [`covers`]: covering maps, their verification, and the explicit
//!   constructions (reflection/rotation doubles, degree-2 lifts, surface
//!   towers, torsion-free covers).
//! * [`invariants`]: fundamental group presentations, Smith normal form,
//!   abelianization and the planar normal form certificate.
//! * [`demo`]: the end-to-end pipeline producing two homotopy equivalent but
//!   non-homeomorphic covers of a single Davis orbicomplex.

pub mod covers;
pub mod coxeter;
pub mod demo;
pub mod error;
pub mod invariants;
pub mod orbicore;

pub use error::{Error, Result};
