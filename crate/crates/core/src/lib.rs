//! Adámek-style chain constructions over finite categories: initial algebras,
//! free and lax-free algebras, terminal coalgebras, fixed-point reflections,
//! Kleene iteration on finite lattices, Σ/Θ combinatorics and rank of
//! higher-category hom skeletons.
//!
//! ```
//! use fixcat::adamek;
//! use fixcat::cat::{Budget, FinSets, FunctorSpec};
//!
//! // X ↦ X² has the empty set as initial algebra
//! let cert = adamek::initial_algebra(&FinSets, &FunctorSpec::monomial(1, 2), &Budget::default())?;
//! assert_eq!(cert.algebra.carrier.len(), 0);
//! println!("{} at stage {}", cert.algebra.carrier, cert.stabilized.index);
//! # Ok::<(), fixcat::Error>(())
//! ```

pub mod adamek;
pub mod algebra;
pub mod cli;
pub mod cat;
pub mod error;
pub mod fixpoint;
pub mod io;
pub mod lattice;
pub mod rank;
pub mod sigma;
pub mod sweep;

pub use cat::{Budget, Category, Endofunctor};
pub use error::{Error, Result};
