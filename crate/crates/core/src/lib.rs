//! Verification and hyperideal classification for finite Krasner
//! (m,n)-hyperrings.
//!
//! A structure is a carrier with an m-ary hyperoperation `f` and an n-ary
//! operation `g`, stored as dense tables. [`axioms`] checks the Krasner
//! axioms; every downstream computation takes a verified [`Hyperring`].

pub mod audit;
pub mod axioms;
pub mod catalog;
pub mod classify;
pub mod elem;
pub mod error;
pub mod expansion;
pub mod format;
pub mod ideals;
pub mod limits;
pub mod morphology;
pub mod search;
pub mod structure;
#[cfg(test)]
mod testing;

pub use axioms::{verify_canonical_hypergroup, verify_krasner, AxiomReport, Hyperring};
pub use elem::{Elem, ElemSet};
pub use error::{Error, Result};
pub use ideals::{Analysis, IdealLattice};
pub use limits::Limits;
pub use structure::FiniteStructure;
