//! Finite quantales, V-groups and the torsion-theoretic constructions on them.
//!
//! Everything is finite and exhaustively checked, except the `ℤ × X` descent
//! cover in [`descent`], which is evaluated lazily and verified on windows.

pub mod builders;
pub mod checks;
pub mod cli;
pub mod descent;
pub mod document;
pub mod error;
pub mod factorization;
pub mod group;
pub mod quantale;
pub mod report;
pub mod torsion;
pub mod vgroup;
pub mod vrel;

pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use quantale::{BuiltinQuantale, Elem, Quantale, QuantaleTables};
pub use report::{Report, Violation};
pub use vgroup::{ObjectClass, VGroup, VHom};
pub use vrel::VRel;
