//! Universal complexes of singular fibers for proper stable maps of
//! 3-manifolds with boundary into surfaces, and the cobordism invariants
//! they induce on stable Morse functions of surfaces with boundary.
//!
//! Everything is computed over GF(2):
//!
//! * [`gf2`]: bit-packed vectors and matrices, rank, kernels, solving.
//! * [`catalog`]: fiber class names and their flags.
//! * [`cochain`]: cochains, complexes, cohomology, cochain maps.
//! * [`universal`]: the three concrete complexes, suspension, parity laws.
//! * [`morse`]: traces of Morse functions, validation and fiber counts.
//! * [`invariants`]: evaluation of cocycles on traces.
//! * [`verify`]: the checks run by `fibercomplex verify-paper`.

pub mod catalog;
pub mod cli;
pub mod cochain;
pub mod gf2;
pub mod invariants;
pub mod morse;
pub mod universal;
pub mod verify;

pub use catalog::{Base, Catalog, ClassName, Components, Parity};
pub use cochain::{Cochain, CochainComplex, CochainMap};
pub use invariants::{Invariant, InvariantValue, NamedClass};
pub use morse::{CountVector, MorseTrace, Target};
pub use universal::{complex, ComplexVariant, ParityConstraint};
