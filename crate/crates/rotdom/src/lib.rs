//! Bedford–Kim rotation-domain automorphisms: Salem certification, Picard
//! lattice, multipliers, power-series linearization and numerical probes.

pub mod blowup;
pub mod error;
pub mod family;
pub mod num;
pub mod picard;
pub mod probes;
pub mod salem;
pub mod series;

pub use error::{Error, Result};
pub use num::BigComplex;
