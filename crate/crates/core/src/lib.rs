//! Invariably generating graphs of PSL(2, q) and its direct powers.
//!
//! The pipeline runs bottom-up: [`gf`] arithmetic, [`psl2`] elements and
//! symbolic classes, [`structure`] maximal subgroups and the generating pair
//! table, [`autorbits`] outer automorphisms and `beta`, [`iggraph`] graphs
//! and bounds. [`oracle`] recomputes the small cases by brute force and
//! [`verify`] sweeps ranges of `q`.

pub mod arith;
pub mod autorbits;
pub mod cli;
pub mod error;
pub mod gf;
pub mod iggraph;
pub mod oracle;
pub mod psl2;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
