//! Exact arithmetic for one-dimensional formal group laws over finite-
//! precision local rings, Koszul complex homology over explicit finite
//! algebras, and brute-force enumeration of truncated group-law groupoids.
//!
//! The crate is organized bottom-up:
//!
//! * [`ring`]: the [`ring::Ring`] abstraction plus small concrete rings
//!   (integers, rationals, Z/m, F_q).
//! * [`local`]: W(F_q) and its totally ramified extensions with honest
//!   pi-adic precision tracking.
//! * [`series`]: truncated multivariate power series over any [`ring::Ring`].
//! * [`fgl`]: formal group laws, logarithms, isogenies, heights and
//!   isomorphism search.
//! * [`koszul`]: Koszul complexes of explicit sequences in finite-rank
//!   algebras and their integral homology.
//! * [`moduli`]: exhaustive enumeration of group-law buds over small residue
//!   rings together with the coordinate-change groupoid.
//! * [`sampling`]: seeded random generation used by tests and the self-test
//!   battery.

pub mod arith;
pub mod error;
pub mod fgl;
pub mod koszul;
pub mod local;
pub mod moduli;
pub mod ring;
pub mod sampling;
pub mod series;

pub use error::{Error, Result};
