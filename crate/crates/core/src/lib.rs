//! Exact combinatorics of the symplectic-leaf stratification of `P Ext^1(F, O)`
//! for a stable bundle `F` of rank `k` and degree `n` on an elliptic curve.
//!
//! A middle term `E` of a non-split extension `0 -> O -> E -> F -> 0` is
//! admissible exactly when the interior vertices of its Harder-Narasimhan
//! polygon lie strictly inside the triangle with corners `(0,0)`, `(k+1,n)`
//! and `(k,n)`. This crate enumerates those types, computes the generic
//! leaf, moduli and stratum dimensions for each, and orders the types by
//! polygon containment.
//!
//! Everything is exact integer arithmetic.

pub mod atlas;
pub mod bundles;
pub mod charges;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod polygons;

pub use error::{Error, Result};
