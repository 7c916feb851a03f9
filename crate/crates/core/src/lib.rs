//! Computational toolkit for the classification of two-dimensional conformal
//! nets with central charge below one: fusion rings, modular data, modular
//! invariants, quantum 6j symbols and connections, scalar 2-cocycles and
//! sub-system enumeration.

pub mod cache;
pub mod catalog;
pub mod cli;
pub mod cocycle;
pub mod connection;
pub mod format;
pub mod fusion;
pub mod labelset;
pub mod modinv;
pub mod modular;
pub mod sixj;
pub mod subcat;
pub mod suites;

pub use fusion::{FusionError, FusionRing};
pub use labelset::LabelSet;
