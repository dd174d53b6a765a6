//! Degree-zero Donaldson-Thomas series of Calabi-Yau-free threefolds.
//!
//! `DT_{X,0}(q) = M(-q)^{K}` with `K = ∫ c_3(T_X ⊗ K_X)`. The crate computes
//! the series exactly, decomposes Chern numbers over a rational cobordism
//! basis, and checks the combinatorial identities on set-partition lattices
//! that underpin the discrepancy-cycle argument.

pub mod chern;
pub mod cli;
pub mod cobordism;
pub mod dt_engine;
pub mod exec;
pub mod lattice;
pub mod macmahon;
pub mod poly;
pub mod series;
pub mod suites;

pub use chern::{BuiltinThreefold, ChernNumbers, ThreefoldSpec};
pub use dt_engine::{dt_series, DtSeries};
pub use series::TruncatedSeries;
