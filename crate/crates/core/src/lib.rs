//! Exact SL2 generator arithmetic, Cayley-graph spectral gaps over SL2(Z/p),
//! and skew-product actions of the free group on truncated products of
//! SL2(Z/p) factors.
//!
//! The crate is `no_std` with `alloc`. The `parallel` feature (which implies
//! `std`) spreads freeness scans, operator application and prime scans over
//! rayon workers without changing results.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod cayley;
pub mod dynamics;
pub mod rng;
pub mod sl2;
pub mod spectra;
pub mod words;

pub use cayley::{enumerate_group, generation_check, walk_operator, GenerationReport, GroupTable};
pub use sl2::{canonical_generators, GeneratorSet, Generators, IntMat2, ModMat2, Prime};
pub use spectra::{SpectralReport, WalkOperator};
pub use words::{freeness_scan, FreenessReport, Word};
