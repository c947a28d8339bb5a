//! Exact classification of algebra objects in quadratic fusion rings.
//!
//! Field arithmetic lives in [`qfield`], ring data in [`fusionring`], the
//! integer factorization search in [`gramsearch`], graph assembly in
//! [`pgraph`] and the classification pipeline in [`algsearch`]; [`izumi`]
//! and [`lattice`] build on the pipeline.

pub mod algsearch;
pub mod fusionring;
pub mod gramsearch;
pub mod izumi;
pub mod lattice;
pub mod pgraph;
pub mod qfield;
