//! Cluster structures on double Bruhat cells and their Donaldson-Thomas
//! transformations, with exact arithmetic throughout.

#![allow(clippy::needless_range_loop)]

pub mod cluster;
pub mod dtengine;
pub mod liematrix;
pub mod rootdata;
pub mod seed;
pub mod symfun;
pub mod tropical;

pub use rootdata::{CartanMatrix, PairWord, RootDataError, WeylWord};
pub use symfun::{Positivity, RationalFunction, SymError, Var};
