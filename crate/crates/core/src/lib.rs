//! Exact algebraic tools for configurations of low pattern complexity.

pub mod annihilator;
pub mod catalog;
pub mod cli;
pub mod config;
pub mod decomposition;
pub mod error;
pub mod laurent;
pub mod lattice;
mod linalg;
pub mod nivat;
pub mod parse;
pub mod quadratic;
pub mod tiling;
pub mod window;

pub use error::{Error, Result};
