//! Exact-arithmetic workbench for left-computable reals, prefix-free
//! complexity, Kraft–Chaitin coding and strong Kurtz tests.

pub mod conversions;
pub mod error;
pub mod foundations;
pub mod immunity;
pub mod kraft_chaitin;
pub mod machines;
pub mod randomness_tests;
pub mod reals;
pub mod spectra;

pub use error::{Error, Result};
