//! Exact arithmetic for two-dimensional local fields F_q((u))((t)): symbols, residues,
//! Witt pairings and reciprocity checks on desk-scale examples.

pub mod cli;
pub mod error;
pub mod ff;
pub mod forms;
pub mod gen;
pub mod global;
pub mod parser;
pub mod par;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod series;
pub mod symbols;
pub mod witt;

pub use error::{Error, Result};
