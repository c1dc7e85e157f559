//! Exact symbolic engine for noncommutative deformation and contraction algebras.

pub mod bundlecalc;
pub mod cli;
pub mod commpoly;
pub mod expr;
pub mod freealg;
pub mod ncgb;
pub mod linalg;
pub mod matfac;
pub mod rational;
pub mod report;
pub mod zoo;
