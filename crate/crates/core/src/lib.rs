//! Numerical toolkit for Orlicz (Luxemburg) norms, Lorentz quasi-norms and
//! Young-function calculus, with volume-condition certificates for
//! composition operators `C_τ f = f ∘ τ` from Lorentz into Orlicz spaces.

pub mod composition;
pub mod config;
mod error;
pub mod measure;
pub mod norm;
pub mod quadrature;
pub mod report;
pub mod run;
pub mod search;
pub mod young;

pub use error::{Error, Result};
