//! Exact computations of linear strands of elliptic normal curves, their
//! determinantal scrolls and higher secant varieties over prime fields.

pub mod error;
pub mod diagrams;
pub mod ellcurve;
pub mod exactlin;
pub mod formulas;
pub mod idealgen;
pub mod koszul;

pub use error::{Error, Result};
