//! Exact q-series arithmetic for eta products, the generalized tau function
//! `τ_k(n)`, restricted partition counts, and an executable registry of
//! congruences relating them.

pub mod arith;
pub mod congruences;
pub mod error;
pub mod partitions;
pub mod series;
pub mod tau;

pub use error::{Error, Result};
pub use series::{eta_factor, eta_product, eta_product_mod, EtaProductSpec, IntSeries, ModSeries};
pub use tau::{Route, TauTable};
