//! Second cohomology of simple modules for SL₃ in positive characteristic.
//!
//! Two independent routes compute `dim H^2(G, L(λ))`: a recursive
//! spectral-sequence pipeline over the Frobenius kernel tables
//! ([`h2_pipeline`]) and a pattern classifier over the ten known families
//! ([`h2_classifier`]). The [`harness`] compares them.

pub mod error;
pub mod ext1_tables;
pub mod g1_cohom;
pub mod h2_classifier;
pub mod h2_pipeline;
pub mod harness;
pub mod module_expr;
pub mod pattern;
pub mod scalar;
pub mod tables;
pub mod weight_lattice;
pub mod weyl_linkage;

pub use error::{Error, Result};
pub use h2_classifier::{Classification, Classifier, PatternMatch};
pub use h2_pipeline::{H2Pipeline, PipelineResult, Trace};
pub use module_expr::{Chain, ModuleExpr};
pub use scalar::Coord;
pub use tables::{Errata, PrimeTables, Tables};
pub use weight_lattice::{Decomposition, Prime, Weight};
pub use weyl_linkage::WeylElement;

pub type Weight64 = Weight<i64>;
pub type Weight128 = Weight<i128>;
pub type BigWeight = Weight<num_bigint::BigInt>;
