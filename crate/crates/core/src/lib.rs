//! Decision and quantification of non-classicality for two-party Bell
//! correlations, in probability space (exact Bell-functional and
//! linear-programming certificates over the no-signalling polytope) and in
//! entropy space (Shannon and Tsallis Braunstein-Caves inequalities under
//! relabelling, coarse-graining and classical-mixing post-processing).

pub mod bell;
pub mod catalog;
pub mod dist;
pub mod entropy;
pub mod lp;
pub mod rat;
pub mod scenario;
pub mod search;
pub mod sym;

pub use dist::{mix, mix2, Distribution, Party};
pub use rat::Rat;
pub use scenario::Scenario;

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
