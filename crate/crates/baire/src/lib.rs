//! Constructive Baire category on Cantor and Baire space.
//!
//! Every infinite object is a lazily evaluated name; every finite
//! observation is fuel bounded and reports [`names::Outcome::Inconclusive`]
//! instead of guessing.

pub mod closed_sets;
pub mod comeager;
pub mod error;
pub mod genericity;
pub mod instance;
pub mod names;
pub mod par;
pub mod random;
pub mod solvers;
pub mod spaces;

pub use error::{Error, Result};
