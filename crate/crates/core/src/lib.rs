//! Certified bounds on the information ratio between graphs, with the exact
//! and numerical invariants they rest on.

pub mod bitset;
pub mod cache;
pub mod canon;
pub mod capacity;
pub mod certificate;
pub mod clique;
pub mod code;
pub mod config;
pub mod criticality;
pub mod error;
pub mod expr;
pub mod fractional;
pub mod graph;
pub mod hom;
pub mod invariants;
pub mod lp;
pub mod ratio;
pub mod real;
pub mod relations;
pub mod theta;

pub use error::{Error, Result};
pub use graph::Graph;
