//! Tripartite extremal graph toolkit: projective-plane based `K3(s)`-free
//! constructions, exact `K2(s)`/`K3(s)` detection, bound formulas, and the
//! triangle-link pipeline that extracts `K3(s)` from dense tripartite graphs.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod finder;
pub mod gf;
pub mod graph;
pub mod plane;
pub mod search;

pub use error::{Error, Result};
