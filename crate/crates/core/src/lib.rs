//! Homology of classifying spaces of abelian groups, toral/atoral splittings,
//! geometric generators with curvature status, curvature verdicts for closed
//! manifolds with abelian fundamental group, and the numerical Toda-bracket
//! curvature bounds.

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod error;
pub mod grammar;

pub use error::{Error, Result};
pub mod geometry;
pub mod homology;
pub mod oracle;
pub mod structure;
pub mod verdict;
