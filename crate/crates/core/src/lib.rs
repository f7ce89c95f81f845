//! Graded gentle algebras and the geometric model of their perfect derived
//! categories: dissections, graded arcs as string dg modules, Hom cohomology,
//! intersection counts, smoothing of threads and the half-rotation model of
//! Koszul duality.

pub mod dissection;
pub mod error;
pub mod fixtures;
pub mod gentle;
pub mod homalg;
pub mod intersect;
pub mod koszul;
pub mod random;
pub mod string;
pub mod verify;

pub use error::{Error, Result};
