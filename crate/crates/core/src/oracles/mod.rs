//! Independent ground truth: residue counting for `F_m* O(d)` and a
//! Čech-cochain cohomology computer for `Ω^p(k)`.

pub mod cech;
pub mod linalg;
pub mod thomsen;

pub use cech::{koszul_cech, MonomialComplex};
pub use thomsen::{thomsen_counts, thomsen_enumerate, ResidueCount};
