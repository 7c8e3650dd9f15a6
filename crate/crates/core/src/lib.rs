//! Exact invariants of central hyperplane arrangements.
//!
//! Everything is computed over the rationals with no floating point:
//! intersection lattices and their Möbius functions, Poincaré and
//! characteristic polynomials, the graded modules of logarithmic
//! derivations and forms, freeness and local-freeness certificates,
//! Hilbert series, Betti tables, and truncated Chern-polynomial
//! arithmetic with the limit formula tying them together.

pub mod arrangement;
pub mod hilbert;
pub mod lattice;
pub mod laurent;
pub mod matrix;
pub mod mpoly;
pub mod rat;
pub mod trunc;
pub mod upoly;
pub mod useries;

pub use arrangement::{Arrangement, ArrangementError, ArrangementFile, Family};
pub use hilbert::{hilbert_series_free, CutoffTooSmall, HilbertSeries};
pub use lattice::{
    characteristic_poly, essentialize, intersection_lattice, localize, poincare_poly, Lattice,
    LatticeElement,
};
pub use laurent::LaurentPoly;
pub use matrix::RatMatrix;
pub use mpoly::{MPoly, Monomial};
pub use rat::Rat;
pub use trunc::{TruncError, TruncPoly};
pub use upoly::UPoly;
pub use useries::{expand_at_one, USeries};
