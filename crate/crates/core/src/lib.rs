//! Exact computations with Betti vectors of graded differential modules.
//!
//! Polynomials and matrices are over `Q`. The crate covers folding and
//! flattening, pure Betti vectors, unit-cancellation minimalization, the
//! degree-zero theory over `k[t]` (decomposition into pure pairs and homology
//! barcodes), the pairing with cohomology tables of supernatural bundles, and
//! facet enumeration for the resulting cones.

pub mod betti;
pub mod cli;
pub mod dm;
pub mod error;
pub mod kt;
pub mod linalg;
pub mod matrix;
pub mod pairing;
pub mod poly;
pub mod polyhedra;
pub mod pure;
pub mod random;
pub mod rational;
pub mod sheaf;

pub use betti::{flatten, BettiTable, BettiVector, DegreeSequence};
pub use dm::{fold, koszul, minimalize, ComplexRep, FreeDM};
pub use error::{Error, Result};
pub use kt::{barcode, decompose, Barcode, PurePair};
pub use matrix::GradedMatrix;
pub use pairing::{audit_conjecture, induced_functional, phi_vector, LinearFunctional};
pub use poly::{Poly, Ring};
pub use polyhedra::{membership, v_to_h, ConeH, ConeV, Membership};
pub use pure::{enumerate_pure_vectors, hk_table, PureSpec};
pub use rational::Rational;
pub use sheaf::{gamma, SheafSpec};
