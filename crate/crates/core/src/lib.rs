//! Signed (sum-difference) Kraus representations of quantum channels.
//!
//! A Choi matrix is split into Hermitian pieces, each piece is diagonalized on
//! its own, and eigenvectors with positive and negative eigenvalues fold into
//! positive and negative operators. The generalized amplitude damping qubit
//! channel and the two-qubit amplitude damping channel are built in, together
//! with the diagonal (population) and dephasing sub-channels of the latter.

pub mod analysis;
pub mod channels;
pub mod choi;
pub mod error;
pub mod linalg;
pub mod random;

pub use error::{Error, Result};
