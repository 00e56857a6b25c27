pub mod canonical;
pub mod error;
pub mod fock;
pub mod hecke;
pub mod laurent;
pub mod matrix;
pub mod partition;
pub mod schaper;
pub mod verify;

pub use canonical::{canonical_vector, CanonicalBasis, DecompositionMatrix};
pub use error::{Error, Result};
pub use fock::{
    bar_partition, bar_vector, straighten, BarInvolution, BarMatrix, FockVector, Straightener,
    WedgeWord,
};
pub use laurent::LaurentPoly;
pub use matrix::PolyMatrix;
pub use partition::{partitions_of, BetaSequence, Partition, Sign, StandardTableau};
pub use schaper::{GrothendieckVector, Simple, Specht};
