//! Green's relations, factor rank and bijective linear preservers for matrix
//! monoids `M_n(S)` over the boolean and max-plus (tropical) semifields.
//!
//! All arithmetic is exact. The [`verify`] module packages exhaustive
//! (boolean) and seeded randomized (tropical) checks of the classification
//! of bijective linear maps preserving Green's relations.

pub mod error;
pub mod green;
pub mod linear_maps;
pub mod matrix;
pub mod sample;
pub mod semiring;
pub mod verify;

pub use error::{Error, Result};
pub use green::{factor_rank, relate, relate_with_witness, GreenRelation, RankMethod, RankResult, Witness};
pub use matrix::{Matrix, MonomialMatrix};
pub use semiring::{Rational, SemifieldId, Value};
