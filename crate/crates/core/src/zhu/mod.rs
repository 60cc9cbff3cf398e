//! Zhu's algebra `A(V) = V/O(V)`, its weight filtration, the associated
//! graded ring and the C₂ algebra, computed on certified truncations.

mod algebra;
mod c2;
mod ops;
mod quotient;
mod verify;

pub use algebra::{
    gr_finite_generation_witness, o_relations, o_space, DimsTable, GenerationWitness, GradedAlgebraSlice,
    OSpaceTruncation, ZhuAlgebra,
};
pub(crate) use algebra::{graded_coords, refresh};
pub use c2::{c1_voa, c2_quotient, check_phi, check_voa_strong_generation, weight_vec, C2Slice, GenerationReport};
pub use ops::{circ, commutator_sum, higher_o_element, normal_product, star};
pub(crate) use ops::binomial_sum;
pub use quotient::{Certificate, FilteredQuotient, RelationSource};
pub use verify::verify_zhu;

use crate::voa::VoaError;

#[derive(Debug, thiserror::Error)]
pub enum ZhuError {
    #[error(transparent)]
    Voa(#[from] VoaError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
