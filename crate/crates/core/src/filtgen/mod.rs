//! Finite-dimensional filtered algebras and bimodules: associated graded
//! objects, ideals, lifting of generators, filtered Hom, filt-projectivity,
//! filtered tensor products and the swap isomorphism on them.

mod filtration;
mod graded;
mod hom;
mod import;
mod instances;
mod lift;
mod linsys;
mod section;
mod structures;
mod tensor;
mod verify;

pub use filtration::Filtration;
pub use graded::{
    check_ideal_map, enumerate_ideals, gr_ideal, gr_module, gr_ring, is_left_ideal, is_two_sided_ideal, GradedAlgebra,
    GradedIdeal, GradedModule, IdealMapReport,
};
pub use hom::{
    compare_hom, filt_projective_check, gr_hom_map, graded_hom_dim, hom_filtration_level, hom_level_dim, hom_space,
    is_r_linear, GradedHomSlice, GrHomBlock, HomComparison, HomLevel, ProjectivityReport,
};
pub use import::{am_bimodule, gr_module_matches, gr_ring_matches, zhu_truncation};
pub use instances::{
    graded_vector_space, matrix_algebra, nonsplit_filtered_module, parse_instance, quadratic_field, scalars, split_algebra, split_pair_filtered,
    tensor_preset, truncated_polynomial, upper_triangular, LoadedInstance, TensorInstance, TENSOR_PRESETS,
};
pub use lift::{lift_generators, random_lift_instance, LiftReport, LiftStep, RandomLiftInstance};
pub use linsys::{LinearSystem, Solution};
pub use section::{is_semisimple, lift_swap_iso, radical_dim, LiftOutcome, LiftSwapReport, LiftedIso, Obstruction};
pub use structures::{
    AdaptedChange, EnvelopingAlgebra, FiniteFilteredAlgebra, FiniteFilteredBimodule, FiniteFilteredModule, Table,
};
pub use tensor::{
    check_tensor_generation, gr_swap_between, gr_swap_iso, tensor_filtration, FilteredTensor, GenerationLevel,
    GrSwapReport, SwapDegree, SwapWitness, TensorSummary,
};
pub use verify::{verify_filtgen, verify_imported_swap};

use crate::exactlin::LinError;

#[derive(Debug, thiserror::Error)]
pub enum FiltError {
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("bad filtration: {0}")]
    Filtration(String),
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("import failed: {0}")]
    Import(String),
}
