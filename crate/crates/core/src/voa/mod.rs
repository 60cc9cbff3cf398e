//! Strongly generated vertex operator algebras and their modules, realized
//! on PBW bases of negative modes.

mod config;
mod engine;
mod presentation;
mod state;
mod verify;

pub use config::{parse_module_spec, parse_presentation, parse_rat, preset, LoadedPresentation, PRESET_NAMES};
pub use engine::{GradedLayout, Space};
pub use presentation::{Family, GeneratorSpec, LieAlgebra, LieTerm, ModuleKind, ModulePresentation, VoaPresentation};
pub use state::{Mode, Monomial, State};
pub use verify::verify_presentation;

#[derive(Debug, thiserror::Error)]
pub enum VoaError {
    #[error("weight {weight} exceeds the cutoff {cutoff}")]
    CutoffExceeded { weight: i64, cutoff: i64 },
    #[error("state is not homogeneous")]
    NonHomogeneous,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("config error: {0}")]
    Config(String),
}
