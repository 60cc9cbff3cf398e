//! The bimodule layer: `O(M)`, `A(M)` with its left and right `A(V)`
//! actions and weight filtration, `gr A(M)` and the map `ψ`, the subspaces
//! `C₁(M)` and `B(M)`, and strong generation of modules.

mod actions;
mod am;
mod c1;
mod rewrite;
mod verify;

use std::sync::Arc;

pub use actions::{left_right_commutator, star_left, star_right};
pub use am::{
    am_truncation, check_am_filtration_generation, check_gr_am_generation, o_module_relations, AMTruncation,
    BimoduleSummary, FiltrationGenerationReport, GrGenerationReport, GradedBimoduleSlice,
};
pub use c1::{b_space, c1_space, c2_module, check_module_strong_generation, C1Space, StrongGenReport};
pub use rewrite::{rewrite_to_strong_generators, RewriteTrace, Rewriter, Rewritten, Word};
pub use verify::verify_bimod;

use crate::voa::{ModulePresentation, Monomial, Space, VoaError, VoaPresentation};
use crate::zhu::ZhuError;

#[derive(Debug, thiserror::Error)]
pub enum BimodError {
    #[error(transparent)]
    Voa(#[from] VoaError),
    #[error(transparent)]
    Zhu(#[from] ZhuError),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// A VOA truncation together with one of its modules at the same cutoff.
/// Elements of `V` live in the first space, elements of `M` in the second.
#[derive(Debug, Clone)]
pub struct ModuleContext {
    voa_space: Arc<Space>,
    module_space: Arc<Space>,
}

impl ModuleContext {
    pub fn new(voa: Arc<VoaPresentation>, module: Arc<ModulePresentation>, cutoff: i64) -> Result<Self, VoaError> {
        let voa_space = Arc::new(Space::vacuum(voa.clone(), cutoff)?);
        let module_space = Arc::new(Space::new(voa, module, cutoff)?);
        Ok(ModuleContext { voa_space, module_space })
    }

    /// Pairs existing spaces; they must share the presentation and cutoff.
    pub fn from_spaces(voa_space: Arc<Space>, module_space: Arc<Space>) -> Result<Self, VoaError> {
        if !voa_space.is_vacuum() {
            return Err(VoaError::InvalidPresentation("first space must be the VOA itself".into()));
        }
        if voa_space.voa() != module_space.voa() || voa_space.cutoff() != module_space.cutoff() {
            return Err(VoaError::InvalidPresentation("spaces differ in presentation or cutoff".into()));
        }
        Ok(ModuleContext { voa_space, module_space })
    }

    pub fn voa_space(&self) -> &Arc<Space> {
        &self.voa_space
    }

    pub fn module_space(&self) -> &Arc<Space> {
        &self.module_space
    }

    pub fn cutoff(&self) -> i64 {
        self.module_space.cutoff()
    }

    pub fn voa_basis(&self, n: i64) -> Result<&[Monomial], VoaError> {
        self.voa_space.weight_basis(n)
    }

    pub fn module_basis(&self, n: i64) -> Result<&[Monomial], VoaError> {
        self.module_space.weight_basis(n)
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.voa_space.voa().name, self.module_space.module().label())
    }
}
