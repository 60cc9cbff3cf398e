//! The two actions of `V` on a module that descend to the `A(V)`-bimodule
//! structure of `A(M)`.

use crate::exactlin::binomial;
use crate::voa::{Space, State, VoaError};
use crate::zhu::binomial_sum;

/// `a ∗ v = Σ_j C(wt a, j) a_{j-1} v`.
pub fn star_left(module: &Space, a: &State, v: &State) -> Result<State, VoaError> {
    binomial_sum(module, a, v, -1, |wa, j| binomial(wa, j))
}

/// `v ∗ a = Σ_j C(wt a - 1, j) a_{j-1} v`.
pub fn star_right(module: &Space, v: &State, a: &State) -> Result<State, VoaError> {
    binomial_sum(module, a, v, -1, |wa, j| binomial(wa - 1, j))
}

/// `Σ_j C(wt a - 1, j) a_j v`, which equals `a ∗ v - v ∗ a` on the nose.
pub fn left_right_commutator(module: &Space, a: &State, v: &State) -> Result<State, VoaError> {
    binomial_sum(module, a, v, 0, |wa, j| binomial(wa - 1, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimod::ModuleContext;
    use crate::exactlin::rat;
    use crate::voa::{preset, ModulePresentation, Monomial};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn fock(lambda: i64, cutoff: i64) -> ModuleContext {
        let voa = Arc::new(preset("heisenberg-1").unwrap().voa);
        let m = ModulePresentation::fock(&voa, vec![rat(lambda, 1)]).unwrap();
        ModuleContext::new(voa, Arc::new(m), cutoff).unwrap()
    }

    fn verma(cutoff: i64) -> ModuleContext {
        let voa = Arc::new(preset("virasoro").unwrap().voa);
        let m = ModulePresentation::verma(&voa, rat(1, 3)).unwrap();
        ModuleContext::new(voa, Arc::new(m), cutoff).unwrap()
    }

    #[test]
    fn vacuum_acts_trivially() {
        let ctx = fock(2, 4);
        let w = State::monomial(Monomial::new(vec![(0, -2), (0, -1)], 0));
        let m = ctx.module_space();
        assert_eq!(star_left(m, &State::vacuum(), &w).unwrap(), w);
        assert_eq!(star_right(m, &w, &State::vacuum()).unwrap(), w);
    }

    #[test]
    fn fock_left_action_on_bottom() {
        let ctx = fock(3, 3);
        let m = ctx.module_space();
        let w = State::monomial(Monomial::bottom(0));
        let alpha = ctx.voa_space().generator_state(0);
        // α_0 w + α_{-1} w = λ w + α_{-1} w
        let mut expect = State::term(Monomial::bottom(0), rat(3, 1));
        expect.add_term(Monomial::new(vec![(0, -1)], 0), rat(1, 1));
        assert_eq!(star_left(m, &alpha, &w).unwrap(), expect);
        // the right action has C(0, j): only α_{-1} w
        assert_eq!(star_right(m, &w, &alpha).unwrap(), State::monomial(Monomial::new(vec![(0, -1)], 0)));
    }

    fn check_identity(ctx: &ModuleContext, wa: i64, ia: usize, wv: i64, iv: usize) {
        let a = ctx.voa_basis(wa).unwrap();
        let v = ctx.module_basis(wv).unwrap();
        if a.is_empty() || v.is_empty() {
            return;
        }
        let a = State::monomial(a[ia % a.len()].clone());
        let v = State::monomial(v[iv % v.len()].clone());
        let m = ctx.module_space();
        let lhs = star_left(m, &a, &v).unwrap().sub(&star_right(m, &v, &a).unwrap());
        let comm = left_right_commutator(m, &a, &v).unwrap();
        assert_eq!(lhs, comm);
        if let Some(top) = comm.max_weight() {
            assert!(top <= wa + wv - 1);
        }
        if let Some(top) = star_left(m, &a, &v).unwrap().max_weight() {
            assert!(top <= wa + wv);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn commutator_identity_fock(wa in 0i64..4, ia in 0usize..8, wv in 0i64..3, iv in 0usize..8) {
            check_identity(&fock(1, 6), wa, ia, wv, iv);
        }

        #[test]
        fn commutator_identity_verma(wa in 0i64..4, ia in 0usize..8, wv in 0i64..3, iv in 0usize..8) {
            check_identity(&verma(6), wa, ia, wv, iv);
        }
    }
}
