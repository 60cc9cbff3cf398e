//! The bilinear operations defining Zhu's algebra, extended bilinearly over
//! homogeneous components.

use crate::exactlin::{binomial, Rat};
use crate::voa::{Space, State, VoaError};

/// `Σ_j coeff(wt a, j) · a_{j + shift} b`, summed over the homogeneous
/// components of `a` and over every `j ≥ 0` for which the mode can act
/// nontrivially.
pub(crate) fn binomial_sum(
    space: &Space,
    a: &State,
    b: &State,
    shift: i64,
    coeff: impl Fn(i64, i64) -> Rat,
) -> Result<State, VoaError> {
    let mut out = State::zero();
    let wb = match b.max_weight() {
        Some(w) => w,
        None => return Ok(out),
    };
    for (wa, comp) in a.components() {
        // a_k b vanishes once k ≥ wt a + wt b
        let jmax = wa + wb - 1 - shift;
        for j in 0..=jmax.max(-1) {
            let c = coeff(wa, j);
            if num_traits::Zero::is_zero(&c) {
                continue;
            }
            out.add_scaled(&c, &space.mode_act(&comp, j + shift, b)?);
        }
    }
    Ok(out)
}

/// `a ∘ b = Σ_j C(wt a, j) a_{j-2} b`.
pub fn circ(space: &Space, a: &State, b: &State) -> Result<State, VoaError> {
    binomial_sum(space, a, b, -2, |wa, j| binomial(wa, j))
}

/// `Res_z Y(a,z) b (1+z)^{wt a + n} / z^{2+m} = Σ_j C(wt a + n, j) a_{j-2-m} b`.
pub fn higher_o_element(space: &Space, a: &State, b: &State, m: i64, n: i64) -> Result<State, VoaError> {
    if !(m >= n && n >= 0) {
        return Err(VoaError::InvalidPresentation(format!("need m ≥ n ≥ 0, got m = {m}, n = {n}")));
    }
    binomial_sum(space, a, b, -2 - m, |wa, j| binomial(wa + n, j))
}

/// `a ∗ b = Σ_j C(wt a, j) a_{j-1} b`. Also the left action on a module.
pub fn star(space: &Space, a: &State, b: &State) -> Result<State, VoaError> {
    binomial_sum(space, a, b, -1, |wa, j| binomial(wa, j))
}

/// `Σ_j C(wt a - 1, j) a_j b`, the commutator `a ∗ b - b ∗ a` modulo the
/// relations.
pub fn commutator_sum(space: &Space, a: &State, b: &State) -> Result<State, VoaError> {
    binomial_sum(space, a, b, 0, |wa, j| binomial(wa - 1, j))
}

/// `a_{-1} b`, the product of the graded and C₂ algebras.
pub fn normal_product(space: &Space, a: &State, b: &State) -> Result<State, VoaError> {
    let mut out = State::zero();
    for (_, comp) in a.components() {
        out = out.add(&space.mode_act(&comp, -1, b)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;
    use crate::voa::{Monomial, VoaPresentation};
    use std::sync::Arc;

    fn vir() -> Space {
        Space::vacuum(Arc::new(VoaPresentation::virasoro(rat(1, 2))), 8).unwrap()
    }

    fn l(modes: &[i64]) -> State {
        State::monomial(Monomial::new(modes.iter().map(|&p| (0, p)).collect(), 0))
    }

    #[test]
    fn circ_with_vacuum() {
        let s = vir();
        let w = s.generator_state(0);
        assert!(circ(&s, &State::vacuum(), &w).unwrap().is_zero());
        let expect = s.translate(&w).unwrap().add(&w.scaled(&rat(2, 1)));
        assert_eq!(circ(&s, &w, &State::vacuum()).unwrap(), expect);
        assert_eq!(circ(&s, &w, &State::vacuum()).unwrap(), l(&[-3]).add(&l(&[-2]).scaled(&rat(2, 1))));
    }

    #[test]
    fn star_units_and_omega_square() {
        let s = vir();
        let w = s.generator_state(0);
        assert_eq!(star(&s, &State::vacuum(), &w).unwrap(), w);
        assert_eq!(star(&s, &w, &State::vacuum()).unwrap(), w);
        let expect = l(&[-2, -2]).add(&l(&[-3]).scaled(&rat(2, 1))).add(&l(&[-2]).scaled(&rat(2, 1)));
        assert_eq!(star(&s, &w, &w).unwrap(), expect);
    }

    #[test]
    fn higher_element_at_zero_is_circ() {
        let s = vir();
        let w = s.generator_state(0);
        let b = l(&[-3]);
        assert_eq!(higher_o_element(&s, &w, &b, 0, 0).unwrap(), circ(&s, &w, &b).unwrap());
        assert!(higher_o_element(&s, &w, &b, 0, 1).is_err());
    }
}
