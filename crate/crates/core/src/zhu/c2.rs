//! The C₂ quotient, the map φ onto the graded Zhu algebra, and strong
//! generation of the VOA.

use serde::Serialize;

use crate::exactlin::{Subspace, SparseVec};
use crate::report::Report;
use crate::voa::{Monomial, Space, State, VoaError};

use super::algebra::{GradedAlgebraSlice, ZhuAlgebra};
use super::ops::normal_product;
use super::ZhuError;

/// Degreewise `C₂(V) ∩ V_n` and the quotient `(V/C₂(V))_n`.
#[derive(Clone, Debug)]
pub struct C2Slice {
    /// Per degree, the echelon basis of `C₂(V)_n` in weight-basis coordinates.
    pub relations: Vec<Subspace>,
    /// Per degree, representatives of a quotient basis.
    pub basis: Vec<Vec<Monomial>>,
}

impl C2Slice {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn reduce(&self, space: &Space, x: &State) -> Result<SparseVec, VoaError> {
        let n = x.weight().ok_or(VoaError::NonHomogeneous)?;
        let v = weight_vec(space, x, n)?;
        Ok(self.relations[n as usize].reduce(&v).expect("weight dimension"))
    }
}

/// Coordinates of a homogeneous state in the canonical basis of its weight
/// space.
pub fn weight_vec(space: &Space, x: &State, n: i64) -> Result<SparseVec, VoaError> {
    let basis = space.weight_basis(n)?;
    let mut entries = Vec::new();
    for (m, c) in x.terms() {
        if m.degree() != n {
            return Err(VoaError::NonHomogeneous);
        }
        let i = basis.binary_search(m).expect("canonical monomial is in the weight basis");
        entries.push((i, c.clone()));
    }
    Ok(SparseVec::from_entries(basis.len(), entries).expect("weight index in range"))
}

/// The span of the weight-`n` parts of `{a_k b}` over basis monomials, for
/// a fixed mode `k`, with `a` restricted to weights in `wa_range`.
fn mode_span(space: &Space, n: i64, k: i64, min_wa: i64, min_wb: i64) -> Result<Subspace, VoaError> {
    let dim = space.dim(n)?;
    let mut span = Subspace::zero(dim);
    for wa in min_wa..=n {
        let wb = n - wa + k + 1;
        if wb < min_wb || wb > n {
            continue;
        }
        for am in space.weight_basis(wa)? {
            for bm in space.weight_basis(wb)? {
                let s = space.mode_act(&State::monomial(am.clone()), k, &State::monomial(bm.clone()))?;
                if !s.is_zero() {
                    span.insert(&weight_vec(space, &s, n)?).expect("weight dimension");
                }
            }
        }
    }
    Ok(span)
}

pub fn c2_quotient(space: &Space, n_max: i64) -> Result<C2Slice, VoaError> {
    let mut relations = Vec::new();
    let mut basis = Vec::new();
    for n in 0..=n_max {
        let span = mode_span(space, n, -2, 0, 0)?;
        let wb = space.weight_basis(n)?;
        basis.push(span.non_pivots().into_iter().map(|i| wb[i].clone()).collect());
        relations.push(span);
    }
    Ok(C2Slice { relations, basis })
}

/// Li's `C₁(V)_n`: the span of `u_{-1} v` with `u, v ∈ V_+` together with
/// `L(-1) V_{n-1}`.
pub fn c1_voa(space: &Space, n: i64) -> Result<Subspace, VoaError> {
    let mut span = mode_span(space, n, -1, 1, 1)?;
    if n >= 1 {
        for m in space.weight_basis(n - 1)? {
            let t = space.translate(&State::monomial(m.clone()))?;
            if !t.is_zero() {
                span.insert(&weight_vec(space, &t, n)?).expect("weight dimension");
            }
        }
    }
    Ok(span)
}

/// Degreewise outcome of a generation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub per_degree: Vec<bool>,
    pub first_failure: Option<i64>,
}

impl GenerationReport {
    pub fn from_flags(per_degree: Vec<bool>) -> Self {
        let first_failure = per_degree.iter().position(|ok| !ok).map(|d| d as i64);
        GenerationReport { per_degree, first_failure }
    }

    pub fn success(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks `V_n = span(U)_n + C₁(V)_n` for `n = 1..=n_max` (and trivially
/// `V_0 = C·1`).
pub fn check_voa_strong_generation(space: &Space, u: &[State], n_max: i64) -> Result<GenerationReport, VoaError> {
    let mut flags = vec![true];
    for n in 1..=n_max {
        let mut span = c1_voa(space, n)?;
        for s in u {
            let comp = s.component(n);
            if !comp.is_zero() {
                span.insert(&weight_vec(space, &comp, n)?).expect("weight dimension");
            }
        }
        flags.push(span.rank() == space.dim(n)?);
    }
    Ok(GenerationReport::from_flags(flags))
}

/// Checks for `φ: V/C₂(V) → gr A(V)`: it kills the C₂ spanning elements,
/// is onto in each degree, and is multiplicative on quotient basis pairs.
pub fn check_phi(zhu: &ZhuAlgebra, slice: &GradedAlgebraSlice, c2: &C2Slice) -> Result<Report, ZhuError> {
    let space = zhu.space();
    let n_max = zhu.n_max().min(c2.basis.len() as i64 - 1);
    let mut report = Report::new("phi: V/C2(V) -> gr A(V)");

    let identity = zhu.phi(&State::vacuum(), 0)?;
    report.push(
        "phi(1) is the identity class",
        identity == SparseVec::unit(1, 0),
        "",
    );

    let mut kills = Ok(());
    for n in 0..=n_max {
        for wa in 0..=n {
            let wb = n - wa - 1;
            if wb < 0 {
                continue;
            }
            for am in space.weight_basis(wa)? {
                for bm in space.weight_basis(wb)? {
                    let x = space.mode_act(&State::monomial(am.clone()), -2, &State::monomial(bm.clone()))?;
                    if !zhu.phi(&x, n)?.is_zero() {
                        kills = Err(format!("phi({}) is not zero", space.format_state(&x)));
                    }
                }
            }
        }
    }
    report.push("phi kills C2(V)", kills.is_ok(), kills.err().unwrap_or_default());

    let mut onto = Ok(());
    for n in 0..=n_max {
        let mut image = Subspace::zero(zhu.graded_dim(n));
        for m in space.weight_basis(n)? {
            image.insert(&zhu.phi(&State::monomial(m.clone()), n)?).expect("graded dimension");
        }
        if image.rank() != zhu.graded_dim(n) {
            onto = Err(format!("rank {} < dim S_{n} = {}", image.rank(), zhu.graded_dim(n)));
        }
    }
    report.push("phi is onto in every degree", onto.is_ok(), onto.err().unwrap_or_default());

    let mut mult = Ok(());
    for p in 0..=n_max {
        for q in 0..=(n_max - p) {
            for a in &c2.basis[p as usize] {
                for b in &c2.basis[q as usize] {
                    let (a, b) = (State::monomial(a.clone()), State::monomial(b.clone()));
                    let lhs = zhu.phi(&normal_product(space, &a, &b)?, p + q)?;
                    let rhs = slice.multiply(p, &zhu.phi(&a, p)?, q, &zhu.phi(&b, q)?);
                    if rhs.as_ref() != Some(&lhs) {
                        mult = Err(format!("phi not multiplicative on {} and {}", space.format_state(&a), space.format_state(&b)));
                    }
                }
            }
        }
    }
    report.push("phi is multiplicative", mult.is_ok(), mult.err().unwrap_or_default());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voa::preset;
    use std::sync::Arc;

    fn space(name: &str, cutoff: i64) -> Arc<Space> {
        Arc::new(Space::vacuum(Arc::new(preset(name).unwrap().voa), cutoff).unwrap())
    }

    #[test]
    fn c2_quotient_dims() {
        let h = space("heisenberg-1", 6);
        assert_eq!(c2_quotient(&h, 6).unwrap().dims(), vec![1; 7]);
        let v = space("virasoro", 8);
        assert_eq!(c2_quotient(&v, 8).unwrap().dims(), vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn c2_elements_reduce_to_zero() {
        let s = space("affine-sl2", 5);
        let c2 = c2_quotient(&s, 5).unwrap();
        let a = s.generator_state(0);
        let b = s.generator_state(2);
        let x = s.mode_act(&a, -2, &s.mode_act(&b, -1, &a).unwrap()).unwrap();
        assert!(c2.reduce(&s, &x).unwrap().is_zero());
    }

    #[test]
    fn strong_generation_of_the_voa() {
        let h = space("heisenberg-1", 6);
        let r = check_voa_strong_generation(&h, &[h.generator_state(0)], 6).unwrap();
        assert!(r.success());
        let v = space("virasoro", 7);
        assert!(check_voa_strong_generation(&v, &[v.generator_state(0)], 7).unwrap().success());
        let r = check_voa_strong_generation(&v, &[], 7).unwrap();
        assert_eq!(r.first_failure, Some(2));
        let a = space("affine-sl2", 4);
        let u: Vec<State> = (0..3).map(|g| a.generator_state(g)).collect();
        assert!(check_voa_strong_generation(&a, &u, 4).unwrap().success());
        assert_eq!(check_voa_strong_generation(&a, &u[..2], 4).unwrap().first_failure, Some(1));
    }

    #[test]
    fn phi_checks_pass() {
        for (name, cutoff, n) in [("virasoro", 10, 6), ("heisenberg-1", 10, 6)] {
            let s = space(name, cutoff);
            let z = ZhuAlgebra::new(s.clone(), n, 2).unwrap();
            let g = z.gr_algebra().unwrap();
            let c2 = c2_quotient(&s, n).unwrap();
            let r = check_phi(&z, &g, &c2).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }
}
