//! `C₁(M)`, `C₂(M)`, `B(M)` and strong generation of a module by a
//! homogeneous subspace.

use serde::Serialize;

use crate::exactlin::{Subspace, SparseVec};
use crate::voa::{Space, State, VoaError};
use crate::zhu::weight_vec;

use super::ModuleContext;

/// Degreewise `C₁(M) ∩ M(n)`: the span of `a_{-1} v` with `a ∈ V_+`.
#[derive(Clone, Debug)]
pub struct C1Space {
    pub per_degree: Vec<Subspace>,
}

impl C1Space {
    pub fn dims(&self) -> Vec<usize> {
        self.per_degree.iter().map(Subspace::rank).collect()
    }

    /// `dim M(n) / C₁(M) ∩ M(n)` per degree.
    pub fn codims(&self) -> Vec<usize> {
        self.per_degree.iter().map(|s| s.ambient_dim() - s.rank()).collect()
    }
}

/// Span of the degree-`n` vectors `a_k v` over basis monomials `a ∈ V`,
/// `v ∈ M`, with `wt a ≥ min_wa`.
fn module_mode_span(ctx: &ModuleContext, n: i64, k: i64, min_wa: i64) -> Result<Subspace, VoaError> {
    let m = ctx.module_space();
    let mut span = Subspace::zero(m.dim(n)?);
    for wa in min_wa.max(0)..=(n + k + 1) {
        let wv = n - wa + k + 1;
        if wv < 0 || wv > n + k + 1 {
            continue;
        }
        for am in ctx.voa_basis(wa)? {
            for vm in ctx.module_basis(wv)? {
                let s = m.mode_act(&State::monomial(am.clone()), k, &State::monomial(vm.clone()))?;
                if !s.is_zero() {
                    span.insert(&weight_vec(m, &s, n)?).expect("weight dimension");
                }
            }
        }
    }
    Ok(span)
}

pub fn c1_space(ctx: &ModuleContext, n_max: i64) -> Result<C1Space, VoaError> {
    let per_degree = (0..=n_max).map(|n| module_mode_span(ctx, n, -1, 1)).collect::<Result<_, _>>()?;
    Ok(C1Space { per_degree })
}

/// Degreewise `C₂(M) ∩ M(n)`: the span of `a_{-2} v`.
pub fn c2_module(ctx: &ModuleContext, n_max: i64) -> Result<Vec<Subspace>, VoaError> {
    (0..=n_max).map(|n| module_mode_span(ctx, n, -2, 1)).collect()
}

/// Degreewise `B(M) = C₁(M) + span{a_0 M : wt a ≥ 2}`. Degree `n` needs
/// `V_{n+1}`, so `n_max` must stay below the cutoff.
pub fn b_space(ctx: &ModuleContext, n_max: i64) -> Result<Vec<Subspace>, VoaError> {
    let c1 = c1_space(ctx, n_max)?;
    let mut out = Vec::new();
    for (n, c) in c1.per_degree.into_iter().enumerate() {
        let zero_modes = module_mode_span(ctx, n as i64, 0, 2)?;
        out.push(c.sum(&zero_modes).expect("weight dimension"));
    }
    Ok(out)
}

/// Degreewise strong-generation test, evaluated two ways: the criterion
/// `M(n) ⊆ W + C₁(M)`, and directly as the span of `a¹_{-n₁}⋯a^k_{-n_k} w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongGenReport {
    pub w_basis: Vec<String>,
    /// `M(n) ⊆ W + C₁(M)` for each degree.
    pub per_degree: Vec<bool>,
    /// The spanning-set computation for each degree.
    pub spanned: Vec<bool>,
    /// Whether both routes give the same verdict through every degree.
    pub routes_agree: bool,
    pub first_failure: Option<i64>,
    pub c1_codims: Vec<usize>,
}

impl StrongGenReport {
    pub fn success(&self) -> bool {
        self.first_failure.is_none()
    }

    /// Whether every degree up to `n` succeeded.
    pub fn success_through(&self, n: i64) -> bool {
        self.first_failure.map_or(true, |f| f > n)
    }
}

/// Splits a list of homogeneous states by degree, as weight-basis vectors.
pub(crate) fn by_degree(space: &Space, w: &[State], n_max: i64) -> Result<Vec<Vec<SparseVec>>, VoaError> {
    let mut out = vec![Vec::new(); (n_max + 1) as usize];
    for s in w {
        if s.is_zero() {
            continue;
        }
        let d = s.weight().ok_or(VoaError::NonHomogeneous)?;
        if d <= n_max {
            out[d as usize].push(weight_vec(space, s, d)?);
        }
    }
    Ok(out)
}

fn vec_to_state(space: &Space, v: &SparseVec, n: i64) -> Result<State, VoaError> {
    let basis = space.weight_basis(n)?;
    Ok(v.entries().iter().map(|(i, c)| (basis[*i].clone(), c.clone())).collect())
}

pub fn check_module_strong_generation(ctx: &ModuleContext, w: &[State], n_max: i64) -> Result<StrongGenReport, VoaError> {
    let m = ctx.module_space();
    let wv = by_degree(m, w, n_max)?;
    let c1 = c1_space(ctx, n_max)?;

    let mut per_degree = Vec::new();
    for n in 0..=n_max {
        let mut span = c1.per_degree[n as usize].clone();
        span.extend(wv[n as usize].iter()).expect("weight dimension");
        per_degree.push(span.rank() == m.dim(n)?);
    }

    // P(n) = W(n) + Σ a_{-k} P(n - wt a - k + 1) over a ∈ V_+, k ≥ 1
    let mut p: Vec<Subspace> = Vec::new();
    let mut spanned = Vec::new();
    for n in 0..=n_max {
        let mut span = Subspace::zero(m.dim(n)?);
        span.extend(wv[n as usize].iter()).expect("weight dimension");
        for wa in 1..=n {
            for k in 1..=(n - wa + 1) {
                let src = n - wa - k + 1;
                for row in p[src as usize].rows() {
                    let x = vec_to_state(m, row, src)?;
                    for am in ctx.voa_basis(wa)? {
                        let y = m.mode_act(&State::monomial(am.clone()), -k, &x)?;
                        if !y.is_zero() {
                            span.insert(&weight_vec(m, &y, n)?).expect("weight dimension");
                        }
                    }
                }
            }
        }
        spanned.push(span.rank() == m.dim(n)?);
        p.push(span);
    }

    let first_failure = per_degree.iter().position(|ok| !ok).map(|d| d as i64);
    // the two descriptions agree on "everything up to degree n", not on
    // each degree separately
    let through = |flags: &[bool]| flags.iter().scan(true, |acc, &f| {
        *acc &= f;
        Some(*acc)
    }).collect::<Vec<_>>();
    Ok(StrongGenReport {
        w_basis: w.iter().map(|s| m.format_state(s)).collect(),
        routes_agree: through(&per_degree) == through(&spanned),
        per_degree,
        spanned,
        first_failure,
        c1_codims: c1.codims(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voa::{preset, Monomial};
    use std::sync::Arc;

    fn ctx(name: &str, module: &str, cutoff: i64) -> ModuleContext {
        let voa = Arc::new(preset(name).unwrap().voa);
        let m = crate::voa::parse_module_spec(&voa, module).unwrap();
        ModuleContext::new(voa, Arc::new(m), cutoff).unwrap()
    }

    fn bottom() -> Vec<State> {
        vec![State::monomial(Monomial::bottom(0))]
    }

    /// `u_{-n} w = (L(-1)^{n-1} u)_{-1} w / (n-1)!`, so every PBW monomial
    /// whose leftmost factor is a mode of a weight-one generator is a
    /// `C₁` element; other monomials of positive degree need not be.
    fn rewriting_oracle_codim(space: &Space, n: i64) -> usize {
        space
            .weight_basis(n)
            .unwrap()
            .iter()
            .filter(|m| match m.modes.first() {
                None => true,
                Some(&(g, p)) => {
                    let w = space.voa().generator_weight(g);
                    // vertex index p + w - 1 must be ≤ -1
                    p + w - 1 > -1
                }
            })
            .count()
    }

    #[test]
    fn fock_c1_is_everything_above_the_bottom() {
        let c = ctx("heisenberg-1", "fock:2", 5);
        let c1 = c1_space(&c, 5).unwrap();
        assert_eq!(c1.codims(), vec![1, 0, 0, 0, 0, 0]);
        for n in 0..=5 {
            assert_eq!(c1.codims()[n as usize], rewriting_oracle_codim(c.module_space(), n));
        }
    }

    #[test]
    fn verma_c1_misses_the_translation_orbit() {
        let c = ctx("virasoro", "verma:1/3", 5);
        let c1 = c1_space(&c, 5).unwrap();
        // L_{-1}^n w is not of the form a_{-1} v
        assert_eq!(c1.codims(), vec![1; 6]);
        for n in 0..=5 {
            assert_eq!(c1.codims()[n as usize], rewriting_oracle_codim(c.module_space(), n));
        }
    }

    #[test]
    fn fock_is_strongly_generated_by_its_bottom_level() {
        let c = ctx("heisenberg-1", "fock:1", 5);
        let r = check_module_strong_generation(&c, &bottom(), 5).unwrap();
        assert!(r.success());
        assert!(r.routes_agree);
        let r = check_module_strong_generation(&c, &[], 3).unwrap();
        assert_eq!(r.first_failure, Some(0));
        assert!(r.routes_agree);
    }

    #[test]
    fn whole_truncation_generates() {
        let c = ctx("virasoro", "verma:1/2", 4);
        let all: Vec<State> = (0..=4)
            .flat_map(|n| c.module_basis(n).unwrap().to_vec())
            .map(State::monomial)
            .collect();
        assert!(check_module_strong_generation(&c, &all, 4).unwrap().success());
    }

    #[test]
    fn verma_bottom_level_fails_at_degree_one() {
        let c = ctx("virasoro", "verma:1/3", 4);
        let r = check_module_strong_generation(&c, &bottom(), 4).unwrap();
        assert_eq!(r.first_failure, Some(1));
        assert!(r.routes_agree);
        // adding the L(-1) orbit of w repairs it
        let mut gens = bottom();
        for k in 1..=4 {
            gens.push(State::monomial(Monomial::new(vec![(0, -1); k], 0)));
        }
        let r = check_module_strong_generation(&c, &gens, 4).unwrap();
        assert!(r.success(), "{:?}", r);
        assert!(r.routes_agree);
    }

    #[test]
    fn weyl_module_is_generated_by_its_bottom_level() {
        let c = ctx("affine-sl2", "weyl:1", 3);
        let w: Vec<State> = (0..2).map(|t| State::monomial(Monomial::bottom(t))).collect();
        let r = check_module_strong_generation(&c, &w, 3).unwrap();
        assert!(r.success());
        assert!(r.routes_agree);
    }

    #[test]
    fn b_space_contains_c1_and_is_cofinite() {
        let c = ctx("heisenberg-1", "fock:1", 5);
        let c1 = c1_space(&c, 4).unwrap();
        let b = b_space(&c, 4).unwrap();
        for (x, y) in c1.per_degree.iter().zip(&b) {
            assert!(x.is_subspace_of(y).unwrap());
        }
        let codim: usize = b.iter().map(|s| s.ambient_dim() - s.rank()).sum();
        assert_eq!(codim, 1);

        let c = ctx("virasoro", "verma:1/3", 5);
        let b = b_space(&c, 4).unwrap();
        let codims: Vec<usize> = b.iter().map(|s| s.ambient_dim() - s.rank()).collect();
        assert_eq!(codims, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn c2_module_misses_bottom_and_degree_one() {
        let c = ctx("heisenberg-1", "fock:1", 4);
        let c2 = c2_module(&c, 4).unwrap();
        let codims: Vec<usize> = c2.iter().map(|s| s.ambient_dim() - s.rank()).collect();
        // M/C₂(M) for Fock is spanned by α_{-1}^n w
        assert_eq!(codims, vec![1, 1, 1, 1, 1]);
    }
}
