//! Truncations of the bimodule `A(M) = M/O(M)`, its filtration by degree,
//! and the associated graded module over `gr A(V)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{binomial, Subspace, SparseVec};
use crate::voa::{Monomial, State, VoaError};
use crate::zhu::{
    binomial_sum, graded_coords, normal_product, refresh, Certificate, FilteredQuotient, GenerationReport,
    RelationSource, ZhuAlgebra,
};

use super::actions::{star_left, star_right};
use super::c1::{check_module_strong_generation, StrongGenReport};
use super::{BimodError, ModuleContext};

/// The spanning set of `O(M)` with top degree exactly `t`: all
/// `a ∘ v = Σ_j C(wt a, j) a_{j-2} v` for basis monomials `a ∈ V_+`,
/// `v ∈ M` with `wt a + deg v + 1 = t`.
pub fn o_module_relations(ctx: Arc<ModuleContext>) -> RelationSource {
    Arc::new(move |t: i64| {
        let mut pairs = Vec::new();
        for wa in 1..t {
            let wv = t - 1 - wa;
            if wv < 0 {
                continue;
            }
            for am in ctx.voa_basis(wa)? {
                for vm in ctx.module_basis(wv)? {
                    pairs.push((am.clone(), vm.clone()));
                }
            }
        }
        let m = ctx.module_space();
        pairs
            .par_iter()
            .map(|(am, vm)| {
                binomial_sum(m, &State::monomial(am.clone()), &State::monomial(vm.clone()), -2, |w, j| binomial(w, j))
            })
            .collect()
    })
}

type ActionTable = BTreeMap<(i64, usize, i64, usize), SparseVec>;

/// `A(M)_{≤n_max}` with certified relations, graded coordinates and the
/// left and right actions of the graded representatives of `A(V)`.
pub struct AMTruncation {
    ctx: Arc<ModuleContext>,
    zhu: Arc<ZhuAlgebra>,
    quotient: FilteredQuotient,
    n_max: i64,
    certificates: Vec<Certificate>,
    graded: Vec<Vec<usize>>,
    left: ActionTable,
    right: ActionTable,
}

impl std::fmt::Debug for AMTruncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AMTruncation")
            .field("module", &self.ctx.label())
            .field("n_max", &self.n_max)
            .field("dims", &self.filtration_dims())
            .finish()
    }
}

pub fn am_truncation(
    ctx: Arc<ModuleContext>,
    zhu: Arc<ZhuAlgebra>,
    n_max: i64,
    margin: usize,
) -> Result<AMTruncation, BimodError> {
    if zhu.space().voa() != ctx.voa_space().voa() {
        return Err(BimodError::Precondition("Zhu algebra and module use different VOAs".into()));
    }
    if zhu.n_max() < n_max {
        return Err(BimodError::Precondition(format!(
            "Zhu algebra computed to level {}, need {n_max}",
            zhu.n_max()
        )));
    }
    ctx.module_space().check_weight(n_max)?;
    let mut quotient = FilteredQuotient::new(ctx.module_space().clone(), o_module_relations(ctx.clone()))?;
    let mut certificates = Vec::new();
    for n in (0..=n_max).rev() {
        certificates.push(quotient.certify(n, margin)?);
    }
    certificates.reverse();
    let certificates = certificates.into_iter().map(|c| refresh(&quotient, c)).collect();
    let graded = (0..=n_max).map(|n| quotient.graded_columns(n)).collect();
    let mut am = AMTruncation {
        ctx,
        zhu,
        quotient,
        n_max,
        certificates,
        graded,
        left: BTreeMap::new(),
        right: BTreeMap::new(),
    };
    am.fill_tables()?;
    Ok(am)
}

impl AMTruncation {
    fn fill_tables(&mut self) -> Result<(), VoaError> {
        let m = self.ctx.module_space().clone();
        let mut jobs = Vec::new();
        for p in 0..=self.n_max {
            for q in 0..=(self.n_max - p) {
                for (i, a) in self.zhu.graded_basis(p).into_iter().enumerate() {
                    for (j, v) in self.graded_basis(q).into_iter().enumerate() {
                        jobs.push(((p, i, q, j), a.clone(), v));
                    }
                }
            }
        }
        let results: Vec<_> = jobs
            .par_iter()
            .map(|(key, a, v)| -> Result<_, VoaError> {
                let (a, v) = (State::monomial(a.clone()), State::monomial(v.clone()));
                let l = self.quotient.reduce(&star_left(&m, &a, &v)?)?;
                let r = self.quotient.reduce(&star_right(&m, &v, &a)?)?;
                Ok((*key, l, r))
            })
            .collect::<Result<_, _>>()?;
        for (key, l, r) in results {
            self.left.insert(key, l);
            self.right.insert(key, r);
        }
        Ok(())
    }

    pub fn context(&self) -> &Arc<ModuleContext> {
        &self.ctx
    }

    pub fn zhu(&self) -> &Arc<ZhuAlgebra> {
        &self.zhu
    }

    pub fn quotient(&self) -> &FilteredQuotient {
        &self.quotient
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn certificates(&self) -> &[Certificate] {
        &self.certificates
    }

    pub fn certified(&self) -> bool {
        self.certificates.iter().all(|c| c.certified)
    }

    /// `dim A(M)_n` for `n = 0..=n_max`.
    pub fn filtration_dims(&self) -> Vec<usize> {
        (0..=self.n_max).map(|n| self.quotient.level_dim(n)).collect()
    }

    pub fn graded_dim(&self, n: i64) -> usize {
        self.graded.get(n as usize).map_or(0, Vec::len)
    }

    pub fn graded_basis(&self, n: i64) -> Vec<Monomial> {
        self.graded[n as usize].iter().map(|&c| self.quotient.layout().column(c).clone()).collect()
    }

    fn check_in_range(&self, x: &State) -> Result<(), VoaError> {
        match x.max_weight() {
            Some(w) if w > self.n_max => Err(VoaError::CutoffExceeded { weight: w, cutoff: self.n_max }),
            _ => Ok(()),
        }
    }

    pub fn reduce(&self, x: &State) -> Result<SparseVec, VoaError> {
        self.check_in_range(x)?;
        self.quotient.reduce(x)
    }

    pub fn level_of(&self, x: &State) -> Result<Option<i64>, VoaError> {
        self.check_in_range(x)?;
        self.quotient.level_of(x)
    }

    /// Image of `x ∈ A(M)_n` in `A(M)_n / A(M)_{n-1}`.
    pub fn graded_class(&self, x: &State, n: i64) -> Result<SparseVec, BimodError> {
        let r = self.reduce(x)?;
        Ok(graded_coords(&r, n, &self.graded, |c| self.quotient.layout().degree_of(c))?)
    }

    /// `ψ(v)` for `v ∈ M(n)`: its class in `gr_n A(M)`.
    pub fn psi(&self, v: &State, n: i64) -> Result<SparseVec, BimodError> {
        if !v.is_zero() && v.weight() != Some(n) {
            return Err(VoaError::NonHomogeneous.into());
        }
        self.graded_class(v, n)
    }

    /// Reduced coordinates of `ā ∗ v̄` for graded representatives: basis `i`
    /// of `S_p` acting on basis `j` of `gr_q A(M)`.
    pub fn left_table(&self) -> &BTreeMap<(i64, usize, i64, usize), SparseVec> {
        &self.left
    }

    pub fn right_table(&self) -> &BTreeMap<(i64, usize, i64, usize), SparseVec> {
        &self.right
    }

    /// Degreewise bases of `gr A(M)` and the action of `gr A(V)`, asserting
    /// that the left action, the right action and `a_{-1} v` all give the
    /// same graded class.
    pub fn gr_am(&self) -> Result<GradedBimoduleSlice, BimodError> {
        let m = self.ctx.module_space();
        let mut action = BTreeMap::new();
        for p in 0..=self.n_max {
            for q in 0..=(self.n_max - p) {
                for (i, a) in self.zhu.graded_basis(p).iter().enumerate() {
                    let a = State::monomial(a.clone());
                    for (j, v) in self.graded_basis(q).iter().enumerate() {
                        let v = State::monomial(v.clone());
                        let l = self.graded_class(&star_left(m, &a, &v)?, p + q)?;
                        let r = self.graded_class(&star_right(m, &v, &a)?, p + q)?;
                        let lit = self.graded_class(&normal_product(m, &a, &v)?, p + q)?;
                        if l != lit || r != lit {
                            return Err(BimodError::Invariant(format!(
                                "graded actions of {} on {} disagree with a_(-1)v",
                                self.ctx.voa_space().format_state(&a),
                                m.format_state(&v)
                            )));
                        }
                        action.insert((p, i, q, j), l);
                    }
                }
            }
        }
        Ok(GradedBimoduleSlice {
            dims: (0..=self.n_max).map(|n| self.graded_dim(n)).collect(),
            basis: (0..=self.n_max)
                .map(|n| self.graded_basis(n).iter().map(|b| m.format_monomial(b)).collect())
                .collect(),
            action,
            certified: self.certified() && self.zhu.certified(),
        })
    }

    pub fn summary(&self, w_spec: &str, per_degree: Vec<bool>) -> BimoduleSummary {
        BimoduleSummary {
            module: self.ctx.label(),
            w_spec: w_spec.into(),
            per_degree,
            dims: self.filtration_dims(),
            certified: self.certified(),
        }
    }
}

/// `gr A(M)` up to a degree, with the (two-sided) action of `gr A(V)`.
#[derive(Clone, Debug, Serialize)]
pub struct GradedBimoduleSlice {
    pub dims: Vec<usize>,
    pub basis: Vec<Vec<String>>,
    /// `(p, i, q, j)` to the class of basis `i` of `S_p` times basis `j` of
    /// `gr_q A(M)`, in the `gr_{p+q}` basis.
    #[serde(skip)]
    pub action: BTreeMap<(i64, usize, i64, usize), SparseVec>,
    pub certified: bool,
}

impl GradedBimoduleSlice {
    /// `x · y` for `x ∈ S_p`, `y ∈ gr_q A(M)` in basis coordinates.
    pub fn act(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Option<SparseVec> {
        let n = p + q;
        let dim = *self.dims.get(n as usize)?;
        let mut out = SparseVec::zero(dim);
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                out.add_scaled(&(a * b), self.action.get(&(p, *i, q, *j))?);
            }
        }
        Some(out)
    }
}

/// JSON export of a bimodule check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BimoduleSummary {
    pub module: String,
    pub w_spec: String,
    pub per_degree: Vec<bool>,
    pub dims: Vec<usize>,
    pub certified: bool,
}

/// Outcome of testing whether `gr A(M)` is generated by `ψ(W)` over
/// `gr A(V)`, together with the strong-generation hypothesis.
#[derive(Clone, Debug, Serialize)]
pub struct GrGenerationReport {
    pub hypothesis: StrongGenReport,
    pub generation: GenerationReport,
}

/// Checks `gr_n A(M) = Σ_{p+q=n} S_p · ψ(W(q))` degreewise.
pub fn check_gr_am_generation(
    am: &AMTruncation,
    slice: &GradedBimoduleSlice,
    w: &[State],
    n_max: i64,
) -> Result<GrGenerationReport, BimodError> {
    let n_max = n_max.min(am.n_max);
    let hypothesis = check_module_strong_generation(am.context(), w, n_max)?;
    let mut flags = Vec::new();
    for n in 0..=n_max {
        let mut span = Subspace::zero(am.graded_dim(n));
        for x in w {
            let Some(q) = x.weight() else { continue };
            if q > n {
                continue;
            }
            let p = n - q;
            let y = am.psi(x, q)?;
            for i in 0..am.zhu.graded_dim(p) {
                let e = SparseVec::unit(am.zhu.graded_dim(p), i);
                let z = slice
                    .act(p, &e, q, &y)
                    .ok_or_else(|| BimodError::Invariant(format!("no action table for degrees {p}, {q}")))?;
                span.insert(&z).expect("graded dimension");
            }
        }
        flags.push(span.rank() == am.graded_dim(n));
    }
    Ok(GrGenerationReport { hypothesis, generation: GenerationReport::from_flags(flags) })
}

/// Ranks of `Σ_i A(V)_{n-n_i} ∗ w_i` and `Σ_i w_i ∗ A(V)_{n-n_i}` against
/// `dim A(M)_n`.
#[derive(Clone, Debug, Serialize)]
pub struct FiltrationGenerationReport {
    pub level_dims: Vec<usize>,
    pub left_ranks: Vec<usize>,
    pub right_ranks: Vec<usize>,
    /// Whether `gr A(M)` is generated by the classes `w̄_i ∈ gr_{n_i}`.
    pub gr_hypothesis: GenerationReport,
}

impl FiltrationGenerationReport {
    pub fn left_ok(&self) -> bool {
        self.left_ranks == self.level_dims
    }

    pub fn right_ok(&self) -> bool {
        self.right_ranks == self.level_dims
    }
}

pub fn check_am_filtration_generation(
    am: &AMTruncation,
    gens: &[(State, i64)],
    n_max: i64,
) -> Result<FiltrationGenerationReport, BimodError> {
    let n_max = n_max.min(am.n_max);
    let m = am.context().module_space();
    let zhu = am.zhu();
    for (w, level) in gens {
        if am.level_of(w)?.map_or(false, |l| l > *level) {
            return Err(BimodError::Precondition(format!("{} is not in level {level}", m.format_state(w))));
        }
    }
    let dim = am.quotient.layout().dim();
    let mut left_ranks = Vec::new();
    let mut right_ranks = Vec::new();
    let mut gr_flags = Vec::new();
    for n in 0..=n_max {
        let mut left = Subspace::zero(dim);
        let mut right = Subspace::zero(dim);
        let mut graded = Subspace::zero(am.graded_dim(n));
        for (w, level) in gens {
            for p in 0..=(n - level) {
                for a in zhu.graded_basis(p) {
                    let a = State::monomial(a);
                    let l = star_left(m, &a, w)?;
                    left.insert(&am.reduce(&l)?).expect("layout dimension");
                    right.insert(&am.reduce(&star_right(m, w, &a)?)?).expect("layout dimension");
                    if p == n - level {
                        graded.insert(&am.graded_class(&l, n)?).expect("graded dimension");
                    }
                }
            }
        }
        left_ranks.push(left.rank());
        right_ranks.push(right.rank());
        gr_flags.push(graded.rank() == am.graded_dim(n));
    }
    Ok(FiltrationGenerationReport {
        level_dims: am.filtration_dims()[..=n_max as usize].to_vec(),
        left_ranks,
        right_ranks,
        gr_hypothesis: GenerationReport::from_flags(gr_flags),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voa::{parse_module_spec, preset};

    pub(crate) fn setup(name: &str, module: &str, n_max: i64) -> AMTruncation {
        let cutoff = n_max + 4;
        let voa = Arc::new(preset(name).unwrap().voa);
        let m = parse_module_spec(&voa, module).unwrap();
        let ctx = Arc::new(ModuleContext::new(voa, Arc::new(m), cutoff).unwrap());
        let zhu = Arc::new(ZhuAlgebra::new(ctx.voa_space().clone(), n_max, 2).unwrap());
        am_truncation(ctx, zhu, n_max, 2).unwrap()
    }

    fn bottom() -> State {
        State::monomial(Monomial::bottom(0))
    }

    #[test]
    fn fock_dims() {
        let am = setup("heisenberg-1", "fock:1", 3);
        assert_eq!(am.filtration_dims(), vec![1, 2, 3, 4]);
        assert!(am.certified());
        assert_eq!(am.quotient().relation_dim(0), 0);
    }

    #[test]
    fn graded_slice_is_symmetric() {
        let am = setup("heisenberg-1", "fock:2", 3);
        let g = am.gr_am().unwrap();
        assert_eq!(g.dims, vec![1, 1, 1, 1]);
        let am = setup("virasoro", "verma:1/2", 3);
        let g = am.gr_am().unwrap();
        assert_eq!(g.dims.iter().sum::<usize>(), am.filtration_dims()[3]);
    }

    #[test]
    fn psi_kills_c2_and_is_onto() {
        let am = setup("heisenberg-1", "fock:1", 3);
        let ctx = am.context().clone();
        let c2 = super::super::c1::c2_module(&ctx, 3).unwrap();
        let m = ctx.module_space();
        for n in 0..=3 {
            for row in c2[n as usize].rows() {
                let x: State = row
                    .entries()
                    .iter()
                    .map(|(i, c)| (m.weight_basis(n).unwrap()[*i].clone(), c.clone()))
                    .collect();
                assert!(am.psi(&x, n).unwrap().is_zero());
            }
            let mut image = Subspace::zero(am.graded_dim(n));
            for b in m.weight_basis(n).unwrap() {
                image.insert(&am.psi(&State::monomial(b.clone()), n).unwrap()).unwrap();
            }
            assert_eq!(image.rank(), am.graded_dim(n));
        }
    }

    #[test]
    fn fock_generation_by_the_bottom_vector() {
        let am = setup("heisenberg-1", "fock:1", 4);
        let g = am.gr_am().unwrap();
        let r = check_gr_am_generation(&am, &g, &[bottom()], 4).unwrap();
        assert!(r.hypothesis.success());
        assert!(r.generation.success());
        let r = check_gr_am_generation(&am, &g, &[], 4).unwrap();
        assert_eq!(r.generation.first_failure, Some(0));

        let f = check_am_filtration_generation(&am, &[(bottom(), 0)], 4).unwrap();
        assert_eq!(f.left_ranks, vec![1, 2, 3, 4, 5]);
        assert_eq!(f.right_ranks, f.left_ranks);
        assert!(f.left_ok() && f.right_ok());
        let f = check_am_filtration_generation(&am, &[], 4).unwrap();
        assert!(!f.left_ok());
    }

    #[test]
    fn verma_bottom_level_misses_degree_one() {
        let am = setup("virasoro", "verma:1/3", 3);
        let g = am.gr_am().unwrap();
        let r = check_gr_am_generation(&am, &g, &[bottom()], 3).unwrap();
        assert_eq!(r.hypothesis.first_failure, Some(1));
        assert_eq!(r.generation.first_failure, Some(1));
    }
}
