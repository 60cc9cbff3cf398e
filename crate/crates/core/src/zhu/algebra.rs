//! Truncations of Zhu's algebra, its weight filtration and the associated
//! graded ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::exactlin::SparseVec;
use crate::voa::{Monomial, Space, State, VoaError};

use super::ops::{circ, normal_product, star};
use super::quotient::{Certificate, FilteredQuotient, RelationSource};
use super::ZhuError;

/// The spanning set of `O(V)` with top weight exactly `t`: all `a ∘ b` for
/// basis monomials with `wt a + wt b + 1 = t`.
pub fn o_relations(space: Arc<Space>) -> RelationSource {
    Arc::new(move |t: i64| {
        let mut out = Vec::new();
        for wa in 1..t {
            let wb = t - 1 - wa;
            if wb < 0 {
                continue;
            }
            for am in space.weight_basis(wa)? {
                for bm in space.weight_basis(wb)? {
                    out.push((am.clone(), bm.clone()));
                }
            }
        }
        use rayon::prelude::*;
        out.par_iter()
            .map(|(am, bm)| circ(&space, &State::monomial(am.clone()), &State::monomial(bm.clone())))
            .collect()
    })
}

/// `O(V) ∩ V_{≤n}` computed from generators of weight up to `bound`.
#[derive(Clone, Debug, Serialize)]
pub struct OSpaceTruncation {
    pub level: i64,
    pub bound: i64,
    pub dim: usize,
    pub certificate: Certificate,
}

/// Builds the relation space with generator weight at most `bound`, and a
/// certificate obtained by extending further.
pub fn o_space(space: Arc<Space>, level: i64, bound: i64, margin: usize) -> Result<OSpaceTruncation, VoaError> {
    let mut q = FilteredQuotient::new(space.clone(), o_relations(space))?;
    q.extend_to(bound)?;
    let dim = q.relation_dim(level);
    let bound = q.bound();
    let certificate = q.certify(level, margin)?;
    Ok(OSpaceTruncation { level, bound, dim, certificate })
}

/// Dimensions of a filtered truncation with its certification status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimsTable {
    pub family: String,
    pub parameters: BTreeMap<String, String>,
    pub cutoff: i64,
    pub certified: bool,
    pub dims: Vec<usize>,
}

/// `A(V)_{≤n_max}` with certified relations and graded coordinates.
pub struct ZhuAlgebra {
    quotient: FilteredQuotient,
    n_max: i64,
    certificates: Vec<Certificate>,
    /// Columns spanning each graded piece `S_n`.
    graded: Vec<Vec<usize>>,
}

impl std::fmt::Debug for ZhuAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ZhuAlgebra").field("n_max", &self.n_max).field("quotient", &self.quotient).finish()
    }
}

impl ZhuAlgebra {
    /// Levels `0..=n_max`, each certified with the given margin if the
    /// engine cutoff leaves room.
    pub fn new(space: Arc<Space>, n_max: i64, margin: usize) -> Result<Self, VoaError> {
        space.check_weight(n_max)?;
        let quotient = FilteredQuotient::new(space.clone(), o_relations(space))?;
        Self::from_quotient(quotient, n_max, margin)
    }

    pub(crate) fn from_quotient(mut quotient: FilteredQuotient, n_max: i64, margin: usize) -> Result<Self, VoaError> {
        let mut certificates = Vec::new();
        for n in (0..=n_max).rev() {
            certificates.push(quotient.certify(n, margin)?);
        }
        certificates.reverse();
        // later extensions may have refined lower levels, so record them again
        let certificates = certificates
            .into_iter()
            .map(|c| refresh(&quotient, c))
            .collect();
        let graded = (0..=n_max).map(|n| quotient.graded_columns(n)).collect();
        Ok(ZhuAlgebra { quotient, n_max, certificates, graded })
    }

    pub fn space(&self) -> &Arc<Space> {
        self.quotient.space()
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

    /// `dim A(V)_n` for `n = 0..=n_max`.
    pub fn filtration_dims(&self) -> Vec<usize> {
        (0..=self.n_max).map(|n| self.quotient.level_dim(n)).collect()
    }

    pub fn dims_table(&self) -> DimsTable {
        let voa = self.space().voa();
        DimsTable {
            family: voa.family.tag().into(),
            parameters: voa.parameters().into_iter().collect(),
            cutoff: self.space().cutoff(),
            certified: self.certified(),
            dims: self.filtration_dims(),
        }
    }

    pub fn graded_dim(&self, n: i64) -> usize {
        self.graded.get(n as usize).map_or(0, Vec::len)
    }

    /// The monomial representing basis element `i` of `S_n`.
    pub fn graded_basis(&self, n: i64) -> Vec<Monomial> {
        self.graded[n as usize].iter().map(|&c| self.quotient.layout().column(c).clone()).collect()
    }

    pub fn reduce(&self, x: &State) -> Result<SparseVec, VoaError> {
        self.check_in_range(x)?;
        self.quotient.reduce(x)
    }

    pub fn level_of(&self, x: &State) -> Result<Option<i64>, VoaError> {
        self.check_in_range(x)?;
        self.quotient.level_of(x)
    }

    fn check_in_range(&self, x: &State) -> Result<(), VoaError> {
        match x.max_weight() {
            Some(w) if w > self.n_max => Err(VoaError::CutoffExceeded { weight: w, cutoff: self.n_max }),
            _ => Ok(()),
        }
    }

    /// The image of `x ∈ A(V)_n` in `S_n = A(V)_n / A(V)_{n-1}`, as
    /// coordinates in the graded basis. Errors if `x` has level above `n`.
    pub fn graded_class(&self, x: &State, n: i64) -> Result<SparseVec, ZhuError> {
        let r = self.reduce(x)?;
        graded_coords(&r, n, &self.graded, |c| self.quotient.layout().degree_of(c))
    }

    /// `φ(x)`: the class of a weight-`n` vector in `S_n`.
    pub fn phi(&self, x: &State, n: i64) -> Result<SparseVec, ZhuError> {
        if !x.is_zero() && x.weight() != Some(n) {
            return Err(VoaError::NonHomogeneous.into());
        }
        self.graded_class(x, n)
    }

    pub fn star(&self, a: &State, b: &State) -> Result<State, VoaError> {
        star(self.space(), a, b)
    }

    /// Degreewise bases and products of `gr A(V)` up to `n_max`, asserting
    /// that `ā ∗ b̄` is the class of `a_{-1} b` and that the product is
    /// commutative.
    pub fn gr_algebra(&self) -> Result<GradedAlgebraSlice, ZhuError> {
        let space = self.space();
        let mut products = BTreeMap::new();
        for p in 0..=self.n_max {
            for q in 0..=(self.n_max - p) {
                let (bp, bq) = (self.graded_basis(p), self.graded_basis(q));
                for (i, a) in bp.iter().enumerate() {
                    let a = State::monomial(a.clone());
                    for (j, b) in bq.iter().enumerate() {
                        let b = State::monomial(b.clone());
                        let ab = self.graded_class(&star(space, &a, &b)?, p + q)?;
                        let lit = self.graded_class(&normal_product(space, &a, &b)?, p + q)?;
                        if ab != lit {
                            return Err(ZhuError::Invariant(format!(
                                "product of classes of {} and {} differs from the class of a_(-1)b",
                                space.format_state(&a),
                                space.format_state(&b)
                            )));
                        }
                        let ba = self.graded_class(&star(space, &b, &a)?, p + q)?;
                        if ab != ba {
                            return Err(ZhuError::Invariant(format!(
                                "graded product is not commutative on {} and {}",
                                space.format_state(&a),
                                space.format_state(&b)
                            )));
                        }
                        products.insert((p, i, q, j), ab);
                    }
                }
            }
        }
        Ok(GradedAlgebraSlice {
            dims: (0..=self.n_max).map(|n| self.graded_dim(n)).collect(),
            basis: (0..=self.n_max)
                .map(|n| self.graded_basis(n).iter().map(|m| space.format_monomial(m)).collect())
                .collect(),
            products,
            certified: self.certified(),
        })
    }
}

/// The final relation space is the one every later result uses; append its
/// dimension if the bound has moved on.
pub(crate) fn refresh(q: &FilteredQuotient, mut c: Certificate) -> Certificate {
    if let Some(&(b, _)) = c.history.last() {
        if b < q.bound() {
            let d = q.relation_dim(c.level);
            let unchanged = c.history.last().map(|h| h.1) == Some(d);
            c.history.push((q.bound(), d));
            c.certified &= unchanged;
        }
    }
    c
}

pub(crate) fn graded_coords(
    reduced: &SparseVec,
    n: i64,
    graded: &[Vec<usize>],
    degree_of: impl Fn(usize) -> i64,
) -> Result<SparseVec, ZhuError> {
    let cols = graded.get(n.max(0) as usize).filter(|_| n >= 0).ok_or_else(|| ZhuError::Invariant(format!("degree {n} is out of range")))?;
    let mut entries = Vec::new();
    for (c, v) in reduced.entries() {
        let d = degree_of(*c);
        if d > n {
            return Err(ZhuError::Invariant(format!("class has level {d}, expected at most {n}")));
        }
        if d == n {
            let i = cols.binary_search(c).map_err(|_| ZhuError::Invariant("reduced vector hits a pivot column".into()))?;
            entries.push((i, v.clone()));
        }
    }
    Ok(SparseVec::from_entries(cols.len(), entries).expect("graded index in range"))
}

/// Degreewise bases of `gr A(V)` with the structure constants of the
/// induced product.
#[derive(Clone, Debug, Serialize)]
pub struct GradedAlgebraSlice {
    pub dims: Vec<usize>,
    pub basis: Vec<Vec<String>>,
    /// `(p, i, q, j)` ↦ coordinates of `e_{p,i} · e_{q,j}` in degree `p + q`.
    #[serde(skip)]
    pub products: BTreeMap<(i64, usize, i64, usize), SparseVec>,
    pub certified: bool,
}

impl GradedAlgebraSlice {
    /// Product of two homogeneous elements given in graded coordinates.
    pub fn multiply(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Option<SparseVec> {
        let dim = *self.dims.get((p + q) as usize)?;
        let mut out = SparseVec::zero(dim);
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                let prod = self.products.get(&(p, *i, q, *j))?;
                out.add_scaled(&(a * b), prod);
            }
        }
        Some(out)
    }

    /// Greedy choice of algebra generators degree by degree: in each degree,
    /// how many basis elements are not products of lower degrees.
    pub fn generator_degrees(&self) -> Vec<usize> {
        let top = self.dims.len() as i64 - 1;
        let mut new_gens = vec![0; self.dims.len()];
        for n in 1..=top {
            let mut span = crate::exactlin::Subspace::zero(self.dims[n as usize]);
            for p in 1..n {
                let q = n - p;
                for i in 0..self.dims[p as usize] {
                    for j in 0..self.dims[q as usize] {
                        if let Some(v) = self.products.get(&(p, i, q, j)) {
                            span.insert(v).expect("graded dimension");
                        }
                    }
                }
            }
            new_gens[n as usize] = self.dims[n as usize] - span.rank();
        }
        new_gens
    }
}

/// Finite-generation evidence for `gr A(V)`: where new generators appear,
/// and whether the last two computed degrees needed none. A heuristic
/// witness, not a proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationWitness {
    pub new_generators: Vec<usize>,
    pub generator_degrees: Vec<i64>,
    pub quiet_tail: bool,
}

pub fn gr_finite_generation_witness(slice: &GradedAlgebraSlice) -> GenerationWitness {
    let new_generators = slice.generator_degrees();
    let generator_degrees = new_generators
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(d, _)| d as i64)
        .collect();
    let n = new_generators.len();
    let quiet_tail = n >= 3 && new_generators[n - 2..].iter().all(|&k| k == 0);
    GenerationWitness { new_generators, generator_degrees, quiet_tail }
}
