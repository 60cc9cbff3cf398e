//! Associated graded rings, modules and ideals, and the comparison of
//! ideals with their graded ideals on enumerated instances.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::exactlin::{Rat, SparseVec, Subspace};

use super::structures::{format_combination, FiniteFilteredAlgebra, FiniteFilteredModule};
use super::FiltError;

/// `gr R` in the graded bases chosen by the filtration.
#[derive(Clone, Debug, Serialize)]
pub struct GradedAlgebra {
    pub dims: Vec<usize>,
    /// `(p, i, q, j)` to the coordinates of `e_{p,i} e_{q,j}` in degree `p + q`.
    #[serde(skip)]
    pub products: BTreeMap<(usize, usize, usize, usize), SparseVec>,
    pub truncation: Option<usize>,
}

impl GradedAlgebra {
    pub fn dim(&self, p: usize) -> usize {
        self.dims.get(p).copied().unwrap_or(0)
    }

    pub fn multiply(&self, p: usize, x: &SparseVec, q: usize, y: &SparseVec) -> Option<SparseVec> {
        let mut out = SparseVec::zero(self.dim(p + q));
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                out.add_scaled(&(a * b), self.products.get(&(p, *i, q, *j))?);
            }
        }
        Some(out)
    }
}

/// `gr M` with the induced action of `gr R`.
#[derive(Clone, Debug, Serialize)]
pub struct GradedModule {
    pub dims: Vec<usize>,
    /// `(p, i, q, j)`: basis `i` of `gr_p R` on basis `j` of `gr_q M`.
    #[serde(skip)]
    pub action: BTreeMap<(usize, usize, usize, usize), SparseVec>,
}

impl GradedModule {
    pub fn dim(&self, p: usize) -> usize {
        self.dims.get(p).copied().unwrap_or(0)
    }

    pub fn act(&self, p: usize, x: &SparseVec, q: usize, y: &SparseVec) -> Option<SparseVec> {
        let mut out = SparseVec::zero(self.dim(p + q));
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                out.add_scaled(&(a * b), self.action.get(&(p, *i, q, *j))?);
            }
        }
        Some(out)
    }
}

/// Products of graded representatives, after checking that changing a
/// representative by a lower-level element does not change the class.
pub fn gr_ring(r: &FiniteFilteredAlgebra) -> Result<GradedAlgebra, FiltError> {
    let f = r.filtration();
    let top = f.top();
    let mut products = BTreeMap::new();
    for p in 0..=top {
        for q in 0..=top {
            if !r.defined(p + q) {
                continue;
            }
            let n = (p + q) as i64;
            let lower = f.level(n - 1);
            for (i, x) in f.reps(p as i64).iter().enumerate() {
                for (j, y) in f.reps(q as i64).iter().enumerate() {
                    let xy = r.mul(x, y).expect("defined");
                    products.insert((p, i, q, j), f.class(n, &xy)?);
                }
            }
            for g in f.level(p as i64 - 1).rows() {
                for y in f.reps(q as i64) {
                    if !lower.contains(&r.mul(g, y).expect("defined"))? {
                        return Err(FiltError::Axiom(format!("{}: product class depends on representatives", r.name())));
                    }
                }
            }
            for x in f.reps(p as i64) {
                for g in f.level(q as i64 - 1).rows() {
                    if !lower.contains(&r.mul(x, g).expect("defined"))? {
                        return Err(FiltError::Axiom(format!("{}: product class depends on representatives", r.name())));
                    }
                }
            }
        }
    }
    Ok(GradedAlgebra { dims: f.graded_dims(), products, truncation: r.truncation() })
}

pub fn gr_module(r: &FiniteFilteredAlgebra, m: &FiniteFilteredModule) -> Result<GradedModule, FiltError> {
    let fr = r.filtration();
    let fm = m.filtration();
    let mut action = BTreeMap::new();
    for p in 0..=fr.top() {
        for q in 0..=fm.top() {
            if !r.defined(p + q) {
                continue;
            }
            let n = (p + q) as i64;
            let lower = fm.level(n - 1);
            for (i, a) in fr.reps(p as i64).iter().enumerate() {
                for (j, x) in fm.reps(q as i64).iter().enumerate() {
                    let ax = m.act(a, x).expect("defined");
                    action.insert((p, i, q, j), fm.class(n, &ax)?);
                }
                for g in fm.level(q as i64 - 1).rows() {
                    if !lower.contains(&m.act(a, g).expect("defined"))? {
                        return Err(FiltError::Axiom(format!("{}: action class depends on representatives", m.name())));
                    }
                }
            }
            for g in fr.level(p as i64 - 1).rows() {
                for x in fm.reps(q as i64) {
                    if !lower.contains(&m.act(g, x).expect("defined"))? {
                        return Err(FiltError::Axiom(format!("{}: action class depends on representatives", m.name())));
                    }
                }
            }
        }
    }
    Ok(GradedModule { dims: fm.graded_dims(), action })
}

/// `gr I = ⊕ (I + F_{p-1}) ∩ F_p / F_{p-1}`, one subspace of `gr_p R` per
/// degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedIdeal {
    pub pieces: Vec<Subspace>,
}

impl GradedIdeal {
    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::rank).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.iter().map(Subspace::rank).sum()
    }

    pub fn is_subset(&self, other: &GradedIdeal) -> Result<bool, FiltError> {
        for (a, b) in self.pieces.iter().zip(&other.pieces) {
            if !a.is_subspace_of(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn closed_under(r: &FiniteFilteredAlgebra, i: &Subspace, right: bool) -> Result<bool, FiltError> {
    for a in 0..r.dim() {
        let ea = SparseVec::unit(r.dim(), a);
        for x in i.rows() {
            let y = if right { r.mul(x, &ea) } else { r.mul(&ea, x) };
            let y = y.ok_or_else(|| FiltError::Precondition("ideals of truncated algebras are not supported".into()))?;
            if !i.contains(&y)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_left_ideal(r: &FiniteFilteredAlgebra, i: &Subspace) -> Result<bool, FiltError> {
    closed_under(r, i, false)
}

pub fn is_two_sided_ideal(r: &FiniteFilteredAlgebra, i: &Subspace) -> Result<bool, FiltError> {
    Ok(closed_under(r, i, false)? && closed_under(r, i, true)?)
}

/// The graded ideal of a left (or two-sided) ideal, checked to be a graded
/// ideal of `gr R` of the same total dimension.
pub fn gr_ideal(
    r: &FiniteFilteredAlgebra,
    gr: &GradedAlgebra,
    i: &Subspace,
    two_sided: bool,
) -> Result<GradedIdeal, FiltError> {
    let ok = if two_sided { is_two_sided_ideal(r, i)? } else { is_left_ideal(r, i)? };
    if !ok {
        let kind = if two_sided { "two-sided" } else { "left" };
        return Err(FiltError::Precondition(format!("subspace is not a {kind} ideal")));
    }
    let f = r.filtration();
    let mut pieces = Vec::with_capacity(f.top() + 1);
    for p in 0..=f.top() {
        let part = i.intersect(f.level(p as i64))?;
        let mut s = Subspace::zero(f.graded_dim(p as i64));
        for x in part.rows() {
            s.insert(&f.class(p as i64, x)?)?;
        }
        pieces.push(s);
    }
    let g = GradedIdeal { pieces };
    for p in 0..=f.top() {
        for q in 0..=f.top() {
            if p + q > f.top() {
                continue;
            }
            for e in 0..gr.dim(q) {
                let e = SparseVec::unit(gr.dim(q), e);
                for y in g.pieces[p].rows() {
                    let l = gr.multiply(q, &e, p, y).expect("defined");
                    if !g.pieces[p + q].contains(&l)? {
                        return Err(FiltError::Invariant("gr I is not closed under gr R".into()));
                    }
                    if two_sided {
                        let rt = gr.multiply(p, y, q, &e).expect("defined");
                        if !g.pieces[p + q].contains(&rt)? {
                            return Err(FiltError::Invariant("gr I is not closed under gr R on the right".into()));
                        }
                    }
                }
            }
        }
    }
    if g.total_dim() != i.rank() {
        return Err(FiltError::Invariant(format!(
            "dim gr I = {} but dim I = {}",
            g.total_dim(),
            i.rank()
        )));
    }
    Ok(g)
}

fn ideal_closure(r: &FiniteFilteredAlgebra, gens: &[SparseVec], two_sided: bool) -> Result<Subspace, FiltError> {
    let d = r.dim();
    let mut s = crate::exactlin::rref(d, gens)?;
    loop {
        let before = s.rank();
        let rows = s.rows().to_vec();
        for a in 0..d {
            let ea = SparseVec::unit(d, a);
            for x in &rows {
                s.insert(&r.mul(&ea, x).expect("untruncated"))?;
                if two_sided {
                    s.insert(&r.mul(x, &ea).expect("untruncated"))?;
                }
            }
        }
        if s.rank() == before {
            return Ok(s);
        }
    }
}

fn key(s: &Subspace) -> Vec<Vec<Rat>> {
    s.rows().iter().map(SparseVec::to_dense).collect()
}

/// Ideals generated by at most `max_generators` vectors whose coordinates
/// are integers in `[-bound, bound]`, deduplicated.
pub fn enumerate_ideals(
    r: &FiniteFilteredAlgebra,
    two_sided: bool,
    bound: i64,
    max_generators: usize,
) -> Result<Vec<Subspace>, FiltError> {
    if r.truncation().is_some() {
        return Err(FiltError::Precondition("ideals of truncated algebras are not supported".into()));
    }
    let d = r.dim();
    let width = (2 * bound + 1) as usize;
    let mut principal: BTreeMap<Vec<Vec<Rat>>, Subspace> = BTreeMap::new();
    let zero = Subspace::zero(d);
    principal.insert(key(&zero), zero);
    for code in 0..width.pow(d as u32) {
        let mut c = code;
        let mut xs = Vec::with_capacity(d);
        for _ in 0..d {
            xs.push(Rat::from_integer((c % width) as i64 - bound));
            c /= width;
        }
        let v = SparseVec::from_dense(&xs);
        if v.is_zero() {
            continue;
        }
        let s = ideal_closure(r, &[v], two_sided)?;
        principal.entry(key(&s)).or_insert(s);
    }
    let mut all = principal.clone();
    let mut frontier: Vec<Subspace> = principal.values().cloned().collect();
    for _ in 1..max_generators {
        let mut next = Vec::new();
        for a in &frontier {
            for b in principal.values() {
                let s = a.sum(b)?;
                let k = key(&s);
                if !all.contains_key(&k) {
                    all.insert(k, s.clone());
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    Ok(all.into_values().collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealMapReport {
    pub algebra: String,
    pub two_sided: bool,
    pub ideals: usize,
    pub comparable_pairs: usize,
    pub dims_preserved: bool,
    pub order_preserving: bool,
    pub strictly_order_preserving: bool,
    pub injective: bool,
    /// Two different ideals with the same graded ideal.
    pub injectivity_witness: Option<(String, String)>,
    pub strictness_witness: Option<(String, String)>,
    pub graded_dims: Vec<Vec<usize>>,
}

fn describe(r: &FiniteFilteredAlgebra, s: &Subspace) -> String {
    let rows: Vec<String> = s.rows().iter().map(|x| format_combination(r.names(), x)).collect();
    format!("span{{{}}}", rows.join(", "))
}

/// Runs `gr_ideal` on every enumerated ideal and compares the two orders.
pub fn check_ideal_map(
    r: &FiniteFilteredAlgebra,
    two_sided: bool,
    bound: i64,
    max_generators: usize,
) -> Result<IdealMapReport, FiltError> {
    let gr = gr_ring(r)?;
    let ideals = enumerate_ideals(r, two_sided, bound, max_generators)?;
    let graded: Vec<GradedIdeal> =
        ideals.iter().map(|i| gr_ideal(r, &gr, i, two_sided)).collect::<Result<_, _>>()?;
    let mut rep = IdealMapReport {
        algebra: r.name().to_string(),
        two_sided,
        ideals: ideals.len(),
        comparable_pairs: 0,
        dims_preserved: graded.iter().zip(&ideals).all(|(g, i)| g.total_dim() == i.rank()),
        order_preserving: true,
        strictly_order_preserving: true,
        injective: true,
        injectivity_witness: None,
        strictness_witness: None,
        graded_dims: graded.iter().map(GradedIdeal::dims).collect::<BTreeSet<_>>().into_iter().collect(),
    };
    for a in 0..ideals.len() {
        for b in 0..ideals.len() {
            if a == b {
                continue;
            }
            if a < b && graded[a] == graded[b] && rep.injective {
                rep.injective = false;
                rep.injectivity_witness = Some((describe(r, &ideals[a]), describe(r, &ideals[b])));
            }
            if ideals[a].is_subspace_of(&ideals[b])? {
                rep.comparable_pairs += 1;
                if !graded[a].is_subset(&graded[b])? {
                    rep.order_preserving = false;
                }
                // `a ≠ b` as sets here, so the inclusion is strict.
                if graded[a] == graded[b] && rep.strictly_order_preserving {
                    rep.strictly_order_preserving = false;
                    rep.strictness_witness = Some((describe(r, &ideals[a]), describe(r, &ideals[b])));
                }
            }
        }
    }
    Ok(rep)
}
