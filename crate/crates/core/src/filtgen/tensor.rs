//! `M ⊗_R N` with the total-level filtration, as a filtered left module
//! over `R ⊗ R^op`, and the graded swap `gr(M ⊗_R N) → gr(N ⊗_R M)`.

use serde::Serialize;

use crate::exactlin::{SparseVec, Subspace};

use super::filtration::{apply_columns, Filtration};
use super::structures::{
    AdaptedChange, EnvelopingAlgebra, FiniteFilteredAlgebra, FiniteFilteredBimodule, FiniteFilteredModule, Table,
};
use super::FiltError;

/// The quotient of `M ⊗ N` by `span{u·a ⊗ v − u ⊗ a·v}` over basis triples.
///
/// Ambient columns are the pairs `(u, v)` of adapted basis vectors sorted by
/// descending `level(u) + level(v)`. Echelon pivots are taken on the lowest
/// column, so the relations with pivot in level `≤ n` span the relations
/// inside level `≤ n` and the remaining columns of level `≤ n` give a basis
/// of the level-`n` piece of the quotient. Over a truncated algebra, pairs
/// above the truncation are added as relations and only relations from
/// triples within it are used.
#[derive(Clone, Debug)]
pub struct FilteredTensor {
    pub left: FiniteFilteredBimodule,
    pub right: FiniteFilteredBimodule,
    pub left_change: AdaptedChange,
    pub right_change: AdaptedChange,
    relations: Subspace,
    column_of_pair: Vec<usize>,
    /// Quotient basis index to ambient column.
    basis_columns: Vec<usize>,
    /// Ambient column to quotient basis index.
    index_of_column: Vec<Option<usize>>,
    pair_of_column: Vec<(usize, usize)>,
    pub module: FiniteFilteredModule,
    pub envelope: EnvelopingAlgebra,
    pub well_defined_action: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorSummary {
    pub left: String,
    pub right: String,
    pub dim: usize,
    pub relation_rank: usize,
    pub level_dims: Vec<usize>,
    pub graded_dims: Vec<usize>,
    pub truncation: Option<usize>,
    pub action_well_defined: bool,
}

pub fn tensor_filtration(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredBimodule,
    n: &FiniteFilteredBimodule,
) -> Result<FilteredTensor, FiltError> {
    if m.base() != r.name() || n.base() != r.name() {
        return Err(FiltError::Precondition(format!(
            "bimodules over {:?} and {:?} cannot be tensored over {:?}",
            m.base(),
            n.base(),
            r.name()
        )));
    }
    let (ma, mc) = m.adapted(r)?;
    let (na, nc) = n.adapted(r)?;
    let env = EnvelopingAlgebra::new(r)?;
    build(r, ma, mc, na, nc, env)
}

fn build(
    r: &FiniteFilteredAlgebra,
    m: FiniteFilteredBimodule,
    mc: AdaptedChange,
    n: FiniteFilteredBimodule,
    nc: AdaptedChange,
    env: EnvelopingAlgebra,
) -> Result<FilteredTensor, FiltError> {
    let (dm, dn, d) = (m.dim(), n.dim(), r.dim());
    let lm = m.basis_levels().to_vec();
    let ln = n.basis_levels().to_vec();
    let amb = dm * dn;
    let level = |p: usize| lm[p / dn] + ln[p % dn];
    let mut order: Vec<usize> = (0..amb).collect();
    order.sort_by_key(|&p| (std::cmp::Reverse(level(p)), p));
    let mut column_of_pair = vec![0; amb];
    for (c, &p) in order.iter().enumerate() {
        column_of_pair[p] = c;
    }
    let pair_of_column: Vec<(usize, usize)> = order.iter().map(|&p| (p / dn, p % dn)).collect();
    let embed = |x: &SparseVec, y: &SparseVec| -> SparseVec {
        let mut out = SparseVec::zero(amb);
        for (u, a) in x.entries() {
            for (v, b) in y.entries() {
                out.add_scaled(&(a * b), &SparseVec::unit(amb, column_of_pair[u * dn + v]));
            }
        }
        out
    };
    let mut relations = Subspace::zero(amb);
    for p in 0..amb {
        if !r.defined(level(p)) {
            relations.insert(&SparseVec::unit(amb, column_of_pair[p]))?;
        }
    }
    let mut generators = Vec::new();
    for u in 0..dm {
        let eu = SparseVec::unit(dm, u);
        for a in 0..d {
            let ea = SparseVec::unit(d, a);
            for v in 0..dn {
                if !r.defined(lm[u] + r.level(a) + ln[v]) {
                    continue;
                }
                let ev = SparseVec::unit(dn, v);
                let ua = m.right_act(&eu, &ea).expect("defined");
                let av = n.left_act(&ea, &ev).expect("defined");
                let rel = embed(&ua, &ev).sub(&embed(&eu, &av));
                relations.insert(&rel)?;
                generators.push(rel);
            }
        }
    }
    let basis_columns: Vec<usize> = relations.non_pivots().into_iter().rev().collect();
    let mut index_of_column = vec![None; amb];
    for (i, &c) in basis_columns.iter().enumerate() {
        index_of_column[c] = Some(i);
    }
    let q = basis_columns.len();
    let to_quotient = |x: &SparseVec| -> Result<SparseVec, FiltError> {
        let red = relations.reduce(x)?;
        Ok(red.remapped(q, |c| index_of_column[c].expect("reduced vectors avoid pivots")))
    };
    let levels: Vec<usize> = basis_columns
        .iter()
        .map(|&c| {
            let (u, v) = pair_of_column[c];
            lm[u] + ln[v]
        })
        .collect();
    let names: Vec<String> = basis_columns
        .iter()
        .map(|&c| {
            let (u, v) = pair_of_column[c];
            format!("{}(x){}", m.names()[u], n.names()[v])
        })
        .collect();
    let re = &env.algebra;
    // (a ⊗ b) · (u ⊗ v) = a·u ⊗ v·b on ambient vectors.
    let act_ambient = |a: usize, b: usize, x: &SparseVec| -> Option<SparseVec> {
        let ea = SparseVec::unit(d, a);
        let eb = SparseVec::unit(d, b);
        let mut out = SparseVec::zero(amb);
        for (c, coef) in x.entries() {
            let (u, v) = pair_of_column[*c];
            let au = m.left_act(&ea, &SparseVec::unit(dm, u))?;
            let vb = n.right_act(&SparseVec::unit(dn, v), &eb)?;
            out.add_scaled(coef, &embed(&au, &vb));
        }
        Some(out)
    };
    let mut table: Table = vec![vec![None; q]; re.dim()];
    for (k, &(a, b)) in env.pairs.iter().enumerate() {
        for t in 0..q {
            if !re.defined(re.level(k) + levels[t]) {
                continue;
            }
            let x = SparseVec::unit(amb, basis_columns[t]);
            let y = act_ambient(a, b, &x).expect("defined");
            table[k][t] = Some(to_quotient(&y)?);
        }
    }
    let mut well_defined_action = true;
    'outer: for (a, b) in env.pairs.iter().copied() {
        for g in &generators {
            let top = g.entries().iter().map(|(c, _)| {
                let (u, v) = pair_of_column[*c];
                lm[u] + ln[v]
            });
            if !r.defined(top.max().unwrap_or(0) + r.level(a) + r.level(b)) {
                continue;
            }
            let y = act_ambient(a, b, g).expect("defined");
            if !relations.contains(&y)? {
                well_defined_action = false;
                break 'outer;
            }
        }
    }
    let module = FiniteFilteredModule::new(
        re,
        format!("{} (x)_R {}", m.name(), n.name()),
        names,
        table,
        Filtration::from_basis_levels(&levels),
    )?;
    Ok(FilteredTensor {
        left: m,
        right: n,
        left_change: mc,
        right_change: nc,
        relations,
        column_of_pair,
        basis_columns,
        index_of_column,
        pair_of_column,
        module,
        envelope: env,
        well_defined_action,
    })
}

impl FilteredTensor {
    pub fn dim(&self) -> usize {
        self.basis_columns.len()
    }

    pub fn filtration(&self) -> &Filtration {
        self.module.filtration()
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    /// Class of `x ⊗ y` for `x, y` in adapted coordinates.
    pub fn class_adapted(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, FiltError> {
        let dn = self.right.dim();
        let amb = self.column_of_pair.len();
        let mut z = SparseVec::zero(amb);
        for (u, a) in x.entries() {
            for (v, b) in y.entries() {
                z.add_scaled(&(a * b), &SparseVec::unit(amb, self.column_of_pair[u * dn + v]));
            }
        }
        let red = self.relations.reduce(&z)?;
        Ok(red.remapped(self.dim(), |c| self.index_of_column[c].expect("reduced vectors avoid pivots")))
    }

    /// Class of `x ⊗ y` for `x ∈ M`, `y ∈ N` in their original coordinates.
    pub fn class_of(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, FiltError> {
        self.class_adapted(&self.left_change.adapt(x), &self.right_change.adapt(y))
    }

    /// The pair of adapted basis vectors whose tensor is quotient basis `t`.
    pub fn basis_pair(&self, t: usize) -> (usize, usize) {
        self.pair_of_column[self.basis_columns[t]]
    }

    /// `x · t` for `x ∈ R ⊗ R^op`.
    pub fn act(&self, x: &SparseVec, t: &SparseVec) -> Option<SparseVec> {
        self.module.act(x, t)
    }

    pub fn summary(&self) -> TensorSummary {
        TensorSummary {
            left: self.left.name().to_string(),
            right: self.right.name().to_string(),
            dim: self.dim(),
            relation_rank: self.relations.rank(),
            level_dims: self.filtration().level_dims(),
            graded_dims: self.filtration().graded_dims(),
            truncation: self.module.truncation(),
            action_well_defined: self.well_defined_action,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationLevel {
    pub level: usize,
    pub spanned: usize,
    pub level_dim: usize,
}

/// Whether every level `r` of `M ⊗_R N` is spanned by
/// `(R ⊗ R^op)_{r - n_i - m_j} · (u_i ⊗ v_j)`.
pub fn check_tensor_generation(
    t: &FilteredTensor,
    left_generators: &[(SparseVec, usize)],
    right_generators: &[(SparseVec, usize)],
) -> Result<Vec<GenerationLevel>, FiltError> {
    let f = t.filtration();
    let re = &t.envelope.algebra;
    let mut out = Vec::new();
    for lvl in 0..=f.top() {
        let mut span = Subspace::zero(t.dim());
        for (u, nu) in left_generators {
            for (v, nv) in right_generators {
                if nu + nv > lvl {
                    continue;
                }
                let uv = t.class_of(u, v)?;
                for x in re.filtration().level((lvl - nu - nv) as i64).rows() {
                    span.insert(&t.act(x, &uv).ok_or_else(|| FiltError::Precondition("beyond truncation".into()))?)?;
                }
            }
        }
        out.push(GenerationLevel { level: lvl, spanned: span.rank(), level_dim: f.level(lvl as i64).rank() });
    }
    Ok(out)
}

/// A linear relation among spanning classes in `gr_n(M ⊗ N)` whose image
/// under the swap is not zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapWitness {
    pub degree: usize,
    pub relation: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapDegree {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub well_defined: bool,
    pub rank: Option<usize>,
    pub equivariant: Option<bool>,
    pub involutive: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrSwapReport {
    pub left: String,
    pub right: String,
    pub degrees: Vec<SwapDegree>,
    pub witness: Option<SwapWitness>,
    /// Triples `(u, a, v)` on which the four classes of `a·u ⊗ v`,
    /// `u·a ⊗ v`, `u ⊗ a·v`, `u ⊗ v·a` were compared.
    pub identity_checks: usize,
    pub identity_failures: usize,
    pub first_identity_failure: Option<String>,
    pub well_defined: bool,
    pub isomorphism: bool,
    pub equivariant: bool,
    pub involutive: bool,
    /// Degreewise matrices, columns indexed by the graded basis of the source.
    #[serde(skip)]
    pub maps: Vec<Vec<SparseVec>>,
}

impl GrSwapReport {
    pub fn verified(&self) -> bool {
        self.well_defined && self.isomorphism && self.equivariant && self.involutive && self.identity_failures == 0
    }
}

/// Degreewise matrix of `ū⊗v ↦ v̄⊗u` from `gr_n(t1)` to `gr_n(t2)`, or a
/// witness relation showing that no such linear map exists.
fn swap_matrices(
    t1: &FilteredTensor,
    t2: &FilteredTensor,
) -> Result<(Vec<Option<Vec<SparseVec>>>, Option<SwapWitness>), FiltError> {
    let (f1, f2) = (t1.filtration(), t2.filtration());
    let top = f1.top().max(f2.top());
    let (lm, ln) = (t1.left.basis_levels(), t1.right.basis_levels());
    let mut maps = Vec::new();
    let mut witness = None;
    for n in 0..=top {
        let (g1, g2) = (f1.graded_dim(n as i64), f2.graded_dim(n as i64));
        let pairs: Vec<(usize, usize)> = (0..lm.len())
            .flat_map(|u| (0..ln.len()).map(move |v| (u, v)))
            .filter(|&(u, v)| lm[u] + ln[v] == n)
            .collect();
        let k = pairs.len();
        let mut aug = Subspace::zero(g1 + g2 + k);
        let mut cs = Vec::with_capacity(k);
        let mut ds = Vec::with_capacity(k);
        for (idx, &(u, v)) in pairs.iter().enumerate() {
            let eu = SparseVec::unit(lm.len(), u);
            let ev = SparseVec::unit(ln.len(), v);
            let c = f1.class(n as i64, &t1.class_adapted(&eu, &ev)?)?;
            let d = f2.class(n as i64, &t2.class_adapted(&ev, &eu)?)?;
            aug.insert(&c.concat(&d).concat(&SparseVec::unit(k, idx)))?;
            cs.push(c);
            ds.push(d);
        }
        let bad = aug.rows().iter().zip(aug.pivots()).find(|(_, &p)| p >= g1 && p < g1 + g2);
        if let Some((row, _)) = bad {
            if witness.is_none() {
                let lambda = row.slice(g1 + g2..g1 + g2 + k);
                let relation = lambda
                    .entries()
                    .iter()
                    .map(|(i, c)| {
                        let (u, v) = pairs[*i];
                        (t1.left.names()[u].clone(), t1.right.names()[v].clone(), c.to_string())
                    })
                    .collect();
                witness = Some(SwapWitness { degree: n, relation });
            }
            maps.push(None);
            continue;
        }
        let mut cols = Vec::with_capacity(g1);
        for i in 0..g1 {
            let lambda = crate::exactlin::solve_combination(g1, &cs, &SparseVec::unit(g1, i))?
                .ok_or_else(|| FiltError::Invariant("pure tensors do not span a graded piece".into()))?;
            let mut img = SparseVec::zero(g2);
            for (l, d) in lambda.iter().zip(&ds) {
                img.add_scaled(l, d);
            }
            cols.push(img);
        }
        maps.push(Some(cols));
    }
    Ok((maps, witness))
}

fn rank_of(cols: &[SparseVec], dim: usize) -> Result<usize, FiltError> {
    Ok(crate::exactlin::rref(dim, cols)?.rank())
}

pub fn gr_swap_iso(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredBimodule,
    n: &FiniteFilteredBimodule,
) -> Result<GrSwapReport, FiltError> {
    let t1 = tensor_filtration(r, m, n)?;
    let t2 = tensor_filtration(r, n, m)?;
    gr_swap_between(r, &t1, &t2)
}

/// The swap between two already computed tensor products `M ⊗ N` and
/// `N ⊗ M` (built from the same adapted bases).
pub fn gr_swap_between(
    r: &FiniteFilteredAlgebra,
    t1: &FilteredTensor,
    t2: &FilteredTensor,
) -> Result<GrSwapReport, FiltError> {
    let (forward, witness) = swap_matrices(t1, t2)?;
    let (backward, back_witness) = swap_matrices(t2, t1)?;
    let (f1, f2) = (t1.filtration(), t2.filtration());
    let re = &t1.envelope.algebra;
    let mut degrees = Vec::new();
    let mut iso = true;
    let mut equivariant = true;
    let mut involutive = true;
    for (deg, map) in forward.iter().enumerate() {
        let (g1, g2) = (f1.graded_dim(deg as i64), f2.graded_dim(deg as i64));
        let mut d = SwapDegree {
            degree: deg,
            source_dim: g1,
            target_dim: g2,
            well_defined: map.is_some(),
            rank: None,
            equivariant: None,
            involutive: None,
        };
        if let Some(cols) = map {
            let rk = rank_of(cols, g2)?;
            iso &= rk == g1 && g1 == g2;
            d.rank = Some(rk);
            if let Some(Some(back)) = backward.get(deg) {
                let ok = (0..g1).all(|i| apply_columns(back, &cols[i], g1) == SparseVec::unit(g1, i));
                involutive &= ok;
                d.involutive = Some(ok);
            } else {
                involutive = false;
                d.involutive = Some(false);
            }
            let mut eq = true;
            for k in 0..re.dim() {
                let p = re.level(k);
                let target = p + deg;
                let Some(Some(tcols)) = forward.get(target) else { continue };
                let x = SparseVec::unit(re.dim(), k);
                for (i, col) in cols.iter().enumerate() {
                    let lifted = f1.lift(deg as i64, &SparseVec::unit(g1, i));
                    let Some(ax) = t1.act(&x, &lifted) else { continue };
                    let lhs = apply_columns(tcols, &f1.class(target as i64, &ax)?, f2.graded_dim(target as i64));
                    let img = f2.lift(deg as i64, col);
                    let ay = t2.act(&x, &img).expect("same truncation on both sides");
                    let rhs = f2.class(target as i64, &ay)?;
                    eq &= lhs == rhs;
                }
            }
            equivariant &= eq;
            d.equivariant = Some(eq);
        } else {
            iso = false;
        }
        degrees.push(d);
    }
    let (checks, failures, first) = commutator_identities(r, t1)?;
    let well_defined = witness.is_none() && back_witness.is_none();
    Ok(GrSwapReport {
        left: t1.left.name().to_string(),
        right: t1.right.name().to_string(),
        degrees,
        witness: witness.or(back_witness),
        identity_checks: checks,
        identity_failures: failures,
        first_identity_failure: first,
        well_defined,
        isomorphism: iso && well_defined,
        equivariant: equivariant && well_defined,
        involutive: involutive && well_defined,
        maps: forward.into_iter().map(Option::unwrap_or_default).collect(),
    })
}

/// For adapted basis vectors `u ∈ M_r`, `v ∈ N_s` and `a ∈ R` of level `m`,
/// compares the classes in degree `r + m + s` of `a·u ⊗ v`, `u·a ⊗ v`,
/// `u ⊗ a·v` and `u ⊗ v·a`.
fn commutator_identities(
    r: &FiniteFilteredAlgebra,
    t: &FilteredTensor,
) -> Result<(usize, usize, Option<String>), FiltError> {
    let f = t.filtration();
    let (m, n) = (&t.left, &t.right);
    let (lm, ln) = (m.basis_levels(), n.basis_levels());
    let (mut checks, mut failures, mut first) = (0, 0, None);
    for u in 0..m.dim() {
        let eu = SparseVec::unit(m.dim(), u);
        for a in 0..r.dim() {
            let ea = SparseVec::unit(r.dim(), a);
            for v in 0..n.dim() {
                let deg = lm[u] + r.level(a) + ln[v];
                if !r.defined(deg) || deg > f.top() {
                    continue;
                }
                let ev = SparseVec::unit(n.dim(), v);
                let au = m.left_act(&ea, &eu).expect("defined");
                let ua = m.right_act(&eu, &ea).expect("defined");
                let av = n.left_act(&ea, &ev).expect("defined");
                let va = n.right_act(&ev, &ea).expect("defined");
                let classes = [
                    f.class(deg as i64, &t.class_adapted(&au, &ev)?)?,
                    f.class(deg as i64, &t.class_adapted(&ua, &ev)?)?,
                    f.class(deg as i64, &t.class_adapted(&eu, &av)?)?,
                    f.class(deg as i64, &t.class_adapted(&eu, &va)?)?,
                ];
                checks += 1;
                if classes.iter().any(|c| c != &classes[0]) {
                    failures += 1;
                    if first.is_none() {
                        first = Some(format!("u = {}, a = {}, v = {}", m.names()[u], r.names()[a], n.names()[v]));
                    }
                }
            }
        }
    }
    Ok((checks, failures, first))
}
