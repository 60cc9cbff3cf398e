//! Truncations of `A(V)` and `A(M)` as finite filtered algebras and
//! bimodules, so the generic machinery can run on them.

use std::collections::BTreeMap;

use crate::bimod::AMTruncation;
use crate::exactlin::SparseVec;
use crate::voa::State;
use crate::zhu::ZhuAlgebra;

use super::filtration::Filtration;
use super::graded::{gr_module, gr_ring};
use super::structures::{FiniteFilteredAlgebra, FiniteFilteredBimodule, Table};
use super::FiltError;

/// Quotient columns of degrees `0..=n`, in degree order, with a map from
/// column to basis index.
struct Columns {
    levels: Vec<usize>,
    offsets: Vec<usize>,
    index: BTreeMap<usize, usize>,
}

impl Columns {
    fn new(graded: impl Fn(i64) -> Vec<usize>, n: i64) -> Self {
        let (mut levels, mut offsets, mut index) = (Vec::new(), Vec::new(), BTreeMap::new());
        for p in 0..=n {
            offsets.push(levels.len());
            for c in graded(p) {
                index.insert(c, levels.len());
                levels.push(p as usize);
            }
        }
        Columns { levels, offsets, index }
    }

    fn convert(&self, reduced: &SparseVec) -> Result<SparseVec, FiltError> {
        let mut out = SparseVec::zero(self.levels.len());
        for (c, a) in reduced.entries() {
            let i = self
                .index
                .get(c)
                .ok_or_else(|| FiltError::Invariant(format!("reduced vector uses column {c} outside the truncation")))?;
            out.add_scaled(a, &SparseVec::unit(self.levels.len(), *i));
        }
        Ok(out)
    }

    fn basis(&self, p: i64, i: usize) -> usize {
        self.offsets[p as usize] + i
    }
}

/// `A(V)` up to level `n`, with products defined when the levels sum to
/// at most `n`.
pub fn zhu_truncation(zhu: &ZhuAlgebra, n: i64) -> Result<FiniteFilteredAlgebra, FiltError> {
    if n > zhu.n_max() || n < 0 {
        return Err(FiltError::Precondition(format!("level {n} is outside 0..={}", zhu.n_max())));
    }
    let cols = Columns::new(|p| zhu.quotient().graded_columns(p), n);
    let space = zhu.space();
    let mut names = Vec::new();
    let mut reps = Vec::new();
    for p in 0..=n {
        for m in zhu.graded_basis(p) {
            names.push(space.format_monomial(&m));
            reps.push((p, State::monomial(m)));
        }
    }
    let d = reps.len();
    let mut table: Table = vec![vec![None; d]; d];
    for (i, (p, a)) in reps.iter().enumerate() {
        for (j, (q, b)) in reps.iter().enumerate() {
            if p + q <= n {
                table[i][j] = Some(cols.convert(&zhu.reduce(&zhu.star(a, b).map_err(imp)?).map_err(imp)?)?);
            }
        }
    }
    let identity = cols.convert(&zhu.reduce(&State::vacuum()).map_err(imp)?)?;
    let name = format!("A({}) to level {n}", space.voa().name);
    FiniteFilteredAlgebra::truncated(name, names, cols.levels.clone(), table, identity, n as usize)
}

/// `A(M)` up to the truncation level of `r`, which must come from
/// [`zhu_truncation`] of the same `A(V)`.
pub fn am_bimodule(am: &AMTruncation, r: &FiniteFilteredAlgebra) -> Result<FiniteFilteredBimodule, FiltError> {
    let n = r.truncation().ok_or_else(|| FiltError::Precondition("expected a truncated A(V)".into()))? as i64;
    if n > am.n_max() {
        return Err(FiltError::Precondition(format!("A(M) is computed to level {}, need {n}", am.n_max())));
    }
    let rcols = Columns::new(|p| am.zhu().quotient().graded_columns(p), n);
    if rcols.levels != r.levels() {
        return Err(FiltError::Precondition("algebra does not match this A(V)".into()));
    }
    let mcols = Columns::new(|p| am.quotient().graded_columns(p), n);
    let space = am.context().module_space();
    let names: Vec<String> =
        (0..=n).flat_map(|p| am.graded_basis(p).into_iter().map(|m| space.format_monomial(&m))).collect();
    let dm = names.len();
    let mut left: Table = vec![vec![None; dm]; r.dim()];
    let mut right: Table = vec![vec![None; dm]; r.dim()];
    for (&(p, i, q, j), v) in am.left_table() {
        if p + q <= n {
            left[rcols.basis(p, i)][mcols.basis(q, j)] = Some(mcols.convert(v)?);
        }
    }
    for (&(p, i, q, j), v) in am.right_table() {
        if p + q <= n {
            right[rcols.basis(p, i)][mcols.basis(q, j)] = Some(mcols.convert(v)?);
        }
    }
    let name = format!("A({}) to level {n}", am.context().label());
    FiniteFilteredBimodule::new(r, name, names, left, right, Filtration::from_basis_levels(&mcols.levels))
}

fn imp(e: impl std::fmt::Display) -> FiltError {
    FiltError::Import(e.to_string())
}

/// Whether `gr` of the imported algebra reproduces the graded products
/// computed directly on `A(V)`.
pub fn gr_ring_matches(zhu: &ZhuAlgebra, r: &FiniteFilteredAlgebra) -> Result<bool, FiltError> {
    let direct = zhu.gr_algebra().map_err(imp)?;
    let ours = gr_ring(r)?;
    let n = r.truncation().unwrap_or(r.filtration().top()) as i64;
    for p in 0..=n {
        if ours.dim(p as usize) != direct.dims[p as usize] {
            return Ok(false);
        }
    }
    for (&(p, i, q, j), v) in &direct.products {
        if p + q > n {
            continue;
        }
        if ours.products.get(&(p as usize, i, q as usize, j)) != Some(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `gr` of the imported bimodule, as a left module, reproduces the
/// graded action computed directly on `A(M)`.
pub fn gr_module_matches(
    am: &AMTruncation,
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredBimodule,
) -> Result<bool, FiltError> {
    let direct = am.gr_am().map_err(imp)?;
    let ours = gr_module(r, &m.left_module(r)?)?;
    let n = r.truncation().unwrap_or(0) as i64;
    for (&(p, i, q, j), v) in &direct.action {
        if p + q > n {
            continue;
        }
        if ours.action.get(&(p as usize, i, q as usize, j)) != Some(v) {
            return Ok(false);
        }
    }
    Ok((0..=n).all(|p| ours.dim(p as usize) == direct.dims[p as usize]))
}
