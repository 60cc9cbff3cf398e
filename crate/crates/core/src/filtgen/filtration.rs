//! Finite exhaustive filtrations `0 = F_{-1} ⊆ F_0 ⊆ … ⊆ F_top = Q^dim`
//! and coordinates on their graded pieces.

use crate::exactlin::{Rat, SparseVec, Subspace};

use super::FiltError;

#[derive(Clone, Debug)]
pub struct Filtration {
    dim: usize,
    levels: Vec<Subspace>,
    zero: Subspace,
    pieces: Vec<Piece>,
}

/// Representatives of a basis of `F_p / F_{p-1}`, and the subspace spanned
/// by `(f | 0)` for `f ∈ F_{p-1}` and `(rep_i | e_i)`: reducing `(x | 0)`
/// against it leaves `(0 | -coords)` exactly when `x ∈ F_p`.
#[derive(Clone, Debug)]
struct Piece {
    reps: Vec<SparseVec>,
    aug: Subspace,
}

impl Filtration {
    pub fn new(dim: usize, levels: Vec<Subspace>) -> Result<Self, FiltError> {
        if levels.is_empty() {
            return Err(FiltError::Filtration("at least one level is required".into()));
        }
        for (p, l) in levels.iter().enumerate() {
            if l.ambient_dim() != dim {
                return Err(FiltError::Filtration(format!(
                    "level {p} lives in dimension {}, expected {dim}",
                    l.ambient_dim()
                )));
            }
            if p > 0 && !levels[p - 1].is_subspace_of(l)? {
                return Err(FiltError::Filtration(format!("level {} is not contained in level {p}", p - 1)));
            }
        }
        if levels.last().map(Subspace::rank) != Some(dim) {
            return Err(FiltError::Filtration("the top level is not the whole space".into()));
        }
        let zero = Subspace::zero(dim);
        let mut pieces = Vec::with_capacity(levels.len());
        for (p, l) in levels.iter().enumerate() {
            let below = if p == 0 { &zero } else { &levels[p - 1] };
            let mut span = below.clone();
            let mut reps = Vec::new();
            for r in l.rows() {
                if span.insert(r)? {
                    reps.push(r.clone());
                }
            }
            let k = reps.len();
            let mut aug = Subspace::zero(dim + k);
            for f in below.rows() {
                aug.insert(&f.concat(&SparseVec::zero(k)))?;
            }
            for (i, r) in reps.iter().enumerate() {
                aug.insert(&r.concat(&SparseVec::unit(k, i)))?;
            }
            pieces.push(Piece { reps, aug });
        }
        Ok(Filtration { dim, levels, zero, pieces })
    }

    /// Everything in degree 0.
    pub fn trivial(dim: usize) -> Self {
        Self::new(dim, vec![Subspace::full(dim)]).expect("trivial filtration is valid")
    }

    /// The coordinate filtration in which basis vector `i` has level
    /// `levels[i]`.
    pub fn from_basis_levels(levels: &[usize]) -> Self {
        let dim = levels.len();
        let top = levels.iter().copied().max().unwrap_or(0);
        let subspaces = (0..=top)
            .map(|p| Subspace::coordinate(dim, (0..dim).filter(|&i| levels[i] <= p)))
            .collect();
        Self::new(dim, subspaces).expect("coordinate filtration is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    /// `F_p`, with `F_p = 0` for negative `p` and `F_p = F_top` above the top.
    pub fn level(&self, p: i64) -> &Subspace {
        if p < 0 {
            &self.zero
        } else {
            &self.levels[(p as usize).min(self.top())]
        }
    }

    pub fn level_dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::rank).collect()
    }

    pub fn graded_dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.reps.len()).collect()
    }

    pub fn graded_dim(&self, p: i64) -> usize {
        if p < 0 {
            0
        } else {
            self.pieces.get(p as usize).map_or(0, |q| q.reps.len())
        }
    }

    /// Least `p` with `v ∈ F_p`; `None` for the zero vector.
    pub fn level_of(&self, v: &SparseVec) -> Result<Option<usize>, FiltError> {
        if v.is_zero() {
            return Ok(None);
        }
        for (p, l) in self.levels.iter().enumerate() {
            if l.contains(v)? {
                return Ok(Some(p));
            }
        }
        unreachable!("the top level is the whole space")
    }

    /// Representatives of the chosen basis of `F_p / F_{p-1}`.
    pub fn reps(&self, p: i64) -> &[SparseVec] {
        if p < 0 {
            return &[];
        }
        self.pieces.get(p as usize).map_or(&[], |q| q.reps.as_slice())
    }

    /// The union of all representatives, with their levels: a basis of the
    /// whole space adapted to the filtration.
    pub fn adapted_basis(&self) -> Vec<(usize, SparseVec)> {
        let mut out = Vec::with_capacity(self.dim);
        for (p, piece) in self.pieces.iter().enumerate() {
            out.extend(piece.reps.iter().map(|r| (p, r.clone())));
        }
        out
    }

    /// Coordinates of `x + F_{p-1}` in `gr_p`. Errors unless `x ∈ F_p`.
    pub fn class(&self, p: i64, x: &SparseVec) -> Result<SparseVec, FiltError> {
        x.check_dim(self.dim)?;
        if p < 0 && !x.is_zero() {
            return Err(FiltError::Precondition(format!("vector does not lie in level {p}")));
        }
        // Below zero and above the top the graded piece is zero.
        if p < 0 || p as usize > self.top() {
            return Ok(SparseVec::zero(0));
        }
        let piece = &self.pieces[p as usize];
        let k = piece.reps.len();
        let r = piece.aug.reduce(&x.concat(&SparseVec::zero(k)))?;
        if r.leading().is_some_and(|(c, _)| c < self.dim) {
            return Err(FiltError::Precondition(format!("vector does not lie in level {p}")));
        }
        Ok(r.slice(self.dim..self.dim + k).neg())
    }

    /// The representative `Σ c_i rep_i` of a class in `gr_p`.
    pub fn lift(&self, p: i64, coords: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero(self.dim);
        for (i, c) in coords.entries() {
            out.add_scaled(c, &self.reps(p)[*i]);
        }
        out
    }

    /// Basis levels when every level is a coordinate subspace.
    pub fn basis_levels(&self) -> Option<Vec<usize>> {
        let mut lv = vec![usize::MAX; self.dim];
        for (p, l) in self.levels.iter().enumerate() {
            for &c in l.pivots() {
                if lv[c] == usize::MAX {
                    lv[c] = p;
                }
            }
            if l.rows().iter().any(|r| r.nnz() != 1) {
                return None;
            }
        }
        Some(lv)
    }

    /// Matrix (columns) sending adapted coordinates to ambient coordinates,
    /// and its inverse.
    pub fn adapted_change(&self) -> Result<(Vec<SparseVec>, Vec<SparseVec>), FiltError> {
        let basis: Vec<SparseVec> = self.adapted_basis().into_iter().map(|(_, v)| v).collect();
        let mut inverse = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let c = crate::exactlin::solve_combination(self.dim, &basis, &SparseVec::unit(self.dim, i))?
                .expect("adapted basis spans the space");
            inverse.push(SparseVec::from_dense(&c));
        }
        Ok((basis, inverse))
    }
}

/// `Σ x_i cols[i]` for a vector `x` and a matrix given by its columns.
pub(crate) fn apply_columns(cols: &[SparseVec], x: &SparseVec, dim: usize) -> SparseVec {
    let mut out = SparseVec::zero(dim);
    for (i, c) in x.entries() {
        out.add_scaled(c, &cols[*i]);
    }
    out
}

pub(crate) fn rat_rows(v: &SparseVec) -> Vec<String> {
    v.to_dense().iter().map(Rat::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    fn v(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>())
    }

    #[test]
    fn coordinate_levels_round_trip() {
        let f = Filtration::from_basis_levels(&[1, 0, 2, 0]);
        assert_eq!(f.level_dims(), vec![2, 3, 4]);
        assert_eq!(f.graded_dims(), vec![2, 1, 1]);
        assert_eq!(f.basis_levels(), Some(vec![1, 0, 2, 0]));
        assert_eq!(f.level_of(&v(&[0, 3, 0, 1])).unwrap(), Some(0));
        assert_eq!(f.level_of(&v(&[1, 3, 0, 0])).unwrap(), Some(1));
        assert_eq!(f.class(1, &v(&[5, 3, 0, 0])).unwrap(), v(&[5]));
        assert!(f.class(0, &v(&[5, 3, 0, 0])).is_err());
    }

    #[test]
    fn skew_filtration_classes_and_lifts() {
        let f1 = crate::exactlin::rref(3, &[v(&[1, 1, 0])]).unwrap();
        let f = Filtration::new(3, vec![f1, Subspace::full(3)]).unwrap();
        assert_eq!(f.basis_levels(), None);
        assert_eq!(f.graded_dims(), vec![1, 2]);
        let x = v(&[2, 3, 7]);
        let c = f.class(1, &x).unwrap();
        let back = f.lift(1, &c);
        assert!(f.level(0).contains(&x.sub(&back)).unwrap());
        let (basis, inv) = f.adapted_change().unwrap();
        for i in 0..3 {
            assert_eq!(apply_columns(&basis, &inv[i], 3), SparseVec::unit(3, i));
        }
    }

    #[test]
    fn rejects_bad_filtrations() {
        let a = Subspace::coordinate(2, [0]);
        let b = Subspace::coordinate(2, [1]);
        assert!(Filtration::new(2, vec![a.clone(), b]).is_err());
        assert!(Filtration::new(2, vec![a]).is_err());
    }
}
