use num_traits::One;

use super::{LinError, Rat, SparseVec};

/// A linear subspace of `Q^dim`, held as a reduced row-echelon basis.
///
/// Rows are sorted by pivot, each pivot entry is 1, and every other row is
/// zero in that pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    dim: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

/// Row-reduces `rows` into a canonical RREF basis of their span.
pub fn rref(dim: usize, rows: &[SparseVec]) -> Result<Subspace, LinError> {
    let mut s = Subspace::zero(dim);
    for r in rows {
        s.insert(r)?;
    }
    Ok(s)
}

/// Expresses `target` as a combination of `generators`, returning one
/// coefficient per generator, or `None` when `target` is outside their span.
pub fn solve_combination(
    dim: usize,
    generators: &[SparseVec],
    target: &SparseVec,
) -> Result<Option<Vec<Rat>>, LinError> {
    target.check_dim(dim)?;
    let k = generators.len();
    let mut aug = Subspace::zero(dim + k);
    for (i, g) in generators.iter().enumerate() {
        g.check_dim(dim)?;
        aug.insert(&g.concat(&SparseVec::unit(k, i)))?;
    }
    let reduced = aug.reduce(&target.concat(&SparseVec::zero(k)))?;
    match reduced.leading() {
        Some((i, _)) if i < dim => Ok(None),
        _ => {
            let coeffs = reduced.slice(dim..dim + k).neg();
            Ok(Some(coeffs.to_dense()))
        }
    }
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Subspace { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Subspace {
            dim,
            rows: (0..dim).map(|i| SparseVec::unit(dim, i)).collect(),
            pivots: (0..dim).collect(),
        }
    }

    /// Coordinate subspace spanned by the given basis indices.
    pub fn coordinate(dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        Subspace {
            dim,
            rows: idx.iter().map(|&i| SparseVec::unit(dim, i)).collect(),
            pivots: idx,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.binary_search(&col).is_ok()
    }

    /// Columns that are not pivots: the canonical complement basis.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim - self.rank());
        let mut p = self.pivots.iter().peekable();
        for c in 0..self.dim {
            if p.peek() == Some(&&c) {
                p.next();
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Subtracts basis rows until `v` has no entry in any pivot column.
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec, LinError> {
        v.check_dim(self.dim)?;
        // Rows are reduced, so subtracting one never touches another pivot
        // column: the pivot entries of `v` itself give the coefficients.
        let mut out = v.clone();
        for (col, c) in v.entries() {
            if let Ok(k) = self.pivots.binary_search(col) {
                out.add_scaled(&-c, &self.rows[k]);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LinError> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> Result<bool, LinError> {
        let mut r = self.reduce(v)?;
        let (p, lead) = match r.leading() {
            None => return Ok(false),
            Some((p, lead)) => (p, lead.clone()),
        };
        if !lead.is_one() {
            r.scale(&(Rat::one() / lead));
        }
        for row in &mut self.rows {
            if let Some(c) = row.get_ref(p).cloned() {
                row.add_scaled(&-c, &r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        Ok(true)
    }

    pub fn extend<'a>(&mut self, vs: impl IntoIterator<Item = &'a SparseVec>) -> Result<(), LinError> {
        for v in vs {
            self.insert(v)?;
        }
        Ok(())
    }

    /// Canonical complement coordinates of the coset `v + self`: the reduced
    /// vector, supported on non-pivot columns only.
    pub fn quotient_coords(&self, v: &SparseVec) -> Result<SparseVec, LinError> {
        self.reduce(v)
    }

    /// Coefficients of `v` with respect to the echelon rows, if `v` lies in
    /// the span.
    pub fn coordinates(&self, v: &SparseVec) -> Result<Option<Vec<Rat>>, LinError> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v.get(p)).collect()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinError> {
        self.same_dim(other)?;
        let mut out = self.clone();
        out.extend(other.rows.iter())?;
        Ok(out)
    }

    /// Intersection via the Zassenhaus block elimination: rows `(a | a)` and
    /// `(b | 0)`; echelon rows whose left half vanishes span `a ∩ b`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinError> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut block = Subspace::zero(2 * n);
        for a in &self.rows {
            block.insert(&a.concat(a))?;
        }
        for b in &other.rows {
            block.insert(&b.concat(&SparseVec::zero(n)))?;
        }
        let mut out = Subspace::zero(n);
        for (row, &p) in block.rows.iter().zip(&block.pivots) {
            if p >= n {
                out.insert(&row.slice(n..2 * n))?;
            }
        }
        Ok(out)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinError> {
        self.same_dim(other)?;
        for r in &self.rows {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The rows whose pivot is at least `col`. Because the basis is reduced,
    /// these span the intersection with the coordinate subspace on columns
    /// `col..dim`.
    pub fn tail_from(&self, col: usize) -> Subspace {
        let start = self.pivots.partition_point(|&p| p < col);
        Subspace {
            dim: self.dim,
            rows: self.rows[start..].to_vec(),
            pivots: self.pivots[start..].to_vec(),
        }
    }

    fn same_dim(&self, other: &Subspace) -> Result<(), LinError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(LinError::DimensionMismatch { expected: self.dim, found: other.dim })
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;
    use num_traits::Zero;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>())
    }

    fn random_rows(rng: &mut ChaCha8Rng, n: usize, dim: usize, density: f64) -> Vec<SparseVec> {
        (0..n)
            .map(|_| {
                let mut entries = Vec::new();
                for i in 0..dim {
                    if rng.gen_bool(density) {
                        entries.push((i, rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
                    }
                }
                SparseVec::from_entries(dim, entries).unwrap()
            })
            .collect()
    }

    #[test]
    fn empty_input_is_zero_subspace() {
        let s = rref(5, &[]).unwrap();
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn full_span_gives_identity() {
        let s = rref(2, &[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.rows(), &[v(&[1, 0]), v(&[0, 1])]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(rref(2, &[v(&[1, 0, 0])]).is_err());
        assert!(Subspace::zero(2).intersect(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn rank_matches_bareiss_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for density in [0.1, 0.3, 0.8] {
            let rows = random_rows(&mut rng, 50, 30, density);
            let s = rref(30, &rows).unwrap();
            assert_eq!(s.rank(), oracle::bareiss_rank(&rows, 30));
        }
        // Rank-deficient: rows drawn from a 7-dimensional span.
        let basis = random_rows(&mut rng, 7, 30, 0.5);
        let rows: Vec<SparseVec> = (0..50)
            .map(|_| {
                let mut acc = SparseVec::zero(30);
                for b in &basis {
                    acc.add_scaled(&rat(rng.gen_range(-3..=3), 1), b);
                }
                acc
            })
            .collect();
        assert_eq!(rref(30, &rows).unwrap().rank(), oracle::bareiss_rank(&rows, 30));
    }

    #[test]
    fn intersect_coordinate_planes() {
        let xy = rref(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let xz = rref(3, &[v(&[1, 0, 0]), v(&[0, 0, 1])]).unwrap();
        let i = xy.intersect(&xz).unwrap();
        assert_eq!(i.rows(), &[v(&[1, 0, 0])]);
        assert_eq!(xy.intersect(&xy).unwrap(), xy);
    }

    #[test]
    fn intersect_matches_membership_oracle() {
        // Oracle: x ∈ a ∩ b iff x solves both membership systems; the
        // intersection is the set of combinations Σ c_i a_i that land in b,
        // computed by solving for each a-row's component in a complement of b.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let dim = rng.gen_range(2..=12);
            let ra = rng.gen_range(0..=dim);
            let rb = rng.gen_range(0..=dim);
            let a = rref(dim, &random_rows(&mut rng, ra, dim, 0.5)).unwrap();
            let b = rref(dim, &random_rows(&mut rng, rb, dim, 0.5)).unwrap();
            let i = a.intersect(&b).unwrap();
            for r in i.rows() {
                assert!(solve_combination(dim, a.rows(), r).unwrap().is_some());
                assert!(solve_combination(dim, b.rows(), r).unwrap().is_some());
            }
            let expected = a.rank() + b.rank() - a.sum(&b).unwrap().rank();
            assert_eq!(i.rank(), expected);
        }
    }

    #[test]
    fn quotient_coords_edge_cases() {
        let zero = Subspace::zero(3);
        let x = v(&[1, 2, 3]);
        assert_eq!(zero.quotient_coords(&x).unwrap(), x);
        let s = rref(3, &[v(&[1, 2, 0])]).unwrap();
        assert!(s.quotient_coords(&v(&[2, 4, 0])).unwrap().is_zero());
        let q = s.quotient_coords(&x).unwrap();
        assert!(s.contains(&x.sub(&q)).unwrap());
        assert!(q.get(0).is_zero());
    }

    #[test]
    fn solve_combination_round_trip() {
        let gens = vec![v(&[1, 1, 0]), v(&[0, 1, 1]), v(&[1, 2, 1])];
        let target = v(&[2, 5, 3]);
        let c = solve_combination(3, &gens, &target).unwrap().unwrap();
        let mut acc = SparseVec::zero(3);
        for (g, ci) in gens.iter().zip(&c) {
            acc.add_scaled(ci, g);
        }
        assert_eq!(acc, target);
        assert!(solve_combination(3, &gens, &v(&[1, 0, 0])).unwrap().is_none());
    }

    fn arb_rows(dim: usize) -> impl Strategy<Value = Vec<SparseVec>> {
        prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 0..6)
            .prop_map(|rows| rows.iter().map(|r| v(r)).collect())
    }

    proptest! {
        #[test]
        fn dimension_formula(a in arb_rows(5), b in arb_rows(5)) {
            let a = rref(5, &a).unwrap();
            let b = rref(5, &b).unwrap();
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(s.rank() + i.rank(), a.rank() + b.rank());
        }

        #[test]
        fn quotient_coords_linear_and_kills_relations(
            rel in arb_rows(5),
            x in prop::collection::vec(-4i64..=4, 5),
            y in prop::collection::vec(-4i64..=4, 5),
            c in -3i64..=3,
        ) {
            let s = rref(5, &rel).unwrap();
            let (x, y) = (v(&x), v(&y));
            let mut comb = x.clone();
            comb.add_scaled(&rat(c, 1), &y);
            let mut expected = s.quotient_coords(&x).unwrap();
            expected.add_scaled(&rat(c, 1), &s.quotient_coords(&y).unwrap());
            prop_assert_eq!(s.quotient_coords(&comb).unwrap(), expected);
            let qx = s.quotient_coords(&x).unwrap();
            prop_assert_eq!(qx.is_zero(), s.contains(&x).unwrap());
            for p in s.pivots() {
                prop_assert!(qx.get(*p).is_zero());
            }
        }

        #[test]
        fn rref_is_order_independent(rows in arb_rows(4)) {
            let a = rref(4, &rows).unwrap();
            let mut rev = rows.clone();
            rev.reverse();
            prop_assert_eq!(a, rref(4, &rev).unwrap());
        }
    }
}
