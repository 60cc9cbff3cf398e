use std::fmt;

use num_traits::{One, Zero};

use super::{LinError, Rat};

/// A vector over an ambient basis of size `dim`, stored as a sorted list of
/// nonzero entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec {
    dim: usize,
    entries: Vec<(usize, Rat)>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        SparseVec { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim, "unit index {index} out of range {dim}");
        SparseVec { dim, entries: vec![(index, Rat::one())] }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs; repeated indices
    /// are summed and zeros are dropped.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self, LinError>
    where
        I: IntoIterator<Item = (usize, Rat)>,
    {
        let mut raw: Vec<(usize, Rat)> = entries.into_iter().collect();
        if let Some(&(index, _)) = raw.iter().find(|(i, _)| *i >= dim) {
            return Err(LinError::IndexOutOfRange { index, dim });
        }
        raw.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Rat)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Ok(SparseVec { dim, entries: out })
    }

    pub fn from_dense(values: &[Rat]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        SparseVec { dim: values.len(), entries }
    }

    pub fn to_dense(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, Rat)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Rat)> {
        self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Rat {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn get_ref(&self, index: usize) -> Option<&Rat> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    /// Lowest index carrying a nonzero entry.
    pub fn leading(&self) -> Option<(usize, &Rat)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn check_dim(&self, dim: usize) -> Result<(), LinError> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(LinError::DimensionMismatch { expected: dim, found: self.dim })
        }
    }

    pub fn scale(&mut self, c: &Rat) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Rat, other: &SparseVec) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add_scaled");
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut merged = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, _)), Some((ib, _))) => {
                    if ia < ib {
                        merged.push(a.next().unwrap());
                    } else if ib < ia {
                        let (ib, vb) = b.next().unwrap();
                        merged.push((*ib, vb * c));
                    } else {
                        let (ia, va) = a.next().unwrap();
                        let (_, vb) = b.next().unwrap();
                        let s = va + vb * c;
                        if !s.is_zero() {
                            merged.push((ia, s));
                        }
                    }
                }
                (Some(_), None) => merged.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (ib, vb) = b.next().unwrap();
                    merged.push((*ib, vb * c));
                }
                (None, None) => break,
            }
        }
        self.entries = merged;
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        let mut out = self.clone();
        out.add_scaled(&Rat::one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-Rat::one(), other);
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-Rat::one())
    }

    /// Re-embeds the vector in a larger ambient space, keeping indices.
    pub fn widened(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        SparseVec { dim, entries: self.entries.clone() }
    }

    /// Moves every index through `map` into an ambient space of size `dim`.
    pub fn remapped(&self, dim: usize, map: impl Fn(usize) -> usize) -> Self {
        SparseVec::from_entries(dim, self.entries.iter().map(|(i, v)| (map(*i), v.clone())))
            .expect("remapped index out of range")
    }

    /// Concatenation `(self | other)` in dimension `self.dim + other.dim`.
    pub fn concat(&self, other: &SparseVec) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(i, v)| (i + self.dim, v.clone())));
        SparseVec { dim: self.dim + other.dim, entries }
    }

    /// Keeps only the indices in `range`, shifted down to start at zero.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|(i, _)| range.contains(i))
            .map(|(i, v)| (i - range.start, v.clone()))
            .collect();
        SparseVec { dim: range.end - range.start, entries }
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseVec[{}]{{", self.dim)?;
        for (k, (i, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}: {v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    #[test]
    fn from_entries_merges_and_drops_zeros() {
        let v = SparseVec::from_entries(4, vec![(2, rat(1, 2)), (0, rat(1, 1)), (2, rat(-1, 2))]).unwrap();
        assert_eq!(v.entries(), &[(0, rat(1, 1))]);
        assert!(SparseVec::from_entries(2, vec![(2, rat(1, 1))]).is_err());
    }

    #[test]
    fn add_scaled_cancels() {
        let mut a = SparseVec::from_dense(&[rat(1, 1), rat(2, 1), rat(0, 1)]);
        let b = SparseVec::from_dense(&[rat(1, 2), rat(1, 1), rat(3, 1)]);
        a.add_scaled(&rat(-2, 1), &b);
        assert_eq!(a.to_dense(), vec![rat(0, 1), rat(0, 1), rat(-6, 1)]);
        assert_eq!(a.nnz(), 1);
    }
}
