//! Affine linear systems `A x = b` over the rationals, solved by one
//! echelon pass on the augmented rows.

use num_traits::{One, Zero};

use crate::exactlin::{Rat, SparseVec, Subspace};

use super::FiltError;

#[derive(Clone, Debug)]
pub struct LinearSystem {
    nvars: usize,
    eqs: Vec<(SparseVec, Rat)>,
}

#[derive(Clone, Debug)]
pub enum Solution {
    /// A particular solution with free variables at zero, and a kernel basis.
    Solved { particular: SparseVec, kernel: Vec<SparseVec> },
    /// Multipliers `λ` with `Σ λ_i A_i = 0` and `Σ λ_i b_i = 1`.
    Inconsistent { certificate: Vec<Rat> },
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, eqs: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn push(&mut self, coeffs: SparseVec, rhs: Rat) -> Result<(), FiltError> {
        coeffs.check_dim(self.nvars)?;
        if !coeffs.is_zero() || !rhs.is_zero() {
            self.eqs.push((coeffs, rhs));
        }
        Ok(())
    }

    fn augmented(&self, i: usize) -> SparseVec {
        let (a, b) = &self.eqs[i];
        a.concat(&SparseVec::from_dense(&[b.clone()]))
    }

    pub fn solve(&self) -> Result<Solution, FiltError> {
        let n = self.nvars;
        let mut s = Subspace::zero(n + 1);
        for i in 0..self.eqs.len() {
            s.insert(&self.augmented(i))?;
        }
        if s.is_pivot(n) {
            return Ok(Solution::Inconsistent { certificate: self.certificate()? });
        }
        let mut particular = SparseVec::zero(n);
        for (row, &p) in s.rows().iter().zip(s.pivots()) {
            let b = row.get(n);
            if !b.is_zero() {
                particular.add_scaled(&b, &SparseVec::unit(n, p));
            }
        }
        let mut kernel = Vec::new();
        for f in s.non_pivots().into_iter().filter(|&c| c < n) {
            let mut k = SparseVec::unit(n, f);
            for (row, &p) in s.rows().iter().zip(s.pivots()) {
                let c = row.get(f);
                if !c.is_zero() {
                    k.add_scaled(&-c, &SparseVec::unit(n, p));
                }
            }
            kernel.push(k);
        }
        Ok(Solution::Solved { particular, kernel })
    }

    /// Tracks the row operations with an identity block; the echelon row
    /// whose pivot is the right-hand-side column carries the multipliers.
    fn certificate(&self) -> Result<Vec<Rat>, FiltError> {
        let n = self.nvars;
        let m = self.eqs.len();
        let mut s = Subspace::zero(n + 1 + m);
        for i in 0..m {
            s.insert(&self.augmented(i).concat(&SparseVec::unit(m, i)))?;
        }
        let k = s.pivots().binary_search(&n).expect("inconsistent system has a pivot on the constant column");
        Ok(s.rows()[k].slice(n + 1..n + 1 + m).to_dense())
    }

    /// Whether `λ` really combines the equations into `0 = 1`.
    pub fn check_certificate(&self, lambda: &[Rat]) -> bool {
        if lambda.len() != self.eqs.len() {
            return false;
        }
        let mut lhs = SparseVec::zero(self.nvars);
        let mut rhs = Rat::zero();
        for (l, (a, b)) in lambda.iter().zip(&self.eqs) {
            lhs.add_scaled(l, a);
            rhs = rhs + l * b;
        }
        lhs.is_zero() && rhs.is_one()
    }

    pub fn satisfied_by(&self, x: &SparseVec) -> bool {
        self.eqs.iter().all(|(a, b)| {
            let mut s = Rat::zero();
            for (i, c) in a.entries() {
                s = s + c * x.get(*i);
            }
            &s == b
        })
    }
}
