//! Relation subspaces grown by generator weight, with stabilization
//! certificates for each filtration level.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{Subspace, SparseVec};
use crate::voa::{GradedLayout, Space, State, VoaError};

/// Produces the spanning relations whose top component has weight exactly
/// `t`.
pub type RelationSource = Arc<dyn Fn(i64) -> Result<Vec<State>, VoaError> + Send + Sync>;

/// Evidence that `relations ∩ X_{≤level}` stopped growing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub level: i64,
    /// `(N', dim of the relation space in degrees ≤ level)` for each bound tried.
    pub history: Vec<(i64, usize)>,
    /// First bound from which the dimension stayed fixed.
    pub stabilized_at: Option<i64>,
    pub certified: bool,
}

/// A truncated quotient `X_{≤top} / R` where `R` is spanned by relations of
/// generator weight at most `bound`.
///
/// Columns follow [`GradedLayout`], so echelon rows with pivot in degree
/// `≤ n` span `R ∩ X_{≤n}` and the non-pivot monomials of degree `≤ n` are
/// coset representatives of level `n`.
pub struct FilteredQuotient {
    space: Arc<Space>,
    layout: GradedLayout,
    source: RelationSource,
    relations: Subspace,
    bound: i64,
    /// Per bound, the relation dimension in degrees `≤ n` for every `n`.
    steps: Vec<(i64, Vec<usize>)>,
}

impl std::fmt::Debug for FilteredQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FilteredQuotient")
            .field("space", &self.space)
            .field("bound", &self.bound)
            .field("rank", &self.relations.rank())
            .finish()
    }
}

impl FilteredQuotient {
    pub fn new(space: Arc<Space>, source: RelationSource) -> Result<Self, VoaError> {
        let layout = GradedLayout::new(&space, space.cutoff())?;
        let relations = Subspace::zero(layout.dim());
        Ok(FilteredQuotient { space, layout, source, relations, bound: 0, steps: Vec::new() })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn layout(&self) -> &GradedLayout {
        &self.layout
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Adds all relations of generator weight up to `bound`.
    pub fn extend_to(&mut self, bound: i64) -> Result<(), VoaError> {
        let bound = bound.min(self.layout.top());
        while self.bound < bound {
            let t = self.bound + 1;
            let states = (self.source)(t)?;
            let vecs: Vec<SparseVec> = states
                .par_iter()
                .map(|s| self.layout.to_vec(s))
                .collect::<Result<_, _>>()?;
            for v in &vecs {
                self.relations.insert(v).expect("layout dimension");
            }
            self.bound = t;
            let dims = (0..=self.layout.top()).map(|n| self.relation_dim(n)).collect();
            self.steps.push((t, dims));
        }
        Ok(())
    }

    /// Dimension of `R ∩ X_{≤n}` at the current bound.
    pub fn relation_dim(&self, n: i64) -> usize {
        let start = self.layout.start_of_degree_at_most(n);
        self.relations.rank() - self.relations.pivots().partition_point(|&p| p < start)
    }

    /// Dimension of level `n` of the quotient.
    pub fn level_dim(&self, n: i64) -> usize {
        let total = self.layout.dim() - self.layout.start_of_degree_at_most(n);
        total - self.relation_dim(n)
    }

    /// Extends the bound from `level + 2` until the level's relation
    /// dimension has stayed fixed for `margin` consecutive increments, or the
    /// engine cutoff is reached.
    pub fn certify(&mut self, level: i64, margin: usize) -> Result<Certificate, VoaError> {
        let start = level + 2;
        loop {
            let history: Vec<(i64, usize)> = self
                .steps
                .iter()
                .filter(|(b, _)| *b >= start)
                .map(|(b, dims)| (*b, dims[level.min(self.layout.top()) as usize]))
                .collect();
            let stable = history.len() > margin && {
                let tail = &history[history.len() - margin - 1..];
                tail.iter().all(|(_, d)| *d == tail[0].1)
            };
            if stable || self.bound >= self.layout.top() {
                let stabilized_at = history.last().map(|&(_, last)| {
                    history.iter().rev().take_while(|(_, d)| *d == last).last().unwrap().0
                });
                let certified = stable && level <= self.layout.top();
                return Ok(Certificate { level, history, stabilized_at, certified });
            }
            self.extend_to(self.bound.max(start - 1) + 1)?;
        }
    }

    pub fn to_vec(&self, s: &State) -> Result<SparseVec, VoaError> {
        self.layout.to_vec(s)
    }

    /// Canonical coset representative coordinates of `s`.
    pub fn reduce(&self, s: &State) -> Result<SparseVec, VoaError> {
        Ok(self.relations.reduce(&self.layout.to_vec(s)?).expect("layout dimension"))
    }

    pub fn contains(&self, s: &State) -> Result<bool, VoaError> {
        Ok(self.reduce(s)?.is_zero())
    }

    /// The least `n` with `s ∈ X_{≤n} + R`, or `None` for the zero class.
    pub fn level_of(&self, s: &State) -> Result<Option<i64>, VoaError> {
        Ok(self.reduce(s)?.leading().map(|(c, _)| self.layout.degree_of(c)))
    }

    /// Non-pivot columns of degree exactly `n`: a basis of level `n` modulo
    /// level `n - 1`.
    pub fn graded_columns(&self, n: i64) -> Vec<usize> {
        if n < 0 || n > self.layout.top() {
            return Vec::new();
        }
        let lo = self.layout.start_of_degree_at_most(n);
        let hi = self.layout.start_of_degree_at_most(n - 1);
        (lo..hi).filter(|&c| !self.relations.is_pivot(c)).collect()
    }
}
