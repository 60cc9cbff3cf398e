use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exactlin::Rat;

/// A single Lie mode `X_gen(mode)`.
pub type Mode = (usize, i64);

/// An ordered product of negative modes applied to a bottom-level basis
/// vector (index 0 is the vacuum for the VOA itself).
///
/// Canonical order: `|mode|` descending, ties broken by generator id, which
/// is plain ascending order on `(mode, gen)` since every stored mode is
/// negative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub modes: Vec<Mode>,
    pub target: usize,
}

pub(crate) fn mode_key(m: &Mode) -> (i64, usize) {
    (m.1, m.0)
}

impl Monomial {
    pub fn bottom(target: usize) -> Self {
        Monomial { modes: Vec::new(), target }
    }

    pub fn new(mut modes: Vec<Mode>, target: usize) -> Self {
        modes.sort_by_key(mode_key);
        Monomial { modes, target }
    }

    /// Degree above the bottom level: `Σ -mode`.
    pub fn degree(&self) -> i64 {
        self.modes.iter().map(|(_, n)| -n).sum()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.modes.windows(2).all(|w| mode_key(&w[0]) <= mode_key(&w[1]))
    }

    /// Splits off the leftmost mode.
    pub fn split_first(&self) -> Option<(Mode, Monomial)> {
        self.modes.split_first().map(|(first, rest)| {
            (*first, Monomial { modes: rest.to_vec(), target: self.target })
        })
    }

    pub fn prepend(&self, mode: Mode) -> Monomial {
        let mut modes = Vec::with_capacity(self.modes.len() + 1);
        modes.push(mode);
        modes.extend_from_slice(&self.modes);
        Monomial { modes, target: self.target }
    }
}

/// A finite linear combination of PBW monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct State {
    terms: BTreeMap<Monomial, Rat>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        State::term(m, Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut s = State::zero();
        s.add_term(m, c);
        s
    }

    pub fn vacuum() -> Self {
        State::monomial(Monomial::bottom(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rat, other: &State) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        let neg_unit = !unit && (-c).is_one();
        for (m, v) in &other.terms {
            let value = if unit {
                v.clone()
            } else if neg_unit {
                -v
            } else {
                v * c
            };
            self.add_term_ref(m, value);
        }
    }

    /// Like `add_term`, but clones the key only when it is new.
    fn add_term_ref(&mut self, m: &Monomial, c: Rat) {
        match self.terms.get_mut(m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c);
            }
        }
    }

    pub fn add(&self, other: &State) -> State {
        let mut s = self.clone();
        s.add_scaled(&Rat::one(), other);
        s
    }

    pub fn sub(&self, other: &State) -> State {
        let mut s = self.clone();
        s.add_scaled(&-Rat::one(), other);
        s
    }

    pub fn scaled(&self, c: &Rat) -> State {
        let mut s = State::zero();
        s.add_scaled(c, self);
        s
    }

    /// The common degree of all terms, if the state is homogeneous and
    /// nonzero.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.weight().is_some()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Splits into homogeneous components, by ascending degree.
    pub fn components(&self) -> BTreeMap<i64, State> {
        let mut out: BTreeMap<i64, State> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn component(&self, degree: i64) -> State {
        let mut s = State::zero();
        for (m, c) in &self.terms {
            if m.degree() == degree {
                s.add_term(m.clone(), c.clone());
            }
        }
        s
    }
}

impl FromIterator<(Monomial, Rat)> for State {
    fn from_iter<T: IntoIterator<Item = (Monomial, Rat)>>(iter: T) -> Self {
        let mut s = State::zero();
        for (m, c) in iter {
            s.add_term(m, c);
        }
        s
    }
}
