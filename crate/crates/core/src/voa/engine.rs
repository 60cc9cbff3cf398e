use std::collections::HashMap;

use rustc_hash::FxHashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::exactlin::{binomial, rat, Rat, SparseVec};

use super::presentation::{ModulePresentation, VoaPresentation};
use super::state::{mode_key, Mode, Monomial, State};
use super::VoaError;

type LieKey = (usize, i64, Monomial);
type VertexKey = (Monomial, i64, Monomial);

/// A truncated graded space: the VOA itself or one of its highest-weight
/// modules, with PBW bases up to a fixed cutoff and memoized mode actions.
///
/// Anything that would produce a component above the cutoff is an error;
/// nothing is dropped silently.
pub struct Space {
    voa: Arc<VoaPresentation>,
    module: Arc<ModulePresentation>,
    cutoff: i64,
    bases: Vec<Vec<Monomial>>,
    lie_cache: Mutex<FxHashMap<LieKey, Arc<State>>>,
    vertex_cache: Mutex<FxHashMap<VertexKey, Arc<State>>>,
}

impl std::fmt::Debug for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Space")
            .field("voa", &self.voa.name)
            .field("module", &self.module.label())
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl Space {
    pub fn new(voa: Arc<VoaPresentation>, module: Arc<ModulePresentation>, cutoff: i64) -> Result<Self, VoaError> {
        voa.validate()?;
        if cutoff < 0 {
            return Err(VoaError::InvalidPresentation("cutoff must be nonnegative".into()));
        }
        if !module.is_vacuum() && module.zero_modes.len() != voa.num_generators() {
            return Err(VoaError::InvalidPresentation("module needs one zero-mode matrix per generator".into()));
        }
        let mut space = Space {
            voa,
            module,
            cutoff,
            bases: Vec::new(),
            lie_cache: Mutex::new(FxHashMap::default()),
            vertex_cache: Mutex::new(FxHashMap::default()),
        };
        space.bases = (0..=cutoff).map(|n| space.enumerate_basis(n)).collect();
        Ok(space)
    }

    pub fn vacuum(voa: Arc<VoaPresentation>, cutoff: i64) -> Result<Self, VoaError> {
        Space::new(voa, Arc::new(ModulePresentation::vacuum()), cutoff)
    }

    pub fn voa(&self) -> &Arc<VoaPresentation> {
        &self.voa
    }

    pub fn module(&self) -> &Arc<ModulePresentation> {
        &self.module
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn is_vacuum(&self) -> bool {
        self.module.is_vacuum()
    }

    /// Whether `X_g(p)` is one of the free (PBW) modes of this space.
    pub fn is_creation(&self, g: usize, p: i64) -> bool {
        if self.is_vacuum() {
            p <= -self.voa.generator_weight(g)
        } else {
            p <= -1
        }
    }

    fn bottom_dim(&self) -> usize {
        self.module.bottom_dim
    }

    fn enumerate_basis(&self, n: i64) -> Vec<Monomial> {
        // Allowed modes in canonical order: mode ascending, then generator.
        let mut modes: Vec<Mode> = Vec::new();
        for p in (-n..=-1).rev() {
            for g in 0..self.voa.num_generators() {
                if self.is_creation(g, p) {
                    modes.push((g, p));
                }
            }
        }
        modes.sort_by_key(mode_key);
        let mut seqs = Vec::new();
        let mut cur = Vec::new();
        fn rec(modes: &[Mode], start: usize, left: i64, cur: &mut Vec<Mode>, out: &mut Vec<Vec<Mode>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..modes.len() {
                let (g, p) = modes[i];
                if -p <= left {
                    cur.push((g, p));
                    rec(modes, i, left + p, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&modes, 0, n, &mut cur, &mut seqs);
        let mut out: Vec<Monomial> = seqs
            .into_iter()
            .flat_map(|s| (0..self.bottom_dim()).map(move |t| Monomial { modes: s.clone(), target: t }))
            .collect();
        out.sort();
        out
    }

    /// Canonical basis of the degree-`n` subspace.
    pub fn weight_basis(&self, n: i64) -> Result<&[Monomial], VoaError> {
        if n < 0 {
            return Ok(&[]);
        }
        self.check_weight(n)?;
        Ok(&self.bases[n as usize])
    }

    pub fn dim(&self, n: i64) -> Result<usize, VoaError> {
        Ok(self.weight_basis(n)?.len())
    }

    pub fn check_weight(&self, n: i64) -> Result<(), VoaError> {
        if n > self.cutoff {
            Err(VoaError::CutoffExceeded { weight: n, cutoff: self.cutoff })
        } else {
            Ok(())
        }
    }

    fn check_state(&self, s: &State) -> Result<(), VoaError> {
        match s.max_weight() {
            Some(w) => self.check_weight(w),
            None => Ok(()),
        }
    }

    /// The generator state `X_g(-wt g)·1` of the VOA.
    pub fn generator_state(&self, g: usize) -> State {
        let w = self.voa.generator_weight(g);
        State::monomial(Monomial { modes: vec![(g, -w)], target: 0 })
    }

    /// Applies a product of Lie modes (leftmost acts last) to a bottom
    /// vector.
    pub fn evaluate(&self, modes: &[Mode], target: usize) -> Result<State, VoaError> {
        let mut s = State::monomial(Monomial::bottom(target));
        for &(g, p) in modes.iter().rev() {
            s = self.lie_act(g, p, &s)?;
        }
        Ok(s)
    }

    /// `X_g(p) v` for an arbitrary state `v`.
    pub fn lie_act(&self, g: usize, p: i64, v: &State) -> Result<State, VoaError> {
        if let Some(w) = v.max_weight() {
            self.check_weight(w - p)?;
        }
        Ok(self.lie_state(g, p, v))
    }

    /// Vertex-operator mode `u_n` of generator `g` acting on `v`.
    pub fn generator_mode_act(&self, g: usize, n: i64, v: &State) -> Result<State, VoaError> {
        let w = self.voa.generator_weight(g);
        self.lie_act(g, n - w + 1, v)
    }

    fn lie_state(&self, g: usize, p: i64, v: &State) -> State {
        let mut out = State::zero();
        for (m, c) in v.terms() {
            out.add_scaled(c, &self.lie_mono(g, p, m));
        }
        out
    }

    fn lie_mono(&self, g: usize, p: i64, m: &Monomial) -> Arc<State> {
        let key = (g, p, m.clone());
        if let Some(hit) = self.lie_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let result = Arc::new(self.lie_mono_uncached(g, p, m));
        self.lie_cache.lock().unwrap().insert(key, result.clone());
        result
    }

    fn lie_mono_uncached(&self, g: usize, p: i64, m: &Monomial) -> State {
        let creation = self.is_creation(g, p);
        let Some(((h, q), rest)) = m.split_first() else {
            return self.act_on_bottom(g, p, m.target);
        };
        if creation && mode_key(&(g, p)) <= mode_key(&(h, q)) {
            return State::monomial(m.prepend((g, p)));
        }
        // X_g(p) X_h(q) rest = X_h(q) X_g(p) rest + [X_g(p), X_h(q)] rest
        let moved = self.lie_mono(g, p, &rest);
        let mut out = self.lie_state(h, q, &moved);
        let (terms, central) = self.voa.bracket(g, p, h, q);
        for (k, r, c) in terms {
            out.add_scaled(&c, &self.lie_mono(k, r, &rest));
        }
        if !central.is_zero() {
            out.add_term(rest, central);
        }
        out
    }

    fn act_on_bottom(&self, g: usize, p: i64, t: usize) -> State {
        if self.is_creation(g, p) {
            return State::monomial(Monomial { modes: vec![(g, p)], target: t });
        }
        if self.is_vacuum() || p > 0 {
            return State::zero();
        }
        debug_assert_eq!(p, 0);
        let mut out = State::zero();
        for (r, c) in &self.module.zero_modes[g][t] {
            out.add_term(Monomial::bottom(*r), c.clone());
        }
        out
    }

    /// The general mode `a_n v` for a homogeneous VOA state `a`, expanded
    /// recursively through the iterate formula
    /// `(u_P b)_n = Σ_j (-1)^j C(P,j) (u_{P-j} b_{n+j} - (-1)^P b_{P+n-j} u_j)`.
    pub fn mode_act(&self, a: &State, n: i64, v: &State) -> Result<State, VoaError> {
        if a.is_zero() || v.is_zero() {
            return Ok(State::zero());
        }
        let wa = a.weight().ok_or(VoaError::NonHomogeneous)?;
        let wv = v.max_weight().unwrap_or(0);
        let top = wa + wv - n - 1;
        self.check_weight(top)?;
        self.check_state(v)?;
        let mut out = State::zero();
        for (am, ac) in a.terms() {
            for (vm, vc) in v.terms() {
                out.add_scaled(&(ac * vc), &self.vertex_mono(am, n, vm));
            }
        }
        Ok(out)
    }

    fn vertex_state(&self, a: &Monomial, n: i64, v: &State) -> State {
        let mut out = State::zero();
        for (vm, vc) in v.terms() {
            out.add_scaled(vc, &self.vertex_mono(a, n, vm));
        }
        out
    }

    fn vertex_mono(&self, a: &Monomial, n: i64, v: &Monomial) -> Arc<State> {
        let wa = a.degree();
        let dv = v.degree();
        if wa + dv - n - 1 < 0 {
            return Arc::new(State::zero());
        }
        let Some(((g, p), b)) = a.split_first() else {
            return Arc::new(if n == -1 { State::monomial(v.clone()) } else { State::zero() });
        };
        let key = (a.clone(), n, v.clone());
        if let Some(hit) = self.vertex_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let w = self.voa.generator_weight(g);
        let big_p = p + w - 1;
        let wb = b.degree();
        let lie = |k: i64| k - w + 1;
        let vstate = State::monomial(v.clone());
        let mut out = State::zero();
        let jmax1 = wb + dv - n - 1;
        for j in 0..=jmax1.max(-1) {
            let c = sign(j) * binomial(big_p, j);
            if c.is_zero() {
                continue;
            }
            let inner = self.vertex_state(&b, n + j, &vstate);
            if inner.is_zero() {
                continue;
            }
            out.add_scaled(&c, &self.lie_state(g, lie(big_p - j), &inner));
        }
        let jmax2 = w + dv - 1;
        for j in 0..=jmax2.max(-1) {
            let c = -(sign(j) * sign(big_p) * binomial(big_p, j));
            if c.is_zero() {
                continue;
            }
            let inner = self.lie_mono(g, lie(j), v);
            if inner.is_zero() {
                continue;
            }
            out.add_scaled(&c, &self.vertex_state(&b, big_p + n - j, &inner));
        }
        let out = Arc::new(out);
        self.vertex_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `L(-1) a` on the VOA, computed as the derivation with
    /// `[L(-1), u_k] = -k u_{k-1}` and `L(-1) 1 = 0`.
    pub fn translate(&self, a: &State) -> Result<State, VoaError> {
        if !self.is_vacuum() {
            return Err(VoaError::InvalidPresentation("translation is only defined on the VOA".into()));
        }
        if let Some(w) = a.max_weight() {
            self.check_weight(w + 1)?;
        }
        let mut out = State::zero();
        for (m, c) in a.terms() {
            for i in 0..m.modes.len() {
                let (g, p) = m.modes[i];
                let w = self.voa.generator_weight(g);
                let k = p + w - 1;
                let coeff = rat(-k, 1) * c;
                if coeff.is_zero() {
                    continue;
                }
                let mut modes = m.modes.clone();
                modes[i] = (g, p - 1);
                out.add_scaled(&coeff, &self.evaluate(&modes, m.target)?);
            }
        }
        Ok(out)
    }

    /// `L(0)` acts by the degree on each homogeneous component.
    pub fn grading_operator(&self, a: &State) -> State {
        a.terms().map(|(m, c)| (m.clone(), rat(m.degree(), 1) * c)).collect()
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut s = String::new();
        for (g, p) in &m.modes {
            s.push_str(&format!("{}({})", self.voa.generators[*g].symbol, p));
        }
        if self.is_vacuum() {
            s.push('1');
        } else if self.bottom_dim() == 1 {
            s.push('w');
        } else {
            s.push_str(&format!("w{}", m.target));
        }
        s
    }

    pub fn format_state(&self, v: &State) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.terms()
            .map(|(m, c)| {
                if c.is_one() {
                    self.format_monomial(m)
                } else {
                    format!("({c})*{}", self.format_monomial(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn sign(k: i64) -> Rat {
    if k.rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Column layout of a truncation `⊕_{d ≤ top} X_d` with degrees in
/// descending order (highest degree first), canonical PBW order inside each
/// degree. With this order, echelon rows whose pivot sits in degree `≤ n`
/// span the intersection with `⊕_{d ≤ n} X_d`.
#[derive(Clone, Debug)]
pub struct GradedLayout {
    top: i64,
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `starts[d]` is the first column of degree `d`.
    starts: Vec<usize>,
}

impl GradedLayout {
    pub fn new(space: &Space, top: i64) -> Result<Self, VoaError> {
        space.check_weight(top)?;
        let mut columns = Vec::new();
        let mut starts = vec![0; (top + 1) as usize];
        for d in (0..=top).rev() {
            starts[d as usize] = columns.len();
            columns.extend(space.weight_basis(d)?.iter().cloned());
        }
        let index = columns.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(GradedLayout { top, columns, index, starts })
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, i: usize) -> &Monomial {
        &self.columns[i]
    }

    pub fn degree_of(&self, col: usize) -> i64 {
        self.columns[col].degree()
    }

    /// First column whose degree is at most `n`.
    pub fn start_of_degree_at_most(&self, n: i64) -> usize {
        if n >= self.top {
            0
        } else if n < 0 {
            self.columns.len()
        } else {
            self.starts[n as usize]
        }
    }

    pub fn to_vec(&self, s: &State) -> Result<SparseVec, VoaError> {
        let mut entries = Vec::with_capacity(s.num_terms());
        for (m, c) in s.terms() {
            match self.index.get(m) {
                Some(&i) => entries.push((i, c.clone())),
                None => {
                    return Err(VoaError::CutoffExceeded { weight: m.degree(), cutoff: self.top });
                }
            }
        }
        Ok(SparseVec::from_entries(self.dim(), entries).expect("layout index in range"))
    }

    pub fn to_state(&self, v: &SparseVec) -> State {
        v.entries().iter().map(|(i, c)| (self.columns[*i].clone(), c.clone())).collect()
    }
}
