//! Constructive rewriting of module elements into sums of words
//! `u¹_{-n₁} ⋯ u^r_{-n_r} w` with `u^i` generators of `V`, `n_i ≥ 1` and `w`
//! taken from a strongly generating subspace `W`.
//!
//! A degree-`d` vector is first split as `w + Σ a_{-1} v` using
//! `M = W + C₁(M)`. Each `a_{-r} v` is then expanded by writing the PBW
//! monomial `a` as `u_{-k} b` and applying the iterate formula
//!
//! `(u_{-k} b)_{-r} v = Σ_j (-1)^j C(-k, j) [u_{-k-j} b_{-r+j} v - (-1)^k b_{-k-r-j} u_j v]`,
//!
//! where the first terms have lower degree after removing `u_{-k-j}` and the
//! second terms have a shorter `b`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use crate::exactlin::{binomial, rat, solve_combination, Rat, Subspace, SparseVec};
use crate::voa::{Monomial, Space, State, VoaError};
use crate::zhu::weight_vec;

use super::c1::{by_degree, check_module_strong_generation};
use super::{BimodError, ModuleContext};

/// `[(g₁, n₁), …, (g_r, n_r)]` stands for `u^{g₁}_{-n₁} ⋯ u^{g_r}_{-n_r}`,
/// the leftmost factor acting last.
pub type Word = Vec<(usize, i64)>;

type Combo = BTreeMap<(Word, usize), Rat>;

/// Which steps of the rewriting fired, and how deep the expansion went.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    /// Splits `x = w + Σ a_{-1} v`.
    pub decompositions: usize,
    /// Expansions of `(u_{-m} 1)_{-r} v`, which collapse to a single term.
    pub single_generator: usize,
    /// Expansions of `(u_{-k} b)_{-r} v` with `b ≠ 1`.
    pub iterate: usize,
    /// Number of expansions by the length `s` of the PBW monomial `a`.
    pub length_counts: BTreeMap<usize, usize>,
}

/// `x` as a combination of words applied to elements of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewritten {
    /// `(word, index into W)` to coefficient.
    pub terms: BTreeMap<(Word, usize), Rat>,
    pub trace: RewriteTrace,
}

impl Rewritten {
    /// Applies every word through the module's mode action and sums.
    pub fn evaluate(&self, module: &Space, w: &[State]) -> Result<State, VoaError> {
        let mut out = State::zero();
        for ((word, i), c) in &self.terms {
            let mut s = w[*i].clone();
            for &(g, n) in word.iter().rev() {
                s = module.generator_mode_act(g, -n, &s)?;
            }
            out.add_scaled(c, &s);
        }
        Ok(out)
    }

    /// `(+ (* c (u -n (... w_i))) ...)` with generator symbols.
    pub fn to_sexp(&self, module: &Space) -> String {
        let voa = module.voa();
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|((word, i), c)| {
                let mut body = format!("w{i}");
                for &(g, n) in word.iter().rev() {
                    body = format!("({} -{n} {body})", voa.generators[g].symbol);
                }
                format!("(* {c} {body})")
            })
            .collect();
        format!("(+{})", terms.iter().map(|t| format!(" {t}")).collect::<String>())
    }
}

/// Reusable rewriting state for one module and one generating subspace.
pub struct Rewriter<'a> {
    ctx: &'a ModuleContext,
    n_max: i64,
    /// Per degree, independent generators: `W` elements first, then
    /// `a_{-1} v` vectors.
    gens: Vec<Option<Vec<(Source, SparseVec)>>>,
    w_vecs: Vec<Vec<(usize, SparseVec)>>,
    mono_cache: HashMap<Monomial, Combo>,
    expand_cache: HashMap<(Monomial, i64, Monomial), Combo>,
    trace: RewriteTrace,
}

#[derive(Clone, Debug)]
enum Source {
    W(usize),
    C1(Monomial, Monomial),
}

impl<'a> Rewriter<'a> {
    /// Fails unless `M(n) ⊆ W + C₁(M)` for every `n ≤ n_max`.
    pub fn new(ctx: &'a ModuleContext, w: &[State], n_max: i64) -> Result<Self, BimodError> {
        let check = check_module_strong_generation(ctx, w, n_max)?;
        if let Some(d) = check.first_failure {
            return Err(BimodError::Precondition(format!("M({d}) is not contained in W + C1(M)")));
        }
        let by_deg = by_degree(ctx.module_space(), w, n_max)?;
        // keep track of which W element each vector came from
        let mut w_vecs = vec![Vec::new(); (n_max + 1) as usize];
        let mut counters = vec![0usize; (n_max + 1) as usize];
        for (i, s) in w.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let d = s.weight().ok_or(VoaError::NonHomogeneous)?;
            if d <= n_max {
                let v = by_deg[d as usize][counters[d as usize]].clone();
                counters[d as usize] += 1;
                w_vecs[d as usize].push((i, v));
            }
        }
        Ok(Rewriter {
            ctx,
            n_max,
            gens: vec![None; (n_max + 1) as usize],
            w_vecs,
            mono_cache: HashMap::new(),
            expand_cache: HashMap::new(),
            trace: RewriteTrace::default(),
        })
    }

    fn generators(&mut self, d: i64) -> Result<&[(Source, SparseVec)], VoaError> {
        if self.gens[d as usize].is_none() {
            let m = self.ctx.module_space();
            let mut span = Subspace::zero(m.dim(d)?);
            let mut out = Vec::new();
            for (i, v) in &self.w_vecs[d as usize] {
                if span.insert(v).expect("weight dimension") {
                    out.push((Source::W(*i), v.clone()));
                }
            }
            'outer: for wa in 1..=d {
                for am in self.ctx.voa_basis(wa)? {
                    for vm in self.ctx.module_basis(d - wa)? {
                        if span.rank() == span.ambient_dim() {
                            break 'outer;
                        }
                        let s = m.mode_act(&State::monomial(am.clone()), -1, &State::monomial(vm.clone()))?;
                        if s.is_zero() {
                            continue;
                        }
                        let v = weight_vec(m, &s, d)?;
                        if span.insert(&v).expect("weight dimension") {
                            out.push((Source::C1(am.clone(), vm.clone()), v));
                        }
                    }
                }
            }
            self.gens[d as usize] = Some(out);
        }
        Ok(self.gens[d as usize].as_deref().unwrap())
    }

    pub fn rewrite(&mut self, x: &State) -> Result<Rewritten, BimodError> {
        if let Some(top) = x.max_weight() {
            if top > self.n_max {
                return Err(BimodError::Precondition(format!(
                    "degree {top} is above the checked range {}",
                    self.n_max
                )));
            }
        }
        self.trace = RewriteTrace::default();
        let terms = self.rewrite_state(x)?;
        Ok(Rewritten { terms, trace: self.trace.clone() })
    }

    fn rewrite_state(&mut self, y: &State) -> Result<Combo, BimodError> {
        let mut out = Combo::new();
        for (m, c) in y.terms() {
            let part = self.rewrite_monomial(m)?;
            add_scaled(&mut out, c, &part);
        }
        Ok(out)
    }

    fn rewrite_monomial(&mut self, m: &Monomial) -> Result<Combo, BimodError> {
        if let Some(hit) = self.mono_cache.get(m) {
            return Ok(hit.clone());
        }
        let d = m.degree();
        let space = self.ctx.module_space().clone();
        let target = weight_vec(&space, &State::monomial(m.clone()), d)?;
        let gens = self.generators(d)?.to_vec();
        let vecs: Vec<SparseVec> = gens.iter().map(|(_, v)| v.clone()).collect();
        let coeffs = solve_combination(target.dim(), &vecs, &target)
            .expect("weight dimension")
            .ok_or_else(|| BimodError::Precondition(format!("{} is outside W + C1(M)", space.format_monomial(m))))?;
        self.trace.decompositions += 1;
        let mut out = Combo::new();
        for ((src, _), c) in gens.iter().zip(&coeffs) {
            if c.is_zero() {
                continue;
            }
            match src {
                Source::W(i) => add_scaled(&mut out, c, &Combo::from([((Vec::new(), *i), Rat::from_integer(1))])),
                Source::C1(a, v) => {
                    let part = self.expand(a, 1, v)?;
                    add_scaled(&mut out, c, &part);
                }
            }
        }
        self.mono_cache.insert(m.clone(), out.clone());
        Ok(out)
    }

    /// Rewrites `a_{-r} v` for a PBW monomial `a ∈ V` and `v ∈ M`.
    fn expand(&mut self, a: &Monomial, r: i64, v: &Monomial) -> Result<Combo, BimodError> {
        let key = (a.clone(), r, v.clone());
        if let Some(hit) = self.expand_cache.get(&key) {
            return Ok(hit.clone());
        }
        let Some(((g, p), b)) = a.split_first() else {
            // 1_{-r} v = δ_{r,1} v
            return if r == 1 { self.rewrite_monomial(v) } else { Ok(Combo::new()) };
        };
        *self.trace.length_counts.entry(a.len()).or_default() += 1;
        if b.is_empty() {
            self.trace.single_generator += 1;
        } else {
            self.trace.iterate += 1;
        }
        let space = self.ctx.module_space().clone();
        let wu = space.voa().generator_weight(g);
        let k = 1 - p - wu;
        let b_state = State::monomial(b.clone());
        let v_state = State::monomial(v.clone());
        let mut out = Combo::new();

        for j in 0..=(b.degree() + v.degree() + r - 1) {
            let c = sign(j) * binomial(-k, j);
            if c.is_zero() {
                continue;
            }
            let y = space.mode_act(&b_state, -r + j, &v_state)?;
            if y.is_zero() {
                continue;
            }
            let inner = self.rewrite_state(&y)?;
            add_scaled(&mut out, &c, &prepend(&inner, (g, k + j)));
        }
        for j in 0..=(wu + v.degree() - 1) {
            let c = -(sign(j) * sign(k) * binomial(-k, j));
            if c.is_zero() {
                continue;
            }
            let y = space.generator_mode_act(g, j, &v_state)?;
            for (m, cm) in y.terms() {
                let part = self.expand(&b, k + r + j, m)?;
                add_scaled(&mut out, &(&c * cm), &part);
            }
        }
        self.expand_cache.insert(key, out.clone());
        Ok(out)
    }
}

fn sign(k: i64) -> Rat {
    if k.rem_euclid(2) == 0 {
        rat(1, 1)
    } else {
        rat(-1, 1)
    }
}

fn add_scaled(out: &mut Combo, c: &Rat, other: &Combo) {
    for (k, v) in other {
        let e = out.entry(k.clone()).or_insert_with(Rat::zero);
        *e += c * v;
        if e.is_zero() {
            out.remove(k);
        }
    }
}

fn prepend(combo: &Combo, letter: (usize, i64)) -> Combo {
    combo
        .iter()
        .map(|((word, i), c)| {
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push(letter);
            w.extend_from_slice(word);
            ((w, *i), c.clone())
        })
        .collect()
}

/// Rewrites `x` over the canonical generators of `V` and the given `W`.
/// Requires `M(n) ⊆ W + C₁(M)` up to the top degree of `x`.
pub fn rewrite_to_strong_generators(ctx: &ModuleContext, w: &[State], x: &State) -> Result<Rewritten, BimodError> {
    let top = x.max_weight().unwrap_or(0);
    Rewriter::new(ctx, w, top)?.rewrite(x)
}
