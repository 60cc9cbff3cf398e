//! Lifting generators of `gr M` to the filtration of `M`.

use rand::Rng;
use serde::Serialize;

use crate::exactlin::{Rat, SparseVec, Subspace};

use super::filtration::Filtration;
use super::instances::truncated_polynomial;
use super::structures::{FiniteFilteredAlgebra, FiniteFilteredModule};
use super::FiltError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftStep {
    pub level: usize,
    pub graded_dim: usize,
    /// `dim Σ gr_{p-n_i}R · w̄_i`.
    pub graded_span: usize,
    pub level_dim: usize,
    /// `dim Σ F_{p-n_i}R · w_i`, when the hypothesis held.
    pub lifted_span: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub generator_levels: Vec<usize>,
    pub hypothesis: bool,
    pub hypothesis_failure: Option<usize>,
    /// `None` when the hypothesis failed and lifting was skipped.
    pub conclusion: Option<bool>,
    /// Level 0 is the base case, every later entry one induction step.
    pub steps: Vec<LiftStep>,
}

/// Checks `gr M = Σ gr R · w̄_i` degreewise and, if it holds, that
/// `F_pM = Σ (F_{p-n_i}R) · w_i` for every `p`.
pub fn lift_generators(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    w: &[(SparseVec, usize)],
) -> Result<LiftReport, FiltError> {
    let fr = r.filtration();
    let fm = m.filtration();
    for (i, (x, n)) in w.iter().enumerate() {
        if !fm.level(*n as i64).contains(x)? {
            return Err(FiltError::Precondition(format!("generator {i} does not lie in level {n}")));
        }
    }
    let mut steps = Vec::with_capacity(fm.top() + 1);
    let mut failure = None;
    for p in 0..=fm.top() {
        let mut span = Subspace::zero(fm.graded_dim(p as i64));
        for (x, n) in w {
            if *n > p {
                continue;
            }
            for a in fr.reps((p - n) as i64) {
                let ax = m.act(a, x).ok_or_else(|| FiltError::Precondition("product beyond truncation".into()))?;
                span.insert(&fm.class(p as i64, &ax)?)?;
            }
        }
        if span.rank() != fm.graded_dim(p as i64) && failure.is_none() {
            failure = Some(p);
        }
        steps.push(LiftStep {
            level: p,
            graded_dim: fm.graded_dim(p as i64),
            graded_span: span.rank(),
            level_dim: fm.level(p as i64).rank(),
            lifted_span: None,
        });
    }
    let mut report = LiftReport {
        generator_levels: w.iter().map(|(_, n)| *n).collect(),
        hypothesis: failure.is_none(),
        hypothesis_failure: failure,
        conclusion: None,
        steps,
    };
    if failure.is_some() {
        return Ok(report);
    }
    let mut holds = true;
    for step in &mut report.steps {
        let p = step.level;
        let mut span = Subspace::zero(m.dim());
        for (x, n) in w {
            if *n > p {
                continue;
            }
            for a in fr.level((p - n) as i64).rows() {
                span.insert(&m.act(a, x).expect("defined"))?;
            }
        }
        holds &= span.is_subspace_of(fm.level(p as i64))? && span.rank() == step.level_dim;
        step.lifted_span = Some(span.rank());
    }
    report.conclusion = Some(holds);
    Ok(report)
}

/// A random module over `Q[x]/(x^k)` together with candidate generators.
#[derive(Clone, Debug)]
pub struct RandomLiftInstance {
    pub algebra: FiniteFilteredAlgebra,
    pub module: FiniteFilteredModule,
    pub generators: Vec<(SparseVec, usize)>,
}

fn small_vec(rng: &mut impl Rng, dim: usize) -> SparseVec {
    loop {
        let v = SparseVec::from_dense(&(0..dim).map(|_| Rat::from_integer(rng.gen_range(-2..=2))).collect::<Vec<_>>());
        if !v.is_zero() {
            return v;
        }
    }
}

/// A direct sum of Jordan blocks `Q[x]/(x^j)` of total dimension at most
/// `max_dim`, filtered by the span of `x^c g_i` over random vectors `g_i`
/// placed in random levels (topped off by the whole space). Half the time
/// the `g_i` themselves are offered as generators, otherwise random
/// vectors in random levels.
pub fn random_lift_instance(rng: &mut impl Rng, max_dim: usize) -> Result<RandomLiftInstance, FiltError> {
    let k = rng.gen_range(1..=4usize);
    let r = truncated_polynomial(k);
    let mut blocks = Vec::new();
    let mut dim = 0;
    loop {
        let j = rng.gen_range(1..=k);
        if dim + j > max_dim || (!blocks.is_empty() && rng.gen_bool(0.3)) {
            break;
        }
        blocks.push((dim, j));
        dim += j;
    }
    if blocks.is_empty() {
        blocks.push((0, 1));
        dim = 1;
    }
    // x^c moves position s of a block to s + c, or to zero past its end.
    let shift = |c: usize, v: usize| -> SparseVec {
        let &(start, len) = blocks.iter().find(|(s, l)| v >= *s && v < s + l).expect("v lies in a block");
        if v - start + c < len {
            SparseVec::unit(dim, v + c)
        } else {
            SparseVec::zero(dim)
        }
    };
    let apply = |c: usize, x: &SparseVec| -> SparseVec {
        let mut out = SparseVec::zero(dim);
        for (v, a) in x.entries() {
            out.add_scaled(a, &shift(c, *v));
        }
        out
    };
    let g: Vec<(SparseVec, usize)> =
        (0..rng.gen_range(1..=3)).map(|_| (small_vec(rng, dim), rng.gen_range(0..=2usize))).collect();
    let top = g.iter().map(|(_, l)| l + k).max().unwrap_or(0);
    let mut levels = Vec::new();
    for p in 0..=top {
        let mut s = Subspace::zero(dim);
        for (x, l) in &g {
            for c in 0..k {
                if l + c <= p {
                    s.insert(&apply(c, x))?;
                }
            }
        }
        levels.push(s);
    }
    if levels.last().map(Subspace::rank) != Some(dim) {
        levels.push(Subspace::full(dim));
    }
    let filtration = Filtration::new(dim, levels)?;
    let names = (0..dim).map(|i| format!("b{i}")).collect();
    let module = FiniteFilteredModule::from_fn(&r, "jordan", names, filtration, shift)?;
    let generators = if rng.gen_bool(0.5) {
        g
    } else {
        let f = module.filtration();
        (0..rng.gen_range(1..=3))
            .map(|_| {
                let n = rng.gen_range(0..=f.top());
                let rows = f.level(n as i64).rows();
                let mut w = SparseVec::zero(dim);
                for row in rows {
                    w.add_scaled(&Rat::from_integer(rng.gen_range(-2..=2)), row);
                }
                (w, n)
            })
            .collect()
    };
    Ok(RandomLiftInstance { algebra: r, module, generators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtgen::instances::upper_triangular;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_generates_the_regular_module() {
        let r = upper_triangular();
        let m = FiniteFilteredModule::regular(&r).unwrap();
        let rep = lift_generators(&r, &m, &[(r.identity().clone(), 0)]).unwrap();
        assert!(rep.hypothesis);
        assert_eq!(rep.conclusion, Some(true));
        let dims: Vec<usize> = rep.steps.iter().map(|s| s.lifted_span.unwrap()).collect();
        assert_eq!(dims, r.filtration().level_dims());
    }

    #[test]
    fn missing_generator_is_reported_not_lifted() {
        let r = upper_triangular();
        let m = FiniteFilteredModule::regular(&r).unwrap();
        // e11 alone misses e22 in degree 0.
        let rep = lift_generators(&r, &m, &[(SparseVec::unit(3, 0), 0)]).unwrap();
        assert!(!rep.hypothesis);
        assert_eq!(rep.hypothesis_failure, Some(0));
        assert_eq!(rep.conclusion, None);
        assert!(lift_generators(&r, &m, &[(SparseVec::unit(3, 1), 0)]).is_err());
    }

    #[test]
    fn random_instances_are_valid_and_varied() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mut held, mut failed) = (0, 0);
        for _ in 0..60 {
            let inst = random_lift_instance(&mut rng, 8).unwrap();
            assert!(inst.module.dim() <= 8);
            let rep = lift_generators(&inst.algebra, &inst.module, &inst.generators).unwrap();
            if rep.hypothesis {
                held += 1;
                assert_eq!(rep.conclusion, Some(true));
            } else {
                failed += 1;
            }
        }
        assert!(held > 0 && failed > 0);
    }
}
