//! Invariant suite for an `A(M)` truncation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactlin::Subspace;
use crate::report::Report;
use crate::voa::{Monomial, State};

use super::actions::{left_right_commutator, star_left, star_right};
use super::am::{check_am_filtration_generation, check_gr_am_generation, AMTruncation};
use super::c1::c2_module;
use super::BimodError;

/// Runs the bimodule checks, with `w` the candidate generating subspace
/// and `samples` random pairs for the left/right commutator identity.
pub fn verify_bimod(am: &AMTruncation, w: &[State], samples: usize, seed: u64) -> Result<Report, BimodError> {
    let ctx = am.context().clone();
    let m = ctx.module_space();
    let zhu = am.zhu();
    let top = am.n_max();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(format!("A(M) for {} up to level {top}", ctx.label()));
    let st = |x: &Monomial| State::monomial(x.clone());

    report.push(
        "O(M) relations certified by stabilization",
        am.certified(),
        format!("stabilized at {:?}", am.certificates().iter().map(|c| c.stabilized_at).collect::<Vec<_>>()),
    );
    let dims = am.filtration_dims();
    report.push(
        "level 0 of A(M) is the bottom level",
        am.quotient().relation_dim(0) == 0 && dims.first() == Some(&m.dim(0)?),
        format!("dims {dims:?}"),
    );
    report.push("levels are nested", dims.windows(2).all(|w| w[0] <= w[1]), "");

    let layout = am.quotient().layout();
    let level = |v: &crate::exactlin::SparseVec| v.leading().map(|(c, _)| layout.degree_of(c));
    let mut compat = Ok(());
    for (table, side) in [(am.left_table(), "left"), (am.right_table(), "right")] {
        for (&(p, _, q, _), v) in table {
            if level(v).map_or(false, |l| l > p + q) {
                compat = Err(format!("{side} action of degree {p} on degree {q} lands in level {:?}", level(v)));
            }
        }
    }
    report.push("left and right actions respect the filtration", compat.is_ok(), compat.err().unwrap_or_default());

    // sampled pairs for the commutator identity
    let mut pool_v: Vec<Vec<Monomial>> = Vec::new();
    let mut pool_m: Vec<Vec<Monomial>> = Vec::new();
    for n in 0..=top {
        pool_v.push(ctx.voa_basis(n)?.to_vec());
        pool_m.push(ctx.module_basis(n)?.to_vec());
    }
    let mut exact = Ok(());
    let mut lowered = Ok(());
    let mut tried = 0;
    while tried < samples {
        let wa = (0..=top).collect::<Vec<_>>().choose(&mut rng).copied().unwrap();
        let wv = (0..=(top - wa)).collect::<Vec<_>>().choose(&mut rng).copied().unwrap();
        let (Some(a), Some(v)) = (pool_v[wa as usize].choose(&mut rng), pool_m[wv as usize].choose(&mut rng)) else {
            continue;
        };
        tried += 1;
        let (a, v) = (st(a), st(v));
        let diff = star_left(m, &a, &v)?.sub(&star_right(m, &v, &a)?);
        let comm = left_right_commutator(m, &a, &v)?;
        if diff != comm || comm.max_weight().map_or(false, |t| t > wa + wv - 1) {
            exact = Err(format!("fails for {} and {}", ctx.voa_space().format_state(&a), m.format_state(&v)));
        }
        if am.level_of(&diff)?.map_or(false, |l| l > wa + wv - 1) {
            lowered = Err(format!("class of a*v - v*a too high for {}", ctx.voa_space().format_state(&a)));
        }
    }
    report.push(
        "a*v - v*a equals the commutator sum exactly",
        exact.is_ok(),
        exact.err().unwrap_or_else(|| format!("{samples} sampled pairs")),
    );
    report.push(
        "class of a*v - v*a drops one level",
        lowered.is_ok(),
        lowered.err().unwrap_or_default(),
    );

    let slice = match am.gr_am() {
        Ok(slice) => {
            report.pass("graded actions agree with a_(-1)v on both sides", format!("dims {:?}", slice.dims));
            slice
        }
        Err(e) => {
            report.fail("graded actions agree with a_(-1)v on both sides", e.to_string());
            return Ok(report);
        }
    };

    let c2 = c2_module(&ctx, top)?;
    let mut kills = Ok(());
    let mut onto = Ok(());
    for n in 0..=top {
        let basis = m.weight_basis(n)?;
        for row in c2[n as usize].rows() {
            let x: State = row.entries().iter().map(|(i, c)| (basis[*i].clone(), c.clone())).collect();
            if !am.psi(&x, n)?.is_zero() {
                kills = Err(format!("psi({}) is not zero", m.format_state(&x)));
            }
        }
        let mut image = Subspace::zero(am.graded_dim(n));
        for b in basis {
            image.insert(&am.psi(&st(b), n)?).expect("graded dimension");
        }
        if image.rank() != am.graded_dim(n) {
            onto = Err(format!("rank {} < {} in degree {n}", image.rank(), am.graded_dim(n)));
        }
    }
    report.push("psi kills C2(M)", kills.is_ok(), kills.err().unwrap_or_default());
    report.push("psi is onto in every degree", onto.is_ok(), onto.err().unwrap_or_default());

    let mut inter = Ok(());
    for p in 0..=top {
        for q in 0..=(top - p) {
            for a in &pool_v[p as usize] {
                for v in &pool_m[q as usize] {
                    let (a, v) = (st(a), st(v));
                    let lhs = am.psi(&m.mode_act(&a, -1, &v)?, p + q)?;
                    let rhs = slice.act(p, &zhu.phi(&a, p)?, q, &am.psi(&v, q)?);
                    if rhs.as_ref() != Some(&lhs) {
                        inter = Err(format!("fails for {} and {}", ctx.voa_space().format_state(&a), m.format_state(&v)));
                    }
                }
            }
        }
    }
    report.push("psi(a_(-1)v) = phi(a) psi(v)", inter.is_ok(), inter.err().unwrap_or_default());

    let gr = check_gr_am_generation(am, &slice, w, top)?;
    report.push(
        "M is strongly generated by W",
        gr.hypothesis.success(),
        format!("first failure {:?}", gr.hypothesis.first_failure),
    );
    report.push(
        "W + C1(M) criterion agrees with the spanning set",
        gr.hypothesis.routes_agree,
        format!("{:?} vs {:?}", gr.hypothesis.per_degree, gr.hypothesis.spanned),
    );
    report.push(
        "gr A(M) is generated by psi(W)",
        gr.generation.success(),
        format!("first failure {:?}", gr.generation.first_failure),
    );

    let gens: Vec<(State, i64)> = w.iter().filter_map(|s| s.weight().map(|d| (s.clone(), d))).collect();
    let f = check_am_filtration_generation(am, &gens, top)?;
    report.push(
        "A(M)_n is spanned by A(V)_(n - n_i) * w_i",
        f.left_ok(),
        format!("ranks {:?}, dims {:?}", f.left_ranks, f.level_dims),
    );
    report.push(
        "A(M)_n is spanned by w_i * A(V)_(n - n_i)",
        f.right_ok(),
        format!("ranks {:?}, dims {:?}", f.right_ranks, f.level_dims),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimod::{am_truncation, ModuleContext};
    use crate::voa::{parse_module_spec, preset};
    use crate::zhu::ZhuAlgebra;
    use std::sync::Arc;

    fn run(name: &str, module: &str, n_max: i64) -> Report {
        let voa = Arc::new(preset(name).unwrap().voa);
        let m = parse_module_spec(&voa, module).unwrap();
        let ctx = Arc::new(ModuleContext::new(voa, Arc::new(m), n_max + 4).unwrap());
        let zhu = Arc::new(ZhuAlgebra::new(ctx.voa_space().clone(), n_max, 2).unwrap());
        let am = am_truncation(ctx.clone(), zhu, n_max, 2).unwrap();
        let w: Vec<State> = (0..ctx.module_basis(0).unwrap().len())
            .map(|t| State::monomial(Monomial::bottom(t)))
            .collect();
        verify_bimod(&am, &w, 100, 5).unwrap()
    }

    #[test]
    fn fock_passes() {
        let r = run("heisenberg-1", "fock:1", 4);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn weyl_passes() {
        let r = run("affine-sl2", "weyl:1", 2);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn verma_fails_only_the_generation_checks() {
        let r = run("virasoro", "verma:1/3", 3);
        let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(
            failed,
            vec![
                "M is strongly generated by W",
                "gr A(M) is generated by psi(W)",
                "A(M)_n is spanned by A(V)_(n - n_i) * w_i",
                "A(M)_n is spanned by w_i * A(V)_(n - n_i)",
            ],
            "{}",
            r.to_text()
        );
    }

    #[test]
    fn same_seed_same_report() {
        assert_eq!(run("heisenberg-1", "fock:2", 3), run("heisenberg-1", "fock:2", 3));
    }
}
