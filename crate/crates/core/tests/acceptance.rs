//! One line per acceptance criterion. Two criteria are known to fail for
//! mathematical reasons; they are printed as FAIL and checked to fail in the
//! documented way, everything else must pass.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use avfilt::bimod::{
    am_truncation, check_module_strong_generation, left_right_commutator, star_left, star_right, ModuleContext,
    Rewriter,
};
use avfilt::exactlin::rat;
use avfilt::filtgen::{
    check_ideal_map, gr_swap_iso, lift_generators, lift_swap_iso, random_lift_instance, tensor_preset,
    upper_triangular, verify_imported_swap, LiftOutcome,
};
use avfilt::voa::{parse_module_spec, preset, Monomial, Space, State};
use avfilt::zhu::{c2_quotient, check_phi, normal_product, star, ZhuAlgebra};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20;
const FAMILIES: [&str; 3] = ["virasoro", "heisenberg-1", "affine-sl2"];

struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    /// Set when the criterion is expected to fail; holds the reason.
    known_failure: Option<String>,
    /// Everything the criterion computed, for the determinism comparison.
    transcript: String,
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn zhu(name: &str, n: i64) -> ZhuAlgebra {
    let voa = Arc::new(preset(name).unwrap().voa);
    let space = Arc::new(Space::vacuum(voa, n + 4).unwrap());
    ZhuAlgebra::new(space, n, 2).unwrap()
}

fn context(voa: &str, module: &str, cutoff: i64) -> Arc<ModuleContext> {
    let voa = Arc::new(preset(voa).unwrap().voa);
    let m = parse_module_spec(&voa, module).unwrap();
    Arc::new(ModuleContext::new(voa, Arc::new(m), cutoff).unwrap())
}

fn bottom(ctx: &ModuleContext) -> Vec<State> {
    (0..ctx.module_space().module().bottom_dim).map(|t| State::monomial(Monomial::bottom(t))).collect()
}

fn dims(zhus: &[ZhuAlgebra]) -> Outcome {
    let mut t = String::new();
    let mut passed = true;
    for (name, z) in FAMILIES.iter().zip(zhus) {
        let (top, closed): (usize, Box<dyn Fn(usize) -> usize>) = match *name {
            "virasoro" => (6, Box::new(|n| n / 2 + 1)),
            "heisenberg-1" => (6, Box::new(|n| n + 1)),
            _ => (3, Box::new(|n| binom(n + 3, 3))),
        };
        let got = &z.filtration_dims()[..=top];
        let want: Vec<usize> = (0..=top).map(closed).collect();
        let certified = z.certificates().iter().filter(|c| c.level <= top as i64).all(|c| c.certified);
        passed &= got == want && certified;
        writeln!(t, "{name}: {got:?} expected {want:?} certified {certified}").unwrap();
    }
    Outcome { id: 1, title: "Zhu algebra dimensions match the closed forms", passed, known_failure: None, transcript: t }
}

fn graded_product(zhus: &[ZhuAlgebra]) -> Outcome {
    let mut t = String::new();
    let mut passed = true;
    for (name, z) in FAMILIES.iter().zip(zhus) {
        let space = z.space();
        let (mut pairs, mut bad) = (0, 0);
        for p in 0..=z.n_max() {
            for q in 0..=(z.n_max() - p) {
                for a in &z.graded_basis(p) {
                    for b in z.graded_basis(q) {
                        let (a, b) = (State::monomial(a.clone()), State::monomial(b));
                        let ab = z.graded_class(&star(space, &a, &b).unwrap(), p + q).unwrap();
                        let ba = z.graded_class(&star(space, &b, &a).unwrap(), p + q).unwrap();
                        let lit = z.graded_class(&normal_product(space, &a, &b).unwrap(), p + q).unwrap();
                        pairs += 1;
                        bad += usize::from(ab != lit || ab != ba);
                    }
                }
            }
        }
        passed &= bad == 0;
        writeln!(t, "{name}: {pairs} basis pairs, {bad} failures").unwrap();
    }
    Outcome {
        id: 2,
        title: "graded product is commutative and equals the class of a_(-1)b",
        passed,
        known_failure: None,
        transcript: t,
    }
}

fn phi(zhus: &[ZhuAlgebra]) -> Outcome {
    let mut t = String::new();
    let mut passed = true;
    for (name, z) in FAMILIES.iter().zip(zhus) {
        let slice = z.gr_algebra().unwrap();
        let c2 = c2_quotient(z.space(), z.n_max()).unwrap();
        let rep = check_phi(z, &slice, &c2).unwrap();
        passed &= rep.passed() && rep.checks.len() == 4;
        writeln!(t, "{name}:\n{}", rep.to_text()).unwrap();
    }
    Outcome { id: 3, title: "phi from V/C2(V) onto gr A(V)", passed, known_failure: None, transcript: t }
}

fn commutator(seed: u64) -> Outcome {
    let mut t = String::new();
    let mut passed = true;
    for (voa, module, n) in [("heisenberg-1", "fock:1", 4), ("virasoro", "verma:1/2", 4), ("affine-sl2", "weyl:1", 3)] {
        let ctx = context(voa, module, n + 4);
        let z = Arc::new(ZhuAlgebra::new(ctx.voa_space().clone(), n, 2).unwrap());
        let am = am_truncation(ctx.clone(), z, n, 2).unwrap();
        let m = ctx.module_space();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut exact, mut lowered, mut tried) = (0, 0, 0);
        while tried < 500 {
            let wa = rng.gen_range(0..=n);
            let wv = rng.gen_range(0..=(n - wa));
            let (Some(a), Some(v)) =
                (ctx.voa_basis(wa).unwrap().choose(&mut rng), ctx.module_basis(wv).unwrap().choose(&mut rng))
            else {
                continue;
            };
            tried += 1;
            let (a, v) = (State::monomial(a.clone()), State::monomial(v.clone()));
            let diff = star_left(m, &a, &v).unwrap().sub(&star_right(m, &v, &a).unwrap());
            exact += usize::from(diff == left_right_commutator(m, &a, &v).unwrap());
            lowered += usize::from(am.level_of(&diff).unwrap().map_or(true, |l| l <= wa + wv - 1));
        }
        passed &= exact == 500 && lowered == 500 && am.certified();
        writeln!(t, "{voa}/{module}: exact {exact}/500, dropped a level {lowered}/500, certified {}", am.certified())
            .unwrap();
    }
    Outcome { id: 4, title: "a*v - v*a equals the commutator sum and drops a level", passed, known_failure: None, transcript: t }
}

fn random_state(space: &Space, n: i64, rng: &mut ChaCha8Rng) -> State {
    let mut x = State::zero();
    let basis = space.weight_basis(n).unwrap();
    for _ in 0..3 {
        let b = basis.choose(rng).unwrap();
        x.add_term(b.clone(), rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
    }
    x
}

fn rewriting(seed: u64) -> Outcome {
    let mut t = String::new();
    let ctx = context("heisenberg-1", "fock:1", 5);
    let w = bottom(&ctx);
    let fock_gen = check_module_strong_generation(&ctx, &w, 5).unwrap();
    let mut rw = Rewriter::new(&ctx, &w, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equal = 0;
    for _ in 0..100 {
        let x = random_state(ctx.module_space(), rng.gen_range(0..=5), &mut rng);
        let r = rw.rewrite(&x).unwrap();
        equal += usize::from(r.evaluate(ctx.module_space(), &w).unwrap() == x);
        writeln!(t, "{}", r.to_sexp(ctx.module_space())).unwrap();
    }
    let fock_ok = fock_gen.success() && equal == 100;
    writeln!(t, "fock:1 generated by its bottom level {}, rewrites re-evaluate {equal}/100", fock_gen.success()).unwrap();

    let vctx = context("virasoro", "verma:1/2", 5);
    let verma = check_module_strong_generation(&vctx, &bottom(&vctx), 5).unwrap();
    writeln!(t, "verma:1/2 first failure {:?}, C1 codims {:?}", verma.first_failure, verma.c1_codims).unwrap();
    assert!(fock_ok, "{t}");
    // L(-1)v is not of the form a_(-1)u with wt a > 0, so degree 1 is missed.
    assert_eq!(verma.first_failure, Some(1), "{t}");
    Outcome {
        id: 5,
        title: "bottom-level strong generation and exact rewriting",
        passed: fock_ok && verma.success(),
        known_failure: Some(format!(
            "Fock module passes; the Virasoro Verma module is not strongly generated by its bottom level, first failure in degree {:?}",
            verma.first_failure
        )),
        transcript: t,
    }
}

fn lifting(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut held, mut bad) = (0, 0);
    for _ in 0..200 {
        let inst = random_lift_instance(&mut rng, 8).unwrap();
        let rep = lift_generators(&inst.algebra, &inst.module, &inst.generators).unwrap();
        if rep.hypothesis {
            held += 1;
            bad += usize::from(rep.conclusion != Some(true));
        }
    }
    Outcome {
        id: 6,
        title: "generators of gr M lift to generators of every level",
        passed: bad == 0 && held > 0,
        known_failure: None,
        transcript: format!("200 modules, hypothesis held in {held}, counterexamples {bad}\n"),
    }
}

fn ideals() -> Outcome {
    let r = upper_triangular();
    let left = check_ideal_map(&r, false, 1, 2).unwrap();
    let two = check_ideal_map(&r, true, 1, 2).unwrap();
    let t = format!(
        "left: {} ideals, strict {}, injective {}, witness {:?}\ntwo-sided: {} ideals, strict {}, injective {}\n",
        left.ideals,
        left.strictly_order_preserving,
        left.injective,
        left.injectivity_witness,
        two.ideals,
        two.strictly_order_preserving,
        two.injective
    );
    assert!(left.strictly_order_preserving && left.order_preserving, "{t}");
    assert!(two.injective && two.strictly_order_preserving, "{t}");
    assert!(!left.injective && left.injectivity_witness.is_some(), "{t}");
    Outcome {
        id: 7,
        title: "graded ideal map on the triangular algebra is injective and strictly order preserving",
        passed: left.injective && left.strictly_order_preserving,
        known_failure: Some(format!(
            "strictly order preserving holds, injectivity fails on left ideals: {:?}",
            left.injectivity_witness.unwrap()
        )),
        transcript: t,
    }
}

fn swap() -> Outcome {
    let mut t = String::new();
    let mut passed = true;
    for name in ["split", "triple", "quadratic"] {
        let inst = tensor_preset(name).unwrap();
        let s = gr_swap_iso(&inst.algebra, &inst.left, &inst.right).unwrap();
        passed &= s.verified();
        writeln!(t, "{name}: verified {}, identity checks {}", s.verified(), s.identity_checks).unwrap();
    }
    let voa = Arc::new(preset("heisenberg-1").unwrap().voa);
    let ctxs: Vec<_> = ["fock:1", "fock:2"]
        .iter()
        .map(|s| Arc::new(ModuleContext::new(voa.clone(), Arc::new(parse_module_spec(&voa, s).unwrap()), 7).unwrap()))
        .collect();
    let z = Arc::new(ZhuAlgebra::new(ctxs[0].voa_space().clone(), 3, 2).unwrap());
    let ams: Vec<_> = ctxs.into_iter().map(|c| am_truncation(c, z.clone(), 3, 2).unwrap()).collect();
    let rep = verify_imported_swap(&z, &ams[0], &ams[1], 3).unwrap();
    passed &= rep.passed();
    t += &rep.to_text();
    Outcome { id: 8, title: "graded swap is well defined, equivariant and involutive", passed, known_failure: None, transcript: t }
}

fn lifted_swap() -> Outcome {
    let mut t = String::new();
    let mut passed = true;
    for name in ["split", "split-simple", "triple", "quadratic", "split-filtered"] {
        let inst = tensor_preset(name).unwrap();
        let rep =
            lift_swap_iso(&inst.algebra, &inst.left, &inst.right, &inst.left_generators, &inst.right_generators)
                .unwrap();
        match (&rep.outcome, name == "quadratic" || name == "split-filtered") {
            (LiftOutcome::Lifted(l), false) => {
                passed &= l.verified() && l.graded_is_swap;
                writeln!(t, "{name}: theta {:?}", l.theta).unwrap();
            }
            (LiftOutcome::Obstructed(o), true) => {
                passed &= o.sections_exist && o.certificate_verified && o.least_level == Some(2);
                writeln!(t, "{name}: no level-0 section, certificate of {} terms", o.certificate_terms).unwrap();
            }
            _ => {
                passed = false;
                writeln!(t, "{name}: unexpected outcome").unwrap();
            }
        }
    }
    Outcome {
        id: 9,
        title: "swap lifts with gr(theta) = swap, and the obstructed instance is certified",
        passed,
        known_failure: None,
        transcript: t,
    }
}

fn run_all(seed: u64) -> (Vec<Outcome>, Vec<f64>) {
    let mut times = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |times: &mut Vec<f64>| {
        times.push(clock.elapsed().as_secs_f64());
        clock = Instant::now();
    };
    let zhus: Vec<ZhuAlgebra> = FAMILIES.iter().map(|f| zhu(f, 6)).collect();
    let mut out = vec![dims(&zhus)];
    lap(&mut times);
    out.push(graded_product(&zhus));
    lap(&mut times);
    out.push(phi(&zhus));
    lap(&mut times);
    out.push(commutator(seed));
    lap(&mut times);
    out.push(rewriting(seed));
    lap(&mut times);
    out.push(lifting(seed));
    lap(&mut times);
    out.push(ideals());
    lap(&mut times);
    out.push(swap());
    lap(&mut times);
    out.push(lifted_swap());
    lap(&mut times);
    (out, times)
}

#[test]
fn acceptance() {
    let (first, times) = run_all(SEED);
    let (second, _) = run_all(SEED);
    let identical = first.len() == second.len()
        && first.iter().zip(&second).all(|(a, b)| a.transcript == b.transcript && a.passed == b.passed);

    let mut unexpected = Vec::new();
    for (o, secs) in first.iter().zip(&times) {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        match (&o.known_failure, o.passed) {
            (Some(why), false) => println!("criterion {}: {verdict} {} ({secs:.1}s); known: {why}", o.id, o.title),
            _ => println!("criterion {}: {verdict} {} ({secs:.1}s)", o.id, o.title),
        }
        if !o.passed && o.known_failure.is_none() {
            unexpected.push(format!("criterion {}:\n{}", o.id, o.transcript));
        }
    }
    println!("criterion 10: {} identical reports on rerun with seed {SEED}", if identical { "PASS" } else { "FAIL" });
    assert!(unexpected.is_empty(), "{}", unexpected.join("\n"));
    assert!(identical);
}
