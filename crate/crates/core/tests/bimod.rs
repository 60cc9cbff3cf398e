//! Strong generation of modules, rewriting over generators, and the
//! bimodule `A(M)`.

use std::sync::{Arc, OnceLock};

use avfilt::bimod::{
    am_truncation, b_space, c1_space, check_am_filtration_generation, check_gr_am_generation,
    check_module_strong_generation, star_left, star_right, AMTruncation, BimodError, ModuleContext, Rewriter,
};
use avfilt::exactlin::rat;
use avfilt::voa::{parse_module_spec, preset, Monomial, Space, State};
use avfilt::zhu::{star, ZhuAlgebra};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(name: &str, module: &str, cutoff: i64) -> Arc<ModuleContext> {
    let voa = Arc::new(preset(name).unwrap().voa);
    let m = parse_module_spec(&voa, module).unwrap();
    Arc::new(ModuleContext::new(voa, Arc::new(m), cutoff).unwrap())
}

fn am(name: &str, module: &str, n: i64) -> AMTruncation {
    let c = ctx(name, module, n + 4);
    let zhu = Arc::new(ZhuAlgebra::new(c.voa_space().clone(), n, 2).unwrap());
    am_truncation(c, zhu, n, 2).unwrap()
}

fn shared_fock() -> &'static AMTruncation {
    static CELL: OnceLock<AMTruncation> = OnceLock::new();
    CELL.get_or_init(|| am("heisenberg-1", "fock:2", 3))
}

fn bottom(i: usize) -> State {
    State::monomial(Monomial::bottom(i))
}

fn whole(space: &Space, n: i64) -> Vec<State> {
    (0..=n).flat_map(|d| space.weight_basis(d).unwrap().iter().cloned().map(State::monomial)).collect()
}

/// `L(-1)^k w` for `k ≤ n`.
fn translates(n: i64) -> Vec<State> {
    (0..=n).map(|k| State::monomial(Monomial::new(vec![(0, -1); k as usize], 0))).collect()
}

fn random_state(space: &Space, n: i64, rng: &mut ChaCha8Rng) -> State {
    let mut x = State::zero();
    for _ in 0..3 {
        if let Some(b) = space.weight_basis(n).unwrap().choose(rng) {
            x.add_term(b.clone(), rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
        }
    }
    x
}

#[test]
fn c1_codimensions() {
    // Every α_{-k} w with k ≥ 1 is (α_{-k}1)_{-1} w, so C₁ fills all positive degrees.
    let f = ctx("heisenberg-1", "fock:1", 6);
    assert_eq!(c1_space(&f, 5).unwrap().codims(), [1, 0, 0, 0, 0, 0]);
    let w = ctx("affine-sl2", "weyl:1", 4);
    assert_eq!(c1_space(&w, 3).unwrap().codims(), [2, 0, 0, 0]);
    // L(-1)^n w survives in every degree.
    let v = ctx("virasoro", "verma:1/2", 6);
    assert_eq!(c1_space(&v, 5).unwrap().codims(), [1, 1, 1, 1, 1, 1]);
    let b: Vec<usize> = b_space(&v, 5).unwrap().iter().map(|s| s.ambient_dim() - s.rank()).collect();
    assert_eq!(b, [1, 0, 0, 0, 0, 0]);
}

#[test]
fn strong_generation_of_modules() {
    let f = ctx("heisenberg-1", "fock:1", 6);
    let r = check_module_strong_generation(&f, &[bottom(0)], 6).unwrap();
    assert!(r.success() && r.routes_agree);
    assert!(check_module_strong_generation(&f, &whole(f.module_space(), 6), 6).unwrap().success());
    assert_eq!(check_module_strong_generation(&f, &[], 6).unwrap().first_failure, Some(0));

    let w = ctx("affine-sl2", "weyl:1", 4);
    assert!(check_module_strong_generation(&w, &[bottom(0), bottom(1)], 4).unwrap().success());
    assert_eq!(check_module_strong_generation(&w, &[bottom(0)], 4).unwrap().first_failure, Some(0));

    let v = ctx("virasoro", "verma:1/2", 6);
    let r = check_module_strong_generation(&v, &[bottom(0)], 6).unwrap();
    assert_eq!(r.first_failure, Some(1));
    assert!(r.routes_agree);
    assert!(check_module_strong_generation(&v, &translates(6), 6).unwrap().success());
}

#[test]
fn rewriting_a_single_mode() {
    let f = ctx("heisenberg-1", "fock:1", 4);
    let w = [bottom(0)];
    let x = State::monomial(Monomial::new(vec![(0, -2)], 0));
    let r = Rewriter::new(&f, &w, 4).unwrap().rewrite(&x).unwrap();
    assert_eq!(r.to_sexp(f.module_space()), "(+ (* 1 (a -2 w0)))");
    assert_eq!(r.evaluate(f.module_space(), &w).unwrap(), x);
}

#[test]
fn rewriting_needs_strong_generation() {
    let v = ctx("virasoro", "verma:1/2", 5);
    assert!(matches!(Rewriter::new(&v, &[bottom(0)], 4), Err(BimodError::Precondition(_))));
}

#[test]
fn rewrites_evaluate_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases: [(Arc<ModuleContext>, Vec<State>, i64); 3] = [
        (ctx("heisenberg-1", "fock:1", 6), vec![bottom(0)], 5),
        (ctx("affine-sl2", "weyl:1", 4), vec![bottom(0), bottom(1)], 3),
        (ctx("virasoro", "verma:1/2", 5), translates(4), 4),
    ];
    for (c, w, n) in &cases {
        let mut rw = Rewriter::new(c, w, *n).unwrap();
        for _ in 0..10 {
            let x = random_state(c.module_space(), *n, &mut rng);
            let r = rw.rewrite(&x).unwrap();
            assert_eq!(r.evaluate(c.module_space(), w).unwrap(), x, "{}", c.label());
        }
    }
}

#[test]
fn graded_generation_by_the_bottom_level() {
    let f = am("heisenberg-1", "fock:1", 4);
    let g = f.gr_am().unwrap();
    let r = check_gr_am_generation(&f, &g, &[bottom(0)], 4).unwrap();
    assert!(r.hypothesis.success() && r.generation.success());
    assert_eq!(check_gr_am_generation(&f, &g, &[], 4).unwrap().generation.first_failure, Some(0));

    let v = am("virasoro", "verma:1/2", 3);
    let g = v.gr_am().unwrap();
    let r = check_gr_am_generation(&v, &g, &translates(3), 3).unwrap();
    assert!(r.hypothesis.success() && r.generation.success());
}

#[test]
fn filtration_generation() {
    let f = am("heisenberg-1", "fock:1", 4);
    let r = check_am_filtration_generation(&f, &[(bottom(0), 0)], 4).unwrap();
    assert_eq!(r.level_dims, [1, 2, 3, 4, 5]);
    assert!(r.left_ok() && r.right_ok() && r.gr_hypothesis.success());
    let r = check_am_filtration_generation(&f, &[], 4).unwrap();
    assert!(!r.left_ok() && !r.right_ok());
    assert_eq!(r.gr_hypothesis.first_failure, Some(0));
    let high = State::monomial(Monomial::new(vec![(0, -1), (0, -1)], 0));
    assert!(check_am_filtration_generation(&f, &[(high, 1)], 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn actions_make_a_bimodule(seed in any::<u64>()) {
        let am = shared_fock();
        let s = am.zhu().space();
        let m = am.context().module_space();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wa = rng.gen_range(0..=1);
        let wb = rng.gen_range(0..=1);
        let wv = rng.gen_range(0..=(3 - wa - wb));
        let a = random_state(s, wa, &mut rng);
        let b = random_state(s, wb, &mut rng);
        let v = random_state(m, wv, &mut rng);
        let ab = star(s, &a, &b).unwrap();
        let left = star_left(m, &ab, &v).unwrap().sub(&star_left(m, &a, &star_left(m, &b, &v).unwrap()).unwrap());
        prop_assert!(am.reduce(&left).unwrap().is_zero());
        let right = star_right(m, &v, &ab).unwrap().sub(&star_right(m, &star_right(m, &v, &a).unwrap(), &b).unwrap());
        prop_assert!(am.reduce(&right).unwrap().is_zero());
        let mixed = star_right(m, &star_left(m, &a, &v).unwrap(), &b).unwrap()
            .sub(&star_left(m, &a, &star_right(m, &v, &b).unwrap()).unwrap());
        prop_assert!(am.reduce(&mixed).unwrap().is_zero());
    }
}
