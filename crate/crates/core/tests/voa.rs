//! PBW bases against partition counts, mode actions against the defining
//! commutators, and presentation checks.

use std::sync::Arc;

use avfilt::exactlin::rat;
use avfilt::voa::{parse_module_spec, parse_presentation, preset, verify_presentation, Monomial, Space, State};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of partitions of `n` into parts at least `min`, each part
/// available in `colors` colors.
fn partitions(n: usize, min: usize, colors: usize) -> usize {
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in min..=n {
        for _ in 0..colors {
            for k in part..=n {
                p[k] += p[k - part];
            }
        }
    }
    p[n]
}

fn vacuum(name: &str, cutoff: i64) -> Space {
    Space::vacuum(Arc::new(preset(name).unwrap().voa), cutoff).unwrap()
}

fn module(name: &str, spec: &str, cutoff: i64) -> Space {
    let voa = Arc::new(preset(name).unwrap().voa);
    let m = parse_module_spec(&voa, spec).unwrap();
    Space::new(voa, Arc::new(m), cutoff).unwrap()
}

fn random_state(space: &Space, n: i64, rng: &mut ChaCha8Rng) -> State {
    let mut x = State::zero();
    if let Ok(basis) = space.weight_basis(n) {
        for _ in 0..3 {
            if let Some(b) = basis.choose(rng) {
                x.add_term(b.clone(), rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
            }
        }
    }
    x
}

#[test]
fn weight_bases_count_partitions() {
    let h = vacuum("heisenberg-1", 10);
    let v = vacuum("virasoro", 10);
    let a = vacuum("affine-sl2", 7);
    for n in 0..=10 {
        assert_eq!(h.dim(n).unwrap(), partitions(n as usize, 1, 1), "heisenberg {n}");
        assert_eq!(v.dim(n).unwrap(), partitions(n as usize, 2, 1), "virasoro {n}");
    }
    for n in 0..=7 {
        assert_eq!(a.dim(n).unwrap(), partitions(n as usize, 1, 3), "affine {n}");
    }
    assert_eq!(h.dim(4).unwrap(), 5);
    assert_eq!(v.dim(6).unwrap(), 4);
    for s in [&h, &v, &a] {
        assert_eq!(s.weight_basis(0).unwrap(), &[Monomial::bottom(0)]);
    }
    assert!(h.weight_basis(11).is_err());
}

#[test]
fn module_bases() {
    let f = module("heisenberg-1", "fock:1", 8);
    let m = module("virasoro", "verma:1/2", 8);
    let w = module("affine-sl2", "weyl:1", 5);
    for n in 0..=8 {
        assert_eq!(f.dim(n).unwrap(), partitions(n as usize, 1, 1));
        // L(-1) acts freely on a Verma module.
        assert_eq!(m.dim(n).unwrap(), partitions(n as usize, 1, 1));
    }
    for n in 0..=5 {
        assert_eq!(w.dim(n).unwrap(), 2 * partitions(n as usize, 1, 3));
    }
}

#[test]
fn heisenberg_commutator_on_the_vacuum() {
    let h = vacuum("heisenberg-1", 4);
    let a = h.generator_state(0);
    // a_1 a_{-1} 1 = [a_1, a_{-1}] 1 = 1 at level 1
    assert_eq!(h.generator_mode_act(0, 1, &a).unwrap(), State::vacuum());
    // a_2 a_{-2} 1 = 2·1
    let x = State::monomial(Monomial::new(vec![(0, -2)], 0));
    assert_eq!(h.generator_mode_act(0, 2, &x).unwrap(), State::term(Monomial::bottom(0), rat(2, 1)));
}

#[test]
fn vacuum_is_killed_by_nonnegative_modes() {
    for (name, cutoff) in [("heisenberg-1", 4), ("virasoro", 4), ("affine-sl2", 3)] {
        let s = vacuum(name, cutoff);
        for g in 0..s.voa().num_generators() {
            for n in 0..4 {
                assert!(s.generator_mode_act(g, n, &State::vacuum()).unwrap().is_zero(), "{name} {g} {n}");
            }
        }
    }
}

#[test]
fn conformal_weight_is_the_degree() {
    let h = vacuum("heisenberg-1", 8);
    let omega_h = State::term(Monomial::new(vec![(0, -1), (0, -1)], 0), rat(1, 2));
    let v = vacuum("virasoro", 8);
    let omega_v = v.generator_state(0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (s, omega) in [(&h, &omega_h), (&v, &omega_v)] {
        for n in 0..=6 {
            let x = random_state(s, n, &mut rng);
            assert_eq!(s.mode_act(omega, 1, &x).unwrap(), x.scaled(&rat(n, 1)));
            assert_eq!(s.grading_operator(&x), x.scaled(&rat(n, 1)));
        }
    }
}

#[test]
fn presets_pass_their_checks() {
    for name in ["virasoro", "affine-sl2", "heisenberg-1"] {
        let p = preset(name).unwrap();
        let rep = verify_presentation(&p.voa, p.module.as_ref(), 4, 1);
        assert!(rep.passed(), "{}", rep.to_text());
    }
}

#[test]
fn corrupted_structure_constant_names_the_triple() {
    let text = r#"
        name = "bad-sl2"
        family = "affine"
        level = "1"
        [lie]
        basis = ["e", "h", "f"]
        brackets = [
          { a = "e", b = "f", result = { h = "1" } },
          { a = "h", b = "e", result = { e = "3" } },
          { a = "h", b = "f", result = { f = "-2" } },
        ]
        form = [{ a = "e", b = "f", value = "1" }, { a = "h", b = "h", value = "2" }]
    "#;
    let bad = parse_presentation(text).unwrap();
    let rep = verify_presentation(&bad.voa, None, 3, 1);
    let fail = rep.failures().next().expect("a failing check");
    assert_eq!(fail.name, "antisymmetry and Jacobi identity");
    assert!(fail.detail.contains("(e, h, f)"), "{}", fail.detail);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn translation_is_a_derivative(seed in any::<u64>(), name in prop::sample::select(vec!["heisenberg-1", "virasoro", "affine-sl2"])) {
        let s = vacuum(name, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wa = rng.gen_range(1..=3);
        let wv = rng.gen_range(0..=2);
        let a = random_state(&s, wa, &mut rng);
        let v = random_state(&s, wv, &mut rng);
        prop_assume!(!a.is_zero());
        let da = s.translate(&a).unwrap();
        prop_assert_eq!(da.weight(), Some(wa + 1));
        for n in -2..=2i64 {
            let lhs = s.mode_act(&da, n, &v).unwrap();
            let rhs = s.mode_act(&a, n - 1, &v).unwrap().scaled(&rat(-n, 1));
            prop_assert_eq!(lhs, rhs, "n = {}", n);
        }
    }

    #[test]
    fn modes_shift_weight(seed in any::<u64>(), n in -3i64..=3) {
        let s = vacuum("affine-sl2", 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rng.gen_range(0..3);
        let w = rng.gen_range(0..=3);
        let v = random_state(&s, w, &mut rng);
        let out = s.generator_mode_act(g, n, &v).unwrap();
        // u_n lowers the weight by n + 1 - wt u = n.
        prop_assert!(out.is_zero() || out.weight() == Some(w - n));
    }
}
