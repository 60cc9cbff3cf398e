//! Invariant suite for a Zhu algebra truncation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::Report;
use crate::voa::{Monomial, State};

use super::algebra::ZhuAlgebra;
use super::c2::{c2_quotient, check_phi};
use super::ops::{commutator_sum, higher_o_element, star};
use super::ZhuError;

fn sample<'a>(pool: &'a [Monomial], k: usize, rng: &mut ChaCha8Rng) -> Vec<&'a Monomial> {
    pool.choose_multiple(rng, k).collect()
}

pub fn verify_zhu(zhu: &ZhuAlgebra, seed: u64) -> Result<Report, ZhuError> {
    let space = zhu.space().clone();
    let top = zhu.n_max();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(format!("Zhu algebra of {} up to level {top}", space.voa().name));
    let m = |x: &Monomial| State::monomial(x.clone());

    report.push(
        "relations certified by stabilization",
        zhu.certified(),
        format!(
            "stabilized at {:?}",
            zhu.certificates().iter().map(|c| c.stabilized_at).collect::<Vec<_>>()
        ),
    );
    let dims = zhu.filtration_dims();
    report.push("level 0 is spanned by the vacuum", dims.first() == Some(&1), format!("dims {dims:?}"));
    report.push("levels are nested", dims.windows(2).all(|w| w[0] <= w[1]), "");

    let mut pool: Vec<Vec<Monomial>> = Vec::new();
    for n in 0..=top {
        pool.push(space.weight_basis(n)?.to_vec());
    }

    let mut compat = Ok(());
    for p in 0..=top {
        for q in 0..=(top - p) {
            for a in zhu.graded_basis(p) {
                for b in zhu.graded_basis(q) {
                    let level = zhu.level_of(&star(&space, &m(&a), &m(&b))?)?;
                    if level.map_or(false, |l| l > p + q) {
                        compat = Err(format!("level {level:?} exceeds {}", p + q));
                    }
                }
            }
        }
    }
    report.push("star respects the filtration", compat.is_ok(), compat.err().unwrap_or_default());

    match zhu.gr_algebra() {
        Ok(slice) => {
            report.pass("graded product is the class of a_(-1)b and is commutative", format!("dims {:?}", slice.dims));
            let c2 = c2_quotient(&space, top)?;
            report.merge(check_phi(zhu, &slice, &c2)?);
        }
        Err(e) => report.fail("graded product is the class of a_(-1)b and is commutative", e.to_string()),
    }

    let mut comm = Ok(());
    for wa in 0..=top {
        for wb in 0..=(top - wa) {
            for a in sample(&pool[wa as usize], 3, &mut rng) {
                for b in sample(&pool[wb as usize], 3, &mut rng) {
                    let (a, b) = (m(a), m(b));
                    let x = star(&space, &a, &b)?.sub(&star(&space, &b, &a)?).sub(&commutator_sum(&space, &a, &b)?);
                    if !zhu.reduce(&x)?.is_zero() {
                        comm = Err(format!("fails for {} and {}", space.format_state(&a), space.format_state(&b)));
                    }
                }
            }
        }
    }
    report.push("a*b - b*a equals the commutator sum modulo O(V)", comm.is_ok(), comm.err().unwrap_or_default());

    let mut transl = Ok(());
    for n in 0..top {
        for a in &pool[n as usize] {
            let a = m(a);
            let x = space.translate(&a)?.add(&a.scaled(&crate::exactlin::rat(n, 1)));
            if !zhu.reduce(&x)?.is_zero() {
                transl = Err(format!("fails for {}", space.format_state(&a)));
            }
        }
    }
    report.push("L(-1)a + L(0)a lies in O(V)", transl.is_ok(), transl.err().unwrap_or_default());

    let mut assoc = Ok(());
    for _ in 0..30 {
        let wa = *[0, 1, 2].choose(&mut rng).unwrap();
        let wb = *[0, 1, 2].choose(&mut rng).unwrap();
        let wc = *[0, 1, 2].choose(&mut rng).unwrap();
        if wa + wb + wc > top {
            continue;
        }
        let pick = |w: i64, rng: &mut ChaCha8Rng| pool[w as usize].choose(rng).map(m);
        let (Some(a), Some(b), Some(c)) = (pick(wa, &mut rng), pick(wb, &mut rng), pick(wc, &mut rng)) else {
            continue;
        };
        let lhs = star(&space, &star(&space, &a, &b)?, &c)?;
        let rhs = star(&space, &a, &star(&space, &b, &c)?)?;
        if !zhu.reduce(&lhs.sub(&rhs))?.is_zero() {
            assoc = Err(format!(
                "fails for {}, {}, {}",
                space.format_state(&a),
                space.format_state(&b),
                space.format_state(&c)
            ));
        }
    }
    report.push("star is associative modulo O(V) (sampled)", assoc.is_ok(), assoc.err().unwrap_or_default());

    let mut higher = Ok(());
    for (mm, nn) in [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)] {
        for wa in 1..=top {
            for wb in 0..=top {
                if wa + wb + 1 + mm > top {
                    continue;
                }
                for a in sample(&pool[wa as usize], 2, &mut rng) {
                    for b in sample(&pool[wb as usize], 2, &mut rng) {
                        let x = higher_o_element(&space, &m(a), &m(b), mm, nn)?;
                        if !zhu.reduce(&x)?.is_zero() {
                            higher = Err(format!("(m, n) = ({mm}, {nn}) fails for {}", space.format_monomial(a)));
                        }
                    }
                }
            }
        }
    }
    report.push("higher residues lie in O(V)", higher.is_ok(), higher.err().unwrap_or_default());
    Ok(report)
}
