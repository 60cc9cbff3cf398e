//! Consistency checks for a presentation and its truncated engine.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{binomial, rat};
use crate::report::Report;

use super::engine::Space;
use super::presentation::{Family, ModulePresentation, VoaPresentation};
use super::state::State;

/// Runs every presentation-level check. Failures are reported, never
/// raised.
pub fn verify_presentation(voa: &VoaPresentation, module: Option<&ModulePresentation>, cutoff: i64, seed: u64) -> Report {
    let mut report = Report::new(format!("presentation {}", voa.name));
    if let Err(e) = voa.validate() {
        report.fail("presentation is well formed", e.to_string());
        return report;
    }
    report.pass("presentation is well formed", "");

    if let Family::Affine { lie, .. } = &voa.family {
        let name = |i: usize| lie.basis[i].clone();
        let s = lie.structure_violations();
        match s.first() {
            None => report.pass("antisymmetry and Jacobi identity", ""),
            Some((kind, (a, b, c))) => report.fail(
                "antisymmetry and Jacobi identity",
                format!("{kind} violated at ({}, {}, {}); {} violations", name(*a), name(*b), name(*c), s.len()),
            ),
        }
        let f = lie.form_violations();
        match f.first() {
            None => report.pass("invariant symmetric form", ""),
            Some((kind, (a, b, c))) => report.fail(
                "invariant symmetric form",
                format!("{kind} violated at ({}, {}, {})", name(*a), name(*b), name(*c)),
            ),
        }
        if !(s.is_empty() && f.is_empty()) {
            return report;
        }
    }

    let voa = Arc::new(voa.clone());
    let vac = match Space::vacuum(voa.clone(), cutoff) {
        Ok(s) => s,
        Err(e) => {
            report.fail("truncated VOA", e.to_string());
            return report;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    check_space(&mut report, &vac, &vac, "VOA", &mut rng);
    check_vacuum_axioms(&mut report, &vac);

    if let Some(m) = module.filter(|m| !m.is_vacuum()) {
        match Space::new(voa.clone(), Arc::new(m.clone()), cutoff) {
            Ok(ms) => {
                check_zero_modes(&mut report, &voa, m);
                check_space(&mut report, &vac, &ms, &format!("module {}", m.label()), &mut rng);
            }
            Err(e) => report.fail("truncated module", e.to_string()),
        }
    }
    report
}

fn random_state(space: &Space, weight: i64, rng: &mut ChaCha8Rng) -> State {
    let basis = space.weight_basis(weight).unwrap_or(&[]);
    basis.iter().map(|m| (m.clone(), rat(rng.gen_range(-3..=3), 1))).collect()
}

/// Grading, weight additivity and the sampled commutator formula.
fn check_space(report: &mut Report, vac: &Space, space: &Space, what: &str, rng: &mut ChaCha8Rng) {
    let voa = vac.voa();
    // grading: for Virasoro L(0) = ω_1 must act by the degree
    let mut grading = Ok(());
    if matches!(voa.family, Family::Virasoro { .. }) {
        let w = vac.generator_state(0);
        'outer: for n in 0..=space.cutoff() {
            for m in space.weight_basis(n).unwrap_or(&[]) {
                let v = State::monomial(m.clone());
                let mut expect = space.grading_operator(&v);
                if let super::presentation::ModuleKind::Verma { h } = &space.module().kind {
                    expect.add_scaled(h, &v);
                }
                if space.mode_act(&w, 1, &v).ok() != Some(expect) {
                    grading = Err(format!("L(0) disagrees with the degree on {}", space.format_monomial(m)));
                    break 'outer;
                }
            }
        }
    }
    for n in 0..=space.cutoff() {
        if space.weight_basis(n).map_or(true, |b| b.iter().any(|m| m.degree() != n || !m.is_canonical())) {
            grading = Err(format!("basis of degree {n} is not canonical"));
        }
    }
    report.push(format!("{what}: grading consistency"), grading.is_ok(), grading.err().unwrap_or_default());

    let mut additivity = Ok(());
    let mut commutator = Ok(());
    let top = space.cutoff();
    for _ in 0..24 {
        let wa = rng.gen_range(1..=2.min(top.max(1)));
        let wb = rng.gen_range(1..=2.min(top.max(1)));
        let wv = rng.gen_range(0..=1.min(top));
        let m = rng.gen_range(0..=2);
        let n = rng.gen_range(0..=2);
        if wa + wb + wv - m - n - 2 > top - 1 || wa + wv > top || wb + wv > top || vac.cutoff() < wa + wb {
            continue;
        }
        let a = random_state(vac, wa, rng);
        let b = random_state(vac, wb, rng);
        let v = random_state(space, wv, rng);
        if a.is_zero() || b.is_zero() || v.is_zero() {
            continue;
        }
        let run = || -> Result<bool, super::VoaError> {
            let bv = space.mode_act(&b, n, &v)?;
            let av = space.mode_act(&a, m, &v)?;
            for (x, y) in [(&bv, wb + wv - n - 1), (&av, wa + wv - m - 1)] {
                if !(x.is_zero() || x.weight() == Some(y)) {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        match run() {
            Ok(true) => {}
            Ok(false) => additivity = Err(format!("weights do not add for modes {m}, {n}")),
            Err(e) => additivity = Err(e.to_string()),
        }
        let comm = || -> Result<bool, super::VoaError> {
            let lhs = space
                .mode_act(&a, m, &space.mode_act(&b, n, &v)?)?
                .sub(&space.mode_act(&b, n, &space.mode_act(&a, m, &v)?)?);
            let mut rhs = State::zero();
            for i in 0..=(wa + wb) {
                for (_, c) in vac.mode_act(&a, i, &b)?.components() {
                    rhs.add_scaled(&binomial(m, i), &space.mode_act(&c, m + n - i, &v)?);
                }
            }
            Ok(lhs == rhs)
        };
        match comm() {
            Ok(true) => {}
            Ok(false) => commutator = Err(format!("commutator formula fails for modes {m}, {n} at weights {wa}, {wb}, {wv}")),
            Err(e) => commutator = Err(e.to_string()),
        }
    }
    report.push(format!("{what}: weight additivity"), additivity.is_ok(), additivity.err().unwrap_or_default());
    report.push(format!("{what}: sampled commutator formula"), commutator.is_ok(), commutator.err().unwrap_or_default());
}

fn check_vacuum_axioms(report: &mut Report, vac: &Space) {
    let one = State::vacuum();
    let mut result = Ok(());
    for g in 0..vac.voa().num_generators() {
        let w = vac.voa().generator_weight(g);
        if w > vac.cutoff() {
            continue;
        }
        for n in 0..=3 {
            if !vac.generator_mode_act(g, n, &one).map_or(false, |s| s.is_zero()) {
                result = Err(format!("{}_{n} 1 is not zero", vac.voa().generators[g].symbol));
            }
        }
        let state = vac.generator_state(g);
        if vac.mode_act(&state, -1, &one).ok() != Some(state.clone()) {
            result = Err(format!("creation property fails for {}", vac.voa().generators[g].symbol));
        }
        if vac.mode_act(&one, -1, &state).ok() != Some(state) {
            result = Err("the vacuum field is not the identity".into());
        }
    }
    if vac.translate(&one).map_or(true, |s| !s.is_zero()) {
        result = Err("L(-1) 1 is not zero".into());
    }
    report.push("vacuum axioms", result.is_ok(), result.err().unwrap_or_default());
}

/// On the bottom level the zero modes must represent the bracket of the
/// underlying finite-dimensional Lie algebra.
fn check_zero_modes(report: &mut Report, voa: &VoaPresentation, m: &ModulePresentation) {
    let d = m.bottom_dim;
    let mul = |x: &Vec<Vec<crate::exactlin::Rat>>, y: &Vec<Vec<crate::exactlin::Rat>>| {
        let mut z = vec![vec![rat(0, 1); d]; d];
        for i in 0..d {
            for k in 0..d {
                for j in 0..d {
                    z[i][j] += &x[i][k] * &y[k][j];
                }
            }
        }
        z
    };
    let mut result = Ok(());
    let g = voa.num_generators();
    for a in 0..g {
        for b in 0..g {
            let (terms, _) = voa.bracket(a, 0, b, 0);
            let (ma, mb) = (m.zero_mode_matrix(a), m.zero_mode_matrix(b));
            let (ab, ba) = (mul(&ma, &mb), mul(&mb, &ma));
            let mut expect = vec![vec![rat(0, 1); d]; d];
            for (c, _, coeff) in terms {
                let mc = m.zero_mode_matrix(c);
                for i in 0..d {
                    for j in 0..d {
                        expect[i][j] += &coeff * &mc[i][j];
                    }
                }
            }
            for i in 0..d {
                for j in 0..d {
                    if &ab[i][j] - &ba[i][j] != expect[i][j] {
                        result = Err(format!(
                            "bottom level is not a representation at ({}, {})",
                            voa.generators[a].symbol, voa.generators[b].symbol
                        ));
                    }
                }
            }
        }
    }
    report.push(format!("module {}: bottom-level representation", m.label()), result.is_ok(), result.err().unwrap_or_default());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voa::{preset, LieAlgebra};

    #[test]
    fn presets_pass() {
        for name in crate::voa::PRESET_NAMES {
            let p = preset(name).unwrap();
            let r = verify_presentation(&p.voa, p.module.as_ref(), 5, 1);
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn corrupted_structure_constant_reports_triple() {
        let mut lie = LieAlgebra::sl2();
        lie.brackets[0][2][1] = rat(2, 1);
        let voa = VoaPresentation::affine("broken".into(), lie, rat(1, 1));
        let r = verify_presentation(&voa, None, 3, 1);
        assert!(!r.passed());
        let f = r.failures().next().unwrap();
        assert!(f.detail.contains("(e, f, h)") || f.detail.contains("(f, e, h)"), "{}", f.detail);
    }

    #[test]
    fn bad_bottom_level_is_reported() {
        let voa = preset("affine-sl2").unwrap().voa;
        let mut m = ModulePresentation::sl2_weyl(&voa, 1).unwrap();
        m.zero_modes[1][0] = vec![(0, rat(3, 1))];
        let r = verify_presentation(&voa, Some(&m), 3, 1);
        assert!(r.failures().any(|c| c.name.contains("bottom-level")));
    }
}
