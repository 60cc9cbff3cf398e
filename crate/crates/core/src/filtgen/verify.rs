//! Invariant suite over the built-in filtered instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bimod::AMTruncation;
use crate::exactlin::SparseVec;
use crate::report::Report;
use crate::zhu::ZhuAlgebra;

use super::graded::{check_ideal_map, gr_module, gr_ring};
use super::import::{am_bimodule, gr_module_matches, gr_ring_matches, zhu_truncation};
use super::hom::{compare_hom, filt_projective_check, gr_hom_map, hom_filtration_level, HomLevel};
use super::instances::{
    matrix_algebra, nonsplit_filtered_module, quadratic_field, scalars, split_algebra, split_pair_filtered,
    tensor_preset, truncated_polynomial, upper_triangular, TENSOR_PRESETS,
};
use super::lift::{lift_generators, random_lift_instance};
use super::section::{lift_swap_iso, radical_dim, LiftOutcome};
use super::structures::FiniteFilteredModule;
use super::tensor::gr_swap_iso;
use super::FiltError;

/// Instances whose swap is expected to be well defined, and the one where
/// the bimodules fail the symmetry the swap needs.
const SWAP_OK: [&str; 7] = ["scalars", "scalars-graded", "split", "split-simple", "triple", "quadratic", "split-filtered"];
const LIFTS: [&str; 4] = ["scalars", "split", "split-simple", "triple"];
const OBSTRUCTED: [&str; 2] = ["quadratic", "split-filtered"];

/// Runs the filtered-algebra checks. `samples` random modules are drawn
/// for the generator-lifting property.
pub fn verify_filtgen(seed: u64, samples: usize) -> Result<Report, FiltError> {
    let mut report = Report::new("filtered algebras and bimodules");
    let algebras = [
        scalars(),
        split_algebra(2),
        split_algebra(3),
        split_pair_filtered(),
        quadratic_field(2, 1),
        matrix_algebra(2),
        upper_triangular(),
        truncated_polynomial(3),
    ];
    report.pass("filtration axioms checked at construction", format!("{} algebras", algebras.len()));

    let mut dims_ok = true;
    for r in &algebras {
        let g = gr_ring(r)?;
        let gm = gr_module(r, &FiniteFilteredModule::regular(r)?)?;
        dims_ok &= g.dims == r.filtration().graded_dims() && g.dims.iter().sum::<usize>() == r.dim();
        dims_ok &= gm.dims.iter().sum::<usize>() == r.dim();
    }
    report.push("associated graded keeps the dimension", dims_ok, "");

    let t2 = upper_triangular();
    let g = gr_ring(&t2)?;
    let e12 = SparseVec::unit(1, 0);
    let square = g.multiply(1, &e12, 1, &e12).map(|v| v.is_zero()).unwrap_or(true);
    report.push(
        "graded triangular algebra has dims [2, 1] and nilpotent top",
        g.dims == [2, 1] && square,
        format!("dims {:?}", g.dims),
    );

    let left = check_ideal_map(&t2, false, 1, 2)?;
    report.push(
        "graded ideal map is strictly order preserving on left ideals",
        left.strictly_order_preserving && left.order_preserving,
        format!("{} ideals, {} comparable pairs", left.ideals, left.comparable_pairs),
    );
    report.push(
        "graded ideal map is injective on left ideals",
        left.injective,
        left.injectivity_witness.map(|(a, b)| format!("{a} and {b} have the same graded ideal")).unwrap_or_default(),
    );
    let two = check_ideal_map(&t2, true, 1, 2)?;
    report.push(
        "graded ideal map is injective and strict on two-sided ideals",
        two.injective && two.strictly_order_preserving,
        format!("{} ideals", two.ideals),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut held, mut bad) = (0, 0);
    for _ in 0..samples {
        let inst = random_lift_instance(&mut rng, 8)?;
        let rep = lift_generators(&inst.algebra, &inst.module, &inst.generators)?;
        if rep.hypothesis {
            held += 1;
            bad += usize::from(rep.conclusion != Some(true));
        }
    }
    report.push(
        "generators of the graded module lift to every level",
        bad == 0,
        format!("{samples} random modules, hypothesis held in {held}, counterexamples {bad}"),
    );

    for name in TENSOR_PRESETS {
        let inst = tensor_preset(name)?;
        let swap = gr_swap_iso(&inst.algebra, &inst.left, &inst.right)?;
        if SWAP_OK.contains(&name) {
            report.push(
                format!("graded swap on {name}: well defined, equivariant, involutive"),
                swap.verified(),
                format!("graded dims {:?}", swap.degrees.iter().map(|d| d.source_dim).collect::<Vec<_>>()),
            );
        } else {
            let detail = match &swap.witness {
                Some(w) => format!("degree {} relation {:?}", w.degree, w.relation),
                None => "no witness".into(),
            };
            report.push(format!("graded swap on {name} fails with a witness relation"), swap.witness.is_some(), detail);
        }
    }

    for name in LIFTS.iter().chain(&OBSTRUCTED) {
        let inst = tensor_preset(name)?;
        let rep =
            lift_swap_iso(&inst.algebra, &inst.left, &inst.right, &inst.left_generators, &inst.right_generators)?;
        match (&rep.outcome, LIFTS.contains(name)) {
            (LiftOutcome::Lifted(l), true) => report.push(
                format!("swap lifts to a filtered isomorphism on {name}"),
                l.verified(),
                format!("theta {:?}", l.theta),
            ),
            (LiftOutcome::Obstructed(o), false) => report.push(
                format!("level-0 section is certified impossible on {name}"),
                o.sections_exist && o.certificate_verified,
                format!("sections need level {:?}", o.least_level),
            ),
            (LiftOutcome::Lifted(_), false) => report.fail(format!("expected obstruction on {name}"), "section found"),
            (LiftOutcome::Obstructed(_), true) => report.fail(format!("swap lifts on {name}"), "no level-0 section"),
        }
    }
    report.push(
        "semisimplicity test separates the examples",
        radical_dim(&t2)? == 1 && radical_dim(&truncated_polynomial(3))? == 2 && radical_dim(&matrix_algebra(2))? == 0,
        "",
    );

    let m = FiniteFilteredModule::regular(&t2)?;
    let id: Vec<SparseVec> = (0..3).map(|i| SparseVec::unit(3, i)).collect();
    let gr_id = gr_hom_map(&t2, &m, &m, &id, 0)?;
    let gr_ok = gr_id.blocks.iter().all(|b| b.columns.iter().enumerate().all(|(i, c)| c == &SparseVec::unit(c.dim(), i)));
    report.push(
        "identity has level 0 and induces the identity",
        hom_filtration_level(&t2, &m, &m, &id)? == HomLevel::Level(0) && gr_ok,
        "",
    );
    let free = FiniteFilteredModule::free(&t2, &[0, 1])?;
    let mut equal = true;
    for p in -2..=2 {
        let c = compare_hom(&t2, &free, &m, p)?;
        equal &= c.filtered == c.graded;
    }
    report.push("filtered and graded Hom agree degreewise on a filt-free module", equal, "degrees -2..=2");

    let fp = filt_projective_check(&t2, &free)?;
    let (r, bad_p) = nonsplit_filtered_module();
    let np = filt_projective_check(&r, &bad_p)?;
    report.push(
        "filt-projectivity: free modules split, the pulled-down module does not",
        fp.filt_projective && !np.filt_projective && np.failing_degree.is_some() && np.certificate_verified,
        format!("failing degree {:?}", np.failing_degree),
    );
    Ok(report)
}

/// Imports `A(V)` and two `A(M)` truncations up to level `n`, compares
/// their associated graded objects with the direct computations, and
/// checks the graded swap on the tensor product.
pub fn verify_imported_swap(
    zhu: &ZhuAlgebra,
    left: &AMTruncation,
    right: &AMTruncation,
    n: i64,
) -> Result<Report, FiltError> {
    let mut report = Report::new(format!(
        "filtered tensor of {} and {} up to level {n}",
        left.context().label(),
        right.context().label()
    ));
    let r = zhu_truncation(zhu, n)?;
    report.push("imported A(V) has the graded products of A(V)", gr_ring_matches(zhu, &r)?, format!("dims {:?}", r.filtration().graded_dims()));
    let m = am_bimodule(left, &r)?;
    let k = am_bimodule(right, &r)?;
    for (am, b) in [(left, &m), (right, &k)] {
        report.push(
            format!("imported {} has the graded action of A(M)", am.context().label()),
            gr_module_matches(am, &r, b)?,
            format!("dims {:?}", b.filtration().graded_dims()),
        );
    }
    let certified = zhu.certified() && left.certified() && right.certified();
    report.push("truncations certified by stabilization", certified, "");
    let swap = gr_swap_iso(&r, &m, &k)?;
    let dims: Vec<usize> = swap.degrees.iter().map(|d| d.source_dim).collect();
    report.push("graded swap is well defined", swap.well_defined, format!("witness {:?}", swap.witness));
    report.push("graded commutation identities hold", swap.identity_failures == 0, format!("{} triples", swap.identity_checks));
    report.push("graded swap is a degreewise isomorphism", swap.isomorphism, format!("graded dims {dims:?}"));
    report.push("graded swap commutes with the action", swap.equivariant, "");
    report.push("graded swap is an involution", swap.involutive, "");
    Ok(report)
}
