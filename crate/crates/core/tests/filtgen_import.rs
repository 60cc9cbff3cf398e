//! Truncations of A(V) and A(M) fed through the generic filtered machinery.

use std::sync::Arc;

use avfilt::bimod::{am_truncation, AMTruncation, ModuleContext};
use avfilt::filtgen::*;
use avfilt::voa::{parse_module_spec, preset};
use avfilt::zhu::ZhuAlgebra;

fn setup(voa: &str, modules: &[&str], n: i64) -> (Arc<ZhuAlgebra>, Vec<AMTruncation>) {
    let voa = Arc::new(preset(voa).unwrap().voa);
    let ctxs: Vec<_> = modules
        .iter()
        .map(|s| {
            let m = parse_module_spec(&voa, s).unwrap();
            Arc::new(ModuleContext::new(voa.clone(), Arc::new(m), n + 4).unwrap())
        })
        .collect();
    let zhu = Arc::new(ZhuAlgebra::new(ctxs[0].voa_space().clone(), n, 2).unwrap());
    let ams = ctxs.into_iter().map(|c| am_truncation(c, zhu.clone(), n, 2).unwrap()).collect();
    (zhu, ams)
}

#[test]
fn heisenberg_fock_pair_swap_at_level_three() {
    let (zhu, ams) = setup("heisenberg-1", &["fock:1", "fock:2"], 3);
    let rep = verify_imported_swap(&zhu, &ams[0], &ams[1], 3).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    let r = zhu_truncation(&zhu, 3).unwrap();
    assert_eq!(r.filtration().graded_dims(), vec![1, 1, 1, 1]);
    assert_eq!(r.truncation(), Some(3));
    let m = am_bimodule(&ams[0], &r).unwrap();
    let n = am_bimodule(&ams[1], &r).unwrap();
    let t = tensor_filtration(&r, &m, &n).unwrap();
    // Over a polynomial ring in one variable, Q[x] ⊗ Q[x] ≅ Q[x]: one class per level.
    assert_eq!(t.filtration().graded_dims(), vec![1, 1, 1, 1]);
}

#[test]
fn imported_gr_matches_direct_computations() {
    let (zhu, ams) = setup("virasoro", &["verma:1/2"], 4);
    let r = zhu_truncation(&zhu, 4).unwrap();
    assert!(gr_ring_matches(&zhu, &r).unwrap());
    assert_eq!(r.filtration().graded_dims(), vec![1, 0, 1, 0, 1]);
    let m = am_bimodule(&ams[0], &r).unwrap();
    assert!(gr_module_matches(&ams[0], &r, &m).unwrap());
}

#[test]
fn truncation_outside_the_computed_range_is_refused() {
    let (zhu, _) = setup("heisenberg-1", &["fock:1"], 2);
    assert!(zhu_truncation(&zhu, 3).is_err());
    assert!(lift_swap_iso(
        &zhu_truncation(&zhu, 2).unwrap(),
        &FiniteFilteredBimodule::regular(&zhu_truncation(&zhu, 2).unwrap()).unwrap(),
        &FiniteFilteredBimodule::regular(&zhu_truncation(&zhu, 2).unwrap()).unwrap(),
        &[],
        &[],
    )
    .is_err());
}
