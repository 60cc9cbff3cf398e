//! Lifting the graded swap `gr(M ⊗ N) ≅ gr(N ⊗ M)` to a filtered bimodule
//! isomorphism through a section of the free cover of `M ⊗ N`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactlin::{rref, Rat, SparseVec};

use super::filtration::{apply_columns, rat_rows};
use super::linsys::{LinearSystem, Solution};
use super::structures::{FiniteFilteredAlgebra, FiniteFilteredModule};
use super::tensor::{check_tensor_generation, gr_swap_between, tensor_filtration, FilteredTensor, GenerationLevel};
use super::FiltError;

/// Dimension of the kernel of the trace form `(x, y) ↦ tr(L_{xy})`, which
/// is the Jacobson radical in characteristic zero.
pub fn radical_dim(r: &FiniteFilteredAlgebra) -> Result<usize, FiltError> {
    if r.truncation().is_some() {
        return Err(FiltError::Precondition("trace form needs the full multiplication".into()));
    }
    let d = r.dim();
    let trace = |z: &SparseVec| -> Rat {
        let mut t = Rat::zero();
        for k in 0..d {
            t += &r.mul(z, &SparseVec::unit(d, k)).expect("untruncated").get(k);
        }
        t
    };
    let rows: Vec<SparseVec> = (0..d)
        .map(|i| {
            let ei = SparseVec::unit(d, i);
            SparseVec::from_dense(
                &(0..d).map(|j| trace(&r.mul(&ei, &SparseVec::unit(d, j)).expect("untruncated"))).collect::<Vec<_>>(),
            )
        })
        .collect();
    Ok(d - rref(d, &rows)?.rank())
}

pub fn is_semisimple(r: &FiniteFilteredAlgebra) -> Result<bool, FiltError> {
    Ok(radical_dim(r)? == 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftedIso {
    /// Rows of `θ` in the tensor bases of `M ⊗ N` and `N ⊗ M`.
    pub theta: Vec<Vec<String>>,
    pub bimodule_map: bool,
    pub filtration_preserving: bool,
    pub strict: bool,
    pub invertible: bool,
    pub graded_is_swap: bool,
    pub section_freedom: usize,
}

impl LiftedIso {
    pub fn verified(&self) -> bool {
        self.bimodule_map && self.filtration_preserving && self.strict && self.invertible && self.graded_is_swap
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    /// Whether `R ⊗ R^op`-linear sections exist at all, ignoring levels.
    pub sections_exist: bool,
    pub section_space_dim: usize,
    pub certificate_terms: usize,
    pub certificate_verified: bool,
    /// Least `p` such that a section sends every generator into level `p`.
    pub least_level: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub enum LiftOutcome {
    Lifted(LiftedIso),
    Obstructed(Obstruction),
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftSwapReport {
    pub left: String,
    pub right: String,
    pub tensor_dim: usize,
    pub generation: Vec<GenerationLevel>,
    pub graded_swap_verified: bool,
    pub outcome: LiftOutcome,
}

impl LiftSwapReport {
    pub fn lifted(&self) -> Option<&LiftedIso> {
        match &self.outcome {
            LiftOutcome::Lifted(l) => Some(l),
            LiftOutcome::Obstructed(_) => None,
        }
    }
}

struct Cover {
    free: FiniteFilteredModule,
    /// `f` and `h` as columns indexed by the free basis.
    f: Vec<SparseVec>,
    h: Vec<SparseVec>,
    /// The classes `u_i ⊗ v_j` in `M ⊗ N`.
    targets: Vec<SparseVec>,
}

fn cover(t1: &FilteredTensor, t2: &FilteredTensor, u: &[SparseVec], v: &[SparseVec]) -> Result<Cover, FiltError> {
    let re = &t1.envelope.algebra;
    let e = re.dim();
    let mut targets = Vec::new();
    let mut swapped = Vec::new();
    for ui in u {
        for vj in v {
            targets.push(t1.class_of(ui, vj)?);
            swapped.push(t2.class_of(vj, ui)?);
        }
    }
    let free = FiniteFilteredModule::free(re, &vec![0; targets.len()])?;
    let mut f = Vec::with_capacity(free.dim());
    let mut h = Vec::with_capacity(free.dim());
    for c in 0..free.dim() {
        let x = SparseVec::unit(e, c % e);
        f.push(t1.act(&x, &targets[c / e]).expect("untruncated"));
        h.push(t2.act(&x, &swapped[c / e]).expect("untruncated"));
    }
    Ok(Cover { free, f, h, targets })
}

/// Unknown `G: M ⊗ N → F`, stored column by column.
fn section_system(t1: &FilteredTensor, c: &Cover) -> Result<LinearSystem, FiltError> {
    let (df, dt) = (c.free.dim(), t1.dim());
    let nv = df * dt;
    let var = |row: usize, col: usize| col * df + row;
    let mut sys = LinearSystem::new(nv);
    // f ∘ G = id
    for col in 0..dt {
        for i in 0..dt {
            let mut eq = SparseVec::zero(nv);
            for (row, fc) in c.f.iter().enumerate() {
                let a = fc.get(i);
                if !a.is_zero() {
                    eq.add_scaled(&a, &SparseVec::unit(nv, var(row, col)));
                }
            }
            sys.push(eq, if i == col { Rat::one() } else { Rat::zero() })?;
        }
    }
    // G(x·t) = x·G(t)
    let re = &t1.envelope.algebra;
    for k in 0..re.dim() {
        let x = SparseVec::unit(re.dim(), k);
        let on_free: Vec<SparseVec> =
            (0..df).map(|r| c.free.act(&x, &SparseVec::unit(df, r)).expect("untruncated")).collect();
        for col in 0..dt {
            let xt = t1.act(&x, &SparseVec::unit(dt, col)).expect("untruncated");
            for out in 0..df {
                let mut eq = SparseVec::zero(nv);
                for (c2, a) in xt.entries() {
                    eq.add_scaled(a, &SparseVec::unit(nv, var(out, *c2)));
                }
                for (r, img) in on_free.iter().enumerate() {
                    let a = img.get(out);
                    if !a.is_zero() {
                        eq.add_scaled(&-a, &SparseVec::unit(nv, var(r, col)));
                    }
                }
                sys.push(eq, Rat::zero())?;
            }
        }
    }
    Ok(sys)
}

/// `G(u_i ⊗ v_j) ∈ F_p F` for every generator pair.
fn level_constraints(sys: &mut LinearSystem, t1: &FilteredTensor, c: &Cover, p: usize) -> Result<(), FiltError> {
    let (df, dt) = (c.free.dim(), t1.dim());
    let nv = df * dt;
    let levels = c.free.basis_levels();
    for t in &c.targets {
        for row in (0..df).filter(|&r| levels[r] > p) {
            let mut eq = SparseVec::zero(nv);
            for (col, a) in t.entries() {
                eq.add_scaled(a, &SparseVec::unit(nv, col * df + row));
            }
            sys.push(eq, Rat::zero())?;
        }
    }
    Ok(())
}

/// Builds `θ = h ∘ g` where `g` is an `R ⊗ R^op`-linear section of the
/// free cover `f: F → M ⊗ N` sending each `u_i ⊗ v_j` into level 0, and
/// `h: F → N ⊗ M` sends generator `(i, j)` to `v_j ⊗ u_i`. The `u_i`, `v_j`
/// must lie in level 0 and generate both filtrations. When no such section
/// exists the inconsistency certificate is checked and returned instead.
pub fn lift_swap_iso(
    r: &FiniteFilteredAlgebra,
    m: &super::structures::FiniteFilteredBimodule,
    n: &super::structures::FiniteFilteredBimodule,
    u: &[SparseVec],
    v: &[SparseVec],
) -> Result<LiftSwapReport, FiltError> {
    if r.truncation().is_some() {
        return Err(FiltError::Precondition("lifting needs an untruncated algebra".into()));
    }
    let rad = radical_dim(r)?;
    if rad != 0 {
        return Err(FiltError::Precondition(format!("{} is not semisimple: radical of dimension {rad}", r.name())));
    }
    for (x, b) in u.iter().map(|x| (x, m)).chain(v.iter().map(|x| (x, n))) {
        if !b.filtration().level(0).contains(x)? {
            return Err(FiltError::Precondition(format!("generator {} is not in level 0", b.format_vec(x))));
        }
    }
    let t1 = tensor_filtration(r, m, n)?;
    let t2 = tensor_filtration(r, n, m)?;
    let with_levels = |xs: &[SparseVec]| xs.iter().map(|x| (x.clone(), 0)).collect::<Vec<_>>();
    let generation = check_tensor_generation(&t1, &with_levels(u), &with_levels(v))?;
    if generation.iter().any(|g| g.spanned != g.level_dim) {
        return Err(FiltError::Precondition("generators do not generate the tensor filtration".into()));
    }
    let swap = gr_swap_between(r, &t1, &t2)?;
    let c = cover(&t1, &t2, u, v)?;
    let base = section_system(&t1, &c)?;
    let mut report = LiftSwapReport {
        left: m.name().to_string(),
        right: n.name().to_string(),
        tensor_dim: t1.dim(),
        generation,
        graded_swap_verified: swap.verified(),
        outcome: LiftOutcome::Obstructed(Obstruction {
            sections_exist: false,
            section_space_dim: 0,
            certificate_terms: 0,
            certificate_verified: false,
            least_level: None,
        }),
    };
    let freedom = match base.solve()? {
        Solution::Solved { kernel, .. } => kernel.len(),
        Solution::Inconsistent { certificate } => {
            report.outcome = LiftOutcome::Obstructed(Obstruction {
                sections_exist: false,
                section_space_dim: 0,
                certificate_terms: certificate.iter().filter(|x| !x.is_zero()).count(),
                certificate_verified: base.check_certificate(&certificate),
                least_level: None,
            });
            return Ok(report);
        }
    };
    let mut at_zero = base.clone();
    level_constraints(&mut at_zero, &t1, &c, 0)?;
    let particular = match at_zero.solve()? {
        Solution::Solved { particular, .. } => particular,
        Solution::Inconsistent { certificate } => {
            let top = c.free.filtration().top();
            let mut least = None;
            for p in 1..=top {
                let mut sys = base.clone();
                level_constraints(&mut sys, &t1, &c, p)?;
                if matches!(sys.solve()?, Solution::Solved { .. }) {
                    least = Some(p);
                    break;
                }
            }
            report.outcome = LiftOutcome::Obstructed(Obstruction {
                sections_exist: true,
                section_space_dim: freedom,
                certificate_terms: certificate.iter().filter(|x| !x.is_zero()).count(),
                certificate_verified: at_zero.check_certificate(&certificate),
                least_level: least,
            });
            return Ok(report);
        }
    };
    let (df, d1, d2) = (c.free.dim(), t1.dim(), t2.dim());
    let g: Vec<SparseVec> = (0..d1).map(|col| particular.slice(col * df..(col + 1) * df)).collect();
    let theta: Vec<SparseVec> = g.iter().map(|gc| apply_columns(&c.h, gc, d2)).collect();
    report.outcome = LiftOutcome::Lifted(check_theta(&t1, &t2, &theta, &swap.maps, freedom)?);
    Ok(report)
}

fn check_theta(
    t1: &FilteredTensor,
    t2: &FilteredTensor,
    theta: &[SparseVec],
    swap: &[Vec<SparseVec>],
    freedom: usize,
) -> Result<LiftedIso, FiltError> {
    let (d1, d2) = (t1.dim(), t2.dim());
    let re = &t1.envelope.algebra;
    let mut bimodule_map = true;
    for k in 0..re.dim() {
        let x = SparseVec::unit(re.dim(), k);
        for (col, img) in theta.iter().enumerate() {
            let lhs = apply_columns(theta, &t1.act(&x, &SparseVec::unit(d1, col)).expect("untruncated"), d2);
            bimodule_map &= lhs == t2.act(&x, img).expect("untruncated");
        }
    }
    let (f1, f2) = (t1.filtration(), t2.filtration());
    let (mut preserving, mut strict) = (true, true);
    for p in 0..=f1.top().max(f2.top()) {
        let images: Vec<SparseVec> = f1.level(p as i64).rows().iter().map(|x| apply_columns(theta, x, d2)).collect();
        let span = rref(d2, &images)?;
        preserving &= span.is_subspace_of(f2.level(p as i64))?;
        strict &= span.rank() == f2.level(p as i64).rank();
    }
    let invertible = d1 == d2 && rref(d2, theta)?.rank() == d2;
    let mut graded_is_swap = preserving && !swap.is_empty();
    if graded_is_swap {
        for (deg, cols) in swap.iter().enumerate() {
            let g1 = f1.graded_dim(deg as i64);
            if cols.len() != g1 {
                graded_is_swap = false;
                break;
            }
            for (i, col) in cols.iter().enumerate() {
                let img = apply_columns(theta, &f1.lift(deg as i64, &SparseVec::unit(g1, i)), d2);
                graded_is_swap &= &f2.class(deg as i64, &img)? == col;
            }
        }
    }
    let rows = (0..d2)
        .map(|i| rat_rows(&SparseVec::from_dense(&theta.iter().map(|c| c.get(i)).collect::<Vec<_>>())))
        .collect();
    Ok(LiftedIso {
        theta: rows,
        bimodule_map,
        filtration_preserving: preserving,
        strict,
        invertible,
        graded_is_swap,
        section_freedom: freedom,
    })
}
