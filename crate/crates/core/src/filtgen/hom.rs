//! Filtered and graded Hom spaces, the induced map on associated graded
//! modules, and filt-projectivity.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactlin::{Rat, SparseVec};

use super::filtration::{apply_columns, rat_rows};
use super::graded::gr_module;
use super::linsys::{LinearSystem, Solution};
use super::structures::{FiniteFilteredAlgebra, FiniteFilteredModule};
use super::FiltError;

/// The least `p` with `f(F_iM) ⊆ F_{i+p}N` for all `i`; the zero map lies
/// in every level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HomLevel {
    Zero,
    Level(i64),
}

fn untruncated(r: &FiniteFilteredAlgebra) -> Result<(), FiltError> {
    if r.truncation().is_some() {
        return Err(FiltError::Precondition("Hom spaces over truncated algebras are not supported".into()));
    }
    Ok(())
}

/// `f` is given by the images of the basis of `M`.
pub fn is_r_linear(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
    f: &[SparseVec],
) -> Result<bool, FiltError> {
    untruncated(r)?;
    if f.len() != m.dim() {
        return Err(FiltError::Precondition("map has the wrong number of columns".into()));
    }
    for a in 0..r.dim() {
        let ea = SparseVec::unit(r.dim(), a);
        for (v, fv) in f.iter().enumerate() {
            let lhs = apply_columns(f, &m.act(&ea, &SparseVec::unit(m.dim(), v)).expect("defined"), n.dim());
            if lhs != n.act(&ea, fv).expect("defined") {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn hom_filtration_level(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
    f: &[SparseVec],
) -> Result<HomLevel, FiltError> {
    if !is_r_linear(r, m, n, f)? {
        return Err(FiltError::Precondition("map is not R-linear".into()));
    }
    let mut best: Option<i64> = None;
    for i in 0..=m.filtration().top() {
        for x in m.filtration().level(i as i64).rows() {
            if let Some(l) = n.filtration().level_of(&apply_columns(f, x, n.dim()))? {
                let need = l as i64 - i as i64;
                best = Some(best.map_or(need, |b| b.max(need)));
            }
        }
    }
    Ok(best.map_or(HomLevel::Zero, HomLevel::Level))
}

#[derive(Clone, Debug, Serialize)]
pub struct GrHomBlock {
    pub source_degree: usize,
    pub target_degree: i64,
    /// Columns indexed by the graded basis of the source degree.
    #[serde(skip)]
    pub columns: Vec<SparseVec>,
}

/// The map `gr M → gr N` of degree `p` induced by `f`.
#[derive(Clone, Debug, Serialize)]
pub struct GradedHomSlice {
    pub degree: i64,
    pub blocks: Vec<GrHomBlock>,
    pub induced_zero: bool,
}

impl GradedHomSlice {
    /// Every stored block really maps degree `i` into degree `i + p`.
    pub fn degrees_consistent(&self) -> bool {
        self.blocks.iter().all(|b| b.target_degree == b.source_degree as i64 + self.degree)
    }
}

pub fn gr_hom_map(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
    f: &[SparseVec],
    p: i64,
) -> Result<GradedHomSlice, FiltError> {
    let level = hom_filtration_level(r, m, n, f)?;
    if matches!(level, HomLevel::Level(l) if l > p) {
        return Err(FiltError::Precondition(format!("map has level above {p}")));
    }
    let (fm, fn_) = (m.filtration(), n.filtration());
    let mut blocks = Vec::new();
    let mut zero = true;
    for i in 0..=fm.top() {
        let t = i as i64 + p;
        let columns = fm
            .reps(i as i64)
            .iter()
            .map(|x| fn_.class(t, &apply_columns(f, x, n.dim())))
            .collect::<Result<Vec<_>, _>>()?;
        zero &= columns.iter().all(SparseVec::is_zero);
        blocks.push(GrHomBlock { source_degree: i, target_degree: t, columns });
    }
    // A zero graded map forces the filtered map one level lower.
    if zero && matches!(level, HomLevel::Level(l) if l >= p) {
        return Err(FiltError::Invariant("induced map vanishes but the level did not drop".into()));
    }
    Ok(GradedHomSlice { degree: p, blocks, induced_zero: zero })
}

fn var(dn: usize, j: usize, k: usize) -> usize {
    k * dn + j
}

fn linearity_equations(
    sys: &mut LinearSystem,
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
) -> Result<(), FiltError> {
    let (dm, dn) = (m.dim(), n.dim());
    let nv = dm * dn;
    for a in 0..r.dim() {
        let ea = SparseVec::unit(r.dim(), a);
        let an: Vec<SparseVec> = (0..dn).map(|j| n.act(&ea, &SparseVec::unit(dn, j)).expect("defined")).collect();
        for v in 0..dm {
            let av = m.act(&ea, &SparseVec::unit(dm, v)).expect("defined");
            for i in 0..dn {
                let mut eq = SparseVec::zero(nv);
                for (k, c) in av.entries() {
                    eq.add_scaled(c, &SparseVec::unit(nv, var(dn, i, *k)));
                }
                for (j, col) in an.iter().enumerate() {
                    let c = col.get(i);
                    if !c.is_zero() {
                        eq.add_scaled(&-c, &SparseVec::unit(nv, var(dn, j, v)));
                    }
                }
                sys.push(eq, Rat::zero())?;
            }
        }
    }
    Ok(())
}

/// Equations forcing `f(F_iM) ⊆ F_{i+p}N` for all `i`.
fn level_equations(
    sys: &mut LinearSystem,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
    p: i64,
) -> Result<(), FiltError> {
    let (dm, dn) = (m.dim(), n.dim());
    let nv = dm * dn;
    for i in 0..=m.filtration().top() {
        let target = n.filtration().level(i as i64 + p);
        let reduced: Vec<SparseVec> =
            (0..dn).map(|j| target.reduce(&SparseVec::unit(dn, j))).collect::<Result<_, _>>()?;
        for x in m.filtration().level(i as i64).rows() {
            for c in 0..dn {
                let mut eq = SparseVec::zero(nv);
                for (k, xk) in x.entries() {
                    for (j, red) in reduced.iter().enumerate() {
                        let rc = red.get(c);
                        if !rc.is_zero() {
                            eq.add_scaled(&(xk * &rc), &SparseVec::unit(nv, var(dn, j, *k)));
                        }
                    }
                }
                sys.push(eq, Rat::zero())?;
            }
        }
    }
    Ok(())
}

fn solution_dim(sys: &LinearSystem) -> Result<usize, FiltError> {
    match sys.solve()? {
        Solution::Solved { kernel, .. } => Ok(kernel.len()),
        Solution::Inconsistent { .. } => Err(FiltError::Invariant("homogeneous system reported inconsistent".into())),
    }
}

/// A basis of `Hom_R(M, N)`, each map given by its columns.
pub fn hom_space(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
) -> Result<Vec<Vec<SparseVec>>, FiltError> {
    untruncated(r)?;
    let (dm, dn) = (m.dim(), n.dim());
    let mut sys = LinearSystem::new(dm * dn);
    linearity_equations(&mut sys, r, m, n)?;
    let kernel = match sys.solve()? {
        Solution::Solved { kernel, .. } => kernel,
        Solution::Inconsistent { .. } => unreachable!("homogeneous systems are consistent"),
    };
    Ok(kernel.into_iter().map(|k| (0..dm).map(|c| k.slice(c * dn..(c + 1) * dn)).collect()).collect())
}

/// `dim F_p HOM_R(M, N)`.
pub fn hom_level_dim(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
    p: i64,
) -> Result<usize, FiltError> {
    untruncated(r)?;
    let mut sys = LinearSystem::new(m.dim() * n.dim());
    linearity_equations(&mut sys, r, m, n)?;
    level_equations(&mut sys, m, n, p)?;
    solution_dim(&sys)
}

/// `dim HOM_{gr R}(gr M, gr N)_p`.
pub fn graded_hom_dim(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
    p: i64,
) -> Result<usize, FiltError> {
    untruncated(r)?;
    let (gm, gn) = (gr_module(r, m)?, gr_module(r, n)?);
    let gdims = r.filtration().graded_dims();
    let top_m = m.filtration().top();
    // One block per source degree i, of shape dim gr_{i+p}N × dim gr_iM.
    let mut offsets = Vec::with_capacity(top_m + 2);
    let mut total = 0;
    let tdim = |i: usize| -> usize {
        let t = i as i64 + p;
        if t < 0 {
            0
        } else {
            gn.dim(t as usize)
        }
    };
    for i in 0..=top_m {
        offsets.push(total);
        total += tdim(i) * gm.dim(i);
    }
    let block_var = |i: usize, row: usize, col: usize| offsets[i] + col * tdim(i) + row;
    let mut sys = LinearSystem::new(total);
    for q in 0..gdims.len() {
        for a in 0..gdims[q] {
            let ea = SparseVec::unit(gdims[q], a);
            for i in 0..=top_m {
                for x in 0..gm.dim(i) {
                    let ex = SparseVec::unit(gm.dim(i), x);
                    let t = i as i64 + p + q as i64;
                    if t < 0 || t as usize >= gn.dims.len() {
                        continue;
                    }
                    let t = t as usize;
                    let ax = gm.act(q, &ea, i, &ex).expect("untruncated");
                    for row in 0..gn.dim(t) {
                        let mut eq = SparseVec::zero(total);
                        // G_{i+q}(ā x̄)
                        if i + q <= top_m {
                            for (c, coef) in ax.entries() {
                                if row < tdim(i + q) {
                                    eq.add_scaled(coef, &SparseVec::unit(total, block_var(i + q, row, *c)));
                                }
                            }
                        }
                        // ā G_i(x̄)
                        let si = i as i64 + p;
                        if si >= 0 {
                            for srow in 0..tdim(i) {
                                let img = gn.act(q, &ea, si as usize, &SparseVec::unit(tdim(i), srow)).expect("untruncated");
                                let c = img.get(row);
                                if !c.is_zero() {
                                    eq.add_scaled(&-c, &SparseVec::unit(total, block_var(i, srow, x)));
                                }
                            }
                        }
                        sys.push(eq, Rat::zero())?;
                    }
                }
            }
        }
    }
    solution_dim(&sys)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomComparison {
    pub degree: i64,
    /// `dim F_p HOM / F_{p-1} HOM`.
    pub filtered: usize,
    /// `dim HOM_{gr R}(gr M, gr N)_p`.
    pub graded: usize,
}

pub fn compare_hom(
    r: &FiniteFilteredAlgebra,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
    p: i64,
) -> Result<HomComparison, FiltError> {
    let filtered = hom_level_dim(r, m, n, p)? - hom_level_dim(r, m, n, p - 1)?;
    Ok(HomComparison { degree: p, filtered, graded: graded_hom_dim(r, m, n, p)? })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectivityReport {
    pub module: String,
    pub generator_levels: Vec<usize>,
    /// Whether the surjection from the free module splits as modules at all.
    pub splits_as_modules: bool,
    pub filt_projective: bool,
    /// First level whose containment constraint makes the splitting
    /// impossible.
    pub failing_degree: Option<usize>,
    pub certificate_verified: bool,
    /// The splitting map `P → F` as rows of rationals.
    pub section: Option<Vec<Vec<String>>>,
}

/// Maps the filt-free module on an adapted basis of `P` (generator `k` in
/// the level of basis vector `k`) onto `P` and looks for an `R`-linear,
/// filtration-preserving section.
pub fn filt_projective_check(r: &FiniteFilteredAlgebra, p: &FiniteFilteredModule) -> Result<ProjectivityReport, FiltError> {
    untruncated(r)?;
    let basis = p.filtration().adapted_basis();
    let shifts: Vec<usize> = basis.iter().map(|(l, _)| *l).collect();
    let free = FiniteFilteredModule::free(r, &shifts)?;
    let d = r.dim();
    let (df, dp) = (free.dim(), p.dim());
    // π(e_i · g_k) = e_i · b_k.
    let pi: Vec<SparseVec> = (0..df)
        .map(|c| p.act(&SparseVec::unit(d, c % d), &basis[c / d].1).expect("defined"))
        .collect();
    let nv = dp * df;
    let mut sys = LinearSystem::new(nv);
    linearity_equations(&mut sys, r, p, &free)?;
    for c in 0..dp {
        for i in 0..dp {
            let mut eq = SparseVec::zero(nv);
            for (row, col) in pi.iter().enumerate() {
                let v = col.get(i);
                if !v.is_zero() {
                    eq.add_scaled(&v, &SparseVec::unit(nv, var(df, row, c)));
                }
            }
            sys.push(eq, if i == c { Rat::one() } else { Rat::zero() })?;
        }
    }
    let mut report = ProjectivityReport {
        module: p.name().to_string(),
        generator_levels: shifts,
        splits_as_modules: false,
        filt_projective: false,
        failing_degree: None,
        certificate_verified: false,
        section: None,
    };
    if let Solution::Inconsistent { certificate } = sys.solve()? {
        report.certificate_verified = sys.check_certificate(&certificate);
        return Ok(report);
    }
    report.splits_as_modules = true;
    for lvl in 0..=p.filtration().top() {
        // s(F_lvl P) ⊆ F_lvl F, one level at a time.
        let mut trial = sys.clone();
        level_equations_at(&mut trial, p, &free, lvl)?;
        match trial.solve()? {
            Solution::Inconsistent { certificate } => {
                report.failing_degree = Some(lvl);
                report.certificate_verified = trial.check_certificate(&certificate);
                return Ok(report);
            }
            Solution::Solved { .. } => sys = trial,
        }
    }
    if let Solution::Solved { particular, .. } = sys.solve()? {
        report.filt_projective = true;
        report.section = Some((0..df).map(|row| rat_rows(&SparseVec::from_dense(
            &(0..dp).map(|c| particular.get(var(df, row, c))).collect::<Vec<_>>(),
        ))).collect());
    }
    Ok(report)
}

fn level_equations_at(
    sys: &mut LinearSystem,
    m: &FiniteFilteredModule,
    n: &FiniteFilteredModule,
    i: usize,
) -> Result<(), FiltError> {
    let (dm, dn) = (m.dim(), n.dim());
    let nv = dm * dn;
    let target = n.filtration().level(i as i64);
    let reduced: Vec<SparseVec> = (0..dn).map(|j| target.reduce(&SparseVec::unit(dn, j))).collect::<Result<_, _>>()?;
    for x in m.filtration().level(i as i64).rows() {
        for c in 0..dn {
            let mut eq = SparseVec::zero(nv);
            for (k, xk) in x.entries() {
                for (j, red) in reduced.iter().enumerate() {
                    let rc = red.get(c);
                    if !rc.is_zero() {
                        eq.add_scaled(&(xk * &rc), &SparseVec::unit(nv, var(dn, j, *k)));
                    }
                }
            }
            sys.push(eq, Rat::zero())?;
        }
    }
    Ok(())
}
