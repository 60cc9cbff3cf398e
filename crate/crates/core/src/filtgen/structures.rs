//! Finite-dimensional filtered algebras, modules and bimodules, given by
//! structure constants and checked at construction.
//!
//! Algebras carry a basis adapted to the filtration, so each basis element
//! has a level. A truncated algebra only knows products whose levels add up
//! to at most the truncation; modules over it must use adapted bases too, and
//! the same rule decides which action entries exist.


use crate::exactlin::SparseVec;

use super::filtration::{apply_columns, Filtration};
use super::FiltError;

/// Row `i`, column `j`: the product of basis elements `i` and `j`, if known.
pub type Table = Vec<Vec<Option<SparseVec>>>;

#[derive(Clone, Debug)]
pub struct FiniteFilteredAlgebra {
    name: String,
    names: Vec<String>,
    levels: Vec<usize>,
    table: Table,
    identity: SparseVec,
    truncation: Option<usize>,
    filtration: Filtration,
}

fn support_level(levels: &[usize], x: &SparseVec) -> Option<usize> {
    x.entries().iter().map(|(i, _)| levels[*i]).max()
}

impl FiniteFilteredAlgebra {
    pub fn new(
        name: impl Into<String>,
        names: Vec<String>,
        levels: Vec<usize>,
        table: Vec<Vec<SparseVec>>,
        identity: SparseVec,
    ) -> Result<Self, FiltError> {
        let table = table.into_iter().map(|row| row.into_iter().map(Some).collect()).collect();
        Self::from_parts(name.into(), names, levels, table, identity, None)
    }

    /// An algebra known only up to level `truncation`.
    pub fn truncated(
        name: impl Into<String>,
        names: Vec<String>,
        levels: Vec<usize>,
        table: Table,
        identity: SparseVec,
        truncation: usize,
    ) -> Result<Self, FiltError> {
        Self::from_parts(name.into(), names, levels, table, identity, Some(truncation))
    }

    fn from_parts(
        name: String,
        names: Vec<String>,
        levels: Vec<usize>,
        table: Table,
        identity: SparseVec,
        truncation: Option<usize>,
    ) -> Result<Self, FiltError> {
        let d = names.len();
        if levels.len() != d || table.len() != d || table.iter().any(|r| r.len() != d) {
            return Err(FiltError::Axiom(format!("{name}: basis, levels and table sizes differ")));
        }
        if d == 0 {
            return Err(FiltError::Axiom(format!("{name}: the zero ring has no identity in this setting")));
        }
        identity.check_dim(d)?;
        let filtration = Filtration::from_basis_levels(&levels);
        let alg = FiniteFilteredAlgebra { name, names, levels, table, identity, truncation, filtration };
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<(), FiltError> {
        let d = self.dim();
        let name = &self.name;
        if let Some(n) = self.truncation {
            if let Some(i) = (0..d).find(|&i| self.levels[i] > n) {
                return Err(FiltError::Axiom(format!("{name}: {} lies above the truncation", self.names[i])));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let want = self.defined(self.levels[i] + self.levels[j]);
                match &self.table[i][j] {
                    Some(p) => {
                        if !want {
                            return Err(FiltError::Axiom(format!(
                                "{name}: product {}·{} is beyond the truncation",
                                self.names[i], self.names[j]
                            )));
                        }
                        p.check_dim(d)?;
                        if support_level(&self.levels, p).is_some_and(|l| l > self.levels[i] + self.levels[j]) {
                            return Err(FiltError::Axiom(format!(
                                "{name}: {}·{} leaves F_{}",
                                self.names[i],
                                self.names[j],
                                self.levels[i] + self.levels[j]
                            )));
                        }
                    }
                    None if want => {
                        return Err(FiltError::Axiom(format!(
                            "{name}: product {}·{} is missing",
                            self.names[i], self.names[j]
                        )))
                    }
                    None => {}
                }
            }
        }
        if support_level(&self.levels, &self.identity).is_some_and(|l| l > 0) || self.identity.is_zero() {
            return Err(FiltError::Axiom(format!("{name}: the identity does not lie in F_0")));
        }
        for i in 0..d {
            let e = SparseVec::unit(d, i);
            if self.mul(&self.identity, &e).as_ref() != Some(&e) || self.mul(&e, &self.identity).as_ref() != Some(&e) {
                return Err(FiltError::Axiom(format!("{name}: identity fails on {}", self.names[i])));
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if !self.defined(self.levels[i] + self.levels[j] + self.levels[k]) {
                        continue;
                    }
                    let ij = self.table[i][j].as_ref().expect("defined");
                    let jk = self.table[j][k].as_ref().expect("defined");
                    let l = self.mul(ij, &SparseVec::unit(d, k));
                    let r = self.mul(&SparseVec::unit(d, i), jk);
                    if l != r {
                        return Err(FiltError::Axiom(format!(
                            "{name}: not associative on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> usize {
        self.levels[i]
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn identity(&self) -> &SparseVec {
        &self.identity
    }

    /// Whether products of total level `total` are known.
    pub fn defined(&self, total: usize) -> bool {
        self.truncation.map_or(true, |n| total <= n)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.table[i][j].as_ref()
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> Option<SparseVec> {
        let mut out = SparseVec::zero(self.dim());
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                out.add_scaled(&(a * b), self.table[*i][*j].as_ref()?);
            }
        }
        Some(out)
    }

    /// Level of a vector read off the adapted basis.
    pub fn vec_level(&self, x: &SparseVec) -> Option<usize> {
        support_level(&self.levels, x)
    }

    pub fn format_vec(&self, x: &SparseVec) -> String {
        format_combination(&self.names, x)
    }
}

pub(crate) fn format_combination(names: &[String], x: &SparseVec) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in x.entries().iter().enumerate() {
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if k > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(&names[*i]);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Module axioms for one action table: unit, associativity and
/// compatibility with the filtration.
fn check_action(
    r: &FiniteFilteredAlgebra,
    label: &str,
    filtration: &Filtration,
    basis_levels: &[usize],
    table: &Table,
    side: Side,
) -> Result<(), FiltError> {
    let d = r.dim();
    let m = filtration.dim();
    if table.len() != d || table.iter().any(|row| row.len() != m) {
        return Err(FiltError::Axiom(format!("{label}: action table has the wrong shape")));
    }
    if r.truncation.is_some() && filtration.basis_levels().is_none() {
        return Err(FiltError::Axiom(format!("{label}: modules over a truncated algebra need an adapted basis")));
    }
    for a in 0..d {
        for v in 0..m {
            let want = r.defined(r.levels[a] + basis_levels[v]);
            match &table[a][v] {
                Some(x) => {
                    x.check_dim(m)?;
                    if !want {
                        return Err(FiltError::Axiom(format!("{label}: action entry beyond the truncation")));
                    }
                }
                None if want => return Err(FiltError::Axiom(format!("{label}: action entry missing"))),
                None => {}
            }
        }
    }
    let act = |a: &SparseVec, x: &SparseVec| act_with(table, m, a, x);
    for v in 0..m {
        let e = SparseVec::unit(m, v);
        if act(&r.identity, &e).as_ref() != Some(&e) {
            return Err(FiltError::Axiom(format!("{label}: the identity does not act trivially")));
        }
    }
    for a in 0..d {
        for b in 0..d {
            for v in 0..m {
                if !r.defined(r.levels[a] + r.levels[b] + basis_levels[v]) {
                    continue;
                }
                let ea = SparseVec::unit(d, a);
                let eb = SparseVec::unit(d, b);
                let ev = SparseVec::unit(m, v);
                let (lhs, rhs) = match side {
                    Side::Left => (
                        act(&r.mul(&ea, &eb).expect("defined"), &ev),
                        act(&ea, &act(&eb, &ev).expect("defined")),
                    ),
                    Side::Right => (
                        act(&r.mul(&ea, &eb).expect("defined"), &ev),
                        act(&eb, &act(&ea, &ev).expect("defined")),
                    ),
                };
                if lhs != rhs {
                    return Err(FiltError::Axiom(format!(
                        "{label}: action is not associative on ({}, {}, basis {v})",
                        r.names[a], r.names[b]
                    )));
                }
            }
        }
    }
    for a in 0..d {
        for p in 0..=filtration.top() {
            let target = r.levels[a] + p;
            if !r.defined(target) {
                continue;
            }
            for x in filtration.level(p as i64).rows() {
                let y = act(&SparseVec::unit(d, a), x).expect("defined");
                if !filtration.level(target as i64).contains(&y)? {
                    return Err(FiltError::Axiom(format!(
                        "{label}: {} maps F_{p} outside F_{target}",
                        r.names[a]
                    )));
                }
            }
        }
    }
    Ok(())
}

fn act_with(table: &Table, m: usize, a: &SparseVec, x: &SparseVec) -> Option<SparseVec> {
    let mut out = SparseVec::zero(m);
    for (i, c) in a.entries() {
        for (v, e) in x.entries() {
            out.add_scaled(&(c * e), table[*i][*v].as_ref()?);
        }
    }
    Some(out)
}

fn basis_levels_of(f: &Filtration) -> Result<Vec<usize>, FiltError> {
    (0..f.dim())
        .map(|i| Ok(f.level_of(&SparseVec::unit(f.dim(), i))?.expect("unit vector is nonzero")))
        .collect()
}

/// A filtered left module.
#[derive(Clone, Debug)]
pub struct FiniteFilteredModule {
    name: String,
    base: String,
    names: Vec<String>,
    action: Table,
    filtration: Filtration,
    basis_levels: Vec<usize>,
    truncation: Option<usize>,
}

impl FiniteFilteredModule {
    pub fn new(
        r: &FiniteFilteredAlgebra,
        name: impl Into<String>,
        names: Vec<String>,
        action: Table,
        filtration: Filtration,
    ) -> Result<Self, FiltError> {
        let name = name.into();
        if names.len() != filtration.dim() {
            return Err(FiltError::Axiom(format!("{name}: basis and filtration sizes differ")));
        }
        let basis_levels = basis_levels_of(&filtration)?;
        check_action(r, &name, &filtration, &basis_levels, &action, Side::Left)?;
        Ok(FiniteFilteredModule {
            name,
            base: r.name.clone(),
            names,
            action,
            filtration,
            basis_levels,
            truncation: r.truncation,
        })
    }

    /// Builds the action table from a closure on basis indices.
    pub fn from_fn(
        r: &FiniteFilteredAlgebra,
        name: impl Into<String>,
        names: Vec<String>,
        filtration: Filtration,
        f: impl Fn(usize, usize) -> SparseVec,
    ) -> Result<Self, FiltError> {
        let levels = basis_levels_of(&filtration)?;
        let action = (0..r.dim())
            .map(|a| (0..names.len()).map(|v| r.defined(r.levels[a] + levels[v]).then(|| f(a, v))).collect())
            .collect();
        Self::new(r, name, names, action, filtration)
    }

    /// `R` acting on itself, with its own filtration.
    pub fn regular(r: &FiniteFilteredAlgebra) -> Result<Self, FiltError> {
        Self::new(r, format!("{} (regular)", r.name), r.names.clone(), r.table.clone(), r.filtration.clone())
    }

    /// `⊕_k R(-s_k)`: generator `k` at level `s_k`, so `x·g_k` has level
    /// `level(x) + s_k`.
    pub fn free(r: &FiniteFilteredAlgebra, shifts: &[usize]) -> Result<Self, FiltError> {
        let d = r.dim();
        let m = d * shifts.len();
        let mut names = Vec::with_capacity(m);
        let mut levels = Vec::with_capacity(m);
        for (k, s) in shifts.iter().enumerate() {
            for i in 0..d {
                names.push(format!("{}.g{k}", r.names[i]));
                levels.push(r.levels[i] + s);
            }
        }
        let filtration = Filtration::from_basis_levels(&levels);
        Self::from_fn(r, format!("free{shifts:?}"), names, filtration, |a, v| {
            let (k, i) = (v / d, v % d);
            r.table[a][i].as_ref().expect("defined").remapped(m, |j| k * d + j)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn basis_levels(&self) -> &[usize] {
        &self.basis_levels
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn action_table(&self) -> &Table {
        &self.action
    }

    /// `a · x` for `a` in the algebra and `x` in the module.
    pub fn act(&self, a: &SparseVec, x: &SparseVec) -> Option<SparseVec> {
        act_with(&self.action, self.dim(), a, x)
    }

    pub fn act_basis(&self, a: usize, x: &SparseVec) -> Option<SparseVec> {
        let mut out = SparseVec::zero(self.dim());
        for (v, c) in x.entries() {
            out.add_scaled(c, self.action[a][*v].as_ref()?);
        }
        Some(out)
    }

    pub fn format_vec(&self, x: &SparseVec) -> String {
        format_combination(&self.names, x)
    }

    /// The same module with `F_pM` replaced by `levels[p]`.
    pub fn refiltered(&self, r: &FiniteFilteredAlgebra, filtration: Filtration) -> Result<Self, FiltError> {
        Self::new(r, self.name.clone(), self.names.clone(), self.action.clone(), filtration)
    }
}

/// A filtered bimodule: commuting left and right actions, one filtration
/// compatible with both. `right[a][v]` holds `v · a`.
#[derive(Clone, Debug)]
pub struct FiniteFilteredBimodule {
    name: String,
    base: String,
    names: Vec<String>,
    left: Table,
    right: Table,
    filtration: Filtration,
    basis_levels: Vec<usize>,
    truncation: Option<usize>,
}

/// Columns of the adapted basis in ambient coordinates and the inverse
/// change of coordinates.
#[derive(Clone, Debug)]
pub struct AdaptedChange {
    pub to_ambient: Vec<SparseVec>,
    pub to_adapted: Vec<SparseVec>,
}

impl AdaptedChange {
    pub fn identity(dim: usize) -> Self {
        let id: Vec<SparseVec> = (0..dim).map(|i| SparseVec::unit(dim, i)).collect();
        AdaptedChange { to_ambient: id.clone(), to_adapted: id }
    }

    pub fn adapt(&self, x: &SparseVec) -> SparseVec {
        apply_columns(&self.to_adapted, x, self.to_adapted.len())
    }

    pub fn ambient(&self, x: &SparseVec) -> SparseVec {
        apply_columns(&self.to_ambient, x, self.to_ambient.len())
    }
}

impl FiniteFilteredBimodule {
    pub fn new(
        r: &FiniteFilteredAlgebra,
        name: impl Into<String>,
        names: Vec<String>,
        left: Table,
        right: Table,
        filtration: Filtration,
    ) -> Result<Self, FiltError> {
        let name = name.into();
        if names.len() != filtration.dim() {
            return Err(FiltError::Axiom(format!("{name}: basis and filtration sizes differ")));
        }
        let basis_levels = basis_levels_of(&filtration)?;
        check_action(r, &format!("{name} (left)"), &filtration, &basis_levels, &left, Side::Left)?;
        check_action(r, &format!("{name} (right)"), &filtration, &basis_levels, &right, Side::Right)?;
        let m = names.len();
        let d = r.dim();
        for a in 0..d {
            for b in 0..d {
                for v in 0..m {
                    if !r.defined(r.levels[a] + r.levels[b] + basis_levels[v]) {
                        continue;
                    }
                    let ea = SparseVec::unit(d, a);
                    let eb = SparseVec::unit(d, b);
                    let av = act_with(&left, m, &ea, &SparseVec::unit(m, v)).expect("defined");
                    let vb = act_with(&right, m, &eb, &SparseVec::unit(m, v)).expect("defined");
                    if act_with(&right, m, &eb, &av) != act_with(&left, m, &ea, &vb) {
                        return Err(FiltError::Axiom(format!(
                            "{name}: (a·v)·b differs from a·(v·b) for a = {}, b = {}, v = {}",
                            r.names[a], r.names[b], names[v]
                        )));
                    }
                }
            }
        }
        Ok(FiniteFilteredBimodule {
            name,
            base: r.name.clone(),
            names,
            left,
            right,
            filtration,
            basis_levels,
            truncation: r.truncation,
        })
    }

    pub fn from_fns(
        r: &FiniteFilteredAlgebra,
        name: impl Into<String>,
        names: Vec<String>,
        filtration: Filtration,
        left: impl Fn(usize, usize) -> SparseVec,
        right: impl Fn(usize, usize) -> SparseVec,
    ) -> Result<Self, FiltError> {
        let levels = basis_levels_of(&filtration)?;
        let build = |f: &dyn Fn(usize, usize) -> SparseVec| -> Table {
            (0..r.dim())
                .map(|a| (0..names.len()).map(|v| r.defined(r.levels[a] + levels[v]).then(|| f(a, v))).collect())
                .collect()
        };
        let (l, rt) = (build(&left), build(&right));
        Self::new(r, name, names, l, rt, filtration)
    }

    /// `R` as a bimodule over itself.
    pub fn regular(r: &FiniteFilteredAlgebra) -> Result<Self, FiltError> {
        let d = r.dim();
        let right = (0..d).map(|a| (0..d).map(|v| r.table[v][a].clone()).collect()).collect();
        Self::new(r, r.name.clone(), r.names.clone(), r.table.clone(), right, r.filtration.clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn basis_levels(&self) -> &[usize] {
        &self.basis_levels
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn left_table(&self) -> &Table {
        &self.left
    }

    pub fn right_table(&self) -> &Table {
        &self.right
    }

    pub fn left_act(&self, a: &SparseVec, x: &SparseVec) -> Option<SparseVec> {
        act_with(&self.left, self.dim(), a, x)
    }

    /// `x · a`.
    pub fn right_act(&self, x: &SparseVec, a: &SparseVec) -> Option<SparseVec> {
        act_with(&self.right, self.dim(), a, x)
    }

    pub fn left_module(&self, r: &FiniteFilteredAlgebra) -> Result<FiniteFilteredModule, FiltError> {
        FiniteFilteredModule::new(r, self.name.clone(), self.names.clone(), self.left.clone(), self.filtration.clone())
    }

    pub fn format_vec(&self, x: &SparseVec) -> String {
        format_combination(&self.names, x)
    }

    /// The same bimodule written in a basis adapted to its filtration, so
    /// that the filtration becomes a coordinate one.
    pub fn adapted(&self, r: &FiniteFilteredAlgebra) -> Result<(Self, AdaptedChange), FiltError> {
        if self.filtration.basis_levels().is_some() {
            return Ok((self.clone(), AdaptedChange::identity(self.dim())));
        }
        let m = self.dim();
        let (to_ambient, to_adapted) = self.filtration.adapted_change()?;
        let change = AdaptedChange { to_ambient, to_adapted };
        let levels: Vec<usize> = self.filtration.adapted_basis().iter().map(|(p, _)| *p).collect();
        let names = (0..m).map(|k| format!("{}[{k}]", self.name)).collect();
        let conj = |t: &Table| -> Table {
            t.iter()
                .map(|row| {
                    (0..m)
                        .map(|k| {
                            let mut out = SparseVec::zero(m);
                            for (v, c) in change.to_ambient[k].entries() {
                                out.add_scaled(c, row[*v].as_ref()?);
                            }
                            Some(change.adapt(&out))
                        })
                        .collect()
                })
                .collect()
        };
        let b = Self::new(
            r,
            self.name.clone(),
            names,
            conj(&self.left),
            conj(&self.right),
            Filtration::from_basis_levels(&levels),
        )?;
        Ok((b, change))
    }
}

/// `R ⊗ R^op` with `(a⊗b)(c⊗d) = ac ⊗ db` and level `level(a) + level(b)`.
/// For a truncated `R` only pairs within the truncation are kept.
#[derive(Clone, Debug)]
pub struct EnvelopingAlgebra {
    pub algebra: FiniteFilteredAlgebra,
    pub pairs: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    base_dim: usize,
}

impl EnvelopingAlgebra {
    pub fn new(r: &FiniteFilteredAlgebra) -> Result<Self, FiltError> {
        let d = r.dim();
        let mut pairs = Vec::new();
        let mut index = vec![None; d * d];
        for a in 0..d {
            for b in 0..d {
                if r.defined(r.levels[a] + r.levels[b]) {
                    index[a * d + b] = Some(pairs.len());
                    pairs.push((a, b));
                }
            }
        }
        let n = pairs.len();
        let names = pairs.iter().map(|&(a, b)| format!("{}(x){}", r.names[a], r.names[b])).collect();
        let levels: Vec<usize> = pairs.iter().map(|&(a, b)| r.levels[a] + r.levels[b]).collect();
        let pair_vec = |x: &SparseVec, y: &SparseVec| -> SparseVec {
            let mut out = SparseVec::zero(n);
            for (k, c) in x.entries() {
                for (l, e) in y.entries() {
                    let idx = index[k * d + l].expect("level stays within the truncation");
                    out.add_scaled(&(c * e), &SparseVec::unit(n, idx));
                }
            }
            out
        };
        let mut table: Table = vec![vec![None; n]; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for (j, &(c, e)) in pairs.iter().enumerate() {
                if !r.defined(levels[i] + levels[j]) {
                    continue;
                }
                let ac = r.table[a][c].as_ref().expect("defined");
                let eb = r.table[e][b].as_ref().expect("defined");
                table[i][j] = Some(pair_vec(ac, eb));
            }
        }
        let identity = pair_vec(&r.identity, &r.identity);
        let name = format!("{} (x) {}^op", r.name, r.name);
        let algebra = FiniteFilteredAlgebra::from_parts(name, names, levels, table, identity, r.truncation)?;
        Ok(EnvelopingAlgebra { algebra, pairs, index, base_dim: d })
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.index[a * self.base_dim + b]
    }
}
