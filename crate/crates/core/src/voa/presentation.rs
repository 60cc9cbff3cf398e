//! Presentations of the three universal families and their highest-weight
//! modules.

use num_traits::{One, Zero};

use crate::exactlin::{rat, Rat};

use super::VoaError;

/// One strong generator of the VOA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub symbol: String,
    /// Conformal weight; always at least 1.
    pub weight: i64,
    /// Index into the Lie algebra basis (affine) or Heisenberg rank.
    pub lie_index: Option<usize>,
}

/// A finite-dimensional Lie algebra with an invariant symmetric form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub basis: Vec<String>,
    /// `brackets[a][b][c]` is the coefficient of basis element `c` in `[a, b]`.
    pub brackets: Vec<Vec<Vec<Rat>>>,
    pub form: Vec<Vec<Rat>>,
}

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// sl_2 with basis `e, h, f` and the trace form normalized so that
    /// `(h|h) = 2`, `(e|f) = 1`.
    pub fn sl2() -> Self {
        let z = || vec![Rat::zero(); 3];
        let mut brackets = vec![vec![z(), z(), z()], vec![z(), z(), z()], vec![z(), z(), z()]];
        let (e, h, f) = (0, 1, 2);
        brackets[e][f][h] = rat(1, 1);
        brackets[f][e][h] = rat(-1, 1);
        brackets[h][e][e] = rat(2, 1);
        brackets[e][h][e] = rat(-2, 1);
        brackets[h][f][f] = rat(-2, 1);
        brackets[f][h][f] = rat(2, 1);
        let mut form = vec![z(), z(), z()];
        form[e][f] = rat(1, 1);
        form[f][e] = rat(1, 1);
        form[h][h] = rat(2, 1);
        LieAlgebra { basis: vec!["e".into(), "h".into(), "f".into()], brackets, form }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// Antisymmetry failures and Jacobi failures, as `(a, b, c)` triples.
    pub fn structure_violations(&self) -> Vec<(String, (usize, usize, usize))> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.brackets[a][b][c] != -self.brackets[b][a][c].clone() {
                        out.push(("antisymmetry".to_string(), (a, b, c)));
                    }
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0
                    let cyc = [(a, b, c), (b, c, a), (c, a, b)];
                    let mut total = vec![Rat::zero(); n];
                    for (x, y, z) in cyc {
                        for (m, coeff) in self.brackets[y][z].iter().enumerate() {
                            if coeff.is_zero() {
                                continue;
                            }
                            for (t, inner) in self.brackets[x][m].iter().enumerate() {
                                total[t] += coeff * inner;
                            }
                        }
                    }
                    if total.iter().any(|t| !t.is_zero()) {
                        out.push(("Jacobi".to_string(), (a, b, c)));
                    }
                }
            }
        }
        out
    }

    /// Symmetry and invariance `([a,b]|c) = (a|[b,c])` failures.
    pub fn form_violations(&self) -> Vec<(String, (usize, usize, usize))> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.form[a][b] != self.form[b][a] {
                    out.push(("form symmetry".to_string(), (a, b, b)));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs: Rat = (0..n).map(|m| &self.brackets[a][b][m] * &self.form[m][c]).sum();
                    let rhs: Rat = (0..n).map(|m| &self.form[a][m] * &self.brackets[b][c][m]).sum();
                    if lhs != rhs {
                        out.push(("form invariance".to_string(), (a, b, c)));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Rank given by the Gram matrix size.
    Heisenberg { gram: Vec<Vec<Rat>>, level: Rat },
    Virasoro { central_charge: Rat },
    Affine { lie: LieAlgebra, level: Rat },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Heisenberg { .. } => "heisenberg",
            Family::Virasoro { .. } => "virasoro",
            Family::Affine { .. } => "affine",
        }
    }
}

/// A universal VOA: Heisenberg `M(1,0)`, Virasoro `V(c,0)` or affine
/// `V(k,0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoaPresentation {
    pub name: String,
    pub family: Family,
    pub generators: Vec<GeneratorSpec>,
}

/// A term `coeff · X_gen(mode)` in a bracket.
pub type LieTerm = (usize, i64, Rat);

impl VoaPresentation {
    pub fn heisenberg(rank: usize, level: Rat) -> Self {
        let gram = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Self::heisenberg_with_form(format!("heisenberg-{rank}"), gram, level)
    }

    pub fn heisenberg_with_form(name: String, gram: Vec<Vec<Rat>>, level: Rat) -> Self {
        let generators = (0..gram.len())
            .map(|i| GeneratorSpec {
                symbol: if gram.len() == 1 { "a".into() } else { format!("a{}", i + 1) },
                weight: 1,
                lie_index: Some(i),
            })
            .collect();
        VoaPresentation { name, family: Family::Heisenberg { gram, level }, generators }
    }

    pub fn virasoro(central_charge: Rat) -> Self {
        VoaPresentation {
            name: "virasoro".into(),
            family: Family::Virasoro { central_charge },
            generators: vec![GeneratorSpec { symbol: "L".into(), weight: 2, lie_index: None }],
        }
    }

    pub fn affine(name: String, lie: LieAlgebra, level: Rat) -> Self {
        let generators = lie
            .basis
            .iter()
            .enumerate()
            .map(|(i, s)| GeneratorSpec { symbol: s.clone(), weight: 1, lie_index: Some(i) })
            .collect();
        VoaPresentation { name, family: Family::Affine { lie, level }, generators }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_weight(&self, g: usize) -> i64 {
        self.generators[g].weight
    }

    /// Rejects presentations that are not of CFT type or whose structure
    /// data is inconsistent.
    pub fn validate(&self) -> Result<(), VoaError> {
        if self.generators.is_empty() {
            return Err(VoaError::InvalidPresentation("no generators".into()));
        }
        if let Some(g) = self.generators.iter().find(|g| g.weight < 1) {
            return Err(VoaError::InvalidPresentation(format!(
                "generator {} has weight {}; only CFT-type presentations (V_0 = C1) are supported",
                g.symbol, g.weight
            )));
        }
        match &self.family {
            Family::Heisenberg { gram, .. } => {
                let n = gram.len();
                if gram.iter().any(|r| r.len() != n) {
                    return Err(VoaError::InvalidPresentation("Gram matrix is not square".into()));
                }
                for i in 0..n {
                    for j in 0..n {
                        if gram[i][j] != gram[j][i] {
                            return Err(VoaError::InvalidPresentation(format!(
                                "Gram matrix not symmetric at ({i},{j})"
                            )));
                        }
                    }
                }
            }
            Family::Virasoro { .. } => {}
            Family::Affine { lie, .. } => {
                let n = lie.dim();
                let shape_ok = lie.brackets.len() == n
                    && lie.brackets.iter().all(|r| r.len() == n && r.iter().all(|c| c.len() == n))
                    && lie.form.len() == n
                    && lie.form.iter().all(|r| r.len() == n);
                if !shape_ok {
                    return Err(VoaError::InvalidPresentation("structure constants have the wrong shape".into()));
                }
            }
        }
        Ok(())
    }

    /// `[X_a(m), X_b(n)]` as Lie terms plus the central scalar.
    pub fn bracket(&self, a: usize, m: i64, b: usize, n: i64) -> (Vec<LieTerm>, Rat) {
        match &self.family {
            Family::Heisenberg { gram, level } => {
                let central = if m + n == 0 { rat(m, 1) * level * &gram[a][b] } else { Rat::zero() };
                (Vec::new(), central)
            }
            Family::Virasoro { central_charge } => {
                let mut terms = Vec::new();
                if m != n {
                    terms.push((0, m + n, rat(m - n, 1)));
                }
                let central = if m + n == 0 {
                    rat(m * m * m - m, 12) * central_charge
                } else {
                    Rat::zero()
                };
                (terms, central)
            }
            Family::Affine { lie, level } => {
                let terms = lie.brackets[a][b]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(c, coeff)| (c, m + n, coeff.clone()))
                    .collect();
                let central = if m + n == 0 { rat(m, 1) * level * &lie.form[a][b] } else { Rat::zero() };
                (terms, central)
            }
        }
    }

    pub fn parameters(&self) -> Vec<(String, String)> {
        match &self.family {
            Family::Heisenberg { gram, level } => {
                vec![("rank".into(), gram.len().to_string()), ("level".into(), level.to_string())]
            }
            Family::Virasoro { central_charge } => vec![("c".into(), central_charge.to_string())],
            Family::Affine { lie, level } => {
                vec![("dim_g".into(), lie.dim().to_string()), ("level".into(), level.to_string())]
            }
        }
    }
}

/// What the PBW monomials of a space are applied to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Vacuum,
    /// Fock module `M(1, λ)`: zero modes act by `λ`.
    Fock { momentum: Vec<Rat> },
    /// Virasoro Verma module `M(c, h)`.
    Verma { h: Rat },
    /// Affine Weyl module induced from a finite-dimensional `g`-module.
    Weyl { label: String },
}

/// A highest-weight (or vacuum) module: a bottom level `M(0)` with the zero
/// modes acting on it, freely generated by negative modes above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub kind: ModuleKind,
    pub bottom_dim: usize,
    /// `zero_modes[g]` is the matrix of `X_g(0)` on the bottom level, stored
    /// column-wise: `zero_modes[g][t]` lists `(t', coeff)` with
    /// `X_g(0) w_t = Σ coeff w_t'`.
    pub zero_modes: Vec<Vec<Vec<(usize, Rat)>>>,
}

impl ModulePresentation {
    pub fn vacuum() -> Self {
        ModulePresentation { kind: ModuleKind::Vacuum, bottom_dim: 1, zero_modes: Vec::new() }
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self.kind, ModuleKind::Vacuum)
    }

    pub fn fock(voa: &VoaPresentation, momentum: Vec<Rat>) -> Result<Self, VoaError> {
        let Family::Heisenberg { gram, .. } = &voa.family else {
            return Err(VoaError::InvalidPresentation("Fock modules need a Heisenberg VOA".into()));
        };
        if momentum.len() != gram.len() {
            return Err(VoaError::InvalidPresentation(format!(
                "momentum has {} components, rank is {}",
                momentum.len(),
                gram.len()
            )));
        }
        let zero_modes = momentum
            .iter()
            .map(|l| vec![if l.is_zero() { vec![] } else { vec![(0, l.clone())] }])
            .collect();
        Ok(ModulePresentation { kind: ModuleKind::Fock { momentum }, bottom_dim: 1, zero_modes })
    }

    pub fn verma(voa: &VoaPresentation, h: Rat) -> Result<Self, VoaError> {
        if !matches!(voa.family, Family::Virasoro { .. }) {
            return Err(VoaError::InvalidPresentation("Verma modules need the Virasoro VOA".into()));
        }
        let col = if h.is_zero() { vec![] } else { vec![(0, h.clone())] };
        Ok(ModulePresentation { kind: ModuleKind::Verma { h }, bottom_dim: 1, zero_modes: vec![vec![col]] })
    }

    /// Weyl module from explicit matrices `ρ(x)` (row-major, `dim × dim`),
    /// one per Lie basis element.
    pub fn weyl(voa: &VoaPresentation, label: String, matrices: Vec<Vec<Vec<Rat>>>) -> Result<Self, VoaError> {
        let Family::Affine { lie, .. } = &voa.family else {
            return Err(VoaError::InvalidPresentation("Weyl modules need an affine VOA".into()));
        };
        if matrices.len() != lie.dim() {
            return Err(VoaError::InvalidPresentation("one matrix per Lie basis element required".into()));
        }
        let dim = matrices.first().map_or(0, |m| m.len());
        if dim == 0 || matrices.iter().any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim)) {
            return Err(VoaError::InvalidPresentation("bottom-level matrices must be square and equal size".into()));
        }
        let zero_modes = matrices
            .iter()
            .map(|m| {
                (0..dim)
                    .map(|t| (0..dim).filter(|&r| !m[r][t].is_zero()).map(|r| (r, m[r][t].clone())).collect())
                    .collect()
            })
            .collect();
        Ok(ModulePresentation { kind: ModuleKind::Weyl { label }, bottom_dim: dim, zero_modes })
    }

    /// Weyl module over affine sl_2 induced from the irreducible
    /// `(m+1)`-dimensional representation.
    pub fn sl2_weyl(voa: &VoaPresentation, highest: usize) -> Result<Self, VoaError> {
        let d = highest + 1;
        let m = highest as i64;
        let mut e = vec![vec![Rat::zero(); d]; d];
        let mut h = vec![vec![Rat::zero(); d]; d];
        let mut f = vec![vec![Rat::zero(); d]; d];
        for i in 0..d {
            let ii = i as i64;
            h[i][i] = rat(m - 2 * ii, 1);
            if i + 1 < d {
                f[i + 1][i] = Rat::one();
            }
            if i > 0 {
                e[i - 1][i] = rat(ii * (m - ii + 1), 1);
            }
        }
        Self::weyl(voa, format!("sl2-highest-{highest}"), vec![e, h, f])
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ModuleKind::Vacuum => "vacuum".into(),
            ModuleKind::Fock { momentum } => {
                format!("fock:{}", momentum.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","))
            }
            ModuleKind::Verma { h } => format!("verma:{h}"),
            ModuleKind::Weyl { label } => format!("weyl:{label}"),
        }
    }

    /// Dense matrix of the zero mode of generator `g` on the bottom level.
    pub fn zero_mode_matrix(&self, g: usize) -> Vec<Vec<Rat>> {
        let d = self.bottom_dim;
        let mut m = vec![vec![Rat::zero(); d]; d];
        if let Some(cols) = self.zero_modes.get(g) {
            for (t, col) in cols.iter().enumerate() {
                for (r, c) in col {
                    m[*r][t] += c;
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_passes_structure_checks() {
        let g = LieAlgebra::sl2();
        assert!(g.structure_violations().is_empty());
        assert!(g.form_violations().is_empty());
    }

    #[test]
    fn corrupted_sl2_reports_triple() {
        let mut g = LieAlgebra::sl2();
        g.brackets[1][0][0] = rat(3, 1);
        let v = g.structure_violations();
        assert!(v.iter().any(|(kind, t)| kind == "antisymmetry" && *t == (0, 1, 0)));
    }

    #[test]
    fn zero_weight_generator_rejected() {
        let mut p = VoaPresentation::virasoro(rat(1, 2));
        p.generators[0].weight = 0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn virasoro_bracket() {
        let p = VoaPresentation::virasoro(rat(1, 2));
        let (terms, central) = p.bracket(0, 2, 0, -2);
        assert_eq!(terms, vec![(0, 0, rat(4, 1))]);
        assert_eq!(central, rat(1, 4));
    }
}
