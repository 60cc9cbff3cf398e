//! Small filtered algebras and bimodules used as instances, the named
//! tensor presets, and the TOML instance format.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Deserialize;

use crate::exactlin::{rat, Rat, SparseVec, Subspace};

use super::filtration::Filtration;
use super::structures::{FiniteFilteredAlgebra, FiniteFilteredBimodule, FiniteFilteredModule, Table};
use super::FiltError;

fn strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn vec_of(dim: usize, terms: &[(usize, Rat)]) -> SparseVec {
    let mut v = SparseVec::zero(dim);
    for (i, c) in terms {
        v.add_scaled(c, &SparseVec::unit(dim, *i));
    }
    v
}

fn algebra(
    name: &str,
    names: &[&str],
    levels: &[usize],
    mul: impl Fn(usize, usize) -> Vec<(usize, Rat)>,
    identity: &[(usize, Rat)],
) -> FiniteFilteredAlgebra {
    let d = names.len();
    let table = (0..d).map(|i| (0..d).map(|j| vec_of(d, &mul(i, j))).collect()).collect();
    FiniteFilteredAlgebra::new(name, strings(names), levels.to_vec(), table, vec_of(d, identity))
        .expect("built-in algebra satisfies the axioms")
}

pub fn scalars() -> FiniteFilteredAlgebra {
    algebra("Q", &["1"], &[0], |_, _| vec![(0, Rat::one())], &[(0, Rat::one())])
}

/// `Q^k` on its idempotents, everything in level 0.
pub fn split_algebra(k: usize) -> FiniteFilteredAlgebra {
    let names: Vec<String> = (1..=k).map(|i| format!("e{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let one: Vec<(usize, Rat)> = (0..k).map(|i| (i, Rat::one())).collect();
    algebra(
        &format!("Q^{k}"),
        &refs,
        &vec![0; k],
        |i, j| if i == j { vec![(i, Rat::one())] } else { vec![] },
        &one,
    )
}

/// `Q × Q` on the basis `1, e` with `e` in level 1.
pub fn split_pair_filtered() -> FiniteFilteredAlgebra {
    algebra(
        "Q^2 (filtered)",
        &["1", "e"],
        &[0, 1],
        |i, j| if i == 1 && j == 1 { vec![(1, Rat::one())] } else { vec![(i.max(j), Rat::one())] },
        &[(0, Rat::one())],
    )
}

/// `Q(√d)` on the basis `1, s` with `s² = d` and `s` in level `level`.
pub fn quadratic_field(d: i64, level: usize) -> FiniteFilteredAlgebra {
    algebra(
        &format!("Q(sqrt {d})"),
        &["1", "s"],
        &[0, level],
        |i, j| match (i, j) {
            (1, 1) => vec![(0, rat(d, 1))],
            _ => vec![(i.max(j), Rat::one())],
        },
        &[(0, Rat::one())],
    )
}

/// `M_n(Q)` on matrix units, everything in level 0.
pub fn matrix_algebra(n: usize) -> FiniteFilteredAlgebra {
    let names: Vec<String> = (0..n * n).map(|k| format!("e{}{}", k / n + 1, k % n + 1)).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let one: Vec<(usize, Rat)> = (0..n).map(|i| (i * n + i, Rat::one())).collect();
    algebra(
        &format!("M_{n}(Q)"),
        &refs,
        &vec![0; n * n],
        |a, b| {
            let (i, j, k, l) = (a / n, a % n, b / n, b % n);
            if j == k {
                vec![(i * n + l, Rat::one())]
            } else {
                vec![]
            }
        },
        &one,
    )
}

/// Upper-triangular 2×2 matrices with the diagonal in level 0 and `e12`
/// in level 1.
pub fn upper_triangular() -> FiniteFilteredAlgebra {
    // Basis order e11, e12, e22.
    let unit = |i: usize, j: usize| -> Option<usize> {
        match (i, j) {
            (1, 1) => Some(0),
            (1, 2) => Some(1),
            (2, 2) => Some(2),
            _ => None,
        }
    };
    let ij = [(1, 1), (1, 2), (2, 2)];
    algebra(
        "T_2(Q)",
        &["e11", "e12", "e22"],
        &[0, 1, 0],
        |a, b| {
            let ((i, j), (k, l)) = (ij[a], ij[b]);
            match (j == k).then(|| unit(i, l)).flatten() {
                Some(c) => vec![(c, Rat::one())],
                None => vec![],
            }
        },
        &[(0, Rat::one()), (2, Rat::one())],
    )
}

/// `Q[x]/(x^k)` with `x^i` in level `i`.
pub fn truncated_polynomial(k: usize) -> FiniteFilteredAlgebra {
    let names: Vec<String> = (0..k).map(|i| if i == 0 { "1".into() } else { format!("x^{i}") }).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let levels: Vec<usize> = (0..k).collect();
    algebra(
        &format!("Q[x]/(x^{k})"),
        &refs,
        &levels,
        |i, j| if i + j < k { vec![(i + j, Rat::one())] } else { vec![] },
        &[(0, Rat::one())],
    )
}

/// `Q[x]/(x²)` acting on itself with `x` pulled down to level 0:
/// `F_0 = span{x}`, `F_1` everything. A filtered module that is not a
/// filtered summand of a filt-free one.
pub fn nonsplit_filtered_module() -> (FiniteFilteredAlgebra, FiniteFilteredModule) {
    let r = truncated_polynomial(2);
    let f = Filtration::new(2, vec![Subspace::coordinate(2, [1]), Subspace::full(2)]).expect("nested");
    let m = FiniteFilteredModule::regular(&r).and_then(|m| m.refiltered(&r, f)).expect("x·x = 0 keeps levels");
    (r, m)
}

/// A filtered vector space as a bimodule over the scalars.
pub fn graded_vector_space(r: &FiniteFilteredAlgebra, name: &str, levels: &[usize]) -> FiniteFilteredBimodule {
    assert_eq!(r.dim(), 1, "vector spaces are bimodules over the scalars only");
    let m = levels.len();
    let names = (0..m).map(|i| format!("{name}{i}")).collect();
    FiniteFilteredBimodule::from_fns(
        r,
        name,
        names,
        Filtration::from_basis_levels(levels),
        |_, v| SparseVec::unit(m, v),
        |_, v| SparseVec::unit(m, v),
    )
    .expect("scalar actions are valid")
}

/// A named pair of bimodules over one algebra, with the level-0 generators
/// used for lifting.
#[derive(Clone, Debug)]
pub struct TensorInstance {
    pub name: String,
    pub algebra: FiniteFilteredAlgebra,
    pub left: FiniteFilteredBimodule,
    pub right: FiniteFilteredBimodule,
    pub left_generators: Vec<SparseVec>,
    pub right_generators: Vec<SparseVec>,
}

pub const TENSOR_PRESETS: [&str; 8] =
    ["scalars", "scalars-graded", "split", "split-simple", "triple", "quadratic", "split-filtered", "matrix-2"];

fn regular_pair(name: &str, r: FiniteFilteredAlgebra) -> TensorInstance {
    let m = FiniteFilteredBimodule::regular(&r).expect("regular bimodule is valid");
    let one = r.identity().clone();
    TensorInstance {
        name: name.into(),
        left: m.clone(),
        right: m,
        left_generators: vec![one.clone()],
        right_generators: vec![one],
        algebra: r,
    }
}

pub fn tensor_preset(name: &str) -> Result<TensorInstance, FiltError> {
    Ok(match name {
        "scalars" => {
            let r = scalars();
            let m = graded_vector_space(&r, "u", &[0, 0]);
            let n = graded_vector_space(&r, "v", &[0, 0, 0]);
            TensorInstance {
                name: name.into(),
                left_generators: (0..2).map(|i| SparseVec::unit(2, i)).collect(),
                right_generators: (0..3).map(|i| SparseVec::unit(3, i)).collect(),
                left: m,
                right: n,
                algebra: r,
            }
        }
        "scalars-graded" => {
            let r = scalars();
            let m = graded_vector_space(&r, "u", &[0, 1, 1]);
            let n = graded_vector_space(&r, "v", &[0, 2]);
            TensorInstance {
                name: name.into(),
                left_generators: vec![SparseVec::unit(3, 0)],
                right_generators: vec![SparseVec::unit(2, 0)],
                left: m,
                right: n,
                algebra: r,
            }
        }
        "split" => regular_pair(name, split_algebra(2)),
        "split-simple" => {
            let r = split_algebra(2);
            // Q with e1 acting as 1 and e2 as 0 on both sides.
            let act = |a: usize, _: usize| if a == 0 { SparseVec::unit(1, 0) } else { SparseVec::zero(1) };
            let simple = |name: &str| {
                FiniteFilteredBimodule::from_fns(&r, name, strings(&[name]), Filtration::trivial(1), act, act)
            };
            TensorInstance {
                name: name.into(),
                left: simple("s")?,
                right: simple("t")?,
                left_generators: vec![SparseVec::unit(1, 0)],
                right_generators: vec![SparseVec::unit(1, 0)],
                algebra: r,
            }
        }
        "triple" => {
            let r = split_algebra(3);
            // e1 and e2 act on m1 and m2 from both sides; e3 acts as zero.
            let act = |a: usize, v: usize| if a == v { SparseVec::unit(2, v) } else { SparseVec::zero(2) };
            let m = FiniteFilteredBimodule::from_fns(
                &r,
                "M12",
                strings(&["m1", "m2"]),
                Filtration::trivial(2),
                act,
                act,
            )?;
            let n = FiniteFilteredBimodule::regular(&r)?;
            TensorInstance {
                name: name.into(),
                left_generators: vec![SparseVec::unit(2, 0), SparseVec::unit(2, 1)],
                right_generators: vec![r.identity().clone()],
                left: m,
                right: n,
                algebra: r,
            }
        }
        "quadratic" => regular_pair(name, quadratic_field(2, 1)),
        "split-filtered" => regular_pair(name, split_pair_filtered()),
        "matrix-2" => regular_pair(name, matrix_algebra(2)),
        other => {
            return Err(FiltError::Config(format!(
                "unknown tensor preset {other:?}; expected one of {}",
                TENSOR_PRESETS.join(", ")
            )))
        }
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub algebra: AlgebraSection,
    #[serde(default)]
    pub bimodules: Vec<BimoduleSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub basis: Vec<String>,
    pub levels: Vec<usize>,
    /// Basis element that is the identity; its products default to the
    /// obvious ones.
    pub unit: String,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub a: String,
    pub b: String,
    pub result: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleSection {
    pub name: String,
    pub basis: Vec<String>,
    pub levels: Vec<usize>,
    #[serde(default)]
    pub generators: Vec<BTreeMap<String, String>>,
    /// `a · v`; unlisted entries are zero, the unit acts trivially.
    #[serde(default)]
    pub left: Vec<ActionEntry>,
    /// `v · a`.
    #[serde(default)]
    pub right: Vec<ActionEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub a: String,
    pub v: String,
    pub result: BTreeMap<String, String>,
}

fn index_of(names: &[String], s: &str, what: &str) -> Result<usize, FiltError> {
    names.iter().position(|n| n == s).ok_or_else(|| FiltError::Config(format!("unknown {what} {s:?}")))
}

fn parse_combination(names: &[String], m: &BTreeMap<String, String>, what: &str) -> Result<SparseVec, FiltError> {
    let mut v = SparseVec::zero(names.len());
    for (k, c) in m {
        let i = index_of(names, k, what)?;
        let c: Rat = c.trim().parse().map_err(|_| FiltError::Config(format!("not a rational number: {c:?}")))?;
        v.add_scaled(&c, &SparseVec::unit(names.len(), i));
    }
    Ok(v)
}

/// An algebra and its named bimodules loaded from a TOML instance file.
#[derive(Clone, Debug)]
pub struct LoadedInstance {
    pub name: String,
    pub algebra: FiniteFilteredAlgebra,
    pub bimodules: BTreeMap<String, (FiniteFilteredBimodule, Vec<SparseVec>)>,
}

pub fn parse_instance(text: &str) -> Result<LoadedInstance, FiltError> {
    let file: InstanceFile = toml::from_str(text).map_err(|e| FiltError::Config(e.to_string()))?;
    let a = &file.algebra;
    let d = a.basis.len();
    if a.levels.len() != d {
        return Err(FiltError::Config("algebra basis and levels differ in length".into()));
    }
    let unit = index_of(&a.basis, &a.unit, "algebra basis element")?;
    let mut table: Vec<Vec<SparseVec>> = vec![vec![SparseVec::zero(d); d]; d];
    for i in 0..d {
        table[unit][i] = SparseVec::unit(d, i);
        table[i][unit] = SparseVec::unit(d, i);
    }
    for p in &a.products {
        let i = index_of(&a.basis, &p.a, "algebra basis element")?;
        let j = index_of(&a.basis, &p.b, "algebra basis element")?;
        table[i][j] = parse_combination(&a.basis, &p.result, "algebra basis element")?;
    }
    let r = FiniteFilteredAlgebra::new(
        format!("{}:algebra", file.name),
        a.basis.clone(),
        a.levels.clone(),
        table,
        SparseVec::unit(d, unit),
    )?;
    let mut bimodules = BTreeMap::new();
    for b in &file.bimodules {
        let m = b.basis.len();
        if b.levels.len() != m {
            return Err(FiltError::Config(format!("{}: basis and levels differ in length", b.name)));
        }
        let mut left: Table = vec![vec![Some(SparseVec::zero(m)); m]; d];
        let mut right = left.clone();
        for v in 0..m {
            left[unit][v] = Some(SparseVec::unit(m, v));
            right[unit][v] = Some(SparseVec::unit(m, v));
        }
        for (entries, table) in [(&b.left, &mut left), (&b.right, &mut right)] {
            for e in entries {
                let i = index_of(&a.basis, &e.a, "algebra basis element")?;
                let v = index_of(&b.basis, &e.v, "module basis element")?;
                table[i][v] = Some(parse_combination(&b.basis, &e.result, "module basis element")?);
            }
        }
        let bm = FiniteFilteredBimodule::new(
            &r,
            b.name.clone(),
            b.basis.clone(),
            left,
            right,
            Filtration::from_basis_levels(&b.levels),
        )?;
        let gens = b
            .generators
            .iter()
            .map(|g| parse_combination(&b.basis, g, "module basis element"))
            .collect::<Result<Vec<_>, _>>()?;
        if bimodules.insert(b.name.clone(), (bm, gens)).is_some() {
            return Err(FiltError::Config(format!("duplicate bimodule {:?}", b.name)));
        }
    }
    Ok(LoadedInstance { name: file.name, algebra: r, bimodules })
}

impl LoadedInstance {
    pub fn tensor_instance(&self, left: &str, right: &str) -> Result<TensorInstance, FiltError> {
        let get = |n: &str| {
            self.bimodules.get(n).cloned().ok_or_else(|| FiltError::Config(format!("no bimodule named {n:?}")))
        };
        let (l, lg) = get(left)?;
        let (r, rg) = get(right)?;
        Ok(TensorInstance {
            name: format!("{}:{left}|{right}", self.name),
            algebra: self.algebra.clone(),
            left: l,
            right: r,
            left_generators: lg,
            right_generators: rg,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_algebras_pass_their_axioms() {
        for r in [
            scalars(),
            split_algebra(3),
            split_pair_filtered(),
            quadratic_field(2, 1),
            matrix_algebra(2),
            upper_triangular(),
            truncated_polynomial(4),
        ] {
            assert!(r.identity().nnz() >= 1, "{}", r.name());
        }
        for p in TENSOR_PRESETS {
            tensor_preset(p).unwrap();
        }
        assert!(tensor_preset("nope").is_err());
    }

    #[test]
    fn broken_structure_constants_are_rejected() {
        // The unit sits in level 1.
        let text = r#"
            name = "bad"
            [algebra]
            basis = ["1", "e"]
            levels = [1, 0]
            unit = "1"
        "#;
        assert!(matches!(parse_instance(text), Err(FiltError::Axiom(_))));
    }

    #[test]
    fn instance_files_round_trip() {
        let text = r#"
            name = "pair"
            [algebra]
            basis = ["1", "e"]
            levels = [0, 1]
            unit = "1"
            products = [{ a = "e", b = "e", result = { e = "1" } }]
            [[bimodules]]
            name = "R"
            basis = ["1", "e"]
            levels = [0, 1]
            generators = [{ "1" = "1" }]
            left = [{ a = "e", v = "e", result = { e = "1" } }, { a = "e", v = "1", result = { e = "1" } }]
            right = [{ a = "e", v = "e", result = { e = "1" } }, { a = "e", v = "1", result = { e = "1" } }]
        "#;
        let inst = parse_instance(text).unwrap();
        let t = inst.tensor_instance("R", "R").unwrap();
        assert_eq!(t.left.dim(), 2);
        assert!(inst.tensor_instance("R", "S").is_err());
        assert!(parse_instance("name = 3").is_err());
    }
}
