//! Declarative TOML presentations and the shipped presets.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::Zero;
use serde::Deserialize;

use crate::exactlin::Rat;

use super::presentation::{Family, LieAlgebra, ModulePresentation, VoaPresentation};
use super::VoaError;

pub const PRESET_NAMES: [&str; 3] = ["heisenberg-1", "virasoro", "affine-sl2"];

const HEISENBERG_1: &str = include_str!("../../presets/heisenberg-1.toml");
const VIRASORO: &str = include_str!("../../presets/virasoro.toml");
const AFFINE_SL2: &str = include_str!("../../presets/affine-sl2.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub name: String,
    pub family: String,
    pub level: Option<String>,
    pub central_charge: Option<String>,
    pub rank: Option<usize>,
    pub gram: Option<Vec<Vec<String>>>,
    pub cutoff: Option<i64>,
    pub lie: Option<LieSection>,
    pub module: Option<ModuleSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSection {
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub form: Vec<FormEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub a: String,
    pub b: String,
    pub result: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    pub a: String,
    pub b: String,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    pub kind: String,
    pub momentum: Option<Vec<String>>,
    pub h: Option<String>,
    pub sl2_highest: Option<usize>,
    /// Row-major matrices, one per Lie basis element.
    pub matrices: Option<Vec<Vec<Vec<String>>>>,
}

pub fn parse_rat(s: &str) -> Result<Rat, VoaError> {
    let t = s.trim();
    Rat::from_str(t).map_err(|_| VoaError::Config(format!("not a rational number: {t:?}")))
}

/// A loaded presentation with its optional module and default cutoff.
#[derive(Debug, Clone)]
pub struct LoadedPresentation {
    pub voa: VoaPresentation,
    pub module: Option<ModulePresentation>,
    pub cutoff: Option<i64>,
}

pub fn preset(name: &str) -> Result<LoadedPresentation, VoaError> {
    let text = match name {
        "heisenberg-1" => HEISENBERG_1,
        "virasoro" => VIRASORO,
        "affine-sl2" => AFFINE_SL2,
        other => {
            return Err(VoaError::Config(format!(
                "unknown preset {other:?}; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    parse_presentation(text)
}

pub fn parse_presentation(text: &str) -> Result<LoadedPresentation, VoaError> {
    let file: PresentationFile = toml::from_str(text).map_err(|e| VoaError::Config(e.to_string()))?;
    build(&file)
}

fn build(file: &PresentationFile) -> Result<LoadedPresentation, VoaError> {
    let need = |field: &Option<String>, what: &str| -> Result<Rat, VoaError> {
        field
            .as_deref()
            .ok_or_else(|| VoaError::Config(format!("{} presentation needs `{what}`", file.family)))
            .and_then(parse_rat)
    };
    let voa = match file.family.as_str() {
        "heisenberg" => {
            let level = need(&file.level, "level")?;
            match (&file.gram, file.rank) {
                (Some(g), _) => {
                    let gram = g
                        .iter()
                        .map(|r| r.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    VoaPresentation::heisenberg_with_form(file.name.clone(), gram, level)
                }
                (None, rank) => {
                    let mut p = VoaPresentation::heisenberg(rank.unwrap_or(1), level);
                    p.name = file.name.clone();
                    p
                }
            }
        }
        "virasoro" => {
            let mut p = VoaPresentation::virasoro(need(&file.central_charge, "central_charge")?);
            p.name = file.name.clone();
            p
        }
        "affine" => {
            let level = need(&file.level, "level")?;
            let lie = file
                .lie
                .as_ref()
                .ok_or_else(|| VoaError::Config("affine presentation needs a [lie] section".into()))?;
            VoaPresentation::affine(file.name.clone(), build_lie(lie)?, level)
        }
        other => return Err(VoaError::Config(format!("unknown family {other:?}"))),
    };
    voa.validate()?;
    let module = match &file.module {
        Some(m) => Some(build_module(&voa, m)?),
        None => None,
    };
    if let Some(c) = file.cutoff {
        if c < 0 {
            return Err(VoaError::Config("cutoff must be nonnegative".into()));
        }
    }
    Ok(LoadedPresentation { voa, module, cutoff: file.cutoff })
}

fn build_lie(sec: &LieSection) -> Result<LieAlgebra, VoaError> {
    let n = sec.basis.len();
    let idx = |name: &str| {
        sec.basis
            .iter()
            .position(|b| b == name)
            .ok_or_else(|| VoaError::Config(format!("unknown Lie basis element {name:?}")))
    };
    let mut brackets = vec![vec![vec![Rat::zero(); n]; n]; n];
    let mut given = vec![vec![false; n]; n];
    for e in &sec.brackets {
        let (a, b) = (idx(&e.a)?, idx(&e.b)?);
        for (c, v) in &e.result {
            brackets[a][b][idx(c)?] = parse_rat(v)?;
        }
        given[a][b] = true;
    }
    // Only the pairs left unspecified are filled in by antisymmetry, so an
    // inconsistent file is reported rather than repaired.
    for a in 0..n {
        for b in 0..n {
            if given[a][b] && !given[b][a] {
                for c in 0..n {
                    brackets[b][a][c] = -brackets[a][b][c].clone();
                }
            }
        }
    }
    let mut form = vec![vec![Rat::zero(); n]; n];
    let mut fgiven = vec![vec![false; n]; n];
    for e in &sec.form {
        let (a, b) = (idx(&e.a)?, idx(&e.b)?);
        form[a][b] = parse_rat(&e.value)?;
        fgiven[a][b] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if fgiven[a][b] && !fgiven[b][a] {
                form[b][a] = form[a][b].clone();
            }
        }
    }
    Ok(LieAlgebra { basis: sec.basis.clone(), brackets, form })
}

fn build_module(voa: &VoaPresentation, m: &ModuleSection) -> Result<ModulePresentation, VoaError> {
    match m.kind.as_str() {
        "vacuum" => Ok(ModulePresentation::vacuum()),
        "fock" => {
            let mom = m
                .momentum
                .as_ref()
                .ok_or_else(|| VoaError::Config("fock module needs `momentum`".into()))?
                .iter()
                .map(|x| parse_rat(x))
                .collect::<Result<Vec<_>, _>>()?;
            ModulePresentation::fock(voa, mom)
        }
        "verma" => {
            let h = parse_rat(m.h.as_deref().ok_or_else(|| VoaError::Config("verma module needs `h`".into()))?)?;
            ModulePresentation::verma(voa, h)
        }
        "weyl" => match (&m.sl2_highest, &m.matrices) {
            (Some(j), _) => ModulePresentation::sl2_weyl(voa, *j),
            (None, Some(ms)) => {
                let mats = ms
                    .iter()
                    .map(|mat| {
                        mat.iter()
                            .map(|r| r.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>, _>>())
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ModulePresentation::weyl(voa, "custom".into(), mats)
            }
            (None, None) => Err(VoaError::Config("weyl module needs `sl2_highest` or `matrices`".into())),
        },
        other => Err(VoaError::Config(format!("unknown module kind {other:?}"))),
    }
}

/// Parses a short module spec: `vacuum`, `fock:λ[,λ2...]`, `verma:h`,
/// `weyl:j` (affine sl_2, highest weight `j`).
pub fn parse_module_spec(voa: &VoaPresentation, spec: &str) -> Result<ModulePresentation, VoaError> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "vacuum" => Ok(ModulePresentation::vacuum()),
        "fock" => {
            let mom = arg.split(',').map(parse_rat).collect::<Result<Vec<_>, _>>()?;
            ModulePresentation::fock(voa, mom)
        }
        "verma" => ModulePresentation::verma(voa, parse_rat(arg)?),
        "weyl" => {
            if !matches!(&voa.family, Family::Affine { lie, .. } if lie.dim() == 3 && lie.basis == ["e", "h", "f"]) {
                return Err(VoaError::Config("weyl:j specs need affine sl2 with basis e,h,f".into()));
            }
            let j = arg.parse::<usize>().map_err(|_| VoaError::Config(format!("bad highest weight {arg:?}")))?;
            ModulePresentation::sl2_weyl(voa, j)
        }
        other => Err(VoaError::Config(format!("unknown module kind {other:?}"))),
    }
}
