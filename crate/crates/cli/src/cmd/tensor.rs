use std::path::PathBuf;

use avfilt::bimod::am_truncation;
use avfilt::filtgen::{
    am_bimodule, gr_swap_iso, is_semisimple, lift_swap_iso, parse_instance, tensor_filtration, tensor_preset,
    verify_imported_swap, zhu_truncation, FiltError, GrSwapReport, LiftOutcome, TensorInstance, TensorSummary,
    TENSOR_PRESETS,
};
use avfilt::report::Report;
use clap::Args;
use serde::Serialize;

use crate::cmd::verify::is_certification;
use crate::error::CliError;
use crate::output::{join, Output};
use crate::source::VoaSource;

#[derive(Args, Debug)]
pub struct TensorArgs {
    /// Built-in pair of bimodules over a finite filtered algebra.
    #[arg(long, conflicts_with_all = ["instance_file", "preset", "file"])]
    pub instance: Option<String>,
    /// TOML file with an algebra and named bimodules.
    #[arg(long, conflicts_with_all = ["preset", "file"])]
    pub instance_file: Option<PathBuf>,
    /// Take the right bimodule from this instance file instead.
    #[arg(long, requires = "instance_file")]
    pub right_file: Option<PathBuf>,
    /// Left bimodule: a name in the instance file, or a module spec over a VOA.
    #[arg(long)]
    pub left: Option<String>,
    /// Right bimodule, as for --left.
    #[arg(long)]
    pub right: Option<String>,
    /// Tensor the A(M) truncations of two modules of this VOA.
    #[command(flatten)]
    pub source: VoaSource,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Lift {
    Lifted {
        verified: bool,
        theta: Vec<Vec<String>>,
        strict: bool,
        graded_is_swap: bool,
        section_freedom: usize,
    },
    Obstructed {
        sections_exist: bool,
        certificate_verified: bool,
        least_level: Option<usize>,
    },
    NotAttempted {
        reason: String,
    },
}

#[derive(Serialize)]
struct TensorOut {
    instance: String,
    algebra: String,
    semisimple: Option<bool>,
    forward: TensorSummary,
    backward: TensorSummary,
    swap: GrSwapReport,
    imported: Option<Report>,
    lift: Lift,
}

pub fn run(args: &TensorArgs) -> Result<Output, CliError> {
    if args.source.is_given() {
        return run_voa(args);
    }
    let inst = load_instance(args)?;
    let r = &inst.algebra;
    let forward = tensor_filtration(r, &inst.left, &inst.right)?.summary();
    let backward = tensor_filtration(r, &inst.right, &inst.left)?.summary();
    let swap = gr_swap_iso(r, &inst.left, &inst.right)?;
    let lift = if !swap.verified() {
        Lift::NotAttempted { reason: "the graded swap is not a well-defined isomorphism".into() }
    } else {
        match lift_swap_iso(r, &inst.left, &inst.right, &inst.left_generators, &inst.right_generators) {
            Ok(rep) => match rep.outcome {
                LiftOutcome::Lifted(l) => Lift::Lifted {
                    verified: l.verified(),
                    strict: l.strict,
                    graded_is_swap: l.graded_is_swap,
                    section_freedom: l.section_freedom,
                    theta: l.theta,
                },
                LiftOutcome::Obstructed(o) => Lift::Obstructed {
                    sections_exist: o.sections_exist,
                    certificate_verified: o.certificate_verified,
                    least_level: o.least_level,
                },
            },
            Err(FiltError::Precondition(reason)) => Lift::NotAttempted { reason },
            Err(e) => return Err(e.into()),
        }
    };
    let out = TensorOut {
        instance: inst.name.clone(),
        algebra: r.name().to_string(),
        semisimple: Some(is_semisimple(r)?),
        forward,
        backward,
        swap,
        imported: None,
        lift,
    };
    finish(out)
}

fn load_instance(args: &TensorArgs) -> Result<TensorInstance, CliError> {
    if let Some(name) = &args.instance {
        if !TENSOR_PRESETS.contains(&name.as_str()) {
            return Err(CliError::Config(format!("unknown instance {name:?}; known: {}", TENSOR_PRESETS.join(", "))));
        }
        return Ok(tensor_preset(name)?);
    }
    let Some(path) = &args.instance_file else {
        return Err(CliError::Config("give --instance, --instance-file, or a VOA with --preset or --file".into()));
    };
    let (Some(left), Some(right)) = (&args.left, &args.right) else {
        return Err(CliError::Config("--instance-file needs --left and --right".into()));
    };
    let loaded = parse_instance(&std::fs::read_to_string(path)?)?;
    let Some(rpath) = &args.right_file else {
        return Ok(loaded.tensor_instance(left, right)?);
    };
    let other = parse_instance(&std::fs::read_to_string(rpath)?)?;
    let (l, lg) = loaded.bimodules.get(left).cloned().ok_or_else(|| CliError::Config(format!("no bimodule {left:?}")))?;
    let (k, kg) = other.bimodules.get(right).cloned().ok_or_else(|| CliError::Config(format!("no bimodule {right:?}")))?;
    if k.base() != loaded.algebra.name() {
        return Err(CliError::Config(format!(
            "{left} is a bimodule over {} but {right} is over {}",
            loaded.algebra.name(),
            k.base()
        )));
    }
    Ok(TensorInstance {
        name: format!("{}:{left}|{}:{right}", loaded.name, other.name),
        algebra: loaded.algebra,
        left: l,
        right: k,
        left_generators: lg,
        right_generators: kg,
    })
}

fn run_voa(args: &TensorArgs) -> Result<Output, CliError> {
    let (Some(left), Some(right)) = (&args.left, &args.right) else {
        return Err(CliError::Config("tensoring over a VOA needs --left and --right module specs".into()));
    };
    let l = args.source.load()?;
    let zhu = l.zhu(l.vacuum_space()?)?;
    let mut ams = Vec::new();
    for spec in [left, right] {
        let ctx = l.context(l.module(Some(spec))?, l.engine_cutoff())?;
        ams.push(am_truncation(ctx, zhu.clone(), l.n, l.margin)?);
    }
    let imported = verify_imported_swap(&zhu, &ams[0], &ams[1], l.n)?;
    let r = zhu_truncation(&zhu, l.n)?;
    let m = am_bimodule(&ams[0], &r)?;
    let k = am_bimodule(&ams[1], &r)?;
    let lift = match lift_swap_iso(&r, &m, &k, &[], &[]) {
        Err(FiltError::Precondition(reason)) => Lift::NotAttempted { reason },
        Err(e) => return Err(e.into()),
        Ok(_) => return Err(CliError::Invariant("lifting accepted a truncated algebra".into())),
    };
    let out = TensorOut {
        instance: format!("{}:{left}|{right}", l.voa.name),
        algebra: r.name().to_string(),
        semisimple: None,
        forward: tensor_filtration(&r, &m, &k)?.summary(),
        backward: tensor_filtration(&r, &k, &m)?.summary(),
        swap: gr_swap_iso(&r, &m, &k)?,
        imported: Some(imported),
        lift,
    };
    finish(out)
}

fn finish(out: TensorOut) -> Result<Output, CliError> {
    let s = &out.swap;
    let mut failed = !s.verified();
    let mut uncertified = false;
    let mut text = format!("{} over {}\n", out.instance, out.algebra);
    if let Some(ss) = out.semisimple {
        text += &format!("semisimple: {ss}\n");
    }
    for t in [&out.forward, &out.backward] {
        text += &format!(
            "{} ⊗ {}: dim {}, graded dims [{}], action well defined: {}\n",
            t.left,
            t.right,
            t.dim,
            join(&t.graded_dims),
            t.action_well_defined
        );
    }
    text += "degree  source  target  well_defined  rank  equivariant  involutive\n";
    let opt = |x: Option<bool>| x.map_or("-".to_string(), |b| b.to_string());
    for d in &s.degrees {
        text += &format!(
            "{:>6} {:>7} {:>7}  {:<12}  {:>4}  {:<11}  {}\n",
            d.degree,
            d.source_dim,
            d.target_dim,
            d.well_defined,
            d.rank.map_or("-".into(), |r| r.to_string()),
            opt(d.equivariant),
            opt(d.involutive)
        );
    }
    text += &format!(
        "graded swap: {} ({} of {} commutation identities fail)\n",
        if s.verified() { "verified" } else { "NOT verified" },
        s.identity_failures,
        s.identity_checks
    );
    if let Some(w) = &s.witness {
        text += &format!("witness in degree {}: {:?}\n", w.degree, w.relation);
    }
    if let Some(rep) = &out.imported {
        for c in &rep.checks {
            let status = if c.passed {
                "PASS"
            } else if is_certification(&c.name) {
                uncertified = true;
                "PROVISIONAL"
            } else {
                failed = true;
                "FAIL"
            };
            text += &format!("{status:<11} {}\n", c.name);
        }
    }
    match &out.lift {
        Lift::Lifted { verified, theta, .. } => {
            failed |= !verified;
            text += &format!("lift: filtered isomorphism {}\ntheta:\n", if *verified { "verified" } else { "NOT verified" });
            for row in theta {
                text += &format!("  [{}]\n", row.join(", "));
            }
        }
        Lift::Obstructed { certificate_verified, least_level, .. } => {
            failed |= !certificate_verified;
            text += &format!(
                "lift: obstructed, no level-0 section; certificate {}; sections need level {}\n",
                if *certificate_verified { "verified" } else { "NOT verified" },
                least_level.map_or("-".into(), |p| p.to_string())
            );
        }
        Lift::NotAttempted { reason } => text += &format!("lift: not attempted: {reason}\n"),
    }

    let lift_kind = match &out.lift {
        Lift::Lifted { .. } => "lifted",
        Lift::Obstructed { .. } => "obstructed",
        Lift::NotAttempted { .. } => "not_attempted",
    };
    let rows = s
        .degrees
        .iter()
        .map(|d| {
            vec![
                d.degree.to_string(),
                d.source_dim.to_string(),
                d.target_dim.to_string(),
                d.well_defined.to_string(),
                d.rank.map_or(String::new(), |r| r.to_string()),
                d.equivariant.map_or(String::new(), |b| b.to_string()),
                d.involutive.map_or(String::new(), |b| b.to_string()),
                s.verified().to_string(),
                lift_kind.to_string(),
            ]
        })
        .collect();
    let header =
        ["degree", "source_dim", "target_dim", "well_defined", "rank", "equivariant", "involutive", "swap_verified", "lift"];
    let mut o = Output::new(&out, &header, rows, text)?;
    o.failed = failed;
    o.uncertified = uncertified;
    Ok(o)
}
