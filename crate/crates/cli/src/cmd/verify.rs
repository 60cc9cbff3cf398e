use avfilt::bimod::am_truncation;
use avfilt::filtgen::verify_filtgen;
use avfilt::report::Report;
use avfilt::voa::{verify_presentation, Monomial, State};
use avfilt::zhu::verify_zhu;
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::output::Output;
use crate::source::VoaSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Presentation,
    Zhu,
    Bimod,
    Filtgen,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[command(flatten)]
    pub source: VoaSource,
    /// Module for the bimodule suite, e.g. fock:1 or verma:1/2.
    #[arg(long)]
    pub module: Option<String>,
    /// Random samples per randomized check.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Serialize)]
struct Line {
    suite: String,
    check: String,
    status: &'static str,
    detail: String,
}

/// Checks that only say whether a truncation stabilized within the margin.
/// They are reported but not counted as failures.
pub fn is_certification(name: &str) -> bool {
    name.ends_with("certified by stabilization")
}

pub fn run(args: &VerifyArgs, seed: u64) -> Result<Output, CliError> {
    let wants = |s: Suite| args.suite == s || args.suite == Suite::All;
    let mut reports: Vec<Report> = Vec::new();
    if args.source.is_given() {
        let l = args.source.load()?;
        if wants(Suite::Presentation) {
            let m = l.module(args.module.as_deref()).ok();
            reports.push(verify_presentation(&l.voa, m.as_ref(), l.n, seed));
        }
        if wants(Suite::Zhu) || wants(Suite::Bimod) {
            let zhu = l.zhu(l.vacuum_space()?)?;
            if wants(Suite::Zhu) {
                reports.push(verify_zhu(&zhu, seed)?);
            }
            let module = match args.suite {
                Suite::Bimod => Some(l.module(args.module.as_deref())?),
                Suite::All => l.module(args.module.as_deref()).ok(),
                _ => None,
            };
            if let Some(m) = module {
                let w: Vec<State> = (0..m.bottom_dim).map(|t| State::monomial(Monomial::bottom(t))).collect();
                let ctx = l.context(m, l.engine_cutoff())?;
                let am = am_truncation(ctx, zhu, l.n, l.margin)?;
                reports.push(avfilt::bimod::verify_bimod(&am, &w, args.samples, seed)?);
            }
        }
    } else if args.suite != Suite::Filtgen && args.suite != Suite::All {
        return Err(CliError::Config("give --preset or --file".into()));
    }
    if wants(Suite::Filtgen) {
        reports.push(verify_filtgen(seed, args.samples)?);
    }

    let mut lines = Vec::new();
    let (mut failed, mut uncertified) = (false, false);
    for r in &reports {
        for c in &r.checks {
            let status = if c.passed {
                "pass"
            } else if is_certification(&c.name) {
                uncertified = true;
                "provisional"
            } else {
                failed = true;
                "fail"
            };
            lines.push(Line { suite: r.title.clone(), check: c.name.clone(), status, detail: c.detail.clone() });
        }
    }

    let mut text = String::new();
    for r in &reports {
        text += &format!("== {}\n", r.title);
        for l in lines.iter().filter(|l| l.suite == r.title) {
            text += &format!("{:<11} {}", l.status.to_uppercase(), l.check);
            if !l.detail.is_empty() {
                text += &format!(": {}", l.detail);
            }
            text.push('\n');
        }
    }
    if uncertified {
        text += "note: some truncations did not stabilize within the margin; results depending on them are provisional\n";
    }
    text += &format!("{}\n", if failed { "FAILED" } else { "OK" });
    let rows =
        lines.iter().map(|l| vec![l.suite.clone(), l.check.clone(), l.status.into(), l.detail.clone()]).collect();
    let mut o = Output::new(&lines, &["suite", "check", "status", "detail"], rows, text)?;
    o.failed = failed;
    o.uncertified = uncertified;
    Ok(o)
}
