use avfilt::bimod::{RewriteTrace, Rewriter};
use avfilt::exactlin::rat;
use avfilt::voa::{Monomial, State};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::output::Output;
use crate::source::VoaSource;

#[derive(Args, Debug)]
pub struct RewriteArgs {
    #[command(flatten)]
    pub source: VoaSource,
    /// Module spec, e.g. fock:1; defaults to the module in the file.
    #[arg(long)]
    pub module: Option<String>,
    /// Number of random states to rewrite.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
}

#[derive(Serialize)]
struct Sample {
    degree: i64,
    state: String,
    rewritten: String,
    terms: usize,
    trace: RewriteTrace,
    reevaluates: bool,
}

pub fn run(args: &RewriteArgs, seed: u64) -> Result<Output, CliError> {
    let l = args.source.load()?;
    let m = l.module(args.module.as_deref())?;
    let w: Vec<State> = (0..m.bottom_dim).map(|t| State::monomial(Monomial::bottom(t))).collect();
    let ctx = l.context(m, l.n)?;
    let space = ctx.module_space().clone();
    let mut rewriter = Rewriter::new(&ctx, &w, l.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::new();
    for _ in 0..args.count {
        let degree = rng.gen_range(0..=l.n);
        let mut x = State::zero();
        let basis = space.weight_basis(degree)?;
        for _ in 0..3 {
            let b = &basis[rng.gen_range(0..basis.len())];
            x.add_term(b.clone(), rat(rng.gen_range(1..=5), rng.gen_range(1..=3)));
        }
        let r = rewriter.rewrite(&x)?;
        let back = r.evaluate(&space, &w)?;
        samples.push(Sample {
            degree,
            state: space.format_state(&x),
            rewritten: r.to_sexp(&space),
            terms: r.terms.len(),
            trace: r.trace.clone(),
            reevaluates: back == x,
        });
    }
    let failed = samples.iter().any(|s| !s.reevaluates);
    let mut text = format!("{} rewritten over {} bottom vector(s), degrees 0..={}\n", ctx.label(), w.len(), l.n);
    for (i, s) in samples.iter().enumerate() {
        text += &format!(
            "#{i} degree {}\n  x = {}\n  = {}\n  trace: {} decompositions, {} single-generator, {} iterate, lengths {:?}\n  re-evaluates to x: {}\n",
            s.degree,
            s.state,
            s.rewritten,
            s.trace.decompositions,
            s.trace.single_generator,
            s.trace.iterate,
            s.trace.length_counts,
            s.reevaluates
        );
    }
    let rows = samples
        .iter()
        .map(|s| {
            vec![
                s.degree.to_string(),
                s.state.clone(),
                s.rewritten.clone(),
                s.trace.decompositions.to_string(),
                s.trace.single_generator.to_string(),
                s.trace.iterate.to_string(),
                s.reevaluates.to_string(),
            ]
        })
        .collect();
    let header = ["degree", "state", "rewritten", "decompositions", "single_generator", "iterate", "reevaluates"];
    let mut o = Output::new(&samples, &header, rows, text)?;
    o.failed = failed;
    Ok(o)
}
