use std::collections::BTreeMap;

use avfilt::zhu::c2_quotient;
use clap::Args;
use serde::Serialize;

use crate::error::CliError;
use crate::output::Output;
use crate::source::VoaSource;

#[derive(Args, Debug)]
pub struct DimsArgs {
    #[command(flatten)]
    pub source: VoaSource,
}

#[derive(Serialize)]
struct Row {
    degree: i64,
    voa: usize,
    zhu_level: usize,
    zhu_graded: usize,
    c2: usize,
    certified: bool,
}

#[derive(Serialize)]
struct Dims {
    name: String,
    family: String,
    parameters: BTreeMap<String, String>,
    cutoff: i64,
    margin: usize,
    certified: bool,
    zhu: Vec<usize>,
    rows: Vec<Row>,
}

pub fn run(args: &DimsArgs) -> Result<Output, CliError> {
    let l = args.source.load()?;
    let space = l.vacuum_space()?;
    let zhu = l.zhu(space.clone())?;
    let c2 = c2_quotient(&space, l.n)?.dims();
    let certs = zhu.certificates();
    let table = zhu.dims_table();
    let mut rows = Vec::new();
    for n in 0..=l.n {
        rows.push(Row {
            degree: n,
            voa: space.dim(n)?,
            zhu_level: table.dims[n as usize],
            zhu_graded: zhu.graded_dim(n),
            c2: c2[n as usize],
            certified: certs.iter().find(|c| c.level == n).is_some_and(|c| c.certified),
        });
    }
    let out = Dims {
        name: l.voa.name.clone(),
        family: table.family,
        parameters: table.parameters,
        cutoff: l.n,
        margin: l.margin,
        certified: table.certified,
        zhu: table.dims,
        rows,
    };

    let mut text = format!("{} ({}), levels 0..={}\n", out.name, out.family, out.cutoff);
    for (k, v) in &out.parameters {
        text += &format!("  {k} = {v}\n");
    }
    text += "degree  V_n  A(V)_n  gr_n  (V/C2)_n  certified\n";
    let mut csv = Vec::new();
    for r in &out.rows {
        text += &format!(
            "{:>6} {:>4} {:>7} {:>5} {:>9}  {}\n",
            r.degree, r.voa, r.zhu_level, r.zhu_graded, r.c2, r.certified
        );
        csv.push(vec![
            r.degree.to_string(),
            r.voa.to_string(),
            r.zhu_level.to_string(),
            r.zhu_graded.to_string(),
            r.c2.to_string(),
            r.certified.to_string(),
        ]);
    }
    text += &format!("A(V) filtration dims: {:?}\n", out.zhu);
    if !out.certified {
        text += "warning: some levels did not stabilize within the margin; dimensions are upper bounds\n";
    }
    let mut o = Output::new(&out, &["degree", "voa", "zhu_level", "zhu_graded", "c2", "certified"], csv, text)?;
    o.uncertified = !out.certified;
    Ok(o)
}
