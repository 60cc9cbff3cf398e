use std::path::PathBuf;
use std::sync::Arc;

use avfilt::bimod::ModuleContext;
use avfilt::voa::{parse_module_spec, parse_presentation, preset, LoadedPresentation, ModulePresentation, Space, VoaPresentation};
use avfilt::zhu::ZhuAlgebra;
use clap::Args;

use crate::error::CliError;

/// Where the VOA comes from.
#[derive(Args, Clone, Debug)]
pub struct VoaSource {
    /// Built-in presentation: heisenberg-1, virasoro or affine-sl2.
    #[arg(long, conflicts_with = "file")]
    pub preset: Option<String>,
    /// TOML presentation file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Top level n of the truncation; defaults to the file's cutoff, else 4.
    #[arg(long)]
    pub cutoff: Option<i64>,
    /// Extra degrees used to certify that relations have stabilized.
    #[arg(long, default_value_t = 2)]
    pub margin: usize,
}

pub struct Loaded {
    pub voa: Arc<VoaPresentation>,
    pub module: Option<ModulePresentation>,
    pub n: i64,
    pub margin: usize,
}

impl VoaSource {
    pub fn is_given(&self) -> bool {
        self.preset.is_some() || self.file.is_some()
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        let LoadedPresentation { voa, module, cutoff } = match (&self.preset, &self.file) {
            (Some(p), _) => preset(p)?,
            (None, Some(f)) => parse_presentation(&std::fs::read_to_string(f)?)?,
            (None, None) => return Err(CliError::Config("give --preset or --file".into())),
        };
        let n = self.cutoff.or(cutoff).unwrap_or(4);
        if n < 0 {
            return Err(CliError::Config(format!("cutoff must be nonnegative, got {n}")));
        }
        if self.margin == 0 {
            return Err(CliError::Config("margin must be at least 1".into()));
        }
        Ok(Loaded { voa: Arc::new(voa), module, n, margin: self.margin })
    }
}

impl Loaded {
    /// Weight cutoff of the underlying spaces: room for products of two
    /// level-n elements plus the certification margin.
    pub fn engine_cutoff(&self) -> i64 {
        self.n + 2 + self.margin as i64
    }

    pub fn vacuum_space(&self) -> Result<Arc<Space>, CliError> {
        Ok(Arc::new(Space::vacuum(self.voa.clone(), self.engine_cutoff())?))
    }

    pub fn zhu(&self, space: Arc<Space>) -> Result<Arc<ZhuAlgebra>, CliError> {
        Ok(Arc::new(ZhuAlgebra::new(space, self.n, self.margin)?))
    }

    /// The module named by `spec`, else the one in the presentation file.
    pub fn module(&self, spec: Option<&str>) -> Result<ModulePresentation, CliError> {
        match (spec, &self.module) {
            (Some(s), _) => Ok(parse_module_spec(&self.voa, s)?),
            (None, Some(m)) => Ok(m.clone()),
            (None, None) => Err(CliError::Config("this command needs --module".into())),
        }
    }

    pub fn context(&self, m: ModulePresentation, cutoff: i64) -> Result<Arc<ModuleContext>, CliError> {
        Ok(Arc::new(ModuleContext::new(self.voa.clone(), Arc::new(m), cutoff)?))
    }
}
