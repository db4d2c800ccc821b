use std::path::Path;
use std::sync::Arc;

use invariants_core::donaldson::{BlowupParity, EvalRequest, ProbeSet};
use invariants_core::export::Coords;
use invariants_core::surface::{CohClass, Surface, SurfaceData};
use serde::Deserialize;

use crate::CliError;

/// Which representation `series` prints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormChoice {
    #[default]
    Closed,
    Structure,
    ExpSum,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub name: String,
    pub class: Coords,
}

/// One job document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub surface: SurfaceData,
    #[serde(rename = "L", default)]
    pub l: Option<Coords>,
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub k: Option<i64>,
    #[serde(default)]
    pub probes: Vec<ProbeSpec>,
    /// `[["name", multiplicity], …]` for `evaluate`.
    #[serde(default)]
    pub arguments: Vec<(String, u32)>,
    #[serde(default)]
    pub point_power: u32,
    #[serde(default)]
    pub parity: Option<BlowupParity>,
    #[serde(default)]
    pub form: FormChoice,
}

/// A validated job: the surface is built and every class checked against its basis.
pub struct Job {
    pub spec: JobSpec,
    pub surface: Arc<Surface>,
    pub l: CohClass,
    pub l_given: bool,
}

impl Job {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: JobSpec = serde_path_to_error::deserialize(de)
            .map_err(|e| CliError::Config(format!("at `{}`: {}", e.path(), e.inner())))?;
        let surface = Surface::build(spec.surface.clone()).map_err(|e| CliError::Field("surface".into(), e))?;
        let surface = Arc::new(surface);
        let l_given = spec.l.is_some();
        let l = match &spec.l {
            Some(c) => surface.class(c.0.clone()).map_err(|e| CliError::Field("L".into(), e))?,
            None => surface.zero_class(),
        };
        Ok(Self { spec, surface, l, l_given })
    }

    pub fn truncation(&self, default: usize) -> usize {
        self.spec.truncation.unwrap_or(default)
    }

    pub fn k(&self) -> Result<i64, CliError> {
        self.spec.k.ok_or_else(|| CliError::Config("`k` is required for this command".into()))
    }

    /// The declared probes, or one probe per basis class.
    pub fn probes(&self) -> Result<ProbeSet, CliError> {
        if self.spec.probes.is_empty() {
            return Ok(ProbeSet::basis(&self.surface));
        }
        let mut named = Vec::with_capacity(self.spec.probes.len());
        for (i, p) in self.spec.probes.iter().enumerate() {
            if named.iter().any(|(n, _): &(String, CohClass)| n == &p.name) {
                return Err(CliError::Config(format!("at `probes[{i}].name`: duplicate probe {:?}", p.name)));
            }
            let class = self
                .surface
                .class(p.class.0.clone())
                .map_err(|e| CliError::Field(format!("probes[{i}].class"), e))?;
            named.push((p.name.clone(), class));
        }
        ProbeSet::new(&self.surface, named).map_err(|e| CliError::Field("probes".into(), e))
    }

    pub fn eval_request(&self) -> Result<EvalRequest, CliError> {
        Ok(EvalRequest { arguments: self.spec.arguments.clone(), point_power: self.spec.point_power, k: self.k()? })
    }

    pub fn parity(&self) -> Result<BlowupParity, CliError> {
        self.spec
            .parity
            .ok_or_else(|| CliError::Config("`parity` (\"odd\" or \"even\") is required for blowup".into()))
    }
}
