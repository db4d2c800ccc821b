//! JSON interchange for structured series and analysis reports. Every rational
//! is written as a `"p/q"` string, so a series survives a round trip exactly.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::donaldson::{ExpTerm, Factor, FactorKind, SeriesForm, StructuredSeries, CONVENTIONS};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::surface::{CohClass, Surface, SurfaceData};
use crate::sw::BasicClass;

/// Class coordinates in the exported basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coords(#[serde(with = "rational::serde_vec")] pub Vec<Rational>);

impl From<&CohClass> for Coords {
    fn from(c: &CohClass) -> Self {
        Coords(c.coords().to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorExport {
    pub kind: FactorKind,
    pub class: Coords,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpTermExport {
    #[serde(with = "rational::serde_str")]
    pub coefficient: Rational,
    pub class: Coords,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesMetadata {
    pub surface: SurfaceData,
    #[serde(rename = "L")]
    pub l: Coords,
    pub form: SeriesForm,
    pub conventions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesExport {
    #[serde(with = "rational::serde_str")]
    pub constant: Rational,
    pub gaussian: bool,
    pub factors: Vec<FactorExport>,
    pub exp_terms: Vec<ExpTermExport>,
    #[serde(default)]
    pub sinh_divisors: Vec<Coords>,
    #[serde(default)]
    pub divisor_factors: Vec<Coords>,
    pub basis: Vec<String>,
    pub metadata: SeriesMetadata,
}

impl SeriesExport {
    pub fn from_series(series: &StructuredSeries) -> Self {
        let surface = series.surface();
        Self {
            constant: series.constant.clone(),
            gaussian: series.gaussian,
            factors: series
                .factors
                .iter()
                .map(|f| FactorExport { kind: f.kind, class: (&f.class).into() })
                .collect(),
            exp_terms: series
                .exp_terms
                .iter()
                .map(|t| ExpTermExport { coefficient: t.coefficient.clone(), class: (&t.class).into() })
                .collect(),
            sinh_divisors: series.sinh_divisors.iter().map(Coords::from).collect(),
            divisor_factors: series.divisor_factors.iter().map(Coords::from).collect(),
            basis: surface.basis().to_vec(),
            metadata: SeriesMetadata {
                surface: surface.data().clone(),
                l: series.l().into(),
                form: series.form,
                conventions: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    /// Rebuilds the surface from the metadata and the series on it.
    pub fn into_series(self) -> Result<StructuredSeries> {
        let surface = Arc::new(Surface::build(self.metadata.surface)?);
        if surface.basis() != self.basis.as_slice() {
            return Err(Error::Malformed(format!(
                "basis {:?} does not match the surface basis {:?}",
                self.basis,
                surface.basis()
            )));
        }
        let class = |c: Coords| surface.class(c.0);
        let l = class(self.metadata.l)?;
        let exp_terms = self
            .exp_terms
            .into_iter()
            .map(|t| Ok(ExpTerm { coefficient: t.coefficient, class: class(t.class)? }))
            .collect::<Result<Vec<_>>>()?;
        let factors = self
            .factors
            .into_iter()
            .map(|f| Ok(Factor { kind: f.kind, class: class(f.class)? }))
            .collect::<Result<Vec<_>>>()?;
        let sinh_divisors = self.sinh_divisors.into_iter().map(class).collect::<Result<Vec<_>>>()?;
        let divisor_factors = self.divisor_factors.into_iter().map(class).collect::<Result<Vec<_>>>()?;
        StructuredSeries::from_parts(
            &surface,
            l,
            self.metadata.form,
            self.constant,
            self.gaussian,
            exp_terms,
            factors,
            sinh_divisors,
            divisor_factors,
        )
    }
}

pub fn series_to_json(series: &StructuredSeries) -> String {
    serde_json::to_string_pretty(&SeriesExport::from_series(series)).expect("series export serializes")
}

pub fn series_from_json(text: &str) -> Result<StructuredSeries> {
    let export: SeriesExport = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    export.into_series()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicClassRow {
    pub class: Coords,
    pub label: String,
    #[serde(with = "rational::serde_str")]
    pub sw: Rational,
    #[serde(with = "rational::serde_str")]
    pub km: Rational,
}

impl From<&BasicClass> for BasicClassRow {
    fn from(b: &BasicClass) -> Self {
        Self { class: (&b.class).into(), label: b.class.describe(), sw: b.sw.clone(), km: b.km.clone() }
    }
}

/// JSON text of any report; the report types carry their own assumptions.
pub fn report_to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}
