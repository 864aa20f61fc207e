//! Run configuration: a single JSON document, with CLI flags overriding file
//! values. The canonical serialized form is hashed into the run manifest.

use anyhow::{bail, Context, Result};
use dcsplit_core::criterion::VerdictThresholds;
use dcsplit_core::curve::FamilyKind;
use dcsplit_core::field::{Builtin, EmbedXY, ScalarField};
use dcsplit_core::geom::Point;
use dcsplit_core::mesh::Domain;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub field: FieldSpec,
    /// Domain override; defaults to the field's usual domain.
    pub domain: Option<DomainSpec>,
    /// Anchor override; defaults to the domain centroid.
    pub anchor: Option<Vec<f64>>,
    pub levels: LevelRange,
    pub family: FamilySpec,
    pub probe_count: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub thresholds: Thresholds,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: FieldSpec::default(),
            domain: None,
            anchor: None,
            levels: LevelRange { min: 1, max: 5 },
            family: FamilySpec::default(),
            probe_count: 400,
            seed: 42,
            out_dir: PathBuf::from("out"),
            thresholds: Thresholds::default(),
            format: OutputFormat::Both,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSpec {
    /// Catalog name (see `dcsplit catalog`).
    pub name: Option<String>,
    pub params: FieldParams,
    /// Tabulated field: CSV with n coordinate columns + 1 value column,
    /// sampled at the vertices of the level-`csv_level` mesh of the domain.
    pub csv: Option<PathBuf>,
    pub csv_level: u32,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec {
            name: Some("saddle".into()),
            params: FieldParams::default(),
            csv: None,
            csv_level: 3,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FieldParams {
    pub gradient: Option<Vec<f64>>,
    pub offset: Option<f64>,
    pub dim: Option<usize>,
    pub center: Option<Vec<f64>>,
    pub sigma: Option<f64>,
    pub amplitude: Option<f64>,
    pub polygon: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub enum DomainSpec {
    #[serde(rename = "box")]
    Box { lo: Vec<f64>, hi: Vec<f64> },
    #[serde(rename = "points")]
    Points(Vec<Vec<f64>>),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LevelRange {
    pub min: u32,
    pub max: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FamilySpec {
    pub kind: String,
    pub count: usize,
    pub seed: u64,
    pub angle_bound: f64,
    /// Optional curve CSVs (rows of coordinates) used instead of generation.
    pub curve_files: Vec<PathBuf>,
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec {
            kind: "mixed".into(),
            count: 12,
            seed: 42,
            angle_bound: std::f64::consts::FRAC_PI_4,
            curve_files: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub stabilization: f64,
    pub growth: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            stabilization: 0.10,
            growth: 1.5,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Both,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let config: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        Ok(config)
    }

    /// Canonical serialized form (also what the manifest hashes).
    pub fn canonical_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.min > self.levels.max {
            bail!(
                "levels.min ({}) must be <= levels.max ({}); fix the `levels` entry or the --level-min/--level-max flags",
                self.levels.min,
                self.levels.max
            );
        }
        if self.levels.max > 10 {
            bail!(
                "levels.max = {} is past desk scale; choose a level of at most 10",
                self.levels.max
            );
        }
        if self.probe_count == 0 {
            bail!("probe_count must be >= 1");
        }
        if !(self.thresholds.stabilization > 0.0) {
            bail!(
                "thresholds.stabilization must be positive, got {}",
                self.thresholds.stabilization
            );
        }
        if !(self.thresholds.growth > 1.0) {
            bail!(
                "thresholds.growth must exceed 1.0 (a growth factor), got {}",
                self.thresholds.growth
            );
        }
        if !(self.family.angle_bound > 0.0 && self.family.angle_bound < std::f64::consts::FRAC_PI_2)
        {
            bail!(
                "family.angle_bound must lie in (0, pi/2) radians, got {}",
                self.family.angle_bound
            );
        }
        if self.family.count == 0 && self.family.curve_files.is_empty() {
            bail!("family.count must be >= 1 (or provide family.curve_files)");
        }
        self.family_kind()?;
        if self.field.name.is_none() && self.field.csv.is_none() {
            bail!("field needs either a catalog `name` or a tabulated `csv` path");
        }
        Ok(())
    }

    pub fn family_kind(&self) -> Result<FamilyKind> {
        match self.family.kind.as_str() {
            "ellipses" => Ok(FamilyKind::Ellipses),
            "random_convex" => Ok(FamilyKind::RandomConvex),
            "mixed" => Ok(FamilyKind::Mixed),
            other => {
                bail!("family.kind must be one of ellipses | random_convex | mixed, got {other:?}")
            }
        }
    }

    pub fn verdict_thresholds(&self) -> VerdictThresholds {
        VerdictThresholds {
            stabilization: self.thresholds.stabilization,
            growth: self.thresholds.growth,
        }
    }

    /// Resolves the catalog field with parameter overrides applied.
    pub fn builtin_field(&self) -> Result<Option<Builtin>> {
        let Some(name) = &self.field.name else {
            return Ok(None);
        };
        let mut builtin = Builtin::by_name(name).map_err(|e| anyhow::anyhow!("{e}"))?;
        let p = &self.field.params;
        match &mut builtin {
            Builtin::Affine {
                gradient,
                offset,
                dim,
            } => {
                if let Some(g) = &p.gradient {
                    if !(1..=3).contains(&g.len()) {
                        bail!("affine gradient must have 1..=3 entries");
                    }
                    *gradient = Point::from_slice(g);
                    *dim = g.len();
                }
                if let Some(b) = p.offset {
                    *offset = b;
                }
                if let Some(d) = p.dim {
                    *dim = d;
                }
            }
            Builtin::Quadratic { dim } => {
                if let Some(d) = p.dim {
                    if !(1..=3).contains(&d) {
                        bail!("quadratic dim must be 1..=3");
                    }
                    *dim = d;
                }
            }
            Builtin::GaussianBump {
                center,
                sigma,
                amplitude,
                dim,
            } => {
                if let Some(c) = &p.center {
                    *center = Point::from_slice(c);
                    *dim = c.len();
                }
                if let Some(s) = p.sigma {
                    if !(s > 0.0) {
                        bail!("gaussian_bump sigma must be positive");
                    }
                    *sigma = s;
                }
                if let Some(a) = p.amplitude {
                    *amplitude = a;
                }
                if let Some(d) = p.dim {
                    *dim = d;
                }
            }
            Builtin::DistToPolygon { polygon } => {
                if let Some(poly) = &p.polygon {
                    if poly.len() < 3 {
                        bail!("dist_to_polygon polygon needs at least 3 vertices");
                    }
                    *polygon = poly.iter().map(|v| Point::from_slice(v)).collect();
                }
            }
            _ => {}
        }
        Ok(Some(builtin))
    }

    /// Domain for the run: the explicit entry, or the field's default.
    pub fn resolve_domain(&self, builtin: Option<&Builtin>) -> Result<Domain> {
        let base = match &self.domain {
            Some(DomainSpec::Box { lo, hi }) => {
                Domain::from_box(lo, hi).map_err(|e| anyhow::anyhow!("{e}"))?
            }
            Some(DomainSpec::Points(points)) => {
                Domain::build(points, None).map_err(|e| anyhow::anyhow!("{e}"))?
            }
            None => match builtin {
                Some(b) => b.default_domain(),
                None => bail!("a tabulated field needs an explicit `domain`"),
            },
        };
        match &self.anchor {
            None => Ok(base),
            Some(anchor) => {
                let points: Vec<Vec<f64>> = base
                    .vertices()
                    .iter()
                    .map(|p| p.coords(base.dim()).to_vec())
                    .collect();
                Domain::build(&points, Some(anchor)).map_err(|e| anyhow::anyhow!("{e}"))
            }
        }
    }
}

/// A field ready to run: evaluator, its domain, and a display name.
pub struct ResolvedField {
    pub field: Box<dyn ScalarField>,
    pub domain: Domain,
    pub name: String,
}

impl ResolvedField {
    /// Lifts a 1-D field to `f(x, y) = f(x)` on the square spanned by its
    /// interval, so the closed-curve criteria apply.
    pub fn embedded_for_curves(self) -> Result<ResolvedField> {
        if self.domain.dim() != 1 {
            return Ok(self);
        }
        let (lo, hi) = self.domain.bounding_box();
        let square = Domain::from_box(&[lo.0[0], lo.0[0]], &[hi.0[0], hi.0[0]])
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(ResolvedField {
            field: Box::new(EmbedXY(self.field)),
            domain: square,
            name: format!("{} (embedded as f(x, y) = f(x))", self.name),
        })
    }
}
