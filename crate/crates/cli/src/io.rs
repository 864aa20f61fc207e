//! File formats: curve CSVs, tabulated field CSVs, mesh and DC-pair JSON
//! exports, and the criterion / convergence reports.
//!
//! All writers are deterministic for a fixed config and seed; floats print in
//! shortest round-trip form.

use anyhow::{bail, Context, Result};
use dcsplit_core::criterion::{ConsistencyReport, CriterionReport, CriterionVerdict};
use dcsplit_core::curve::Curve;
use dcsplit_core::decompose::{ConvergenceReport, ConvergenceVerdict, DCPair};
use dcsplit_core::field::ScalarField as _;
use dcsplit_core::geom::Point;
use dcsplit_core::interp::PLFunction;
use dcsplit_core::mesh::SimplicialMesh;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("cannot create {}", parent.display()))?;
    }
    fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Reads a polyline from CSV rows of coordinates (1 to 3 columns). The curve
/// counts as closed when the last row repeats the first.
pub fn read_curve_csv(path: &Path) -> Result<(Vec<Point>, usize, bool)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut points = Vec::new();
    let mut dim = 0usize;
    for record in reader.records() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let coords: Vec<f64> = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .with_context(|| format!("bad number {f:?}"))
            })
            .collect::<Result<_>>()?;
        if !(1..=3).contains(&coords.len()) {
            bail!(
                "curve rows must have 1..=3 coordinates, got {}",
                coords.len()
            );
        }
        if dim == 0 {
            dim = coords.len();
        } else if coords.len() != dim {
            bail!("inconsistent coordinate count in {}", path.display());
        }
        points.push(Point::from_slice(&coords));
    }
    if points.len() < 2 {
        bail!("curve file {} has fewer than 2 points", path.display());
    }
    let closed = points.first() == points.last();
    Ok((points, dim, closed))
}

pub fn write_curve_csv(path: &Path, curve: &Curve) -> Result<()> {
    let mut out = String::new();
    for p in curve.points() {
        let coords: Vec<String> = p
            .coords(curve.dim())
            .iter()
            .map(|c| c.to_string())
            .collect();
        out.push_str(&coords.join(","));
        out.push('\n');
    }
    write_text(path, &out)
}

/// Reads a tabulated field: one CSV row per mesh vertex (n coordinates + 1
/// value), matched to vertices within a tolerance.
pub fn read_tabulated_field(path: &Path, mesh: SimplicialMesh) -> Result<PLFunction> {
    let dim = mesh.dim();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut samples: Vec<(Point, f64)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let nums: Vec<f64> = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .with_context(|| format!("bad number {f:?}"))
            })
            .collect::<Result<_>>()?;
        if nums.len() != dim + 1 {
            bail!(
                "tabulated rows need {} coordinates + 1 value, got {} fields",
                dim,
                nums.len()
            );
        }
        samples.push((Point::from_slice(&nums[..dim]), nums[dim]));
    }
    let scale = mesh.max_diameter();
    let tol = 1e-9 * (1.0 + scale);
    let mut values = Vec::with_capacity(mesh.vertices().len());
    for v in mesh.vertices() {
        let hit = samples
            .iter()
            .find(|(p, _)| p.dist(v) <= tol)
            .with_context(|| {
                format!(
                    "no CSV row matches mesh vertex {:?}; the table must sample every vertex of the stated mesh",
                    v.coords(dim)
                )
            })?;
        values.push(hit.1);
    }
    PLFunction::from_vertex_values(mesh, values).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Mesh export: `{vertices, simplices, level}`.
#[derive(Serialize, Deserialize)]
pub struct MeshExport {
    pub vertices: Vec<Vec<f64>>,
    pub simplices: Vec<Vec<usize>>,
    pub level: u32,
}

pub fn mesh_export(mesh: &SimplicialMesh) -> MeshExport {
    MeshExport {
        vertices: mesh
            .vertices()
            .iter()
            .map(|p| p.coords(mesh.dim()).to_vec())
            .collect(),
        simplices: (0..mesh.simplex_count())
            .map(|i| mesh.simplex(i).to_vec())
            .collect(),
        level: mesh.level(),
    }
}

#[derive(Serialize, Deserialize)]
pub struct WedgeExport {
    pub g_k: Vec<f64>,
    pub b_k: f64,
    pub g_l: Vec<f64>,
    pub b_l: f64,
}

#[derive(Serialize, Deserialize)]
pub struct ProbeValues {
    pub points: Vec<Vec<f64>>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    #[serde(rename = "fN")]
    pub f_n: Vec<f64>,
}

/// DC pair export: anchor, shift, wedges in facet order, probe values.
#[derive(Serialize, Deserialize)]
pub struct DcPairExport {
    pub anchor: Vec<f64>,
    pub shift: f64,
    pub wedges: Vec<WedgeExport>,
    pub probe_values: ProbeValues,
}

pub fn dc_pair_export(pair: &DCPair, probes: &[Point]) -> Result<DcPairExport> {
    let dim = pair.source().dim();
    let mut probe_values = ProbeValues {
        points: Vec::with_capacity(probes.len()),
        f1: Vec::with_capacity(probes.len()),
        f2: Vec::with_capacity(probes.len()),
        f_n: Vec::with_capacity(probes.len()),
    };
    for p in probes {
        probe_values.points.push(p.coords(dim).to_vec());
        probe_values.f1.push(pair.f1(p));
        probe_values
            .f2
            .push(pair.f2(p).map_err(|e| anyhow::anyhow!("{e}"))?);
        probe_values
            .f_n
            .push(pair.f_n(p).map_err(|e| anyhow::anyhow!("{e}"))?);
    }
    Ok(DcPairExport {
        anchor: pair.anchor().coords(dim).to_vec(),
        shift: pair.convex_sum().shift(),
        wedges: pair
            .convex_sum()
            .wedges()
            .iter()
            .map(|w| WedgeExport {
                g_k: w.left.gradient.coords(dim).to_vec(),
                b_k: w.left.offset,
                g_l: w.right.gradient.coords(dim).to_vec(),
                b_l: w.right.offset,
            })
            .collect(),
        probe_values,
    })
}

pub fn verdict_str(verdict: CriterionVerdict) -> &'static str {
    match verdict {
        CriterionVerdict::Bounded => "bounded",
        CriterionVerdict::Diverging => "diverging",
        CriterionVerdict::Inconclusive => "inconclusive",
    }
}

pub fn convergence_verdict_str(verdict: ConvergenceVerdict) -> &'static str {
    match verdict {
        ConvergenceVerdict::Converging => "converging",
        ConvergenceVerdict::Diverging => "diverging",
        ConvergenceVerdict::Inconclusive => "inconclusive",
    }
}

#[derive(Serialize)]
pub struct RecordJson {
    pub level: u32,
    pub curve: usize,
    pub v_phi: f64,
    pub v_r: f64,
    pub rho: f64,
    pub turn: f64,
    pub sigma: f64,
}

#[derive(Serialize)]
pub struct AggregateJson {
    pub level: u32,
    pub max_rho: f64,
    pub max_sigma: f64,
    pub lipschitz: f64,
}

#[derive(Serialize)]
pub struct ConstantsJson {
    pub lipschitz: f64,
    pub c3: f64,
    pub c4: f64,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct ConsistencyJson {
    pub verdicts_match: bool,
    pub consistent: bool,
    pub max_violation: f64,
    pub violations: Vec<ViolationJson>,
}

#[derive(Serialize)]
pub struct ViolationJson {
    pub level: u32,
    pub curve: usize,
    pub violation: f64,
}

/// Full criterion report: both statistics over the same records.
#[derive(Serialize)]
pub struct CriterionJson {
    pub field: String,
    /// Scope caveat: the family is generated, not adversarial.
    pub note: String,
    pub levels: Vec<u32>,
    pub family_size: usize,
    pub constants: ConstantsJson,
    pub variation_verdict: String,
    pub turn_verdict: String,
    pub max_rho_by_level: Vec<f64>,
    pub max_sigma_by_level: Vec<f64>,
    pub consistency: ConsistencyJson,
    pub aggregates: Vec<AggregateJson>,
    pub records: Vec<RecordJson>,
}

pub fn criterion_json(
    field_name: &str,
    family_size: usize,
    variation: &CriterionReport,
    turn: &CriterionReport,
    consistency: &ConsistencyReport,
) -> CriterionJson {
    CriterionJson {
        field: field_name.to_string(),
        note: "verdicts are evidence from a seeded curve family, not proof: \
               a bounded result means no generated curve broke the bound"
            .to_string(),
        levels: variation.levels.iter().map(|l| l.level).collect(),
        family_size,
        constants: ConstantsJson {
            lipschitz: variation.constants.lipschitz,
            c3: variation.constants.c3,
            c4: variation.constants.c4,
            verified: variation.constants_verified,
        },
        variation_verdict: verdict_str(variation.verdict).to_string(),
        turn_verdict: verdict_str(turn.verdict).to_string(),
        max_rho_by_level: variation.levels.iter().map(|l| l.max_rho).collect(),
        max_sigma_by_level: variation.levels.iter().map(|l| l.max_sigma).collect(),
        consistency: ConsistencyJson {
            verdicts_match: consistency.verdicts_match,
            consistent: consistency.consistent,
            max_violation: consistency.max_violation,
            violations: consistency
                .violations
                .iter()
                .map(|v| ViolationJson {
                    level: v.level,
                    curve: v.curve,
                    violation: v.violation,
                })
                .collect(),
        },
        aggregates: variation
            .levels
            .iter()
            .map(|l| AggregateJson {
                level: l.level,
                max_rho: l.max_rho,
                max_sigma: l.max_sigma,
                lipschitz: l.lipschitz,
            })
            .collect(),
        records: variation
            .records
            .iter()
            .map(|r| RecordJson {
                level: r.level,
                curve: r.curve,
                v_phi: r.v_phi,
                v_r: r.v_r,
                rho: r.rho,
                turn: r.turn,
                sigma: r.sigma,
            })
            .collect(),
    }
}

/// CSV report: `level,curve,v_phi,v_r,rho,turn,sigma`.
pub fn criterion_csv(report: &CriterionReport) -> String {
    let mut out = String::from("level,curve,v_phi,v_r,rho,turn,sigma\n");
    for r in &report.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.level, r.curve, r.v_phi, r.v_r, r.rho, r.turn, r.sigma
        ));
    }
    out
}

#[derive(Serialize)]
pub struct ConvergenceJson {
    pub field: String,
    pub levels: Vec<u32>,
    pub sup_deltas: Vec<f64>,
    pub f1_sup_norms: Vec<f64>,
    pub field_range: f64,
    pub final_residual: f64,
    pub verdict: String,
}

pub fn convergence_json(field_name: &str, report: &ConvergenceReport) -> ConvergenceJson {
    ConvergenceJson {
        field: field_name.to_string(),
        levels: report.levels.clone(),
        sup_deltas: report.sup_deltas.clone(),
        f1_sup_norms: report.f1_sup_norms.clone(),
        field_range: report.field_range,
        final_residual: report.final_residual,
        verdict: convergence_verdict_str(report.verdict).to_string(),
    }
}
