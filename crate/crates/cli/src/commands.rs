//! The four subcommands. Each writes its artifacts under `config.out_dir`
//! plus a run manifest, and returns the process exit code.
//!
//! Exit codes: 0 = success / bounded / converging, 1 = failure,
//! 2 = diverging, 3 = inconclusive.

use crate::config::{OutputFormat, ResolvedField, RunConfig};
use crate::io;
use crate::manifest::write_manifest;
use anyhow::{bail, Context, Result};
use dcsplit_core::criterion::{
    assemble_report, curve_record, verdict_consistency, CriterionVerdict, CurveRecord,
    StatisticKind,
};
use dcsplit_core::curve::{arclength_parametrize, Curve};
use dcsplit_core::decompose::{converge, convexity_check, decompose, ConvergenceVerdict};
use dcsplit_core::field::{Builtin, ScalarField};
use dcsplit_core::geom::Point;
use dcsplit_core::interp::{interpolate, HingeKind};
use dcsplit_core::mesh::triangulate;
use dcsplit_core::sampling;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Thread pool capped by `DCSPLIT_THREADS` (unset or 0 = rayon default).
fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var("DCSPLIT_THREADS") {
        let n: usize = value
            .parse()
            .with_context(|| format!("DCSPLIT_THREADS must be an integer, got {value:?}"))?;
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder.build().context("cannot build thread pool")
}

fn resolve_field(config: &RunConfig) -> Result<ResolvedField> {
    if let Some(builtin) = config.builtin_field()? {
        let domain = config.resolve_domain(Some(&builtin))?;
        if builtin.dim() != domain.dim() {
            bail!(
                "field {:?} has dimension {} but the domain has dimension {}; set field.params.dim or change the domain",
                builtin.name(),
                builtin.dim(),
                domain.dim()
            );
        }
        let name = builtin.name().to_string();
        return Ok(ResolvedField {
            field: Box::new(builtin),
            domain,
            name,
        });
    }
    let csv = config.field.csv.as_ref().expect("validated");
    let domain = config.resolve_domain(None)?;
    let mesh = triangulate(&domain, config.field.csv_level);
    let plf = io::read_tabulated_field(csv, mesh)?;
    Ok(ResolvedField {
        name: format!("tabulated:{}", csv.display()),
        field: Box::new(plf),
        domain,
    })
}

fn family_curves(config: &RunConfig, domain: &dcsplit_core::mesh::Domain) -> Result<Vec<Curve>> {
    if !config.family.curve_files.is_empty() {
        let mut curves = Vec::new();
        for path in &config.family.curve_files {
            let (points, dim, closed) = io::read_curve_csv(path)?;
            if dim != domain.dim() {
                bail!(
                    "curve {} has dimension {dim} but the domain has dimension {}",
                    path.display(),
                    domain.dim()
                );
            }
            curves.push(
                arclength_parametrize(dim, &points, closed).map_err(|e| anyhow::anyhow!("{e}"))?,
            );
        }
        return Ok(curves);
    }
    dcsplit_core::curve::generate_family(
        domain,
        config.family.count,
        config.family.seed,
        config.family_kind()?,
        config.family.angle_bound,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))
}

#[derive(Serialize)]
struct DecomposeSummary {
    field: String,
    level: u32,
    simplices: usize,
    hinges_convex: usize,
    hinges_concave: usize,
    hinges_flat: usize,
    wedge_count: usize,
    anchor: Vec<f64>,
    shift: f64,
    max_reconstruction_residual: f64,
    f1_max_midpoint_violation: f64,
    f2_max_midpoint_violation: f64,
    f2_convexity_witness: Option<Vec<Vec<f64>>>,
}

/// Interpolate at `levels.max`, decompose, and export the DC pair with a
/// convexity / reconstruction summary.
pub fn cmd_decompose(config: &RunConfig) -> Result<u8> {
    config.validate()?;
    let start = Instant::now();
    let resolved = resolve_field(config)?;
    let level = config.levels.max;
    let mesh = triangulate(&resolved.domain, level);
    io::write_json(&config.out_dir.join("mesh.json"), &io::mesh_export(&mesh))?;

    let plf = interpolate(resolved.field.as_ref(), mesh).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut convex = 0usize;
    let mut concave = 0usize;
    let mut flat = 0usize;
    for h in plf.hinges() {
        match h.kind {
            HingeKind::Convex => convex += 1,
            HingeKind::Concave => concave += 1,
            HingeKind::Flat => flat += 1,
        }
    }
    let anchor = resolved.domain.anchor();
    let pair = decompose(plf, &anchor).map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut rng = sampling::seeded(config.seed);
    let probes: Vec<Point> = (0..config.probe_count)
        .map(|_| resolved.domain.sample_interior(&mut rng))
        .collect();
    let export = io::dc_pair_export(&pair, &probes)?;
    io::write_json(&config.out_dir.join("dcpair.json"), &export)?;

    let mut residual: f64 = 0.0;
    for p in &probes {
        residual = residual.max(
            pair.reconstruction_residual(p)
                .map_err(|e| anyhow::anyhow!("{e}"))?,
        );
    }
    let mut f1_violation = f64::NEG_INFINITY;
    let mut rng = sampling::seeded(config.seed.wrapping_add(1));
    for _ in 0..config.probe_count {
        let x = resolved.domain.sample_interior(&mut rng);
        let y = resolved.domain.sample_interior(&mut rng);
        f1_violation = f1_violation.max(pair.convex_sum().midpoint_violation(&x, &y));
    }
    let f2_report = convexity_check(
        |p| pair.f2(p),
        &resolved.domain,
        config.probe_count,
        config.seed.wrapping_add(2),
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;

    let dim = resolved.domain.dim();
    let summary = DecomposeSummary {
        field: resolved.name.clone(),
        level,
        simplices: pair.source().mesh().simplex_count(),
        hinges_convex: convex,
        hinges_concave: concave,
        hinges_flat: flat,
        wedge_count: pair.convex_sum().wedges().len(),
        anchor: anchor.coords(dim).to_vec(),
        shift: pair.convex_sum().shift(),
        max_reconstruction_residual: residual,
        f1_max_midpoint_violation: f1_violation,
        f2_max_midpoint_violation: f2_report.max_violation,
        f2_convexity_witness: f2_report
            .witness
            .filter(|_| f2_report.max_violation > 1e-9)
            .map(|(x, y)| vec![x.coords(dim).to_vec(), y.coords(dim).to_vec()]),
    };
    io::write_json(&config.out_dir.join("summary.json"), &summary)?;
    write_manifest(
        &config.out_dir,
        "decompose",
        config,
        vec![("total".into(), start.elapsed().as_secs_f64() * 1e3)],
    )?;
    Ok(0)
}

fn verdict_exit(verdict: CriterionVerdict) -> u8 {
    match verdict {
        CriterionVerdict::Bounded => 0,
        CriterionVerdict::Diverging => 2,
        CriterionVerdict::Inconclusive => 3,
    }
}

/// Runs both representability statistics over the curve family across mesh
/// levels; the exit code encodes the derivative-variation verdict.
pub fn cmd_criterion(config: &RunConfig) -> Result<u8> {
    config.validate()?;
    let start = Instant::now();
    let resolved = resolve_field(config)?.embedded_for_curves()?;
    let family = family_curves(config, &resolved.domain)?;
    let levels: Vec<u32> = (config.levels.min..=config.levels.max).collect();
    let thresholds = config.verdict_thresholds();
    thresholds.validate().map_err(|e| anyhow::anyhow!("{e}"))?;

    // the records reference curves by id; export the family next to them
    for (curve_id, curve) in family.iter().enumerate() {
        io::write_curve_csv(
            &config
                .out_dir
                .join(format!("curves/curve_{curve_id:03}.csv")),
            curve,
        )?;
    }

    let pool = thread_pool()?;
    let mut records: Vec<CurveRecord> = Vec::with_capacity(levels.len() * family.len());
    let mut per_level_lipschitz = Vec::with_capacity(levels.len());
    let mut timings = Vec::new();
    for &level in &levels {
        let t0 = Instant::now();
        let plf = interpolate(
            resolved.field.as_ref(),
            triangulate(&resolved.domain, level),
        )
        .map_err(|e| anyhow::anyhow!("{e}"))?;
        per_level_lipschitz.push((level, plf.lipschitz_estimate()));
        let level_records: Vec<CurveRecord> = pool
            .install(|| {
                family
                    .par_iter()
                    .enumerate()
                    .map(|(curve_id, curve)| curve_record(&plf, curve, level, curve_id))
                    .collect::<dcsplit_core::Result<Vec<_>>>()
            })
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        records.extend(level_records);
        timings.push((format!("level_{level}"), t0.elapsed().as_secs_f64() * 1e3));
    }

    let variation = assemble_report(
        StatisticKind::DerivativeVariation,
        records.clone(),
        &per_level_lipschitz,
        thresholds,
    );
    let turn = assemble_report(
        StatisticKind::Turn,
        records,
        &per_level_lipschitz,
        thresholds,
    );
    let consistency = verdict_consistency(&variation, &turn).map_err(|e| anyhow::anyhow!("{e}"))?;

    if config.format != OutputFormat::Csv {
        let json = io::criterion_json(
            &resolved.name,
            family.len(),
            &variation,
            &turn,
            &consistency,
        );
        io::write_json(&config.out_dir.join("criterion.json"), &json)?;
    }
    if config.format != OutputFormat::Json {
        io::write_text(
            &config.out_dir.join("criterion.csv"),
            &io::criterion_csv(&variation),
        )?;
    }
    timings.push(("total".into(), start.elapsed().as_secs_f64() * 1e3));
    write_manifest(&config.out_dir, "criterion", config, timings)?;
    Ok(verdict_exit(variation.verdict))
}

/// Runs the refinement loop and reports Cauchy diagnostics of the convex
/// components; the exit code encodes the verdict.
pub fn cmd_converge(config: &RunConfig) -> Result<u8> {
    config.validate()?;
    if config.levels.min >= config.levels.max {
        bail!(
            "converge needs levels.min < levels.max, got {}..{}",
            config.levels.min,
            config.levels.max
        );
    }
    let start = Instant::now();
    let resolved = resolve_field(config)?;
    let report = converge(
        resolved.field.as_ref(),
        &resolved.domain,
        config.levels.min,
        config.levels.max,
        config.probe_count,
        config.seed,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    io::write_json(
        &config.out_dir.join("converge.json"),
        &io::convergence_json(&resolved.name, &report),
    )?;
    write_manifest(
        &config.out_dir,
        "converge",
        config,
        vec![("total".into(), start.elapsed().as_secs_f64() * 1e3)],
    )?;
    Ok(match report.verdict {
        ConvergenceVerdict::Converging => 0,
        ConvergenceVerdict::Diverging => 2,
        ConvergenceVerdict::Inconclusive => 3,
    })
}

/// Prints the built-in fields with parameters and DC status.
pub fn cmd_catalog(out: &mut impl std::io::Write) -> Result<u8> {
    for field in Builtin::catalog() {
        let params = field.parameter_summary();
        let params = if params.is_empty() {
            String::new()
        } else {
            format!(" [{params}]")
        };
        writeln!(
            out,
            "{:<16} dim={} {} — {}",
            field.name(),
            dcsplit_core::field::ScalarField::dim(&field),
            params,
            field.dc_status()
        )?;
    }
    Ok(0)
}
