//! DC-representability statistics across mesh refinements.
//!
//! For each level the field's PL interpolant is traced along every family
//! curve, producing the derivative-variation ratio `rho = V_Phi / (1 + V_r)`
//! and the turn ratio `sigma = turn / (1 + V_r)`. A field is flagged
//! `bounded` when the per-level maximum stabilizes, `diverging` when it keeps
//! growing geometrically. The statistics run on the interpolant, whose traces
//! are exact to compute and approach the field's variation from below under
//! refinement.

use crate::curve::{tangent_variation, Curve};
use crate::error::Error;
use crate::field::ScalarField;
use crate::interp::{interpolate, PLFunction};
use crate::mesh::{triangulate, Domain};
use crate::num;
use crate::trace::{
    derivative_variation, lift, sandwich_violation, trace_pl, turn, SandwichConstants,
};
use crate::Result;
use alloc::string::String;
use alloc::vec::Vec;

/// Which per-level aggregate drives the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatisticKind {
    /// Drive the verdict by the max of `rho = V_Phi / (1 + V_r)`.
    DerivativeVariation,
    /// Drive the verdict by the max of `sigma = turn / (1 + V_r)`.
    Turn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionVerdict {
    Bounded,
    Diverging,
    Inconclusive,
}

/// Stabilization / growth thresholds for the verdict rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerdictThresholds {
    /// Bounded when the aggregate changes by less than this fraction between
    /// the last two levels.
    pub stabilization: f64,
    /// Diverging when the aggregate grows by at least this factor per level
    /// over the last three levels.
    pub growth: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        VerdictThresholds {
            stabilization: 0.10,
            growth: 1.5,
        }
    }
}

impl VerdictThresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.stabilization > 0.0) || !(self.growth > 1.0) {
            return Err(Error::InvalidArgument(String::from(
                "thresholds must satisfy stabilization > 0 and growth > 1",
            )));
        }
        Ok(())
    }
}

/// Per-curve, per-level functionals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRecord {
    pub level: u32,
    pub curve: usize,
    /// Derivative variation `V_Phi` of the interpolant trace.
    pub v_phi: f64,
    /// Tangent variation `V_r` of the base curve.
    pub v_r: f64,
    /// `V_Phi / (1 + V_r)`.
    pub rho: f64,
    /// Turn of the lifted curve.
    pub turn: f64,
    /// `turn / (1 + V_r)`.
    pub sigma: f64,
}

/// Per-level maxima.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelAggregate {
    pub level: u32,
    pub max_rho: f64,
    pub max_sigma: f64,
    /// Lipschitz constant of the interpolant at this level.
    pub lipschitz: f64,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub statistic: StatisticKind,
    /// Ordered by `(level, curve)`.
    pub records: Vec<CurveRecord>,
    pub levels: Vec<LevelAggregate>,
    pub verdict: CriterionVerdict,
    /// Constants for the sandwich checks, from the largest per-level
    /// Lipschitz constant; grid-verified before use.
    pub constants: SandwichConstants,
    pub constants_verified: bool,
    pub thresholds: VerdictThresholds,
}

impl CriterionReport {
    /// The aggregate sequence the verdict was computed from.
    pub fn aggregate_series(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|l| match self.statistic {
                StatisticKind::DerivativeVariation => l.max_rho,
                StatisticKind::Turn => l.max_sigma,
            })
            .collect()
    }
}

/// Functionals of one curve against one interpolant.
pub fn curve_record(
    plf: &PLFunction,
    curve: &Curve,
    level: u32,
    curve_id: usize,
) -> Result<CurveRecord> {
    let trace = trace_pl(plf, curve)?;
    let v_phi = derivative_variation(&trace);
    let v_r = tangent_variation(curve);
    let o = turn(&lift(curve, &trace));
    Ok(CurveRecord {
        level,
        curve: curve_id,
        v_phi,
        v_r,
        rho: v_phi / (1.0 + v_r),
        turn: o,
        sigma: o / (1.0 + v_r),
    })
}

/// Builds per-level interpolants of `field` and returns them with their
/// levels; levels must be strictly ascending.
pub fn level_interpolants(
    field: &dyn ScalarField,
    domain: &Domain,
    levels: &[u32],
) -> Result<Vec<PLFunction>> {
    if levels.is_empty() {
        return Err(Error::InvalidArgument(String::from("no mesh levels given")));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(String::from(
            "mesh levels must be strictly ascending",
        )));
    }
    let mut out = Vec::with_capacity(levels.len());
    for &level in levels {
        out.push(interpolate(field, triangulate(domain, level))?);
    }
    Ok(out)
}

/// Assembles a report from records ordered by `(level, curve)`.
pub fn assemble_report(
    statistic: StatisticKind,
    records: Vec<CurveRecord>,
    per_level_lipschitz: &[(u32, f64)],
    thresholds: VerdictThresholds,
) -> CriterionReport {
    let mut levels: Vec<LevelAggregate> = per_level_lipschitz
        .iter()
        .map(|&(level, lipschitz)| LevelAggregate {
            level,
            max_rho: 0.0,
            max_sigma: 0.0,
            lipschitz,
        })
        .collect();
    for r in &records {
        let slot = levels
            .iter_mut()
            .find(|l| l.level == r.level)
            .expect("record level missing from aggregates");
        slot.max_rho = num::max(slot.max_rho, r.rho);
        slot.max_sigma = num::max(slot.max_sigma, r.sigma);
    }
    let lip = per_level_lipschitz
        .iter()
        .map(|&(_, l)| l)
        .fold(0.0, num::max);
    let constants = SandwichConstants::for_lipschitz(lip);
    let constants_verified = constants.verify_on_grid(129) <= 1e-9;
    let series: Vec<f64> = levels
        .iter()
        .map(|l| match statistic {
            StatisticKind::DerivativeVariation => l.max_rho,
            StatisticKind::Turn => l.max_sigma,
        })
        .collect();
    let verdict = verdict_from_series(&series, &thresholds);
    CriterionReport {
        statistic,
        records,
        levels,
        verdict,
        constants,
        constants_verified,
        thresholds,
    }
}

/// Verdict rule: diverging when the aggregate grows by at least `growth` per
/// level on average over the last three level steps (two when only three
/// levels ran) without declining at the end; bounded when the relative
/// change between the last two levels is below `stabilization`; inconclusive
/// otherwise. Averaged growth tolerates the per-level quantization of facet
/// crossing counts that makes single steps noisy.
pub fn verdict_from_series(series: &[f64], thresholds: &VerdictThresholds) -> CriterionVerdict {
    let n = series.len();
    if n >= 3 {
        let window = (n - 1).min(3);
        let first = series[n - 1 - window];
        let grown = series[n - 1] >= libm::pow(thresholds.growth, window as f64) * first;
        if grown && series[n - 1] > 0.0 && series[n - 1] >= series[n - 2] {
            return CriterionVerdict::Diverging;
        }
    }
    if n >= 2 {
        let prev = series[n - 2];
        let change = num::abs(series[n - 1] - prev);
        if change <= thresholds.stabilization * num::max(prev, f64::MIN_POSITIVE) {
            return CriterionVerdict::Bounded;
        }
    }
    CriterionVerdict::Inconclusive
}

fn run_statistic(
    statistic: StatisticKind,
    field: &dyn ScalarField,
    domain: &Domain,
    family: &[Curve],
    levels: &[u32],
    thresholds: VerdictThresholds,
) -> Result<CriterionReport> {
    if family.is_empty() {
        return Err(Error::InvalidArgument(String::from("empty curve family")));
    }
    thresholds.validate()?;
    let interpolants = level_interpolants(field, domain, levels)?;
    let mut records = Vec::with_capacity(levels.len() * family.len());
    let mut per_level_lipschitz = Vec::with_capacity(levels.len());
    for (plf, &level) in interpolants.iter().zip(levels) {
        per_level_lipschitz.push((level, plf.lipschitz_estimate()));
        for (curve_id, curve) in family.iter().enumerate() {
            records.push(curve_record(plf, curve, level, curve_id)?);
        }
    }
    Ok(assemble_report(
        statistic,
        records,
        &per_level_lipschitz,
        thresholds,
    ))
}

/// Derivative-variation statistic: is `V_Phi < c (1 + V_r)` plausible with
/// one constant across the family? Reports the per-level max of `rho`.
pub fn dc_statistic(
    field: &dyn ScalarField,
    domain: &Domain,
    family: &[Curve],
    levels: &[u32],
    thresholds: VerdictThresholds,
) -> Result<CriterionReport> {
    run_statistic(
        StatisticKind::DerivativeVariation,
        field,
        domain,
        family,
        levels,
        thresholds,
    )
}

/// Turn statistic: is `turn <= c_a + c_b V_r` plausible with fixed constants?
/// Reports the per-level max of `sigma` from the lifted curves.
pub fn turn_statistic(
    field: &dyn ScalarField,
    domain: &Domain,
    family: &[Curve],
    levels: &[u32],
    thresholds: VerdictThresholds,
) -> Result<CriterionReport> {
    run_statistic(
        StatisticKind::Turn,
        field,
        domain,
        family,
        levels,
        thresholds,
    )
}

/// One sandwich violation beyond tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConsistencyViolation {
    pub level: u32,
    pub curve: usize,
    pub violation: f64,
}

/// Cross-check of the two criteria on the same family and levels.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub verdicts_match: bool,
    /// Curves whose `(V_Phi, V_r, turn)` break the sandwich by more than
    /// `1e-6` relative.
    pub violations: Vec<ConsistencyViolation>,
    pub max_violation: f64,
    pub consistent: bool,
}

/// Flags sandwich violations and verdict disagreement between a
/// derivative-variation report and a turn report over the same runs.
pub fn verdict_consistency(
    variation: &CriterionReport,
    turn_report: &CriterionReport,
) -> Result<ConsistencyReport> {
    if variation.records.len() != turn_report.records.len() {
        return Err(Error::InvalidArgument(String::from(
            "reports cover different families or levels",
        )));
    }
    const TOL: f64 = 1e-6;
    let constants = &variation.constants;
    let mut violations = Vec::new();
    let mut max_violation = f64::NEG_INFINITY;
    for (a, b) in variation.records.iter().zip(&turn_report.records) {
        if a.level != b.level || a.curve != b.curve {
            return Err(Error::InvalidArgument(String::from(
                "reports are ordered differently",
            )));
        }
        let v = sandwich_violation(constants, a.v_phi, a.v_r, b.turn);
        max_violation = num::max(max_violation, v);
        if v > TOL {
            violations.push(ConsistencyViolation {
                level: a.level,
                curve: a.curve,
                violation: v,
            });
        }
    }
    let verdicts_match = variation.verdict == turn_report.verdict;
    Ok(ConsistencyReport {
        verdicts_match,
        consistent: verdicts_match && violations.is_empty(),
        violations,
        max_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{generate_family, FamilyKind};
    use crate::field::{Builtin, EmbedXY};
    use crate::geom::Point;
    use crate::mesh::Domain;

    fn square() -> Domain {
        Domain::from_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    fn family(domain: &Domain) -> Vec<crate::curve::Curve> {
        generate_family(
            domain,
            8,
            42,
            FamilyKind::Mixed,
            core::f64::consts::FRAC_PI_4,
        )
        .unwrap()
    }

    #[test]
    fn affine_field_is_bounded_with_rho_capped() {
        let field = Builtin::Affine {
            gradient: Point::new2(1.0, -0.5),
            offset: 0.25,
            dim: 2,
        };
        let d = square();
        let fam = family(&d);
        let report = dc_statistic(
            &field,
            &d,
            &fam,
            &[1, 2, 3, 4],
            VerdictThresholds::default(),
        )
        .unwrap();
        assert_eq!(report.verdict, CriterionVerdict::Bounded);
        let g_norm = f64::sqrt(1.25);
        for r in &report.records {
            // V_Phi <= |g| V_r for affine fields, so rho <= |g|
            assert!(r.rho <= g_norm * (1.0 + 1e-9));
        }
    }

    #[test]
    fn zero_field_sigma_at_most_one() {
        let field = Builtin::Affine {
            gradient: Point::zero(),
            offset: 0.0,
            dim: 2,
        };
        let d = square();
        let fam = family(&d);
        let report =
            turn_statistic(&field, &d, &fam, &[1, 2, 3], VerdictThresholds::default()).unwrap();
        assert_eq!(report.verdict, CriterionVerdict::Bounded);
        for r in &report.records {
            assert!(r.sigma <= 1.0 + 1e-12);
            assert!((r.turn - r.v_r).abs() <= 1e-9 * (1.0 + r.v_r));
        }
    }

    #[test]
    fn affine_sigma_bounded_by_sandwich_cap() {
        let g = Point::new2(1.0, -0.5);
        let field = Builtin::Affine {
            gradient: g,
            offset: 0.25,
            dim: 2,
        };
        let d = square();
        let fam = family(&d);
        let report =
            turn_statistic(&field, &d, &fam, &[1, 2, 3], VerdictThresholds::default()).unwrap();
        let cap = report.constants.c3 * (1.0 + g.norm());
        for r in &report.records {
            assert!(r.sigma <= cap + 1e-9);
        }
    }

    #[test]
    fn saddle_stabilizes_and_verdicts_agree() {
        let d = square();
        let fam = family(&d);
        let levels = [2u32, 3, 4, 5];
        let v = dc_statistic(
            &Builtin::Saddle,
            &d,
            &fam,
            &levels,
            VerdictThresholds::default(),
        )
        .unwrap();
        let t = turn_statistic(
            &Builtin::Saddle,
            &d,
            &fam,
            &levels,
            VerdictThresholds::default(),
        )
        .unwrap();
        assert_eq!(v.verdict, CriterionVerdict::Bounded);
        assert_eq!(t.verdict, CriterionVerdict::Bounded);
        let consistency = verdict_consistency(&v, &t).unwrap();
        assert!(
            consistency.consistent,
            "max violation {}",
            consistency.max_violation
        );
        assert!(v.constants_verified);
    }

    #[test]
    fn oscillating_field_diverges_and_reports_agree() {
        let field = EmbedXY(Builtin::Osc1d);
        let d = Domain::from_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let fam = family(&d);
        let levels = [1u32, 2, 3, 4, 5, 6];
        let v = dc_statistic(&field, &d, &fam, &levels, VerdictThresholds::default()).unwrap();
        let t = turn_statistic(&field, &d, &fam, &levels, VerdictThresholds::default()).unwrap();
        assert_eq!(v.verdict, CriterionVerdict::Diverging);
        assert_eq!(t.verdict, CriterionVerdict::Diverging);
        let series = v.aggregate_series();
        assert!(
            series[series.len() - 1] >= 10.0 * series[0],
            "series {series:?}"
        );
        let consistency = verdict_consistency(&v, &t).unwrap();
        assert!(consistency.consistent);
    }

    #[test]
    fn monotone_evidence_for_dc_fields() {
        let d = square();
        let fam = family(&d);
        let levels = [3u32, 4, 5, 6];
        for field in [Builtin::Saddle, Builtin::Quadratic { dim: 2 }] {
            let report =
                dc_statistic(&field, &d, &fam, &levels, VerdictThresholds::default()).unwrap();
            let series = report.aggregate_series();
            for w in series.windows(2) {
                assert!(w[1] <= w[0] * 1.1, "series {series:?}");
            }
        }
    }

    #[test]
    fn per_interval_caps() {
        let d = square();
        let fam = family(&d);
        let interpolants = level_interpolants(&Builtin::Saddle, &d, &[3]).unwrap();
        let plf = &interpolants[0];
        let lip = plf.lipschitz_estimate();
        for c in &fam {
            let t = crate::trace::trace_pl(plf, c).unwrap();
            for w in t.derivs.windows(2) {
                assert!(num::abs(w[1] - w[0]) <= 2.0 * lip * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn determinism_identical_reports() {
        let d = square();
        let fam = family(&d);
        let a = dc_statistic(
            &Builtin::Saddle,
            &d,
            &fam,
            &[2, 3],
            VerdictThresholds::default(),
        )
        .unwrap();
        let b = dc_statistic(
            &Builtin::Saddle,
            &d,
            &fam,
            &[2, 3],
            VerdictThresholds::default(),
        )
        .unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.levels, b.levels);
        assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn verdict_rule_edges() {
        let th = VerdictThresholds::default();
        assert_eq!(
            verdict_from_series(&[0.0, 0.0, 0.0], &th),
            CriterionVerdict::Bounded
        );
        assert_eq!(
            verdict_from_series(&[1.0, 1.6, 2.6], &th),
            CriterionVerdict::Diverging
        );
        assert_eq!(
            verdict_from_series(&[1.0, 1.3], &th),
            CriterionVerdict::Inconclusive
        );
        assert_eq!(
            verdict_from_series(&[1.0, 1.05], &th),
            CriterionVerdict::Bounded
        );
        assert_eq!(
            verdict_from_series(&[1.0], &th),
            CriterionVerdict::Inconclusive
        );
    }

    #[test]
    fn invalid_inputs_rejected() {
        let d = square();
        let fam = family(&d);
        assert!(dc_statistic(
            &Builtin::Saddle,
            &d,
            &[],
            &[1, 2],
            VerdictThresholds::default()
        )
        .is_err());
        assert!(dc_statistic(
            &Builtin::Saddle,
            &d,
            &fam,
            &[2, 2],
            VerdictThresholds::default()
        )
        .is_err());
        let bad = VerdictThresholds {
            stabilization: -1.0,
            growth: 1.5,
        };
        assert!(dc_statistic(&Builtin::Saddle, &d, &fam, &[1, 2], bad).is_err());
    }
}
