//! Difference-of-convex decomposition of a piecewise-linear interpolant by
//! summation of its convex dihedral angles.
//!
//! Every convex hinge of `f_N` is extended to the whole domain as the max of
//! its two affine pieces (a wedge). The sum of all wedges, shifted to vanish
//! at the anchor, is the convex component `f1`; `f2 := f1 - (f_N - f_N(a))`
//! is convex as well, and `f1 - f2 = f_N - f_N(a)` holds identically.

use crate::error::Error;
use crate::field::ScalarField;
use crate::geom::Point;
use crate::interp::{interpolate, Hinge, HingeKind, PLFunction};
use crate::mesh::{triangulate, Domain};
use crate::num::{self, CompensatedSum};
use crate::sampling;
use crate::Result;
use alloc::string::String;
use alloc::vec::Vec;

/// A convex dihedral angle extended to the whole domain: the max of the two
/// affine pieces of a convex hinge.
#[derive(Clone, Copy, Debug)]
pub struct WedgeFunction {
    pub left: crate::interp::AffinePiece,
    pub right: crate::interp::AffinePiece,
}

impl WedgeFunction {
    #[inline]
    pub fn value(&self, p: &Point) -> f64 {
        num::max(self.left.value(p), self.right.value(p))
    }

    /// One-sided directional derivative at `p` along `u` (max-affine rule:
    /// the largest active gradient component).
    pub fn dir_deriv(&self, p: &Point, u: &Point) -> f64 {
        let l = self.left.value(p);
        let r = self.right.value(p);
        let tie = 1e-12 * (1.0 + num::abs(l) + num::abs(r));
        if num::abs(l - r) <= tie {
            num::max(self.left.gradient.dot(u), self.right.gradient.dot(u))
        } else if l > r {
            self.left.gradient.dot(u)
        } else {
            self.right.gradient.dot(u)
        }
    }
}

/// Builds the wedge of a convex hinge.
pub fn wedge(hinge: &Hinge) -> Result<WedgeFunction> {
    if hinge.kind != HingeKind::Convex {
        return Err(Error::NotConvexHinge);
    }
    Ok(WedgeFunction {
        left: hinge.left_piece,
        right: hinge.right_piece,
    })
}

/// Sum of wedges minus a constant shift; convex by construction.
///
/// Evaluation uses compensated summation so the midpoint-convexity defect of
/// the float result stays at a few ulps of the total magnitude even with
/// thousands of wedges.
#[derive(Clone, Debug)]
pub struct ConvexSum {
    wedges: Vec<WedgeFunction>,
    shift: f64,
}

impl ConvexSum {
    pub fn wedges(&self) -> &[WedgeFunction] {
        &self.wedges
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Unshifted sum of wedge values.
    pub fn raw_value(&self, p: &Point) -> f64 {
        let mut acc = CompensatedSum::new();
        for w in &self.wedges {
            acc.add(w.value(p));
        }
        acc.total()
    }

    /// `sum of wedges - shift`.
    pub fn value(&self, p: &Point) -> f64 {
        self.raw_value(p) - self.shift
    }

    /// One-sided directional derivative along `u`, summed analytically over
    /// the wedges (no finite differences).
    pub fn dir_deriv(&self, p: &Point, u: &Point) -> f64 {
        let mut acc = CompensatedSum::new();
        for w in &self.wedges {
            acc.add(w.dir_deriv(p, u));
        }
        acc.total()
    }

    /// `value(mid) - (value(x) + value(y)) / 2`, accumulated wedge by wedge.
    /// Nonpositive in exact arithmetic; the per-wedge form keeps the float
    /// defect independent of the sum's magnitude.
    pub fn midpoint_violation(&self, x: &Point, y: &Point) -> f64 {
        let mid = x.midpoint(y);
        let mut acc = CompensatedSum::new();
        for w in &self.wedges {
            acc.add(w.value(&mid) - 0.5 * (w.value(x) + w.value(y)));
        }
        acc.total()
    }
}

/// The decomposition `f1 - f2 = f_N - f_N(a)`, both components shifted so
/// they vanish at the anchor.
#[derive(Clone, Debug)]
pub struct DCPair {
    f1: ConvexSum,
    source: PLFunction,
    anchor: Point,
    anchor_value: f64,
}

/// Sums the wedges of all convex hinges of `plf` (in facet order) and
/// normalizes at `anchor`. A function with no convex hinges yields `f1 == 0`.
pub fn decompose(plf: PLFunction, anchor: &Point) -> Result<DCPair> {
    let anchor_value = plf.evaluate(anchor)?;
    let mut wedges = Vec::new();
    for hinge in plf.hinges() {
        if hinge.kind == HingeKind::Convex {
            wedges.push(wedge(&hinge)?);
        }
    }
    let mut sum = ConvexSum { wedges, shift: 0.0 };
    sum.shift = sum.raw_value(anchor);
    Ok(DCPair {
        f1: sum,
        source: plf,
        anchor: *anchor,
        anchor_value,
    })
}

impl DCPair {
    pub fn convex_sum(&self) -> &ConvexSum {
        &self.f1
    }

    pub fn source(&self) -> &PLFunction {
        &self.source
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    /// `f_N(anchor)`.
    pub fn anchor_value(&self) -> f64 {
        self.anchor_value
    }

    /// Convex component; `f1(anchor) = 0`.
    pub fn f1(&self, p: &Point) -> f64 {
        self.f1.value(p)
    }

    /// Interpolant value `f_N(p)`.
    pub fn f_n(&self, p: &Point) -> Result<f64> {
        self.source.evaluate(p)
    }

    /// Convex component `f2 = f1 - (f_N - f_N(a))`; `f2(anchor) = 0`.
    pub fn f2(&self, p: &Point) -> Result<f64> {
        Ok(self.f1(p) - (self.f_n(p)? - self.anchor_value))
    }

    /// `|f1 - f2 - (f_N - f_N(a))| / (1 + |f_N|)` at `p`.
    pub fn reconstruction_residual(&self, p: &Point) -> Result<f64> {
        let fnv = self.f_n(p)?;
        let lhs = self.f1(p) - self.f2(p)?;
        Ok(num::abs(lhs - (fnv - self.anchor_value)) / (1.0 + num::abs(fnv)))
    }

    /// Exact piecewise-linear representations of `f1` and `f2` on the source
    /// mesh. Only valid in 1-D, where every wedge kink is a mesh vertex.
    pub fn flatten_1d(&self) -> Result<(PLFunction, PLFunction)> {
        if self.source.dim() != 1 {
            return Err(Error::InvalidArgument(String::from(
                "flattening is only exact in 1-D",
            )));
        }
        let mesh = self.source.mesh().clone();
        let mut f1_vals = Vec::with_capacity(mesh.vertices().len());
        let mut f2_vals = Vec::with_capacity(mesh.vertices().len());
        for (i, v) in mesh.vertices().iter().enumerate() {
            let f1 = self.f1(v);
            f1_vals.push(f1);
            f2_vals.push(f1 - (self.source.vertex_values()[i] - self.anchor_value));
        }
        let f1_plf = PLFunction::from_vertex_values(mesh.clone(), f1_vals)?;
        let f2_plf = PLFunction::from_vertex_values(mesh, f2_vals)?;
        Ok((f1_plf, f2_plf))
    }
}

/// Result of a sampled midpoint-convexity check.
#[derive(Clone, Debug)]
pub struct ConvexityReport {
    /// Largest sampled `f((x+y)/2) - (f(x)+f(y))/2`; nonpositive up to
    /// tolerance means the function passed.
    pub max_violation: f64,
    pub witness: Option<(Point, Point)>,
    pub samples: usize,
}

/// Samples `samples` interior pairs and reports the worst midpoint-convexity
/// violation of `f`.
pub fn convexity_check<F>(
    f: F,
    domain: &Domain,
    samples: usize,
    seed: u64,
) -> Result<ConvexityReport>
where
    F: Fn(&Point) -> Result<f64>,
{
    if samples == 0 {
        return Err(Error::InvalidArgument(String::from("samples must be >= 1")));
    }
    let mut rng = sampling::seeded(seed);
    let mut max_violation = f64::NEG_INFINITY;
    let mut witness = None;
    for _ in 0..samples {
        let x = domain.sample_interior(&mut rng);
        let y = domain.sample_interior(&mut rng);
        let v = f(&x.midpoint(&y))? - 0.5 * (f(&x)? + f(&y)?);
        if v > max_violation {
            max_violation = v;
            witness = Some((x, y));
        }
    }
    Ok(ConvexityReport {
        max_violation,
        witness,
        samples,
    })
}

/// Outcome of the refinement loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

/// Per-level Cauchy diagnostics of the normalized convex components on a
/// fixed probe grid.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub levels: Vec<u32>,
    /// Sup over probes of `|f1_{k+1} - f1_k|`; one entry per level pair.
    pub sup_deltas: Vec<f64>,
    /// Sup over probes of `|f1_k|` per level.
    pub f1_sup_norms: Vec<f64>,
    /// Max reconstruction residual at the deepest level.
    pub final_residual: f64,
    /// Max - min of the raw field over the probe grid.
    pub field_range: f64,
    pub verdict: ConvergenceVerdict,
    /// The decomposition at the deepest level.
    pub final_pair: DCPair,
}

/// Interpolates, decomposes and compares the normalized `f1` across nested
/// refinement levels on a fixed seeded probe grid.
///
/// Verdict rules: diverging when the sup norms of `f1` grow by >= 1.5x per
/// level over the last three levels; converging when the sup deltas are
/// non-increasing over the last three levels and the last delta is below
/// 1e-2 of the field range; inconclusive otherwise. Only Cauchy behavior is
/// observed — uniform convergence itself is a limit statement.
pub fn converge(
    field: &dyn ScalarField,
    domain: &Domain,
    min_level: u32,
    max_level: u32,
    probe_count: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    if min_level >= max_level {
        return Err(Error::InvalidArgument(String::from(
            "min_level must be < max_level",
        )));
    }
    if probe_count == 0 {
        return Err(Error::InvalidArgument(String::from(
            "probe_count must be >= 1",
        )));
    }
    let mut rng = sampling::seeded(seed);
    let probes: Vec<Point> = (0..probe_count)
        .map(|_| domain.sample_interior(&mut rng))
        .collect();
    let mut field_lo = f64::INFINITY;
    let mut field_hi = f64::NEG_INFINITY;
    for p in &probes {
        let v = field.eval(p)?;
        field_lo = num::min(field_lo, v);
        field_hi = num::max(field_hi, v);
    }
    let field_range = field_hi - field_lo;

    let anchor = domain.anchor();
    let mut levels = Vec::new();
    let mut sup_deltas = Vec::new();
    let mut f1_sup_norms = Vec::new();
    let mut prev_values: Option<Vec<f64>> = None;
    let mut final_residual = 0.0;
    let mut final_pair: Option<DCPair> = None;
    for level in min_level..=max_level {
        let plf = interpolate(field, triangulate(domain, level))?;
        let pair = decompose(plf, &anchor)?;
        let values: Vec<f64> = probes.iter().map(|p| pair.f1(p)).collect();
        let sup = values.iter().fold(0.0, |m, v| num::max(m, num::abs(*v)));
        if let Some(prev) = &prev_values {
            let delta = values
                .iter()
                .zip(prev)
                .fold(0.0, |m, (a, b)| num::max(m, num::abs(a - b)));
            sup_deltas.push(delta);
        }
        if level == max_level {
            for p in &probes {
                final_residual = num::max(final_residual, pair.reconstruction_residual(p)?);
            }
            final_pair = Some(pair);
        }
        levels.push(level);
        f1_sup_norms.push(sup);
        prev_values = Some(values);
    }

    let verdict = convergence_verdict(&sup_deltas, &f1_sup_norms, field_range);
    Ok(ConvergenceReport {
        levels,
        sup_deltas,
        f1_sup_norms,
        final_residual,
        field_range,
        verdict,
        final_pair: final_pair.expect("loop runs at least twice"),
    })
}

fn convergence_verdict(
    sup_deltas: &[f64],
    sup_norms: &[f64],
    field_range: f64,
) -> ConvergenceVerdict {
    let n = sup_norms.len();
    if n >= 3 {
        let growing = sup_norms[n - 1] >= 1.5 * sup_norms[n - 2]
            && sup_norms[n - 2] >= 1.5 * sup_norms[n - 3]
            && sup_norms[n - 1] > 0.0;
        if growing {
            return ConvergenceVerdict::Diverging;
        }
    }
    let d = sup_deltas.len();
    if d >= 1 {
        let monotone = if d >= 2 {
            sup_deltas[d - 2] >= sup_deltas[d - 1]
        } else {
            true
        };
        if monotone && sup_deltas[d - 1] < 1e-2 * num::max(field_range, f64::MIN_POSITIVE) {
            return ConvergenceVerdict::Converging;
        }
    }
    ConvergenceVerdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Builtin;
    use crate::interp::interpolate;
    use crate::mesh::triangulate;
    use rand::Rng;

    fn interval() -> Domain {
        Domain::from_box(&[-1.0], &[1.0]).unwrap()
    }

    fn unit_square() -> Domain {
        Domain::from_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn affine_field_has_no_wedges() {
        let field = Builtin::Affine {
            gradient: Point::new2(1.0, 2.0),
            offset: -0.5,
            dim: 2,
        };
        let d = unit_square();
        let plf = interpolate(&field, triangulate(&d, 2)).unwrap();
        let pair = decompose(plf, &d.anchor()).unwrap();
        assert!(pair.convex_sum().wedges().is_empty());
        let p = Point::new2(0.3, 0.8);
        assert_eq!(pair.f1(&p), 0.0);
        // f2 = -(f_N - f_N(a)) is affine, hence convex
        let expected = -(field.eval(&p).unwrap() - field.eval(&d.anchor()).unwrap());
        assert!((pair.f2(&p).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn abs_decomposes_to_itself() {
        let d = interval();
        let plf = interpolate(&Builtin::Abs1d, triangulate(&d, 0)).unwrap();
        let pair = decompose(plf, &d.anchor()).unwrap();
        assert_eq!(pair.convex_sum().wedges().len(), 1);
        for x in [-1.0, -0.3, 0.0, 0.4, 1.0] {
            let p = Point::new1(x);
            assert!((pair.f1(&p) - x.abs()).abs() < 1e-15);
            assert!(pair.f2(&p).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn neg_abs_routes_through_f2() {
        let d = interval();
        let plf = interpolate(&Builtin::NegAbs1d, triangulate(&d, 0)).unwrap();
        let pair = decompose(plf, &d.anchor()).unwrap();
        assert!(pair.convex_sum().wedges().is_empty());
        for x in [-1.0, -0.3, 0.0, 0.4, 1.0] {
            let p = Point::new1(x);
            assert!(pair.f1(&p).abs() < 1e-15);
            assert!((pair.f2(&p).unwrap() - x.abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn wedge_rejects_non_convex_hinges() {
        let d = interval();
        let plf = interpolate(&Builtin::NegAbs1d, triangulate(&d, 0)).unwrap();
        let hinges = plf.hinges();
        assert_eq!(wedge(&hinges[0]).unwrap_err(), Error::NotConvexHinge);
        // flat hinges (equal gradients) are rejected as well
        let affine = Builtin::Affine {
            gradient: Point::new1(0.75),
            offset: 0.0,
            dim: 1,
        };
        let plf = interpolate(&affine, triangulate(&d, 0)).unwrap();
        assert_eq!(wedge(&plf.hinges()[0]).unwrap_err(), Error::NotConvexHinge);
    }

    #[test]
    fn wedge_pieces_agree_at_facet_midpoint() {
        let d = unit_square();
        let plf = interpolate(&Builtin::Saddle, triangulate(&d, 2)).unwrap();
        let mesh = plf.mesh().clone();
        for h in plf.hinges() {
            if h.kind != HingeKind::Convex {
                continue;
            }
            let facet = mesh.facet(h.facet);
            let vs: Vec<Point> = facet.vertices[..mesh.dim()]
                .iter()
                .map(|&v| mesh.vertices()[v])
                .collect();
            let mid = vs[0].midpoint(&vs[1]);
            let w = wedge(&h).unwrap();
            assert!((w.left.value(&mid) - w.right.value(&mid)).abs() < 1e-12);
            assert!((w.value(&mid) - w.left.value(&mid)).abs() < 1e-12);
        }
    }

    #[test]
    fn saddle_reconstruction_and_convexity() {
        let d = unit_square();
        let plf = interpolate(&Builtin::Saddle, triangulate(&d, 2)).unwrap();
        let pair = decompose(plf, &d.anchor()).unwrap();
        // both components vanish at the anchor exactly
        assert_eq!(pair.f1(&d.anchor()), 0.0);
        assert_eq!(pair.f2(&d.anchor()).unwrap(), 0.0);
        let mut rng = sampling::seeded(41);
        for _ in 0..10_000 {
            let p = d.sample_interior(&mut rng);
            assert!(pair.reconstruction_residual(&p).unwrap() <= 1e-9);
        }
        // f1 structural convexity via the compensated per-wedge violation
        let mut rng = sampling::seeded(43);
        for _ in 0..10_000 {
            let x = d.sample_interior(&mut rng);
            let y = d.sample_interior(&mut rng);
            assert!(pair.convex_sum().midpoint_violation(&x, &y) <= 1e-12);
        }
        // f2 sampled convexity
        let report = convexity_check(|p| pair.f2(p), &d, 10_000, 47).unwrap();
        assert!(
            report.max_violation <= 1e-9,
            "violation {}",
            report.max_violation
        );
    }

    #[test]
    fn convexity_check_flags_concave() {
        let d = unit_square();
        let convex = convexity_check(|p| Ok(p.dot(p)), &d, 2000, 7).unwrap();
        assert!(convex.max_violation <= 1e-12);
        let concave = convexity_check(|p| Ok(-p.dot(p)), &d, 2000, 7).unwrap();
        assert!(concave.max_violation > 1e-6);
        assert!(concave.witness.is_some());
    }

    #[test]
    fn one_sided_derivative_of_abs_sum() {
        let d = interval();
        let plf = interpolate(&Builtin::Abs1d, triangulate(&d, 0)).unwrap();
        let pair = decompose(plf, &d.anchor()).unwrap();
        let origin = Point::new1(0.0);
        assert!((pair.convex_sum().dir_deriv(&origin, &Point::new1(1.0)) - 1.0).abs() < 1e-15);
        assert!((pair.convex_sum().dir_deriv(&origin, &Point::new1(-1.0)) - 1.0).abs() < 1e-15);
        let interior = Point::new1(0.5);
        assert!((pair.convex_sum().dir_deriv(&interior, &Point::new1(1.0)) - 1.0).abs() < 1e-15);
    }

    /// Classical 1-D oracle: f1' accumulates exactly the positive jumps of
    /// f_N', so f1 minus the accumulated-ReLU sum is affine. The affine part
    /// is pinned on the first cell and all vertex values must then match.
    fn assert_matches_classical(pair: &DCPair) {
        let mesh = pair.source().mesh();
        let n = mesh.vertices().len();
        let xs: Vec<f64> = mesh.vertices().iter().map(|p| p.0[0]).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
        let sx: Vec<f64> = order.iter().map(|&i| xs[i]).collect();
        let sv: Vec<f64> = order
            .iter()
            .map(|&i| pair.source().vertex_values()[i])
            .collect();
        let slopes: Vec<f64> = sx
            .windows(2)
            .zip(sv.windows(2))
            .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
            .collect();
        let classical = |x: f64| -> f64 {
            let mut acc = 0.0;
            for i in 1..slopes.len() {
                let jump = slopes[i] - slopes[i - 1];
                if jump > 0.0 {
                    acc += jump * num::max(0.0, x - sx[i]);
                }
            }
            acc
        };
        // pin the affine freedom on the first cell
        let f1_0 = pair.f1(&Point::new1(sx[0]));
        let f1_1 = pair.f1(&Point::new1(sx[1]));
        let c0 = classical(sx[0]);
        let c1 = classical(sx[1]);
        let alpha = ((f1_1 - c1) - (f1_0 - c0)) / (sx[1] - sx[0]);
        let beta = f1_0 - c0 - alpha * sx[0];
        let scale = 1.0 + sv.iter().fold(0.0, |m, v| num::max(m, num::abs(*v)));
        for &x in &sx {
            let got = pair.f1(&Point::new1(x));
            let want = classical(x) + alpha * x + beta;
            assert!(
                (got - want).abs() <= 1e-12 * scale,
                "x={x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn one_dimensional_classical_oracle_random_functions() {
        for seed in 0..20u64 {
            let mut rng = sampling::seeded(900 + seed);
            let d = interval();
            let mesh = triangulate(&d, 3);
            let values: Vec<f64> = (0..mesh.vertices().len())
                .map(|_| rng.gen::<f64>() * 4.0 - 2.0)
                .collect();
            let plf = PLFunction::from_vertex_values(mesh, values).unwrap();
            let pair = decompose(plf, &d.anchor()).unwrap();
            assert_matches_classical(&pair);
        }
    }

    #[test]
    fn flattened_f2_has_nonnegative_second_differences() {
        // rational-friendly vertex values: exact in binary floating point
        let d = interval();
        let mesh = triangulate(&d, 2);
        let values: Vec<f64> = mesh
            .vertices()
            .iter()
            .map(|p| {
                let x = p.0[0];
                0.5 * x - num::abs(x - 0.25) + 2.0 * num::abs(x + 0.5)
            })
            .collect();
        let plf = PLFunction::from_vertex_values(mesh, values).unwrap();
        let pair = decompose(plf, &d.anchor()).unwrap();
        let (f1_plf, f2_plf) = pair.flatten_1d().unwrap();
        for plf in [&f1_plf, &f2_plf] {
            let xs: Vec<f64> = plf.mesh().vertices().iter().map(|p| p.0[0]).collect();
            let vv = plf.vertex_values();
            let mut order: Vec<usize> = (0..xs.len()).collect();
            order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
            let mut prev_slope = f64::NEG_INFINITY;
            for w in order.windows(2) {
                let slope = (vv[w[1]] - vv[w[0]]) / (xs[w[1]] - xs[w[0]]);
                assert!(slope >= prev_slope, "second difference negative");
                prev_slope = slope;
            }
        }
    }

    #[test]
    fn constant_field_converges_trivially() {
        let field = Builtin::Affine {
            gradient: Point::zero(),
            offset: 3.0,
            dim: 2,
        };
        let d = unit_square();
        let plf = interpolate(&field, triangulate(&d, 1)).unwrap();
        let pair = decompose(plf, &d.anchor()).unwrap();
        assert!(pair.convex_sum().wedges().is_empty());
        let report = converge(&field, &d, 0, 2, 100, 5).unwrap();
        assert_eq!(report.verdict, ConvergenceVerdict::Converging);
        assert!(report.sup_deltas.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn converge_affine_all_deltas_zero() {
        let field = Builtin::Affine {
            gradient: Point::new2(1.0, -0.5),
            offset: 0.25,
            dim: 2,
        };
        let report = converge(&field, &unit_square(), 0, 3, 200, 9).unwrap();
        assert_eq!(report.verdict, ConvergenceVerdict::Converging);
        assert!(report.sup_deltas.iter().all(|&d| d == 0.0));
        assert!(report.final_residual <= 1e-12);
    }

    #[test]
    fn converge_quadratic_1d() {
        let field = Builtin::Quadratic { dim: 1 };
        let d = interval();
        let report = converge(&field, &d, 1, 5, 300, 13).unwrap();
        assert_eq!(report.verdict, ConvergenceVerdict::Converging);
        // interpolation error scale: deltas shrink by roughly 4x per level
        for w in report.sup_deltas.windows(2) {
            assert!(w[1] < w[0] * 0.5, "deltas {:?}", report.sup_deltas);
        }
    }

    #[test]
    fn converge_osc1d_diverges() {
        let field = Builtin::Osc1d;
        let d = interval();
        let report = converge(&field, &d, 2, 7, 300, 13).unwrap();
        assert_eq!(report.verdict, ConvergenceVerdict::Diverging);
        let n = report.f1_sup_norms.len();
        assert!(report.f1_sup_norms[n - 1] > report.f1_sup_norms[0]);
    }

    #[test]
    fn osc1d_divergence_matches_positive_jump_oracle() {
        // In 1-D the growth of f1 is exactly driven by the accumulated
        // positive slope jumps of the interpolant; check that the f1 slope
        // span equals the positive jump sum at each level.
        let field = Builtin::Osc1d;
        let d = interval();
        for level in 3..=6u32 {
            let plf = interpolate(&field, triangulate(&d, level)).unwrap();
            let mut xs: Vec<(f64, f64)> = plf
                .mesh()
                .vertices()
                .iter()
                .zip(plf.vertex_values())
                .map(|(p, &v)| (p.0[0], v))
                .collect();
            xs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let slopes: Vec<f64> = xs
                .windows(2)
                .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
                .collect();
            let positive_jump_sum: f64 =
                slopes.windows(2).map(|s| num::max(0.0, s[1] - s[0])).sum();
            let pair = decompose(plf, &d.anchor()).unwrap();
            let left = pair
                .convex_sum()
                .dir_deriv(&Point::new1(xs[0].0 + 1e-9), &Point::new1(1.0));
            let right = pair
                .convex_sum()
                .dir_deriv(&Point::new1(xs[xs.len() - 1].0 - 1e-9), &Point::new1(1.0));
            assert!(
                (right - left - positive_jump_sum).abs() <= 1e-9 * (1.0 + positive_jump_sum),
                "level {level}: slope span {} vs jump sum {}",
                right - left,
                positive_jump_sum
            );
        }
    }

    #[test]
    fn two_dimensional_wedge_sum_diverges() {
        // In 2-D every wedge kinks along a full line, so the per-line jump
        // sums do not shrink under refinement and the summed component grows
        // with the facet count even for C^2 convex fields. The 1-D case
        // converges (see converge_quadratic_1d); this pins the 2-D behavior.
        let field = Builtin::Quadratic { dim: 2 };
        let report = converge(&field, &unit_square(), 0, 4, 150, 7).unwrap();
        assert_eq!(report.verdict, ConvergenceVerdict::Diverging);
        let n = report.f1_sup_norms.len();
        assert!(report.f1_sup_norms[n - 1] > 3.0 * report.f1_sup_norms[n - 2]);
        assert!(report.final_residual <= 1e-9);
    }

    #[test]
    fn hexagon_domain_pipeline() {
        let corners: Vec<alloc::vec::Vec<f64>> = (0..6)
            .map(|k| {
                let th = 2.0 * core::f64::consts::PI * k as f64 / 6.0;
                alloc::vec![num::cos(th), num::sin(th)]
            })
            .collect();
        let d = Domain::build(&corners, None).unwrap();
        let plf = interpolate(&Builtin::Quadratic { dim: 2 }, triangulate(&d, 3)).unwrap();
        assert!(plf.mesh().shape_bound() <= 4.0);
        let pair = decompose(plf, &d.anchor()).unwrap();
        let mut rng = sampling::seeded(77);
        for _ in 0..2000 {
            let p = d.sample_interior(&mut rng);
            assert!(pair.reconstruction_residual(&p).unwrap() <= 1e-9);
            let q = d.sample_interior(&mut rng);
            assert!(pair.convex_sum().midpoint_violation(&p, &q) <= 1e-12);
        }
        let report = convexity_check(|p| pair.f2(p), &d, 2000, 79).unwrap();
        assert!(report.max_violation <= 1e-9);
        // exact flattening is a 1-D facility only
        assert!(pair.flatten_1d().is_err());
    }

    #[test]
    fn converge_rejects_bad_levels() {
        let field = Builtin::Abs1d;
        assert!(converge(&field, &interval(), 3, 3, 10, 1).is_err());
    }
}
