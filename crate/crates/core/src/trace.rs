//! Composite traces `Phi(t) = f(r(t))` along curves, their derivative
//! variation, the lifted curve on the graph of `f`, and the turn functional.
//!
//! For piecewise-linear fields the trace is exact: breakpoints are the
//! polyline vertices plus every segment-facet crossing, and `Phi'` is
//! piecewise constant (`<g_simplex, u>`). The ordered sum of derivative jumps
//! then realizes the supremum over partitions exactly. Sampled traces of
//! smooth fields report a lower bound of the variation at a stated step.

use crate::curve::Curve;
use crate::error::Error;
use crate::field::ScalarField;
use crate::geom::Point;
use crate::interp::PLFunction;
use crate::mesh::SimplicialMesh;
use crate::num;
use crate::Result;
use alloc::string::String;
use alloc::vec::Vec;

/// Breakpoints and piecewise data of a composite `Phi = f o r`.
#[derive(Clone, Debug)]
pub struct Trace {
    /// Breakpoint parameters `0 = s_0 < ... < s_q = T_r`.
    pub params: Vec<f64>,
    /// `Phi(s_j)`.
    pub values: Vec<f64>,
    /// One derivative per open interval (piecewise constant for PL fields;
    /// central-difference samples for smooth ones).
    pub derivs: Vec<f64>,
    pub closed: bool,
}

impl Trace {
    pub fn interval_count(&self) -> usize {
        self.derivs.len()
    }
}

/// Exact trace of a PL interpolant: facet crossings from segment-hyperplane
/// intersection (clamped to the segment, deduplicated within `1e-12 * T_r`),
/// interval derivatives from the containing simplex gradient.
pub fn trace_pl(plf: &PLFunction, curve: &Curve) -> Result<Trace> {
    if plf.dim() != curve.dim() {
        return Err(Error::DimensionMismatch {
            expected: plf.dim(),
            got: curve.dim(),
        });
    }
    let mesh = plf.mesh();
    let total = curve.total_length();
    let dedup_tol = 1e-12 * total;

    let mut params: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut derivs: Vec<f64> = Vec::new();
    params.push(0.0);
    values.push(plf.evaluate(&curve.points()[0])?);

    for j in 0..curve.segment_count() {
        let a = curve.points()[j];
        let b = curve.points()[j + 1];
        let seg_start = curve.params()[j];
        let seg_len = curve.params()[j + 1] - seg_start;
        let dir = curve.segment_dir(j);

        let mut local = segment_crossings(mesh, &a, &b, seg_len, dedup_tol);
        local.push(seg_len);

        let mut prev = 0.0;
        for s in local {
            let global = seg_start + s;
            let mid = a.add(&dir.scale(0.5 * (prev + s)));
            let simplex = mesh.locate(&mid)?;
            derivs.push(plf.piece(simplex).gradient.dot(&dir));
            let point = a.add(&dir.scale(s));
            params.push(global);
            values.push(plf.evaluate(&point)?);
            prev = s;
        }
    }
    Ok(Trace {
        params,
        values,
        derivs,
        closed: curve.closed(),
    })
}

/// Crossing parameters (in `(0, seg_len)`, ascending) of the segment `a -> b`
/// with the interior facets near it.
fn segment_crossings(
    mesh: &SimplicialMesh,
    a: &Point,
    b: &Point,
    seg_len: f64,
    dedup_tol: f64,
) -> Vec<f64> {
    let dim = mesh.dim();
    let (mut lo, mut hi) = (Point([f64::INFINITY; 3]), Point([f64::NEG_INFINITY; 3]));
    for axis in 0..3 {
        lo.0[axis] = num::min(a.0[axis], b.0[axis]);
        hi.0[axis] = num::max(a.0[axis], b.0[axis]);
    }
    let mut facet_ids: Vec<usize> = Vec::new();
    for s in mesh.simplices_near_box(&lo, &hi) {
        for &fid in mesh.facets_of(s as usize) {
            if mesh.facet(fid).is_interior() {
                facet_ids.push(fid);
            }
        }
    }
    facet_ids.sort_unstable();
    facet_ids.dedup();

    let d = b.sub(a);
    let mut out: Vec<f64> = Vec::new();
    for fid in facet_ids {
        let facet = mesh.facet(fid);
        let verts: Vec<Point> = facet.vertices[..dim]
            .iter()
            .map(|&v| mesh.vertices()[v])
            .collect();
        let normal = match dim {
            1 => Point::new1(1.0),
            2 => {
                let e = verts[1].sub(&verts[0]);
                match Point::new2(-e.0[1], e.0[0]).unit() {
                    Some(n) => n,
                    None => continue,
                }
            }
            3 => match verts[1]
                .sub(&verts[0])
                .cross(&verts[2].sub(&verts[0]))
                .unit()
            {
                Some(n) => n,
                None => continue,
            },
            _ => unreachable!(),
        };
        let denom = normal.dot(&d);
        if num::abs(denom) <= 1e-14 * d.norm() {
            continue; // parallel: no transversal crossing
        }
        let t = normal.dot(&verts[0].sub(a)) / denom;
        if !(0.0..=1.0).contains(&t) {
            continue;
        }
        let hit = a.add(&d.scale(t));
        if !point_on_facet(dim, &verts, &hit) {
            continue;
        }
        let s = (t * seg_len).clamp(0.0, seg_len);
        if s > dedup_tol && s < seg_len - dedup_tol {
            out.push(s);
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup_by(|x, y| num::abs(*x - *y) <= dedup_tol);
    out
}

/// Containment of a point (already on the facet hyperplane) in the facet.
fn point_on_facet(dim: usize, verts: &[Point], p: &Point) -> bool {
    const REL: f64 = 1e-9;
    match dim {
        1 => true,
        2 => {
            let e = verts[1].sub(&verts[0]);
            let len2 = e.dot(&e);
            let t = p.sub(&verts[0]).dot(&e) / len2;
            (-REL..=1.0 + REL).contains(&t)
        }
        3 => {
            let n = verts[1].sub(&verts[0]).cross(&verts[2].sub(&verts[0]));
            let area2 = n.dot(&n);
            let l0 = verts[1].sub(p).cross(&verts[2].sub(p)).dot(&n) / area2;
            let l1 = verts[2].sub(p).cross(&verts[0].sub(p)).dot(&n) / area2;
            let l2 = 1.0 - l0 - l1;
            l0 >= -REL && l1 >= -REL && l2 >= -REL
        }
        _ => false,
    }
}

/// Sampled trace of a (smooth) field: breakpoints at most `step` apart,
/// interval derivatives by central differences inside each interval.
pub fn trace_sampled(field: &dyn ScalarField, curve: &Curve, step: f64) -> Result<Trace> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(String::from("step must be > 0")));
    }
    if field.dim() != curve.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: curve.dim(),
        });
    }
    let mut params = Vec::new();
    let mut values = Vec::new();
    let mut derivs = Vec::new();
    params.push(0.0);
    values.push(field.eval(&curve.points()[0])?);
    for j in 0..curve.segment_count() {
        let seg_start = curve.params()[j];
        let seg_len = curve.params()[j + 1] - seg_start;
        let a = curve.points()[j];
        let dir = curve.segment_dir(j);
        let n_sub = num::max(1.0, libm::ceil(seg_len / step)) as usize;
        let dt = seg_len / n_sub as f64;
        for k in 0..n_sub {
            let s0 = k as f64 * dt;
            let s1 = s0 + dt;
            let mid = 0.5 * (s0 + s1);
            let h = 0.25 * dt;
            let fwd = field.eval(&a.add(&dir.scale(mid + h)))?;
            let bwd = field.eval(&a.add(&dir.scale(mid - h)))?;
            derivs.push((fwd - bwd) / (2.0 * h));
            params.push(seg_start + s1);
            values.push(field.eval(&a.add(&dir.scale(s1)))?);
        }
    }
    Ok(Trace {
        params,
        values,
        derivs,
        closed: curve.closed(),
    })
}

/// Total variation of the piecewise derivative: ordered sum of
/// `|Phi'_{j+1} - Phi'_j|`, with the wrap-around pair on closed traces.
pub fn derivative_variation(trace: &Trace) -> f64 {
    let n = trace.derivs.len();
    let mut total = 0.0;
    for w in trace.derivs.windows(2) {
        total += num::abs(w[1] - w[0]);
    }
    if trace.closed && n >= 2 {
        total += num::abs(trace.derivs[0] - trace.derivs[n - 1]);
    }
    total
}

/// The curve lifted onto the graph of the traced field:
/// `R(s_j) = (r(s_j), Phi(s_j))` at the trace breakpoints.
#[derive(Clone, Debug)]
pub struct LiftedCurve {
    pub base: Vec<Point>,
    pub heights: Vec<f64>,
    pub params: Vec<f64>,
    pub closed: bool,
    base_dim: usize,
}

/// Builds the lifted curve of a trace.
pub fn lift(curve: &Curve, trace: &Trace) -> LiftedCurve {
    LiftedCurve {
        base: trace.params.iter().map(|&s| curve.point_at(s)).collect(),
        heights: trace.values.clone(),
        params: trace.params.clone(),
        closed: trace.closed,
        base_dim: curve.dim(),
    }
}

impl LiftedCurve {
    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    /// Unit tangent of lifted segment `j` as `(base part, vertical part)`,
    /// padded into `[f64; 4]`.
    fn unit_tangent(&self, j: usize) -> [f64; 4] {
        let d = self.base[j + 1].sub(&self.base[j]);
        let dz = self.heights[j + 1] - self.heights[j];
        let n = num::sqrt(d.dot(&d) + dz * dz);
        [d.0[0] / n, d.0[1] / n, d.0[2] / n, dz / n]
    }
}

/// Turn of the lifted curve: sum of norm differences of consecutive unit
/// tangents (wrap-around included when closed). The base is arc-length
/// parametrized, so lifted tangents never vanish.
pub fn turn(lifted: &LiftedCurve) -> f64 {
    let m = lifted.base.len() - 1;
    let mut total = 0.0;
    let diff = |a: [f64; 4], b: [f64; 4]| -> f64 {
        let mut s = 0.0;
        for k in 0..4 {
            let d = a[k] - b[k];
            s += d * d;
        }
        num::sqrt(s)
    };
    for j in 0..m.saturating_sub(1) {
        total += diff(lifted.unit_tangent(j + 1), lifted.unit_tangent(j));
    }
    if lifted.closed && m >= 2 {
        total += diff(lifted.unit_tangent(0), lifted.unit_tangent(m - 1));
    }
    total
}

/// `theta(x) = x / sqrt(1 + x^2)`: the vertical component of the unit tangent
/// of a unit-speed graph curve with slope `x`.
pub fn theta(x: f64) -> f64 {
    x / num::sqrt(1.0 + x * x)
}

/// Constants for the turn sandwich, derived from the slope range
/// `1 <= sqrt(1 + Phi'^2) <= sqrt(1 + L^2)`:
///
/// * `theta` is 1-Lipschitz and its derivative on `[-L, L]` is at least
///   `c4 = (1 + L^2)^{-3/2}`, so `c4 |a - b| <= |theta(a) - theta(b)| <= |a - b|`;
/// * `x -> 1 / sqrt(1 + x^2)` is `k1`-Lipschitz with
///   `k1 = max_{|x| <= L} |x| (1 + x^2)^{-3/2}`, so the horizontal tangent
///   part changes by at most `|du| + k1 |dPhi'|` and `c3 = 1 + k1`.
///
/// Together: `c4 * V_Phi - c3 * V_r <= turn <= c3 * (V_r + V_Phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichConstants {
    pub lipschitz: f64,
    pub c3: f64,
    pub c4: f64,
}

impl SandwichConstants {
    pub fn for_lipschitz(lipschitz: f64) -> SandwichConstants {
        let l = num::abs(lipschitz);
        let k1 = if l * l <= 0.5 {
            l / libm::pow(1.0 + l * l, 1.5)
        } else {
            // interior maximum at x = 1/sqrt(2)
            2.0 / (3.0 * num::sqrt(3.0))
        };
        SandwichConstants {
            lipschitz: l,
            c3: 1.0 + k1,
            c4: libm::pow(1.0 + l * l, -1.5),
        }
    }

    /// Brute-force check of the two scalar inequalities behind the sandwich
    /// over an `n x n` grid of slopes in `[-L, L]^2`. Returns the worst
    /// relative violation (nonpositive means verified).
    pub fn verify_on_grid(&self, n: usize) -> f64 {
        let l = self.lipschitz;
        let k1 = self.c3 - 1.0;
        let mut worst = f64::NEG_INFINITY;
        let coords = |i: usize| -> f64 {
            if n <= 1 {
                0.0
            } else {
                -l + 2.0 * l * i as f64 / (n - 1) as f64
            }
        };
        for i in 0..n.max(1) {
            let a = coords(i);
            for j in 0..n.max(1) {
                let b = coords(j);
                let gap = num::abs(a - b);
                let dtheta = num::abs(theta(a) - theta(b));
                let dinv = num::abs(1.0 / num::sqrt(1.0 + a * a) - 1.0 / num::sqrt(1.0 + b * b));
                let scale = 1.0 + gap;
                // theta is 1-Lipschitz from below c4, from above 1
                worst = num::max(worst, (dtheta - gap) / scale);
                worst = num::max(worst, (self.c4 * gap - dtheta) / scale);
                // 1/sqrt(1+x^2) is k1-Lipschitz
                worst = num::max(worst, (dinv - k1 * gap) / scale);
            }
        }
        worst
    }
}

/// Violations of the turn sandwich for one `(V_Phi, V_r, turn)` record;
/// nonpositive means the record satisfies the inequality.
pub fn sandwich_violation(constants: &SandwichConstants, v_phi: f64, v_r: f64, turn: f64) -> f64 {
    let upper = turn - constants.c3 * (v_r + v_phi);
    let lower = constants.c4 * v_phi - constants.c3 * v_r - turn;
    let scale = 1.0 + turn + constants.c3 * (v_r + v_phi);
    num::max(upper, lower) / scale
}
