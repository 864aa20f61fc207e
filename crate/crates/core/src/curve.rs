//! Closed polygonal curves, natural (arc-length) parametrization, and the
//! curve families the representability criteria quantify over.
//!
//! In 2-D the family curves bound convex compact sets. In 3-D each curve
//! projects one-to-one onto a coordinate plane as a convex polygon, and every
//! segment makes an angle of at most `angle_bound` (default pi/4) with that
//! plane — the graph-over-plane class.

use crate::error::Error;
use crate::geom::{cross2, Point};
use crate::mesh::Domain;
use crate::num;
use crate::sampling;
use crate::Result;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A coordinate plane in R^3, identified by the axis it drops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordPlane {
    /// (x, y); drops z.
    Xy,
    /// (x, z); drops y.
    Xz,
    /// (y, z); drops x.
    Yz,
}

impl CoordPlane {
    pub fn dropped_axis(&self) -> usize {
        match self {
            CoordPlane::Xy => 2,
            CoordPlane::Xz => 1,
            CoordPlane::Yz => 0,
        }
    }

    pub fn axes(&self) -> (usize, usize) {
        match self {
            CoordPlane::Xy => (0, 1),
            CoordPlane::Xz => (0, 2),
            CoordPlane::Yz => (1, 2),
        }
    }

    /// Projection onto the plane (dropped coordinate zeroed).
    pub fn project(&self, p: &Point) -> Point {
        let (a, b) = self.axes();
        Point::new2(p.0[a], p.0[b])
    }
}

/// An arc-length parametrized polyline. Closed curves repeat the first point
/// at the end, so parameters run from 0 to the total length `T_r`.
#[derive(Clone, Debug)]
pub struct Curve {
    dim: usize,
    points: Vec<Point>,
    params: Vec<f64>,
    closed: bool,
    projection_plane: Option<CoordPlane>,
}

/// Natural parametrization: consecutive duplicates are dropped, parameters
/// are cumulative segment lengths, and closed curves are closed up by
/// repeating the first point.
pub fn arclength_parametrize(dim: usize, points: &[Point], closed: bool) -> Result<Curve> {
    let mut pts: Vec<Point> = Vec::with_capacity(points.len() + 1);
    for p in points {
        if pts.last() != Some(p) {
            pts.push(*p);
        }
    }
    if closed {
        if pts.last() == Some(&pts[0]) && pts.len() > 1 {
            // already explicitly closed
        } else {
            let first = pts[0];
            pts.push(first);
        }
    }
    if pts.len() < 2 {
        return Err(Error::DegenerateCurve);
    }
    let mut params = Vec::with_capacity(pts.len());
    params.push(0.0);
    for w in pts.windows(2) {
        let step = w[1].dist(&w[0]);
        params.push(params.last().unwrap() + step);
    }
    if !(*params.last().unwrap() > 0.0) {
        return Err(Error::DegenerateCurve);
    }
    Ok(Curve {
        dim,
        points: pts,
        params,
        closed,
        projection_plane: None,
    })
}

impl Curve {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn total_length(&self) -> f64 {
        *self.params.last().unwrap()
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn projection_plane(&self) -> Option<CoordPlane> {
        self.projection_plane
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Unit direction of segment `j`.
    pub fn segment_dir(&self, j: usize) -> Point {
        let d = self.points[j + 1].sub(&self.points[j]);
        d.scale(1.0 / (self.params[j + 1] - self.params[j]))
    }

    /// Segment index containing parameter `s` (clamped to `[0, T_r]`).
    pub fn segment_of(&self, s: f64) -> usize {
        if s <= 0.0 {
            return 0;
        }
        if s >= self.total_length() {
            return self.segment_count() - 1;
        }
        match self.params.binary_search_by(|p| p.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(self.segment_count() - 1),
            Err(i) => i - 1,
        }
    }

    /// Point at parameter `s`.
    pub fn point_at(&self, s: f64) -> Point {
        let j = self.segment_of(s);
        let local = (s - self.params[j]).clamp(0.0, self.params[j + 1] - self.params[j]);
        self.points[j].add(&self.segment_dir(j).scale(local))
    }

    /// Declares the projection plane after validating the graph-over-plane
    /// conditions: the projected polyline must be in convex position and
    /// every segment must make an angle `<= angle_bound` with the plane.
    pub fn set_projection_plane(&mut self, plane: CoordPlane, angle_bound: f64) -> Result<()> {
        if self.dim != 3 {
            return Err(Error::InvalidArgument(String::from(
                "projection planes apply to 3-D curves",
            )));
        }
        let worst = self.max_plane_angle(plane);
        if worst > angle_bound + 1e-12 {
            return Err(Error::InvalidArgument(String::from(
                "segment angle with the projection plane exceeds the bound",
            )));
        }
        let projected: Vec<Point> = self.points.iter().map(|p| plane.project(p)).collect();
        if !is_convex_position(&projected) {
            return Err(Error::InvalidArgument(String::from(
                "projected polyline is not in convex position",
            )));
        }
        self.projection_plane = Some(plane);
        Ok(())
    }

    /// Largest angle between a segment direction and the plane.
    pub fn max_plane_angle(&self, plane: CoordPlane) -> f64 {
        let axis = plane.dropped_axis();
        let mut worst: f64 = 0.0;
        for j in 0..self.segment_count() {
            let u = self.segment_dir(j);
            let vertical = num::abs(u.0[axis]);
            let horizontal = plane.project(&u).norm();
            worst = num::max(worst, num::atan(vertical / num::max(horizontal, 1e-300)));
        }
        worst
    }
}

/// Checks that a closed polyline (first point repeated at the end) turns
/// consistently in one direction.
fn is_convex_position(points: &[Point]) -> bool {
    let n = points.len() - 1; // last repeats first
    if n < 3 {
        return false;
    }
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        let c = points[(i + 2) % n];
        let cr = cross2(&b.sub(&a), &c.sub(&b));
        if cr != 0.0 {
            if sign != 0.0 && (cr > 0.0) != (sign > 0.0) {
                return false;
            }
            sign = cr;
        }
    }
    true
}

/// Variation of the unit tangent: sum of `|u_{j+1} - u_j|` over consecutive
/// segments, including the wrap-around pair on closed curves.
pub fn tangent_variation(curve: &Curve) -> f64 {
    let m = curve.segment_count();
    let mut total = 0.0;
    for j in 0..m.saturating_sub(1) {
        total += curve.segment_dir(j + 1).sub(&curve.segment_dir(j)).norm();
    }
    if curve.closed() && m >= 2 {
        total += curve.segment_dir(0).sub(&curve.segment_dir(m - 1)).norm();
    }
    total
}

/// Variation of the *projected velocity* `Pr(r')` with respect to the curve's
/// own parameter (no renormalization). Projection is linear and 1-Lipschitz,
/// so this never exceeds [`tangent_variation`].
pub fn projected_direction_variation(curve: &Curve, plane: CoordPlane) -> f64 {
    let m = curve.segment_count();
    let proj = |j: usize| plane.project(&curve.segment_dir(j));
    let mut total = 0.0;
    for j in 0..m.saturating_sub(1) {
        total += proj(j + 1).sub(&proj(j)).norm();
    }
    if curve.closed() && m >= 2 {
        total += proj(0).sub(&proj(m - 1)).norm();
    }
    total
}

/// Curve family kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Ellipses,
    RandomConvex,
    Mixed,
}

/// Generates a seeded family of closed curves inside the domain: inscribed
/// ellipse polygons and/or convex hulls of random interior points in 2-D,
/// lifted convex polygons over a coordinate plane in 3-D.
pub fn generate_family(
    domain: &Domain,
    count: usize,
    seed: u64,
    kind: FamilyKind,
    angle_bound: f64,
) -> Result<Vec<Curve>> {
    if count == 0 {
        return Err(Error::InvalidArgument(String::from("count must be >= 1")));
    }
    if domain.dim() == 1 {
        return Err(Error::InvalidArgument(String::from(
            "closed curve families need dimension >= 2",
        )));
    }
    if !(angle_bound > 0.0 && angle_bound < core::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidArgument(String::from(
            "angle_bound must lie in (0, pi/2)",
        )));
    }
    let mut rng = sampling::seeded(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let use_ellipse = match kind {
            FamilyKind::Ellipses => true,
            FamilyKind::RandomConvex => false,
            FamilyKind::Mixed => i % 2 == 0,
        };
        let curve = match domain.dim() {
            2 => {
                let pts = if use_ellipse {
                    inscribed_ellipse(domain, &mut rng, 64)
                } else {
                    random_convex_polygon(domain, &mut rng)?
                };
                arclength_parametrize(2, &pts, true)?
            }
            3 => lifted_polygon(domain, &mut rng, i, use_ellipse, angle_bound)?,
            _ => unreachable!(),
        };
        out.push(curve);
    }
    Ok(out)
}

/// Distance from `origin` to the domain boundary along `dir` (unit not
/// required; the result is in units of `|dir|`).
fn ray_exit(domain: &Domain, origin: &Point, dir: &Point) -> f64 {
    // bisection on the signed inset; robust for any convex kind
    let mut lo = 0.0f64;
    let (bb_lo, bb_hi) = domain.bounding_box();
    let mut hi = bb_hi.sub(&bb_lo).norm() / num::max(dir.norm(), 1e-300) + 1.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if domain.signed_inset(&origin.add(&dir.scale(mid))) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn inscribed_ellipse(domain: &Domain, rng: &mut ChaCha8Rng, segments: usize) -> Vec<Point> {
    let center = domain.anchor();
    let phi = sampling::uniform(rng, 0.0, core::f64::consts::PI);
    let (cp, sp) = (num::cos(phi), num::sin(phi));
    let a = sampling::uniform(rng, 0.6, 1.0);
    let b = sampling::uniform(rng, 0.4, 1.0);
    let dirs: Vec<Point> = (0..segments)
        .map(|k| {
            let th = 2.0 * core::f64::consts::PI * k as f64 / segments as f64;
            let (x, y) = (a * num::cos(th), b * num::sin(th));
            Point::new2(cp * x - sp * y, sp * x + cp * y)
        })
        .collect();
    let mut scale = f64::INFINITY;
    for d in &dirs {
        scale = num::min(scale, ray_exit(domain, &center, d));
    }
    let scale = 0.85 * scale;
    dirs.iter().map(|d| center.add(&d.scale(scale))).collect()
}

fn random_convex_polygon(domain: &Domain, rng: &mut ChaCha8Rng) -> Result<Vec<Point>> {
    for _ in 0..64 {
        let n = rng.gen_range(8..=16);
        let pts: Vec<Point> = (0..n).map(|_| domain.sample_interior(rng)).collect();
        let hull = hull_ccw(&pts);
        if hull.len() >= 3 {
            return Ok(hull);
        }
    }
    Err(Error::DegenerateCurve)
}

fn hull_ccw(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| {
        a.0[0]
            .partial_cmp(&b.0[0])
            .unwrap()
            .then(a.0[1].partial_cmp(&b.0[1]).unwrap())
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &Point, a: &Point, b: &Point| cross2(&a.sub(o), &b.sub(o));
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// 3-D graph-over-plane curve: a convex polygon in a coordinate plane of the
/// box, lifted by a sinusoidal height whose slope keeps every segment within
/// the angle bound.
fn lifted_polygon(
    domain: &Domain,
    rng: &mut ChaCha8Rng,
    index: usize,
    use_ellipse: bool,
    angle_bound: f64,
) -> Result<Curve> {
    let plane = match index % 3 {
        0 => CoordPlane::Xy,
        1 => CoordPlane::Xz,
        _ => CoordPlane::Yz,
    };
    let (ax, ay) = plane.axes();
    let az = plane.dropped_axis();
    let (lo, hi) = domain.bounding_box();
    let planar = Domain::from_box(&[lo.0[ax], lo.0[ay]], &[hi.0[ax], hi.0[ay]])?;
    let polygon = if use_ellipse {
        inscribed_ellipse(&planar, rng, 48)
    } else {
        random_convex_polygon(&planar, rng)?
    };
    let n = polygon.len();
    let mode = 1 + (index % 2);
    let phase = sampling::uniform(rng, 0.0, core::f64::consts::PI);
    let profile: Vec<f64> = (0..n)
        .map(|j| num::sin(2.0 * core::f64::consts::PI * mode as f64 * j as f64 / n as f64 + phase))
        .collect();
    // amplitude: respect the slope bound per segment and stay inside the box
    let mut max_ratio = 0.0f64;
    for j in 0..n {
        let dh = num::abs(profile[(j + 1) % n] - profile[j]);
        let dxy = polygon[(j + 1) % n].dist(&polygon[j]);
        if dxy > 0.0 {
            max_ratio = num::max(max_ratio, dh / dxy);
        }
    }
    let slope_cap = 0.9 * num::sin(angle_bound) / num::cos(angle_bound);
    let vertical_room = 0.4 * (hi.0[az] - lo.0[az]);
    let amplitude = if max_ratio > 0.0 {
        num::min(slope_cap / max_ratio, vertical_room)
    } else {
        0.0
    };
    let mid = 0.5 * (lo.0[az] + hi.0[az]);
    let pts: Vec<Point> = (0..n)
        .map(|j| {
            let mut c = [0.0; 3];
            c[ax] = polygon[j].0[0];
            c[ay] = polygon[j].0[1];
            c[az] = mid + amplitude * profile[j];
            Point(c)
        })
        .collect();
    let mut curve = arclength_parametrize(3, &pts, true)?;
    curve.set_projection_plane(plane, angle_bound)?;
    Ok(curve)
}
