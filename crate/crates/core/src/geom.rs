//! Points in R^n (n <= 3) and the small dense linear algebra the mesh and
//! interpolation layers need.
//!
//! A [`Point`] always carries three coordinate slots; unused trailing slots
//! are kept at zero so dot products and norms can ignore the active
//! dimension. The active dimension lives on the containing structure
//! (domain, mesh, curve), not on the point.

use crate::num;
use alloc::vec::Vec;

/// A point (or vector) in R^1, R^2 or R^3, padded with zeros.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point(pub [f64; 3]);

impl Point {
    pub fn new1(x: f64) -> Self {
        Point([x, 0.0, 0.0])
    }

    pub fn new2(x: f64, y: f64) -> Self {
        Point([x, y, 0.0])
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Point([x, y, z])
    }

    /// Builds a point from the first `slice.len()` coordinates (<= 3).
    pub fn from_slice(slice: &[f64]) -> Self {
        let mut c = [0.0; 3];
        c[..slice.len()].copy_from_slice(slice);
        Point(c)
    }

    pub fn zero() -> Self {
        Point([0.0; 3])
    }

    #[inline]
    pub fn add(&self, other: &Point) -> Point {
        Point([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    #[inline]
    pub fn sub(&self, other: &Point) -> Point {
        Point([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Point {
        Point([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        num::sqrt(self.dot(self))
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    /// Midpoint of two points.
    #[inline]
    pub fn midpoint(&self, other: &Point) -> Point {
        self.add(other).scale(0.5)
    }

    /// Unit vector in the same direction; `None` for (near-)zero vectors.
    pub fn unit(&self) -> Option<Point> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    pub fn cross(&self, other: &Point) -> Point {
        Point([
            self.0[1] * other.0[2] - self.0[2] * other.0[1],
            self.0[2] * other.0[0] - self.0[0] * other.0[2],
            self.0[0] * other.0[1] - self.0[1] * other.0[0],
        ])
    }

    /// Coordinates truncated to the active dimension.
    pub fn coords(&self, dim: usize) -> &[f64] {
        &self.0[..dim]
    }
}

/// 2-D cross product (z-component of the 3-D cross of padded vectors).
#[inline]
pub fn cross2(a: &Point, b: &Point) -> f64 {
    a.0[0] * b.0[1] - a.0[1] * b.0[0]
}

/// Solves the n x n system `rows * x = rhs` by Cramer's rule, n <= 3.
/// Returns `None` when the determinant vanishes (relative to row scale).
pub fn solve_small(dim: usize, rows: &[Point], rhs: &[f64]) -> Option<Point> {
    debug_assert_eq!(rows.len(), dim);
    debug_assert_eq!(rhs.len(), dim);
    let scale: f64 = rows.iter().map(|r| r.norm()).fold(1.0, num::max);
    match dim {
        1 => {
            let a = rows[0].0[0];
            if num::abs(a) <= 1e-14 * scale {
                return None;
            }
            Some(Point::new1(rhs[0] / a))
        }
        2 => {
            let det = cross2(&rows[0], &rows[1]);
            if num::abs(det) <= 1e-14 * scale * scale {
                return None;
            }
            let x = (rhs[0] * rows[1].0[1] - rhs[1] * rows[0].0[1]) / det;
            let y = (rows[0].0[0] * rhs[1] - rows[1].0[0] * rhs[0]) / det;
            Some(Point::new2(x, y))
        }
        3 => {
            let det = rows[0].dot(&rows[1].cross(&rows[2]));
            if num::abs(det) <= 1e-14 * scale * scale * scale {
                return None;
            }
            let col = |k: usize| -> f64 {
                let mut m = [rows[0], rows[1], rows[2]];
                for (i, r) in m.iter_mut().enumerate() {
                    r.0[k] = rhs[i];
                }
                m[0].dot(&m[1].cross(&m[2]))
            };
            Some(Point::new3(col(0) / det, col(1) / det, col(2) / det))
        }
        _ => None,
    }
}

/// Barycentric coordinates of `p` in the simplex spanned by `verts`
/// (`dim + 1` points). Returns `None` for degenerate simplices.
pub fn barycentric(dim: usize, verts: &[Point], p: &Point) -> Option<Vec<f64>> {
    debug_assert_eq!(verts.len(), dim + 1);
    let rows: Vec<Point> = (1..=dim).map(|i| verts[i].sub(&verts[0])).collect();
    // solve_small expects row-major equations <row_i, mu> = rhs_i; here the
    // unknown multipliers weight the edge vectors, so pass the transpose.
    let mut cols = [Point::zero(); 3];
    for (i, r) in rows.iter().enumerate() {
        for k in 0..dim {
            cols[k].0[i] = r.0[k];
        }
    }
    let d = p.sub(&verts[0]);
    let mu = solve_small(dim, &cols[..dim], d.coords(dim))?;
    let mut out = Vec::with_capacity(dim + 1);
    let mut rest = 0.0;
    for i in 0..dim {
        rest += mu.0[i];
    }
    out.push(1.0 - rest);
    out.extend_from_slice(mu.coords(dim));
    Some(out)
}

/// Longest pairwise vertex distance of a simplex.
pub fn simplex_diameter(verts: &[Point]) -> f64 {
    let mut d = 0.0;
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            d = num::max(d, verts[i].dist(&verts[j]));
        }
    }
    d
}

/// Unsigned n-volume of a simplex with `dim + 1` vertices.
pub fn simplex_volume(dim: usize, verts: &[Point]) -> f64 {
    match dim {
        1 => num::abs(verts[1].0[0] - verts[0].0[0]),
        2 => num::abs(cross2(&verts[1].sub(&verts[0]), &verts[2].sub(&verts[0]))) / 2.0,
        3 => {
            let a = verts[1].sub(&verts[0]);
            let b = verts[2].sub(&verts[0]);
            let c = verts[3].sub(&verts[0]);
            num::abs(a.dot(&b.cross(&c))) / 6.0
        }
        _ => 0.0,
    }
}

/// Area of a triangle embedded in up to 3-D.
fn triangle_area(a: &Point, b: &Point, c: &Point) -> f64 {
    b.sub(a).cross(&c.sub(a)).norm() / 2.0
}

/// Circumradius over inradius of a simplex; `f64::INFINITY` when degenerate.
/// For 1-D cells both radii equal half the length, so the ratio is 1.
pub fn shape_ratio(dim: usize, verts: &[Point]) -> f64 {
    match dim {
        1 => 1.0,
        2 => {
            let (a, b, c) = (
                verts[1].dist(&verts[2]),
                verts[0].dist(&verts[2]),
                verts[0].dist(&verts[1]),
            );
            let area = simplex_volume(2, verts);
            if area == 0.0 {
                return f64::INFINITY;
            }
            let circum = a * b * c / (4.0 * area);
            let inr = 2.0 * area / (a + b + c);
            circum / inr
        }
        3 => {
            let vol = simplex_volume(3, verts);
            if vol == 0.0 {
                return f64::INFINITY;
            }
            // circumcenter from 2 (v_i - v_0) . c = |v_i|^2 - |v_0|^2
            let rows: Vec<Point> = (1..4).map(|i| verts[i].sub(&verts[0]).scale(2.0)).collect();
            let rhs: Vec<f64> = (1..4)
                .map(|i| verts[i].dot(&verts[i]) - verts[0].dot(&verts[0]))
                .collect();
            let center = match solve_small(3, &rows, &rhs) {
                Some(c) => c,
                None => return f64::INFINITY,
            };
            let circum = center.dist(&verts[0]);
            let faces = triangle_area(&verts[1], &verts[2], &verts[3])
                + triangle_area(&verts[0], &verts[2], &verts[3])
                + triangle_area(&verts[0], &verts[1], &verts[3])
                + triangle_area(&verts[0], &verts[1], &verts[2]);
            let inr = 3.0 * vol / faces;
            circum / inr
        }
        _ => f64::INFINITY,
    }
}
