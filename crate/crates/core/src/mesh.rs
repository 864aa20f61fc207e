//! Convex domains and nested quasi-uniform simplicial meshes.
//!
//! A [`Domain`] is given by the extreme points of a convex polytope plus an
//! interior anchor. [`triangulate`] builds a base simplicial mesh (uniform
//! bisection in 1-D, a diagonal split or centroid fan in 2-D, the
//! six-tetrahedra Kuhn split of a box in 3-D) and [`refine`] subdivides it uniformly
//! (edge-midpoint / red refinement), so level `k + 1` is nested in level `k`
//! and all diameters halve exactly.

use crate::error::Error;
use crate::geom::{self, cross2, Point};
use crate::num;
use crate::sampling;
use crate::Result;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;

/// Absolute tolerance on barycentric coordinates for containment queries.
pub const BARY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
enum DomainKind {
    Interval {
        lo: f64,
        hi: f64,
    },
    /// Hull vertices in counter-clockwise order.
    Polygon,
    Box3 {
        lo: Point,
        hi: Point,
    },
}

/// A convex domain in R^n, n in {1, 2, 3}.
///
/// 3-D domains are restricted to axis-aligned boxes; that is the shape the
/// Kuhn base mesh subdivides.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    dim: usize,
    vertices: Vec<Point>,
    anchor: Point,
    kind: DomainKind,
}

impl Domain {
    /// Builds a domain from extreme points. The anchor defaults to the
    /// centroid of the hull vertices and must be strictly interior when
    /// supplied.
    pub fn build(points: &[Vec<f64>], anchor: Option<&[f64]>) -> Result<Domain> {
        if points.is_empty() {
            return Err(Error::DegenerateDomain("no points".into()));
        }
        let dim = points[0].len();
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDomain(format!(
                "dimension {dim} not in 1..=3"
            )));
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        let pts: Vec<Point> = points.iter().map(|p| Point::from_slice(p)).collect();
        let (vertices, kind) = match dim {
            1 => {
                let lo = pts.iter().map(|p| p.0[0]).fold(f64::INFINITY, num::min);
                let hi = pts.iter().map(|p| p.0[0]).fold(f64::NEG_INFINITY, num::max);
                if !(hi - lo > 0.0) {
                    return Err(Error::DegenerateDomain("interval has zero length".into()));
                }
                (
                    vec![Point::new1(lo), Point::new1(hi)],
                    DomainKind::Interval { lo, hi },
                )
            }
            2 => {
                let hull = convex_hull_ccw(&pts);
                if hull.len() < 3 {
                    return Err(Error::DegenerateDomain(
                        "points are collinear or coincident".into(),
                    ));
                }
                (hull, DomainKind::Polygon)
            }
            3 => {
                let (lo, hi, verts) = box_from_corners(&pts)?;
                (verts, DomainKind::Box3 { lo, hi })
            }
            _ => unreachable!(),
        };
        let mut domain = Domain {
            dim,
            vertices,
            anchor: Point::zero(),
            kind,
        };
        domain.anchor = match anchor {
            None => domain.centroid(),
            Some(a) => {
                if a.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: a.len(),
                    });
                }
                let p = Point::from_slice(a);
                if !domain.is_strictly_interior(&p) {
                    return Err(Error::AnchorOutside);
                }
                p
            }
        };
        Ok(domain)
    }

    /// Axis-aligned box domain (interval in 1-D, rectangle in 2-D, box in 3-D).
    pub fn from_box(lo: &[f64], hi: &[f64]) -> Result<Domain> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        let dim = lo.len();
        let mut corners = Vec::new();
        for mask in 0..(1usize << dim) {
            let mut c = Vec::with_capacity(dim);
            for axis in 0..dim {
                c.push(if mask >> axis & 1 == 1 {
                    hi[axis]
                } else {
                    lo[axis]
                });
            }
            corners.push(c);
        }
        Domain::build(&corners, None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Hull extreme points (CCW in 2-D, canonical bit-order corners in 3-D).
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    fn centroid(&self) -> Point {
        let sum = self
            .vertices
            .iter()
            .fold(Point::zero(), |acc, v| acc.add(v));
        sum.scale(1.0 / self.vertices.len() as f64)
    }

    /// Signed inset: positive strictly inside, negative outside; measures the
    /// distance to the nearest supporting face.
    pub fn signed_inset(&self, p: &Point) -> f64 {
        match &self.kind {
            DomainKind::Interval { lo, hi } => num::min(p.0[0] - lo, hi - p.0[0]),
            DomainKind::Polygon => {
                let mut inset = f64::INFINITY;
                let k = self.vertices.len();
                for i in 0..k {
                    let a = &self.vertices[i];
                    let b = &self.vertices[(i + 1) % k];
                    let edge = b.sub(a);
                    let len = edge.norm();
                    inset = num::min(inset, cross2(&edge, &p.sub(a)) / len);
                }
                inset
            }
            DomainKind::Box3 { lo, hi } => {
                let mut inset = f64::INFINITY;
                for axis in 0..3 {
                    inset = num::min(inset, p.0[axis] - lo.0[axis]);
                    inset = num::min(inset, hi.0[axis] - p.0[axis]);
                }
                inset
            }
        }
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.signed_inset(p) >= -tol
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        hi.sub(&lo).norm()
    }

    fn is_strictly_interior(&self, p: &Point) -> bool {
        self.signed_inset(p) > 1e-12 * (1.0 + self.scale())
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        bounding_box(&self.vertices)
    }

    /// Uniform draw from the interior (rejection from the bounding box).
    pub fn sample_interior(&self, rng: &mut ChaCha8Rng) -> Point {
        let (lo, hi) = self.bounding_box();
        loop {
            let mut c = [0.0; 3];
            for axis in 0..self.dim {
                c[axis] = sampling::uniform(rng, lo.0[axis], hi.0[axis]);
            }
            let p = Point(c);
            if self.signed_inset(&p) > 0.0 {
                return p;
            }
        }
    }
}

fn bounding_box(points: &[Point]) -> (Point, Point) {
    let mut lo = Point([f64::INFINITY; 3]);
    let mut hi = Point([f64::NEG_INFINITY; 3]);
    for p in points {
        for axis in 0..3 {
            lo.0[axis] = num::min(lo.0[axis], p.0[axis]);
            hi.0[axis] = num::max(hi.0[axis], p.0[axis]);
        }
    }
    (lo, hi)
}

/// Andrew monotone chain; returns hull vertices in CCW order.
fn convex_hull_ccw(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| {
        a.0[0]
            .partial_cmp(&b.0[0])
            .unwrap()
            .then(a.0[1].partial_cmp(&b.0[1]).unwrap())
    });
    pts.dedup_by(|a, b| a == b);
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

/// Validates that `pts` are exactly the 8 corners of an axis-aligned box and
/// returns them in canonical bit order (index = ix + 2 iy + 4 iz).
fn box_from_corners(pts: &[Point]) -> Result<(Point, Point, Vec<Point>)> {
    let (lo, hi) = bounding_box(pts);
    let scale = hi.sub(&lo).norm();
    for axis in 0..3 {
        if !(hi.0[axis] - lo.0[axis] > 0.0) {
            return Err(Error::DegenerateDomain(format!(
                "box is flat along axis {axis}"
            )));
        }
    }
    let tol = 1e-12 * (1.0 + scale);
    let corner = |mask: usize| -> Point {
        let mut c = [0.0; 3];
        for axis in 0..3 {
            c[axis] = if mask >> axis & 1 == 1 {
                hi.0[axis]
            } else {
                lo.0[axis]
            };
        }
        Point(c)
    };
    let mut verts = Vec::with_capacity(8);
    for mask in 0..8 {
        let target = corner(mask);
        if !pts.iter().any(|p| p.dist(&target) <= tol) {
            return Err(Error::UnsupportedDomain(String::from(
                "3-D domains must be axis-aligned boxes (8 corner points)",
            )));
        }
        verts.push(target);
    }
    for p in pts {
        if !verts.iter().any(|v| v.dist(p) <= tol) {
            return Err(Error::UnsupportedDomain(String::from(
                "3-D domains must be axis-aligned boxes (extra non-corner point)",
            )));
        }
    }
    Ok((lo, hi, verts))
}

/// An interior or boundary (n-1)-face of the mesh. `left < right` when both
/// incident simplices exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Sorted vertex indices (first `dim` entries used).
    pub vertices: [usize; 3],
    pub left: usize,
    pub right: Option<usize>,
}

impl Facet {
    pub fn is_interior(&self) -> bool {
        self.right.is_some()
    }
}

/// Uniform bucket grid used by point location and segment tracing.
#[derive(Clone, Debug)]
struct LocGrid {
    origin: Point,
    cell: [f64; 3],
    counts: [usize; 3],
    buckets: Vec<Vec<u32>>,
}

impl LocGrid {
    fn build(dim: usize, vertices: &[Point], simplices: &[[usize; 4]]) -> LocGrid {
        let (lo, hi) = bounding_box(vertices);
        let per_axis = num::max(
            1.0,
            num::floor(libm::pow(simplices.len() as f64, 1.0 / dim as f64)),
        ) as usize;
        let per_axis = per_axis.clamp(1, 128);
        let mut counts = [1usize; 3];
        let mut cell = [1.0f64; 3];
        for axis in 0..dim {
            counts[axis] = per_axis;
            let extent = hi.0[axis] - lo.0[axis];
            cell[axis] = if extent > 0.0 {
                extent / per_axis as f64
            } else {
                1.0
            };
        }
        let total: usize = counts.iter().product();
        let mut buckets = vec![Vec::new(); total];
        for (si, s) in simplices.iter().enumerate() {
            let verts: Vec<Point> = s[..=dim].iter().map(|&v| vertices[v]).collect();
            let (slo, shi) = bounding_box(&verts);
            let range = Self::cell_range(dim, &lo, &cell, &counts, &slo, &shi);
            Self::for_each_cell(dim, &counts, &range, |idx| {
                buckets[idx].push(si as u32);
            });
        }
        LocGrid {
            origin: lo,
            cell,
            counts,
            buckets,
        }
    }

    fn axis_cell(&self, axis: usize, x: f64) -> isize {
        num::floor((x - self.origin.0[axis]) / self.cell[axis]) as isize
    }

    fn cell_range(
        dim: usize,
        origin: &Point,
        cell: &[f64; 3],
        counts: &[usize; 3],
        lo: &Point,
        hi: &Point,
    ) -> [(usize, usize); 3] {
        let mut range = [(0usize, 0usize); 3];
        for axis in 0..dim {
            let a = num::floor((lo.0[axis] - origin.0[axis]) / cell[axis]) as isize;
            let b = num::floor((hi.0[axis] - origin.0[axis]) / cell[axis]) as isize;
            let max = counts[axis] as isize - 1;
            range[axis] = (a.clamp(0, max) as usize, b.clamp(0, max) as usize);
        }
        range
    }

    fn for_each_cell(
        dim: usize,
        counts: &[usize; 3],
        range: &[(usize, usize); 3],
        mut f: impl FnMut(usize),
    ) {
        let (z0, z1) = if dim >= 3 { range[2] } else { (0, 0) };
        let (y0, y1) = if dim >= 2 { range[1] } else { (0, 0) };
        let (x0, x1) = range[0];
        for z in z0..=z1 {
            for y in y0..=y1 {
                for x in x0..=x1 {
                    f(x + counts[0] * (y + counts[1] * z));
                }
            }
        }
    }

    fn bucket_at(&self, dim: usize, p: &Point) -> &[u32] {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for axis in 0..dim {
            let c = self
                .axis_cell(axis, p.0[axis])
                .clamp(0, self.counts[axis] as isize - 1) as usize;
            idx += stride * c;
            stride *= self.counts[axis];
        }
        &self.buckets[idx]
    }

    fn candidates_in_box(&self, dim: usize, lo: &Point, hi: &Point) -> Vec<u32> {
        let range = Self::cell_range(dim, &self.origin, &self.cell, &self.counts, lo, hi);
        let mut out: Vec<u32> = Vec::new();
        Self::for_each_cell(dim, &self.counts, &range, |idx| {
            out.extend_from_slice(&self.buckets[idx]);
        });
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A simplicial mesh over a domain hull, with facet adjacency and a point
/// location index. Immutable after construction.
#[derive(Clone, Debug)]
pub struct SimplicialMesh {
    dim: usize,
    level: u32,
    vertices: Vec<Point>,
    simplices: Vec<[usize; 4]>,
    facets: Vec<Facet>,
    /// Global facet id for each local facet (the one opposite local vertex i).
    simplex_facets: Vec<[usize; 4]>,
    /// Parent simplex index at the previous level; empty for a base mesh.
    parents: Vec<usize>,
    shape_bound: f64,
    max_diameter: f64,
    min_diameter: f64,
    grid: LocGrid,
}

impl SimplicialMesh {
    fn assemble(
        dim: usize,
        level: u32,
        vertices: Vec<Point>,
        simplices: Vec<[usize; 4]>,
        parents: Vec<usize>,
    ) -> SimplicialMesh {
        // Facets keyed by sorted vertex tuple; BTreeMap gives a stable id order.
        let mut map: BTreeMap<[usize; 3], (usize, Option<usize>)> = BTreeMap::new();
        for (si, s) in simplices.iter().enumerate() {
            for local in 0..=dim {
                let key = facet_key(dim, s, local);
                match map.get_mut(&key) {
                    None => {
                        map.insert(key, (si, None));
                    }
                    Some(entry) => {
                        debug_assert!(entry.1.is_none(), "facet shared by >2 simplices");
                        entry.1 = Some(si);
                    }
                }
            }
        }
        let mut facets = Vec::with_capacity(map.len());
        let mut ids: BTreeMap<[usize; 3], usize> = BTreeMap::new();
        for (key, (a, b)) in &map {
            let (left, right) = match b {
                Some(b) => (num_min(*a, *b), Some(num_max(*a, *b))),
                None => (*a, None),
            };
            ids.insert(*key, facets.len());
            facets.push(Facet {
                vertices: *key,
                left,
                right,
            });
        }
        let mut simplex_facets = vec![[usize::MAX; 4]; simplices.len()];
        for (si, s) in simplices.iter().enumerate() {
            for local in 0..=dim {
                let key = facet_key(dim, s, local);
                simplex_facets[si][local] = ids[&key];
            }
        }
        let mut shape_bound: f64 = 0.0;
        let mut max_diameter: f64 = 0.0;
        let mut min_diameter = f64::INFINITY;
        for s in &simplices {
            let verts: Vec<Point> = s[..=dim].iter().map(|&v| vertices[v]).collect();
            shape_bound = num::max(shape_bound, geom::shape_ratio(dim, &verts));
            let d = geom::simplex_diameter(&verts);
            max_diameter = num::max(max_diameter, d);
            min_diameter = num::min(min_diameter, d);
        }
        let grid = LocGrid::build(dim, &vertices, &simplices);
        SimplicialMesh {
            dim,
            level,
            vertices,
            simplices,
            facets,
            simplex_facets,
            parents,
            shape_bound,
            max_diameter,
            min_diameter,
            grid,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    /// Vertex indices of simplex `i` (`dim + 1` entries).
    pub fn simplex(&self, i: usize) -> &[usize] {
        &self.simplices[i][..=self.dim]
    }

    pub fn simplex_points(&self, i: usize) -> Vec<Point> {
        self.simplex(i).iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, id: usize) -> &Facet {
        &self.facets[id]
    }

    /// Global facet ids of simplex `i`.
    pub fn facets_of(&self, i: usize) -> &[usize] {
        &self.simplex_facets[i][..=self.dim]
    }

    /// Parent simplex at the previous level (empty for base meshes).
    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn shape_bound(&self) -> f64 {
        self.shape_bound
    }

    pub fn max_diameter(&self) -> f64 {
        self.max_diameter
    }

    pub fn min_diameter(&self) -> f64 {
        self.min_diameter
    }

    pub fn centroid_of(&self, i: usize) -> Point {
        let pts = self.simplex_points(i);
        pts.iter()
            .fold(Point::zero(), |acc, p| acc.add(p))
            .scale(1.0 / pts.len() as f64)
    }

    /// Barycentric coordinates of `p` in simplex `i`.
    pub fn barycentric_in(&self, i: usize, p: &Point) -> Option<Vec<f64>> {
        geom::barycentric(self.dim, &self.simplex_points(i), p)
    }

    /// Index of a simplex containing `p`. Points on shared facets resolve to
    /// the lowest-index incident simplex.
    pub fn locate(&self, p: &Point) -> Result<usize> {
        let mut best: Option<usize> = None;
        for &cand in self.grid.bucket_at(self.dim, p) {
            let cand = cand as usize;
            if let Some(b) = self.barycentric_in(cand, p) {
                if b.iter().all(|&x| x >= -BARY_TOL) {
                    best = Some(match best {
                        None => cand,
                        Some(prev) => num_min(prev, cand),
                    });
                }
            }
        }
        best.ok_or(Error::OutsideDomain)
    }

    /// Simplices whose bounding boxes meet the box `[lo, hi]`; ascending ids.
    pub fn simplices_near_box(&self, lo: &Point, hi: &Point) -> Vec<u32> {
        self.grid.candidates_in_box(self.dim, lo, hi)
    }
}

fn facet_key(dim: usize, simplex: &[usize; 4], skip_local: usize) -> [usize; 3] {
    let mut key = [usize::MAX; 3];
    let mut n = 0;
    for local in 0..=dim {
        if local != skip_local {
            key[n] = simplex[local];
            n += 1;
        }
    }
    key[..n].sort_unstable();
    key
}

fn num_min(a: usize, b: usize) -> usize {
    if a < b {
        a
    } else {
        b
    }
}

fn num_max(a: usize, b: usize) -> usize {
    if a > b {
        a
    } else {
        b
    }
}

/// Builds the level-`level` mesh of a domain: the base triangulation refined
/// `level` times. Max simplex diameter is `h(0) * 2^-level` exactly.
pub fn triangulate(domain: &Domain, level: u32) -> SimplicialMesh {
    let mut mesh = base_mesh(domain);
    for _ in 0..level {
        mesh = refine(&mesh);
    }
    mesh
}

fn base_mesh(domain: &Domain) -> SimplicialMesh {
    match &domain.kind {
        DomainKind::Interval { lo, hi } => {
            let mid = 0.5 * (lo + hi);
            let vertices = vec![Point::new1(*lo), Point::new1(mid), Point::new1(*hi)];
            let simplices = vec![[0, 1, 0, 0], [1, 2, 0, 0]];
            SimplicialMesh::assemble(1, 0, vertices, simplices, Vec::new())
        }
        DomainKind::Polygon => {
            // triangles and quads split without new vertices (one diagonal);
            // larger polygons fan from the centroid, which keeps the cells
            // round enough for the shape bound
            let mut vertices = domain.vertices.clone();
            let k = vertices.len();
            let mut simplices = Vec::new();
            if k <= 4 {
                for i in 1..k - 1 {
                    simplices.push([0, i, i + 1, 0]);
                }
            } else {
                let centroid = vertices
                    .iter()
                    .fold(Point::zero(), |acc, v| acc.add(v))
                    .scale(1.0 / k as f64);
                vertices.push(centroid);
                for i in 0..k {
                    simplices.push([i, (i + 1) % k, k, 0]);
                }
            }
            SimplicialMesh::assemble(2, 0, vertices, simplices, Vec::new())
        }
        DomainKind::Box3 { .. } => {
            // Kuhn split: one tetrahedron per axis permutation, walking from
            // corner 000 to corner 111; all six share the main diagonal.
            let vertices = domain.vertices.clone();
            let perms: [[usize; 3]; 6] = [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ];
            let mut simplices = Vec::with_capacity(6);
            for perm in perms {
                let mut mask = 0usize;
                let mut tet = [0usize; 4];
                for (i, axis) in perm.iter().enumerate() {
                    mask |= 1 << axis;
                    tet[i + 1] = mask;
                }
                simplices.push(tet);
            }
            SimplicialMesh::assemble(3, 0, vertices, simplices, Vec::new())
        }
    }
}

/// Uniform red refinement: every edge gains a midpoint and each simplex is
/// split into 2^dim children. Parent vertices keep their indices.
pub fn refine(mesh: &SimplicialMesh) -> SimplicialMesh {
    let dim = mesh.dim;
    let mut vertices = mesh.vertices.clone();
    let mut midpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
        let key = (num_min(a, b), num_max(a, b));
        *midpoint.entry(key).or_insert_with(|| {
            vertices.push(vertices[key.0].midpoint(&vertices[key.1]));
            vertices.len() - 1
        })
    };
    let mut simplices = Vec::with_capacity(mesh.simplices.len() << dim);
    let mut parents = Vec::with_capacity(mesh.simplices.len() << dim);
    for (si, s) in mesh.simplices.iter().enumerate() {
        match dim {
            1 => {
                let m = mid(s[0], s[1], &mut vertices);
                simplices.push([s[0], m, 0, 0]);
                simplices.push([m, s[1], 0, 0]);
                parents.extend_from_slice(&[si, si]);
            }
            2 => {
                let m01 = mid(s[0], s[1], &mut vertices);
                let m02 = mid(s[0], s[2], &mut vertices);
                let m12 = mid(s[1], s[2], &mut vertices);
                simplices.push([s[0], m01, m02, 0]);
                simplices.push([m01, s[1], m12, 0]);
                simplices.push([m02, m12, s[2], 0]);
                simplices.push([m01, m12, m02, 0]);
                parents.extend_from_slice(&[si, si, si, si]);
            }
            3 => {
                // Bey's red refinement: four corner tetrahedra plus the inner
                // octahedron cut along the (m02, m13) diagonal.
                let m01 = mid(s[0], s[1], &mut vertices);
                let m02 = mid(s[0], s[2], &mut vertices);
                let m03 = mid(s[0], s[3], &mut vertices);
                let m12 = mid(s[1], s[2], &mut vertices);
                let m13 = mid(s[1], s[3], &mut vertices);
                let m23 = mid(s[2], s[3], &mut vertices);
                let children = [
                    [s[0], m01, m02, m03],
                    [m01, s[1], m12, m13],
                    [m02, m12, s[2], m23],
                    [m03, m13, m23, s[3]],
                    [m01, m02, m03, m13],
                    [m01, m02, m12, m13],
                    [m02, m03, m13, m23],
                    [m02, m12, m13, m23],
                ];
                simplices.extend_from_slice(&children);
                parents.extend_from_slice(&[si; 8]);
            }
            _ => unreachable!(),
        }
    }
    SimplicialMesh::assemble(dim, mesh.level + 1, vertices, simplices, parents)
}
