//! Piecewise-linear interpolation on a simplicial mesh and the dihedral
//! angles (hinges) of the interpolant.

use crate::error::Error;
use crate::field::ScalarField;
use crate::geom::{self, Point};
use crate::mesh::SimplicialMesh;
use crate::num;
use crate::Result;
use alloc::string::String;
use alloc::vec::Vec;

/// One affine piece `x -> <gradient, x> + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffinePiece {
    pub gradient: Point,
    pub offset: f64,
}

impl AffinePiece {
    #[inline]
    pub fn value(&self, p: &Point) -> f64 {
        self.gradient.dot(p) + self.offset
    }
}

/// Classification of a hinge by the sign of its gradient jump.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HingeKind {
    Convex,
    Concave,
    Flat,
}

/// A dihedral angle of the interpolant: two affine pieces meeting at an
/// interior facet, with the facet normal oriented from the lower-index
/// simplex to the higher-index one.
#[derive(Clone, Debug)]
pub struct Hinge {
    pub facet: usize,
    /// Incident simplices `(k, l)`, `k < l`.
    pub simplices: (usize, usize),
    pub left_piece: AffinePiece,
    pub right_piece: AffinePiece,
    /// Unit normal of the facet hyperplane, oriented from `k` toward `l`.
    pub normal: Point,
    /// `<g_l - g_k, normal>`.
    pub jump: f64,
    pub kind: HingeKind,
}

/// The multifaceted interpolant: one affine piece per mesh simplex, agreeing
/// with the vertex values. Immutable after construction.
#[derive(Clone, Debug)]
pub struct PLFunction {
    mesh: SimplicialMesh,
    vertex_values: Vec<f64>,
    pieces: Vec<AffinePiece>,
}

/// Interpolates `field` at the mesh vertices and solves the affine piece of
/// every simplex from the vertex values.
pub fn interpolate(field: &dyn ScalarField, mesh: SimplicialMesh) -> Result<PLFunction> {
    if field.dim() != mesh.dim() {
        return Err(Error::DimensionMismatch {
            expected: mesh.dim(),
            got: field.dim(),
        });
    }
    let mut values = Vec::with_capacity(mesh.vertices().len());
    for v in mesh.vertices() {
        values.push(field.eval(v)?);
    }
    PLFunction::from_vertex_values(mesh, values)
}

impl PLFunction {
    /// Builds the interpolant directly from per-vertex samples (the tabulated
    /// field path).
    pub fn from_vertex_values(mesh: SimplicialMesh, vertex_values: Vec<f64>) -> Result<PLFunction> {
        if vertex_values.len() != mesh.vertices().len() {
            return Err(Error::DimensionMismatch {
                expected: mesh.vertices().len(),
                got: vertex_values.len(),
            });
        }
        let dim = mesh.dim();
        let mut pieces = Vec::with_capacity(mesh.simplex_count());
        for s in 0..mesh.simplex_count() {
            let ids = mesh.simplex(s);
            let verts = mesh.simplex_points(s);
            let rows: Vec<Point> = (1..=dim).map(|i| verts[i].sub(&verts[0])).collect();
            let rhs: Vec<f64> = (1..=dim)
                .map(|i| vertex_values[ids[i]] - vertex_values[ids[0]])
                .collect();
            let gradient = geom::solve_small(dim, &rows, &rhs).ok_or_else(|| {
                Error::DegenerateDomain(String::from("degenerate simplex in mesh"))
            })?;
            let offset = vertex_values[ids[0]] - gradient.dot(&verts[0]);
            pieces.push(AffinePiece { gradient, offset });
        }
        Ok(PLFunction {
            mesh,
            vertex_values,
            pieces,
        })
    }

    pub fn mesh(&self) -> &SimplicialMesh {
        &self.mesh
    }

    pub fn vertex_values(&self) -> &[f64] {
        &self.vertex_values
    }

    pub fn piece(&self, simplex: usize) -> &AffinePiece {
        &self.pieces[simplex]
    }

    /// Value of the affine piece of a known simplex.
    #[inline]
    pub fn evaluate_in(&self, simplex: usize, p: &Point) -> f64 {
        self.pieces[simplex].value(p)
    }

    /// Value at `p`; points on shared facets use the lowest-index incident
    /// simplex (continuity makes the choice immaterial up to rounding).
    pub fn evaluate(&self, p: &Point) -> Result<f64> {
        Ok(self.evaluate_in(self.mesh.locate(p)?, p))
    }

    /// Exact Lipschitz constant of the interpolant: the largest piece
    /// gradient norm.
    pub fn lipschitz_estimate(&self) -> f64 {
        self.pieces
            .iter()
            .map(|a| a.gradient.norm())
            .fold(0.0, num::max)
    }

    /// One hinge per interior facet, in facet-id order.
    pub fn hinges(&self) -> Vec<Hinge> {
        let mesh = &self.mesh;
        let mut out = Vec::new();
        for (fid, facet) in mesh.facets().iter().enumerate() {
            let Some(right) = facet.right else { continue };
            let left = facet.left;
            let normal = self.facet_normal(fid, left, right);
            let g_l = self.pieces[left].gradient;
            let g_r = self.pieces[right].gradient;
            let jump = g_r.sub(&g_l).dot(&normal);
            let eps = 1e-9 * (1.0 + g_l.norm() + g_r.norm());
            let kind = if jump > eps {
                HingeKind::Convex
            } else if jump < -eps {
                HingeKind::Concave
            } else {
                HingeKind::Flat
            };
            out.push(Hinge {
                facet: fid,
                simplices: (left, right),
                left_piece: self.pieces[left],
                right_piece: self.pieces[right],
                normal,
                jump,
                kind,
            });
        }
        out
    }

    /// Unit normal of facet `fid` oriented from simplex `from` to `to`.
    fn facet_normal(&self, fid: usize, from: usize, to: usize) -> Point {
        let mesh = &self.mesh;
        let facet = mesh.facet(fid);
        let dim = mesh.dim();
        let vs: Vec<Point> = facet.vertices[..dim]
            .iter()
            .map(|&v| mesh.vertices()[v])
            .collect();
        let raw = match dim {
            1 => Point::new1(1.0),
            2 => {
                let e = vs[1].sub(&vs[0]);
                Point::new2(-e.0[1], e.0[0])
            }
            3 => vs[1].sub(&vs[0]).cross(&vs[2].sub(&vs[0])),
            _ => unreachable!(),
        };
        let unit = raw.unit().expect("facet with zero measure");
        let towards = mesh.centroid_of(to).sub(&mesh.centroid_of(from));
        if unit.dot(&towards) >= 0.0 {
            unit
        } else {
            unit.scale(-1.0)
        }
    }
}

impl ScalarField for PLFunction {
    fn dim(&self) -> usize {
        self.mesh.dim()
    }

    fn eval(&self, p: &Point) -> Result<f64> {
        self.evaluate(p)
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        Some(self.lipschitz_estimate())
    }
}
