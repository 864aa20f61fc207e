//! Scalar fields: the built-in catalog plus the trait the interpolation and
//! tracing layers consume.

use crate::error::Error;
use crate::geom::{cross2, Point};
use crate::mesh::Domain;
use crate::num;
use crate::Result;
use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

/// A total scalar function on a convex domain.
///
/// Implementations must be effect-free: [`crate::interp::interpolate`] may
/// evaluate distinct vertices in any order and callers may evaluate
/// concurrently.
pub trait ScalarField: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, p: &Point) -> Result<f64>;

    /// Optional Lipschitz upper bound; sampled difference quotients must stay
    /// below `1.01 *` this value.
    fn lipschitz_hint(&self) -> Option<f64> {
        None
    }
}

impl ScalarField for Box<dyn ScalarField> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, p: &Point) -> Result<f64> {
        (**self).eval(p)
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        (**self).lipschitz_hint()
    }
}

/// Built-in catalog fields.
#[derive(Clone, Debug)]
pub enum Builtin {
    /// `<g, x> + b`
    Affine {
        gradient: Point,
        offset: f64,
        dim: usize,
    },
    /// `|x|` on an interval
    Abs1d,
    /// `-|x|`
    NegAbs1d,
    /// `|x|^2`
    Quadratic { dim: usize },
    /// `x^2 - y^2`
    Saddle,
    /// `a * exp(-|x - c|^2 / (2 sigma^2))`
    GaussianBump {
        center: Point,
        sigma: f64,
        amplitude: f64,
        dim: usize,
    },
    /// `x^2 sin(1 / x^2)`, extended by 0 at the origin. Differentiable but
    /// its derivative has unbounded variation near 0, so it is not DC.
    Osc1d,
    /// Euclidean distance to a convex polygon (zero inside).
    DistToPolygon { polygon: Vec<Point> },
}

impl Builtin {
    /// Catalog entry by name with default parameters.
    pub fn by_name(name: &str) -> Result<Builtin> {
        match name {
            "affine" => Ok(Builtin::Affine {
                gradient: Point::new2(1.0, -0.5),
                offset: 0.25,
                dim: 2,
            }),
            "abs1d" => Ok(Builtin::Abs1d),
            "neg_abs1d" => Ok(Builtin::NegAbs1d),
            "quadratic" => Ok(Builtin::Quadratic { dim: 2 }),
            "saddle" => Ok(Builtin::Saddle),
            "gaussian_bump" => Ok(Builtin::GaussianBump {
                center: Point::zero(),
                sigma: 0.5,
                amplitude: 1.0,
                dim: 2,
            }),
            "osc1d" => Ok(Builtin::Osc1d),
            // small rotated pentagon: family curves enclose it, so traces
            // meet the distance crease transversally at most
            "dist_to_polygon" => Ok(Builtin::DistToPolygon {
                polygon: (0..5)
                    .map(|k| {
                        let th = 0.3
                            + core::f64::consts::FRAC_PI_2
                            + 2.0 * core::f64::consts::PI * k as f64 / 5.0;
                        Point::new2(0.18 * num::cos(th), 0.18 * num::sin(th))
                    })
                    .collect(),
            }),
            _ => Err(Error::InvalidArgument(format!("unknown field: {name}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Affine { .. } => "affine",
            Builtin::Abs1d => "abs1d",
            Builtin::NegAbs1d => "neg_abs1d",
            Builtin::Quadratic { .. } => "quadratic",
            Builtin::Saddle => "saddle",
            Builtin::GaussianBump { .. } => "gaussian_bump",
            Builtin::Osc1d => "osc1d",
            Builtin::DistToPolygon { .. } => "dist_to_polygon",
        }
    }

    /// Domain the field is normally studied on.
    pub fn default_domain(&self) -> Domain {
        match self {
            Builtin::Abs1d | Builtin::NegAbs1d | Builtin::Osc1d => {
                Domain::from_box(&[-1.0], &[1.0]).expect("static domain")
            }
            Builtin::Affine { dim, .. } | Builtin::Quadratic { dim } => match dim {
                1 => Domain::from_box(&[-1.0], &[1.0]).expect("static domain"),
                3 => Domain::from_box(&[0.0; 3], &[1.0; 3]).expect("static domain"),
                _ => Domain::from_box(&[0.0; 2], &[1.0; 2]).expect("static domain"),
            },
            Builtin::Saddle => Domain::from_box(&[0.0; 2], &[1.0; 2]).expect("static domain"),
            Builtin::GaussianBump { .. } | Builtin::DistToPolygon { .. } => {
                Domain::from_box(&[-1.0; 2], &[1.0; 2]).expect("static domain")
            }
        }
    }

    /// Whether the field is known to be representable as a difference of
    /// convex functions.
    pub fn dc_status(&self) -> &'static str {
        match self {
            Builtin::Affine { .. } => "DC (affine)",
            Builtin::Abs1d => "DC (convex)",
            Builtin::NegAbs1d => "DC (concave)",
            Builtin::Quadratic { .. } => "DC (convex, C^2)",
            Builtin::Saddle => "DC (C^2)",
            Builtin::GaussianBump { .. } => "DC (C^2)",
            Builtin::Osc1d => "not DC (derivative variation unbounded near 0)",
            Builtin::DistToPolygon { .. } => "DC (convex)",
        }
    }

    pub fn parameter_summary(&self) -> alloc::string::String {
        match self {
            Builtin::Affine {
                gradient,
                offset,
                dim,
            } => format!(
                "gradient={:?}, offset={offset}, dim={dim}",
                gradient.coords(*dim)
            ),
            Builtin::Quadratic { dim } => format!("dim={dim}"),
            Builtin::GaussianBump {
                center,
                sigma,
                amplitude,
                dim,
            } => format!(
                "center={:?}, sigma={sigma}, amplitude={amplitude}, dim={dim}",
                center.coords(*dim)
            ),
            Builtin::DistToPolygon { polygon } => {
                format!("polygon with {} vertices", polygon.len())
            }
            _ => alloc::string::String::new(),
        }
    }

    /// All catalog entries with default parameters.
    pub fn catalog() -> Vec<Builtin> {
        [
            "affine",
            "abs1d",
            "neg_abs1d",
            "quadratic",
            "saddle",
            "gaussian_bump",
            "osc1d",
            "dist_to_polygon",
        ]
        .iter()
        .map(|n| Builtin::by_name(n).expect("static catalog"))
        .collect()
    }
}

impl ScalarField for Builtin {
    fn dim(&self) -> usize {
        match self {
            Builtin::Affine { dim, .. }
            | Builtin::Quadratic { dim }
            | Builtin::GaussianBump { dim, .. } => *dim,
            Builtin::Abs1d | Builtin::NegAbs1d | Builtin::Osc1d => 1,
            Builtin::Saddle | Builtin::DistToPolygon { .. } => 2,
        }
    }

    fn eval(&self, p: &Point) -> Result<f64> {
        Ok(match self {
            Builtin::Affine {
                gradient, offset, ..
            } => gradient.dot(p) + offset,
            Builtin::Abs1d => num::abs(p.0[0]),
            Builtin::NegAbs1d => -num::abs(p.0[0]),
            Builtin::Quadratic { .. } => p.dot(p),
            Builtin::Saddle => p.0[0] * p.0[0] - p.0[1] * p.0[1],
            Builtin::GaussianBump {
                center,
                sigma,
                amplitude,
                ..
            } => {
                let d2 = p.sub(center).dot(&p.sub(center));
                amplitude * num::exp(-d2 / (2.0 * sigma * sigma))
            }
            Builtin::Osc1d => {
                let x = p.0[0];
                if x == 0.0 {
                    0.0
                } else {
                    x * x * num::sin(1.0 / (x * x))
                }
            }
            Builtin::DistToPolygon { polygon } => distance_to_polygon(polygon, p),
        })
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        match self {
            Builtin::Affine { gradient, .. } => Some(gradient.norm()),
            Builtin::Abs1d | Builtin::NegAbs1d => Some(1.0),
            Builtin::DistToPolygon { .. } => Some(1.0),
            // sup |grad| = amplitude / (sigma sqrt(e)), attained at |x-c| = sigma
            Builtin::GaussianBump {
                sigma, amplitude, ..
            } => Some(amplitude / (sigma * num::sqrt(num::exp(1.0)))),
            // domain-dependent (quadratic, saddle) or unbounded (osc1d)
            _ => None,
        }
    }
}

fn distance_to_polygon(polygon: &[Point], p: &Point) -> f64 {
    let k = polygon.len();
    let mut inside = true;
    let mut best = f64::INFINITY;
    for i in 0..k {
        let a = &polygon[i];
        let b = &polygon[(i + 1) % k];
        let edge = b.sub(a);
        if cross2(&edge, &p.sub(a)) < 0.0 {
            inside = false;
        }
        // point-segment distance
        let len2 = edge.dot(&edge);
        let t = if len2 > 0.0 {
            (p.sub(a).dot(&edge) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        best = num::min(best, p.dist(&a.add(&edge.scale(t))));
    }
    if inside {
        0.0
    } else {
        best
    }
}

/// A 1-D field read as a function of `x` on a 2-D domain. Used to run the
/// curve criteria on 1-D catalog entries.
pub struct EmbedXY<F: ScalarField>(pub F);

impl<F: ScalarField> ScalarField for EmbedXY<F> {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, p: &Point) -> Result<f64> {
        self.0.eval(&Point::new1(p.0[0]))
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        self.0.lipschitz_hint()
    }
}

/// Pointwise sum of two fields of the same dimension.
pub struct SumField<A: ScalarField, B: ScalarField>(pub A, pub B);

impl<A: ScalarField, B: ScalarField> ScalarField for SumField<A, B> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, p: &Point) -> Result<f64> {
        Ok(self.0.eval(p)? + self.1.eval(p)?)
    }
}

/// Pointwise negation.
pub struct NegField<A: ScalarField>(pub A);

impl<A: ScalarField> ScalarField for NegField<A> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, p: &Point) -> Result<f64> {
        Ok(-self.0.eval(p)?)
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        self.0.lipschitz_hint()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    #[test]
    fn catalog_has_eight_entries() {
        let entries = Builtin::catalog();
        assert_eq!(entries.len(), 8);
        assert!(Builtin::by_name("nope").is_err());
    }

    #[test]
    fn osc1d_regularized_at_origin() {
        let f = Builtin::Osc1d;
        assert_eq!(f.eval(&Point::new1(0.0)).unwrap(), 0.0);
        let x = 0.3;
        let expected = x * x * f64::sin(1.0 / (x * x));
        assert!((f.eval(&Point::new1(x)).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn distance_to_polygon_inside_and_out() {
        let f = Builtin::by_name("dist_to_polygon").unwrap();
        assert_eq!(f.eval(&Point::new2(0.0, 0.0)).unwrap(), 0.0);
        // a point at radius 0.9 sits between 0.9 - r and 0.9 - r cos(pi/5)
        // from a pentagon of circumradius r = 0.18
        let d = f.eval(&Point::new2(0.0, -0.9)).unwrap();
        assert!((0.70..=0.76).contains(&d), "distance {d}");
    }

    #[test]
    fn lipschitz_hints_dominate_difference_quotients() {
        for field in Builtin::catalog() {
            let Some(hint) = field.lipschitz_hint() else {
                continue;
            };
            let domain = field.default_domain();
            let mut rng = sampling::seeded(3);
            for _ in 0..2000 {
                let a = domain.sample_interior(&mut rng);
                let b = domain.sample_interior(&mut rng);
                let d = a.dist(&b);
                if d < 1e-9 {
                    continue;
                }
                let q = (field.eval(&a).unwrap() - field.eval(&b).unwrap()).abs() / d;
                assert!(
                    q <= 1.01 * hint,
                    "{}: quotient {q} exceeds hint {hint}",
                    field.name()
                );
            }
        }
    }
}
