//! Difference-of-convex (DC) decomposition of Lipschitz functions on convex
//! domains, via piecewise-linear interpolation and dihedral-angle summation.
//!
//! The pipeline: triangulate a convex domain ([`mesh`]), interpolate a scalar
//! field into a piecewise-linear function and extract its hinges ([`field`],
//! [`interp`]), sum the convex hinges into a convex component and form the DC
//! pair ([`decompose`]), then probe DC-representability with variation and
//! turn statistics along closed curve families ([`curve`], [`trace`],
//! [`criterion`]).
//!
//! The crate is `no_std` + `alloc`; all transcendental math goes through
//! `libm` so results are bit-identical across platforms.
//!
//! ```
//! use dcsplit_core::decompose::decompose;
//! use dcsplit_core::field::Builtin;
//! use dcsplit_core::interp::interpolate;
//! use dcsplit_core::mesh::triangulate;
//! use dcsplit_core::Point;
//!
//! let field = Builtin::by_name("saddle")?;
//! let domain = field.default_domain();
//! let plf = interpolate(&field, triangulate(&domain, 3))?;
//! let pair = decompose(plf, &domain.anchor())?;
//!
//! // both components are convex and their difference is the interpolant
//! let p = Point::new2(0.25, 0.75);
//! let reconstructed = pair.f1(&p) - pair.f2(&p)?;
//! assert!((reconstructed - (pair.f_n(&p)? - pair.anchor_value())).abs() < 1e-12);
//! # Ok::<(), dcsplit_core::Error>(())
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod criterion;
pub mod curve;
pub mod decompose;
pub mod error;
pub mod field;
pub mod geom;
pub mod interp;
pub mod mesh;
pub(crate) mod num;
pub mod sampling;
pub mod trace;

pub use error::Error;
pub use geom::Point;

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
