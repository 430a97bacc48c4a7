pub mod applications;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod geom;
pub mod incidence;
pub mod io;
pub mod partition;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::ExactField;

/// Default exact scalar: arbitrary-precision rationals.
pub type Scalar = num_rational::BigRational;

pub type Point3 = geom::Point3<Scalar>;
pub type TriPoly = geom::TriPoly<Scalar>;
pub type Surface = geom::Surface<Scalar>;
pub type Curve = geom::Curve<Scalar>;
pub type IntersectionResult = geom::IntersectionResult<Scalar>;
