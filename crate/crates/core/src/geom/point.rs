use std::fmt;

use crate::scalar::ExactField;

/// A point (or free vector) in three-space with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point3<F> {
    pub x: F,
    pub y: F,
    pub z: F,
}

impl<F: ExactField> Point3<F> {
    pub fn new(x: F, y: F, z: F) -> Self {
        Point3 { x, y, z }
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        Point3::new(F::from_i64(x), F::from_i64(y), F::from_i64(z))
    }

    pub fn origin() -> Self {
        Point3::new(F::zero(), F::zero(), F::zero())
    }

    pub fn from_array(c: [F; 3]) -> Self {
        let [x, y, z] = c;
        Point3 { x, y, z }
    }

    pub fn to_array(&self) -> [F; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn add(&self, o: &Self) -> Self {
        Point3::new(
            self.x.clone() + o.x.clone(),
            self.y.clone() + o.y.clone(),
            self.z.clone() + o.z.clone(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Point3::new(
            self.x.clone() - o.x.clone(),
            self.y.clone() - o.y.clone(),
            self.z.clone() - o.z.clone(),
        )
    }

    pub fn scale(&self, s: &F) -> Self {
        Point3::new(
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
        )
    }

    pub fn dot(&self, o: &Self) -> F {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone() + self.z.clone() * o.z.clone()
    }

    pub fn cross(&self, o: &Self) -> Self {
        Point3::new(
            self.y.clone() * o.z.clone() - self.z.clone() * o.y.clone(),
            self.z.clone() * o.x.clone() - self.x.clone() * o.z.clone(),
            self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone(),
        )
    }

    pub fn norm2(&self) -> F {
        self.dot(self)
    }

    pub fn dist2(&self, o: &Self) -> F {
        self.sub(o).norm2()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

impl<F: fmt::Display> fmt::Debug for Point3<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl<F: fmt::Display> fmt::Display for Point3<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// True iff the three points lie on a common line.
pub fn collinear<F: ExactField>(a: &Point3<F>, b: &Point3<F>, c: &Point3<F>) -> bool {
    b.sub(a).cross(&c.sub(a)).is_zero()
}
