use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::point::Point3;
use crate::scalar::ExactField;

/// Exponent triple `(i, j, k)` of the monomial `x^i y^j z^k`.
pub type Exponent = [u32; 3];

/// A sparse trivariate polynomial with exact coefficients.
///
/// No stored coefficient is zero; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriPoly<F> {
    terms: BTreeMap<Exponent, F>,
}

impl<F: ExactField> TriPoly<F> {
    pub fn zero() -> Self {
        TriPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: Exponent, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        TriPoly { terms }
    }

    pub fn x() -> Self {
        Self::monomial([1, 0, 0], F::one())
    }

    pub fn y() -> Self {
        Self::monomial([0, 1, 0], F::one())
    }

    pub fn z() -> Self {
        Self::monomial([0, 0, 1], F::one())
    }

    /// `a x + b y + c z + d`.
    pub fn affine(a: F, b: F, c: F, d: F) -> Self {
        let mut p = Self::zero();
        p.add_term([1, 0, 0], a);
        p.add_term([0, 1, 0], b);
        p.add_term([0, 0, 1], c);
        p.add_term([0, 0, 0], d);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, F)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exponent) -> F {
        self.terms.get(&e).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        TriPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.clone() * s.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(F::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `p`.
    pub fn eval(&self, p: &Point3<F>) -> F {
        if self.terms.is_empty() {
            return F::zero();
        }
        let max = self
            .terms
            .keys()
            .map(|e| e[0].max(e[1]).max(e[2]))
            .max()
            .unwrap_or(0) as usize;
        let powers = |v: &F| {
            let mut out = Vec::with_capacity(max + 1);
            out.push(F::one());
            for i in 0..max {
                let next = out[i].clone() * v.clone();
                out.push(next);
            }
            out
        };
        let (px, py, pz) = (powers(&p.x), powers(&p.y), powers(&p.z));
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            acc = acc
                + c.clone()
                    * px[e[0] as usize].clone()
                    * py[e[1] as usize].clone()
                    * pz[e[2] as usize].clone();
        }
        acc
    }

    /// Substitutes `x -> sx`, `y -> sy`, `z -> sz`.
    pub fn compose(&self, sx: &Self, sy: &Self, sz: &Self) -> Self {
        let deg = self.degree();
        let px: Vec<Self> = (0..=deg).map(|k| sx.pow(k)).collect();
        let py: Vec<Self> = (0..=deg).map(|k| sy.pow(k)).collect();
        let pz: Vec<Self> = (0..=deg).map(|k| sz.pow(k)).collect();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let t = &(&px[e[0] as usize] * &py[e[1] as usize]) * &pz[e[2] as usize];
            out = &out + &t.scale(c);
        }
        out
    }

    /// Translates the zero set by `v`: returns `g` with `g(p + v) = f(p)`.
    pub fn translate(&self, v: &Point3<F>) -> Self {
        let one = F::one();
        let z = F::zero();
        self.compose(
            &TriPoly::affine(one.clone(), z.clone(), z.clone(), -v.x.clone()),
            &TriPoly::affine(z.clone(), one.clone(), z.clone(), -v.y.clone()),
            &TriPoly::affine(z.clone(), z, one, -v.z.clone()),
        )
    }

    /// Coefficients (constant first) of `t -> f(origin + t * dir)`.
    pub fn restrict_to_line(&self, origin: &Point3<F>, dir: &Point3<F>) -> Vec<F> {
        // Encode the univariate result in the x variable.
        let z = F::zero();
        let sx = TriPoly::affine(dir.x.clone(), z.clone(), z.clone(), origin.x.clone());
        let sy = TriPoly::affine(dir.y.clone(), z.clone(), z.clone(), origin.y.clone());
        let sz = TriPoly::affine(dir.z.clone(), z.clone(), z, origin.z.clone());
        let u = self.compose(&sx, &sy, &sz);
        let deg = u.degree() as usize;
        let mut out = vec![F::zero(); deg + 1];
        for (e, c) in u.terms() {
            out[e[0] as usize] = c.clone();
        }
        while out.len() > 1 && out.last().map_or(false, |c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Leading term under graded order (degree, then exponent order).
    pub fn leading(&self) -> Option<(Exponent, F)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| (e[0] + e[1] + e[2], **e))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&(F::one() / c)),
            None => self.clone(),
        }
    }

    /// True iff `other = c * self` for some nonzero constant `c`.
    pub fn is_scalar_multiple_of(&self, other: &Self) -> bool {
        !self.is_zero() && !other.is_zero() && self.monic() == other.monic()
    }
}

impl<F: ExactField> Add for &TriPoly<F> {
    type Output = TriPoly<F>;
    fn add(self, rhs: Self) -> TriPoly<F> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<F: ExactField> Sub for &TriPoly<F> {
    type Output = TriPoly<F>;
    fn sub(self, rhs: Self) -> TriPoly<F> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<F: ExactField> Mul for &TriPoly<F> {
    type Output = TriPoly<F>;
    fn mul(self, rhs: Self) -> TriPoly<F> {
        let mut out = TriPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(
                    [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]],
                    ca.clone() * cb.clone(),
                );
            }
        }
        out
    }
}

impl<F: ExactField> Neg for &TriPoly<F> {
    type Output = TriPoly<F>;
    fn neg(self) -> TriPoly<F> {
        self.scale(&-F::one())
    }
}

impl<F: ExactField> fmt::Debug for TriPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: ExactField> fmt::Display for TriPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (name, k) in ["x", "y", "z"].iter().zip(e.iter()) {
                match k {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

/// Exact value of `f` at `p`.
pub fn eval_poly<F: ExactField>(f: &TriPoly<F>, p: &Point3<F>) -> F {
    f.eval(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    fn paraboloid() -> TriPoly<Q> {
        &(&TriPoly::z() - &TriPoly::x().pow(2)) - &TriPoly::y().pow(2)
    }

    #[test]
    fn eval_on_paraboloid() {
        let p = Point3::new(q(1, 1), q(1, 1), q(2, 1));
        assert_eq!(eval_poly(&paraboloid(), &p), q(0, 1));
    }

    #[test]
    fn eval_zero_poly() {
        let p = Point3::new(q(7, 3), q(-1, 2), q(5, 1));
        assert_eq!(eval_poly(&TriPoly::<Q>::zero(), &p), q(0, 1));
    }

    #[test]
    fn eval_unit_sphere_rational_point() {
        let f = &(&(&TriPoly::x().pow(2) + &TriPoly::y().pow(2)) + &TriPoly::z().pow(2))
            - &TriPoly::constant(q(1, 1));
        // 1/9 + 4/9 + 4/9 = 1
        let p = Point3::new(q(1, 3), q(2, 3), q(2, 3));
        assert_eq!(f.eval(&p), q(0, 1));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &TriPoly::<Q>::x() - &TriPoly::x();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
        assert_eq!(paraboloid().degree(), 2);
    }

    #[test]
    fn restriction_matches_pointwise_eval() {
        let f = &paraboloid() * &TriPoly::affine(q(1, 1), q(2, 1), q(0, 1), q(-1, 3));
        let o = Point3::new(q(1, 2), q(-1, 1), q(3, 1));
        let d = Point3::new(q(2, 1), q(1, 5), q(-1, 1));
        let u = f.restrict_to_line(&o, &d);
        for t in [-3i64, -1, 0, 2, 7] {
            let tq = q(t, 1);
            let horner = u
                .iter()
                .rev()
                .fold(q(0, 1), |acc, c| acc * tq.clone() + c.clone());
            assert_eq!(horner, f.eval(&o.add(&d.scale(&tq))));
        }
    }

    #[test]
    fn translation_moves_zero_set() {
        let f = paraboloid();
        let v = Point3::new(q(1, 1), q(-2, 1), q(1, 2));
        let g = f.translate(&v);
        let p = Point3::new(q(3, 1), q(1, 1), q(10, 1));
        assert_eq!(f.eval(&p), q(0, 1));
        assert_eq!(g.eval(&p.add(&v)), q(0, 1));
    }

    #[test]
    fn scalar_multiples() {
        let f = paraboloid();
        assert!(f.is_scalar_multiple_of(&f.scale(&q(-3, 7))));
        assert!(!f.is_scalar_multiple_of(&TriPoly::x()));
    }
}
