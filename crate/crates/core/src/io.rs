//! Data file formats. Every rational is written as a `p/q` string.
//!
//! * points: CSV with header `x,y,z`;
//! * curves and surfaces: a JSON array of records tagged by `type`;
//! * partitions: `{rounds, factors, delta, seed}` with each factor a sparse
//!   map from `"i,j,k"` exponent keys to coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::PartitionPolynomial;
use crate::scalar::to_rational_string;
use crate::{Curve, Point3, Scalar, Surface, TriPoly};

pub fn format_scalar(v: &Scalar) -> String {
    to_rational_string(v)
}

/// Parses `p/q`, an integer, or an exact decimal such as `-0.25`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let int = |t: &str| t.parse::<BigInt>().map_err(|_| bad());
    if let Some((n, d)) = s.split_once('/') {
        let d = int(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Scalar::new(int(n)?, d));
    }
    if let Some((w, f)) = s.split_once('.') {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = w.starts_with('-');
        let w = if w.is_empty() || w == "-" || w == "+" { BigInt::zero() } else { int(w)? };
        let den = num_traits::pow(BigInt::from(10), f.len());
        let frac = Scalar::new(int(f)?, den);
        let whole = Scalar::from_integer(w);
        return Ok(if neg { whole - frac } else { whole + frac });
    }
    Ok(Scalar::from_integer(int(s)?))
}

/// Serde adapter storing a [`Scalar`] as a `p/q` string.
pub mod scalar_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Scalar;

    pub fn serialize<S: Serializer>(v: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_scalar(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_scalar(&s).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------- points

pub fn points_to_csv(points: &[Point3]) -> String {
    let mut out = String::from("x,y,z\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            format_scalar(&p.x),
            format_scalar(&p.y),
            format_scalar(&p.z)
        ));
    }
    out
}

pub fn points_from_csv(text: &str) -> Result<Vec<Point3>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "y", "z"] {
        return Err(Error::Parse(format!("points header must be x,y,z, got {headers:?}")));
    }
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != 3 {
            return Err(Error::Parse(format!("row {} has {} fields", line + 1, rec.len())));
        }
        out.push(Point3::new(parse_scalar(&rec[0])?, parse_scalar(&rec[1])?, parse_scalar(&rec[2])?));
    }
    Ok(out)
}

// ------------------------------------------------------- curves, surfaces

type Triple = [String; 3];

fn triple(p: &Point3) -> Triple {
    [format_scalar(&p.x), format_scalar(&p.y), format_scalar(&p.z)]
}

fn point(t: &Triple) -> Result<Point3> {
    Ok(Point3::new(parse_scalar(&t[0])?, parse_scalar(&t[1])?, parse_scalar(&t[2])?))
}

/// Sparse monomial map `"i,j,k" -> coefficient`.
pub type PolyRecord = BTreeMap<String, String>;

pub fn poly_record(f: &TriPoly) -> PolyRecord {
    f.terms()
        .map(|(e, c)| (format!("{},{},{}", e[0], e[1], e[2]), format_scalar(c)))
        .collect()
}

pub fn poly_from_record(r: &PolyRecord) -> Result<TriPoly> {
    let mut f = TriPoly::zero();
    for (k, v) in r {
        let e: Vec<u32> = k
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent key {k:?}"))))
            .collect::<Result<_>>()?;
        let [i, j, l] = e[..] else {
            return Err(Error::Parse(format!("exponent key {k:?} needs three entries")));
        };
        f.add_term([i, j, l], parse_scalar(v)?);
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObjectRecord {
    Plane { a: String, b: String, c: String, d: String },
    Sphere { center: Triple, radius2: String },
    Implicit { poly: PolyRecord },
    Line { origin: Triple, direction: Triple },
    Circle { center: Triple, normal: Triple, radius2: String },
    ImplicitPair { f: PolyRecord, g: PolyRecord },
}

/// A parsed curve or surface.
#[derive(Clone, Debug, PartialEq)]
pub enum Object {
    Curve(Curve),
    Surface(Surface),
}

impl From<&Surface> for ObjectRecord {
    fn from(s: &Surface) -> Self {
        match s {
            Surface::Plane { a, b, c, d } => ObjectRecord::Plane {
                a: format_scalar(a),
                b: format_scalar(b),
                c: format_scalar(c),
                d: format_scalar(d),
            },
            Surface::Sphere { center, radius2 } => {
                ObjectRecord::Sphere { center: triple(center), radius2: format_scalar(radius2) }
            }
            Surface::Implicit { poly } => ObjectRecord::Implicit { poly: poly_record(poly) },
        }
    }
}

impl From<&Curve> for ObjectRecord {
    fn from(c: &Curve) -> Self {
        match c {
            Curve::Line { origin, direction } => {
                ObjectRecord::Line { origin: triple(origin), direction: triple(direction) }
            }
            Curve::Circle { center, normal, radius2 } => ObjectRecord::Circle {
                center: triple(center),
                normal: triple(normal),
                radius2: format_scalar(radius2),
            },
            Curve::ImplicitPair { f, g } => ObjectRecord::ImplicitPair { f: poly_record(f), g: poly_record(g) },
        }
    }
}

impl ObjectRecord {
    /// Validates through the checked constructors.
    pub fn to_object(&self) -> Result<Object> {
        let s = parse_scalar;
        Ok(match self {
            ObjectRecord::Plane { a, b, c, d } => Object::Surface(Surface::plane(s(a)?, s(b)?, s(c)?, s(d)?)?),
            ObjectRecord::Sphere { center, radius2 } => Object::Surface(Surface::sphere(point(center)?, s(radius2)?)?),
            ObjectRecord::Implicit { poly } => Object::Surface(Surface::implicit(poly_from_record(poly)?)?),
            ObjectRecord::Line { origin, direction } => Object::Curve(Curve::line(point(origin)?, point(direction)?)?),
            ObjectRecord::Circle { center, normal, radius2 } => {
                Object::Curve(Curve::circle(point(center)?, point(normal)?, s(radius2)?)?)
            }
            ObjectRecord::ImplicitPair { f, g } => {
                Object::Curve(Curve::implicit_pair(poly_from_record(f)?, poly_from_record(g)?)?)
            }
        })
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("records serialize");
    s.push('\n');
    s
}

pub fn surfaces_to_json(surfaces: &[Surface]) -> String {
    to_json(&surfaces.iter().map(ObjectRecord::from).collect::<Vec<_>>())
}

pub fn curves_to_json(curves: &[Curve]) -> String {
    to_json(&curves.iter().map(ObjectRecord::from).collect::<Vec<_>>())
}

pub fn objects_from_json(text: &str) -> Result<Vec<Object>> {
    let recs: Vec<ObjectRecord> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    recs.iter().map(|r| r.to_object()).collect()
}

/// Splits parsed objects by kind.
pub fn split_objects(objects: Vec<Object>) -> (Vec<Curve>, Vec<Surface>) {
    let mut curves = Vec::new();
    let mut surfaces = Vec::new();
    for o in objects {
        match o {
            Object::Curve(c) => curves.push(c),
            Object::Surface(s) => surfaces.push(s),
        }
    }
    (curves, surfaces)
}

pub fn surfaces_from_json(text: &str) -> Result<Vec<Surface>> {
    let (curves, surfaces) = split_objects(objects_from_json(text)?);
    if !curves.is_empty() {
        return Err(Error::Parse("expected only surfaces".into()));
    }
    Ok(surfaces)
}

pub fn curves_from_json(text: &str) -> Result<Vec<Curve>> {
    let (curves, surfaces) = split_objects(objects_from_json(text)?);
    if !surfaces.is_empty() {
        return Err(Error::Parse("expected only curves".into()));
    }
    Ok(curves)
}

// ------------------------------------------------------------- partitions

#[derive(Serialize, Deserialize)]
struct PartitionRecord {
    rounds: usize,
    factors: Vec<PolyRecord>,
    delta: String,
    seed: u64,
}

pub fn partition_to_json(p: &PartitionPolynomial) -> String {
    to_json(&PartitionRecord {
        rounds: p.rounds,
        factors: p.round_factors.iter().map(poly_record).collect(),
        delta: format_scalar(&p.delta),
        seed: p.seed,
    })
}

pub fn partition_from_json(text: &str) -> Result<PartitionPolynomial> {
    let r: PartitionRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let factors = r.factors.iter().map(poly_from_record).collect::<Result<Vec<_>>>()?;
    if factors.len() != r.rounds {
        return Err(Error::Parse(format!("{} factors for {} rounds", factors.len(), r.rounds)));
    }
    PartitionPolynomial::from_factors(factors, parse_scalar(&r.delta)?, r.seed)
}

/// Comma-separated `key=value` list, e.g. `m=4096,n=4096,q=4096`.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, Scalar>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        out.insert(k.trim().to_string(), parse_scalar(v)?);
    }
    Ok(out)
}

/// `true` iff `v` is a positive integer.
pub fn is_positive_integer(v: &Scalar) -> bool {
    v.is_integer() && *v >= Scalar::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactField;

    #[test]
    fn scalar_syntax() {
        assert_eq!(parse_scalar("3/4").unwrap(), Scalar::from_frac(3, 4));
        assert_eq!(parse_scalar("-6/8").unwrap(), Scalar::from_frac(-3, 4));
        assert_eq!(parse_scalar("7").unwrap(), Scalar::from_i64(7));
        assert_eq!(parse_scalar("0.25").unwrap(), Scalar::from_frac(1, 4));
        assert_eq!(parse_scalar("-1.5").unwrap(), Scalar::from_frac(-3, 2));
        assert_eq!(parse_scalar("-0.5").unwrap(), Scalar::from_frac(-1, 2));
        for bad in ["", "1/0", "a", "1.", "1.2.3", "1/2/3"] {
            assert!(parse_scalar(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn points_round_trip() {
        let pts = vec![
            Point3::new(Scalar::from_frac(1, 3), Scalar::from_i64(-2), Scalar::from_frac(22, 7)),
            Point3::origin(),
        ];
        let text = points_to_csv(&pts);
        assert!(text.starts_with("x,y,z\n1/3,-2/1,22/7\n"));
        assert_eq!(points_from_csv(&text).unwrap(), pts);
        assert!(points_from_csv("a,b,c\n1,2,3\n").is_err());
    }

    #[test]
    fn objects_round_trip() {
        let surfaces = vec![
            Surface::plane(Scalar::from_i64(2), Scalar::from_i64(4), Scalar::zero(), Scalar::from_i64(6)).unwrap(),
            Surface::sphere(Point3::from_i64(1, 2, 3), Scalar::from_frac(9, 4)).unwrap(),
            Surface::implicit(&TriPoly::x().pow(2) - &TriPoly::z()).unwrap(),
        ];
        assert_eq!(surfaces_from_json(&surfaces_to_json(&surfaces)).unwrap(), surfaces);
        let curves = vec![
            Curve::line(Point3::from_i64(0, 1, 0), Point3::from_i64(1, 2, 0)).unwrap(),
            Curve::circle(Point3::origin(), Point3::from_i64(0, 0, 3), Scalar::from_i64(5)).unwrap(),
            Curve::implicit_pair(TriPoly::x(), &TriPoly::y().pow(2) - &TriPoly::z()).unwrap(),
        ];
        assert_eq!(curves_from_json(&curves_to_json(&curves)).unwrap(), curves);
        assert!(surfaces_from_json(&curves_to_json(&curves)).is_err());
        assert!(objects_from_json(r#"[{"type":"sphere","center":["0","0","0"],"radius2":"-1"}]"#).is_err());
    }

    #[test]
    fn partition_round_trip() {
        let f = &TriPoly::x().pow(2) + &TriPoly::constant(Scalar::from_frac(-1, 3));
        let p = PartitionPolynomial::from_factors(vec![TriPoly::z(), f], Scalar::from_frac(1, 4), 7).unwrap();
        let text = partition_to_json(&p);
        assert_eq!(partition_from_json(&text).unwrap(), p);
        assert!(text.contains("\"2,0,0\": \"1/1\""));
    }

    #[test]
    fn params() {
        let m = parse_params("m=4096, n=1/2,q=3").unwrap();
        assert_eq!(m["n"], Scalar::from_frac(1, 2));
        assert!(is_positive_integer(&m["m"]));
        assert!(parse_params("m").is_err());
    }
}
