//! Incidence and distance bound formulas with unit constants, bound versus
//! count reports, and log-log exponent fits.
//!
//! Exponents are carried as exact rationals. A power `b^(p/q)` with `b` a
//! perfect `q`-th power is evaluated exactly before conversion to `f64`;
//! every other power goes through `f64::powf`. Logarithmic factors use
//! `max(ln x, 1)` so that they stay positive and monotone.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::plan_degree;
use crate::scalar::ExactField;
use crate::Scalar;

/// Ratio above which a report is flagged.
pub const DEFAULT_FLAG_THRESHOLD: f64 = 10.0;

macro_rules! formulas {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum FormulaName { $($variant),* }

        impl FormulaName {
            pub const ALL: &'static [FormulaName] = &[$(FormulaName::$variant),*];

            pub fn as_str(&self) -> &'static str {
                match self { $(FormulaName::$variant => $name),* }
            }
        }

        impl FromStr for FormulaName {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(FormulaName::$variant),)*
                    _ => Err(Error::Parse(format!("unknown formula {s:?}"))),
                }
            }
        }
    };
}

formulas! {
    PsPlanar => "PS_planar",
    SzPlanar => "SZ_planar",
    CirclesPlanar => "circles_planar",
    Curves3dMain => "curves3d_main",
    Curves3dImproved => "curves3d_improved",
    Circles3d => "circles3d",
    KstNaive => "KST_naive",
    LinesGk => "lines_GK",
    VarietyK => "variety_k",
    VarietyS => "variety_s",
    MixedK => "mixed_k",
    MixedS => "mixed_s",
    SpheresVariety => "spheres_variety",
    Spheres3dim => "spheres_3dim",
    Spheres2dim => "spheres_2dim",
    DdVariety => "dd_variety",
    DdBipartite => "dd_bipartite",
    UnitVariety => "unit_variety",
    UnitBipartite => "unit_bipartite",
    GeneralSurfaces => "general_surfaces",
    RichPointsA => "rich_points_a",
    RichPointsB => "rich_points_b",
    SimilarTriangles => "similar_triangles",
    DegreePlan => "degree_plan",
}

impl fmt::Display for FormulaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FormulaName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Whether the formula caps the count from above or from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    Upper,
    Lower,
    /// Not a count bound (the partition degree).
    Value,
}

impl FormulaName {
    pub fn kind(&self) -> BoundKind {
        match self {
            FormulaName::DdVariety | FormulaName::DdBipartite => BoundKind::Lower,
            FormulaName::DegreePlan => BoundKind::Value,
            _ => BoundKind::Upper,
        }
    }

    /// Symbols that must be supplied.
    pub fn required(&self) -> &'static [&'static str] {
        use FormulaName::*;
        match self {
            PsPlanar | VarietyK | MixedK | KstNaive => &["m", "n", "k"],
            SzPlanar | VarietyS | MixedS | GeneralSurfaces => &["m", "n", "s"],
            CirclesPlanar | Spheres2dim | SpheresVariety | Spheres3dim | UnitBipartite | DdBipartite => &["m", "n"],
            Curves3dMain => &["m", "n", "k", "q"],
            Curves3dImproved => &["m", "n", "k", "s", "q"],
            Circles3d | LinesGk => &["m", "n", "q"],
            DdVariety | UnitVariety | SimilarTriangles => &["n"],
            RichPointsA => &["n", "k", "q", "r"],
            RichPointsB => &["n", "k", "s", "q", "r"],
            DegreePlan => &["m", "n", "k"],
        }
    }

    /// Carries an `n^eps` (or `q^eps`) loss.
    pub fn uses_epsilon(&self) -> bool {
        use FormulaName::*;
        matches!(
            self,
            SzPlanar | VarietyS | MixedS | GeneralSurfaces | Curves3dImproved | SpheresVariety | Spheres3dim
                | UnitBipartite | DdVariety | DdBipartite | RichPointsB
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundFormula {
    pub name: FormulaName,
    pub params: BTreeMap<String, Scalar>,
}

impl BoundFormula {
    pub fn new(name: FormulaName, params: &[(&str, Scalar)]) -> Self {
        BoundFormula {
            name,
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }

    pub fn with_ints(name: FormulaName, params: &[(&str, i64)]) -> Self {
        BoundFormula {
            name,
            params: params.iter().map(|(k, v)| (k.to_string(), Scalar::from_i64(*v))).collect(),
        }
    }

    fn get(&self, key: &str) -> Result<Scalar> {
        self.params.get(key).cloned().ok_or_else(|| Error::MissingParam(key.to_string()))
    }

    fn epsilon(&self) -> Result<Scalar> {
        match self.params.get("epsilon").or_else(|| self.params.get("eps")) {
            Some(e) if e.is_positive() => Ok(e.clone()),
            Some(e) => Err(Error::OutOfRange(format!("epsilon = {e} must be > 0"))),
            None => Ok(crate::constructions::default_epsilon()),
        }
    }
}

/// `b^e` for `b >= 0`, exact when `b` is a perfect power for `e`'s
/// denominator.
pub fn pow_q(b: &Scalar, e: &Scalar) -> f64 {
    if e.is_zero() {
        return 1.0;
    }
    if b.is_zero() {
        return 0.0;
    }
    if let Some(v) = exact_pow(b, e) {
        return v;
    }
    ExactField::to_f64(b).powf(ExactField::to_f64(e))
}

fn exact_root(v: &BigInt, q: u32) -> Option<BigInt> {
    let r = v.nth_root(q);
    (num_traits::pow(r.clone(), q as usize) == *v).then_some(r)
}

fn exact_pow(b: &Scalar, e: &Scalar) -> Option<f64> {
    let q = e.denom().to_u32()?;
    let p = e.numer().abs().to_u32()?;
    if p > 64 || q > 64 {
        return None;
    }
    let rn = exact_root(b.numer(), q)?;
    let rd = exact_root(b.denom(), q)?;
    let v = Scalar::new(num_traits::pow(rn, p as usize), num_traits::pow(rd, p as usize));
    let v = if e.is_negative() { Scalar::one() / v } else { v };
    ToPrimitive::to_f64(&v)
}

/// `max(ln x, 1)`.
fn clamped_ln(x: f64) -> f64 {
    x.ln().max(1.0)
}

fn frac(n: i64, d: i64) -> Scalar {
    Scalar::from_frac(n, d)
}

/// Validates ranges shared by all formulas.
fn check(f: &BoundFormula) -> Result<()> {
    for key in f.name.required() {
        f.get(key)?;
    }
    let positive = |k: &str| -> Result<()> {
        if let Some(v) = f.params.get(k) {
            if !v.is_positive() {
                return Err(Error::OutOfRange(format!("{k} = {v} must be > 0")));
            }
        }
        Ok(())
    };
    for k in ["m", "n", "r"] {
        positive(k)?;
    }
    if let Some(q) = f.params.get("q") {
        if q.is_negative() {
            return Err(Error::OutOfRange(format!("q = {q} must be >= 0")));
        }
    }
    for (k, min) in [("k", 2), ("s", 2)] {
        if f.name.required().contains(&k) {
            let v = f.get(k)?;
            if v < Scalar::from_i64(min) {
                return Err(Error::OutOfRange(format!("{k} = {v} must be >= {min}")));
            }
        }
    }
    f.epsilon().map(|_| ())
}

/// Value of the formula with every hidden constant set to 1.
pub fn eval_bound(f: &BoundFormula) -> Result<f64> {
    use FormulaName::*;
    check(f)?;
    let g = |k: &str| f.params.get(k).cloned().unwrap_or_else(Scalar::zero);
    let (m, n, q, k, s, r) = (g("m"), g("n"), g("q"), g("k"), g("s"), g("r"));
    let eps = f.epsilon()?;
    let one = Scalar::one();
    let lin = ExactField::to_f64(&m) + ExactField::to_f64(&n);
    // m^a n^b
    let mn = |a: Scalar, b: Scalar| pow_q(&m, &a) * pow_q(&n, &b);
    let two3 = || mn(frac(2, 3), frac(2, 3));
    let ps = || {
        let den = Scalar::from_i64(2) * k.clone() - one.clone();
        mn(k.clone() / den.clone(), (Scalar::from_i64(2) * k.clone() - Scalar::from_i64(2)) / den)
    };
    let sz = || {
        let den = Scalar::from_i64(5) * s.clone() - Scalar::from_i64(4);
        mn(
            Scalar::from_i64(2) * s.clone() / den.clone(),
            (Scalar::from_i64(5) * s.clone() - Scalar::from_i64(6)) / den + eps.clone(),
        )
    };
    let lead3 = || {
        let den = Scalar::from_i64(3) * k.clone() - Scalar::from_i64(2);
        mn(k.clone() / den.clone(), (Scalar::from_i64(3) * k.clone() - Scalar::from_i64(3)) / den)
    };
    let rich_lead = || {
        pow_q(&n, &frac(3, 2))
            / pow_q(&r, &((Scalar::from_i64(3) * k.clone() - Scalar::from_i64(2)) / (Scalar::from_i64(2) * k.clone() - Scalar::from_i64(2))))
            + ExactField::to_f64(&n) / ExactField::to_f64(&r)
    };
    let (mf, nf, qf) = (ExactField::to_f64(&m), ExactField::to_f64(&n), ExactField::to_f64(&q));
    Ok(match f.name {
        PsPlanar | VarietyK | MixedK => ps() + lin,
        SzPlanar | VarietyS | MixedS => sz() + two3() + lin,
        CirclesPlanar => {
            two3() + mn(frac(6, 11), frac(9, 11)) * clamped_ln(mf.powi(3) / nf).powf(2.0 / 11.0) + lin
        }
        Curves3dMain => {
            let den = Scalar::from_i64(2) * k.clone() - one.clone();
            let e = (k.clone() - one.clone()) / den.clone();
            lead3() + mn(k.clone() / den, e.clone()) * pow_q(&q, &e) + lin
        }
        Curves3dImproved => {
            let den = Scalar::from_i64(5) * s.clone() - Scalar::from_i64(4);
            let third = mn(Scalar::from_i64(2) * s.clone() / den.clone(), (Scalar::from_i64(3) * s.clone() - Scalar::from_i64(4)) / den.clone())
                * pow_q(&q, &((Scalar::from_i64(2) * s.clone() - Scalar::from_i64(2)) / den + eps.clone()));
            lead3() + mn(frac(2, 3), frac(1, 3)) * pow_q(&q, &frac(1, 3)) + third + lin
        }
        Circles3d => {
            mn(frac(3, 7), frac(6, 7))
                + mn(frac(2, 3), frac(1, 3)) * pow_q(&q, &frac(1, 3))
                + mn(frac(6, 11), frac(5, 11)) * pow_q(&q, &frac(4, 11)) * clamped_ln(mf.powi(3) / qf.max(1.0)).powf(2.0 / 11.0)
                + lin
        }
        KstNaive => mf * pow_q(&n, &(one.clone() - one.clone() / k.clone())) + nf,
        LinesGk => mn(frac(1, 2), frac(3, 4)) + mn(frac(2, 3), frac(1, 3)) * pow_q(&q, &frac(1, 3)) + lin,
        SpheresVariety => mn(frac(1, 2), frac(7, 8) + eps) + two3() + lin,
        Spheres3dim | UnitBipartite => mn(frac(6, 11), frac(9, 11) + eps) + two3() + lin,
        Spheres2dim => two3() + lin,
        DdVariety => pow_q(&n, &(frac(7, 9) - eps)),
        DdBipartite => {
            let a = mn(frac(4, 7) - eps.clone(), frac(1, 7) - eps);
            a.min(mn(frac(1, 2), frac(1, 2))).min(mf)
        }
        UnitVariety => pow_q(&n, &frac(4, 3)),
        GeneralSurfaces => {
            let den = Scalar::from_i64(3) * s.clone() - one.clone();
            mn(
                Scalar::from_i64(2) * s.clone() / den.clone(),
                (Scalar::from_i64(3) * s.clone() - Scalar::from_i64(3)) / den + eps,
            ) + lin
        }
        RichPointsA => {
            let e = (Scalar::from_i64(2) * k.clone() - one.clone()) / (k.clone() - one.clone());
            rich_lead() + nf * qf / pow_q(&r, &e)
        }
        RichPointsB => {
            let den = Scalar::from_i64(3) * s.clone() - Scalar::from_i64(4);
            let qe = (Scalar::from_i64(2) * s.clone() - Scalar::from_i64(2)) / den.clone() + eps;
            let re = (Scalar::from_i64(5) * s.clone() - Scalar::from_i64(4)) / den;
            rich_lead() + nf * pow_q(&q, &qe) / pow_q(&r, &re)
        }
        SimilarTriangles => pow_q(&n, &frac(15, 7)),
        DegreePlan => {
            let int = |v: &Scalar, key: &str| -> Result<u64> {
                if !v.is_integer() {
                    return Err(Error::OutOfRange(format!("{key} must be an integer")));
                }
                v.to_integer().to_u64().ok_or_else(|| Error::OutOfRange(format!("{key} too large")))
            };
            let c = |key: &str| f.params.get(key).cloned().unwrap_or_else(Scalar::one);
            for key in ["a", "a_prime", "c"] {
                if !c(key).is_positive() {
                    return Err(Error::OutOfRange(format!("{key} must be > 0")));
                }
            }
            let kk = int(&k, "k")? as u32;
            plan_degree(int(&m, "m")?, int(&n, "n")?, kk, &c("a"), &c("a_prime"), &c("c")).d as f64
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub formula: FormulaName,
    pub params: BTreeMap<String, String>,
    pub observed: u64,
    pub bound: f64,
    pub ratio: f64,
    pub flag: bool,
    pub fitted_exponent: Option<Fit>,
}

pub fn verify_instance(observed: u64, f: &BoundFormula) -> Result<BoundReport> {
    verify_instance_with(observed, f, DEFAULT_FLAG_THRESHOLD)
}

/// Upper bounds are flagged when `ratio > threshold`, lower bounds when
/// `ratio < 1 / threshold`. Flags are also recorded in the global
/// [`FlagRegistry`].
pub fn verify_instance_with(observed: u64, f: &BoundFormula, threshold: f64) -> Result<BoundReport> {
    let bound = eval_bound(f)?;
    let ratio = if observed == 0 {
        0.0
    } else if bound == 0.0 {
        f64::INFINITY
    } else {
        observed as f64 / bound
    };
    let flag = match f.name.kind() {
        BoundKind::Upper => ratio > threshold,
        BoundKind::Lower => ratio < 1.0 / threshold,
        BoundKind::Value => false,
    };
    let report = BoundReport {
        formula: f.name,
        params: f.params.iter().map(|(k, v)| (k.clone(), crate::io::format_scalar(v))).collect(),
        observed,
        bound,
        ratio,
        flag,
        fitted_exponent: None,
    };
    registry().record(&report);
    Ok(report)
}

/// Process-wide tally of verified reports and flags raised.
#[derive(Default)]
pub struct FlagRegistry {
    inner: Mutex<(usize, Vec<BoundReport>)>,
}

impl FlagRegistry {
    fn record(&self, r: &BoundReport) {
        let mut g = self.inner.lock().expect("registry lock");
        g.0 += 1;
        if r.flag {
            g.1.push(r.clone());
        }
    }

    pub fn checked(&self) -> usize {
        self.inner.lock().expect("registry lock").0
    }

    pub fn flagged(&self) -> Vec<BoundReport> {
        self.inner.lock().expect("registry lock").1.clone()
    }
}

pub fn registry() -> &'static FlagRegistry {
    static R: OnceLock<FlagRegistry> = OnceLock::new();
    R.get_or_init(FlagRegistry::default)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the log-space residuals.
    pub residual: f64,
}

/// Least-squares line through `(ln scale, ln observed)`.
pub fn fit_exponent(series: &[(u64, u64)]) -> Result<Fit> {
    if series.len() < 3 {
        return Err(Error::InsufficientData(format!("{} points, need at least 3", series.len())));
    }
    if series.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InsufficientData("scales must be strictly increasing".into()));
    }
    if series.iter().any(|&(s, o)| s == 0 || o == 0) {
        return Err(Error::InsufficientData("scales and observations must be positive".into()));
    }
    let pts: Vec<(f64, f64)> = series.iter().map(|&(s, o)| ((s as f64).ln(), (o as f64).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(Fit { slope, intercept, residual })
}
