use num_traits::{One, Pow};
use serde::Serialize;

use crate::scalar::ExactField;
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `m < a' n^{1/k}`: the naive bound already suffices.
    NaiveOnly,
    /// `a' n^{1/k} <= m <= a n^{3/2}`.
    SmallM,
    /// `m > a n^{3/2}`.
    LargeM,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreePlan {
    pub regime: Regime,
    pub d: u64,
    /// Unrounded degree before the `D >= 1` clamp.
    pub raw: f64,
    pub k: u32,
    pub a: Scalar,
    pub a_prime: Scalar,
    pub c: Scalar,
}

/// Partition degree for `m` points and `n` curves with `k` degrees of
/// freedom. Regime boundaries are decided exactly; `D` is rounded from a
/// floating-point evaluation.
pub fn plan_degree(m: u64, n: u64, k: u32, a: &Scalar, a_prime: &Scalar, c: &Scalar) -> DegreePlan {
    assert!(m >= 1 && n >= 1 && k >= 2, "plan_degree needs m, n >= 1 and k >= 2");
    let mq = Scalar::from_i64(m as i64);
    let nq = Scalar::from_i64(n as i64);
    // m < a' n^{1/k}  <=>  m^k < a'^k n
    let naive = Pow::pow(&mq, k) < Pow::pow(a_prime, k) * nq.clone();
    // m <= a n^{3/2}  <=>  m^2 <= a^2 n^3
    let small = Pow::pow(&mq, 2u32) <= Pow::pow(a, 2u32) * Pow::pow(&nq, 3u32);
    let (mf, nf, cf) = (m as f64, n as f64, c.to_f64());
    let (regime, raw) = if naive {
        (Regime::NaiveOnly, 0.0)
    } else if small {
        let e = 3.0 * k as f64 - 2.0;
        (Regime::SmallM, cf * ((k as f64 * mf.ln() - nf.ln()) / e).exp())
    } else {
        (Regime::LargeM, cf * nf.sqrt())
    };
    let d = match regime {
        Regime::NaiveOnly => 0,
        _ => (raw.round() as u64).max(1),
    };
    DegreePlan { regime, d, raw, k, a: a.clone(), a_prime: a_prime.clone(), c: c.clone() }
}

/// `plan_degree` with `a = a' = c = 1`.
pub fn plan_degree_default(m: u64, n: u64, k: u32) -> DegreePlan {
    let one = Scalar::one();
    plan_degree(m, n, k, &one, &one, &one)
}

/// Degree of the round-`i` bisecting polynomial (rounds count from 1): the
/// least `d` whose space of nonconstant monomials, of dimension
/// `C(d+3, 3) - 1`, is at least the number `2^{i-1}` of cells to bisect.
pub fn round_degree(i: u32) -> u32 {
    assert!(i >= 1);
    let sets = 1u64 << (i - 1);
    (1u32..)
        .find(|&d| {
            let d = d as u64;
            (d + 3) * (d + 2) * (d + 1) / 6 - 1 >= sets
        })
        .expect("some degree suffices")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule() {
        assert_eq!(
            (1..=4).map(round_degree).collect::<Vec<_>>(),
            vec![1, 1, 2, 2]
        );
        assert_eq!(round_degree(5), 3);
    }

    #[test]
    fn regimes() {
        // m = n^{3/2}
        let p = plan_degree_default(4096, 256, 2);
        assert_eq!(p.regime, Regime::SmallM);
        assert_eq!(p.d, 16);
        let p = plan_degree_default(256 * 256, 256, 2);
        assert_eq!(p.regime, Regime::LargeM);
        assert_eq!(p.d, 16);
        let p = plan_degree_default(8, 256, 2);
        assert_eq!(p.regime, Regime::NaiveOnly);
        assert_eq!(p.d, 0);
        // boundary m = n^{1/k} exactly is not naive
        assert_eq!(plan_degree_default(16, 256, 2).regime, Regime::SmallM);
    }

    #[test]
    fn degree_at_least_one() {
        let p = plan_degree_default(17, 256, 2);
        assert_eq!(p.regime, Regime::SmallM);
        assert!(p.d >= 1);
    }
}
