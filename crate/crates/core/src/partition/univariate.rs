//! Dense univariate polynomials with Sturm-sequence real root isolation.
//!
//! A polynomial is a coefficient vector, constant term first, with no
//! trailing zeros (the zero polynomial is the empty vector).

use crate::scalar::ExactField;

pub fn trim<F: ExactField>(mut p: Vec<F>) -> Vec<F> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree<F: ExactField>(p: &[F]) -> Option<usize> {
    (!p.is_empty()).then(|| p.len() - 1)
}

pub fn eval<F: ExactField>(p: &[F], x: &F) -> F {
    p.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
}

pub fn derivative<F: ExactField>(p: &[F]) -> Vec<F> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * F::from_i64(i as i64))
            .collect(),
    )
}

pub fn mul<F: ExactField>(a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(out)
}

/// Quotient and remainder of `a / b`, `b` nonzero.
pub fn div_rem<F: ExactField>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![F::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r[r.len() - 1].clone() / lead.clone();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - c.clone() * bc.clone();
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub fn gcd<F: ExactField>(a: &[F], b: &[F]) -> Vec<F> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

pub fn monic<F: ExactField>(p: Vec<F>) -> Vec<F> {
    match p.last().cloned() {
        Some(l) => p.into_iter().map(|c| c / l.clone()).collect(),
        None => p,
    }
}

/// `p / gcd(p, p')`: same real roots, all simple.
pub fn squarefree<F: ExactField>(p: &[F]) -> Vec<F> {
    let p = trim(p.to_vec());
    if p.len() <= 2 {
        return p;
    }
    let g = gcd(&p, &derivative(&p));
    monic(div_rem(&p, &g).0)
}

/// The Sturm sequence `p, p', -rem(p, p'), ...` of a squarefree polynomial.
pub fn sturm_sequence<F: ExactField>(p: &[F]) -> Vec<Vec<F>> {
    let mut seq = vec![trim(p.to_vec())];
    let d = derivative(&seq[0]);
    if d.is_empty() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let (_, r) = div_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes<F: ExactField>(seq: &[Vec<F>], x: &F) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots<F: ExactField>(seq: &[Vec<F>], a: &F, b: &F) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// Bound `B` with every real root strictly inside `(-B, B)`.
pub fn root_bound<F: ExactField>(p: &[F]) -> F {
    let lead = p.last().expect("nonzero polynomial").abs();
    let m = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs() / lead.clone())
        .max()
        .unwrap_or_else(F::zero);
    m + F::one()
}

/// Disjoint, sorted open intervals `(a, b)` each holding exactly one real
/// root of `p`, with `p(a) != 0` and `p(b) != 0`. Consecutive intervals
/// satisfy `b_i <= a_{i+1}`.
pub fn isolate_roots<F: ExactField>(p: &[F]) -> Vec<(F, F)> {
    let p = squarefree(p);
    if p.len() <= 1 {
        return Vec::new();
    }
    let seq = sturm_sequence(&p);
    let b = root_bound(&p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = split_point(&p, &lo, &hi);
        // upper half first so the lower half pops first
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort();
    out
}

/// A non-root strictly inside `(lo, hi)`: the first of `1/2, 1/3, 2/3,
/// 1/4, ...` of the way across that is not a root.
pub fn split_point<F: ExactField>(p: &[F], lo: &F, hi: &F) -> F {
    let w = hi.clone() - lo.clone();
    for den in 2i64.. {
        for num in 1..den {
            let x = lo.clone() + w.clone() * F::from_frac(num, den);
            if !eval(p, &x).is_zero() {
                return x;
            }
        }
    }
    unreachable!()
}

/// Sample points, one per maximal open interval of the real line on which
/// `p` has no root: left of all roots, between consecutive roots, and right
/// of all roots.
pub fn sample_points<F: ExactField>(p: &[F]) -> Vec<F> {
    let iv = isolate_roots(p);
    if iv.is_empty() {
        return vec![F::zero()];
    }
    let mut out = vec![iv[0].0.clone()];
    out.extend(iv.into_iter().map(|(_, b)| b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn p(v: &[i64]) -> Vec<Q> {
        trim(v.iter().map(|&c| Q::from_i64(c)).collect())
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, -3, 0, 2, 5]);
        let b = p(&[2, 1, 1]);
        let (q, r) = div_rem(&a, &b);
        let back = trim(
            (0..a.len())
                .map(|i| {
                    mul(&q, &b).get(i).cloned().unwrap_or_default()
                        + r.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        );
        assert_eq!(back, a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn squarefree_drops_repeats() {
        // (x - 1)^2 (x + 2)
        let f = mul(&mul(&p(&[-1, 1]), &p(&[-1, 1])), &p(&[2, 1]));
        assert_eq!(squarefree(&f), p(&[-2, 1, 1]));
    }

    #[test]
    fn isolates_irrational_and_rational_roots() {
        // (x^2 - 2)(x - 1)(x + 3)
        let f = mul(&mul(&p(&[-2, 0, 1]), &p(&[-1, 1])), &p(&[3, 1]));
        let iv = isolate_roots(&f);
        assert_eq!(iv.len(), 4);
        let approx = [-3.0, -(2f64.sqrt()), 1.0, 2f64.sqrt()];
        for ((a, b), r) in iv.iter().zip(approx) {
            assert!(a.to_f64() < r && r < b.to_f64());
            assert!(!eval(&f, a).is_zero() && !eval(&f, b).is_zero());
        }
        for w in iv.windows(2) {
            assert!(w[0].1 <= w[1].0);
        }
        assert_eq!(sample_points(&f).len(), 5);
    }

    #[test]
    fn constant_and_rootless() {
        assert_eq!(isolate_roots(&p(&[5])).len(), 0);
        assert_eq!(isolate_roots(&p(&[1, 0, 1])).len(), 0);
        assert_eq!(sample_points(&p(&[1, 0, 1])), vec![Q::from_i64(0)]);
    }

    #[test]
    fn clustered_roots_separate() {
        // roots 1/1000 and 2/1000 and 0
        let f = mul(&mul(&p(&[-1, 1000]), &p(&[-2, 1000])), &p(&[0, 1]));
        assert_eq!(isolate_roots(&f).len(), 3);
    }
}
