//! Root isolation for integer polynomials whose roots are all real.
//!
//! Repeated roots are split off by Yun's squarefree factorization over the
//! rationals. Each squarefree factor is then solved by bisection between
//! consecutive roots of its derivative (Rolle), with the sign of the factor
//! evaluated exactly at every floating-point probe.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Ascending coefficients over the rationals, no trailing zeros.
type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len().saturating_sub(1)
}

fn monic(p: Poly) -> Poly {
    let p = trim(p);
    match p.last() {
        Some(lead) if !lead.is_one() => {
            let lead = lead.clone();
            p.into_iter().map(|c| c / &lead).collect()
        }
        _ => p,
    }
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let len = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..len)
            .map(|k| a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero))
            .collect(),
    )
}

/// Quotient and remainder of polynomial long division.
fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = trim(a.clone());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("non-empty").clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let factor = rem.last().expect("non-empty") / &lead;
        for (k, c) in b.iter().enumerate() {
            rem[k + shift] -= &factor * c;
        }
        quot[shift] = factor;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let mut x = trim(a.clone());
    let mut y = trim(b.clone());
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Yun's algorithm: squarefree factors paired with their multiplicities.
fn squarefree_factors(f: &Poly) -> Vec<(Poly, usize)> {
    let f = monic(f.clone());
    if degree(&f) == 0 {
        return Vec::new();
    }
    let df = derivative(&f);
    let g = gcd(&f, &df);
    let mut c = div_rem(&f, &g).0;
    let mut d = sub(&div_rem(&df, &g).0, &derivative(&c));
    let mut out = Vec::new();
    let mut multiplicity = 1;
    while degree(&c) > 0 {
        let a = gcd(&c, &d);
        c = div_rem(&c, &a).0;
        d = sub(&div_rem(&d, &a).0, &derivative(&c));
        if degree(&a) > 0 {
            out.push((a, multiplicity));
        }
        multiplicity += 1;
    }
    out
}

/// Ascending integer coefficients with content removed.
type IntPoly = Vec<BigInt>;

/// Clears denominators and divides out the content.
fn primitive(p: &Poly) -> IntPoly {
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: IntPoly = p.iter().map(|c| (c * &lcm).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() || content.is_one() {
        ints
    } else {
        ints.into_iter().map(|c| c / &content).collect()
    }
}

fn int_derivative(p: &IntPoly) -> IntPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

/// `x = m * 2^e` exactly, for finite `x`.
fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    (BigInt::from(sign) * BigInt::from(mantissa), e)
}

/// Exact sign of `p(x)`, using only integer arithmetic.
fn sign_at(p: &IntPoly, x: f64) -> Ordering {
    let (m, e) = dyadic(x);
    let value = if e >= 0 {
        let xi = m << (e as usize);
        p.iter().rev().fold(BigInt::zero(), |acc, c| acc * &xi + c)
    } else {
        // 2^(k d) p(m / 2^k) = sum_i a_i m^i 2^(k (d - i))
        let k = (-e) as usize;
        let mut scale = BigInt::one();
        let mut acc = BigInt::zero();
        for c in p.iter().rev() {
            acc = acc * &m + c * &scale;
            scale <<= k;
        }
        acc
    };
    value.sign_ordering()
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Bracket narrow enough to stop: a few ulps, or far below any root spacing.
fn converged(lo: f64, hi: f64) -> bool {
    hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-290)
}

/// Roots of a squarefree polynomial with only real roots, ascending.
fn squarefree_real_roots(p: &IntPoly) -> Vec<f64> {
    let d = p.len().saturating_sub(1);
    match d {
        0 => return Vec::new(),
        1 => {
            let r = BigRational::new(-p[0].clone(), p[1].clone());
            return vec![r.to_f64().unwrap_or(f64::NAN)];
        }
        _ => {}
    }
    let lead = BigRational::from_integer(p[d].clone());
    let bound = 1.0
        + p[..d]
            .iter()
            .map(|c| (BigRational::from_integer(c.clone()) / &lead).abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
    let mut probes = vec![-bound];
    probes.extend(squarefree_real_roots(&int_derivative(p)));
    probes.push(bound);

    let mut roots = Vec::with_capacity(d);
    for w in probes.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let s_lo = sign_at(p, lo);
        let s_hi = sign_at(p, hi);
        if s_lo == Ordering::Equal {
            roots.push(lo);
            continue;
        }
        if s_hi == Ordering::Equal || s_lo == s_hi {
            // a root exactly at `hi` is picked up by the next window
            continue;
        }
        while !converged(lo, hi) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match sign_at(p, mid) {
                Ordering::Equal => {
                    lo = mid;
                    hi = mid;
                    break;
                }
                s if s == s_lo => lo = mid,
                _ => hi = mid,
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    if sign_at(p, bound) == Ordering::Equal {
        roots.push(bound);
    }
    roots
}

/// All real roots of the integer polynomial (ascending coefficients),
/// repeated by multiplicity, in no particular order.
pub fn real_roots_with_multiplicity(ascending: &[BigInt]) -> Vec<f64> {
    let p: Poly = trim(
        ascending
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    );
    let mut out = Vec::new();
    for (factor, mult) in squarefree_factors(&p) {
        for r in squarefree_real_roots(&primitive(&factor)) {
            out.extend(std::iter::repeat_n(r, mult));
        }
    }
    out
}
