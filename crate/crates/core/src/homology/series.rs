//! Poincaré series of `H_*(B(Z/p)^r; Z)`, counted by `Z/p`-dimension.
//!
//! The series does not depend on `p`. Two exact routes are provided: the
//! Künneth recursion `P(r+1) = P(r) P(1) + t (P(r) - 1)(P(1) - 1)` seeded with
//! `P(1) = 1 + t + t^3 + t^5 + ...`, and power-series division of the closed
//! form `(1 + t (1-t)^r) / ((1-t)^r (1+t))`.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

type Series = Vec<BigInt>;

fn mul_truncated(a: &[BigInt], b: &[BigInt], len: usize) -> Series {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `num / den` as power series, `den[0] = 1`.
fn div_truncated(num: &[BigInt], den: &[BigInt], len: usize) -> Series {
    debug_assert!(den[0].is_one());
    let mut q: Series = Vec::with_capacity(len);
    for n in 0..len {
        let mut c = num.get(n).cloned().unwrap_or_default();
        for i in 1..=n.min(den.len() - 1) {
            c -= &den[i] * &q[n - i];
        }
        q.push(c);
    }
    q
}

/// `(1 + s t)^e` truncated.
fn binomial_power(s: i64, e: usize, len: usize) -> Series {
    let mut out = vec![BigInt::one()];
    out.resize(len, BigInt::zero());
    let factor = [BigInt::one(), BigInt::from(s)];
    for _ in 0..e {
        out = mul_truncated(&out, &factor, len);
    }
    out
}

fn to_unsigned(s: Series) -> Vec<BigUint> {
    s.into_iter().map(|c| c.to_biguint().expect("Poincaré coefficients are nonnegative")).collect()
}

fn seed(len: usize) -> Series {
    (0..len).map(|n| if n == 0 || n % 2 == 1 { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Coefficients of `P(r, t)` through `t^max_degree` by the Künneth recursion.
pub fn poincare_series_recursive(r: usize, max_degree: usize) -> Result<Vec<BigUint>> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    let len = max_degree + 1;
    let p1 = seed(len);
    let mut p1_minus = p1.clone();
    p1_minus[0] -= 1;
    let mut p = p1.clone();
    for _ in 1..r {
        let tensor = mul_truncated(&p, &p1, len);
        let mut p_minus = p.clone();
        p_minus[0] -= 1;
        let tor = mul_truncated(&p_minus, &p1_minus, len);
        p = tensor;
        // multiply the Tor part by t
        for n in 1..len {
            p[n] += &tor[n - 1];
        }
    }
    Ok(to_unsigned(p))
}

/// Coefficients of `P(r, t)` through `t^max_degree` from the closed form.
pub fn poincare_series_closed(r: usize, max_degree: usize) -> Result<Vec<BigUint>> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    let len = max_degree + 1;
    let one_minus_t_r = binomial_power(-1, r, len);
    let mut num = vec![BigInt::zero(); len];
    num[0] = BigInt::one();
    for n in 1..len {
        num[n] += &one_minus_t_r[n - 1];
    }
    let den = mul_truncated(&one_minus_t_r, &binomial_power(1, 1, len), len);
    Ok(to_unsigned(div_truncated(&num, &den, len)))
}

/// `(-1)^{n+1} + Σ_{j=0}^{n} (-1)^{n-j} C(j+r-1, r-1)` for `n >= 1`, and `1`
/// for `n = 0`.
pub fn poincare_closed_coefficient(r: usize, n: usize) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    if n == 0 {
        return Ok(BigUint::one());
    }
    let sign = |e: usize| if e.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let mut acc = sign(n + 1);
    for j in 0..=n {
        acc += sign(n - j) * BigInt::from(binomial(BigUint::from(j + r - 1), BigUint::from(r - 1)));
    }
    Ok(acc.to_biguint().expect("coefficient is nonnegative"))
}
