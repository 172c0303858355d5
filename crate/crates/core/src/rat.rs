//! Rational scalars and small integer combinatorics shared across modules.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept fully reduced.
pub type Rat = num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k {
        num *= Int::from(n - i);
        den *= Int::from(i + 1);
    }
    num / den
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> Int {
    let mut acc = Int::one();
    for i in 2..=n {
        acc *= Int::from(i);
    }
    acc
}

/// `base^exp` for a signed integer base.
pub fn int_pow(base: i64, exp: u32) -> Int {
    Int::from(base).pow(exp)
}

/// True when every prime factor of `n` is 2 or 3.
pub fn is_23_smooth(n: &Int) -> bool {
    let mut m = n.abs();
    if m.is_zero() {
        return false;
    }
    let two = Int::from(2);
    let three = Int::from(3);
    for p in [&two, &three] {
        while (&m % p).is_zero() {
            m /= p;
        }
    }
    m.is_one()
}

/// Divisor power sum `sigma_k(m) = sum_{d | m} d^k` for `m >= 1`.
pub fn sigma(k: u32, m: u64) -> Int {
    let mut acc = Int::zero();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            acc += Int::from(d).pow(k);
            let e = m / d;
            if e != d {
                acc += Int::from(e).pow(k);
            }
        }
        d += 1;
    }
    acc
}

/// Bernoulli numbers `B_0 .. B_n` by the convolution recurrence
/// `sum_j C(n+1, j) B_j = 0` with `B_0 = 1` (so `B_1 = -1/2`).
///
/// Recomputed per call; no shared cache, so the function is trivially safe
/// under concurrent use.
pub fn bernoulli_upto(n: u32) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(n as usize + 1);
    b.push(Rat::one());
    for m in 1..=n {
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut acc = Rat::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rat::from_integer(binomial(m + 1, j as u32)) * bj;
        }
        let bm = -acc / Rat::from_integer(Int::from(m + 1));
        b.push(bm);
    }
    b
}
