//! High-precision numerics: evaluation of forms on the upper half plane,
//! Eichler cocycles, their defect checks, period polynomials, and rational
//! reconstruction.
//!
//! Everything runs at a working precision derived from a requested number of
//! decimal digits plus a fixed guard, with tolerances always expressed
//! relative to the requested digits, never as absolute epsilons.

mod cocycle;
mod eval;
mod quad;

pub use cocycle::{
    basepoint_coboundary_defect, cocycle_defect, eichler_cocycle, period_polynomial,
    rational_reconstruct, rational_reconstruct_complex, QuadOpts,
};
pub use eval::NumForm;
pub use quad::GaussLegendre;

use crate::error::{Error, Result};
use crate::rat::{Int, Rat};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigUint;
use num_traits::Zero;

/// Guard bits kept beyond the requested decimal digits; cancellation in the
/// oscillatory sums eats into these, never into the advertised digits.
const GUARD_BITS: usize = 96;

/// Working-precision context: requested digits, derived bit precision, and
/// the constants cache. One context per computation; nothing global.
pub struct PrecCtx {
    digits: usize,
    bits: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl PrecCtx {
    pub fn new(digits: usize) -> Result<Self> {
        if digits == 0 {
            return Err(Error::Domain("precision must be at least one digit".into()));
        }
        let bits = (digits as f64 * core::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        let cc = Consts::new().map_err(|e| Error::Internal(format!("constants cache: {e:?}")))?;
        Ok(PrecCtx { digits, bits, rm: RoundingMode::ToEven, cc })
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn rm(&self) -> RoundingMode {
        self.rm
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, self.rm)
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i64(0, self.bits)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_i64(1, self.bits)
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    fn from_int(&mut self, v: &Int) -> BigFloat {
        let s = v.to_string();
        BigFloat::parse(&s, Radix::Dec, self.bits, self.rm, &mut self.cc)
    }

    pub fn from_rat(&mut self, r: &Rat) -> BigFloat {
        let n = self.from_int(r.numer());
        let d = self.from_int(r.denom());
        n.div(&d, self.bits, self.rm)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, self.rm)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, self.rm, &mut self.cc)
    }

    pub fn sin_cos(&mut self, a: &BigFloat) -> (BigFloat, BigFloat) {
        (a.sin(self.bits, self.rm, &mut self.cc), a.cos(self.bits, self.rm, &mut self.cc))
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, self.rm)
    }

    /// `10^(-e)` for tolerance thresholds.
    pub fn pow10_neg(&mut self, e: i64) -> BigFloat {
        let ten = self.from_i64(10);
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = if e >= 0 { self.div(&acc, &ten) } else { self.mul(&acc, &ten) };
        }
        acc
    }

    /// Crude f64 view, good enough for heuristics (never for results).
    pub fn to_f64_approx(&self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        let e = x.exponent().unwrap_or(0) as f64;
        // mantissa in [0.5, 1): read the top word
        let m = x
            .mantissa_digits()
            .and_then(|w| w.last().copied())
            .map(|w| w as f64 / (u64::MAX as f64 + 1.0))
            .unwrap_or(0.5);
        let s = if x.is_negative() { -1.0 } else { 1.0 };
        s * m * (2f64).powf(e)
    }

    /// Scientific decimal string with exactly `digits` significant digits.
    pub fn decimal_string(&mut self, x: &BigFloat, digits: usize) -> Result<String> {
        if x.is_nan() || x.is_inf() {
            return Err(Error::Budget("non-finite value cannot be printed".into()));
        }
        if x.is_zero() {
            let mut s = String::from("0.");
            for _ in 1..digits {
                s.push('0');
            }
            return Ok(format!("{s}e+0"));
        }
        let (sign, ds, exp) = x
            .convert_to_radix(Radix::Dec, self.rm, &mut self.cc)
            .map_err(|e| Error::Internal(format!("radix conversion: {e:?}")))?;
        // value = 0.d1 d2 ... * 10^exp
        let mut digs: Vec<u8> = ds;
        digs.resize(digits + 1, 0);
        // round at position `digits`
        if digs[digits] >= 5 {
            let mut i = digits;
            loop {
                if i == 0 {
                    digs.insert(0, 1);
                    digs.truncate(digits + 1);
                    return self.assemble_decimal(sign, &digs[..digits], exp as i64 + 1);
                }
                i -= 1;
                if digs[i] == 9 {
                    digs[i] = 0;
                } else {
                    digs[i] += 1;
                    break;
                }
            }
        }
        self.assemble_decimal(sign, &digs[..digits], exp as i64)
    }

    fn assemble_decimal(&self, sign: Sign, digs: &[u8], exp: i64) -> Result<String> {
        let mut s = String::new();
        if sign == Sign::Neg {
            s.push('-');
        }
        s.push((b'0' + digs[0]) as char);
        s.push('.');
        for &d in &digs[1..] {
            s.push((b'0' + d) as char);
        }
        let e10 = exp - 1;
        if e10 >= 0 {
            s.push_str(&format!("e+{e10}"));
        } else {
            s.push_str(&format!("e{e10}"));
        }
        Ok(s)
    }
}

/// Exact rational value of a finite big-float (mantissa times a power of 2).
pub fn bigfloat_to_rat(x: &BigFloat) -> Result<Rat> {
    if x.is_nan() || x.is_inf() {
        return Err(Error::Budget("non-finite value has no rational meaning".into()));
    }
    if x.is_zero() {
        return Ok(Rat::zero());
    }
    let (words, nbits, sign, exp, _) = x
        .as_raw_parts()
        .ok_or_else(|| Error::Internal("raw parts unavailable".into()))?;
    let mut bytes: Vec<u8> = Vec::with_capacity(words.len() * 8);
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    let mant = Int::from(BigUint::from_bytes_le(&bytes));
    let mant = if sign == Sign::Neg { -mant } else { mant };
    // value = mant / 2^nbits * 2^exp
    let shift = exp as i64 - nbits as i64;
    let two = Int::from(2);
    Ok(if shift >= 0 {
        Rat::from_integer(mant * two.pow(shift as u32))
    } else {
        Rat::new(mant, two.pow((-shift) as u32))
    })
}

/// Complex number at working precision.
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(ctx: &PrecCtx) -> Self {
        BigComplex::new(ctx.zero(), ctx.zero())
    }

    pub fn from_f64(ctx: &PrecCtx, re: f64, im: f64) -> Self {
        BigComplex::new(ctx.from_f64(re), ctx.from_f64(im))
    }

    pub fn from_real(re: BigFloat, ctx: &PrecCtx) -> Self {
        BigComplex::new(re, ctx.zero())
    }

    pub fn add(&self, o: &Self, ctx: &PrecCtx) -> Self {
        BigComplex::new(ctx.add(&self.re, &o.re), ctx.add(&self.im, &o.im))
    }

    pub fn sub(&self, o: &Self, ctx: &PrecCtx) -> Self {
        BigComplex::new(ctx.sub(&self.re, &o.re), ctx.sub(&self.im, &o.im))
    }

    pub fn neg(&self) -> Self {
        BigComplex::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &Self, ctx: &PrecCtx) -> Self {
        let ac = ctx.mul(&self.re, &o.re);
        let bd = ctx.mul(&self.im, &o.im);
        let ad = ctx.mul(&self.re, &o.im);
        let bc = ctx.mul(&self.im, &o.re);
        BigComplex::new(ctx.sub(&ac, &bd), ctx.add(&ad, &bc))
    }

    pub fn scale(&self, r: &BigFloat, ctx: &PrecCtx) -> Self {
        BigComplex::new(ctx.mul(&self.re, r), ctx.mul(&self.im, r))
    }

    pub fn scale_i64(&self, k: i64, ctx: &PrecCtx) -> Self {
        self.scale(&ctx.from_i64(k), ctx)
    }

    pub fn div(&self, o: &Self, ctx: &PrecCtx) -> Self {
        let n2 = o.norm_sqr(ctx);
        let num = self.mul(&o.conj(), ctx);
        BigComplex::new(ctx.div(&num.re, &n2), ctx.div(&num.im, &n2))
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), self.im.neg())
    }

    pub fn norm_sqr(&self, ctx: &PrecCtx) -> BigFloat {
        ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im))
    }

    pub fn abs(&self, ctx: &PrecCtx) -> BigFloat {
        ctx.sqrt(&self.norm_sqr(ctx))
    }

    /// `max(|re|, |im|)`; the norm used by all defect bounds.
    pub fn max_norm(&self) -> BigFloat {
        let a = self.re.abs();
        let b = self.im.abs();
        a.max(&b)
    }

    /// `e^self = e^re (cos im + i sin im)`.
    pub fn exp(&self, ctx: &mut PrecCtx) -> Self {
        let r = ctx.exp(&self.re);
        let (s, c) = ctx.sin_cos(&self.im);
        BigComplex::new(ctx.mul(&r, &c), ctx.mul(&r, &s))
    }

    pub fn powi(&self, e: u32, ctx: &PrecCtx) -> Self {
        let mut acc = BigComplex::from_real(ctx.one(), ctx);
        for _ in 0..e {
            acc = acc.mul(self, ctx);
        }
        acc
    }
}

/// Integer matrix `(a b; c d)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SL2Mat {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SL2Mat {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Domain(format!(
                "matrix ({a}, {b}; {c}, {d}) has determinant {} != 1",
                a * d - b * c
            )));
        }
        Ok(SL2Mat { a, b, c, d })
    }

    pub fn identity() -> Self {
        SL2Mat { a: 1, b: 0, c: 0, d: 1 }
    }

    /// `S = (0, -1; 1, 0)`, the inversion `z -> -1/z`.
    pub fn s() -> Self {
        SL2Mat { a: 0, b: -1, c: 1, d: 0 }
    }

    /// `T = (1, 1; 0, 1)`, the translation `z -> z + 1`.
    pub fn t() -> Self {
        SL2Mat { a: 1, b: 1, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &SL2Mat) -> SL2Mat {
        SL2Mat {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> SL2Mat {
        SL2Mat { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Word in `S`, `T`; characters other than 'S'/'T' are rejected.
    pub fn from_word(word: &str) -> Result<SL2Mat> {
        let mut m = SL2Mat::identity();
        for ch in word.chars() {
            m = match ch {
                'S' => m.mul(&SL2Mat::s()),
                'T' => m.mul(&SL2Mat::t()),
                _ => return Err(Error::Domain(format!("unknown generator '{ch}' in word"))),
            };
        }
        Ok(m)
    }

    /// Moebius action on the upper half plane.
    pub fn apply(&self, z: &BigComplex, ctx: &PrecCtx) -> BigComplex {
        let num = z.scale_i64(self.a, ctx).add(&BigComplex::from_real(ctx.from_i64(self.b), ctx), ctx);
        let den = z.scale_i64(self.c, ctx).add(&BigComplex::from_real(ctx.from_i64(self.d), ctx), ctx);
        num.div(&den, ctx)
    }
}

/// Degree-`n` polynomial in the symbol pair, stored as the coefficients of
/// `a^j b^(n-j)` for `j = 0 .. n`.
#[derive(Debug, Clone)]
pub struct ComplexPoly {
    coeffs: Vec<BigComplex>,
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<BigComplex>) -> Self {
        ComplexPoly { coeffs }
    }

    pub fn zero(n: u32, ctx: &PrecCtx) -> Self {
        ComplexPoly { coeffs: (0..=n).map(|_| BigComplex::zero(ctx)).collect() }
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeff(&self, j: usize) -> &BigComplex {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn add(&self, o: &Self, ctx: &PrecCtx) -> Self {
        ComplexPoly {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b, ctx)).collect(),
        }
    }

    pub fn sub(&self, o: &Self, ctx: &PrecCtx) -> Self {
        ComplexPoly {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b, ctx)).collect(),
        }
    }

    pub fn scale(&self, r: &BigComplex, ctx: &PrecCtx) -> Self {
        ComplexPoly { coeffs: self.coeffs.iter().map(|a| a.mul(r, ctx)).collect() }
    }

    pub fn max_norm(&self) -> BigFloat {
        let mut best = self.coeffs[0].max_norm();
        for c in &self.coeffs[1..] {
            best = best.max(&c.max_norm());
        }
        best
    }

    /// The right action by `gamma = (a, b; c, d)`: substitute
    /// `a-symbol -> d a + c b` and `b-symbol -> b a + a b`.
    ///
    /// This is the unique convention among the sign/transpose variants under
    /// which the cocycle identity `c(gamma delta) = c(gamma)|delta +
    /// c(delta)` holds for the basepoint integrals; the defect tests pin it.
    pub fn slash(&self, gamma: &SL2Mat, ctx: &PrecCtx) -> Self {
        let n = self.degree() as usize;
        let (a, b, c, d) = (gamma.a as i128, gamma.b as i128, gamma.c as i128, gamma.d as i128);
        // m[i][j]: coefficient of a^i b^(n-i) in (d a + c b)^j (b a + a b)^(n-j)
        let mut out = ComplexPoly::zero(n as u32, ctx);
        for j in 0..=n {
            // (d a + c b)^j: term r: C(j, r) d^r c^(j-r) a^r b^(j-r)
            // (b a + a b)^(n-j): term s: C(n-j, s) b^s a^(n-j-s) a^s b^(n-j-s)
            for r in 0..=j {
                for s in 0..=(n - j) {
                    let coeff = i128_binomial(j, r)
                        * ipow(d, r as u32)
                        * ipow(c, (j - r) as u32)
                        * i128_binomial(n - j, s)
                        * ipow(b, s as u32)
                        * ipow(a, (n - j - s) as u32);
                    if coeff == 0 {
                        continue;
                    }
                    let i = r + s;
                    let add = self.coeffs[j].scale(&bigfloat_from_i128(coeff, ctx), ctx);
                    out.coeffs[i] = out.coeffs[i].add(&add, ctx);
                }
            }
        }
        out
    }
}

fn ipow(base: i128, e: u32) -> i128 {
    let mut acc: i128 = 1;
    for _ in 0..e {
        acc *= base;
    }
    acc
}

fn i128_binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k {
        num *= (n - i) as i128;
        den *= (i + 1) as i128;
    }
    num / den
}

fn bigfloat_from_i128(v: i128, ctx: &PrecCtx) -> BigFloat {
    // i128 values here stay well inside f64-exact range only for small
    // words, so build from two 64-bit halves exactly.
    let neg = v < 0;
    let uv = v.unsigned_abs();
    let hi = (uv >> 64) as u64;
    let lo = uv as u64;
    let two64 = BigFloat::from_u64(u64::MAX, ctx.bits())
        .add(&BigFloat::from_u64(1, ctx.bits()), ctx.bits(), ctx.rm());
    let mut r = BigFloat::from_u64(hi, ctx.bits());
    r = r.mul(&two64, ctx.bits(), ctx.rm());
    r = r.add(&BigFloat::from_u64(lo, ctx.bits()), ctx.bits(), ctx.rm());
    if neg {
        r.neg()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arithmetic_basics() {
        let ctx = &mut PrecCtx::new(30).unwrap();
        let i = BigComplex::from_f64(ctx, 0.0, 1.0);
        let m = i.mul(&i, ctx);
        assert!(ctx.to_f64_approx(&m.re) + 1.0 < 1e-12);
        let z = BigComplex::from_f64(ctx, 3.0, 4.0);
        assert!((ctx.to_f64_approx(&z.abs(ctx)) - 5.0).abs() < 1e-12);
        let q = z.div(&z, ctx);
        assert!((ctx.to_f64_approx(&q.re) - 1.0).abs() < 1e-12);
        assert!(ctx.to_f64_approx(&q.im).abs() < 1e-12);
    }

    #[test]
    fn exp_of_2_pi_i_is_one() {
        let ctx = &mut PrecCtx::new(40).unwrap();
        let pi = ctx.pi();
        let z = BigComplex::new(ctx.zero(), ctx.mul(&pi, &ctx.from_i64(2)));
        let e = z.exp(ctx);
        let tol = ctx.pow10_neg(38);
        assert!(ctx.sub(&e.re, &ctx.one()).abs().cmp(&tol).unwrap_or(1) < 0);
        assert!(e.im.abs().cmp(&tol).unwrap_or(1) < 0);
    }

    #[test]
    fn sl2_words_and_moebius() {
        let s = SL2Mat::s();
        let t = SL2Mat::t();
        assert_eq!(s.mul(&s), SL2Mat { a: -1, b: 0, c: 0, d: -1 });
        assert_eq!(SL2Mat::from_word("ST").unwrap(), s.mul(&t));
        assert_eq!(s.mul(&s.inverse()), SL2Mat::identity());
        assert!(SL2Mat::new(1, 1, 1, 1).is_err());
        let ctx = &PrecCtx::new(30).unwrap();
        let z = BigComplex::from_f64(ctx, 0.0, 2.0);
        let w = s.apply(&z, ctx);
        // -1/(2i) = i/2
        assert!(PrecCtx::new(30).unwrap().to_f64_approx(&w.re).abs() < 1e-12);
        assert!((PrecCtx::new(30).unwrap().to_f64_approx(&w.im) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slash_is_a_right_action() {
        let ctx = &mut PrecCtx::new(30).unwrap();
        let n = 4u32;
        let p = ComplexPoly::new(
            (0..=n).map(|j| BigComplex::from_f64(ctx, j as f64 + 0.5, -(j as f64))).collect(),
        );
        let g1 = SL2Mat::from_word("ST").unwrap();
        let g2 = SL2Mat::from_word("TTS").unwrap();
        let lhs = p.slash(&g1.mul(&g2), ctx);
        let rhs = p.slash(&g1, ctx).slash(&g2, ctx);
        let diff = lhs.sub(&rhs, ctx).max_norm();
        let tol = ctx.pow10_neg(25);
        assert!(diff.cmp(&tol).unwrap_or(1) < 0, "right action law fails");
    }

    #[test]
    fn slash_by_identity_is_identity() {
        let ctx = &mut PrecCtx::new(30).unwrap();
        let p = ComplexPoly::new(
            (0..=3).map(|j| BigComplex::from_f64(ctx, 1.0 + j as f64, 2.0)).collect(),
        );
        let q = p.slash(&SL2Mat::identity(), ctx);
        let diff = p.sub(&q, ctx).max_norm();
        assert!(diff.is_zero() || ctx.to_f64_approx(&diff) < 1e-25);
    }

    #[test]
    fn bigfloat_rat_round_trip() {
        let ctx = &mut PrecCtx::new(30).unwrap();
        let x = ctx.from_rat(&crate::rat::rat(-7, 16)); // exactly representable
        assert_eq!(bigfloat_to_rat(&x).unwrap(), crate::rat::rat(-7, 16));
        let h = ctx.from_rat(&crate::rat::rat(1, 2));
        assert_eq!(bigfloat_to_rat(&h).unwrap(), crate::rat::rat(1, 2));
    }

    #[test]
    fn decimal_strings() {
        let ctx = &mut PrecCtx::new(10).unwrap();
        let x = ctx.from_rat(&crate::rat::rat(1, 4));
        assert_eq!(ctx.decimal_string(&x, 10).unwrap(), "2.500000000e-1");
        let y = ctx.from_i64(-1200);
        assert_eq!(ctx.decimal_string(&y, 5).unwrap(), "-1.2000e+3");
        let z = ctx.zero();
        assert_eq!(ctx.decimal_string(&z, 4).unwrap(), "0.000e+0");
    }
}
