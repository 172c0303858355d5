//! The graded ring `Q[u, v][1/Delta]` of weakly holomorphic modular forms.
//!
//! `u` has weight 4, `v` weight 6, and `Delta = u^3 - 27 v^2` weight 12. A
//! normalised [`AlgForm`] is `P(u, v) * Delta^(-c)` with `Delta` not dividing
//! `P`; its weight-`m` graded piece expands, via `u = 20 G4`, `v = (7/3) G6`,
//! to exactly the weight-`m` weakly holomorphic forms.

mod membership;
mod zslice;

pub use membership::{from_series, from_series_with, weight_monomials};
pub use zslice::{lift_from_z, ZElement};

use crate::error::{Error, Result};
use crate::rat::{rat, rat_i, Rat};
use crate::series::{delta_series_product, eisenstein_g, QSeries};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_traits::{One, Zero};

/// Bivariate polynomial in `u`, `v` over the rationals, keyed by `(a, b)`
/// for the monomial `u^a v^b`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UvPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl UvPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: u32, b: u32, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        UvPoly { terms }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, Rat::one())
    }

    /// `u^3 - 27 v^2`.
    pub fn delta() -> Self {
        Self::monomial(3, 0, Rat::one()).add(&Self::monomial(0, 2, rat_i(-27)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rat {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(*k).or_insert_with(Rat::zero);
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        UvPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        UvPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UvPoly { terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                let e = terms.entry((a1 + a2, b1 + b2)).or_insert_with(Rat::zero);
                *e += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        UvPoly { terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn du(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            if a > 0 {
                terms.insert((a - 1, b), c * rat_i(a as i64));
            }
        }
        UvPoly { terms }
    }

    pub fn dv(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            if b > 0 {
                terms.insert((a, b - 1), c * rat_i(b as i64));
            }
        }
        UvPoly { terms }
    }

    /// Common weight `4a + 6b` of all monomials; `None` for the zero
    /// polynomial, an error if mixed.
    pub fn homogeneous_weight(&self) -> Result<Option<i64>> {
        let mut w: Option<i64> = None;
        for &(a, b) in self.terms.keys() {
            let m = 4 * a as i64 + 6 * b as i64;
            match w {
                None => w = Some(m),
                Some(prev) if prev != m => {
                    return Err(Error::Grading(format!(
                        "inhomogeneous polynomial: weights {prev} and {m}"
                    )))
                }
                _ => {}
            }
        }
        Ok(w)
    }

    /// Exact division by `Delta = u^3 - 27 v^2`, if possible.
    ///
    /// `Delta` is monic of degree 3 in `u`, so ordinary division in `u` with
    /// coefficients in `Q[v]` decides exactness.
    pub fn div_exact_delta(&self) -> Option<Self> {
        let mut rem = self.clone();
        let mut quot = UvPoly::zero();
        while let Some((&(a, b), c)) = rem.terms.iter().next_back() {
            if a < 3 {
                return None;
            }
            let c = c.clone();
            let t = UvPoly::monomial(a - 3, b, c);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(&UvPoly::delta()));
        }
        Some(quot)
    }

    /// Substitutes series for `u` and `v`.
    pub fn eval_series(&self, u_s: &QSeries, v_s: &QSeries) -> QSeries {
        let max_a = self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0);
        let mut u_pows: Vec<QSeries> = Vec::with_capacity(max_a as usize + 1);
        let mut v_pows: Vec<QSeries> = Vec::with_capacity(max_b as usize + 1);
        u_pows.push(QSeries::one());
        v_pows.push(QSeries::one());
        for i in 1..=max_a {
            let next = u_pows[(i - 1) as usize].mul(u_s);
            u_pows.push(next);
        }
        for i in 1..=max_b {
            let next = v_pows[(i - 1) as usize].mul(v_s);
            v_pows.push(next);
        }
        let mut acc: Option<QSeries> = None;
        for (&(a, b), c) in &self.terms {
            let t = u_pows[a as usize].mul(&v_pows[b as usize]).scalar_mul(c);
            acc = Some(match acc {
                None => t,
                Some(s) => s.add(&t),
            });
        }
        acc.unwrap_or_else(|| QSeries::zero(crate::series::EXACT))
    }
}

/// Normalised element `P(u, v) * Delta^(-c)` of weight `m`.
///
/// Invariants: every monomial of `P` has `4a + 6b = m + 12c`; `c = 0` or
/// `Delta` does not divide `P`; nonzero elements have even weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgForm {
    num: UvPoly,
    den_pow: u32,
    weight: i64,
}

impl AlgForm {
    /// Builds and normalises, checking weight homogeneity.
    pub fn new(num: UvPoly, den_pow: u32, weight: i64) -> Result<Self> {
        if num.is_zero() {
            return Ok(AlgForm { num, den_pow: 0, weight });
        }
        if weight % 2 != 0 {
            return Err(Error::Grading(format!("nonzero element of odd weight {weight}")));
        }
        match num.homogeneous_weight()? {
            Some(w) if w == weight + 12 * den_pow as i64 => {}
            Some(w) => {
                return Err(Error::Grading(format!(
                    "numerator weight {w} does not match weight {weight} + 12*{den_pow}"
                )))
            }
            None => unreachable!("nonzero polynomial"),
        }
        let mut num = num;
        let mut den_pow = den_pow;
        while den_pow > 0 {
            match num.div_exact_delta() {
                Some(q) => {
                    num = q;
                    den_pow -= 1;
                }
                None => break,
            }
        }
        Ok(AlgForm { num, den_pow, weight })
    }

    pub fn zero(weight: i64) -> Self {
        AlgForm { num: UvPoly::zero(), den_pow: 0, weight }
    }

    /// `u^a v^b Delta^(-c)`, weight `4a + 6b - 12c`.
    pub fn monomial(a: u32, b: u32, den_pow: u32) -> Self {
        let weight = 4 * a as i64 + 6 * b as i64 - 12 * den_pow as i64;
        AlgForm::new(UvPoly::monomial(a, b, Rat::one()), den_pow, weight).expect("monomial is homogeneous")
    }

    pub fn u() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn v() -> Self {
        Self::monomial(0, 1, 0)
    }

    pub fn delta() -> Self {
        AlgForm::new(UvPoly::delta(), 0, 12).expect("delta is homogeneous")
    }

    pub fn delta_inv() -> Self {
        Self::monomial(0, 0, 1)
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 0)
    }

    /// The j-function `1728 u^3 / Delta`.
    pub fn j_function() -> Self {
        AlgForm::new(UvPoly::monomial(3, 0, rat_i(1728)), 1, 0).expect("homogeneous")
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn den_pow(&self) -> u32 {
        self.den_pow
    }

    pub fn num(&self) -> &UvPoly {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> Self {
        AlgForm { num: self.num.neg(), den_pow: self.den_pow, weight: self.weight }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let num = self.num.scale(c);
        let den_pow = if num.is_zero() { 0 } else { self.den_pow };
        AlgForm { num, den_pow, weight: self.weight }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(AlgForm { weight: self.weight, ..other.clone() });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.weight != other.weight {
            return Err(Error::Grading(format!(
                "cannot add weights {} and {}",
                self.weight, other.weight
            )));
        }
        let c = self.den_pow.max(other.den_pow);
        let d = UvPoly::delta();
        let n1 = self.num.mul(&d.pow(c - self.den_pow));
        let n2 = other.num.mul(&d.pow(c - other.den_pow));
        AlgForm::new(n1.add(&n2), c, self.weight)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let weight = self.weight + other.weight;
        if self.is_zero() || other.is_zero() {
            return AlgForm::zero(weight);
        }
        AlgForm::new(self.num.mul(&other.num), self.den_pow + other.den_pow, weight)
            .expect("product of homogeneous elements is homogeneous")
    }

    /// The weight-two derivation `6 v d/du + (u^2 / 3) d/dv`; kills `Delta`,
    /// so it passes through negative powers of `Delta` unchanged.
    pub fn theta(&self) -> Self {
        let t = self
            .num
            .du()
            .mul(&UvPoly::monomial(0, 1, rat_i(6)))
            .add(&self.num.dv().mul(&UvPoly::monomial(2, 0, rat(1, 3))));
        AlgForm::new(t, self.den_pow, self.weight + 2).expect("theta preserves homogeneity")
    }

    /// The two components of the exterior derivative: `d f = theta(f) omega
    /// + m f psi` for `f` of weight `m`.
    pub fn differential_components(&self) -> (Self, Self) {
        (self.theta(), self.scale(&rat_i(self.weight)))
    }

    /// Fourier expansion modulo `q^n` via `u = 20 G4`, `v = (7/3) G6`.
    pub fn expand(&self, n: i64) -> Result<QSeries> {
        ExpandCtx::new(n + self.den_pow as i64 + 1)?.expand(self, n)
    }
}

/// Reusable expansion state: the generator series and their powers at a
/// working window, grown on demand. Batch jobs (membership systems, basis
/// construction) expand many monomials against one context instead of
/// rebuilding the Eisenstein and discriminant series per call.
pub struct ExpandCtx {
    work: i64,
    u_pows: Vec<QSeries>,
    v_pows: Vec<QSeries>,
    /// `dinv_pows[c]` is the series of `Delta^(-c)`.
    dinv_pows: Vec<QSeries>,
}

impl ExpandCtx {
    pub fn new(work: i64) -> Result<Self> {
        let work = work.max(3);
        let u_s = eisenstein_g(4, work)?.scalar_mul(&rat_i(20));
        let v_s = eisenstein_g(6, work)?.scalar_mul(&rat(7, 3));
        let dinv = delta_series_product(work)?.invert()?;
        Ok(ExpandCtx {
            work,
            u_pows: alloc::vec![QSeries::one(), u_s],
            v_pows: alloc::vec![QSeries::one(), v_s],
            dinv_pows: alloc::vec![QSeries::one(), dinv],
        })
    }

    pub fn work(&self) -> i64 {
        self.work
    }

    /// Regenerates the state at a larger window when needed.
    fn ensure(&mut self, work: i64) -> Result<()> {
        if work > self.work {
            *self = ExpandCtx::new(work + 8)?;
        }
        Ok(())
    }

    fn u_pow(&mut self, a: usize) -> &QSeries {
        while self.u_pows.len() <= a {
            let next = self.u_pows.last().unwrap().mul(&self.u_pows[1]);
            self.u_pows.push(next);
        }
        &self.u_pows[a]
    }

    fn v_pow(&mut self, b: usize) -> &QSeries {
        while self.v_pows.len() <= b {
            let next = self.v_pows.last().unwrap().mul(&self.v_pows[1]);
            self.v_pows.push(next);
        }
        &self.v_pows[b]
    }

    fn dinv_pow(&mut self, c: usize) -> &QSeries {
        while self.dinv_pows.len() <= c {
            let next = self.dinv_pows.last().unwrap().mul(&self.dinv_pows[1]);
            self.dinv_pows.push(next);
        }
        &self.dinv_pows[c]
    }

    /// Expansion modulo `q^n` against the cached state.
    pub fn expand(&mut self, f: &AlgForm, n: i64) -> Result<QSeries> {
        if f.is_zero() {
            return Ok(QSeries::zero(n));
        }
        let c = f.den_pow as i64;
        if n <= -c {
            return Err(Error::Window(format!(
                "expansion window {n} does not reach past the pole of depth {c}"
            )));
        }
        let target = n + c + 1;
        self.ensure(target)?;
        // multiply on windows no wider than the request: the cached powers
        // live at the full working window, which would make every product
        // cost the full window even for short expansions
        let mut acc: Option<QSeries> = None;
        for (&(a, b), coeff) in f.num.terms() {
            let ua = self.u_pow(a as usize).truncated(target);
            let vb = self.v_pow(b as usize).truncated(target);
            let t = ua.mul(&vb).scalar_mul(coeff);
            acc = Some(match acc {
                None => t,
                Some(s) => s.add(&t),
            });
        }
        let mut s = acc.expect("nonzero numerator");
        if f.den_pow > 0 {
            let d = self.dinv_pow(f.den_pow as usize).truncated(target);
            s = s.mul(&d);
        }
        Ok(s.truncated(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_division() {
        let d = UvPoly::delta();
        let p = d.mul(&UvPoly::monomial(1, 0, Rat::one()));
        assert_eq!(p.div_exact_delta().unwrap(), UvPoly::monomial(1, 0, Rat::one()));
        assert!(UvPoly::monomial(1, 0, Rat::one()).div_exact_delta().is_none());
        assert_eq!(d.div_exact_delta().unwrap(), UvPoly::one());
    }

    #[test]
    fn normalisation_cancels_delta() {
        // (Delta * u) * Delta^{-1} -> u
        let raw = UvPoly::delta().mul(&UvPoly::monomial(1, 0, Rat::one()));
        let e = AlgForm::new(raw, 1, 4).unwrap();
        assert_eq!(e, AlgForm::u());
        // Delta * Delta^{-1} -> 1
        let e = AlgForm::new(UvPoly::delta(), 1, 0).unwrap();
        assert_eq!(e, AlgForm::one());
        // normalisation is idempotent on the already-normal u
        let e = AlgForm::new(UvPoly::monomial(1, 0, Rat::one()), 0, 4).unwrap();
        assert_eq!(e, AlgForm::u());
    }

    #[test]
    fn grading_checks() {
        // u + v is not homogeneous
        let p = UvPoly::monomial(1, 0, Rat::one()).add(&UvPoly::monomial(0, 1, Rat::one()));
        assert!(AlgForm::new(p, 0, 4).is_err());
        // odd declared weight
        assert!(AlgForm::new(UvPoly::monomial(1, 0, Rat::one()), 0, 3).is_err());
        // weight mismatch
        assert!(AlgForm::new(UvPoly::monomial(1, 0, Rat::one()), 0, 6).is_err());
    }

    #[test]
    fn theta_values() {
        assert_eq!(AlgForm::u().theta(), AlgForm::v().scale(&rat_i(6)));
        assert_eq!(AlgForm::v().theta(), AlgForm::monomial(2, 0, 0).scale(&rat(1, 3)));
        assert!(AlgForm::delta().theta().is_zero());
        assert!(AlgForm::delta_inv().theta().is_zero());
    }

    #[test]
    fn theta_leibniz() {
        let a = AlgForm::u().mul(&AlgForm::v());
        let lhs = a.theta();
        let rhs = AlgForm::u().theta().mul(&AlgForm::v()).add(&AlgForm::u().mul(&AlgForm::v().theta())).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_components_examples() {
        // d Delta = 12 Delta psi, i.e. psi = (1/12) dDelta/Delta
        let (th, psi) = AlgForm::delta().differential_components();
        assert!(th.is_zero());
        assert_eq!(psi, AlgForm::delta().scale(&rat_i(12)));
        // d u = 6v omega + 4u psi
        let (th, psi) = AlgForm::u().differential_components();
        assert_eq!(th, AlgForm::v().scale(&rat_i(6)));
        assert_eq!(psi, AlgForm::u().scale(&rat_i(4)));
        // constants are flat
        let (th1, psi1) = AlgForm::one().differential_components();
        assert!(th1.is_zero());
        assert!(psi1.is_zero());
    }

    #[test]
    fn expansions_match_known_values() {
        let u = AlgForm::u().expand(5).unwrap();
        assert_eq!(u.coeff(0).unwrap(), rat(1, 12));
        assert_eq!(u.coeff(1).unwrap(), rat_i(20));
        assert_eq!(u.coeff(2).unwrap(), rat_i(180));
        assert_eq!(u.coeff(3).unwrap(), rat_i(560));
        assert_eq!(u.coeff(4).unwrap(), rat_i(1460));
        let v = AlgForm::v().expand(5).unwrap();
        assert_eq!(v.coeff(0).unwrap(), rat(-1, 216));
        assert_eq!(v.coeff(1).unwrap(), rat(7, 3));
        assert_eq!(v.coeff(2).unwrap(), rat_i(77));
        assert_eq!(v.coeff(3).unwrap(), rat(1708, 3));
        assert_eq!(v.coeff(4).unwrap(), rat(7399, 3));
    }

    #[test]
    fn expand_is_multiplicative() {
        let a = AlgForm::u().mul(&AlgForm::delta_inv());
        let b = AlgForm::v();
        let lhs = a.mul(&b).expand(10).unwrap();
        let rhs = a.expand(12).unwrap().mul(&b.expand(12).unwrap());
        assert!(lhs.agrees(&rhs));
    }

    #[test]
    fn delta_expansion_matches_product_route() {
        let d = AlgForm::delta().expand(20).unwrap();
        let p = delta_series_product(20).unwrap();
        assert!(d.agrees(&p));
    }

    #[test]
    fn j_function_expansion() {
        let j = AlgForm::j_function().expand(3).unwrap();
        assert_eq!(j.coeff(-1).unwrap(), rat_i(1));
        assert_eq!(j.coeff(0).unwrap(), rat_i(744));
        assert_eq!(j.coeff(1).unwrap(), rat_i(196884));
        assert_eq!(j.coeff(2).unwrap(), rat_i(21493760));
    }
}
