//! Truncated Laurent series in `q` over exact rationals.
//!
//! A [`QSeries`] represents an element of `Q((q))` known modulo `q^trunc`:
//! every coefficient with exponent below `trunc` is known exactly (zero below
//! the valuation, stored otherwise). Arithmetic computes the tightest
//! truncation derivable from the operands, so precision loss is always
//! explicit and never silent.

mod eis;
pub mod formal;

pub use eis::{bernoulli, delta_q, delta_series_eisenstein, delta_series_product, eisenstein_e, eisenstein_g, DeltaRoute};

use crate::error::{Error, Result};
use crate::rat::{Int, Rat};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

/// Truncation bound for series that are known exactly (Laurent polynomials
/// produced by constructors, e.g. monomials). Large enough that saturating
/// window arithmetic never wraps.
pub const EXACT: i64 = i64::MAX / 4;

/// A Laurent series with rational coefficients, known modulo `q^trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    /// Lowest exponent with a nonzero coefficient; equals `trunc` when the
    /// series vanishes on its whole window.
    val: i64,
    /// Exclusive upper bound of knowledge: coefficients are known for all
    /// exponents `< trunc`.
    trunc: i64,
    /// Nonzero coefficients, keyed by exponent, all in `[val, trunc)`.
    coeffs: BTreeMap<i64, Rat>,
}

fn wmin(a: i64, b: i64) -> i64 {
    a.min(b)
}

fn wadd(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(EXACT)
}

impl QSeries {
    /// The zero series `O(q^trunc)`.
    pub fn zero(trunc: i64) -> Self {
        QSeries { val: trunc, trunc, coeffs: BTreeMap::new() }
    }

    /// Exactly-known constant.
    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    /// Exactly-known `1`.
    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// Exactly-known `c * q^m`.
    pub fn monomial(m: i64, c: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(m, c);
        }
        let val = if coeffs.is_empty() { EXACT } else { m };
        QSeries { val, trunc: EXACT, coeffs }
    }

    /// Builds a series from `(exponent, coefficient)` terms, known modulo
    /// `q^trunc`. Terms at exponents `>= trunc` are rejected.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rat)>>(trunc: i64, terms: I) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (m, c) in terms {
            if m >= trunc {
                return Err(Error::Window(format!("term q^{m} at or beyond trunc {trunc}")));
            }
            if !c.is_zero() {
                let prev = coeffs.insert(m, c);
                if prev.is_some() {
                    return Err(Error::Domain(format!("duplicate exponent {m}")));
                }
            }
        }
        let val = coeffs.keys().next().copied().unwrap_or(trunc);
        Ok(QSeries { val, trunc, coeffs })
    }

    fn from_map(trunc: i64, mut coeffs: BTreeMap<i64, Rat>) -> Self {
        coeffs.retain(|m, c| *m < trunc && !c.is_zero());
        let val = coeffs.keys().next().copied().unwrap_or(trunc);
        QSeries { val, trunc, coeffs }
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// True when the truncation is the exact sentinel (Laurent polynomial).
    pub fn is_exact(&self) -> bool {
        self.trunc == EXACT
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^m`; errors when `m` lies beyond the window.
    pub fn coeff(&self, m: i64) -> Result<Rat> {
        if m >= self.trunc {
            return Err(Error::Window(format!("coefficient q^{m} unknown: trunc is {}", self.trunc)));
        }
        Ok(self.coeffs.get(&m).cloned().unwrap_or_else(Rat::zero))
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(&m, c)| (m, c))
    }

    /// Restricts knowledge to `q^new_trunc` (never widens).
    pub fn truncated(&self, new_trunc: i64) -> Self {
        if new_trunc >= self.trunc {
            return self.clone();
        }
        Self::from_map(new_trunc, self.coeffs.clone())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&m, c)| (m, -c.clone())).collect();
        Self::from_map(self.trunc, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = wmin(self.trunc, other.trunc);
        let mut coeffs = BTreeMap::new();
        for (&m, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if m < trunc {
                let entry = coeffs.entry(m).or_insert_with(Rat::zero);
                *entry += c;
            }
        }
        Self::from_map(trunc, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        let coeffs = self.coeffs.iter().map(|(&m, a)| (m, a * c)).collect();
        Self::from_map(self.trunc, coeffs)
    }

    /// Multiplication by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&m, c)| (wadd(m, s), c.clone())).collect();
        QSeries::from_map(wadd(self.trunc, s), coeffs)
    }

    /// Product, known modulo `q^min(a.trunc + b.val, b.trunc + a.val)`:
    /// coefficients beyond that bound would require unknown terms of one
    /// factor against nonzero terms of the other.
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = wmin(wadd(self.trunc, other.val), wadd(other.trunc, self.val));
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        for (&m1, c1) in &self.coeffs {
            for (&m2, c2) in &other.coeffs {
                let m = m1 + m2;
                if m < trunc {
                    let entry = coeffs.entry(m).or_insert_with(Rat::zero);
                    *entry += c1 * c2;
                }
            }
        }
        Self::from_map(trunc, coeffs)
    }

    /// Reciprocal on the widest derivable window.
    ///
    /// For `f = q^v (c_0 + c_1 q + ...)` with `c_0 != 0` known modulo `q^N`,
    /// the unit part carries `N - v` coefficients, so the reciprocal is known
    /// modulo `q^(N - 2v)`.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero_window() {
            return Err(Error::Domain("cannot invert a series that vanishes on its window".into()));
        }
        let v = self.val;
        let rel = if self.is_exact() { None } else { Some((self.trunc - v) as usize) };
        // Relative length of the result; an exact input is a Laurent
        // polynomial whose inverse generally is not, so fall back to the
        // polynomial length (exact only for monomials).
        let total = match rel {
            Some(r) => r,
            None => (self.coeffs.keys().next_back().unwrap() - v + 1) as usize,
        };
        let lead = self.coeffs.get(&v).cloned().expect("leading coefficient");
        let lead_inv = Rat::one() / lead;
        let mut inv: Vec<Rat> = Vec::with_capacity(total);
        inv.push(lead_inv.clone());
        for i in 1..total {
            let mut acc = Rat::zero();
            for j in 1..=i {
                if let Some(c) = self.coeffs.get(&(v + j as i64)) {
                    acc += c * &inv[i - j];
                }
            }
            inv.push(-(&lead_inv * acc));
        }
        let out_trunc = if self.is_exact() {
            if self.coeffs.len() == 1 {
                EXACT
            } else {
                wadd(-v, total as i64)
            }
        } else {
            wadd(self.trunc, -2 * v)
        };
        let coeffs = inv
            .into_iter()
            .enumerate()
            .map(|(i, c)| (-v + i as i64, c))
            .collect();
        Ok(Self::from_map(out_trunc, coeffs))
    }

    /// `e`-th power by binary exponentiation; `e = 0` gives the exact `1`.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut base = self.clone();
        let mut acc: Option<QSeries> = None;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// `(q d/dq)^p`: the coefficient of `q^m` is scaled by `m^p`. Constant
    /// terms die; the window is unchanged.
    pub fn bol(&self, p: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&m, c)| (m, c * Rat::from_integer(Int::from(m).pow(p))))
            .collect();
        Self::from_map(self.trunc, coeffs)
    }

    /// `q d/dq`.
    pub fn d(&self) -> Self {
        self.bol(1)
    }

    /// True when both series agree at every exponent known to both.
    pub fn agrees(&self, other: &Self) -> bool {
        let trunc = wmin(self.trunc, other.trunc);
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .filter(|&&m| m < trunc)
            .all(|m| {
                let a = self.coeffs.get(m);
                let b = other.coeffs.get(m);
                match (a, b) {
                    (Some(x), Some(y)) => x == y,
                    (Some(x), None) | (None, Some(x)) => x.is_zero(),
                    (None, None) => true,
                }
            })
    }

    /// Largest pole depth visible in the window: `max(0, -valuation)`.
    pub fn pole_depth(&self) -> i64 {
        (-self.val).max(0)
    }

    /// All coefficient denominators are divisible only by 2 and 3.
    pub fn denominators_23_smooth(&self) -> bool {
        self.coeffs.values().all(|c| crate::rat::is_23_smooth(c.denom()))
    }

    /// Largest absolute numerator, as a crude size gauge for tail estimates.
    pub fn max_abs_coeff(&self) -> Rat {
        self.coeffs
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }
}
