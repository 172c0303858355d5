//! Formal model of real-analytic forms spanned by
//! `f_{a,b} = (2 pi i (z - zbar))^a (-2 pi i zbar)^b`.
//!
//! On this family the weight-raising operators act by
//! `d_m f_{a,b} = (a + m) f_{a-1,b}` while `D = q d/dq` acts by
//! `D f_{a,b} = a f_{a-1,b}`, which makes the factorisation of `D^(n+1)`
//! through the ladder `d_n d_{n-2} ... d_{-n}` checkable term by term.

use crate::rat::Rat;
use alloc::collections::BTreeMap;
use num_traits::Zero;

/// Finite rational combination of the basis elements `f_{a,b}`, keyed by
/// `(a, b)` with `b >= 0` (`a` may go negative under repeated lowering).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSum {
    terms: BTreeMap<(i64, u32), Rat>,
}

impl FormalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single basis element `f_{a,b}`.
    pub fn basis(a: i64, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((a, b), Rat::from_integer(1.into()));
        FormalSum { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(Rat::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        FormalSum { terms }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FormalSum { terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect() }
    }

    fn map_lower<F: Fn(i64) -> Rat>(&self, factor: F) -> Self {
        let mut terms: BTreeMap<(i64, u32), Rat> = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            let f = factor(a);
            if f.is_zero() {
                continue;
            }
            let entry = terms.entry((a - 1, b)).or_insert_with(Rat::zero);
            *entry += c * f;
        }
        terms.retain(|_, c| !c.is_zero());
        FormalSum { terms }
    }

    /// One Maass step `d_m`: `f_{a,b} -> (a + m) f_{a-1,b}`.
    pub fn maass_step(&self, m: i64) -> Self {
        self.map_lower(|a| Rat::from_integer((a + m).into()))
    }

    /// `D = q d/dq`: `f_{a,b} -> a f_{a-1,b}`.
    pub fn d_step(&self) -> Self {
        self.map_lower(|a| Rat::from_integer(a.into()))
    }
}

/// The composite ladder `d_n d_{n-2} ... d_{2-n} d_{-n}` (lowest index first).
pub fn maass_ladder(x: &FormalSum, n: u32) -> FormalSum {
    let n = n as i64;
    let mut acc = x.clone();
    let mut m = -n;
    while m <= n {
        acc = acc.maass_step(m);
        m += 2;
    }
    acc
}

/// `D^(n+1)` on the formal model, the independent route the ladder must match.
pub fn iterated_d(x: &FormalSum, n: u32) -> FormalSum {
    let mut acc = x.clone();
    for _ in 0..=n {
        acc = acc.d_step();
    }
    acc
}
