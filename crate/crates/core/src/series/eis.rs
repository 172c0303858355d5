//! Eisenstein series, the discriminant, and Bernoulli numbers.

use super::QSeries;
use crate::error::{Error, Result};
use crate::rat::{bernoulli_upto, rat_i, sigma, Rat};
use alloc::format;
use alloc::vec::Vec;
use num_traits::One;

/// `B_k` for even `k >= 2` (so `B_2 = 1/6`, `B_4 = -1/30`).
pub fn bernoulli(k: u32) -> Result<Rat> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Domain(format!("bernoulli: k must be even and >= 2, got {k}")));
    }
    Ok(bernoulli_upto(k).pop().expect("nonempty"))
}

/// Eisenstein series `G_k = -B_k/(2k) + sum sigma_{k-1}(m) q^m` modulo `q^n`.
pub fn eisenstein_g(k: u32, n: i64) -> Result<QSeries> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Domain(format!("eisenstein: weight must be even and >= 2, got {k}")));
    }
    if n < 1 {
        return Err(Error::Window(format!("eisenstein: trunc must be >= 1, got {n}")));
    }
    let bk = bernoulli(k)?;
    let mut terms: Vec<(i64, Rat)> = Vec::with_capacity(n as usize);
    terms.push((0, -bk / rat_i(2 * k as i64)));
    for m in 1..n {
        terms.push((m, Rat::from_integer(sigma(k - 1, m as u64))));
    }
    QSeries::from_terms(n, terms)
}

/// Normalised Eisenstein series `E_k = -(2k / B_k) G_k`, constant term 1.
pub fn eisenstein_e(k: u32, n: i64) -> Result<QSeries> {
    let g = eisenstein_g(k, n)?;
    let bk = bernoulli(k)?;
    Ok(g.scalar_mul(&(-rat_i(2 * k as i64) / bk)))
}

/// Which construction of the discriminant series to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRoute {
    /// `q * prod_{m>=1} (1 - q^m)^24`, via Euler's pentagonal number series.
    Product,
    /// `(E_4^3 - E_6^2) / 1728`.
    Eisenstein,
}

/// Discriminant series by the infinite-product route.
pub fn delta_series_product(n: i64) -> Result<QSeries> {
    if n < 2 {
        return Err(Error::Window(format!("delta: trunc must be >= 2, got {n}")));
    }
    // prod (1 - q^m) = sum_k (-1)^k q^{k(3k-1)/2}, both signs of k.
    let mut terms: Vec<(i64, Rat)> = Vec::new();
    let mut k: i64 = 0;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 >= n && e2 >= n {
            break;
        }
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        if e1 < n {
            terms.push((e1, sign.clone()));
        }
        if k > 0 && e2 < n {
            terms.push((e2, sign));
        }
        k += 1;
    }
    let euler = QSeries::from_terms(n, terms)?;
    Ok(euler.pow(24).shift(1).truncated(n))
}

/// Discriminant series by the Eisenstein route.
pub fn delta_series_eisenstein(n: i64) -> Result<QSeries> {
    if n < 2 {
        return Err(Error::Window(format!("delta: trunc must be >= 2, got {n}")));
    }
    let e4 = eisenstein_e(4, n)?;
    let e6 = eisenstein_e(6, n)?;
    let num = e4.pow(3).sub(&e6.pow(2));
    Ok(num.scalar_mul(&(Rat::one() / rat_i(1728))).truncated(n))
}

/// Discriminant series by the requested route.
pub fn delta_q(n: i64, route: DeltaRoute) -> Result<QSeries> {
    match route {
        DeltaRoute::Product => delta_series_product(n),
        DeltaRoute::Eisenstein => delta_series_eisenstein(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn bernoulli_domain() {
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(0).is_err());
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
    }

    #[test]
    fn g4_first_terms() {
        let g4 = eisenstein_g(4, 5).unwrap();
        assert_eq!(g4.coeff(0).unwrap(), rat(1, 240));
        assert_eq!(g4.coeff(1).unwrap(), rat_i(1));
        assert_eq!(g4.coeff(2).unwrap(), rat_i(9));
        assert_eq!(g4.coeff(3).unwrap(), rat_i(28));
        assert_eq!(g4.coeff(4).unwrap(), rat_i(73));
    }

    #[test]
    fn e2_first_terms() {
        let e2 = eisenstein_e(2, 4).unwrap();
        assert_eq!(e2.coeff(0).unwrap(), rat_i(1));
        assert_eq!(e2.coeff(1).unwrap(), rat_i(-24));
        assert_eq!(e2.coeff(2).unwrap(), rat_i(-72));
        assert_eq!(e2.coeff(3).unwrap(), rat_i(-96));
    }

    #[test]
    fn g12_first_terms() {
        let g12 = eisenstein_g(12, 4).unwrap();
        assert_eq!(g12.coeff(0).unwrap(), rat(691, 65520));
        assert_eq!(g12.coeff(1).unwrap(), rat_i(1));
        assert_eq!(g12.coeff(2).unwrap(), rat_i(2049));
        assert_eq!(g12.coeff(3).unwrap(), rat_i(177148));
    }

    #[test]
    fn delta_product_tau_values() {
        let d = delta_series_product(8).unwrap();
        assert_eq!(d.valuation(), 1);
        assert_eq!(d.coeff(1).unwrap(), rat_i(1));
        assert_eq!(d.coeff(2).unwrap(), rat_i(-24));
        assert_eq!(d.coeff(3).unwrap(), rat_i(252));
        assert_eq!(d.coeff(4).unwrap(), rat_i(-1472));
        assert_eq!(d.coeff(5).unwrap(), rat_i(4830));
        assert_eq!(d.coeff(6).unwrap(), rat_i(-6048));
    }

    #[test]
    fn delta_routes_agree() {
        let a = delta_series_product(40).unwrap();
        let b = delta_series_eisenstein(40).unwrap();
        assert!(a.agrees(&b));
        assert_eq!(a.trunc(), 40);
        assert_eq!(b.trunc(), 40);
    }

    #[test]
    fn delta_inverse_integer_coefficients() {
        let d = delta_series_product(7).unwrap();
        let inv = d.invert().unwrap();
        assert_eq!(inv.trunc(), 5);
        assert_eq!(inv.coeff(-1).unwrap(), rat_i(1));
        assert_eq!(inv.coeff(0).unwrap(), rat_i(24));
        assert_eq!(inv.coeff(1).unwrap(), rat_i(324));
        assert_eq!(inv.coeff(2).unwrap(), rat_i(3200));
        assert_eq!(inv.coeff(3).unwrap(), rat_i(25650));
        assert_eq!(inv.coeff(4).unwrap(), rat_i(176256));
    }

    #[test]
    fn ramanujan_derivatives() {
        let n = 50;
        let e2 = eisenstein_e(2, n).unwrap();
        let e4 = eisenstein_e(4, n).unwrap();
        let e6 = eisenstein_e(6, n).unwrap();
        let twelfth = rat(1, 12);
        let third = rat(1, 3);
        let half = rat(1, 2);
        assert!(e2.d().agrees(&e2.pow(2).sub(&e4).scalar_mul(&twelfth)));
        assert!(e4.d().agrees(&e2.mul(&e4).sub(&e6).scalar_mul(&third)));
        assert!(e6.d().agrees(&e2.mul(&e6).sub(&e4.pow(2)).scalar_mul(&half)));
        // 3 E6 DE4 - 2 E4 DE6 = 1728 Delta
        let lhs = e6.mul(&e4.d()).scalar_mul(&rat_i(3)).sub(&e4.mul(&e6.d()).scalar_mul(&rat_i(2)));
        let delta = delta_series_product(n).unwrap();
        assert!(lhs.agrees(&delta.scalar_mul(&rat_i(1728))));
    }

    #[test]
    fn bol_g4_matches_ramanujan_combination() {
        // D G4 = (E2 E4 - E6)/3 scaled into G-normalisation: G4 = E4/240.
        let n = 30;
        let g4 = eisenstein_g(4, n).unwrap();
        let e2 = eisenstein_e(2, n).unwrap();
        let e4 = eisenstein_e(4, n).unwrap();
        let e6 = eisenstein_e(6, n).unwrap();
        let rhs = e2.mul(&e4).sub(&e6).scalar_mul(&rat(1, 720));
        assert!(g4.bol(1).agrees(&rhs));
    }
}
