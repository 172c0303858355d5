//! The slice `Delta = 1` and its mod-12 grading.
//!
//! Setting `Delta = 1` identifies each weight-`m` graded piece of the ring
//! with the grade-`[m mod 12]` piece of `Q[ubar, vbar]/(ubar^3 - 27 vbar^2 - 1)`.
//! Canonical forms eliminate `vbar^2` via `vbar^2 = (ubar^3 - 1)/27`, so the
//! residue ring is free over `Q[ubar^3]` on `1, ubar, vbar, ubar^2, ubar vbar,
//! ubar^2 vbar`.

use super::{AlgForm, UvPoly};
use crate::error::{Error, Result};
use crate::rat::{rat_i, Rat};
use alloc::format;
use num_traits::One;

/// Residue of a ring element on the slice `Delta = 1`: a polynomial of
/// `v`-degree at most 1, graded by the weight mod 12.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZElement {
    poly: UvPoly,
    grade: i64,
}

/// Rewrites every `v^b` with `b >= 2` using `v^2 = (u^3 - 1)/27`.
fn reduce_v(p: &UvPoly) -> UvPoly {
    let third_relation = UvPoly::monomial(3, 0, rat_i(1))
        .add(&UvPoly::monomial(0, 0, rat_i(-1)))
        .scale(&(Rat::one() / rat_i(27))); // (u^3 - 1)/27
    let mut out = UvPoly::zero();
    for (&(a, b), c) in p.terms() {
        let t = b / 2;
        let r = b % 2;
        let base = UvPoly::monomial(a, r, c.clone());
        out = out.add(&base.mul(&third_relation.pow(t)));
    }
    out
}

impl ZElement {
    pub fn grade(&self) -> i64 {
        self.grade
    }

    pub fn poly(&self) -> &UvPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl AlgForm {
    /// Restriction to the slice `Delta = 1`: the denominator power drops and
    /// the numerator is reduced to canonical form.
    pub fn restrict_to_z(&self) -> ZElement {
        ZElement {
            poly: reduce_v(self.num()),
            grade: self.weight().rem_euclid(12),
        }
    }
}

/// The unique weight-`m` element restricting to `z`; requires `m` even and
/// congruent to the grade mod 12.
///
/// Each canonical monomial `ubar^a vbar^b` lifts to `u^a v^b Delta^k` with
/// `k = (m - 4a - 6b)/12`, an integer precisely because of the grade
/// congruence.
pub fn lift_from_z(z: &ZElement, m: i64) -> Result<AlgForm> {
    if m % 2 != 0 {
        if z.is_zero() {
            return Ok(AlgForm::zero(m));
        }
        return Err(Error::Grading(format!("cannot lift a nonzero element to odd weight {m}")));
    }
    if z.is_zero() {
        return Ok(AlgForm::zero(m));
    }
    if m.rem_euclid(12) != z.grade.rem_euclid(12) {
        return Err(Error::Grading(format!(
            "weight {m} is not congruent to grade {} mod 12",
            z.grade
        )));
    }
    let ks: alloc::vec::Vec<(u32, u32, Rat, i64)> = z
        .poly
        .terms()
        .map(|(&(a, b), c)| {
            debug_assert!(b <= 1, "canonical slice form has v-degree <= 1");
            let k = (m - 4 * a as i64 - 6 * b as i64) / 12;
            (a, b, c.clone(), k)
        })
        .collect();
    let k_min = ks.iter().map(|&(_, _, _, k)| k).min().expect("nonzero");
    let den = (-k_min).max(0) as u32;
    let delta = UvPoly::delta();
    let mut num = UvPoly::zero();
    for (a, b, c, k) in ks {
        let e = (k + den as i64) as u32;
        num = num.add(&UvPoly::monomial(a, b, c).mul(&delta.pow(e)));
    }
    AlgForm::new(num, den, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_restricts_to_one() {
        let z = AlgForm::delta().restrict_to_z();
        assert_eq!(z.poly(), &UvPoly::one());
        assert_eq!(z.grade(), 0);
    }

    #[test]
    fn u_restricts_to_ubar() {
        // u * Delta^{-1} * Delta normalises to u, restricting to ubar in grade 4
        let e = AlgForm::u().mul(&AlgForm::delta_inv()).mul(&AlgForm::delta());
        let z = e.restrict_to_z();
        assert_eq!(z.poly(), &UvPoly::monomial(1, 0, Rat::one()));
        assert_eq!(z.grade(), 4);
    }

    #[test]
    fn v_squared_reduces() {
        // v^2 -> (u^3 - 1)/27; u^3 is already canonical (v-degree 0)
        let z = AlgForm::new(UvPoly::monomial(0, 2, Rat::one()), 0, 12).unwrap().restrict_to_z();
        let expected = UvPoly::monomial(3, 0, Rat::new(1.into(), 27.into()))
            .add(&UvPoly::monomial(0, 0, Rat::new((-1).into(), 27.into())));
        assert_eq!(z.poly(), &expected);
        let z3 = AlgForm::new(UvPoly::monomial(3, 0, Rat::one()), 0, 12).unwrap().restrict_to_z();
        assert_eq!(z3.poly(), &UvPoly::monomial(3, 0, Rat::one()));
    }

    #[test]
    fn basis_lifts() {
        // ubar in grade 4 lifts to u at weight 4 and to u*Delta at weight 16
        let z = AlgForm::u().restrict_to_z();
        assert_eq!(lift_from_z(&z, 4).unwrap(), AlgForm::u());
        assert_eq!(lift_from_z(&z, 16).unwrap(), AlgForm::u().mul(&AlgForm::delta()));
        // 1 in grade 0 lifts to Delta at weight 12
        let one = AlgForm::one().restrict_to_z();
        assert_eq!(lift_from_z(&one, 12).unwrap(), AlgForm::delta());
        assert_eq!(lift_from_z(&one, -12).unwrap(), AlgForm::delta_inv());
    }

    #[test]
    fn grade_mismatch_rejected() {
        let z = AlgForm::u().restrict_to_z();
        assert!(lift_from_z(&z, 6).is_err());
        assert!(lift_from_z(&z, 5).is_err());
    }

    #[test]
    fn round_trips_on_graded_pieces() {
        // weight-by-weight round trip on representative monomials
        for (a, b, c) in [(0u32, 0u32, 0u32), (1, 0, 0), (0, 1, 0), (2, 0, 0), (1, 1, 0), (2, 1, 0), (3, 1, 1), (2, 3, 2)] {
            let e = AlgForm::monomial(a, b, c);
            let m = e.weight();
            let back = lift_from_z(&e.restrict_to_z(), m).unwrap();
            assert_eq!(back, e, "round trip failed for u^{a} v^{b} Delta^-{c}");
        }
    }
}
