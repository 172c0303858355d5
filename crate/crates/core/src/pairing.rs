//! The residue pairing on cuspidal times full cohomology.
//!
//! On representatives the pairing is the finite sum
//! `{f, g} = sum_(m != 0) a_m(f) b_(-m)(g) / m^(k-1)` in weight `k`; only
//! exponents up to the pole depths contribute, so the value is an exact
//! rational. The sign convention (which argument carries the positive
//! exponent) is fixed once, recorded in [`CONVENTION_TAG`], and chosen so
//! that `{Delta, f_(-1)} = +1` in weight 12.

use crate::cohomology::CohClass;
use crate::error::{Error, Result};
use crate::rat::{Int, Rat};
use crate::series::QSeries;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

/// Identifier of the sign convention: the first argument contributes the
/// positive exponent in `sum a_m b_(-m) / m^(k-1)`.
pub const CONVENTION_TAG: &str = "first-arg-positive-exponent/m^(k-1)";

/// An exact pairing value together with the convention it was computed under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingValue {
    pub value: Rat,
    pub convention_tag: &'static str,
}

/// `{f, g} = sum_(m != 0) a_m(f) b_(-m)(g) / m^(k-1)` for weight-`k` series.
///
/// In strict mode the first argument must be cuspidal (`a_0 = 0`), which is
/// what makes the value well-defined on classes; non-strict mode applies the
/// formula as written to arbitrary representatives.
///
/// Both windows must cover every exponent that could pair against the other
/// argument's pole; otherwise the sum would silently drop terms.
pub fn bracket(f: &QSeries, g: &QSeries, weight: i64, strict: bool) -> Result<PairingValue> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::Domain(format!("bracket: weight must be even and >= 4, got {weight}")));
    }
    if strict {
        let a0 = f.coeff(0)?;
        if !a0.is_zero() {
            return Err(Error::NonCuspidal(format!(
                "strict bracket needs a cuspidal first argument, a_0 = {a0}"
            )));
        }
    }
    let pf = f.pole_depth();
    let pg = g.pole_depth();
    if f.trunc() <= pg {
        return Err(Error::Window(format!(
            "first argument known to q^{} but needs exponents through {pg}",
            f.trunc()
        )));
    }
    if g.trunc() <= pf {
        return Err(Error::Window(format!(
            "second argument known to q^{} but needs exponents through {pf}",
            g.trunc()
        )));
    }
    let mut acc = Rat::zero();
    for (m, a) in f.terms() {
        if m == 0 || m > pg {
            continue;
        }
        let b = g.coeff(-m)?;
        if b.is_zero() {
            continue;
        }
        let denom = Int::from(m).pow((weight - 1) as u32);
        acc += a * b / Rat::from_integer(denom);
    }
    Ok(PairingValue { value: acc, convention_tag: CONVENTION_TAG })
}

/// The pairing on classes, via canonical representatives; the first class
/// must be cuspidal.
pub fn pair_classes(c1: &CohClass, c2: &CohClass) -> Result<PairingValue> {
    if c1.weight() != c2.weight() {
        return Err(Error::Domain(format!(
            "cannot pair weights {} and {}",
            c1.weight(),
            c2.weight()
        )));
    }
    if !c1.is_cuspidal()? {
        return Err(Error::NonCuspidal(
            "first argument of the class pairing must be cuspidal".into(),
        ));
    }
    bracket(c1.rep(), c2.rep(), c1.weight(), true)
}

/// Gram matrix of the pairing in the canonical basis: rows are the cuspidal
/// basis classes `f_m, m != 0` (most negative first), columns the full basis
/// `f_(-ell) .. f_ell`.
pub fn gram_matrix(basis: &[CohClass]) -> Result<Vec<Vec<Rat>>> {
    let ell = (basis.len() - 1) / 2;
    let mut rows = Vec::new();
    for (i, c) in basis.iter().enumerate() {
        if i == ell {
            continue; // f_0 carries the residue; not cuspidal
        }
        let mut row = Vec::with_capacity(basis.len());
        for d in basis {
            row.push(pair_classes(c, d)?.value);
        }
        rows.push(row);
    }
    Ok(rows)
}
