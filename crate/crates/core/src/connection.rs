//! Invariant sections of `Sym^n` of the rank-two bundle and the flat
//! connection, in both frames.
//!
//! The algebraic frame is `(S, T)` with `S` of weight `+1` and `T` of weight
//! `-1`; invariance forces the coefficient of `S^j T^k` to have weight
//! `k - j + w`, where `w` is 0 for plain sections and 2 for one-form
//! coefficients (an extra `omega`). The `q`-adapted frame `(A, T)` is related
//! by the gauge `S = A - 2 G2(q) T` (at the cusp, `S = A + T/12`); see
//! `QSection::to_at` for why this sign is the consistent one.
//!
//! The connection sends `S -> psi S - (u/12) omega T` and
//! `T -> omega S - psi T`; on invariant sections the `psi` part cancels
//! identically, which [`AlgSection::nabla`] verifies on every call rather
//! than assuming.

use crate::error::{Error, Result};
use crate::rat::{factorial, rat, rat_i, Rat};
use crate::ring::AlgForm;
use crate::series::{eisenstein_g, QSeries};
use alloc::format;
use alloc::vec::Vec;

/// Which trivialisation the coefficients of a [`QSection`] refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Algebraic frame `S^j T^k`.
    St,
    /// `q`-adapted frame `A^j T^k`.
    At,
}

/// Invariant section with ring-element coefficients, always in the `(S, T)`
/// frame. `coeffs[j]` multiplies `S^j T^(n-j)`.
///
/// `base_weight` 0 means a section of `Sym^n`; 2 means the coefficient of an
/// `omega`-valued one-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgSection {
    degree: usize,
    base_weight: i64,
    coeffs: Vec<AlgForm>,
}

impl AlgSection {
    /// Expected coefficient weight at index `j`.
    fn slot_weight(degree: usize, base_weight: i64, j: usize) -> i64 {
        (degree - j) as i64 - j as i64 + base_weight
    }

    pub fn new(degree: usize, base_weight: i64, coeffs: Vec<AlgForm>) -> Result<Self> {
        if coeffs.len() != degree + 1 {
            return Err(Error::Domain(format!(
                "degree {degree} section needs {} coefficients, got {}",
                degree + 1,
                coeffs.len()
            )));
        }
        let coeffs = coeffs
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                let w = Self::slot_weight(degree, base_weight, j);
                if c.is_zero() {
                    Ok(AlgForm::zero(w))
                } else if c.weight() == w {
                    Ok(c)
                } else {
                    Err(Error::Grading(format!(
                        "coefficient of S^{j} T^{} has weight {}, expected {w}",
                        degree - j,
                        c.weight()
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgSection { degree, base_weight, coeffs })
    }

    pub fn zero(degree: usize, base_weight: i64) -> Self {
        let coeffs = (0..=degree)
            .map(|j| AlgForm::zero(Self::slot_weight(degree, base_weight, j)))
            .collect();
        AlgSection { degree, base_weight, coeffs }
    }

    /// `f omega T^n` for `f` of weight `n + 2`: the one-form attached to a
    /// weakly holomorphic form.
    pub fn omega_form(f: &AlgForm, degree: usize) -> Result<Self> {
        if !f.is_zero() && f.weight() != degree as i64 + 2 {
            return Err(Error::Grading(format!(
                "omega form of degree {degree} needs weight {}, got {}",
                degree as i64 + 2,
                f.weight()
            )));
        }
        let mut s = Self::zero(degree, 2);
        s.coeffs[0] = if f.is_zero() { AlgForm::zero(degree as i64 + 2) } else { f.clone() };
        Ok(s)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_weight(&self) -> i64 {
        self.base_weight
    }

    /// Coefficient of `S^j T^(n-j)`.
    pub fn coeff(&self, j: usize) -> &AlgForm {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[AlgForm] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(AlgForm::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.base_weight != other.base_weight {
            return Err(Error::Domain("section shape mismatch in add".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.degree, self.base_weight, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat_i(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        AlgSection {
            degree: self.degree,
            base_weight: self.base_weight,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Covariant derivative of an invariant section of `Sym^n`, returned as
    /// the `omega`-coefficient section (base weight 2).
    ///
    /// The coefficient of `S^j T^k` in the output is
    /// `theta(f^{j,k}) + (k+1) f^{j-1,k+1} - (j+1)(u/12) f^{j+1,k-1}`.
    /// The `psi` component is recomputed from the weights and must vanish;
    /// anything else is an invariance violation.
    pub fn nabla(&self) -> Result<AlgSection> {
        if self.base_weight != 0 {
            return Err(Error::Domain(
                "nabla is defined here on sections of base weight 0".into(),
            ));
        }
        let n = self.degree;
        for (j, f) in self.coeffs.iter().enumerate() {
            let k = n - j;
            let psi_factor = f.weight() + j as i64 - k as i64;
            if psi_factor != 0 && !f.is_zero() {
                return Err(Error::Internal(format!(
                    "psi component of nabla survives at S^{j} T^{k}: factor {psi_factor}"
                )));
            }
        }
        let u = AlgForm::u();
        let mut out = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let k = n - j;
            let mut g = self.coeffs[j].theta();
            if j >= 1 {
                g = g.add(&self.coeffs[j - 1].scale(&rat_i(k as i64 + 1)))?;
            }
            if j + 1 <= n {
                let t = u.mul(&self.coeffs[j + 1]).scale(&rat(-(j as i64 + 1), 12));
                g = g.add(&t)?;
            }
            out.push(g);
        }
        AlgSection::new(n, 2, out)
    }

    /// The named operator form of [`AlgSection::nabla`]: on invariant
    /// sections the full covariant derivative equals its `omega` part.
    pub fn nabla_omega(&self) -> Result<AlgSection> {
        self.nabla()
    }

    /// Expansion of every coefficient, staying in the `(S, T)` frame.
    pub fn expand(&self, n: i64) -> Result<QSection> {
        let coeffs = self.coeffs.iter().map(|c| c.expand(n)).collect::<Result<Vec<_>>>()?;
        Ok(QSection::new(self.degree, self.base_weight, Frame::St, coeffs))
    }

    /// `(-1)^n`-symmetric inner product extending `<T, S> = 1`:
    /// `<S^j T^k, S^k T^j> = (-1)^j j! k!` and all other slot pairs vanish.
    pub fn inner(&self, other: &Self) -> Result<AlgForm> {
        if self.degree != other.degree {
            return Err(Error::Domain(format!(
                "inner product needs equal degrees, got {} and {}",
                self.degree, other.degree
            )));
        }
        let n = self.degree;
        let out_weight = self.base_weight + other.base_weight;
        let mut acc = AlgForm::zero(out_weight);
        for j in 0..=n {
            let k = n - j;
            let term = self.coeffs[j].mul(&other.coeffs[k]);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let scale = Rat::from_integer(factorial(j as u32) * factorial(k as u32) * crate::rat::Int::from(sign));
            acc = acc.add(&term.scale(&scale))?;
        }
        Ok(acc)
    }
}

/// Section with series coefficients in either frame; all coefficients share
/// one truncation window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSection {
    degree: usize,
    base_weight: i64,
    frame: Frame,
    trunc: i64,
    coeffs: Vec<QSeries>,
    narrowed: bool,
}

impl QSection {
    /// Aligns all coefficients to the tightest common window; `narrowed`
    /// reports whether any input had to be truncated.
    pub fn new(degree: usize, base_weight: i64, frame: Frame, coeffs: Vec<QSeries>) -> Self {
        assert_eq!(coeffs.len(), degree + 1, "coefficient count");
        let trunc = coeffs.iter().map(QSeries::trunc).min().expect("nonempty");
        let narrowed = coeffs.iter().any(|c| c.trunc() != trunc);
        let coeffs = coeffs.iter().map(|c| c.truncated(trunc)).collect();
        QSection { degree, base_weight, frame, trunc, coeffs, narrowed }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_weight(&self) -> i64 {
        self.base_weight
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// True when construction had to narrow some coefficient's window.
    pub fn narrowed(&self) -> bool {
        self.narrowed
    }

    /// Coefficient of `S^j T^(n-j)` or `A^j T^(n-j)`.
    pub fn coeff(&self, j: usize) -> &QSeries {
        &self.coeffs[j]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.frame != other.frame || self.base_weight != other.base_weight {
            return Err(Error::Domain("section shape mismatch in add".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        Ok(Self::new(self.degree, self.base_weight, self.frame, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let neg = Self {
            coeffs: other.coeffs.iter().map(QSeries::neg).collect(),
            ..other.clone()
        };
        self.add(&neg)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.scalar_mul(c)).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero_window(&self) -> bool {
        self.coeffs.iter().all(QSeries::is_zero_window)
    }

    fn gauge(&self, from: Frame, to: Frame) -> Result<Self> {
        if self.frame != from {
            return Err(Error::Domain("section is not in the expected frame".into()));
        }
        let n = self.degree;
        // S = A - 2 G2 T and A = S + 2 G2 T: the same binomial substitution
        // with the sign flipped. The sign is forced: the covariant derivative
        // rules in the two frames commute with the gauge change only for a
        // multiplier g with D g = u/12 - g^2, and -2 G2 satisfies that
        // exactly while +2 G2 fails it by sign.
        let sign = match to {
            Frame::At => rat_i(-2),
            Frame::St => rat_i(2),
        };
        let g2 = eisenstein_g(2, self.trunc)?.scalar_mul(&sign);
        let mut g2_pows: Vec<QSeries> = Vec::with_capacity(n + 1);
        g2_pows.push(QSeries::one());
        for i in 1..=n {
            let next = g2_pows[i - 1].mul(&g2);
            g2_pows.push(next);
        }
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = QSeries::zero(self.trunc);
            for j in i..=n {
                let c = Rat::from_integer(crate::rat::binomial(j as u32, i as u32));
                acc = acc.add(&self.coeffs[j].mul(&g2_pows[j - i]).scalar_mul(&c));
            }
            out.push(acc);
        }
        Ok(Self::new(n, self.base_weight, to, out))
    }

    /// Gauge change into the `(A, T)` frame.
    pub fn to_at(&self) -> Result<Self> {
        self.gauge(Frame::St, Frame::At)
    }

    /// Gauge change back into the `(S, T)` frame.
    pub fn to_st(&self) -> Result<Self> {
        self.gauge(Frame::At, Frame::St)
    }

    /// Covariant derivative in the `(A, T)` frame, as the `dq/q`-coefficient
    /// section: slot `(j, k)` receives `D f^{j,k} + (k+1) f^{j-1,k+1}`.
    pub fn nabla_at(&self) -> Result<Self> {
        if self.frame != Frame::At {
            return Err(Error::Domain("nabla_at needs the (A, T) frame".into()));
        }
        if self.base_weight != 0 {
            return Err(Error::Domain("nabla_at acts on sections of base weight 0".into()));
        }
        let n = self.degree;
        let mut out = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let k = n - j;
            let mut g = self.coeffs[j].d();
            if j >= 1 {
                g = g.add(&self.coeffs[j - 1].scalar_mul(&rat_i(k as i64 + 1)));
            }
            out.push(g);
        }
        Ok(Self::new(n, 2, Frame::At, out))
    }

    /// Residue: the `q^0` coefficient of the `T^n` slot in the `(A, T)`
    /// frame. Sections still in the `(S, T)` frame are gauged first.
    pub fn residue(&self) -> Result<Rat> {
        if self.base_weight != 2 {
            return Err(Error::Domain("residue expects a one-form coefficient section".into()));
        }
        let at;
        let s = match self.frame {
            Frame::At => self,
            Frame::St => {
                at = self.to_at()?;
                &at
            }
        };
        if s.trunc <= 0 {
            return Err(Error::Window(format!(
                "residue needs the window to include q^0, trunc is {}",
                s.trunc
            )));
        }
        s.coeffs[0].coeff(0)
    }

    /// Inner product of series sections (same frame, same degree); the slot
    /// pairing has the same Gram matrix in both frames.
    pub fn inner(&self, other: &Self) -> Result<QSeries> {
        if self.degree != other.degree {
            return Err(Error::Domain(format!(
                "inner product needs equal degrees, got {} and {}",
                self.degree, other.degree
            )));
        }
        if self.frame != other.frame {
            return Err(Error::Domain("inner product needs matching frames".into()));
        }
        let n = self.degree;
        let mut acc = QSeries::zero(self.trunc.min(other.trunc));
        for j in 0..=n {
            let k = n - j;
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let scale = Rat::from_integer(factorial(j as u32) * factorial(k as u32) * crate::rat::Int::from(sign));
            acc = acc.add(&self.coeffs[j].mul(&other.coeffs[k]).scalar_mul(&scale));
        }
        Ok(acc)
    }
}

/// Residue of the one-form attached to an algebraic `omega`-section.
pub fn residue_alg(omega: &AlgSection, n: i64) -> Result<Rat> {
    if omega.base_weight() != 2 {
        return Err(Error::Domain("residue expects an omega-valued section".into()));
    }
    omega.expand(n)?.to_at()?.residue()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{section_coeffs, SplitMix64};
    use num_traits::Zero;

    fn st_slot_section() -> AlgSection {
        // s = S T (slot j = 1 carries the constant 1, which has the right
        // weight k - j = 0 there)
        AlgSection::new(
            2,
            0,
            alloc::vec![AlgForm::zero(2), AlgForm::one(), AlgForm::zero(-2)],
        )
        .unwrap()
    }

    #[test]
    fn slot_weights_enforced() {
        // coefficient of S^0 T^2 must have weight 2: the constant 1 (weight
        // 0) and u (weight 4) are both rejected
        let r = AlgSection::new(2, 0, alloc::vec![AlgForm::one(), AlgForm::zero(0), AlgForm::zero(-2)]);
        assert!(r.is_err());
        let r = AlgSection::new(2, 0, alloc::vec![AlgForm::u(), AlgForm::zero(0), AlgForm::zero(-2)]);
        assert!(r.is_err());
    }

    #[test]
    fn nabla_of_st_slot() {
        // nabla(S T) = omega (S^2 - (u/12) T^2): the three-term rule applied
        // to the single slot (1,1)
        let s = st_slot_section();
        let g = s.nabla().unwrap();
        assert_eq!(g.coeff(2), &AlgForm::one());
        assert!(g.coeff(1).is_zero());
        assert_eq!(g.coeff(0), &AlgForm::u().scale(&rat(-1, 12)));
    }

    #[test]
    fn nabla_of_zero() {
        let z = AlgSection::zero(4, 0);
        assert!(z.nabla().unwrap().is_zero());
    }

    #[test]
    fn gauge_round_trip() {
        let mut rng = SplitMix64::new(11);
        let coeffs = section_coeffs(&mut rng, 4, 0, 2);
        let s = AlgSection::new(4, 0, coeffs).unwrap().expand(18).unwrap();
        let rt = s.to_at().unwrap().to_st().unwrap();
        for j in 0..=4 {
            assert!(s.coeff(j).agrees(rt.coeff(j)), "slot {j}");
        }
        let at = s.to_at().unwrap();
        let rt2 = at.to_st().unwrap().to_at().unwrap();
        for j in 0..=4 {
            assert!(at.coeff(j).agrees(rt2.coeff(j)), "slot {j}");
        }
    }

    #[test]
    fn gauge_of_s_basis_vector() {
        // degree 1, s = S: in the (A, T) frame the A-coefficient is 1 and the
        // T-coefficient is -2 G2 = 1/12 - 2q - 6q^2 - ...; at the cusp
        // S = A + T/12.
        let s = QSection::new(
            1,
            0,
            Frame::St,
            alloc::vec![QSeries::zero(8), QSeries::one().truncated(8)],
        );
        let at = s.to_at().unwrap();
        assert!(at.coeff(1).agrees(&QSeries::one()));
        assert_eq!(at.coeff(0).coeff(0).unwrap(), rat(1, 12));
        assert_eq!(at.coeff(0).coeff(1).unwrap(), rat_i(-2));
        assert_eq!(at.coeff(0).coeff(2).unwrap(), rat_i(-6));
    }

    #[test]
    fn nabla_commutes_with_gauge() {
        let mut rng = SplitMix64::new(23);
        for n in [2usize, 6] {
            let coeffs = section_coeffs(&mut rng, n, 0, 2);
            let s = AlgSection::new(n, 0, coeffs).unwrap();
            let lhs = s.nabla().unwrap().expand(16).unwrap().to_at().unwrap();
            let rhs = s.expand(16).unwrap().to_at().unwrap().nabla_at().unwrap();
            for j in 0..=n {
                assert!(lhs.coeff(j).agrees(rhs.coeff(j)), "n={n} slot {j}");
            }
        }
    }

    #[test]
    fn residue_of_exact_forms_vanishes() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..5 {
            let coeffs = section_coeffs(&mut rng, 6, 0, 2);
            let s = AlgSection::new(6, 0, coeffs).unwrap();
            let r = s.expand(30).unwrap().to_at().unwrap().nabla_at().unwrap().residue().unwrap();
            assert!(r.is_zero());
        }
    }

    #[test]
    fn inner_product_normalisation() {
        // <A^n, T^n> = (-1)^n n!
        let n = 5usize;
        let mut a_coeffs = alloc::vec![QSeries::zero(6); n + 1];
        a_coeffs[n] = QSeries::one().truncated(6);
        let mut b_coeffs = alloc::vec![QSeries::zero(6); n + 1];
        b_coeffs[0] = QSeries::one().truncated(6);
        let a = QSection::new(n, 0, Frame::At, a_coeffs);
        let b = QSection::new(n, 0, Frame::At, b_coeffs);
        let ab = a.inner(&b).unwrap();
        assert_eq!(ab.coeff(0).unwrap(), rat_i(-120)); // (-1)^5 5!
        let ba = b.inner(&a).unwrap();
        assert_eq!(ba.coeff(0).unwrap(), rat_i(120));
        // <T^n, T^n> = 0
        assert!(b.inner(&b).unwrap().is_zero_window());
    }

    fn random_at_section(rng: &mut SplitMix64, n: usize, trunc: i64) -> QSection {
        // arbitrary Laurent coefficients: the flatness identity is formal and
        // holds without any invariance assumption
        let coeffs = (0..=n)
            .map(|_| {
                QSeries::from_terms(trunc, (-2..trunc).map(|m| (m, rng.small_rat()))).unwrap()
            })
            .collect();
        QSection::new(n, 0, Frame::At, coeffs)
    }

    #[test]
    fn inner_product_flatness() {
        // D<F,G> = <nabla F, G> + (-1)^n <nabla G, F> on random sections
        let mut rng = SplitMix64::new(77);
        for n in [2usize, 3, 4] {
            let f = random_at_section(&mut rng, n, 30);
            let g = random_at_section(&mut rng, n, 30);
            let lhs = f.inner(&g).unwrap().d();
            let sign = if n % 2 == 0 { rat_i(1) } else { rat_i(-1) };
            let rhs = f
                .nabla_at()
                .unwrap()
                .inner(&g)
                .unwrap()
                .add(&g.nabla_at().unwrap().inner(&f).unwrap().scalar_mul(&sign));
            assert!(lhs.agrees(&rhs), "flatness at n={n}");
        }
    }

    #[test]
    fn gauge_preserves_inner_product() {
        let mut rng = SplitMix64::new(13);
        let n = 4usize;
        let a = AlgSection::new(n, 0, section_coeffs(&mut rng, n, 0, 1)).unwrap();
        let b = AlgSection::new(n, 0, section_coeffs(&mut rng, n, 0, 1)).unwrap();
        let alg = a.inner(&b).unwrap().expand(14).unwrap();
        let st = a.expand(14).unwrap().inner(&b.expand(14).unwrap()).unwrap();
        let at = a
            .expand(14)
            .unwrap()
            .to_at()
            .unwrap()
            .inner(&b.expand(14).unwrap().to_at().unwrap())
            .unwrap();
        assert!(alg.agrees(&st));
        assert!(alg.agrees(&at));
    }

    #[test]
    fn narrowing_is_reported() {
        let s = QSection::new(
            1,
            0,
            Frame::At,
            alloc::vec![QSeries::zero(5), QSeries::zero(9)],
        );
        assert!(s.narrowed());
        assert_eq!(s.trunc(), 5);
    }
}
