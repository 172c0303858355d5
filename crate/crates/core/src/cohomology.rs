//! First de Rham cohomology with `Sym^n` coefficients, presented through
//! weakly holomorphic modular forms.
//!
//! Weight `k = n + 2` classes are weight-`k` forms modulo `D^(k-1)`-images of
//! weight-`(2-k)` forms. The quotient has dimension `2 ell + 1` with
//! `ell = dim S_k`, and every class has a unique representative of cusp order
//! at least `-ell`; the normalised representatives `f_m = q^m + O(q^(ell+1))`,
//! `-ell <= m <= ell`, form the canonical basis.
//!
//! The bridge to sections: `phi` completes a weight-`(-n)` form to the unique
//! invariant section whose derivative is concentrated in the `T^n` slot, and
//! `reduce_to_tail` plays the inverse role, rewriting any invariant one-form
//! as `f omega T^n` modulo exact sections.

use crate::connection::AlgSection;
use crate::error::{Error, Result};
use crate::linalg::{solve, Solve};
use crate::rat::{rat, Int, Rat};
use crate::ring::{from_series, from_series_with, weight_monomials, AlgForm, ExpandCtx};
use crate::series::{eisenstein_g, QSeries};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_traits::{One, Zero};

/// Window margin used internally beyond what the statement strictly needs.
const GUARD: i64 = 5;

/// `(dim M_k, ell, 2 ell + 1)` for even `k >= 2`.
///
/// `dim M_k` counts monomials `u^a v^b` of weight `k`; `ell = dim S_k`.
/// `k = 2` is the degenerate case: `M_2 = 0` yet the quotient space is still
/// one-dimensional, so the triple is `(0, 0, 1)`.
pub fn dims(k: i64) -> Result<(usize, usize, usize)> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Domain(format!("dims: weight must be even and >= 2, got {k}")));
    }
    if k == 2 {
        return Ok((0, 0, 1));
    }
    let dim_mk = weight_monomials(k).len();
    let ell = dim_mk - 1;
    Ok((dim_mk, ell, 2 * ell + 1))
}

/// The unique invariant section of `Sym^n` with head `f` (its `S^n`
/// coefficient) whose covariant derivative is supported on `omega T^n`.
///
/// Built from the head downwards: with `j = n - k`, the vanishing of the
/// derivative at slot `(j, k)` forces
/// `f^{j-1,k+1} = ((j+1)/12 u f^{j+1,k-1} - theta(f^{j,k})) / (k+1)`.
pub fn phi(f: &AlgForm) -> Result<AlgSection> {
    if f.is_zero() {
        let n = (-f.weight()).max(0) as usize;
        return Ok(AlgSection::zero(n, 0));
    }
    let w = f.weight();
    if w > 0 || w % 2 != 0 {
        return Err(Error::Domain(format!(
            "phi needs a form of weight -n with n >= 0 even, got weight {w}"
        )));
    }
    let n = (-w) as usize;
    let u = AlgForm::u();
    let mut coeffs: Vec<AlgForm> = (0..=n)
        .map(|j| AlgForm::zero((n - j) as i64 - j as i64))
        .collect();
    coeffs[n] = f.clone();
    for k in 0..n {
        let j = n - k;
        let mut next = coeffs[j].theta().neg();
        if j + 1 <= n {
            let t = u.mul(&coeffs[j + 1]).scale(&rat(j as i64 + 1, 12));
            next = next.add(&t)?;
        }
        coeffs[j - 1] = next.scale(&rat(1, k as i64 + 1));
    }
    AlgSection::new(n, 0, coeffs)
}

/// The tail of `nabla phi(f)`: the unique `r` with
/// `nabla phi(f) = r omega T^n`, a form of weight `n + 2`. Any surviving
/// coefficient in another slot is a bug.
pub fn phi_tail(f: &AlgForm) -> Result<AlgForm> {
    let section = phi(f)?;
    let g = section.nabla()?;
    for j in 1..=section.degree() {
        if !g.coeff(j).is_zero() {
            return Err(Error::Internal(format!(
                "nabla phi(f) has support at S^{j}, tail extraction impossible"
            )));
        }
    }
    Ok(g.coeff(0).clone())
}

/// Rewrites an invariant `omega`-valued one-form as `f omega T^n` modulo
/// exact forms.
///
/// Returns `f` together with the audit trail: the sections `g S^(j-1) T^(k+1)`
/// whose derivatives were subtracted, so that
/// `input - sum nabla(audit_i) = f omega T^n` can be re-checked exactly.
pub fn reduce_to_tail(e: &AlgSection) -> Result<(AlgForm, Vec<AlgSection>)> {
    if e.base_weight() != 2 {
        return Err(Error::Domain("reduce_to_tail expects an omega-valued section".into()));
    }
    let n = e.degree();
    let mut current = e.clone();
    let mut audit: Vec<AlgSection> = Vec::new();
    for j in (1..=n).rev() {
        let k = n - j;
        let c = current.coeff(j);
        if c.is_zero() {
            continue;
        }
        // nabla(g S^{j-1} T^{k+1}) has coefficient (k+1) g at S^j T^k and
        // touches only smaller S-powers otherwise.
        let g = c.scale(&rat(1, k as i64 + 1));
        let mut section_coeffs: Vec<AlgForm> = (0..=n)
            .map(|i| AlgForm::zero((n - i) as i64 - i as i64))
            .collect();
        section_coeffs[j - 1] = g;
        let section = AlgSection::new(n, 0, section_coeffs)?;
        current = current.sub(&section.nabla()?)?;
        audit.push(section);
    }
    for j in 1..=n {
        if !current.coeff(j).is_zero() {
            return Err(Error::Internal(format!("reduction left support at S^{j}")));
        }
    }
    Ok((current.coeff(0).clone(), audit))
}

/// A cohomology class of weight `k`, stored by its canonical representative.
#[derive(Debug, Clone)]
pub struct CohClass {
    weight: i64,
    ell: usize,
    /// The unique representative with cusp order `>= -ell`, as a series.
    rep: QSeries,
    /// Ring element expanding to `rep`, when the window certifies one.
    alg_rep: Option<AlgForm>,
    /// `g` of weight `2 - k` with `input - D^(k-1) g = rep`; identity classes
    /// built directly from the basis carry the certificate of their parts.
    certificate: Option<AlgForm>,
}

impl CohClass {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn rep(&self) -> &QSeries {
        &self.rep
    }

    pub fn alg_rep(&self) -> Option<&AlgForm> {
        self.alg_rep.as_ref()
    }

    pub fn certificate(&self) -> Option<&AlgForm> {
        self.certificate.as_ref()
    }

    /// The `2 ell + 1` determining coefficients `a_(-ell) .. a_ell`.
    pub fn key_coeffs(&self) -> Result<Vec<Rat>> {
        let ell = self.ell as i64;
        (-ell..=ell).map(|m| self.rep.coeff(m)).collect()
    }

    /// Classes agree iff their determining coefficients agree.
    pub fn same_class(&self, other: &CohClass) -> Result<bool> {
        if self.weight != other.weight {
            return Ok(false);
        }
        Ok(self.key_coeffs()? == other.key_coeffs()?)
    }

    /// Cuspidal means the representative has no constant term.
    pub fn is_cuspidal(&self) -> Result<bool> {
        Ok(self.rep.coeff(0)?.is_zero())
    }

    pub fn scale(&self, c: &Rat) -> CohClass {
        CohClass {
            weight: self.weight,
            ell: self.ell,
            rep: self.rep.scalar_mul(c),
            alg_rep: self.alg_rep.as_ref().map(|a| a.scale(c)),
            certificate: self.certificate.as_ref().map(|g| g.scale(c)),
        }
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass> {
        if self.weight != other.weight {
            return Err(Error::Domain("cannot add classes of different weights".into()));
        }
        let alg_rep = match (&self.alg_rep, &other.alg_rep) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            _ => None,
        };
        let certificate = match (&self.certificate, &other.certificate) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            _ => None,
        };
        Ok(CohClass {
            weight: self.weight,
            ell: self.ell,
            rep: self.rep.add(&other.rep),
            alg_rep,
            certificate,
        })
    }
}

/// Echelonised exact forms `D^(k-1) g`, keyed by leading exponent, each with
/// its witness `g`.
struct ExactEchelon {
    entries: BTreeMap<i64, (QSeries, AlgForm)>,
    weight: i64,
    work: i64,
    max_pole_built: u32,
}

impl ExactEchelon {
    fn new(k: i64, work: i64) -> Self {
        ExactEchelon { entries: BTreeMap::new(), weight: k, work, max_pole_built: 0 }
    }

    fn default_pole_cap(k: i64, pole_needed: u32) -> u32 {
        // Deep enough that eliminators exist at every exponent down to the
        // input's pole depth.
        let base = ((k - 2) + 11).div_euclid(12).max(0) as u32;
        base + pole_needed
    }

    fn extend_to(&mut self, pole_cap: u32, ctx: &mut ExpandCtx) -> Result<()> {
        let k = self.weight;
        for c in (self.max_pole_built + 1)..=pole_cap {
            let num_weight = (2 - k) + 12 * c as i64;
            for (a, b) in weight_monomials(num_weight) {
                let g = AlgForm::monomial(a, b, c);
                debug_assert_eq!(g.weight(), 2 - k);
                let series = ctx.expand(&g, self.work)?.bol((k - 1) as u32);
                self.insert(series, g)?;
            }
        }
        self.max_pole_built = self.max_pole_built.max(pole_cap);
        Ok(())
    }

    fn insert(&mut self, mut series: QSeries, mut g: AlgForm) -> Result<()> {
        loop {
            if series.is_zero_window() {
                return Ok(());
            }
            let m = series.valuation();
            match self.entries.get(&m) {
                Some((pe, pg)) => {
                    let c = series.coeff(m)?;
                    series = series.sub(&pe.scalar_mul(&c));
                    g = g.sub(&pg.scale(&c))?;
                }
                None => {
                    let c = series.coeff(m)?;
                    let inv = Rat::one() / c;
                    self.entries.insert(m, (series.scalar_mul(&inv), g.scale(&inv)));
                    return Ok(());
                }
            }
        }
    }

    /// Subtracts exact forms to clear every coefficient of `rep` at exponents
    /// `<= max_exp`; accumulates the witnesses into `cert`.
    fn eliminate_below(
        &mut self,
        rep: &mut QSeries,
        cert: &mut AlgForm,
        max_exp: i64,
        ctx: &mut ExpandCtx,
    ) -> Result<()> {
        loop {
            let v = rep.valuation();
            if rep.is_zero_window() || v > max_exp {
                return Ok(());
            }
            if self.entries.get(&v).is_none() {
                // One deepening attempt before declaring a theory violation.
                let deeper = self.max_pole_built + 2;
                self.extend_to(deeper, ctx)?;
            }
            let Some((pe, pg)) = self.entries.get(&v) else {
                return Err(Error::Internal(format!(
                    "no exact form with leading exponent {v} at weight {}",
                    self.weight
                )));
            };
            let c = rep.coeff(v)?;
            *rep = rep.sub(&pe.scalar_mul(&c));
            *cert = cert.add(&pg.scale(&c))?;
        }
    }
}

/// Shared reduction state for a fixed weight and window: one expansion
/// context and one exact-form echelon serve any number of inputs.
pub struct Reducer {
    weight: i64,
    ell: usize,
    work: i64,
    ctx: ExpandCtx,
    echelon: ExactEchelon,
}

impl Reducer {
    pub fn new(k: i64, trunc: i64) -> Result<Self> {
        let (_, ell, _) = dims(k)?;
        let work = trunc.max(ell as i64 + 1 + GUARD);
        // the context grows to the working window on first use; zero inputs
        // never touch it, so a degenerate trunc stays cheap
        let ctx = ExpandCtx::new(16)?;
        Ok(Reducer { weight: k, ell, work, ctx, echelon: ExactEchelon::new(k, work) })
    }

    /// Canonical representative of the class of `f`: subtracts an explicit
    /// `D^(k-1)`-image so the result has cusp order `>= -ell`, and keeps the
    /// witness of what was subtracted.
    pub fn reduce(&mut self, f: &AlgForm) -> Result<CohClass> {
        let k = self.weight;
        if !f.is_zero() && f.weight() != k {
            return Err(Error::Domain(format!(
                "reducer built for weight {k} got weight {}",
                f.weight()
            )));
        }
        let ell = self.ell;
        let mut rep = self.ctx.expand(f, self.work)?;
        let mut cert = AlgForm::zero(2 - k);
        if !f.is_zero() {
            let cap = ExactEchelon::default_pole_cap(k, f.den_pow());
            if cap > self.echelon.max_pole_built {
                self.echelon.extend_to(cap, &mut self.ctx)?;
            }
            self.echelon
                .eliminate_below(&mut rep, &mut cert, -(ell as i64) - 1, &mut self.ctx)?;
        }
        if rep.valuation() < -(ell as i64) {
            return Err(Error::Internal("canonical representative still has a deep pole".into()));
        }
        // The representative is exact by construction, so the algebraic
        // witness only needs a window wide enough to pin it down; membership
        // on the full window is the caller-facing contract of from_series,
        // not needed here.
        let cert_window = {
            let pole = rep.pole_depth();
            let dim = weight_monomials(k + 12 * pole).len() as i64;
            (dim + pole + 25).min(rep.trunc())
        };
        let alg_rep = match from_series_with(&rep.truncated(cert_window), k, &mut self.ctx) {
            Ok(a) => Some(a),
            Err(Error::Underdetermined(_)) => None,
            Err(e) => {
                return Err(Error::Internal(format!(
                    "canonical rep failed re-certification: {e}"
                )))
            }
        };
        Ok(CohClass { weight: k, ell, rep, alg_rep, certificate: Some(cert) })
    }
}

/// One-shot canonical representative; batch callers should hold a
/// [`Reducer`] instead.
pub fn canonical_rep(f: &AlgForm, trunc: i64) -> Result<CohClass> {
    Reducer::new(f.weight(), trunc)?.reduce(f)
}

/// Canonical representative from a series, certifying first that the series
/// is weakly modular of the stated weight.
pub fn canonical_rep_series(s: &QSeries, weight: i64) -> Result<CohClass> {
    let f = from_series(s, weight)?;
    // exactly-known inputs (Laurent polynomials) carry a sentinel trunc;
    // the reducer picks its own minimal window for those
    let trunc = if s.is_exact() { 0 } else { s.trunc() };
    canonical_rep(&f, trunc)
}

/// The canonical basis `f_m = q^m + O(q^(ell+1))`, `-ell <= m <= ell`, each
/// with coefficient 1 at `q^m` and 0 at the other determining exponents.
pub fn dr_basis(k: i64, trunc: i64) -> Result<Vec<CohClass>> {
    let (_, ell, dim_q) = dims(k)?;
    let work = trunc.max(ell as i64 + 1 + GUARD);
    let ell_i = ell as i64;

    let mut reducer = Reducer::new(k, work)?;
    let mut reps: Vec<CohClass> = Vec::new();
    let mut pole_cap = ell as u32 + 1;
    loop {
        reps.clear();
        for c in 0..=pole_cap {
            for (a, b) in weight_monomials(k + 12 * c as i64) {
                let mono = AlgForm::monomial(a, b, c);
                debug_assert_eq!(mono.weight(), k);
                reps.push(reducer.reduce(&mono)?);
            }
        }
        // Rows indexed by exponent in [-ell, ell], columns by candidate.
        let rows: Vec<Vec<Rat>> = (-ell_i..=ell_i)
            .map(|e| reps.iter().map(|r| r.rep.coeff(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let mut basis: Vec<CohClass> = Vec::with_capacity(dim_q);
        let mut ok = true;
        for m in -ell_i..=ell_i {
            let rhs: Vec<Rat> = (-ell_i..=ell_i)
                .map(|e| if e == m { Rat::one() } else { Rat::zero() })
                .collect();
            match solve(&rows, &rhs) {
                Solve::Unique(x) | Solve::Many(x) => {
                    let mut acc: Option<CohClass> = None;
                    for (r, coeff) in reps.iter().zip(&x) {
                        if coeff.is_zero() {
                            continue;
                        }
                        let t = r.scale(coeff);
                        acc = Some(match acc {
                            None => t,
                            Some(s) => s.add(&t)?,
                        });
                    }
                    let f_m = acc.ok_or_else(|| Error::Internal("empty basis combination".into()))?;
                    basis.push(f_m);
                }
                Solve::None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            // Certify the interlocking pattern before returning.
            for (i, f_m) in basis.iter().enumerate() {
                let m = i as i64 - ell_i;
                for e in -ell_i..=ell_i {
                    let expect = if e == m { Rat::one() } else { Rat::zero() };
                    if f_m.rep.coeff(e)? != expect {
                        return Err(Error::Internal(format!(
                            "basis element f_{m} has coefficient {} at q^{e}",
                            f_m.rep.coeff(e)?
                        )));
                    }
                }
            }
            return Ok(basis);
        }
        pole_cap += 1;
        if pole_cap > ell as u32 + 4 {
            return Err(Error::Internal(format!(
                "could not span the weight-{k} quotient with poles up to {pole_cap}"
            )));
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Hecke operator `T_p` on a class: `(T_p f)_m = a_(pm) + p^(k-1) a_(m/p)`
/// on representatives, then reduction to the canonical representative.
pub fn hecke(p: u64, c: &CohClass) -> Result<CohClass> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("hecke: {p} is not prime")));
    }
    let k = c.weight;
    let s = &c.rep;
    let p_i = p as i64;
    if s.trunc() <= p_i * c.ell as i64 {
        return Err(Error::Window(format!(
            "hecke T_{p} needs the representative window to exceed p*ell = {}",
            p_i * c.ell as i64
        )));
    }
    // (T_p f)_m needs a_(pm), so knowledge stops at ceil(trunc / p)
    let out_trunc = (s.trunc() + p_i - 1).div_euclid(p_i);
    let lo = s.valuation().min(-1) * p_i; // deep enough for the p^(k-1) a_(m/p) part
    let pk = Rat::from_integer(Int::from(p).pow((k - 1) as u32));
    let mut terms: Vec<(i64, Rat)> = Vec::new();
    for m in lo..out_trunc {
        let mut a = Rat::zero();
        if p_i * m < s.trunc() {
            a += s.coeff(p_i * m)?;
        }
        if m.rem_euclid(p_i) == 0 {
            a += &pk * s.coeff(m.div_euclid(p_i))?;
        }
        if !a.is_zero() {
            terms.push((m, a));
        }
    }
    let t = QSeries::from_terms(out_trunc, terms)?;
    canonical_rep_series(&t, k)
}

/// Splits a class into its Eisenstein, holomorphic-cuspidal, and negative
/// parts in the canonical basis: `c = eis [G_k] + sum hol_i [f_i] + sum
/// anti_i [f_(-i)]`.
pub fn decompose(c: &CohClass) -> Result<(Rat, Vec<Rat>, Vec<Rat>)> {
    let k = c.weight;
    let (_, ell, _) = dims(k)?;
    let ell_i = ell as i64;
    let key = c.key_coeffs()?;
    let g = eisenstein_g(k as u32, ell_i + 1)?;
    let g0 = g.coeff(0)?;
    if g0.is_zero() {
        return Err(Error::Internal("Eisenstein constant term vanished".into()));
    }
    let at = |m: i64| -> Rat { key[(m + ell_i) as usize].clone() };
    let eis = at(0) / &g0;
    let mut hol = Vec::with_capacity(ell);
    for i in 1..=ell_i {
        hol.push(at(i) - &eis * g.coeff(i)?);
    }
    let mut anti = Vec::with_capacity(ell);
    for i in 1..=ell_i {
        anti.push(at(-i));
    }
    Ok((eis, hol, anti))
}
