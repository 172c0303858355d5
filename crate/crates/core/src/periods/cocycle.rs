//! Eichler cocycles, their consistency defects, period polynomials, and
//! rational reconstruction.

use super::eval::NumForm;
use super::quad::GaussLegendre;
use super::{bigfloat_to_rat, BigComplex, ComplexPoly, PrecCtx, SL2Mat};
use crate::error::{Error, Result};
use crate::rat::{Int, Rat};
use alloc::format;
use alloc::vec::Vec;
use astro_float::BigFloat;
use num_traits::{One, Signed, Zero};

/// Quadrature and path policy.
#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    /// Gauss-Legendre nodes per segment.
    pub gl_nodes: usize,
    /// Segment length cap, as a fraction of the lowest height on the path.
    pub seg_rel_len: f64,
    /// Paths whose endpoints dip below this height are rejected.
    pub path_min_im: f64,
    /// Height floor passed to series evaluation.
    pub eval_min_im: f64,
    /// Inflation factor on the empirical growth ratio in tail bounds.
    pub growth_margin: f64,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            gl_nodes: 64,
            seg_rel_len: 0.5,
            path_min_im: 0.3,
            eval_min_im: 0.25,
            growth_margin: 1.5,
        }
    }
}

/// `(2 pi i)^(n+1)`.
fn two_pi_i_pow(n: u32, ctx: &mut PrecCtx) -> BigComplex {
    let pi = ctx.pi();
    let two_pi_i = BigComplex::new(ctx.zero(), ctx.mul(&pi, &ctx.from_i64(2)));
    two_pi_i.powi(n + 1, ctx)
}

/// Integrates `f(z) z^j dz` for `j = 0..n` along the straight segment chain
/// from `z0` to `z1`, subdividing so each piece is short relative to the
/// lowest height reached (the height along a straight segment is between the
/// endpoint heights, so the check is on endpoints).
fn integrate_powers(
    form: &NumForm,
    n: u32,
    z0: &BigComplex,
    z1: &BigComplex,
    opts: &QuadOpts,
    ctx: &mut PrecCtx,
) -> Result<Vec<BigComplex>> {
    let im0 = ctx.to_f64_approx(&z0.im);
    let im1 = ctx.to_f64_approx(&z1.im);
    let min_im = im0.min(im1);
    if min_im < opts.path_min_im {
        return Err(Error::Budget(format!(
            "path endpoint at height {min_im:.4} is below the floor {}",
            opts.path_min_im
        )));
    }
    let dz = z1.sub(z0, ctx);
    let len = ctx.to_f64_approx(&dz.abs(ctx));
    let mut segments = 1usize;
    if len > 0.0 {
        segments = (len / (opts.seg_rel_len * min_im)).ceil() as usize;
        segments = segments.clamp(1, 4096);
    }
    let gl = GaussLegendre::new(opts.gl_nodes, ctx)?;
    let mut acc = alloc::vec![BigComplex::zero(ctx); n as usize + 1];
    let seg_inv = ctx.div(&ctx.one(), &ctx.from_i64(segments as i64));
    for s in 0..segments {
        let a = z0.add(&dz.scale(&ctx.mul(&ctx.from_i64(s as i64), &seg_inv), ctx), ctx);
        let b = z0.add(&dz.scale(&ctx.mul(&ctx.from_i64(s as i64 + 1), &seg_inv), ctx), ctx);
        // all powers share one form evaluation per node
        let mut partial = alloc::vec![BigComplex::zero(ctx); n as usize + 1];
        {
            let half = ctx.from_f64(0.5);
            let mid = a.add(&b, ctx).scale(&half, ctx);
            let rad = b.sub(&a, ctx).scale(&half, ctx);
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                let z = mid.add(&rad.scale(x, ctx), ctx);
                let fval = form.eval(&z, opts.eval_min_im, opts.growth_margin, ctx)?;
                let mut zp = BigComplex::from_real(ctx.one(), ctx);
                for item in partial.iter_mut() {
                    let t = fval.mul(&zp, ctx).scale(w, ctx);
                    *item = item.add(&t, ctx);
                    zp = zp.mul(&z, ctx);
                }
            }
            for item in partial.iter_mut() {
                *item = item.mul(&rad, ctx);
            }
        }
        for (a_j, p_j) in acc.iter_mut().zip(&partial) {
            *a_j = a_j.add(p_j, ctx);
        }
    }
    Ok(acc)
}

/// Assembles integrals of `f(z) z^j` into the coefficients of
/// `(2 pi i)^(n+1) integral f(z) (z a - b)^n dz` in the `a^j b^(n-j)` basis.
fn assemble_polynomial(ints: &[BigComplex], n: u32, ctx: &mut PrecCtx) -> ComplexPoly {
    let scale = two_pi_i_pow(n, ctx);
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    for (j, int_j) in ints.iter().enumerate() {
        let binom = crate::rat::binomial(n, j as u32);
        let sign = if (n as usize - j) % 2 == 0 { Int::one() } else { -Int::one() };
        let factor = ctx.from_rat(&Rat::from_integer(binom * sign));
        coeffs.push(int_j.mul(&scale, ctx).scale(&factor, ctx));
    }
    ComplexPoly::new(coeffs)
}

/// The cocycle value
/// `c(gamma) = (2 pi i)^(n+1) integral from gamma^(-1) z0 to z0 of
/// f(z) (z a - b)^n dz` for a weight-`(n+2)` form.
///
/// The integrand is holomorphic on the whole upper half plane, so the path
/// is a straight segment chain and the value is path-independent.
pub fn eichler_cocycle(
    form: &NumForm,
    n: u32,
    gamma: &SL2Mat,
    z0: &BigComplex,
    opts: &QuadOpts,
    ctx: &mut PrecCtx,
) -> Result<ComplexPoly> {
    let start = gamma.inverse().apply(z0, ctx);
    let close = start.sub(z0, ctx).max_norm();
    let tiny = ctx.pow10_neg(ctx.digits() as i64 + 10);
    if close.cmp(&tiny).unwrap_or(1) < 0 {
        return Ok(ComplexPoly::zero(n, ctx));
    }
    let ints = integrate_powers(form, n, &start, z0, opts, ctx)?;
    Ok(assemble_polynomial(&ints, n, ctx))
}

/// Max-norm of `c(gamma delta) - c(gamma)|delta - c(delta)`; the right
/// action `|delta` is [`ComplexPoly::slash`].
pub fn cocycle_defect(
    form: &NumForm,
    n: u32,
    gamma: &SL2Mat,
    delta: &SL2Mat,
    z0: &BigComplex,
    opts: &QuadOpts,
    ctx: &mut PrecCtx,
) -> Result<BigFloat> {
    let c_gd = eichler_cocycle(form, n, &gamma.mul(delta), z0, opts, ctx)?;
    let c_g = eichler_cocycle(form, n, gamma, z0, opts, ctx)?;
    let c_d = eichler_cocycle(form, n, delta, z0, opts, ctx)?;
    let defect = c_gd.sub(&c_g.slash(delta, ctx), ctx).sub(&c_d, ctx);
    Ok(defect.max_norm())
}

/// Max-norm of `(c_(z0)(gamma) - c_(z1)(gamma)) - (v - v|gamma)` where
/// `v = (2 pi i)^(n+1) integral from z1 to z0 of f(z)(z a - b)^n dz`: the
/// basepoint change is exactly the coboundary of `v`.
pub fn basepoint_coboundary_defect(
    form: &NumForm,
    n: u32,
    gamma: &SL2Mat,
    z0: &BigComplex,
    z1: &BigComplex,
    opts: &QuadOpts,
    ctx: &mut PrecCtx,
) -> Result<BigFloat> {
    let c0 = eichler_cocycle(form, n, gamma, z0, opts, ctx)?;
    let c1 = eichler_cocycle(form, n, gamma, z1, opts, ctx)?;
    let close = z0.sub(z1, ctx).max_norm();
    let tiny = ctx.pow10_neg(ctx.digits() as i64 + 10);
    let v = if close.cmp(&tiny).unwrap_or(1) < 0 {
        ComplexPoly::zero(n, ctx)
    } else {
        let ints = integrate_powers(form, n, z1, z0, opts, ctx)?;
        assemble_polynomial(&ints, n, ctx)
    };
    let lhs = c0.sub(&c1, ctx);
    let rhs = v.sub(&v.slash(gamma, ctx), ctx);
    Ok(lhs.sub(&rhs, ctx).max_norm())
}

/// Period polynomial of a holomorphic cusp form of weight `n + 2`:
/// `(2 pi i)^(n+1) integral from 0 to i infinity of f(z)(z a - b)^n dz`,
/// computed as `(1 - A(S)) integral from i to i infinity` using the
/// inversion `z -> -1/z` on the lower half of the path.
///
/// Returns `(full, even, odd)` where the parity parts are taken under the
/// coefficient involution induced by `b -> -b` and each is normalised by its
/// first nonzero coefficient.
pub fn period_polynomial(
    form: &NumForm,
    n: u32,
    opts: &QuadOpts,
    ctx: &mut PrecCtx,
) -> Result<(ComplexPoly, ComplexPoly, ComplexPoly)> {
    if form.valuation() < 1 {
        return Err(Error::NonCuspidal(
            "period polynomials need a holomorphic cusp form".into(),
        ));
    }
    // Height beyond which the integrand is below the target precision:
    // |q| = e^(-2 pi y), so y ~ digits * ln 10 / (2 pi) plus a guard.
    let y_top = (ctx.digits() as f64) * core::f64::consts::LN_10 / (2.0 * core::f64::consts::PI) + 3.0;
    let z_low = BigComplex::from_f64(ctx, 0.0, 1.0);
    let z_high = BigComplex::from_f64(ctx, 0.0, y_top);
    let ints = integrate_powers(form, n, &z_low, &z_high, opts, ctx)?;
    let w = assemble_polynomial(&ints, n, ctx);
    // full = w - A(S) w; for even n the substitution a -> -b, b -> a agrees
    // with the slash action by S.
    let full = w.sub(&w.slash(&SL2Mat::s(), ctx), ctx);
    // parity involution: coefficient of a^j b^(n-j) picks up (-1)^(n-j)
    let iota = ComplexPoly::new(
        full.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if (n as usize - j) % 2 == 0 {
                    c.clone()
                } else {
                    c.neg()
                }
            })
            .collect(),
    );
    let half = ctx.from_f64(0.5);
    let even = full.add(&iota, ctx).scale(&BigComplex::from_real(half.clone(), ctx), ctx);
    let odd = full.sub(&iota, ctx).scale(&BigComplex::from_real(half, ctx), ctx);
    Ok((full, normalise(&even, ctx)?, normalise(&odd, ctx)?))
}

/// Divides by the first coefficient that is distinguishable from roundoff.
fn normalise(p: &ComplexPoly, ctx: &mut PrecCtx) -> Result<ComplexPoly> {
    let norm = p.max_norm();
    if norm.is_zero() {
        return Ok(p.clone());
    }
    let eps = ctx.pow10_neg(ctx.digits() as i64 / 2);
    let threshold = ctx.mul(&norm, &eps);
    let lead = p
        .coeffs()
        .iter()
        .find(|c| c.max_norm().cmp(&threshold).unwrap_or(-1) > 0)
        .ok_or_else(|| Error::Budget("polynomial is pure roundoff".into()))?
        .clone();
    Ok(ComplexPoly::new(
        p.coeffs().iter().map(|c| c.div(&lead, ctx)).collect(),
    ))
}

/// Continued-fraction reconstruction of a real value: the best rational with
/// denominator at most `max_den`, accepted only within `10^(-digits/2)`.
pub fn rational_reconstruct(x: &BigFloat, max_den: &Int, ctx: &mut PrecCtx) -> Option<Rat> {
    let exact = bigfloat_to_rat(x).ok()?;
    let mut p_prev = Int::one();
    let mut q_prev = Int::zero();
    let mut p = exact.trunc().numer().clone();
    let mut q = Int::one();
    let mut frac = exact.clone() - exact.trunc();
    if frac.is_negative() {
        frac += Rat::one();
        p -= Int::one();
    }
    // convergents of the continued fraction until the denominator cap
    while !frac.is_zero() {
        let inv = frac.recip();
        let a = inv.trunc().numer().clone();
        frac = inv.clone() - inv.trunc();
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        if q_next > *max_den {
            break;
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    let cand = Rat::new(p, q);
    let err = (exact - &cand).abs();
    let tol = bigfloat_to_rat(&ctx.pow10_neg(ctx.digits() as i64 / 2)).ok()?;
    if err <= tol {
        Some(cand)
    } else {
        None
    }
}

/// Reconstruction for a complex value whose imaginary part must be roundoff.
pub fn rational_reconstruct_complex(
    z: &BigComplex,
    max_den: &Int,
    ctx: &mut PrecCtx,
) -> Option<Rat> {
    let tol = ctx.pow10_neg(ctx.digits() as i64 / 2);
    if z.im.abs().cmp(&tol).unwrap_or(1) > 0 {
        return None;
    }
    rational_reconstruct(&z.re, max_den, ctx)
}
