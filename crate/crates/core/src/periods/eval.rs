//! Evaluation of `q`-expansions on the upper half plane with certified tail
//! bounds.

use super::{BigComplex, PrecCtx};
use crate::error::{Error, Result};
use crate::series::QSeries;
use alloc::format;
use alloc::vec::Vec;
use astro_float::BigFloat;

/// A series prepared for numeric evaluation: coefficients converted once at
/// working precision, plus the data the geometric tail estimate needs.
pub struct NumForm {
    exps: Vec<i64>,
    coeffs: Vec<BigFloat>,
    trunc: i64,
    /// Laurent polynomials known exactly need no tail certificate.
    exact: bool,
    /// Bound on the per-exponent growth ratio of the trailing coefficients,
    /// floored at 1; the tail estimate assumes `|a_m| <= A * ratio^(m - last)`.
    ratio: BigFloat,
    /// Largest trailing coefficient magnitude `A`.
    tail_scale: BigFloat,
}

impl NumForm {
    pub fn prepare(series: &QSeries, ctx: &mut PrecCtx) -> Result<NumForm> {
        if series.is_zero_window() {
            return Ok(NumForm {
                exps: Vec::new(),
                coeffs: Vec::new(),
                trunc: series.trunc(),
                exact: series.is_exact(),
                ratio: ctx.one(),
                tail_scale: ctx.zero(),
            });
        }
        let mut exps = Vec::new();
        let mut coeffs = Vec::new();
        for (m, c) in series.terms() {
            exps.push(m);
            coeffs.push(ctx.from_rat(c));
        }
        // Per-exponent growth ratio averaged over the trailing stretch of
        // the window. Individual adjacent ratios spike when a coefficient is
        // accidentally small (cusp-form coefficients oscillate), but the
        // L-step geometric mean tracks the cumulative growth, which is what
        // the tail bound compounds. The +2 exponent slack absorbs mantissa
        // rounding on both endpoints.
        let lookback = 10.min(coeffs.len().saturating_sub(1));
        let start = coeffs.len() - 1 - lookback;
        let ratio = if lookback == 0 {
            ctx.one()
        } else {
            let e_last = coeffs.last().unwrap().exponent().unwrap_or(0) as f64;
            let e_first = coeffs[start].exponent().unwrap_or(0) as f64;
            let steps = (exps[exps.len() - 1] - exps[start]).max(1) as f64;
            let log2_r = (e_last - e_first + 2.0) / steps;
            let r = ctx.from_f64(libm_exp2(log2_r));
            if r.cmp(&ctx.one()).unwrap_or(-1) > 0 {
                r
            } else {
                ctx.one()
            }
        };
        let mut tail_scale = ctx.zero();
        for c in &coeffs[start..] {
            let a = c.abs();
            if a.cmp(&tail_scale).unwrap_or(-1) > 0 {
                tail_scale = a;
            }
        }
        Ok(NumForm {
            exps,
            coeffs,
            trunc: series.trunc(),
            exact: series.is_exact(),
            ratio,
            tail_scale,
        })
    }

    pub fn valuation(&self) -> i64 {
        self.exps.first().copied().unwrap_or(self.trunc)
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Evaluates at `q = e^(2 pi i tau)`.
    ///
    /// Fails with a budget error when `im(tau)` is below `min_im` or when the
    /// geometric tail estimate (growth ratio inflated by `growth_margin`)
    /// cannot push the truncation error below the target precision.
    pub fn eval(
        &self,
        tau: &BigComplex,
        min_im: f64,
        growth_margin: f64,
        ctx: &mut PrecCtx,
    ) -> Result<BigComplex> {
        let min_im_f = ctx.from_f64(min_im);
        if tau.im.cmp(&min_im_f).unwrap_or(-1) < 0 {
            return Err(Error::Budget(format!(
                "evaluation point has im(tau) below the floor {min_im}"
            )));
        }
        if self.exps.is_empty() {
            return Ok(BigComplex::zero(ctx));
        }
        let pi = ctx.pi();
        let two_pi = ctx.mul(&pi, &ctx.from_i64(2));
        // q = exp(2 pi i tau): exponent has real part -2 pi im(tau) and
        // imaginary part 2 pi re(tau)
        let q = BigComplex::new(
            ctx.mul(&two_pi, &tau.im).neg(),
            ctx.mul(&two_pi, &tau.re),
        )
        .exp(ctx);
        let q_abs = q.abs(ctx);

        // tail certificate (skipped for exactly-known Laurent polynomials)
        let margin = ctx.from_f64(growth_margin);
        let rho = ctx.mul(&ctx.mul(&self.ratio, &margin), &q_abs);
        if !self.exact && rho.cmp(&ctx.one()).unwrap_or(1) >= 0 {
            return Err(Error::Budget(
                "series window cannot certify convergence: growth ratio times |q| is not below 1"
                    .into(),
            ));
        }
        if !self.exact && !self.tail_scale.is_zero() {
            let last = *self.exps.last().expect("nonempty");
            // tail <= A * ratio^(trunc - last) * |q|^trunc / (1 - rho)
            let steps = (self.trunc - last).max(0) as u32;
            let mut bound = self.tail_scale.clone();
            for _ in 0..steps {
                bound = ctx.mul(&bound, &ctx.mul(&self.ratio, &margin));
            }
            bound = ctx.mul(&bound, &pow_bigfloat(&q_abs, self.trunc, ctx));
            bound = ctx.div(&bound, &ctx.sub(&ctx.one(), &rho));
            let tol = ctx.pow10_neg(ctx.digits() as i64 + 5);
            if bound.cmp(&tol).unwrap_or(1) > 0 {
                return Err(Error::Budget(format!(
                    "series window trunc={} too short for {} digits at this height",
                    self.trunc,
                    ctx.digits()
                )));
            }
        }

        // sum from the highest exponent down (ascending magnitude)
        let mut acc = BigComplex::zero(ctx);
        let mut idx = self.exps.len();
        let mut cur_pow: Option<(i64, BigComplex)> = None;
        while idx > 0 {
            idx -= 1;
            let m = self.exps[idx];
            let qm = match cur_pow.take() {
                None => pow_q(&q, m, ctx),
                Some((prev_m, prev)) => {
                    // step down from prev_m to m
                    let mut p = prev;
                    for _ in 0..(prev_m - m) {
                        p = p.div(&q, ctx);
                    }
                    p
                }
            };
            acc = acc.add(&qm.scale(&self.coeffs[idx], ctx), ctx);
            cur_pow = Some((m, qm));
        }
        Ok(acc)
    }
}

/// `2^x` for small `|x|` without the std math library: split into integer
/// and fractional parts, Taylor series for the fractional factor.
fn libm_exp2(x: f64) -> f64 {
    let n = {
        let t = x as i64 as f64;
        if t > x {
            t - 1.0
        } else {
            t
        }
    };
    let f = x - n;
    let y = f * core::f64::consts::LN_2;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..24 {
        term *= y / i as f64;
        sum += term;
    }
    let mut scale = 1.0f64;
    let steps = n as i64;
    for _ in 0..steps.unsigned_abs().min(1024) {
        scale *= if steps >= 0 { 2.0 } else { 0.5 };
    }
    sum * scale
}

fn pow_q(q: &BigComplex, m: i64, ctx: &mut PrecCtx) -> BigComplex {
    let p = q.powi(m.unsigned_abs() as u32, ctx);
    if m >= 0 {
        p
    } else {
        BigComplex::from_real(ctx.one(), ctx).div(&p, ctx)
    }
}

fn pow_bigfloat(x: &BigFloat, e: i64, ctx: &PrecCtx) -> BigFloat {
    let mut acc = ctx.one();
    for _ in 0..e.unsigned_abs() {
        acc = ctx.mul(&acc, x);
    }
    if e >= 0 {
        acc
    } else {
        ctx.div(&ctx.one(), &acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;
    use crate::ring::AlgForm;
    use crate::series::delta_series_product;

    #[test]
    fn constant_series_evaluates_to_constant() {
        let ctx = &mut PrecCtx::new(30).unwrap();
        let s = QSeries::constant(rat_i(7));
        let f = NumForm::prepare(&s, ctx).unwrap();
        let tau = BigComplex::from_f64(ctx, 0.3, 1.2);
        let v = f.eval(&tau, 0.25, 1.5, ctx).unwrap();
        assert!((ctx.to_f64_approx(&v.re) - 7.0).abs() < 1e-20);
        assert!(ctx.to_f64_approx(&v.im).abs() < 1e-20);
    }

    #[test]
    fn delta_two_routes_agree_numerically() {
        let ctx = &mut PrecCtx::new(40).unwrap();
        let a = NumForm::prepare(&delta_series_product(60).unwrap(), ctx).unwrap();
        let b = NumForm::prepare(&AlgForm::delta().expand(60).unwrap(), ctx).unwrap();
        let tau = BigComplex::from_f64(ctx, 0.0, 2.0);
        let va = a.eval(&tau, 0.25, 1.5, ctx).unwrap();
        let vb = b.eval(&tau, 0.25, 1.5, ctx).unwrap();
        let diff = va.sub(&vb, ctx).max_norm();
        let tol = ctx.pow10_neg(ctx.digits() as i64 - 5);
        assert!(diff.cmp(&tol).unwrap_or(1) < 0);
    }

    #[test]
    fn modularity_of_u_under_inversion() {
        // u(-1/tau) = tau^4 u(tau) at tau = i: u(i) = i^4 u(i) trivially;
        // use tau = 2i instead: u(-1/(2i)) = u(i/2) = (2i)^4 u(2i) = 16 u(2i)
        let ctx = &mut PrecCtx::new(40).unwrap();
        let u = NumForm::prepare(&AlgForm::u().expand(80).unwrap(), ctx).unwrap();
        let tau = BigComplex::from_f64(ctx, 0.0, 2.0);
        let stau = BigComplex::from_f64(ctx, 0.0, 0.5);
        let lhs = u.eval(&stau, 0.25, 1.5, ctx).unwrap();
        let rhs = u.eval(&tau, 0.25, 1.5, ctx).unwrap().scale(&ctx.from_i64(16), ctx);
        let diff = lhs.sub(&rhs, ctx).max_norm();
        let tol = ctx.pow10_neg(ctx.digits() as i64 - 5);
        assert!(diff.cmp(&tol).unwrap_or(1) < 0);
    }

    #[test]
    fn budget_error_below_floor() {
        let ctx = &mut PrecCtx::new(30).unwrap();
        let s = delta_series_product(30).unwrap();
        let f = NumForm::prepare(&s, ctx).unwrap();
        let tau = BigComplex::from_f64(ctx, 0.0, 0.05);
        assert!(matches!(f.eval(&tau, 0.25, 1.5, ctx), Err(Error::Budget(_))));
    }

    #[test]
    fn budget_error_window_too_short() {
        let ctx = &mut PrecCtx::new(60).unwrap();
        let s = delta_series_product(8).unwrap();
        let f = NumForm::prepare(&s, ctx).unwrap();
        // at height 0.3 eight coefficients cannot deliver 60 digits
        let tau = BigComplex::from_f64(ctx, 0.1, 0.3);
        assert!(matches!(f.eval(&tau, 0.25, 1.5, ctx), Err(Error::Budget(_))));
    }
}
