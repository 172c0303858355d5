//! Gauss-Legendre quadrature at working precision.

use super::{BigComplex, PrecCtx};
use crate::error::{Error, Result};
use alloc::vec::Vec;
use astro_float::BigFloat;

/// Nodes and weights on `[-1, 1]`.
pub struct GaussLegendre {
    pub nodes: Vec<BigFloat>,
    pub weights: Vec<BigFloat>,
}

/// Legendre `P_n(x)` and `P_(n-1)(x)` by the three-term recurrence.
fn legendre_pair(n: usize, x: &BigFloat, ctx: &PrecCtx) -> (BigFloat, BigFloat) {
    let mut p_prev = ctx.one(); // P_0
    let mut p = x.clone(); // P_1
    if n == 0 {
        return (p_prev.clone(), p_prev);
    }
    for k in 1..n {
        // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        let a = ctx.mul(&ctx.from_i64(2 * k as i64 + 1), &ctx.mul(x, &p));
        let b = ctx.mul(&ctx.from_i64(k as i64), &p_prev);
        let next = ctx.div(&ctx.sub(&a, &b), &ctx.from_i64(k as i64 + 1));
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration from the Chebyshev-like
    /// initial guesses `cos(pi (i - 1/4) / (n + 1/2))`.
    pub fn new(n: usize, ctx: &mut PrecCtx) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("need at least two quadrature nodes".into()));
        }
        let pi = ctx.pi();
        let tol_exp = -(ctx.bits() as i64) + 2;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let one = ctx.one();
        for i in 1..=n {
            let arg = ctx.div(
                &ctx.mul(&pi, &ctx.from_f64(i as f64 - 0.25)),
                &ctx.from_f64(n as f64 + 0.5),
            );
            let (_, mut x) = {
                let (s, c) = ctx.sin_cos(&arg);
                (s, c)
            };
            let mut converged = false;
            for _ in 0..64 {
                let (p, p_prev) = legendre_pair(n, &x, ctx);
                // P'_n = n (x P_n - P_{n-1}) / (x^2 - 1)
                let x2m1 = ctx.sub(&ctx.mul(&x, &x), &one);
                let dp = ctx.div(
                    &ctx.mul(&ctx.from_i64(n as i64), &ctx.sub(&ctx.mul(&x, &p), &p_prev)),
                    &x2m1,
                );
                let dx = ctx.div(&p, &dp);
                x = ctx.sub(&x, &dx);
                if dx.is_zero() || dx.exponent().unwrap_or(0) as i64 <= tol_exp {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Budget("quadrature node iteration did not converge".into()));
            }
            let (p, p_prev) = legendre_pair(n, &x, ctx);
            let x2m1 = ctx.sub(&ctx.mul(&x, &x), &one);
            let dp = ctx.div(
                &ctx.mul(&ctx.from_i64(n as i64), &ctx.sub(&ctx.mul(&x, &p), &p_prev)),
                &x2m1,
            );
            // w = 2 / ((1 - x^2) P'_n(x)^2)
            let w = ctx.div(
                &ctx.from_i64(2),
                &ctx.mul(&ctx.sub(&one, &ctx.mul(&x, &x)), &ctx.mul(&dp, &dp)),
            );
            nodes.push(x);
            weights.push(w);
        }
        Ok(GaussLegendre { nodes, weights })
    }

    /// Integrates a complex function along the straight segment from `z0` to
    /// `z1`.
    pub fn integrate_segment<F>(
        &self,
        z0: &BigComplex,
        z1: &BigComplex,
        ctx: &mut PrecCtx,
        mut f: F,
    ) -> Result<BigComplex>
    where
        F: FnMut(&BigComplex, &mut PrecCtx) -> Result<BigComplex>,
    {
        let half = ctx.from_f64(0.5);
        let mid = z0.add(z1, ctx).scale(&half, ctx);
        let rad = z1.sub(z0, ctx).scale(&half, ctx);
        let mut acc = BigComplex::zero(ctx);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let z = mid.add(&rad.scale(x, ctx), ctx);
            let v = f(&z, ctx)?;
            acc = acc.add(&v.scale(w, ctx), ctx);
        }
        Ok(acc.mul(&rad, ctx))
    }
}
