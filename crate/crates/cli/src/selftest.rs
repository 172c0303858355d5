//! The acceptance battery: one function per criterion, shared between the
//! `selftest` subcommand and the `acceptance` integration test target.
//!
//! Every tolerance is pinned here, in code. The exact criteria admit no
//! tolerance at all; the numeric ones are relative to the stated digit
//! counts (1e-30 at 40 digits for defects, 1e-32 for quadrature
//! refinement).

use mfdr_core::cohomology::{canonical_rep, dims, dr_basis, hecke, phi_tail, reduce_to_tail};
use mfdr_core::connection::{residue_alg, AlgSection};
use mfdr_core::pairing::{bracket, pair_classes};
use mfdr_core::periods::{
    basepoint_coboundary_defect, cocycle_defect, eichler_cocycle, period_polynomial,
    rational_reconstruct_complex, BigComplex, NumForm, PrecCtx, QuadOpts, SL2Mat,
};
use mfdr_core::rat::{factorial, rat, rat_i, Int, Rat};
use mfdr_core::ring::{from_series, lift_from_z, AlgForm};
use mfdr_core::sampling::{alg_form, alg_form_nonzero, section_coeffs, SplitMix64};
use mfdr_core::series::{delta_series_product, eisenstein_e, eisenstein_g, QSeries};
use num_traits::Zero;

pub type Check = fn(u64) -> Result<(), String>;

/// The criteria in order, with short labels for the report.
pub const CRITERIA: &[(&str, Check)] = &[
    ("exact expansions of u, v, 1/Delta", c01_expansions),
    ("Eisenstein G12 coefficients", c02_g12),
    ("Ramanujan identities at window 50", c03_ramanujan),
    ("2u Dv - 3v Du = (2/3) Delta at window 50", c04_dlog),
    ("heads-and-tails identity for n <= 10", c05_heads_tails),
    ("weight-12 canonical basis", c06_weight12_basis),
    ("injectivity and surjectivity round trips", c07_round_trips),
    ("residue pairing values and laws", c08_pairing),
    ("Hecke eigenvalues and self-adjointness", c09_hecke),
    ("residues", c10_residues),
    ("slice restrict/lift round trips", c11_slice),
    ("cocycle and period-polynomial numerics", c12_periods),
    ("Z[1/6]-integrality of basis coefficients", c13_integrality),
];

fn fail(msg: impl Into<String>) -> Result<(), String> {
    Err(msg.into())
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        fail(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn c01_expansions(_seed: u64) -> Result<(), String> {
    let u = AlgForm::u().expand(5).map_err(|e| e.to_string())?;
    for (m, want) in [(0, rat(1, 12)), (1, rat_i(20)), (2, rat_i(180)), (3, rat_i(560)), (4, rat_i(1460))] {
        expect_eq(u.coeff(m).unwrap(), want, &format!("u at q^{m}"))?;
    }
    let v = AlgForm::v().expand(5).map_err(|e| e.to_string())?;
    for (m, want) in [
        (0, rat(-1, 216)),
        (1, rat(7, 3)),
        (2, rat_i(77)),
        (3, rat(1708, 3)),
        (4, rat(7399, 3)),
    ] {
        expect_eq(v.coeff(m).unwrap(), want, &format!("v at q^{m}"))?;
    }
    let dinv = AlgForm::delta_inv().expand(5).map_err(|e| e.to_string())?;
    for (m, want) in [
        (-1, rat_i(1)),
        (0, rat_i(24)),
        (1, rat_i(324)),
        (2, rat_i(3200)),
        (3, rat_i(25650)),
        (4, rat_i(176256)),
    ] {
        expect_eq(dinv.coeff(m).unwrap(), want, &format!("1/Delta at q^{m}"))?;
    }
    Ok(())
}

fn c02_g12(_seed: u64) -> Result<(), String> {
    let g12 = eisenstein_g(12, 4).map_err(|e| e.to_string())?;
    expect_eq(g12.coeff(0).unwrap(), rat(691, 65520), "G12 constant term")?;
    expect_eq(g12.coeff(1).unwrap(), rat_i(1), "G12 at q")?;
    expect_eq(g12.coeff(2).unwrap(), rat_i(2049), "G12 at q^2")?;
    expect_eq(g12.coeff(3).unwrap(), rat_i(177148), "G12 at q^3")?;
    Ok(())
}

fn c03_ramanujan(_seed: u64) -> Result<(), String> {
    let n = 50;
    let e2 = eisenstein_e(2, n).unwrap();
    let e4 = eisenstein_e(4, n).unwrap();
    let e6 = eisenstein_e(6, n).unwrap();
    if !e2.d().agrees(&e2.pow(2).sub(&e4).scalar_mul(&rat(1, 12))) {
        return fail("D E2 != (E2^2 - E4)/12");
    }
    if !e4.d().agrees(&e2.mul(&e4).sub(&e6).scalar_mul(&rat(1, 3))) {
        return fail("D E4 != (E2 E4 - E6)/3");
    }
    if !e6.d().agrees(&e2.mul(&e6).sub(&e4.pow(2)).scalar_mul(&rat(1, 2))) {
        return fail("D E6 != (E2 E6 - E4^2)/2");
    }
    let lhs = e6.mul(&e4.d()).scalar_mul(&rat_i(3)).sub(&e4.mul(&e6.d()).scalar_mul(&rat_i(2)));
    let delta = delta_series_product(n).unwrap();
    if !lhs.agrees(&delta.scalar_mul(&rat_i(1728))) {
        return fail("3 E6 DE4 - 2 E4 DE6 != 1728 Delta");
    }
    Ok(())
}

fn c04_dlog(_seed: u64) -> Result<(), String> {
    let n = 50;
    let u = AlgForm::u().expand(n).unwrap();
    let v = AlgForm::v().expand(n).unwrap();
    let delta = AlgForm::delta().expand(n).unwrap();
    let lhs = u.mul(&v.d()).scalar_mul(&rat_i(2)).sub(&v.mul(&u.d()).scalar_mul(&rat_i(3)));
    if !lhs.agrees(&delta.scalar_mul(&rat(2, 3))) {
        return fail("2u Dv - 3v Du != (2/3) Delta");
    }
    Ok(())
}

fn c05_heads_tails(seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed ^ 0x5);
    for n in [0u32, 2, 4, 6, 8, 10] {
        for trial in 0..5 {
            let f = alg_form_nonzero(&mut rng, -(n as i64));
            let tail = phi_tail(&f).map_err(|e| e.to_string())?;
            let lhs = tail.expand(40).unwrap().scalar_mul(&Rat::from_integer(factorial(n)));
            let rhs = f.expand(40).unwrap().bol(n + 1);
            if !lhs.agrees(&rhs) {
                return fail(format!("n! tail != D^(n+1) expansion at n={n}, trial {trial}"));
            }
        }
    }
    Ok(())
}

fn c06_weight12_basis(_seed: u64) -> Result<(), String> {
    let (dim_m, ell, dim_q) = dims(12).map_err(|e| e.to_string())?;
    expect_eq(dim_m, 2, "dim M_12")?;
    expect_eq(ell, 1, "dim S_12")?;
    expect_eq(dim_q, 3, "1 + 2 dim S_12")?;
    let basis = dr_basis(12, 12).map_err(|e| e.to_string())?;
    expect_eq(basis.len(), 3, "basis size")?;
    let f_neg = basis[0].rep();
    for (m, want) in [
        (-1, rat_i(1)),
        (0, rat_i(0)),
        (1, rat_i(0)),
        (2, rat_i(47709536)),
        (3, rat_i(39862705122)),
        (4, rat_i(7552626810624)),
    ] {
        expect_eq(f_neg.coeff(m).unwrap(), want, &format!("f_-1 at q^{m}"))?;
    }
    let delta = delta_series_product(12).unwrap();
    if !basis[2].rep().agrees(&delta) {
        return fail("f_1 is not Delta");
    }
    Ok(())
}

fn c07_round_trips(seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed ^ 0x7);
    for n in [2usize, 4, 6, 8, 10] {
        for trial in 0..10 {
            let s = AlgSection::new(n, 0, section_coeffs(&mut rng, n, 0, 1)).map_err(|e| e.to_string())?;
            let (tail, _) = reduce_to_tail(&s.nabla().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let class = canonical_rep(&tail, 10).map_err(|e| e.to_string())?;
            if !class.rep().is_zero_window() {
                return fail(format!("exact form has nonzero canonical class at n={n}, trial {trial}"));
            }
        }
        // identity on omega-images
        let f = alg_form_nonzero(&mut rng, n as i64 + 2);
        let e = AlgSection::omega_form(&f, n).map_err(|e| e.to_string())?;
        let (tail, audit) = reduce_to_tail(&e).map_err(|e| e.to_string())?;
        if tail != f || !audit.is_empty() {
            return fail(format!("reduction moved an omega-image at n={n}"));
        }
    }
    Ok(())
}

fn c08_pairing(seed: u64) -> Result<(), String> {
    let basis = dr_basis(12, 16).map_err(|e| e.to_string())?;
    let v = pair_classes(&basis[2], &basis[0]).map_err(|e| e.to_string())?;
    expect_eq(v.value, rat_i(1), "{Delta, f_-1}")?;
    let g12 = eisenstein_g(12, 16).unwrap();
    let naive = bracket(&g12, basis[0].rep(), 12, false).map_err(|e| e.to_string())?;
    expect_eq(naive.value, rat_i(1), "non-strict {G12, f_-1}")?;

    let mut rng = SplitMix64::new(seed ^ 0x8);
    for k in [12i64, 16] {
        let basis = dr_basis(k, 40).map_err(|e| e.to_string())?;
        let ell = (basis.len() - 1) / 2;
        let cuspidal = |rng: &mut SplitMix64| {
            let mut c = basis[0].scale(&rng.small_rat());
            for (i, b) in basis.iter().enumerate() {
                if i != ell {
                    c = c.add(&b.scale(&rng.small_rat())).unwrap();
                }
            }
            c
        };
        for trial in 0..10 {
            // antisymmetry: weight k = n + 2 even means (-1)^(n+1) = -1
            let a = cuspidal(&mut rng);
            let b = cuspidal(&mut rng);
            let ab = pair_classes(&a, &b).map_err(|e| e.to_string())?.value;
            let ba = pair_classes(&b, &a).map_err(|e| e.to_string())?.value;
            if ab != -ba {
                return fail(format!("antisymmetry fails at k={k}, trial {trial}"));
            }
            // vanishing on exact forms against cuspidal partners
            let h = alg_form_nonzero(&mut rng, 2 - k);
            let image = h.expand(40).unwrap().bol((k - 1) as u32);
            let g = cuspidal(&mut rng);
            let l = bracket(&image, g.rep(), k, true).map_err(|e| e.to_string())?.value;
            let r = bracket(g.rep(), &image, k, true).map_err(|e| e.to_string())?.value;
            if !l.is_zero() || !r.is_zero() {
                return fail(format!("pairing does not kill exact forms at k={k}, trial {trial}"));
            }
        }
    }
    Ok(())
}

fn c09_hecke(seed: u64) -> Result<(), String> {
    // eigenvalues read off the independent product-route expansion
    let delta = delta_series_product(8).unwrap();
    let tau2 = delta.coeff(2).unwrap();
    let tau3 = delta.coeff(3).unwrap();
    expect_eq(tau2.clone(), rat_i(-24), "tau(2) from the product oracle")?;
    expect_eq(tau3.clone(), rat_i(252), "tau(3) from the product oracle")?;

    let basis = dr_basis(12, 64).map_err(|e| e.to_string())?;
    let delta_class = &basis[2];
    let f_neg = &basis[0];
    for (p, lam) in [(2u64, tau2), (3u64, tau3)] {
        let td = hecke(p, delta_class).map_err(|e| e.to_string())?;
        if !td.same_class(&delta_class.scale(&lam)).map_err(|e| e.to_string())? {
            return fail(format!("T_{p} Delta != tau({p}) Delta"));
        }
        let tf = hecke(p, f_neg).map_err(|e| e.to_string())?;
        if !tf.same_class(&f_neg.scale(&lam)).map_err(|e| e.to_string())? {
            return fail(format!("T_{p} f_-1 != tau({p}) f_-1"));
        }
    }

    // self-adjointness over random cuspidal pairs
    let mut rng = SplitMix64::new(seed ^ 0x9);
    for k in [12i64, 16] {
        let basis = dr_basis(k, 64).map_err(|e| e.to_string())?;
        let ell = (basis.len() - 1) / 2;
        for p in [2u64, 3] {
            for trial in 0..5 {
                let mut a = basis[0].scale(&rng.small_rat());
                let mut b = basis[0].scale(&rng.small_rat());
                for (i, c) in basis.iter().enumerate() {
                    if i != ell {
                        a = a.add(&c.scale(&rng.small_rat())).unwrap();
                        b = b.add(&c.scale(&rng.small_rat())).unwrap();
                    }
                }
                let lhs = pair_classes(&hecke(p, &a).map_err(|e| e.to_string())?, &b)
                    .map_err(|e| e.to_string())?
                    .value;
                let rhs = pair_classes(&a, &hecke(p, &b).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?
                    .value;
                if lhs != rhs {
                    return fail(format!("self-adjointness fails at k={k}, p={p}, trial {trial}"));
                }
            }
        }
    }
    Ok(())
}

fn c10_residues(seed: u64) -> Result<(), String> {
    let g12 = from_series(&eisenstein_g(12, 14).unwrap(), 12).map_err(|e| e.to_string())?;
    let omega_g12 = AlgSection::omega_form(&g12, 10).map_err(|e| e.to_string())?;
    expect_eq(residue_alg(&omega_g12, 8).map_err(|e| e.to_string())?, rat(691, 65520), "Res(omega_G12)")?;
    let omega_delta = AlgSection::omega_form(&AlgForm::delta(), 10).map_err(|e| e.to_string())?;
    expect_eq(residue_alg(&omega_delta, 8).map_err(|e| e.to_string())?, rat_i(0), "Res(omega_Delta)")?;

    let mut rng = SplitMix64::new(seed ^ 0xa);
    for trial in 0..10 {
        let n = 2 * (1 + (trial % 4)) as usize;
        let s = AlgSection::new(n, 0, section_coeffs(&mut rng, n, 0, 1)).map_err(|e| e.to_string())?;
        let r = residue_alg(&s.nabla().map_err(|e| e.to_string())?, 30).map_err(|e| e.to_string())?;
        if !r.is_zero() {
            return fail(format!("Res(nabla s) != 0 at trial {trial}"));
        }
    }
    Ok(())
}

fn c11_slice(seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed ^ 0xb);
    for m in [0i64, 4, 6, 8, 10, 14] {
        for shift in [-2i64, -1, 0, 1, 2] {
            let w = m + 12 * shift;
            let Some(e) = alg_form(&mut rng, w, 3) else { continue };
            let back = lift_from_z(&e.restrict_to_z(), w).map_err(|e| e.to_string())?;
            if back != e {
                return fail(format!("restrict/lift round trip fails at m={m}, shift={shift}"));
            }
        }
    }
    Ok(())
}

/// Words of length <= 4 whose relevant orbit points at `z0 = 2i` stay at
/// height >= 0.35, so the straight-segment paths remain in the safe region.
fn sample_words(rng: &mut SplitMix64, count: usize) -> Vec<(SL2Mat, SL2Mat)> {
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < count && guard < 1000 {
        guard += 1;
        let word = |rng: &mut SplitMix64| -> SL2Mat {
            let len = 1 + rng.below(4) as usize;
            let mut m = SL2Mat::identity();
            for _ in 0..len {
                m = if rng.below(2) == 0 { m.mul(&SL2Mat::s()) } else { m.mul(&SL2Mat::t()) };
            }
            m
        };
        let g = word(rng);
        let d = word(rng);
        let ok = [g, d, g.mul(&d)].iter().all(|m| {
            // im(gamma^{-1} 2i) = 2 / ((2c')^2 + d'^2) for the inverse
            // matrix entries (c', d')
            let inv = m.inverse();
            let den = (4 * inv.c * inv.c + inv.d * inv.d) as f64;
            2.0 / den >= 0.35
        });
        if ok {
            out.push((g, d));
        }
    }
    out
}

fn c12_periods(seed: u64) -> Result<(), String> {
    let digits = 40usize;
    let ctx = &mut PrecCtx::new(digits).map_err(|e| e.to_string())?;
    let z0 = BigComplex::from_f64(ctx, 0.0, 2.0);
    let opts = QuadOpts::default();
    let tol_defect = ctx.pow10_neg(30);
    let tol_refine = ctx.pow10_neg(32);

    let delta_series = delta_series_product(100).unwrap();
    let basis = dr_basis(12, 160).map_err(|e| e.to_string())?;
    let forms: Vec<(&str, QSeries)> = vec![
        ("Delta", delta_series.clone()),
        ("f_-1", basis[0].rep().clone()),
    ];

    let mut rng = SplitMix64::new(seed ^ 0xc);
    let pairs = sample_words(&mut rng, 4);
    if pairs.len() < 4 {
        return fail("could not sample enough safe words");
    }

    for (name, series) in &forms {
        let form = NumForm::prepare(series, ctx).map_err(|e| e.to_string())?;
        for (i, (g, d)) in pairs.iter().enumerate() {
            let defect = cocycle_defect(&form, 10, g, d, &z0, &opts, ctx).map_err(|e| e.to_string())?;
            if defect.cmp(&tol_defect).unwrap_or(1) >= 0 {
                return fail(format!(
                    "cocycle defect {:.3e} for {name}, pair {i}",
                    ctx.to_f64_approx(&defect)
                ));
            }
        }
        // basepoint change is a coboundary
        let z1 = BigComplex::from_f64(ctx, 0.0, 3.0);
        for gamma in [SL2Mat::s(), SL2Mat::from_word("TS").unwrap()] {
            let defect = basepoint_coboundary_defect(&form, 10, &gamma, &z0, &z1, &opts, ctx)
                .map_err(|e| e.to_string())?;
            if defect.cmp(&tol_defect).unwrap_or(1) >= 0 {
                return fail(format!(
                    "basepoint defect {:.3e} for {name}",
                    ctx.to_f64_approx(&defect)
                ));
            }
        }
    }

    // quadrature refinement stability on Delta
    let form = NumForm::prepare(&delta_series, ctx).map_err(|e| e.to_string())?;
    let fine = QuadOpts { gl_nodes: opts.gl_nodes * 2, seg_rel_len: opts.seg_rel_len / 2.0, ..opts };
    let a = eichler_cocycle(&form, 10, &SL2Mat::s(), &z0, &opts, ctx).map_err(|e| e.to_string())?;
    let b = eichler_cocycle(&form, 10, &SL2Mat::s(), &z0, &fine, ctx).map_err(|e| e.to_string())?;
    let drift = a.sub(&b, ctx).max_norm();
    if drift.cmp(&tol_refine).unwrap_or(1) >= 0 {
        return fail(format!(
            "quadrature refinement drift {:.3e}",
            ctx.to_f64_approx(&drift)
        ));
    }

    // period polynomial of Delta reconstructs to the same rationals at 40
    // and 60 digits
    let mut reconstructed: Vec<Vec<Rat>> = Vec::new();
    for digits in [40usize, 60] {
        let ctx = &mut PrecCtx::new(digits).map_err(|e| e.to_string())?;
        let form = NumForm::prepare(&delta_series, ctx).map_err(|e| e.to_string())?;
        let (_, even, odd) =
            period_polynomial(&form, 10, &QuadOpts::default(), ctx).map_err(|e| e.to_string())?;
        let cap = Int::from(1_000_000i64);
        let mut vals = Vec::new();
        for part in [&even, &odd] {
            for c in part.coeffs() {
                match rational_reconstruct_complex(c, &cap, ctx) {
                    Some(r) => vals.push(r),
                    None => return fail(format!("period coefficient fails reconstruction at {digits} digits")),
                }
            }
        }
        reconstructed.push(vals);
    }
    if reconstructed[0] != reconstructed[1] {
        return fail("period polynomial reconstructions differ between 40 and 60 digits");
    }
    Ok(())
}

fn c13_integrality(_seed: u64) -> Result<(), String> {
    for k in [4i64, 6, 8, 10, 12, 14, 16] {
        let basis = dr_basis(k, 24).map_err(|e| e.to_string())?;
        for (i, c) in basis.iter().enumerate() {
            if !c.rep().denominators_23_smooth() {
                return fail(format!(
                    "basis element {i} at weight {k} has a denominator outside {{2, 3}}"
                ));
            }
        }
    }
    Ok(())
}

/// Runs every criterion, returning the per-criterion outcomes.
pub fn run_all(seed: u64) -> Vec<(String, Result<(), String>)> {
    CRITERIA
        .iter()
        .enumerate()
        .map(|(i, (name, f))| (format!("criterion {:02}: {name}", i + 1), f(seed)))
        .collect()
}
