//! Cross-module invariants at realistic window sizes.

use mfdr_core::cohomology::{canonical_rep, dims, dr_basis, phi, phi_tail, reduce_to_tail};
use mfdr_core::connection::AlgSection;
use mfdr_core::rat::{factorial, rat, rat_i, Rat};
use mfdr_core::ring::{from_series, lift_from_z, weight_monomials, AlgForm};
use mfdr_core::sampling::{alg_form, alg_form_nonzero, section_coeffs, SplitMix64};
use mfdr_core::series::{delta_series_product, eisenstein_e, eisenstein_g};
use num_traits::Zero;

#[test]
fn expand_membership_round_trip_across_weights() {
    let mut rng = SplitMix64::new(101);
    for w in (-36..=36).step_by(4) {
        let w = w as i64;
        if w % 2 != 0 {
            continue;
        }
        let Some(f) = alg_form(&mut rng, w, 3) else { continue };
        if f.is_zero() {
            continue;
        }
        let n = f.den_pow() as i64 + weight_monomials(w + 12 * f.den_pow() as i64).len() as i64 + 12;
        let s = f.expand(n).unwrap();
        let back = from_series(&s, w).unwrap();
        assert_eq!(back, f, "round trip at weight {w}");
    }
}

#[test]
fn theta_leibniz_on_random_pairs() {
    let mut rng = SplitMix64::new(102);
    for _ in 0..8 {
        let a = alg_form_nonzero(&mut rng, -4);
        let b = alg_form_nonzero(&mut rng, 10);
        let lhs = a.mul(&b).theta();
        let rhs = a.theta().mul(&b).add(&a.mul(&b.theta())).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn chain_rule_shadow_at_window_50() {
    // D(expand e) = expand(theta e) + m * expand(e) * (D Delta)/(12 Delta)
    let n = 50;
    let delta = delta_series_product(n + 2).unwrap();
    let log_der = delta.d().mul(&delta.invert().unwrap());
    let mut rng = SplitMix64::new(103);
    for w in [-12i64, -4, 0, 8, 14] {
        let Some(e) = alg_form(&mut rng, w, 2) else { continue };
        let lhs = e.expand(n).unwrap().d();
        let rhs = e
            .theta()
            .expand(n)
            .unwrap()
            .add(&e.expand(n).unwrap().mul(&log_der).scalar_mul(&rat(w, 12)));
        assert!(lhs.agrees(&rhs), "weight {w}");
    }
}

#[test]
fn slice_round_trips_on_graded_pieces_and_delta_shifts() {
    let mut rng = SplitMix64::new(104);
    for m in [0i64, 4, 6, 8, 10, 14] {
        for shift in [-1i64, 0, 1, 2] {
            let w = m + 12 * shift;
            let Some(e) = alg_form(&mut rng, w, 3) else { continue };
            let back = lift_from_z(&e.restrict_to_z(), w).unwrap();
            assert_eq!(back, e, "m={m} shift={shift}");
        }
    }
}

#[test]
fn generator_expansions_are_z_one_sixth_integral() {
    let u = AlgForm::u().expand(60).unwrap();
    let v = AlgForm::v().expand(60).unwrap();
    let dinv = AlgForm::delta_inv().expand(60).unwrap();
    assert!(u.denominators_23_smooth());
    assert!(v.denominators_23_smooth());
    assert!(dinv.denominators_23_smooth());
}

#[test]
fn bol_lands_in_weakly_modular_forms() {
    // D^(n+1) maps weight -n into weight n+2, with zero constant term
    let mut rng = SplitMix64::new(105);
    for n in [0u32, 2, 4, 6, 8] {
        let f = alg_form_nonzero(&mut rng, -(n as i64));
        let window = 30 + 2 * f.den_pow() as i64;
        let image = f.expand(window).unwrap().bol(n + 1);
        assert!(image.coeff(0).unwrap().is_zero(), "n={n}");
        let g = from_series(&image, n as i64 + 2).unwrap();
        assert!(!g.is_zero());
    }
}

#[test]
fn heads_and_tails_up_to_degree_twelve() {
    let mut rng = SplitMix64::new(106);
    for n in (0..=12u32).step_by(2) {
        let f = alg_form_nonzero(&mut rng, -(n as i64));
        let tail = phi_tail(&f).unwrap();
        let lhs = tail
            .expand(40)
            .unwrap()
            .scalar_mul(&Rat::from_integer(factorial(n)));
        let rhs = f.expand(40).unwrap().bol(n + 1);
        assert!(lhs.agrees(&rhs), "n={n}");
    }
}

#[test]
fn injectivity_and_surjectivity_round_trips() {
    let mut rng = SplitMix64::new(107);
    for n in [2usize, 4, 6, 8, 10] {
        // injectivity: canonical_rep(reduce(nabla s)) = 0
        for _ in 0..3 {
            let s = AlgSection::new(n, 0, section_coeffs(&mut rng, n, 0, 1)).unwrap();
            let (tail, _) = reduce_to_tail(&s.nabla().unwrap()).unwrap();
            let class = canonical_rep(&tail, 10).unwrap();
            assert!(class.rep().is_zero_window(), "n={n}");
        }
        // surjectivity: a random omega-form is its reduction plus exacts
        for _ in 0..3 {
            let e = AlgSection::new(n, 2, section_coeffs(&mut rng, n, 2, 1)).unwrap();
            let (tail, audit) = reduce_to_tail(&e).unwrap();
            let mut back = AlgSection::omega_form(&tail, n).unwrap();
            for a in &audit {
                back = back.add(&a.nabla().unwrap()).unwrap();
            }
            for j in 0..=n {
                assert_eq!(back.coeff(j), e.coeff(j), "n={n} slot {j}");
            }
        }
    }
}

#[test]
fn gauge_commuting_square_across_degrees() {
    // gauge(nabla_st s) = nabla_at(gauge s) for n = 2, 4, ..., 12
    let mut rng = SplitMix64::new(108);
    for n in (2..=12usize).step_by(2) {
        let s = AlgSection::new(n, 0, section_coeffs(&mut rng, n, 0, 1)).unwrap();
        let lhs = s.nabla().unwrap().expand(14).unwrap().to_at().unwrap();
        let rhs = s.expand(14).unwrap().to_at().unwrap().nabla_at().unwrap();
        for j in 0..=n {
            assert!(lhs.coeff(j).agrees(rhs.coeff(j)), "degree {n} slot {j}");
        }
    }
}

#[test]
fn basis_coherence_across_weights() {
    for k in [4i64, 6, 8, 10, 12, 14, 16, 26] {
        let (_, ell, dim_q) = dims(k).unwrap();
        let basis = dr_basis(k, ell as i64 + 8).unwrap();
        assert_eq!(basis.len(), dim_q, "weight {k}");
        let ell_i = ell as i64;
        for (i, f_m) in basis.iter().enumerate() {
            let m = i as i64 - ell_i;
            for e in -ell_i..=ell_i {
                let expect = if e == m { rat_i(1) } else { rat_i(0) };
                assert_eq!(f_m.rep().coeff(e).unwrap(), expect, "k={k} f_{m} at q^{e}");
            }
        }
    }
}

#[test]
fn phi_respects_odd_and_zero_inputs() {
    let z = AlgForm::zero(-3);
    let s = phi(&z).unwrap();
    assert!(s.is_zero());
    assert_eq!(s.degree(), 3);
}

#[test]
fn eisenstein_normalisations_are_consistent() {
    // E_k = -(2k / B_k) G_k and u = E_4 / 12, v = -E_6 / 216
    let e4 = eisenstein_e(4, 20).unwrap();
    let g4 = eisenstein_g(4, 20).unwrap();
    assert!(e4.agrees(&g4.scalar_mul(&rat_i(240))));
    let u = AlgForm::u().expand(20).unwrap();
    assert!(u.agrees(&e4.scalar_mul(&rat(1, 12))));
    let e6 = eisenstein_e(6, 20).unwrap();
    let v = AlgForm::v().expand(20).unwrap();
    assert!(v.agrees(&e6.scalar_mul(&rat(-1, 216))));
}
