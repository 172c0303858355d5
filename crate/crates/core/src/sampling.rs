//! Deterministic sampling of ring elements and sections.
//!
//! Randomised checks (both the test suites and the CLI self-test) must be
//! reproducible from a single seed, so the generator is a fixed splitmix64
//! rather than a platform RNG.

use crate::rat::{rat, Rat};
use crate::ring::{AlgForm, UvPoly};
use alloc::vec::Vec;

/// splitmix64; tiny, seedable, identical on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform in `[lo, hi]`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Small nonzero-biased rational with numerator in `[-9, 9]` and
    /// denominator in `{1, 2, 3}`.
    pub fn small_rat(&mut self) -> Rat {
        rat(self.range_i64(-9, 9), self.range_i64(1, 3))
    }
}

/// Random element of the given even weight with denominator power at most
/// `max_pole`; `None` when the weight admits no monomials at any allowed pole.
pub fn alg_form(rng: &mut SplitMix64, weight: i64, max_pole: u32) -> Option<AlgForm> {
    if weight % 2 != 0 {
        return Some(AlgForm::zero(weight));
    }
    for _ in 0..16 {
        let c = rng.below(max_pole as u64 + 1) as u32;
        let monos = crate::ring::weight_monomials(weight + 12 * c as i64);
        if monos.is_empty() {
            continue;
        }
        let mut num = UvPoly::zero();
        for &(a, b) in &monos {
            if rng.below(3) > 0 {
                num = num.add(&UvPoly::monomial(a, b, rng.small_rat()));
            }
        }
        if num.is_zero() {
            let &(a, b) = &monos[rng.below(monos.len() as u64) as usize];
            num = UvPoly::monomial(a, b, rat(1, 1));
        }
        return Some(AlgForm::new(num, c, weight).expect("sampled form is homogeneous"));
    }
    None
}

/// Random nonzero element, trying increasing pole depth until the weight
/// becomes populated.
pub fn alg_form_nonzero(rng: &mut SplitMix64, weight: i64) -> AlgForm {
    let mut pole = 1u32;
    loop {
        if let Some(f) = alg_form(rng, weight, pole) {
            if !f.is_zero() {
                return f;
            }
        }
        pole += 1;
        assert!(pole < 16, "no nonzero element found at weight {weight}");
    }
}

/// Coefficients for a random degree-`n` invariant section of base weight `w`:
/// index `j` holds a weight `(n - j) - j + w` element.
pub fn section_coeffs(rng: &mut SplitMix64, degree: usize, base_weight: i64, max_pole: u32) -> Vec<AlgForm> {
    (0..=degree)
        .map(|j| {
            let w = (degree - j) as i64 - j as i64 + base_weight;
            alg_form(rng, w, max_pole).unwrap_or_else(|| AlgForm::zero(w))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..32 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn sampled_forms_are_well_formed() {
        let mut rng = SplitMix64::new(42);
        for w in [-12i64, -10, -4, 0, 4, 12, 16] {
            if let Some(f) = alg_form(&mut rng, w, 2) {
                assert_eq!(f.weight(), w);
            }
        }
    }
}
