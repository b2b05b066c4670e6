//! Seeded random perturbations for property checks and the `verify` sweep.

use num_rational::BigRational;
use rand::Rng;

use super::perturbation::Perturbation;

/// Small rational `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 6`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=6).into())
}

/// A degree-`n` perturbation in which each monomial of `f` and `g` is present
/// with probability `density`.
pub fn random_perturbation<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Perturbation {
    let mut p = Perturbation::new(n);
    for i in 0..=n {
        for j in 0..=n - i {
            if rng.gen_bool(density) {
                p = p.with_a(i, j, random_rational(rng));
            }
            if rng.gen_bool(density) {
                p = p.with_b(i, j, random_rational(rng));
            }
        }
    }
    p
}

/// `count` distinct rationals in (0, 2) with denominators up to 12.
pub fn random_zero_set<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(count);
    while out.len() < count {
        let q: i64 = rng.gen_range(1..=12);
        let z = BigRational::new(rng.gen_range(1..2 * q).into(), q.into());
        if !out.contains(&z) {
            out.push(z);
        }
    }
    out.sort();
    out
}
