//! Closed-form integrals obtained by direct integration over the ellipse
//! `(y + λ(x + x²))² + λ(1−λ)x² = 2λh`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exactmath::{CoefField, HPoly, Scalar};

/// `I(2m, 1)` as the single monomial `π·s·c_m·h^{m+1}` with
/// `c_m = −2·(2/(1−λ))^{m+1}·(2m−1)!!/(2m+2)!!`.
pub fn moment_integral<K: Scalar>(n_even: usize, field: &K::Field) -> Result<HPoly<K>, super::EngineError> {
    if n_even % 2 == 1 {
        return Err(super::EngineError::OddMoment(n_even));
    }
    let m = n_even / 2;
    let lambda = K::lambda(field);
    let base = K::Coef::from_int(2) / (K::Coef::one() - lambda);
    let mut c = K::Coef::from_int(-2) * base.powi(m as u32 + 1);
    // (2m−1)!!/(2m+2)!! = ∏_{k=1..m} (2k−1)/(2k) · 1/(2m+2)
    for k in 1..=m as i64 {
        c = c * K::Coef::ratio(2 * k - 1, 2 * k);
    }
    c = c * K::Coef::ratio(1, 2 * m as i64 + 2);
    Ok(HPoly::monomial(K::pi_s(field).scale(&c), m + 1))
}

type XhPoly<C> = BTreeMap<(usize, usize), C>;

fn xh_mul<C: CoefField>(a: &XhPoly<C>, b: &XhPoly<C>) -> XhPoly<C> {
    let mut out = XhPoly::new();
    for (&(ea, fa), ca) in a {
        for (&(eb, fb), cb) in b {
            let e = out.entry((ea + eb, fa + fb)).or_insert_with(C::zero);
            *e = e.clone() + ca.clone() * cb.clone();
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn xh_pow<C: CoefField>(a: &XhPoly<C>, k: usize) -> XhPoly<C> {
    let mut acc = XhPoly::from([((0, 0), C::one())]);
    for _ in 0..k {
        acc = xh_mul(&acc, a);
    }
    acc
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, t| acc * (n - t) as i64 / (t + 1) as i64)
}

/// Any `I(i,j)` in closed form.
///
/// With `w = y + λ(x + x²)` and `R = w² = 2λh − λ(1−λ)x²`, only odd powers of
/// `w` survive the loop integral, and `∮ x^a w dx = I(a,1)`. So `I(i,j)` is a
/// finite combination `Σ q_{e,f} h^f I(i+e, 1)`.
pub fn direct_integral<K: Scalar>(i: usize, j: usize, field: &K::Field) -> HPoly<K> {
    let l = K::lambda(field);
    let p = XhPoly::from([((1, 0), K::Coef::zero() - l.clone()), ((2, 0), K::Coef::zero() - l.clone())]);
    let r = XhPoly::from([
        ((0, 1), K::Coef::from_int(2) * l.clone()),
        ((2, 0), K::Coef::zero() - l.clone() * (K::Coef::one() - l)),
    ]);
    let mut total = HPoly::zero();
    for k in (1..=j).step_by(2) {
        let mut term = xh_mul(&xh_pow(&p, j - k), &xh_pow(&r, (k - 1) / 2));
        let b = K::Coef::from_int(binomial(j, k));
        term.values_mut().for_each(|c| *c = c.clone() * b.clone());
        for ((e, f), c) in term {
            let a = i + e;
            if a % 2 == 1 {
                continue;
            }
            let m = moment_integral::<K>(a, field).expect("even moment");
            total = total.try_add(&m.scale(&c).shift(f)).expect("single pi grade throughout");
        }
    }
    total
}
