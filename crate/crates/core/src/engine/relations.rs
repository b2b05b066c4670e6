//! Linear identities among the integrals `I(i,j) = ∮ xⁱ yʲ dx`.
//!
//! Each identity is stored as `Σ coef · h^p · I(i,j)^(d) = 0` with `d ∈ {0, 1}`
//! (derivative in h). The first term is the one the identity is usually
//! solved for. Terms whose coefficient vanishes are dropped, and an identity
//! that would still reference a negative index is not constructed.

use crate::exactmath::CoefField;

#[derive(Clone, Debug, PartialEq)]
pub struct Term<C> {
    pub coef: C,
    pub h_power: u32,
    pub derivative: bool,
    pub i: i64,
    pub j: i64,
}

impl<C: CoefField> Term<C> {
    pub fn index(&self) -> (usize, usize) {
        (self.i as usize, self.j as usize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Relation<C> {
    pub name: &'static str,
    pub terms: Vec<Term<C>>,
}

fn t<C: CoefField>(coef: C, i: i64, j: i64) -> Term<C> {
    Term { coef, h_power: 0, derivative: false, i, j }
}

fn th<C: CoefField>(coef: C, i: i64, j: i64) -> Term<C> {
    Term { coef, h_power: 1, derivative: false, i, j }
}

fn d<C: CoefField>(coef: C, i: i64, j: i64) -> Term<C> {
    Term { coef, h_power: 0, derivative: true, i, j }
}

fn dh<C: CoefField>(coef: C, i: i64, j: i64) -> Term<C> {
    Term { coef, h_power: 1, derivative: true, i, j }
}

fn n<C: CoefField>(k: i64) -> C {
    C::from_int(k)
}

impl<C: CoefField> Relation<C> {
    /// `lhs = Σ rhs`.
    fn build(name: &'static str, lhs: Term<C>, rhs: Vec<Term<C>>) -> Option<Self> {
        let mut terms = vec![lhs];
        terms.extend(rhs.into_iter().map(|mut r| {
            r.coef = C::zero() - r.coef;
            r
        }));
        terms.retain(|r| !r.coef.is_zero());
        if terms.iter().any(|r| r.i < 0 || r.j < 0) {
            return None;
        }
        Some(Self { name, terms })
    }

    fn scaled(rhs: Vec<Term<C>>, factor: C) -> Vec<Term<C>> {
        rhs.into_iter()
            .map(|mut r| {
                r.coef = r.coef * factor.clone();
                r
            })
            .collect()
    }

    /// Evaluates `Σ terms` with a caller-supplied value (or derivative) of each integral.
    pub fn residual<F: FnMut(usize, usize, bool) -> f64>(&self, h: f64, mut value: F) -> f64 {
        self.terms
            .iter()
            .map(|r| r.coef.to_f64() * h.powi(r.h_power as i32) * value(r.i as usize, r.j as usize, r.derivative))
            .sum()
    }

    /// Scale for relative residuals: `Σ |term|`.
    pub fn magnitude<F: FnMut(usize, usize, bool) -> f64>(&self, h: f64, mut value: F) -> f64 {
        self.terms
            .iter()
            .map(|r| {
                (r.coef.to_f64() * h.powi(r.h_power as i32) * value(r.i as usize, r.j as usize, r.derivative)).abs()
            })
            .sum()
    }

    /// Differentiating the identity obtained from multiplying `dH = 0` by
    /// `x^{i−3} yʲ`. Needs `i ≥ 3`.
    pub fn from_differentiated_level(i: i64, j: i64, lambda: &C) -> Option<Self> {
        if i < 3 || j < 0 {
            return None;
        }
        let l = lambda.clone();
        let rhs = vec![
            t((n::<C>(i - 3)) / (l.clone() * n(j + 2)), i - 4, j + 2),
            t(C::zero() - C::one(), i - 2, j),
            t(n::<C>(i - 2 * j - 3) / n(j + 1), i - 2, j + 1),
            t(C::zero() - n::<C>(3) * l.clone(), i - 1, j),
            t(n::<C>(i - j - 3) / n(j + 1), i - 3, j + 1),
        ];
        let k = C::one() / (n::<C>(2) * l);
        Self::build("differentiated-level", t(C::one(), i, j), Self::scaled(rhs, k))
    }

    /// `H = h` multiplied by `xⁱ y^{j−2}`. Needs `j ≥ 2`.
    pub fn from_level_identity(i: i64, j: i64, lambda: &C) -> Option<Self> {
        if i < 0 || j < 2 {
            return None;
        }
        let l = lambda.clone();
        let l2 = l.clone() * l.clone();
        let two = n::<C>(2);
        let rhs = vec![
            th(two.clone() * l.clone(), i, j - 2),
            t(C::zero() - l.clone(), i + 2, j - 2),
            t(C::zero() - two.clone() * l.clone(), i + 2, j - 1),
            t(C::zero() - l2.clone(), i + 4, j - 2),
            t(C::zero() - two.clone() * l.clone(), i + 1, j - 1),
            t(C::zero() - two * l2, i + 3, j - 2),
        ];
        Self::build("level-identity", t(C::one(), i, j), rhs)
    }

    /// Lowers the first index. Needs `i ≥ 3`.
    pub fn lower_first_index(i: i64, j: i64, lambda: &C) -> Option<Self> {
        if i < 3 || j < 0 {
            return None;
        }
        let l = lambda.clone();
        let s = i + 2 * j + 1;
        let rhs = vec![
            th(n::<C>(2 * (i - 3)), i - 4, j),
            t(C::zero() - n::<C>(i + j - 1), i - 2, j),
            t(C::zero() - l.clone() * n(2 * i + 3 * j), i - 1, j),
            t(C::zero() - n::<C>(j * s) / n(j + 1), i - 2, j + 1),
            t(C::zero() - n::<C>(j * (i + j - 1)) / n(j + 1), i - 3, j + 1),
        ];
        let k = C::one() / (l * n(s));
        Self::build("lower-first-index", t(C::one(), i, j), Self::scaled(rhs, k))
    }

    /// Lowers the second index by two. Needs `j ≥ 2`.
    pub fn lower_second_index(i: i64, j: i64, lambda: &C) -> Option<Self> {
        if i < 0 || j < 2 {
            return None;
        }
        let l = lambda.clone();
        let s = i + 2 * j + 1;
        let rhs = vec![
            th(n::<C>(4), i, j - 2),
            t(C::zero() - C::one(), i + 2, j - 2),
            t(C::zero() - l.clone(), i + 3, j - 2),
            t(C::zero() - n::<C>(s) / n(j - 1), i + 2, j - 1),
            t(C::zero() - n::<C>(i + 3 * j - 1) / n(j - 1), i + 1, j - 1),
        ];
        let k = l * n(j) / n(s);
        Self::build("lower-second-index", t(C::one(), i, j), Self::scaled(rhs, k))
    }

    /// The mixed recurrence obtained by eliminating two neighbours between the
    /// two lowering rules. Needs `i ≥ 2`, `j ≥ 1`.
    pub fn mixed_recurrence(i: i64, j: i64, lambda: &C) -> Option<Self> {
        if i < 2 || j < 1 {
            return None;
        }
        let l = lambda.clone();
        let s = i + 2 * j + 1;
        let lam = |k: i64| l.clone() * n(k);
        let rhs = vec![
            th(lam(4 * j * (j + 1) * s), i - 1, j - 1),
            th(n::<C>(-2 * (i - 2) * (j + 1) * s), i - 3, j),
            t(n::<C>(j * (i + j) * s), i - 2, j + 1),
            t(n::<C>((j + 1) * (i + j)) * (n::<C>(s) + lam(j - 1)), i - 1, j),
            t(C::zero() - lam(j * (j + 1)) * (n::<C>(s) - lam(2 * i + 3 * j + 1)), i + 1, j - 1),
            th(C::zero() - lam(2 * j * (i - 1) * (j + 1)), i - 2, j - 1),
            t(lam(j * (j + 1) * (i + j)), i, j - 1),
        ];
        let k = C::zero() - C::one() / (l * n((j + 1) * (i + j) * s));
        Self::build("mixed-recurrence", t(C::one(), i, j), Self::scaled(rhs, k))
    }

    /// `I(3,m)` through `I(2,m)` and the generators. Needs `m ≥ 1`.
    pub fn third_row(m: i64, lambda: &C) -> Option<Self> {
        if m < 1 {
            return None;
        }
        let l = lambda.clone();
        let rhs = vec![
            t(C::zero() - C::one() / (n::<C>(2) * l.clone()), 1, m),
            t(n::<C>(-3) / n(2), 2, m),
            t(C::zero() - n::<C>(m) / (l.clone() * n(m + 1)), 1, m + 1),
            t(C::zero() - n::<C>(m) / (n::<C>(2) * l * n(m + 1)), 0, m + 1),
        ];
        Self::build("third-row", t(C::one(), 3, m), rhs)
    }

    /// `I(2,m+1)` from `I(2,m)` and the generators. Needs `m ≥ 1`.
    pub fn raise_second_row(m: i64, lambda: &C) -> Option<Self> {
        if m < 1 {
            return None;
        }
        let l = lambda.clone();
        let lam = |k: i64| l.clone() * n(k);
        let a = (m + 3) * (2 * m + 5);
        let rhs = vec![
            t(n::<C>(m + 1) * (lam(9 * m + 24) - n(8 * m + 21)) / n(2 * a), 2, m),
            th(n::<C>(2 * (m + 1)) / n(a), 0, m),
            t(n::<C>(m) * (lam(3 * m + 8) - n(2 * m + 5)) / (lam(2) * n(a)), 0, m + 1),
            t(C::zero() - n::<C>(m + 1) / lam(m + 2), 0, m + 2),
            th(n::<C>(-4 * (m + 1)) / n(m + 3), 1, m),
            t(C::zero() - n::<C>(m + 1) * (n::<C>(2 * m + 5) - lam(3 * m + 8)) / (lam(2) * n(a)), 1, m),
            t((lam(m) - n(2 * m + 3)) / lam(m + 3), 1, m + 1),
        ];
        Self::build("raise-second-row", t(C::one(), 2, m + 1), rhs)
    }

    /// Value against derivatives, from `∂y/∂h = 1/(x + x² + y/λ)`.
    pub fn derivative_split(i: i64, j: i64, lambda: &C) -> Option<Self> {
        let l = lambda.clone();
        let rhs = vec![
            d(C::one() / (l * n(j + 2)), i, j + 2),
            d(C::one() / n(j + 1), i + 1, j + 1),
            d(C::one() / n(j + 1), i + 2, j + 1),
        ];
        Self::build("derivative-split", t(C::one(), i, j), rhs)
    }

    /// `h·I'(i,j)` rewritten through the level identity.
    pub fn energy_weighted_derivative(i: i64, j: i64, lambda: &C) -> Option<Self> {
        let l = lambda.clone();
        let rhs = vec![
            d(n::<C>(1) / n(2), i + 2, j),
            d(l.clone(), i + 3, j),
            d(l.clone() / n(2), i + 4, j),
            d(n::<C>(j) / (n::<C>(2) * l * n(j + 2)), i, j + 2),
            d(n::<C>(j) / n(j + 1), i + 1, j + 1),
            d(n::<C>(j) / n(j + 1), i + 2, j + 1),
        ];
        Self::build("energy-weighted-derivative", dh(C::one(), i, j), rhs)
    }

    /// Value against derivatives, through the `dy` form of the integrand.
    pub fn derivative_via_dy(i: i64, j: i64, lambda: &C) -> Option<Self> {
        let l = lambda.clone();
        let a = n::<C>(i + 1);
        let rhs = vec![
            d(C::one() / a.clone(), i + 2, j),
            d(n::<C>(j) / (a.clone() * n(j + 1)), i + 1, j + 1),
            d(n::<C>(3) * l.clone() / a.clone(), i + 3, j),
            d(n::<C>(2 * j) / (a.clone() * n(j + 1)), i + 2, j + 1),
            d(n::<C>(2) * l / a, i + 4, j),
        ];
        Self::build("derivative-via-dy", t(C::one(), i, j), rhs)
    }

    /// First-order equation combining the three derivative identities:
    /// `(i+2j+1)·I = 4h·I' − I'(i+2,j) − λ·I'(i+3,j) − j/(j+1)·I'(i+1,j+1)`.
    pub fn derivative_ode(i: i64, j: i64, lambda: &C) -> Option<Self> {
        let l = lambda.clone();
        let rhs = vec![
            dh(n::<C>(4), i, j),
            d(C::zero() - C::one(), i + 2, j),
            d(C::zero() - l, i + 3, j),
            d(C::zero() - n::<C>(j) / n(j + 1), i + 1, j + 1),
        ];
        let k = C::one() / n(i + 2 * j + 1);
        Self::build("derivative-ode", t(C::one(), i, j), Self::scaled(rhs, k))
    }
}

/// `∮ xⁱ yʲ dy = −i/(j+1) · I(i−1, j+1)`: coefficient and index, or `None` when `i = 0`.
pub fn dy_to_dx<C: CoefField>(i: usize, j: usize) -> Option<(C, usize, usize)> {
    (i > 0).then(|| (C::zero() - C::from_int(i as i64) / C::from_int(j as i64 + 1), i - 1, j + 1))
}
