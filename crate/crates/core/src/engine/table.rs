//! Bottom-up construction of every `I(i,j)` as an explicit h-polynomial.

use std::collections::{BTreeMap, HashMap};

use crate::exactmath::{HPoly, Scalar};

use super::direct::direct_integral;
use super::linexpr::{LinExpr, Symbol};
use super::relations::Relation;
use super::EngineError;

pub const DEFAULT_LEVEL: usize = 12;

/// Cache of reduced integrals. At level `n` the generators `I(0,k)` and
/// `I(1,k)` are known for `k ≤ n`; other entries are filled whenever they
/// reduce to those generators.
#[derive(Clone, Debug)]
pub struct ReductionTable<K: Scalar> {
    field: K::Field,
    level: usize,
    entries: BTreeMap<(usize, usize), HPoly<K>>,
    pi_s_graded: bool,
}

impl<K: Scalar> ReductionTable<K> {
    /// Level 3: the generators up to `I(0,3)`, `I(1,3)` from direct integration.
    pub fn base_integrals(field: &K::Field) -> Self {
        let mut t = Self { field: field.clone(), level: 3, entries: BTreeMap::new(), pi_s_graded: true };
        for (i, j) in [(0, 1), (1, 1), (0, 2), (1, 2), (0, 3), (1, 3)] {
            t.insert((i, j), direct_integral::<K>(i, j, field));
        }
        t.fill();
        t
    }

    pub fn build(field: &K::Field, level: usize) -> Result<Self, EngineError> {
        let mut t = Self::base_integrals(field);
        while t.level < level {
            t.extend_level()?;
        }
        Ok(t)
    }

    pub fn field(&self) -> &K::Field {
        &self.field
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn lambda(&self) -> K::Coef {
        K::lambda(&self.field)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &HPoly<K>)> {
        self.entries.iter()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&HPoly<K>> {
        self.entries.get(&(i, j))
    }

    /// Whether every stored coefficient is a rational multiple of π·s.
    pub fn is_pi_s_graded(&self) -> bool {
        self.pi_s_graded
    }

    fn insert(&mut self, idx: (usize, usize), p: HPoly<K>) {
        self.pi_s_graded &= p.coeffs().iter().all(Scalar::is_pi_s_multiple);
        self.entries.insert(idx, p);
    }

    /// Stores every entry near the current level that resolves completely.
    fn fill(&mut self) {
        let bound = self.level + 2;
        let mut fresh = Vec::new();
        {
            let mut r = Resolver::new(self, false);
            for total in 1..=bound {
                for i in 0..=total {
                    let j = total - i;
                    if j == 0 || self.entries.contains_key(&(i, j)) {
                        continue;
                    }
                    if let Ok(e) = r.resolve(i, j) {
                        if e.is_resolved() {
                            fresh.push(((i, j), e.known));
                        }
                    }
                }
            }
        }
        for (idx, p) in fresh {
            self.insert(idx, p);
        }
    }

    /// Computes `I(0,n+1)` and `I(1,n+1)` from the first-order equations at
    /// `(0,n)` and `(1,n)`, integrating from `h = 0`.
    pub fn extend_level(&mut self) -> Result<(), EngineError> {
        let n = self.level;
        for i in 0..2 {
            let target = Symbol { i, j: n + 1, order: 1 };
            let derivative = self.solve_ode(i, n, target)?;
            let p = derivative.antiderivative();
            if p.degree() != Some(n + 1) || !p.constant_is_zero() {
                return Err(EngineError::DegreeViolation { i, j: n + 1, expected: n + 1, found: p.degree() });
            }
            self.insert((i, n + 1), p);
        }
        self.level = n + 1;
        self.fill();
        Ok(())
    }

    fn solve_ode(&self, i: usize, n: usize, target: Symbol) -> Result<HPoly<K>, EngineError> {
        let rel =
            Relation::derivative_ode(i as i64, n as i64, &self.lambda()).ok_or(EngineError::MissingDependency(i, n))?;
        let mut r = Resolver::new(self, false);
        let mut eq = LinExpr::zero();
        for term in &rel.terms {
            let (a, b) = term.index();
            let mut e = r.resolve(a, b)?;
            if term.derivative {
                e = e.derivative()?;
            }
            eq = eq.try_add(&e.scale(&term.coef, term.h_power as usize))?;
        }
        eq.prune();
        let coef = eq
            .symbols
            .remove(&target)
            .ok_or_else(|| EngineError::Unsolvable(format!("{target} does not appear at ({i},{n})")))?;
        if let Some(s) = eq.symbols.keys().next() {
            return Err(EngineError::Unsolvable(format!("{s} survives in the equation at ({i},{n})")));
        }
        if coef.degree() != Some(0) {
            return Err(EngineError::Unsolvable(format!("coefficient of {target} depends on h at ({i},{n})")));
        }
        Ok(eq.known.negate().try_div_scalar(&coef.coeffs()[0])?)
    }

    /// `I(i,j)` as an explicit polynomial.
    pub fn reduce(&self, i: usize, j: usize) -> Result<HPoly<K>, EngineError> {
        if j == 0 {
            return Ok(HPoly::zero());
        }
        if let Some(p) = self.entries.get(&(i, j)) {
            return Ok(p.clone());
        }
        let e = Resolver::new(self, false).resolve(i, j)?;
        if !e.is_resolved() {
            return Err(EngineError::LevelExceeded { i, j, level: self.level });
        }
        Ok(e.known)
    }

    /// `I(i,j)` written over the generators `I(0,k)`, `I(1,k)`, all kept symbolic.
    pub fn express_in_generators(&self, i: usize, j: usize) -> Result<LinExpr<K>, EngineError> {
        Resolver::new(self, true).resolve(i, j)
    }
}

/// Rewrites `I(i,j)` with the second-row rule for `i = 2` and the
/// first-index lowering rule for `i ≥ 3`; generators missing from the table
/// stay symbolic.
struct Resolver<'a, K: Scalar> {
    table: &'a ReductionTable<K>,
    symbolic: bool,
    cache: HashMap<(usize, usize), LinExpr<K>>,
}

impl<'a, K: Scalar> Resolver<'a, K> {
    fn new(table: &'a ReductionTable<K>, symbolic: bool) -> Self {
        Self { table, symbolic, cache: HashMap::new() }
    }

    fn resolve(&mut self, i: usize, j: usize) -> Result<LinExpr<K>, EngineError> {
        if j == 0 || (i, j) == (1, 1) {
            return Ok(LinExpr::zero());
        }
        if let Some(e) = self.cache.get(&(i, j)) {
            return Ok(e.clone());
        }
        let e = self.compute(i, j)?;
        self.cache.insert((i, j), e.clone());
        Ok(e)
    }

    fn compute(&mut self, i: usize, j: usize) -> Result<LinExpr<K>, EngineError> {
        if i <= 1 {
            if !self.symbolic {
                if let Some(p) = self.table.entries.get(&(i, j)) {
                    return Ok(LinExpr::known(p.clone()));
                }
            }
            return Ok(LinExpr::symbol(&self.table.field, i, j));
        }
        if !self.symbolic {
            if let Some(p) = self.table.entries.get(&(i, j)) {
                return Ok(LinExpr::known(p.clone()));
            }
        }
        let lambda = self.table.lambda();
        let rel = if i == 2 && j == 1 {
            Relation::mixed_recurrence(2, 1, &lambda)
        } else if i == 2 {
            Relation::raise_second_row(j as i64 - 1, &lambda)
        } else {
            Relation::lower_first_index(i as i64, j as i64, &lambda)
        }
        .ok_or(EngineError::MissingDependency(i, j))?;
        // the first term is the target with coefficient one
        let mut out = LinExpr::zero();
        for term in rel.terms.iter().skip(1) {
            let (a, b) = term.index();
            let e = self.resolve(a, b)?;
            let c = <K::Coef as num_traits::Zero>::zero() - term.coef.clone();
            out = out.try_add(&e.scale(&c, term.h_power as usize))?;
        }
        out.prune();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::engine::direct::direct_integral;
    use crate::exactmath::{FloatField, SurdField, SurdScalar};

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn base_level_entries() {
        let f = SurdField::new(q(1, 2)).unwrap();
        let t = ReductionTable::<SurdScalar>::base_integrals(&f);
        assert!(t.get(1, 1).unwrap().is_zero());
        assert!((t.get(0, 2).unwrap().eval_f64(1.0) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        let i21 = t.reduce(2, 1).unwrap();
        assert_eq!(i21, t.get(0, 2).unwrap().scale(&q(-1, 1)));
    }

    #[test]
    fn extension_matches_direct_integration() {
        for lam in [q(1, 4), q(1, 2), q(2, 3)] {
            let f = SurdField::new(lam).unwrap();
            let t = ReductionTable::<SurdScalar>::build(&f, 8).unwrap();
            for (i, j) in [(0, 4), (1, 4), (0, 7), (1, 8), (2, 4), (3, 3), (4, 2), (5, 1)] {
                assert_eq!(t.reduce(i, j).unwrap(), direct_integral::<SurdScalar>(i, j, &f), "({i},{j})");
            }
            assert!(t.is_pi_s_graded());
        }
    }

    #[test]
    fn float_table_close_to_exact() {
        let f = SurdField::new(q(3, 4)).unwrap();
        let ff = FloatField::new(0.75).unwrap();
        let a = ReductionTable::<SurdScalar>::build(&f, 7).unwrap();
        let b = ReductionTable::<f64>::build(&ff, 7).unwrap();
        for (i, j) in [(0, 7), (1, 7), (3, 4)] {
            let x = a.reduce(i, j).unwrap().eval_f64(1.0);
            let y = b.reduce(i, j).unwrap().eval_f64(1.0);
            assert!((x - y).abs() <= 1e-9 * x.abs(), "({i},{j}) {x} {y}");
        }
    }

    #[test]
    fn beyond_level_is_reported() {
        let f = SurdField::new(q(1, 3)).unwrap();
        let t = ReductionTable::<SurdScalar>::base_integrals(&f);
        assert!(matches!(t.reduce(0, 6), Err(EngineError::LevelExceeded { .. })));
    }
}
