//! Linear combinations of a known h-polynomial and unresolved generators
//! `I(0,k)`, `I(1,k)` (or their h-derivatives) with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactmath::{HPoly, MathError, Scalar};

/// An unresolved generator, possibly differentiated `order` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub i: usize,
    pub j: usize,
    pub order: u8,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({},{}){}", self.i, self.j, "'".repeat(self.order as usize))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinExpr<K: Scalar> {
    pub known: HPoly<K>,
    /// Grade-free polynomial coefficients.
    pub symbols: BTreeMap<Symbol, HPoly<K>>,
}

impl<K: Scalar> LinExpr<K> {
    pub fn zero() -> Self {
        Self { known: HPoly::zero(), symbols: BTreeMap::new() }
    }

    pub fn known(p: HPoly<K>) -> Self {
        Self { known: p, symbols: BTreeMap::new() }
    }

    pub fn symbol(field: &K::Field, i: usize, j: usize) -> Self {
        let one = K::from_coef(field, &<K::Coef as num_traits::One>::one());
        Self { known: HPoly::zero(), symbols: BTreeMap::from([(Symbol { i, j, order: 0 }, HPoly::constant(one))]) }
    }

    pub fn is_resolved(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MathError> {
        let mut out = self.clone();
        out.known = out.known.try_add(&other.known)?;
        for (s, c) in &other.symbols {
            let merged = match out.symbols.get(s) {
                Some(prev) => prev.try_add(c)?,
                None => c.clone(),
            };
            if merged.is_zero() {
                out.symbols.remove(s);
            } else {
                out.symbols.insert(*s, merged);
            }
        }
        Ok(out)
    }

    /// Multiplies by `c·h^power`.
    pub fn scale(&self, c: &K::Coef, power: usize) -> Self {
        Self {
            known: self.known.scale(c).shift(power),
            symbols: self
                .symbols
                .iter()
                .map(|(s, p)| (*s, p.scale(c).shift(power)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    pub fn derivative(&self) -> Result<Self, MathError> {
        let mut out = Self::known(self.known.derivative());
        for (s, c) in &self.symbols {
            let raised = Symbol { order: s.order + 1, ..*s };
            let mut part = Self::zero();
            part.symbols.insert(raised, c.clone());
            let dc = c.derivative();
            if !dc.is_zero() {
                part.symbols.insert(*s, dc);
            }
            out = out.try_add(&part)?;
        }
        Ok(out)
    }

    /// Drops symbol coefficients that are zero up to the arithmetic's
    /// resolution. Exact scalars drop only true zeros.
    pub fn prune(&mut self) {
        let scale = self.symbols.values().map(HPoly::max_abs_f64).fold(0.0, f64::max);
        self.symbols.retain(|_, c| !c.coeffs().iter().all(|x| x.negligible(scale)));
    }
}

impl<K: Scalar> fmt::Display for LinExpr<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.known.coeffs())?;
        for (s, c) in &self.symbols {
            write!(f, " + {:?}·{s}", c.coeffs())?;
        }
        Ok(())
    }
}
