//! Comparison-procedure views of (possibly infinite) orders.
//!
//! Oracles must be stateless or internally synchronized; budgets live with
//! the caller so concurrent queries never share a counter.

use crate::orders::{CircOrder, LinOrder};
use crate::Label;

/// Ternary query `[a, b, c]` of a circular order.
pub trait TripleOracle<T> {
    fn holds(&self, a: &T, b: &T, c: &T) -> bool;
}

/// Strict pair query `a < b` of a linear order.
pub trait PairOracle<T> {
    fn less(&self, a: &T, b: &T) -> bool;
}

impl<T: Label> TripleOracle<T> for CircOrder<T> {
    fn holds(&self, a: &T, b: &T, c: &T) -> bool {
        CircOrder::holds(self, a, b, c)
    }
}

impl<T: Label> PairOracle<T> for LinOrder<T> {
    fn less(&self, a: &T, b: &T) -> bool {
        self.lt(a, b)
    }
}

impl<T, O: TripleOracle<T> + ?Sized> TripleOracle<T> for &O {
    fn holds(&self, a: &T, b: &T, c: &T) -> bool {
        (**self).holds(a, b, c)
    }
}

impl<T, O: PairOracle<T> + ?Sized> PairOracle<T> for &O {
    fn less(&self, a: &T, b: &T) -> bool {
        (**self).less(a, b)
    }
}

/// Adapter turning a closure into a [`TripleOracle`].
pub struct TripleFn<F>(pub F);

impl<T, F: Fn(&T, &T, &T) -> bool> TripleOracle<T> for TripleFn<F> {
    fn holds(&self, a: &T, b: &T, c: &T) -> bool {
        (self.0)(a, b, c)
    }
}

/// Adapter turning a closure into a [`PairOracle`].
pub struct PairFn<F>(pub F);

impl<T, F: Fn(&T, &T) -> bool> PairOracle<T> for PairFn<F> {
    fn less(&self, a: &T, b: &T) -> bool {
        (self.0)(a, b)
    }
}

/// The usual order on the integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegerOrder;

impl PairOracle<i64> for IntegerOrder {
    fn less(&self, a: &i64, b: &i64) -> bool {
        a < b
    }
}

/// Per-call probe counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeBudget {
    remaining: usize,
}

impl ProbeBudget {
    pub fn new(probes: usize) -> Self {
        ProbeBudget { remaining: probes }
    }

    /// Consumes one probe; false once the budget is spent.
    pub fn take(&mut self) -> bool {
        if self.remaining == 0 {
            return false;
        }
        self.remaining -= 1;
        true
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }
}

/// Enumeration 0, 1, -1, 2, -2, ... of the integers.
pub fn integer_enumeration() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..).flat_map(|n| [n, -n]))
}
