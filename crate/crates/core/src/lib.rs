//! Exact finite machinery for circular orders and order-preserving dynamics.
//!
//! The crate covers finite linear and circular orders ([`orders`]),
//! c-order-preserving maps ([`cop`]), lexicographic products and fibered
//! lifts ([`lex`]), orderability decisions for groups ([`groups`]),
//! cycle-cover inverse systems ([`inverse_limit`]) and enveloping semigroups
//! at desk scale ([`ellis`]). Everything is exact: infinite objects are only
//! touched through finite truncations or budgeted comparison oracles.

pub mod cli;
pub mod cop;
pub mod ellis;
pub mod error;
pub mod groups;
pub mod inverse_limit;
pub mod io;
pub mod lex;
pub mod oracle;
pub mod orders;
pub mod selftest;

pub use error::{Error, Result};
pub use orders::{CircOrder, LinOrder, TernaryRelation};

use std::fmt::Debug;

/// Point identifiers. Only the label order is used, and only to pick
/// canonical representatives.
pub trait Label: Ord + Clone + Debug {}
impl<T: Ord + Clone + Debug> Label for T {}

/// Default bound on the number of points a verifier accepts.
pub const DEFAULT_MAX_SIZE: usize = 64;
/// Default bound on raw candidates an exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;
/// Environment variable overriding [`DEFAULT_MAX_SIZE`].
pub const MAX_SIZE_ENV: &str = "CYCLORD_MAX_SIZE";

/// Size and enumeration bounds shared by the verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_size: usize,
    pub enumeration_budget: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_size: DEFAULT_MAX_SIZE,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

impl Bounds {
    /// Defaults, with `CYCLORD_MAX_SIZE` applied when it parses.
    pub fn from_env() -> Self {
        let mut bounds = Bounds::default();
        if let Some(n) = std::env::var(MAX_SIZE_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            bounds.max_size = n;
        }
        bounds
    }

    pub(crate) fn check_size(&self, size: usize) -> Result<()> {
        if size > self.max_size {
            return Err(Error::SizeExceeded {
                size,
                max: self.max_size,
            });
        }
        Ok(())
    }

    pub(crate) fn check_budget(&self, needed: u128) -> Result<()> {
        if needed > self.enumeration_budget as u128 {
            return Err(Error::BudgetExceeded {
                needed,
                budget: self.enumeration_budget,
            });
        }
        Ok(())
    }
}

/// Outcome of a property check that either holds or fails with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
        }
    }
}
