//! The translation cascade of `Z` on its two-point compactification and its
//! enveloping semigroup `{Trans(n)} ∪ {LimMinus, LimPlus}`.

use std::fmt;

use super::PointwiseSystem;

/// A point of `Z ∪ {−∞, +∞}`; the derived order is the natural one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Fin(n) => write!(f, "{n}"),
            ExtInt::PosInf => write!(f, "+inf"),
        }
    }
}

/// An element of the cascade's enveloping semigroup. The derived order
/// `LimMinus < Trans(n) < LimPlus` is the pointwise one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CascadeElt {
    LimMinus,
    Trans(i64),
    LimPlus,
}

impl fmt::Display for CascadeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CascadeElt::LimMinus => write!(f, "LimMinus"),
            CascadeElt::Trans(n) => write!(f, "Trans({n})"),
            CascadeElt::LimPlus => write!(f, "LimPlus"),
        }
    }
}

/// Panics if a finite image overflows `i64`.
pub fn cascade_apply(e: CascadeElt, x: ExtInt) -> ExtInt {
    match (e, x) {
        (_, ExtInt::NegInf) | (_, ExtInt::PosInf) => x,
        (CascadeElt::Trans(n), ExtInt::Fin(m)) => ExtInt::Fin(m.checked_add(n).expect("translation overflows i64")),
        (CascadeElt::LimMinus, ExtInt::Fin(_)) => ExtInt::NegInf,
        (CascadeElt::LimPlus, ExtInt::Fin(_)) => ExtInt::PosInf,
    }
}

/// `u ∘ v` (apply `v` first). A limit element on the right sends `Z` to an
/// endpoint, which every element fixes; a limit element on the left
/// absorbs any translation. Panics on `i64` overflow.
pub fn cascade_compose(u: CascadeElt, v: CascadeElt) -> CascadeElt {
    match (u, v) {
        (_, CascadeElt::LimMinus | CascadeElt::LimPlus) => v,
        (CascadeElt::LimMinus | CascadeElt::LimPlus, CascadeElt::Trans(_)) => u,
        (CascadeElt::Trans(m), CascadeElt::Trans(n)) => {
            CascadeElt::Trans(m.checked_add(n).expect("translation overflows i64"))
        }
    }
}

/// The cascade as a pointwise system.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cascade;

impl PointwiseSystem for Cascade {
    type Elt = CascadeElt;
    type Point = ExtInt;

    fn apply(&self, s: &CascadeElt, x: &ExtInt) -> ExtInt {
        cascade_apply(*s, *x)
    }

    fn compose(&self, u: &CascadeElt, v: &CascadeElt) -> CascadeElt {
        cascade_compose(*u, *v)
    }

    fn point_le(&self, a: &ExtInt, b: &ExtInt) -> bool {
        a <= b
    }
}

/// `Z ∩ [−r, r]` together with both endpoints, in increasing order.
pub fn cascade_window(r: i64) -> Vec<ExtInt> {
    std::iter::once(ExtInt::NegInf)
        .chain((-r..=r).map(ExtInt::Fin))
        .chain(std::iter::once(ExtInt::PosInf))
        .collect()
}

/// `{Trans(n) : |n| <= r} ∪ {LimMinus, LimPlus}`.
pub fn cascade_elements(r: i64) -> Vec<CascadeElt> {
    std::iter::once(CascadeElt::LimMinus)
        .chain((-r..=r).map(CascadeElt::Trans))
        .chain(std::iter::once(CascadeElt::LimPlus))
        .collect()
}
