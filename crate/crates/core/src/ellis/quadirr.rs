//! Exact arithmetic in `Q(α)`, `α = (√5 − 1)/2`, the root of `x² + x − 1`
//! in `(0, 1)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `α` to double precision, used only to seed exact floor computations.
const ALPHA_F64: f64 = 0.618_033_988_749_894_9;

/// The number `p + qα`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    pub p: BigRational,
    pub q: BigRational,
}

impl QuadIrr {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        QuadIrr { p, q }
    }

    pub fn from_ints(p: i64, q: i64) -> Self {
        QuadIrr::new(BigRational::from_integer(p.into()), BigRational::from_integer(q.into()))
    }

    /// `p_num/p_den + (q_num/q_den)α`. Panics on a zero denominator.
    pub fn from_fracs(p_num: i64, p_den: i64, q_num: i64, q_den: i64) -> Self {
        QuadIrr::new(
            BigRational::new(p_num.into(), p_den.into()),
            BigRational::new(q_num.into(), q_den.into()),
        )
    }

    pub fn zero() -> Self {
        QuadIrr::from_ints(0, 0)
    }

    pub fn one() -> Self {
        QuadIrr::from_ints(1, 0)
    }

    pub fn alpha() -> Self {
        QuadIrr::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn sign(&self) -> i8 {
        qi_sign(self)
    }

    /// Approximate value; never used for decisions.
    pub fn to_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(0.0) + self.q.to_f64().unwrap_or(0.0) * ALPHA_F64
    }

    pub fn floor(&self) -> BigInt {
        let est = self.to_f64().floor();
        let mut k = if est.is_finite() {
            BigInt::from(est as i64)
        } else {
            BigInt::zero()
        };
        while (self - &QuadIrr::integer(k.clone())).sign() < 0 {
            k -= 1;
        }
        while (self - &QuadIrr::integer(&k + 1)).sign() >= 0 {
            k += 1;
        }
        k
    }

    /// Reduction mod 1 into `[0, 1)`.
    pub fn fract(&self) -> QuadIrr {
        self - &QuadIrr::integer(self.floor())
    }

    /// Membership in the subgroup `Z + Zα` (both coordinates integral).
    pub fn in_a(&self) -> bool {
        self.p.is_integer() && self.q.is_integer()
    }

    fn integer(k: BigInt) -> QuadIrr {
        QuadIrr::new(BigRational::from_integer(k), BigRational::zero())
    }
}

/// Exact sign of `p + qα`. Writing `p + qα = (a + b√5)/2` with `a = 2p − q`,
/// `b = q`, the sign follows from the signs of `a`, `b` and a comparison of
/// `a²` with `5b²`.
pub fn qi_sign(x: &QuadIrr) -> i8 {
    let two = BigRational::from_integer(2.into());
    let a = &two * &x.p - &x.q;
    let b = x.q.clone();
    let sa = signum(&a);
    let sb = signum(&b);
    if sa == 0 || sb == 0 || sa == sb {
        return if sa != 0 { sa } else { sb };
    }
    // Opposite signs: the term of larger magnitude wins.
    let five = BigRational::from_integer(5.into());
    match (&a * &a).cmp(&(five * &b * &b)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => unreachable!("√5 is irrational"),
    }
}

fn signum(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Ord for QuadIrr {
    fn cmp(&self, other: &Self) -> Ordering {
        qi_sign(&(self - other)).cmp(&0)
    }
}

impl PartialOrd for QuadIrr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &QuadIrr {
    type Output = QuadIrr;
    fn add(self, o: &QuadIrr) -> QuadIrr {
        QuadIrr::new(&self.p + &o.p, &self.q + &o.q)
    }
}

impl Sub for &QuadIrr {
    type Output = QuadIrr;
    fn sub(self, o: &QuadIrr) -> QuadIrr {
        QuadIrr::new(&self.p - &o.p, &self.q - &o.q)
    }
}

impl Neg for &QuadIrr {
    type Output = QuadIrr;
    fn neg(self) -> QuadIrr {
        QuadIrr::new(-&self.p, -&self.q)
    }
}

/// Uses `α² = 1 − α`.
impl Mul for &QuadIrr {
    type Output = QuadIrr;
    fn mul(self, o: &QuadIrr) -> QuadIrr {
        let qq = &self.q * &o.q;
        QuadIrr::new(&self.p * &o.p + &qq, &self.p * &o.q + &self.q * &o.p - qq)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadIrr {
            type Output = QuadIrr;
            fn $m(self, o: QuadIrr) -> QuadIrr {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.p),
            (true, false) if self.q.is_one() => write!(f, "α"),
            (true, false) => write!(f, "{}α", self.q),
            (false, false) if self.q.is_negative() => write!(f, "{} - {}α", self.p, -&self.q),
            (false, false) => write!(f, "{} + {}α", self.p, self.q),
        }
    }
}
