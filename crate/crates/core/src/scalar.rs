//! Exact rational scalars, factorials, Bernoulli numbers and the path-integral
//! coefficient table `c(k, n)`.
//!
//! Everything here is exact. The two memo tables (Bernoulli numbers and
//! `c(k, n)`) grow on demand behind a lock and are shared by all threads.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("c(k, n) requires k <= n, got k = {k}, n = {n}")]
    Domain { k: usize, n: usize },
    #[error("cannot parse rational number from {0:?}")]
    Parse(String),
}

/// An exact rational number, always in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in an `i64` are stored inline;
/// the representation is canonical, so equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `den > 0`, `num != i64::MIN`.
    Small(i64, i64),
    /// Never holds a value that fits `Small`.
    Big(BigRational),
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn fits(n: &BigInt) -> Option<i64> {
    n.to_i64().filter(|&x| x != i64::MIN)
}

impl Scalar {
    fn from_i128_ratio(n: i128, d: i128) -> Self {
        assert!(d != 0, "zero denominator");
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if d != 1 {
            let g = gcd(n.unsigned_abs(), d as u128) as i128;
            if g > 1 {
                n /= g;
                d /= g;
            }
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) if a != i64::MIN => Scalar(Repr::Small(a, b)),
            _ => Scalar(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (fits(r.numer()), fits(r.denom())) {
            (Some(n), Some(d)) => Scalar(Repr::Small(n, d)),
            _ => Scalar(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn zero() -> Self {
        Scalar(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Scalar(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_i128_ratio(n as i128, 1)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    /// `num / den`, reduced. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_i128_ratio(num as i128, den as i128)
    }

    pub fn from_ratio(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// The value as an `i128` if it is an integer that fits.
    pub fn to_i128(&self) -> Option<i128> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n as i128),
            Repr::Small(..) => None,
            Repr::Big(r) => r.is_integer().then(|| r.numer().to_i128()).flatten(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128_ratio(*d as i128, *n as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
        }
    }

    /// Multiplication by `(-1)^odd`.
    pub fn signed(self, odd: bool) -> Self {
        if odd {
            -self
        } else {
            self
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_ref(&self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, 1), Repr::Small(b, 1)) => Self::from_i128_ratio(*a as i128 + *b as i128, 1),
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Self::from_i128_ratio(a * d + c * b, b * d)
            }
            _ => Self::from_big(self.to_big() + rhs.to_big()),
        }
    }

    fn sub_ref(&self, rhs: &Scalar) -> Scalar {
        self.add_ref(&-rhs)
    }

    fn mul_ref(&self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Self::from_i128_ratio(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::from_big(self.to_big() * rhs.to_big()),
        }
    }

    fn div_ref(&self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        self.mul_ref(&rhs.recip())
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::from_int(n as i64)
    }
}

impl From<i128> for Scalar {
    fn from(n: i128) -> Self {
        Scalar::from_i128_ratio(n, 1)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::from_ratio(n, d))
            }
            None => Ok(Scalar::from_bigint(t.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$imp(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$imp(&rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(n, d) => Scalar(Repr::Small(-n, *d)),
            Repr::Big(r) => Scalar::from_big(-r),
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(rhs);
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = self.add_ref(&rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = self.sub_ref(rhs);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = self.mul_ref(rhs);
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Sign convention for the first Bernoulli number. All other `b_n` agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BernoulliConvention {
    /// `b_1 = -1/2`, generating function `t / (e^t - 1)`.
    MinusHalf,
    /// `b_1 = +1/2`, generating function `t / (1 - e^{-t})`.
    PlusHalf,
}

impl BernoulliConvention {
    pub const ALL: [BernoulliConvention; 2] =
        [BernoulliConvention::MinusHalf, BernoulliConvention::PlusHalf];

    pub fn name(self) -> &'static str {
        match self {
            BernoulliConvention::MinusHalf => "b1 = -1/2",
            BernoulliConvention::PlusHalf => "b1 = +1/2",
        }
    }
}

/// The convention the path-integral engine was calibrated to.
pub const BERNOULLI_CONVENTION: BernoulliConvention = BernoulliConvention::MinusHalf;

// b_n with b_1 = -1/2.
static BERNOULLI: RwLock<Vec<Scalar>> = RwLock::new(Vec::new());

fn bernoulli_minus(n: usize) -> Scalar {
    if let Some(b) = BERNOULLI.read().expect("bernoulli table poisoned").get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().expect("bernoulli table poisoned");
    if table.is_empty() {
        table.push(Scalar::one());
    }
    // sum_{j=0}^{m} C(m+1, j) b_j = 0  for m >= 1
    while table.len() <= n {
        let m = table.len() as u32;
        let s: Scalar = (0..m)
            .map(|j| Scalar::from(binomial(m + 1, j)) * &table[j as usize])
            .sum();
        let b = -s / Scalar::from_int(m as i64 + 1);
        table.push(b);
    }
    table[n].clone()
}

/// `b_n` under the calibrated convention.
pub fn bernoulli(n: usize) -> Scalar {
    bernoulli_with(n, BERNOULLI_CONVENTION)
}

pub fn bernoulli_with(n: usize, convention: BernoulliConvention) -> Scalar {
    let b = bernoulli_minus(n);
    match convention {
        BernoulliConvention::PlusHalf if n == 1 => -b,
        _ => b,
    }
}

type CTable = Vec<Vec<Scalar>>;
static C_TABLES: RwLock<[CTable; 2]> = RwLock::new([Vec::new(), Vec::new()]);

fn slot(convention: BernoulliConvention) -> usize {
    match convention {
        BernoulliConvention::MinusHalf => 0,
        BernoulliConvention::PlusHalf => 1,
    }
}

/// `c(k, n) = sum_{k <= i <= n} b_{n-i} / (i! (n-i)!)` under the calibrated
/// Bernoulli convention.
pub fn c_coeff(k: usize, n: usize) -> Result<Scalar, ScalarError> {
    c_coeff_with(k, n, BERNOULLI_CONVENTION)
}

pub fn c_coeff_with(
    k: usize,
    n: usize,
    convention: BernoulliConvention,
) -> Result<Scalar, ScalarError> {
    if k > n {
        return Err(ScalarError::Domain { k, n });
    }
    let s = slot(convention);
    if let Some(row) = C_TABLES.read().expect("c table poisoned")[s].get(n) {
        return Ok(row[k].clone());
    }
    let mut tables = C_TABLES.write().expect("c table poisoned");
    let table = &mut tables[s];
    while table.len() <= n {
        let m = table.len();
        // Suffix sums over i = k..=m.
        let mut row = vec![Scalar::zero(); m + 1];
        let mut acc = Scalar::zero();
        for i in (0..=m).rev() {
            let denom = factorial(i as u32) * factorial((m - i) as u32);
            acc += &(bernoulli_with(m - i, convention) / Scalar::from(denom));
            row[i] = acc.clone();
        }
        table.push(row);
    }
    Ok(table[n][k].clone())
}
