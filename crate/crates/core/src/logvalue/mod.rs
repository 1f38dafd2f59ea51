//! Exact elements of the rational span of `{log p : p prime}`.
//!
//! Every height, weight and roof value in this crate is a `LogValue`.
//! Because the logarithms of distinct primes are linearly independent over
//! the rationals, equality is equality of coefficient maps and never needs
//! floating point. Ordering does: a nonzero value is bracketed by
//! fixed-point enclosures of increasing precision until its sign is known.

mod approx;

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{format_rational, is_prime, parse_rational, valuations, Q};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_CAP: u32 = 16384;
const START_PRECISION: u32 = 64;

thread_local! {
    static PRECISION_CAP: Cell<u32> = const { Cell::new(DEFAULT_PRECISION_CAP) };
}

/// Current cap (in bits) for sign determination on this thread.
pub fn precision_cap() -> u32 {
    PRECISION_CAP.with(Cell::get)
}

/// Runs `f` with a different sign-determination cap on the current thread.
pub fn with_precision_cap<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    struct Restore(u32);
    impl Drop for Restore {
        fn drop(&mut self) {
            PRECISION_CAP.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(PRECISION_CAP.with(|c| c.replace(bits.max(START_PRECISION))));
    f()
}

/// `Σ_p c_p · log p` with rational coefficients, stored sparsely and sorted
/// by prime. No stored coefficient is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LogValue {
    terms: Vec<(u64, Q)>,
}

impl LogValue {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `log p` for a prime `p`.
    pub fn log_prime(p: u64) -> Result<Self> {
        Self::from_terms([(p, Q::one())])
    }

    /// Builds a value from `(prime, coefficient)` pairs. Repeated primes
    /// are summed; zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Q)>) -> Result<Self> {
        let mut out: Vec<(u64, Q)> = Vec::new();
        for (p, c) in terms {
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            out.push((p, c));
        }
        out.sort_by_key(|(p, _)| *p);
        let mut merged: Vec<(u64, Q)> = Vec::with_capacity(out.len());
        for (p, c) in out {
            match merged.last_mut() {
                Some((lp, lc)) if *lp == p => *lc += c,
                _ => merged.push((p, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Ok(Self { terms: merged })
    }

    /// `log |x|` for a nonzero rational, expanded over its prime factors.
    pub fn log_abs(x: &Q) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::invalid("log of zero"));
        }
        let terms = valuations(x)?
            .into_iter()
            .map(|(p, e)| (p, Q::from_integer(BigInt::from(e))))
            .collect();
        Ok(Self { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u64, Q)] {
        &self.terms
    }

    pub fn coefficient(&self, p: u64) -> Q {
        self.terms
            .binary_search_by_key(&p, |(q, _)| *q)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Q::zero())
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, c)| (*p, c * k)).collect(),
        }
    }

    /// Division by a nonzero rational.
    pub fn div_rational(&self, k: &Q) -> Self {
        assert!(!k.is_zero(), "division of a LogValue by zero");
        self.scale(&k.recip())
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if sign { b[j].1.clone() } else { -b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if sign { &a[i].1 + &b[j].1 } else { &a[i].1 - &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { terms: out }
    }

    /// Integer enclosure `[lo, hi]` of `value · 2^bits`.
    fn enclosure(&self, bits: u32) -> (BigInt, BigInt) {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (p, c) in &self.terms {
            let e = approx::ln_prime(*p, bits);
            let (n, d) = (c.numer(), c.denom());
            let a = n * (&e.value - &e.error);
            let b = n * (&e.value + &e.error);
            let (small, large) = if n.is_negative() { (b, a) } else { (a, b) };
            lo += small.div_floor(d);
            hi += large.div_ceil(d);
        }
        (lo, hi)
    }

    /// Sign of the real number `Σ c_p log p`, decided by doubling the
    /// working precision up to the thread's precision cap.
    pub fn signum(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(sign) = self.float_signum() {
            return Ok(sign);
        }
        let cap = precision_cap();
        let mut bits = START_PRECISION.min(cap);
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if bits >= cap {
                return Err(Error::PrecisionExhausted { bits });
            }
            bits = bits.saturating_mul(2).min(cap);
        }
    }

    /// Double-precision value together with `Σ |c_p log p|`, which bounds
    /// the rounding error of the value up to a small relative factor.
    pub fn approx(&self) -> (f64, f64) {
        let mut sum = 0.0f64;
        let mut mag = 0.0f64;
        for (p, c) in &self.terms {
            let t = c.to_f64().unwrap_or(f64::NAN) * (*p as f64).ln();
            sum += t;
            mag += t.abs();
        }
        (sum, mag)
    }

    /// Sign from a double-precision sum, when the sum clears its error
    /// bound by a wide margin.
    fn float_signum(&self) -> Option<Ordering> {
        let mut sum = 0.0f64;
        let mut mag = 0.0f64;
        for (p, c) in &self.terms {
            let t = c.to_f64()? * (*p as f64).ln();
            if !t.is_finite() {
                return None;
            }
            sum += t;
            mag += t.abs();
        }
        let slack = mag * 1e-12;
        if !mag.is_normal() || !slack.is_normal() {
            return None;
        }
        if sum > slack {
            Some(Ordering::Greater)
        } else if sum < -slack {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Exact comparison of the real values.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        if self == other {
            return Ok(Ordering::Equal);
        }
        (self - other).signum()
    }

    pub fn is_negative(&self) -> Result<bool> {
        Ok(self.signum()? == Ordering::Less)
    }

    /// Largest element of a nonempty sequence.
    pub fn max_of<'a>(values: impl IntoIterator<Item = &'a LogValue>) -> Result<LogValue> {
        let mut best: Option<&LogValue> = None;
        for v in values {
            best = match best {
                Some(b) if b.compare(v)? != Ordering::Less => Some(b),
                _ => Some(v),
            };
        }
        best.cloned().ok_or(Error::Empty("maximum of no values"))
    }

    /// Smallest element of a nonempty sequence.
    pub fn min_of<'a>(values: impl IntoIterator<Item = &'a LogValue>) -> Result<LogValue> {
        let mut best: Option<&LogValue> = None;
        for v in values {
            best = match best {
                Some(b) if b.compare(v)? != Ordering::Greater => Some(b),
                _ => Some(v),
            };
        }
        best.cloned().ok_or(Error::Empty("minimum of no values"))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| c.to_f64().unwrap_or(f64::NAN) * (*p as f64).ln())
            .fold(0.0, |a, b| a + b)
    }

    /// Decimal rendering correct to within one unit in the last of
    /// `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32;
        let (lo, hi) = self.enclosure(bits);
        let ten = num_traits::pow(BigInt::from(10), digits);
        let scale = BigInt::one() << bits;
        let twice = (lo + hi) * &ten;
        let mid = Q::new(twice, scale * 2).round().to_integer();
        let neg = mid.is_negative();
        let mag = mid.abs();
        let (int, frac) = mag.div_rem(&ten);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>width$}", width = digits)
        }
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "log({p})")?;
            } else {
                write!(f, "{}*log({p})", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogValue({self})")
    }
}

impl FromStr for LogValue {
    type Err = Error;

    /// Accepts the `Display` syntax, e.g. `"2*log(2) - 1/3*log(5)"` or `"0"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid log-value literal {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let neg = rest.starts_with('-');
            rest = rest.strip_prefix(['+', '-']).unwrap_or(rest);
            let end = rest[1..].find(['+', '-']).map_or(rest.len(), |i| i + 1);
            let (term, tail) = rest.split_at(end);
            rest = tail;
            let (coef, log) = match term.split_once('*') {
                Some((c, l)) => (parse_rational(c)?, l),
                None => (Q::one(), term),
            };
            let p: u64 = log
                .strip_prefix("log(")
                .and_then(|t| t.strip_suffix(')'))
                .and_then(|t| t.parse().ok())
                .ok_or_else(bad)?;
            terms.push((p, if neg { -coef } else { coef }));
        }
        Self::from_terms(terms)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $sign:expr) => {
        impl $trait<&LogValue> for &LogValue {
            type Output = LogValue;
            fn $method(self, rhs: &LogValue) -> LogValue {
                self.combine(rhs, $sign)
            }
        }
        impl $trait<LogValue> for LogValue {
            type Output = LogValue;
            fn $method(self, rhs: LogValue) -> LogValue {
                self.combine(&rhs, $sign)
            }
        }
        impl $trait<&LogValue> for LogValue {
            type Output = LogValue;
            fn $method(self, rhs: &LogValue) -> LogValue {
                self.combine(rhs, $sign)
            }
        }
    };
}

binop!(Add, add, true);
binop!(Sub, sub, false);

impl AddAssign<&LogValue> for LogValue {
    fn add_assign(&mut self, rhs: &LogValue) {
        *self = self.combine(rhs, true);
    }
}

impl SubAssign<&LogValue> for LogValue {
    fn sub_assign(&mut self, rhs: &LogValue) {
        *self = self.combine(rhs, false);
    }
}

impl Neg for &LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            terms: self.terms.iter().map(|(p, c)| (*p, -c.clone())).collect(),
        }
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        -&self
    }
}

impl std::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> Self {
        iter.fold(LogValue::zero(), |acc, x| acc + x)
    }
}
