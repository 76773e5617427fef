//! Decimal-precision contexts and the scalar type built on them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::ops::{CompleteRound, NegAssign, Pow};
use rug::{Assign, Float};
use serde::{Serialize, Serializer};

use super::{PrecisionError, MIN_DIGITS};

const LOG2_10: f64 = 3.321928094887362;
const LOG10_2: f64 = 0.30102999566398119;

/// A working precision expressed in significant decimal digits.
///
/// Scalars created under a context carry exactly that precision through every
/// operation. Mixing scalars from different contexts panics; the solver never
/// converts precisions implicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self, PrecisionError> {
        if digits < MIN_DIGITS {
            return Err(PrecisionError::TooFewDigits(digits));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision backing this context. A few guard bits on top of
    /// digits*log2(10) so that `digits` decimal digits are always faithful.
    pub fn bits(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    pub fn zero(&self) -> BigScalar {
        BigScalar {
            value: Float::new(self.bits()),
            digits: self.digits,
        }
    }

    pub fn one(&self) -> BigScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> BigScalar {
        BigScalar {
            value: Float::with_val(self.bits(), v),
            digits: self.digits,
        }
    }

    pub fn from_u64(&self, v: u64) -> BigScalar {
        BigScalar {
            value: Float::with_val(self.bits(), v),
            digits: self.digits,
        }
    }

    /// Exact conversion; every f64 is representable in any context (>= 53 bits).
    pub fn from_f64(&self, v: f64) -> BigScalar {
        BigScalar {
            value: Float::with_val(self.bits(), v),
            digits: self.digits,
        }
    }

    /// num/den rounded once at context precision.
    pub fn from_ratio(&self, num: i64, den: i64) -> BigScalar {
        let n = Float::with_val(self.bits(), num);
        BigScalar {
            value: n / den,
            digits: self.digits,
        }
    }

    /// Parse a decimal scientific-notation literal, rounding to context
    /// precision. Rejects non-finite and non-numeric input.
    pub fn parse(&self, s: &str) -> Result<BigScalar, PrecisionError> {
        let trimmed = s.trim();
        let incomplete = Float::parse(trimmed).map_err(|e| PrecisionError::Parse {
            input: s.to_owned(),
            reason: e.to_string(),
        })?;
        let value = Float::with_val(self.bits(), incomplete);
        if !value.is_finite() {
            return Err(PrecisionError::NonFinite(s.to_owned()));
        }
        Ok(BigScalar {
            value,
            digits: self.digits,
        })
    }
}

pub(crate) fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 4
}

/// Decimal digits needed so that serialize-then-parse is the identity at a
/// given binary precision.
fn roundtrip_digits(bits: u32) -> usize {
    (bits as f64 * LOG10_2).ceil() as usize + 2
}

/// A real number at fixed decimal working precision.
///
/// Arithmetic is correctly rounded (nearest-even) at the operand context and
/// therefore deterministic. NaN is never produced by solver code paths;
/// comparisons panic on NaN rather than order it.
#[derive(Debug, Clone)]
pub struct BigScalar {
    value: Float,
    digits: u32,
}

impl BigScalar {
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext { digits: self.digits }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.value.is_sign_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn abs(&self) -> BigScalar {
        let mut r = self.clone();
        r.value.abs_mut();
        r
    }

    pub fn square(&self) -> BigScalar {
        let mut r = self.context().zero();
        r.value.assign(self.value.square_ref());
        r
    }

    pub fn sqrt(&self) -> BigScalar {
        let mut r = self.context().zero();
        r.value.assign(self.value.sqrt_ref());
        r
    }

    /// 1/sqrt(self); the hot path of inverse-multiquadric evaluation.
    pub fn recip_sqrt(&self) -> BigScalar {
        let mut r = self.context().zero();
        r.value.assign(self.value.recip_sqrt_ref());
        r
    }

    pub fn recip(&self) -> BigScalar {
        let mut r = self.context().zero();
        r.value.assign(self.value.recip_ref());
        r
    }

    pub fn exp(&self) -> BigScalar {
        let mut r = self.context().zero();
        r.value.assign(self.value.exp_ref());
        r
    }

    pub fn powi(&self, n: i32) -> BigScalar {
        let mut r = self.context().zero();
        r.value.assign(self.value.pow(n).complete(self.value.prec()));
        r
    }

    /// self^exponent with a real exponent (requires self > 0).
    pub fn pow(&self, exponent: &BigScalar) -> BigScalar {
        self.check_ctx(exponent);
        let mut r = self.context().zero();
        r.value
            .assign(Pow::pow(&self.value, &exponent.value).complete(self.value.prec()));
        r
    }

    /// Smallest integer >= self, exact.
    pub fn ceil_i64(&self) -> i64 {
        let mut c = self.value.clone();
        c.ceil_mut();
        c.to_integer()
            .expect("finite value has an integer ceiling")
            .to_i64()
            .expect("ceiling fits in i64")
    }

    /// log10(|self|) as f64, for diagnostics and order-of-magnitude
    /// comparisons only (never feeds back into solver arithmetic).
    /// Returns -inf for zero.
    pub fn log10_abs_f64(&self) -> f64 {
        if self.value.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mut t = self.value.clone();
        t.abs_mut();
        t.log10_mut();
        t.to_f64()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// In-place: self = a * b, rounded once at context precision.
    /// Allocation-free; used by the factorization inner loops.
    pub fn assign_mul(&mut self, a: &BigScalar, b: &BigScalar) {
        a.check_ctx(b);
        a.check_ctx(self);
        self.value.assign(&a.value * &b.value);
    }

    /// In-place: self = a + b.
    pub fn assign_add(&mut self, a: &BigScalar, b: &BigScalar) {
        a.check_ctx(b);
        a.check_ctx(self);
        self.value.assign(&a.value + &b.value);
    }

    /// In-place: self = a - b.
    pub fn assign_sub(&mut self, a: &BigScalar, b: &BigScalar) {
        a.check_ctx(b);
        a.check_ctx(self);
        self.value.assign(&a.value - &b.value);
    }

    /// In-place: self = a, reusing self's allocation.
    pub fn assign_from(&mut self, a: &BigScalar) {
        a.check_ctx(self);
        self.value.assign(&a.value);
    }

    /// In-place square root.
    pub fn sqrt_mut(&mut self) {
        self.value.sqrt_mut();
    }

    /// In-place 1/sqrt(self).
    pub fn recip_sqrt_mut(&mut self) {
        self.value.recip_sqrt_mut();
    }

    pub fn neg_mut(&mut self) {
        self.value.neg_assign();
    }

    /// |self| cmp |other|, exact.
    pub fn cmp_abs(&self, other: &BigScalar) -> Ordering {
        self.check_ctx(other);
        self.value
            .cmp_abs(&other.value)
            .expect("NaN cannot appear in solver scalars")
    }

    pub fn max(&self, other: &BigScalar) -> BigScalar {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Full-precision decimal scientific notation; parsing the result back
    /// under the same context recovers the value exactly.
    pub fn to_decimal_string(&self) -> String {
        debug_assert!(self.value.is_finite());
        if self.value.is_zero() {
            return "0".to_owned();
        }
        let (neg, digits, exp) = self
            .value
            .to_sign_string_exp(10, Some(roundtrip_digits(self.value.prec())));
        let exp = exp.expect("nonzero finite value has an exponent");
        // to_sign_string_exp yields 0.DDDD * 10^exp; rewrite as D.DDDe(exp-1)
        // and drop trailing zeros from the fraction.
        let digits = digits.trim_end_matches('0');
        let digits = if digits.is_empty() { "0" } else { digits };
        let mut out = String::with_capacity(digits.len() + 12);
        if neg {
            out.push('-');
        }
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&(exp - 1).to_string());
        out
    }

    fn check_ctx(&self, other: &BigScalar) {
        assert_eq!(
            self.digits, other.digits,
            "operation mixes scalars from different precision contexts ({} vs {} digits)",
            self.digits, other.digits
        );
    }

    fn binary(&self, other: &BigScalar, f: impl FnOnce(&mut Float, &Float)) -> BigScalar {
        self.check_ctx(other);
        let mut r = self.clone();
        f(&mut r.value, &other.value);
        r
    }
}

impl fmt::Display for BigScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for BigScalar {
    fn eq(&self, other: &Self) -> bool {
        self.check_ctx(other);
        self.value == other.value
    }
}

impl Eq for BigScalar {}

impl PartialOrd for BigScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check_ctx(other);
        self.value
            .partial_cmp(&other.value)
            .expect("NaN cannot appear in solver scalars")
    }
}

impl Serialize for BigScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<&BigScalar> for &BigScalar {
            type Output = BigScalar;
            fn $method(self, rhs: &BigScalar) -> BigScalar {
                self.binary(rhs, |a, b| a.$assign_method(b))
            }
        }

        impl $trait<&BigScalar> for BigScalar {
            type Output = BigScalar;
            fn $method(mut self, rhs: &BigScalar) -> BigScalar {
                self.$assign_method(rhs);
                self
            }
        }

        impl $assign_trait<&BigScalar> for BigScalar {
            fn $assign_method(&mut self, rhs: &BigScalar) {
                self.check_ctx(rhs);
                self.value.$assign_method(&rhs.value);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for BigScalar {
    type Output = BigScalar;
    fn neg(mut self) -> BigScalar {
        self.value.neg_assign();
        self
    }
}

impl Neg for &BigScalar {
    type Output = BigScalar;
    fn neg(self) -> BigScalar {
        -self.clone()
    }
}
