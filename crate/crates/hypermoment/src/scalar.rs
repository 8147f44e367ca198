//! Exact complex scalars with rational real and imaginary parts.
//!
//! `Scalar` is the number type of the whole crate: recurrence coefficients,
//! linearization weights, jet coefficients and moment values are all Gaussian
//! rationals. Arithmetic is exact; equality is decidable field comparison.
//!
//! Text form: `p/q` for real values, `p/q+s/ti` for complex ones, with an
//! optional leading sign on each part and `/1` omitted for integers.
//! Examples: `3`, `-1/2`, `1/2+2/3i`, `-2/3i`, `i`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact Gaussian rational `re + im*i`.
///
/// `BigRational` keeps itself reduced with a positive denominator, so two
/// equal values always have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_integer(BigInt::from(n))
    }

    pub fn from_integer(n: BigInt) -> Self {
        Scalar::new(BigRational::from_integer(n), BigRational::zero())
    }

    /// Real rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "Scalar::from_ratio: zero denominator");
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// Complex rational `(re_num/re_den) + (im_num/im_den) i`.
    pub fn from_ratios(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "Scalar::from_ratios: zero denominator");
        Scalar::new(
            BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The real part, if the value is real.
    pub fn as_real(&self) -> Option<&BigRational> {
        if self.is_real() {
            Some(&self.re)
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|self|^2 = re^2 + im^2`, a rational.
    fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "Scalar::inv: division by zero");
        if self.im.is_zero() {
            return Scalar::new(self.re.recip(), BigRational::zero());
        }
        let n = self.norm_sq();
        Scalar::new(&self.re / &n, -&self.im / &n)
    }

    /// `self^exp` by repeated squaring; `0^0 = 1`.
    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Scalar::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Approximate `f64` rendering of the real and imaginary parts.
    /// Display-only; carries no exactness guarantee.
    pub fn to_f64_parts(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Approximate decimal text, e.g. `0.5` or `0.5-0.25i`. Display-only.
    pub fn to_approx_string(&self) -> String {
        let (re, im) = self.to_f64_parts();
        if im == 0.0 {
            format!("{re}")
        } else if re == 0.0 {
            format!("{im}i")
        } else if im < 0.0 {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

// ---- Operators ----
//
// Reference form carries the implementation; the by-value forms delegate.

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // Real operands are the overwhelmingly common case; skip the
        // imaginary cross terms when they are structurally zero.
        if self.im.is_zero() {
            if rhs.im.is_zero() {
                return Scalar::new(&self.re * &rhs.re, BigRational::zero());
            }
            return Scalar::new(&self.re * &rhs.re, &self.re * &rhs.im);
        }
        if rhs.im.is_zero() {
            return Scalar::new(&self.re * &rhs.re, &self.im * &rhs.re);
        }
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)] // division by multiplicative inverse
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_binop_variants {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop_variants!(Add, add);
forward_binop_variants!(Sub, sub);
forward_binop_variants!(Mul, mul);
forward_binop_variants!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if !rhs.re.is_zero() {
            self.re += &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if !rhs.re.is_zero() {
            self.re -= &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

// ---- Text form ----

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            fmt_rational(&self.re, f)
        } else if self.re.is_zero() {
            fmt_rational(&self.im, f)?;
            write!(f, "i")
        } else {
            fmt_rational(&self.re, f)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
            fmt_rational(&self.im, f)?;
            write!(f, "i")
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

fn parse_error(input: &str, detail: &str) -> Error {
    Error::Parse {
        kind: "scalar",
        input: input.to_string(),
        detail: detail.to_string(),
    }
}

fn parse_rational(part: &str, original: &str) -> Result<BigRational, Error> {
    BigRational::from_str(part)
        .map_err(|e| parse_error(original, &format!("bad rational {part:?}: {e}")))
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(parse_error(s, "empty input"));
        }
        if let Some(body) = compact.strip_suffix('i') {
            // Split a trailing imaginary part off at the last interior sign.
            // Signs are ASCII, so byte positions are char boundaries.
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&i| bytes[i] == b'+' || bytes[i] == b'-');
            match split {
                Some(i) => {
                    let re = parse_rational(&body[..i], s)?;
                    let im_str = &body[i..];
                    let im = parse_imaginary_body(im_str, s)?;
                    Ok(Scalar::new(re, im))
                }
                None => Ok(Scalar::new(BigRational::zero(), parse_imaginary_body(body, s)?)),
            }
        } else {
            Ok(Scalar::new(parse_rational(&compact, s)?, BigRational::zero()))
        }
    }
}

/// The text between a sign (inclusive) and the trailing `i`; bare `i`, `+i`
/// and `-i` mean coefficient one.
fn parse_imaginary_body(body: &str, original: &str) -> Result<BigRational, Error> {
    match body {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        other => parse_rational(other, original),
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
