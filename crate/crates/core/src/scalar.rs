//! Exact coefficient fields.
//!
//! Real protocols use [`Rational`] (arbitrary precision), complex protocols
//! use [`ComplexRational`]. Both implement [`Scalar`], which is the only
//! bound the polynomial and protocol code needs.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::protocol::Sign;

pub type Rational = BigRational;
pub type ComplexRational = Complex<BigRational>;

/// Field tag of a polynomial or protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    Complex,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Real => "real",
            FieldKind::Complex => "complex",
        }
    }
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub trait Scalar:
    Num + Neg<Output = Self> + Clone + Eq + Hash + Debug + Display + Send + Sync + 'static
{
    const FIELD: FieldKind;

    fn from_rational(r: Rational) -> Self;

    /// Branching sign: `<`, `=`, `>` over the reals, `=`, `!=` over the complexes.
    fn branch_sign(&self) -> Sign;

    /// Signs a branch key may contain for this field.
    fn sign_alphabet() -> &'static [Sign];

    /// Number of integers in the serialized coefficient (`num, den` or
    /// `re_num, re_den, im_num, im_den`).
    const PARTS: usize;

    fn to_parts(&self) -> Vec<BigInt>;

    fn from_parts(parts: &[BigInt]) -> Option<Self>;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }
}

fn ratio_from_parts(num: &BigInt, den: &BigInt) -> Option<Rational> {
    if den.is_zero() {
        None
    } else {
        Some(Rational::new(num.clone(), den.clone()))
    }
}

impl Scalar for Rational {
    const FIELD: FieldKind = FieldKind::Real;

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn branch_sign(&self) -> Sign {
        if self.is_zero() {
            Sign::Eq
        } else if self.is_positive() {
            Sign::Gt
        } else {
            Sign::Lt
        }
    }

    fn sign_alphabet() -> &'static [Sign] {
        &[Sign::Lt, Sign::Eq, Sign::Gt]
    }

    const PARTS: usize = 2;

    fn to_parts(&self) -> Vec<BigInt> {
        vec![self.numer().clone(), self.denom().clone()]
    }

    fn from_parts(parts: &[BigInt]) -> Option<Self> {
        match parts {
            [num, den] => ratio_from_parts(num, den),
            _ => None,
        }
    }
}

impl Scalar for ComplexRational {
    const FIELD: FieldKind = FieldKind::Complex;

    fn from_rational(r: Rational) -> Self {
        Complex::new(r, Rational::zero())
    }

    fn branch_sign(&self) -> Sign {
        if self.is_zero() {
            Sign::Eq
        } else {
            Sign::Ne
        }
    }

    fn sign_alphabet() -> &'static [Sign] {
        &[Sign::Eq, Sign::Ne]
    }

    const PARTS: usize = 4;

    fn to_parts(&self) -> Vec<BigInt> {
        vec![
            self.re.numer().clone(),
            self.re.denom().clone(),
            self.im.numer().clone(),
            self.im.denom().clone(),
        ]
    }

    fn from_parts(parts: &[BigInt]) -> Option<Self> {
        match parts {
            [rn, rd, im_n, im_d] => Some(Complex::new(
                ratio_from_parts(rn, rd)?,
                ratio_from_parts(im_n, im_d)?,
            )),
            _ => None,
        }
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn complex(re: Rational, im: Rational) -> ComplexRational {
    Complex::new(re, im)
}

/// Parses `p`, `p/q` or a decimal like `-1.25` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.trim_start().starts_with('-');
        let int = if int == "-" || int.is_empty() { "0" } else { int };
        let whole = BigInt::from_str(int).ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac = Rational::new(BigInt::from_str(frac).ok()?, scale);
        let whole = Rational::from_integer(whole);
        return Some(if negative { whole - frac } else { whole + frac });
    }
    BigInt::from_str(text).ok().map(Rational::from_integer)
}

/// Parses a complex scalar: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, with
/// rational parts written as `p/q`.
pub fn parse_complex(text: &str) -> Option<ComplexRational> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return None;
    }
    let Some(body) = text.strip_suffix('i') else {
        return parse_rational(&text).map(ComplexRational::from_rational);
    };
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !body[..i].ends_with(['e', 'E']))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (parse_rational(&body[..i])?, &body[i..]),
        None => (Rational::zero(), body),
    };
    let im = match im {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Some(Complex::new(re, im))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact dyadic rational equal to a finite `f64`.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| D::Error::custom(format!("invalid rational {text:?}")))
    }
}

/// As [`serde_rational`], for vectors.
pub mod serde_rational_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).ok_or_else(|| D::Error::custom(format!("invalid rational {t:?}"))))
            .collect()
    }
}
