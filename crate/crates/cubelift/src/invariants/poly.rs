use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::cyclotomic::Zeta8;

/// Integer Laurent polynomial in the bracket variable A. Only nonzero
/// coefficients are stored, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad polynomial term '{0}'")]
pub struct PolyParseError(pub String);

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds from (exponent, coefficient) pairs; repeated exponents add up.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The image under A ↦ A⁻¹.
    pub fn mirror(&self) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect() }
    }

    /// Multiplies by A^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact value at A = ζ₈ = exp(iπ/4).
    pub fn eval_zeta8(&self) -> Zeta8 {
        let mut out = Zeta8::zero();
        for (&e, c) in &self.terms {
            out = out + Zeta8::power(e).scale(c);
        }
        out
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;

            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Writes `coeff*A^exp` terms with descending exponents joined by `+`,
/// e.g. `-1*A^-4+1*A^-12`; the zero polynomial is `0`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}*A^{e}")?;
        }
        Ok(())
    }
}

impl FromStr for LaurentPolynomial {
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, PolyParseError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        // Split on '+' that starts a new term (not the sign after '^').
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut pieces = Vec::new();
        for i in 0..bytes.len() {
            if bytes[i] == b'+' && i > 0 && bytes[i - 1] != b'^' {
                pieces.push(&s[start..i]);
                start = i + 1;
            }
        }
        pieces.push(&s[start..]);
        for piece in pieces {
            let bad = || PolyParseError(piece.to_string());
            let (c, e) = piece.trim().split_once("*A^").ok_or_else(bad)?;
            let c: BigInt = c.parse().map_err(|_| bad())?;
            let e: i64 = e.parse().map_err(|_| bad())?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().copied())
    }

    #[test]
    fn canonical_form() {
        let a = p(&[(2, 1), (2, -1), (0, 3)]);
        assert_eq!(a, p(&[(0, 3)]));
        assert!((&a - &a).is_zero());
        assert!(LaurentPolynomial::one().is_one());
    }

    #[test]
    fn arithmetic() {
        let d = p(&[(2, -1), (-2, -1)]);
        let d2 = &d * &d;
        assert_eq!(d2, p(&[(4, 1), (0, 2), (-4, 1)]));
        assert_eq!(d.mirror(), d);
        assert_eq!(p(&[(3, 2)]).shift(-5), p(&[(-2, 2)]));
        assert_eq!(d.pow(2), d2);
    }

    #[test]
    fn text_format() {
        let q = p(&[(-4, -1), (-12, 1)]);
        assert_eq!(q.to_string(), "-1*A^-4+1*A^-12");
        assert_eq!("-1*A^-4+1*A^-12".parse::<LaurentPolynomial>().unwrap(), q);
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
        assert_eq!("0".parse::<LaurentPolynomial>().unwrap(), LaurentPolynomial::zero());
        let r = p(&[(5, 7), (0, -3), (-2, 1)]);
        assert_eq!(r.to_string().parse::<LaurentPolynomial>().unwrap(), r);
        assert!("3*B^2".parse::<LaurentPolynomial>().is_err());
    }
}
