use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Element of Z[ζ₈] as c0 + c1·ζ + c2·ζ² + c3·ζ³ with ζ⁴ = −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Zeta8 {
    pub c: [BigInt; 4],
}

impl Zeta8 {
    pub fn zero() -> Self {
        Zeta8 { c: Default::default() }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero();
        z.c[0] = v.into();
        z
    }

    /// ζ^e for any integer e.
    pub fn power(e: i64) -> Self {
        let k = e.rem_euclid(8) as usize;
        let mut z = Self::zero();
        if k < 4 {
            z.c[k] = BigInt::from(1);
        } else {
            z.c[k - 4] = BigInt::from(-1);
        }
        z
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Zeta8 { c: self.c.clone().map(|x| x * k) }
    }

    /// Complex conjugate: ζ ↦ ζ⁻¹ = −ζ³.
    pub fn conj(&self) -> Self {
        let [a0, a1, a2, a3] = self.c.clone();
        Zeta8 { c: [a0, -a3, -a2, -a1] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.c[1..].iter().all(|x| x.is_zero()).then(|| self.c[0].clone())
    }

    /// |z| when |z|² is a perfect square integer.
    pub fn integer_abs(&self) -> Option<BigInt> {
        let sq = (self * &self.conj()).as_integer()?;
        let root = sq.sqrt();
        (&root * &root == sq && !root.is_negative()).then_some(root)
    }
}

impl Add for Zeta8 {
    type Output = Zeta8;

    fn add(self, rhs: Zeta8) -> Zeta8 {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = rhs.c;
        Zeta8 { c: [a0 + b0, a1 + b1, a2 + b2, a3 + b3] }
    }
}

impl Mul for &Zeta8 {
    type Output = Zeta8;

    fn mul(self, rhs: &Zeta8) -> Zeta8 {
        let mut out = Zeta8::zero();
        for i in 0..4 {
            for j in 0..4 {
                let prod = &self.c[i] * &rhs.c[j];
                let k = i + j;
                if k < 4 {
                    out.c[k] += prod;
                } else {
                    out.c[k - 4] -= prod;
                }
            }
        }
        out
    }
}
