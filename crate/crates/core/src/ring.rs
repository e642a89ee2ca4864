//! The coefficient ring `Z[t]`.
//!
//! Every scalar in the engine lives here: the denominators `a`, `b`, the
//! constants of affine maps and the coefficients of every polynomial. A
//! [`RingElem`] is a dense coefficient vector with no trailing zeros, so
//! structural equality is value equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of `Z[t]`; `coeffs[i]` is the coefficient of `t^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    coeffs: Vec<BigInt>,
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        RingElem::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        RingElem::from_coeffs(vec![n])
    }

    /// Builds an element from low-to-high coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RingElem { coeffs }
    }

    /// `c * t^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        RingElem::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The units of `Z[t]` are exactly `1` and `-1`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].abs().is_one()
    }

    /// Degree in `t`; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// The value when the element is constant in `t`.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coeffs.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return RingElem::zero();
        }
        RingElem {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = RingElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Non-negative gcd of the integer coefficients; zero for the zero element.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// The element divided by its content, sign-normalized to a positive
    /// leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return RingElem::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        RingElem {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        }
    }

    /// Multiplies by `-1` if needed so that the leading coefficient is positive.
    pub fn normalized(&self) -> Self {
        if self.leading_coeff().is_some_and(|l| l.is_negative()) {
            -self
        } else {
            self.clone()
        }
    }

    pub fn leading_is_negative(&self) -> bool {
        self.leading_coeff().is_some_and(|l| l.is_negative())
    }

    /// Quotient of an exact division, or `None` when `d` does not divide `self`.
    pub fn checked_div(&self, d: &RingElem) -> Option<RingElem> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(RingElem::zero());
        }
        let dd = d.degree().unwrap_or(0);
        let lc = d.leading_coeff().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return None;
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(RingElem::from_coeffs(quot))
        } else {
            None
        }
    }

    /// True iff some `q` in `Z[t]` has `x = d * q`. `d` must be nonzero.
    pub fn divides(d: &RingElem, x: &RingElem) -> Result<bool> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(x.checked_div(d).is_some())
    }

    /// The exact quotient `x / d`.
    pub fn exact_div(d: &RingElem, x: &RingElem) -> Result<RingElem> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        x.checked_div(d).ok_or_else(|| Error::NotDivisible {
            divisor: d.to_string(),
            dividend: x.to_string(),
        })
    }

    /// Normalized gcd: integer content gcd times the primitive-part gcd from a
    /// primitive pseudo-remainder sequence.
    pub fn gcd(x: &RingElem, y: &RingElem) -> Result<RingElem> {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => return Err(Error::GcdOfZeros),
            (true, false) => return Ok(y.normalized()),
            (false, true) => return Ok(x.normalized()),
            _ => {}
        }
        if x.is_unit() || y.is_unit() {
            return Ok(RingElem::one());
        }
        let content = x.content().gcd(&y.content());
        if x.degree() == Some(0) || y.degree() == Some(0) {
            return Ok(RingElem::from_bigint(content));
        }
        let (mut a, mut b) = (x.primitive_part(), y.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        Ok(a.primitive_part().scale(&content))
    }

    /// `lc(b)^k * self mod b` for the smallest `k` that keeps the division integral.
    fn pseudo_rem(&self, b: &RingElem) -> RingElem {
        let db = b.degree().expect("pseudo-remainder by zero");
        let lb = b.leading_coeff().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading_coeff().unwrap().clone();
            r = &r.scale(&lb) - &(b * &RingElem::monomial(lr, dr - db));
        }
        r
    }

    /// Evaluates at an integer point.
    pub fn eval(&self, at: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * at + c)
    }
}

impl From<i64> for RingElem {
    fn from(n: i64) -> Self {
        RingElem::from_int(n)
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem({self})")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}*t^{k}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                (&self).$method(rhs)
            }
        }
        impl $tr<RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&RingElem> for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i);
                let b = rhs.coeffs.get(i);
                match (a, b) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                }
            })
            .collect();
        RingElem::from_coeffs(coeffs)
    }
}

impl Sub<&RingElem> for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self + &(-rhs)
    }
}

impl Mul<&RingElem> for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        if self.is_zero() || rhs.is_zero() {
            return RingElem::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RingElem::from_coeffs(coeffs)
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn r(c: &[i64]) -> RingElem {
        RingElem::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn add_examples() {
        assert_eq!(r(&[1, 1]) + r(&[-1, 1]), r(&[0, 2]));
        assert_eq!(r(&[3, 0, 5]) + RingElem::zero(), r(&[3, 0, 5]));
        let s = r(&[0, 0, 1]) + r(&[0, 0, -1]);
        assert!(s.is_zero());
        assert!(s.coeffs().is_empty());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(r(&[1, 1]) * r(&[-1, 1]), r(&[-1, 0, 1]));
        assert_eq!(r(&[2, 3]) * RingElem::one(), r(&[2, 3]));
        assert!((r(&[2, 3]) * RingElem::zero()).is_zero());
    }

    #[test]
    fn divisibility_examples() {
        assert!(RingElem::divides(&r(&[1, 1]), &r(&[-1, 0, 1])).unwrap());
        assert!(!RingElem::divides(&RingElem::t(), &r(&[1, 1])).unwrap());
        assert!(RingElem::divides(&r(&[2]), &r(&[0, 0, 0, 2])).unwrap());
        assert_eq!(
            RingElem::divides(&RingElem::zero(), &r(&[1])),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn exact_div_examples() {
        assert_eq!(
            RingElem::exact_div(&RingElem::t(), &r(&[0, 0, 0, 1])).unwrap(),
            r(&[0, 0, 1])
        );
        let tp1 = r(&[1, 1]);
        assert_eq!(
            RingElem::exact_div(&tp1, &tp1.pow(3)).unwrap(),
            tp1.pow(2)
        );
        assert!(matches!(
            RingElem::exact_div(&RingElem::t(), &tp1),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            RingElem::gcd(&r(&[1, 2, 1]), &r(&[1, 1])).unwrap(),
            r(&[1, 1])
        );
        assert_eq!(RingElem::gcd(&RingElem::t(), &r(&[1, 1])).unwrap(), r(&[1]));
        assert_eq!(RingElem::gcd(&r(&[0, 2]), &r(&[0, 0, 4])).unwrap(), r(&[0, 2]));
        assert_eq!(RingElem::gcd(&r(&[0, -3]), &RingElem::zero()).unwrap(), r(&[0, 3]));
        assert_eq!(
            RingElem::gcd(&RingElem::zero(), &RingElem::zero()),
            Err(Error::GcdOfZeros)
        );
    }

    #[test]
    fn units() {
        assert!(RingElem::one().is_unit());
        assert!(r(&[-1]).is_unit());
        assert!(!RingElem::t().is_unit());
        assert!(!r(&[2]).is_unit());
        assert!(!RingElem::zero().is_unit());
    }

    #[test]
    fn display() {
        assert_eq!(r(&[-1, 0, 1]).to_string(), "t^2 - 1");
        assert_eq!(r(&[0, 2]).to_string(), "2*t");
        assert_eq!(r(&[3, -1]).to_string(), "-t + 3");
        assert_eq!(RingElem::zero().to_string(), "0");
    }
}
