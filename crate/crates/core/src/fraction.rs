//! The fraction field `K = Frac(Z[t])`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::RingElem;

/// A reduced fraction `num / den` with `den` having positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: RingElem,
    den: RingElem,
}

impl Fraction {
    pub fn new(num: RingElem, den: RingElem) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: RingElem, den: RingElem) -> Self {
        if num.is_zero() {
            return Fraction::zero();
        }
        if den.is_unit() {
            return Fraction {
                num: if den.is_one() { num } else { -num },
                den: RingElem::one(),
            };
        }
        let g = RingElem::gcd(&num, &den).expect("den is nonzero");
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (
                num.checked_div(&g).expect("gcd divides"),
                den.checked_div(&g).expect("gcd divides"),
            )
        };
        if d.leading_is_negative() {
            n = -n;
            d = -d;
        }
        Fraction { num: n, den: d }
    }

    /// `num / den` for an already reduced pair.
    fn coprime(num: RingElem, den: RingElem) -> Self {
        if num.is_zero() {
            return Fraction::zero();
        }
        Fraction { num, den }
    }

    pub fn zero() -> Self {
        Fraction {
            num: RingElem::zero(),
            den: RingElem::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_ring(RingElem::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ring(RingElem::from_int(n))
    }

    pub fn from_ring(r: RingElem) -> Self {
        Fraction {
            num: r,
            den: RingElem::one(),
        }
    }

    pub fn num(&self) -> &RingElem {
        &self.num
    }

    pub fn den(&self) -> &RingElem {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in `Z[t]`.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_ring(&self) -> Option<&RingElem> {
        self.is_integral().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self> {
        Fraction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Fraction) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        Fraction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Signed power; negative exponents invert first.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let b = if e < 0 { self.inv()? } else { self.clone() };
        Ok(b.pow(e.unsigned_abs() as u32))
    }
}

impl From<RingElem> for Fraction {
    fn from(r: RingElem) -> Self {
        Fraction::from_ring(r)
    }
}

impl From<i64> for Fraction {
    fn from(n: i64) -> Self {
        Fraction::from_int(n)
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fraction({self})")
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add<&Fraction> for &Fraction {
    type Output = Fraction;
    fn add(self, rhs: &Fraction) -> Fraction {
        if self.den == rhs.den {
            return Fraction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if self.is_integral() || rhs.is_integral() {
            return Fraction::coprime(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den);
        }
        let g = RingElem::gcd(&self.den, &rhs.den).expect("nonzero denominators");
        if g.is_one() {
            return Fraction::coprime(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den);
        }
        let (d1, d2) = (exact(&self.den, &g), exact(&rhs.den, &g));
        Fraction::reduce(&self.num * &d2 + &rhs.num * &d1, &self.den * &d2)
    }
}

impl Sub<&Fraction> for &Fraction {
    type Output = Fraction;
    fn sub(self, rhs: &Fraction) -> Fraction {
        self + &(-rhs)
    }
}

impl Mul<&Fraction> for &Fraction {
    type Output = Fraction;
    fn mul(self, rhs: &Fraction) -> Fraction {
        if self.is_zero() || rhs.is_zero() {
            return Fraction::zero();
        }
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        Fraction {
            num: &n1 * &n2,
            den: &d1 * &d2,
        }
    }
}

fn exact(x: &RingElem, g: &RingElem) -> RingElem {
    x.checked_div(g).expect("gcd divides")
}

/// `(n / g, d / g)` for `g = gcd(n, d)`, with `d` of positive leading coefficient.
fn cancel(n: &RingElem, d: &RingElem) -> (RingElem, RingElem) {
    if d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = RingElem::gcd(n, d).expect("nonzero denominator");
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (exact(n, &g), exact(d, &g))
    }
}

impl Neg for &Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        Fraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        -&self
    }
}

macro_rules! forward {
    ($tr:ident, $m:ident) => {
        impl $tr<Fraction> for Fraction {
            type Output = Fraction;
            fn $m(self, rhs: Fraction) -> Fraction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Fraction> for Fraction {
            type Output = Fraction;
            fn $m(self, rhs: &Fraction) -> Fraction {
                (&self).$m(rhs)
            }
        }
        impl $tr<Fraction> for &Fraction {
            type Output = Fraction;
            fn $m(self, rhs: Fraction) -> Fraction {
                self.$m(&rhs)
            }
        }
    };
}
forward!(Add, add);
forward!(Sub, sub);
forward!(Mul, mul);
