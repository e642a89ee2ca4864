//! Fields used by the length machinery, with polynomials and 2x2 matrices over them.
//!
//! Two instances are provided: [`Fraction`] for `K = Frac(Z[t])`, and
//! [`RationalFunction`] for `Frac(Z[t][X])`, which lets a map over `R[X]` be
//! decomposed with `X` treated as a scalar.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::multipoly::{default_names, Monomial, MultiPoly, ScaledPoly};
use crate::ring::RingElem;

/// Exact field arithmetic. Method names avoid clashing with `std::ops`.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// `None` for zero.
    fn finv(&self) -> Option<Self>;

    fn fsub(&self, o: &Self) -> Self {
        self.fadd(&o.fneg())
    }

    fn fdiv(&self, o: &Self) -> Option<Self> {
        o.finv().map(|i| self.fmul(&i))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn fpow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.fmul(self))
    }

    /// Polynomial product; fields with a cheaper route override it.
    fn poly_mul(a: &FPoly<Self>, b: &FPoly<Self>) -> FPoly<Self> {
        let mut out = FPoly::zero(a.nvars);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                out.add_term(m1.mul(m2), c1.fmul(c2));
            }
        }
        out
    }
}

impl Field for Fraction {
    fn zero() -> Self {
        Fraction::zero()
    }
    fn one() -> Self {
        Fraction::one()
    }
    fn from_int(n: i64) -> Self {
        Fraction::from_int(n)
    }
    fn is_zero(&self) -> bool {
        Fraction::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn fpow(&self, e: u32) -> Self {
        self.pow(e)
    }
    /// Multiplies over `Z[t]` with one common denominator per factor, so
    /// that only the coefficients of the product are reduced.
    fn poly_mul(a: &FPoly<Self>, b: &FPoly<Self>) -> FPoly<Self> {
        if a.is_zero() || b.is_zero() {
            return FPoly::zero(a.nvars);
        }
        let (sa, sb) = (fpoly_to_scaled(a), fpoly_to_scaled(b));
        let num = sa.num() * sb.num();
        let den = sa.den() * sb.den();
        let mut p = FPoly::zero(a.nvars);
        for (m, c) in num.terms() {
            p.add_term(m.clone(), Fraction::new(c.clone(), den.clone()).expect("den nonzero"));
        }
        p
    }
}

/// Primitive-PRS gcd in `Z[t][X]`, for polynomials in one variable.
fn upoly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return upoly_normalize(b);
    }
    if b.is_zero() {
        return upoly_normalize(a);
    }
    let content = RingElem::gcd(&a.content().unwrap(), &b.content().unwrap()).unwrap();
    let (mut p, mut q) = (upoly_primitive(a), upoly_primitive(b));
    if p.degree_in(0) < q.degree_in(0) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = upoly_prem(&p, &q);
        p = q;
        q = if r.is_zero() { r } else { upoly_primitive(&r) };
    }
    upoly_normalize(&upoly_primitive(&p).scale(&content))
}

fn upoly_primitive(p: &MultiPoly) -> MultiPoly {
    let c = p.content().unwrap();
    p.div_ring(&c).unwrap()
}

fn upoly_lead(p: &MultiPoly) -> RingElem {
    let d = p.degree_in(0);
    p.coeff(&Monomial::new(vec![d]))
}

fn upoly_normalize(p: &MultiPoly) -> MultiPoly {
    if upoly_lead(p).leading_is_negative() {
        -p
    } else {
        p.clone()
    }
}

fn upoly_prem(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let db = b.degree_in(0);
    let lb = upoly_lead(b);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(0) >= db {
        let dr = r.degree_in(0);
        let lr = upoly_lead(&r);
        let shift = MultiPoly::term(Monomial::new(vec![dr - db]), lr);
        r = &r.scale(&lb) - &(&shift * b);
    }
    r
}

/// An element of `Frac(Z[t][X])` in lowest terms, denominator sign-normalized.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if num.nvars() != 1 || den.nvars() != 1 {
            return Err(Error::Shape {
                expected: 1,
                found: num.nvars().max(den.nvars()),
            });
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return RationalFunction {
                num,
                den: MultiPoly::one(1),
            };
        }
        let g = upoly_gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.checked_div(&g).unwrap(), den.checked_div(&g).unwrap())
        };
        if upoly_lead(&d).leading_is_negative() {
            n = -n;
            d = -d;
        }
        RationalFunction { num: n, den: d }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self::reduce(p, MultiPoly::one(1))
    }

    pub fn from_ring(r: RingElem) -> Self {
        Self::from_poly(MultiPoly::constant(1, r))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    /// The value when it is a polynomial in `X` over `Z[t]`.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.den.is_one().then_some(&self.num)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(MultiPoly::zero(1))
    }
    fn one() -> Self {
        Self::from_poly(MultiPoly::one(1))
    }
    fn from_int(n: i64) -> Self {
        Self::from_ring(RingElem::from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn fadd(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        Self::reduce(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
    fn fmul(&self, o: &Self) -> Self {
        Self::reduce(&self.num * &o.num, &self.den * &o.den)
    }
    fn fneg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn finv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::reduce(self.den.clone(), self.num.clone()))
        }
    }
}

/// A 2x2 matrix; as a linear map it sends `(X, Y)` to `(m11 X + m12 Y, m21 X + m22 Y)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat2<F> {
    pub m: [[F; 2]; 2],
}

impl<F: Field> Mat2<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Self {
        Mat2 {
            m: [[a, b], [c, d]],
        }
    }

    pub fn identity() -> Self {
        Self::new(F::one(), F::zero(), F::zero(), F::one())
    }

    pub fn diag(a: F, d: F) -> Self {
        Self::new(a, F::zero(), F::zero(), d)
    }

    /// `(X, Y + a X)`.
    pub fn lower(a: F) -> Self {
        Self::new(F::one(), F::zero(), a, F::one())
    }

    /// `(X + a Y, Y)`.
    pub fn upper(a: F) -> Self {
        Self::new(F::one(), a, F::zero(), F::one())
    }

    /// `(-Y, X)`.
    pub fn rho() -> Self {
        Self::new(F::zero(), F::from_int(-1), F::one(), F::zero())
    }

    pub fn swap() -> Self {
        Self::new(F::zero(), F::one(), F::one(), F::zero())
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.m[i][j]
    }

    pub fn mul(&self, o: &Mat2<F>) -> Mat2<F> {
        let e = |i: usize, j: usize| {
            self.m[i][0]
                .fmul(&o.m[0][j])
                .fadd(&self.m[i][1].fmul(&o.m[1][j]))
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn det(&self) -> F {
        self.m[0][0]
            .fmul(&self.m[1][1])
            .fsub(&self.m[0][1].fmul(&self.m[1][0]))
    }

    pub fn inv(&self) -> Option<Mat2<F>> {
        let di = self.det().finv()?;
        Some(Self::new(
            self.m[1][1].fmul(&di),
            self.m[0][1].fneg().fmul(&di),
            self.m[1][0].fneg().fmul(&di),
            self.m[0][0].fmul(&di),
        ))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// True when `m12 = 0`, i.e. the map preserves the `X`-coordinate's independence of `Y`.
    pub fn is_lower(&self) -> bool {
        self.m[0][1].is_zero()
    }

    pub fn is_upper(&self) -> bool {
        self.m[1][0].is_zero()
    }
}

/// A polynomial with coefficients in a field `F`.
#[derive(Clone, PartialEq, Debug)]
pub struct FPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> FPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        FPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), F::one())
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let mut p = FPoly::zero(m.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// `sum coeffs[k] * x_var^k`.
    pub fn univariate(nvars: usize, var: usize, coeffs: &[F]) -> Self {
        let mut p = FPoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            p.add_term(Monomial::new(e), c.clone());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&m) {
            Some(old) => old.fadd(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.leading_term().map(|(m, _)| m.degree() as usize)
    }

    pub fn homogeneous_part(&self, d: u32) -> FPoly<F> {
        FPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn leading_form(&self) -> Option<FPoly<F>> {
        self.total_degree().map(|d| self.homogeneous_part(d as u32))
    }

    pub fn add(&self, o: &FPoly<F>) -> FPoly<F> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &FPoly<F>) -> FPoly<F> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FPoly<F> {
        self.scale(&F::from_int(-1))
    }

    pub fn scale(&self, k: &F) -> FPoly<F> {
        if k.is_zero() {
            return FPoly::zero(self.nvars);
        }
        FPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.fmul(k)))
                .collect(),
        }
    }

    pub fn mul(&self, o: &FPoly<F>) -> FPoly<F> {
        F::poly_mul(self, o)
    }

    pub fn pow(&self, e: u32) -> FPoly<F> {
        let mut acc = FPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluation at polynomial arguments.
    pub fn compose(&self, args: &[FPoly<F>]) -> FPoly<F> {
        assert_eq!(args.len(), self.nvars);
        let n = args[0].nvars;
        let mut powers: Vec<Vec<FPoly<F>>> = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            let e = self.terms.keys().map(|m| m.exps()[i]).max().unwrap_or(0);
            let mut v = vec![FPoly::one(n)];
            for _ in 0..e {
                let next = v.last().unwrap().mul(a);
                v.push(next);
            }
            powers.push(v);
        }
        let mut out = FPoly::zero(n);
        for (m, c) in &self.terms {
            let mut acc = FPoly::constant(n, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    acc = acc.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Formal partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> FPoly<F> {
        let mut p = FPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut nm = m.exps().to_vec();
            nm[var] -= 1;
            p.add_term(Monomial::new(nm), c.fmul(&F::from_int(e as i64)));
        }
        p
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Coefficients in variable `var`, when no other variable occurs.
    pub fn univariate_coeffs(&self, var: usize) -> Option<Vec<F>> {
        let mut out: Vec<F> = Vec::new();
        for (m, c) in &self.terms {
            if m.exps().iter().enumerate().any(|(i, e)| i != var && *e > 0) {
                return None;
            }
            let k = m.exps()[var] as usize;
            if out.len() <= k {
                out.resize(k + 1, F::zero());
            }
            out[k] = c.clone();
        }
        Some(out)
    }
}

impl<F: Field> fmt::Display for FPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = default_names(self.nvars);
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| {
                        if *e == 1 {
                            names[i].clone()
                        } else {
                            format!("{}^{e}", names[i])
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Views a fraction-field polynomial as a polynomial over `K`.
pub fn scaled_to_fpoly(s: &ScaledPoly) -> FPoly<Fraction> {
    let mut p = FPoly::zero(s.nvars());
    for (m, c) in s.num().terms() {
        p.add_term(
            m.clone(),
            Fraction::new(c.clone(), s.den().clone()).expect("den nonzero"),
        );
    }
    p
}

/// Converts a polynomial over `K` back to canonical scaled form.
pub fn fpoly_to_scaled(p: &FPoly<Fraction>) -> ScaledPoly {
    let den = p.terms.values().fold(RingElem::one(), |acc, c| {
        if acc.checked_div(c.den()).is_some() {
            return acc;
        }
        let g = RingElem::gcd(&acc, c.den()).expect("nonzero");
        let q = c.den().checked_div(&g).expect("gcd divides");
        &acc * &q
    });
    let mut num = MultiPoly::zero(p.nvars);
    for (m, c) in &p.terms {
        let k = den.checked_div(c.den()).expect("lcm");
        num = &num + &MultiPoly::term(m.clone(), c.num() * &k);
    }
    ScaledPoly::new(num, den).expect("nonzero den")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xpoly(coeffs: &[i64]) -> MultiPoly {
        MultiPoly::univariate(
            1,
            0,
            &coeffs.iter().map(|&c| RingElem::from_int(c)).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rational_function_reduces() {
        // (X^2 - 1) / (X + 1) = X - 1
        let r = RationalFunction::new(xpoly(&[-1, 0, 1]), xpoly(&[1, 1])).unwrap();
        assert_eq!(r.as_poly(), Some(&xpoly(&[-1, 1])));
        let s = RationalFunction::new(xpoly(&[1]), xpoly(&[0, -2])).unwrap();
        assert_eq!(s.num(), &xpoly(&[-1]));
        assert_eq!(s.den(), &xpoly(&[0, 2]));
    }

    #[test]
    fn rational_function_field_laws() {
        let a = RationalFunction::new(xpoly(&[1, 1]), xpoly(&[0, 1])).unwrap();
        let b = RationalFunction::new(xpoly(&[2]), xpoly(&[1, 1])).unwrap();
        let s = a.fadd(&b).fsub(&b);
        assert_eq!(s, a);
        assert!(a.fmul(&a.finv().unwrap()).is_one());
    }

    #[test]
    fn mat2_products() {
        let l = Mat2::lower(Fraction::from_int(2));
        let u = Mat2::upper(Fraction::from_int(3));
        let p = l.mul(&u);
        assert_eq!(p, Mat2::new(1.into(), 3.into(), 2.into(), 7.into()));
        assert!(p.det().is_one());
        assert!(p.mul(&p.inv().unwrap()).is_identity());
        let r: Mat2<Fraction> = Mat2::rho();
        assert_eq!(r.mul(&r), Mat2::diag((-1).into(), (-1).into()));
    }

    #[test]
    fn fpoly_roundtrip() {
        let s = ScaledPoly::new(
            MultiPoly::var(2, 0).pow(2) + MultiPoly::constant(2, RingElem::t()) * MultiPoly::var(2, 1),
            RingElem::t() * RingElem::t(),
        )
        .unwrap();
        assert_eq!(fpoly_to_scaled(&scaled_to_fpoly(&s)), s);
    }
}
