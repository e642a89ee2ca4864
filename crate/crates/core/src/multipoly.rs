//! Sparse polynomials over `Z[t]` and their fraction-field scalings.
//!
//! Variables are positional. Names such as `X`, `Y`, `Z`, `W` are display
//! metadata supplied by the caller; [`default_names`] gives the usual ones.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::ring::RingElem;

/// Canonical variable names in positional order.
pub const CANONICAL_NAMES: [&str; 6] = ["X", "Y", "Z", "W", "V", "U"];

/// The first `n` canonical names, falling back to `x6`, `x7`, ... beyond six.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            CANONICAL_NAMES
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("x{i}"))
        })
        .collect()
}

/// An exponent vector. Ordered graded-lexicographically with variable 0 largest.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `self / o` when every exponent of `o` is at most the matching one here.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables with coefficients in `Z[t]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, RingElem>,
}

fn shape(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Shape { expected, found })
    }
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, RingElem::one())
    }

    pub fn constant(nvars: usize, c: RingElem) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::term(Monomial::var(nvars, i), RingElem::one())
    }

    pub fn term(m: Monomial, c: RingElem) -> Self {
        let mut p = MultiPoly::zero(m.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// `sum coeffs[k] * x_var^k` in `nvars` variables.
    pub fn univariate(nvars: usize, var: usize, coeffs: &[RingElem]) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, RingElem)>) -> Result<Self> {
        let mut p = MultiPoly::zero(nvars);
        for (m, c) in terms {
            shape(nvars, m.len())?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: RingElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &RingElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> RingElem {
        self.terms.get(m).cloned().unwrap_or_else(RingElem::zero)
    }

    pub fn constant_term(&self) -> RingElem {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Largest monomial with its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &RingElem)> {
        self.terms.iter().next_back()
    }

    /// Maximum exponent sum over the main variables.
    pub fn total_degree(&self) -> Result<usize> {
        self.leading_term()
            .map(|(m, _)| m.degree() as usize)
            .ok_or(Error::ZeroPolynomial)
    }

    /// Degree in one variable; zero for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// True when only variable `var` occurs.
    pub fn only_in(&self, var: usize) -> bool {
        self.terms
            .keys()
            .all(|m| m.0.iter().enumerate().all(|(i, e)| i == var || *e == 0))
    }

    /// True when variable `var` does not occur.
    pub fn free_of(&self, var: usize) -> bool {
        self.terms.keys().all(|m| m.0[var] == 0)
    }

    /// Coefficients of a polynomial in the single variable `var`, low to high.
    pub fn univariate_coeffs(&self, var: usize) -> Result<Vec<RingElem>> {
        if !self.only_in(var) {
            return Err(Error::Precondition(format!(
                "polynomial {self} is not univariate in variable {var}"
            )));
        }
        let mut out = vec![RingElem::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            out[m.0[var] as usize] = c.clone();
        }
        if self.is_zero() {
            out.clear();
        }
        Ok(out)
    }

    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous part of top degree.
    pub fn leading_form(&self) -> Result<MultiPoly> {
        let d = self.total_degree()?;
        Ok(self.homogeneous_part(d as u32))
    }

    /// Normalized gcd of all coefficients.
    pub fn content(&self) -> Result<RingElem> {
        let mut it = self.terms.values();
        let first = it.next().ok_or(Error::ZeroPolynomial)?;
        let mut g = first.normalized();
        for c in it {
            if g.is_one() {
                break;
            }
            g = RingElem::gcd(&g, c)?;
        }
        Ok(g)
    }

    pub fn scale(&self, k: &RingElem) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Divides every coefficient by `d`, or `None` if some division is inexact.
    pub fn div_ring(&self, d: &RingElem) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.checked_div(d)?);
        }
        Some(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Exact multivariate division, or `None` when `d` does not divide `self`.
    pub fn checked_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() || d.nvars != self.nvars {
            return None;
        }
        let (dm, dc) = d.leading_term()?;
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(dm)?;
            let c = rc.checked_div(dc)?;
            let t = MultiPoly::term(m, c);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    pub fn try_add(&self, o: &MultiPoly) -> Result<MultiPoly> {
        shape(self.nvars, o.nvars)?;
        Ok(self + o)
    }

    pub fn try_sub(&self, o: &MultiPoly) -> Result<MultiPoly> {
        shape(self.nvars, o.nvars)?;
        Ok(self - o)
    }

    pub fn try_mul(&self, o: &MultiPoly) -> Result<MultiPoly> {
        shape(self.nvars, o.nvars)?;
        Ok(self * o)
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.nvars);
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

    /// Formal partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut nm = m.0.clone();
            nm[var] -= 1;
            p.add_term(Monomial(nm), c.scale(&BigInt::from(e)));
        }
        p
    }

    /// Moves variable `i` to position `map[i]` in an ambient space of `n` variables.
    pub fn reindex(&self, n: usize, map: &[usize]) -> Result<MultiPoly> {
        shape(self.nvars, map.len())?;
        let mut p = MultiPoly::zero(n);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    if map[i] >= n {
                        return Err(Error::Shape {
                            expected: n,
                            found: map[i] + 1,
                        });
                    }
                    e[map[i]] += x;
                }
            }
            p.add_term(Monomial(e), c.clone());
        }
        Ok(p)
    }

    /// The same polynomial in `n >= nvars` variables (extra ones unused).
    pub fn extend(&self, n: usize) -> MultiPoly {
        assert!(n >= self.nvars);
        MultiPoly {
            nvars: n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(n, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Evaluation at polynomial arguments over `Z[t]`.
    pub fn compose(&self, args: &[MultiPoly]) -> Result<MultiPoly> {
        shape(self.nvars, args.len())?;
        let n = match args.first() {
            Some(a) => a.nvars,
            None => return Ok(self.clone()),
        };
        for a in args {
            shape(n, a.nvars)?;
        }
        let powers = power_tables(self, args, |a| a.clone(), MultiPoly::one(n), |x, y| x * y);
        let mut out = MultiPoly::zero(n);
        for (m, c) in &self.terms {
            let mut acc = MultiPoly::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    acc = &acc * &powers[i][e as usize];
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Evaluation at fraction-field arguments, returned in canonical form.
    ///
    /// With `args[i] = N_i / d_i` and `e_i` the degree in variable `i`, the
    /// result is `sum c_m prod N_i^m_i d_i^(e_i - m_i)` over `prod d_i^e_i`.
    pub fn substitute(&self, args: &[ScaledPoly]) -> Result<ScaledPoly> {
        shape(self.nvars, args.len())?;
        let n = match args.first() {
            Some(a) => a.nvars(),
            None => return Ok(ScaledPoly::from_poly(self.clone())),
        };
        for a in args {
            shape(n, a.nvars())?;
        }
        if args.iter().all(|a| a.den.is_one()) {
            let nums: Vec<MultiPoly> = args.iter().map(|a| a.num.clone()).collect();
            return Ok(ScaledPoly::from_poly(self.compose(&nums)?));
        }
        let degs: Vec<u32> = (0..self.nvars).map(|i| self.degree_in(i)).collect();
        let num_pows = power_tables(self, args, |a| a.num.clone(), MultiPoly::one(n), |x, y| x * y);
        let den_pows: Vec<Vec<RingElem>> = args
            .iter()
            .zip(&degs)
            .map(|(a, &e)| {
                let mut v = vec![RingElem::one()];
                for _ in 0..e {
                    let next = v.last().unwrap() * &a.den;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MultiPoly::zero(n);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                coeff = &coeff * &den_pows[i][(degs[i] - e) as usize];
            }
            let mut acc = MultiPoly::constant(n, coeff);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    acc = &acc * &num_pows[i][e as usize];
                }
            }
            out = &out + &acc;
        }
        let den = den_pows
            .iter()
            .zip(&degs)
            .fold(RingElem::one(), |acc, (p, &e)| &acc * &p[e as usize]);
        ScaledPoly::new(out, den)
    }

    /// Value at an integer point of the main variables and of `t`.
    pub fn eval_int(&self, point: &[BigInt], t: &BigInt) -> BigInt {
        let mut acc = BigInt::from(0);
        for (m, c) in &self.terms {
            let mut v = c.eval(t);
            for (i, &e) in m.0.iter().enumerate() {
                v *= num_traits::pow(point[i].clone(), e as usize);
            }
            acc += v;
        }
        acc
    }

    /// Prints with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { p: self, names }
    }
}

fn power_tables<A, P: Clone>(
    p: &MultiPoly,
    args: &[A],
    base: impl Fn(&A) -> P,
    one: P,
    mul: impl Fn(&P, &P) -> P,
) -> Vec<Vec<P>> {
    args.iter()
        .enumerate()
        .map(|(i, a)| {
            let e = p.degree_in(i);
            let mut v = vec![one.clone()];
            if e > 0 {
                let b = base(a);
                v.push(b.clone());
                for _ in 1..e {
                    let next = mul(v.last().unwrap(), &b);
                    v.push(next);
                }
            }
            v
        })
        .collect()
}

struct PolyDisplay<'a> {
    p: &'a MultiPoly,
    names: &'a [String],
}

fn monomial_str(m: &Monomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, &e)| {
            let name = names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("x{i}"));
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.p.terms.iter().rev().enumerate() {
            let neg = c.leading_is_negative();
            let mag = if neg { -c } else { c.clone() };
            match (idx == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let mono = monomial_str(m, self.names);
            let cstr = if mag.term_count() > 1 {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            if mono.is_empty() {
                write!(f, "{cstr}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{cstr}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let d = self.display_with(&names);
        write!(f, "{d}")
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({self})", self.nvars)
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! forward {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}
forward!(MultiPoly, Add, add);
forward!(MultiPoly, Sub, sub);
forward!(MultiPoly, Mul, mul);

/// A fraction-field polynomial `num / den`.
///
/// Canonical form: `gcd(content(num), den)` is a unit and `den` has positive
/// leading coefficient. The zero value has `den = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScaledPoly {
    num: MultiPoly,
    den: RingElem,
}

impl ScaledPoly {
    pub fn new(num: MultiPoly, den: RingElem) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: MultiPoly, den: RingElem) -> Self {
        if num.is_zero() {
            return ScaledPoly {
                num,
                den: RingElem::one(),
            };
        }
        let mut g = den.normalized();
        if !g.is_one() {
            for c in num.terms.values() {
                g = RingElem::gcd(&g, c).expect("den is nonzero");
                if g.is_one() {
                    break;
                }
            }
        }
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_ring(&g).expect("gcd divides content"),
                den.checked_div(&g).expect("gcd divides den"),
            )
        };
        if den.leading_is_negative() {
            num = -num;
            den = -den;
        }
        ScaledPoly { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        ScaledPoly {
            num: p,
            den: RingElem::one(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_poly(MultiPoly::zero(n))
    }

    pub fn one(n: usize) -> Self {
        Self::from_poly(MultiPoly::one(n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(n, i))
    }

    pub fn constant(n: usize, c: &Fraction) -> Self {
        Self::normalize(MultiPoly::constant(n, c.num().clone()), c.den().clone())
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &RingElem {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff the value lies in `Z[t][vars]`.
    pub fn is_integral(&self) -> bool {
        self.den.is_unit()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.is_integral().then_some(&self.num)
    }

    pub fn into_poly(self) -> Result<MultiPoly> {
        if self.is_integral() {
            Ok(self.num)
        } else {
            Err(Error::NotDivisible {
                divisor: self.den.to_string(),
                dividend: self.num.to_string(),
            })
        }
    }

    /// Re-runs canonicalization; the identity on canonical values.
    pub fn renormalize(&self) -> Self {
        Self::normalize(self.num.clone(), self.den.clone())
    }

    pub fn coeff(&self, m: &Monomial) -> Fraction {
        Fraction::new(self.num.coeff(m), self.den.clone()).expect("den nonzero")
    }

    pub fn constant_term(&self) -> Fraction {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn total_degree(&self) -> Result<usize> {
        self.num.total_degree()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.num.degree_in(var)
    }

    pub fn leading_form(&self) -> Result<ScaledPoly> {
        Ok(Self::normalize(self.num.leading_form()?, self.den.clone()))
    }

    pub fn homogeneous_part(&self, d: u32) -> ScaledPoly {
        Self::normalize(self.num.homogeneous_part(d), self.den.clone())
    }

    pub fn scale(&self, k: &Fraction) -> ScaledPoly {
        Self::normalize(self.num.scale(k.num()), &self.den * k.den())
    }

    pub fn pow(&self, e: u32) -> ScaledPoly {
        Self::normalize(self.num.pow(e), self.den.pow(e))
    }

    pub fn derivative(&self, var: usize) -> ScaledPoly {
        Self::normalize(self.num.derivative(var), self.den.clone())
    }

    pub fn substitute(&self, args: &[ScaledPoly]) -> Result<ScaledPoly> {
        let s = self.num.substitute(args)?;
        Ok(Self::normalize(s.num, &s.den * &self.den))
    }

    pub fn reindex(&self, n: usize, map: &[usize]) -> Result<ScaledPoly> {
        Ok(ScaledPoly {
            num: self.num.reindex(n, map)?,
            den: self.den.clone(),
        })
    }

    pub fn extend(&self, n: usize) -> ScaledPoly {
        ScaledPoly {
            num: self.num.extend(n),
            den: self.den.clone(),
        }
    }

    /// Exact quotient by a nonzero polynomial with fraction coefficients.
    pub fn checked_div(&self, d: &ScaledPoly) -> Option<ScaledPoly> {
        let q = self.num.checked_div(&d.num)?;
        Some(Self::normalize(q.scale(&d.den), self.den.clone()))
    }

    pub fn try_add(&self, o: &ScaledPoly) -> Result<ScaledPoly> {
        shape(self.nvars(), o.nvars())?;
        Ok(self + o)
    }

    pub fn try_mul(&self, o: &ScaledPoly) -> Result<ScaledPoly> {
        shape(self.nvars(), o.nvars())?;
        Ok(self * o)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        ScaledDisplay { s: self, names }
    }
}

struct ScaledDisplay<'a> {
    s: &'a ScaledPoly,
    names: &'a [String],
}

impl fmt::Display for ScaledDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.s.num.display_with(self.names);
        if self.s.den.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({})", self.s.den)
        }
    }
}

impl fmt::Display for ScaledPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars());
        let d = self.display_with(&names);
        write!(f, "{d}")
    }
}

impl fmt::Debug for ScaledPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScaledPoly[{}]({self})", self.nvars())
    }
}

impl From<MultiPoly> for ScaledPoly {
    fn from(p: MultiPoly) -> Self {
        ScaledPoly::from_poly(p)
    }
}

impl Add<&ScaledPoly> for &ScaledPoly {
    type Output = ScaledPoly;
    fn add(self, rhs: &ScaledPoly) -> ScaledPoly {
        if self.den == rhs.den {
            return ScaledPoly::normalize(&self.num + &rhs.num, self.den.clone());
        }
        ScaledPoly::normalize(
            &self.num.scale(&rhs.den) + &rhs.num.scale(&self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&ScaledPoly> for &ScaledPoly {
    type Output = ScaledPoly;
    fn sub(self, rhs: &ScaledPoly) -> ScaledPoly {
        self + &(-rhs)
    }
}

impl Mul<&ScaledPoly> for &ScaledPoly {
    type Output = ScaledPoly;
    fn mul(self, rhs: &ScaledPoly) -> ScaledPoly {
        ScaledPoly::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &ScaledPoly {
    type Output = ScaledPoly;
    fn neg(self) -> ScaledPoly {
        ScaledPoly {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for ScaledPoly {
    type Output = ScaledPoly;
    fn neg(self) -> ScaledPoly {
        -&self
    }
}

forward!(ScaledPoly, Add, add);
forward!(ScaledPoly, Sub, sub);
forward!(ScaledPoly, Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn x2() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y2() -> MultiPoly {
        MultiPoly::var(2, 1)
    }
    fn c(r: RingElem) -> MultiPoly {
        MultiPoly::constant(2, r)
    }
    fn t() -> RingElem {
        RingElem::t()
    }

    #[test]
    fn add_examples() {
        assert!((x2().pow(2) + (-x2().pow(2))).is_zero());
        let p = c(t()) * x2() + y2();
        assert_eq!(&p + &MultiPoly::zero(2), p);
        assert_eq!(p + x2(), c(t() + RingElem::one()) * x2() + y2());
        assert!(matches!(
            MultiPoly::var(3, 0).try_add(&x2()),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn mul_examples() {
        assert_eq!((x2() + y2()) * (x2() - y2()), x2().pow(2) - y2().pow(2));
        let p = c(t()) * y2() + x2().pow(2);
        assert_eq!(
            p.pow(2),
            c(t() * t()) * y2().pow(2) + c(t().scale(&2.into())) * x2().pow(2) * y2() + x2().pow(4)
        );
    }

    #[test]
    fn degree_and_leading_form() {
        let p = c(t().pow(3)) * x2().pow(2) * y2();
        assert_eq!(p.total_degree().unwrap(), 3);
        assert_eq!(c(t().pow(5)).total_degree().unwrap(), 0);
        let q = x2() + c(t()) * x2().pow(2) + y2();
        assert_eq!(q.leading_form().unwrap(), c(t()) * x2().pow(2));
        assert_eq!(MultiPoly::zero(2).total_degree(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn content_examples() {
        let p = c(t()) * x2() + c(t() * t()) * y2();
        assert_eq!(p.content().unwrap(), t());
        assert_eq!((x2() + y2()).content().unwrap(), RingElem::one());
    }

    #[test]
    fn scaled_integrality() {
        let s = ScaledPoly::new(c(t()) * y2() + x2().pow(2), t()).unwrap();
        assert!(!s.is_integral());
        let r = ScaledPoly::new(c(t() * t()) * y2() + c(t()) * x2().pow(2), t()).unwrap();
        assert!(r.is_integral());
        assert_eq!(r.num(), &(c(t()) * y2() + x2().pow(2)));
    }

    #[test]
    fn substitute_univariate_square() {
        let p = MultiPoly::var(1, 0).pow(2);
        let arg = ScaledPoly::new(c(t()) * y2() + x2().pow(2), t()).unwrap();
        let s = p.substitute(&[arg]).unwrap();
        assert_eq!(s.den(), &(t() * t()));
        assert_eq!(s.num(), &(c(t()) * y2() + x2().pow(2)).pow(2));
    }

    #[test]
    fn derivative() {
        let p = c(t()) * x2().pow(3) * y2();
        assert_eq!(p.derivative(0), c(t().scale(&3.into())) * x2().pow(2) * y2());
        assert!(c(t()).derivative(1).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = x2() + c(t()) * y2();
        let b = x2().pow(2) - y2() + c(RingElem::from_int(3));
        assert_eq!((&a * &b).checked_div(&b), Some(a.clone()));
        assert_eq!((&a + &MultiPoly::one(2)).checked_div(&b), None);
    }

    #[test]
    fn display_order() {
        let p = y2().pow(2) + x2() * y2() + x2().pow(2) + MultiPoly::one(2) - x2();
        assert_eq!(p.to_string(), "X^2 + X*Y + Y^2 - X + 1");
        let q = c(-(t() + RingElem::one())) * x2();
        assert_eq!(q.to_string(), "-(t + 1)*X");
    }
}
