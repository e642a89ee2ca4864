mod common;

use common::{nonzero_ring, ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use polyauto::{Fraction, RingElem};
use proptest::prelude::*;

/// Monic gcd over Q[t] by the Euclidean algorithm, low-to-high coefficients.
fn rational_gcd(x: &RingElem, y: &RingElem) -> Vec<BigRational> {
    let lift = |r: &RingElem| -> Vec<BigRational> {
        r.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
    };
    let trim = |v: &mut Vec<BigRational>| {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
    };
    let (mut a, mut b) = (lift(x), lift(y));
    while !b.is_empty() {
        while a.len() >= b.len() {
            let q = a.last().unwrap() / b.last().unwrap();
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[i + shift] = &a[i + shift] - &q * c;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    let lc = a.last().cloned().unwrap_or_else(BigRational::one);
    a.iter().map(|c| c / &lc).collect()
}

fn content(r: &RingElem) -> BigInt {
    r.coeffs().iter().fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, c))
}

/// The gcd over Z[t]: integer content gcd times the primitive lift of the Q[t] gcd.
fn oracle_gcd(x: &RingElem, y: &RingElem) -> RingElem {
    let monic = rational_gcd(x, y);
    let den = monic
        .iter()
        .fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    let ints: Vec<BigInt> = monic.iter().map(|c| (c * &den).to_integer()).collect();
    let prim = RingElem::from_coeffs(ints);
    let g = content(&prim);
    let prim = RingElem::from_coeffs(prim.coeffs().iter().map(|c| c / &g).collect());
    let k = num_integer::Integer::gcd(&content(x), &content(y));
    prim.scale(&k)
}

fn associates(a: &RingElem, b: &RingElem) -> bool {
    a == b || *a == -b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn commutative_ring_axioms(a in ring(3, 9), b in ring(3, 9), c in ring(3, 9)) {
        let zero = RingElem::zero();
        let one = RingElem::one();
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&a + &(-&a), zero.clone());
        prop_assert_eq!(&a - &b, &a + &(-&b));
    }

    #[test]
    fn arithmetic_matches_evaluation(a in ring(4, 9), b in ring(4, 9), t in -5i64..=5) {
        let t = BigInt::from(t);
        prop_assert_eq!((&a + &b).eval(&t), a.eval(&t) + b.eval(&t));
        prop_assert_eq!((&a * &b).eval(&t), a.eval(&t) * b.eval(&t));
        prop_assert_eq!(a.pow(3).eval(&t), num_traits::pow(a.eval(&t), 3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gcd_matches_rational_oracle(a in ring(4, 6), b in ring(4, 6), c in ring(2, 4)) {
        prop_assume!(!a.is_zero() || !b.is_zero());
        let (x, y) = (&a * &c, &b * &c);
        prop_assume!(!x.is_zero() || !y.is_zero());
        let g = RingElem::gcd(&x, &y).unwrap();
        prop_assert!(associates(&g, &oracle_gcd(&x, &y)), "gcd({}, {}) = {}", x, y, g);
        prop_assert!(!g.leading_is_negative());
    }

    #[test]
    fn gcd_divides_and_cofactors_are_coprime(a in nonzero_ring(4, 6), b in nonzero_ring(4, 6)) {
        let g = RingElem::gcd(&a, &b).unwrap();
        let (qa, qb) = (RingElem::exact_div(&g, &a).unwrap(), RingElem::exact_div(&g, &b).unwrap());
        prop_assert!(RingElem::gcd(&qa, &qb).unwrap().is_unit());
    }

    #[test]
    fn division_inverts_multiplication(a in ring(4, 9), d in nonzero_ring(3, 9)) {
        let p = &a * &d;
        prop_assert!(RingElem::divides(&d, &p).unwrap());
        prop_assert_eq!(RingElem::exact_div(&d, &p).unwrap(), a.clone());
        let r = &p + &RingElem::one();
        if !d.is_unit() {
            prop_assert!(!RingElem::divides(&d, &r).unwrap());
        }
    }

    #[test]
    fn fractions_form_a_field(a in ring(2, 6), b in nonzero_ring(2, 6), c in ring(2, 6), d in nonzero_ring(2, 6)) {
        let x = Fraction::new(a, b).unwrap();
        let y = Fraction::new(c, d).unwrap();
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&x.div(&y).unwrap() * &y, x.clone());
            prop_assert!(y.den().coeffs().last().unwrap().is_positive());
        }
    }
}

#[test]
fn division_by_zero_is_an_error() {
    assert!(RingElem::divides(&RingElem::zero(), &RingElem::t()).is_err());
    assert!(RingElem::gcd(&RingElem::zero(), &RingElem::zero()).is_err());
    assert!(Fraction::new(RingElem::one(), RingElem::zero()).is_err());
}
