#![allow(dead_code)]

use num_bigint::BigInt;
use polyauto::automorphism::Factor;
use polyauto::{Fraction, Monomial, MultiPoly, RingElem, ScaledPoly};
use proptest::prelude::*;

pub fn ring(max_deg: usize, bound: i64) -> impl Strategy<Value = RingElem> {
    prop::collection::vec(-bound..=bound, 0..=max_deg + 1)
        .prop_map(|cs| RingElem::from_coeffs(cs.into_iter().map(BigInt::from).collect()))
}

pub fn nonzero_ring(max_deg: usize, bound: i64) -> impl Strategy<Value = RingElem> {
    ring(max_deg, bound).prop_filter("nonzero", |r| !r.is_zero())
}

/// A polynomial in `nvars` variables with total degree at most `max_deg`.
pub fn poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let mono = prop::collection::vec(0..=max_deg, nvars)
        .prop_filter("degree", move |e| e.iter().sum::<u32>() <= max_deg);
    prop::collection::vec((mono, ring(2, 3)), 0..=max_terms).prop_map(move |ts| {
        MultiPoly::from_terms(nvars, ts.into_iter().map(|(e, c)| (Monomial::new(e), c)))
            .expect("valid terms")
    })
}

/// A one-variable polynomial with no constant term and degree in `1..=max_deg`.
pub fn univariate0(max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(ring(2, 3), 1..=max_deg as usize).prop_map(|cs| {
        MultiPoly::from_terms(
            1,
            cs.into_iter()
                .enumerate()
                .map(|(i, c)| (Monomial::new(vec![i as u32 + 1]), c)),
        )
        .expect("valid terms")
    })
}

pub fn unit() -> impl Strategy<Value = Fraction> {
    prop_oneof![Just(Fraction::one()), Just(Fraction::from_int(-1))]
}

/// A generator of the tame group over `R` in `n` variables.
pub fn tame_factor(n: usize, max_deg: u32) -> impl Strategy<Value = Factor> {
    let elementary = (0..n, poly(n, max_deg, 3)).prop_map(move |(target, p)| {
        let free = MultiPoly::from_terms(
            n,
            p.terms()
                .filter(|(m, _)| m.exps()[target] == 0)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
        .expect("valid terms");
        Factor::elementary(target, ScaledPoly::from_poly(free)).expect("rule is free of target")
    });
    let swap = (0..n, 0..n)
        .prop_filter("distinct", |(i, j)| i != j)
        .prop_map(move |(i, j)| Factor::swap(n, i, j));
    let translation = prop::collection::vec(ring(1, 3), n).prop_map(|v| Factor::Translation {
        shift: v.into_iter().map(Fraction::from_ring).collect(),
    });
    let diagonal = unit().prop_map(|a| Factor::Diagonal { a });
    prop_oneof![4 => elementary, 1 => swap, 1 => translation, 1 => diagonal]
}

pub fn tame_word(n: usize, max_len: usize, max_deg: u32) -> impl Strategy<Value = Vec<Factor>> {
    prop::collection::vec(tame_factor(n, max_deg), 1..=max_len)
}

/// A point of `Z^n` and a value for `t`.
pub fn point(n: usize) -> impl Strategy<Value = (Vec<BigInt>, BigInt)> {
    (prop::collection::vec(-4i64..=4, n), -3i64..=3)
        .prop_map(|(p, t)| (p.into_iter().map(BigInt::from).collect(), BigInt::from(t)))
}
