//! Length of plane automorphisms.
//!
//! An automorphism `F` over a domain is written `F = L o D o F_m o ... o F_1`
//! with `L` a translation, `D = (aX, Y)` and each `F_i` either `(X, Y + f(X))`
//! or `(X + g(Y), Y)` with `f(0) = g(0) = 0`. The length is the least such `m`.
//!
//! The search runs over any [`Field`]. A field-mode reduction first produces a
//! word `M_0 S_1 M_1 ... S_n M_n` of linear maps `M_i` and nonlinear
//! syllables `S_i = (X, Y + h_i(X))`. Syllables separated by a triangular
//! linear map are merged, each syllable may be flipped to the upper form
//! through `rho = (-Y, X)`, and each may be conjugated by `diag(l, 1/l)`.
//! Every linear piece between syllables is then written with the fewest
//! shears, the outermost ones being absorbed into neighbouring syllables.

use std::fmt;

use crate::automorphism::{compose_factors, Factor, PolyMap};
use crate::error::{Error, Result};
use crate::field::{fpoly_to_scaled, scaled_to_fpoly, FPoly, Field, Mat2, RationalFunction};
use crate::fraction::Fraction;
use crate::multipoly::{Monomial, MultiPoly};

/// Which coordinate a one-variable elementary map changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `(X, Y + f(X))`.
    Lower,
    /// `(X + g(Y), Y)`.
    Upper,
}

impl Kind {
    fn other(self) -> Kind {
        match self {
            Kind::Lower => Kind::Upper,
            Kind::Upper => Kind::Lower,
        }
    }
}

/// A one-variable elementary map; `rule[k]` is the coefficient of degree `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Shear<F> {
    pub kind: Kind,
    pub rule: Vec<F>,
}

impl<F: Field> Shear<F> {
    pub fn new(kind: Kind, rule: Vec<F>) -> Self {
        Shear {
            kind,
            rule: trim(rule),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rule.is_empty()
    }

    /// The map as a pair of coordinate polynomials.
    pub fn to_map(&self) -> [FPoly<F>; 2] {
        let (x, y) = (FPoly::var(2, 0), FPoly::var(2, 1));
        match self.kind {
            Kind::Lower => [x.clone(), y.add(&FPoly::univariate(2, 0, &self.rule))],
            Kind::Upper => [x.add(&FPoly::univariate(2, 1, &self.rule)), y],
        }
    }

    pub fn inverse(&self) -> Self {
        Shear {
            kind: self.kind,
            rule: self.rule.iter().map(|c| c.fneg()).collect(),
        }
    }
}

impl<F: Field> fmt::Display for Shear<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.to_map();
        write!(f, "({}, {})", m[0], m[1])
    }
}

fn trim<F: Field>(mut v: Vec<F>) -> Vec<F> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rule_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => x.fadd(y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => F::zero(),
            })
            .collect(),
    )
}

/// `h(p X) * s`.
fn rule_rescale<F: Field>(h: &[F], p: &F, s: &F) -> Vec<F> {
    let mut pk = F::one();
    let mut out = Vec::with_capacity(h.len());
    for c in h {
        out.push(c.fmul(&pk).fmul(s));
        pk = pk.fmul(p);
    }
    trim(out)
}

fn linear_rule<F: Field>(a: F) -> Vec<F> {
    trim(vec![F::zero(), a])
}

/// `F = L o D o factors[0] o factors[1] o ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<F> {
    /// `L = (X + c, Y + d)`.
    pub translation: [F; 2],
    /// `D = (aX, Y)`.
    pub diagonal: F,
    pub factors: Vec<Shear<F>>,
}

impl<F: Field> Decomposition<F> {
    pub fn length(&self) -> usize {
        self.factors.len()
    }

    /// Composes the decomposition back into coordinates.
    pub fn recompose(&self) -> [FPoly<F>; 2] {
        let mut acc = [FPoly::var(2, 0), FPoly::var(2, 1)];
        for s in self.factors.iter().rev() {
            let m = s.to_map();
            acc = [m[0].compose(&acc), m[1].compose(&acc)];
        }
        [
            acc[0]
                .scale(&self.diagonal)
                .add(&FPoly::constant(2, self.translation[0].clone())),
            acc[1].add(&FPoly::constant(2, self.translation[1].clone())),
        ]
    }
}

fn not_auto(msg: impl Into<String>) -> Error {
    Error::NotAnAutomorphism(msg.into())
}

enum Item<F> {
    Lin(Mat2<F>),
    Syl(Vec<F>),
}

fn linear_part<F: Field>(h: &[FPoly<F>; 2]) -> Mat2<F> {
    let e = |i: usize, j: usize| h[i].coeff(&Monomial::var(2, j));
    Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

/// `h2 / h1` when `h2` is an `F`-multiple of `h1`.
fn ratio<F: Field>(h1: &FPoly<F>, h2: &FPoly<F>) -> Option<F> {
    let (m, c1) = h1.leading_term()?;
    let c = h2.coeff(m).fdiv(c1)?;
    (!c.is_zero() && h1.scale(&c) == *h2).then_some(c)
}

/// Field-mode reduction of a map fixing the origin into `item_1 o item_2 o ...`.
fn extract_word<F: Field>(g: &[FPoly<F>; 2]) -> Result<Vec<Item<F>>> {
    let mut h = g.clone();
    let cap = 2 * (h[0].total_degree().unwrap_or(0) + h[1].total_degree().unwrap_or(0)) + 4;
    let mut items = Vec::new();
    for _ in 0..cap {
        let d1 = h[0].total_degree().ok_or_else(|| not_auto("zero coordinate"))?;
        let d2 = h[1].total_degree().ok_or_else(|| not_auto("zero coordinate"))?;
        if d1 == 0 || d2 == 0 {
            return Err(not_auto("constant coordinate"));
        }
        if d1 == 1 && d2 == 1 {
            let m = linear_part(&h);
            if m.det().is_zero() {
                return Err(not_auto("singular linear part"));
            }
            items.push(Item::Lin(m));
            return Ok(items);
        }
        let h1 = h[0].leading_form().expect("nonzero");
        let h2 = h[1].leading_form().expect("nonzero");
        if d1 == d2 {
            let c = ratio(&h1, &h2).ok_or_else(|| not_auto("leading forms are not proportional"))?;
            h[1] = h[1].sub(&h[0].scale(&c));
            items.push(Item::Lin(Mat2::lower(c)));
        } else if d1 > d2 {
            h.swap(0, 1);
            items.push(Item::Lin(Mat2::swap()));
        } else {
            if d2 % d1 != 0 {
                return Err(not_auto("degree of P does not divide degree of Q"));
            }
            let k = (d2 / d1) as u32;
            let c = ratio(&h1.pow(k), &h2)
                .ok_or_else(|| not_auto("leading form of Q is not a multiple of a power of P's"))?;
            h[1] = h[1].sub(&h[0].pow(k).scale(&c));
            let mut rule = vec![F::zero(); k as usize + 1];
            rule[k as usize] = c;
            items.push(Item::Syl(rule));
        }
    }
    Err(Error::Verification {
        step: "field reduction".into(),
        lhs: "iteration cap reached".into(),
        rhs: "termination".into(),
    })
}

/// `M_0 S_1 M_1 ... S_n M_n` with all syllables lower.
#[derive(Clone, Debug)]
struct Word<F> {
    mats: Vec<Mat2<F>>,
    syls: Vec<Vec<F>>,
}

impl<F: Field> Word<F> {
    fn from_items(items: Vec<Item<F>>) -> Self {
        let mut mats = Vec::new();
        let mut syls = Vec::new();
        let mut cur = Mat2::identity();
        for it in items {
            match it {
                Item::Lin(m) => cur = cur.mul(&m),
                Item::Syl(h) => {
                    mats.push(std::mem::replace(&mut cur, Mat2::identity()));
                    syls.push(h);
                }
            }
        }
        mats.push(cur);
        Word { mats, syls }
    }

    /// Merges syllables across lower-triangular links until none remain.
    fn reduce(&mut self) {
        loop {
            let n = self.syls.len();
            let Some(i) = (1..n).find(|&i| self.mats[i].is_lower()) else {
                return;
            };
            // S_{i-1} o b = b o S' with S' = h(pX)/r for b = [[p, 0], [q, r]].
            let b = self.mats.remove(i);
            let p = b.get(0, 0).clone();
            let rinv = b.get(1, 1).finv().expect("invertible");
            let moved = rule_rescale(&self.syls[i - 1], &p, &rinv);
            let next = self.syls.remove(i);
            self.mats[i - 1] = self.mats[i - 1].mul(&b);
            let merged = rule_add(&moved, &next);
            if merged.is_empty() {
                self.syls.remove(i - 1);
                let right = self.mats.remove(i);
                self.mats[i - 1] = self.mats[i - 1].mul(&right);
            } else {
                self.syls[i - 1] = merged;
            }
        }
    }

    /// Makes every linear piece unimodular by pushing `diag(d, 1)` rightwards.
    fn unimodular(&mut self) -> Result<()> {
        let n = self.syls.len();
        for i in 0..n {
            let d = self.mats[i].det();
            if d.is_one() {
                continue;
            }
            let dinv = d.finv().ok_or_else(|| not_auto("singular linear part"))?;
            self.mats[i] = self.mats[i].mul(&Mat2::diag(dinv.clone(), F::one()));
            // diag(d, 1) o (X, Y + h(X)) = (X, Y + h(X / d)) o diag(d, 1)
            self.syls[i] = rule_rescale(&self.syls[i], &dinv, &F::one());
            self.mats[i + 1] = Mat2::diag(d, F::one()).mul(&self.mats[i + 1]);
        }
        if !self.mats[n].det().is_one() {
            return Err(not_auto("Jacobian determinant is not constant one after scaling"));
        }
        Ok(())
    }
}

fn shear_mat<F: Field>(k: Kind, a: F) -> Mat2<F> {
    match k {
        Kind::Lower => Mat2::lower(a),
        Kind::Upper => Mat2::upper(a),
    }
}

/// Parameters of an alternating word of exactly `m` shears, the first of kind
/// `start`, whose product is `p`.
fn solve_exact<F: Field>(p: &Mat2<F>, start: Kind, m: usize) -> Option<Vec<F>> {
    if start == Kind::Upper {
        // rho^-1 U(a) rho = L(-a) and rho^-1 L(a) rho = U(-a)
        let rho = Mat2::rho();
        let q = rho.inv()?.mul(p).mul(&rho);
        return solve_exact(&q, Kind::Lower, m).map(|v| v.iter().map(|c| c.fneg()).collect());
    }
    let [[p11, p12], [p21, p22]] = p.m.clone();
    let one = F::one();
    let candidate: Option<Vec<F>> = match m {
        0 => Some(vec![]),
        1 => Some(vec![p21.clone()]),
        2 => Some(vec![p21.clone(), p12.clone()]),
        3 => {
            if p12.is_zero() {
                Some(vec![p21.clone(), F::zero(), F::zero()])
            } else {
                let a = p22.fsub(&one).fdiv(&p12)?;
                let c = p11.fsub(&one).fdiv(&p12)?;
                Some(vec![a, p12.clone(), c])
            }
        }
        _ => {
            for s in [0i64, 1, -1, 2, -2, 3, -3, 5, 7] {
                let sf = F::from_int(s);
                let rest = Mat2::lower(sf.fneg()).mul(p);
                if let Some(mut tail) = solve_exact(&rest, Kind::Upper, m - 1) {
                    tail.insert(0, sf);
                    return Some(tail);
                }
            }
            None
        }
    };
    let v = candidate?;
    let prod = word_product(start, &v);
    (prod == *p).then_some(v)
}

fn word_product<F: Field>(start: Kind, params: &[F]) -> Mat2<F> {
    let mut k = start;
    let mut acc = Mat2::identity();
    for a in params {
        acc = acc.mul(&shear_mat(k, a.clone()));
        k = k.other();
    }
    acc
}

/// Shears of a linear piece: `(kind, parameter)` left to right.
type ShearWord<F> = Vec<(Kind, F)>;

/// Fewest shears not absorbable by the neighbours of kinds `left` and `right`.
fn piece_word<F: Field>(p: &Mat2<F>, left: Option<Kind>, right: Option<Kind>) -> (usize, ShearWord<F>) {
    let mut best: Option<(usize, ShearWord<F>)> = None;
    for m in 0..=6usize {
        // A word of `m` nonzero shears costs at least `m - 2`.
        if best.as_ref().is_some_and(|(c, _)| *c + 2 <= m) {
            break;
        }
        for start in [Kind::Lower, Kind::Upper] {
            if m == 0 && start == Kind::Upper {
                continue;
            }
            let Some(params) = solve_exact(p, start, m) else {
                continue;
            };
            let mut word: ShearWord<F> = Vec::new();
            let mut k = start;
            for a in params {
                word.push((k, a));
                k = k.other();
            }
            let cost = piece_cost(&word, left, right);
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, word));
            }
        }
    }
    best.expect("every unimodular matrix is a product of at most four shears")
}

fn piece_cost<F: Field>(word: &[(Kind, F)], left: Option<Kind>, right: Option<Kind>) -> usize {
    let nz: Vec<&(Kind, F)> = word.iter().filter(|(_, a)| !a.is_zero()).collect();
    let mut merged: Vec<Kind> = Vec::new();
    for (k, _) in nz {
        if merged.last() != Some(k) {
            merged.push(*k);
        }
    }
    let mut cost = merged.len();
    if cost > 0 && Some(merged[0]) == left {
        cost -= 1;
        merged.remove(0);
    }
    if !merged.is_empty() && merged.last().copied() == right {
        cost -= 1;
    }
    cost
}

/// `diag(l, 1/l)`.
fn delta<F: Field>(l: &F) -> Mat2<F> {
    Mat2::diag(l.clone(), l.finv().expect("nonzero"))
}

struct Plan<F> {
    kinds: Vec<Kind>,
    lambdas: Vec<F>,
    pieces: Vec<Mat2<F>>,
}

fn end_candidates<F: Field>(vals: [&F; 4], invert: [bool; 4]) -> Vec<F> {
    let mut out = vec![F::one()];
    for (v, inv) in vals.into_iter().zip(invert) {
        if v.is_zero() {
            continue;
        }
        let c = if inv { v.finv().unwrap() } else { v.clone() };
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Chooses the diagonal parameters for one assignment of syllable kinds.
fn plan<F: Field>(word: &Word<F>, kinds: Vec<Kind>) -> Plan<F> {
    let n = word.syls.len();
    let rho = Mat2::rho();
    let rho_inv = rho.inv().expect("invertible");
    let mut pieces = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut p = word.mats[i].clone();
        if i > 0 && kinds[i - 1] == Kind::Upper {
            p = rho.mul(&p);
        }
        if i < n && kinds[i] == Kind::Upper {
            p = p.mul(&rho_inv);
        }
        pieces.push(p);
    }
    if n == 0 {
        return Plan {
            kinds,
            lambdas: vec![],
            pieces,
        };
    }
    // Link i joins syllables i-1 and i: l_i = kappa * l_{i-1} makes piece i cost 0.
    let links: Vec<Option<F>> = (1..n)
        .map(|i| {
            let p = &pieces[i];
            match (kinds[i - 1], kinds[i]) {
                (Kind::Lower, Kind::Upper) => p.get(0, 0).finv(),
                (Kind::Upper, Kind::Lower) => {
                    let v = p.get(1, 1).clone();
                    (!v.is_zero()).then_some(v)
                }
                _ => None,
            }
        })
        .collect();
    let p0 = &pieces[0];
    let pn = &pieces[n];
    let left_cost = |l: &F| piece_word(&p0.mul(&delta(l)), None, Some(kinds[0])).0;
    let right_cost = |mu: &F| {
        piece_word(&delta(mu).inv().unwrap().mul(pn), Some(kinds[n - 1]), None).0
    };
    let lc = end_candidates(
        [p0.get(0, 0), p0.get(0, 1), p0.get(1, 0), p0.get(1, 1)],
        [true, false, true, false],
    );
    let rc = end_candidates(
        [pn.get(0, 0), pn.get(0, 1), pn.get(1, 0), pn.get(1, 1)],
        [false, false, true, true],
    );
    let argmin = |cands: &[F], f: &dyn Fn(&F) -> usize| {
        cands
            .iter()
            .map(|c| (f(c), c.clone()))
            .min_by_key(|(k, _)| *k)
            .expect("nonempty")
    };
    let (lmin, lbest) = argmin(&lc, &left_cost);
    let (rmin, rbest) = argmin(&rc, &right_cost);

    let mut lambdas: Vec<F> = vec![F::one(); n];
    let all_linked = links.iter().all(|l| l.is_some());
    // Product of link factors from syllable `a` up to `b`.
    let chain = |a: usize, b: usize| {
        (a + 1..=b).fold(F::one(), |acc, i| acc.fmul(links[i - 1].as_ref().unwrap()))
    };
    if all_linked {
        let k = chain(0, n - 1);
        let mut cands = lc.clone();
        for mu in &rc {
            let l = mu.fdiv(&k).unwrap();
            if !cands.contains(&l) {
                cands.push(l);
            }
        }
        let (coupled, l0) = argmin(&cands, &|l: &F| left_cost(l) + right_cost(&l.fmul(&k)));
        if n >= 2 && lmin + rmin + 2 < coupled {
            lambdas[0] = lbest;
            lambdas[n - 1] = rbest;
            for i in (1..n - 1).rev() {
                lambdas[i] = lambdas[i + 1].fdiv(links[i].as_ref().unwrap()).unwrap();
            }
        } else {
            lambdas[0] = l0;
            for i in 1..n {
                lambdas[i] = lambdas[i - 1].fmul(links[i - 1].as_ref().unwrap());
            }
        }
    } else {
        let first_break = links.iter().position(|l| l.is_none()).unwrap() + 1;
        let last_break = links.iter().rposition(|l| l.is_none()).unwrap() + 1;
        lambdas[0] = lbest;
        for i in 1..first_break {
            lambdas[i] = lambdas[i - 1].fmul(links[i - 1].as_ref().unwrap());
        }
        for i in first_break..last_break {
            lambdas[i] = match &links[i - 1] {
                Some(k) if i != first_break => lambdas[i - 1].fmul(k),
                _ => F::one(),
            };
        }
        lambdas[n - 1] = rbest;
        for i in (last_break..n - 1).rev() {
            lambdas[i] = lambdas[i + 1].fdiv(links[i].as_ref().unwrap()).unwrap();
        }
    }
    Plan {
        kinds,
        lambdas,
        pieces,
    }
}

/// Turns a plan into an explicit list of shears (left to right).
fn realize<F: Field>(word: &Word<F>, plan: &Plan<F>) -> Vec<Shear<F>> {
    let n = word.syls.len();
    let mut syls: Vec<Shear<F>> = (0..n)
        .map(|i| {
            let l = &plan.lambdas[i];
            let linv = l.finv().unwrap();
            match plan.kinds[i] {
                // delta^-1 o (X, Y + h(X)) o delta = (X, Y + l h(l X))
                Kind::Lower => Shear::new(Kind::Lower, rule_rescale(&word.syls[i], l, l)),
                // (X, Y + h(X)) = rho^-1 o (X - h(Y), Y) o rho, then conjugated
                Kind::Upper => {
                    let g: Vec<F> = word.syls[i].iter().map(|c| c.fneg()).collect();
                    Shear::new(Kind::Upper, rule_rescale(&g, &linv, &linv))
                }
            }
        })
        .collect();
    let mut out: Vec<Shear<F>> = Vec::new();
    let mut pending_left: Vec<Shear<F>> = Vec::new();
    for i in 0..=n {
        let mut p = plan.pieces[i].clone();
        if i > 0 {
            p = delta(&plan.lambdas[i - 1]).inv().unwrap().mul(&p);
        }
        if i < n {
            p = p.mul(&delta(&plan.lambdas[i]));
        }
        let left = (i > 0).then(|| plan.kinds[i - 1]);
        let right = (i < n).then(|| plan.kinds[i]);
        let (_, w) = piece_word(&p, left, right);
        let mut w: Vec<(Kind, F)> = w.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        if i > 0 {
            while let Some((k, a)) = w.first().cloned() {
                if k != plan.kinds[i - 1] {
                    break;
                }
                let s = &mut syls[i - 1];
                s.rule = rule_add(&s.rule, &linear_rule(a));
                w.remove(0);
            }
            out.append(&mut pending_left);
            out.push(syls[i - 1].clone());
        }
        let mut tail: Vec<(Kind, F)> = Vec::new();
        if i < n {
            while let Some((k, a)) = w.last().cloned() {
                if k != plan.kinds[i] {
                    break;
                }
                tail.push((k, a));
                w.pop();
            }
            for (_, a) in tail {
                let s = &mut syls[i];
                s.rule = rule_add(&linear_rule(a), &s.rule);
            }
        }
        for (k, a) in w {
            out.push(Shear::new(k, linear_rule(a)));
        }
    }
    merge_shears(out)
}

fn merge_shears<F: Field>(v: Vec<Shear<F>>) -> Vec<Shear<F>> {
    let mut out: Vec<Shear<F>> = Vec::new();
    for s in v {
        if s.is_identity() {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.kind == s.kind => {
                last.rule = rule_add(&last.rule, &s.rule);
                if last.is_identity() {
                    out.pop();
                }
            }
            _ => out.push(s),
        }
    }
    out
}

/// Minimal-length decomposition of a plane automorphism over a field.
pub fn decompose<F: Field>(f: &[FPoly<F>; 2]) -> Result<Decomposition<F>> {
    let d = search(f)?;
    let back = d.recompose();
    if back[0] != f[0] || back[1] != f[1] {
        return Err(Error::Verification {
            step: "length decomposition".into(),
            lhs: format!("({}, {})", back[0], back[1]),
            rhs: format!("({}, {})", f[0], f[1]),
        });
    }
    Ok(d)
}

/// The shortest decomposition found, before the recomposition check.
fn search<F: Field>(f: &[FPoly<F>; 2]) -> Result<Decomposition<F>> {
    let jac = f[0]
        .derivative(0)
        .mul(&f[1].derivative(1))
        .sub(&f[0].derivative(1).mul(&f[1].derivative(0)));
    if !jac.is_constant() || jac.is_zero() {
        return Err(not_auto("Jacobian determinant is not a nonzero constant"));
    }
    let a = jac.constant_term();
    let translation = [f[0].constant_term(), f[1].constant_term()];
    let ainv = a.finv().expect("nonzero");
    let g = [
        f[0].sub(&FPoly::constant(2, translation[0].clone())).scale(&ainv),
        f[1].sub(&FPoly::constant(2, translation[1].clone())),
    ];
    let mut word = Word::from_items(extract_word(&g)?);
    word.reduce();
    word.unimodular()?;
    let n = word.syls.len();
    let mut best: Option<Vec<Shear<F>>> = None;
    for mask in 0..(1u64 << n) {
        let kinds: Vec<Kind> = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Kind::Upper
                } else {
                    Kind::Lower
                }
            })
            .collect();
        let p = plan(&word, kinds);
        let shears = realize(&word, &p);
        if best.as_ref().is_none_or(|b| shears.len() < b.len()) {
            best = Some(shears);
        }
    }
    Ok(Decomposition {
        translation,
        diagonal: a,
        factors: best.expect("at least one assignment"),
    })
}

/// The decomposition of a map over `Z[t]` as engine factors.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthDecomposition {
    pub diagonal: Factor,
    pub translation: Factor,
    /// `F_m, ..., F_1` left to right, over `K`.
    pub elementary_factors: Vec<Factor>,
    pub length: usize,
}

impl LengthDecomposition {
    /// `L, D, F_m, ..., F_1`.
    pub fn all_factors(&self) -> Vec<Factor> {
        let mut v = vec![self.translation.clone(), self.diagonal.clone()];
        v.extend(self.elementary_factors.iter().cloned());
        v
    }
}

fn shear_to_factor(s: &Shear<Fraction>) -> Result<Factor> {
    let (target, var) = match s.kind {
        Kind::Lower => (1, 0),
        Kind::Upper => (0, 1),
    };
    Factor::elementary(target, fpoly_to_scaled(&FPoly::univariate(2, var, &s.rule)))
}

/// Length decomposition `F = L o D o F_m o ... o F_1` of a plane map.
pub fn length_decompose(f: &PolyMap) -> Result<LengthDecomposition> {
    if f.dim() != 2 {
        return Err(Error::Shape {
            expected: 2,
            found: f.dim(),
        });
    }
    let g = [scaled_to_fpoly(f.coord(0)), scaled_to_fpoly(f.coord(1))];
    let d = search(&g)?;
    let elementary_factors = d
        .factors
        .iter()
        .map(shear_to_factor)
        .collect::<Result<Vec<_>>>()?;
    let out = LengthDecomposition {
        diagonal: Factor::Diagonal { a: d.diagonal.clone() },
        translation: Factor::Translation {
            shift: d.translation.to_vec(),
        },
        length: elementary_factors.len(),
        elementary_factors,
    };
    let back = compose_factors(&out.all_factors(), 2)?;
    if back != *f {
        return Err(Error::Verification {
            step: "length decomposition".into(),
            lhs: back.to_string(),
            rhs: f.to_string(),
        });
    }
    Ok(out)
}

/// Length of `f` over `Z[t][x_fixed]`, for a map that fixes variable `fixed`
/// and whose other coordinates, read as polynomials in the remaining two
/// variables, have coefficients in `Frac(Z[t][x_fixed])`.
pub fn length_over_extension(f: &PolyMap, fixed: usize) -> Result<Decomposition<RationalFunction>> {
    if f.dim() != 3 {
        return Err(Error::Shape {
            expected: 3,
            found: f.dim(),
        });
    }
    if *f.coord(fixed) != crate::multipoly::ScaledPoly::var(3, fixed) {
        return Err(Error::Precondition(format!(
            "coordinate {fixed} of {f} is not fixed"
        )));
    }
    let others: Vec<usize> = (0..3).filter(|&i| i != fixed).collect();
    let convert = |i: usize| -> Result<FPoly<RationalFunction>> {
        let s = f.coord(i);
        let den = MultiPoly::constant(1, s.den().clone());
        let mut grouped: std::collections::BTreeMap<Monomial, MultiPoly> = Default::default();
        for (m, c) in s.num().terms() {
            let e = m.exps();
            let key = Monomial::new(vec![e[others[0]], e[others[1]]]);
            let coeff = MultiPoly::term(Monomial::new(vec![e[fixed]]), c.clone());
            let entry = grouped.entry(key).or_insert_with(|| MultiPoly::zero(1));
            *entry = &*entry + &coeff;
        }
        let mut p = FPoly::zero(2);
        for (m, c) in grouped {
            p = p.add(&FPoly::term(m, RationalFunction::new(c, den.clone())?));
        }
        Ok(p)
    };
    let g = [convert(others[0])?, convert(others[1])?];
    decompose(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::nagata;
    use crate::grammar::parse_map;

    #[test]
    fn translation_has_length_zero() {
        let f = parse_map("(X + t, Y + 3)").unwrap();
        let d = length_decompose(&f).unwrap();
        assert_eq!(d.length, 0);
        assert_eq!(d.diagonal, Factor::Diagonal { a: Fraction::one() });
    }

    #[test]
    fn nagata_has_length_three() {
        let d = length_decompose(&nagata()).unwrap();
        assert_eq!(d.length, 3);
    }

    #[test]
    fn single_shears() {
        assert_eq!(length_decompose(&parse_map("(X, Y + X^2)").unwrap()).unwrap().length, 1);
        assert_eq!(length_decompose(&parse_map("(X + t*Y^3, Y)").unwrap()).unwrap().length, 1);
        assert_eq!(length_decompose(&parse_map("(-X, Y)").unwrap()).unwrap().length, 0);
        assert_eq!(length_decompose(&parse_map("(Y, X)").unwrap()).unwrap().length, 3);
    }

    #[test]
    fn diagonal_needs_four_shears() {
        let f = parse_map("(2*X, (1)/(2)*Y)").unwrap();
        assert_eq!(length_decompose(&f).unwrap().length, 4);
    }

    #[test]
    fn swap_with_nonlinear_tail() {
        let f = parse_map("(Y, X + Y^2)").unwrap();
        let d = length_decompose(&f).unwrap();
        assert!(d.length <= 3);
    }
}
