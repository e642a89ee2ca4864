//! Length-four automorphisms and stable tameness.
//!
//! The central object is the commutator `G1^-1 o F1^-1 o G1 o F1` with
//! `F1 = (X, Y + C(bX)/a)` and `G1 = (X + D(aY)/b, Y)`. After adding one
//! variable `W` it is tamely equivalent to a map of length three over
//! `R[X]`; [`stable_tame_pipeline`] builds that chain and checks every link.

use std::fmt;

use crate::automorphism::{compose_factors, invert_factors, Factor, PolyMap};
use crate::catalog;
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::grammar::{parse_map, parse_ring, parse_univariate};
use crate::length::{length_decompose, length_over_extension};
use crate::multipoly::{Monomial, MultiPoly, ScaledPoly};
use crate::ring::RingElem;
use crate::tameness::{tame_check, CoefficientMode, NotTameWitness};

fn univariate(p: &MultiPoly, what: &str) -> Result<()> {
    if p.nvars() != 1 {
        return Err(Error::Precondition(format!(
            "{what} must be a polynomial in one variable"
        )));
    }
    Ok(())
}

fn vanishes_at_zero(p: &MultiPoly, what: &str) -> Result<()> {
    if !p.constant_term().is_zero() {
        return Err(Error::Precondition(format!("{what}(0) must be 0, got {p}")));
    }
    Ok(())
}

/// `C` with `C(bX) = A(X)`, if every coefficient of `X^k` in `A` is divisible by `b^k`.
pub fn extract_scaled(a: &MultiPoly, b: &RingElem) -> Result<Option<MultiPoly>> {
    univariate(a, "A")?;
    vanishes_at_zero(a, "A")?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut terms = Vec::new();
    for (m, c) in a.terms() {
        let k = m.exps()[0];
        match c.checked_div(&b.pow(k)) {
            Some(q) => terms.push((m.clone(), q)),
            None => return Ok(None),
        }
    }
    MultiPoly::from_terms(1, terms).map(Some)
}

/// `C(bX)` for a one-variable `C`.
pub fn scale_argument(c: &MultiPoly, b: &RingElem) -> Result<MultiPoly> {
    univariate(c, "C")?;
    c.compose(&[MultiPoly::var(1, 0).scale(b)])
}

/// Gcd of `b` with the content of `B`.
pub fn content_gcd(p: &MultiPoly, b: &RingElem) -> Result<RingElem> {
    if p.is_zero() {
        return RingElem::gcd(b, &RingElem::zero());
    }
    RingElem::gcd(&p.content()?, b)
}

/// Whether `A(B/b)` is integral. When it is and `gcd(B, b) = 1`, the
/// extraction `A = C(bX)` is attempted and a failure is reported as an error.
pub fn check_lemma1_hypothesis(a: &MultiPoly, bpoly: &MultiPoly, b: &RingElem) -> Result<bool> {
    univariate(a, "A")?;
    univariate(bpoly, "B")?;
    vanishes_at_zero(a, "A")?;
    vanishes_at_zero(bpoly, "B")?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let arg = ScaledPoly::new(bpoly.clone(), b.clone())?;
    let integral = a.substitute(&[arg])?.is_integral();
    if integral && content_gcd(bpoly, b)?.is_unit() && extract_scaled(a, b)?.is_none() {
        return Err(Error::Verification {
            step: "C(bX) extraction".into(),
            lhs: format!("A = {a}, B = {bpoly}, b = {b}"),
            rhs: "A(X) = C(bX) for some C over R".into(),
        });
    }
    Ok(integral)
}

/// `(X, Y + A(X)/a)` or `(X + B(Y)/b, Y)` data, numerator in one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryData {
    pub numerator: MultiPoly,
    pub denominator: RingElem,
}

impl ElementaryData {
    pub fn new(numerator: MultiPoly, denominator: RingElem) -> Result<Self> {
        univariate(&numerator, "numerator")?;
        vanishes_at_zero(&numerator, "numerator")?;
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ElementaryData {
            numerator,
            denominator,
        })
    }

    pub fn parse(numerator: &str, denominator: &str) -> Result<Self> {
        Self::new(parse_univariate(numerator)?, parse_ring(denominator)?)
    }

    /// The plane factor changing `target` by this rule in the other variable.
    pub fn factor(&self, target: usize) -> Result<Factor> {
        let var = 1 - target;
        let num = self.numerator.reindex(2, &[var])?;
        Factor::elementary(target, ScaledPoly::new(num, self.denominator.clone())?)
    }
}

/// `G2 o F2 o G1 o F1` with `Fi = (X, Y + Ai(X)/ai)` and `Gi = (X + Bi(Y)/bi, Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthFourData {
    pub f1: ElementaryData,
    pub g1: ElementaryData,
    pub f2: ElementaryData,
    pub g2: ElementaryData,
}

impl LengthFourData {
    /// `[G2, F2, G1, F1]`.
    pub fn factors(&self) -> Result<Vec<Factor>> {
        Ok(vec![
            self.g2.factor(0)?,
            self.f2.factor(1)?,
            self.g1.factor(0)?,
            self.f1.factor(1)?,
        ])
    }

    pub fn compose(&self) -> Result<PolyMap> {
        compose_factors(&self.factors()?, 2)
    }
}

/// Outcome of the length-four structure check.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    /// `A2(X) = C(b1 X)`.
    pub c: Option<MultiPoly>,
    /// `B1(Y) = D(a2 Y)`.
    pub d: Option<MultiPoly>,
    pub gcd_a2_b1: RingElem,
}

impl StructureReport {
    /// True when both extractions succeed and `gcd(a2, b1) = 1`.
    pub fn holds(&self) -> bool {
        self.c.is_some() && self.d.is_some() && self.gcd_a2_b1.is_unit()
    }
}

/// Checks `A2 = C(b1 X)`, `B1 = D(a2 Y)` and `gcd(a2, b1) = 1` for an integral composition.
pub fn check_length4_structure(data: &LengthFourData) -> Result<StructureReport> {
    for (name, e) in [("F1", &data.f1), ("G1", &data.g1), ("F2", &data.f2), ("G2", &data.g2)] {
        if !content_gcd(&e.numerator, &e.denominator)?.is_unit() {
            return Err(Error::Precondition(format!(
                "{name}: numerator and denominator are not coprime"
            )));
        }
    }
    let f = data.compose()?;
    if !f.is_integral() {
        return Err(Error::Precondition(format!("composition {f} is not over R")));
    }
    Ok(StructureReport {
        c: extract_scaled(&data.f2.numerator, &data.g1.denominator)?,
        d: extract_scaled(&data.g1.numerator, &data.f2.denominator)?,
        gcd_a2_b1: RingElem::gcd(&data.f2.denominator, &data.g1.denominator)?,
    })
}

/// Data `C, D, a, b` of the commutator with `F1 = (X, Y + C(bX)/a)` and `G1 = (X + D(aY)/b, Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthFourSpec {
    pub c: MultiPoly,
    pub d: MultiPoly,
    pub a: RingElem,
    pub b: RingElem,
}

impl LengthFourSpec {
    pub fn new(c: MultiPoly, d: MultiPoly, a: RingElem, b: RingElem) -> Result<Self> {
        univariate(&c, "C")?;
        univariate(&d, "D")?;
        vanishes_at_zero(&c, "C")?;
        vanishes_at_zero(&d, "D")?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !RingElem::gcd(&a, &b)?.is_unit() {
            return Err(Error::Precondition(format!("gcd({a}, {b}) is not a unit")));
        }
        Ok(LengthFourSpec { c, d, a, b })
    }

    /// Parses `C = ...; D = ...; a = ...; b = ...` in any order.
    pub fn parse(src: &str) -> Result<Self> {
        let mut fields: [Option<&str>; 4] = [None; 4];
        for part in src.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| Error::Syntax {
                line: 1,
                column: 1,
                message: format!("expected 'key = value', found '{part}'"),
            })?;
            let slot = match key.trim() {
                "C" => 0,
                "D" => 1,
                "a" => 2,
                "b" => 3,
                other => {
                    return Err(Error::Syntax {
                        line: 1,
                        column: 1,
                        message: format!("unknown field '{other}' (expected C, D, a or b)"),
                    })
                }
            };
            fields[slot] = Some(value.trim());
        }
        let get = |i: usize, name: &str| {
            fields[i].ok_or_else(|| Error::Syntax {
                line: 1,
                column: 1,
                message: format!("missing field '{name}'"),
            })
        };
        Self::new(
            parse_univariate(get(0, "C")?)?,
            parse_univariate(get(1, "D")?)?,
            parse_ring(get(2, "a")?)?,
            parse_ring(get(3, "b")?)?,
        )
    }

    pub fn is_degenerate(&self) -> bool {
        self.c.is_zero() || self.d.is_zero()
    }

    /// `F1 = (X, Y + C(bX)/a)`.
    pub fn f1(&self) -> Result<Factor> {
        ElementaryData::new(scale_argument(&self.c, &self.b)?, self.a.clone())?.factor(1)
    }

    /// `G1 = (X + D(aY)/b, Y)`.
    pub fn g1(&self) -> Result<Factor> {
        ElementaryData::new(scale_argument(&self.d, &self.a)?, self.b.clone())?.factor(0)
    }

    /// `[G1^-1, F1^-1, G1, F1]`.
    pub fn commutator_factors(&self) -> Result<Vec<Factor>> {
        let (f1, g1) = (self.f1()?, self.g1()?);
        Ok(vec![g1.inverse()?, f1.inverse()?, g1, f1])
    }

    pub fn display(&self) -> String {
        let z = ["Z".to_string()];
        format!(
            "C = {}; D = {}; a = {}; b = {}",
            self.c.display_with(&z),
            self.d.display_with(&z),
            self.a,
            self.b
        )
    }
}

impl fmt::Display for LengthFourSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// The commutator composed from its four factors.
pub fn build_commutator(spec: &LengthFourSpec) -> Result<PolyMap> {
    compose_factors(&spec.commutator_factors()?, 2)
}

/// The commutator from its closed form, without composing factors:
/// `X + [D(aY + C(bX)) - D(aY + C(bX) - C(bX + D(aY + C(bX))))]/b` and
/// `Y + [C(bX) - C(bX + D(aY + C(bX)))]/a`.
pub fn commutator_formula(spec: &LengthFourSpec) -> Result<PolyMap> {
    let x = ScaledPoly::var(2, 0);
    let y = ScaledPoly::var(2, 1);
    let at = |p: &MultiPoly, arg: ScaledPoly| p.substitute(&[arg]);
    let bx = x.scale(&Fraction::from_ring(spec.b.clone()));
    let ay = y.scale(&Fraction::from_ring(spec.a.clone()));
    let cbx = at(&spec.c, bx.clone())?;
    let inner = &ay + &cbx;
    let d_inner = at(&spec.d, inner.clone())?;
    let c_shift = at(&spec.c, &bx + &d_inner)?;
    let d_back = at(&spec.d, &inner - &c_shift)?;
    let inv = |r: &RingElem| Fraction::new(RingElem::one(), r.clone());
    let first = &x + &(&d_inner - &d_back).scale(&inv(&spec.b)?);
    let second = &y + &(&cbx - &c_shift).scale(&inv(&spec.a)?);
    PolyMap::new(vec![first, second])
}

/// Integrality of the commutator against `a | content(D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub integral: bool,
    pub a_divides_d: bool,
}

impl ClaimCheck {
    /// The implication `integral => a | D`.
    pub fn holds(&self) -> bool {
        !self.integral || self.a_divides_d
    }
}

pub fn verify_divisibility_claim(spec: &LengthFourSpec) -> Result<ClaimCheck> {
    let integral = build_commutator(spec)?.is_integral();
    let a_divides_d = spec.d.is_zero() || RingElem::divides(&spec.a, &spec.d.content()?)?;
    Ok(ClaimCheck {
        integral,
        a_divides_d,
    })
}

/// One tame-equivalence link: `result = left o previous o right`, and when
/// `claimed` is present, `result` also equals the composition of `claimed`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainStep {
    pub name: String,
    pub left: Vec<Factor>,
    pub right: Vec<Factor>,
    pub claimed: Option<Vec<Factor>>,
    pub result: PolyMap,
}

impl ChainStep {
    pub fn apply(&self, prev: &PolyMap) -> Result<PolyMap> {
        let n = prev.dim();
        let mut m = prev.compose(&compose_factors(&self.right, n)?)?;
        for f in self.left.iter().rev() {
            m = f.apply_after(&m)?;
        }
        PolyMap::with_names(m.coords().to_vec(), prev.names().to_vec())
    }

    fn is_tame(&self) -> bool {
        self.left.iter().chain(&self.right).all(Factor::is_over_ring)
    }
}

/// The end of a chain that is left to a length-three argument over `R[x_fixed]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub map: PolyMap,
    pub fixed_variable: usize,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StableTamenessCertificate {
    pub original: PolyMap,
    pub added_variables: usize,
    pub chain: Vec<ChainStep>,
    pub residual: Option<Residual>,
}

fn mismatch(step: &str, lhs: &PolyMap, rhs: &PolyMap) -> Error {
    Error::Verification {
        step: step.into(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

impl StableTamenessCertificate {
    pub fn start(&self) -> PolyMap {
        let m = self.original.stabilize(self.added_variables);
        match self.chain.first() {
            Some(s) => PolyMap::with_names(m.coords().to_vec(), s.result.names().to_vec())
                .unwrap_or(m),
            None => m,
        }
    }

    /// Replays every link and returns the final map.
    pub fn replay(&self) -> Result<PolyMap> {
        let mut cur = self.start();
        for step in &self.chain {
            if !step.is_tame() {
                return Err(Error::Verification {
                    step: step.name.clone(),
                    lhs: "link factors".into(),
                    rhs: "factors over R".into(),
                });
            }
            let next = step.apply(&cur)?;
            if next != step.result {
                return Err(mismatch(&step.name, &next, &step.result));
            }
            if let Some(c) = &step.claimed {
                let f = compose_factors(c, next.dim())?;
                if f != next {
                    return Err(mismatch(&step.name, &next, &f));
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Replays the chain and checks its end: the residual if one is flagged,
    /// otherwise a factorization over R or the identity.
    pub fn verify(&self) -> Result<()> {
        let end = self.replay()?;
        match &self.residual {
            Some(r) => {
                if r.map != end {
                    return Err(mismatch("residual", &end, &r.map));
                }
                if !r.map.is_integral() {
                    return Err(Error::Verification {
                        step: "residual".into(),
                        lhs: r.map.to_string(),
                        rhs: "a map over R".into(),
                    });
                }
                let d = length_over_extension(&r.map, r.fixed_variable)?;
                if d.length() != r.length || r.length > 3 {
                    return Err(Error::Verification {
                        step: "residual length".into(),
                        lhs: d.length().to_string(),
                        rhs: r.length.to_string(),
                    });
                }
                Ok(())
            }
            None => {
                let fs = self.tame_factorization().ok_or_else(|| Error::Verification {
                    step: "terminal".into(),
                    lhs: end.to_string(),
                    rhs: "a factorization over R".into(),
                })?;
                let start = self.start();
                let back = compose_factors(&fs, start.dim())?;
                if back != start {
                    return Err(mismatch("tame factorization", &back, &start));
                }
                Ok(())
            }
        }
    }

    /// A factorization of the stabilized original over R, when the chain ends
    /// in one (or in the identity).
    pub fn tame_factorization(&self) -> Option<Vec<Factor>> {
        if self.residual.is_some() {
            return None;
        }
        let mut middle: Vec<Factor> = match self.chain.last() {
            Some(ChainStep {
                claimed: Some(c), ..
            }) => c.clone(),
            Some(s) if s.result.is_identity() => vec![],
            None if self.original.is_identity() => vec![],
            _ => return None,
        };
        if !middle.iter().all(Factor::is_over_ring) {
            return None;
        }
        let mut out = Vec::new();
        for s in &self.chain {
            out.extend(invert_factors(&s.left).ok()?);
        }
        out.append(&mut middle);
        for s in self.chain.iter().rev() {
            out.extend(invert_factors(&s.right).ok()?);
        }
        Some(out)
    }
}

fn elem(target: usize, rule: ScaledPoly) -> Result<Factor> {
    Factor::elementary(target, rule)
}

/// `p` with the variables listed in `zero` set to 0.
fn restrict(p: &ScaledPoly, zero: &[usize]) -> Result<ScaledPoly> {
    let n = p.nvars();
    let args: Vec<ScaledPoly> = (0..n)
        .map(|i| {
            if zero.contains(&i) {
                ScaledPoly::zero(n)
            } else {
                ScaledPoly::var(n, i)
            }
        })
        .collect();
    p.substitute(&args)
}

const PIPELINE_NAMES: [&str; 3] = ["X", "Y", "W"];

/// The four factors `[G2', F2', G1', F1']` of the normalized map and the
/// translation `(X, Y + ty(X), W + tw(X))` they were split from.
pub struct PipelineFactors {
    pub factors: Vec<Factor>,
    pub translation: [ScaledPoly; 2],
}

/// Rewrites the commutator in `s = X + aW` and strips the part of each factor
/// depending on `X` alone, moving it into a running translation.
pub fn pipeline_factors(spec: &LengthFourSpec) -> Result<PipelineFactors> {
    let n = 3;
    let a = Fraction::from_ring(spec.a.clone());
    let inv_a = a.inv()?;
    let inv_ab = Fraction::new(RingElem::one(), &spec.a * &spec.b)?;
    let s = &ScaledPoly::var(n, 0) + &ScaledPoly::var(n, 2).scale(&a);
    let y = ScaledPoly::var(n, 1);
    let cbs = spec
        .c
        .substitute(&[s.scale(&Fraction::from_ring(spec.b.clone()))])?
        .scale(&inv_a);
    let day = spec.d.substitute(&[y.scale(&a)])?.scale(&inv_ab);
    let f1 = elem(1, cbs)?;
    let g1 = elem(2, day)?;
    // applied in this order: F1, G1, F1^-1, G1^-1
    let sequence = [f1.clone(), g1.clone(), f1.inverse()?, g1.inverse()?];
    let mut ty = ScaledPoly::zero(n);
    let mut tw = ScaledPoly::zero(n);
    let mut reduced = Vec::new();
    for f in &sequence {
        let Factor::Elementary { target, rule } = f else {
            unreachable!()
        };
        let args = [ScaledPoly::var(n, 0), &y + &ty, &ScaledPoly::var(n, 2) + &tw];
        let moved = rule.substitute(&args)?;
        let constant = restrict(&moved, &[1, 2])?;
        let rest = &moved - &constant;
        if *target == 1 {
            ty = &ty + &constant;
        } else {
            tw = &tw + &constant;
        }
        reduced.push(elem(*target, rest)?);
    }
    reduced.reverse();
    Ok(PipelineFactors {
        factors: reduced,
        translation: [ty, tw],
    })
}

/// The chain from `(F, W)` to a residual of length at most three over `R[X]`.
pub fn stable_tame_pipeline(spec: &LengthFourSpec) -> Result<StableTamenessCertificate> {
    let f = build_commutator(spec)?;
    pipeline_for(f.clone(), f, spec, Vec::new())
}

/// The same chain for `D_{u,1} o F` with a unit `u`, prefixed by removing the diagonal.
pub fn stable_tame_pipeline_with_diagonal(
    spec: &LengthFourSpec,
    unit: &RingElem,
) -> Result<StableTamenessCertificate> {
    if !unit.is_unit() {
        return Err(Error::Precondition(format!("{unit} is not a unit")));
    }
    let f = build_commutator(spec)?;
    let diag = Factor::Diagonal {
        a: Fraction::from_ring(unit.clone()),
    };
    let original = diag.apply_after(&f)?;
    let step = ChainStep {
        name: "diagonal".into(),
        left: vec![diag.inverse()?],
        right: vec![],
        claimed: None,
        result: f.stabilize(1).renamed(&PIPELINE_NAMES),
    };
    pipeline_for(original, f, spec, vec![step])
}

fn pipeline_for(
    original: PolyMap,
    f: PolyMap,
    spec: &LengthFourSpec,
    mut chain: Vec<ChainStep>,
) -> Result<StableTamenessCertificate> {
    if !f.is_integral() {
        return Err(Error::Precondition(format!(
            "the commutator is not over R ({} does not divide D)",
            spec.a
        )));
    }
    if spec.is_degenerate() {
        return Ok(StableTamenessCertificate {
            original,
            added_variables: 1,
            chain,
            residual: None,
        });
    }
    let n = 3;
    let a = Fraction::from_ring(spec.a.clone());
    let x = ScaledPoly::var(2, 0);
    let y = ScaledPoly::var(2, 1);
    let p = (f.coord(0) - &x).scale(&a.inv()?);
    if !p.is_integral() {
        return Err(Error::Verification {
            step: "first coordinate".into(),
            lhs: f.coord(0).to_string(),
            rhs: format!("X + ({})*P with P over R", spec.a),
        });
    }
    let q = f.coord(1) - &y;
    let p3 = p.extend(n);
    let q3 = q.extend(n);

    let mut e_matrix = vec![vec![Fraction::zero(); n]; n];
    for (i, row) in e_matrix.iter_mut().enumerate() {
        row[i] = Fraction::one();
    }
    e_matrix[0][2] = a.clone();
    let e = Factor::linear(e_matrix);
    let mut cur = f.stabilize(1).renamed(&PIPELINE_NAMES);

    let conj = ChainStep {
        name: "E-conjugation".into(),
        left: vec![e.inverse()?],
        right: vec![elem(2, p3.clone())?, e],
        claimed: None,
        result: PolyMap::identity(n),
    };
    cur = conj.apply(&cur)?;
    chain.push(ChainStep {
        result: cur.clone(),
        ..conj
    });

    let l_factors = vec![
        elem(1, -&restrict(&q3, &[1, 2])?)?,
        elem(2, -&restrict(&p3, &[1, 2])?)?,
    ];
    let norm = ChainStep {
        name: "L-normalization".into(),
        left: l_factors.clone(),
        right: vec![],
        claimed: None,
        result: PolyMap::identity(n),
    };
    cur = norm.apply(&cur)?;
    chain.push(ChainStep {
        result: cur.clone(),
        ..norm
    });

    let pf = pipeline_factors(spec)?;
    let t_map = PolyMap::with_names(
        vec![
            ScaledPoly::var(n, 0),
            &ScaledPoly::var(n, 1) + &pf.translation[0],
            &ScaledPoly::var(n, 2) + &pf.translation[1],
        ],
        cur.names().to_vec(),
    )?;
    let lt = compose_factors(&l_factors, n)?.compose(&t_map)?;
    if !lt.is_identity() {
        return Err(mismatch("L-normalization", &lt, &PolyMap::identity(n)));
    }
    chain.push(ChainStep {
        name: "factorization".into(),
        left: vec![],
        right: vec![],
        claimed: Some(pf.factors.clone()),
        result: cur.clone(),
    });

    let first = pf.factors[3].clone();
    let res = ChainStep {
        name: "residual".into(),
        left: vec![],
        right: vec![first.inverse()?],
        claimed: None,
        result: PolyMap::identity(n),
    };
    cur = res.apply(&cur)?;
    chain.push(ChainStep {
        result: cur.clone(),
        ..res
    });
    let length = length_over_extension(&cur, 0)?.length();
    let cert = StableTamenessCertificate {
        original,
        added_variables: 1,
        chain,
        residual: Some(Residual {
            map: cur,
            fixed_variable: 0,
            length,
        }),
    };
    cert.verify()?;
    Ok(cert)
}

/// An asserted equality of two maps.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub lhs: PolyMap,
    pub rhs: PolyMap,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// `lhs_i - rhs_i` for each coordinate that differs.
    pub fn differences(&self) -> Vec<(usize, ScaledPoly)> {
        self.lhs
            .coords()
            .iter()
            .zip(self.rhs.coords())
            .enumerate()
            .filter(|(_, (l, r))| l != r)
            .map(|(i, (l, r))| (i, l - r))
            .collect()
    }
}

/// Everything established about the length-four example with `a != b`.
#[derive(Clone, Debug)]
pub struct Example9 {
    pub factors: Vec<Factor>,
    pub map: PolyMap,
    pub witness: Option<NotTameWitness>,
    pub length: usize,
    /// The conjugated three-variable map.
    pub conjugated: PolyMap,
    /// The normalized map against the printed three-factor product.
    pub printed_identity: IdentityCheck,
    /// The normalized map against the corrected four-factor product.
    pub corrected_identity: IdentityCheck,
    pub certificate: StableTamenessCertificate,
}

fn map_factor(m: &PolyMap, target: usize) -> Result<Factor> {
    let rule = m.coord(target) - &ScaledPoly::var(m.dim(), target);
    for (i, c) in m.coords().iter().enumerate() {
        if i != target && *c != ScaledPoly::var(m.dim(), i) {
            return Err(Error::InvalidFactor(format!("{m} is not elementary in coordinate {target}")));
        }
    }
    elem(target, rule)
}

/// Builds the example, its conjugated stabilization and the factorization of
/// `(F, Z)` over R.
pub fn verify_example9() -> Result<Example9> {
    let list = catalog::example9_factor_list()?;
    let map = compose_factors(&list.factors, 2)?;
    let witness = tame_check(&map, CoefficientMode::Ring)?.witness().cloned();
    let length = length_decompose(&map)?.length;

    let n = 3;
    let names = ["X", "Y", "Z"];
    let t = Fraction::from_ring(RingElem::t());
    let z = ScaledPoly::var(n, 2);
    let qtilde = parse_map(&format!("({}, Y, Z)", catalog::EXAMPLE9_QTILDE))?;
    let qtilde = qtilde.coord(0).clone();
    let mut pi_matrix = vec![vec![Fraction::zero(); n]; n];
    pi_matrix[0][1] = -Fraction::one();
    pi_matrix[1][0] = Fraction::one();
    pi_matrix[2][2] = Fraction::one();
    let pi = Factor::linear(pi_matrix);
    let eta = elem(1, -&z.scale(&t))?;
    let tau = elem(2, qtilde)?;
    let phi = elem(0, -&z.scale(&t))?;
    let start = map.stabilize(1).renamed(&names);
    let conj = ChainStep {
        name: "conjugation".into(),
        left: vec![pi, eta],
        right: vec![tau, phi],
        claimed: None,
        result: PolyMap::identity(n),
    };
    let conjugated = conj.apply(&start)?;

    let p1 = conjugated.coord(1) - &ScaledPoly::var(n, 1);
    let q1 = conjugated.coord(2) - &ScaledPoly::var(n, 2);
    let theta = vec![
        elem(1, -&restrict(&p1, &[1, 2])?)?,
        elem(2, -&restrict(&q1, &[1, 2])?)?,
    ];
    let norm = ChainStep {
        name: "Theta-normalization".into(),
        left: theta,
        right: vec![],
        claimed: None,
        result: PolyMap::identity(n),
    };
    let normalized = norm.apply(&conjugated)?;

    let parse3 = |s: &str| -> Result<PolyMap> { Ok(parse_map(s)?.renamed(&names)) };
    let printed_f1 = map_factor(&parse3(catalog::EXAMPLE9_TILDE_F1_PRINTED)?, 1)?;
    let g1 = map_factor(&parse3(catalog::EXAMPLE9_TILDE_G1)?, 2)?;
    let printed = vec![printed_f1.inverse()?, g1.clone(), printed_f1];
    let printed_identity = IdentityCheck {
        lhs: normalized.clone(),
        rhs: compose_factors(&printed, n)?.renamed(&names),
    };

    let f1 = map_factor(&parse3(catalog::EXAMPLE9_TILDE_F1_CORRECTED)?, 1)?;
    let s = map_factor(&parse3(catalog::EXAMPLE9_CORRECTION)?, 1)?;
    let corrected = vec![s, f1.inverse()?, g1, f1];
    let corrected_identity = IdentityCheck {
        lhs: normalized.clone(),
        rhs: compose_factors(&corrected, n)?.renamed(&names),
    };

    let certificate = StableTamenessCertificate {
        original: map.clone(),
        added_variables: 1,
        chain: vec![
            ChainStep {
                result: conjugated.clone(),
                ..conj
            },
            ChainStep {
                result: normalized.clone(),
                ..norm
            },
            ChainStep {
                name: "factorization".into(),
                left: vec![],
                right: vec![],
                claimed: Some(corrected),
                result: normalized,
            },
        ],
        residual: None,
    };
    certificate.verify()?;
    Ok(Example9 {
        factors: list.factors,
        map,
        witness,
        length,
        conjugated,
        printed_identity,
        corrected_identity,
        certificate,
    })
}

/// Factor data of a commutator, read back from its spec:
/// `F1 = (X, Y + C(bX)/a)`, `G1 = (X + D(aY)/b, Y)`, `F2 = F1^-1`, `G2 = G1^-1`.
pub fn commutator_data(spec: &LengthFourSpec) -> Result<LengthFourData> {
    let reduce = |num: MultiPoly, den: &RingElem| -> Result<ElementaryData> {
        let s = ScaledPoly::new(num, den.clone())?;
        ElementaryData::new(s.num().clone(), s.den().clone())
    };
    let cb = scale_argument(&spec.c, &spec.b)?;
    let da = scale_argument(&spec.d, &spec.a)?;
    Ok(LengthFourData {
        f1: reduce(cb.clone(), &spec.a)?,
        g1: reduce(da.clone(), &spec.b)?,
        f2: reduce(-&cb, &spec.a)?,
        g2: reduce(-&da, &spec.b)?,
    })
}

/// The one-variable polynomial `c X^k`.
pub fn monomial(c: RingElem, k: u32) -> MultiPoly {
    MultiPoly::term(Monomial::new(vec![k]), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::jacobian_det;
    use crate::tameness::FailedStep;

    fn uni(s: &str) -> MultiPoly {
        parse_univariate(s).unwrap()
    }

    #[test]
    fn extraction_examples() {
        let t = RingElem::t();
        assert_eq!(extract_scaled(&uni("t*X + t^3*X^3"), &t).unwrap(), Some(uni("X + X^3")));
        assert_eq!(extract_scaled(&uni("X"), &t).unwrap(), None);
        let b = parse_ring("t+1").unwrap();
        assert_eq!(
            extract_scaled(&uni("(t+1)^3*X^2"), &b).unwrap(),
            Some(uni("(t+1)*X^2"))
        );
        assert!(extract_scaled(&uni("X + 1"), &t).is_err());
    }

    #[test]
    fn integral_composition_examples() {
        let t = RingElem::t();
        assert!(!check_lemma1_hypothesis(&uni("X^2"), &uni("t*X + X^2"), &t).unwrap());
        assert!(check_lemma1_hypothesis(&MultiPoly::zero(1), &uni("X"), &t).unwrap());
        assert!(check_lemma1_hypothesis(&uni("t^2*X^2 + t*X"), &uni("X + X^3"), &t).unwrap());
    }

    #[test]
    fn spec_parsing() {
        let s = LengthFourSpec::parse(catalog::EXAMPLE5_SPEC).unwrap();
        assert_eq!(s.a, RingElem::t());
        assert_eq!(LengthFourSpec::parse(&s.display()).unwrap(), s);
        assert!(LengthFourSpec::parse("C = X; D = X; a = t; b = t").is_err());
        assert!(LengthFourSpec::parse("C = X + 1; D = X; a = t; b = 1").is_err());
        assert!(LengthFourSpec::parse("C = X; D = X; a = t").is_err());
    }

    #[test]
    fn example5_commutator() {
        let s = catalog::example5_spec().unwrap();
        let f = build_commutator(&s).unwrap();
        assert!(f.is_integral());
        assert_eq!(f, commutator_formula(&s).unwrap());
        assert!(jacobian_det(&f).num().is_one());
        let claim = verify_divisibility_claim(&s).unwrap();
        assert!(claim.integral && claim.a_divides_d);
        let w = tame_check(&f, CoefficientMode::Ring).unwrap();
        assert!(!w.is_tame());
    }

    #[test]
    fn degenerate_commutators() {
        let s = LengthFourSpec::parse("C = 0; D = t*Z; a = t; b = 1").unwrap();
        assert!(build_commutator(&s).unwrap().is_identity());
        let cert = stable_tame_pipeline(&s).unwrap();
        assert!(cert.residual.is_none());
        cert.verify().unwrap();
        assert_eq!(cert.tame_factorization().unwrap(), vec![]);
    }

    #[test]
    fn claim_fails_to_be_integral() {
        let s = LengthFourSpec::parse("C = Z; D = Z; a = t; b = 1").unwrap();
        let c = verify_divisibility_claim(&s).unwrap();
        assert!(!c.integral && !c.a_divides_d && c.holds());
    }

    #[test]
    fn example5_pipeline() {
        let s = catalog::example5_spec().unwrap();
        let cert = stable_tame_pipeline(&s).unwrap();
        cert.verify().unwrap();
        let r = cert.residual.as_ref().unwrap();
        assert_eq!(r.length, 3);
        let names: Vec<&str> = cert.chain.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["E-conjugation", "L-normalization", "factorization", "residual"]);
    }

    #[test]
    fn example5_structure() {
        let s = catalog::example5_spec().unwrap();
        let rep = check_length4_structure(&commutator_data(&s).unwrap()).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.c, Some(uni("-(t+1)*X^2")));
        assert_eq!(rep.d, Some(uni("t*X")));
    }

    #[test]
    fn example9_structure() {
        let data = LengthFourData {
            f1: ElementaryData::parse("X^2", "t").unwrap(),
            g1: ElementaryData::parse("(t+1)*X", "1").unwrap(),
            f2: ElementaryData::parse("(t-1)*X", "1").unwrap(),
            g2: ElementaryData::parse("-X^2", "t").unwrap(),
        };
        let rep = check_length4_structure(&data).unwrap();
        assert_eq!(rep.c, Some(uni("(t-1)*X")));
        assert_eq!(rep.d, Some(uni("(t+1)*X")));
        assert!(rep.gcd_a2_b1.is_one());
    }

    #[test]
    fn example9_certificate() {
        let e = verify_example9().unwrap();
        assert_eq!(e.length, 4);
        assert!(matches!(
            e.witness.as_ref().map(|w| &w.failed_step),
            Some(FailedStep::Step4 { .. } | FailedStep::Step6 { .. } | FailedStep::Step7 { .. })
        ));
        assert!(!e.printed_identity.holds());
        assert!(e.corrected_identity.holds());
        let fs = e.certificate.tame_factorization().unwrap();
        assert!(fs.iter().all(Factor::is_over_ring));
        assert_eq!(compose_factors(&fs, 3).unwrap(), e.map.stabilize(1));
    }

    #[test]
    fn diagonal_variant() {
        let s = catalog::example5_spec().unwrap();
        let cert = stable_tame_pipeline_with_diagonal(&s, &RingElem::from_int(-1)).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.chain[0].name, "diagonal");
    }
}
