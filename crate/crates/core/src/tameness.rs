//! The degree-reduction decision procedure for `Tame_2(R)`.
//!
//! Each iteration composes an affine or elementary map on the left of the
//! current pair `(P, Q)` so that `tdeg = deg P + deg Q` drops, swapping the
//! coordinates when `deg P > deg Q`. The run ends either at an affine map with
//! unit Jacobian (a [`TameCertificate`]) or at a stuck state (a
//! [`NotTameWitness`]).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::automorphism::{compose_factors, Factor, PolyMap};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::multipoly::{Monomial, ScaledPoly};
use crate::ring::RingElem;

/// Where constants are sought: in `R = Z[t]` or in its fraction field `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientMode {
    Ring,
    Field,
}

impl fmt::Display for CoefficientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientMode::Ring => write!(f, "ring"),
            CoefficientMode::Field => write!(f, "field"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// An affine map lowering `tdeg` when both degrees agree.
    AffineReduce,
    /// Exchange of the two coordinates.
    Swap,
    /// `(P, Q - c P^k)`.
    ElementaryReduce,
}

impl StepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::AffineReduce => "affine-reduce",
            StepKind::Swap => "swap",
            StepKind::ElementaryReduce => "elementary-reduce",
        }
    }
}

/// One iteration: `factor` was composed on the left of the current map.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub factor: Factor,
    pub tdeg_before: usize,
    pub tdeg_after: usize,
}

/// A successful run: `F = tau_1^-1 o ... o tau_k^-1 o terminal`.
#[derive(Clone, Debug, PartialEq)]
pub struct TameCertificate {
    pub mode: CoefficientMode,
    pub steps: Vec<ReductionStep>,
    pub terminal: Factor,
}

/// The check that could not be passed.
#[derive(Clone, Debug, PartialEq)]
pub enum FailedStep {
    /// Equal degrees above one, and no affine map lowers `tdeg`.
    Step4 {
        h1: ScaledPoly,
        h2: ScaledPoly,
        /// `h2 / h1` when the leading forms are proportional over `K`.
        ratio: Option<Fraction>,
        /// Set when the forms are proportional over `K` but no affine map over
        /// `R` was found; the verdict then rests on the search heuristic.
        needs_review: bool,
    },
    /// `deg P < deg Q` and `h2 = c h1^k` has no admissible `c`.
    Step6 {
        h1: ScaledPoly,
        h2: ScaledPoly,
        d1: usize,
        d2: usize,
        /// The constant `c` in `K` when `h2` is a `K`-multiple of `h1^k`.
        required: Option<Fraction>,
    },
    /// Affine terminal state whose Jacobian is not a unit (or a coordinate is constant).
    Step7 { det: ScaledPoly },
}

impl FailedStep {
    pub fn name(&self) -> &'static str {
        match self {
            FailedStep::Step4 { .. } => "step 4",
            FailedStep::Step6 { .. } => "step 6",
            FailedStep::Step7 { .. } => "step 7",
        }
    }
}

/// A stuck state of the procedure.
#[derive(Clone, Debug, PartialEq)]
pub struct NotTameWitness {
    pub mode: CoefficientMode,
    pub steps: Vec<ReductionStep>,
    pub stuck_map: PolyMap,
    pub failed_step: FailedStep,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TameOutcome {
    Tame(TameCertificate),
    NotTame(NotTameWitness),
}

impl TameOutcome {
    pub fn is_tame(&self) -> bool {
        matches!(self, TameOutcome::Tame(_))
    }

    pub fn certificate(&self) -> Option<&TameCertificate> {
        match self {
            TameOutcome::Tame(c) => Some(c),
            TameOutcome::NotTame(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&NotTameWitness> {
        match self {
            TameOutcome::Tame(_) => None,
            TameOutcome::NotTame(w) => Some(w),
        }
    }
}

fn require_plane(f: &PolyMap) -> Result<()> {
    if f.dim() != 2 {
        return Err(Error::Shape {
            expected: 2,
            found: f.dim(),
        });
    }
    Ok(())
}

/// `deg P + deg Q` for a plane map.
pub fn tdeg(f: &PolyMap) -> Result<usize> {
    require_plane(f)?;
    f.total_degree()
}

/// `h2 / h1` when `h2` is a `K`-multiple of `h1`.
fn proportionality(h1: &ScaledPoly, h2: &ScaledPoly) -> Option<Fraction> {
    let (m, c1) = h1.num().leading_term()?;
    let ratio = Fraction::new(
        h2.num().coeff(m) * h1.den(),
        c1 * h2.den(),
    )
    .ok()?;
    if ratio.is_zero() {
        return None;
    }
    (h1.scale(&ratio) == *h2).then_some(ratio)
}

fn admissible(c: &Fraction, mode: CoefficientMode) -> bool {
    match mode {
        CoefficientMode::Ring => c.is_integral(),
        CoefficientMode::Field => true,
    }
}

/// Integer extended gcd: `(g, x, y)` with `x a + y b = g`.
fn int_ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Extra cofactor degree tried beyond `deg a + deg b` in [`bezout`].
const BEZOUT_SLACK: usize = 16;

/// Searches `x, y` in `Z[t]` with `x a + y b = 1` and `deg x, deg y <= N`,
/// for increasing `N` up to `deg a + deg b + 16`. Each bound is an exact
/// integer linear system. `None` means no pair within the bound, which is
/// conclusive only when `(a, b)` is a proper ideal.
pub fn bezout(a: &RingElem, b: &RingElem) -> Option<(RingElem, RingElem)> {
    if a.is_zero() || b.is_zero() {
        let u = if a.is_zero() { b } else { a };
        let inv = RingElem::exact_div(u, &RingElem::one()).ok()?;
        return match (a.is_zero(), inv.is_unit()) {
            (false, true) => Some((inv, RingElem::zero())),
            (true, true) => Some((RingElem::zero(), inv)),
            _ => None,
        };
    }
    let (da, db) = (a.degree()?, b.degree()?);
    for n in 0..=da + db + BEZOUT_SLACK {
        if let Some(z) = solve_cofactors(a, b, n) {
            let x = RingElem::from_coeffs(z[..=n].to_vec());
            let y = RingElem::from_coeffs(z[n + 1..].to_vec());
            debug_assert!((&(&x * a) + &(&y * b)).is_one());
            return Some((x, y));
        }
    }
    None
}

/// Integer solution of `x a + y b = 1` with `deg x, deg y <= n`, as the
/// coefficient vector `(x_0..x_n, y_0..y_n)`.
fn solve_cofactors(a: &RingElem, b: &RingElem, n: usize) -> Option<Vec<BigInt>> {
    let rows = n + 1 + a.coeffs().len().max(b.coeffs().len());
    let cols = 2 * (n + 1);
    let mut m = vec![vec![BigInt::zero(); cols]; rows];
    for j in 0..=n {
        for (i, c) in a.coeffs().iter().enumerate() {
            m[i + j][j] = c.clone();
        }
        for (i, c) in b.coeffs().iter().enumerate() {
            m[i + j][n + 1 + j] = c.clone();
        }
    }
    let mut rhs = vec![BigInt::zero(); rows];
    rhs[0] = BigInt::one();
    solve_integer(m, &rhs)
}

/// Some integer `z` with `m z = rhs`, by unimodular column operations that
/// bring `m` to lower echelon form.
fn solve_integer(mut m: Vec<Vec<BigInt>>, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    let (rows, cols) = (m.len(), m[0].len());
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let col_op = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, p: usize, j: usize, k: [&BigInt; 4]| {
        for mat in [m, u] {
            for row in mat.iter_mut() {
                let (vp, vj) = (row[p].clone(), row[j].clone());
                row[p] = k[0] * &vp + k[1] * &vj;
                row[j] = k[2] * &vp + k[3] * &vj;
            }
        }
    };
    let mut pivots = Vec::new();
    let mut p = 0;
    for r in 0..rows {
        if p == cols {
            break;
        }
        for j in p + 1..cols {
            if m[r][j].is_zero() {
                continue;
            }
            let (g, x, y) = int_ext_gcd(&m[r][p], &m[r][j]);
            let (sp, sj) = (&m[r][p] / &g, &m[r][j] / &g);
            col_op(&mut m, &mut u, p, j, [&x, &y, &-sj, &sp]);
        }
        if !m[r][p].is_zero() {
            pivots.push((r, p));
            p += 1;
        }
    }
    let mut w = vec![BigInt::zero(); cols];
    let mut next = pivots.iter().peekable();
    for r in 0..rows {
        let acc: BigInt = (0..p).map(|j| &m[r][j] * &w[j]).sum();
        let rest = &rhs[r] - acc;
        match next.peek() {
            Some(&&(pr, pc)) if pr == r => {
                let (q, rem) = rest.div_rem(&m[r][pc]);
                if !rem.is_zero() {
                    return None;
                }
                w[pc] = q;
                next.next();
            }
            _ if !rest.is_zero() => return None,
            _ => {}
        }
    }
    Some((0..cols).map(|i| (0..cols).map(|j| &u[i][j] * &w[j]).sum()).collect())
}

fn mat(a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> Factor {
    Factor::linear(vec![vec![a, b], vec![c, d]])
}

/// What one iteration decided.
enum Decision {
    Apply(StepKind, Factor),
    Done(Factor),
    Stuck(FailedStep),
}

fn affine_terminal(h: &PolyMap) -> Factor {
    let n = 2;
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| h.coord(i).coeff(&Monomial::var(n, j)))
                .collect()
        })
        .collect();
    Factor::Affine {
        matrix,
        shift: h.constant_terms(),
    }
}

fn decide(h: &PolyMap, mode: CoefficientMode) -> Result<Decision> {
    let (p, q) = (h.coord(0), h.coord(1));
    let d1 = p.total_degree()?;
    let d2 = q.total_degree()?;
    if d1 == 0 || d2 == 0 || (d1 == 1 && d2 == 1) {
        let det = h.jacobian_det();
        let ok = det.num().is_constant()
            && !det.is_zero()
            && match mode {
                CoefficientMode::Ring => det.is_integral() && det.num().constant_term().is_unit(),
                CoefficientMode::Field => true,
            };
        return Ok(if ok && d1 == 1 && d2 == 1 {
            Decision::Done(affine_terminal(h))
        } else {
            Decision::Stuck(FailedStep::Step7 { det })
        });
    }
    let h1 = p.leading_form()?;
    let h2 = q.leading_form()?;
    if d1 == d2 {
        let ratio = proportionality(&h1, &h2);
        let Some(c) = ratio.clone() else {
            return Ok(Decision::Stuck(FailedStep::Step4 {
                h1,
                h2,
                ratio: None,
                needs_review: false,
            }));
        };
        if admissible(&c, mode) {
            let f = mat(Fraction::one(), Fraction::zero(), -&c, Fraction::one());
            return Ok(Decision::Apply(StepKind::AffineReduce, f));
        }
        let ci = c.inv()?;
        if admissible(&ci, mode) {
            let f = mat(Fraction::one(), -&ci, Fraction::zero(), Fraction::one());
            return Ok(Decision::Apply(StepKind::AffineReduce, f));
        }
        if let Some((x, y)) = bezout(c.den(), c.num()) {
            let f = mat(
                Fraction::from_ring(-x),
                Fraction::from_ring(-y),
                Fraction::from_ring(c.num().clone()),
                Fraction::from_ring(-c.den()),
            );
            return Ok(Decision::Apply(StepKind::AffineReduce, f));
        }
        return Ok(Decision::Stuck(FailedStep::Step4 {
            h1,
            h2,
            ratio,
            needs_review: true,
        }));
    }
    if d1 > d2 {
        return Ok(Decision::Apply(StepKind::Swap, Factor::swap(2, 0, 1)));
    }
    let stuck = |required| {
        Decision::Stuck(FailedStep::Step6 {
            h1: h1.clone(),
            h2: h2.clone(),
            d1,
            d2,
            required,
        })
    };
    if d2 % d1 != 0 {
        return Ok(stuck(None));
    }
    let k = (d2 / d1) as u32;
    let Some(c) = proportionality(&h1.pow(k), &h2) else {
        return Ok(stuck(None));
    };
    if !admissible(&c, mode) {
        return Ok(stuck(Some(c)));
    }
    let rule = ScaledPoly::constant(2, &c)
        .try_mul(&ScaledPoly::var(2, 0).pow(k))?;
    Ok(Decision::Apply(
        StepKind::ElementaryReduce,
        Factor::elementary(1, -rule)?,
    ))
}

/// Runs the decision procedure.
///
/// In ring mode the input must be integral and the outcome decides membership
/// in `Tame_2(Z[t])`. In field mode constants are sought in `K`; a stuck state
/// then means the input is not an automorphism over `K` and is reported as an
/// error.
pub fn tame_check(f: &PolyMap, mode: CoefficientMode) -> Result<TameOutcome> {
    require_plane(f)?;
    if mode == CoefficientMode::Ring && !f.is_integral() {
        return Err(Error::Precondition(format!(
            "ring-mode input {f} has non-integral coordinates"
        )));
    }
    let cap = tdeg(f)?;
    let mut h = f.clone();
    let mut steps = Vec::new();
    let mut reductions = 0usize;
    loop {
        let before = h.total_degree()?;
        match decide(&h, mode)? {
            Decision::Done(terminal) => {
                return Ok(TameOutcome::Tame(TameCertificate {
                    mode,
                    steps,
                    terminal,
                }))
            }
            Decision::Stuck(failed_step) => {
                if mode == CoefficientMode::Field {
                    return Err(Error::NotAnAutomorphism(format!(
                        "field-mode reduction stuck at {} on {h}",
                        failed_step.name()
                    )));
                }
                return Ok(TameOutcome::NotTame(NotTameWitness {
                    mode,
                    steps,
                    stuck_map: h,
                    failed_step,
                }));
            }
            Decision::Apply(kind, factor) => {
                h = factor.apply_after(&h)?;
                let after = h.total_degree()?;
                if kind != StepKind::Swap {
                    reductions += 1;
                    if after >= before || reductions >= cap {
                        return Err(Error::Verification {
                            step: "degree reduction".into(),
                            lhs: format!("tdeg {after} after {reductions} reductions"),
                            rhs: format!("below {before} and cap {cap}"),
                        });
                    }
                }
                steps.push(ReductionStep {
                    kind,
                    factor,
                    tdeg_before: before,
                    tdeg_after: after,
                });
            }
        }
    }
}

impl TameCertificate {
    /// `tau_1^-1, ..., tau_k^-1, terminal`, whose composition is the input.
    pub fn factors(&self) -> Result<Vec<Factor>> {
        let mut out = self
            .steps
            .iter()
            .map(|s| s.factor.inverse())
            .collect::<Result<Vec<_>>>()?;
        out.push(self.terminal.clone());
        Ok(out)
    }

    /// Checks internal consistency: reductions lower `tdeg`, and in ring mode
    /// every factor lies over `R`.
    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.steps.iter().enumerate() {
            if s.kind != StepKind::Swap && s.tdeg_after >= s.tdeg_before {
                return Err(Error::Verification {
                    step: format!("step {}", i + 1),
                    lhs: s.tdeg_after.to_string(),
                    rhs: format!("< {}", s.tdeg_before),
                });
            }
            if self.mode == CoefficientMode::Ring && !s.factor.is_over_ring() {
                return Err(Error::InvalidFactor(format!(
                    "step {} uses a factor outside Aut(R)",
                    i + 1
                )));
            }
        }
        if self.mode == CoefficientMode::Ring && !self.terminal.is_over_ring() {
            return Err(Error::InvalidFactor("terminal affine map is not over R".into()));
        }
        Ok(())
    }
}

/// Rebuilds the input map from a certificate.
pub fn recompose(cert: &TameCertificate) -> Result<PolyMap> {
    cert.validate()?;
    compose_factors(&cert.factors()?, 2)
}

/// Recomposes and compares against `f`.
pub fn verify_certificate(cert: &TameCertificate, f: &PolyMap) -> Result<()> {
    let g = recompose(cert)?;
    if g != *f {
        return Err(Error::Verification {
            step: "recompose".into(),
            lhs: g.to_string(),
            rhs: f.to_string(),
        });
    }
    Ok(())
}

impl NotTameWitness {
    /// Re-runs the failed check on the stuck map; true when it fails again in
    /// the same way.
    pub fn reverify(&self) -> Result<bool> {
        Ok(match decide(&self.stuck_map, self.mode)? {
            Decision::Stuck(f) => f == self.failed_step,
            _ => false,
        })
    }

    /// Replays the recorded steps from `f` and checks that they reach the stuck map.
    pub fn replay_from(&self, f: &PolyMap) -> Result<bool> {
        let mut h = f.clone();
        for s in &self.steps {
            h = s.factor.apply_after(&h)?;
        }
        Ok(h == self.stuck_map)
    }
}

/// Convenience: the leading forms `(h1, h2)` of a plane map.
pub fn leading_forms(f: &PolyMap) -> Result<(ScaledPoly, ScaledPoly)> {
    require_plane(f)?;
    Ok((f.coord(0).leading_form()?, f.coord(1).leading_form()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::nagata;
    use crate::grammar::parse_map;

    fn t() -> RingElem {
        RingElem::t()
    }

    #[test]
    fn simple_elementary_is_tame() {
        let f = parse_map("(X, Y + X^2)").unwrap();
        let out = tame_check(&f, CoefficientMode::Ring).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.steps[0].kind, StepKind::ElementaryReduce);
        verify_certificate(cert, &f).unwrap();
    }

    #[test]
    fn identity_has_empty_certificate() {
        let id = PolyMap::identity(2);
        let out = tame_check(&id, CoefficientMode::Ring).unwrap();
        let cert = out.certificate().unwrap();
        assert!(cert.steps.is_empty());
        assert!(recompose(cert).unwrap().is_identity());
        assert_eq!(tdeg(&id).unwrap(), 2);
    }

    #[test]
    fn nagata_stuck_at_step6() {
        let n = nagata();
        assert_eq!(tdeg(&n).unwrap(), 6);
        let out = tame_check(&n, CoefficientMode::Ring).unwrap();
        let w = out.witness().unwrap();
        match &w.failed_step {
            FailedStep::Step6 { required, h1, h2, .. } => {
                let c = Fraction::new(RingElem::from_int(-1), t()).unwrap();
                assert_eq!(required.as_ref(), Some(&c));
                assert_eq!(h1.to_string(), "t*X^2");
                assert_eq!(h2.to_string(), "-t*X^4");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(w.reverify().unwrap());
        assert!(w.replay_from(&n).unwrap());
        let field = tame_check(&n, CoefficientMode::Field).unwrap();
        verify_certificate(field.certificate().unwrap(), &n).unwrap();
    }

    #[test]
    fn bezout_affine_reduction() {
        // Leading forms with ratio t/(t+1): Q - cP needs the Bezout step.
        let f = parse_map("((t+1)*(X + Y^2) + Y, t*(X + Y^2) + Y)").unwrap();
        let out = tame_check(&f, CoefficientMode::Ring).unwrap();
        let cert = out.certificate().expect("tame via Bezout affine map");
        verify_certificate(cert, &f).unwrap();
    }

    #[test]
    fn bezout_search() {
        let (x, y) = bezout(&(t() + RingElem::one()), &t()).unwrap();
        assert!((&x * &(t() + RingElem::one()) + &y * &t()).is_one());
        let two = RingElem::from_int(2);
        let (x, y) = bezout(&two, &(t().scale(&2.into()) + RingElem::one())).unwrap();
        assert!((&x * &two + &y * &(t().scale(&2.into()) + RingElem::one())).is_one());
        assert!(bezout(&two, &t()).is_none());
        assert!(bezout(&RingElem::from_int(3), &(t().scale(&2.into()) + RingElem::one())).is_none());
        let pairs = [("t", "-2*t - 1"), ("4", "2*t + 1"), ("t^2 + 1", "t"), ("5", "1")];
        for (a, b) in pairs {
            let (a, b) = (crate::grammar::parse_ring(a).unwrap(), crate::grammar::parse_ring(b).unwrap());
            let (x, y) = bezout(&a, &b).unwrap();
            assert!((&x * &a + &y * &b).is_one(), "{a}, {b}");
        }
    }

    #[test]
    fn comaximal_leading_forms_reduce() {
        let f = crate::grammar::parse_factors("X += -Y^2 - 2*Y; Y += -t*X; X += -Y^2").unwrap();
        let m = compose_factors(&f.factors, 2).unwrap();
        let c = tame_check(&m, CoefficientMode::Ring).unwrap();
        assert_eq!(recompose(c.certificate().unwrap()).unwrap(), m);
    }

    #[test]
    fn non_automorphism_in_field_mode() {
        let f = parse_map("(X^2, Y)").unwrap();
        assert!(matches!(
            tame_check(&f, CoefficientMode::Field),
            Err(Error::NotAnAutomorphism(_))
        ));
        let g = parse_map("(2*X, Y)").unwrap();
        let w = tame_check(&g, CoefficientMode::Ring).unwrap();
        assert!(matches!(w.witness().unwrap().failed_step, FailedStep::Step7 { .. }));
        assert!(tame_check(&g, CoefficientMode::Field).unwrap().is_tame());
    }
}
