mod common;

use std::time::{Duration, Instant};

use common::{nonzero_ring, ring, tame_factor, tame_word, univariate0};
use polyauto::automorphism::{compose_factors, jacobian_det, nagata, Factor, PolyMap};
use polyauto::catalog;
use polyauto::grammar::parse_ring;
use polyauto::length::length_decompose;
use polyauto::report::verify_paper;
use polyauto::structure::{
    build_commutator, check_lemma1_hypothesis, commutator_formula, content_gcd, extract_scaled,
    scale_argument, stable_tame_pipeline, verify_example9, LengthFourSpec,
};
use polyauto::tameness::{recompose, tame_check, verify_certificate, CoefficientMode, FailedStep};
use polyauto::{Fraction, Monomial, MultiPoly, RingElem, ScaledPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, max_global_rejects: 100_000, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Runs `cases` passing instances of `test`, returning how many ran or the first counterexample.
fn random<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String>
where
    S::Value: std::fmt::Debug,
{
    let ran = std::cell::Cell::new(0);
    runner(cases)
        .run(&strategy, |v| {
            test(v)?;
            ran.set(ran.get() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    ensure(ran.get() >= cases, format!("only {} of {cases} cases ran", ran.get()))?;
    Ok(ran.get())
}

fn nagata_reproduction() -> Check {
    let start = Instant::now();
    let list = catalog::nagata_factor_list().map_err(|e| e.to_string())?;
    let composed = compose_factors(&list.factors, 2).map_err(|e| e.to_string())?;
    let printed = catalog::nagata_printed().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(composed == printed, format!("composed {composed}, printed {printed}"))?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("F1^-1 o F2 o F1 = {composed} in {elapsed:?}"))
}

fn nagata_not_tame() -> Check {
    let n = nagata();
    let ring_out = tame_check(&n, CoefficientMode::Ring).map_err(|e| e.to_string())?;
    let w = ring_out.witness().ok_or("ring mode certified N tame")?;
    let minus_inv_t = Fraction::new(RingElem::from_int(-1), RingElem::t()).unwrap();
    match &w.failed_step {
        FailedStep::Step6 { required: Some(c), .. } => {
            ensure(*c == minus_inv_t, format!("required constant {c}"))?;
            ensure(!c.is_integral(), "required constant lies in R")?;
        }
        other => return Err(format!("stuck at {}", other.name())),
    }
    let field_out = tame_check(&n, CoefficientMode::Field).map_err(|e| e.to_string())?;
    let cert = field_out.certificate().ok_or("field mode did not certify N")?;
    ensure(recompose(cert).map_err(|e| e.to_string())? == n, "field certificate does not recompose")?;
    let len = length_decompose(&n).map_err(|e| e.to_string())?.length;
    ensure(len == 3, format!("length {len}"))?;
    Ok("step 6 with c = -1/t over R, tame over K, length 3".into())
}

fn commutator() -> Check {
    let spec = catalog::example5_spec().map_err(|e| e.to_string())?;
    let f = build_commutator(&spec).map_err(|e| e.to_string())?;
    ensure(f.is_integral(), "commutator has denominators")?;
    let det = jacobian_det(&f);
    ensure(det.num().is_one() && det.den().is_one(), format!("det J = {det}"))?;
    let closed = commutator_formula(&spec).map_err(|e| e.to_string())?;
    ensure(f == closed, "factor product and closed form disagree")?;
    let out = tame_check(&f, CoefficientMode::Ring).map_err(|e| e.to_string())?;
    ensure(!out.is_tame(), "certified tame over R")?;
    let report = verify_paper();
    let item = report.item("Example 5 printed expansion").ok_or("no printed-expansion item")?;
    let printed = catalog::example5_printed().map_err(|e| e.to_string())?;
    ensure(
        (printed == f) == item.discrepancies.is_empty(),
        "discrepancy list does not match the comparison",
    )?;
    Ok(format!(
        "integral, det 1, both paths agree, not tame ({}); {} printed-term discrepancies reported",
        out.witness().unwrap().failed_step.name(),
        item.discrepancies.len()
    ))
}

fn scaled_arguments() -> Check {
    let trips = random(500, (univariate0(4), nonzero_ring(2, 4)), |(c, b)| {
        let a = scale_argument(&c, &b).unwrap();
        prop_assert_eq!(extract_scaled(&a, &b).unwrap(), Some(c));
        Ok(())
    })?;
    let implication = (univariate0(3), univariate0(3), any::<bool>(), univariate0(3), nonzero_ring(1, 3))
        .prop_filter("gcd(B, b) = 1", |(_, _, _, bpoly, b)| content_gcd(bpoly, b).unwrap().is_unit());
    let hits = std::cell::Cell::new(0);
    let implied = random(500, implication, |(c, noise, exact, bpoly, b)| {
        let base = scale_argument(&c, &b).unwrap();
        let a = if exact { base } else { &base + &noise };
        let integral = check_lemma1_hypothesis(&a, &bpoly, &b).unwrap();
        if integral {
            hits.set(hits.get() + 1);
            prop_assert!(extract_scaled(&a, &b).unwrap().is_some(), "A = {} is not C(bX)", a);
        }
        if exact {
            prop_assert!(integral);
        }
        Ok(())
    })?;
    Ok(format!(
        "{trips} round-trips and {implied} implication instances ({} with integral composition), no counterexample",
        hits.get()
    ))
}

fn small_ring() -> impl Strategy<Value = RingElem> {
    prop_oneof![Just("t"), Just("t+1"), Just("2")].prop_map(|s| parse_ring(s).unwrap())
}

/// Non-degenerate specs with an integral commutator: `a, b` coprime and `a | D`.
fn valid_spec() -> impl Strategy<Value = LengthFourSpec> {
    (univariate0(2), univariate0(2), small_ring(), small_ring())
        .prop_filter("coprime", |(_, _, a, b)| RingElem::gcd(a, b).unwrap().is_unit())
        .prop_map(|(c, d0, a, b)| LengthFourSpec::new(c, d0.scale(&a), a, b).unwrap())
        .prop_filter("valid", |s| !s.is_degenerate() && build_commutator(s).unwrap().is_integral())
}

fn check_pipeline(spec: &LengthFourSpec) -> Result<Duration, String> {
    let start = Instant::now();
    let cert = stable_tame_pipeline(spec).map_err(|e| format!("{spec}: {e}"))?;
    cert.verify().map_err(|e| format!("{spec}: {e}"))?;
    let link = cert.chain.iter().find(|s| s.name == "factorization").ok_or("no factorization link")?;
    let fs = link.claimed.as_ref().ok_or("factorization without factors")?;
    ensure(fs.len() == 4, format!("{spec}: {} claimed factors", fs.len()))?;
    ensure(
        compose_factors(fs, 3).map_err(|e| e.to_string())? == link.result,
        format!("{spec}: G2 o F2 o G1 o F1 does not recompose"),
    )?;
    let residual = cert.residual.as_ref().ok_or_else(|| format!("{spec}: no residual"))?;
    ensure(residual.length == 3, format!("{spec}: residual length {}", residual.length))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("{spec}: took {elapsed:?}"))?;
    Ok(elapsed)
}

fn pipeline() -> Check {
    let base = check_pipeline(&catalog::example5_spec().unwrap())?;
    let slowest = std::cell::Cell::new(base);
    let n = random(200, valid_spec(), |spec| {
        let t = check_pipeline(&spec).map_err(TestCaseError::fail)?;
        slowest.set(slowest.get().max(t));
        Ok(())
    })?;
    Ok(format!("Example 5 and {n} random specs verified, slowest {:?}", slowest.get()))
}

fn four_factors() -> Check {
    let e = verify_example9().map_err(|e| e.to_string())?;
    let w = e.witness.as_ref().ok_or("F certified tame over R")?;
    ensure(e.length == 4, format!("length {}", e.length))?;
    let fac = e.certificate.tame_factorization().ok_or("factorization has a residual")?;
    let stab = e.map.stabilize(1);
    ensure(compose_factors(&fac, 3).map_err(|e| e.to_string())? == stab, "factorization does not recompose")?;
    ensure(fac.iter().all(Factor::is_over_ring), "factor outside R")?;
    ensure(e.corrected_identity.holds(), "corrected identity fails")?;
    let diffs: Vec<String> = e.printed_identity.differences().iter().map(|(i, d)| format!("coord {i}: {d}")).collect();
    ensure(
        e.printed_identity.holds(),
        format!(
            "Theta o F~1 = F~1^-1 o G~1 o F~1 is false ({}); tame factorization of (F, Z) with {} factors holds, stuck at {}, length 4",
            diffs.join("; "),
            fac.len(),
            w.failed_step.name()
        ),
    )?;
    Ok(format!("identity exact, {} factors, not tame, length 4", fac.len()))
}

/// A one-variable shear of degree `deg` in `var`, scaled by `1/den`.
fn shear(target: usize, deg: u32, den: RingElem) -> impl Strategy<Value = Factor> {
    let var = 1 - target;
    (prop::collection::vec(ring(1, 2), deg as usize - 1), nonzero_ring(1, 2)).prop_map(move |(low, top)| {
        let terms = low.into_iter().chain(std::iter::once(top)).enumerate().map(|(i, c)| {
            let mut e = vec![0, 0];
            e[var] = i as u32 + 1;
            (Monomial::new(e), c)
        });
        let rule = ScaledPoly::from_poly(MultiPoly::from_terms(2, terms).unwrap())
            .scale(&Fraction::new(1.into(), den.clone()).unwrap());
        Factor::elementary(target, rule).unwrap()
    })
}

fn rule_degree(f: &Factor) -> usize {
    match f {
        Factor::Elementary { rule, .. } => rule.total_degree().unwrap_or(0).max(1),
        _ => 1,
    }
}

fn tame_composition() -> impl Strategy<Value = Vec<Factor>> {
    let over_r = (0usize..2, 1u32..=4).prop_flat_map(|(target, deg)| shear(target, deg, RingElem::one()));
    prop::collection::vec(prop_oneof![3 => over_r, 1 => tame_factor(2, 4)], 1..=6)
        .prop_filter("degree bound", |w| w.iter().map(rule_degree).product::<usize>() <= 64)
}

fn alternating(k: usize) -> impl Strategy<Value = Vec<Factor>> {
    (any::<bool>(), prop::collection::vec((2u32..=3, nonzero_ring(1, 1)), k)).prop_flat_map(move |(lower, ds)| {
        ds.into_iter()
            .enumerate()
            .map(|(i, (deg, den))| shear(if (i % 2 == 0) == lower { 1 } else { 0 }, deg, den))
            .collect::<Vec<_>>()
    })
}

fn round_trips() -> Check {
    let tame = random(200, tame_composition(), |word| {
        let f = compose_factors(&word, 2).unwrap();
        let out = tame_check(&f, CoefficientMode::Ring).unwrap();
        let cert = out.certificate();
        prop_assert!(cert.is_some(), "{} judged not tame", f);
        verify_certificate(cert.unwrap(), &f).unwrap();
        prop_assert_eq!(recompose(cert.unwrap()).unwrap(), f);
        Ok(())
    })?;
    let words = random(50, (1usize..=4).prop_flat_map(|k| (Just(k), alternating(k))), |(k, word)| {
        let f = compose_factors(&word, 2).unwrap();
        prop_assert_eq!(length_decompose(&f).unwrap().length, k);
        Ok(())
    })?;
    Ok(format!("{tame} tame compositions certified and recomposed; {words} alternating words have their length"))
}

fn jacobian(f: &PolyMap) -> Vec<Vec<ScaledPoly>> {
    f.coords().iter().map(|c| (0..f.dim()).map(|j| c.derivative(j)).collect()).collect()
}

fn invariants() -> Check {
    let n = random(500, (tame_word(2, 3, 3), tame_word(2, 3, 3), 1usize..3), |(f, g, m)| {
        let (f, g) = (compose_factors(&f, 2).unwrap(), compose_factors(&g, 2).unwrap());
        let fg = f.compose(&g).unwrap();
        let jf = jacobian(&f);
        let (jg, jfg) = (jacobian(&g), jacobian(&fg));
        for i in 0..2 {
            for j in 0..2 {
                let a = jf[i][0].substitute(g.coords()).unwrap();
                let b = jf[i][1].substitute(g.coords()).unwrap();
                prop_assert_eq!(&jfg[i][j], &(&(&a * &jg[0][j]) + &(&b * &jg[1][j])));
            }
        }
        let det = &jacobian_det(&f).substitute(g.coords()).unwrap() * &jacobian_det(&g);
        prop_assert_eq!(jacobian_det(&fg), det);
        let id = PolyMap::identity(2);
        prop_assert_eq!(f.compose(&id).unwrap(), f.clone());
        prop_assert_eq!(f.stabilize(m).compose(&g.stabilize(m)).unwrap(), fg.stabilize(m));
        Ok(())
    })?;
    Ok(format!("{n} instances of the chain rule, identity and stabilization laws"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("Nagata reproduction", nagata_reproduction),
        ("Nagata not tame", nagata_not_tame),
        ("length-four commutator", commutator),
        ("scaled-argument properties", scaled_arguments),
        ("stable tameness pipeline", pipeline),
        ("four-factor certificate", four_factors),
        ("tameness round trip", round_trips),
        ("chain rule and functoriality", invariants),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match &result {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name} ({secs:.2}s): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
