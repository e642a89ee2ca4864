//! The `polyauto-certificate/1` JSON format and an independent checker.
//!
//! Every factor is stored twice: as a factor literal and as the full map it
//! denotes. [`replay`] reads only the map strings, rebuilds every claimed
//! equality by substitution, and never calls the algorithms that produced
//! the certificate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::automorphism::{factor_to_map, Factor, PolyMap};
use crate::error::{Error, Result};
use crate::grammar::{parse_poly, print_factor};
use crate::length::{length_over_extension, LengthDecomposition};
use crate::multipoly::ScaledPoly;
use crate::structure::StableTamenessCertificate;
use crate::tameness::{CoefficientMode, FailedStep, NotTameWitness, ReductionStep, TameCertificate};

pub const SCHEMA: &str = "polyauto-certificate/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    /// Factor literal, e.g. `Y += (X^2)/(t)`.
    pub factor: String,
    /// The same factor as a full map.
    pub map: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub kind: String,
    pub factor: FactorRecord,
    pub tdeg_before: usize,
    pub tdeg_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedRecord {
    pub step: String,
    pub details: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRecord {
    pub name: String,
    pub left: Vec<FactorRecord>,
    pub right: Vec<FactorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed: Option<Vec<FactorRecord>>,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub map: String,
    pub fixed_variable: usize,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Tame {
        mode: String,
        steps: Vec<StepRecord>,
        terminal: FactorRecord,
        tdeg_trace: Vec<usize>,
        /// Factors whose composition, left to right, is the input.
        factorization: Vec<FactorRecord>,
    },
    NotTame {
        mode: String,
        steps: Vec<StepRecord>,
        tdeg_trace: Vec<usize>,
        stuck_map: String,
        failed_step: FailedRecord,
    },
    Length {
        translation: FactorRecord,
        diagonal: FactorRecord,
        factors: Vec<FactorRecord>,
        length: usize,
    },
    StableTame {
        added_variables: usize,
        chain: Vec<LinkRecord>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        residual: Option<ResidualRecord>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        factorization: Option<Vec<FactorRecord>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    /// Names of all variables, including added ones.
    pub variables: Vec<String>,
    /// The input map in the first variables.
    pub input: String,
    #[serde(flatten)]
    pub body: Body,
}

fn map_text(m: &PolyMap, names: &[String]) -> String {
    let parts: Vec<String> = m
        .coords()
        .iter()
        .map(|c| c.display_with(names).to_string())
        .collect();
    format!("({})", parts.join(", "))
}

fn factor_record(f: &Factor, names: &[String]) -> Result<FactorRecord> {
    Ok(FactorRecord {
        factor: print_factor(f, names),
        map: map_text(&factor_to_map(f, names.len())?, names),
    })
}

fn records(fs: &[Factor], names: &[String]) -> Result<Vec<FactorRecord>> {
    fs.iter().map(|f| factor_record(f, names)).collect()
}

fn step_records(steps: &[ReductionStep], names: &[String]) -> Result<Vec<StepRecord>> {
    steps
        .iter()
        .map(|s| {
            Ok(StepRecord {
                kind: s.kind.as_str().to_string(),
                factor: factor_record(&s.factor, names)?,
                tdeg_before: s.tdeg_before,
                tdeg_after: s.tdeg_after,
            })
        })
        .collect()
}

fn trace(steps: &[ReductionStep], initial: usize) -> Vec<usize> {
    let mut v = vec![steps.first().map_or(initial, |s| s.tdeg_before)];
    v.extend(steps.iter().map(|s| s.tdeg_after));
    v
}

fn mode_name(m: CoefficientMode) -> String {
    m.to_string()
}

fn failed_record(f: &FailedStep, names: &[String]) -> FailedRecord {
    let mut details = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        details.insert(k.to_string(), v);
    };
    match f {
        FailedStep::Step4 {
            h1,
            h2,
            ratio,
            needs_review,
        } => {
            put("h1", h1.display_with(names).to_string());
            put("h2", h2.display_with(names).to_string());
            if let Some(r) = ratio {
                put("ratio", r.to_string());
            }
            put("needs_review", needs_review.to_string());
        }
        FailedStep::Step6 {
            h1,
            h2,
            d1,
            d2,
            required,
        } => {
            put("h1", h1.display_with(names).to_string());
            put("h2", h2.display_with(names).to_string());
            put("d1", d1.to_string());
            put("d2", d2.to_string());
            if let Some(r) = required {
                put("required", r.to_string());
            }
        }
        FailedStep::Step7 { det } => put("det", det.display_with(names).to_string()),
    }
    FailedRecord {
        step: f.name().to_string(),
        details,
    }
}

impl Certificate {
    pub fn tame(input: &PolyMap, cert: &TameCertificate) -> Result<Self> {
        let names = input.names().to_vec();
        let tdeg0 = input.total_degree()?;
        Ok(Certificate {
            schema: SCHEMA.into(),
            input: map_text(input, &names),
            body: Body::Tame {
                mode: mode_name(cert.mode),
                steps: step_records(&cert.steps, &names)?,
                terminal: factor_record(&cert.terminal, &names)?,
                tdeg_trace: trace(&cert.steps, tdeg0),
                factorization: records(&cert.factors()?, &names)?,
            },
            variables: names,
        })
    }

    pub fn not_tame(input: &PolyMap, w: &NotTameWitness) -> Result<Self> {
        let names = input.names().to_vec();
        let tdeg0 = input.total_degree()?;
        Ok(Certificate {
            schema: SCHEMA.into(),
            input: map_text(input, &names),
            body: Body::NotTame {
                mode: mode_name(w.mode),
                steps: step_records(&w.steps, &names)?,
                tdeg_trace: trace(&w.steps, tdeg0),
                stuck_map: map_text(&w.stuck_map, &names),
                failed_step: failed_record(&w.failed_step, &names),
            },
            variables: names,
        })
    }

    pub fn length(input: &PolyMap, d: &LengthDecomposition) -> Result<Self> {
        let names = input.names().to_vec();
        Ok(Certificate {
            schema: SCHEMA.into(),
            input: map_text(input, &names),
            body: Body::Length {
                translation: factor_record(&d.translation, &names)?,
                diagonal: factor_record(&d.diagonal, &names)?,
                factors: records(&d.elementary_factors, &names)?,
                length: d.length,
            },
            variables: names,
        })
    }

    pub fn stable_tame(c: &StableTamenessCertificate) -> Result<Self> {
        let names = c.start().names().to_vec();
        let chain = c
            .chain
            .iter()
            .map(|s| {
                Ok(LinkRecord {
                    name: s.name.clone(),
                    left: records(&s.left, &names)?,
                    right: records(&s.right, &names)?,
                    claimed: s.claimed.as_ref().map(|v| records(v, &names)).transpose()?,
                    result: map_text(&s.result, &names),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let n0 = c.original.dim();
        Ok(Certificate {
            schema: SCHEMA.into(),
            input: map_text(&c.original, &names[..n0]),
            body: Body::StableTame {
                added_variables: c.added_variables,
                chain,
                residual: c.residual.as_ref().map(|r| ResidualRecord {
                    map: map_text(&r.map, &names),
                    fixed_variable: r.fixed_variable,
                    length: r.length,
                }),
                factorization: c
                    .tame_factorization()
                    .map(|fs| records(&fs, &names))
                    .transpose()?,
            },
            variables: names,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Tame { .. } => "tame",
            Body::NotTame { .. } => "not-tame",
            Body::Length { .. } => "length",
            Body::StableTame { .. } => "stable-tame",
        }
    }
}

type Coords = Vec<ScaledPoly>;

/// Splits `(a, b, c)` at top-level commas.
fn split_coords(text: &str) -> Result<Vec<&str>> {
    let s = text.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Syntax {
            line: 1,
            column: 1,
            message: format!("expected a parenthesized map, found '{s}'"),
        })?;
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&inner[start..]);
    Ok(parts)
}

fn read_map(text: &str, names: &[&str]) -> Result<Coords> {
    let parts = split_coords(text)?;
    if parts.len() != names.len() {
        return Err(Error::Shape {
            expected: names.len(),
            found: parts.len(),
        });
    }
    parts.iter().map(|p| parse_poly(p, names)).collect()
}

fn compose(f: &Coords, g: &Coords) -> Result<Coords> {
    f.iter().map(|c| c.substitute(g)).collect()
}

fn identity(n: usize) -> Coords {
    (0..n).map(|i| ScaledPoly::var(n, i)).collect()
}

fn compose_all(fs: &[Coords], n: usize) -> Result<Coords> {
    let mut acc = identity(n);
    for f in fs.iter().rev() {
        acc = compose(f, &acc)?;
    }
    Ok(acc)
}

fn integral(m: &Coords) -> bool {
    m.iter().all(ScaledPoly::is_integral)
}

fn show(m: &Coords, names: &[String]) -> String {
    let parts: Vec<String> = m.iter().map(|c| c.display_with(names).to_string()).collect();
    format!("({})", parts.join(", "))
}

fn fail(step: impl Into<String>, lhs: String, rhs: String) -> Error {
    Error::Verification {
        step: step.into(),
        lhs,
        rhs,
    }
}

fn expect_eq(step: &str, lhs: &Coords, rhs: &Coords, names: &[String]) -> Result<()> {
    if lhs != rhs {
        return Err(fail(step, show(lhs, names), show(rhs, names)));
    }
    Ok(())
}

fn tdeg(m: &Coords) -> Result<usize> {
    m.iter().map(|c| c.total_degree()).sum()
}

fn read_all(rs: &[FactorRecord], names: &[&str]) -> Result<Vec<Coords>> {
    rs.iter().map(|r| read_map(&r.map, names)).collect()
}

/// `c` with `h2 = c h1^k`, or `None` when `h2` is not a multiple of `h1^k` over `K`.
fn power_ratio(h1: &ScaledPoly, h2: &ScaledPoly, k: u32) -> Option<crate::fraction::Fraction> {
    let p = h1.pow(k);
    let (m, _) = p.num().leading_term()?;
    let c = h2.coeff(m).div(&p.coeff(m)).ok()?;
    (p.scale(&c) == *h2).then_some(c)
}

fn check_stuck(m: &Coords, failed: &FailedRecord, ring: bool) -> Result<bool> {
    let d1 = m[0].total_degree()?;
    let d2 = m[1].total_degree()?;
    let h1 = m[0].leading_form()?;
    let h2 = m[1].leading_form()?;
    let admissible = |c: &crate::fraction::Fraction| !ring || c.is_integral();
    Ok(match failed.step.as_str() {
        "step 4" => {
            if d1 != d2 || d1 <= 1 {
                return Ok(false);
            }
            let review = failed.details.get("needs_review").map(String::as_str) == Some("true");
            let forward = power_ratio(&h1, &h2, 1);
            let backward = power_ratio(&h2, &h1, 1);
            let direct = forward.as_ref().is_some_and(admissible) || backward.as_ref().is_some_and(admissible);
            !direct && (review || forward.is_none())
        }
        "step 6" => {
            let (lo, hi, dl, dh) = if d1 <= d2 { (&h1, &h2, d1, d2) } else { (&h2, &h1, d2, d1) };
            if dl == dh || dl == 0 {
                return Ok(false);
            }
            dh % dl != 0 || !power_ratio(lo, hi, (dh / dl) as u32).as_ref().is_some_and(admissible)
        }
        "step 7" => {
            let det = &m[0].derivative(0) * &m[1].derivative(1) - &m[0].derivative(1) * &m[1].derivative(0);
            let unit = det.as_poly().is_some_and(|p| {
                p.is_constant() && p.constant_term().is_unit()
            });
            let nonzero_constant = det.num().is_constant() && !det.is_zero();
            if ring {
                !unit || d1 == 0 || d2 == 0
            } else {
                !nonzero_constant || d1 == 0 || d2 == 0
            }
        }
        _ => false,
    })
}

/// A single elementary map `(.., x_i + g, ..)` with `g` free of `x_i`, in the plane.
fn shear_kind(m: &Coords) -> Option<usize> {
    let id = identity(2);
    let moved: Vec<usize> = (0..2).filter(|&i| m[i] != id[i]).collect();
    match moved.as_slice() {
        [i] => {
            let g = &m[*i] - &id[*i];
            (g.degree_in(*i) == 0 && g.constant_term().is_zero()).then_some(*i)
        }
        _ => None,
    }
}

/// Independently re-checks every claim of a certificate.
pub fn replay(cert: &Certificate) -> Result<()> {
    if cert.schema != SCHEMA {
        return Err(fail("schema", cert.schema.clone(), SCHEMA.into()));
    }
    let names: Vec<&str> = cert.variables.iter().map(String::as_str).collect();
    let all = &cert.variables;
    match &cert.body {
        Body::Tame {
            mode,
            steps,
            terminal,
            tdeg_trace,
            factorization,
        } => {
            let input = read_map(&cert.input, &names)?;
            let mut cur = input.clone();
            let mut seen = vec![tdeg(&cur)?];
            for (i, s) in steps.iter().enumerate() {
                let f = read_map(&s.factor.map, &names)?;
                if mode == "ring" && !integral(&f) {
                    return Err(fail(format!("step {}", i + 1), s.factor.map.clone(), "a factor over R".into()));
                }
                if tdeg(&cur)? != s.tdeg_before {
                    return Err(fail(format!("step {}", i + 1), tdeg(&cur)?.to_string(), s.tdeg_before.to_string()));
                }
                cur = compose(&f, &cur)?;
                if tdeg(&cur)? != s.tdeg_after {
                    return Err(fail(format!("step {}", i + 1), tdeg(&cur)?.to_string(), s.tdeg_after.to_string()));
                }
                seen.push(s.tdeg_after);
            }
            if &seen != tdeg_trace {
                return Err(fail("tdeg trace", format!("{seen:?}"), format!("{tdeg_trace:?}")));
            }
            expect_eq("terminal", &cur, &read_map(&terminal.map, &names)?, all)?;
            let fs = read_all(factorization, &names)?;
            if mode == "ring" && !fs.iter().all(integral) {
                return Err(fail("factorization", "factors".into(), "factors over R".into()));
            }
            expect_eq("factorization", &compose_all(&fs, names.len())?, &input, all)
        }
        Body::NotTame {
            mode,
            steps,
            tdeg_trace,
            stuck_map,
            failed_step,
        } => {
            let mut cur = read_map(&cert.input, &names)?;
            let mut seen = vec![tdeg(&cur)?];
            for s in steps {
                cur = compose(&read_map(&s.factor.map, &names)?, &cur)?;
                seen.push(tdeg(&cur)?);
            }
            if &seen != tdeg_trace {
                return Err(fail("tdeg trace", format!("{seen:?}"), format!("{tdeg_trace:?}")));
            }
            expect_eq("stuck map", &cur, &read_map(stuck_map, &names)?, all)?;
            if !check_stuck(&cur, failed_step, mode == "ring")? {
                return Err(fail(failed_step.step.clone(), show(&cur, all), "a failing check".into()));
            }
            Ok(())
        }
        Body::Length {
            translation,
            diagonal,
            factors,
            length,
        } => {
            let input = read_map(&cert.input, &names)?;
            let fs = read_all(factors, &names)?;
            if fs.len() != *length {
                return Err(fail("length", fs.len().to_string(), length.to_string()));
            }
            let kinds: Vec<Option<usize>> = fs.iter().map(shear_kind).collect();
            if kinds.iter().any(Option::is_none) || kinds.windows(2).any(|w| w[0] == w[1]) {
                return Err(fail("length", format!("{kinds:?}"), "alternating one-variable factors".into()));
            }
            let mut all_maps = vec![read_map(&translation.map, &names)?, read_map(&diagonal.map, &names)?];
            all_maps.extend(fs);
            expect_eq("length decomposition", &compose_all(&all_maps, names.len())?, &input, all)
        }
        Body::StableTame {
            added_variables,
            chain,
            residual,
            factorization,
        } => {
            let n = names.len();
            let n0 = n - added_variables;
            let mut start = read_map(&cert.input, &names[..n0])?
                .iter()
                .map(|c| c.extend(n))
                .collect::<Vec<_>>();
            start.extend((n0..n).map(|i| ScaledPoly::var(n, i)));
            let mut cur = start.clone();
            for link in chain {
                let left = read_all(&link.left, &names)?;
                let right = read_all(&link.right, &names)?;
                if !left.iter().chain(&right).all(integral) {
                    return Err(fail(link.name.clone(), "link factors".into(), "factors over R".into()));
                }
                cur = compose(&compose(&compose_all(&left, n)?, &cur)?, &compose_all(&right, n)?)?;
                expect_eq(&link.name, &cur, &read_map(&link.result, &names)?, all)?;
                if let Some(c) = &link.claimed {
                    expect_eq(&link.name, &compose_all(&read_all(c, &names)?, n)?, &cur, all)?;
                }
            }
            if let Some(r) = residual {
                let m = read_map(&r.map, &names)?;
                expect_eq("residual", &cur, &m, all)?;
                if !integral(&m) {
                    return Err(fail("residual", r.map.clone(), "a map over R".into()));
                }
                let pm = PolyMap::new(m)?;
                let len = length_over_extension(&pm, r.fixed_variable)?.length();
                if len != r.length || len > 3 {
                    return Err(fail("residual length", len.to_string(), r.length.to_string()));
                }
            }
            if let Some(fs) = factorization {
                let fs = read_all(fs, &names)?;
                if !fs.iter().all(integral) {
                    return Err(fail("factorization", "factors".into(), "factors over R".into()));
                }
                expect_eq("factorization", &compose_all(&fs, n)?, &start, all)?;
            }
            if residual.is_none() && factorization.is_none() {
                return Err(fail("terminal", show(&cur, all), "a residual or a factorization".into()));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::nagata;
    use crate::catalog;
    use crate::grammar::parse_map;
    use crate::length::length_decompose;
    use crate::structure::{stable_tame_pipeline, verify_example9};
    use crate::tameness::tame_check;

    fn round_trip(c: &Certificate) {
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(&back, c);
        replay(&back).unwrap();
    }

    #[test]
    fn tame_and_not_tame() {
        let n = nagata();
        let w = tame_check(&n, CoefficientMode::Ring).unwrap();
        let c = Certificate::not_tame(&n, w.witness().unwrap()).unwrap();
        assert_eq!(c.kind(), "not-tame");
        round_trip(&c);
        let t = tame_check(&n, CoefficientMode::Field).unwrap();
        round_trip(&Certificate::tame(&n, t.certificate().unwrap()).unwrap());
        let f = parse_map("(X + t*Y^2 + 3, 2*Y + X)").unwrap();
        let o = tame_check(&f, CoefficientMode::Ring).unwrap();
        let c = match &o {
            crate::tameness::TameOutcome::Tame(t) => Certificate::tame(&f, t).unwrap(),
            crate::tameness::TameOutcome::NotTame(w) => Certificate::not_tame(&f, w).unwrap(),
        };
        round_trip(&c);
    }

    #[test]
    fn length_certificate() {
        let n = nagata();
        round_trip(&Certificate::length(&n, &length_decompose(&n).unwrap()).unwrap());
    }

    #[test]
    fn stable_certificates() {
        let s = catalog::example5_spec().unwrap();
        let c = Certificate::stable_tame(&stable_tame_pipeline(&s).unwrap()).unwrap();
        assert_eq!(c.variables, ["X", "Y", "W"]);
        round_trip(&c);
        let e = verify_example9().unwrap();
        let c = Certificate::stable_tame(&e.certificate).unwrap();
        round_trip(&c);
    }

    #[test]
    fn tampering_is_detected() {
        let s = catalog::example5_spec().unwrap();
        let mut c = Certificate::stable_tame(&stable_tame_pipeline(&s).unwrap()).unwrap();
        if let Body::StableTame { chain, .. } = &mut c.body {
            chain[1].result = chain[0].result.clone();
        }
        assert!(replay(&c).is_err());
    }
}
