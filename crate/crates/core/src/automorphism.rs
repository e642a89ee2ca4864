//! Polynomial maps of affine space and the factors they are built from.
//!
//! Composition is right-to-left: `(F o G)_i = F_i(G_1, ..., G_n)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::multipoly::{default_names, MultiPoly, ScaledPoly};
use crate::ring::RingElem;

/// An endomorphism of affine `n`-space with fraction-field coordinates.
///
/// Variable names are display metadata; equality compares coordinates only.
#[derive(Clone)]
pub struct PolyMap {
    coords: Vec<ScaledPoly>,
    names: Vec<String>,
}

impl PartialEq for PolyMap {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for PolyMap {}

impl PolyMap {
    pub fn new(coords: Vec<ScaledPoly>) -> Result<Self> {
        let n = coords.len();
        let names = default_names(n);
        Self::with_names(coords, names)
    }

    pub fn with_names(coords: Vec<ScaledPoly>, names: Vec<String>) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::Shape {
                expected: 1,
                found: 0,
            });
        }
        for c in &coords {
            if c.nvars() != n {
                return Err(Error::Shape {
                    expected: n,
                    found: c.nvars(),
                });
            }
        }
        if names.len() != n {
            return Err(Error::Shape {
                expected: n,
                found: names.len(),
            });
        }
        Ok(PolyMap { coords, names })
    }

    /// Builds a map from integral coordinates.
    pub fn from_polys(coords: Vec<MultiPoly>) -> Result<Self> {
        Self::new(coords.into_iter().map(ScaledPoly::from_poly).collect())
    }

    pub fn identity(n: usize) -> Self {
        PolyMap {
            coords: (0..n).map(|i| ScaledPoly::var(n, i)).collect(),
            names: default_names(n),
        }
    }

    pub fn renamed(mut self, names: &[&str]) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[ScaledPoly] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &ScaledPoly {
        &self.coords[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_identity(&self) -> bool {
        self.coords
            .iter()
            .enumerate()
            .all(|(i, c)| *c == ScaledPoly::var(self.dim(), i))
    }

    /// True when every coordinate lies in `Z[t][vars]`.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integral())
    }

    /// `self o g`; the result keeps the names of `g`.
    pub fn compose(&self, g: &PolyMap) -> Result<PolyMap> {
        if self.dim() != g.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                found: g.dim(),
            });
        }
        let coords = self
            .coords
            .iter()
            .map(|c| c.substitute(&g.coords))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap {
            coords,
            names: g.names.clone(),
        })
    }

    /// Determinant of the formal Jacobian matrix.
    pub fn jacobian_det(&self) -> ScaledPoly {
        let n = self.dim();
        let jac: Vec<Vec<ScaledPoly>> = self
            .coords
            .iter()
            .map(|c| (0..n).map(|j| c.derivative(j)).collect())
            .collect();
        determinant(&jac)
    }

    /// `(F, X_{n+1}, ..., X_{n+m})` with default names for the new variables.
    pub fn stabilize(&self, m: usize) -> PolyMap {
        let n = self.dim() + m;
        let mut coords: Vec<ScaledPoly> = self.coords.iter().map(|c| c.extend(n)).collect();
        coords.extend((self.dim()..n).map(|i| ScaledPoly::var(n, i)));
        let mut names = self.names.clone();
        let defaults = default_names(n + self.dim());
        for d in defaults {
            if names.len() == n {
                break;
            }
            if !names.contains(&d) {
                names.push(d);
            }
        }
        PolyMap { coords, names }
    }

    /// Constant terms of the coordinates, i.e. the image of the origin.
    pub fn constant_terms(&self) -> Vec<Fraction> {
        self.coords.iter().map(|c| c.constant_term()).collect()
    }

    /// Sum of coordinate total degrees.
    pub fn total_degree(&self) -> Result<usize> {
        self.coords.iter().map(|c| c.total_degree()).sum()
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| c.display_with(&self.names).to_string())
            .collect();
        format!("({})", parts.join(", "))
    }
}

fn determinant(m: &[Vec<ScaledPoly>]) -> ScaledPoly {
    let nv = m[0][0].nvars();
    match m.len() {
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        k => {
            let mut acc = ScaledPoly::zero(nv);
            for col in 0..k {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<ScaledPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &determinant(&minor);
                acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap{}", self.display())
    }
}

/// A generator of the tame group, possibly with fraction-field data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Factor {
    /// `x -> M x + s`.
    Affine {
        matrix: Vec<Vec<Fraction>>,
        shift: Vec<Fraction>,
    },
    /// Adds `rule` to coordinate `target`; `rule` does not involve that variable.
    Elementary { target: usize, rule: ScaledPoly },
    /// `D_{a,1} = (aX, Y, ...)`.
    Diagonal { a: Fraction },
    /// `(X + c, Y + d, ...)`.
    Translation { shift: Vec<Fraction> },
}

#[allow(clippy::needless_range_loop)]
fn frac_matrix_det(m: &[Vec<Fraction>]) -> Fraction {
    let n = m.len();
    let mut a: Vec<Vec<Fraction>> = m.to_vec();
    let mut det = Fraction::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Fraction::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].inv().expect("nonzero pivot");
        for r in col + 1..n {
            let f = &a[r][col] * &inv;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = &a[r][c] - &(&f * &a[col][c]);
                a[r][c] = v;
            }
        }
    }
    det
}

#[allow(clippy::needless_range_loop)]
fn frac_matrix_inv(m: &[Vec<Fraction>]) -> Result<Vec<Vec<Fraction>>> {
    let n = m.len();
    let mut a: Vec<Vec<Fraction>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Fraction::one() } else { Fraction::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidFactor("singular affine matrix".into()))?;
        a.swap(piv, col);
        let inv = a[col][col].inv()?;
        for c in 0..2 * n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let v = &a[r][c] - &(&f * &a[col][c]);
                a[r][c] = v;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl Factor {
    pub fn elementary(target: usize, rule: ScaledPoly) -> Result<Factor> {
        if !rule.num().free_of(target) {
            return Err(Error::InvalidFactor(format!(
                "elementary rule {rule} involves its target variable"
            )));
        }
        Ok(Factor::Elementary { target, rule })
    }

    /// Linear part `matrix` with zero shift.
    pub fn linear(matrix: Vec<Vec<Fraction>>) -> Factor {
        let n = matrix.len();
        Factor::Affine {
            matrix,
            shift: vec![Fraction::zero(); n],
        }
    }

    /// Exchanges coordinates `i` and `j` of `n`.
    pub fn swap(n: usize, i: usize, j: usize) -> Factor {
        let matrix = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let src = if r == i {
                            j
                        } else if r == j {
                            i
                        } else {
                            r
                        };
                        if c == src {
                            Fraction::one()
                        } else {
                            Fraction::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Factor::linear(matrix)
    }

    /// The ambient dimension the factor is pinned to, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Factor::Affine { matrix, .. } => Some(matrix.len()),
            Factor::Elementary { rule, .. } => Some(rule.nvars()),
            Factor::Diagonal { .. } => None,
            Factor::Translation { shift } => Some(shift.len()),
        }
    }

    /// Checks invertibility and shape against `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Factor::Affine { matrix, shift } => {
                if matrix.len() != n || shift.len() != n || matrix.iter().any(|r| r.len() != n) {
                    return Err(Error::Shape {
                        expected: n,
                        found: matrix.len(),
                    });
                }
                if frac_matrix_det(matrix).is_zero() {
                    return Err(Error::InvalidFactor("singular affine matrix".into()));
                }
            }
            Factor::Elementary { target, rule } => {
                if rule.nvars() != n || *target >= n {
                    return Err(Error::Shape {
                        expected: n,
                        found: rule.nvars(),
                    });
                }
                if !rule.num().free_of(*target) {
                    return Err(Error::InvalidFactor(
                        "elementary rule involves its target variable".into(),
                    ));
                }
            }
            Factor::Diagonal { a } => {
                if a.is_zero() {
                    return Err(Error::InvalidFactor("diagonal entry is zero".into()));
                }
            }
            Factor::Translation { shift } => {
                if shift.len() != n {
                    return Err(Error::Shape {
                        expected: n,
                        found: shift.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// True when the factor and its inverse have coefficients in `Z[t]`.
    pub fn is_over_ring(&self) -> bool {
        match self {
            Factor::Affine { matrix, shift } => {
                matrix.iter().flatten().chain(shift).all(|x| x.is_integral())
                    && frac_matrix_det(matrix)
                        .as_ring()
                        .is_some_and(|d| d.is_unit())
            }
            Factor::Elementary { rule, .. } => rule.is_integral(),
            Factor::Diagonal { a } => a.as_ring().is_some_and(|d| d.is_unit()),
            Factor::Translation { shift } => shift.iter().all(|x| x.is_integral()),
        }
    }

    pub fn inverse(&self) -> Result<Factor> {
        Ok(match self {
            Factor::Affine { matrix, shift } => {
                let inv = frac_matrix_inv(matrix)?;
                let shift = inv
                    .iter()
                    .map(|row| {
                        let s = row
                            .iter()
                            .zip(shift)
                            .fold(Fraction::zero(), |acc, (a, b)| &acc + &(a * b));
                        -s
                    })
                    .collect();
                Factor::Affine { matrix: inv, shift }
            }
            Factor::Elementary { target, rule } => Factor::Elementary {
                target: *target,
                rule: -rule,
            },
            Factor::Diagonal { a } => Factor::Diagonal { a: a.inv()? },
            Factor::Translation { shift } => Factor::Translation {
                shift: shift.iter().map(|s| -s).collect(),
            },
        })
    }

    /// `self o g`, computed without general substitution where possible.
    pub fn apply_after(&self, g: &PolyMap) -> Result<PolyMap> {
        let n = g.dim();
        self.validate(n)?;
        let mut coords = g.coords.clone();
        match self {
            Factor::Affine { matrix, shift } => {
                for (i, c) in coords.iter_mut().enumerate() {
                    let mut acc = ScaledPoly::constant(n, &shift[i]);
                    for (j, m) in matrix[i].iter().enumerate() {
                        if !m.is_zero() {
                            acc = &acc + &g.coords[j].scale(m);
                        }
                    }
                    *c = acc;
                }
            }
            Factor::Elementary { target, rule } => {
                coords[*target] = &g.coords[*target] + &rule.substitute(&g.coords)?;
            }
            Factor::Diagonal { a } => {
                coords[0] = g.coords[0].scale(a);
            }
            Factor::Translation { shift } => {
                for (c, s) in coords.iter_mut().zip(shift) {
                    *c = &*c + &ScaledPoly::constant(n, s);
                }
            }
        }
        Ok(PolyMap {
            coords,
            names: g.names.clone(),
        })
    }

    /// Lifts the factor to `m` extra variables acting as the identity.
    pub fn stabilize(&self, m: usize) -> Factor {
        match self {
            Factor::Affine { matrix, shift } => {
                let n = matrix.len() + m;
                let matrix = (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| {
                                if r < matrix.len() && c < matrix.len() {
                                    matrix[r][c].clone()
                                } else if r == c {
                                    Fraction::one()
                                } else {
                                    Fraction::zero()
                                }
                            })
                            .collect()
                    })
                    .collect();
                let mut shift = shift.clone();
                shift.resize(n, Fraction::zero());
                Factor::Affine { matrix, shift }
            }
            Factor::Elementary { target, rule } => Factor::Elementary {
                target: *target,
                rule: rule.extend(rule.nvars() + m),
            },
            Factor::Diagonal { a } => Factor::Diagonal { a: a.clone() },
            Factor::Translation { shift } => {
                let mut shift = shift.clone();
                shift.resize(shift.len() + m, Fraction::zero());
                Factor::Translation { shift }
            }
        }
    }
}

/// The map of a single factor in dimension `n`.
pub fn factor_to_map(f: &Factor, n: usize) -> Result<PolyMap> {
    f.apply_after(&PolyMap::identity(n))
}

/// `fs[0] o fs[1] o ... o fs[k-1]` in dimension `n`.
pub fn compose_factors(fs: &[Factor], n: usize) -> Result<PolyMap> {
    let mut acc = PolyMap::identity(n);
    for f in fs.iter().rev() {
        acc = f.apply_after(&acc)?;
    }
    Ok(acc)
}

/// Reversed list of inverses, so that the two lists compose to the identity.
pub fn invert_factors(fs: &[Factor]) -> Result<Vec<Factor>> {
    fs.iter().rev().map(|f| f.inverse()).collect()
}

pub fn compose(f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
    f.compose(g)
}

pub fn jacobian_det(f: &PolyMap) -> ScaledPoly {
    f.jacobian_det()
}

pub fn stabilize(f: &PolyMap, m: usize) -> PolyMap {
    f.stabilize(m)
}

fn var2(i: usize) -> MultiPoly {
    MultiPoly::var(2, i)
}

/// The factors `F1^-1, F2, F1` of Nagata's map, with `F1 = (X, Y + X^2/t)` and
/// `F2 = (X + t^2 Y, Y)`.
pub fn nagata_factors() -> Vec<Factor> {
    let t = RingElem::t();
    let f1 = Factor::Elementary {
        target: 1,
        rule: ScaledPoly::new(var2(0).pow(2), t.clone()).expect("t is nonzero"),
    };
    let f2 = Factor::Elementary {
        target: 0,
        rule: ScaledPoly::from_poly(var2(1).scale(&(&t * &t))),
    };
    vec![f1.inverse().expect("elementary"), f2, f1]
}

/// Nagata's map `N = F1^-1 o F2 o F1`, expanded.
pub fn nagata() -> PolyMap {
    compose_factors(&nagata_factors(), 2).expect("well-formed factors")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(r: RingElem) -> MultiPoly {
        MultiPoly::constant(2, r)
    }

    #[test]
    fn nagata_matches_printed_expansion() {
        let t = RingElem::t();
        let (x, y) = (var2(0), var2(1));
        let u = &(&c(t.clone()) * &y) + &x.pow(2);
        let p = &x + &(&c(t.clone()) * &u);
        let q = &y - &(&u * &x).scale(&RingElem::from_int(2)) - &c(t) * &u.pow(2);
        let n = nagata();
        assert_eq!(n, PolyMap::from_polys(vec![p, q]).unwrap());
        assert!(n.is_integral());
        assert_eq!(n.jacobian_det(), ScaledPoly::one(2));
    }

    #[test]
    fn inverse_factors_cancel() {
        let fs = nagata_factors();
        let inv = invert_factors(&fs).unwrap();
        let mut all = fs.clone();
        all.extend(inv);
        assert!(compose_factors(&all, 2).unwrap().is_identity());
        assert!(invert_factors(&[]).unwrap().is_empty());
    }

    #[test]
    fn factor_maps() {
        let d = factor_to_map(&Factor::Diagonal { a: (-1).into() }, 2).unwrap();
        assert_eq!(d, PolyMap::from_polys(vec![-var2(0), var2(1)]).unwrap());
        let tr = Factor::Translation {
            shift: vec![RingElem::t().into(), 3.into()],
        };
        let m = factor_to_map(&tr, 2).unwrap();
        assert_eq!(
            m,
            PolyMap::from_polys(vec![
                &var2(0) + &c(RingElem::t()),
                &var2(1) + &c(RingElem::from_int(3))
            ])
            .unwrap()
        );
        let bad = Factor::linear(vec![vec![1.into(), 2.into()], vec![2.into(), 4.into()]]);
        assert!(matches!(factor_to_map(&bad, 2), Err(Error::InvalidFactor(_))));
    }

    #[test]
    fn affine_inverse() {
        let f = Factor::Affine {
            matrix: vec![vec![2.into(), 1.into()], vec![1.into(), 1.into()]],
            shift: vec![RingElem::t().into(), (-1).into()],
        };
        let all = vec![f.clone(), f.inverse().unwrap()];
        assert!(compose_factors(&all, 2).unwrap().is_identity());
        assert!(f.is_over_ring());
    }

    #[test]
    fn stabilize_keeps_jacobian() {
        let n = nagata();
        let s = n.stabilize(1);
        assert_eq!(s.dim(), 3);
        assert_eq!(s.names(), &["X", "Y", "Z"]);
        assert_eq!(s.jacobian_det(), ScaledPoly::one(3));
    }
}
