//! Worked examples: factor data and printed expansions in the map grammar.

use crate::automorphism::PolyMap;
use crate::error::Result;
use crate::grammar::{parse_factors, parse_map, FactorList};
use crate::structure::LengthFourSpec;

/// Nagata's map as printed.
pub const NAGATA_PRINTED: &str =
    "(X + t*(t*Y + X^2), Y - 2*(t*Y + X^2)*X - t*(t*Y + X^2)^2)";

/// `F1^-1 o F2 o F1` with `F1 = (X, Y + X^2/t)` and `F2 = (X + t^2 Y, Y)`.
pub const NAGATA_FACTORS: &str = "Y += -(X^2)/(t); X += t^2*Y; Y += (X^2)/(t)";

/// The length-four commutator data `C, D, a, b`.
pub const EXAMPLE5_SPEC: &str = "C = (t+1)*Z^2; D = t*Z; a = t; b = t+1";

pub const EXAMPLE5_PRINTED: &str = "(X + t*(t+1)*X^2 - t^5*Y^2 - t^3*(t+1)^6*X^4 \
     - 2*t^3*(t+1)*X*Y - 2*t^2*(t+1)^4*X^3 - 2*t^3*(t+1)^4*X^2*Y, \
     Y - t^3*(t+1)*Y^2 - t*(t+1)^7*X^4 - 2*t*(t+1)^2*X*Y - 2*(t+1)^5*X^3 \
     - 2*t*(t+1)^5*X^2*Y)";

/// `G2 o F2 o G1 o F1`.
pub const EXAMPLE9_FACTORS: &str =
    "X += -(Y^2)/(t); Y += (t-1)*X; X += (t+1)*Y; Y += (X^2)/(t)";

pub const EXAMPLE9_PRINTED: &str = "(X + (t+1)*Y + 3*X^2 - t^3*Y^2 - t*X^2 - t*X^4 \
     - 2*t^2*X*Y + 2*t*X*Y - 2*t^2*X^2*Y - 2*t*X^3 + 2*X^3, t^2*Y + (t-1)*X + t*X^2)";

/// The auxiliary polynomial `X + tY + X^2` of the three-variable construction.
pub const EXAMPLE9_QTILDE: &str = "X + t*Y + X^2";

/// The printed expansion of the conjugated three-variable map.
pub const EXAMPLE9_FT1_PRINTED: &str = "(X, Y + t*Y + X - t*Z + t^3*Y^2 + 3*(X - t*Z)^2 \
     - t*(X - t*Z)^2 - t*(X - t*Z)^4 - 2*t^2*(X - t*Z)*Y + 2*t*(X - t*Z)*Y \
     - 2*t^2*(X - t*Z)^2*Y - 2*t*(X - t*Z)^3 + 2*(X - t*Z)^3, \
     Z + (X - t*Z) + t*Y + (X - t*Z)^2)";

pub const EXAMPLE9_TILDE_F1_PRINTED: &str =
    "(X, Y + ((X + t*Z) + (X + t*Z)^2 - X - X^2)/(t), Z)";

pub const EXAMPLE9_TILDE_G1: &str = "(X, Y, Z + t*Y)";

/// The shear that completes the three-variable factorization.
pub const EXAMPLE9_CORRECTION: &str = "(X, Y - 2*t*X*(X + 1)*Z, Z)";

/// `F1` with `X - tZ` in place of `X + tZ`.
pub const EXAMPLE9_TILDE_F1_CORRECTED: &str =
    "(X, Y + ((X - t*Z) + (X - t*Z)^2 - X - X^2)/(t), Z)";

pub fn nagata_factor_list() -> Result<FactorList> {
    parse_factors(NAGATA_FACTORS)
}

pub fn nagata_printed() -> Result<PolyMap> {
    parse_map(NAGATA_PRINTED)
}

pub fn example5_spec() -> Result<LengthFourSpec> {
    LengthFourSpec::parse(EXAMPLE5_SPEC)
}

pub fn example5_printed() -> Result<PolyMap> {
    parse_map(EXAMPLE5_PRINTED)
}

pub fn example9_factor_list() -> Result<FactorList> {
    parse_factors(EXAMPLE9_FACTORS)
}

pub fn example9_printed() -> Result<PolyMap> {
    parse_map(EXAMPLE9_PRINTED)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{compose_factors, nagata};

    #[test]
    fn catalog_parses() {
        let n = nagata_factor_list().unwrap();
        assert_eq!(compose_factors(&n.factors, 2).unwrap(), nagata());
        assert_eq!(nagata_printed().unwrap(), nagata());
        let e9 = example9_factor_list().unwrap();
        assert_eq!(compose_factors(&e9.factors, 2).unwrap(), example9_printed().unwrap());
        assert_eq!(parse_map(EXAMPLE9_FT1_PRINTED).unwrap().dim(), 3);
        assert_eq!(parse_map(EXAMPLE9_TILDE_F1_PRINTED).unwrap().dim(), 3);
        example5_printed().unwrap();
    }
}
