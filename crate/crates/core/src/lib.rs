pub mod automorphism;
pub mod catalog;
pub mod certificate;
pub mod error;
pub mod field;
pub mod fraction;
pub mod grammar;
pub mod length;
pub mod multipoly;
pub mod report;
pub mod ring;
pub mod structure;
pub mod tameness;

pub use error::{Error, Result};
pub use fraction::Fraction;
pub use multipoly::{Monomial, MultiPoly, ScaledPoly};
pub use ring::RingElem;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ring.md")]
    mod ring {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/tameness.md")]
    mod tameness {}
    #[doc = include_str!("../../../book/src/length.md")]
    mod length {}
    #[doc = include_str!("../../../book/src/length_four.md")]
    mod length_four {}
    #[doc = include_str!("../../../book/src/stable_tameness.md")]
    mod stable_tameness {}
    #[doc = include_str!("../../../book/src/four_factors.md")]
    mod four_factors {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
