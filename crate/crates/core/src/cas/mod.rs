//! Exact commutative algebra: polynomials, monomial orders, Gröbner bases,
//! syzygies, elimination and dimension.

pub mod engine;
pub mod groebner;
pub mod linalg;
pub mod lp;
pub mod monomial;
pub mod parse;
pub mod polymat;
pub mod poly;
pub mod univariate;

pub use engine::{Deadline, GbConfig, Selection};
pub use groebner::{
    buchberger, buchberger_with, elimination_ideal, elimination_ideal_with, gcd, ideal_contains, ideal_equal,
    krull_dimension, krull_dimension_with, module_groebner, normal_form, repeated_part, syzygies, syzygies_with,
    IdealBasis,
};
pub use monomial::{Comparator, Monomial, MonomialOrder};
pub use parse::{parse, parse_in, ParseError};
pub use poly::{Poly, Ring};
pub use univariate::UPoly;

/// Exact rational coefficients.
pub type Q = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CasError {
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("basis is not a Gröbner basis")]
    NotGroebner,
    #[error("computation cancelled")]
    Cancelled,
    #[error("degree cap {cap} exceeded (reached {reached})")]
    DegreeCap { cap: u32, reached: u32 },
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("empty generator list")]
    Empty,
    #[error("shape error: {0}")]
    Shape(String),
}

/// Integer as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// The rational `a / b`.
pub fn qr(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}
