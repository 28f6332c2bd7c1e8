//! Logarithmic derivations, free divisors, Bernstein–Sato polynomials and
//! Spencer complexes with exact arithmetic.

pub mod cas;
pub mod divisor;
pub mod ilc;
pub mod spencer;
pub mod weyl;
