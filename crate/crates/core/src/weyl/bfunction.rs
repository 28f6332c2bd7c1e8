//! Bernstein–Sato polynomials through the order-one annihilator of `f^s`.

use std::fmt;

use num_traits::{One, Zero};

use super::{act_on_fs_raw, lift_fs, weyl_groebner_with, FsElement, WeylOp, WeylRing};
use crate::cas::univariate::fmt_roots;
use crate::cas::{CasError, GbConfig, MonomialOrder, Poly, UPoly, Q};
use crate::divisor::{is_linear_jacobian_type, DivisorError, DivisorInput, SaitoBasis};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error(transparent)]
    Cas(#[from] CasError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error("empty generator list")]
    Empty,
    #[error("operators belong to different Weyl algebras")]
    RingMismatch,
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("{n} variables exceed the limit of {max}")]
    TooManyVariables { n: usize, max: usize },
    #[error("certificate operator failed to verify")]
    CertificateFailed,
}

impl WeylError {
    /// True for outcomes that are not answers but not input errors either.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            WeylError::Inconclusive(_) | WeylError::Cas(CasError::DegreeCap { .. }) | WeylError::Cas(CasError::Cancelled)
        )
    }
}

/// A monic polynomial in `s` with its rational roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFunction {
    poly: UPoly,
    roots: Vec<(Q, u32)>,
    /// True when the polynomial is known to equal the Bernstein–Sato
    /// polynomial; otherwise it is only known to be a multiple of it.
    pub exact: bool,
    /// `P` with `b(s) f^s = P f^{s+1}`.
    pub certificate: Option<WeylOp>,
}

impl BFunction {
    pub fn new(poly: UPoly, exact: bool) -> Self {
        let poly = poly.monic();
        let roots = poly.rational_roots();
        BFunction { poly, roots, exact, certificate: None }
    }

    pub fn from_roots(roots: &[(Q, u32)], exact: bool) -> Self {
        let p = roots.iter().fold(UPoly::one(), |acc, (r, m)| acc.mul(&UPoly::linear_root(r).pow(*m)));
        BFunction::new(p, exact)
    }

    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn roots(&self) -> &[(Q, u32)] {
        &self.roots
    }

    /// True when the roots account for the whole degree.
    pub fn splits(&self) -> bool {
        self.roots.iter().map(|r| r.1 as usize).sum::<usize>() == self.poly.degree().unwrap_or(0)
    }

    pub fn integer_roots(&self) -> Vec<i64> {
        self.roots
            .iter()
            .filter(|(r, _)| r.is_integer())
            .map(|(r, _)| i64::try_from(r.numer()).expect("small integer root"))
            .collect()
    }

    /// `b(s − k)`.
    pub fn shifted(&self, k: i64) -> BFunction {
        let k = Q::from_integer(k.into());
        let roots = self.roots.iter().map(|(r, m)| (r + &k, *m)).collect();
        BFunction { poly: self.poly.shift(&-k), roots, exact: self.exact, certificate: None }
    }
}

impl fmt::Display for BFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} roots {}", self.poly, fmt_roots(&self.roots))
    }
}

/// Integer from which the specialization statements are asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    /// `k ≥ k0`, with `k0 = −(smallest integer root)`.
    From(i64),
    /// No integer roots: every integer qualifies.
    Unbounded,
}

impl Threshold {
    pub fn admits(&self, k: i64) -> bool {
        match self {
            Threshold::From(k0) => k >= *k0,
            Threshold::Unbounded => true,
        }
    }

    pub fn value(&self) -> Option<i64> {
        match self {
            Threshold::From(k) => Some(*k),
            Threshold::Unbounded => None,
        }
    }
}

pub fn lct_threshold(b: &BFunction) -> Threshold {
    match b.integer_roots().into_iter().min() {
        Some(r) => Threshold::From(-r),
        None => Threshold::Unbounded,
    }
}

#[derive(Clone, Debug)]
pub struct BFunctionOptions {
    pub gb: GbConfig,
    pub max_vars: usize,
}

impl Default for BFunctionOptions {
    fn default() -> Self {
        BFunctionOptions { gb: GbConfig { degree_cap: Some(12), ..GbConfig::sugar() }, max_vars: 3 }
    }
}

/// `b(s) f^s = P f^{s+1}`, checked by applying `P` symbolically.
pub fn verify_functional_equation(f: &Poly, b: &UPoly, p: &WeylOp) -> bool {
    let ring = p.ring();
    let f_fs = lift_fs(ring, f);
    let raw = act_on_fs_raw(p, &FsElement { numerator: f_fs.clone(), pole: 0 }, f);
    let s = ring.fs_ring().nvars() - 1;
    let mut bs = Poly::zero(ring.fs_ring());
    for (k, c) in b.coeffs().iter().enumerate() {
        bs = &bs + &Poly::var(ring.fs_ring(), s).pow(k as u32).scale(c);
    }
    raw.numerator == &bs * &f_fs.pow(raw.pole)
}

/// Monic generator of `Q[s] ∩ D[s]·(f, ζ_1, …, ζ_n)`, with certificate.
pub fn bfunction_via_theta(d: &DivisorInput, basis: &SaitoBasis) -> Result<BFunction, WeylError> {
    bfunction_via_theta_with(d, basis, &BFunctionOptions::default())
}

pub fn bfunction_via_theta_with(
    d: &DivisorInput,
    basis: &SaitoBasis,
    opts: &BFunctionOptions,
) -> Result<BFunction, WeylError> {
    let n = d.n();
    if n > opts.max_vars {
        return Err(WeylError::TooManyVariables { n, max: opts.max_vars });
    }
    let ring = WeylRing::new(d.ring());
    let mut gens = vec![WeylOp::from_poly(&ring, d.f())];
    for r in basis.rows() {
        gens.push(WeylOp::zeta(&ring, r));
    }
    let order = MonomialOrder::Block {
        first: (0..2 * n).collect(),
        first_order: Box::new(MonomialOrder::DegRevLex),
        second_order: Box::new(MonomialOrder::DegRevLex),
    };
    let (gb, trans) = weyl_groebner_with(&gens, &order, &opts.gb, true)?;
    let trans = trans.expect("transcripts requested");
    let si = ring.s();
    let pos = gb
        .iter()
        .position(|g| g.terms().all(|(m, _)| m.exps().iter().enumerate().all(|(i, &e)| i == si || e == 0)))
        .ok_or_else(|| WeylError::Inconclusive("the left ideal meets Q[s] trivially".into()))?;
    let g = &gb[pos];
    let mut coeffs = vec![Q::zero(); g.terms().map(|(m, _)| m.exps()[si] as usize).max().unwrap_or(0) + 1];
    for (m, c) in g.terms() {
        coeffs[m.exps()[si] as usize] = c.clone();
    }
    let poly = UPoly::new(coeffs);
    let lc = poly.leading().cloned().unwrap_or_else(Q::one);
    let cert = trans[pos][0].scale(&lc.recip());
    let poly = poly.monic();
    if !verify_functional_equation(d.f(), &poly, &cert) {
        return Err(WeylError::CertificateFailed);
    }
    let exact = is_linear_jacobian_type(d, basis)?;
    let mut b = BFunction::new(poly, exact);
    b.certificate = Some(cert);
    Ok(b)
}

/// The Bernstein–Sato candidate for a divisor given as text (convenience for tests).
pub fn b_function_of(text: &str) -> Result<BFunction, WeylError> {
    let d = DivisorInput::parse(text, None)?;
    let ders = crate::divisor::log_derivations(&d)?;
    let basis = crate::divisor::saito_basis(&d, &ders)
        .ok_or_else(|| WeylError::Inconclusive("not recognized as free".into()))?;
    bfunction_via_theta(&d, &basis)
}
