//! Divisors `{f = 0}`: logarithmic derivations, Saito bases and the
//! ideal-theoretic properties built on them.

mod classify;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cas::linalg::primitive_integer_vector;
use crate::cas::lp::{maximize, LpOutcome};
use crate::cas::polymat::{self, PolyMatrix};
use crate::cas::{
    buchberger_with, elimination_ideal_with, ideal_equal, krull_dimension_with, normal_form, parse, parse_in,
    repeated_part, syzygies_with, CasError, GbConfig, IdealBasis, Monomial, MonomialOrder, ParseError, Poly, Ring, Q,
};

pub use classify::{classify, classify_with, ClassificationReport, ClassifyOptions, Flag, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivisorError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Cas(#[from] CasError),
    #[error("f is constant")]
    Constant,
    #[error("f does not vanish at the origin (constant term {0})")]
    NotThroughOrigin(String),
    #[error("f is not reduced: repeated factor {0}")]
    NotReduced(String),
    #[error("not a logarithmic derivation: {0}")]
    NotLogarithmic(String),
    #[error("implication violated: {0}")]
    ImplicationViolated(String),
}

/// A reduced equation `f` vanishing at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorInput {
    f: Poly,
}

impl DivisorInput {
    pub fn new(f: Poly) -> Result<Self, DivisorError> {
        if f.is_constant() {
            return Err(DivisorError::Constant);
        }
        let c = f.constant_term();
        if !c.is_zero() {
            return Err(DivisorError::NotThroughOrigin(c.to_string()));
        }
        let rep = repeated_part(&f)?;
        if !rep.is_constant() {
            return Err(DivisorError::NotReduced(rep.to_string()));
        }
        Ok(DivisorInput { f })
    }

    /// Parses `text`; with `vars` the ring is fixed, otherwise it is inferred.
    pub fn parse(text: &str, vars: Option<&[String]>) -> Result<Self, DivisorError> {
        let f = match vars {
            Some(v) => parse_in(text, &Ring::new(v))?,
            None => parse(text)?,
        };
        DivisorInput::new(f)
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.f.ring()
    }

    pub fn n(&self) -> usize {
        self.f.nvars()
    }

    pub fn partials(&self) -> Vec<Poly> {
        (0..self.n()).map(|i| self.f.derivative(i)).collect()
    }
}

/// `(f, ∂f/∂x_1, …, ∂f/∂x_n)`.
pub fn jacobian_ideal(d: &DivisorInput) -> Vec<Poly> {
    let mut v = vec![d.f.clone()];
    v.extend(d.partials());
    v
}

/// A vector field `Σ a_i ∂_i` with `δ(f) = α f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogDerivation {
    a: Vec<Poly>,
    alpha: Poly,
}

impl LogDerivation {
    /// Checked constructor.
    pub fn new(f: &Poly, a: Vec<Poly>, alpha: Poly) -> Result<Self, DivisorError> {
        let d = LogDerivation { a, alpha };
        if d.apply(f) != &d.alpha * f {
            return Err(DivisorError::NotLogarithmic(d.to_string()));
        }
        Ok(d)
    }

    /// The field with coefficients `a`, if it is logarithmic along `f`.
    pub fn from_coefficients(f: &Poly, a: Vec<Poly>) -> Option<Self> {
        let mut d = LogDerivation { a, alpha: Poly::zero(f.ring()) };
        let v = d.apply(f);
        d.alpha = if v.is_zero() { Poly::zero(f.ring()) } else { v.div_exact(f)? };
        Some(d)
    }

    pub fn a(&self) -> &[Poly] {
        &self.a
    }

    pub fn alpha(&self) -> &Poly {
        &self.alpha
    }

    /// `δ(g) = Σ a_i ∂g/∂x_i`.
    pub fn apply(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(g.ring());
        for (i, ai) in self.a.iter().enumerate() {
            if !ai.is_zero() {
                acc = &acc + &(ai * &g.derivative(i));
            }
        }
        acc
    }

    /// Lie bracket `[self, other]` as a logarithmic derivation.
    pub fn bracket(&self, other: &LogDerivation) -> LogDerivation {
        let a = (0..self.a.len()).map(|k| &self.apply(&other.a[k]) - &other.apply(&self.a[k])).collect();
        let alpha = &self.apply(&other.alpha) - &other.apply(&self.alpha);
        LogDerivation { a, alpha }
    }

    fn combine(terms: &[(Q, &LogDerivation)], ring: &Arc<Ring>, n: usize) -> LogDerivation {
        let mut a = vec![Poly::zero(ring); n];
        let mut alpha = Poly::zero(ring);
        for (c, d) in terms {
            for (k, ak) in d.a.iter().enumerate() {
                a[k] = &a[k] + &ak.scale(c);
            }
            alpha = &alpha + &d.alpha.scale(c);
        }
        LogDerivation { a, alpha }
    }
}

impl fmt::Display for LogDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.alpha.ring().vars();
        let mut parts = Vec::new();
        for (i, ai) in self.a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let s = ai.to_string();
            let coef = if ai.len() > 1 { format!("({s})") } else { s };
            parts.push(format!("{coef}*d{}", names[i]));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn normalize_rows(v: &[Poly]) -> Q {
    // scaling that makes the entries coprime integers with positive leading coefficient
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for p in v {
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
    }
    for p in v {
        for (_, c) in p.terms() {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
    }
    let mut factor = Q::new(den, if num.is_zero() { BigInt::one() } else { num });
    let cmp = MonomialOrder::DegRevLex.comparator(v.first().map_or(0, |p| p.nvars()));
    if let Some(first) = v.iter().find(|p| !p.is_zero()) {
        if first.leading_term(&cmp).map_or(false, |(_, c)| c.is_negative()) {
            factor = -factor;
        }
    }
    factor
}

/// Generators of `Der(log f)`, from the syzygies of `(∂f/∂x_1, …, ∂f/∂x_n, f)`.
///
/// The list is the reduced Gröbner basis of the module of coefficient vectors
/// (position over term, degrevlex), each scaled to coprime integer coefficients.
pub fn log_derivations(d: &DivisorInput) -> Result<Vec<LogDerivation>, DivisorError> {
    log_derivations_with(d, &GbConfig::default())
}

pub fn log_derivations_with(d: &DivisorInput, cfg: &GbConfig) -> Result<Vec<LogDerivation>, DivisorError> {
    let n = d.n();
    let mut gens = d.partials();
    gens.push(d.f.clone());
    let syz = syzygies_with(&gens, cfg)?;
    let mut out = Vec::new();
    for v in syz {
        let a: Vec<Poly> = v[..n].to_vec();
        if a.iter().all(|p| p.is_zero()) {
            continue;
        }
        let k = normalize_rows(&a);
        let a: Vec<Poly> = a.iter().map(|p| p.scale(&k)).collect();
        let alpha = -v[n].scale(&k);
        out.push(LogDerivation::new(&d.f, a, alpha)?);
    }
    Ok(out)
}

/// `n` logarithmic derivations whose coefficient matrix has determinant `unit * f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaitoBasis {
    rows: Vec<LogDerivation>,
    unit: Q,
}

impl SaitoBasis {
    /// Checks the determinant certificate.
    pub fn new(f: &Poly, rows: Vec<LogDerivation>) -> Option<Self> {
        let n = f.nvars();
        if rows.len() != n {
            return None;
        }
        let m: PolyMatrix = rows.iter().map(|r| r.a.clone()).collect();
        let det = polymat::det(f.ring(), &m);
        let q = det.div_exact(f)?;
        if !q.is_constant() || q.is_zero() {
            return None;
        }
        for r in &rows {
            if r.apply(f) != &r.alpha * f {
                return None;
            }
        }
        Some(SaitoBasis { rows, unit: q.constant_term() })
    }

    pub fn rows(&self) -> &[LogDerivation] {
        &self.rows
    }

    /// The unit `u` with `det = u·f`.
    pub fn unit(&self) -> &Q {
        &self.unit
    }

    /// Rows are the coefficient vectors of the basis fields.
    pub fn matrix(&self) -> PolyMatrix {
        self.rows.iter().map(|r| r.a.clone()).collect()
    }

    pub fn alphas(&self) -> Vec<Poly> {
        self.rows.iter().map(|r| r.alpha.clone()).collect()
    }

    pub fn verify(&self, f: &Poly) -> bool {
        let det = polymat::det(f.ring(), &self.matrix());
        det == f.scale(&self.unit)
    }
}

pub const SAITO_ATTEMPTS: usize = 200;
pub const SAITO_SEED: u64 = 0x5a17_0b45;

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Searches for a Saito basis among `ders`: first size-`n` subsets, then
/// random small-integer combinations (bounded, deterministic).
pub fn saito_basis(d: &DivisorInput, ders: &[LogDerivation]) -> Option<SaitoBasis> {
    let n = d.n();
    for s in subsets(ders.len(), n) {
        let rows: Vec<LogDerivation> = s.iter().map(|&i| ders[i].clone()).collect();
        if let Some(b) = SaitoBasis::new(&d.f, rows) {
            return Some(b);
        }
    }
    if ders.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAITO_SEED);
    for _ in 0..SAITO_ATTEMPTS {
        let rows: Vec<LogDerivation> = (0..n)
            .map(|_| {
                let coeffs: Vec<(Q, &LogDerivation)> = ders
                    .iter()
                    .map(|g| (Q::from_integer(rng.gen_range(-2i64..=2).into()), g))
                    .collect();
                LogDerivation::combine(&coeffs, d.ring(), n)
            })
            .collect();
        if let Some(b) = SaitoBasis::new(&d.f, rows) {
            return Some(b);
        }
    }
    None
}

/// `f ∈ (∂f/∂x_1, …, ∂f/∂x_n)`.
pub fn is_euler_homogeneous(d: &DivisorInput) -> Result<bool, DivisorError> {
    is_euler_homogeneous_with(d, &GbConfig::default())
}

pub fn is_euler_homogeneous_with(d: &DivisorInput, cfg: &GbConfig) -> Result<bool, DivisorError> {
    let gb = buchberger_with(&IdealBasis::new(d.ring(), d.partials(), MonomialOrder::DegRevLex)?, cfg)?;
    Ok(normal_form(&d.f, &gb)?.is_zero())
}

/// Strictly positive integer weights making `f` weighted homogeneous, if any.
///
/// Among all admissible weight vectors the one maximizing the smallest weight
/// (with the weights summing to one) is returned, scaled to coprime integers.
pub fn is_quasi_homogeneous(d: &DivisorInput) -> Option<Vec<i64>> {
    let n = d.n();
    let exps: Vec<Monomial> = d.f.terms().map(|(m, _)| m.clone()).collect();
    let base = &exps[0];
    let mut a: Vec<Vec<Q>> = Vec::new();
    let mut b: Vec<Q> = Vec::new();
    for m in &exps[1..] {
        let diff: Vec<i64> = (0..n).map(|i| m.exps()[i] as i64 - base.exps()[i] as i64).collect();
        let mut row: Vec<Q> = diff.iter().map(|&x| Q::from_integer(x.into())).collect();
        row.push(Q::from_integer(diff.iter().sum::<i64>().into()));
        a.push(row);
        b.push(Q::zero());
    }
    let mut norm: Vec<Q> = vec![Q::one(); n];
    norm.push(Q::from_integer((n as i64).into()));
    a.push(norm);
    b.push(Q::one());
    let mut c = vec![Q::zero(); n];
    c.push(Q::one());
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let w: Vec<Q> = (0..n).map(|i| &x[i] + &x[n]).collect();
            let ints = primitive_integer_vector(&w);
            ints.iter().map(|v| v.to_i64()).collect()
        }
        _ => None,
    }
}

/// Weighted homogeneity check for user-supplied weights.
pub fn check_weights(d: &DivisorInput, w: &[i64]) -> bool {
    w.len() == d.n() && w.iter().all(|&x| x > 0) && d.f.weighted_homogeneous_degree(w).is_some()
}

/// The ring `Q[x, s, ξ]` housing total-order symbols.
#[derive(Clone, Debug)]
pub struct SymbolRing {
    ring: Arc<Ring>,
    n: usize,
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut s = base.to_string();
    while taken.contains(&s) {
        s.push('_');
    }
    s
}

impl SymbolRing {
    pub fn new(base: &Arc<Ring>) -> Self {
        let n = base.nvars();
        let mut names = base.vars().to_vec();
        let s = fresh("s", &names);
        names.push(s);
        for j in 0..n {
            let xi = fresh(&format!("xi{}", j + 1), &names);
            names.push(xi);
        }
        SymbolRing { ring: Ring::new(&names), n }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.n
    }

    pub fn xi(&self, j: usize) -> usize {
        self.n + 1 + j
    }

    pub fn embed(&self, p: &Poly) -> Poly {
        p.embed(&self.ring).expect("base ring embeds into the symbol ring")
    }

    /// `Σ_j a_j ξ_j`.
    pub fn order_symbol(&self, d: &LogDerivation) -> Poly {
        let mut acc = Poly::zero(&self.ring);
        for (j, aj) in d.a.iter().enumerate() {
            acc = &acc + &(&self.embed(aj) * &Poly::var(&self.ring, self.xi(j)));
        }
        acc
    }

    /// `Σ_j a_j ξ_j − α s`.
    pub fn total_symbol(&self, d: &LogDerivation) -> Poly {
        &self.order_symbol(d) - &(&self.embed(&d.alpha) * &Poly::var(&self.ring, self.s()))
    }

    /// The `(s, ξ)`-degree of a monomial.
    pub fn fibre_degree(&self, m: &Monomial) -> u32 {
        m.exps()[self.n..].iter().sum()
    }
}

/// Total-order symbols `σ_T(ζ_i) = Σ_j a_ij ξ_j − α_i s` of the Saito basis.
pub fn theta_generators(d: &DivisorInput, basis: &SaitoBasis) -> Vec<Poly> {
    let sr = SymbolRing::new(d.ring());
    basis.rows.iter().map(|r| sr.total_symbol(r)).collect()
}

/// Generators of `ker(Q[x][s, ξ] → Q[x][t], s ↦ f t, ξ_i ↦ ∂f/∂x_i · t)`.
pub fn rees_kernel(d: &DivisorInput) -> Result<Vec<Poly>, DivisorError> {
    rees_kernel_with(d, &GbConfig::sugar())
}

pub fn rees_kernel_with(d: &DivisorInput, cfg: &GbConfig) -> Result<Vec<Poly>, DivisorError> {
    let sr = SymbolRing::new(d.ring());
    let mut names = sr.ring.vars().to_vec();
    let t = fresh("t", &names);
    names.push(t);
    let ext = Ring::new(&names);
    let ti = ext.nvars() - 1;
    let tv = Poly::var(&ext, ti);
    let lift = |p: &Poly| p.embed(&ext).expect("embedding");
    let mut gens = vec![&Poly::var(&ext, sr.s()) - &(&lift(&d.f) * &tv)];
    for (j, fj) in d.partials().iter().enumerate() {
        gens.push(&Poly::var(&ext, sr.xi(j)) - &(&lift(fj) * &tv));
    }
    let out = elimination_ideal_with(&ext, &gens, &[ti], cfg)?;
    let k = sr.ring.nvars();
    Ok(out
        .iter()
        .map(|p| Poly::from_terms(&sr.ring, p.terms().map(|(m, c)| (Monomial::from_slice(&m.exps()[..k]), c.clone()))))
        .collect())
}

/// True when every generator is homogeneous in `(s, ξ)`.
pub fn is_fibre_homogeneous(sr: &SymbolRing, gens: &[Poly]) -> bool {
    gens.iter().all(|g| {
        let mut degs = g.terms().map(|(m, _)| sr.fibre_degree(m));
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    })
}

/// `ker φ` is generated by the degree-one symbols of the Saito basis.
pub fn is_linear_jacobian_type(d: &DivisorInput, basis: &SaitoBasis) -> Result<bool, DivisorError> {
    is_linear_jacobian_type_with(d, basis, &GbConfig::sugar())
}

pub fn is_linear_jacobian_type_with(
    d: &DivisorInput,
    basis: &SaitoBasis,
    cfg: &GbConfig,
) -> Result<bool, DivisorError> {
    let theta = theta_generators(d, basis);
    let kernel = rees_kernel_with(d, cfg)?;
    Ok(ideal_equal(&theta, &kernel, &MonomialOrder::DegRevLex)?)
}

/// The order symbols `σ(δ_i)` cut out a subvariety of dimension `n` in `Q[x, ξ]`.
pub fn is_koszul_free(d: &DivisorInput, basis: &SaitoBasis) -> Result<bool, DivisorError> {
    is_koszul_free_with(d, basis, &GbConfig::default())
}

pub fn is_koszul_free_with(d: &DivisorInput, basis: &SaitoBasis, cfg: &GbConfig) -> Result<bool, DivisorError> {
    let sr = SymbolRing::new(d.ring());
    let mut gens: Vec<Poly> = basis.rows.iter().map(|r| sr.order_symbol(r)).collect();
    // dividing out s leaves Q[x, ξ]
    gens.push(Poly::var(&sr.ring, sr.s()));
    Ok(krull_dimension_with(&sr.ring, &gens, cfg)? == d.n() as i64)
}

/// The total symbols `σ_T(ζ_i)` cut out a subvariety of dimension `n + 1` in `Q[x, s, ξ]`.
pub fn theta_symbols_regular(d: &DivisorInput, basis: &SaitoBasis, cfg: &GbConfig) -> Result<bool, DivisorError> {
    let sr = SymbolRing::new(d.ring());
    let gens = theta_generators(d, basis);
    Ok(krull_dimension_with(&sr.ring, &gens, cfg)? == d.n() as i64 + 1)
}
