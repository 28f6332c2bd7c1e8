//! The Weyl algebra `D_n[s]` in normally ordered form, its action on
//! `Q[x, s, f^{-1}] f^s`, left Gröbner bases and Bernstein–Sato polynomials.

mod bfunction;
mod groebner;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cas::poly::{fmt_monomial, fmt_terms};
use crate::cas::{Monomial, MonomialOrder, Poly, Ring, Q};
use crate::divisor::{LogDerivation, SymbolRing};

pub use bfunction::{
    b_function_of, bfunction_via_theta, bfunction_via_theta_with, lct_threshold, verify_functional_equation,
    BFunction, BFunctionOptions, Threshold, WeylError,
};
pub use groebner::{weyl_groebner, weyl_groebner_with, weyl_normal_form, WeylAlg};

/// Variable layout of `D_n[s]`: exponents `[x_1..x_n, ∂_1..∂_n, s]`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct WeylRing {
    base: Arc<Ring>,
    names: Arc<Ring>,
    fs: Arc<Ring>,
}

impl WeylRing {
    pub fn new(base: &Arc<Ring>) -> Arc<WeylRing> {
        let sr = SymbolRing::new(base);
        let n = base.nvars();
        let s_name = sr.ring().vars()[n].clone();
        let mut names = base.vars().to_vec();
        for v in base.vars() {
            let mut d = format!("d{v}");
            while names.contains(&d) || d == s_name {
                d.push('_');
            }
            names.push(d);
        }
        names.push(s_name.clone());
        let mut fs = base.vars().to_vec();
        fs.push(s_name);
        Arc::new(WeylRing { base: base.clone(), names: Ring::new(&names), fs: Ring::new(&fs) })
    }

    pub fn n(&self) -> usize {
        self.base.nvars()
    }

    pub fn base(&self) -> &Arc<Ring> {
        &self.base
    }

    /// Ring of exponent names `(x, ∂, s)`, used for orders and printing.
    pub fn names(&self) -> &Arc<Ring> {
        &self.names
    }

    /// `Q[x, s]`, home of numerators of [`FsElement`].
    pub fn fs_ring(&self) -> &Arc<Ring> {
        &self.fs
    }

    pub fn nvars(&self) -> usize {
        2 * self.n() + 1
    }

    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn d(&self, i: usize) -> usize {
        self.n() + i
    }

    pub fn s(&self) -> usize {
        2 * self.n()
    }
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Normally ordered product of two monomials `x^a ∂^b s^k · x^c ∂^d s^l`.
pub fn mono_mul(n: usize, left: &Monomial, right: &Monomial) -> Vec<(Monomial, BigInt)> {
    let l = left.exps();
    let r = right.exps();
    let mut acc: Vec<(Monomial, BigInt)> = {
        let mut base = Monomial::one(2 * n + 1);
        base.0[2 * n] = l[2 * n] + r[2 * n];
        vec![(base, BigInt::one())]
    };
    for i in 0..n {
        let (a, b, c, d) = (l[i], l[n + i], r[i], r[n + i]);
        if b == 0 || c == 0 {
            for (m, _) in acc.iter_mut() {
                m.0[i] = a + c;
                m.0[n + i] = b + d;
            }
            continue;
        }
        let kmax = b.min(c);
        let mut next = Vec::with_capacity(acc.len() * (kmax as usize + 1));
        for (m, coef) in &acc {
            for k in 0..=kmax {
                let w = factorial(k) * binom(b, k) * binom(c, k);
                let mut t = m.clone();
                t.0[i] = a + c - k;
                t.0[n + i] = b + d - k;
                next.push((t, coef * w));
            }
        }
        acc = next;
    }
    acc
}

/// Element of `D_n[s]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylOp {
    ring: Arc<WeylRing>,
    terms: BTreeMap<Monomial, Q>,
}

impl WeylOp {
    pub fn zero(ring: &Arc<WeylRing>) -> Self {
        WeylOp { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<WeylRing>) -> Self {
        WeylOp::monomial(ring, Monomial::one(ring.nvars()), Q::one())
    }

    pub fn constant(ring: &Arc<WeylRing>, c: Q) -> Self {
        WeylOp::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn monomial(ring: &Arc<WeylRing>, m: Monomial, c: Q) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        WeylOp { ring: ring.clone(), terms: t }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(ring: &Arc<WeylRing>, it: I) -> Self {
        let mut w = WeylOp::zero(ring);
        for (m, c) in it {
            w.add_term(m, c);
        }
        w
    }

    pub fn x(ring: &Arc<WeylRing>, i: usize) -> Self {
        WeylOp::monomial(ring, Monomial::var(ring.nvars(), ring.x(i), 1), Q::one())
    }

    pub fn d(ring: &Arc<WeylRing>, i: usize) -> Self {
        WeylOp::monomial(ring, Monomial::var(ring.nvars(), ring.d(i), 1), Q::one())
    }

    pub fn s(ring: &Arc<WeylRing>) -> Self {
        WeylOp::monomial(ring, Monomial::var(ring.nvars(), ring.s(), 1), Q::one())
    }

    /// A polynomial in `x` (any subset of the base ring) as an operator.
    pub fn from_poly(ring: &Arc<WeylRing>, p: &Poly) -> Self {
        let q = p.embed(ring.base()).expect("polynomial in x");
        let n = ring.n();
        WeylOp::from_terms(
            ring,
            q.terms().map(|(m, c)| {
                let mut e = Monomial::one(ring.nvars());
                e.0[..n].copy_from_slice(m.exps());
                (e, c.clone())
            }),
        )
    }

    /// A polynomial in `(x, s)` as an operator.
    pub fn from_fs_poly(ring: &Arc<WeylRing>, p: &Poly) -> Self {
        let n = ring.n();
        WeylOp::from_terms(
            ring,
            p.terms().map(|(m, c)| {
                let mut e = Monomial::one(ring.nvars());
                e.0[..n].copy_from_slice(&m.exps()[..n]);
                e.0[2 * n] = m.exps()[n];
                (e, c.clone())
            }),
        )
    }

    /// A univariate polynomial in `s`.
    pub fn from_s_poly(ring: &Arc<WeylRing>, b: &crate::cas::UPoly) -> Self {
        WeylOp::from_terms(
            ring,
            b.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(ring.nvars(), ring.s(), k as u32), c.clone())),
        )
    }

    /// The vector field `Σ a_i ∂_i`.
    pub fn from_derivation(ring: &Arc<WeylRing>, d: &LogDerivation) -> Self {
        let mut acc = WeylOp::zero(ring);
        for (i, ai) in d.a().iter().enumerate() {
            acc = &acc + &WeylOp::from_poly(ring, ai).mul(&WeylOp::d(ring, i));
        }
        acc
    }

    /// `ζ = δ − α s`.
    pub fn zeta(ring: &Arc<WeylRing>, d: &LogDerivation) -> Self {
        &WeylOp::from_derivation(ring, d) - &WeylOp::from_poly(ring, d.alpha()).mul(&WeylOp::s(ring))
    }

    pub fn ring(&self) -> &Arc<WeylRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return WeylOp::zero(&self.ring);
        }
        WeylOp { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Normally ordered product `self · other`.
    pub fn mul(&self, other: &WeylOp) -> WeylOp {
        assert!(Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring, "Weyl ring mismatch");
        let n = self.ring.n();
        let mut out: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (m, w) in mono_mul(n, a, b) {
                    let e = out.entry(m).or_insert_with(Q::zero);
                    *e += &c * Q::from_integer(w);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        WeylOp { ring: self.ring.clone(), terms: out }
    }

    pub fn pow(&self, e: u32) -> WeylOp {
        (0..e).fold(WeylOp::one(&self.ring), |acc, _| acc.mul(self))
    }

    /// Total order: `max(|∂-exponent| + s-exponent)`; `None` for zero.
    pub fn total_order(&self) -> Option<u32> {
        let n = self.ring.n();
        self.terms.keys().map(|m| m.exps()[n..].iter().sum()).max()
    }

    /// Operator order (∂-degree only).
    pub fn order(&self) -> Option<u32> {
        let n = self.ring.n();
        self.terms.keys().map(|m| m.exps()[n..2 * n].iter().sum()).max()
    }

    /// Total-order symbol in `Q[x, s, ξ]`.
    pub fn sigma_t(&self, sr: &SymbolRing) -> Poly {
        let n = self.ring.n();
        let Some(top) = self.total_order() else { return Poly::zero(sr.ring()) };
        let nv = sr.ring().nvars();
        Poly::from_terms(
            sr.ring(),
            self.terms.iter().filter(|(m, _)| m.exps()[n..].iter().sum::<u32>() == top).map(|(m, c)| {
                let e = m.exps();
                let mut t = Monomial::one(nv);
                t.0[..n].copy_from_slice(&e[..n]);
                t.0[sr.s()] = e[2 * n];
                for j in 0..n {
                    t.0[sr.xi(j)] = e[n + j];
                }
                (t, c.clone())
            }),
        )
    }

    /// Substitutes a rational value for `s`.
    pub fn eval_s(&self, v: &Q) -> WeylOp {
        let si = self.ring.s();
        let mut out = WeylOp::zero(&self.ring);
        for (m, c) in &self.terms {
            let k = m.exps()[si];
            let mut t = m.clone();
            t.0[si] = 0;
            let mut f = Q::one();
            for _ in 0..k {
                f *= v;
            }
            out.add_term(t, c * f);
        }
        out
    }

    pub(crate) fn from_map(ring: &Arc<WeylRing>, terms: BTreeMap<Monomial, Q>) -> Self {
        WeylOp { ring: ring.clone(), terms }
    }
}

impl<'a> std::ops::Add<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;
    fn add(self, o: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;
    fn sub(self, o: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> std::ops::Mul<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;
    fn mul(self, o: &WeylOp) -> WeylOp {
        WeylOp::mul(self, o)
    }
}

impl std::ops::Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        self.scale(&-Q::one())
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cmp = MonomialOrder::DegRevLex.comparator(self.ring.nvars());
        let mut ts: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        ts.sort_by(|a, b| cmp.cmp(b.0, a.0));
        let names = self.ring.names.vars();
        let terms: Vec<(String, Q)> = ts.into_iter().map(|(m, c)| (fmt_monomial(m, names), c.clone())).collect();
        f.write_str(&fmt_terms(&terms))
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp({self})")
    }
}

/// `(numerator / f^pole) · f^s` with numerator in `Q[x, s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsElement {
    pub numerator: Poly,
    pub pole: u32,
}

impl FsElement {
    /// `f^s` itself.
    pub fn f_s(ring: &Arc<WeylRing>) -> Self {
        FsElement { numerator: Poly::one(ring.fs_ring()), pole: 0 }
    }

    /// `f^{s+k}` for `k ≥ 0`.
    pub fn f_s_plus(ring: &Arc<WeylRing>, f: &Poly, k: u32) -> Self {
        FsElement { numerator: lift_fs(ring, f).pow(k), pole: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Cancels common powers of `f`.
    pub fn canonical(mut self, f_fs: &Poly) -> Self {
        if self.numerator.is_zero() {
            self.pole = 0;
            return self;
        }
        while self.pole > 0 {
            match self.numerator.div_exact(f_fs) {
                Some(q) => {
                    self.numerator = q;
                    self.pole -= 1;
                }
                None => break,
            }
        }
        self
    }

    /// Brings two elements to a common pole order and adds them.
    pub fn add(&self, o: &FsElement, f_fs: &Poly) -> FsElement {
        let d = self.pole.max(o.pole);
        let a = &self.numerator * &f_fs.pow(d - self.pole);
        let b = &o.numerator * &f_fs.pow(d - o.pole);
        FsElement { numerator: &a + &b, pole: d }
    }
}

/// `f ∈ Q[x]` viewed in `Q[x, s]`.
pub fn lift_fs(ring: &Arc<WeylRing>, p: &Poly) -> Poly {
    p.embed(ring.fs_ring()).expect("x-polynomial lifts to Q[x, s]")
}

/// `∂_i` applied to `(g / f^d) f^s`, without cancellation.
pub fn partial_on_fs(ring: &Arc<WeylRing>, i: usize, e: &FsElement, f_fs: &Poly, fi_fs: &Poly) -> FsElement {
    let s = Poly::var(ring.fs_ring(), ring.n());
    let g = &e.numerator;
    let d = Poly::from_int(ring.fs_ring(), e.pole as i64);
    let num = &(&(&g.derivative(i) * f_fs) - &(&(&d * g) * fi_fs)) + &(&(&s * g) * fi_fs);
    FsElement { numerator: num, pole: e.pole + 1 }
}

/// Applies `p` to `e` without cancelling powers of `f`.
pub fn act_on_fs_raw(p: &WeylOp, e: &FsElement, f: &Poly) -> FsElement {
    let ring = p.ring();
    let n = ring.n();
    let f_fs = lift_fs(ring, f);
    let parts: Vec<Poly> = (0..n).map(|i| lift_fs(ring, &f.derivative(i))).collect();
    let mut acc = FsElement { numerator: Poly::zero(ring.fs_ring()), pole: 0 };
    // group terms by ∂-exponent so each derivative is computed once
    let mut by_d: BTreeMap<Vec<u32>, Vec<(&Monomial, &Q)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        by_d.entry(m.exps()[n..2 * n].to_vec()).or_default().push((m, c));
    }
    for (dexp, terms) in by_d {
        let mut cur = e.clone();
        for (i, &k) in dexp.iter().enumerate() {
            for _ in 0..k {
                cur = partial_on_fs(ring, i, &cur, &f_fs, &parts[i]);
            }
        }
        let mut mult = Poly::zero(ring.fs_ring());
        for (m, c) in terms {
            let mut t = Monomial::one(n + 1);
            t.0[..n].copy_from_slice(&m.exps()[..n]);
            t.0[n] = m.exps()[2 * n];
            mult.add_term(t, c.clone());
        }
        let term = FsElement { numerator: &mult * &cur.numerator, pole: cur.pole };
        acc = acc.add(&term, &f_fs);
    }
    acc
}

/// Applies `p` to `e` and cancels common powers of `f`.
pub fn act_on_fs(p: &WeylOp, e: &FsElement, f: &Poly) -> FsElement {
    let f_fs = lift_fs(p.ring(), f);
    act_on_fs_raw(p, e, f).canonical(&f_fs)
}

/// Normally ordered product of two operators.
pub fn weyl_mul(p: &WeylOp, q: &WeylOp) -> WeylOp {
    p.mul(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::qi;

    #[test]
    fn commutator_rules() {
        let r = WeylRing::new(&Ring::new(&["x"]));
        let x = WeylOp::x(&r, 0);
        let d = WeylOp::d(&r, 0);
        let s = WeylOp::s(&r);
        assert_eq!(d.mul(&x), &x.mul(&d) + &WeylOp::one(&r));
        assert_eq!(s.mul(&x), x.mul(&s));
        let d2x = d.pow(2).mul(&x);
        assert_eq!(d2x, &x.mul(&d.pow(2)) + &d.scale(&qi(2)));
        assert_eq!(d.to_string(), "dx");
    }
}
