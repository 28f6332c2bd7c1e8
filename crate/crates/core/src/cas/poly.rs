//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::{Comparator, Monomial, MonomialOrder};
use super::Q;

/// Ordered list of variable names shared by polynomials of one ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Arc<Ring> {
        Arc::new(Ring { vars: vars.iter().map(|s| s.as_ref().to_string()).collect() })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a.vars == b.vars
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Poly::constant(ring, Q::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Q) -> Self {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.nvars()), c);
        }
        p
    }

    pub fn from_int(ring: &Arc<Ring>, c: i64) -> Self {
        Poly::constant(ring, Q::from_integer(BigInt::from(c)))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Poly::monomial(ring, Monomial::var(ring.nvars(), i, 1), Q::one())
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Q) -> Self {
        assert_eq!(m.len(), ring.nvars(), "monomial length does not match ring");
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from terms; repeated monomials are summed, zeros dropped.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(ring: &Arc<Ring>, terms: I) -> Self {
        let mut p = Poly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.len(), self.nvars());
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in the given subset of variables.
    pub fn degree_in(&self, vars: &[usize]) -> Option<u32> {
        self.terms.keys().map(|m| vars.iter().map(|&i| m.0[i]).sum()).max()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn leading_term(&self, cmp: &Comparator) -> Option<(&Monomial, &Q)> {
        self.terms.iter().max_by(|a, b| cmp.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<Monomial> {
        let cmp = order.comparator(self.nvars());
        self.leading_term(&cmp).map(|(m, _)| m.clone())
    }

    /// Terms sorted in decreasing order for `cmp`.
    pub fn sorted_terms(&self, cmp: &Comparator) -> Vec<(Monomial, Q)> {
        let mut v: Vec<(Monomial, Q)> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| cmp.cmp(&b.0, &a.0));
        v
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut p = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            p.add_term(m2, c * Q::from_integer(BigInt::from(e)));
        }
        p
    }

    /// Substitutes `value` for variable `i` (same ring).
    pub fn substitute(&self, i: usize, value: &Poly) -> Poly {
        assert!(same_ring(&self.ring, &value.ring));
        let mut powers: Vec<Poly> = vec![Poly::one(&self.ring)];
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[i] = 0;
            out = &out + &powers[e].mul_monomial(&rest, c);
        }
        out
    }

    /// Substitutes the constant `value` for variable `i`.
    pub fn eval_var(&self, i: usize, value: &Q) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = rest.0[i];
            rest.0[i] = 0;
            out.add_term(rest, c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Poly, String> {
        if same_ring(&self.ring, target) {
            return Ok(Poly { ring: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> =
            self.ring.vars.iter().map(|v| target.index_of(v)).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Monomial::one(target.nvars());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => t.0[j] += e,
                    None => {
                        return Err(format!(
                            "variable {} does not exist in the target ring",
                            self.ring.vars[i]
                        ))
                    }
                }
            }
            out.add_term(t, c.clone());
        }
        Ok(out)
    }

    /// Weighted degree if the polynomial is homogeneous for `weights`.
    pub fn weighted_homogeneous_degree(&self, weights: &[i64]) -> Option<i64> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = weighted_degree(m, weights);
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(same_ring(&self.ring, &d.ring));
        if d.is_zero() {
            return None;
        }
        let cmp = MonomialOrder::Lex.comparator(self.nvars());
        let (dm, dc) = d.leading_term(&cmp).map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term(&cmp).map(|(m, c)| (m.clone(), c.clone())) {
            let q = dm.quotient_of(&m)?;
            let qc = c / &dc;
            rem = &rem - &d.mul_monomial(&q, &qc);
            quot.add_term(q, qc);
        }
        Some(quot)
    }

    /// Scales to coprime integer coefficients with positive leading coefficient
    /// (degrevlex).
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
        let cmp = MonomialOrder::DegRevLex.comparator(self.nvars());
        let lead_neg = self.leading_term(&cmp).map(|(_, c)| c.is_negative()).unwrap_or(false);
        let mut factor = Q::new(den, num);
        if lead_neg {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Divides by the leading coefficient under `cmp`.
    pub fn monic(&self, cmp: &Comparator) -> Poly {
        match self.leading_term(cmp) {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }
}

pub fn weighted_degree(m: &Monomial, weights: &[i64]) -> i64 {
    m.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in addition");
        let (mut big, small) =
            if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in subtraction");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in multiplication");
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// `a` or `a/b` in lowest terms.
pub fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

/// Formats signed terms `(monomial text, coefficient)` as `a - b + c`.
pub(crate) fn fmt_terms(terms: &[(String, Q)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (mono, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&fmt_rational(&a));
        } else if a.is_one() {
            out.push_str(mono);
        } else {
            out.push_str(&fmt_rational(&a));
            out.push('*');
            out.push_str(mono);
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cmp = MonomialOrder::DegRevLex.comparator(self.nvars());
        let terms: Vec<(String, Q)> = self
            .sorted_terms(&cmp)
            .into_iter()
            .map(|(m, c)| (fmt_monomial(&m, &self.ring.vars), c))
            .collect();
        f.write_str(&fmt_terms(&terms))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}
