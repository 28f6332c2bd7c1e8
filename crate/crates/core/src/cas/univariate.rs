//! Dense univariate polynomials over the rationals.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{fmt_rational, fmt_terms};
use super::Q;

/// Coefficients in ascending degree order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Q>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        UPoly::new(vec![c])
    }

    /// The linear polynomial `s - r`.
    pub fn linear_root(r: &Q) -> Self {
        UPoly::new(vec![-r.clone(), Q::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = l.recip();
                UPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
                        + o.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        (0..e).fold(UPoly::one(), |acc, _| acc.mul(self))
    }

    /// `p(s + h)`.
    pub fn shift(&self, h: &Q) -> UPoly {
        let lin = UPoly::new(vec![h.clone(), Q::one()]);
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lc = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Q::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        (UPoly::new(q), UPoly::new(r))
    }

    /// Rational roots with multiplicities, sorted increasingly.
    pub fn rational_roots(&self) -> Vec<(Q, u32)> {
        let mut out: Vec<(Q, u32)> = Vec::new();
        if self.is_zero() {
            return out;
        }
        let mut p = self.clone();
        let mut zero_mult = 0;
        while p.coeffs.first().map_or(false, |c| c.is_zero()) {
            p.coeffs.remove(0);
            zero_mult += 1;
        }
        if zero_mult > 0 {
            out.push((Q::zero(), zero_mult));
        }
        let ints = p.integer_coeffs();
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        // every root lies within the Cauchy bound 1 + max |a_i / a_n|
        let bound = ints
            .iter()
            .map(|c| Q::new(c.abs(), an.clone()))
            .max()
            .map_or_else(Q::one, |m| m + Q::one());
        let mut cands: BTreeSet<Q> = BTreeSet::new();
        let dens = divisors(&an);
        for num in divisors(&a0) {
            for den in &dens {
                let r = Q::new(num.clone(), den.clone());
                if r <= bound {
                    cands.insert(-r.clone());
                    cands.insert(r);
                }
            }
        }
        for r in cands {
            let lin = UPoly::linear_root(&r);
            let mut mult = 0;
            loop {
                if p.degree().unwrap_or(0) == 0 {
                    break;
                }
                let (q, rem) = p.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                p = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((r, mult));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Coefficients scaled to coprime integers (sign preserved).
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let v: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return v;
        }
        v.into_iter().map(|c| c / &g).collect()
    }

    pub fn display_in(&self, var: &str) -> String {
        let terms: Vec<(String, Q)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let m = match i {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{i}"),
                };
                (m, c.clone())
            })
            .collect();
        fmt_terms(&terms)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("s"))
    }
}

/// Positive divisors of `n` (with `0` treated as having divisor 1 only).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() || n.is_one() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    if let Some(v) = n.to_u64() {
        let mut d = 1u64;
        while d * d <= v {
            if v % d == 0 {
                small.push(BigInt::from(d));
                if d * d != v {
                    large.push(BigInt::from(v / d));
                }
            }
            d += 1;
        }
    } else {
        let mut d = BigInt::one();
        while &d * &d <= *n {
            if (n % &d).is_zero() {
                small.push(d.clone());
                if &d * &d != *n {
                    large.push(n / &d);
                }
            }
            d += 1;
        }
    }
    large.reverse();
    small.extend(large);
    small
}

/// Formats a rational root list as `{-1, -5/6}`.
pub fn fmt_roots(roots: &[(Q, u32)]) -> String {
    let items: Vec<String> = roots
        .iter()
        .map(|(r, m)| if *m == 1 { fmt_rational(r) } else { format!("{}^({m})", fmt_rational(r)) })
        .collect();
    format!("{{{}}}", items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn cusp_roots() {
        let b = UPoly::linear_root(&q(-1, 1))
            .mul(&UPoly::linear_root(&q(-5, 6)))
            .mul(&UPoly::linear_root(&q(-7, 6)));
        let r = b.rational_roots();
        assert_eq!(r, vec![(q(-7, 6), 1), (q(-1, 1), 1), (q(-5, 6), 1)]);
    }

    #[test]
    fn shift_substitutes() {
        let b = UPoly::from_ints(&[1, 1]).pow(2);
        assert_eq!(b.shift(&q(-2, 1)), UPoly::from_ints(&[-1, 1]).pow(2));
    }

    #[test]
    fn display() {
        assert_eq!(UPoly::from_ints(&[1, 2, 1]).to_string(), "s^2 + 2*s + 1");
    }
}
