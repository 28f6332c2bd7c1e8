//! Small dense matrices over a polynomial ring.

use std::sync::Arc;

use super::poly::{Poly, Ring};

/// Square or rectangular matrix of polynomials, row major.
pub type PolyMatrix = Vec<Vec<Poly>>;

pub fn identity(ring: &Arc<Ring>, n: usize) -> PolyMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Poly::one(ring) } else { Poly::zero(ring) }).collect())
        .collect()
}

pub fn zeros(ring: &Arc<Ring>, r: usize, c: usize) -> PolyMatrix {
    vec![vec![Poly::zero(ring); c]; r]
}

fn minor(m: &PolyMatrix, row: usize, col: usize) -> PolyMatrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
        .collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn det(ring: &Arc<Ring>, m: &PolyMatrix) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::one(ring),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = Poly::zero(ring);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let t = &m[0][j] * &det(ring, &minor(m, 0, j));
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// Adjugate matrix: `adj(m) * m = m * adj(m) = det(m) * I`.
pub fn adjugate(ring: &Arc<Ring>, m: &PolyMatrix) -> PolyMatrix {
    let n = m.len();
    if n == 1 {
        return vec![vec![Poly::one(ring)]];
    }
    let mut out = zeros(ring, n, n);
    for i in 0..n {
        for j in 0..n {
            let d = det(ring, &minor(m, j, i));
            out[i][j] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    out
}

pub fn mul(ring: &Arc<Ring>, a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let (r, k) = (a.len(), b.len());
    let c = b.first().map_or(0, |row| row.len());
    let mut out = zeros(ring, r, c);
    for i in 0..r {
        for j in 0..c {
            let mut acc = Poly::zero(ring);
            for t in 0..k {
                if !a[i][t].is_zero() && !b[t][j].is_zero() {
                    acc = &acc + &(&a[i][t] * &b[t][j]);
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn add(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
}

pub fn sub(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn scale(a: &PolyMatrix, c: &Poly) -> PolyMatrix {
    a.iter().map(|x| x.iter().map(|p| p * c).collect()).collect()
}

pub fn transpose(a: &PolyMatrix) -> PolyMatrix {
    let c = a.first().map_or(0, |r| r.len());
    (0..c).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn is_zero(a: &PolyMatrix) -> bool {
    a.iter().all(|r| r.iter().all(|p| p.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::parse_in;

    #[test]
    fn adjugate_identity() {
        let r = Ring::new(&["x", "y"]);
        let p = |s: &str| parse_in(s, &r).unwrap();
        let m = vec![
            vec![p("x"), p("y"), p("1")],
            vec![p("0"), p("x*y"), p("2")],
            vec![p("y"), p("0"), p("x")],
        ];
        let d = det(&r, &m);
        let prod = mul(&r, &adjugate(&r, &m), &m);
        assert_eq!(prod, scale(&identity(&r, 3), &d));
    }
}
