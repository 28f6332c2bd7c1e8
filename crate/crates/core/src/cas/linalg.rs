//! Exact linear algebra: sparse fraction-free elimination for ranks and a
//! dense rational row reduction used for kernels and cross-checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Q;

/// Sparse row: strictly increasing column indices with nonzero entries.
pub type SparseRow = Vec<(usize, Q)>;

type IntRow = Vec<(usize, BigInt)>;

fn to_int_row(row: &[(usize, Q)]) -> IntRow {
    let mut den = BigInt::one();
    for (_, c) in row {
        den = den.lcm(c.denom());
    }
    let mut out: IntRow = row
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (*j, c.numer() * (&den / c.denom())))
        .collect();
    out.sort_by_key(|e| e.0);
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, c) in row.iter() {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, c) in row.iter_mut() {
        *c /= &g;
    }
}

/// `p * a - q * b` for sparse integer rows.
fn combine(a: &IntRow, p: &BigInt, b: &IntRow, q: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0);
        let cb = b.get(j).map(|e| e.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = p * &a[i].1 - q * &b[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, p * &a[i].1));
                i += 1;
            }
            (Some(x), None) => {
                out.push((x, p * &a[i].1));
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(q * &b[j].1)));
                j += 1;
            }
            (None, None) => break,
        }
    }
    out
}

/// Incremental row echelon form over the integers (fraction-free, with
/// content removal after every combination).
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots; returns the reduced row.
    fn reduce(&self, mut r: IntRow) -> IntRow {
        while let Some(&(c, _)) = r.first() {
            let Some(piv) = self.pivots.get(&c) else { break };
            let a = r[0].1.clone();
            let p = piv[0].1.clone();
            let g = a.gcd(&p);
            r = combine(&r, &(&p / &g), piv, &(&a / &g));
            make_primitive(&mut r);
        }
        r
    }

    /// Adds a row; returns true when it increased the rank.
    pub fn insert(&mut self, row: &[(usize, Q)]) -> bool {
        let r = self.reduce(to_int_row(row));
        match r.first() {
            None => false,
            Some(&(c, _)) => {
                self.pivots.insert(c, r);
                true
            }
        }
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// The echelon rows, in order of their pivot columns.
    pub fn rows(&self) -> impl Iterator<Item = SparseRow> + '_ {
        self.pivots.values().map(|r| r.iter().map(|(j, c)| (*j, Q::from_integer(c.clone()))).collect())
    }

    /// True when `row` lies in the span of the inserted rows.
    pub fn contains(&self, row: &[(usize, Q)]) -> bool {
        self.reduce(to_int_row(row)).is_empty()
    }
}

/// Rank of the matrix whose rows are given.
pub fn rank_sparse(rows: &[SparseRow]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Dense matrix over the rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<Vec<Q>>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix { nrows, ncols, data: vec![vec![Q::zero(); ncols]; nrows] }
    }

    pub fn from_sparse(rows: &[SparseRow], ncols: usize) -> Self {
        let mut m = DenseMatrix::zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in r {
                m.data[i][*j] = c.clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..self.nrows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..self.ncols {
                        let d = &f * &a[r][j];
                        a[i][j] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (DenseMatrix { nrows: self.nrows, ncols: self.ncols, data: a }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : A v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, piv) = self.rref();
        let mut is_piv = vec![false; self.ncols];
        for &p in &piv {
            is_piv[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&j| !is_piv[j]) {
            let mut v = vec![Q::zero(); self.ncols];
            v[free] = Q::one();
            for (k, &p) in piv.iter().enumerate() {
                v[p] = -r.data[k][free].clone();
            }
            out.push(v);
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        self.data
            .iter()
            .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }
}

/// Scales a rational vector to coprime integers with positive first nonzero entry.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in v {
        den = den.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        for c in ints.iter_mut() {
            *c /= &g;
        }
    }
    if ints.iter().find(|c| !c.is_zero()).map_or(false, |c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -c.clone();
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn sparse_and_dense_ranks_agree() {
        let rows = vec![
            vec![(0, q(1)), (1, q(2)), (2, q(3))],
            vec![(0, q(2)), (1, q(4)), (2, q(6))],
            vec![(1, Q::new(1.into(), 2.into())), (2, q(1))],
        ];
        assert_eq!(rank_sparse(&rows), 2);
        assert_eq!(DenseMatrix::from_sparse(&rows, 3).rank(), 2);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let rows = vec![vec![(0, q(1)), (1, q(1))], vec![(1, q(1)), (2, q(-1))]];
        let m = DenseMatrix::from_sparse(&rows, 3);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        e.insert(&[(0, q(2)), (3, q(4))]);
        assert!(e.contains(&[(0, q(-1)), (3, q(-2))]));
        assert!(!e.contains(&[(3, q(1))]));
    }

    #[test]
    fn primitive_vector_normalization() {
        let v = vec![Q::new((-3).into(), 2.into()), q(-1)];
        assert_eq!(primitive_integer_vector(&v), vec![BigInt::from(3), BigInt::from(2)]);
    }
}
