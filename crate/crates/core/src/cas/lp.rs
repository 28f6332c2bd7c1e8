//! Exact two-phase simplex method with Bland's rule.

use num_traits::{Signed, Zero};

use super::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..self.rows[i].len() {
                let d = &f * &self.rows[r][j];
                self.rows[i][j] -= d;
            }
            let d = &f * &self.rhs[r];
            self.rhs[i] -= d;
        }
        self.basis[r] = col;
    }

    /// Maximizes `cost` over columns `< ncols`; `false` when unbounded.
    fn optimize(&mut self, cost: &[Q], ncols: usize) -> bool {
        loop {
            let mut entering = None;
            for j in 0..ncols {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    d -= &cost[b] * &self.rows[i][j];
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][j].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][j];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "constraint width");
        let neg = b[i].is_negative();
        let mut r: Vec<Q> = row.iter().map(|v| if neg { -v.clone() } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Q::from_integer(1.into()) } else { Q::zero() }));
        rows.push(r);
        rhs.push(if neg { -b[i].clone() } else { b[i].clone() });
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect() };
    let mut phase1 = vec![Q::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = Q::from_integer((-1).into());
    }
    t.optimize(&phase1, n + m);
    let infeas: Q = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bi, _)| bi >= n)
        .fold(Q::zero(), |acc, (_, v)| acc + v);
    if !infeas.is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificial variables out of the basis
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut cost = c.to_vec();
    cost.extend((0..m).map(|_| Q::zero()));
    if !t.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (k, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            x[bi] = t.rhs[k].clone();
        }
    }
    let value = c.iter().zip(&x).fold(Q::zero(), |acc, (ci, xi)| acc + ci * xi);
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn small_lp() {
        // max x + y with x + 2y + s = 4, 3x + y + t = 6
        let a = vec![vec![q(1), q(2), q(1), q(0)], vec![q(3), q(1), q(0), q(1)]];
        let out = maximize(&[q(1), q(1), q(0), q(0)], &a, &[q(4), q(6)]);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, Q::new(14.into(), 5.into())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![q(1), q(1)]];
        assert_eq!(maximize(&[q(0), q(0)], &a, &[q(-1)]), LpOutcome::Infeasible);
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(maximize(&[q(1), q(0)], &a, &[q(0)]), LpOutcome::Unbounded);
    }
}
