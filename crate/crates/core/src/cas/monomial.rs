//! Exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Exponent tuple of a monomial. Length equals the number of ring variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_slice(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// The monomial `x_var^exp`.
    pub fn var(nvars: usize, var: usize, exp: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[var] = exp;
        m
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a > b {
                return None;
            }
            out.push(b - a);
        }
        Some(Monomial(out))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// A monomial order, described declaratively so it can be hashed and serialized.
///
/// Block orders compare the exponents of `first` (a list of variable indices)
/// with `first_order`; ties are broken on the remaining variables with
/// `second_order`. Inner orders of a block must not be blocks themselves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Weighted degree, ties broken by degree reverse lexicographic order.
    Weighted(Vec<i64>),
    Block {
        first: Vec<usize>,
        first_order: Box<MonomialOrder>,
        second_order: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Block order eliminating the variables in `drop`.
    pub fn elimination(drop: &[usize]) -> Self {
        MonomialOrder::Block {
            first: drop.to_vec(),
            first_order: Box::new(MonomialOrder::DegRevLex),
            second_order: Box::new(MonomialOrder::DegRevLex),
        }
    }

    /// A global order has `1` as its strictly smallest monomial. All orders
    /// built here are global except weighted orders with a non-positive weight.
    pub fn is_global(&self) -> bool {
        match self {
            MonomialOrder::Lex | MonomialOrder::DegRevLex => true,
            MonomialOrder::Weighted(w) => w.iter().all(|&x| x > 0),
            MonomialOrder::Block { first_order, second_order, .. } => {
                !matches!(**first_order, MonomialOrder::Block { .. })
                    && !matches!(**second_order, MonomialOrder::Block { .. })
                    && first_order.is_global()
                    && second_order.is_global()
            }
        }
    }

    /// Checks that the order is usable on `nvars` variables.
    pub fn validate(&self, nvars: usize) -> Result<(), String> {
        match self {
            MonomialOrder::Weighted(w) if w.len() != nvars => Err(format!(
                "weight vector has length {} but the ring has {} variables",
                w.len(),
                nvars
            )),
            MonomialOrder::Block { first, first_order, second_order } => {
                let mut seen = vec![false; nvars];
                for &i in first {
                    if i >= nvars || seen[i] {
                        return Err(format!("bad block variable index {i}"));
                    }
                    seen[i] = true;
                }
                let k = first.len();
                if let MonomialOrder::Weighted(w) = &**first_order {
                    if w.len() != k {
                        return Err("first block weight length mismatch".into());
                    }
                }
                if let MonomialOrder::Weighted(w) = &**second_order {
                    if w.len() != nvars - k {
                        return Err("second block weight length mismatch".into());
                    }
                }
                if matches!(**first_order, MonomialOrder::Block { .. })
                    || matches!(**second_order, MonomialOrder::Block { .. })
                {
                    return Err("nested block orders are not supported".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Compiles the order for fast comparisons on `nvars` variables.
    pub fn comparator(&self, nvars: usize) -> Comparator {
        match self {
            MonomialOrder::Block { first, first_order, second_order } => {
                let mut in_first = vec![false; nvars];
                for &i in first {
                    in_first[i] = true;
                }
                let second: Vec<usize> = (0..nvars).filter(|i| !in_first[*i]).collect();
                Comparator {
                    blocks: vec![
                        Block::new(first.clone(), first_order),
                        Block::new(second, second_order),
                    ],
                }
            }
            other => Comparator { blocks: vec![Block::new((0..nvars).collect(), other)] },
        }
    }
}

#[derive(Clone, Debug)]
enum BlockKind {
    Lex,
    DegRevLex,
    Weighted(Vec<i64>),
}

#[derive(Clone, Debug)]
struct Block {
    vars: Vec<usize>,
    kind: BlockKind,
}

impl Block {
    fn new(vars: Vec<usize>, order: &MonomialOrder) -> Self {
        let kind = match order {
            MonomialOrder::Lex => BlockKind::Lex,
            MonomialOrder::DegRevLex => BlockKind::DegRevLex,
            MonomialOrder::Weighted(w) => BlockKind::Weighted(w.clone()),
            MonomialOrder::Block { .. } => BlockKind::DegRevLex,
        };
        Block { vars, kind }
    }

    fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match &self.kind {
            BlockKind::Lex => {
                for &i in &self.vars {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            BlockKind::DegRevLex => {
                let da: u64 = self.vars.iter().map(|&i| a[i] as u64).sum();
                let db: u64 = self.vars.iter().map(|&i| b[i] as u64).sum();
                da.cmp(&db).then_with(|| revlex(&self.vars, a, b))
            }
            BlockKind::Weighted(w) => {
                let wa: i64 = self.vars.iter().zip(w).map(|(&i, &wi)| wi * a[i] as i64).sum();
                let wb: i64 = self.vars.iter().zip(w).map(|(&i, &wi)| wi * b[i] as i64).sum();
                wa.cmp(&wb).then_with(|| {
                    let da: u64 = self.vars.iter().map(|&i| a[i] as u64).sum();
                    let db: u64 = self.vars.iter().map(|&i| b[i] as u64).sum();
                    da.cmp(&db).then_with(|| revlex(&self.vars, a, b))
                })
            }
        }
    }
}

fn revlex(vars: &[usize], a: &[u32], b: &[u32]) -> Ordering {
    for &i in vars.iter().rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// A compiled monomial order.
#[derive(Clone, Debug)]
pub struct Comparator {
    blocks: Vec<Block>,
}

impl Comparator {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_exps(&a.0, &b.0)
    }

    pub fn cmp_exps(&self, a: &[u32], b: &[u32]) -> Ordering {
        for blk in &self.blocks {
            match blk.cmp(a, b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_slice(e)
    }

    #[test]
    fn lex_and_degrevlex_basics() {
        let lex = MonomialOrder::Lex.comparator(3);
        assert_eq!(lex.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        let drl = MonomialOrder::DegRevLex.comparator(3);
        assert_eq!(drl.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Less);
        // x*z < y^2 in degrevlex
        assert_eq!(drl.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let ord = MonomialOrder::elimination(&[1]).comparator(3);
        // anything containing y beats any monomial in x,z alone
        assert_eq!(ord.cmp(&m(&[0, 1, 0]), &m(&[9, 0, 9])), Ordering::Greater);
    }

    #[test]
    fn one_is_smallest_and_order_is_multiplicative() {
        let orders = [
            MonomialOrder::Lex,
            MonomialOrder::DegRevLex,
            MonomialOrder::Weighted(vec![3, 2, 1]),
            MonomialOrder::elimination(&[0, 2]),
        ];
        let ms = [m(&[0, 1, 2]), m(&[2, 0, 0]), m(&[1, 1, 1]), m(&[0, 0, 3])];
        for o in &orders {
            let c = o.comparator(3);
            for a in &ms {
                assert_eq!(c.cmp(a, &Monomial::one(3)), Ordering::Greater);
                for b in &ms {
                    let t = m(&[1, 2, 0]);
                    assert_eq!(c.cmp(a, b), c.cmp(&a.mul(&t), &b.mul(&t)));
                }
            }
        }
    }

    #[test]
    fn non_positive_weights_are_not_global() {
        assert!(!MonomialOrder::Weighted(vec![1, 0]).is_global());
        assert!(MonomialOrder::Weighted(vec![1, 2]).is_global());
    }
}
