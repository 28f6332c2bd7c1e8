//! Buchberger's algorithm over anything with monomial-like leading terms.
//!
//! The same engine serves commutative ideals, submodules of free modules
//! (position-over-term) and left ideals of the Weyl algebra. Elements are kept
//! as term lists sorted in decreasing order; an optional transcript records
//! each element as a left combination of the input generators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::{CasError, Q};

/// Cancellation token: a wall-clock deadline, a shared flag, or both.
#[derive(Clone, Debug, Default)]
pub struct Deadline {
    at: Option<Instant>,
    flag: Option<Arc<AtomicBool>>,
}

impl Deadline {
    pub fn none() -> Self {
        Deadline::default()
    }

    pub fn after(d: Duration) -> Self {
        Deadline { at: Some(Instant::now() + d), flag: None }
    }

    /// A deadline triggered by setting the returned flag.
    pub fn cancellable() -> (Self, Arc<AtomicBool>) {
        let flag = Arc::new(AtomicBool::new(false));
        (Deadline { at: None, flag: Some(flag.clone()) }, flag)
    }

    pub fn expired(&self) -> bool {
        if let Some(f) = &self.flag {
            if f.load(AtomicOrdering::Relaxed) {
                return true;
            }
        }
        matches!(self.at, Some(t) if Instant::now() >= t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Selection {
    #[default]
    Normal,
    Sugar,
}

#[derive(Clone, Debug, Default)]
pub struct GbConfig {
    pub deadline: Deadline,
    pub selection: Selection,
    /// Abort with [`CasError::DegreeCap`] when an element exceeds this total degree.
    pub degree_cap: Option<u32>,
}

impl GbConfig {
    pub fn sugar() -> Self {
        GbConfig { selection: Selection::Sugar, ..Default::default() }
    }
}

/// Base-ring polynomial used for transcripts (unsorted, canonical map).
pub(crate) type BasePoly = BTreeMap<Monomial, Q>;

pub(crate) trait GbAlgebra {
    type Term: Clone + Eq + Hash + Debug;

    fn cmp(&self, a: &Self::Term, b: &Self::Term) -> Ordering;
    /// `Some(b / a)` when `a` divides `b`.
    fn divides(&self, a: &Self::Term, b: &Self::Term) -> Option<Monomial>;
    fn lcm(&self, a: &Self::Term, b: &Self::Term) -> Option<Self::Term>;
    fn coprime(&self, a: &Self::Term, b: &Self::Term) -> bool;
    fn product_criterion(&self) -> bool;
    fn chain_criterion(&self) -> bool;
    fn degree(&self, t: &Self::Term) -> u32;
    /// `c * m * p` with `p` sorted decreasingly; result sorted decreasingly.
    fn left_mul(&self, m: &Monomial, c: &Q, p: &[(Self::Term, Q)]) -> Vec<(Self::Term, Q)>;
    /// Same product on transcript entries.
    fn base_mul(&self, m: &Monomial, c: &Q, p: &BasePoly) -> BasePoly;
}

#[derive(Clone, Debug)]
pub(crate) struct Elem<T> {
    pub terms: Vec<(T, Q)>,
    pub sugar: u32,
    pub trans: Option<Vec<BasePoly>>,
}

impl<T: Clone> Elem<T> {
    pub fn new(terms: Vec<(T, Q)>, sugar: u32) -> Self {
        Elem { terms, sugar, trans: None }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &T {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Q {
        &self.terms[0].1
    }
}

fn merge_sub<A: GbAlgebra>(
    alg: &A,
    p: &[(A::Term, Q)],
    q: Vec<(A::Term, Q)>,
) -> Vec<(A::Term, Q)> {
    // p - q, both sorted decreasingly
    let mut out = Vec::with_capacity(p.len() + q.len());
    let mut i = 0;
    let mut qi = q.into_iter().peekable();
    while i < p.len() || qi.peek().is_some() {
        match (p.get(i), qi.peek()) {
            (Some(a), Some(b)) => match alg.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (t, c) = qi.next().unwrap();
                    out.push((t, -c));
                }
                Ordering::Equal => {
                    let (t, c) = qi.next().unwrap();
                    let d = &a.1 - c;
                    if !d.is_zero() {
                        out.push((t, d));
                    }
                    i += 1;
                }
            },
            (Some(a), None) => {
                out.push(a.clone());
                i += 1;
            }
            (None, Some(_)) => {
                let (t, c) = qi.next().unwrap();
                out.push((t, -c));
            }
            (None, None) => break,
        }
    }
    out
}

fn trans_sub(a: &mut BasePoly, b: BasePoly) {
    for (m, c) in b {
        let e = a.entry(m).or_insert_with(Q::zero);
        *e -= c;
    }
    a.retain(|_, c| !c.is_zero());
}

fn shift_degree(m: &Monomial) -> u32 {
    m.degree()
}

/// `p - c * m * g` including transcripts.
fn sub_mul<A: GbAlgebra>(alg: &A, p: &mut Elem<A::Term>, start: usize, c: &Q, m: &Monomial, g: &Elem<A::Term>) {
    let prod = alg.left_mul(m, c, &g.terms);
    p.terms = merge_sub(alg, &p.terms[start..], prod);
    p.sugar = p.sugar.max(g.sugar + shift_degree(m));
    if let (Some(tp), Some(tg)) = (p.trans.as_mut(), g.trans.as_ref()) {
        for (a, b) in tp.iter_mut().zip(tg) {
            if !b.is_empty() {
                trans_sub(a, alg.base_mul(m, c, b));
            }
        }
    }
}

fn make_monic<A: GbAlgebra>(alg: &A, p: &mut Elem<A::Term>) {
    if p.is_zero() {
        return;
    }
    let inv = p.lc().recip();
    if inv.is_one() {
        return;
    }
    for t in p.terms.iter_mut() {
        t.1 *= &inv;
    }
    let _ = alg;
    if let Some(tp) = p.trans.as_mut() {
        for a in tp.iter_mut() {
            for c in a.values_mut() {
                *c *= &inv;
            }
        }
    }
}

/// Full reduction of `p` by the elements `basis[idx]` for `idx` in `reducers`.
pub(crate) fn reduce<A: GbAlgebra>(
    alg: &A,
    mut p: Elem<A::Term>,
    basis: &[Elem<A::Term>],
    reducers: &[usize],
    deadline: &Deadline,
) -> Result<Elem<A::Term>, CasError> {
    let mut rem: Vec<(A::Term, Q)> = Vec::new();
    let mut start = 0usize;
    let mut steps = 0usize;
    while start < p.terms.len() {
        steps += 1;
        if steps % 256 == 0 && deadline.expired() {
            return Err(CasError::Cancelled);
        }
        let head = &p.terms[start];
        let mut hit = None;
        for &r in reducers {
            let g = &basis[r];
            if let Some(shift) = alg.divides(g.lead(), &head.0) {
                hit = Some((r, shift, &head.1 / g.lc()));
                break;
            }
        }
        match hit {
            Some((r, shift, c)) => {
                sub_mul(alg, &mut p, start, &c, &shift, &basis[r]);
                start = 0;
            }
            None => {
                rem.push(head.clone());
                start += 1;
            }
        }
    }
    p.terms = rem;
    Ok(p)
}

#[derive(Clone, Debug)]
struct Pair<T> {
    i: usize,
    j: usize,
    lcm: T,
    sugar: u32,
}

fn spoly<A: GbAlgebra>(alg: &A, g: &[Elem<A::Term>], pr: &Pair<A::Term>) -> Elem<A::Term> {
    let a = &g[pr.i];
    let b = &g[pr.j];
    let sa = alg.divides(a.lead(), &pr.lcm).expect("lcm divisible");
    let sb = alg.divides(b.lead(), &pr.lcm).expect("lcm divisible");
    let ca = a.lc().recip();
    let cb = b.lc().recip();
    let ta = alg.left_mul(&sa, &ca, &a.terms);
    let tb = alg.left_mul(&sb, &cb, &b.terms);
    let terms = merge_sub(alg, &ta, tb);
    let trans = match (&a.trans, &b.trans) {
        (Some(x), Some(y)) => Some(
            x.iter()
                .zip(y)
                .map(|(u, v)| {
                    let mut t = alg.base_mul(&sa, &ca, u);
                    trans_sub(&mut t, alg.base_mul(&sb, &cb, v));
                    t
                })
                .collect(),
        ),
        _ => None,
    };
    Elem { terms, sugar: pr.sugar, trans }
}

fn max_degree<A: GbAlgebra>(alg: &A, p: &Elem<A::Term>) -> u32 {
    p.terms.iter().map(|(t, _)| alg.degree(t)).max().unwrap_or(0)
}

struct State<A: GbAlgebra> {
    g: Vec<Elem<A::Term>>,
    active: Vec<bool>,
    pairs: Vec<Pair<A::Term>>,
}

impl<A: GbAlgebra> State<A> {
    fn active_idx(&self) -> Vec<usize> {
        (0..self.g.len()).filter(|&i| self.active[i]).collect()
    }

    fn pair_sugar(&self, alg: &A, i: usize, j: usize, lcm: &A::Term) -> u32 {
        let di = self.g[i].sugar + alg.degree(lcm) - alg.degree(self.g[i].lead());
        let dj = self.g[j].sugar + alg.degree(lcm) - alg.degree(self.g[j].lead());
        di.max(dj)
    }

    /// Gebauer-Moeller update with the new element at index `h`.
    fn update(&mut self, alg: &A, h: usize) {
        let lh = self.g[h].lead().clone();
        let mut cands: Vec<(Pair<A::Term>, bool)> = Vec::new();
        for i in 0..self.g.len() {
            if i == h || !self.active[i] {
                continue;
            }
            if let Some(l) = alg.lcm(self.g[i].lead(), &lh) {
                let cop = alg.product_criterion() && alg.coprime(self.g[i].lead(), &lh);
                let sugar = self.pair_sugar(alg, i, h, &l);
                cands.push((Pair { i, j: h, lcm: l, sugar }, cop));
            }
        }
        let mut kept: Vec<(Pair<A::Term>, bool)> = Vec::new();
        if alg.chain_criterion() {
            while let Some((p, cop)) = cands.pop() {
                let dominated = cands
                    .iter()
                    .chain(kept.iter())
                    .any(|(q, _)| alg.divides(&q.lcm, &p.lcm).is_some());
                if cop || !dominated {
                    kept.push((p, cop));
                }
            }
            // old pairs made redundant by h
            let g = &self.g;
            self.pairs.retain(|p| {
                let divisible = alg.divides(&lh, &p.lcm).is_some();
                if !divisible {
                    return true;
                }
                let li = alg.lcm(g[p.i].lead(), &lh);
                let lj = alg.lcm(g[p.j].lead(), &lh);
                li.as_ref() == Some(&p.lcm) || lj.as_ref() == Some(&p.lcm)
            });
        } else {
            kept = cands;
        }
        for (p, cop) in kept {
            if !cop {
                self.pairs.push(p);
            }
        }
        for i in 0..self.g.len() {
            if i != h && self.active[i] && alg.divides(&lh, self.g[i].lead()).is_some() {
                self.active[i] = false;
            }
        }
        self.active[h] = true;
    }

    fn pick(&mut self, alg: &A, sel: Selection) -> Pair<A::Term> {
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let a = &self.pairs[k];
            let b = &self.pairs[best];
            let ord = match sel {
                Selection::Normal => alg.cmp(&a.lcm, &b.lcm),
                Selection::Sugar => a.sugar.cmp(&b.sugar).then_with(|| alg.cmp(&a.lcm, &b.lcm)),
            }
            .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        self.pairs.swap_remove(best)
    }
}

/// Computes a reduced Gröbner basis of the elements in `gens`.
///
/// When `track` is set every returned element carries a transcript in terms
/// of the inputs (input `k` has transcript `e_k`).
pub(crate) fn groebner<A: GbAlgebra>(
    alg: &A,
    gens: Vec<Elem<A::Term>>,
    cfg: &GbConfig,
    track: bool,
) -> Result<Vec<Elem<A::Term>>, CasError> {
    let ngens = gens.len();
    let mut st: State<A> = State { g: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for (k, mut e) in gens.into_iter().enumerate() {
        if track {
            let mut t = vec![BasePoly::new(); ngens];
            t[k].insert(unit_shift(alg, &e), Q::one());
            e.trans = Some(t);
        }
        let red = reduce(alg, e, &st.g, &st.active_idx(), &cfg.deadline)?;
        if red.is_zero() {
            continue;
        }
        push_elem(alg, &mut st, red, cfg)?;
    }
    while !st.pairs.is_empty() {
        if cfg.deadline.expired() {
            return Err(CasError::Cancelled);
        }
        let pr = st.pick(alg, cfg.selection);
        let s = spoly(alg, &st.g, &pr);
        let red = reduce(alg, s, &st.g, &st.active_idx(), &cfg.deadline)?;
        if red.is_zero() {
            continue;
        }
        push_elem(alg, &mut st, red, cfg)?;
    }
    // interreduce the minimal basis
    let idx = st.active_idx();
    let mut out: Vec<Elem<A::Term>> = Vec::with_capacity(idx.len());
    for &i in &idx {
        let mut e = st.g[i].clone();
        let head = e.terms.remove(0);
        let others: Vec<usize> = idx.iter().copied().filter(|&j| j != i).collect();
        let tail = Elem { terms: std::mem::take(&mut e.terms), sugar: e.sugar, trans: e.trans.take() };
        let red = reduce(alg, tail, &st.g, &others, &cfg.deadline)?;
        let mut terms = vec![head];
        terms.extend(red.terms);
        let mut full = Elem { terms, sugar: red.sugar, trans: red.trans };
        // the transcript of the tail already accounts for the head term
        make_monic(alg, &mut full);
        out.push(full);
    }
    out.sort_by(|a, b| alg.cmp(b.lead(), a.lead()));
    Ok(out)
}

fn unit_shift<A: GbAlgebra>(alg: &A, e: &Elem<A::Term>) -> Monomial {
    // the multiplicative identity of the base ring, sized from a sample shift
    let probe = alg.divides(e.lead(), e.lead()).expect("term divides itself");
    Monomial::one(probe.len())
}

fn push_elem<A: GbAlgebra>(
    alg: &A,
    st: &mut State<A>,
    mut e: Elem<A::Term>,
    cfg: &GbConfig,
) -> Result<(), CasError> {
    make_monic(alg, &mut e);
    if let Some(cap) = cfg.degree_cap {
        let d = max_degree(alg, &e);
        if d > cap {
            return Err(CasError::DegreeCap { cap, reached: d });
        }
    }
    st.g.push(e);
    st.active.push(false);
    let h = st.g.len() - 1;
    st.update(alg, h);
    Ok(())
}

/// Commutative polynomial ring with a compiled monomial order.
pub(crate) struct CommAlg {
    pub cmp: super::monomial::Comparator,
}

impl GbAlgebra for CommAlg {
    type Term = Monomial;

    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp.cmp(a, b)
    }
    fn divides(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        a.quotient_of(b)
    }
    fn lcm(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        Some(a.lcm(b))
    }
    fn coprime(&self, a: &Monomial, b: &Monomial) -> bool {
        a.is_coprime(b)
    }
    fn product_criterion(&self) -> bool {
        true
    }
    fn chain_criterion(&self) -> bool {
        true
    }
    fn degree(&self, t: &Monomial) -> u32 {
        t.degree()
    }
    fn left_mul(&self, m: &Monomial, c: &Q, p: &[(Monomial, Q)]) -> Vec<(Monomial, Q)> {
        p.iter().map(|(t, x)| (t.mul(m), x * c)).collect()
    }
    fn base_mul(&self, m: &Monomial, c: &Q, p: &BasePoly) -> BasePoly {
        p.iter().map(|(t, x)| (t.mul(m), x * c)).collect()
    }
}

/// Term of a free module: basis position and monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ModTerm {
    pub pos: usize,
    pub mono: Monomial,
}

/// Free module with position-over-term order; lower positions are larger.
pub(crate) struct ModuleAlg {
    pub cmp: super::monomial::Comparator,
}

impl GbAlgebra for ModuleAlg {
    type Term = ModTerm;

    fn cmp(&self, a: &ModTerm, b: &ModTerm) -> Ordering {
        b.pos.cmp(&a.pos).then_with(|| self.cmp.cmp(&a.mono, &b.mono))
    }
    fn divides(&self, a: &ModTerm, b: &ModTerm) -> Option<Monomial> {
        if a.pos != b.pos {
            return None;
        }
        a.mono.quotient_of(&b.mono)
    }
    fn lcm(&self, a: &ModTerm, b: &ModTerm) -> Option<ModTerm> {
        (a.pos == b.pos).then(|| ModTerm { pos: a.pos, mono: a.mono.lcm(&b.mono) })
    }
    fn coprime(&self, _a: &ModTerm, _b: &ModTerm) -> bool {
        false
    }
    fn product_criterion(&self) -> bool {
        false
    }
    fn chain_criterion(&self) -> bool {
        true
    }
    fn degree(&self, t: &ModTerm) -> u32 {
        t.mono.degree()
    }
    fn left_mul(&self, m: &Monomial, c: &Q, p: &[(ModTerm, Q)]) -> Vec<(ModTerm, Q)> {
        p.iter()
            .map(|(t, x)| (ModTerm { pos: t.pos, mono: t.mono.mul(m) }, x * c))
            .collect()
    }
    fn base_mul(&self, m: &Monomial, c: &Q, p: &BasePoly) -> BasePoly {
        p.iter().map(|(t, x)| (t.mul(m), x * c)).collect()
    }
}
