//! Spencer complexes `D[s] ⊗ ∧^r L ⊗ E` realized on finite truncations as
//! exact rational matrices, with exactness and specialization checks.
//!
//! Generators of the degree `−r` term are `x^a ∂^b s^k ⊗ λ_I ⊗ e_j` with
//! `|I| = r`. The filtration level of a generator is its total order
//! `|b| + k` plus `r`; the differential never raises it, so bounding the level
//! by `N` gives a subcomplex. When `f` is weighted homogeneous the complex is
//! also graded by weight, and each (weight, level) piece is finite.

mod action;
mod check;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cas::linalg::SparseRow;
use crate::cas::poly::weighted_degree;
use crate::cas::{Monomial, MonomialOrder, Poly, Q};
use crate::divisor::{
    is_koszul_free_with, is_quasi_homogeneous, log_derivations, saito_basis, theta_symbols_regular, DivisorError,
    DivisorInput, LogDerivation, SaitoBasis,
};
use crate::ilc::{structure_functions, IlcError, ILCData};
use crate::weyl::{mono_mul, WeylError, WeylOp, WeylRing};

pub use action::SectionAction;
pub use check::{
    check_exactness, filtration_evidence, specialize_and_check, EvidenceReport, EvidenceRow, HomologyRow,
    HomologyTable, SpecializationReport, SpecializationRow, SPECIALIZATION_MARGIN,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpencerError {
    #[error(transparent)]
    Ilc(#[from] IlcError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("f is not weighted homogeneous; weight-graded truncation is unavailable")]
    NotQuasiHomogeneous,
    #[error("not weighted homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("invalid truncation: {0}")]
    Truncation(String),
    #[error("the connection is presented over a different basis")]
    ConnectionMismatch,
    #[error("exactness can only be certified for weight-graded truncations")]
    NotGraded,
    #[error("filtration evidence needs a filtration truncation")]
    NotFiltration,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

/// Which Lie–Rinehart pair the complex is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    /// `Θ_{f,s}` inside `F¹D[s]`, over `(Q, O)`, acting on `E`.
    Theta,
    /// `Der(log f)[s]` inside `Der[s]`, over `(Q[s], O[s])`, acting on `E[s] f^s`.
    LogDer,
}

impl Pair {
    pub fn name(&self) -> &'static str {
        match self {
            Pair::Theta => "theta",
            Pair::LogDer => "logder",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Weight components `−W ..= W`, filtration level at most `N`.
    Graded { max_weight: i64, max_order: u32 },
    /// Level at most `N` and x-degree at most `M`; results are evidence only.
    Filtration { max_order: u32, max_x_degree: u32 },
}

impl Truncation {
    pub fn max_order(&self) -> u32 {
        match *self {
            Truncation::Graded { max_order, .. } | Truncation::Filtration { max_order, .. } => max_order,
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, Truncation::Graded { .. })
    }
}

#[derive(Clone, Debug)]
pub struct SpencerSpec {
    divisor: DivisorInput,
    basis: SaitoBasis,
    e: ILCData,
    pair: Pair,
    truncation: Truncation,
    weights: Option<Vec<i64>>,
    field_weights: Option<Vec<i64>>,
}

/// Weight of a homogeneous logarithmic derivation, or `None`.
pub fn derivation_weight(d: &LogDerivation, weights: &[i64]) -> Option<i64> {
    let mut w = None;
    let mut see = |v: i64| match w {
        None => {
            w = Some(v);
            true
        }
        Some(x) => x == v,
    };
    for (l, al) in d.a().iter().enumerate() {
        for (m, _) in al.terms() {
            if !see(weighted_degree(m, weights) - weights[l]) {
                return None;
            }
        }
    }
    for (m, _) in d.alpha().terms() {
        if !see(weighted_degree(m, weights)) {
            return None;
        }
    }
    w
}

/// Splits `δ` into weighted homogeneous logarithmic pieces.
fn homogeneous_pieces(f: &Poly, d: &LogDerivation, weights: &[i64]) -> Vec<LogDerivation> {
    let ring = f.ring();
    let n = d.a().len();
    let mut parts: BTreeMap<i64, (Vec<Poly>, Poly)> = BTreeMap::new();
    let blank = || (vec![Poly::zero(ring); n], Poly::zero(ring));
    for (l, al) in d.a().iter().enumerate() {
        for (m, c) in al.terms() {
            let e = parts.entry(weighted_degree(m, weights) - weights[l]).or_insert_with(blank);
            e.0[l].add_term(m.clone(), c.clone());
        }
    }
    for (m, c) in d.alpha().terms() {
        let e = parts.entry(weighted_degree(m, weights)).or_insert_with(blank);
        e.1.add_term(m.clone(), c.clone());
    }
    parts
        .into_values()
        .filter(|(a, _)| a.iter().any(|p| !p.is_zero()))
        .filter_map(|(a, alpha)| LogDerivation::new(f, a, alpha).ok())
        .collect()
}

/// A Saito basis consisting of weighted homogeneous fields.
pub fn homogeneous_saito_basis(d: &DivisorInput, weights: &[i64]) -> Result<Option<SaitoBasis>, SpencerError> {
    let ders = log_derivations(d)?;
    let mut pieces: Vec<LogDerivation> = Vec::new();
    for g in &ders {
        for p in homogeneous_pieces(d.f(), g, weights) {
            if !pieces.contains(&p) {
                pieces.push(p);
            }
        }
    }
    Ok(saito_basis(d, &pieces).filter(|b| b.rows().iter().all(|r| derivation_weight(r, weights).is_some())))
}

impl SpencerSpec {
    pub fn new(
        divisor: DivisorInput,
        basis: SaitoBasis,
        e: ILCData,
        pair: Pair,
        truncation: Truncation,
    ) -> Result<Self, SpencerError> {
        if !e.is_checked() {
            return Err(IlcError::NotChecked.into());
        }
        if e.basis() != &basis || !basis.verify(divisor.f()) {
            return Err(SpencerError::ConnectionMismatch);
        }
        match truncation {
            Truncation::Graded { max_weight, max_order } if max_weight < 1 || max_order < 1 => {
                return Err(SpencerError::Truncation("W and N must be at least 1".into()))
            }
            Truncation::Filtration { max_order, max_x_degree } if max_order < 1 || max_x_degree < 1 => {
                return Err(SpencerError::Truncation("N and M must be at least 1".into()))
            }
            _ => {}
        }
        let (weights, field_weights) = if truncation.is_graded() {
            let w = is_quasi_homogeneous(&divisor).ok_or(SpencerError::NotQuasiHomogeneous)?;
            let mut fw = Vec::new();
            for (i, r) in basis.rows().iter().enumerate() {
                let v = derivation_weight(r, &w)
                    .ok_or_else(|| SpencerError::NotHomogeneous(format!("basis field {i}: {r}")))?;
                for row in e.matrix(i) {
                    for p in row {
                        if p.terms().any(|(m, _)| weighted_degree(m, &w) != v) {
                            return Err(SpencerError::NotHomogeneous(format!("connection matrix {i} entry {p}")));
                        }
                    }
                }
                fw.push(v);
            }
            (Some(w), Some(fw))
        } else {
            (None, None)
        };
        Ok(SpencerSpec { divisor, basis, e, pair, truncation, weights, field_weights })
    }

    /// Weight-graded spec over a homogeneous Saito basis found automatically.
    pub fn graded(
        divisor: &DivisorInput,
        twist: i64,
        pair: Pair,
        max_weight: i64,
        max_order: u32,
    ) -> Result<Self, SpencerError> {
        let w = is_quasi_homogeneous(divisor).ok_or(SpencerError::NotQuasiHomogeneous)?;
        let basis = homogeneous_saito_basis(divisor, &w)?
            .ok_or_else(|| SpencerError::NotHomogeneous("no homogeneous Saito basis found".into()))?;
        let e = ILCData::line_bundle(&basis, twist);
        SpencerSpec::new(divisor.clone(), basis, e, pair, Truncation::Graded { max_weight, max_order })
    }

    pub fn divisor(&self) -> &DivisorInput {
        &self.divisor
    }

    pub fn basis(&self) -> &SaitoBasis {
        &self.basis
    }

    pub fn connection(&self) -> &ILCData {
        &self.e
    }

    pub fn pair(&self) -> Pair {
        self.pair
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn field_weights(&self) -> Option<&[i64]> {
        self.field_weights.as_deref()
    }

    pub fn with_truncation(&self, truncation: Truncation) -> Result<Self, SpencerError> {
        SpencerSpec::new(self.divisor.clone(), self.basis.clone(), self.e.clone(), self.pair, truncation)
    }
}

/// `x^a ∂^b s^k ⊗ λ_I ⊗ e_j`; the monomial uses the exponent layout of [`WeylRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub wedge: Vec<usize>,
    pub section: usize,
    pub monomial: Monomial,
}

impl Generator {
    pub fn level(&self, n: usize) -> u32 {
        self.monomial.exps()[n..].iter().sum::<u32>() + self.wedge.len() as u32
    }

    pub fn x_degree(&self, n: usize) -> u32 {
        self.monomial.exps()[..n].iter().sum()
    }
}

/// One term `Q ⊗ λ_J ⊗ e_l` of the image of `1 ⊗ λ_I ⊗ e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryTerm {
    pub op: WeylOp,
    pub wedge: Vec<usize>,
    pub section: usize,
}

/// The differential on the free generators `1 ⊗ λ_I ⊗ e_j`.
#[derive(Clone, Debug)]
pub struct Boundary {
    ring: Arc<WeylRing>,
    terms: BTreeMap<(Vec<usize>, usize), Vec<BoundaryTerm>>,
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// `λ_k ∧ λ_J` as a sorted index set with its sign.
fn wedge_insert(k: usize, j: &[usize]) -> Option<(Vec<usize>, i64)> {
    if j.contains(&k) {
        return None;
    }
    let before = j.iter().filter(|&&x| x < k).count();
    let mut out = j.to_vec();
    out.insert(before, k);
    Some((out, if before % 2 == 0 { 1 } else { -1 }))
}

impl Boundary {
    pub fn new(spec: &SpencerSpec) -> Result<Self, SpencerError> {
        let d = &spec.divisor;
        let n = d.n();
        let ring = WeylRing::new(d.ring());
        let sf = structure_functions(&spec.basis)?;
        let rows = spec.basis.rows();
        let rank = spec.e.rank();
        let lambda: Vec<WeylOp> = rows
            .iter()
            .map(|r| match spec.pair {
                Pair::Theta => WeylOp::zeta(&ring, r),
                Pair::LogDer => WeylOp::from_derivation(&ring, r),
            })
            .collect();
        let s = WeylOp::s(&ring);
        // action[i][l][j]: coefficient of e_l in λ_i · e_j
        let action: Vec<Vec<Vec<WeylOp>>> = (0..n)
            .map(|i| {
                (0..rank)
                    .map(|l| {
                        (0..rank)
                            .map(|j| {
                                let a = WeylOp::from_poly(&ring, &spec.e.matrix(i)[l][j]);
                                if spec.pair == Pair::LogDer && l == j {
                                    &a + &WeylOp::from_poly(&ring, rows[i].alpha()).mul(&s)
                                } else {
                                    a
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut terms = BTreeMap::new();
        for r in 1..=n {
            for big_i in subsets(n, r) {
                for j in 0..rank {
                    let mut acc: BTreeMap<(Vec<usize>, usize), WeylOp> = BTreeMap::new();
                    let mut push = |wedge: Vec<usize>, l: usize, op: WeylOp| {
                        let e = acc.entry((wedge, l)).or_insert_with(|| WeylOp::zero(&ring));
                        *e = &*e + &op;
                    };
                    for (p, &i) in big_i.iter().enumerate() {
                        let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
                        let rest: Vec<usize> = big_i.iter().copied().filter(|&x| x != i).collect();
                        push(rest.clone(), j, lambda[i].scale(&sign));
                        for (l, a) in action[i].iter().enumerate() {
                            if !a[j].is_zero() {
                                push(rest.clone(), l, a[j].scale(&-sign.clone()));
                            }
                        }
                    }
                    for p in 0..big_i.len() {
                        for q in (p + 1)..big_i.len() {
                            let sign: i64 = if (p + q) % 2 == 0 { 1 } else { -1 };
                            let rest: Vec<usize> =
                                big_i.iter().copied().filter(|&x| x != big_i[p] && x != big_i[q]).collect();
                            for k in 0..n {
                                let c = sf.get(big_i[p], big_i[q], k);
                                if c.is_zero() {
                                    continue;
                                }
                                if let Some((wedge, sg)) = wedge_insert(k, &rest) {
                                    push(wedge, j, WeylOp::from_poly(&ring, c).scale(&Q::from_integer((sign * sg).into())));
                                }
                            }
                        }
                    }
                    let list = acc
                        .into_iter()
                        .filter(|(_, op)| !op.is_zero())
                        .map(|((wedge, section), op)| BoundaryTerm { op, wedge, section })
                        .collect();
                    terms.insert((big_i.clone(), j), list);
                }
            }
        }
        Ok(Boundary { ring, terms })
    }

    pub fn ring(&self) -> &Arc<WeylRing> {
        &self.ring
    }

    /// Image of `1 ⊗ λ_I ⊗ e_j`.
    pub fn of(&self, wedge: &[usize], section: usize) -> &[BoundaryTerm] {
        self.terms.get(&(wedge.to_vec(), section)).map_or(&[], |v| v.as_slice())
    }

    /// The same differential with `s` replaced by `value`.
    pub fn specialize(&self, value: &Q) -> Boundary {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| {
                let list = v
                    .iter()
                    .map(|t| BoundaryTerm { op: t.op.eval_s(value), ..t.clone() })
                    .filter(|t| !t.op.is_zero())
                    .collect();
                (k.clone(), list)
            })
            .collect();
        Boundary { ring: self.ring.clone(), terms }
    }

    /// Image of an arbitrary generator, by left multiplication with its monomial.
    pub fn image(&self, g: &Generator) -> BTreeMap<Generator, Q> {
        let n = self.ring.n();
        let mut out: BTreeMap<Generator, Q> = BTreeMap::new();
        for t in self.of(&g.wedge, g.section) {
            for (m, c) in t.op.terms() {
                for (mm, w) in mono_mul(n, &g.monomial, m) {
                    let key = Generator { wedge: t.wedge.clone(), section: t.section, monomial: mm };
                    let e = out.entry(key).or_insert_with(Q::zero);
                    *e += c * Q::from_integer(w);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// Monomials `x^a ∂^b s^k` with `|b| + k ≤ order`.
///
/// With `weight = Some((weights, w))` only those of weight `w` (x positive,
/// ∂ negative, s zero); with `x_degree` only those with `|a|` bounded.
pub(crate) fn operator_monomials(
    n: usize,
    order: u32,
    with_s: bool,
    weight: Option<(&[i64], i64)>,
    x_degree: Option<u32>,
) -> Vec<Monomial> {
    fn bounded(n: usize, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for e in 0..=max {
            for mut rest in bounded(n - 1, max - e) {
                rest.insert(0, e);
                out.push(rest);
            }
        }
        out
    }
    fn exact_weight(w: &[i64], target: i64) -> Vec<Vec<u32>> {
        if w.is_empty() {
            return if target == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        let mut e = 0u32;
        while e as i64 * w[0] <= target {
            for mut rest in exact_weight(&w[1..], target - e as i64 * w[0]) {
                rest.insert(0, e);
                out.push(rest);
            }
            e += 1;
        }
        out
    }
    let mut out = Vec::new();
    for bk in bounded(n + 1, order) {
        if !with_s && bk[n] > 0 {
            continue;
        }
        let xs: Vec<Vec<u32>> = match (weight, x_degree) {
            (Some((w, t)), _) => {
                let target = t + bk[..n].iter().zip(w).map(|(&b, &wi)| b as i64 * wi).sum::<i64>();
                if target < 0 {
                    continue;
                }
                exact_weight(w, target)
            }
            (None, Some(m)) => bounded(n, m),
            (None, None) => vec![vec![0; n]],
        };
        for a in xs {
            let mut e = a;
            e.extend_from_slice(&bk);
            out.push(Monomial::from_slice(&e));
        }
    }
    let cmp = MonomialOrder::DegRevLex.comparator(2 * n + 1);
    out.sort_by(|a, b| cmp.cmp(b, a));
    out
}

/// One weight component (or the single filtration box) of the truncation.
#[derive(Clone, Debug)]
pub struct Component {
    pub weight: Option<i64>,
    /// Source generators in degree `−r`.
    pub bases: Vec<Vec<Generator>>,
    /// Column generators in degree `−r`: the basis, followed in filtration
    /// mode by generators reached only as images.
    pub targets: Vec<Vec<Generator>>,
    /// `differentials[r]`: rows for `bases[r]`, columns `targets[r − 1]`.
    pub differentials: Vec<Vec<SparseRow>>,
    /// Rows for `bases[0]`: numerators over `f^pole` in `E[s]`.
    pub augmentation: Vec<SparseRow>,
    pub pole: u32,
}

impl Component {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    spec: SpencerSpec,
    boundary: Boundary,
    components: Vec<Component>,
}

pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len());
    if threads <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|sc| {
        let handles: Vec<_> =
            items.chunks(chunk).map(|c| sc.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker thread panicked")).collect()
    })
}

pub(crate) struct Layout<'a> {
    pub n: usize,
    pub rank: usize,
    pub weights: Option<&'a [i64]>,
    pub field_weights: Option<&'a [i64]>,
}

impl Layout<'_> {
    /// Generators of degree `−r`, level `≤ order`, in the given weight or x-degree box.
    pub fn generators(&self, r: usize, order: u32, with_s: bool, weight: Option<i64>, x_degree: Option<u32>) -> Vec<Generator> {
        let mut out = Vec::new();
        if order < r as u32 {
            return out;
        }
        for big_i in subsets(self.n, r) {
            let wt = match (weight, self.weights, self.field_weights) {
                (Some(w), Some(ws), Some(fw)) => Some((ws, w - big_i.iter().map(|&i| fw[i]).sum::<i64>())),
                _ => None,
            };
            let monos = operator_monomials(self.n, order - r as u32, with_s, wt, x_degree);
            for j in 0..self.rank {
                for m in &monos {
                    out.push(Generator { wedge: big_i.clone(), section: j, monomial: m.clone() });
                }
            }
        }
        out
    }
}

/// Assembles a component from its source bases.
pub(crate) fn assemble(
    boundary: &Boundary,
    action: &SectionAction,
    bases: Vec<Vec<Generator>>,
    weight: Option<i64>,
    pole: u32,
    closed: bool,
    s_value: Option<&Q>,
) -> Result<Component, SpencerError> {
    let nr = bases.len();
    let mut targets = bases.clone();
    let mut index: Vec<HashMap<Generator, usize>> =
        bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect()).collect();
    let mut differentials = vec![Vec::new(); nr];
    for r in 1..nr {
        let mut rows = Vec::with_capacity(bases[r].len());
        for g in &bases[r] {
            let mut row: SparseRow = Vec::new();
            for (t, c) in boundary.image(g) {
                let col = match index[r - 1].get(&t) {
                    Some(&c) => c,
                    None if closed => {
                        return Err(SpencerError::Inconsistent(format!(
                            "differential leaves the truncation: {g:?} reaches {t:?}"
                        )))
                    }
                    None => {
                        let c = targets[r - 1].len();
                        targets[r - 1].push(t.clone());
                        index[r - 1].insert(t, c);
                        c
                    }
                };
                row.push((col, c));
            }
            row.sort_by_key(|e| e.0);
            rows.push(row);
        }
        differentials[r] = rows;
    }
    let mut values: HashMap<(usize, Monomial), usize> = HashMap::new();
    let augmentation = bases[0].iter().map(|g| action.row(g, pole, s_value, &mut values)).collect();
    Ok(Component { weight, bases, targets, differentials, augmentation, pole })
}

fn check_composition(
    boundary: &Boundary,
    action: &SectionAction,
    comp: &Component,
) -> Result<(), SpencerError> {
    let nr = comp.bases.len();
    let mut memo: HashMap<Generator, BTreeMap<Generator, Q>> = HashMap::new();
    for r in 2..nr {
        for (g, row) in comp.bases[r].iter().zip(&comp.differentials[r]) {
            let mut acc: BTreeMap<Generator, Q> = BTreeMap::new();
            for (col, c) in row {
                let t = &comp.targets[r - 1][*col];
                let img = memo.entry(t.clone()).or_insert_with(|| boundary.image(t));
                for (u, x) in img.iter() {
                    let e = acc.entry(u.clone()).or_insert_with(Q::zero);
                    *e += c * x;
                }
            }
            if acc.values().any(|x| !x.is_zero()) {
                return Err(SpencerError::Inconsistent(format!("ε∘ε ≠ 0 on {g:?}")));
            }
        }
    }
    if nr > 1 {
        let mut values: HashMap<(usize, Monomial), usize> = HashMap::new();
        for (g, row) in comp.bases[1].iter().zip(&comp.differentials[1]) {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (col, c) in row {
                for (v, x) in action.row(&comp.targets[0][*col], comp.pole, None, &mut values) {
                    let e = acc.entry(v).or_insert_with(Q::zero);
                    *e += c * x;
                }
            }
            if acc.values().any(|x| !x.is_zero()) {
                return Err(SpencerError::Inconsistent(format!("ρ∘ε ≠ 0 on {g:?}")));
            }
        }
    }
    Ok(())
}

/// Extra x-degree allowed for preimages in filtration mode.
pub const EVIDENCE_MARGIN: u32 = 2;

pub fn build_spencer(spec: &SpencerSpec) -> Result<TruncatedComplex, SpencerError> {
    let boundary = Boundary::new(spec)?;
    let n = spec.divisor.n();
    let order = spec.truncation.max_order();
    let action = SectionAction::new(spec, order)?;
    let layout = Layout { n, rank: spec.e.rank(), weights: spec.weights(), field_weights: spec.field_weights() };
    let components: Vec<Result<Component, SpencerError>> = match spec.truncation {
        Truncation::Graded { max_weight, .. } => {
            let ws: Vec<i64> = (-max_weight..=max_weight).collect();
            par_map(&ws, |&w| {
                let bases = (0..=n).map(|r| layout.generators(r, order, true, Some(w), None)).collect();
                let c = assemble(&boundary, &action, bases, Some(w), order, true, None)?;
                check_composition(&boundary, &action, &c)?;
                Ok(c)
            })
        }
        Truncation::Filtration { max_x_degree, .. } => {
            let bases =
                (0..=n).map(|r| layout.generators(r, order, true, None, Some(max_x_degree + EVIDENCE_MARGIN))).collect();
            let c = assemble(&boundary, &action, bases, None, order, false, None)
                .and_then(|c| check_composition(&boundary, &action, &c).map(|_| c));
            vec![c]
        }
    };
    let components = components.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(TruncatedComplex { spec: spec.clone(), boundary, components })
}

impl TruncatedComplex {
    pub fn spec(&self) -> &SpencerSpec {
        &self.spec
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, weight: i64) -> Option<&Component> {
        self.components.iter().find(|c| c.weight == Some(weight))
    }

    /// Plain-text matrix export: a header with weights and dimensions, then
    /// every map as row-major rational entries.
    pub fn export_text(&self) -> String {
        use std::fmt::Write;
        let fmt_q = crate::cas::poly::fmt_rational;
        let mut out = String::new();
        let spec = &self.spec;
        let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "logdiv-spencer 1").unwrap();
        writeln!(out, "f {}", spec.divisor.f()).unwrap();
        writeln!(out, "pair {}", spec.pair.name()).unwrap();
        writeln!(out, "rank {}", spec.e.rank()).unwrap();
        match spec.truncation {
            Truncation::Graded { max_weight, max_order } => {
                writeln!(out, "mode graded W {max_weight} N {max_order}").unwrap();
                writeln!(out, "weights {}", join(spec.weights().unwrap_or(&[]))).unwrap();
                writeln!(out, "field_weights {}", join(spec.field_weights().unwrap_or(&[]))).unwrap();
            }
            Truncation::Filtration { max_order, max_x_degree } => {
                writeln!(out, "mode filtration N {max_order} M {max_x_degree}").unwrap();
            }
        }
        for c in &self.components {
            match c.weight {
                Some(w) => writeln!(out, "component {w}").unwrap(),
                None => writeln!(out, "component box").unwrap(),
            }
            let dims: Vec<i64> = c.dims().iter().map(|&d| d as i64).collect();
            writeln!(out, "dims {}", join(&dims)).unwrap();
            for r in 1..c.bases.len() {
                let cols = c.targets[r - 1].len();
                writeln!(out, "map {} {} {}", -(r as i64), c.bases[r].len(), cols).unwrap();
                for row in &c.differentials[r] {
                    let mut dense = vec![Q::zero(); cols];
                    for (j, x) in row {
                        dense[*j] = x.clone();
                    }
                    writeln!(out, "{}", dense.iter().map(fmt_q).collect::<Vec<_>>().join(" ")).unwrap();
                }
            }
            let cols = c.augmentation.iter().flat_map(|r| r.iter().map(|e| e.0 + 1)).max().unwrap_or(0);
            writeln!(out, "augmentation {} {} pole {}", c.augmentation.len(), cols, c.pole).unwrap();
            for row in &c.augmentation {
                let mut dense = vec![Q::zero(); cols];
                for (j, x) in row {
                    dense[*j] = x.clone();
                }
                writeln!(out, "{}", dense.iter().map(fmt_q).collect::<Vec<_>>().join(" ")).unwrap();
            }
        }
        out
    }
}

/// Regularity of the symbols in the graded model of the chosen pair:
/// `σ_T(ζ_i)` in `Q[x, s, ξ]` for `Θ_{f,s}`, `σ(δ_i)` in `Q[x, s][ξ]` for
/// `Der(log f)[s]`.
pub fn graded_koszul_check(spec: &SpencerSpec) -> Result<bool, SpencerError> {
    let cfg = crate::cas::GbConfig::default();
    Ok(match spec.pair {
        Pair::Theta => theta_symbols_regular(&spec.divisor, &spec.basis, &cfg)?,
        Pair::LogDer => is_koszul_free_with(&spec.divisor, &spec.basis, &cfg)?,
    })
}
