//! Ideals, reduced Gröbner bases and the operations built on them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use super::engine::{self, CommAlg, Elem, GbConfig, ModTerm, ModuleAlg};
use super::monomial::{Comparator, Monomial, MonomialOrder};
use super::poly::{same_ring, Poly, Ring};
use super::{CasError, Q};

/// Generators of an ideal together with the order they are meant for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    ring: Arc<Ring>,
    generators: Vec<Poly>,
    order: MonomialOrder,
    is_groebner: bool,
}

impl IdealBasis {
    pub fn new(ring: &Arc<Ring>, generators: Vec<Poly>, order: MonomialOrder) -> Result<Self, CasError> {
        for g in &generators {
            if !same_ring(g.ring(), ring) {
                return Err(CasError::RingMismatch);
            }
        }
        order.validate(ring.nvars()).map_err(CasError::InvalidOrder)?;
        Ok(IdealBasis { ring: ring.clone(), generators, order, is_groebner: false })
    }

    /// Builds a basis from a non-empty generator list, taking its ring.
    pub fn from_gens(generators: Vec<Poly>, order: MonomialOrder) -> Result<Self, CasError> {
        let ring = generators.first().ok_or(CasError::Empty)?.ring().clone();
        Self::new(&ring, generators, order)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_groebner(&self) -> bool {
        self.is_groebner
    }

    /// True when the basis is a Gröbner basis of the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.is_groebner && self.generators.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn into_generators(self) -> Vec<Poly> {
        self.generators
    }
}

type CacheKey = (Vec<String>, Vec<Poly>, MonomialOrder);

fn cache() -> &'static RwLock<HashMap<CacheKey, Vec<Poly>>> {
    static C: OnceLock<RwLock<HashMap<CacheKey, Vec<Poly>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

const CACHE_LIMIT: usize = 4096;

fn to_elem(p: &Poly, cmp: &Comparator) -> Elem<Monomial> {
    let terms = p.sorted_terms(cmp);
    let sugar = p.total_degree().unwrap_or(0);
    Elem::new(terms, sugar)
}

fn from_elem(ring: &Arc<Ring>, e: &Elem<Monomial>) -> Poly {
    Poly::from_terms(ring, e.terms.iter().cloned())
}

fn default_config(order: &MonomialOrder) -> GbConfig {
    match order {
        MonomialOrder::Block { .. } | MonomialOrder::Weighted(_) => GbConfig::sugar(),
        _ => GbConfig::default(),
    }
}

/// Reduced Gröbner basis using the default strategy for the order.
pub fn buchberger(basis: &IdealBasis) -> Result<IdealBasis, CasError> {
    buchberger_with(basis, &default_config(&basis.order))
}

pub fn buchberger_with(basis: &IdealBasis, cfg: &GbConfig) -> Result<IdealBasis, CasError> {
    if !basis.order.is_global() {
        return Err(CasError::InvalidOrder("order is not a well-order".into()));
    }
    let gens: Vec<Poly> = basis.generators.iter().filter(|g| !g.is_zero()).cloned().collect();
    let key: CacheKey = (basis.ring.vars().to_vec(), gens.clone(), basis.order.clone());
    if let Some(hit) = cache().read().expect("cache lock").get(&key) {
        return Ok(IdealBasis { generators: hit.clone(), is_groebner: true, ..basis.clone() });
    }
    let cmp = basis.order.comparator(basis.ring.nvars());
    let alg = CommAlg { cmp: cmp.clone() };
    let elems: Vec<Elem<Monomial>> = gens.iter().map(|g| to_elem(g, &cmp)).collect();
    let out = engine::groebner(&alg, elems, cfg, false)?;
    let polys: Vec<Poly> = out.iter().map(|e| from_elem(&basis.ring, e)).collect();
    {
        let mut w = cache().write().expect("cache lock");
        if w.len() >= CACHE_LIMIT {
            w.clear();
        }
        w.insert(key, polys.clone());
    }
    Ok(IdealBasis { ring: basis.ring.clone(), generators: polys, order: basis.order.clone(), is_groebner: true })
}

/// Remainder of `p` modulo a Gröbner basis.
pub fn normal_form(p: &Poly, gb: &IdealBasis) -> Result<Poly, CasError> {
    if !gb.is_groebner {
        return Err(CasError::NotGroebner);
    }
    if !same_ring(p.ring(), &gb.ring) {
        return Err(CasError::RingMismatch);
    }
    let cmp = gb.order.comparator(gb.ring.nvars());
    let alg = CommAlg { cmp: cmp.clone() };
    let basis: Vec<Elem<Monomial>> = gb.generators.iter().map(|g| to_elem(g, &cmp)).collect();
    let idx: Vec<usize> = (0..basis.len()).collect();
    let r = engine::reduce(&alg, to_elem(p, &cmp), &basis, &idx, &engine::Deadline::none())?;
    Ok(from_elem(&gb.ring, &r))
}

/// Generators of the ideal intersected with the subring without `drop`.
pub fn elimination_ideal(ring: &Arc<Ring>, gens: &[Poly], drop: &[usize]) -> Result<Vec<Poly>, CasError> {
    elimination_ideal_with(ring, gens, drop, &GbConfig::sugar())
}

pub fn elimination_ideal_with(
    ring: &Arc<Ring>,
    gens: &[Poly],
    drop: &[usize],
    cfg: &GbConfig,
) -> Result<Vec<Poly>, CasError> {
    if drop.iter().any(|&i| i >= ring.nvars()) {
        return Err(CasError::InvalidOrder("eliminated variable out of range".into()));
    }
    if drop.is_empty() {
        return Ok(buchberger_with(&IdealBasis::new(ring, gens.to_vec(), MonomialOrder::DegRevLex)?, cfg)?
            .into_generators());
    }
    let b = IdealBasis::new(ring, gens.to_vec(), MonomialOrder::elimination(drop))?;
    let gb = buchberger_with(&b, cfg)?;
    Ok(gb.generators.into_iter().filter(|g| drop.iter().all(|&i| !g.uses_var(i))).collect())
}

/// Ideal membership, computing a degrevlex basis.
pub fn ideal_contains(gens: &[Poly], p: &Poly) -> Result<bool, CasError> {
    let gb = buchberger(&IdealBasis::new(p.ring(), gens.to_vec(), MonomialOrder::DegRevLex)?)?;
    Ok(normal_form(p, &gb)?.is_zero())
}

/// Equality of ideals, compared through their reduced Gröbner bases.
pub fn ideal_equal(a: &[Poly], b: &[Poly], order: &MonomialOrder) -> Result<bool, CasError> {
    let ring = match a.first().or(b.first()) {
        Some(p) => p.ring().clone(),
        None => return Ok(true),
    };
    let ga = buchberger(&IdealBasis::new(&ring, a.to_vec(), order.clone())?)?;
    let gb = buchberger(&IdealBasis::new(&ring, b.to_vec(), order.clone())?)?;
    Ok(ga.generators == gb.generators)
}

/// Krull dimension of `ring / (gens)`; `-1` for the unit ideal.
pub fn krull_dimension(ring: &Arc<Ring>, gens: &[Poly]) -> Result<i64, CasError> {
    krull_dimension_with(ring, gens, &GbConfig::default())
}

pub fn krull_dimension_with(ring: &Arc<Ring>, gens: &[Poly], cfg: &GbConfig) -> Result<i64, CasError> {
    let n = ring.nvars();
    let gb = buchberger_with(&IdealBasis::new(ring, gens.to_vec(), MonomialOrder::DegRevLex)?, cfg)?;
    if gb.is_unit() {
        return Ok(-1);
    }
    let cmp = MonomialOrder::DegRevLex.comparator(n);
    let masks: Vec<u64> = gb
        .generators
        .iter()
        .filter_map(|g| g.leading_term(&cmp))
        .map(|(m, _)| m.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    assert!(n < 64, "too many variables for dimension search");
    let mut best = 0i64;
    for s in 0u64..(1u64 << n) {
        let size = s.count_ones() as i64;
        if size <= best {
            continue;
        }
        if masks.iter().all(|&m| m & !s != 0) {
            best = size;
        }
    }
    Ok(best)
}

fn vec_to_elem(v: &[Poly], cmp: &Comparator, alg: &ModuleAlg) -> Elem<ModTerm> {
    let mut terms: Vec<(ModTerm, Q)> = Vec::new();
    for (pos, p) in v.iter().enumerate() {
        for (m, c) in p.sorted_terms(cmp) {
            terms.push((ModTerm { pos, mono: m }, c));
        }
    }
    use engine::GbAlgebra;
    terms.sort_by(|a, b| alg.cmp(&b.0, &a.0));
    let sugar = v.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    Elem::new(terms, sugar)
}

fn elem_to_vec(ring: &Arc<Ring>, e: &Elem<ModTerm>, rank: usize, offset: usize) -> Vec<Poly> {
    let mut maps: Vec<BTreeMap<Monomial, Q>> = vec![BTreeMap::new(); rank];
    for (t, c) in &e.terms {
        if t.pos >= offset {
            maps[t.pos - offset].insert(t.mono.clone(), c.clone());
        }
    }
    maps.into_iter().map(|m| Poly::from_terms(ring, m)).collect()
}

/// Reduced Gröbner basis of the submodule of `ring^rank` spanned by `vectors`,
/// for the position-over-term order (earlier positions larger) refined by degrevlex.
pub fn module_groebner(ring: &Arc<Ring>, rank: usize, vectors: &[Vec<Poly>]) -> Result<Vec<Vec<Poly>>, CasError> {
    module_groebner_with(ring, rank, vectors, &GbConfig::default())
}

pub fn module_groebner_with(
    ring: &Arc<Ring>,
    rank: usize,
    vectors: &[Vec<Poly>],
    cfg: &GbConfig,
) -> Result<Vec<Vec<Poly>>, CasError> {
    let cmp = MonomialOrder::DegRevLex.comparator(ring.nvars());
    let alg = ModuleAlg { cmp: cmp.clone() };
    let mut elems = Vec::new();
    for v in vectors {
        if v.len() != rank {
            return Err(CasError::Shape(format!("vector of length {} in a module of rank {rank}", v.len())));
        }
        if v.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(CasError::RingMismatch);
        }
        let e = vec_to_elem(v, &cmp, &alg);
        if !e.is_zero() {
            elems.push(e);
        }
    }
    let out = engine::groebner(&alg, elems, cfg, false)?;
    Ok(out.iter().map(|e| elem_to_vec(ring, e, rank, 0)).collect())
}

/// Generators of the syzygy module of `gens`: tuples `c` with `Σ c_i gens_i = 0`.
///
/// The result is the reduced Gröbner basis of the syzygy module for the
/// position-over-term order with the first coordinate largest.
pub fn syzygies(gens: &[Poly]) -> Result<Vec<Vec<Poly>>, CasError> {
    syzygies_with(gens, &GbConfig::default())
}

pub fn syzygies_with(gens: &[Poly], cfg: &GbConfig) -> Result<Vec<Vec<Poly>>, CasError> {
    let ring = gens.first().ok_or(CasError::Empty)?.ring().clone();
    if gens.iter().any(|g| !same_ring(g.ring(), &ring)) {
        return Err(CasError::RingMismatch);
    }
    let m = gens.len();
    let cmp = MonomialOrder::DegRevLex.comparator(ring.nvars());
    let alg = ModuleAlg { cmp: cmp.clone() };
    let one = Poly::one(&ring);
    let zero = Poly::zero(&ring);
    let mut elems = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut v = vec![g.clone()];
        for j in 0..m {
            v.push(if i == j { one.clone() } else { zero.clone() });
        }
        elems.push(vec_to_elem(&v, &cmp, &alg));
    }
    let out = engine::groebner(&alg, elems, cfg, false)?;
    Ok(out
        .iter()
        .filter(|e| e.lead().pos >= 1)
        .map(|e| elem_to_vec(&ring, e, m, 1))
        .collect())
}

/// Greatest common divisor, normalized to be primitive with positive
/// degrevlex leading coefficient. Computed from the intersection `(f) ∩ (g)`.
pub fn gcd(f: &Poly, g: &Poly) -> Result<Poly, CasError> {
    if !same_ring(f.ring(), g.ring()) {
        return Err(CasError::RingMismatch);
    }
    if f.is_zero() {
        return Ok(g.primitive());
    }
    if g.is_zero() {
        return Ok(f.primitive());
    }
    if f.is_constant() || g.is_constant() {
        return Ok(Poly::one(f.ring()));
    }
    let ring = f.ring();
    let mut names = ring.vars().to_vec();
    let mut t = String::from("_t");
    while names.contains(&t) {
        t.push('_');
    }
    names.push(t);
    let ext = Ring::new(&names);
    let tn = ext.nvars() - 1;
    let tv = Poly::var(&ext, tn);
    let fe = f.embed(&ext).expect("subring");
    let ge = g.embed(&ext).expect("subring");
    let gens = vec![&tv * &fe, &(&Poly::one(&ext) - &tv) * &ge];
    let inter = elimination_ideal(&ext, &gens, &[tn])?;
    let cmp = MonomialOrder::DegRevLex.comparator(ext.nvars());
    let lcm = inter
        .into_iter()
        .min_by(|a, b| {
            let (ma, mb) = (a.leading_term(&cmp).unwrap().0.clone(), b.leading_term(&cmp).unwrap().0.clone());
            cmp.cmp(&ma, &mb)
        })
        .ok_or(CasError::Shape("empty intersection".into()))?;
    let lcm = project(&lcm, ring);
    let prod = f * g;
    let q = prod.div_exact(&lcm).ok_or(CasError::Shape("lcm does not divide the product".into()))?;
    Ok(q.primitive())
}

fn project(p: &Poly, ring: &Arc<Ring>) -> Poly {
    let n = ring.nvars();
    Poly::from_terms(ring, p.terms().map(|(m, c)| (Monomial::from_slice(&m.exps()[..n]), c.clone())))
}

/// `gcd(f, ∂f/∂x_1, …, ∂f/∂x_n)`; constant iff `f` is squarefree.
pub fn repeated_part(f: &Poly) -> Result<Poly, CasError> {
    let mut g = f.clone();
    for i in 0..f.nvars() {
        if g.is_constant() {
            break;
        }
        g = gcd(&g, &f.derivative(i))?;
    }
    if g.is_constant() {
        Ok(Poly::one(f.ring()))
    } else {
        Ok(g.primitive())
    }
}
