//! Left Gröbner bases in `D_n[s]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::{mono_mul, WeylError, WeylOp, WeylRing};
use crate::cas::engine::{self, BasePoly, Elem, GbAlgebra, GbConfig};
use crate::cas::{Comparator, Monomial, MonomialOrder, Q};

/// Left multiplication structure for the engine.
pub struct WeylAlg {
    pub(crate) cmp: Comparator,
    pub(crate) n: usize,
}

impl WeylAlg {
    fn product(&self, m: &Monomial, c: &Q, terms: impl Iterator<Item = (Monomial, Q)>) -> BTreeMap<Monomial, Q> {
        let mut out: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (t, x) in terms {
            let cx = c * &x;
            for (mm, w) in mono_mul(self.n, m, &t) {
                let e = out.entry(mm).or_insert_with(Q::zero);
                *e += &cx * Q::from_integer(w);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl GbAlgebra for WeylAlg {
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
    fn coprime(&self, _a: &Monomial, _b: &Monomial) -> bool {
        false
    }
    fn product_criterion(&self) -> bool {
        false
    }
    fn chain_criterion(&self) -> bool {
        false
    }
    fn degree(&self, t: &Monomial) -> u32 {
        t.degree()
    }
    fn left_mul(&self, m: &Monomial, c: &Q, p: &[(Monomial, Q)]) -> Vec<(Monomial, Q)> {
        if m.is_one() {
            return p.iter().map(|(t, x)| (t.clone(), x * c)).collect();
        }
        let map = self.product(m, c, p.iter().cloned());
        let mut v: Vec<(Monomial, Q)> = map.into_iter().collect();
        v.sort_by(|a, b| self.cmp.cmp(&b.0, &a.0));
        v
    }
    fn base_mul(&self, m: &Monomial, c: &Q, p: &BasePoly) -> BasePoly {
        self.product(m, c, p.iter().map(|(a, b)| (a.clone(), b.clone())))
    }
}

fn to_elem(p: &WeylOp, cmp: &Comparator) -> Elem<Monomial> {
    let mut terms: Vec<(Monomial, Q)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    terms.sort_by(|a, b| cmp.cmp(&b.0, &a.0));
    let sugar = p.terms().map(|(m, _)| m.degree()).max().unwrap_or(0);
    Elem::new(terms, sugar)
}

fn check(gens: &[WeylOp], order: &MonomialOrder) -> Result<Arc<WeylRing>, WeylError> {
    let ring = gens.first().ok_or(WeylError::Empty)?.ring().clone();
    if gens.iter().any(|g| **g.ring() != *ring) {
        return Err(WeylError::RingMismatch);
    }
    order.validate(ring.nvars()).map_err(WeylError::InvalidOrder)?;
    if !order.is_global() {
        return Err(WeylError::InvalidOrder("left Gröbner bases need a global order".into()));
    }
    Ok(ring)
}

/// Reduced left Gröbner basis.
pub fn weyl_groebner(gens: &[WeylOp], order: &MonomialOrder) -> Result<Vec<WeylOp>, WeylError> {
    Ok(weyl_groebner_with(gens, order, &GbConfig::sugar(), false)?.0)
}

/// Reduced left Gröbner basis; with `track`, also the left combination of
/// the inputs giving each basis element.
pub fn weyl_groebner_with(
    gens: &[WeylOp],
    order: &MonomialOrder,
    cfg: &GbConfig,
    track: bool,
) -> Result<(Vec<WeylOp>, Option<Vec<Vec<WeylOp>>>), WeylError> {
    let ring = check(gens, order)?;
    let cmp = order.comparator(ring.nvars());
    let alg = WeylAlg { cmp: cmp.clone(), n: ring.n() };
    let elems: Vec<Elem<Monomial>> = gens.iter().map(|g| to_elem(g, &cmp)).collect();
    let out = engine::groebner(&alg, elems, cfg, track)?;
    let basis = out.iter().map(|e| WeylOp::from_terms(&ring, e.terms.iter().cloned())).collect();
    let trans = if track {
        Some(
            out.into_iter()
                .map(|e| {
                    e.trans
                        .expect("tracked transcript")
                        .into_iter()
                        .map(|t| WeylOp::from_map(&ring, t))
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    };
    Ok((basis, trans))
}

/// Remainder of `p` modulo a left Gröbner basis computed for `order`.
pub fn weyl_normal_form(p: &WeylOp, gb: &[WeylOp], order: &MonomialOrder) -> WeylOp {
    let ring = p.ring().clone();
    let cmp = order.comparator(ring.nvars());
    let alg = WeylAlg { cmp: cmp.clone(), n: ring.n() };
    let basis: Vec<Elem<Monomial>> = gb.iter().map(|g| to_elem(g, &cmp)).collect();
    let idx: Vec<usize> = (0..basis.len()).collect();
    let r = engine::reduce(&alg, to_elem(p, &cmp), &basis, &idx, &engine::Deadline::none()).expect("no deadline");
    WeylOp::from_terms(&ring, r.terms)
}
