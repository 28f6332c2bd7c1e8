//! The augmentation `P ⊗ e ↦ P·(e f^s)` into `E[s, 1/f] f^s`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cas::linalg::SparseRow;
use crate::cas::polymat;
use crate::cas::{Monomial, Poly, Q};
use crate::weyl::{lift_fs, partial_on_fs, FsElement, WeylRing};

use super::{Generator, SpencerError, SpencerSpec};

/// Numerators over a common `f^pole`, one per basis section.
#[derive(Clone, Debug)]
struct Section {
    num: Vec<Poly>,
    pole: u32,
}

/// `∂_i` acts on `E(*D)[s] f^s` through `∂ = M^{-1} δ`, with `M` the Saito
/// matrix, and on `f^s` by the usual rule.
#[derive(Clone, Debug)]
pub struct SectionAction {
    ring: Arc<WeylRing>,
    f: Poly,
    parts: Vec<Poly>,
    /// `conn[i][k][j]`: coefficient of `e_k / f` in `∇_{∂_i} e_j`.
    conn: Vec<Vec<Vec<Poly>>>,
    derivs: HashMap<(Vec<u32>, usize), Section>,
    fpow: Vec<Poly>,
}

impl SectionAction {
    /// Precomputes `∂^b (e_j f^s)` for `|b| ≤ max_order`.
    pub fn new(spec: &SpencerSpec, max_order: u32) -> Result<Self, SpencerError> {
        let d = spec.divisor();
        let n = d.n();
        let base = d.ring();
        let ring = WeylRing::new(base);
        let e = spec.connection();
        let rank = e.rank();
        let m = spec.basis().matrix();
        let adj = polymat::adjugate(base, &m);
        let uinv = spec.basis().unit().recip();
        let mut conn = Vec::with_capacity(n);
        for i in 0..n {
            let mut b = polymat::zeros(base, rank, rank);
            for (k, ak) in e.matrices().iter().enumerate() {
                b = polymat::add(&b, &polymat::scale(ak, &adj[i][k]));
            }
            conn.push(b.iter().map(|row| row.iter().map(|p| lift_fs(&ring, &p.scale(&uinv))).collect()).collect());
        }
        let f = lift_fs(&ring, d.f());
        let parts = d.partials().iter().map(|p| lift_fs(&ring, p)).collect();
        let fpow = (0..=max_order).map(|k| f.pow(k)).collect();
        let mut act = SectionAction { ring, f, parts, conn, derivs: HashMap::new(), fpow };
        let one = Poly::one(act.ring.fs_ring());
        let zero = Poly::zero(act.ring.fs_ring());
        for j in 0..rank {
            let num = (0..rank).map(|l| if l == j { one.clone() } else { zero.clone() }).collect();
            act.derivs.insert((vec![0; n], j), Section { num, pole: 0 });
        }
        // exponent vectors by increasing |b|, each obtained from a smaller one
        let mut frontier: Vec<Vec<u32>> = vec![vec![0; n]];
        for _ in 0..max_order {
            let mut next = Vec::new();
            for b in &frontier {
                for i in 0..n {
                    let mut c = b.clone();
                    c[i] += 1;
                    if act.derivs.contains_key(&(c.clone(), 0)) {
                        continue;
                    }
                    for j in 0..rank {
                        let sec = act.partial(i, &act.derivs[&(b.clone(), j)]);
                        act.derivs.insert((c.clone(), j), sec);
                    }
                    next.push(c);
                }
            }
            frontier = next;
        }
        Ok(act)
    }

    fn partial(&self, i: usize, sec: &Section) -> Section {
        let rank = sec.num.len();
        let mut num: Vec<Poly> = sec
            .num
            .iter()
            .map(|g| {
                partial_on_fs(&self.ring, i, &FsElement { numerator: g.clone(), pole: sec.pole }, &self.f, &self.parts[i])
                    .numerator
            })
            .collect();
        for (k, out) in num.iter_mut().enumerate() {
            for j in 0..rank {
                let c = &self.conn[i][k][j];
                if !c.is_zero() && !sec.num[j].is_zero() {
                    *out = &*out + &(c * &sec.num[j]);
                }
            }
        }
        Section { num, pole: sec.pole + 1 }
    }

    /// `ρ(g)` as numerators over `f^pole`, optionally at `s = value`; columns
    /// are `(section, monomial)` pairs numbered through `values`.
    pub fn row(
        &self,
        g: &Generator,
        pole: u32,
        s_value: Option<&Q>,
        values: &mut HashMap<(usize, Monomial), usize>,
    ) -> SparseRow {
        self.row_centered(g, pole, s_value, None, values)
    }

    /// As [`SectionAction::row`], reading the `s`-exponent `e` of `g` as the
    /// factor `(s − center)^e` when a center is given.
    pub fn row_centered(
        &self,
        g: &Generator,
        pole: u32,
        s_value: Option<&Q>,
        center: Option<&Q>,
        values: &mut HashMap<(usize, Monomial), usize>,
    ) -> SparseRow {
        let n = self.ring.n();
        let e = g.monomial.exps();
        let b = e[n..2 * n].to_vec();
        let sec = &self.derivs[&(b, g.section)];
        let mut mult = Monomial::one(n + 1);
        mult.0[..n].copy_from_slice(&e[..n]);
        let factor = match center {
            Some(c) if e[2 * n] > 0 => {
                let lin = &Poly::var(self.ring.fs_ring(), n) - &Poly::constant(self.ring.fs_ring(), c.clone());
                Some(lin.pow(e[2 * n]))
            }
            Some(_) => None,
            None => {
                mult.0[n] = e[2 * n];
                None
            }
        };
        let scale = &self.fpow[(pole - sec.pole) as usize];
        let mut row: SparseRow = Vec::new();
        for (l, num) in sec.num.iter().enumerate() {
            if num.is_zero() {
                continue;
            }
            let mut p = &num.mul_monomial(&mult, &Q::from_integer(1.into())) * scale;
            if let Some(fac) = &factor {
                p = &p * fac;
            }
            if let Some(v) = s_value {
                p = p.eval_var(n, v);
            }
            for (m, c) in p.terms() {
                let next = values.len();
                let col = *values.entry((l, m.clone())).or_insert(next);
                row.push((col, c.clone()));
            }
        }
        row.sort_by_key(|x| x.0);
        row
    }
}
