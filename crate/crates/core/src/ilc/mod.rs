//! Integrable logarithmic connections presented over a Saito basis.
//!
//! A connection of rank `r` is a list of `r × r` matrices `A_i`, one per
//! basis field `δ_i`, acting on coordinate columns by `∇_{δ_i} = δ_i + A_i`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::cas::polymat::{self, PolyMatrix};
use crate::cas::{parse_in, ParseError, Poly, Ring};
use crate::divisor::SaitoBasis;
use crate::weyl::BFunction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IlcError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("malformed connection input: {0}")]
    Format(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("basis is inconsistent: {0}")]
    InconsistentBasis(String),
    #[error("connection has not passed the integrability check")]
    NotChecked,
    #[error("connection is not integrable")]
    NotIntegrable,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// `[δ_i, δ_j] = Σ_k c[i][j][k] δ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFunctions {
    c: Vec<Vec<Vec<Poly>>>,
}

impl StructureFunctions {
    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.c[i][j][k]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().flatten().all(Poly::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.c[i][j][k] == -&self.c[j][i][k])))
    }

    /// Re-expands `Σ_k c_ij^k δ_k` and compares with the bracket, including
    /// the `α` parts.
    pub fn verify(&self, basis: &SaitoBasis) -> bool {
        let rows = basis.rows();
        let n = rows.len();
        for i in 0..n {
            for j in 0..n {
                let br = rows[i].bracket(&rows[j]);
                let ring = br.alpha().ring().clone();
                let mut alpha = Poly::zero(&ring);
                let mut a = vec![Poly::zero(&ring); n];
                for (k, row) in rows.iter().enumerate() {
                    let c = &self.c[i][j][k];
                    alpha = &alpha + &(c * row.alpha());
                    for (l, al) in row.a().iter().enumerate() {
                        a[l] = &a[l] + &(c * al);
                    }
                }
                if a != br.a() || alpha != *br.alpha() {
                    return false;
                }
            }
        }
        true
    }
}

/// The divisor recovered from a Saito basis: `det / unit`.
pub fn basis_divisor(basis: &SaitoBasis) -> Poly {
    let ring = basis.rows()[0].alpha().ring().clone();
    polymat::det(&ring, &basis.matrix()).scale(&basis.unit().recip())
}

pub fn structure_functions(basis: &SaitoBasis) -> Result<StructureFunctions, IlcError> {
    let rows = basis.rows();
    let n = rows.len();
    let ring = rows[0].alpha().ring().clone();
    let m = basis.matrix();
    let adj = polymat::adjugate(&ring, &m);
    let det = polymat::det(&ring, &m);
    let mut c = vec![vec![vec![Poly::zero(&ring); n]; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let b = rows[i].bracket(&rows[j]);
            for k in 0..n {
                let mut num = Poly::zero(&ring);
                for l in 0..n {
                    num = &num + &(&b.a()[l] * &adj[l][k]);
                }
                let q = if num.is_zero() {
                    num
                } else {
                    num.div_exact(&det).ok_or_else(|| {
                        IlcError::InconsistentBasis(format!("bracket of fields {i} and {j} leaves the module"))
                    })?
                };
                c[j][i][k] = -&q;
                c[i][j][k] = q;
            }
        }
    }
    let sf = StructureFunctions { c };
    if !sf.verify(basis) {
        return Err(IlcError::InconsistentBasis("structure functions do not reproduce the brackets".into()));
    }
    Ok(sf)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IlcState {
    Draft,
    Checked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ILCData {
    rank: usize,
    matrices: Vec<PolyMatrix>,
    basis: SaitoBasis,
    state: IlcState,
}

fn ring_of(basis: &SaitoBasis) -> Arc<Ring> {
    basis.rows()[0].alpha().ring().clone()
}

impl ILCData {
    /// An unchecked connection.
    pub fn draft(basis: &SaitoBasis, matrices: Vec<PolyMatrix>) -> Result<Self, IlcError> {
        let n = basis.rows().len();
        if matrices.len() != n {
            return Err(IlcError::Shape(format!("{} matrices for a basis of {n} fields", matrices.len())));
        }
        let rank = matrices[0].len();
        if rank == 0 {
            return Err(IlcError::Shape("rank must be at least 1".into()));
        }
        let ring = ring_of(basis);
        for a in &matrices {
            if a.len() != rank || a.iter().any(|r| r.len() != rank) {
                return Err(IlcError::Shape(format!("every matrix must be {rank}x{rank}")));
            }
            if a.iter().flatten().any(|p| **p.ring() != *ring) {
                return Err(IlcError::Shape("matrix entries live in a different ring".into()));
            }
        }
        Ok(ILCData { rank, matrices, basis: basis.clone(), state: IlcState::Draft })
    }

    /// `O` with the derivations acting by themselves.
    pub fn trivial(basis: &SaitoBasis) -> Self {
        let ring = ring_of(basis);
        let matrices = vec![polymat::zeros(&ring, 1, 1); basis.rows().len()];
        ILCData { rank: 1, matrices, basis: basis.clone(), state: IlcState::Checked }
    }

    /// `O(mD)`, presented on the section `f^{-m}`.
    pub fn line_bundle(basis: &SaitoBasis, m: i64) -> Self {
        twist(&ILCData::trivial(basis), m).expect("trivial connection is checked")
    }

    /// Parses `{"rank": r, "matrices": [[[entry, …], …], …]}` with entries
    /// as polynomial text over the ring of the basis.
    pub fn from_json(text: &str, basis: &SaitoBasis) -> Result<Self, IlcError> {
        let v: Value = serde_json::from_str(text).map_err(|e| IlcError::Format(e.to_string()))?;
        ILCData::from_value(&v, basis)
    }

    pub fn from_value(v: &Value, basis: &SaitoBasis) -> Result<Self, IlcError> {
        let ring = ring_of(basis);
        let rank = v
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| IlcError::Format("missing integer field \"rank\"".into()))? as usize;
        let mats = v
            .get("matrices")
            .and_then(Value::as_array)
            .ok_or_else(|| IlcError::Format("missing array field \"matrices\"".into()))?;
        let mut matrices = Vec::with_capacity(mats.len());
        for m in mats {
            let rows = m.as_array().ok_or_else(|| IlcError::Format("a matrix must be an array of rows".into()))?;
            let mut pm = Vec::with_capacity(rows.len());
            for r in rows {
                let entries = r.as_array().ok_or_else(|| IlcError::Format("a row must be an array".into()))?;
                let mut row = Vec::with_capacity(entries.len());
                for e in entries {
                    let p = match e {
                        Value::String(s) => parse_in(s, &ring)?,
                        Value::Number(x) => parse_in(&x.to_string(), &ring)?,
                        _ => return Err(IlcError::Format("entries must be strings or integers".into())),
                    };
                    row.push(p);
                }
                pm.push(row);
            }
            matrices.push(pm);
        }
        let e = ILCData::draft(basis, matrices)?;
        if e.rank != rank {
            return Err(IlcError::Shape(format!("declared rank {rank}, matrices have rank {}", e.rank)));
        }
        Ok(e)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "matrices": self.matrices.iter().map(|m| {
                m.iter().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrices(&self) -> &[PolyMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &PolyMatrix {
        &self.matrices[i]
    }

    pub fn basis(&self) -> &SaitoBasis {
        &self.basis
    }

    pub fn state(&self) -> IlcState {
        self.state
    }

    pub fn is_checked(&self) -> bool {
        self.state == IlcState::Checked
    }

    /// Promotes a draft after a successful integrability check.
    pub fn check(mut self, sf: &StructureFunctions) -> Result<Self, IlcError> {
        if !check_integrability(&self, sf) {
            return Err(IlcError::NotIntegrable);
        }
        self.state = IlcState::Checked;
        Ok(self)
    }

    /// When the connection is `O(mD)` on its standard section, returns `m`.
    pub fn line_bundle_degree(&self) -> Option<i64> {
        if self.rank != 1 {
            return None;
        }
        let alphas = self.basis.alphas();
        let i = alphas.iter().position(|a| !a.is_zero())?;
        let q = self.matrices[i][0][0].div_exact(&alphas[i])?;
        if !q.is_constant() || !q.constant_term().is_integer() {
            return None;
        }
        let m = -i64::try_from(q.constant_term().to_integer()).ok()?;
        let ok = self.matrices.iter().zip(&alphas).all(|(a, al)| a[0][0] == al.scale(&crate::cas::qi(-m)));
        ok.then_some(m)
    }
}

fn apply_entrywise(d: &crate::divisor::LogDerivation, a: &PolyMatrix) -> PolyMatrix {
    a.iter().map(|r| r.iter().map(|p| d.apply(p)).collect()).collect()
}

/// `δ_i(A_j) − δ_j(A_i) + [A_i, A_j] = Σ_k c_ij^k A_k` for all `i < j`.
pub fn check_integrability(e: &ILCData, sf: &StructureFunctions) -> bool {
    let ring = ring_of(&e.basis);
    let rows = e.basis.rows();
    let n = rows.len();
    if sf.n() != n {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (ai, aj) = (&e.matrices[i], &e.matrices[j]);
            let comm = polymat::sub(&polymat::mul(&ring, ai, aj), &polymat::mul(&ring, aj, ai));
            let lhs = polymat::add(
                &polymat::sub(&apply_entrywise(&rows[i], aj), &apply_entrywise(&rows[j], ai)),
                &comm,
            );
            let mut rhs = polymat::zeros(&ring, e.rank, e.rank);
            for k in 0..n {
                rhs = polymat::add(&rhs, &polymat::scale(&e.matrices[k], sf.get(i, j, k)));
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// `E(mD)`: matrices `A_i − m α_i I` on the sections `f^{-m} ⊗ e_j`.
pub fn twist(e: &ILCData, m: i64) -> Result<ILCData, IlcError> {
    if !e.is_checked() {
        return Err(IlcError::NotChecked);
    }
    let ring = ring_of(&e.basis);
    let id = polymat::identity(&ring, e.rank);
    let matrices = e
        .matrices
        .iter()
        .zip(e.basis.alphas())
        .map(|(a, al)| polymat::sub(a, &polymat::scale(&id, &al.scale(&crate::cas::qi(m)))))
        .collect();
    Ok(ILCData { matrices, ..e.clone() })
}

/// `E*`: matrices `−A_iᵀ` on the dual basis.
pub fn dual(e: &ILCData) -> Result<ILCData, IlcError> {
    if !e.is_checked() {
        return Err(IlcError::NotChecked);
    }
    let ring = ring_of(&e.basis);
    let minus = Poly::from_int(&ring, -1);
    let matrices = e.matrices.iter().map(|a| polymat::scale(&polymat::transpose(a), &minus)).collect();
    Ok(ILCData { matrices, ..e.clone() })
}

/// `b(s − k)`, the Bernstein–Sato polynomial of `O(kD)` when `b` is that of `O`.
pub fn b_twist(b: &BFunction, k: i64) -> BFunction {
    b.shifted(k)
}

/// Bernstein–Sato polynomial of a connection, from the b-function of `f`.
///
/// Only twists of the trivial connection are handled. For a cyclic
/// connection the polynomial of a generator would be needed, which requires
/// annihilators in a module over `D[s]`; that case is reported as unsupported.
pub fn bfunction_of_connection(e: &ILCData, b_f: &BFunction) -> Result<BFunction, IlcError> {
    match e.line_bundle_degree() {
        Some(m) => Ok(b_twist(b_f, m)),
        None => Err(IlcError::Unsupported("b-function of a connection that is not a twist of O".into())),
    }
}
