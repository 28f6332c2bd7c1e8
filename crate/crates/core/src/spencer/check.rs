//! Homology of truncations, specialization at integers and filtration evidence.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use super::{par_map, Generator, Layout, SectionAction, SpencerError, TruncatedComplex, Truncation};
use crate::cas::linalg::{rank_sparse, Echelon, SparseRow};
use crate::cas::Q;
use crate::weyl::Threshold;

/// Extra filtration levels granted to preimages in [`specialize_and_check`].
pub const SPECIALIZATION_MARGIN: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyRow {
    pub weight: i64,
    /// Dimension of the degree `−r` piece, indexed by `r`.
    pub dims: Vec<usize>,
    /// `ranks[0]` is the rank of the augmentation, `ranks[r]` that of `ε^{−r}`.
    pub ranks: Vec<usize>,
    /// Homology dimension per homological degree; degree 0 is measured
    /// against the kernel of the augmentation.
    pub homology: BTreeMap<i64, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub degrees: RangeInclusive<i64>,
    pub rows: Vec<HomologyRow>,
}

impl HomologyTable {
    pub fn is_exact(&self) -> bool {
        self.rows.iter().all(|r| r.homology.values().all(|&h| h == 0))
    }

    pub fn is_exact_below_zero(&self) -> bool {
        self.rows.iter().all(|r| r.homology.iter().all(|(&d, &h)| d == 0 || h == 0))
    }

    pub fn is_exact_at_zero(&self) -> bool {
        self.rows.iter().all(|r| r.homology.get(&0).is_none_or(|&h| h == 0))
    }

    /// `(weight, degree, dimension)` for every nonzero entry.
    pub fn nonzero(&self) -> Vec<(i64, i64, i64)> {
        self.rows
            .iter()
            .flat_map(|r| r.homology.iter().filter(|(_, &h)| h != 0).map(move |(&d, &h)| (r.weight, d, h)))
            .collect()
    }
}

/// Homology of every weight component in the requested degrees (`−n ..= 0`).
pub fn check_exactness(tc: &TruncatedComplex, degrees: RangeInclusive<i64>) -> Result<HomologyTable, SpencerError> {
    if !tc.spec.truncation.is_graded() {
        return Err(SpencerError::NotGraded);
    }
    let rows = par_map(&tc.components, |c| {
        let n = c.bases.len() - 1;
        let dims = c.dims();
        let mut ranks = vec![rank_sparse(&c.augmentation)];
        for r in 1..=n {
            ranks.push(rank_sparse(&c.differentials[r]));
        }
        let next = |r: usize| if r < n { ranks[r + 1] } else { 0 };
        let mut homology = BTreeMap::new();
        for r in 0..=n {
            let deg = -(r as i64);
            if degrees.contains(&deg) {
                homology.insert(deg, dims[r] as i64 - ranks[r] as i64 - next(r) as i64);
            }
        }
        HomologyRow { weight: c.weight.expect("graded component"), dims, ranks, homology }
    });
    Ok(HomologyTable { degrees, rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationRow {
    pub weight: i64,
    /// `dim ker ρ_{E,k}` on operators of order at most `N`.
    pub ker_rho_k: usize,
    /// `dim Φ⁰(ker ρ_{E,s}) ∩ F_N`, preimages taken up to level `N + margin`.
    pub phi_ker_rho_s: usize,
    pub equal: bool,
    /// `dim ker ρ_{E,k} − rank ε_k^{−1}` on the same truncation.
    pub segment_homology: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationReport {
    pub k: i64,
    pub threshold: Threshold,
    /// Equality is only asserted from the threshold on.
    pub promised: bool,
    pub rows: Vec<SpecializationRow>,
}

impl SpecializationReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }

    pub fn segment_exact(&self) -> bool {
        self.rows.iter().all(|r| r.segment_homology == 0)
    }

    /// Components where a promised equality fails.
    pub fn violations(&self) -> Vec<i64> {
        if !self.promised {
            return Vec::new();
        }
        self.rows.iter().filter(|r| !r.equal).map(|r| r.weight).collect()
    }
}

/// Substitutes `s = −k` and compares `Φ⁰(ker ρ_{E,s})` with `ker ρ_{E,k}`
/// in every weight component.
pub fn specialize_and_check(
    tc: &TruncatedComplex,
    k: i64,
    threshold: Threshold,
) -> Result<SpecializationReport, SpencerError> {
    let spec = &tc.spec;
    let Truncation::Graded { max_weight, max_order } = spec.truncation else {
        return Err(SpencerError::NotGraded);
    };
    let n = spec.divisor.n();
    let big = max_order + SPECIALIZATION_MARGIN;
    let value = Q::from_integer((-k).into());
    let action = SectionAction::new(spec, big)?;
    let special = tc.boundary.specialize(&value);
    let layout = Layout { n, rank: spec.e.rank(), weights: spec.weights(), field_weights: spec.field_weights() };
    let ws: Vec<i64> = (-max_weight..=max_weight).collect();
    let rows = par_map(&ws, |&w| -> Result<SpecializationRow, SpencerError> {
        // Powers of s are read as powers of (s − value), which span the same
        // space up to level N + margin. Φ keeps the s-free part, so Φ(ker ρ_s)
        // ∩ F_N consists of the s-free P of level ≤ N whose ρ_s(P) lies in the
        // span of ρ_s over the generators carrying a factor (s − value).
        let gens_s = layout.generators(0, big, true, Some(w), None);
        let mut values = HashMap::new();
        let mut shifted = Echelon::new();
        let mut free = Vec::new();
        for g in &gens_s {
            let rho = action.row_centered(g, big, None, Some(&value), &mut values);
            if g.monomial.exps()[2 * n] > 0 {
                shifted.insert(&rho);
            } else if g.level(n) <= max_order {
                free.push(rho);
            }
        }
        let phi_dim = free.iter().filter(|r| !shifted.insert(r)).count();
        let gens_k: Vec<Generator> = layout.generators(0, big, false, Some(w), None);

        // kernel of ρ_{E,k} on F_N and the specialized first differential
        let small: Vec<Generator> = gens_k.into_iter().filter(|g| g.level(n) <= max_order).collect();
        let mut values_k = HashMap::new();
        let rho_k: Vec<SparseRow> = small.iter().map(|g| action.row(g, max_order, Some(&value), &mut values_k)).collect();
        let ker_dim = small.len() - rank_sparse(&rho_k);
        let small_index: HashMap<&Generator, usize> = small.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let gens_1 = layout.generators(1, max_order, false, Some(w), None);
        let mut eps = Vec::with_capacity(gens_1.len());
        for g in &gens_1 {
            let mut row: SparseRow = Vec::new();
            for (t, c) in special.image(g) {
                let col = *small_index.get(&t).ok_or_else(|| {
                    SpencerError::Inconsistent(format!("specialized differential leaves the truncation at {t:?}"))
                })?;
                row.push((col, c));
            }
            row.sort_by_key(|e| e.0);
            eps.push(row);
        }
        let seg = ker_dim as i64 - rank_sparse(&eps) as i64;
        if phi_dim > ker_dim {
            return Err(SpencerError::Inconsistent(format!(
                "weight {w}: specialized kernel of ρ_s exceeds ker ρ_k ({phi_dim} > {ker_dim})"
            )));
        }
        Ok(SpecializationRow { weight: w, ker_rho_k: ker_dim, phi_ker_rho_s: phi_dim, equal: phi_dim == ker_dim, segment_homology: seg })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(SpecializationReport { k, threshold, promised: threshold.admits(k), rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceRow {
    pub degree: i64,
    pub kernel_dim: usize,
    /// Kernel dimension not reached by images from the enlarged box.
    pub unexplained: usize,
}

/// Not a certificate: the x-degree box is not a subcomplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceReport {
    pub max_order: u32,
    pub max_x_degree: u32,
    pub preimage_x_degree: u32,
    pub rows: Vec<EvidenceRow>,
}

impl EvidenceReport {
    pub fn label(&self) -> &'static str {
        "evidence only: the x-degree box is not closed under the differential"
    }

    pub fn exact_below_zero(&self) -> bool {
        self.rows.iter().all(|r| r.degree == 0 || r.unexplained == 0)
    }

    pub fn exact_at_zero(&self) -> bool {
        self.rows.iter().all(|r| r.degree != 0 || r.unexplained == 0)
    }
}

/// For a filtration truncation: kernels on the box `x-degree ≤ M` against
/// images from the box `x-degree ≤ M + margin`.
pub fn filtration_evidence(tc: &TruncatedComplex) -> Result<EvidenceReport, SpencerError> {
    let Truncation::Filtration { max_order, max_x_degree } = tc.spec.truncation else {
        return Err(SpencerError::NotFiltration);
    };
    let n = tc.spec.divisor.n();
    let c = &tc.components[0];
    let degrees: Vec<usize> = (0..=n).collect();
    let rows = par_map(&degrees, |&r| {
        let is_inner: Vec<bool> = c.targets[r].iter().map(|g| g.x_degree(n) <= max_x_degree).collect();
        let source = if r == 0 { &c.augmentation } else { &c.differentials[r] };
        let restricted: Vec<SparseRow> =
            source.iter().enumerate().filter(|(i, _)| is_inner[*i]).map(|(_, row)| row.clone()).collect();
        let kernel_dim = restricted.len() - rank_sparse(&restricted);
        // images meet the inner box inside the kernel, since ε∘ε = 0 and ρ∘ε = 0
        let reached = if r < n {
            let im = &c.differentials[r + 1];
            let outside: Vec<SparseRow> = im
                .iter()
                .map(|row| row.iter().filter(|(j, _)| !is_inner[*j]).cloned().collect())
                .collect();
            rank_sparse(im) - rank_sparse(&outside)
        } else {
            0
        };
        EvidenceRow { degree: -(r as i64), kernel_dim, unexplained: kernel_dim - reached }
    });
    Ok(EvidenceReport {
        max_order,
        max_x_degree,
        preimage_x_degree: max_x_degree + super::EVIDENCE_MARGIN,
        rows,
    })
}
