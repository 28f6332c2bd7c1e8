use std::collections::HashMap;

use logdiv::cas::linalg::{rank_sparse, SparseRow};
use logdiv::cas::{parse_in, Poly};
use logdiv::divisor::{is_quasi_homogeneous, log_derivations, saito_basis, DivisorInput, SaitoBasis};
use logdiv::ilc::{twist, ILCData};
use logdiv::spencer::*;
use logdiv::weyl::{act_on_fs_raw, FsElement, Threshold, WeylOp};

const QUARTIC: &str = "x1*x2*(x1+x2)*(x1+x2*x3)";

fn div(s: &str) -> DivisorInput {
    DivisorInput::parse(s, None).unwrap()
}

fn graded(s: &str, m: i64, w: i64, n: u32) -> TruncatedComplex {
    build_spencer(&SpencerSpec::graded(&div(s), m, Pair::Theta, w, n).unwrap()).unwrap()
}

fn generic_basis(d: &DivisorInput) -> SaitoBasis {
    saito_basis(d, &log_derivations(d).unwrap()).unwrap()
}

#[test]
fn smooth_divisor_has_koszul_shape() {
    let tc = graded("x", 0, 4, 4);
    let ring = tc.boundary().ring().clone();
    let terms = tc.boundary().of(&[0], 0);
    assert_eq!(terms.len(), 1);
    let zeta = &(&WeylOp::x(&ring, 0) * &WeylOp::d(&ring, 0)) - &WeylOp::s(&ring);
    assert_eq!(terms[0].op, zeta);
    assert!(terms[0].wedge.is_empty());
    for c in tc.components() {
        assert_eq!(c.bases.len(), 2);
    }
    let h = check_exactness(&tc, -1..=0).unwrap();
    assert!(h.is_exact(), "{:?}", h.nonzero());
}

#[test]
fn normal_crossing_is_exact() {
    let tc = graded("x*y", 0, 6, 3);
    assert!(tc.components().iter().all(|c| c.bases.len() == 3));
    let h = check_exactness(&tc, -2..=0).unwrap();
    assert!(h.is_exact(), "{:?}", h.nonzero());
    assert!(h.rows.iter().any(|r| r.ranks[2] > 0));
}

#[test]
fn cusp_twisted_by_divisor() {
    let d = div("x^2 - y^3");
    let triv = SpencerSpec::graded(&d, 0, Pair::Theta, 6, 3).unwrap();
    let one = SpencerSpec::graded(&d, 1, Pair::Theta, 6, 3).unwrap();
    let bt = Boundary::new(&triv).unwrap();
    let b1 = Boundary::new(&one).unwrap();
    let ring = bt.ring().clone();
    for (i, row) in one.basis().rows().iter().enumerate() {
        let alpha = WeylOp::from_poly(&ring, row.alpha());
        assert_eq!(b1.of(&[i], 0)[0].op, &bt.of(&[i], 0)[0].op + &alpha);
    }
    // the Euler field 3x∂x + 2y∂y has α = 6, the other field α = 0
    let six = parse_in("6", d.ring()).unwrap();
    assert_eq!(one.basis().rows().iter().filter(|r| r.alpha() == &six).count(), 1);
    let tc = build_spencer(&one).unwrap();
    let h = check_exactness(&tc, -2..=0).unwrap();
    assert!(h.is_exact(), "{:?}", h.nonzero());
}

#[test]
fn both_pairs_give_the_same_matrices() {
    let d = div("x^2 - y^3");
    let a = build_spencer(&SpencerSpec::graded(&d, 1, Pair::Theta, 4, 3).unwrap()).unwrap();
    let b = build_spencer(&SpencerSpec::graded(&d, 1, Pair::LogDer, 4, 3).unwrap()).unwrap();
    for (ca, cb) in a.components().iter().zip(b.components()) {
        assert_eq!(ca.bases, cb.bases);
        assert_eq!(ca.differentials, cb.differentials);
        assert_eq!(ca.augmentation, cb.augmentation);
    }
}

#[test]
fn raising_the_weight_bound_keeps_components() {
    let small = check_exactness(&graded("x*y*(x+y)", 0, 3, 3), -2..=0).unwrap();
    let large = check_exactness(&graded("x*y*(x+y)", 0, 5, 3), -2..=0).unwrap();
    for r in &small.rows {
        assert_eq!(large.rows.iter().find(|x| x.weight == r.weight), Some(r));
    }
}

#[test]
fn augmentation_matches_action_on_f_s() {
    let d = div("x^2 - y^3");
    for m in [0i64, 1] {
        let tc = graded("x^2 - y^3", m, 4, 3);
        let ring = tc.boundary().ring().clone();
        let h = check_exactness(&tc, 0..=0).unwrap();
        let start = if m == 0 {
            FsElement::f_s(&ring)
        } else {
            FsElement { numerator: Poly::one(ring.fs_ring()), pole: 1 }
        };
        let f_fs = logdiv::weyl::lift_fs(&ring, d.f());
        for (c, row) in tc.components().iter().zip(&h.rows) {
            let mut index: HashMap<logdiv::cas::Monomial, usize> = HashMap::new();
            let rows: Vec<SparseRow> = c.bases[0]
                .iter()
                .map(|g| {
                    let op = WeylOp::monomial(&ring, g.monomial.clone(), logdiv::cas::qi(1));
                    let e = act_on_fs_raw(&op, &start, d.f());
                    let num = &e.numerator * &f_fs.pow(4 - e.pole);
                    let mut r: SparseRow = num
                        .terms()
                        .map(|(mm, x)| {
                            let k = index.len();
                            (*index.entry(mm.clone()).or_insert(k), x.clone())
                        })
                        .collect();
                    r.sort_by_key(|t| t.0);
                    r
                })
                .collect();
            assert_eq!(rank_sparse(&rows), row.ranks[0], "weight {:?}", c.weight);
        }
    }
}

#[test]
fn exactness_refuses_filtration_mode() {
    let d = div(QUARTIC);
    let b = generic_basis(&d);
    let spec = SpencerSpec::new(
        d,
        b.clone(),
        ILCData::trivial(&b),
        Pair::Theta,
        Truncation::Filtration { max_order: 2, max_x_degree: 2 },
    )
    .unwrap();
    let tc = build_spencer(&spec).unwrap();
    assert_eq!(check_exactness(&tc, -3..=0), Err(SpencerError::NotGraded));
    assert!(matches!(specialize_and_check(&tc, 1, Threshold::From(1)), Err(SpencerError::NotGraded)));
}

#[test]
fn graded_mode_needs_weighted_homogeneity() {
    let d = div(QUARTIC);
    assert_eq!(is_quasi_homogeneous(&d), None);
    assert!(matches!(SpencerSpec::graded(&d, 0, Pair::Theta, 5, 2), Err(SpencerError::NotQuasiHomogeneous)));
}

#[test]
fn unchecked_connection_is_rejected() {
    let d = div("x*y");
    let b = generic_basis(&d);
    let z = parse_in("0", d.ring()).unwrap();
    let e = ILCData::draft(&b, vec![vec![vec![z.clone()]], vec![vec![z]]]).unwrap();
    let t = Truncation::Graded { max_weight: 2, max_order: 2 };
    assert!(matches!(SpencerSpec::new(d, b, e, Pair::Theta, t), Err(SpencerError::Ilc(_))));
}

#[test]
fn graded_koszul_examples() {
    for s in ["x*y", "x", QUARTIC] {
        let d = div(s);
        let b = generic_basis(&d);
        let t = Truncation::Filtration { max_order: 1, max_x_degree: 1 };
        let spec = SpencerSpec::new(d, b.clone(), ILCData::trivial(&b), Pair::Theta, t).unwrap();
        assert!(graded_koszul_check(&spec).unwrap(), "{s}");
    }
    let d = div(QUARTIC);
    let b = generic_basis(&d);
    let t = Truncation::Filtration { max_order: 1, max_x_degree: 1 };
    let spec = SpencerSpec::new(d, b.clone(), ILCData::trivial(&b), Pair::LogDer, t).unwrap();
    assert!(!graded_koszul_check(&spec).unwrap());
}

#[test]
fn specialization_above_threshold() {
    for s in ["x", "x*y"] {
        let tc = graded(s, 0, 6, 3);
        let r = specialize_and_check(&tc, 1, Threshold::From(1)).unwrap();
        assert!(r.promised);
        assert!(r.all_equal(), "{s}: {:?}", r.rows);
        assert!(r.segment_exact(), "{s}");
        assert!(r.violations().is_empty());
    }
}

#[test]
fn specialization_below_threshold_is_only_reported() {
    let tc = graded("x*y", 0, 6, 3);
    let r = specialize_and_check(&tc, -1, Threshold::From(1)).unwrap();
    assert!(!r.promised);
    assert!(r.violations().is_empty());
    // at s = 1 the operator ∂ kills f^{1} = x in one variable but is not a
    // multiple of x∂ − 1
    let tc = graded("x", 0, 4, 3);
    let r = specialize_and_check(&tc, -1, Threshold::From(1)).unwrap();
    assert!(!r.all_equal());
}

#[test]
fn twisted_specialization_thresholds_shift() {
    let d = div("x");
    let spec = SpencerSpec::graded(&d, 1, Pair::Theta, 4, 3).unwrap();
    let tc = build_spencer(&spec).unwrap();
    // O(D) on f = x has b-function s, so k0 = 0
    let r = specialize_and_check(&tc, 0, Threshold::From(0)).unwrap();
    assert!(r.all_equal());
    let e = twist(spec.connection(), -1).unwrap();
    assert_eq!(e, ILCData::trivial(spec.basis()));
}

#[test]
fn quartic_filtration_evidence() {
    let d = div(QUARTIC);
    let b = generic_basis(&d);
    let spec = SpencerSpec::new(
        d,
        b.clone(),
        ILCData::trivial(&b),
        Pair::Theta,
        Truncation::Filtration { max_order: 2, max_x_degree: 2 },
    )
    .unwrap();
    let tc = build_spencer(&spec).unwrap();
    let ev = filtration_evidence(&tc).unwrap();
    assert!(ev.exact_below_zero(), "{:?}", ev.rows);
    assert!(ev.label().starts_with("evidence"));
}

#[test]
fn text_export_header() {
    let tc = graded("x*y", 0, 1, 2);
    let text = tc.export_text();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("logdiv-spencer 1"));
    assert!(text.contains("mode graded W 1 N 2"));
    assert!(text.contains("weights 1 1"));
    assert!(text.contains("component -1"));
    assert!(text.contains("map -2 "));
}
