use logdiv::cas::{ideal_contains, parse_in, Poly};
use logdiv::divisor::*;

fn div(s: &str) -> DivisorInput {
    DivisorInput::parse(s, None).unwrap()
}

fn p(d: &DivisorInput, s: &str) -> Poly {
    parse_in(s, d.ring()).unwrap()
}

const QUARTIC: &str = "x1*x2*(x1+x2)*(x1+x2*x3)";

#[test]
fn rejects_bad_inputs() {
    assert!(matches!(DivisorInput::parse("x^2*y", None), Err(DivisorError::NotReduced(_))));
    assert!(matches!(DivisorInput::parse("x + 1", None), Err(DivisorError::NotThroughOrigin(_))));
    assert!(matches!(DivisorInput::parse("3", None), Err(DivisorError::Constant)));
}

#[test]
fn jacobian_ideal_examples() {
    let d = div("x*y");
    assert_eq!(jacobian_ideal(&d), vec![p(&d, "x*y"), p(&d, "y"), p(&d, "x")]);
    let d = div("x^2 - y^3");
    assert_eq!(jacobian_ideal(&d), vec![p(&d, "x^2-y^3"), p(&d, "2*x"), p(&d, "-3*y^2")]);
    let d = div(QUARTIC);
    let j = jacobian_ideal(&d);
    assert_eq!(j.len(), 4);
    for i in 0..3 {
        assert_eq!(j[i + 1], d.f().derivative(i));
    }
}

#[test]
fn log_derivations_normal_crossing() {
    let d = div("x*y");
    let ders = log_derivations(&d).unwrap();
    let want_x = LogDerivation::new(d.f(), vec![p(&d, "x"), p(&d, "0")], p(&d, "1")).unwrap();
    let want_y = LogDerivation::new(d.f(), vec![p(&d, "0"), p(&d, "y")], p(&d, "1")).unwrap();
    assert!(ders.contains(&want_x));
    assert!(ders.contains(&want_y));
}

#[test]
fn log_derivations_smooth_and_cusp() {
    let d = div("x");
    let ders = log_derivations(&d).unwrap();
    assert_eq!(ders, vec![LogDerivation::new(d.f(), vec![p(&d, "x")], p(&d, "1")).unwrap()]);

    let d = div("x^2 - y^3");
    let ders = log_derivations(&d).unwrap();
    let euler = LogDerivation::new(d.f(), vec![p(&d, "3*x"), p(&d, "2*y")], p(&d, "6")).unwrap();
    assert!(ders.contains(&euler));
    // 3x * 2x + 2y * (-3y^2) = 6 (x^2 - y^3)
    assert_eq!(euler.apply(d.f()), d.f().scale(&logdiv::cas::qi(6)));
    for g in &ders {
        assert_eq!(g.apply(d.f()), g.alpha() * d.f());
    }
}

#[test]
fn saito_bases() {
    let d = div("x*y");
    let b = saito_basis(&d, &log_derivations(&d).unwrap()).unwrap();
    assert_eq!(b.unit(), &logdiv::cas::qi(1));
    assert!(b.verify(d.f()));

    let d = div("x^2 - y^3");
    let b = saito_basis(&d, &log_derivations(&d).unwrap()).unwrap();
    assert!(b.verify(d.f()));

    let d = div(QUARTIC);
    let b = saito_basis(&d, &log_derivations(&d).unwrap()).unwrap();
    assert!(b.verify(d.f()));
}

#[test]
fn euler_homogeneity() {
    assert!(is_euler_homogeneous(&div("x*y")).unwrap());
    assert!(is_euler_homogeneous(&div("x^2 - y^3")).unwrap());
    assert!(is_euler_homogeneous(&div("x + y^2")).unwrap());
}

#[test]
fn quasi_homogeneity() {
    assert_eq!(is_quasi_homogeneous(&div("x^2 - y^3")), Some(vec![3, 2]));
    assert_eq!(is_quasi_homogeneous(&div("x*y")), Some(vec![1, 1]));
    assert_eq!(is_quasi_homogeneous(&div("x^5 + y^5 + x^3*y^3")), None);
    assert_eq!(is_quasi_homogeneous(&div(QUARTIC)), None);
}

#[test]
fn theta_generators_examples() {
    let d = div("x*y");
    let b = saito_basis(&d, &log_derivations(&d).unwrap()).unwrap();
    let th = theta_generators(&d, &b);
    let sr = SymbolRing::new(d.ring());
    let q = |s: &str| parse_in(s, sr.ring()).unwrap();
    let mut got: Vec<String> = th.iter().map(|g| g.to_string()).collect();
    got.sort();
    let mut want = vec![q("x*xi1 - s").to_string(), q("y*xi2 - s").to_string()];
    want.sort();
    assert_eq!(got, want);

    let d = div("x");
    let b = saito_basis(&d, &log_derivations(&d).unwrap()).unwrap();
    let sr = SymbolRing::new(d.ring());
    assert_eq!(theta_generators(&d, &b), vec![parse_in("x*xi1 - s", sr.ring()).unwrap()]);
}

#[test]
fn theta_generators_cusp_rows() {
    let d = div("x^2 - y^3");
    let sr = SymbolRing::new(d.ring());
    let q = |s: &str| parse_in(s, sr.ring()).unwrap();
    let euler = LogDerivation::new(d.f(), vec![p(&d, "3*x"), p(&d, "2*y")], p(&d, "6")).unwrap();
    let other = LogDerivation::new(d.f(), vec![p(&d, "3*y^2"), p(&d, "2*x")], p(&d, "0")).unwrap();
    let b = SaitoBasis::new(d.f(), vec![euler, other]).unwrap();
    let th = theta_generators(&d, &b);
    assert_eq!(th, vec![q("3*x*xi1 + 2*y*xi2 - 6*s"), q("3*y^2*xi1 + 2*x*xi2")]);
}

#[test]
fn rees_kernel_examples() {
    let d = div("x");
    let sr = SymbolRing::new(d.ring());
    let k = rees_kernel(&d).unwrap();
    assert_eq!(k.len(), 1);
    assert_eq!(k[0].primitive(), parse_in("x*xi1 - s", sr.ring()).unwrap().primitive());

    let d = div("x*y");
    let b = saito_basis(&d, &log_derivations(&d).unwrap()).unwrap();
    assert!(is_linear_jacobian_type(&d, &b).unwrap());
    let sr = SymbolRing::new(d.ring());
    assert!(is_fibre_homogeneous(&sr, &rees_kernel(&d).unwrap()));
}

#[test]
fn theta_symbols_lie_in_rees_kernel() {
    for s in ["x*y", "x^2 - y^3", "x*y*(x+y)", QUARTIC] {
        let d = div(s);
        let b = saito_basis(&d, &log_derivations(&d).unwrap()).unwrap();
        let k = rees_kernel(&d).unwrap();
        for t in theta_generators(&d, &b) {
            assert!(ideal_contains(&k, &t).unwrap(), "{s}: {t}");
        }
    }
}

#[test]
fn quartic_is_free_but_not_koszul_nor_ljt() {
    let d = div(QUARTIC);
    let b = saito_basis(&d, &log_derivations(&d).unwrap()).unwrap();
    assert!(!is_koszul_free(&d, &b).unwrap());
    assert!(!is_linear_jacobian_type(&d, &b).unwrap());
    let sr = SymbolRing::new(d.ring());
    assert!(is_fibre_homogeneous(&sr, &rees_kernel(&d).unwrap()));
}

#[test]
fn cusp_and_normal_crossing_classify() {
    for s in ["x*y", "x^2 - y^3"] {
        let r = classify(&div(s)).unwrap();
        assert!(r.free.value);
        assert!(r.quasi_homogeneous.value.is_some());
        assert_eq!(r.koszul_free.as_ref().unwrap().value, true);
        assert_eq!(r.linear_jacobian_type.as_ref().unwrap().value, true);
        assert_eq!(r.differential_linear_type.value, Some(true));
        assert!(matches!(r.differential_linear_type.provenance, Provenance::Implied(_)));
        assert!(!r.global_test_caveat);
    }
    let r = classify(&div("x*y")).unwrap();
    assert_eq!(r.quasi_homogeneous.value, Some(vec![1, 1]));
}

#[test]
fn quartic_classification() {
    let r = classify(&div(QUARTIC)).unwrap();
    assert!(r.free.value);
    assert_eq!(r.koszul_free.as_ref().unwrap().value, false);
    assert_eq!(r.linear_jacobian_type.as_ref().unwrap().value, false);
    assert_eq!(r.theta_koszul_pair.as_ref().unwrap().value, true);
    assert_eq!(r.differential_linear_type.value, None);
    assert!(r.global_test_caveat);
}

#[test]
fn non_free_divisor_is_reported() {
    // four generic lines through the origin in the plane are free; a cone over
    // a smooth plane cubic in three variables is not
    let r = classify(&div("x^3 + y^3 + z^3")).unwrap();
    assert!(!r.free.value);
    assert!(r.koszul_free.is_none());
}
