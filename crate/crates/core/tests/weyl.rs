use logdiv::cas::{parse_in, qi, qr, MonomialOrder, Poly, Ring, UPoly};
use logdiv::divisor::{log_derivations, saito_basis, DivisorInput, SymbolRing};
use logdiv::weyl::*;

fn one_var() -> (std::sync::Arc<WeylRing>, Poly) {
    let base = Ring::new(&["x"]);
    let f = parse_in("x", &base).unwrap();
    (WeylRing::new(&base), f)
}

#[test]
fn normal_ordering() {
    let (r, _) = one_var();
    let x = WeylOp::x(&r, 0);
    let d = WeylOp::d(&r, 0);
    let s = WeylOp::s(&r);
    assert_eq!(&d * &x, &(&x * &d) + &WeylOp::one(&r));
    assert_eq!(&s * &x, &x * &s);
    assert_eq!(&d.pow(2) * &x, &(&x * &d.pow(2)) + &d.scale(&qi(2)));
    assert_eq!(&d.pow(3) * &x.pow(2), {
        // ∂³x² = x²∂³ + 6x∂² + 6∂
        let a = &x.pow(2) * &d.pow(3);
        let b = (&x * &d.pow(2)).scale(&qi(6));
        let c = d.scale(&qi(6));
        &(&a + &b) + &c
    });
}

#[test]
fn action_on_f_s() {
    let (r, f) = one_var();
    let d = WeylOp::d(&r, 0);
    let e = act_on_fs(&d, &FsElement::f_s(&r), &f);
    let s = Poly::var(r.fs_ring(), 1);
    assert_eq!(e, FsElement { numerator: s.clone(), pole: 1 });

    let euler = &(&WeylOp::x(&r, 0) * &d) - &WeylOp::s(&r);
    assert!(act_on_fs(&euler, &FsElement::f_s(&r), &f).is_zero());

    let d2 = DivisorInput::parse("x^2 - y^3", None).unwrap();
    let r2 = WeylRing::new(d2.ring());
    let ders = log_derivations(&d2).unwrap();
    let basis = saito_basis(&d2, &ders).unwrap();
    for row in basis.rows() {
        let z = WeylOp::zeta(&r2, row);
        assert!(act_on_fs(&z, &FsElement::f_s(&r2), d2.f()).is_zero(), "{z}");
    }
}

#[test]
fn left_groebner_bases() {
    let (r, _) = one_var();
    let x = WeylOp::x(&r, 0);
    let d = WeylOp::d(&r, 0);
    let s = WeylOp::s(&r);
    let ord = MonomialOrder::DegRevLex;
    assert_eq!(weyl_groebner(&[x.clone(), d.clone()], &ord).unwrap(), vec![WeylOp::one(&r)]);

    let gb = weyl_groebner(&[&(&x * &d) - &s, x.clone()], &ord).unwrap();
    let target = &s + &WeylOp::one(&r);
    assert!(weyl_normal_form(&target, &gb, &ord).is_zero());

    assert_eq!(weyl_groebner(&[d.clone()], &ord).unwrap(), vec![d]);
}

fn roots(b: &BFunction) -> Vec<(logdiv::cas::Q, u32)> {
    b.roots().to_vec()
}

#[test]
fn bernstein_sato_smooth() {
    let b = b_function_of("x").unwrap();
    assert_eq!(b.poly(), &UPoly::from_ints(&[1, 1]));
    assert!(b.exact);
    assert!(b.certificate.is_some());
    assert_eq!(lct_threshold(&b), Threshold::From(1));
}

#[test]
fn bernstein_sato_normal_crossing() {
    let b = b_function_of("x*y").unwrap();
    assert_eq!(roots(&b), vec![(qi(-1), 2)]);
    assert!(b.exact);
    assert_eq!(lct_threshold(&b), Threshold::From(1));
}

#[test]
fn bernstein_sato_cusp() {
    let b = b_function_of("x^2 - y^3").unwrap();
    assert_eq!(roots(&b), vec![(qr(-7, 6), 1), (qi(-1), 1), (qr(-5, 6), 1)]);
    assert!(b.splits());
    let d = DivisorInput::parse("x^2 - y^3", None).unwrap();
    assert!(verify_functional_equation(d.f(), b.poly(), b.certificate.as_ref().unwrap()));
    assert_eq!(lct_threshold(&b), Threshold::From(1));
}

#[test]
fn functional_equation_rejects_wrong_b() {
    let (r, f) = one_var();
    let d = WeylOp::d(&r, 0);
    assert!(verify_functional_equation(&f, &UPoly::from_ints(&[1, 1]), &d));
    assert!(!verify_functional_equation(&f, &UPoly::from_ints(&[2, 1]), &d));
}

#[test]
fn thresholds() {
    let b = BFunction::from_roots(&[(qi(-2), 1), (qr(-3, 2), 1)], true);
    assert_eq!(lct_threshold(&b), Threshold::From(2));
    let b = BFunction::from_roots(&[(qr(-1, 2), 1)], true);
    assert_eq!(lct_threshold(&b), Threshold::Unbounded);
    assert!(b.shifted(1).roots()[0].0 == qr(1, 2));
}

#[test]
fn symbol_of_zeta_is_theta_generator() {
    let d = DivisorInput::parse("x*y", None).unwrap();
    let ders = log_derivations(&d).unwrap();
    let basis = saito_basis(&d, &ders).unwrap();
    let r = WeylRing::new(d.ring());
    let sr = SymbolRing::new(d.ring());
    let th = logdiv::divisor::theta_generators(&d, &basis);
    for (row, t) in basis.rows().iter().zip(th) {
        assert_eq!(WeylOp::zeta(&r, row).sigma_t(&sr), t);
    }
}

#[test]
fn rejects_too_many_variables() {
    let d = DivisorInput::parse("w*x*y*z", None).unwrap();
    let ders = log_derivations(&d).unwrap();
    let basis = saito_basis(&d, &ders).unwrap();
    assert!(matches!(bfunction_via_theta(&d, &basis), Err(WeylError::TooManyVariables { n: 4, max: 3 })));
}
