use rotdom::family::{FamilyParams, ParamSpec};
use rotdom::num::{cabs, cdist, cint, cpowi, cx, pow2_neg};
use rotdom::series::*;
use rotdom::Error;
use rug::Complex;

fn p411() -> FamilyParams {
    ParamSpec::new(4, 1, 1).build().unwrap()
}

#[test]
fn compose_example() {
    let p = 128;
    let d = 5;
    let l = cx(p, 0.6, 0.8);
    let li = Complex::with_val(p, l.recip_ref());
    let x = BivariateSeries::var(d, p, 0);
    let y = BivariateSeries::var(d, p, 1);
    let f = x.mul(&y);
    let g = [x.scale(&l), y.scale(&li).add(&x.mul(&x))];
    let r = f.compose(&g).unwrap();
    assert!(cdist(r.get(1, 1), &cint(p, 1)) < 1e-35);
    assert!(cdist(r.get(3, 0), &l) < 1e-35);
    for (i, j, c) in r.terms() {
        if (i, j) != (1, 1) && (i, j) != (3, 0) {
            assert!(cabs(c) < 1e-35);
        }
    }
    assert!(f.mul(&BivariateSeries::zero(d, p)).is_zero());
    assert_eq!(f.compose(&identity_pair(d, p)).unwrap(), f);
}

#[test]
fn compose_rejects_constant_term() {
    let p = 64;
    let x = BivariateSeries::var(4, p, 0);
    let bad = [x.add_constant(&cint(p, 1)), x.clone()];
    assert!(matches!(x.compose(&bad), Err(Error::CompositionDomain(_))));
}

#[test]
fn ring_laws() {
    let p = 128;
    let d = 6;
    let a = BivariateSeries::var(d, p, 0)
        .add_constant(&cx(p, 0.5, 0.1))
        .mul(&BivariateSeries::var(d, p, 1));
    let b = BivariateSeries::var(d, p, 1)
        .pow(2)
        .add(&BivariateSeries::var(d, p, 0));
    let c = BivariateSeries::var(d, p, 0)
        .pow(3)
        .add_constant(&cint(p, 2));
    let l = a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c)));
    assert!(l.max_abs() < 1e-30);
    let dist = a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c)));
    assert!(dist.max_abs() < 1e-30);
    let g1 = [
        BivariateSeries::var(d, p, 0).add(&BivariateSeries::var(d, p, 1).pow(2)),
        BivariateSeries::var(d, p, 1),
    ];
    let g2 = [
        BivariateSeries::var(d, p, 0).scale(&cint(p, 2)),
        BivariateSeries::var(d, p, 1).add(&BivariateSeries::var(d, p, 0).pow(2)),
    ];
    let lhs = c.compose(&compose_pair(&g1, &g2).unwrap()).unwrap();
    let rhs = c.compose(&g1).unwrap().compose(&g2).unwrap();
    assert!(lhs.sub(&rhs).max_abs() < 1e-30);
}

#[test]
fn classify_examples() {
    let r11 = ResonanceClass::lattice(1, 1).unwrap();
    assert_eq!(classify_monomial(2, 0, &r11, 1), MonomialClass::S);
    assert_eq!(
        classify_monomial(2, 1, &r11, 1),
        MonomialClass::ResonantLine
    );
    let r12 = ResonanceClass::lattice(1, 2).unwrap();
    for m in 1..6 {
        assert_eq!(
            classify_monomial(m + 1, 2 * m, &r12, 1),
            MonomialClass::ResonantLine
        );
    }
    assert_eq!(classify_monomial(0, 3, &r12, 1), MonomialClass::Outside);
    assert_eq!(classify_monomial(1, 3, &r12, 1), MonomialClass::HatOnly);
    assert_eq!(classify_monomial(0, 2, &r11, 2), MonomialClass::S);
}

#[test]
fn closure_properties() {
    for (a, b) in [(1, 1), (1, 2), (2, 3)] {
        let rc = ResonanceClass::lattice(a, b).unwrap();
        for k in 1..=2 {
            let r = closure_property_check(&rc, k, 40, 0).unwrap();
            assert!(r.products_checked > 0);
        }
    }
}

#[test]
fn chart_factors_compose_in_class() {
    let p = p411();
    let rc = ResonanceClass::lattice(1, 2).unwrap();
    let tol = pow2_neg(256, 64);
    let f0 = chart_step_series(&p, 0, 8).unwrap();
    let f1 = chart_step_series(&p, 1, 8).unwrap();
    let nd = Complex::with_val(256, -p.delta.clone().recip());
    assert!(cdist(f0[0].get(1, 0), &nd) < 1e-60);
    let md = -p.delta.clone();
    assert!(cdist(f0[1].get(0, 1), &md) < 1e-60);
    assert_eq!(remainder_in_class(&f0, &rc, &tol), None);
    assert!(remainder_in_class(&f1, &rc, &tol).is_some());
    let c = compose_pair(&f0, &f0).unwrap();
    assert_eq!(remainder_in_class(&c, &rc, &tol), None);
    let h = return_map_at_q(&p, 8).unwrap().h;
    assert_eq!(remainder_in_class(&h, &rc, &tol), None);
    let c = compose_pair(&h, &f0).unwrap();
    assert_eq!(remainder_in_class(&c, &rc, &tol), None);
}

#[test]
fn hand_solved_linearization() {
    let p = 256;
    let d = 6;
    let l = cx(p, 0.6, 0.8);
    let li = Complex::with_val(p, l.recip_ref());
    let x = BivariateSeries::var(d, p, 0);
    let h = [
        x.scale(&l),
        BivariateSeries::var(d, p, 1).scale(&li).add(&x.mul(&x)),
    ];
    let r = linearize_diagonal(&h, &l, &li, d, None, &pow2_neg(p, 64)).unwrap();
    assert!(r.obstruction.is_none());
    let l2 = cpowi(&l, 2);
    let beta = Complex::with_val(p, Complex::with_val(p, &li - &l2).recip_ref());
    assert!(cdist(r.phi[1].get(2, 0), &beta) < 1e-60);
    assert!(cdist(r.phi[0].get(1, 0), &cint(p, 1)) < 1e-70);
    for (i, j, c) in r.phi[0].terms() {
        if i + j >= 2 {
            assert!(cabs(c) < 1e-60);
        }
    }
    assert!(verify_conjugacy(&h, &r.phi, &l, &li, d).unwrap() < 1e-60);
}

#[test]
fn identity_when_linear() {
    let p = 128;
    let l = cx(p, 0.6, 0.8);
    let li = Complex::with_val(p, l.recip_ref());
    let h = [
        BivariateSeries::var(5, p, 0).scale(&l),
        BivariateSeries::var(5, p, 1).scale(&li),
    ];
    let r = linearize_diagonal(&h, &l, &li, 5, None, &pow2_neg(p, 32)).unwrap();
    assert_eq!(r.phi, identity_pair(5, p));
    assert!(verify_conjugacy(&h, &r.phi, &l, &li, 5).unwrap() == 0);
}

#[test]
fn demo_resonant_obstruction() {
    let p = p411();
    let h = demo_resonant_map(&p.lambda, 6);
    let li = Complex::with_val(256, p.lambda.recip_ref());
    let rc = ResonanceClass::new(1, 1, &p.lambda, &li, 1e-30).unwrap();
    let r = linearize_diagonal(&h, &p.lambda, &li, 6, Some(&rc), &pow2_neg(256, 64)).unwrap();
    let o = r.obstruction.unwrap();
    assert_eq!((o.coordinate, o.monomial), (1, (2, 1)));
}

#[test]
fn perturbed_phi_is_detected() {
    let p = p411();
    let q = return_map_at_q(&p, 6).unwrap();
    let rc = ResonanceClass::new(1, 2, &q.eta.0, &q.eta.1, 1e-30).unwrap();
    let r = linearize_diagonal(&q.h, &q.eta.0, &q.eta.1, 6, Some(&rc), &pow2_neg(256, 64)).unwrap();
    let mut phi = r.phi.clone();
    let bump = cx(256, 1e-6, 0.0);
    let c = Complex::with_val(256, phi[0].get(2, 0) + &bump);
    phi[0].set(2, 0, c);
    let div = cabs(&Complex::with_val(256, cpowi(&q.eta.0, 2) - &q.eta.0)).to_f64();
    let res = verify_conjugacy(&q.h, &phi, &q.eta.0, &q.eta.1, 6).unwrap();
    assert!(res >= 1e-6 * div * 0.999);
}

#[test]
fn q_pipeline_4_1_1() {
    let p = p411();
    let q = return_map_at_q(&p, DEFAULT_DEGREE).unwrap();
    eprintln!(
        "linear {:e} res1 {:e} res2 {:e}",
        q.linear_residual.to_f64(),
        q.resonant_max.to_f64(),
        q.resonant_second_max.to_f64()
    );
    assert!(q.linear_residual < 1e-25);
    assert!(q.resonant_max < pow2_neg(256, 64));
    let rc = ResonanceClass::new(1, 2, &q.eta.0, &q.eta.1, 1e-30).unwrap();
    let r = linearize_diagonal(
        &q.h,
        &q.eta.0,
        &q.eta.1,
        DEFAULT_DEGREE,
        Some(&rc),
        &pow2_neg(256, 64),
    )
    .unwrap();
    eprintln!(
        "obstruction {:?} forcing {:e} min_div {:e} mu {:?}",
        r.obstruction, r.max_resonant_forcing, r.min_divisor, r.mu_hat
    );
    assert!(r.obstruction.is_none());
    assert!(r.min_divisor > 0.0);
    let res = verify_conjugacy(&q.h, &r.phi, &q.eta.0, &q.eta.1, DEFAULT_DEGREE).unwrap();
    eprintln!("conjugacy {:e}", res.to_f64());
    assert!(res < 1e-20);
}

#[test]
fn mismatched_c_obstruction() {
    let p = p411();
    let bad = p.with_scaled_c(&cx(256, 1.0 + 1e-3, 0.0));
    assert!(return_map_at_q(&bad, 8).is_err());
    let h = return_map_at_q_raw(&bad, 8).unwrap();
    let e1 = h[0].get(1, 0).clone();
    let e2 = h[1].get(0, 1).clone();
    let rc = ResonanceClass::new(1, 2, &e1, &e2, 1e-2).unwrap();
    let r = linearize_diagonal(&h, &e1, &e2, 8, Some(&rc), &pow2_neg(256, 64)).unwrap();
    let o = r.obstruction.unwrap();
    eprintln!("{o:?}");
    assert_eq!((o.coordinate, o.monomial), (1, (2, 2)));
}

#[test]
fn sigma0_pipeline() {
    for spec in [ParamSpec::new(4, 1, 1), ParamSpec::new(5, 1, 1)] {
        let p = spec.build().unwrap();
        let w = cx(256, 0.31, 0.77);
        let s = return_map_at_sigma0(&p, &w, 8).unwrap();
        assert!(cdist(s.h[0].get(1, 0), &p.lambda) < 1e-60);
        assert!(cabs(s.h[0].get(1, 1)) < 1e-60);
        let r = linearize_diagonal(&s.h, &s.eta.0, &s.eta.1, 8, None, &pow2_neg(256, 64)).unwrap();
        assert!(r.obstruction.is_none(), "{:?}", r.obstruction);
        assert!(r.warnings.is_empty());
        assert!(r.min_divisor > 0.0);
        let res = verify_conjugacy(&s.h, &r.phi, &s.eta.0, &s.eta.1, 8).unwrap();
        assert!(res < 1e-20, "{}", res.to_f64());
    }
}

#[test]
fn series_json_keys() {
    let p = 64;
    let mut s = BivariateSeries::zero(3, p);
    s.set(2, 1, cx(p, 1.5, -2.0));
    let js = s.to_json();
    assert_eq!(js.len(), 1);
    assert!(js.contains_key("2,1"));
}
