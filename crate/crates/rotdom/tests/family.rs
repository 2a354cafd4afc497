use rotdom::family::*;
use rotdom::num::{cabs, cdist, cis, cpowi, cx, pi};
use rug::{Complex, Float};

fn unit(prec: u32, num: u32, den: u32) -> Complex {
    cis(&(pi(prec) * 2u32 * Float::with_val(prec, num) / den))
}

#[test]
fn relation_search_examples() {
    let i = cx(128, 0.0, 1.0);
    assert_eq!(mult_independence_search(&i, &i, 4, 1e-20), Some((1, -1)));
    let l1 = unit(256, 3, 7);
    let l2 = unit(256, 1, 7);
    assert_eq!(mult_independence_search(&l1, &l2, 7, 1e-20), Some((2, 1)));
    let alt = Complex::with_val(256, cpowi(&l1, 1) * cpowi(&l2, -3)) - 1u32;
    assert!(cabs(&alt) < 1e-60);
}

#[test]
fn family_multipliers_are_independent() {
    for (n, m, j) in [(4, 1, 1), (5, 1, 1), (5, 1, 2)] {
        let p = ParamSpec::new(n, m, j).build().unwrap();
        assert!(rank2_criterion(&p));
        let fp = fixed_points(&p).unwrap()[0].clone();
        let md = multipliers_at_fixed(&p, &fp).unwrap();
        assert!(md.unit_modulus);
        assert_eq!(
            mult_independence_search(&md.lambda1, &md.lambda2, 50, 1e-20),
            None,
            "({n},{m},{j})"
        );
    }
}

#[test]
fn fixed_point_invariants() {
    for branch in [1, -1] {
        let p = ParamSpec::new(5, 1, 1).sqrt_branch(branch).build().unwrap();
        let [a, b] = fixed_points(&p).unwrap();
        assert!(cdist(&a.0, &Complex::with_val(256, -&b.0)) < 1e-60);
        for fp in [&a, &b] {
            assert!(cdist(&p.map_affine(fp).unwrap().0, &fp.0) < 1e-60);
            let md = multipliers_at_fixed(&p, fp).unwrap();
            let prod = Complex::with_val(256, &md.lambda1 * &md.lambda2);
            assert!(cdist(&prod, &p.delta) < 1e-60);
            assert!(md.jacobian_residual.to_f64() < 1e-25);
        }
    }
}

#[test]
fn rank2_matches_modulus_inequality() {
    for (n, m, j) in [
        (4, 1, 1),
        (5, 1, 1),
        (5, 1, 2),
        (6, 1, 1),
        (7, 2, 1),
        (7, 1, 3),
    ] {
        let Ok(p) = ParamSpec::new(n, m, j).build() else {
            continue;
        };
        let re = p.sqrt_delta.real().to_f64();
        let cos = (j as f64 * std::f64::consts::PI / n as f64).cos();
        assert_eq!(
            rank2_criterion(&p),
            (re - 2.0 * cos).abs() <= 1.0,
            "({n},{m},{j})"
        );
    }
}

#[test]
fn mobius_power_is_scalar() {
    for (n, m, j) in [(4, 1, 1), (5, 1, 2), (7, 2, 1)] {
        let p = ParamSpec::new(n, m, j).build().unwrap();
        let o = sigma0_orbit(&p).unwrap();
        assert!(o.scalar_residual.to_f64() < 1e-50);
        assert!(o.nu_squared_residual.to_f64() < 1e-50);
        assert!(omega_identities(&p).max_residual < 1e-50);
    }
}

#[test]
fn projective_matches_affine() {
    let p = ParamSpec::new(4, 1, 1).build().unwrap();
    let mut z = (cx(256, 0.2, -0.1), cx(256, 0.5, 0.3));
    for _ in 0..12 {
        let h = p
            .map_homogeneous(&ProjectivePoint::affine(&z).unwrap())
            .unwrap();
        z = p.map_affine(&z).unwrap();
        let back = h.to_affine(&p.tol()).unwrap();
        assert!(cdist(&back.0, &z.0) < 1e-50 && cdist(&back.1, &z.1) < 1e-50);
        let inv = p.map_inverse(&z).unwrap();
        let again = p.map_affine(&inv).unwrap();
        assert!(cdist(&again.0, &z.0) < 1e-50);
    }
}
