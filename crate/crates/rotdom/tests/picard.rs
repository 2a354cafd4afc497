use rotdom::picard::*;
use rotdom::salem::{chi_polynomial, IntPolynomial};
use rug::Integer;

#[test]
fn det_s_matches_formula() {
    for n in 3..=12 {
        let s = intersection_matrix_s(n, 1).unwrap();
        let want = Integer::from(3 - n as i64) * Integer::from(Integer::u_pow_u(3, (n - 1) as u32));
        assert_eq!(s.det(), want, "n = {n}");
        assert_eq!(s.rows(), 2 * n + 1);
    }
    assert_eq!(intersection_matrix_s(4, 1).unwrap().det(), -27);
}

#[test]
fn det_s_general_m() {
    for n in 3..=8 {
        for m in 1..=4 {
            assert_eq!(
                intersection_matrix_s(n, m).unwrap().det(),
                det_s_closed_form(n, m)
            );
        }
    }
}

#[test]
fn s_negative_definite() {
    for n in 4..=8 {
        for m in 1..=3 {
            let p = PicData::new(n, m).unwrap();
            assert!(p.s_matrix.is_symmetric());
            assert!(p.s_negative_definite(), "({n}, {m})");
        }
    }
    assert!(!PicData::new(3, 1).unwrap().s_negative_definite());
}

#[test]
fn t_matrix_structure() {
    for (n, m) in [(4, 1), (5, 2), (7, 3)] {
        let t = t_action_matrix(n, m).unwrap();
        assert!(t.max_abs() <= 1);
        let last = t.column(n * m - 1);
        for l in 1..=m {
            for s in 0..n {
                let want = if s == 0 { -1 } else { 1 };
                assert_eq!(last[gamma_index(n, s, l)], want);
            }
        }
    }
}

#[test]
fn charpoly_identity() {
    assert_eq!(
        charpoly(&IntMatrix::identity(3)),
        IntPolynomial::from_i64(&[-1, 3, -3, 1])
    );
    for n in 3..=10 {
        for m in 1..=4 {
            if n * m > 40 {
                continue;
            }
            let t = t_action_matrix(n, m).unwrap();
            assert_eq!(charpoly(&t), chi_polynomial(n, m).unwrap(), "({n}, {m})");
        }
    }
}

#[test]
fn full_pushforward_is_isometry() {
    for (n, m) in [(4, 1), (5, 1), (4, 2), (6, 2)] {
        let a = full_pushforward(n, m).unwrap();
        let b = BlowupBasis { n, m };
        assert!(is_isometry(&a, &b.signs()));
        let chi = chi_polynomial(n, m).unwrap();
        let extra = IntPolynomial::from_i64(&[-1, 1])
            .mul(&IntPolynomial::x_pow_minus_one(n))
            .mul(&IntPolynomial::x_pow_minus_one(n));
        assert_eq!(charpoly(&a), chi.mul(&extra), "({n}, {m})");
    }
}

#[test]
fn entropy_values() {
    let h41 = entropy(4, 1, 256).unwrap();
    let lam = h41.clone().exp();
    assert!(lam > 1.72 && lam < 1.73);
    assert!(entropy(4, 2, 256).unwrap() > h41);
    for n in 4..=6 {
        assert!(entropy(n, 1, 128).unwrap() > 0);
    }
}

#[test]
fn example25() {
    let r = example25_fixture().unwrap();
    assert!(r.isometry);
    assert!(r.sigma2_maps_to_f3_1);
    assert!(r.spectral_radius_one);
    assert!(r.jordan.max_block >= 3);
    assert!(
        (r.growth_slope - 2.0).abs() < 0.1,
        "slope {}",
        r.growth_slope
    );
    for (k, v) in r.growth_ks.iter().zip(&r.growth_norms) {
        let q = v / (*k as f64).powi(2);
        assert!(q > 1e-3 && q < 1e3);
    }
    assert_eq!(r.s_perp_dim, 4);
}
