use rotdom::salem::*;
use rotdom::Error;
use rug::Float;

fn bisect_largest_real_root(p: &IntPolynomial) -> f64 {
    let c: Vec<f64> = p.coeffs().iter().map(|a| a.to_f64()).collect();
    let eval = |x: f64| c.iter().rev().fold(0.0, |acc, a| acc * x + a);
    let (mut lo, mut hi) = (1.0 + 1e-9, 1.0 + c.iter().map(|a| a.abs()).sum::<f64>());
    assert!(eval(lo) * eval(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(lo) * eval(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

#[test]
fn salem_numbers_match_bisection() {
    for (n, m) in [(4, 1), (5, 1), (6, 1), (7, 2), (3, 2)] {
        let chi = chi_polynomial(n, m).unwrap();
        assert!(chi.is_palindromic());
        let cert = salem_certificate(&chi, 256).unwrap();
        let want = bisect_largest_real_root(&chi);
        assert!((cert.lambda.to_f64() - want).abs() < 1e-12, "({n},{m})");
        assert_eq!(cert.unit_roots.len() + 2, chi.deg(), "({n},{m})");
        let torsion = cert
            .unit_root_is_root_of_unity
            .iter()
            .filter(|b| **b)
            .count();
        assert_eq!(torsion, cert.cyclotomic_part.deg(), "({n},{m})");
    }
}

#[test]
fn roots_satisfy_polynomial() {
    let chi = chi_polynomial(7, 2).unwrap();
    let roots = find_roots(&chi, 256).unwrap();
    assert_eq!(roots.len(), chi.deg());
    for r in &roots {
        let v = chi.eval_complex(r);
        assert!(Float::with_val(256, v.abs_ref()).to_f64() < 1e-60);
    }
}

#[test]
fn lehmer_polynomial_is_salem() {
    let l = IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let cert = salem_certificate(&l, 256).unwrap();
    assert!((cert.lambda.to_f64() - 1.1762808182599175).abs() < 1e-13);
    assert_eq!(cert.unit_roots.len(), 8);
}

#[test]
fn non_salem_inputs() {
    let chi = chi_polynomial(3, 1).unwrap();
    match salem_certificate(&chi, 128) {
        Err(Error::NotSalem(NotSalem::NoDominantRoot { all_roots_of_unity })) => {
            assert!(all_roots_of_unity)
        }
        other => panic!("{other:?}"),
    }
    let two_big = IntPolynomial::from_i64(&[1, -5, 1]).mul(&IntPolynomial::from_i64(&[1, -6, 1]));
    assert!(matches!(
        salem_certificate(&two_big, 128),
        Err(Error::NotSalem(NotSalem::MultipleDominant { .. }))
    ));
    let skew = IntPolynomial::from_i64(&[1, 2, 3]);
    assert!(matches!(
        salem_certificate(&skew, 128),
        Err(Error::NotSalem(NotSalem::NotReciprocal))
    ));
}

#[test]
fn cyclotomic_certificate() {
    let chi = chi_polynomial(4, 1).unwrap();
    let c = certify_not_root_of_unity(&chi, max_cyclotomic_order(chi.deg()));
    assert!(c.certified && c.unconditional);
    let phi5 = IntPolynomial::from_i64(&[1, 1, 1, 1, 1]);
    let c = certify_not_root_of_unity(&phi5, 10);
    assert_eq!(c.first_failure, Some(5));
}
