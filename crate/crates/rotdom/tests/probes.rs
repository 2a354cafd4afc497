use rotdom::family::{fixed_points, FamilyParams, ParamSpec, ProjectivePoint};
use rotdom::num::{cis, cx, pi};
use rotdom::probes::*;
use rotdom::Error;
use rug::{Complex, Float};

fn p411() -> FamilyParams {
    ParamSpec::new(4, 1, 1).build().unwrap()
}

#[test]
fn golden_mean_gives_fibonacci() {
    let prec = 256;
    let g = (Float::with_val(prec, 5).sqrt() - 1u32) / 2u32;
    let l = cis(&(pi(prec) * 2u32 * g));
    let q = return_times(&l, 10).unwrap();
    assert_eq!(q, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
}

#[test]
fn best_approximation_inequality() {
    let p = p411();
    let q = return_times(&p.lambda, 9).unwrap();
    assert_eq!(&q[..6], &[1, 4, 9, 22, 31, 5013]);
    let d = rotation_defects(&p.lambda, &q);
    for k in 0..q.len() - 1 {
        assert!(
            d[k] < 2.0 * std::f64::consts::PI / q[k + 1] as f64,
            "k = {k}"
        );
        assert!(d[k + 1] < d[k]);
    }
}

#[test]
fn roots_of_unity_rejected() {
    let prec = 128;
    let l = cis(&(pi(prec) * 2u32 * Float::with_val(prec, 3) / 7u32));
    assert!(matches!(return_times(&l, 10), Err(Error::Precondition(_))));
    assert!(matches!(
        return_times(&cx(prec, 1.5, 0.0), 3),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn sigma0_is_fixed_by_h() {
    let p = p411();
    let z0 = sigma0_chart_point(&p, &p.zero(), &cx(256, 0.3, -0.4)).unwrap();
    let rec = iterate(&p, &z0, 3 * p.n, &ChartPolicy::default());
    assert_eq!(rec.points.len(), 3 * p.n + 1);
    assert!(!rec.escaped);
    for k in [p.n, 2 * p.n, 3 * p.n] {
        let (k_ev, d) = rec.return_events.iter().find(|e| e.0 == k).unwrap();
        assert_eq!(*k_ev, k);
        assert!(*d < 1e-60);
    }
    let mut csv = Vec::new();
    rec.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("iterate,chart_tag,re1,im1,re2,im2\n"));
    assert_eq!(text.lines().count(), 3 * p.n + 2);
}

#[test]
fn fixed_point_orbit_is_stationary() {
    let p = p411();
    let fp = fixed_points(&p).unwrap()[0].clone();
    let z0 = ProjectivePoint::affine(&fp).unwrap();
    let rec = iterate(&p, &z0, 10, &ChartPolicy::default());
    assert_eq!(rec.return_events.len(), 10);
    assert!(rec.return_events.iter().all(|e| e.1 < 1e-60));
    let r = classify_point(&p, &z0, &[1, 4, 9], 9, 1e-3);
    assert_eq!(r.class, CellClass::Recurrent);
    assert_eq!(r.return_time, Some(1));
}

#[test]
fn chart_coherence() {
    let p = p411();
    let mut z = (cx(256, 0.4, 0.1), cx(256, -0.2, 0.3));
    let mut q = ProjectivePoint::affine(&z).unwrap();
    for _ in 0..20 {
        z = p.map_affine(&z).unwrap();
        q = p.map_homogeneous(&q).unwrap();
        let back = ProjectivePoint::affine(&z).unwrap();
        assert!(back.distance(&q) < 1e-60);
    }
}

#[test]
fn fiber_tags_near_blowup_centers() {
    let p = p411();
    let w = Complex::with_val(256, p.omega_s(1) + cx(256, 1e-4, 0.0));
    let z0 = sigma0_chart_point(&p, &cx(256, 1e-4, 0.0), &w).unwrap();
    let rec = iterate(&p, &z0, 4, &ChartPolicy::default());
    assert_eq!(rec.chart_tags[0], ChartTag::Fiber(1));
    assert_eq!(rec.chart_tags[0].to_string(), "F1_1");
    assert!(rec
        .chart_tags
        .iter()
        .any(|t| matches!(t, ChartTag::Fiber(2))));
}

#[test]
fn returns_near_sigma0_approach_identity() {
    let p = p411();
    let q = return_times(&p.lambda, 5).unwrap();
    let pts = sigma0_samples(&p, 100, 1e-2, 0);
    let d = return_distances(&p, &pts, &q).unwrap();
    assert!(d[0] / d[4] >= 10.0, "{d:?}");
    assert!(d[4] < d[0]);
}

#[test]
fn no_periodic_points_off_sigma0() {
    let p = p411();
    let cand = return_times(&p.lambda, 5).unwrap();
    let z0 = sigma0_chart_point(&p, &cx(256, 0.01, 0.0), &cx(256, 0.3, 0.2)).unwrap();
    let prof = return_profile(&p, &z0, 31).unwrap();
    let mut best = f64::INFINITY;
    for (k, d) in prof.iter().enumerate() {
        assert!(*d > 1e-30);
        if *d < best {
            best = *d;
            assert!(cand.contains(&(k as u64 + 1)), "record at k = {}", k + 1);
        }
    }
}

#[test]
fn birkhoff_residuals_decay() {
    let p = p411();
    let fp = fixed_points(&p).unwrap()[0].clone();
    let r = birkhoff_linearize(&p, &fp, &[1, 16, 256], 1e-3, 6, 0).unwrap();
    assert_eq!(r.samples_used + r.samples_dropped, 6);
    assert!(r.residuals[0] < 1e-4);
    assert!(r.residuals[2] < r.residuals[1], "{:?}", r.residuals);
    let l1 = cx(256, 0.6, 0.8);
    let l2 = cx(256, 0.0, 1.0);
    let det = Complex::with_val(256, &l1 * &l2);
    let tr = Complex::with_val(256, &l1 + &l2);
    let lin = |z: &(Complex, Complex)| {
        let y = Complex::with_val(256, &tr * &z.1) - Complex::with_val(256, &det * &z.0);
        Ok((z.1.clone(), y))
    };
    let o = (cx(256, 0.0, 0.0), cx(256, 0.0, 0.0));
    let samples = vec![(cx(256, 0.1, 0.0), cx(256, 0.0, 0.2))];
    let r =
        rotdom::probes::birkhoff_residuals(lin, &o, (&l1, &l2), &[1, 8], &samples, 1.0).unwrap();
    assert!(r.residuals.iter().all(|&v| v < 1e-60));
}

#[test]
fn birkhoff_all_escape_is_inconclusive() {
    let p = p411();
    let fp = fixed_points(&p).unwrap()[0].clone();
    let md = rotdom::family::multipliers_at_fixed(&p, &fp).unwrap();
    let far = vec![(cx(256, 5.0, 0.0), cx(256, 5.0, 0.0))];
    let r = birkhoff_residuals(
        |z| p.map_affine(z),
        &fp,
        (&md.lambda1, &md.lambda2),
        &[4],
        &far,
        1e-3,
    );
    assert!(matches!(r, Err(Error::Inconclusive(_))));
}

fn small_config(threads: usize) -> RasterConfig {
    RasterConfig {
        chart: RasterChart::Sigma0,
        window: (-2.0, 2.0, 0.0, 1.0),
        resolution: (16, 9),
        budget: 31,
        eps: 1e-3,
        threads,
    }
}

#[test]
fn raster_sigma0_row_and_partition() {
    let p = p411();
    let g = siegel_raster(&p, &small_config(1)).unwrap();
    let row = g.zero_row().unwrap();
    assert_eq!(row, 8);
    for c in 0..g.width() {
        assert_eq!(g.cell(row, c).class, CellClass::Recurrent);
    }
    let n = g.counts();
    assert_eq!(n.recurrent + n.non_recurrent + n.indeterminate_hit, 16 * 9);
    assert!(n.non_recurrent > 0);
    let pgm = g.to_pgm();
    assert!(pgm.starts_with(b"P5\n16 9\n255\n"));
    assert_eq!(pgm.len(), b"P5\n16 9\n255\n".len() + 16 * 9);
    assert_eq!(g.to_csv().lines().count(), 16 * 9 + 1);
}

#[test]
fn raster_deterministic_across_threads() {
    let p = p411();
    let a = siegel_raster(&p, &small_config(1)).unwrap();
    let b = siegel_raster(&p, &small_config(3)).unwrap();
    assert_eq!(a.to_pgm(), b.to_pgm());
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn raster_stable_under_precision_doubling() {
    let lo = ParamSpec::new(4, 1, 1).precision(128).build().unwrap();
    let hi = ParamSpec::new(4, 1, 1).precision(256).build().unwrap();
    let cfg = RasterConfig {
        resolution: (8, 8),
        ..small_config(2)
    };
    let a = siegel_raster(&lo, &cfg).unwrap();
    let b = siegel_raster(&hi, &cfg).unwrap();
    let ca: Vec<_> = a.cells.iter().map(|c| c.class).collect();
    let cb: Vec<_> = b.cells.iter().map(|c| c.class).collect();
    assert_eq!(ca, cb);
}

#[test]
fn budget_is_monotone() {
    let p = p411();
    let cand = return_times(&p.lambda, 6).unwrap();
    for (u, v) in [(0.3, 0.05), (-1.0, 0.3), (0.0, 0.9), (1.5, 0.6)] {
        let z = raster_point(&p, RasterChart::Sigma0, u, v).unwrap();
        let a = classify_point(&p, &z, &cand, 9, 1e-3);
        let b = classify_point(&p, &z, &cand, 31, 1e-3);
        if a.class == CellClass::Recurrent {
            assert_eq!(b.class, CellClass::Recurrent);
        }
    }
}

#[test]
fn raster_rejects_bad_window() {
    let p = p411();
    let cfg = RasterConfig {
        window: (1.0, -1.0, 0.0, 1.0),
        ..small_config(1)
    };
    assert!(matches!(
        siegel_raster(&p, &cfg),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn slice_radius_brackets() {
    let p = p411();
    let cfg = SliceConfig {
        bisections: 8,
        ..SliceConfig::default()
    };
    for w in [cx(256, 0.3, 0.2), cx(256, -0.7, 0.2), cx(256, 1.3, 0.2)] {
        let s = slice_radius(&p, &w, &cfg).unwrap();
        assert!(!s.inconclusive);
        let hi = s.r_hi.unwrap();
        assert!(s.r_lo > 0.0 && s.r_lo <= hi && hi.is_finite());
        let again = slice_radius(&p, &w, &cfg).unwrap();
        assert_eq!(again.tested, s.tested);
    }
    let bad = slice_radius(&p, &p.omega_s(2).clone(), &cfg);
    assert!(matches!(bad, Err(Error::Precondition(_))));
}

#[test]
fn default_budget_choice() {
    assert_eq!(
        default_budget(&[1, 4, 9, 22, 31, 5013, 180499], DEFAULT_BUDGET_FLOOR),
        180499
    );
    assert_eq!(default_budget(&[1, 2, 3], 10), 3);
}
