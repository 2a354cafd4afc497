use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use rotdom::blowup::{build_linear_model, landing_condition};
use rotdom::family::{
    closed_form_multipliers, fixed_points, multipliers_at_fixed, omega_identities, ParamSpec,
};
use rotdom::num::{cdist, cpowi, cx, pow2_neg};
use rotdom::picard::{
    charpoly, example25_fixture, intersection_matrix_s, is_negative_definite, t_action_matrix,
};
use rotdom::probes::{return_distances, return_times, sigma0_samples, slice_radius, SliceConfig};
use rotdom::salem::{chi_polynomial, salem_certificate_with_tolerance, NotSalem};
use rotdom::series::{
    linearize_diagonal, return_map_at_q, return_map_at_q_raw, verify_conjugacy, ResonanceClass,
};
use rotdom::Error;
use rug::{Complex, Float, Integer};
use serde_json::Value;

const UNIT_CIRCLE_TOL: f64 = 1e-30;
const LANDING_AT_ROOT: f64 = 1e-30;
const LANDING_PERTURBED: f64 = 1e-7;
const OMEGA_TOL: f64 = 1e-30;
const LINEAR_PART_TOL: f64 = 1e-25;
const CONJUGACY_TOL: f64 = 1e-20;
const MULTIPLIER_TOL: f64 = 1e-25;
const RETURN_DECAY: f64 = 10.0;
const SLOPE_TOL: f64 = 0.1;
const DEGREE: usize = 12;

fn grid() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for n in 4..=8 {
        for m in 1..=40 / n {
            v.push((n, m));
        }
    }
    v
}

fn report(k: u32, ok: bool, detail: String) -> bool {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "criterion {k:>2}: {} | {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_rotdom"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rotdom-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn c1() -> (bool, String) {
    let mut bad = Vec::new();
    let g = grid();
    for &(n, m) in &g {
        if charpoly(&t_action_matrix(n, m).unwrap()) != chi_polynomial(n, m).unwrap() {
            bad.push((n, m));
        }
    }
    (
        bad.is_empty(),
        format!("{} pairs, mismatches {bad:?}", g.len()),
    )
}

fn c2() -> (bool, String) {
    let mut bad = Vec::new();
    for n in 3..=12usize {
        let s = intersection_matrix_s(n, 1).unwrap();
        let want = Integer::from(3 - n as i64) * Integer::from(Integer::u_pow_u(3, (n - 1) as u32));
        let det_ok = s.det() == want;
        let nd_ok = is_negative_definite(&s) == (n >= 4);
        if !det_ok || !nd_ok {
            bad.push(n);
        }
    }
    (
        bad.is_empty(),
        format!("m = 1, n = 3..12, failures {bad:?}"),
    )
}

fn c3() -> (bool, String) {
    let tol = Float::with_val(256, UNIT_CIRCLE_TOL);
    let mut bad = Vec::new();
    for (n, m) in grid() {
        if salem_certificate_with_tolerance(&chi_polynomial(n, m).unwrap(), 256, &tol).is_err() {
            bad.push((n, m));
        }
    }
    let rejected = matches!(
        salem_certificate_with_tolerance(&chi_polynomial(3, 1).unwrap(), 256, &tol),
        Err(Error::NotSalem(NotSalem::NoDominantRoot {
            all_roots_of_unity: true
        }))
    );
    (
        bad.is_empty() && rejected,
        format!("grid failures {bad:?}, chi_3,1 rejected as roots of unity: {rejected}"),
    )
}

fn c4() -> (bool, String) {
    let p = ParamSpec::new(4, 1, 1).build().unwrap();
    let at = landing_condition(4, 1, &p.delta).unwrap().to_f64();
    let d = Complex::with_val(256, &p.delta * cx(256, 1.0 + 1e-5, 0.0));
    let off = landing_condition(4, 1, &d).unwrap().to_f64();
    (
        at < LANDING_AT_ROOT && off > LANDING_PERTURBED,
        format!("root {at:.3e}, perturbed {off:.3e}"),
    )
}

fn c5() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, m, j) in [(4, 1, 1), (5, 1, 1), (5, 1, 2), (6, 1, 1), (7, 2, 1)] {
        let p = match ParamSpec::new(n, m, j).build() {
            Ok(p) => p,
            Err(e) => {
                parts.push(format!("({n},{m},{j}) skipped: {e}"));
                continue;
            }
        };
        let rank2 = fixed_points(&p)
            .ok()
            .and_then(|f| multipliers_at_fixed(&p, &f[0]).ok())
            .map(|md| md.rank2_criterion && md.unit_modulus)
            .unwrap_or(false);
        let r = omega_identities(&p).max_residual;
        ok &= r < OMEGA_TOL;
        parts.push(format!("({n},{m},{j}) {r:.1e} rank2={rank2}"));
    }
    (ok, parts.join(", "))
}

fn c6() -> (bool, String) {
    let p = ParamSpec::new(4, 1, 1).build().unwrap();
    let q = match return_map_at_q(&p, DEGREE) {
        Ok(q) => q,
        Err(e) => return (false, format!("return map: {e}")),
    };
    let l2 = cpowi(&p.lambda, 2);
    let li = Complex::with_val(256, p.lambda.recip_ref());
    let lin = cdist(&q.eta.0, &l2)
        .max(&cdist(&q.eta.1, &li))
        .to_f64()
        .max(q.linear_residual.to_f64());
    let vanish = pow2_neg(256, 64);
    let res_ok = q.resonant_max < vanish;
    let rc = ResonanceClass::new(1, 2, &q.eta.0, &q.eta.1, 1e-30).unwrap();
    let r = linearize_diagonal(&q.h, &q.eta.0, &q.eta.1, DEGREE, Some(&rc), &vanish).unwrap();
    let conj = verify_conjugacy(&q.h, &r.phi, &q.eta.0, &q.eta.1, DEGREE)
        .unwrap()
        .to_f64();
    let bad = p.with_scaled_c(&cx(256, 1.0 + 1e-3, 0.0));
    let bad_rejected = return_map_at_q(&bad, 8).is_err();
    let raw = return_map_at_q_raw(&bad, 8).unwrap();
    let (e1, e2) = (raw[0].get(1, 0).clone(), raw[1].get(0, 1).clone());
    let obstructed = ResonanceClass::new(1, 2, &e1, &e2, 1e-2)
        .ok()
        .and_then(|rc| linearize_diagonal(&raw, &e1, &e2, 8, Some(&rc), &vanish).ok())
        .and_then(|r| r.obstruction)
        .map(|o| (o.coordinate, o.monomial));
    let ok = lin < LINEAR_PART_TOL
        && res_ok
        && r.obstruction.is_none()
        && conj < CONJUGACY_TOL
        && bad_rejected
        && obstructed.is_some();
    (
        ok,
        format!(
            "linear {lin:.1e}, resonant max {:.1e}, conjugacy {conj:.1e} at D = {DEGREE}, mismatched c obstruction {obstructed:?}",
            q.resonant_max.to_f64()
        ),
    )
}

fn c7() -> (bool, String) {
    let p = ParamSpec::new(4, 1, 1).build().unwrap();
    let mut worst_prod = 0f64;
    let mut worst_jac = 0f64;
    for fp in fixed_points(&p).unwrap() {
        let md = multipliers_at_fixed(&p, &fp).unwrap();
        let prod = Complex::with_val(256, &md.lambda1 * &md.lambda2);
        worst_prod = worst_prod.max(cdist(&prod, &p.delta).to_f64());
        worst_jac = worst_jac.max(md.jacobian_residual.to_f64());
    }
    let (a, b) = closed_form_multipliers(&p);
    let prod = Complex::with_val(256, &a * &b);
    worst_prod = worst_prod.max(cdist(&prod, &p.delta).to_f64());
    let lm = build_linear_model(&p).unwrap();
    let q = lm.root.find("q_s").unwrap();
    let mut e = [q.exp_along, q.exp_normal];
    e.sort();
    let l2 = cpowi(&p.lambda, 2);
    let li = cpowi(&p.lambda, -1);
    let mults_ok = (cdist(&q.mult_along, &li) < MULTIPLIER_TOL
        && cdist(&q.mult_normal, &l2) < MULTIPLIER_TOL)
        || (cdist(&q.mult_along, &l2) < MULTIPLIER_TOL
            && cdist(&q.mult_normal, &li) < MULTIPLIER_TOL);
    let ok = worst_prod < MULTIPLIER_TOL && worst_jac < MULTIPLIER_TOL && e == [-1, 2] && mults_ok;
    (
        ok,
        format!("product {worst_prod:.1e}, jacobian {worst_jac:.1e}, q_s exponents {e:?}"),
    )
}

fn c8() -> (bool, String) {
    let p = ParamSpec::new(4, 1, 1).build().unwrap();
    let q = return_times(&p.lambda, 5).unwrap();
    let pts = sigma0_samples(&p, 100, 1e-2, 0);
    let d = return_distances(&p, &pts, &q).unwrap();
    let decay = d[0] / d[4];

    let pgm = scratch("c8.pgm");
    let (code, out) = cli(&[
        "raster",
        "--n",
        "4",
        "--m",
        "1",
        "--res",
        "128x128",
        "--window",
        "-2,2,0,1",
        "--budget",
        "31",
        "--out",
        pgm.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_slice(&out).unwrap_or(Value::Null);
    let zr = &v["report"]["zero_row"];
    let row_ok = code == 0 && zr["recurrent"] == zr["width"] && zr["width"] == 128;

    let cfg = SliceConfig {
        bisections: 10,
        ..SliceConfig::default()
    };
    let mut brackets = Vec::new();
    let mut slice_ok = true;
    for w in [cx(256, 0.3, 0.2), cx(256, -0.7, 0.2), cx(256, 1.3, 0.2)] {
        match slice_radius(&p, &w, &cfg) {
            Ok(s)
                if !s.inconclusive
                    && s.r_lo > 0.0
                    && s.r_hi.is_some_and(|h| h.is_finite() && h >= s.r_lo) =>
            {
                brackets.push(format!("[{:.4}, {:.4}]", s.r_lo, s.r_hi.unwrap()));
            }
            other => {
                slice_ok = false;
                brackets.push(format!("{other:?}"));
            }
        }
    }
    let ok = decay >= RETURN_DECAY && row_ok && slice_ok;
    (
        ok,
        format!(
            "candidates {q:?}, sup dist {:.2e} -> {:.2e} ({decay:.0}x), sigma0 row {}/{}, slices {}",
            d[0],
            d[4],
            zr["recurrent"],
            zr["width"],
            brackets.join(" ")
        ),
    )
}

fn c9() -> (bool, String) {
    let r = example25_fixture().unwrap();
    let (lo, hi) = (*r.growth_ks.first().unwrap(), *r.growth_ks.last().unwrap());
    let ok = r.spectral_radius_one
        && r.jordan.max_block == 3
        && (r.growth_slope - 2.0).abs() <= SLOPE_TOL
        && lo == 100
        && hi == 1000;
    (
        ok,
        format!(
            "spectral radius 1: {}, largest Jordan block {}, slope {:.4} over k in [{lo}, {hi}]",
            r.spectral_radius_one, r.jordan.max_block, r.growth_slope
        ),
    )
}

fn c10() -> (bool, String) {
    let mut outs = Vec::new();
    for (tag, threads) in [("a", "1"), ("b", "4"), ("c", "1")] {
        let pgm = scratch(&format!("c10{tag}.pgm"));
        let (code, report) = cli(&[
            "raster",
            "--n",
            "4",
            "--m",
            "1",
            "--res",
            "48x24",
            "--budget",
            "31",
            "--threads",
            threads,
            "--out",
            pgm.to_str().unwrap(),
        ]);
        let bytes = std::fs::read(&pgm).unwrap_or_default();
        let csv = std::fs::read(pgm.with_extension("csv")).unwrap_or_default();
        let mut v: Value = serde_json::from_slice(&report).unwrap_or(Value::Null);
        for k in ["pgm", "csv"] {
            v["report"][k] = Value::Null;
        }
        v["config"]["out"] = Value::Null;
        v["config"]["threads"] = Value::Null;
        outs.push((code, bytes, csv, v));
    }
    let rasters_equal = outs.iter().all(|o| {
        o.0 == 0 && !o.1.is_empty() && o.1 == outs[0].1 && o.2 == outs[0].2 && o.3 == outs[0].3
    });
    let (c1, a) = cli(&["verify", "--n", "4", "--m", "1"]);
    let doc: Value = serde_json::from_slice(&a).unwrap();
    let cfg = doc["config"].clone();
    let mut replay = vec!["verify".to_string()];
    for k in [
        "n",
        "m",
        "j",
        "root_index",
        "sqrt_branch",
        "precision",
        "seed",
    ] {
        replay.push(format!("--{}", k.replace('_', "-")));
        replay.push(
            cfg["params"]
                .get(k)
                .or_else(|| cfg.get(k))
                .unwrap()
                .to_string(),
        );
    }
    let replay: Vec<&str> = replay.iter().map(String::as_str).collect();
    let (c2, b) = cli(&replay);
    let (c3, lin_a) = cli(&["linearize", "--n", "4", "--m", "1", "--degree", "8"]);
    let (c4, lin_b) = cli(&["linearize", "--n", "4", "--m", "1", "--degree", "8"]);
    let reports_equal = c1 == 0 && c1 == c2 && a == b && c3 == 0 && c3 == c4 && lin_a == lin_b;
    (rasters_equal && reports_equal, format!("raster bytes equal across threads 1/4/1: {rasters_equal}, verify/linearize reports replay from config: {reports_equal}"))
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> (bool, String)); 10] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
    ];
    let mut failed = Vec::new();
    for (k, f) in criteria {
        let (ok, detail) = f();
        if !report(k, ok, detail) {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
