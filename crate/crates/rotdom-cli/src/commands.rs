use std::fs;
use std::path::Path;

use rotdom::blowup::{
    build_linear_model, landing_condition, mobius_composite_invariant, orbit_pattern_check,
};
use rotdom::family::{
    fixed_points, multipliers_at_fixed, omega_identities, FamilyParams, ParamSpec,
};
use rotdom::num::{cabs, cdist, cx, pow2_neg};
use rotdom::picard::{charpoly, entropy, t_action_matrix};
use rotdom::probes::{
    default_budget, iterate, return_times_up_to, siegel_raster, sigma0_chart_point, slice_radius,
    ChartPolicy, RasterChart, RasterConfig, SliceConfig, DEFAULT_BUDGET_FLOOR,
};
use rotdom::salem::{chi_polynomial, salem_certificate};
use rotdom::series::{
    demo_resonant_map, linearize_diagonal, return_map_at_q, return_map_at_sigma0, verify_conjugacy,
    ResonanceClass, SeriesPair,
};
use rotdom::Error;
use rug::Complex;
use serde_json::{json, Value};

use crate::{
    ChartArg, LinearizeArgs, OrbitArgs, ParamArgs, RasterArgs, RunConfig, SalemArgs, SliceArgs,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ARGS: u8 = 2;
pub const EXIT_NOT_SALEM: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;
pub const EXIT_OBSTRUCTION: u8 = 5;
pub const EXIT_IO: u8 = 6;

pub struct Outcome {
    pub report: Value,
    pub code: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub reason: String,
}

impl Failure {
    fn new(code: u8, reason: impl Into<String>) -> Self {
        Failure {
            code,
            reason: reason.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::ParameterRejected(_) => EXIT_ARGS,
            Error::NotSalem(_) => EXIT_NOT_SALEM,
            Error::StructureViolation(_) => EXIT_OBSTRUCTION,
            _ => EXIT_VERIFY,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

pub fn run(config: &RunConfig) -> CmdResult {
    match config {
        RunConfig::Salem(a) => cmd_salem(a),
        RunConfig::Verify(a) => cmd_verify(a),
        RunConfig::Linearize(a) => cmd_linearize(a),
        RunConfig::Raster(a) => cmd_raster(a),
        RunConfig::Orbit(a) => cmd_orbit(a),
        RunConfig::Slice(a) => cmd_slice(a),
    }
}

fn build_params(a: &ParamArgs) -> std::result::Result<FamilyParams, Failure> {
    let mut spec = ParamSpec::new(a.n, a.m, a.j)
        .root_index(a.root_index)
        .sqrt_branch(a.sqrt_branch)
        .precision(a.precision);
    if let Some(eps) = a.perturb {
        if !eps.is_finite() {
            return Err(Failure::new(EXIT_ARGS, "perturb must be finite"));
        }
        spec = spec.perturb(eps);
    }
    match spec.build() {
        Ok(p) => Ok(p),
        Err(e @ Error::Consistency(_)) => Err(Failure::new(EXIT_ARGS, e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn parse_list(s: &str, len: usize, what: &str) -> std::result::Result<Vec<f64>, Failure> {
    let v: std::result::Result<Vec<f64>, _> =
        s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == len && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(Failure::new(
            EXIT_ARGS,
            format!("{what} must be {len} comma-separated numbers, got {s:?}"),
        )),
    }
}

fn parse_complex(s: &str, prec: u32, what: &str) -> std::result::Result<Complex, Failure> {
    let v = parse_list(s, 2, what)?;
    Ok(cx(prec, v[0], v[1]))
}

fn parse_res(s: &str) -> std::result::Result<(usize, usize), Failure> {
    let bad = || Failure::new(EXIT_ARGS, format!("res must look like WxH, got {s:?}"));
    let (w, h) = s.split_once('x').ok_or_else(bad)?;
    let w: usize = w.parse().map_err(|_| bad())?;
    let h: usize = h.parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

fn write_file(path: &Path, bytes: &[u8]) -> std::result::Result<(), Failure> {
    fs::write(path, bytes)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_salem(a: &SalemArgs) -> CmdResult {
    let chi = chi_polynomial(a.n, a.m)?;
    match salem_certificate(&chi, a.precision) {
        Ok(cert) => {
            let h = entropy(a.n, a.m, a.precision)?;
            Ok(Outcome {
                report: json!({
                    "status": "salem",
                    "coefficients": chi.to_decimal_strings(),
                    "polynomial": chi.to_string(),
                    "certificate": cert.to_json(),
                    "entropy": h.to_f64(),
                    "entropy_digits": rotdom::num::float_to_string(&h),
                }),
                code: EXIT_OK,
            })
        }
        Err(Error::NotSalem(why)) => Ok(Outcome {
            report: json!({
                "status": "not-salem",
                "coefficients": chi.to_decimal_strings(),
                "polynomial": chi.to_string(),
                "reason": why.to_string(),
                "detail": why,
            }),
            code: EXIT_NOT_SALEM,
        }),
        Err(e) => Err(e.into()),
    }
}

struct Check {
    name: &'static str,
    passed: bool,
    residual: Option<f64>,
    detail: Value,
}

impl Check {
    fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "residual": self.residual, "detail": self.detail })
    }
}

fn failed(name: &'static str, e: Error) -> Check {
    Check {
        name,
        passed: false,
        residual: None,
        detail: json!({ "error": e.to_string() }),
    }
}

pub fn cmd_verify(a: &ParamArgs) -> CmdResult {
    let p = build_params(a)?;
    let tol = p.tol().to_f64();
    let loose = pow2_neg(p.prec(), p.prec() / 4).to_f64();
    let mut checks = Vec::new();

    checks.push(match salem_certificate(&p.chi, p.prec()) {
        Ok(c) => Check {
            name: "salem",
            passed: true,
            residual: None,
            detail: json!({ "lambda": rotdom::num::float_to_string(&c.lambda) }),
        },
        Err(e) => failed("salem", e),
    });

    checks.push(match landing_condition(p.n, p.m, &p.delta) {
        Ok(r) => {
            let r = r.to_f64();
            Check {
                name: "landing",
                passed: r < tol,
                residual: Some(r),
                detail: Value::Null,
            }
        }
        Err(e) => failed("landing", e),
    });

    let charpoly_equal = match t_action_matrix(p.n, p.m) {
        Ok(t) => charpoly(&t) == p.chi,
        Err(_) => false,
    };
    checks.push(Check {
        name: "charpoly",
        passed: charpoly_equal,
        residual: None,
        detail: Value::Null,
    });

    let om = omega_identities(&p);
    checks.push(Check {
        name: "omega_identities",
        passed: om.max_residual < tol,
        residual: Some(om.max_residual),
        detail: json!(om),
    });

    checks.push(match orbit_pattern_check(&p, a.seed) {
        Ok(r) => Check {
            name: "orbit_pattern",
            passed: r.passed,
            residual: Some(r.level2_max_residual),
            detail: json!(r),
        },
        Err(e) => failed("orbit_pattern", e),
    });

    checks.push(match fixed_points(&p) {
        Ok(fps) => {
            let mut worst = 0f64;
            let mut details = Vec::new();
            let mut ok = true;
            for fp in &fps {
                match multipliers_at_fixed(&p, fp) {
                    Ok(md) => {
                        let prod = Complex::with_val(p.prec(), &md.lambda1 * &md.lambda2);
                        let r = cdist(&prod, &p.delta).to_f64();
                        worst = worst.max(r).max(md.jacobian_residual.to_f64());
                        details.push(json!({ "multipliers": md.to_json(), "product_residual": r }));
                    }
                    Err(e) => {
                        ok = false;
                        details.push(json!({ "error": e.to_string() }));
                    }
                }
            }
            Check {
                name: "multipliers",
                passed: ok && worst < tol,
                residual: Some(worst),
                detail: json!(details),
            }
        }
        Err(e) => failed("multipliers", e),
    });

    checks.push(match build_linear_model(&p) {
        Ok(lm) => {
            let r = lm.q_cross_check_residual.to_f64();
            Check {
                name: "linear_model",
                passed: r < loose,
                residual: Some(r),
                detail: json!(lm.to_json()),
            }
        }
        Err(e) => failed("linear_model", e),
    });

    checks.push(match mobius_composite_invariant(&p) {
        Ok(m) => {
            let r = m
                .trace_residual
                .max(m.derivative_at_zero_residual)
                .max(m.derivative_at_other_residual);
            Check {
                name: "mobius_invariant",
                passed: r < tol,
                residual: Some(r),
                detail: json!(m),
            }
        }
        Err(e) => failed("mobius_invariant", e),
    });

    let first_failure = checks.iter().find(|c| !c.passed).map(|c| c.name);
    let all = first_failure.is_none();
    Ok(Outcome {
        report: json!({
            "status": if all { "verified" } else { "failed" },
            "params": p.to_json(),
            "charpoly_equal": charpoly_equal,
            "all_passed": all,
            "first_failure": first_failure,
            "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        }),
        code: if all { EXIT_OK } else { EXIT_VERIFY },
    })
}

fn solve(
    h: &SeriesPair,
    eta: (&Complex, &Complex),
    degree: usize,
    rc: Option<&ResonanceClass>,
    prec: u32,
) -> std::result::Result<Value, Failure> {
    let vanish = pow2_neg(prec, prec / 4);
    let r = linearize_diagonal(h, eta.0, eta.1, degree, rc, &vanish)?;
    let residual = if r.obstruction.is_none() {
        Some(verify_conjugacy(h, &r.phi, eta.0, eta.1, degree)?.to_f64())
    } else {
        None
    };
    let obstructed = r.obstruction.is_some();
    Ok(json!({
        "eta": [rotdom::num::ComplexJson::from_complex(eta.0), rotdom::num::ComplexJson::from_complex(eta.1)],
        "conjugacy_residual": residual,
        "obstructed": obstructed,
        "linearization": r.to_json(),
    }))
}

pub fn cmd_linearize(a: &LinearizeArgs) -> CmdResult {
    let p = build_params(&a.params)?;
    let prec = p.prec();
    let d = a.degree;
    if !(2..=40).contains(&d) {
        return Err(Failure::new(
            EXIT_ARGS,
            format!("degree must lie in 2..=40, got {d}"),
        ));
    }
    let w = parse_complex(&a.base, prec, "base")?;
    let rc_tol = p.tol().to_f64();

    let q = if a.demo_resonant {
        let h = demo_resonant_map(&p.lambda, d);
        let li = Complex::with_val(prec, p.lambda.recip_ref());
        let rc = ResonanceClass::new(1, 1, &p.lambda, &li, rc_tol)?;
        let mut v = solve(&h, (&p.lambda, &li), d, Some(&rc), prec)?;
        v["source"] = json!("demo-resonant");
        v
    } else {
        if d < 4 {
            return Err(Failure::new(
                EXIT_ARGS,
                "the return map at q_s needs degree >= 4",
            ));
        }
        let qm = return_map_at_q(&p, d)?;
        let rc = ResonanceClass::new(1, 2, &qm.eta.0, &qm.eta.1, rc_tol)?;
        let mut v = solve(&qm.h, (&qm.eta.0, &qm.eta.1), d, Some(&rc), prec)?;
        v["source"] = json!("q_s");
        v["linear_residual"] = json!(qm.linear_residual.to_f64());
        v["resonant_max"] = json!(qm.resonant_max.to_f64());
        v["resonant_second_max"] = json!(qm.resonant_second_max.to_f64());
        v
    };

    let sigma = match return_map_at_sigma0(&p, &w, d) {
        Ok(s) => {
            let mut v = solve(&s.h, (&s.eta.0, &s.eta.1), d, None, prec)?;
            v["base"] = json!(rotdom::num::ComplexJson::from_complex(&s.base));
            v["linear_residual"] = json!(s.linear_residual.to_f64());
            v["structure_residual"] = json!(s.structure_residual.to_f64());
            v
        }
        Err(e) => json!({ "error": e.to_string() }),
    };

    let mut birkhoff = Value::Null;
    if let Ok(fps) = fixed_points(&p) {
        for fp in &fps {
            if let Ok(r) =
                rotdom::probes::birkhoff_linearize(&p, fp, &[1, 16, 256], 1e-3, 6, a.params.seed)
            {
                birkhoff = json!({ "fixed_point": [rotdom::num::ComplexJson::from_complex(&fp.0), rotdom::num::ComplexJson::from_complex(&fp.1)], "curve": r });
                break;
            }
        }
    }

    let obstructed = q["obstructed"] == json!(true) || sigma["obstructed"] == json!(true);
    let min_divisor = q["linearization"]["min_divisor"].clone();
    Ok(Outcome {
        report: json!({
            "status": if obstructed { "obstruction" } else { "linearized" },
            "degree": d,
            "min_divisor": min_divisor,
            "q": q,
            "sigma0": sigma,
            "birkhoff": birkhoff,
        }),
        code: if obstructed {
            EXIT_OBSTRUCTION
        } else {
            EXIT_OK
        },
    })
}

pub fn cmd_raster(a: &RasterArgs) -> CmdResult {
    let win = parse_list(&a.window, 4, "window")?;
    let resolution = parse_res(&a.res)?;
    if !(a.eps > 0.0) {
        return Err(Failure::new(EXIT_ARGS, "eps must be positive"));
    }
    if a.threads == 0 {
        return Err(Failure::new(EXIT_ARGS, "threads must be at least 1"));
    }
    let p = build_params(&a.params)?;
    let budget = match a.budget {
        Some(b) => b,
        None => default_budget(
            &return_times_up_to(&p.lambda, DEFAULT_BUDGET_FLOOR)?,
            DEFAULT_BUDGET_FLOOR,
        ),
    };
    let config = RasterConfig {
        chart: match a.chart {
            ChartArg::Sigma0 => RasterChart::Sigma0,
            ChartArg::Affine => RasterChart::Affine,
        },
        window: (win[0], win[1], win[2], win[3]),
        resolution,
        budget,
        eps: a.eps,
        threads: a.threads,
    };
    let grid = siegel_raster(&p, &config)?;
    let csv_path = a.out.with_extension("csv");
    write_file(&a.out, &grid.to_pgm())?;
    write_file(&csv_path, grid.to_csv().as_bytes())?;
    let zero_row = grid.zero_row().map(|r| {
        let rec = (0..grid.width())
            .filter(|&c| grid.cell(r, c).class == rotdom::probes::CellClass::Recurrent)
            .count();
        json!({ "row": r, "recurrent": rec, "width": grid.width() })
    });
    Ok(Outcome {
        report: json!({
            "status": "written",
            "pgm": a.out.display().to_string(),
            "csv": csv_path.display().to_string(),
            "budget": budget,
            "candidates": grid.candidates,
            "counts": grid.counts(),
            "cells": resolution.0 * resolution.1,
            "zero_row": zero_row,
        }),
        code: EXIT_OK,
    })
}

pub fn cmd_orbit(a: &OrbitArgs) -> CmdResult {
    let p = build_params(&a.params)?;
    let t = parse_complex(&a.t, p.prec(), "t")?;
    let w = parse_complex(&a.w, p.prec(), "w")?;
    let z0 = sigma0_chart_point(&p, &t, &w)?;
    let rec = iterate(
        &p,
        &z0,
        a.steps,
        &ChartPolicy {
            eps: a.eps,
            ..ChartPolicy::default()
        },
    );
    let mut buf = Vec::new();
    rec.write_csv(&mut buf)
        .map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    write_file(&a.out, &buf)?;
    let fiber_visits = rec
        .chart_tags
        .iter()
        .filter(|t| matches!(t, rotdom::probes::ChartTag::Fiber(_)))
        .count();
    Ok(Outcome {
        report: json!({
            "status": "written",
            "csv": a.out.display().to_string(),
            "iterates": rec.points.len() - 1,
            "escaped": rec.escaped,
            "indeterminate_at": rec.indeterminate_at,
            "fiber_chart_visits": fiber_visits,
            "return_events": rec.return_events,
        }),
        code: EXIT_OK,
    })
}

pub fn cmd_slice(a: &SliceArgs) -> CmdResult {
    let p = build_params(&a.params)?;
    let w = parse_complex(&a.w, p.prec(), "w")?;
    if cabs(&w).to_f64() > 1e6 {
        return Err(Failure::new(EXIT_ARGS, "w too large"));
    }
    let cfg = SliceConfig {
        budget: a.budget,
        eps: a.eps,
        bisections: a.bisections,
        ..SliceConfig::default()
    };
    let r = slice_radius(&p, &w, &cfg)?;
    Ok(Outcome {
        report: json!({
            "status": if r.inconclusive { "inconclusive" } else { "bracketed" },
            "slice": r,
        }),
        code: EXIT_OK,
    })
}
