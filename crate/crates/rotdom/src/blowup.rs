//! Fiber charts of the three-level blowup, the landing criterion, the orbit
//! pattern of the exceptional fibers and the multiplier bookkeeping of the
//! global linear model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{FamilyParams, Point2, ProjectivePoint};
use crate::num::{cabs, cdist, cint, cpowi, cx, mat2_mul, mat2_pow, pow2_neg, ComplexJson};

/// Point in the fiber chart of level 1 (`(s1, eta1)_s`) or level 2 (`(xi2, x2)_s`).
#[derive(Clone, Debug)]
pub struct FiberChartPoint {
    pub level: u8,
    pub s: usize,
    pub coords: Point2,
}

impl FiberChartPoint {
    pub fn new(level: u8, s: usize, a: Complex, b: Complex) -> Self {
        FiberChartPoint {
            level,
            s,
            coords: (a, b),
        }
    }
}

fn c2(prec: u32, a: &Complex, b: &Complex) -> Complex {
    Complex::with_val(prec, a * b)
}

fn div_checked(p: &FamilyParams, num: Complex, den: &Complex, what: &str) -> Result<Complex> {
    if cabs(den) < p.tol() {
        return Err(Error::ChartEscape(format!("{what} vanishes")));
    }
    Ok(Complex::with_val(p.prec(), &num / den))
}

/// Projective distance between `V` and `(delta, 1)` where
/// `V = (M1^{n-2} M2^2)^m (1, 0)`.
pub fn landing_condition(n: usize, m: usize, delta: &Complex) -> Result<Float> {
    if n < 3 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 3 and m >= 1, got ({n}, {m})"
        )));
    }
    let prec = delta.prec().0;
    let one = cint(prec, 1);
    let zero = Complex::new(prec);
    let m1 = [one.clone(), zero.clone(), one.clone(), delta.clone()];
    let m2 = [
        one.clone(),
        zero.clone(),
        one.clone(),
        Complex::with_val(prec, -delta),
    ];
    let cycle = mat2_mul(&mat2_pow(&m1, (n - 2) as u64), &mat2_pow(&m2, 2));
    let a = mat2_pow(&cycle, m as u64);
    let (v0, v1) = (&a[0], &a[2]);
    let norm_v = cabs(v0).max(&cabs(v1));
    if norm_v < crate::num::tolerance(prec) {
        return Err(Error::NumericFailure {
            msg: "V vanishes".into(),
            residual: norm_v.to_f64(),
        });
    }
    let minor = Complex::with_val(prec, v0 - c2(prec, delta, v1));
    let scale = norm_v * cabs(delta).max(&Float::with_val(prec, 1));
    Ok(cabs(&minor) / scale)
}

/// Level-1 chart to `P^2`: `[s1 : s1 eta1 : 1]` on `F1_0`, `[s1 : 1 : s1 eta1 + omega_s]` otherwise.
pub fn level1_to_projective(p: &FamilyParams, s: usize, c: &Point2) -> Result<ProjectivePoint> {
    let prec = p.prec();
    let (s1, e1) = c;
    let se = c2(prec, s1, e1);
    if s == 0 {
        ProjectivePoint::new(s1.clone(), se, p.one())
    } else {
        ProjectivePoint::new(s1.clone(), p.one(), se + p.omega_s(s))
    }
}

/// Inverse of [`level1_to_projective`] away from the fiber.
pub fn projective_to_level1(p: &FamilyParams, s: usize, q: &ProjectivePoint) -> Result<Point2> {
    let prec = p.prec();
    if s == 0 {
        let s1 = div_checked(p, q.t.clone(), &q.y, "y")?;
        let e1 = div_checked(p, q.x.clone(), &q.t, "t")?;
        Ok((s1, e1))
    } else {
        let s1 = div_checked(p, q.t.clone(), &q.x, "x")?;
        let w = Complex::with_val(prec, &q.y / &q.x) - p.omega_s(s);
        let e1 = div_checked(p, w, &s1, "s1")?;
        Ok((s1, e1))
    }
}

/// `(xi2, x2) -> (s1, eta1) = (xi2 x2, x2)`.
pub fn level2_to_level1(z: &Point2) -> Point2 {
    let prec = z.0.prec().0;
    (c2(prec, &z.0, &z.1), z.1.clone())
}

pub fn level1_to_level2(p: &FamilyParams, z: &Point2) -> Result<Point2> {
    Ok((div_checked(p, z.0.clone(), &z.1, "eta1")?, z.1.clone()))
}

fn expect_level(pt: &FiberChartPoint, level: u8, n: usize) -> Result<()> {
    if pt.level != level || pt.s >= n {
        return Err(Error::InvalidArgument(format!(
            "expected a level-{level} point with s < {n}, got level {} s {}",
            pt.level, pt.s
        )));
    }
    Ok(())
}

/// `f` in the level-1 charts, `F1_s -> F1_{s+1}`.
pub fn fiber_map_level1(p: &FamilyParams, pt: &FiberChartPoint) -> Result<FiberChartPoint> {
    expect_level(pt, 1, p.n)?;
    let prec = p.prec();
    let (s1, e1) = &pt.coords;
    let s = pt.s;
    let n = p.n;
    let de = c2(prec, &p.delta, e1);
    let (a, b) = if s == 0 {
        (s1.clone(), Complex::with_val(prec, s1 - &de))
    } else if s < n - 1 {
        let w = p.omega_s(s);
        let y = c2(prec, s1, e1) + w;
        let a = div_checked(p, s1.clone(), &y, "s1 eta1 + omega_s")?;
        let b = Complex::with_val(prec, &de / w) + &a;
        (a, b)
    } else if s1.is_zero() {
        (p.zero(), e1.clone())
    } else {
        let e2 = Complex::with_val(prec, e1.square_ref());
        let den = Complex::with_val(prec, s1 - &de) + c2(prec, &p.c, &c2(prec, s1, &e2));
        (
            div_checked(p, c2(prec, s1, e1), &den, "s1 - delta eta1 + c s1 eta1^2")?,
            e1.clone(),
        )
    };
    Ok(FiberChartPoint::new(1, (s + 1) % n, a, b))
}

/// `f` in the level-2 charts, `F2_s -> F2_{s+1}`.
pub fn fiber_map_level2(p: &FamilyParams, pt: &FiberChartPoint) -> Result<FiberChartPoint> {
    expect_level(pt, 2, p.n)?;
    let prec = p.prec();
    let (xi, x) = &pt.coords;
    let s = pt.s;
    let n = p.n;
    let (a, b) = if s == 0 {
        let d = Complex::with_val(prec, xi - &p.delta);
        let a = div_checked(p, xi.clone(), &d, "xi2 - delta").map_err(indet)?;
        (a, c2(prec, x, &d))
    } else if s < n - 1 {
        let w = p.omega_s(s);
        let x2xi = c2(prec, &Complex::with_val(prec, x.square_ref()), xi);
        let d = c2(prec, &p.delta, &x2xi) + c2(prec, w, &Complex::with_val(prec, xi + &p.delta));
        let a = div_checked(
            p,
            c2(prec, w, xi),
            &d,
            "delta x2^2 xi2 + omega_s (xi2 + delta)",
        )
        .map_err(indet)?;
        let e = c2(prec, w, &Complex::with_val(prec, w + &x2xi));
        let b =
            div_checked(p, c2(prec, x, &d), &e, "omega_s (omega_s + x2^2 xi2)").map_err(indet)?;
        (a, b)
    } else {
        let x2xi = c2(prec, &Complex::with_val(prec, x.square_ref()), xi);
        let d = Complex::with_val(prec, xi - &p.delta) + c2(prec, &p.c, &x2xi);
        (
            div_checked(p, xi.clone(), &d, "xi2 - delta + c x2^2 xi2").map_err(indet)?,
            x.clone(),
        )
    };
    Ok(FiberChartPoint::new(2, (s + 1) % n, a, b))
}

fn indet(e: Error) -> Error {
    match e {
        Error::ChartEscape(m) => Error::Indeterminate(m),
        other => other,
    }
}

/// Mobius matrix of the level-2 fiber restriction at `s`.
pub fn level2_fiber_mobius(p: &FamilyParams, s: usize) -> [Complex; 4] {
    let prec = p.prec();
    let d = if s == 0 || s == p.n - 1 {
        Complex::with_val(prec, -&p.delta)
    } else {
        p.delta.clone()
    };
    [p.one(), p.zero(), p.one(), d]
}

fn mobius_apply(m: &[Complex; 4], z: &Complex) -> Complex {
    let prec = z.prec().0;
    let num = c2(prec, &m[0], z) + &m[1];
    let den = c2(prec, &m[2], z) + &m[3];
    Complex::with_val(prec, &num / &den)
}

fn mobius_derivative(m: &[Complex; 4], z: &Complex) -> Complex {
    let prec = z.prec().0;
    let det = c2(prec, &m[0], &m[3]) - c2(prec, &m[1], &m[2]);
    let den = c2(prec, &m[2], z) + &m[3];
    Complex::with_val(prec, &det / Complex::with_val(prec, den.square_ref()))
}

/// Factor multiplying `x2` on the fiber `x2 = 0` at `(xi2, 0)_s`.
fn x_multiplier(p: &FamilyParams, s: usize, xi: &Complex) -> Complex {
    let prec = p.prec();
    if s == 0 {
        Complex::with_val(prec, xi - &p.delta)
    } else if s < p.n - 1 {
        Complex::with_val(prec, Complex::with_val(prec, xi + &p.delta) / p.omega_s(s))
    } else {
        p.one()
    }
}

/// Centers of the third blowup: `(s, l, xi2)` for the orbit of `(1, 0)_0` on `F2`.
#[derive(Clone, Debug)]
pub struct Level3Center {
    pub s: usize,
    pub l: usize,
    pub xi: Complex,
}

pub fn level3_centers(p: &FamilyParams) -> Vec<Level3Center> {
    let n = p.n;
    let mut out = Vec::with_capacity(n * p.m);
    let mut xi = p.one();
    for j in 0..n * p.m {
        if j > 0 {
            xi = mobius_apply(&level2_fiber_mobius(p, (j - 1) % n), &xi);
        }
        out.push(Level3Center {
            s: j % n,
            l: j / n + 1,
            xi: xi.clone(),
        });
    }
    out
}

/// `f` on the third-level fiber over center `j`, in the coordinate
/// `u = (xi2 - xi_c) / x2`, restricted to `x2 = 0`.
pub fn level3_fiber_map(
    p: &FamilyParams,
    centers: &[Level3Center],
    j: usize,
    u: &Complex,
) -> Result<Complex> {
    if j + 1 >= centers.len() {
        return Err(Error::InvalidArgument(format!(
            "center {j} has no successor fiber"
        )));
    }
    let c = &centers[j];
    let prec = p.prec();
    let dm = mobius_derivative(&level2_fiber_mobius(p, c.s), &c.xi);
    let mu = x_multiplier(p, c.s, &c.xi);
    div_checked(p, c2(prec, u, &dm), &mu, "x2 multiplier")
}

/// `Sigma_2 = {y = 0}` at `[1 : x : 0]` goes to `u = delta x` on `F3_{0,1}`.
pub fn sigma2_to_f3(p: &FamilyParams, x: &Complex) -> Complex {
    c2(p.prec(), &p.delta, x)
}

/// `F3_{n-1,m} -> Sigma_1`: `(u, x2) -> (x, y) = (x2, (u + c x2 xi2) / xi2)` with `xi2 = delta + u x2`.
pub fn f3_last_to_affine(p: &FamilyParams, u: &Complex, x2: &Complex) -> Result<Point2> {
    let prec = p.prec();
    let xi = c2(prec, u, x2) + &p.delta;
    let num = Complex::with_val(prec, u + c2(prec, &c2(prec, &p.c, x2), &xi));
    Ok((x2.clone(), div_checked(p, num, &xi, "xi2")?))
}

/// One marked-point comparison.
#[derive(Clone, Debug, Serialize)]
pub struct StepCheck {
    pub stage: String,
    pub step: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitPatternReport {
    pub samples_per_fiber: usize,
    pub seed: u64,
    /// Chart formulas against `f` on `P^2`, level 1.
    pub level1_max_residual: f64,
    /// Distance to the target fiber relative to the start distance, level 1.
    pub level1_max_fiber_ratio: f64,
    pub level1_cycle_factor: ComplexJson,
    pub level2_max_residual: f64,
    pub level2_max_fiber_ratio: f64,
    pub level3_sigma2_residual: f64,
    pub level3_max_residual: f64,
    pub level3_landing_residual: f64,
    pub sigma1_distance: f64,
    pub sigma1_jacobian_det: ComplexJson,
    pub sigma1_jacobian_residual: f64,
    pub fiber_sequence: Vec<String>,
    pub passed: bool,
}

fn rand_unit(rng: &mut ChaCha8Rng, prec: u32, r: f64) -> Complex {
    let a: f64 = rng.gen_range(-r..r);
    let b: f64 = rng.gen_range(-r..r);
    cx(prec, a, b)
}

/// Tracks seeded marked points through the charts and checks the fiber
/// orbit pattern `F^j_0 -> ... -> F^j_{n-1} -> F^j_0` and
/// `Sigma_2 -> F3_{0,1} -> ... -> F3_{n-1,m} -> Sigma_1`.
pub fn orbit_pattern_check(p: &FamilyParams, seed: u64) -> Result<OrbitPatternReport> {
    const SAMPLES: usize = 10;
    let prec = p.prec();
    let n = p.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = pow2_neg(prec, prec / 4);
    let eps_c = Complex::with_val(prec, &eps);
    let loose = pow2_neg(prec, prec / 8).to_f64();
    let strict = p.tol().to_f64() * 1e6;
    let mut seq = Vec::new();

    let mut l1_res = 0f64;
    let mut l1_ratio = 0f64;
    let mut factor = p.one();
    for s in 0..n {
        seq.push(format!("F1_{s}->F1_{}", (s + 1) % n));
        let on_fiber = fiber_map_level1(p, &FiberChartPoint::new(1, s, p.zero(), p.one()))?;
        factor *= &on_fiber.coords.1;
        for _ in 0..SAMPLES {
            let eta = rand_unit(&mut rng, prec, 2.0);
            let pt = FiberChartPoint::new(1, s, eps_c.clone(), eta.clone());
            let chart = fiber_map_level1(p, &pt)?;
            let img = p.map_homogeneous(&level1_to_projective(p, s, &pt.coords)?)?;
            let back = projective_to_level1(p, chart.s, &img)?;
            let r = rel(&back.0, &chart.coords.0).max(rel(&back.1, &chart.coords.1));
            l1_res = l1_res.max(r);
            let restricted = fiber_map_level1(p, &FiberChartPoint::new(1, s, p.zero(), eta))?;
            let drift = cdist(&back.1, &restricted.coords.1).to_f64();
            let ratio = (cabs(&back.0).to_f64() + drift) / eps.to_f64();
            l1_ratio = l1_ratio.max(ratio);
            if r > strict || ratio > 1e6 {
                return Err(Error::PatternViolation {
                    step: s,
                    msg: format!(
                        "level-1 marked point misses F1_{} (residual {r:e}, ratio {ratio:e})",
                        chart.s
                    ),
                });
            }
        }
    }

    let mut l2_res = 0f64;
    let mut l2_ratio = 0f64;
    for s in 0..n {
        seq.push(format!("F2_{s}->F2_{}", (s + 1) % n));
        for _ in 0..SAMPLES {
            let xi = rand_unit(&mut rng, prec, 2.0);
            let pt = FiberChartPoint::new(2, s, xi.clone(), eps_c.clone());
            let chart = fiber_map_level2(p, &pt)?;
            let proj = level1_to_projective(p, s, &level2_to_level1(&pt.coords))?;
            let img = p.map_homogeneous(&proj)?;
            let back = level1_to_level2(p, &projective_to_level1(p, chart.s, &img)?)?;
            let r = rel(&back.0, &chart.coords.0).max(rel(&back.1, &chart.coords.1));
            l2_res = l2_res.max(r);
            let m = level2_fiber_mobius(p, s);
            let drift = cdist(&back.0, &mobius_apply(&m, &xi)).to_f64();
            let ratio = (cabs(&back.1).to_f64() + drift) / eps.to_f64();
            l2_ratio = l2_ratio.max(ratio);
            if r > loose || ratio > 1e6 {
                return Err(Error::PatternViolation {
                    step: s,
                    msg: format!(
                        "level-2 marked point misses F2_{} (residual {r:e}, ratio {ratio:e})",
                        chart.s
                    ),
                });
            }
        }
    }

    let centers = level3_centers(p);
    let last = centers.last().unwrap();
    let landing = cdist(&last.xi, &p.delta).to_f64();
    if landing > strict {
        return Err(Error::PatternViolation {
            step: centers.len() - 1,
            msg: format!(
                "last third-level center misses (delta, 0)_{} by {landing:e}",
                n - 1
            ),
        });
    }
    let mut s2_res = 0f64;
    let mut l3_res = 0f64;
    let mut sig1 = 0f64;
    for k in 0..SAMPLES {
        let x = rand_unit(&mut rng, prec, 1.0);
        let q = ProjectivePoint::new(p.one(), x.clone(), eps_c.clone())?;
        let img = p.map_homogeneous(&q)?;
        let (xi, x2) = level1_to_level2(p, &projective_to_level1(p, 0, &img)?)?;
        let mut cur = FiberChartPoint::new(2, 0, xi, x2);
        let mut u = Complex::with_val(prec, &cur.coords.0 - &centers[0].xi) / &cur.coords.1;
        let r0 = cdist(&u, &sigma2_to_f3(p, &x)).to_f64() / (1.0 + cabs(&u).to_f64());
        s2_res = s2_res.max(r0);
        if r0 > loose {
            return Err(Error::PatternViolation {
                step: 0,
                msg: format!("Sigma_2 misses F3_{{0,1}} ({r0:e})"),
            });
        }
        if k == 0 {
            seq.push("Sigma2->F3_0,1".into());
        }
        for j in 0..centers.len() - 1 {
            let pred = level3_fiber_map(p, &centers, j, &u)?;
            cur = fiber_map_level2(p, &cur)?;
            let nc = &centers[j + 1];
            if cur.s != nc.s {
                return Err(Error::PatternViolation {
                    step: j + 1,
                    msg: "fiber index mismatch".into(),
                });
            }
            let un = Complex::with_val(prec, &cur.coords.0 - &nc.xi) / &cur.coords.1;
            let r = cdist(&un, &pred).to_f64() / (1.0 + cabs(&pred).to_f64());
            l3_res = l3_res.max(r);
            if r > loose {
                return Err(Error::PatternViolation {
                    step: j + 1,
                    msg: format!("marked point misses F3_{{{},{}}} ({r:e})", nc.s, nc.l),
                });
            }
            if k == 0 {
                let pc = &centers[j];
                seq.push(format!("F3_{},{}->F3_{},{}", pc.s, pc.l, nc.s, nc.l));
            }
            u = un;
        }
        let proj = level1_to_projective(p, n - 1, &level2_to_level1(&cur.coords))?;
        let img = p.map_homogeneous(&proj)?;
        let aff = img
            .to_affine(&p.tol())
            .ok_or_else(|| Error::PatternViolation {
                step: centers.len(),
                msg: "image of F3 fiber is at infinity".into(),
            })?;
        let d = cabs(&aff.0).to_f64() / eps.to_f64();
        sig1 = sig1.max(d);
        let want = f3_last_to_affine(p, &u, &cur.coords.1)?;
        let r = cdist(&aff.1, &want.1).to_f64() / (1.0 + cabs(&want.1).to_f64());
        if d > 1e6 || r > loose {
            return Err(Error::PatternViolation {
                step: centers.len(),
                msg: format!("last fiber does not reach Sigma_1 (|x|/eps {d:e}, residual {r:e})"),
            });
        }
    }
    seq.push(format!("F3_{},{}->Sigma1", n - 1, p.m));

    let u0 = p.one();
    let det = sigma1_jacobian(p, &u0)?;
    let want = Complex::with_val(prec, -p.delta.clone().recip());
    let jres = cdist(&det, &want).to_f64();
    if cabs(&det).to_f64() < 1e-3 {
        return Err(Error::PatternViolation {
            step: centers.len(),
            msg: "F3 -> Sigma_1 is singular".into(),
        });
    }
    Ok(OrbitPatternReport {
        samples_per_fiber: SAMPLES,
        seed,
        level1_max_residual: l1_res,
        level1_max_fiber_ratio: l1_ratio,
        level1_cycle_factor: (&factor).into(),
        level2_max_residual: l2_res,
        level2_max_fiber_ratio: l2_ratio,
        level3_sigma2_residual: s2_res,
        level3_max_residual: l3_res,
        level3_landing_residual: landing,
        sigma1_distance: sig1,
        sigma1_jacobian_det: (&det).into(),
        sigma1_jacobian_residual: jres,
        fiber_sequence: seq,
        passed: true,
    })
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    cdist(a, b).to_f64() / (1.0 + cabs(b).to_f64())
}

/// Numerical Jacobian determinant of `(u, x2) -> f(point)` in affine
/// coordinates near `x2 = 0` (at `x2 = 2^{-prec/4}`, the fiber itself maps
/// through `e1`), by central differences through `P^2`.
pub fn sigma1_jacobian(p: &FamilyParams, u: &Complex) -> Result<Complex> {
    let prec = p.prec();
    let h = Complex::with_val(prec, pow2_neg(prec, prec / 3));
    let x0 = Complex::with_val(prec, pow2_neg(prec, prec / 4));
    let eval = |uu: &Complex, xx: &Complex| -> Result<Point2> {
        let xi = c2(prec, uu, xx) + &p.delta;
        let lv1 = level2_to_level1(&(xi, xx.clone()));
        let img = p.map_homogeneous(&level1_to_projective(p, p.n - 1, &lv1)?)?;
        img.to_affine(&p.tol())
            .ok_or_else(|| Error::ChartEscape("image at infinity".into()))
    };
    let d = |a: Point2, b: Point2| -> (Complex, Complex) {
        let two_h = Complex::with_val(prec, &h * 2u32);
        (
            Complex::with_val(prec, &a.0 - &b.0) / &two_h,
            Complex::with_val(prec, &a.1 - &b.1) / &two_h,
        )
    };
    let du = d(
        eval(&Complex::with_val(prec, u + &h), &x0)?,
        eval(&Complex::with_val(prec, u - &h), &x0)?,
    );
    let dx = d(
        eval(u, &Complex::with_val(prec, &x0 + &h))?,
        eval(u, &Complex::with_val(prec, &x0 - &h))?,
    );
    Ok(c2(prec, &du.0, &dx.1) - c2(prec, &dx.0, &du.1))
}

/// Multipliers at the two fixed points created by blowing up a fixed point
/// with multipliers `nu1` (direction X) and `nu2` (direction Y):
/// `X cap P` gets `(nu1, nu2/nu1)`, `Y cap P` gets `(nu2, nu1/nu2)`.
pub fn blowup_multipliers(
    nu1: &Complex,
    nu2: &Complex,
) -> ((Complex, Complex), (Complex, Complex)) {
    let prec = nu1.prec().0;
    (
        (nu1.clone(), Complex::with_val(prec, nu2 / nu1)),
        (nu2.clone(), Complex::with_val(prec, nu1 / nu2)),
    )
}

/// Same rule on exponents of `lambda`.
pub fn blowup_exponents(a: i32, b: i32) -> ((i32, i32), (i32, i32)) {
    ((a, b - a), (b, a - b))
}

/// Fixed point of the model with multipliers `lambda^along` along the
/// strict transform through it and `lambda^normal` along the newest fiber.
#[derive(Clone, Debug)]
pub struct MultiplierNode {
    pub label: String,
    pub exp_along: i32,
    pub exp_normal: i32,
    pub mult_along: Complex,
    pub mult_normal: Complex,
    pub children: Vec<MultiplierNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierNodeJson {
    pub label: String,
    pub lambda_power_along: i32,
    pub lambda_power_normal: i32,
    pub along: ComplexJson,
    pub normal: ComplexJson,
    pub children: Vec<MultiplierNodeJson>,
}

impl MultiplierNode {
    fn leaf(
        label: &str,
        lambda: &Complex,
        (a, b): (i32, i32),
        (ma, mb): (Complex, Complex),
    ) -> Self {
        debug_assert!(cdist(&ma, &cpowi(lambda, a as i64)) < 1e-20);
        debug_assert!(cdist(&mb, &cpowi(lambda, b as i64)) < 1e-20);
        MultiplierNode {
            label: label.into(),
            exp_along: a,
            exp_normal: b,
            mult_along: ma,
            mult_normal: mb,
            children: Vec::new(),
        }
    }

    pub fn find(&self, label: &str) -> Option<&MultiplierNode> {
        if self.label == label {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(label))
    }

    pub fn exponents(&self) -> (i32, i32) {
        (self.exp_along, self.exp_normal)
    }

    pub fn to_json(&self) -> MultiplierNodeJson {
        MultiplierNodeJson {
            label: self.label.clone(),
            lambda_power_along: self.exp_along,
            lambda_power_normal: self.exp_normal,
            along: (&self.mult_along).into(),
            normal: (&self.mult_normal).into(),
            children: self.children.iter().map(|c| c.to_json()).collect(),
        }
    }
}

/// Multiplier tree of the model `(L, cal L)` over a point `w_s` of `Sigma_0`.
#[derive(Clone, Debug)]
pub struct LinearModel {
    pub root: MultiplierNode,
    /// Jacobian of the level-2 return map at `q_s` (numerical, nonlinear side).
    pub q_nonlinear: (Complex, Complex),
    pub q_cross_check_residual: Float,
    /// Model values at the two points called `r_s`: before and after the third blowup.
    pub r_s_single_blowup: (i32, i32),
    pub r_s_after_third_blowup: (i32, i32),
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearModelJson {
    pub tree: MultiplierNodeJson,
    pub q_nonlinear: [ComplexJson; 2],
    pub q_cross_check_residual: f64,
    pub r_s_single_blowup: (i32, i32),
    pub r_s_after_third_blowup: (i32, i32),
}

impl LinearModel {
    pub fn to_json(&self) -> LinearModelJson {
        LinearModelJson {
            tree: self.root.to_json(),
            q_nonlinear: [(&self.q_nonlinear.0).into(), (&self.q_nonlinear.1).into()],
            q_cross_check_residual: self.q_cross_check_residual.to_f64(),
            r_s_single_blowup: self.r_s_single_blowup,
            r_s_after_third_blowup: self.r_s_after_third_blowup,
        }
    }
}

/// Builds the model tree from the `Sigma_0` data `(1, lambda)` and
/// cross-checks `q_s` against the nonlinear return map.
pub fn build_linear_model(p: &FamilyParams) -> Result<LinearModel> {
    let prec = p.prec();
    let lam = &p.lambda;
    let one = p.one();
    let node =
        |label: &str, e: (i32, i32), m: (Complex, Complex)| MultiplierNode::leaf(label, lam, e, m);

    // w_s: along Sigma_0 and along Lambda_x
    let w = (0, 1);
    let (ps_e, lf1_e) = blowup_exponents(w.0, w.1);
    let (ps_m, lf1_m) = blowup_multipliers(&one, lam);
    let (q_e, r_e) = blowup_exponents(lf1_e.1, lf1_e.0);
    let (q_m, r_m) = blowup_multipliers(&lf1_m.1, &lf1_m.0);
    let (f23_e, lf3_e) = blowup_exponents(r_e.1, r_e.0);
    let (f23_m, lf3_m) = blowup_multipliers(&r_m.1, &r_m.0);

    let mut r_node = node("r_s", r_e, r_m);
    r_node.children = vec![
        node("F2_s cap F3~_s", f23_e, f23_m),
        node("Lambda_x cap F3~_s", lf3_e, lf3_m),
    ];
    let mut lf1 = node("Lambda_x cap F1_s", lf1_e, lf1_m);
    lf1.children = vec![node("q_s", q_e, q_m.clone()), r_node];
    let mut root = node("w_s", w, (one.clone(), lam.clone()));
    root.children = vec![node("p_s", ps_e, ps_m), lf1];

    let q_nonlinear = level2_return_jacobian(p)?;
    let want_xi = cpowi(lam, 2);
    let want_x = Complex::with_val(prec, lam.recip_ref());
    let res = cdist(&q_nonlinear.0, &want_xi).max(&cdist(&q_nonlinear.1, &want_x));
    let model = [q_m.0.clone(), q_m.1.clone()];
    let model_match = (cdist(&model[0], &want_x) < p.tol() && cdist(&model[1], &want_xi) < p.tol())
        || (cdist(&model[0], &want_xi) < p.tol() && cdist(&model[1], &want_x) < p.tol());
    if res > pow2_neg(prec, prec / 4) || !model_match {
        return Err(Error::Consistency(format!(
            "q_s multipliers disagree with the return map (residual {:e})",
            res.to_f64()
        )));
    }
    Ok(LinearModel {
        root,
        q_nonlinear,
        q_cross_check_residual: res,
        r_s_single_blowup: r_e,
        r_s_after_third_blowup: f23_e,
    })
}

/// Diagonal of the Jacobian at `(0, 0)_0` of the composite of the `n`
/// level-2 chart maps, by central differences.
pub fn level2_return_jacobian(p: &FamilyParams) -> Result<(Complex, Complex)> {
    let prec = p.prec();
    let h = Complex::with_val(prec, pow2_neg(prec, prec / 3));
    let run = |xi: Complex, x: Complex| -> Result<Point2> {
        let mut pt = FiberChartPoint::new(2, 0, xi, x);
        for _ in 0..p.n {
            pt = fiber_map_level2(p, &pt)?;
        }
        Ok(pt.coords)
    };
    let z = p.zero();
    let two_h = Complex::with_val(prec, &h * 2u32);
    let a = run(h.clone(), z.clone())?;
    let b = run(Complex::with_val(prec, -&h), z.clone())?;
    let dxi = Complex::with_val(prec, &a.0 - &b.0) / &two_h;
    let a = run(z.clone(), h.clone())?;
    let b = run(z, Complex::with_val(prec, -&h))?;
    let dx = Complex::with_val(prec, &a.1 - &b.1) / &two_h;
    Ok((dxi, dx))
}

/// Invariants of the composite fiber Mobius map around the level-2 cycle.
#[derive(Clone, Debug, Serialize)]
pub struct MobiusInvariant {
    pub matrix: [ComplexJson; 4],
    /// `tr^2 / det` of the composite.
    pub trace_invariant: ComplexJson,
    /// `lambda^2 + 2 + lambda^{-2}`.
    pub predicted: ComplexJson,
    pub trace_residual: f64,
    /// Derivative at the fixed point `xi2 = 0` against `lambda^2`.
    pub derivative_at_zero_residual: f64,
    /// Derivative at the second fixed point against `lambda^{-2}`.
    pub derivative_at_other_residual: f64,
    pub multiplier_ratio_at_zero: ComplexJson,
}

pub fn mobius_composite_invariant(p: &FamilyParams) -> Result<MobiusInvariant> {
    let prec = p.prec();
    let mut acc = crate::num::mat2_identity(prec);
    for s in 0..p.n {
        acc = mat2_mul(&level2_fiber_mobius(p, s), &acc);
    }
    let tr = Complex::with_val(prec, &acc[0] + &acc[3]);
    let det = c2(prec, &acc[0], &acc[3]) - c2(prec, &acc[1], &acc[2]);
    let inv = Complex::with_val(prec, tr.square_ref()) / &det;
    let l2 = cpowi(&p.lambda, 2);
    let l2i = cpowi(&p.lambda, -2);
    let predicted = Complex::with_val(prec, &l2 + &l2i) + 2u32;
    let d0 = mobius_derivative(&acc, &p.zero());
    // second fixed point of xi -> xi / (k xi + d): xi = (1 - d) / k
    let k = &acc[2];
    if cabs(k) < p.tol() {
        return Err(Error::Consistency("composite Mobius map is affine".into()));
    }
    let other = Complex::with_val(prec, Complex::with_val(prec, 1u32 - &acc[3]) / k);
    let d1 = mobius_derivative(&acc, &other);
    // ratio of the two q_s multipliers, lambda^2 / lambda^{-1}
    let ratio = Complex::with_val(prec, &l2 * &p.lambda);
    Ok(MobiusInvariant {
        matrix: [
            (&acc[0]).into(),
            (&acc[1]).into(),
            (&acc[2]).into(),
            (&acc[3]).into(),
        ],
        trace_invariant: (&inv).into(),
        predicted: (&predicted).into(),
        trace_residual: cdist(&inv, &predicted).to_f64(),
        derivative_at_zero_residual: cdist(&d0, &l2).to_f64(),
        derivative_at_other_residual: cdist(&d1, &l2i).to_f64(),
        multiplier_ratio_at_zero: (&ratio).into(),
    })
}
