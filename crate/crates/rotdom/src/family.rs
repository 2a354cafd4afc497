//! The map family `f(x, y) = (y, -delta x + c y + 1/y)` and its parameters.

use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{
    cabs, cdist, cint, cpowi, eig2, mat2_pow, pi, tolerance, with_prec, BigComplex, ComplexJson,
};
use crate::salem::{chi_polynomial, cyclotomic_part, find_roots, unit_circle_roots, IntPolynomial};

pub type Point2 = (Complex, Complex);

/// Constructor arguments for [`FamilyParams`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpec {
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub root_index: usize,
    pub sqrt_branch: i32,
    pub precision_bits: u32,
    /// Multiply the selected root by `1 + eps` before building (skips the root checks).
    pub delta_perturb: Option<f64>,
}

impl ParamSpec {
    pub fn new(n: usize, m: usize, j: usize) -> Self {
        ParamSpec {
            n,
            m,
            j,
            root_index: 0,
            sqrt_branch: 1,
            precision_bits: crate::num::DEFAULT_PRECISION,
            delta_perturb: None,
        }
    }

    pub fn root_index(mut self, k: usize) -> Self {
        self.root_index = k;
        self
    }

    pub fn sqrt_branch(mut self, b: i32) -> Self {
        self.sqrt_branch = b;
        self
    }

    pub fn precision(mut self, p: u32) -> Self {
        self.precision_bits = p;
        self
    }

    pub fn perturb(mut self, eps: f64) -> Self {
        self.delta_perturb = Some(eps);
        self
    }

    pub fn build(&self) -> Result<FamilyParams> {
        FamilyParams::from_spec(self)
    }
}

/// Validated parameter pack for one automorphism.
#[derive(Clone, Debug)]
pub struct FamilyParams {
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub root_index: usize,
    pub sqrt_branch: i32,
    pub delta: BigComplex,
    pub sqrt_delta: BigComplex,
    pub c: BigComplex,
    pub lambda: BigComplex,
    /// `omega[s - 1] = omega_s` for `1 <= s <= n - 1`.
    pub omega: Vec<BigComplex>,
    pub omega_star: Option<BigComplex>,
    pub precision_bits: u32,
    pub chi: IntPolynomial,
    pub delta_perturb: Option<f64>,
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn validate_indices(n: usize, m: usize, j: usize) -> Result<()> {
    if !(n >= 4 && m >= 1 || n == 3 && m >= 2) {
        return Err(Error::InvalidArgument(format!(
            "(n, m) = ({n}, {m}) is outside the range n >= 4, m >= 1 or n = 3, m >= 2"
        )));
    }
    if j == 0 || j >= n || gcd(j, n) != 1 {
        return Err(Error::InvalidArgument(format!(
            "j = {j} must satisfy 0 < j < n and gcd(j, n) = 1"
        )));
    }
    Ok(())
}

/// `omega_1 = c`, `omega_{s+1} = c - delta / omega_s`, up to `omega_{n-1}`.
pub fn omega_orbit(n: usize, c: &Complex, delta: &Complex) -> Vec<Complex> {
    let prec = c.prec().0;
    let mut om = vec![c.clone()];
    for _ in 2..n {
        let last = om.last().unwrap();
        let next = Complex::with_val(prec, c - Complex::with_val(prec, delta / last));
        om.push(next);
    }
    om
}

impl FamilyParams {
    pub fn from_spec(spec: &ParamSpec) -> Result<Self> {
        let ParamSpec {
            n,
            m,
            j,
            root_index,
            sqrt_branch,
            precision_bits: prec,
            delta_perturb,
        } = spec.clone();
        validate_indices(n, m, j)?;
        if sqrt_branch != 1 && sqrt_branch != -1 {
            return Err(Error::InvalidArgument(format!(
                "sqrt_branch must be +1 or -1, got {sqrt_branch}"
            )));
        }
        if prec < crate::num::MIN_PRECISION {
            return Err(Error::InvalidArgument(format!(
                "precision {prec} below 64 bits"
            )));
        }
        let tol = tolerance(prec);
        let chi = chi_polynomial(n, m)?;
        let roots = find_roots(&chi, prec)?;
        let unit = unit_circle_roots(&roots, &tol);
        if root_index >= unit.len() {
            return Err(Error::InvalidArgument(format!(
                "root_index {root_index} out of range: chi_{{{n},{m}}} has {} unit-circle roots",
                unit.len()
            )));
        }
        let mut delta = unit[root_index].clone();
        let d3 = Complex::with_val(prec, cpowi(&delta, 3) + 1u32);
        if cabs(&d3) < tol {
            return Err(Error::ParameterRejected("delta^3 = -1".into()));
        }
        let (cyc, _) = cyclotomic_part(&chi)?;
        if !cyc.is_constant() && cabs(&cyc.eval_complex(&delta)) < tol {
            return Err(Error::ParameterRejected(format!(
                "root {root_index} of chi_{{{n},{m}}} is a root of unity"
            )));
        }
        if let Some(eps) = delta_perturb {
            delta *= Complex::with_val(prec, (1.0 + eps, 0.0));
        }
        let mut sqrt_delta = Complex::with_val(prec, delta.sqrt_ref());
        if sqrt_branch < 0 {
            sqrt_delta = -sqrt_delta;
        }
        let angle = pi(prec) * j as u32 / n as u32;
        let c = Complex::with_val(prec, &sqrt_delta * angle.cos()) * 2u32;
        let omega = omega_orbit(n, &c, &delta);
        for (k, w) in omega.iter().enumerate().take(n - 2) {
            if cabs(w) < tol {
                return Err(Error::Consistency(format!(
                    "omega_{} vanishes before omega_{}",
                    k + 1,
                    n - 1
                )));
            }
        }
        let last = &omega[n - 2];
        if cabs(last) >= tol {
            return Err(Error::Consistency(format!(
                "omega_{} = {:e} does not vanish (wrong branch/root pairing)",
                n - 1,
                cabs(last).to_f64()
            )));
        }
        let (lambda, omega_star) = lambda_from(n, &delta, &omega);
        if let Some(ws) = &omega_star {
            let r = Complex::with_val(prec, ws.square_ref()) - &delta;
            if cabs(&r) >= tol {
                return Err(Error::Consistency("omega_*^2 differs from delta".into()));
            }
        }
        Ok(FamilyParams {
            n,
            m,
            j,
            root_index,
            sqrt_branch,
            delta,
            sqrt_delta,
            c,
            lambda,
            omega,
            omega_star,
            precision_bits: prec,
            chi,
            delta_perturb,
        })
    }

    /// Same parameters with `c` replaced by `c * factor` (no membership check).
    /// `lambda` is kept; the omega orbit is recomputed.
    pub fn with_scaled_c(&self, factor: &Complex) -> FamilyParams {
        let mut q = self.clone();
        q.c = Complex::with_val(self.precision_bits, &self.c * factor);
        q.omega = omega_orbit(self.n, &q.c, &q.delta);
        q
    }

    pub fn tol(&self) -> Float {
        tolerance(self.precision_bits)
    }

    pub fn prec(&self) -> u32 {
        self.precision_bits
    }

    /// `omega_s` for `1 <= s <= n - 1`.
    pub fn omega_s(&self, s: usize) -> &Complex {
        &self.omega[s - 1]
    }

    pub fn zero(&self) -> Complex {
        Complex::new(self.precision_bits)
    }

    pub fn one(&self) -> Complex {
        cint(self.precision_bits, 1)
    }

    /// `g(w) = c - delta / w`, the restriction to the line at infinity.
    pub fn g(&self, w: &Complex) -> Complex {
        let prec = self.prec();
        Complex::with_val(prec, &self.c - Complex::with_val(prec, &self.delta / w))
    }

    pub fn map_affine(&self, z: &Point2) -> Result<Point2> {
        let prec = self.prec();
        let (x, y) = z;
        if cabs(y) < self.tol() {
            return Err(Error::ExceptionalLocus("y = 0 lies on Sigma_2".into()));
        }
        let mut v = Complex::with_val(prec, &self.c * y);
        v -= Complex::with_val(prec, &self.delta * x);
        v += Complex::with_val(prec, y.recip_ref());
        Ok((y.clone(), v))
    }

    /// `f^{-1}(x, y) = ((c x - y + 1/x)/delta, x)`.
    pub fn map_inverse(&self, z: &Point2) -> Result<Point2> {
        let prec = self.prec();
        let (x, y) = z;
        if cabs(x) < self.tol() {
            return Err(Error::ExceptionalLocus("x = 0 lies on Sigma_1".into()));
        }
        let mut v = Complex::with_val(prec, &self.c * x);
        v -= y;
        v += Complex::with_val(prec, x.recip_ref());
        v /= &self.delta;
        Ok((v, x.clone()))
    }

    /// `f[t:x:y] = [ty : y^2 : -delta x y + c y^2 + t^2]`.
    pub fn map_homogeneous(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        let prec = self.prec();
        let (t, x, y) = (&p.t, &p.x, &p.y);
        let nt = Complex::with_val(prec, t * y);
        let y2 = Complex::with_val(prec, y.square_ref());
        let mut nz = Complex::with_val(prec, &self.c * &y2);
        nz -= Complex::with_val(prec, &self.delta * x) * y;
        nz += Complex::with_val(prec, t.square_ref());
        ProjectivePoint::new(nt, y2, nz)
            .map_err(|_| Error::Indeterminate(format!("image of {p:?} vanishes identically")))
    }

    /// Mobius matrix `[[0, -delta], [1, c]]` of `g`.
    pub fn mobius_matrix(&self) -> [Complex; 4] {
        let prec = self.prec();
        [
            Complex::new(prec),
            Complex::with_val(prec, -&self.delta),
            cint(prec, 1),
            self.c.clone(),
        ]
    }

    pub fn to_json(&self) -> FamilyParamsJson {
        FamilyParamsJson {
            n: self.n,
            m: self.m,
            j: self.j,
            root_index: self.root_index,
            sqrt_branch: self.sqrt_branch,
            delta: (&self.delta).into(),
            sqrt_delta: (&self.sqrt_delta).into(),
            c: (&self.c).into(),
            lambda: (&self.lambda).into(),
            omega: self.omega.iter().map(ComplexJson::from).collect(),
            omega_star: self.omega_star.as_ref().map(ComplexJson::from),
            precision: self.precision_bits,
            delta_perturb: self.delta_perturb,
        }
    }
}

fn lambda_from(n: usize, delta: &Complex, omega: &[Complex]) -> (Complex, Option<Complex>) {
    let prec = delta.prec().0;
    if n.is_multiple_of(2) {
        let l = -Complex::with_val(prec, cpowi(delta, -((n / 2) as i64)));
        (l, None)
    } else {
        let ws = omega[(n - 1) / 2 - 1].clone();
        let d = Complex::with_val(prec, cpowi(delta, ((n - 1) / 2) as i64) * &ws);
        (-Complex::with_val(prec, d.recip_ref()), Some(ws))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyParamsJson {
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub root_index: usize,
    pub sqrt_branch: i32,
    pub delta: ComplexJson,
    pub sqrt_delta: ComplexJson,
    pub c: ComplexJson,
    pub lambda: ComplexJson,
    pub omega: Vec<ComplexJson>,
    pub omega_star: Option<ComplexJson>,
    pub precision: u32,
    pub delta_perturb: Option<f64>,
}

/// Point of `P^2`, normalized so the largest coordinate is exactly 1.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    pub t: Complex,
    pub x: Complex,
    pub y: Complex,
}

impl ProjectivePoint {
    pub fn new(t: Complex, x: Complex, y: Complex) -> Result<Self> {
        let prec = t.prec().0;
        let (at, ax, ay) = (cabs(&t), cabs(&x), cabs(&y));
        let biggest = if at >= ax && at >= ay {
            t.clone()
        } else if ax >= ay {
            x.clone()
        } else {
            y.clone()
        };
        let scale = at.max(&ax).max(&ay);
        if scale.is_zero() || scale < tolerance(prec) * tolerance(prec) * tolerance(prec) {
            return Err(Error::Indeterminate(
                "all homogeneous coordinates vanish".into(),
            ));
        }
        let inv = Complex::with_val(prec, biggest.recip_ref());
        Ok(ProjectivePoint {
            t: Complex::with_val(prec, &t * &inv),
            x: Complex::with_val(prec, &x * &inv),
            y: Complex::with_val(prec, &y * &inv),
        })
    }

    pub fn affine(z: &Point2) -> Result<Self> {
        let prec = z.0.prec().0;
        Self::new(cint(prec, 1), z.0.clone(), z.1.clone())
    }

    /// Affine coordinates `(x/t, y/t)`, if `t` is not negligible.
    pub fn to_affine(&self, tol: &Float) -> Option<Point2> {
        if cabs(&self.t) < *tol {
            return None;
        }
        let prec = self.t.prec().0;
        Some((
            Complex::with_val(prec, &self.x / &self.t),
            Complex::with_val(prec, &self.y / &self.t),
        ))
    }

    /// Maximum 2x2 minor of the two coordinate vectors.
    pub fn distance(&self, o: &ProjectivePoint) -> Float {
        let prec = self.t.prec().0;
        let a = [&self.t, &self.x, &self.y];
        let b = [&o.t, &o.x, &o.y];
        let mut best = Float::new(prec);
        for (i, k) in [(0, 1), (0, 2), (1, 2)] {
            let m = Complex::with_val(prec, a[i] * b[k]) - Complex::with_val(prec, a[k] * b[i]);
            let v = cabs(&m);
            if v > best {
                best = v;
            }
        }
        best
    }

    pub fn coords(&self) -> [&Complex; 3] {
        [&self.t, &self.x, &self.y]
    }
}

/// Sigma_0 orbit data and the period check of the Mobius matrix.
#[derive(Clone, Debug)]
pub struct Sigma0Orbit {
    pub omega: Vec<Complex>,
    /// `M^n = nu I`.
    pub nu: Complex,
    pub scalar_residual: Float,
    /// `|nu^2 - delta^n|`.
    pub nu_squared_residual: Float,
    /// `|1/nu - lambda|`.
    pub lambda_residual: Float,
    /// Fixed points of `g` with `g'(w) = delta / w^2`.
    pub g_fixed: Vec<(Complex, Complex)>,
}

pub fn sigma0_orbit(p: &FamilyParams) -> Result<Sigma0Orbit> {
    let prec = p.prec();
    let mn = mat2_pow(&p.mobius_matrix(), p.n as u64);
    let nu = mn[0].clone();
    let d = Complex::with_val(prec, &mn[3] - &nu);
    let scalar_residual = cabs(&mn[1]).max(&cabs(&mn[2])).max(&cabs(&d));
    if scalar_residual >= p.tol() {
        return Err(Error::Consistency(format!(
            "M^n is not scalar (residual {:e})",
            scalar_residual.to_f64()
        )));
    }
    let nu2 = Complex::with_val(prec, nu.square_ref()) - cpowi(&p.delta, p.n as i64);
    let inv = Complex::with_val(prec, nu.recip_ref());
    let lambda_residual = cdist(&inv, &p.lambda);
    let disc = Complex::with_val(prec, p.c.square_ref()) - Complex::with_val(prec, &p.delta * 4u32);
    let r = disc.sqrt();
    let mut g_fixed = Vec::new();
    for w in [
        Complex::with_val(prec, &p.c + &r) / 2u32,
        Complex::with_val(prec, &p.c - &r) / 2u32,
    ] {
        let dg = Complex::with_val(prec, &p.delta / Complex::with_val(prec, w.square_ref()));
        g_fixed.push((w, dg));
    }
    Ok(Sigma0Orbit {
        omega: p.omega.clone(),
        nu,
        scalar_residual,
        nu_squared_residual: cabs(&nu2),
        lambda_residual,
        g_fixed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaReport {
    /// `max |omega_j omega_{n-1-j} - delta|`, `1 <= j <= n-2`.
    pub pair_residual: f64,
    /// Product formula residual.
    pub product_residual: f64,
    /// `|omega_*^2 - delta|` for odd `n`.
    pub omega_star_residual: Option<f64>,
    pub max_residual: f64,
}

pub fn omega_identities(p: &FamilyParams) -> OmegaReport {
    let prec = p.prec();
    let n = p.n;
    let mut pair: f64 = 0.0;
    for j in 1..=n - 2 {
        let v = Complex::with_val(prec, p.omega_s(j) * p.omega_s(n - 1 - j)) - &p.delta;
        pair = pair.max(cabs(&v).to_f64());
    }
    let mut prod = cint(prec, 1);
    for s in 1..=n - 2 {
        prod *= p.omega_s(s);
    }
    let (target, star) = if n.is_multiple_of(2) {
        (cpowi(&p.delta, ((n - 2) / 2) as i64), None)
    } else {
        let ws = p.omega_star.clone().expect("odd n carries omega_*");
        let t = Complex::with_val(prec, cpowi(&p.delta, ((n - 3) / 2) as i64) * &ws);
        let sr = Complex::with_val(prec, ws.square_ref()) - &p.delta;
        (t, Some(cabs(&sr).to_f64()))
    };
    let product = cdist(&prod, &target).to_f64();
    let max = pair.max(product).max(star.unwrap_or(0.0));
    OmegaReport {
        pair_residual: pair,
        product_residual: product,
        omega_star_residual: star,
        max_residual: max,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GnReport {
    pub k: usize,
    /// `|g_k - (c - sum of telescoped increments)|`.
    pub residual: f64,
    /// Max over `i <= k` of `|(g_i - g_{i-1}) + delta^i / (g_0^2 ... g_{i-2}^2 g_{i-1})|`.
    pub increment_residual: f64,
}

/// Telescoped form of `g_k = g^k(c)`.
pub fn gn_identity(p: &FamilyParams, k: usize) -> Result<GnReport> {
    if k < 1 || k > p.n - 2 {
        return Err(Error::InvalidArgument(format!(
            "k = {k} outside 1..={}",
            p.n - 2
        )));
    }
    let prec = p.prec();
    let tol = p.tol();
    // g_i = omega_{i+1}
    let g = |i: usize| p.omega[i].clone();
    let mut sum = Complex::new(prec);
    let mut inc_res: f64 = 0.0;
    // running product g_0^2 ... g_{i-2}^2
    let mut sq = cint(prec, 1);
    let mut dpow = cint(prec, 1);
    for i in 1..=k {
        let gi1 = g(i - 1);
        if cabs(&gi1) < tol {
            return Err(Error::DivisionDegeneracy(i - 1));
        }
        dpow *= &p.delta;
        let den = Complex::with_val(prec, &sq * &gi1);
        let term = Complex::with_val(prec, &dpow / &den);
        let inc = Complex::with_val(prec, &g(i) - &gi1) + &term;
        inc_res = inc_res.max(cabs(&inc).to_f64());
        sum += &term;
        sq *= Complex::with_val(prec, gi1.square_ref());
    }
    let tele = Complex::with_val(prec, &p.c - &sum);
    Ok(GnReport {
        k,
        residual: cdist(&tele, &g(k)).to_f64(),
        increment_residual: inc_res,
    })
}

/// The two affine fixed points `(y, y)`, `y = +-(1 + delta - c)^{-1/2}`.
pub fn fixed_points(p: &FamilyParams) -> Result<[Point2; 2]> {
    let prec = p.prec();
    let a = Complex::with_val(prec, &p.delta + 1u32) - &p.c;
    if cabs(&a) < p.tol() {
        return Err(Error::ParameterRejected("1 + delta - c = 0".into()));
    }
    let y = a.sqrt().recip();
    let ny = Complex::with_val(prec, -&y);
    Ok([(y.clone(), y), (ny.clone(), ny)])
}

#[derive(Clone, Debug)]
pub struct MultiplierData {
    pub fixed_point: Point2,
    pub lambda1: Complex,
    pub lambda2: Complex,
    pub unit_modulus: bool,
    pub rank2_criterion: bool,
    /// Distance between the closed form and the Jacobian eigenvalues.
    pub jacobian_residual: Float,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierJson {
    pub fixed_point: [ComplexJson; 2],
    pub lambda1: ComplexJson,
    pub lambda2: ComplexJson,
    pub unit_modulus: bool,
    pub rank2_criterion: bool,
    pub jacobian_residual: f64,
}

impl MultiplierData {
    pub fn to_json(&self) -> MultiplierJson {
        MultiplierJson {
            fixed_point: [(&self.fixed_point.0).into(), (&self.fixed_point.1).into()],
            lambda1: (&self.lambda1).into(),
            lambda2: (&self.lambda2).into(),
            unit_modulus: self.unit_modulus,
            rank2_criterion: self.rank2_criterion,
            jacobian_residual: self.jacobian_residual.to_f64(),
        }
    }
}

/// `(Re sqrt(delta) - 2 cos(j pi / n))^2 <= 1`.
pub fn rank2_criterion(p: &FamilyParams) -> bool {
    let prec = p.prec();
    let angle = pi(prec) * p.j as u32 / p.n as u32;
    let v = Float::with_val(prec, p.sqrt_delta.real()) - angle.cos() * 2u32;
    v.square() <= 1u32
}

/// Closed-form multipliers `-b +- sqrt(b^2 - delta)`, `b = (1 + delta)/2 - c`.
pub fn closed_form_multipliers(p: &FamilyParams) -> (Complex, Complex) {
    let prec = p.prec();
    let b = Complex::with_val(prec, &p.delta + 1u32) / 2u32 - &p.c;
    let disc = Complex::with_val(prec, b.square_ref()) - &p.delta;
    let r = disc.sqrt();
    let nb = Complex::with_val(prec, -&b);
    (
        Complex::with_val(prec, &nb + &r),
        Complex::with_val(prec, &nb - &r),
    )
}

pub fn multipliers_at_fixed(p: &FamilyParams, fp: &Point2) -> Result<MultiplierData> {
    let prec = p.prec();
    let tol = p.tol();
    let img = p.map_affine(fp)?;
    let moved = cdist(&img.0, &fp.0).max(&cdist(&img.1, &fp.1));
    if moved >= tol {
        return Err(Error::Precondition(format!(
            "not a fixed point (moved {:e})",
            moved.to_f64()
        )));
    }
    let (l1, l2) = closed_form_multipliers(p);
    let inv_y2 = Complex::with_val(prec, fp.1.square_ref()).recip();
    let d = Complex::with_val(prec, &p.c - &inv_y2);
    let (e1, e2) = eig2(
        &Complex::new(prec),
        &cint(prec, 1),
        &Complex::with_val(prec, -&p.delta),
        &d,
    );
    let straight = cdist(&l1, &e1).max(&cdist(&l2, &e2));
    let crossed = cdist(&l1, &e2).max(&cdist(&l2, &e1));
    let jacobian_residual = straight.min(&crossed);
    if jacobian_residual >= tol {
        return Err(Error::Consistency(format!(
            "closed-form multipliers disagree with the Jacobian ({:e})",
            jacobian_residual.to_f64()
        )));
    }
    let on_circle = |z: &Complex| Float::with_val(prec, cabs(z) - 1u32).abs() < tol;
    let unit_modulus = on_circle(&l1) && on_circle(&l2);
    Ok(MultiplierData {
        fixed_point: fp.clone(),
        lambda1: l1,
        lambda2: l2,
        unit_modulus,
        rank2_criterion: rank2_criterion(p),
        jacobian_residual,
    })
}

/// Smallest nonzero `(p1, p2)` (by `|p1| + |p2|`, sign-normalized) with
/// `|l1^p1 l2^p2 - 1| < tol` and `|p1|, |p2| <= bound`.
pub fn mult_independence_search(
    l1: &Complex,
    l2: &Complex,
    bound: i64,
    tol: f64,
) -> Option<(i64, i64)> {
    let prec = l1.prec().0.max(l2.prec().0);
    let l1 = with_prec(l1, prec);
    let l2 = with_prec(l2, prec);
    for norm in 1..=2 * bound {
        for p1 in 0..=norm.min(bound) {
            let rest = norm - p1;
            if rest > bound {
                continue;
            }
            let p2s: &[i64] = if p1 == 0 || rest == 0 {
                &[rest]
            } else {
                &[rest, -rest]
            };
            for &p2 in p2s {
                let v = Complex::with_val(prec, cpowi(&l1, p1) * cpowi(&l2, p2)) - 1u32;
                if cabs(&v) < tol {
                    return Some((p1, p2));
                }
            }
        }
    }
    None
}
