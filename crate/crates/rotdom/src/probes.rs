//! Numerical dynamics in `P^2`: chart-aware orbits, near-identity return
//! times, Birkhoff averages at the affine fixed points, recurrence rasters
//! and slice radii along `Sigma_0`.

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Complex, Float};
use serde::Serialize;

use crate::blowup::projective_to_level1;
use crate::error::{Error, Result};
use crate::family::{FamilyParams, Point2, ProjectivePoint};
use crate::num::{cabs, carg, cdist, cint, cx, pi};
use rug::ops::Pow;

pub const DEFAULT_EPS: f64 = 1e-3;
pub const DEFAULT_GUARD: f64 = 1e-2;
pub const DEFAULT_BUDGET_FLOOR: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChartTag {
    /// Affine chart of `P^2` normalized by coordinate 0 (`t`), 1 (`x`) or 2 (`y`).
    Plane(u8),
    /// Level-1 fiber chart `(s1, eta1)_s` near `p_s`.
    Fiber(usize),
}

impl fmt::Display for ChartTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartTag::Plane(k) => write!(f, "P2_{}", ["t", "x", "y"][*k as usize]),
            ChartTag::Fiber(s) => write!(f, "F1_{s}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChartPolicy {
    pub guard: f64,
    pub eps: f64,
}

impl Default for ChartPolicy {
    fn default() -> Self {
        ChartPolicy {
            guard: DEFAULT_GUARD,
            eps: DEFAULT_EPS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub points: Vec<Point2>,
    pub chart_tags: Vec<ChartTag>,
    /// True when the orbit stopped at an indeterminacy point.
    pub escaped: bool,
    pub indeterminate_at: Option<usize>,
    pub return_events: Vec<(usize, f64)>,
}

impl OrbitRecord {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iterate,chart_tag,re1,im1,re2,im2")?;
        for (k, ((a, b), tag)) in self.points.iter().zip(&self.chart_tags).enumerate() {
            writeln!(
                w,
                "{k},{tag},{:e},{:e},{:e},{:e}",
                a.real().to_f64(),
                a.imag().to_f64(),
                b.real().to_f64(),
                b.imag().to_f64()
            )?;
        }
        Ok(())
    }
}

/// Base points `p_0 = [0:0:1]`, `p_s = [0:1:omega_s]`.
pub fn blowup_centers(p: &FamilyParams) -> Vec<ProjectivePoint> {
    let prec = p.prec();
    let mut v =
        vec![ProjectivePoint::new(Complex::new(prec), Complex::new(prec), p.one()).unwrap()];
    for s in 1..p.n {
        v.push(ProjectivePoint::new(Complex::new(prec), p.one(), p.omega_s(s).clone()).unwrap());
    }
    v
}

fn chart_coords(
    p: &FamilyParams,
    q: &ProjectivePoint,
    centers: &[ProjectivePoint],
    guard: f64,
) -> (ChartTag, Point2) {
    for (s, c) in centers.iter().enumerate() {
        if q.distance(c) < guard {
            if let Ok(z) = projective_to_level1(p, s, q) {
                return (ChartTag::Fiber(s), z);
            }
        }
    }
    let prec = p.prec();
    let c = q.coords();
    let a = [cabs(c[0]), cabs(c[1]), cabs(c[2])];
    let k = (0..3).fold(0, |b, i| if a[i] > a[b] { i } else { b });
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let a = Complex::with_val(prec, c[others[0]] / c[k]);
    let b = Complex::with_val(prec, c[others[1]] / c[k]);
    (ChartTag::Plane(k as u8), (a, b))
}

/// `[t : 1 : w]`.
pub fn sigma0_chart_point(p: &FamilyParams, t: &Complex, w: &Complex) -> Result<ProjectivePoint> {
    ProjectivePoint::new(t.clone(), p.one(), w.clone())
}

/// Iterates `f` for `steps` steps from `z0`.
pub fn iterate(
    p: &FamilyParams,
    z0: &ProjectivePoint,
    steps: usize,
    policy: &ChartPolicy,
) -> OrbitRecord {
    let centers = blowup_centers(p);
    let mut rec = OrbitRecord {
        points: Vec::with_capacity(steps + 1),
        chart_tags: Vec::with_capacity(steps + 1),
        escaped: false,
        indeterminate_at: None,
        return_events: Vec::new(),
    };
    let (tag, c) = chart_coords(p, z0, &centers, policy.guard);
    rec.points.push(c);
    rec.chart_tags.push(tag);
    let mut z = z0.clone();
    for k in 1..=steps {
        match p.map_homogeneous(&z) {
            Ok(nz) => z = nz,
            Err(_) => {
                rec.escaped = true;
                rec.indeterminate_at = Some(k);
                break;
            }
        }
        let (tag, c) = chart_coords(p, &z, &centers, policy.guard);
        rec.points.push(c);
        rec.chart_tags.push(tag);
        let d = z.distance(z0).to_f64();
        if d < policy.eps {
            rec.return_events.push((k, d));
        }
    }
    rec
}

/// `H = f^n` on `P^2`.
pub fn return_map(p: &FamilyParams, z: &ProjectivePoint) -> Result<ProjectivePoint> {
    let mut z = z.clone();
    for _ in 0..p.n {
        z = p.map_homogeneous(&z)?;
    }
    Ok(z)
}

/// Continued-fraction denominators of `arg(lambda) / 2 pi`, without repeats.
pub fn return_times(lambda: &Complex, count: usize) -> Result<Vec<u64>> {
    cf_denominators(lambda, count, u64::MAX)
}

/// All denominators up to `max_q`, plus the first one beyond it.
pub fn return_times_up_to(lambda: &Complex, max_q: u64) -> Result<Vec<u64>> {
    cf_denominators(lambda, usize::MAX, max_q)
}

fn cf_denominators(lambda: &Complex, count: usize, max_q: u64) -> Result<Vec<u64>> {
    let prec = lambda.prec().0;
    let tol = crate::num::tolerance(prec);
    let modulus = Float::with_val(prec, cabs(lambda) - 1u32).abs();
    if modulus > tol {
        return Err(Error::Precondition(format!(
            "|lambda| - 1 = {:e}",
            modulus.to_f64()
        )));
    }
    let two_pi = pi(prec) * 2u32;
    let mut r = carg(lambda) / &two_pi;
    r -= Float::with_val(prec, r.floor_ref());
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut out = vec![1u64];
    while out.len() < count && *out.last().unwrap() <= max_q {
        if r < tol {
            return Err(Error::Precondition(format!(
                "lambda is a root of unity (angle has denominator {q})"
            )));
        }
        let x = Float::with_val(prec, r.recip_ref());
        let a = Float::with_val(prec, x.floor_ref());
        r = x - &a;
        let a = a
            .to_integer()
            .and_then(|a| a.to_u64())
            .ok_or_else(|| Error::NumericFailure {
                msg: "partial quotient overflow".into(),
                residual: f64::INFINITY,
            })?;
        let nq = a
            .checked_mul(q)
            .and_then(|v| v.checked_add(q_prev))
            .ok_or_else(|| Error::NumericFailure {
                msg: "denominator overflow".into(),
                residual: f64::INFINITY,
            })?;
        q_prev = q;
        q = nq;
        if q != *out.last().unwrap() {
            out.push(q);
        }
    }
    Ok(out)
}

/// First candidate at least `floor`, or the largest one found.
pub fn default_budget(candidates: &[u64], floor: u64) -> u64 {
    candidates
        .iter()
        .copied()
        .find(|&q| q >= floor)
        .unwrap_or_else(|| *candidates.last().unwrap_or(&1))
}

/// Generic points `[t : 1 : w]` with `|t| <= radius`.
pub fn sigma0_samples(
    p: &FamilyParams,
    count: usize,
    radius: f64,
    seed: u64,
) -> Vec<ProjectivePoint> {
    let prec = p.prec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w = cx(prec, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if (1..p.n).any(|s| cdist(&w, p.omega_s(s)) < 0.05) {
            continue;
        }
        let r = radius * rng.gen_range(0.1..1.0);
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let t = cx(prec, r * a.cos(), r * a.sin());
        out.push(sigma0_chart_point(p, &t, &w).unwrap());
    }
    out
}

/// `sup_z dist(H^q z, z)` for each `q` in `times` (increasing).
pub fn return_distances(
    p: &FamilyParams,
    points: &[ProjectivePoint],
    times: &[u64],
) -> Result<Vec<f64>> {
    let mut sup = vec![0f64; times.len()];
    for z0 in points {
        let mut z = z0.clone();
        let mut k = 0u64;
        for (i, &q) in times.iter().enumerate() {
            while k < q {
                z = return_map(p, &z)?;
                k += 1;
            }
            sup[i] = sup[i].max(z.distance(z0).to_f64());
        }
    }
    Ok(sup)
}

#[derive(Clone, Debug, Serialize)]
pub struct BirkhoffReport {
    pub n_values: Vec<usize>,
    pub residuals: Vec<f64>,
    pub samples_used: usize,
    pub samples_dropped: usize,
}

fn mat_apply(m: &[Complex; 4], v: &Point2) -> Point2 {
    let prec = v.0.prec().0;
    let a = Complex::with_val(prec, &m[0] * &v.0) + Complex::with_val(prec, &m[1] * &v.1);
    let b = Complex::with_val(prec, &m[2] * &v.0) + Complex::with_val(prec, &m[3] * &v.1);
    (a, b)
}

/// Residuals `r(N) = max |Phi_N(h z) - A Phi_N(z)|` with
/// `Phi_N = (1/N) sum_{k<N} A^{-k} h^k` in the eigenbasis of `Df(fp)`.
/// The differential must have companion form, with eigenvectors `(1, l_i)`.
/// Orbits leaving the ball of radius `escape` are dropped.
pub fn birkhoff_residuals<F>(
    h: F,
    fp: &Point2,
    mults: (&Complex, &Complex),
    n_values: &[usize],
    samples: &[Point2],
    escape: f64,
) -> Result<BirkhoffReport>
where
    F: Fn(&Point2) -> Result<Point2>,
{
    let prec = fp.0.prec().0;
    let (l1, l2) = mults;
    let det = Complex::with_val(prec, l2 - l1);
    if cabs(&det) < crate::num::tolerance(prec) {
        return Err(Error::Precondition("repeated multiplier".into()));
    }
    let inv_det = Complex::with_val(prec, det.recip_ref());
    // P = [[1, 1], [l1, l2]], P^{-1} = [[l2, -1], [-l1, 1]] / (l2 - l1).
    let pinv = [
        Complex::with_val(prec, l2 * &inv_det),
        Complex::with_val(prec, -&inv_det),
        Complex::with_val(prec, -Complex::with_val(prec, l1 * &inv_det)),
        inv_det.clone(),
    ];
    let li1 = Complex::with_val(prec, l1.recip_ref());
    let li2 = Complex::with_val(prec, l2.recip_ref());
    let nmax = n_values.iter().copied().max().unwrap_or(1);
    let mut residuals = vec![0f64; n_values.len()];
    let mut used = 0;
    let mut dropped = 0;
    'samples: for z in samples {
        let mut w = Vec::with_capacity(nmax + 1);
        let mut cur = z.clone();
        for k in 0..=nmax {
            let d = (
                Complex::with_val(prec, &cur.0 - &fp.0),
                Complex::with_val(prec, &cur.1 - &fp.1),
            );
            if cabs(&d.0).max(&cabs(&d.1)) > escape {
                dropped += 1;
                continue 'samples;
            }
            w.push(mat_apply(&pinv, &d));
            if k < nmax {
                cur = h(&cur)?;
            }
        }
        used += 1;
        for (slot, &nn) in n_values.iter().enumerate() {
            let mut a = (Complex::new(prec), Complex::new(prec));
            let mut b = (Complex::new(prec), Complex::new(prec));
            let mut s = (cint(prec, 1), cint(prec, 1));
            for k in 0..nn {
                a.0 += Complex::with_val(prec, &s.0 * &w[k].0);
                a.1 += Complex::with_val(prec, &s.1 * &w[k].1);
                b.0 += Complex::with_val(prec, &s.0 * &w[k + 1].0);
                b.1 += Complex::with_val(prec, &s.1 * &w[k + 1].1);
                s.0 *= &li1;
                s.1 *= &li2;
            }
            let r0 = Complex::with_val(prec, &b.0 - Complex::with_val(prec, l1 * &a.0)) / nn as u32;
            let r1 = Complex::with_val(prec, &b.1 - Complex::with_val(prec, l2 * &a.1)) / nn as u32;
            let r = cabs(&r0).max(&cabs(&r1)).to_f64();
            residuals[slot] = residuals[slot].max(r);
        }
    }
    if used == 0 {
        return Err(Error::Inconclusive("every sample left the ball".into()));
    }
    Ok(BirkhoffReport {
        n_values: n_values.to_vec(),
        residuals,
        samples_used: used,
        samples_dropped: dropped,
    })
}

/// Birkhoff residual curve of `f` at an affine fixed point with samples in a ball.
pub fn birkhoff_linearize(
    p: &FamilyParams,
    fp: &Point2,
    n_values: &[usize],
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<BirkhoffReport> {
    let md = crate::family::multipliers_at_fixed(p, fp)?;
    if !md.rank2_criterion || !md.unit_modulus {
        return Err(Error::Precondition(
            "fixed point is not a rank-2 candidate".into(),
        ));
    }
    let prec = p.prec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Point2> = (0..count)
        .map(|_| {
            let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0) * radius / 2.0);
            (
                Complex::with_val(prec, &fp.0 + cx(prec, v[0], v[1])),
                Complex::with_val(prec, &fp.1 + cx(prec, v[2], v[3])),
            )
        })
        .collect();
    birkhoff_residuals(
        |z| p.map_affine(z),
        fp,
        (&md.lambda1, &md.lambda2),
        n_values,
        &samples,
        100.0 * radius,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellClass {
    Recurrent,
    NonRecurrent,
    IndeterminateHit,
}

impl CellClass {
    pub fn byte(self) -> u8 {
        match self {
            CellClass::Recurrent => 255,
            CellClass::IndeterminateHit => 128,
            CellClass::NonRecurrent => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellClass::Recurrent => "recurrent",
            CellClass::NonRecurrent => "non-recurrent",
            CellClass::IndeterminateHit => "indeterminate-hit",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence {
    pub class: CellClass,
    /// Candidate at which the return was witnessed.
    pub return_time: Option<u64>,
    pub best_distance: f64,
}

/// Recurrent iff `dist(H^q z, z) < eps` for some candidate `q <= budget`.
pub fn classify_point(
    p: &FamilyParams,
    z0: &ProjectivePoint,
    candidates: &[u64],
    budget: u64,
    eps: f64,
) -> Recurrence {
    let mut z = z0.clone();
    let mut k = 0u64;
    let mut best = f64::INFINITY;
    for &q in candidates.iter().filter(|&&q| q <= budget) {
        while k < q {
            match return_map(p, &z) {
                Ok(nz) => z = nz,
                Err(_) => {
                    return Recurrence {
                        class: CellClass::IndeterminateHit,
                        return_time: None,
                        best_distance: best,
                    }
                }
            }
            k += 1;
        }
        let d = z.distance(z0).to_f64();
        best = best.min(d);
        if d < eps {
            return Recurrence {
                class: CellClass::Recurrent,
                return_time: Some(q),
                best_distance: d,
            };
        }
    }
    Recurrence {
        class: CellClass::NonRecurrent,
        return_time: None,
        best_distance: best,
    }
}

/// `dist(H^k z, z)` for `1 <= k <= steps`.
pub fn return_profile(p: &FamilyParams, z0: &ProjectivePoint, steps: u64) -> Result<Vec<f64>> {
    let mut z = z0.clone();
    let mut out = Vec::with_capacity(steps as usize);
    for _ in 0..steps {
        z = return_map(p, &z)?;
        out.push(z.distance(z0).to_f64());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RasterChart {
    /// `[v : 1 : u]`: horizontal axis `Re w`, vertical axis real `t`.
    Sigma0,
    /// `[1 : u : v]`: the real affine plane.
    Affine,
}

#[derive(Clone, Debug, Serialize)]
pub struct RasterConfig {
    pub chart: RasterChart,
    /// `(x0, x1, y0, y1)`.
    pub window: (f64, f64, f64, f64),
    pub resolution: (usize, usize),
    pub budget: u64,
    pub eps: f64,
    pub threads: usize,
}

#[derive(Clone, Debug)]
pub struct RasterGrid {
    pub config: RasterConfig,
    pub candidates: Vec<u64>,
    /// Row-major, row 0 at `y1`.
    pub cells: Vec<Recurrence>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct RasterCounts {
    pub recurrent: usize,
    pub non_recurrent: usize,
    pub indeterminate_hit: usize,
}

/// Grid nodes including the window edges.
pub fn grid_coordinate(lo: f64, hi: f64, count: usize, k: usize) -> f64 {
    if count <= 1 {
        return lo;
    }
    lo + (hi - lo) * k as f64 / (count - 1) as f64
}

pub fn raster_point(
    p: &FamilyParams,
    chart: RasterChart,
    u: f64,
    v: f64,
) -> Result<ProjectivePoint> {
    let prec = p.prec();
    match chart {
        RasterChart::Sigma0 => sigma0_chart_point(p, &cx(prec, v, 0.0), &cx(prec, u, 0.0)),
        RasterChart::Affine => ProjectivePoint::new(p.one(), cx(prec, u, 0.0), cx(prec, v, 0.0)),
    }
}

impl RasterGrid {
    pub fn width(&self) -> usize {
        self.config.resolution.0
    }

    pub fn height(&self) -> usize {
        self.config.resolution.1
    }

    pub fn cell(&self, row: usize, col: usize) -> &Recurrence {
        &self.cells[row * self.width() + col]
    }

    pub fn cell_coordinates(&self, row: usize, col: usize) -> (f64, f64) {
        let (x0, x1, y0, y1) = self.config.window;
        let u = grid_coordinate(x0, x1, self.width(), col);
        let v = grid_coordinate(y1, y0, self.height(), row);
        (u, v)
    }

    pub fn counts(&self) -> RasterCounts {
        let mut c = RasterCounts::default();
        for cell in &self.cells {
            match cell.class {
                CellClass::Recurrent => c.recurrent += 1,
                CellClass::NonRecurrent => c.non_recurrent += 1,
                CellClass::IndeterminateHit => c.indeterminate_hit += 1,
            }
        }
        c
    }

    /// Row whose vertical coordinate is exactly zero, if any.
    pub fn zero_row(&self) -> Option<usize> {
        (0..self.height()).find(|&r| self.cell_coordinates(r, 0).1 == 0.0)
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width(), self.height()).into_bytes();
        out.extend(self.cells.iter().map(|c| c.class.byte()));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,col,u,v,class,return_time,best_distance\n");
        for row in 0..self.height() {
            for col in 0..self.width() {
                let (u, v) = self.cell_coordinates(row, col);
                let c = self.cell(row, col);
                let rt = c.return_time.map(|q| q.to_string()).unwrap_or_default();
                s.push_str(&format!(
                    "{row},{col},{u:e},{v:e},{},{rt},{:e}\n",
                    c.class.name(),
                    c.best_distance
                ));
            }
        }
        s
    }
}

/// Recurrence classification on a grid of real points of the chosen chart.
pub fn siegel_raster(p: &FamilyParams, config: &RasterConfig) -> Result<RasterGrid> {
    let (w, h) = config.resolution;
    if w == 0 || h == 0 {
        return Err(Error::InvalidArgument("empty raster".into()));
    }
    let (x0, x1, y0, y1) = config.window;
    if !(x0 < x1 && y0 < y1) || [x0, x1, y0, y1].iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bad window {:?}",
            config.window
        )));
    }
    if !(config.eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let candidates = return_times_up_to(&p.lambda, config.budget)?;
    let candidates: Vec<u64> = candidates
        .into_iter()
        .filter(|&q| q <= config.budget)
        .collect();
    let cell = |idx: usize| {
        let (row, col) = (idx / w, idx % w);
        let u = grid_coordinate(x0, x1, w, col);
        let v = grid_coordinate(y1, y0, h, row);
        match raster_point(p, config.chart, u, v) {
            Ok(z) => classify_point(p, &z, &candidates, config.budget, config.eps),
            Err(_) => Recurrence {
                class: CellClass::IndeterminateHit,
                return_time: None,
                best_distance: f64::INFINITY,
            },
        }
    };
    let cells: Vec<Recurrence> = if config.threads <= 1 {
        (0..w * h).map(cell).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| (0..w * h).into_par_iter().map(cell).collect())
    };
    Ok(RasterGrid {
        config: config.clone(),
        candidates,
        cells,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceConfig {
    pub budget: u64,
    pub eps: f64,
    pub r0: f64,
    pub max_radius: f64,
    pub bisections: usize,
    /// Points `t = r e^{2 pi i k / angles}` tested at each radius.
    pub angles: usize,
}

impl Default for SliceConfig {
    fn default() -> Self {
        SliceConfig {
            budget: 31,
            eps: DEFAULT_EPS,
            r0: 1e-3,
            max_radius: 1e3,
            bisections: 20,
            angles: 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceRadius {
    pub r_lo: f64,
    pub r_hi: Option<f64>,
    pub inconclusive: bool,
    pub tested: Vec<(f64, bool)>,
}

/// Bracket of the recurrent radius on the slice `{[t : 1 : w]}` through `w` in `Sigma_0`.
pub fn slice_radius(p: &FamilyParams, w: &Complex, config: &SliceConfig) -> Result<SliceRadius> {
    let tol = p.tol();
    for s in 1..p.n {
        if cdist(w, p.omega_s(s)) < tol {
            return Err(Error::Precondition(format!("base point is p_{s}")));
        }
    }
    let prec = p.prec();
    let candidates = return_times_up_to(&p.lambda, config.budget)?;
    let mut tested = Vec::new();
    let two_pi = pi(prec) * 2u32;
    let mut probe = |r: f64| -> bool {
        let ok = (0..config.angles.max(1)).all(|k| {
            let a = Float::with_val(prec, &two_pi * k as u32) / config.angles.max(1) as u32;
            let t = Complex::with_val(prec, crate::num::cis(&a) * r);
            match sigma0_chart_point(p, &t, w) {
                Ok(z) => {
                    classify_point(p, &z, &candidates, config.budget, config.eps).class
                        == CellClass::Recurrent
                }
                Err(_) => false,
            }
        });
        tested.push((r, ok));
        ok
    };
    let mut lo = 0.0;
    let mut r = config.r0;
    let mut hi = None;
    while r <= config.max_radius {
        if probe(r) {
            lo = r;
            r *= 2.0;
        } else {
            hi = Some(r);
            break;
        }
    }
    let Some(mut h) = hi else {
        return Ok(SliceRadius {
            r_lo: lo,
            r_hi: None,
            inconclusive: true,
            tested,
        });
    };
    if lo > 0.0 {
        for _ in 0..config.bisections {
            let mid = 0.5 * (lo + h);
            if probe(mid) {
                lo = mid;
            } else {
                h = mid;
            }
        }
    }
    let inconclusive = lo == 0.0;
    Ok(SliceRadius {
        r_lo: lo,
        r_hi: Some(h),
        inconclusive,
        tested,
    })
}

/// `|lambda^q - 1|` for each `q`.
pub fn rotation_defects(lambda: &Complex, qs: &[u64]) -> Vec<f64> {
    qs.iter()
        .map(|&q| {
            let prec = lambda.prec().0;
            let v = Complex::with_val(prec, lambda.clone().pow(&rug::Integer::from(q))) - 1u32;
            cabs(&v).to_f64()
        })
        .collect()
}
