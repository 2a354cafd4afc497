//! Truncated bivariate power series, the resonance sets, the return maps at
//! `q_s` and on `Sigma_0`, and the order-by-order linearization solver.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Assign, Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::num::{cabs, cdist, cint, cpowi, pow2_neg, ComplexJson};

pub const DEFAULT_DEGREE: usize = 12;

fn tri(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

/// Power series in `(x, y)` truncated at total degree `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSeries {
    degree: usize,
    prec: u32,
    coeffs: Vec<Complex>,
}

/// A map of `(C^2, 0)` given by two series.
pub type SeriesPair = [BivariateSeries; 2];

impl BivariateSeries {
    pub fn zero(degree: usize, prec: u32) -> Self {
        BivariateSeries {
            degree,
            prec,
            coeffs: vec![Complex::new(prec); tri(degree)],
        }
    }

    pub fn constant(degree: usize, c: &Complex) -> Self {
        let mut s = Self::zero(degree, c.prec().0);
        s.coeffs[0] = c.clone();
        s
    }

    pub fn monomial(degree: usize, prec: u32, i: usize, j: usize, c: &Complex) -> Self {
        let mut s = Self::zero(degree, prec);
        if i + j <= degree {
            s.coeffs[idx(i, j)] = Complex::with_val(prec, c);
        }
        s
    }

    /// `x` for `k = 0`, `y` for `k = 1`.
    pub fn var(degree: usize, prec: u32, k: usize) -> Self {
        let one = cint(prec, 1);
        if k == 0 {
            Self::monomial(degree, prec, 1, 0, &one)
        } else {
            Self::monomial(degree, prec, 0, 1, &one)
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex {
        &self.coeffs[idx(i, j)]
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex {
        if i + j > self.degree {
            Complex::new(self.prec)
        } else {
            self.coeffs[idx(i, j)].clone()
        }
    }

    pub fn set(&mut self, i: usize, j: usize, c: Complex) {
        assert!(
            i + j <= self.degree,
            "monomial ({i}, {j}) above truncation degree"
        );
        self.coeffs[idx(i, j)] = c;
    }

    /// `(i, j, coefficient)` for every stored monomial, by degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Complex)> + '_ {
        (0..=self.degree)
            .flat_map(move |d| (0..=d).map(move |j| (d - j, j, &self.coeffs[idx(d - j, j)])))
    }

    pub fn constant_term(&self) -> &Complex {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(self.prec);
        for c in &self.coeffs {
            let a = cabs(c);
            if a > m {
                m = a;
            }
        }
        m
    }

    pub fn truncate(&self, degree: usize) -> Self {
        let mut s = Self::zero(degree, self.prec);
        for (i, j, c) in self.terms().filter(|(i, j, _)| i + j <= degree) {
            s.coeffs[idx(i, j)] = c.clone();
        }
        s
    }

    fn same_shape(&self, o: &Self) {
        assert_eq!(self.degree, o.degree, "truncation degrees differ");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_shape(o);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| Complex::with_val(self.prec, a + b))
            .collect();
        BivariateSeries {
            degree: self.degree,
            prec: self.prec,
            coeffs,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_shape(o);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| Complex::with_val(self.prec, a - b))
            .collect();
        BivariateSeries {
            degree: self.degree,
            prec: self.prec,
            coeffs,
        }
    }

    pub fn scale(&self, c: &Complex) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| Complex::with_val(self.prec, a * c))
            .collect();
        BivariateSeries {
            degree: self.degree,
            prec: self.prec,
            coeffs,
        }
    }

    pub fn add_constant(&self, c: &Complex) -> Self {
        let mut s = self.clone();
        s.coeffs[0] += c;
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_shape(o);
        let d = self.degree;
        let mut out = Self::zero(d, self.prec);
        let mut tmp = Complex::new(self.prec);
        for d1 in 0..=d {
            for j1 in 0..=d1 {
                let a = &self.coeffs[idx(d1 - j1, j1)];
                if a.is_zero() {
                    continue;
                }
                let i1 = d1 - j1;
                for d2 in 0..=d - d1 {
                    for j2 in 0..=d2 {
                        let b = &o.coeffs[idx(d2 - j2, j2)];
                        if b.is_zero() {
                            continue;
                        }
                        tmp.assign(a * b);
                        out.coeffs[idx(i1 + d2 - j2, j1 + j2)] += &tmp;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::constant(self.degree, &cint(self.prec, 1));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `1 / self` by the geometric series in `(self - a)/a`, `a` the constant term.
    pub fn inv(&self) -> Result<Self> {
        let a = self.constant_term();
        if cabs(a) < pow2_neg(self.prec, self.prec / 2) {
            return Err(Error::CompositionDomain(
                "inverse of a series without constant term".into(),
            ));
        }
        let ainv = Complex::with_val(self.prec, a.recip_ref());
        let mut u = self.scale(&ainv);
        u.coeffs[0] = Complex::new(self.prec);
        let neg_u = u.scale(&cint(self.prec, -1));
        let mut acc = Self::constant(self.degree, &cint(self.prec, 1));
        let mut term = acc.clone();
        for _ in 0..self.degree {
            term = term.mul(&neg_u);
            acc = acc.add(&term);
        }
        Ok(acc.scale(&ainv))
    }

    /// `self(g1, g2)`; both components of `g` need a vanishing constant term.
    pub fn compose(&self, g: &SeriesPair) -> Result<Self> {
        let tol = pow2_neg(self.prec, self.prec / 2);
        for (k, gk) in g.iter().enumerate() {
            gk.same_shape(self);
            if cabs(gk.constant_term()) >= tol {
                return Err(Error::CompositionDomain(format!(
                    "component {} has a nonzero constant term",
                    k + 1
                )));
            }
        }
        let d = self.degree;
        let one = Self::constant(d, &cint(self.prec, 1));
        let mut px = vec![one.clone()];
        let mut py = vec![one];
        for k in 1..=d {
            px.push(px[k - 1].mul(&g[0]));
            py.push(py[k - 1].mul(&g[1]));
        }
        let mut out = Self::zero(d, self.prec);
        for j in 0..=d {
            // sum_i c_ij g1^i, then times g2^j
            let mut inner = Self::zero(d, self.prec);
            let mut any = false;
            for i in 0..=d - j {
                let c = &self.coeffs[idx(i, j)];
                if c.is_zero() {
                    continue;
                }
                any = true;
                inner = inner.add(&px[i].scale(c));
            }
            if any {
                out = out.add(&if j == 0 { inner } else { inner.mul(&py[j]) });
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> BTreeMap<String, ComplexJson> {
        self.terms()
            .filter(|(_, _, c)| !c.is_zero())
            .map(|(i, j, c)| (format!("{i},{j}"), ComplexJson::from_complex(c)))
            .collect()
    }
}

pub fn identity_pair(degree: usize, prec: u32) -> SeriesPair {
    [
        BivariateSeries::var(degree, prec, 0),
        BivariateSeries::var(degree, prec, 1),
    ]
}

/// `outer o inner`.
pub fn compose_pair(outer: &SeriesPair, inner: &SeriesPair) -> Result<SeriesPair> {
    Ok([outer[0].compose(inner)?, outer[1].compose(inner)?])
}

pub fn pair_to_json(h: &SeriesPair) -> [BTreeMap<String, ComplexJson>; 2] {
    [h[0].to_json(), h[1].to_json()]
}

/// Resonance `eta1^a eta2^b = 1` with `a, b` coprime and positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResonanceClass {
    pub a: u32,
    pub b: u32,
}

impl ResonanceClass {
    /// Exponent data only, for the combinatorics of the sets.
    pub fn lattice(a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 || crate::family::gcd(a as usize, b as usize) != 1 {
            return Err(Error::InvalidArgument(format!(
                "(a, b) = ({a}, {b}) must be coprime and positive"
            )));
        }
        Ok(ResonanceClass { a, b })
    }

    /// Checks `|eta1^a eta2^b - 1| < tol`.
    pub fn new(a: u32, b: u32, eta1: &Complex, eta2: &Complex, tol: f64) -> Result<Self> {
        let rc = Self::lattice(a, b)?;
        let prec = eta1.prec().0;
        let v = Complex::with_val(prec, cpowi(eta1, a as i64) * cpowi(eta2, b as i64)) - 1u32;
        let r = cabs(&v).to_f64();
        if r >= tol {
            return Err(Error::Precondition(format!(
                "eta1^{a} eta2^{b} - 1 = {r:e} is not small"
            )));
        }
        Ok(rc)
    }

    /// `(i, j)` in coordinate `k` (1 or 2) sits on the resonance lattice.
    pub fn is_resonant(&self, i: usize, j: usize, k: usize) -> bool {
        let (p, q) = if k == 1 {
            (i as i64 - 1, j as i64)
        } else {
            (i as i64, j as i64 - 1)
        };
        (self.b as i64) * p == (self.a as i64) * q && (p, q) != (0, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MonomialClass {
    /// In `S_k`.
    S,
    /// On the line `j_k = (a/b) j_l + 1`, `j_l >= 1`.
    ResonantLine,
    /// In `S^_k` but neither of the above.
    HatOnly,
    Outside,
}

fn kl(i: usize, j: usize, k: usize) -> (i64, i64) {
    if k == 1 {
        (i as i64, j as i64)
    } else {
        (j as i64, i as i64)
    }
}

pub fn in_s(i: usize, j: usize, rc: &ResonanceClass, k: usize) -> bool {
    let (jk, jl) = kl(i, j, k);
    (rc.b as i64) * jk > (rc.a as i64) * jl + rc.b as i64
}

pub fn in_s_hat(i: usize, j: usize, rc: &ResonanceClass, k: usize) -> bool {
    let (jk, jl) = kl(i, j, k);
    (rc.b as i64) * jk >= (rc.a as i64) * (jl - 1)
}

pub fn classify_monomial(i: usize, j: usize, rc: &ResonanceClass, k: usize) -> MonomialClass {
    let (jk, jl) = kl(i, j, k);
    if in_s(i, j, rc, k) {
        MonomialClass::S
    } else if jl >= 1 && (rc.b as i64) * jk == (rc.a as i64) * jl + rc.b as i64 {
        MonomialClass::ResonantLine
    } else if in_s_hat(i, j, rc, k) {
        MonomialClass::HatOnly
    } else {
        MonomialClass::Outside
    }
}

fn support(s: &BivariateSeries, tol: &Float) -> Vec<(usize, usize)> {
    s.terms()
        .filter(|(_, _, c)| cabs(c) > *tol)
        .map(|(i, j, _)| (i, j))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub k: usize,
    pub samples: usize,
    pub products_checked: usize,
}

/// Samples monomial sets and checks the closure rules (a)-(f).
pub fn closure_property_check(
    rc: &ResonanceClass,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<ClosureReport> {
    if k != 1 && k != 2 {
        return Err(Error::InvalidArgument("k must be 1 or 2".into()));
    }
    const D: usize = 10;
    let prec = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<(usize, usize)> = (1..=D)
        .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
        .collect();
    let s_set: Vec<_> = all
        .iter()
        .copied()
        .filter(|&(i, j)| in_s(i, j, rc, k))
        .collect();
    let h_set: Vec<_> = all
        .iter()
        .copied()
        .filter(|&(i, j)| in_s_hat(i, j, rc, k))
        .collect();
    let pick = |rng: &mut ChaCha8Rng, set: &[(usize, usize)]| -> BivariateSeries {
        let mut s = BivariateSeries::zero(D, prec);
        for _ in 0..3 {
            let (i, j) = set[rng.gen_range(0..set.len())];
            s.set(i, j, cint(prec, rng.gen_range(1..5)));
        }
        s
    };
    let tol = Float::with_val(prec, 1e-9);
    let viol = |what: &str, w: (usize, usize)| {
        Error::PropertyViolation(format!(
            "rule {what}: monomial ({}, {}) escapes its class",
            w.0, w.1
        ))
    };
    let mut checked = 0;
    let (ak, bk) = (rc.a as i64, rc.b as i64);
    for _ in 0..samples {
        let n = rng.gen_range(1..=3usize);
        // (a): S_k^n has j_k > (a/b) j_l + n
        let mut prod = BivariateSeries::constant(D, &cint(prec, 1));
        for _ in 0..n {
            prod = prod.mul(&pick(&mut rng, &s_set));
        }
        for (i, j) in support(&prod, &tol) {
            let (jk, jl) = kl(i, j, k);
            if !(bk * jk > ak * jl + bk * n as i64) {
                return Err(viol("(a)", (i, j)));
            }
            checked += 1;
        }
        // (b): S^_k^n has j_k >= (a/b)(j_l - n)
        let mut prod = BivariateSeries::constant(D, &cint(prec, 1));
        for _ in 0..n {
            prod = prod.mul(&pick(&mut rng, &h_set));
        }
        for (i, j) in support(&prod, &tol) {
            let (jk, jl) = kl(i, j, k);
            if !(bk * jk >= ak * (jl - n as i64)) {
                return Err(viol("(b)", (i, j)));
            }
            checked += 1;
        }
        // (c)-(f): (x + A)^j1 (y + B)^j2 with A, B drawn from the sets attached to k
        let j1 = rng.gen_range(0..=4usize);
        let j2 = rng.gen_range(0..=4usize);
        let (a_set, b_set) = if k == 1 {
            (&s_set, &h_set)
        } else {
            (&h_set, &s_set)
        };
        let fx = BivariateSeries::var(D, prec, 0).add(&pick(&mut rng, a_set));
        let fy = BivariateSeries::var(D, prec, 1).add(&pick(&mut rng, b_set));
        let prod = fx.pow(j1).mul(&fy.pow(j2));
        let (jk, jl) = kl(j1, j2, k);
        let strict = bk * jk > ak * jl + bk;
        let weak = bk * jk >= ak * (jl - 1);
        for (i, j) in support(&prod, &tol) {
            if strict && !in_s(i, j, rc, k) {
                return Err(viol(if k == 1 { "(c)" } else { "(e)" }, (i, j)));
            }
            if weak && !in_s_hat(i, j, rc, k) {
                return Err(viol(if k == 1 { "(d)" } else { "(f)" }, (i, j)));
            }
            checked += 1;
        }
    }
    Ok(ClosureReport {
        k,
        samples,
        products_checked: checked,
    })
}

/// Does `h - (eta1 x, eta2 y)` lie in `S_1 x S^_1` (coefficients above `tol` only)?
pub fn remainder_in_class(
    h: &SeriesPair,
    rc: &ResonanceClass,
    tol: &Float,
) -> Option<(usize, usize, usize)> {
    for (k, s) in h.iter().enumerate() {
        for (i, j, c) in s.terms() {
            if i + j <= 1 || cabs(c) <= *tol {
                continue;
            }
            let ok = if k == 0 {
                in_s(i, j, rc, 1)
            } else {
                in_s_hat(i, j, rc, 1)
            };
            if !ok {
                return Some((k + 1, i, j));
            }
        }
    }
    None
}

/// Level-2 chart map `(xi2, x2)_s -> (.., ..)_{s+1}` expanded at `(0, 0)`.
pub fn chart_step_series(p: &FamilyParams, s: usize, degree: usize) -> Result<SeriesPair> {
    let prec = p.prec();
    let n = p.n;
    let xi = BivariateSeries::var(degree, prec, 0);
    let x = BivariateSeries::var(degree, prec, 1);
    let x2xi = x.mul(&x).mul(&xi);
    let nd = Complex::with_val(prec, -&p.delta);
    if s == 0 {
        let d = xi.add_constant(&nd);
        Ok([xi.mul(&d.inv()?), x.mul(&d)])
    } else if s < n - 1 {
        let w = p.omega_s(s);
        let d = x2xi
            .scale(&p.delta)
            .add(&xi.add_constant(&p.delta).scale(w));
        let e = x2xi.add_constant(w).scale(w);
        Ok([xi.scale(w).mul(&d.inv()?), x.mul(&d).mul(&e.inv()?)])
    } else {
        let d = xi.add_constant(&nd).add(&x2xi.scale(&p.c));
        Ok([xi.mul(&d.inv()?), x])
    }
}

/// `H = f^n` at `q_0` in the `(xi2, x2)` chart, without structure checks.
pub fn return_map_at_q_raw(p: &FamilyParams, degree: usize) -> Result<SeriesPair> {
    let mut h = identity_pair(degree, p.prec());
    for s in 0..p.n {
        h = compose_pair(&chart_step_series(p, s, degree)?, &h)?;
    }
    Ok(h)
}

#[derive(Clone, Debug)]
pub struct QReturnMap {
    pub h: SeriesPair,
    pub eta: (Complex, Complex),
    /// `max(|h_xi - lambda^2|, |h_x - 1/lambda|)` on the linear part.
    pub linear_residual: Float,
    /// Largest `|coefficient|` of `xi^{m+1} x^{2m}`, first coordinate.
    pub resonant_max: Float,
    /// Largest `|coefficient|` of `xi^i x^{2i+1}`, `i >= 1`, second coordinate.
    pub resonant_second_max: Float,
}

/// `H` at `q_0` with the linear part and `S_1 x S^_1` structure asserted.
pub fn return_map_at_q(p: &FamilyParams, degree: usize) -> Result<QReturnMap> {
    if degree < 4 {
        return Err(Error::InvalidArgument(
            "truncation degree must be at least 4".into(),
        ));
    }
    let prec = p.prec();
    let h = return_map_at_q_raw(p, degree)?;
    let l2 = cpowi(&p.lambda, 2);
    let li = Complex::with_val(prec, p.lambda.recip_ref());
    let lin = cdist(h[0].get(1, 0), &l2)
        .max(&cdist(h[1].get(0, 1), &li))
        .max(&cabs(h[0].get(0, 1)))
        .max(&cabs(h[1].get(1, 0)));
    if lin >= p.tol() {
        return Err(Error::Consistency(format!(
            "linear part of H at q is not diag(lambda^2, 1/lambda) (residual {:e})",
            lin.to_f64()
        )));
    }
    let rc = ResonanceClass::lattice(1, 2)?;
    let vanish = pow2_neg(prec, prec / 4);
    let mut res1 = Float::new(prec);
    let mut res2 = Float::new(prec);
    for (i, j, c) in h[0].terms() {
        if j >= 1 && classify_monomial(i, j, &rc, 1) == MonomialClass::ResonantLine {
            res1 = res1.max(&cabs(c));
        }
    }
    for (i, j, c) in h[1].terms() {
        if i >= 1 && j == 2 * i + 1 {
            res2 = res2.max(&cabs(c));
        }
    }
    if let Some((k, i, j)) = remainder_in_class(&h, &rc, &vanish) {
        let c = h[k - 1].get(i, j);
        return Err(Error::StructureViolation(format!(
            "coordinate {k} monomial ({i}, {j}) has coefficient {:e} outside S_1 x S^_1",
            cabs(c).to_f64()
        )));
    }
    Ok(QReturnMap {
        h,
        eta: (l2, li),
        linear_residual: lin,
        resonant_max: res1,
        resonant_second_max: res2,
    })
}

#[derive(Clone, Debug)]
pub struct SigmaReturnMap {
    pub h: SeriesPair,
    pub base: Complex,
    pub eta: (Complex, Complex),
    pub linear_residual: Float,
    /// Largest forbidden low-order coefficient (`t xi^k` in coordinate 1,
    /// `xi^k` with `k != 1` in coordinate 2).
    pub structure_residual: Float,
}

/// `H = f^n` at `[0 : 1 : w]` in the chart `(t, xi) -> [t : 1 : w + xi]`.
pub fn return_map_at_sigma0(
    p: &FamilyParams,
    w: &Complex,
    degree: usize,
) -> Result<SigmaReturnMap> {
    let prec = p.prec();
    let tol = p.tol();
    for s in 1..p.n {
        if cdist(w, p.omega_s(s)) < tol {
            return Err(Error::Precondition(format!(
                "base point is the blown-up point p_{s}"
            )));
        }
    }
    let mut t = BivariateSeries::var(degree, prec, 0);
    let mut y = BivariateSeries::var(degree, prec, 1).add_constant(w);
    for _ in 0..p.n {
        if cabs(y.constant_term()) < tol {
            return Err(Error::Precondition(
                "orbit of the base point meets x = 0".into(),
            ));
        }
        let yi = y.inv()?;
        let nt = t.mul(&yi);
        let ny = nt.mul(&nt).sub(&yi.scale(&p.delta)).add_constant(&p.c);
        t = nt;
        y = ny;
    }
    let drift = cdist(y.constant_term(), w);
    if drift >= tol {
        return Err(Error::Consistency(format!(
            "g^n(w) differs from w by {:e}",
            drift.to_f64()
        )));
    }
    let y = y.add_constant(&Complex::with_val(prec, -w));
    let mut y = y;
    y.set(0, 0, Complex::new(prec));
    let one = cint(prec, 1);
    let lin = cdist(t.get(1, 0), &p.lambda)
        .max(&cdist(y.get(0, 1), &one))
        .max(&cabs(t.get(0, 1)))
        .max(&cabs(y.get(1, 0)));
    let mut st = drift;
    for (i, j, c) in t.terms() {
        if i <= 1 && (i, j) != (1, 0) {
            st = st.max(&cabs(c));
        }
    }
    for (i, j, c) in y.terms() {
        if i <= 1 && (i, j) != (0, 1) {
            st = st.max(&cabs(c));
        }
    }
    if lin >= tol || st >= tol {
        return Err(Error::Consistency(format!(
            "H at Sigma_0 is not (lambda t + O(t^2), xi + O(t^2)) (linear {:e}, structure {:e})",
            lin.to_f64(),
            st.to_f64()
        )));
    }
    Ok(SigmaReturnMap {
        h: [t, y],
        base: w.clone(),
        eta: (p.lambda.clone(), one),
        linear_residual: lin,
        structure_residual: st,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    /// 1 or 2.
    pub coordinate: usize,
    pub monomial: (usize, usize),
    pub coefficient: ComplexJson,
}

#[derive(Clone, Debug)]
pub struct LinearizationResult {
    pub phi: SeriesPair,
    pub min_divisor: f64,
    /// Fitted `mu` in `min |divisor| ~ d^{-mu}` over degrees `d`.
    pub mu_hat: Option<f64>,
    pub obstruction: Option<Obstruction>,
    /// Largest forcing met on a resonant monomial.
    pub max_resonant_forcing: f64,
    pub resonant_count: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearizationJson {
    pub phi: [BTreeMap<String, ComplexJson>; 2],
    pub min_divisor: f64,
    pub mu_hat: Option<f64>,
    pub obstruction: Option<Obstruction>,
    pub max_resonant_forcing: f64,
    pub resonant_count: usize,
    pub warnings: Vec<String>,
}

impl LinearizationResult {
    pub fn to_json(&self) -> LinearizationJson {
        LinearizationJson {
            phi: pair_to_json(&self.phi),
            min_divisor: self.min_divisor,
            mu_hat: self.mu_hat,
            obstruction: self.obstruction.clone(),
            max_resonant_forcing: self.max_resonant_forcing,
            resonant_count: self.resonant_count,
            warnings: self.warnings.clone(),
        }
    }
}

/// Hard floor below which a divisor counts as zero.
pub const DIVISOR_FLOOR: f64 = 1e-40;

/// Solves `Phi o h = L o Phi`, `Phi = id + O(2)`, degree by degree.
/// Resonant monomials (on the lattice of `rc`, or with a vanishing divisor)
/// get coefficient 0 when their forcing is below `vanish`, and an
/// obstruction otherwise.
pub fn linearize_diagonal(
    h: &SeriesPair,
    eta1: &Complex,
    eta2: &Complex,
    degree: usize,
    rc: Option<&ResonanceClass>,
    vanish: &Float,
) -> Result<LinearizationResult> {
    let prec = h[0].prec();
    let tol = pow2_neg(prec, prec / 2);
    let h = [h[0].truncate(degree), h[1].truncate(degree)];
    let lin = cdist(h[0].get(1, 0), eta1)
        .max(&cdist(h[1].get(0, 1), eta2))
        .max(&cabs(h[0].get(0, 1)))
        .max(&cabs(h[1].get(1, 0)))
        .max(&cabs(h[0].constant_term()))
        .max(&cabs(h[1].constant_term()));
    if lin >= tol {
        return Err(Error::Precondition(format!(
            "h is not diag(eta1, eta2) + O(2) (residual {:e})",
            lin.to_f64()
        )));
    }
    let etas = [eta1, eta2];
    let mut p1 = vec![cint(prec, 1)];
    let mut p2 = vec![cint(prec, 1)];
    for k in 1..=degree {
        p1.push(Complex::with_val(prec, &p1[k - 1] * eta1));
        p2.push(Complex::with_val(prec, &p2[k - 1] * eta2));
    }
    let mut phi = identity_pair(degree, prec);
    let mut min_div = f64::INFINITY;
    let mut per_degree = Vec::new();
    let mut obstruction = None;
    let mut max_forcing = 0f64;
    let mut resonant_count = 0;
    let mut warnings = Vec::new();
    for d in 2..=degree {
        let comp = compose_pair(&phi, &h)?;
        let mut dmin = f64::INFINITY;
        for k in 0..2 {
            for j in 0..=d {
                let i = d - j;
                let forcing = comp[k].get(i, j).clone();
                let div = Complex::with_val(prec, &p1[i] * &p2[j]) - etas[k];
                let dabs = cabs(&div);
                let lattice = rc.is_some_and(|r| r.is_resonant(i, j, k + 1));
                let resonant = lattice || div.is_zero();
                if !resonant && dabs < DIVISOR_FLOOR {
                    warnings.push(format!(
                        "small divisor {:e} at coordinate {} monomial ({i}, {j})",
                        dabs.to_f64(),
                        k + 1
                    ));
                }
                if resonant || dabs < DIVISOR_FLOOR {
                    resonant_count += 1;
                    let fa = cabs(&forcing);
                    max_forcing = max_forcing.max(fa.to_f64());
                    if fa >= *vanish && obstruction.is_none() {
                        obstruction = Some(Obstruction {
                            coordinate: k + 1,
                            monomial: (i, j),
                            coefficient: (&forcing).into(),
                        });
                    }
                    continue;
                }
                let df = dabs.to_f64();
                min_div = min_div.min(df);
                dmin = dmin.min(df);
                let c = -Complex::with_val(prec, &forcing / &div);
                phi[k].set(i, j, c);
            }
        }
        if dmin.is_finite() {
            per_degree.push((d as f64, dmin));
        }
    }
    let mu_hat = if per_degree.len() >= 3 {
        let xs: Vec<f64> = per_degree.iter().map(|(d, _)| d.ln()).collect();
        let ys: Vec<f64> = per_degree.iter().map(|(_, v)| -v.ln()).collect();
        Some(crate::num::ls_slope(&xs, &ys))
    } else {
        None
    };
    Ok(LinearizationResult {
        phi,
        min_divisor: min_div,
        mu_hat,
        obstruction,
        max_resonant_forcing: max_forcing,
        resonant_count,
        warnings,
    })
}

/// Largest coefficient of `Phi o H - L o Phi` through degree `degree`.
pub fn verify_conjugacy(
    h: &SeriesPair,
    phi: &SeriesPair,
    eta1: &Complex,
    eta2: &Complex,
    degree: usize,
) -> Result<Float> {
    let h = [h[0].truncate(degree), h[1].truncate(degree)];
    let phi = [phi[0].truncate(degree), phi[1].truncate(degree)];
    let comp = compose_pair(&phi, &h)?;
    let a = comp[0].sub(&phi[0].scale(eta1)).max_abs();
    let b = comp[1].sub(&phi[1].scale(eta2)).max_abs();
    Ok(a.max(&b))
}

/// `h = (lambda x + x^2 y, y / lambda)`, resonant for `(a, b) = (1, 1)`.
pub fn demo_resonant_map(lambda: &Complex, degree: usize) -> SeriesPair {
    let prec = lambda.prec().0;
    let mut f = BivariateSeries::var(degree, prec, 0).scale(lambda);
    f.set(2, 1, cint(prec, 1));
    let g =
        BivariateSeries::var(degree, prec, 1).scale(&Complex::with_val(prec, lambda.recip_ref()));
    [f, g]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::cx;

    #[test]
    fn index_layout() {
        let mut seen = vec![false; tri(5)];
        for d in 0..=5 {
            for j in 0..=d {
                seen[idx(d - j, j)] = true;
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn inv_roundtrip() {
        let mut s = BivariateSeries::constant(6, &cx(128, 2.0, 1.0));
        s.set(1, 0, cx(128, 0.5, 0.0));
        s.set(1, 1, cx(128, -1.0, 0.3));
        let one = s.mul(&s.inv().unwrap());
        assert!(cdist(one.get(0, 0), &cint(128, 1)) < 1e-35);
        for (i, j, c) in one.terms() {
            if i + j > 0 {
                assert!(cabs(c) < 1e-30);
            }
        }
    }

    #[test]
    fn lattice_membership() {
        let rc = ResonanceClass::lattice(1, 2).unwrap();
        assert!(rc.is_resonant(2, 2, 1));
        assert!(rc.is_resonant(1, 3, 2));
        assert!(!rc.is_resonant(1, 0, 1));
        assert!(!rc.is_resonant(2, 1, 1));
    }
}
