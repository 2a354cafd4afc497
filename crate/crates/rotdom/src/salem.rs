//! Salem polynomials `chi_{n,m}`, root isolation and certification.

use std::cmp::Ordering;
use std::fmt;

use rug::{Complex, Float, Integer, Rational};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::num::{cabs, carg, float_to_string, pi, pow2_neg, tolerance, ComplexJson};

/// Exact integer polynomial, coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Integer::from(v)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn monomial(k: usize, c: i64) -> Self {
        let mut v = vec![Integer::new(); k + 1];
        v[k] = Integer::from(c);
        Self::new(v)
    }

    /// `t^k - 1`.
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut v = vec![Integer::new(); k + 1];
        v[0] = Integer::from(-1);
        v[k] += 1;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Integer {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Integer {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Integer::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += Integer::from(a * b);
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &Integer) -> Self {
        Self::new(self.coeffs.iter().map(|a| Integer::from(a * c)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Integer::new(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Integer::from(c * k as u64))
                .collect(),
        )
    }

    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading() < 0 {
            g = -g;
        }
        Self::new(
            self.coeffs
                .iter()
                .map(|c| Integer::from(c.div_exact_ref(&g)))
                .collect(),
        )
    }

    /// Pseudo-remainder `prem(self, d)`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo_rem by zero");
        let dd = d.deg();
        let lc = d.leading();
        let mut r = self.clone();
        while !r.is_zero() && r.deg() >= dd {
            let k = r.deg() - dd;
            let lr = r.leading();
            r = r.scale(&lc).sub(&d.scale(&lr).shift(k));
        }
        r
    }

    /// Exact quotient; errors when `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::Consistency("division by the zero polynomial".into()));
        }
        let (q, r) = self.div_rem_integral(d)?;
        if !r.is_zero() {
            return Err(Error::Consistency(format!(
                "nonzero remainder {r} in division of {self} by {d}"
            )));
        }
        Ok(q)
    }

    fn div_rem_integral(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.deg();
        let lc = d.leading();
        let mut r = self.clone();
        let mut q = vec![Integer::new(); self.coeffs.len().saturating_sub(dd).max(1)];
        while !r.is_zero() && r.deg() >= dd {
            let k = r.deg() - dd;
            let lr = r.leading();
            if !lr.is_divisible(&lc) {
                return Err(Error::Consistency(format!(
                    "non-integral quotient dividing {self} by {d}"
                )));
            }
            let c = Integer::from(lr.div_exact_ref(&lc));
            r = r.sub(&d.scale(&c).shift(k));
            q[k] = c;
        }
        Ok((Self::new(q), r))
    }

    /// Greatest common divisor, primitive with positive leading coefficient
    /// (times the gcd of the contents).
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive_part().scale(&o.content());
        }
        if o.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let cg = Integer::from(self.content().gcd_ref(&o.content()));
        let (mut a, mut b) = if self.deg() >= o.deg() {
            (self.primitive_part(), o.primitive_part())
        } else {
            (o.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cg)
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation at the precision of `z`.
    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = z.prec().0;
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|k| self.coeffs[k] == self.coeffs[n - 1 - k])
    }

    pub fn is_monic_up_to_sign(&self) -> bool {
        let lc = self.leading();
        lc == 1 || lc == -1
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_decimal_strings(v: &[String]) -> Result<Self> {
        let mut out = Vec::with_capacity(v.len());
        for s in v {
            let c = Integer::from_str_radix(s, 10)
                .map_err(|e| Error::InvalidArgument(format!("bad integer {s:?}: {e}")))?;
            out.push(c);
        }
        Ok(Self::new(out))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let a = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = a != 1 || k == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        IntPolynomial::from_decimal_strings(&v).map_err(D::Error::custom)
    }
}

/// `chi_{n,m}(t) = t(t^{nm}-1)(t^n-2t^{n-1}+1)/((t^n-1)(t-1)) + 1`.
pub fn chi_polynomial(n: usize, m: usize) -> Result<IntPolynomial> {
    if n < 3 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "chi_{{n,m}} needs n >= 3 and m >= 1, got n={n}, m={m}"
        )));
    }
    let mut mid = IntPolynomial::monomial(n, 1).add(&IntPolynomial::monomial(n - 1, -2));
    mid = mid.add(&IntPolynomial::one());
    let num = IntPolynomial::x_pow_minus_one(n * m).mul(&mid).shift(1);
    let den = IntPolynomial::x_pow_minus_one(n).mul(&IntPolynomial::from_i64(&[-1, 1]));
    let q = num.div_exact(&den)?;
    Ok(q.add(&IntPolynomial::one()))
}

/// Squarefree decomposition (Yun): pairs `(factor, multiplicity)`.
pub fn squarefree_decomposition(p: &IntPolynomial) -> Result<Vec<(IntPolynomial, usize)>> {
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let f = p.primitive_part();
    let df = f.derivative();
    let a0 = f.gcd(&df).primitive_part();
    let mut b = f.div_exact(&a0)?;
    let c = df.div_exact(&a0)?;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d).primitive_part();
        let nb = b.div_exact(&a)?;
        let nc = d.div_exact(&a)?;
        if !a.is_constant() {
            out.push((a, i));
        }
        d = nc.sub(&nb.derivative());
        b = nb;
        i += 1;
    }
    Ok(out)
}

const GUARD_BITS: u32 = 64;
const ABERTH_MAX_ITER: usize = 2000;

fn aberth_squarefree(q: &IntPolynomial, wp: u32) -> Result<Vec<Complex>> {
    let d = q.deg();
    let c: Vec<Complex> = q
        .coeffs()
        .iter()
        .map(|a| Complex::with_val(wp, a))
        .collect();
    if d == 1 {
        let r = Complex::with_val(wp, -&c[0]) / &c[1];
        return Ok(vec![r]);
    }
    let lc = cabs(&c[d]).to_f64();
    let mut bound: f64 = 0.0;
    for k in 1..=d {
        let v = (cabs(&c[d - k]).to_f64() / lc).powf(1.0 / k as f64);
        bound = bound.max(v);
    }
    let radius = bound.max(1e-3);
    let mut z: Vec<Complex> = (0..d)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex::with_val(wp, (radius * th.cos(), radius * th.sin()))
        })
        .collect();
    let conv = pow2_neg(wp, wp - 8);
    let mut settled = 0;
    let eval = |x: &Complex| {
        let mut p = Complex::new(wp);
        let mut dp = Complex::new(wp);
        for a in c.iter().rev() {
            dp *= x;
            dp += &p;
            p *= x;
            p += a;
        }
        (p, dp)
    };
    for _ in 0..ABERTH_MAX_ITER {
        let mut worst = Float::new(wp);
        for k in 0..d {
            let (p, dp) = eval(&z[k]);
            if p.is_zero() {
                continue;
            }
            let ratio = Complex::with_val(wp, &p / &dp);
            let mut s = Complex::new(wp);
            for j in 0..d {
                if j != k {
                    let diff = Complex::with_val(wp, &z[k] - &z[j]);
                    s += diff.recip();
                }
            }
            let den = Complex::with_val(wp, 1) - Complex::with_val(wp, &ratio * &s);
            let w = ratio / den;
            let scale = cabs(&z[k]).max(&Float::with_val(wp, 1));
            let rel = cabs(&w) / scale;
            if rel > worst {
                worst = rel;
            }
            z[k] -= w;
        }
        if worst < conv {
            settled += 1;
            if settled >= 2 {
                return Ok(z);
            }
        }
    }
    let best = z
        .iter()
        .map(|r| cabs(&q.eval_complex(r)).to_f64())
        .fold(0.0, f64::max);
    Err(Error::NumericFailure {
        msg: format!("Aberth iteration did not converge for {q}"),
        residual: best,
    })
}

/// Sort roots by (argument, modulus); arguments near `-pi` count as `pi`.
pub fn sort_roots(roots: &mut [Complex], tol: &Float) {
    let key = |z: &Complex| {
        let mut a = carg(z);
        let p = pi(z.prec().0);
        if Float::with_val(z.prec().0, &a + &p) < *tol {
            a += &p;
            a += &p;
        }
        (a, cabs(z))
    };
    let mut keyed: Vec<(Float, Float, Complex)> = roots
        .iter()
        .map(|z| {
            let (a, m) = key(z);
            (a, m, z.clone())
        })
        .collect();
    keyed.sort_by(|x, y| {
        let da = Float::with_val(x.0.prec(), &x.0 - &y.0).abs();
        if da > *tol {
            x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal)
        } else {
            x.1.partial_cmp(&y.1).unwrap_or(Ordering::Equal)
        }
    });
    for (slot, (_, _, z)) in roots.iter_mut().zip(keyed) {
        *slot = z;
    }
}

/// All roots of `p` with multiplicity, sorted by (argument, modulus).
pub fn find_roots(p: &IntPolynomial, precision_bits: u32) -> Result<Vec<Complex>> {
    if p.is_constant() {
        return Err(Error::InvalidArgument(
            "find_roots needs a nonconstant polynomial".into(),
        ));
    }
    if precision_bits < crate::num::MIN_PRECISION {
        return Err(Error::InvalidArgument(format!(
            "precision {precision_bits} below {}",
            crate::num::MIN_PRECISION
        )));
    }
    let wp = precision_bits + GUARD_BITS;
    let tol = tolerance(precision_bits);
    let snap = pow2_neg(wp, precision_bits * 3 / 4);
    let mut roots = Vec::with_capacity(p.deg());
    for (factor, mult) in squarefree_decomposition(p)? {
        let rs = aberth_squarefree(&factor, wp)?;
        for r in rs {
            for _ in 0..mult {
                roots.push(r.clone());
            }
        }
    }
    let mut worst = Float::new(wp);
    for r in roots.iter_mut() {
        if Float::with_val(wp, r.imag().abs_ref()) < snap {
            *r.mut_imag() = Float::new(wp);
        }
        let res = cabs(&p.eval_complex(r));
        if res > worst {
            worst = res;
        }
    }
    if worst >= tol {
        return Err(Error::NumericFailure {
            msg: format!("root residual above 2^-{} for {p}", precision_bits / 2),
            residual: worst.to_f64(),
        });
    }
    let mut out: Vec<Complex> = roots
        .iter()
        .map(|r| Complex::with_val(precision_bits, r))
        .collect();
    sort_roots(&mut out, &tol);
    Ok(out)
}

/// Roots with `| |r| - 1 | < tol`, preserving order.
pub fn unit_circle_roots(roots: &[Complex], tol: &Float) -> Vec<Complex> {
    roots
        .iter()
        .filter(|r| {
            let m = cabs(r) - 1u32;
            m.abs() < *tol
        })
        .cloned()
        .collect()
}

/// Euler's totient.
pub fn euler_phi(mut k: u64) -> u64 {
    let mut result = k;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            while k.is_multiple_of(p) {
                k /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if k > 1 {
        result -= result / k;
    }
    result
}

/// Largest `k` with `phi(k) <= d`; beyond it no cyclotomic factor of degree `<= d` exists.
pub fn max_cyclotomic_order(d: usize) -> u64 {
    let d = d as u64;
    let limit = 2 * d * d + 6;
    (1..=limit)
        .filter(|&k| euler_phi(k) <= d)
        .max()
        .unwrap_or(1)
}

/// `t^k - 1 mod q`, as an integer polynomial up to a positive scalar.
fn xk_minus_one_mod(q: &IntPolynomial, k: usize) -> IntPolynomial {
    let d = q.deg();
    if k < d {
        return IntPolynomial::x_pow_minus_one(k);
    }
    let lc = Rational::from(q.leading());
    let qc: Vec<Rational> = q.coeffs().iter().map(|c| Rational::from(c) / &lc).collect();
    // r = t^j mod q with deg r < d
    let mut r = vec![Rational::new(); d];
    r[0] = Rational::from(1);
    for _ in 0..k {
        let top = r[d - 1].clone();
        for i in (1..d).rev() {
            r[i] = r[i - 1].clone() - Rational::from(&top * &qc[i]);
        }
        r[0] = -Rational::from(&top * &qc[0]);
    }
    r[0] -= 1;
    let mut den = Integer::from(1);
    for c in &r {
        den.lcm_mut(c.denom());
    }
    IntPolynomial::new(
        r.iter()
            .map(|c| c.numer() * Integer::from(&den / c.denom()))
            .collect(),
    )
}

/// `gcd(q, t^k - 1)`.
pub fn gcd_with_xk_minus_one(q: &IntPolynomial, k: usize) -> IntPolynomial {
    let r = xk_minus_one_mod(q, k);
    if r.is_zero() {
        q.primitive_part()
    } else {
        q.gcd(&r).primitive_part()
    }
}

/// Outcome of [`certify_not_root_of_unity`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clearance {
    pub certified: bool,
    pub k_max: u64,
    /// First `k` with `gcd(p, t^k - 1) != 1`.
    pub first_failure: Option<u64>,
    /// True when `k_max` reaches [`max_cyclotomic_order`] of the degree.
    pub unconditional: bool,
}

/// Checks `gcd(p, t^k - 1) = 1` for every `k <= k_max`.
pub fn certify_not_root_of_unity(p: &IntPolynomial, k_max: u64) -> Clearance {
    let unconditional = k_max >= max_cyclotomic_order(p.deg());
    for k in 1..=k_max {
        let g = gcd_with_xk_minus_one(p, k as usize);
        if !g.is_constant() {
            return Clearance {
                certified: false,
                k_max,
                first_failure: Some(k),
                unconditional,
            };
        }
    }
    Clearance {
        certified: true,
        k_max,
        first_failure: None,
        unconditional,
    }
}

/// Splits `p = cyclotomic * rest`, where `cyclotomic` collects every root-of-unity factor.
pub fn cyclotomic_part(p: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial)> {
    let mut rest = p.clone();
    let mut cyc = IntPolynomial::one();
    let kmax = max_cyclotomic_order(p.deg()) as usize;
    for k in 1..=kmax {
        loop {
            if rest.is_constant() {
                return Ok((cyc, rest));
            }
            let g = gcd_with_xk_minus_one(&rest, k);
            if g.is_constant() {
                break;
            }
            rest = rest.div_exact(&g)?;
            cyc = cyc.mul(&g);
        }
    }
    Ok((cyc, rest))
}

/// Why a polynomial failed the Salem root-distribution test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum NotSalem {
    NotReciprocal,
    NoDominantRoot { all_roots_of_unity: bool },
    MultipleDominant { root: String },
    DominantNotReal { root: String },
    MissingReciprocal { lambda: String },
    OffUnitCircle { root: String },
}

impl fmt::Display for NotSalem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotSalem::NotReciprocal => write!(f, "coefficients are not palindromic"),
            NotSalem::NoDominantRoot {
                all_roots_of_unity: true,
            } => {
                write!(f, "no root of modulus > 1 (all roots are roots of unity)")
            }
            NotSalem::NoDominantRoot {
                all_roots_of_unity: false,
            } => {
                write!(f, "no root of modulus > 1")
            }
            NotSalem::MultipleDominant { root } => {
                write!(f, "more than one root of modulus > 1, e.g. {root}")
            }
            NotSalem::DominantNotReal { root } => write!(f, "dominant root {root} is not real"),
            NotSalem::MissingReciprocal { lambda } => {
                write!(f, "reciprocal of the dominant root {lambda} is not a root")
            }
            NotSalem::OffUnitCircle { root } => write!(f, "root {root} is off the unit circle"),
        }
    }
}

fn show(z: &Complex) -> String {
    format!("{:.12e}{:+.12e}i", z.real().to_f64(), z.imag().to_f64())
}

#[derive(Clone, Debug)]
pub struct SalemCertificate {
    pub poly: IntPolynomial,
    pub lambda: Float,
    pub unit_roots: Vec<Complex>,
    pub tolerance: Float,
    pub cyclotomic_clearance: u64,
    /// Product of the root-of-unity factors of `poly` (1 for a clean Salem polynomial).
    pub cyclotomic_part: IntPolynomial,
    /// Per unit root: is it a root of unity.
    pub unit_root_is_root_of_unity: Vec<bool>,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SalemCertificateJson {
    pub poly: IntPolynomial,
    pub lambda: String,
    pub unit_roots: Vec<ComplexJson>,
    pub tolerance: String,
    pub cyclotomic_clearance: u64,
    pub cyclotomic_part: IntPolynomial,
    pub unit_root_is_root_of_unity: Vec<bool>,
    pub precision: u32,
}

impl SalemCertificate {
    pub fn to_json(&self) -> SalemCertificateJson {
        SalemCertificateJson {
            poly: self.poly.clone(),
            lambda: float_to_string(&self.lambda),
            unit_roots: self
                .unit_roots
                .iter()
                .map(ComplexJson::from_complex)
                .collect(),
            tolerance: format!("{:e}", self.tolerance.to_f64()),
            cyclotomic_clearance: self.cyclotomic_clearance,
            cyclotomic_part: self.cyclotomic_part.clone(),
            unit_root_is_root_of_unity: self.unit_root_is_root_of_unity.clone(),
            precision: self.precision_bits,
        }
    }

    /// Unit roots that are not roots of unity, in sorted order.
    pub fn non_torsion_unit_roots(&self) -> Vec<Complex> {
        self.unit_roots
            .iter()
            .zip(&self.unit_root_is_root_of_unity)
            .filter(|(_, &t)| !t)
            .map(|(r, _)| r.clone())
            .collect()
    }
}

/// Salem certificate with the default tolerance `2^(-prec/2)`.
pub fn salem_certificate(p: &IntPolynomial, precision_bits: u32) -> Result<SalemCertificate> {
    salem_certificate_with_tolerance(p, precision_bits, &tolerance(precision_bits))
}

pub fn salem_certificate_with_tolerance(
    p: &IntPolynomial,
    precision_bits: u32,
    tol: &Float,
) -> Result<SalemCertificate> {
    if p.is_constant() {
        return Err(Error::InvalidArgument(
            "salem_certificate needs a nonconstant polynomial".into(),
        ));
    }
    if !p.is_palindromic() {
        return Err(Error::NotSalem(NotSalem::NotReciprocal));
    }
    let roots = find_roots(p, precision_bits)?;
    let prec = precision_bits;
    let one_plus = Float::with_val(prec, 1) + tol;
    let big: Vec<&Complex> = roots.iter().filter(|r| cabs(r) > one_plus).collect();
    let (cyc, rest) = cyclotomic_part(p)?;
    if big.is_empty() {
        return Err(Error::NotSalem(NotSalem::NoDominantRoot {
            all_roots_of_unity: rest.is_constant(),
        }));
    }
    if big.len() > 1 {
        return Err(Error::NotSalem(NotSalem::MultipleDominant {
            root: show(big[1]),
        }));
    }
    let lam_c = big[0].clone();
    if Float::with_val(prec, lam_c.imag().abs_ref()) >= *tol {
        return Err(Error::NotSalem(NotSalem::DominantNotReal {
            root: show(&lam_c),
        }));
    }
    let lambda = Float::with_val(prec, lam_c.real());
    let inv = Complex::with_val(prec, lam_c.recip_ref());
    let mut used_inv = false;
    let mut unit_roots = Vec::new();
    for r in &roots {
        if std::ptr::eq(r, big[0]) {
            continue;
        }
        if !used_inv && crate::num::cdist(r, &inv) < *tol {
            used_inv = true;
            continue;
        }
        let m = Float::with_val(prec, cabs(r) - 1u32).abs();
        if m >= *tol {
            return Err(Error::NotSalem(NotSalem::OffUnitCircle { root: show(r) }));
        }
        unit_roots.push(r.clone());
    }
    if !used_inv {
        return Err(Error::NotSalem(NotSalem::MissingReciprocal {
            lambda: float_to_string(&lambda),
        }));
    }
    let flags = unit_roots
        .iter()
        .map(|r| !cyc.is_constant() && cabs(&cyc.eval_complex(r)) < *tol)
        .collect();
    let k = max_cyclotomic_order(rest.deg());
    let clearance = certify_not_root_of_unity(&rest, k);
    if !clearance.certified {
        return Err(Error::Consistency(
            "cyclotomic split left a root-of-unity factor".into(),
        ));
    }
    Ok(SalemCertificate {
        poly: p.clone(),
        lambda,
        unit_roots,
        tolerance: tol.clone(),
        cyclotomic_clearance: k,
        cyclotomic_part: cyc,
        unit_root_is_root_of_unity: flags,
        precision_bits,
    })
}
