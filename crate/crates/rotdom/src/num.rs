//! Arbitrary-precision complex helpers on top of `rug`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

/// High-precision complex number. The precision travels with the value.
pub type BigComplex = Complex;

pub const MIN_PRECISION: u32 = 64;
pub const DEFAULT_PRECISION: u32 = 256;

/// Default tolerance `2^(-prec/2)`.
pub fn tolerance(prec: u32) -> Float {
    Float::with_val(prec, 1) >> (prec / 2) as i32
}

/// `2^(-bits)` at the given precision.
pub fn pow2_neg(prec: u32, bits: u32) -> Float {
    Float::with_val(prec, 1) >> bits as i32
}

pub fn cx(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn cint(prec: u32, v: i64) -> Complex {
    Complex::with_val(prec, (v, 0))
}

pub fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub fn carg(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.arg_ref())
}

pub fn cabs_f64(z: &Complex) -> f64 {
    cabs(z).to_f64()
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `e^{i theta}`.
pub fn cis(theta: &Float) -> Complex {
    let prec = theta.prec();
    let (s, c) = theta.clone().sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

pub fn cpowi(z: &Complex, k: i64) -> Complex {
    let prec = z.prec().0;
    Complex::with_val(prec, z.pow(k as i32))
}

/// Distance `|a - b|`.
pub fn cdist(a: &Complex, b: &Complex) -> Float {
    let d = Complex::with_val(a.prec().0, a - b);
    cabs(&d)
}

pub fn is_small(z: &Complex, tol: &Float) -> bool {
    cabs(z) < *tol
}

/// Round to a different precision.
pub fn with_prec(z: &Complex, prec: u32) -> Complex {
    Complex::with_val(prec, z)
}

pub fn float_to_string(x: &Float) -> String {
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
    x.to_string_radix(10, Some(digits))
}

/// JSON carrier for a complex value: decimal strings plus the precision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
    pub precision: u32,
}

impl ComplexJson {
    pub fn from_complex(z: &Complex) -> Self {
        ComplexJson {
            re: float_to_string(z.real()),
            im: float_to_string(z.imag()),
            precision: z.prec().0,
        }
    }

    pub fn to_complex(&self) -> Option<Complex> {
        let re = Float::parse(&self.re).ok()?;
        let im = Float::parse(&self.im).ok()?;
        Some(Complex::with_val(
            self.precision,
            (
                Float::with_val(self.precision, re),
                Float::with_val(self.precision, im),
            ),
        ))
    }
}

impl From<&Complex> for ComplexJson {
    fn from(z: &Complex) -> Self {
        ComplexJson::from_complex(z)
    }
}

/// Eigenvalues of a 2x2 complex matrix `[[a, b], [c, d]]`.
pub fn eig2(a: &Complex, b: &Complex, c: &Complex, d: &Complex) -> (Complex, Complex) {
    let prec = a.prec().0;
    let tr = Complex::with_val(prec, a + d);
    let det = Complex::with_val(prec, a * d) - Complex::with_val(prec, b * c);
    let half = Complex::with_val(prec, &tr / 2u32);
    let disc = Complex::with_val(prec, half.square_ref()) - det;
    let r = disc.sqrt();
    (
        Complex::with_val(prec, &half + &r),
        Complex::with_val(prec, &half - &r),
    )
}

/// Product of 2x2 complex matrices stored row-major.
pub fn mat2_mul(x: &[Complex; 4], y: &[Complex; 4]) -> [Complex; 4] {
    let prec = x[0].prec().0;
    let e = |i: usize, j: usize, k: usize, l: usize| {
        Complex::with_val(prec, &x[i] * &y[j]) + Complex::with_val(prec, &x[k] * &y[l])
    };
    [e(0, 0, 1, 2), e(0, 1, 1, 3), e(2, 0, 3, 2), e(2, 1, 3, 3)]
}

pub fn mat2_identity(prec: u32) -> [Complex; 4] {
    [cint(prec, 1), cint(prec, 0), cint(prec, 0), cint(prec, 1)]
}

pub fn mat2_pow(m: &[Complex; 4], mut k: u64) -> [Complex; 4] {
    let mut base = m.clone();
    let mut acc = mat2_identity(m[0].prec().0);
    while k > 0 {
        if k & 1 == 1 {
            acc = mat2_mul(&acc, &base);
        }
        base = mat2_mul(&base, &base);
        k >>= 1;
    }
    acc
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}
