//! Exact linear algebra on the Picard lattice.

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::salem::{cyclotomic_part, salem_certificate, IntPolynomial};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Integer>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Integer::new(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Integer::from(1));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, Integer::from(*v));
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Integer>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Integer {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Integer) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Integer> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if *a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = Integer::from(a * o.get(k, j));
                    out.data[i * o.cols + j] += v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Integer]) -> Vec<Integer> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Integer::new();
                for (j, x) in v.iter().enumerate() {
                    acc += Integer::from(self.get(i, j) * x);
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a -= b;
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn max_abs(&self) -> Integer {
        self.data
            .iter()
            .map(|v| Integer::from(v.abs_ref()))
            .max()
            .unwrap_or_default()
    }

    /// Leading principal submatrix of size `k`.
    pub fn leading(&self, k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Integer {
        assert!(self.is_square(), "det of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Integer::from(1);
        }
        let mut a: Vec<Vec<Integer>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Integer::new(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                    a[i][j] = v.div_exact(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Leading principal minors `D_1 .. D_n`.
    pub fn leading_minors(&self) -> Vec<Integer> {
        (1..=self.rows).map(|k| self.leading(k).det()).collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Integer>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..self.rows {
                if r != rank && a[r][col] != 0 {
                    let f = a[r][col].clone();
                    let pv = a[rank][col].clone();
                    for c in 0..self.cols {
                        let v = Integer::from(&a[r][c] * &pv) - Integer::from(&a[rank][c] * &f);
                        a[r][c] = v;
                    }
                    let g = a[r].iter().fold(Integer::new(), |g, x| g.gcd(x));
                    if g > 1 {
                        for x in a[r].iter_mut() {
                            *x = Integer::from(x.div_exact_ref(&g));
                        }
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn to_decimal_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    fn to_rational(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| Rational::from(self.get(i, j)))
                    .collect()
            })
            .collect()
    }
}

impl serde::Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_rows().serialize(s)
    }
}

/// Characteristic polynomial `det(tI - M)` by Berkowitz's division-free algorithm.
pub fn charpoly(m: &IntMatrix) -> IntPolynomial {
    assert!(m.is_square(), "charpoly of a non-square matrix");
    let n = m.rows();
    // v holds coefficients in descending degree
    let mut v = vec![Integer::from(1)];
    for r in 0..n {
        // column C = a[0..r][r], row R = a[r][0..r]
        let col: Vec<Integer> = (0..r).map(|i| m.get(i, r).clone()).collect();
        let row: Vec<Integer> = (0..r).map(|j| m.get(r, j).clone()).collect();
        let mut t = Vec::with_capacity(r + 2);
        t.push(Integer::from(1));
        t.push(-m.get(r, r).clone());
        let mut w = col;
        for _ in 0..r {
            let dot = row
                .iter()
                .zip(&w)
                .fold(Integer::new(), |acc, (a, b)| acc + Integer::from(a * b));
            t.push(-dot);
            w = (0..r)
                .map(|i| {
                    (0..r).fold(Integer::new(), |acc, k| {
                        acc + Integer::from(m.get(i, k) * &w[k])
                    })
                })
                .collect();
        }
        let mut nv = vec![Integer::new(); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for (k, vk) in v.iter().enumerate() {
                if i >= k {
                    *slot += Integer::from(&t[i - k] * vk);
                }
            }
        }
        v = nv;
    }
    v.reverse();
    IntPolynomial::new(v)
}

/// Gram matrix `C^T J C` for classes given as columns in an orthogonal basis `J = diag(signs)`.
pub fn gram(classes: &[Vec<Integer>], signs: &[i64]) -> IntMatrix {
    let k = classes.len();
    let mut g = IntMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            let mut acc = Integer::new();
            for (i, s) in signs.iter().enumerate() {
                acc += Integer::from(&classes[a][i] * &classes[b][i]) * *s;
            }
            g.set(a, b, acc);
        }
    }
    g
}

/// Index of `gamma_{s, l}` (0-based `s`, 1-based `l`).
pub fn gamma_index(n: usize, s: usize, l: usize) -> usize {
    (l - 1) * n + s
}

/// Total-transform basis for the three-level blowup: `H`, `e1_s`, `e2_s`, `e3_{s,l}`.
#[derive(Clone, Debug)]
pub struct BlowupBasis {
    pub n: usize,
    pub m: usize,
}

impl BlowupBasis {
    pub fn dim(&self) -> usize {
        1 + 2 * self.n + self.n * self.m
    }

    pub fn signs(&self) -> Vec<i64> {
        let mut v = vec![-1; self.dim()];
        v[0] = 1;
        v
    }

    pub fn h(&self) -> usize {
        0
    }

    pub fn e1(&self, s: usize) -> usize {
        1 + s
    }

    pub fn e2(&self, s: usize) -> usize {
        1 + self.n + s
    }

    pub fn e3(&self, s: usize, l: usize) -> usize {
        1 + 2 * self.n + gamma_index(self.n, s, l)
    }

    pub fn labels(&self) -> Vec<String> {
        let mut v = vec!["H".to_string()];
        v.extend((0..self.n).map(|s| format!("E1_{s}")));
        v.extend((0..self.n).map(|s| format!("E2_{s}")));
        for l in 1..=self.m {
            v.extend((0..self.n).map(|s| format!("E3_{s},{l}")));
        }
        v
    }

    fn vector(&self, terms: &[(usize, i64)]) -> Vec<Integer> {
        let mut v = vec![Integer::new(); self.dim()];
        for &(i, c) in terms {
            v[i] += c;
        }
        v
    }

    pub fn sigma0(&self) -> Vec<Integer> {
        let mut t = vec![(self.h(), 1)];
        t.extend((0..self.n).map(|s| (self.e1(s), -1)));
        self.vector(&t)
    }

    pub fn f1(&self, s: usize) -> Vec<Integer> {
        self.vector(&[(self.e1(s), 1), (self.e2(s), -1)])
    }

    pub fn f2(&self, s: usize) -> Vec<Integer> {
        let mut t = vec![(self.e2(s), 1)];
        t.extend((1..=self.m).map(|l| (self.e3(s, l), -1)));
        self.vector(&t)
    }

    pub fn f3(&self, s: usize, l: usize) -> Vec<Integer> {
        self.vector(&[(self.e3(s, l), 1)])
    }

    /// Strict transform of the line `Sigma_1 = {x = 0}`.
    pub fn sigma1(&self) -> Vec<Integer> {
        self.vector(&[(self.h(), 1), (self.e1(0), -1), (self.e2(0), -1)])
    }

    /// Classes spanning `S`: `Sigma_0`, `F1_s`, `F2_s`.
    pub fn s_classes(&self) -> Vec<Vec<Integer>> {
        let mut v = vec![self.sigma0()];
        v.extend((0..self.n).map(|s| self.f1(s)));
        v.extend((0..self.n).map(|s| self.f2(s)));
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PicData {
    pub n: usize,
    pub m: usize,
    pub s_labels: Vec<String>,
    pub s_matrix: IntMatrix,
    pub t_labels: Vec<String>,
    pub t_matrix: IntMatrix,
    #[serde(serialize_with = "ser_integer")]
    pub det_s: Integer,
}

fn ser_integer<S: serde::Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if n < 3 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 3 and m >= 1, got ({n}, {m})"
        )));
    }
    Ok(())
}

/// Intersection matrix on `S = span{Sigma_0, F1_s, F2_s}`.
pub fn intersection_matrix_s(n: usize, m: usize) -> Result<IntMatrix> {
    check_nm(n, m)?;
    let b = BlowupBasis { n, m };
    Ok(gram(&b.s_classes(), &b.signs()))
}

pub fn s_labels(n: usize) -> Vec<String> {
    let mut v = vec!["Sigma0".to_string()];
    v.extend((0..n).map(|s| format!("F1_{s}")));
    v.extend((0..n).map(|s| format!("F2_{s}")));
    v
}

/// Push-forward on `T` in the basis `gamma_{s,l}`.
pub fn t_action_matrix(n: usize, m: usize) -> Result<IntMatrix> {
    check_nm(n, m)?;
    let dim = n * m;
    let mut t = IntMatrix::zeros(dim, dim);
    for k in 0..dim - 1 {
        t.set(k + 1, k, Integer::from(1));
    }
    for l in 1..=m {
        for s in 0..n {
            let v = if s == 0 { -1 } else { 1 };
            t.set(gamma_index(n, s, l), dim - 1, Integer::from(v));
        }
    }
    Ok(t)
}

pub fn t_labels(n: usize, m: usize) -> Vec<String> {
    let mut v = Vec::new();
    for l in 1..=m {
        v.extend((0..n).map(|s| format!("gamma_{s},{l}")));
    }
    v
}

impl PicData {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let s_matrix = intersection_matrix_s(n, m)?;
        let det_s = s_matrix.det();
        Ok(PicData {
            n,
            m,
            s_labels: s_labels(n),
            s_matrix,
            t_labels: t_labels(n, m),
            t_matrix: t_action_matrix(n, m)?,
            det_s,
        })
    }

    /// Negative definite iff `(-1)^k D_k > 0` for every leading minor.
    pub fn s_negative_definite(&self) -> bool {
        is_negative_definite(&self.s_matrix)
    }
}

pub fn is_negative_definite(m: &IntMatrix) -> bool {
    m.is_symmetric()
        && m.leading_minors()
            .iter()
            .enumerate()
            .all(|(k, d)| if k % 2 == 0 { *d < 0 } else { *d > 0 })
}

/// `det` of the intersection matrix on `S` in closed form, `(2m+1)^{n-1} (2m+1-mn)`.
pub fn det_s_closed_form(n: usize, m: usize) -> Integer {
    Integer::from(Integer::u_pow_u((2 * m + 1) as u32, (n - 1) as u32))
        * (Integer::from(2 * m + 1) - Integer::from(m * n))
}

/// Rational inverse, `None` when singular.
pub fn inverse_rational(m: &IntMatrix) -> Option<Vec<Vec<Rational>>> {
    let n = m.rows();
    let mut a = m.to_rational();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational::from(if i == j { 1 } else { 0 }))
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, p);
        inv.swap(col, p);
        let pv = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &pv;
            inv[col][j] /= &pv;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col].clone();
                for j in 0..n {
                    let x = Rational::from(&f * &a[col][j]);
                    a[r][j] -= x;
                    let y = Rational::from(&f * &inv[col][j]);
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

/// `images * classes^{-1}`, required to be integral.
pub fn pushforward_from_classes(
    classes: &[Vec<Integer>],
    images: &[Vec<Integer>],
) -> Result<IntMatrix> {
    let c = IntMatrix::from_columns(classes);
    let d = IntMatrix::from_columns(images);
    let inv = inverse_rational(&c)
        .ok_or_else(|| Error::Consistency("strict-transform classes are not a basis".into()))?;
    let n = c.rows();
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Rational::new();
            for k in 0..n {
                acc += Rational::from(d.get(i, k)) * &inv[k][j];
            }
            if *acc.denom() != 1 {
                return Err(Error::Consistency("push-forward is not integral".into()));
            }
            out.set(i, j, acc.numer().clone());
        }
    }
    Ok(out)
}

/// `A^T J A == J`.
pub fn is_isometry(a: &IntMatrix, signs: &[i64]) -> bool {
    let n = a.rows();
    let mut j = IntMatrix::zeros(n, n);
    for (i, s) in signs.iter().enumerate() {
        j.set(i, i, Integer::from(*s));
    }
    a.transpose().mul(&j).mul(a) == j
}

/// Full push-forward on `Pic(X)` in the total-transform basis.
pub fn full_pushforward(n: usize, m: usize) -> Result<IntMatrix> {
    check_nm(n, m)?;
    let b = BlowupBasis { n, m };
    let mut classes = vec![b.sigma0()];
    let mut images = vec![b.sigma0()];
    for s in 0..n {
        classes.push(b.f1(s));
        images.push(b.f1((s + 1) % n));
    }
    for s in 0..n {
        classes.push(b.f2(s));
        images.push(b.f2((s + 1) % n));
    }
    for l in 1..=m {
        for s in 0..n {
            classes.push(b.f3(s, l));
            let k = gamma_index(n, s, l) + 1;
            if k == n * m {
                images.push(b.sigma1());
            } else {
                images.push(b.f3(k % n, k / n + 1));
            }
        }
    }
    pushforward_from_classes(&classes, &images)
}

/// Topological entropy `log lambda_{n,m}`.
pub fn entropy(n: usize, m: usize, precision_bits: u32) -> Result<Float> {
    let chi = crate::salem::chi_polynomial(n, m)?;
    let cert = salem_certificate(&chi, precision_bits)?;
    Ok(cert.lambda.ln())
}

/// Jordan data at eigenvalue 1 from the ranks of `(A - I)^k`.
#[derive(Clone, Debug, Serialize)]
pub struct JordanAtOne {
    pub ranks: Vec<usize>,
    /// `blocks_at_least[k-1]` = number of blocks of size `>= k`.
    pub blocks_at_least: Vec<usize>,
    pub max_block: usize,
}

pub fn jordan_at_one(a: &IntMatrix) -> JordanAtOne {
    let n = a.rows();
    let b = a.sub(&IntMatrix::identity(n));
    let mut ranks = vec![n];
    let mut p = IntMatrix::identity(n);
    for _ in 0..n {
        p = p.mul(&b);
        let r = p.rank();
        let stable = r == *ranks.last().unwrap();
        ranks.push(r);
        if stable {
            break;
        }
    }
    let blocks_at_least: Vec<usize> = ranks
        .windows(2)
        .map(|w| w[0] - w[1])
        .take_while(|&d| d > 0)
        .collect();
    let max_block = blocks_at_least.len();
    JordanAtOne {
        ranks: ranks[1..].to_vec(),
        blocks_at_least,
        max_block,
    }
}

/// Integer basis of `{v : C^T J v = 0}` for the given classes.
pub fn orthogonal_complement(classes: &[Vec<Integer>], signs: &[i64]) -> Vec<Vec<Integer>> {
    let dim = signs.len();
    let rows: Vec<Vec<Rational>> = classes
        .iter()
        .map(|c| {
            c.iter()
                .zip(signs)
                .map(|(x, s)| Rational::from(Integer::from(x * *s)))
                .collect()
        })
        .collect();
    let mut a = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][col].clone();
        for x in a[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..a.len() {
            if i != r && a[i][col] != 0 {
                let f = a[i][col].clone();
                for k in 0..dim {
                    let y = Rational::from(&f * &a[r][k]);
                    a[i][k] -= y;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fcol| {
            let mut v = vec![Rational::new(); dim];
            v[fcol] = Rational::from(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][fcol].clone();
            }
            let mut den = Integer::from(1);
            for x in &v {
                den.lcm_mut(x.denom());
            }
            let ints: Vec<Integer> = v
                .iter()
                .map(|x| x.numer() * Integer::from(&den / x.denom()))
                .collect();
            let g = ints.iter().fold(Integer::new(), |g, x| g.gcd(x));
            ints.into_iter()
                .map(|x| Integer::from(x.div_exact_ref(&g)))
                .collect()
        })
        .collect()
}

/// Matrix of `a` restricted to the invariant subspace spanned by `basis`.
pub fn restrict(a: &IntMatrix, basis: &[Vec<Integer>]) -> Result<Vec<Vec<Rational>>> {
    let k = basis.len();
    let n = a.rows();
    let mut out = vec![vec![Rational::new(); k]; k];
    for (j, v) in basis.iter().enumerate() {
        let w = a.mul_vec(v);
        // solve basis * x = w by least-squares-free elimination on an augmented system
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = basis.iter().map(|b| Rational::from(&b[i])).collect();
                row.push(Rational::from(&w[i]));
                row
            })
            .collect();
        let mut r = 0;
        let mut piv = Vec::new();
        for col in 0..k {
            let Some(p) = (r..n).find(|&i| aug[i][col] != 0) else {
                continue;
            };
            aug.swap(r, p);
            let pv = aug[r][col].clone();
            for x in aug[r].iter_mut() {
                *x /= &pv;
            }
            for i in 0..n {
                if i != r && aug[i][col] != 0 {
                    let f = aug[i][col].clone();
                    for c in 0..=k {
                        let y = Rational::from(&f * &aug[r][c]);
                        aug[i][c] -= y;
                    }
                }
            }
            piv.push(col);
            r += 1;
        }
        if aug[r..].iter().any(|row| row[k] != 0) {
            return Err(Error::Consistency("subspace is not invariant".into()));
        }
        for (row, &col) in piv.iter().enumerate() {
            out[col][j] = aug[row][k].clone();
        }
    }
    Ok(out)
}

/// Example 2.5 lattice: `H, E1_0, E1_1, E2'_0, E2'_1, E2''_0, E2''_1, E3_1..E3_4`.
pub mod example25 {
    use super::*;

    pub const LABELS: [&str; 11] = [
        "H", "E1_0", "E1_1", "E2'_0", "E2'_1", "E2''_0", "E2''_1", "E3_1", "E3_2", "E3_3", "E3_4",
    ];

    fn v(terms: &[(usize, i64)]) -> Vec<Integer> {
        let mut out = vec![Integer::new(); 11];
        for &(i, c) in terms {
            out[i] += c;
        }
        out
    }

    pub fn signs() -> Vec<i64> {
        let mut s = vec![-1; 11];
        s[0] = 1;
        s
    }

    pub fn sigma0() -> Vec<Integer> {
        v(&[(0, 1), (1, -1), (2, -1)])
    }
    pub fn f1(s: usize) -> Vec<Integer> {
        v(&[(1 + s, 1), (3 + s, -1), (5 + s, -1)])
    }
    /// `F2'_s` (`s = 0, 1`) and `F2''_s`.
    pub fn f2p(s: usize) -> Vec<Integer> {
        v(&[(3 + s, 1), (7 + s, -1)])
    }
    pub fn f2pp(s: usize) -> Vec<Integer> {
        v(&[(5 + s, 1), (9 + s, -1)])
    }
    /// `F3_i`, `i = 1..4`.
    pub fn f3(i: usize) -> Vec<Integer> {
        v(&[(6 + i, 1)])
    }
    pub fn sigma1() -> Vec<Integer> {
        v(&[(0, 1), (1, -1), (3, -1)])
    }
    pub fn sigma2() -> Vec<Integer> {
        v(&[(0, 1), (2, -1), (6, -1)])
    }

    pub fn s_classes() -> Vec<Vec<Integer>> {
        vec![sigma0(), f1(0), f1(1), f2p(0), f2p(1), f2pp(0), f2pp(1)]
    }

    /// Push-forward `k_*` on the full 11-dimensional lattice.
    pub fn pushforward() -> Result<IntMatrix> {
        let mut classes = s_classes();
        classes.extend((1..=4).map(f3));
        let images = vec![
            sigma0(),
            f1(1),
            f1(0),
            f2p(1),
            f2pp(0),
            f2pp(1),
            f2p(0),
            f3(2),
            f3(3),
            f3(4),
            sigma1(),
        ];
        pushforward_from_classes(&classes, &images)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Example25Report {
    pub labels: Vec<String>,
    pub matrix: IntMatrix,
    pub isometry: bool,
    pub sigma2_maps_to_f3_1: bool,
    pub charpoly: IntPolynomial,
    /// Every eigenvalue is a root of unity (exact cyclotomic split).
    pub spectral_radius_one: bool,
    pub jordan: JordanAtOne,
    pub growth_ks: Vec<u64>,
    pub growth_norms: Vec<f64>,
    pub growth_slope: f64,
    /// Restriction to `S^perp` (4-dimensional).
    pub s_perp_dim: usize,
    pub s_perp_charpoly: IntPolynomial,
    pub s_perp_max_jordan_block: usize,
    /// Rank of the intersection form on `S`.
    pub s_rank: usize,
}

/// Derives `k_*` for Example 2.5 and checks its spectral facts.
pub fn example25_fixture() -> Result<Example25Report> {
    use example25::*;
    let a = pushforward()?;
    let signs = signs();
    let isometry = is_isometry(&a, &signs);
    let sigma2_maps_to_f3_1 = a.mul_vec(&sigma2()) == f3(1);
    let cp = charpoly(&a);
    let (_, rest) = cyclotomic_part(&cp)?;
    let spectral_radius_one = rest.is_constant();
    if !spectral_radius_one {
        return Err(Error::FixtureMismatch(format!(
            "charpoly {cp} has a root off the unit circle"
        )));
    }
    let jordan = jordan_at_one(&a);
    let mut ks = Vec::new();
    let mut norms = Vec::new();
    let mut p = a.pow(100);
    for k in (100..=1000).step_by(10) {
        if k > 100 {
            p = p.mul(&a.pow(10));
        }
        ks.push(k as u64);
        norms.push(frobenius(&p));
    }
    let lx: Vec<f64> = ks.iter().map(|k| (*k as f64).ln()).collect();
    let ly: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    let slope = crate::num::ls_slope(&lx, &ly);
    let sperp = orthogonal_complement(&s_classes(), &signs);
    let x = restrict(&a, &sperp)?;
    let xi = rational_to_int(&x)?;
    let s_gram = gram(&s_classes(), &signs);
    Ok(Example25Report {
        labels: LABELS.iter().map(|s| s.to_string()).collect(),
        matrix: a,
        isometry,
        sigma2_maps_to_f3_1,
        charpoly: cp,
        spectral_radius_one,
        jordan,
        growth_ks: ks,
        growth_norms: norms,
        growth_slope: slope,
        s_perp_dim: sperp.len(),
        s_perp_charpoly: charpoly(&xi),
        s_perp_max_jordan_block: jordan_at_one(&xi).max_block,
        s_rank: s_gram.rank(),
    })
}

fn rational_to_int(x: &[Vec<Rational>]) -> Result<IntMatrix> {
    let k = x.len();
    let mut m = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            if *x[i][j].denom() != 1 {
                return Err(Error::Consistency(
                    "restricted matrix is not integral".into(),
                ));
            }
            m.set(i, j, x[i][j].numer().clone());
        }
    }
    Ok(m)
}

/// Frobenius norm as `f64`.
pub fn frobenius(a: &IntMatrix) -> f64 {
    let mut acc = Integer::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc += Integer::from(a.get(i, j).square_ref());
        }
    }
    acc.to_f64().sqrt()
}
