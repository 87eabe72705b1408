//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything here is exact: determinants use fraction-free (Bareiss)
//! elimination, the Smith normal form is computed by gcd-pivoting row and
//! column elimination with explicit unimodular transforms, and the
//! determinantal divisors are available as a brute-force minor computation
//! that serves as an independent check on the elimination path.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Largest dimension for which [`determinantal_divisors`] enumerates minors.
pub const BRUTE_FORCE_MINOR_DIM: usize = 8;

/// Square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::domain("matrix dimension must be at least 1"));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(IntMatrix { n, data })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        IntMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    /// Circulant matrix whose row `i` is `first_row` rotated right by `i`.
    pub fn circulant<T: Into<BigInt> + Clone>(first_row: &[T]) -> Self {
        let n = first_row.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = first_row[(j + n - i) % n].clone().into();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.n)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self
            .rows()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.n).map(|i| self[(i, i)].clone()).collect()
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        det(self)
    }

    /// Inverse over the integers; `None` unless the matrix is unimodular.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = self
            .rows()
            .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, p);
            inv.swap(col, p);
            let piv = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &piv;
                inv[col][j] = &inv[col][j] / &piv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if !inv[i][j].is_integer() {
                    return None;
                }
                out[(i, j)] = inv[i][j].to_integer();
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.n {
            self.data.swap(i * self.n + a, i * self.n + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.n {
            let t = k * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.n {
            let t = k * &self[(i, src)];
            self[(i, dst)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.n {
            let x = std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = -x;
        }
    }

    /// Row-major literal: rows separated by `;`, entries by `,`.
    pub fn to_literal(&self) -> String {
        self.rows().map(|r| r.iter().join(",")).join(";")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows()
                .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
                .collect(),
        )
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix[{}]", self.to_literal())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", x.to_string(), width = width)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| {
                        let e = e.trim();
                        e.parse::<BigInt>()
                            .map_err(|_| Error::Parse(format!("bad matrix entry {e:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Parse(format!(
                "matrix literal is not square: {n} rows but a row of length {}",
                bad.len()
            )));
        }
        IntMatrix::from_rows(rows)
    }
}

/// Exact determinant by Bareiss fraction-free elimination; sign preserved.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.n;
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    det(m).abs().is_one()
}

fn submatrix(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> IntMatrix {
    let k = rows.len();
    let mut s = IntMatrix::zeros(k);
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            s[(a, b)] = m[(i, j)].clone();
        }
    }
    s
}

/// gcd of all k×k minors, by enumeration.
fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
    let n = m.n;
    let mut g = BigInt::zero();
    for rows in (0..n).combinations(k) {
        for cols in (0..n).combinations(k) {
            g = g.gcd(&det(&submatrix(m, &rows, &cols)));
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

/// Determinantal divisors `d_1, …, d_n` (with `d_0 = 1` implied).
///
/// Minors are enumerated directly up to [`BRUTE_FORCE_MINOR_DIM`]; larger
/// matrices take prefix products of the elimination-based invariant factors.
pub fn determinantal_divisors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    if det(m).is_zero() {
        return Err(Error::SingularMatrix);
    }
    if m.n <= BRUTE_FORCE_MINOR_DIM {
        Ok((1..=m.n).map(|k| minor_gcd(m, k)).collect())
    } else {
        let snf = smith_normal_form(m);
        let mut acc = BigInt::one();
        Ok(snf
            .s
            .iter()
            .map(|s| {
                acc *= s;
                acc.clone()
            })
            .collect())
    }
}

/// Invariant factors `s_k = d_k / d_{k-1}`.
pub fn invariant_factors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    let d = determinantal_divisors(m)?;
    let mut prev = BigInt::one();
    Ok(d.into_iter()
        .map(|dk| {
            let s = &dk / &prev;
            prev = dk;
            s
        })
        .collect())
}

/// Smith normal form `U·M·V = diag(s)` with explicit unimodular transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: Vec<BigInt>,
    pub v: IntMatrix,
    /// Signed determinant of the decomposed matrix.
    pub det: BigInt,
}

impl SnfDecomposition {
    pub fn det_abs(&self) -> BigInt {
        self.det.abs()
    }

    pub fn is_singular(&self) -> bool {
        self.det.is_zero()
    }

    pub fn diagonal(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.s)
    }

    /// Checks every structural invariant of the decomposition against `m`.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let n = m.dim();
        if self.s.len() != n || self.u.dim() != n || self.v.dim() != n {
            return false;
        }
        let Ok(um) = self.u.mul(m) else { return false };
        let Ok(umv) = um.mul(&self.v) else {
            return false;
        };
        let chain = self.s.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        });
        let product: BigInt = self.s.iter().product();
        umv == self.diagonal()
            && is_unimodular(&self.u)
            && is_unimodular(&self.v)
            && self.s.iter().all(|x| !x.is_negative())
            && chain
            && product == det(m).abs()
    }

    /// `{"s":[…],"u":[[…]],"v":[[…]],"det":…}` with decimal-string integers.
    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "det": self.det.to_string(),
        })
    }
}

/// Smith normal form by gcd-pivoting elimination.
///
/// The pivot is always the smallest nonzero entry (in absolute value) of the
/// remaining block; remainders from row and column reduction become new,
/// smaller pivots until the pivot row and column are clear. A pivot that
/// fails to divide the rest of the block absorbs the offending row, which
/// again shrinks it. Singular input yields trailing zero factors.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let n = m.n;
    let mut a = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);

    for t in 0..n {
        while let Some((pi, pj)) = smallest_nonzero(&a, t) {
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..n {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            let pivot = a[(t, t)].clone();
            let offender =
                (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    SnfDecomposition {
        s: a.diagonal_entries(),
        u,
        v,
        det: det(m),
    }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let n = a.n;
    let mut best: Option<(usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Lower-triangular column Hermite form `H = M·W` with positive diagonal.
///
/// The columns of `H` span the same lattice as those of `M`, so every
/// integer vector has a unique representative `x` with `0 <= x_i < h_ii`.
pub(crate) fn hermite_lower(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.n;
    let mut a = m.clone();
    for i in 0..n {
        for j in i + 1..n {
            if a[(i, j)].is_zero() {
                continue;
            }
            let x = a[(i, i)].clone();
            let y = a[(i, j)].clone();
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let xg = &x / &g;
            let yg = &y / &g;
            for r in 0..n {
                let ci = a[(r, i)].clone();
                let cj = a[(r, j)].clone();
                a[(r, i)] = &s * &ci + &t * &cj;
                a[(r, j)] = &xg * &cj - &yg * &ci;
            }
        }
        if a[(i, i)].is_zero() {
            return Err(Error::SingularMatrix);
        }
        if a[(i, i)].is_negative() {
            for r in 0..n {
                let x = std::mem::take(&mut a[(r, i)]);
                a[(r, i)] = -x;
            }
        }
        for j in 0..i {
            let q = -a[(i, j)].div_floor(&a[(i, i)]);
            if !q.is_zero() {
                a.add_col_multiple(j, i, &q);
            }
        }
    }
    Ok(a)
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::too_large(x, i64::MAX as u64))
}
