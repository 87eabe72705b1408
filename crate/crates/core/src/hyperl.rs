//! Minimum distance diagrams ("hyper-L" sets) of commutative-step digraphs.
//!
//! A hyper-L for `M` picks, for every residue class of `Z^n / M Z^n`, a
//! nonnegative lattice vector of minimal ℓ1-norm. The largest such norm is
//! the diameter of `Cay(Z^n / M Z^n, {e_1, …, e_n})`.
//!
//! Residue classes are keyed here through a Hermite reduction of the lattice,
//! which is independent of the Smith coordinates used by [`crate::cayley`].

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::{hermite_lower, to_i64, IntMatrix};

/// Default cap on the number of residue classes a diagram may enumerate.
pub const DEFAULT_CLASS_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperL {
    dim: usize,
    /// Points sorted by ℓ1-norm, then lexicographically.
    pub points: Vec<Vec<u64>>,
    pub max_norm: u64,
    pub max_attainers: u64,
}

pub fn l1_norm(x: &[u64]) -> u64 {
    x.iter().sum()
}

impl HyperL {
    fn from_points(dim: usize, mut points: Vec<Vec<u64>>) -> Self {
        points.sort_by(|a, b| l1_norm(a).cmp(&l1_norm(b)).then_with(|| a.cmp(b)));
        let max_norm = points.iter().map(|p| l1_norm(p)).max().unwrap_or(0);
        let max_attainers = points.iter().filter(|p| l1_norm(p) == max_norm).count() as u64;
        HyperL {
            dim,
            points,
            max_norm,
            max_attainers,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points at each ℓ1-norm, i.e. the BFS layer sizes.
    pub fn norm_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.max_norm as usize + 1];
        for p in &self.points {
            counts[l1_norm(p) as usize] += 1;
        }
        counts
    }

    /// One row per point: `x1,…,xn,norm`.
    pub fn to_csv(&self) -> String {
        let mut out = (1..=self.dim).map(|i| format!("x{i}")).join(",");
        out += ",norm\n";
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.iter().join(","), l1_norm(p));
        }
        out
    }

    /// Plane picture of a two-dimensional diagram: each point shows its
    /// distance (base 36), `x` grows to the right and `y` upwards.
    pub fn render_ascii(&self) -> Result<String> {
        if self.dim != 2 {
            return Err(Error::domain(
                "ASCII rendering needs a two-dimensional diagram",
            ));
        }
        let w = self.points.iter().map(|p| p[0]).max().unwrap_or(0) as usize + 1;
        let h = self.points.iter().map(|p| p[1]).max().unwrap_or(0) as usize + 1;
        let mut grid = vec![vec!['.'; w]; h];
        for p in &self.points {
            let c = std::char::from_digit((l1_norm(p) % 36) as u32, 36).unwrap_or('?');
            grid[p[1] as usize][p[0] as usize] = c;
        }
        let mut out = String::new();
        for row in grid.iter().rev() {
            out += &row.iter().join(" ");
            out.push('\n');
        }
        Ok(out)
    }
}

/// Reduces integer vectors to the box `0 <= x_i < h_ii` of a lower Hermite basis.
struct ClassKey {
    h: Vec<Vec<i64>>,
    strides: Vec<u64>,
    order: u64,
}

impl ClassKey {
    fn new(m: &IntMatrix, cap: u64) -> Result<Self> {
        let n = m.dim();
        let det = m.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let order = det.magnitude().to_u64().filter(|&o| o <= cap);
        let Some(order) = order else {
            return Err(Error::too_large(det.magnitude(), cap));
        };
        let hm = hermite_lower(m)?;
        let h = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| to_i64(&hm[(i, j)]))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut strides = vec![1u64; n];
        for i in (0..n - 1).rev() {
            strides[i] = strides[i + 1] * h[i + 1][i + 1] as u64;
        }
        Ok(ClassKey { h, strides, order })
    }

    fn key(&self, x: &[i64]) -> u64 {
        let n = x.len();
        let mut y = x.to_vec();
        let mut key = 0u64;
        for j in 0..n {
            let q = y[j].div_euclid(self.h[j][j]);
            if q != 0 {
                for (yi, row) in y[j..].iter_mut().zip(&self.h[j..]) {
                    *yi -= q * row[j];
                }
            }
            key += y[j] as u64 * self.strides[j];
        }
        key
    }
}

pub fn minimum_distance_diagram(m: &IntMatrix) -> Result<HyperL> {
    minimum_distance_diagram_capped(m, DEFAULT_CLASS_CAP)
}

/// BFS over residue classes with unit steps `e_1, …, e_n`.
///
/// Each class keeps the lexicographically smallest representative among the
/// candidates generated from the previous layer.
pub fn minimum_distance_diagram_capped(m: &IntMatrix, cap: u64) -> Result<HyperL> {
    let n = m.dim();
    let keys = ClassKey::new(m, cap)?;
    let mut visited = vec![false; keys.order as usize];
    let origin = vec![0u64; n];
    visited[keys.key(&vec![0i64; n]) as usize] = true;
    let mut points = vec![origin.clone()];
    let mut frontier = vec![origin];
    let mut buf = vec![0i64; n];
    while !frontier.is_empty() {
        let mut candidates: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for rep in &frontier {
            for i in 0..n {
                for (b, &x) in buf.iter_mut().zip(rep) {
                    *b = x as i64;
                }
                buf[i] += 1;
                let k = keys.key(&buf);
                if visited[k as usize] {
                    continue;
                }
                let mut y = rep.clone();
                y[i] += 1;
                candidates
                    .entry(k)
                    .and_modify(|cur| {
                        if y < *cur {
                            *cur = y.clone();
                        }
                    })
                    .or_insert(y);
            }
        }
        frontier = candidates
            .into_iter()
            .map(|(k, y)| {
                visited[k as usize] = true;
                y
            })
            .collect();
        points.extend(frontier.iter().cloned());
    }
    Ok(HyperL::from_points(n, points))
}

/// Membership in the closed-form hyper-L of `circ(n, −1, …, −1)`: all
/// entries at most `n − 1`, and for each `i` in `1..n` at most `i` entries
/// are `>= n − i`. Vectors of the wrong length are not members.
pub fn mn_membership(x: &[u64], n: usize) -> bool {
    x.len() == n && staircase_ok(x, n)
}

/// The staircase condition on a vector of any length `m <= n`.
pub(crate) fn staircase_ok(x: &[u64], n: usize) -> bool {
    let n64 = n as u64;
    if x.iter().any(|&v| v + 1 > n64) {
        return false;
    }
    (1..n.min(x.len() + 1)).all(|i| x.iter().filter(|&&v| v + i as u64 >= n64).count() <= i)
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `f(m, n)` by its recurrence in `n`: for `m < n` the sum runs over
/// `i = 0..=m`, for `m = n` over `i = 0..m`, with `f(0, n) = 1`.
pub fn f_count(m: u64, n: u64) -> Result<BigUint> {
    if m > n {
        return Err(Error::domain(format!(
            "f(m, n) needs m <= n, got m={m}, n={n}"
        )));
    }
    let mut memo = HashMap::new();
    Ok(f_rec(m, n, &mut memo))
}

fn f_rec(m: u64, n: u64, memo: &mut HashMap<(u64, u64), BigUint>) -> BigUint {
    if m == 0 {
        return BigUint::one();
    }
    if let Some(v) = memo.get(&(m, n)) {
        return v.clone();
    }
    let top = if m < n { m } else { m - 1 };
    let v = (0..=top)
        .map(|i| binomial(m, m - i) * f_rec(i, n - 1, memo))
        .sum::<BigUint>();
    memo.insert((m, n), v.clone());
    v
}

/// `(n − m + 1)(n + 1)^{m−1}` for `m >= 1`, and 1 for `m = 0`.
pub fn f_closed_form(m: u64, n: u64) -> Result<BigUint> {
    if m > n {
        return Err(Error::domain(format!(
            "f(m, n) needs m <= n, got m={m}, n={n}"
        )));
    }
    if m == 0 {
        return Ok(BigUint::one());
    }
    Ok(BigUint::from(n - m + 1) * BigUint::from(n + 1).pow(m as u32 - 1))
}

pub fn mn_hyperl(n: usize) -> Result<HyperL> {
    mn_hyperl_capped(n, DEFAULT_CLASS_CAP)
}

/// The hyper-L of `circ(n, −1, …, −1)` listed from its closed-form description.
pub fn mn_hyperl_capped(n: usize, cap: u64) -> Result<HyperL> {
    if n < 2 {
        return Err(Error::domain("the circulant family needs n >= 2"));
    }
    let size = f_closed_form(n as u64, n as u64)?;
    if size > BigUint::from(cap) {
        return Err(Error::too_large(size, cap));
    }
    let points = (0..n)
        .map(|_| 0..n as u64)
        .multi_cartesian_product()
        .filter(|x| mn_membership(x, n))
        .collect();
    Ok(HyperL::from_points(n, points))
}

/// Diameter `C(n+1, 2)·m − n` of the scaled family and the extremal vector
/// `(mn − 1, m(n−1) − 1, …, m − 1)`.
pub fn mnm_diameter_witness(n: u64, m: u64) -> Result<(u64, Vec<u64>)> {
    if n < 2 || m < 1 {
        return Err(Error::domain("need n >= 2 and m >= 1"));
    }
    let witness: Vec<u64> = (1..=n).rev().map(|j| m * j - 1).collect();
    let diameter = n * (n + 1) / 2 * m - n;
    debug_assert_eq!(l1_norm(&witness), diameter);
    Ok((diameter, witness))
}
