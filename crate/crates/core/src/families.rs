//! The dense families built from `M_n = circ(n, −1, …, −1)`.
//!
//! `M_{n,m} = m·M_n` defines a commutative-step digraph of degree `n`, order
//! `m^n (n+1)^{n−1}` and diameter `C(n+1, 2)·m − n`. Through the Smith form
//! `U_n·M_{n,m}·V_n = diag(m, m(n+1), …, m(n+1))` it is isomorphic to
//! `D_{n,m} = Cay(Z_m ⊕ (n−1)Z_{m(n+1)}; B'_n)`, whose density
//! `(2/d)^d / (d+1)` does not depend on `m`.
//!
//! Also collected here: the closed-form degree-diameter bounds used to
//! frame these numbers (counting bound, `d = 2` exact values, the `d = 3`
//! upper bound `3/25 (k+3)^3`) and the leading-coefficient comparison.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::cayley::{density, AbelianGroupSpec, CayleyDigraph};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::ratio::{self, int, rat};
use crate::search::{na2_formula, nc2_formula};

pub fn make_mn(n: u64) -> Result<IntMatrix> {
    make_mnm(n, 1)
}

/// `m·circ(n, −1, …, −1)`.
pub fn make_mnm(n: u64, m: u64) -> Result<IntMatrix> {
    if n < 2 {
        return Err(Error::domain(format!("family needs n >= 2, got {n}")));
    }
    if m < 1 {
        return Err(Error::domain("family needs m >= 1"));
    }
    let (n_, m_) = (n as i64, m as i64);
    let mut row = vec![-m_; n as usize];
    row[0] = m_ * n_;
    Ok(IntMatrix::circulant(&row))
}

/// `D_n = Cay((n−1)Z_{n+1}; B_n)` with `B_n` the all-ones vector and the
/// all-ones vectors carrying a single 2.
pub fn make_dn(n: u64) -> Result<CayleyDigraph> {
    if n < 2 {
        return Err(Error::domain(format!("D_n needs n >= 2, got {n}")));
    }
    let t = (n - 1) as usize;
    let group = AbelianGroupSpec::new(vec![n + 1; t])?;
    let mut gens = vec![vec![1i64; t]];
    for j in 0..t {
        let mut g = vec![1i64; t];
        g[j] = 2;
        gens.push(g);
    }
    CayleyDigraph::new(group, gens)
}

/// Generator set `B'_n ⊂ Z^n`: all-ones, then all-ones with a 2 in position `j`, `j = 2..n`.
fn b_prime(n: usize) -> Vec<Vec<i64>> {
    let mut gens = vec![vec![1i64; n]];
    for j in 1..n {
        let mut g = vec![1i64; n];
        g[j] = 2;
        gens.push(g);
    }
    gens
}

/// `(2/d)^d / (d+1)`.
pub fn family_density(d: u64) -> BigRational {
    let two_over_d = rat(2, d);
    num_traits::pow(two_over_d, d as usize) / int(d + 1)
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub n: u64,
    pub m: u64,
    pub matrix: IntMatrix,
    /// Over `Z_m ⊕ (n−1)Z_{m(n+1)}`; the `Z_1` factor is kept when `m = 1`.
    pub digraph: CayleyDigraph,
    pub predicted_order: BigInt,
    pub predicted_diameter: u64,
    pub predicted_density: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCheck {
    pub measured_order: u64,
    pub measured_diameter: u64,
    pub measured_density: BigRational,
    pub at_max_distance: u64,
    pub order_ok: bool,
    pub diameter_ok: bool,
    pub density_ok: bool,
}

impl FamilyCheck {
    pub fn passed(&self) -> bool {
        self.order_ok && self.diameter_ok && self.density_ok
    }
}

pub fn make_dnm(n: u64, m: u64) -> Result<FamilyInstance> {
    let matrix = make_mnm(n, m)?;
    let mut factors = vec![m];
    factors.extend(std::iter::repeat_n(m * (n + 1), n as usize - 1));
    let digraph = CayleyDigraph::new(AbelianGroupSpec::new(factors)?, b_prime(n as usize))?;
    let predicted_order = BigInt::from(m).pow(n as u32) * BigInt::from(n + 1).pow(n as u32 - 1);
    Ok(FamilyInstance {
        n,
        m,
        matrix,
        digraph,
        predicted_order,
        predicted_diameter: binomial_u64(n + 1, 2) * m - n,
        predicted_density: family_density(n),
    })
}

impl FamilyInstance {
    /// Measures order, diameter and density of `D_{n,m}` by BFS.
    pub fn verify(&self) -> Result<FamilyCheck> {
        let profile = self.digraph.distance_profile()?;
        let dens = density(&self.digraph, &profile)?;
        Ok(FamilyCheck {
            measured_order: profile.order,
            order_ok: BigInt::from(profile.order) == self.predicted_order,
            diameter_ok: profile.diameter == self.predicted_diameter,
            density_ok: dens == self.predicted_density,
            at_max_distance: profile.at_max_distance(),
            measured_diameter: profile.diameter,
            measured_density: dens,
        })
    }

    /// The commutative-step digraph of the matrix, via its computed Smith form.
    pub fn matrix_digraph(&self) -> Result<CayleyDigraph> {
        CayleyDigraph::from_matrix(&self.matrix)
    }

    pub fn to_json(&self, check: Option<&FamilyCheck>) -> Value {
        let mut v = json!({
            "n": self.n,
            "m": self.m,
            "group": self.digraph.group().to_string(),
            "predicted": {
                "order": self.predicted_order.to_string(),
                "diameter": self.predicted_diameter,
                "density": ratio::to_fraction_string(&self.predicted_density),
            },
        });
        if let Some(c) = check {
            v["measured"] = json!({
                "order": c.measured_order,
                "diameter": c.measured_diameter,
                "density": ratio::to_fraction_string(&c.measured_density),
                "at_max_distance": c.at_max_distance,
            });
            v["pass"] = json!({
                "order": c.order_ok,
                "diameter": c.diameter_ok,
                "density": c.density_ok,
                "all": c.passed(),
            });
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictedMetrics {
    pub d: u64,
    pub k: u64,
    /// Scale parameter with `k = C(d+1, 2)·m − d`.
    pub m: u64,
    /// `2^d/(d+1) · (k/d + 1)^d`.
    pub order: BigRational,
    pub density: BigRational,
}

/// Order and density the family predicts at diameter `k`; only diameters of
/// the form `C(d+1, 2)·m − d` are attained.
pub fn predicted_metrics(d: u64, k: u64) -> Result<PredictedMetrics> {
    if d < 2 {
        return Err(Error::domain(format!("family needs d >= 2, got {d}")));
    }
    let step = binomial_u64(d + 1, 2);
    let (m, r) = (k + d).div_rem(&step);
    if r != 0 || m < 1 {
        return Err(Error::UnattainableDiameter { d, k });
    }
    let base = rat(k, d) + BigRational::one();
    let order =
        num_traits::pow(int(2), d as usize) / int(d + 1) * num_traits::pow(base, d as usize);
    Ok(PredictedMetrics {
        d,
        k,
        m,
        order,
        density: family_density(d),
    })
}

/// `⌊3/25 (k+3)^3⌋`, the degree-3 Abelian upper bound.
pub fn degree3_upper_bound(k: u64) -> u64 {
    3 * (k + 3).pow(3) / 25
}

/// Every vertex is a sum of at most `k` generators: `N <= C(k+d, d)`.
pub fn counting_bound(d: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..d {
        acc = acc * BigInt::from(k + d - i) / BigInt::from(i + 1);
    }
    acc
}

/// One row of the degree-3 cyclic density table, exactly as printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PublishedRow {
    pub k: u64,
    pub delta: &'static str,
    pub ceil_0084_k3: u64,
    pub ceil_3_25_k3: u64,
    pub fourth_column: u64,
    pub nc3: u64,
}

const fn row(k: u64, delta: &'static str, a: u64, b: u64, c: u64, nc3: u64) -> PublishedRow {
    PublishedRow {
        k,
        delta,
        ceil_0084_k3: a,
        ceil_3_25_k3: b,
        fourth_column: c,
        nc3,
    }
}

/// Published values for `d = 3`, `k = 1..10`.
pub const PUBLISHED_DEGREE3: [PublishedRow; 10] = [
    row(1, "0.06250", 1, 1, 7, 4),
    row(2, "0.07200", 1, 1, 13, 9),
    row(3, "0.07407", 3, 4, 24, 16),
    row(4, "0.07872", 6, 8, 38, 27),
    row(5, "0.07812", 11, 15, 56, 40),
    row(6, "0.07819", 19, 26, 81, 57),
    row(7, "0.08400", 29, 42, 111, 84),
    row(8, "0.08340", 44, 62, 147, 111),
    row(9, "0.07986", 62, 88, 192, 138),
    row(10, "0.08011", 84, 120, 244, 176),
];

pub const FOURTH_COLUMN_NOTE: &str = "the printed fourth column is headed floor(3/25 (k+3)^3) \
but every printed entry equals floor((k+3)^3 / 9); both are reported";

pub fn published_row(k: u64) -> Option<&'static PublishedRow> {
    PUBLISHED_DEGREE3.iter().find(|r| r.k == k)
}

/// Degree-3 columns computed from their formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree3Columns {
    /// `⌈0.084 k^3⌉`
    pub ceil_0084_k3: BigInt,
    /// `⌈3/25 k^3⌉`
    pub ceil_3_25_k3: BigInt,
    /// `⌊3/25 (k+3)^3⌋`
    pub upper_bound: BigInt,
    /// `⌊(k+3)^3 / 9⌋`, matching the printed fourth column.
    pub cube_over_9: BigInt,
    pub printed: Option<PublishedRow>,
}

impl Degree3Columns {
    pub fn new(k: u64) -> Self {
        let k3 = int(k).pow(3);
        let kp3 = int(k + 3).pow(3);
        Degree3Columns {
            ceil_0084_k3: ratio::ceil(&(rat(84, 1000) * &k3)),
            ceil_3_25_k3: ratio::ceil(&(rat(3, 25) * &k3)),
            upper_bound: ratio::floor(&(rat(3, 25) * &kp3)),
            cube_over_9: ratio::floor(&(kp3 / int(9))),
            printed: published_row(k).copied(),
        }
    }

    /// `N / (k+3)^3`
    pub fn density_of(k: u64, order: u64) -> BigRational {
        rat(order, BigInt::from(k + 3).pow(3))
    }
}

#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub d: u64,
    pub k: u64,
    /// `(k/d)^d`, leading term of the cyclic lower bound.
    pub lower_leading: BigRational,
    /// `k^d / d!`, leading term of the upper bound.
    pub upper_leading: BigRational,
    /// `C(k+d, d)`.
    pub counting_bound: BigInt,
    pub nc2: Option<u64>,
    pub na2: Option<u64>,
    pub degree3: Option<Degree3Columns>,
    /// `2^{d − log2(d+1)} = 2^d / (d+1)`, the family's coefficient of `(k/d)^d`.
    pub family_coefficient: BigRational,
    pub family_density: BigRational,
    pub family_at_k: Option<PredictedMetrics>,
    /// Existence bound coefficient, with its unknown constant `c` kept symbolic.
    pub existence_coefficient: &'static str,
    /// `e^{d − (3/2) ln d − (ln ln d)(1 + log2 e)} / sqrt(2π)`; display only.
    pub existence_factor_without_c: f64,
    pub footnote: Option<&'static str>,
}

pub const EXISTENCE_COEFFICIENT: &str =
    "c/sqrt(2*pi) * exp(d - (3/2) ln d - (ln ln d)(1 + log2 e))";

pub fn bounds_report(d: u64, k: u64) -> Result<BoundsReport> {
    if d < 2 || k < 1 {
        return Err(Error::domain(format!(
            "bounds need d >= 2 and k >= 1, got d={d}, k={k}"
        )));
    }
    let factorial: BigInt = (1..=d).map(BigInt::from).product();
    let df = d as f64;
    let exponent = df - 1.5 * df.ln() - df.ln().ln() * (1.0 + std::f64::consts::LOG2_E);
    let degree3 = (d == 3).then(|| Degree3Columns::new(k));
    let footnote = degree3
        .as_ref()
        .and_then(|c| c.printed)
        .map(|_| FOURTH_COLUMN_NOTE);
    Ok(BoundsReport {
        d,
        k,
        lower_leading: num_traits::pow(rat(k, d), d as usize),
        upper_leading: BigRational::new(BigInt::from(k).pow(d as u32), factorial),
        counting_bound: counting_bound(d, k),
        nc2: (d == 2 && k >= 2).then(|| nc2_formula(k).expect("k >= 2")),
        na2: (d == 2 && k >= 2).then(|| na2_formula(k).expect("k >= 2")),
        degree3,
        family_coefficient: num_traits::pow(int(2), d as usize) / int(d + 1),
        family_density: family_density(d),
        family_at_k: predicted_metrics(d, k).ok(),
        existence_coefficient: EXISTENCE_COEFFICIENT,
        existence_factor_without_c: exponent.exp() / (2.0 * std::f64::consts::PI).sqrt(),
        footnote,
    })
}

impl BoundsReport {
    pub fn to_json(&self) -> Value {
        let f = ratio::to_fraction_string;
        let mut v = json!({
            "d": self.d,
            "k": self.k,
            "lower_leading": f(&self.lower_leading),
            "upper_leading": f(&self.upper_leading),
            "counting_bound": self.counting_bound.to_string(),
            "family_coefficient": f(&self.family_coefficient),
            "family_coefficient_form": "2^(d - log2(d+1))",
            "family_density": f(&self.family_density),
            "existence_coefficient": self.existence_coefficient,
            "existence_factor_without_c": self.existence_factor_without_c,
        });
        if let (Some(nc), Some(na)) = (self.nc2, self.na2) {
            v["nc2"] = json!(nc);
            v["na2"] = json!(na);
        }
        if let Some(c) = &self.degree3 {
            v["degree3"] = json!({
                "ceil_0084_k3": c.ceil_0084_k3.to_string(),
                "ceil_3_25_k3": c.ceil_3_25_k3.to_string(),
                "upper_bound": c.upper_bound.to_string(),
                "cube_over_9": c.cube_over_9.to_string(),
                "printed": c.printed.map(|r| json!({
                    "delta": r.delta,
                    "ceil_0084_k3": r.ceil_0084_k3,
                    "ceil_3_25_k3": r.ceil_3_25_k3,
                    "fourth_column": r.fourth_column,
                    "nc3": r.nc3,
                })),
            });
        }
        if let Some(p) = &self.family_at_k {
            v["family_at_k"] = json!({
                "m": p.m,
                "order": f(&p.order),
                "density": f(&p.density),
            });
        }
        if let Some(note) = self.footnote {
            v["footnote"] = json!(note);
        }
        v
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = ratio::to_fraction_string;
        writeln!(f, "degree d = {}, diameter k = {}", self.d, self.k)?;
        writeln!(
            f,
            "  lower leading term (k/d)^d      = {}",
            s(&self.lower_leading)
        )?;
        writeln!(
            f,
            "  upper leading term k^d/d!       = {}",
            s(&self.upper_leading)
        )?;
        writeln!(
            f,
            "  counting bound C(k+d,d)         = {}",
            self.counting_bound
        )?;
        if let (Some(nc), Some(na)) = (self.nc2, self.na2) {
            writeln!(f, "  NC_2,k = ceil((k+2)^2/3) - 1    = {nc}")?;
            writeln!(f, "  NA_2,k                          = {na}")?;
        }
        if let Some(c) = &self.degree3 {
            writeln!(f, "  ceil(0.084 k^3)                 = {}", c.ceil_0084_k3)?;
            writeln!(f, "  ceil(3/25 k^3)                  = {}", c.ceil_3_25_k3)?;
            writeln!(f, "  floor(3/25 (k+3)^3)             = {}", c.upper_bound)?;
            writeln!(f, "  floor((k+3)^3/9)                = {}", c.cube_over_9)?;
            if let Some(r) = c.printed {
                writeln!(
                    f,
                    "  published row: delta {} | {} | {} | {} | NC_3,k {}",
                    r.delta, r.ceil_0084_k3, r.ceil_3_25_k3, r.fourth_column, r.nc3
                )?;
            }
        }
        writeln!(
            f,
            "  family coefficient 2^(d-log2(d+1)) = 2^d/(d+1) = {}",
            s(&self.family_coefficient)
        )?;
        writeln!(
            f,
            "  family density (2/d)^d/(d+1)    = {}",
            s(&self.family_density)
        )?;
        match &self.family_at_k {
            Some(p) => writeln!(
                f,
                "  family attains k with m = {}: order {}",
                p.m,
                s(&p.order)
            )?,
            None => writeln!(f, "  family does not attain this k")?,
        }
        writeln!(
            f,
            "  existence coefficient           = {}",
            self.existence_coefficient
        )?;
        writeln!(
            f,
            "  ... without c                   ~ {:.6}",
            self.existence_factor_without_c
        )?;
        if let Some(note) = self.footnote {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}

/// `m^d (d+1)^{d−1}` as an integer, for cross-checks against [`predicted_metrics`].
pub fn family_order(d: u64, m: u64) -> BigInt {
    BigInt::from(m).pow(d as u32) * BigInt::from(d + 1).pow(d as u32 - 1)
}
