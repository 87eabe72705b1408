//! Cayley digraphs of finite Abelian groups `Z_{m_1} ⊕ … ⊕ Z_{m_t}`.
//!
//! Vertices are addressed by their mixed-radix rank over `(m_1, …, m_t)`.
//! Cayley digraphs are vertex-transitive, so a single BFS from the identity
//! gives the full distance distribution.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::lattice::QuotientGroup;
use crate::ratio;

/// Largest order accepted for BFS over a flat vertex array.
pub const MAX_BFS_ORDER: u64 = 1 << 31;

/// Largest order for which DOT export is produced.
pub const MAX_DOT_ORDER: u64 = 200;

/// `Z_{m_1} ⊕ … ⊕ Z_{m_t}`; an empty factor list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroupSpec {
    factors: Vec<u64>,
}

impl AbelianGroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::domain("cyclic factors must be at least 1"));
        }
        let spec = AbelianGroupSpec { factors };
        spec.checked_order()?;
        Ok(spec)
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    fn checked_order(&self) -> Result<u64> {
        self.factors.iter().try_fold(1u64, |acc, &m| {
            acc.checked_mul(m).ok_or_else(|| {
                let big: BigInt = self.factors.iter().map(|&f| BigInt::from(f)).product();
                Error::too_large(big, u64::MAX)
            })
        })
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Factors sorted ascending.
    pub fn sorted(&self) -> Self {
        let mut factors = self.factors.clone();
        factors.sort_unstable();
        AbelianGroupSpec { factors }
    }

    /// Invariant factors `s_1 | s_2 | … | s_r`, all greater than one.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in &self.factors {
            for (p, e) in factorize(m) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let r = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![1u64; r];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, e) in exps.into_iter().enumerate() {
                out[r - 1 - slot] *= p.pow(e);
            }
        }
        out
    }

    pub fn is_isomorphic(&self, other: &AbelianGroupSpec) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors().len() <= 1
    }
}

impl fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        write!(
            f,
            "{}",
            self.factors.iter().map(|m| format!("Z{m}")).join("x")
        )
    }
}

impl FromStr for AbelianGroupSpec {
    type Err = Error;

    /// `Z<k>` atoms joined by `x`, e.g. `Z84` or `Z4xZ4`.
    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .trim()
            .split(['x', 'X'])
            .map(|atom| {
                let atom = atom.trim();
                atom.strip_prefix('Z')
                    .and_then(|k| k.parse::<u64>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::Parse(format!("bad group atom {atom:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        AbelianGroupSpec::new(factors)
    }
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_isomorphic_group(a: &AbelianGroupSpec, b: &AbelianGroupSpec) -> bool {
    a.is_isomorphic(b)
}

/// Mixed-radix addressing of group elements.
#[derive(Clone, Debug)]
pub(crate) struct Indexer {
    radices: Vec<u64>,
    strides: Vec<u64>,
}

impl Indexer {
    pub(crate) fn new(radices: &[u64]) -> Self {
        let mut strides = vec![1u64; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * radices[i + 1];
        }
        Indexer {
            radices: radices.to_vec(),
            strides,
        }
    }

    pub(crate) fn decode_into(&self, mut idx: u64, digits: &mut [u64]) {
        for i in (0..self.radices.len()).rev() {
            digits[i] = idx % self.radices[i];
            idx /= self.radices[i];
        }
    }

    pub(crate) fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    #[inline]
    pub(crate) fn step(&self, digits: &[u64], gen: &[u64]) -> u64 {
        let mut idx = 0;
        for i in 0..digits.len() {
            let mut x = digits[i] + gen[i];
            if x >= self.radices[i] {
                x -= self.radices[i];
            }
            idx += x * self.strides[i];
        }
        idx
    }
}

/// BFS layer sizes from the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Layers {
    pub counts: Vec<u64>,
    pub reachable: u64,
    /// True if the search stopped at the depth limit with vertices unreached.
    pub truncated: bool,
}

/// BFS from the identity. With `limit = Some(k)` it stops after layer `k`.
pub(crate) fn bfs_layers(
    radices: &[u64],
    generators: &[Vec<u64>],
    limit: Option<usize>,
    visits: &mut u64,
) -> Layers {
    let order: u64 = radices.iter().product();
    let ix = Indexer::new(radices);
    let mut visited = vec![false; order as usize];
    visited[0] = true;
    let mut frontier = vec![0u64];
    let mut next = Vec::new();
    let mut counts = vec![1u64];
    let mut reachable = 1u64;
    let mut digits = vec![0u64; radices.len()];
    *visits += 1;
    while !frontier.is_empty() && reachable < order {
        if limit.is_some_and(|k| counts.len() > k) {
            return Layers {
                counts,
                reachable,
                truncated: true,
            };
        }
        for &v in &frontier {
            ix.decode_into(v, &mut digits);
            for g in generators {
                let w = ix.step(&digits, g);
                let slot = &mut visited[w as usize];
                if !*slot {
                    *slot = true;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        *visits += next.len() as u64;
        reachable += next.len() as u64;
        counts.push(next.len() as u64);
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    Layers {
        counts,
        reachable,
        truncated: false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    pub diameter: u64,
    /// `counts[j]` is the number of vertices at distance `j` from the identity.
    pub counts: Vec<u64>,
    pub reachable: u64,
    pub order: u64,
}

impl DistanceProfile {
    pub fn at_max_distance(&self) -> u64 {
        *self
            .counts
            .last()
            .expect("counts always holds the identity layer")
    }
}

/// `Cay(Γ; A)`: arc `(u, v)` iff `v − u ∈ A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CayleyDigraph {
    group: AbelianGroupSpec,
    generators: Vec<Vec<u64>>,
}

impl CayleyDigraph {
    /// Generators are reduced componentwise modulo the group factors.
    pub fn new(group: AbelianGroupSpec, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::domain(
                "a Cayley digraph needs at least one generator",
            ));
        }
        let t = group.factors.len();
        let reduced = generators
            .into_iter()
            .map(|g| {
                if g.len() != t {
                    return Err(Error::DimensionMismatch {
                        expected: t,
                        found: g.len(),
                    });
                }
                Ok(g.iter()
                    .zip(&group.factors)
                    .map(|(&x, &m)| x.rem_euclid(m as i64) as u64)
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CayleyDigraph {
            group,
            generators: reduced,
        })
    }

    pub(crate) fn from_reduced(group: AbelianGroupSpec, generators: Vec<Vec<u64>>) -> Self {
        debug_assert!(generators
            .iter()
            .all(|g| g.iter().zip(&group.factors).all(|(x, m)| x < m)));
        CayleyDigraph { group, generators }
    }

    /// The commutative-step digraph `Cay(Z^n / M Z^n, {e_1, …, e_n})`.
    pub fn from_matrix(m: &IntMatrix) -> Result<Self> {
        Self::from_quotient(&QuotientGroup::new(m.clone())?)
    }

    /// Generators are the Smith-coordinate images `U·e_i`; trivial `Z_1`
    /// components are dropped.
    pub fn from_quotient(q: &QuotientGroup) -> Result<Self> {
        let snf = q.snf();
        let keep: Vec<usize> = (0..q.dim()).filter(|&i| !snf.s[i].is_one()).collect();
        let factors = keep
            .iter()
            .map(|&i| {
                snf.s[i]
                    .to_u64()
                    .ok_or_else(|| Error::too_large(&snf.s[i], u64::MAX))
            })
            .collect::<Result<Vec<_>>>()?;
        let group = AbelianGroupSpec::new(factors)?;
        let generators = (0..q.dim())
            .map(|j| {
                keep.iter()
                    .map(|&i| {
                        snf.u[(i, j)]
                            .mod_floor(&snf.s[i])
                            .to_u64()
                            .expect("reduced below a u64 factor")
                    })
                    .collect()
            })
            .collect();
        Ok(CayleyDigraph { group, generators })
    }

    pub fn group(&self) -> &AbelianGroupSpec {
        &self.group
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    fn check_bfs_size(&self) -> Result<()> {
        if self.order() > MAX_BFS_ORDER {
            return Err(Error::too_large(self.order(), MAX_BFS_ORDER));
        }
        Ok(())
    }

    pub(crate) fn layers(&self, limit: Option<usize>, visits: &mut u64) -> Result<Layers> {
        self.check_bfs_size()?;
        Ok(bfs_layers(
            &self.group.factors,
            &self.generators,
            limit,
            visits,
        ))
    }

    pub fn distance_profile(&self) -> Result<DistanceProfile> {
        let layers = self.layers(None, &mut 0)?;
        let order = self.order();
        if layers.reachable < order {
            return Err(Error::NotGenerating {
                reachable: layers.reachable,
                order,
            });
        }
        Ok(DistanceProfile {
            diameter: layers.counts.len() as u64 - 1,
            counts: layers.counts,
            reachable: layers.reachable,
            order,
        })
    }

    pub fn diameter(&self) -> Result<u64> {
        Ok(self.distance_profile()?.diameter)
    }

    /// Vertex coordinates for a mixed-radix index.
    pub fn element(&self, index: u64) -> Vec<u64> {
        let mut d = vec![0; self.group.factors.len()];
        Indexer::new(&self.group.factors).decode_into(index, &mut d);
        d
    }

    pub fn index_of(&self, element: &[u64]) -> u64 {
        Indexer::new(&self.group.factors).encode(element)
    }

    pub fn out_neighbors(&self, index: u64) -> Vec<u64> {
        let ix = Indexer::new(&self.group.factors);
        let mut d = vec![0; self.group.factors.len()];
        ix.decode_into(index, &mut d);
        self.generators.iter().map(|g| ix.step(&d, g)).collect()
    }

    /// In-degree of every vertex, counting arcs with multiplicity.
    pub fn in_degrees(&self) -> Result<Vec<usize>> {
        self.check_bfs_size()?;
        let mut deg = vec![0usize; self.order() as usize];
        for v in 0..self.order() {
            for w in self.out_neighbors(v) {
                deg[w as usize] += 1;
            }
        }
        Ok(deg)
    }

    /// Reorders the direct-sum components: new component `i` is old `perm[i]`.
    pub fn permute_components(&self, perm: &[usize]) -> Result<Self> {
        let t = self.group.factors.len();
        if perm.len() != t || !perm.iter().copied().sorted().eq(0..t) {
            return Err(Error::domain("not a permutation of the group components"));
        }
        let factors = perm.iter().map(|&p| self.group.factors[p]).collect();
        let generators = self
            .generators
            .iter()
            .map(|g| perm.iter().map(|&p| g[p]).collect())
            .collect();
        Ok(CayleyDigraph {
            group: AbelianGroupSpec { factors },
            generators,
        })
    }

    fn element_label(&self, index: u64) -> String {
        let e = self.element(index);
        if e.len() == 1 {
            e[0].to_string()
        } else {
            format!("({})", e.iter().join(","))
        }
    }

    pub fn to_dot(&self) -> Result<String> {
        if self.order() > MAX_DOT_ORDER {
            return Err(Error::too_large(self.order(), MAX_DOT_ORDER));
        }
        let mut out = format!(
            "digraph \"Cay({}, {{{}}})\" {{\n",
            self.group,
            self.generator_labels()
        );
        for v in 0..self.order() {
            out += &format!("  {v} [label=\"{}\"];\n", self.element_label(v));
        }
        for v in 0..self.order() {
            for w in self.out_neighbors(v) {
                out += &format!("  {v} -> {w};\n");
            }
        }
        out += "}\n";
        Ok(out)
    }

    pub fn generator_labels(&self) -> String {
        self.generators
            .iter()
            .map(|g| {
                if g.len() == 1 {
                    g[0].to_string()
                } else {
                    format!("({})", g.iter().join(","))
                }
            })
            .join(",")
    }

    /// `{"diameter":k,"counts":[…],"order":N,"degree":d,"density":"p/q"}`
    pub fn profile_json(&self, profile: &DistanceProfile) -> Result<Value> {
        let dens = density(self, profile)?;
        Ok(json!({
            "diameter": profile.diameter,
            "counts": profile.counts,
            "order": profile.order,
            "degree": self.degree(),
            "density": ratio::to_fraction_string(&dens),
        }))
    }
}

impl fmt::Display for CayleyDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cay({}, {{{}}})", self.group, self.generator_labels())
    }
}

pub fn distance_profile(g: &CayleyDigraph) -> Result<DistanceProfile> {
    g.distance_profile()
}

/// `δ = N / (k + d)^d`, exact.
pub fn density(g: &CayleyDigraph, profile: &DistanceProfile) -> Result<BigRational> {
    if profile.reachable < profile.order {
        return Err(Error::NotGenerating {
            reachable: profile.reachable,
            order: profile.order,
        });
    }
    let d = g.degree() as u32;
    let base = BigInt::from(profile.diameter + d as u64);
    Ok(BigRational::new(BigInt::from(profile.order), base.pow(d)))
}
