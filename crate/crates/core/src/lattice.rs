//! The group of integral vectors modulo a nonsingular matrix, `Z^n / M Z^n`.
//!
//! Elements are represented in Smith coordinates: `x ↦ (U·x) mod (s_1, …, s_n)`
//! where `U·M·V = diag(s)`. Components with `s_i = 1` are kept and are always
//! zero, so the map is literally `x ↦ U·x` followed by reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intmat::{smith_normal_form, IntMatrix, SnfDecomposition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub order: BigInt,
    pub rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
    pub cyclic: bool,
}

#[derive(Clone, Debug)]
pub struct QuotientGroup {
    m: IntMatrix,
    snf: SnfDecomposition,
    order: BigInt,
    rank: usize,
    cyclic: bool,
}

impl QuotientGroup {
    pub fn new(m: IntMatrix) -> Result<Self> {
        let snf = smith_normal_form(&m);
        Self::with_decomposition(m, snf)
    }

    /// Builds the group from a caller-supplied decomposition of `m`, e.g. a
    /// hand-derived `(U, S, V)`. The decomposition is checked, not trusted.
    pub fn with_decomposition(m: IntMatrix, snf: SnfDecomposition) -> Result<Self> {
        if snf.det.is_zero() || m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        if !snf.verify(&m) {
            return Err(Error::domain(
                "supplied decomposition is not a Smith normal form of the matrix",
            ));
        }
        let n = m.dim();
        let order = snf.det_abs();
        let rank = snf.s.iter().filter(|s| !s.is_one()).count();
        // d_{n-1} = s_1 ⋯ s_{n-1}
        let d_prev: BigInt = snf.s[..n - 1].iter().product();
        let cyclic = d_prev.is_one();
        Ok(QuotientGroup {
            m,
            snf,
            order,
            rank,
            cyclic,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn snf(&self) -> &SnfDecomposition {
        &self.snf
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.snf.s.iter().filter(|s| !s.is_one()).cloned().collect()
    }

    pub fn structure(&self) -> GroupStructure {
        GroupStructure {
            order: self.order.clone(),
            rank: self.rank,
            torsion: self.torsion(),
            cyclic: self.cyclic,
        }
    }

    fn check_len(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `φ(x) = U·x`, reduced componentwise modulo the invariant factors.
    pub fn canonicalize(&self, x: &[BigInt]) -> Result<GroupElement> {
        self.check_len(x)?;
        let ux = self.snf.u.mul_vec(x)?;
        let coords = ux
            .iter()
            .zip(&self.snf.s)
            .map(|(c, s)| c.mod_floor(s))
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn canonicalize_i64(&self, x: &[i64]) -> Result<GroupElement> {
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.canonicalize(&v)
    }

    /// `a ≡ b (mod M)`, i.e. `a − b ∈ M·Z^n`.
    pub fn congruent(&self, a: &[BigInt], b: &[BigInt]) -> Result<bool> {
        self.check_len(a)?;
        self.check_len(b)?;
        let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        Ok(self.canonicalize(&diff)?.is_identity())
    }

    /// The last `rank` columns of `U^{-1}`; column `n − r + i` has order `s_{n−r+i}`.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        let uinv = self
            .snf
            .u
            .inverse_unimodular()
            .expect("transform of a verified decomposition is unimodular");
        (n - self.rank..n).map(|j| uinv.column(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::IntMatrix;

    fn circ_mn(n: usize) -> IntMatrix {
        let mut row = vec![-1i64; n];
        row[0] = n as i64;
        IntMatrix::circulant(&row)
    }

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn explicit_decomposition(n: usize) -> SnfDecomposition {
        let mut u = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                u[(i, j)] = BigInt::from(if i == j && i > 0 { 2 } else { 1 });
            }
        }
        let mut vm = IntMatrix::identity(n);
        for j in 1..n {
            vm[(0, j)] = BigInt::from(-1);
        }
        let mut s = vec![BigInt::from(n + 1); n];
        s[0] = BigInt::one();
        SnfDecomposition {
            u,
            s,
            v: vm,
            det: circ_mn(n).det(),
        }
    }

    #[test]
    fn congruence_examples() {
        let g = QuotientGroup::new(circ_mn(3)).unwrap();
        assert!(g.congruent(&v(&[3, -1, -1]), &v(&[0, 0, 0])).unwrap());
        assert!(!g.congruent(&v(&[1, 0, 0]), &v(&[0, 0, 0])).unwrap());

        let d = QuotientGroup::new(IntMatrix::diagonal(&[2, 3])).unwrap();
        assert!(d.congruent(&v(&[5, 7]), &v(&[1, 1])).unwrap());
        assert!(!d.congruent(&v(&[5, 7]), &v(&[1, 2])).unwrap());

        assert_eq!(
            g.congruent(&v(&[1, 0]), &v(&[0, 0, 0])),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn canonicalize_with_hand_written_transform() {
        let m = circ_mn(3);
        let g = QuotientGroup::with_decomposition(m.clone(), explicit_decomposition(3)).unwrap();
        // U_3·(5,0,0) = (5,5,5), reduced mod (1,4,4).
        assert_eq!(
            g.canonicalize_i64(&[5, 0, 0]).unwrap().coords,
            v(&[0, 1, 1])
        );
        assert!(g.canonicalize_i64(&[0, 0, 0]).unwrap().is_identity());
        for j in 0..3 {
            assert!(g.canonicalize(&m.column(j)).unwrap().is_identity());
        }
    }

    #[test]
    fn bad_decomposition_is_rejected() {
        let mut snf = explicit_decomposition(3);
        snf.s[1] = BigInt::from(2);
        assert!(QuotientGroup::with_decomposition(circ_mn(3), snf).is_err());
        let sing = IntMatrix::from_i64(&[[2, 4], [1, 2]]).unwrap();
        assert!(matches!(
            QuotientGroup::new(sing),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn structure_examples() {
        let s = QuotientGroup::new(circ_mn(4)).unwrap().structure();
        assert_eq!(s.rank, 3);
        assert_eq!(s.torsion, v(&[5, 5, 5]));
        assert!(!s.cyclic);
        assert_eq!(s.order, BigInt::from(125));

        let s = QuotientGroup::new(IntMatrix::diagonal(&[84]))
            .unwrap()
            .structure();
        assert_eq!((s.rank, s.cyclic), (1, true));
        assert_eq!(s.torsion, v(&[84]));

        let s = QuotientGroup::new(IntMatrix::identity(2))
            .unwrap()
            .structure();
        assert_eq!((s.rank, s.cyclic), (0, true));
        assert!(s.torsion.is_empty());
        assert_eq!(s.order, BigInt::one());

        // Z_2 ⊕ Z_3 ≅ Z_6 is cyclic even though M is diagonal.
        let s = QuotientGroup::new(IntMatrix::diagonal(&[2, 3]))
            .unwrap()
            .structure();
        assert_eq!((s.rank, s.cyclic), (1, true));
    }

    #[test]
    fn basis_examples() {
        let g = QuotientGroup::with_decomposition(circ_mn(3), explicit_decomposition(3)).unwrap();
        let b = g.basis();
        assert_eq!(b.len(), 2);
        // Canonical images are the unit vectors of the last two Smith coordinates.
        assert_eq!(g.canonicalize(&b[0]).unwrap().coords, v(&[0, 1, 0]));
        assert_eq!(g.canonicalize(&b[1]).unwrap().coords, v(&[0, 0, 1]));

        let g = QuotientGroup::new(IntMatrix::diagonal(&[5])).unwrap();
        assert_eq!(g.basis(), vec![v(&[1])]);

        let g = QuotientGroup::new(IntMatrix::diagonal(&[2, 4])).unwrap();
        let b = g.basis();
        assert_eq!(b.len(), 2);
        assert_eq!(g.canonicalize(&b[0]).unwrap().coords, v(&[1, 0]));
    }
}
