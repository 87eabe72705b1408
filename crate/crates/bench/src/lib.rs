//! Shared inputs for the criterion benches.

use abelcay::{AbelianGroupSpec, CayleyDigraph, IntMatrix};

/// Circulant `circ(1, 0, …, 0, -1)`-style test matrix with nonzero determinant.
pub fn sample_matrix(n: usize) -> IntMatrix {
    let mut row = vec![0i64; n];
    row[0] = 3;
    if n > 1 {
        row[1] = -1;
        row[n - 1] = 2;
    }
    IntMatrix::circulant(&row)
}

pub fn cyclic_digraph(n: u64, gens: &[i64]) -> CayleyDigraph {
    CayleyDigraph::new(
        AbelianGroupSpec::cyclic(n).expect("n >= 1"),
        gens.iter().map(|&g| vec![g]).collect(),
    )
    .expect("valid generators")
}
