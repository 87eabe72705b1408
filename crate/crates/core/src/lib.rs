//! Abelian Cayley digraphs from integer matrices.
//!
//! A nonsingular `n×n` integer matrix `M` defines the finite Abelian group
//! `Z^n / M Z^n` and, with the unit vectors as steps, the commutative-step
//! digraph `Cay(Z^n / M Z^n, {e_1, …, e_n})`. This crate provides the pieces
//! needed to build and study such digraphs exactly:
//!
//! - [`intmat`]: arbitrary-precision integer matrices, determinants,
//!   determinantal divisors and the Smith normal form with transforms.
//! - [`lattice`]: the quotient group, congruence modulo `M`, canonical
//!   coordinates and structure.
//! - [`cayley`]: Cayley digraphs of finite Abelian groups, BFS distance
//!   profiles, diameter and density.
//! - [`hyperl`]: minimum distance diagrams (hyper-L sets).
//! - [`families`]: the dense families built from `circ(n, −1, …, −1)` and the
//!   closed-form order, diameter, density and bound formulas.
//! - [`search`]: exhaustive computation of the largest cyclic and Abelian
//!   Cayley digraphs of given degree and diameter.

pub mod cayley;
pub mod error;
pub mod families;
pub mod hyperl;
pub mod intmat;
pub mod lattice;
pub mod ratio;
pub mod search;

pub use cayley::{
    density, distance_profile, is_isomorphic_group, AbelianGroupSpec, CayleyDigraph,
    DistanceProfile,
};
pub use error::{Error, Result};
pub use families::{
    bounds_report, make_dn, make_dnm, make_mn, make_mnm, predicted_metrics, BoundsReport,
    FamilyInstance, PredictedMetrics,
};
pub use hyperl::{
    f_closed_form, f_count, minimum_distance_diagram, minimum_distance_diagram_capped, mn_hyperl,
    mn_membership, mnm_diameter_witness, HyperL,
};
pub use intmat::{
    det, determinantal_divisors, invariant_factors, is_unimodular, smith_normal_form, IntMatrix,
    SnfDecomposition,
};
pub use lattice::{GroupElement, GroupStructure, QuotientGroup};
pub use search::{
    na2_formula, na_search, nc2_formula, nc_search, verify_witness, SearchConfig, SearchResult,
    Witness,
};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
