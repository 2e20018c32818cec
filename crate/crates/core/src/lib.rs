//! Generalised pancake graphs on coloured permutations.
//!
//! The crate builds `P_m(n)`, the Cayley graph of `Z_m wr S_n` generated by
//! coloured prefix reversals, together with the equitable partition by the
//! position and colour of the letter 1, its block-circulant quotient matrix,
//! and the spectral checks built on top of them.

pub mod error;
pub mod exact;
pub mod fmt;
pub mod graph;
pub mod lanczos;
pub mod matrix;
pub mod partition;
pub mod perm;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{
    build_graph, build_graph_with_cap, generators, CayleyGraph, Generator, GeneratorSet,
};
pub use matrix::{DenseMatrix, IntMatrix, RealMatrix};
pub use partition::{
    build_partition, cell_index, d_block, e_block, quotient_empirical, quotient_formula, CellLabel,
    Partition, QuotientMatrix,
};
pub use perm::{ColouredPermutation, GroupParams, Indexer, Sign, VertexIndex};
pub use spectrum::{
    block_circulant_spectrum, cosine_coefficient, gsw_spectrum, mod4_guaranteed_sublist,
    submatrix_gap_bound, symmetric_spectrum, RealSpectrum, SpectrumSource,
};
pub use verify::{
    conjecture2_scan, exact_integer_multiplicity, full_spectrum, gap_trend, top_two_eigenvalues,
    verify_gap, verify_multiplicity, verify_quotient_containment, verify_quotient_formula,
    Analysis, Caps, Checks, Tolerances, VerifyConfig,
};
