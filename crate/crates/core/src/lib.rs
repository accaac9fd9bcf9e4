//! Exact computations on the resonance arrangement `A_n`: characteristic
//! polynomials, Betti numbers and chamber counts by independent methods,
//! the prototype/Stirling machinery for `b_i`, the 4-circuit census behind
//! `b_3`, and the embedding of rational matroids as minors of `A_N`.

pub mod arrangement;
pub mod circuits;
pub mod config;
pub mod error;
pub mod linalg;
pub mod mask;
pub mod nbc;
pub mod partition;
pub mod prototype;
pub mod stirling;
pub mod universality;

pub use arrangement::{
    build_arrangement, count_points_off, default_primes, enumerate_chambers_bruteforce,
    finite_field_charpoly, region_count, whitney_charpoly, Arrangement, CharPoly,
};
pub use circuits::{
    b3_via_circuits, classify_relevant_4circuit, count_intersecting_triples,
    count_rectangle_circuits, count_tetrahedron_circuits, rectangle_from_sides,
    sides_from_rectangle, CircuitType, SideMidpointTuple,
};
pub use config::Guards;
pub use error::{Error, Result};
pub use linalg::ExactMatrix;
pub use mask::SubsetMask;
pub use nbc::{betti_via_nbc, charpoly_via_nbc, is_nbc, nbc_extend, NbcSet};
pub use partition::Partition;
pub use prototype::{classify, coefficients, enumerate_prototypes, realize, Prototype, Status};
pub use stirling::{b2_closed, b3_closed, fit_stirling_coeffs, stirling2, StirlingCombination};
pub use universality::{
    decompose_column, embed, minor_matroid_check, verify_embedding, ColumnDecomposition,
    Embedding,
};
