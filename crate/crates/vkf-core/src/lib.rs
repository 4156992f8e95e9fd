//! Workbench for Tverberg-type intersection certificates on simplicial
//! complexes.
//!
//! The crate is organized around one pipeline:
//!
//! * [`complex`] — simplicial complexes, face posets, order complexes
//!   (barycentric subdivision), deletions and standard generators;
//! * [`homology`] — chain complexes over a prime field and reduced Betti
//!   numbers via sparse elimination;
//! * [`conf`] — the r-fold deleted product `Conf_r(X)` as a product-cell
//!   poset with its symmetric-group action, and the explicit equivariant
//!   maps built on it (upper-ideal covers, nerve maps, join decompositions,
//!   the antisymmetric height map on 2-fold products);
//! * [`certificates`] — executable checkers for complementary acyclicity,
//!   saturation, weight lower bounds and full hypothesis certification;
//! * [`witness`] — exact rational search for r pairwise disjoint faces with
//!   intersecting affine images.
//!
//! Everything is deterministic: identical inputs (and seeds, where
//! applicable) produce identical outputs regardless of thread count. The
//! `parallel` feature (on by default) backs the embarrassingly parallel
//! sweeps with rayon; without it the crate falls back to sequential loops.

pub mod certificates;
pub mod complex;
pub mod conf;
pub mod exec;
pub mod homology;
pub mod witness;

/// Cap on enumerated faces/cells/tuples; guards against infeasible inputs.
pub const DEFAULT_MAX_CELLS: usize = 10_000_000;

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("facet #{index} contains a repeated vertex")]
    RepeatedVertex { index: usize },
    #[error("simplex vertex list must be non-empty")]
    EmptySimplex,
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<u64>),
    #[error("cell guard exceeded: more than {limit} cells requested")]
    GuardExceeded { limit: usize },
    #[error("operation requires a non-empty complex")]
    EmptyComplex,
    #[error("chain complex was built to degree {cap}, but degree {requested} was requested")]
    DegreeCapTooSmall { cap: i64, requested: i64 },
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{r} is not a power of the prime {p}")]
    NotPrimePower { r: usize, p: u32 },
    #[error("permutation {0:?} is not an element of the declared group")]
    NotInGroup(Vec<usize>),
    #[error("the height map is only defined for 2-fold deleted products (got r = {0})")]
    HeightMapNeedsPairs(usize),
    #[error("cell {0} belongs to no cover part; the upper-ideal cover is broken")]
    CoverNotCovering(usize),
    #[error("cell {0} belongs to every cover part; the upper-ideal cover is broken")]
    CoverAllParts(usize),
    #[error("vertex {0} has no coordinates in the affine map")]
    MissingCoordinates(u64),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("invalid input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
