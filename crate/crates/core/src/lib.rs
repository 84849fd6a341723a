//! Information transfer capacity (ITC) on XX spin chains.
//!
//! For a chain of `N` spins with nearest-neighbour XX coupling, the
//! single-excitation dynamics reduce to an `N×N` tridiagonal Hamiltonian.
//! From its eigenstructure we get the time-free upper bound `p_max(i,j)` on
//! excitation transfer, the pre-metric `d(i,j) = −log p_max(i,j)`, and the
//! geometry built on it: the center spin of an odd chain is the farthest
//! point from every other spin (the *anti-core*).
//!
//! Modules, bottom up:
//!
//! * [`chain`]: chain description and Hamiltonian construction.
//! * [`spectral`]: closed-form and QL eigendecompositions.
//! * [`itc`]: `p_t`, `p_max`, the ITC matrix and inertia.
//! * [`asymptotics`]: semi- and doubly-infinite limits.
//! * [`geometry`]: anti-core, diameter, triangle audit, four-point δ,
//!   path-product bound.
//! * [`biassweep`]: center-bias sweeps.

pub mod asymptotics;
pub mod biassweep;
pub mod chain;
pub mod error;
pub mod geometry;
pub mod itc;
pub mod metric;
pub mod spectral;

pub use asymptotics::{
    diameter_constants, doubly_infinite_pmax, reduce_pair, semi_infinite_pmax_closed,
    semi_infinite_pmax_series, zeta_identity_check, DiameterConstants, DoublyCase,
    DoublyInfiniteValue, Frame, ParityClass, ReducedPair, SeriesValue,
};
pub use biassweep::{
    decoupling_report, scaling_constant_estimate, sweep, DecouplingReport, ScalingFit, SweepPoint,
};
pub use chain::{build_hamiltonian, center_index, ChainSpec, Hamiltonian1};
pub use error::{ItcError, Result};
pub use geometry::{
    diameter, find_anticore, four_point_delta, geometry_report, path_product_bound_check,
    triangle_violations, AntiCore, Diameter, FourPointReport, GeometryReport, PathProductReport,
    TriangleAudit,
};
pub use itc::{
    inertia, inertia_profile, itc_matrix, itc_matrix_from, p_max, p_max_explicit, p_t,
    row_sum_check, ItcMatrix,
};
pub use metric::{Distance, PreMetric};
pub use spectral::{
    analytic_spectrum, numeric_spectrum, spectrum, SpectralDecomposition, SpectrumSource,
};
