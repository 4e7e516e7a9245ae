//! Spectral analysis and Kubo-style linear response for pseudo-Hermitian
//! qubit systems.
//!
//! A Hamiltonian `H` is pseudo-Hermitian when `eta H = H^dagger eta` for a
//! Hermitian, invertible metric `eta`. Its eigenvalues are real or come in
//! complex-conjugate pairs; the boundary between the two regimes (the
//! exceptional point) marks the breaking of PT symmetry. This crate
//! provides:
//!
//! - [`linalg`]: dense complex matrices, bi-orthonormal eigendecomposition,
//!   and an independent polynomial root finder for secular cross-checks;
//! - [`pseudo`]: the pseudo-metric `eta` built from left eigenvectors,
//!   observable lifting `A = eta^{-1} a`, time evolution, and expectation
//!   values;
//! - [`models`]: PT-symmetric single-qubit and interacting-qubit-array
//!   Hamiltonians, their secular polynomials, and single-qubit closed
//!   forms for use as test oracles;
//! - [`response`]: the generalized correlation function `C(t)`, the
//!   susceptibility `chi(t) = 2 Im C(t) theta(t)`, its exact spectral
//!   decomposition, and the broadened frequency-domain susceptibility;
//! - [`phasemap`]: phase classification over parameter grids with
//!   bisection refinement of exceptional boundaries;
//! - [`cli`]: the `pht` command-line front end (CSV/JSON/SVG emission);
//! - [`verify`]: the built-in golden-value verification suite.
//!
//! Everything works in units of the qubit gap (hbar = 1). All types are
//! immutable after construction and safe to share across threads.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod models;
pub mod phasemap;
pub mod pseudo;
pub mod response;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{
    classify_spectrum, eigendecompose, polynomial_roots, ComplexMatrix, EigenSystem,
    SpectralClassification, SpectralTag, DEFAULT_TOL,
};
pub use models::{
    check_pt_symmetry, ground_state, qubit_array_hamiltonian, secular_polynomial,
    single_qubit_closed_forms, single_qubit_hamiltonian, total_polarization, GainConvention,
    QubitArrayParams, SecularPolynomial, SingleQubitParams, Topology,
};
pub use phasemap::{refine_boundary, scan, ModelTemplate, PhaseDiagram, PhaseLabel, PhasePoint};
pub use pseudo::{
    build_eta, build_eta_scaled, check_pseudo_hermitian, expectation, generalized_norm,
    heisenberg_operator, lift_observable, propagate_state, MetricOperator, NormConvention,
    Observable, StateVector,
};
pub use response::{
    correlation, envelope_classification, spectral_decomposition, susceptibility_spectrum,
    time_grid, Envelope, ResponseSeries, ResponseTerm, SpectralResponse, SusceptibilitySpectrum,
};

/// Uniformly spaced grid from `a` to `b` inclusive with `n` points.
pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|k| a + step * k as f64).collect()
}
