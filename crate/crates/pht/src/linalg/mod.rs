//! Dense complex matrix arithmetic and non-Hermitian eigendecomposition
//! with bi-orthonormal left/right eigenvector pairs — the numerical
//! substrate for the pseudo-Hermitian machinery.

mod eig;
mod matrix;
mod poly;

pub use eig::{eigendecompose, EigenSystem, SpectralTag};
pub use matrix::ComplexMatrix;
pub use poly::polynomial_roots;

pub(crate) use eig::classify_tags;
pub(crate) use matrix::{vdot, vnorm, C64};

/// Default tolerance for eigenvalue classification. Exceptional points
/// make the real-vs-complex split tolerance-sensitive, so every entry
/// point also accepts an explicit tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Counts of real eigenvalues and conjugate pairs in a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralClassification {
    pub n_real: usize,
    pub n_pairs: usize,
    pub is_fully_real: bool,
}

/// Re-classifies the spectrum of `es` at tolerance `tol`: eigenvalues with
/// `|Im| > tol` are greedily matched into conjugate pairs (partner
/// minimizing `|E_m - conj(E_n)|`), the rest are tagged real.
pub fn classify_spectrum(
    es: &EigenSystem,
    tol: f64,
) -> crate::error::Result<SpectralClassification> {
    let tags = classify_tags(es.eigenvalues(), tol)?;
    let n_real = tags.iter().filter(|t| matches!(t, SpectralTag::Real)).count();
    let n_pairs = tags
        .iter()
        .filter(|t| matches!(t, SpectralTag::PairPlus(_)))
        .count();
    Ok(SpectralClassification {
        n_real,
        n_pairs,
        is_fully_real: n_pairs == 0,
    })
}
