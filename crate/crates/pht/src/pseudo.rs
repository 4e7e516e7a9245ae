//! Pseudo-Hermitian core: build the metric `eta` from left eigenvectors,
//! verify pseudo-Hermiticity, lift observables, evolve states and
//! operators, and take expectation values.
//!
//! Conventions: the metric is assembled as
//! `eta = sum_{real n} |L_n><L_n| + sum_{pairs} (|L_+><L_-| + |L_-><L_+|)`
//! with the left-vector normalization fixed upstream (unit Euclidean norm,
//! first nonzero component real positive). That makes `eta` unique;
//! physical observables are invariant under per-term positive rescaling of
//! `eta`, which is exposed through [`build_eta_scaled`] for testing.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{vdot, vnorm, C64, ComplexMatrix, EigenSystem, SpectralTag};

/// Residual above which the symmetrization of `eta` is considered to have
/// papered over a real asymmetry rather than floating-point noise.
const SYMMETRIZATION_LIMIT: f64 = 1e-8;

/// Tolerance for Hermiticity checks on observables (relative to the
/// largest entry).
const HERMITICITY_TOL: f64 = 1e-8;

/// How a state vector was normalized at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormConvention {
    /// Unit Euclidean norm (user-supplied physical states).
    Euclidean,
    /// Right eigenvector scaling `<L_n|R_n> = 1` (eigenstate initial
    /// conditions).
    Biorthogonal,
    /// Output of propagation or explicit rescaling; no norm maintained.
    Unnormalized,
}

/// A state in the computational basis together with its normalization
/// convention.
#[derive(Clone, Debug)]
pub struct StateVector {
    amplitudes: Array1<C64>,
    convention: NormConvention,
}

impl StateVector {
    /// Euclidean-normalized state; rejects the zero vector.
    pub fn euclidean(amplitudes: Array1<C64>) -> Result<Self> {
        let n = vnorm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("state vector must be nonzero and finite".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.mapv(|v| v / n),
            convention: NormConvention::Euclidean,
        })
    }

    /// Wraps an eigenvector that already carries bi-orthonormal scaling.
    pub fn biorthogonal(amplitudes: Array1<C64>) -> Self {
        Self {
            amplitudes,
            convention: NormConvention::Biorthogonal,
        }
    }

    pub(crate) fn unnormalized(amplitudes: Array1<C64>) -> Self {
        Self {
            amplitudes,
            convention: NormConvention::Unnormalized,
        }
    }

    /// Basis state with all spins up: `(1, 0, ..., 0)`.
    pub fn basis_up(dim: usize) -> Self {
        let mut v = Array1::zeros(dim);
        v[0] = C64::new(1.0, 0.0);
        Self {
            amplitudes: v,
            convention: NormConvention::Euclidean,
        }
    }

    /// Copy rescaled to the given Euclidean norm.
    pub fn scaled_to_norm(&self, norm: f64) -> StateVector {
        let cur = vnorm(&self.amplitudes);
        StateVector::unnormalized(self.amplitudes.mapv(|v| v * (norm / cur)))
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn convention(&self) -> NormConvention {
        self.convention
    }

    pub fn euclidean_norm(&self) -> f64 {
        vnorm(&self.amplitudes)
    }
}

/// Hermitian pseudo-metric with its inverse and a record of how it was
/// built.
#[derive(Clone, Debug)]
pub struct MetricOperator {
    eta: ComplexMatrix,
    eta_inverse: ComplexMatrix,
    /// Max-norm of the anti-Hermitian part removed by symmetrization.
    symmetrization_residual: f64,
    /// Per-term positive scale factors applied on top of the canonical
    /// convention (all ones for [`build_eta`]).
    term_scales: Vec<f64>,
}

impl MetricOperator {
    pub fn eta(&self) -> &ComplexMatrix {
        &self.eta
    }

    pub fn eta_inverse(&self) -> &ComplexMatrix {
        &self.eta_inverse
    }

    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    pub fn symmetrization_residual(&self) -> f64 {
        self.symmetrization_residual
    }

    pub fn term_scales(&self) -> &[f64] {
        &self.term_scales
    }
}

/// A physical observable: the Hermitian operator and its pseudo-Hermitian
/// lift `A = eta^{-1} a`.
#[derive(Clone, Debug)]
pub struct Observable {
    hermitian_form: ComplexMatrix,
    lifted_form: ComplexMatrix,
    label: String,
}

impl Observable {
    pub fn hermitian_form(&self) -> &ComplexMatrix {
        &self.hermitian_form
    }

    pub fn lifted_form(&self) -> &ComplexMatrix {
        &self.lifted_form
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Builds the pseudo-metric from a classified eigensystem:
/// `eta = sum_{real} |L_n><L_n| + sum_{pairs} (|L_+><L_-| + |L_-><L_+|)`,
/// followed by symmetrization `eta <- (eta + eta^dagger)/2` with the
/// removed residual recorded (and rejected above 1e-8).
pub fn build_eta(es: &EigenSystem) -> Result<MetricOperator> {
    build_eta_scaled(es, &vec![1.0; es.dim()])
}

/// [`build_eta`] with an explicit positive factor per spectral term: entry
/// `n` scales the `|L_n><L_n|` term for real eigenvalues, and for a
/// conjugate pair the factor attached to the `PairPlus` member scales the
/// whole `|L_+><L_-| + |L_-><L_+|` block (the partner's entry is ignored).
pub fn build_eta_scaled(es: &EigenSystem, scales: &[f64]) -> Result<MetricOperator> {
    if scales.len() != es.dim() {
        return Err(Error::DimensionMismatch {
            left: scales.len(),
            right: es.dim(),
        });
    }
    if let Some(&bad) = scales.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "eta term scales must be positive and finite, got {bad}"
        )));
    }
    let n = es.dim();
    let mut eta = Array2::<C64>::zeros((n, n));
    for (k, tag) in es.tags().iter().enumerate() {
        match *tag {
            SpectralTag::Real => {
                outer_into(&mut eta, es.left_vector(k), es.left_vector(k), scales[k]);
            }
            SpectralTag::PairPlus(partner) => {
                outer_into(&mut eta, es.left_vector(k), es.left_vector(partner), scales[k]);
                outer_into(&mut eta, es.left_vector(partner), es.left_vector(k), scales[k]);
            }
            SpectralTag::PairMinus(_) => {}
        }
    }
    let m = ComplexMatrix::from_array_unchecked(eta);
    let residual = m.hermiticity_residual();
    if residual > SYMMETRIZATION_LIMIT * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian {
            residual,
            tol: SYMMETRIZATION_LIMIT,
        });
    }
    let sym = m.adjoint();
    let eta = ComplexMatrix::from_array_unchecked((m.array() + sym.array()).mapv(|v| v * 0.5));
    let eta_inverse = eta.inverse()?;
    Ok(MetricOperator {
        eta,
        eta_inverse,
        symmetrization_residual: residual,
        term_scales: scales.to_vec(),
    })
}

fn outer_into(acc: &mut Array2<C64>, ket: &Array1<C64>, bra: &Array1<C64>, scale: f64) {
    let n = acc.nrows();
    for i in 0..n {
        let ki = ket[i] * scale;
        for j in 0..n {
            acc[[i, j]] += ki * bra[j].conj();
        }
    }
}

/// True iff `max|eta H - H^dagger eta| < tol`.
pub fn check_pseudo_hermitian(h: &ComplexMatrix, eta: &MetricOperator, tol: f64) -> Result<bool> {
    if h.dim() != eta.dim() {
        return Err(Error::DimensionMismatch {
            left: h.dim(),
            right: eta.dim(),
        });
    }
    let lhs = eta.eta().matmul(h);
    let rhs = h.adjoint().matmul(eta.eta());
    Ok((&lhs - &rhs).max_abs() < tol)
}

/// Lifts a Hermitian observable to its pseudo-Hermitian form
/// `A = eta^{-1} a`.
pub fn lift_observable(eta: &MetricOperator, a: &ComplexMatrix, label: &str) -> Result<Observable> {
    if a.dim() != eta.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: eta.dim(),
        });
    }
    let residual = a.hermiticity_residual();
    let tol = HERMITICITY_TOL * a.max_abs().max(1.0);
    if residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    Ok(Observable {
        hermitian_form: a.clone(),
        lifted_form: eta.eta_inverse().matmul(a),
        label: label.to_string(),
    })
}

/// Evolves a state: `Psi(t) = sum_n |R_n> e^{-i E_n t} <L_n|Psi(0)>`.
/// No renormalization is applied; amplified modes grow as dictated by
/// `Im E_n`.
pub fn propagate_state(es: &EigenSystem, psi0: &StateVector, t: f64) -> StateVector {
    let mut out = Array1::<C64>::zeros(es.dim());
    for k in 0..es.dim() {
        let coeff = vdot(es.left_vector(k), psi0.amplitudes())
            * (-C64::i() * es.eigenvalues()[k] * t).exp();
        out.zip_mut_with(es.right_vector(k), |o, r| *o += coeff * r);
    }
    StateVector::unnormalized(out)
}

/// Heisenberg-picture operator
/// `A(t) = e^{iHt} A e^{-iHt}`, assembled spectrally as
/// `sum_mn |R_m> e^{i E_m t} <L_m|A|R_n> e^{-i E_n t} <L_n|`.
pub fn heisenberg_operator(es: &EigenSystem, a: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let forward = es.evolution_operator(-t); // e^{+iHt}
    let backward = es.evolution_operator(t); // e^{-iHt}
    forward.matmul(a).matmul(&backward)
}

/// Expectation value of an observable in the Heisenberg picture:
/// `<Psi(0)| eta A(t) |Psi(0)>`.
pub fn expectation(
    psi0: &StateVector,
    eta: &MetricOperator,
    es: &EigenSystem,
    a: &Observable,
    t: f64,
) -> C64 {
    let at = heisenberg_operator(es, a.lifted_form(), t);
    let v = eta.eta().apply(&at.apply(psi0.amplitudes()));
    vdot(psi0.amplitudes(), &v)
}

/// Generalized norm `<Psi|eta|Psi>`. The imaginary part is discarded;
/// it is bounded by roundoff because `eta` is Hermitian.
pub fn generalized_norm(psi: &StateVector, eta: &MetricOperator) -> f64 {
    let v = eta.eta().apply(psi.amplitudes());
    vdot(psi.amplitudes(), &v).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigendecompose, DEFAULT_TOL};
    use crate::models::{single_qubit_hamiltonian, SingleQubitParams};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sq(gamma: f64) -> (ComplexMatrix, EigenSystem) {
        let h = single_qubit_hamiltonian(&SingleQubitParams::new(1.0, gamma).unwrap());
        let es = eigendecompose(&h, DEFAULT_TOL).unwrap();
        (h, es)
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn hermitian_limit_eta_is_identity() {
        let (_, es) = sq(0.0);
        let eta = build_eta(&es).unwrap();
        assert!((eta.eta() - &ComplexMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn unbroken_eta_matches_golden_matrix() {
        let (h, es) = sq(0.5);
        let eta = build_eta(&es).unwrap();
        let golden = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, -0.5)],
            vec![c(0.0, 0.5), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!((eta.eta() - &golden).max_abs() < 1e-10);
        assert!(check_pseudo_hermitian(&h, &eta, 1e-10).unwrap());
        // Not pseudo-Hermitian with respect to the identity metric.
        let (_, es0) = sq(0.0);
        let id_eta = build_eta(&es0).unwrap();
        assert!(!check_pseudo_hermitian(&h, &id_eta, 1e-10).unwrap());
    }

    #[test]
    fn broken_eta_matches_golden_up_to_positive_scale() {
        let (h, es) = sq(2.0);
        let eta = build_eta(&es).unwrap();
        let golden = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, -2.0)],
            vec![c(0.0, 2.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let ratio = eta.eta()[(0, 0)] / golden[(0, 0)];
        assert!(ratio.im.abs() < 1e-12 && ratio.re > 0.0);
        assert!((eta.eta() - &golden.scale(ratio)).max_abs() < 1e-10 * ratio.re);
        assert!(check_pseudo_hermitian(&h, &eta, 1e-10).unwrap());
    }

    #[test]
    fn lifted_polarization_matches_golden_matrix() {
        let (_, es) = sq(0.5);
        let eta = build_eta(&es).unwrap();
        let a = lift_observable(&eta, &sigma_z(), "sigma_z").unwrap();
        let f = 4.0 / 3.0;
        let golden = ComplexMatrix::from_rows(&[
            vec![c(f, 0.0), c(0.0, -0.5 * f)],
            vec![c(0.0, -0.5 * f), c(-f, 0.0)],
        ])
        .unwrap();
        assert!((a.lifted_form() - &golden).max_abs() < 1e-10);
        // eta A = a^dagger eta within tolerance
        let lhs = eta.eta().matmul(a.lifted_form());
        let rhs = a.lifted_form().adjoint().matmul(eta.eta());
        assert!((&lhs - &rhs).max_abs() < 1e-10);
    }

    #[test]
    fn lift_rejects_non_hermitian_input() {
        let (h, es) = sq(0.5);
        let eta = build_eta(&es).unwrap();
        assert!(matches!(
            lift_observable(&eta, &h, "h"),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn propagation_fixes_t0_and_eigenstates() {
        let (_, es) = sq(0.5);
        let psi0 = StateVector::basis_up(2);
        let same = propagate_state(&es, &psi0, 0.0);
        for i in 0..2 {
            assert!((same.amplitudes()[i] - psi0.amplitudes()[i]).norm() < 1e-12);
        }
        // A real-eigenvalue eigenstate only picks up a phase.
        let ground = StateVector::biorthogonal(es.right_vector(0).clone());
        let t = 1.3;
        let moved = propagate_state(&es, &ground, t);
        let phase = (-C64::i() * es.eigenvalues()[0] * t).exp();
        for i in 0..2 {
            assert!((moved.amplitudes()[i] - phase * ground.amplitudes()[i]).norm() < 1e-12);
        }
        assert!((moved.euclidean_norm() - ground.euclidean_norm()).abs() < 1e-12);
    }

    #[test]
    fn broken_eigenstate_amplitude_grows() {
        let (_, es) = sq(2.0);
        // index 1 carries Im E > 0
        let excited = StateVector::biorthogonal(es.right_vector(1).clone());
        let t = 0.5;
        let moved = propagate_state(&es, &excited, t);
        let expected = (es.eigenvalues()[1].im * t).exp();
        assert!((moved.euclidean_norm() / excited.euclidean_norm() - expected).abs() < 1e-10);
    }

    #[test]
    fn heisenberg_operator_commuting_case_is_static() {
        let (h, es) = sq(0.5);
        let at = heisenberg_operator(&es, &h, 2.7);
        assert!((&at - &h).max_abs() < 1e-10);
        let a0 = heisenberg_operator(&es, &sigma_z(), 0.0);
        assert!((&a0 - &sigma_z()).max_abs() < 1e-10);
    }

    #[test]
    fn polarization_dynamics_unbroken_closed_form() {
        let (_, es) = sq(0.5);
        let eta = build_eta(&es).unwrap();
        let obs = lift_observable(&eta, &sigma_z(), "sigma_z").unwrap();
        let up = StateVector::basis_up(2);
        let e = 0.75f64.sqrt();
        for &t in &[0.0, 0.4, 1.1, 3.7] {
            let got = expectation(&up, &eta, &es, &obs, t);
            let want = (2.0 * e * t).cos() + (0.5 / e) * (2.0 * e * t).sin();
            assert!((got - c(want, 0.0)).norm() < 1e-10, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn polarization_dynamics_broken_closed_form() {
        let (_, es) = sq(2.0);
        let eta = build_eta(&es).unwrap();
        let obs = lift_observable(&eta, &sigma_z(), "sigma_z").unwrap();
        let up = StateVector::basis_up(2);
        let et = 3.0f64.sqrt();
        for &t in &[0.0, 0.3, 0.9] {
            let got = expectation(&up, &eta, &es, &obs, t);
            let want = (2.0 * et * t).cosh() + (2.0 / et) * (2.0 * et * t).sinh();
            let rel = (got - c(want, 0.0)).norm() / want.max(1.0);
            assert!(rel < 1e-10, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn generalized_norm_conventions() {
        // gamma = 0: unit Euclidean state has unit generalized norm.
        let (_, es) = sq(0.0);
        let eta = build_eta(&es).unwrap();
        let up = StateVector::basis_up(2);
        assert!((generalized_norm(&up, &eta) - 1.0).abs() < 1e-12);

        // Unbroken eigenstate: positive and conserved under propagation.
        let (_, es) = sq(0.5);
        let eta = build_eta(&es).unwrap();
        let ground = StateVector::biorthogonal(es.right_vector(0).clone());
        let n0 = generalized_norm(&ground, &eta);
        assert!(n0 > 0.0);
        for &t in &[0.9, 17.0, 50.0] {
            let moved = propagate_state(&es, &ground, t);
            assert!((generalized_norm(&moved, &eta) - n0).abs() < 1e-8);
        }

        // Broken eigenstate: self-orthogonal under eta.
        let (_, es) = sq(2.0);
        let eta = build_eta(&es).unwrap();
        let ground = StateVector::biorthogonal(es.right_vector(0).clone());
        assert!(generalized_norm(&ground, &eta).abs() < 1e-10);
    }

    #[test]
    fn gauge_invariance_of_expectation() {
        let (_, es) = sq(0.5);
        let eta = build_eta(&es).unwrap();
        let scaled = build_eta_scaled(&es, &[3.0, 0.4]).unwrap();
        let up = StateVector::basis_up(2);
        for (e, label) in [(&eta, "plain"), (&scaled, "scaled")] {
            let obs = lift_observable(e, &sigma_z(), "sigma_z").unwrap();
            let got = expectation(&up, e, &es, &obs, 1.7);
            let want = {
                let e0 = 0.75f64.sqrt();
                (2.0 * e0 * 1.7).cos() + (0.5 / e0) * (2.0 * e0 * 1.7).sin()
            };
            assert!((got - c(want, 0.0)).norm() < 1e-10, "{label}: {got} vs {want}");
        }
    }
}
