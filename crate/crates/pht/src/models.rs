//! Builders for PT-symmetric qubit Hamiltonians, their secular
//! polynomials and symmetry checks, plus single-qubit closed forms used
//! as golden-value oracles.

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix, EigenSystem};
use crate::pseudo::StateVector;

/// Largest supported Hilbert-space dimension (`2^m`).
pub const MAX_DIM: usize = 4096;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Parameters of the single unbiased qubit: gap `delta` and gain/loss
/// `gamma`, giving `H = delta sigma^x + i gamma sigma^z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitParams {
    pub delta: f64,
    pub gamma: f64,
}

impl SingleQubitParams {
    pub fn new(delta: f64, gamma: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
        }
        if gamma < 0.0 || !gamma.is_finite() {
            return Err(Error::InvalidInput(format!(
                "gamma must be non-negative, got {gamma}"
            )));
        }
        Ok(Self { delta, gamma })
    }
}

/// How the staggered gain term is scaled relative to the nominal `gamma`.
///
/// `Full` places `i gamma sigma^z` on each site as the array Hamiltonian
/// is written; `Half` uses `i (gamma/2) sigma^z`, which is the convention
/// under which the quoted quartic secular polynomials hold verbatim. The
/// two differ because the secular coefficient carries `4 gamma_eff^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GainConvention {
    Full,
    Half,
}

/// Which site pairs the exchange coupling connects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    NearestNeighbor,
    AllPairs,
}

/// Parameters of the interacting qubit array (identical per site):
/// gap `delta`, bias `epsilon`, staggered gain `gamma`, exchange `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitArrayParams {
    pub m: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub g: f64,
    pub gain_convention: GainConvention,
    pub topology: Topology,
}

impl QubitArrayParams {
    pub fn new(m: usize, delta: f64, epsilon: f64, gamma: f64, g: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::UnsupportedM {
                m,
                reason: "need at least one qubit",
            });
        }
        for (name, v) in [("delta", delta), ("epsilon", epsilon), ("gamma", gamma), ("g", g)] {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self {
            m,
            delta,
            epsilon,
            gamma,
            g,
            gain_convention: GainConvention::Full,
            topology: Topology::NearestNeighbor,
        })
    }

    pub fn with_gain_convention(mut self, gc: GainConvention) -> Self {
        self.gain_convention = gc;
        self
    }

    pub fn with_topology(mut self, t: Topology) -> Self {
        self.topology = t;
        self
    }

    pub fn effective_gamma(&self) -> f64 {
        match self.gain_convention {
            GainConvention::Full => self.gamma,
            GainConvention::Half => self.gamma / 2.0,
        }
    }

    pub fn dim(&self) -> usize {
        1usize << self.m
    }
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
        .unwrap()
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]])
        .unwrap()
}

fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
        .unwrap()
}

fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
        .unwrap()
}

/// Embeds a single-site operator at site `site` (0-based) of an `m`-site
/// register. Site 0 is the most significant bit: basis order for two
/// qubits is `|uu>, |ud>, |du>, |dd>`.
fn embed(op: &ComplexMatrix, site: usize, m: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for k in 0..m {
        let factor = if k == site { op.clone() } else { ComplexMatrix::identity(2) };
        out = out.kron(&factor);
    }
    out
}

/// `H = delta sigma^x + i gamma sigma^z = [[i gamma, delta], [delta, -i gamma]]`.
pub fn single_qubit_hamiltonian(p: &SingleQubitParams) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![c(0.0, p.gamma), c(p.delta, 0.0)],
        vec![c(p.delta, 0.0), c(0.0, -p.gamma)],
    ])
    .unwrap()
}

/// Interacting qubit array
/// `H = sum_i [(delta/2) sigma_i^x + (epsilon/2) sigma_i^z + (-1)^i i gamma_eff sigma_i^z]
///    + g sum_<ij> (sigma_i^+ sigma_j^- + sigma_i^- sigma_j^+)`,
/// with the stagger sign `(-1)^i` counting sites from 1 (site 1 carries
/// loss). Basis ordering: qubit 1 is the most significant bit.
pub fn qubit_array_hamiltonian(p: &QubitArrayParams) -> Result<ComplexMatrix> {
    if p.dim() > MAX_DIM {
        return Err(Error::DimensionBudget { m: p.m, max: MAX_DIM });
    }
    let dim = p.dim();
    let geff = p.effective_gamma();
    let sx = pauli_x();
    let sz = pauli_z();
    let mut h = ComplexMatrix::zeros(dim);
    for site in 0..p.m {
        let stagger = if (site + 1) % 2 == 1 { -1.0 } else { 1.0 };
        let x = embed(&sx, site, p.m).scale(c(0.5 * p.delta, 0.0));
        let z = embed(&sz, site, p.m);
        h = &h + &x;
        h = &h + &z.scale(c(0.5 * p.epsilon, stagger * geff));
    }
    let pairs: Vec<(usize, usize)> = match p.topology {
        Topology::NearestNeighbor => (0..p.m.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        Topology::AllPairs => {
            let mut v = Vec::new();
            for i in 0..p.m {
                for j in i + 1..p.m {
                    v.push((i, j));
                }
            }
            v
        }
    };
    let sp = sigma_plus();
    let sm = sigma_minus();
    for (i, j) in pairs {
        let hop = embed(&sp, i, p.m).matmul(&embed(&sm, j, p.m));
        let hop_rev = embed(&sm, i, p.m).matmul(&embed(&sp, j, p.m));
        h = &h + &(&hop + &hop_rev).scale(c(p.g, 0.0));
    }
    Ok(h)
}

/// Quartic secular polynomial of the two-qubit array,
/// `E^4 + (gamma^2 - delta^2 - g^2 - eps^2) E^2 - g delta^2 E + eps^2 (g^2 - gamma^2)`,
/// where `gamma` is the nominal parameter. These coefficients match the
/// spectrum of [`qubit_array_hamiltonian`] under the `Half` gain
/// convention (the `Full` Hamiltonian produces `4 gamma^2` in the
/// quadratic coefficient instead).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecularPolynomial {
    /// Coefficients of `E^4, E^3, E^2, E^1, E^0`, leading first.
    pub coefficients: [C64; 5],
}

impl SecularPolynomial {
    pub fn eval(&self, e: C64) -> C64 {
        self.coefficients.iter().fold(c(0.0, 0.0), |acc, &k| acc * e + k)
    }
}

pub fn secular_polynomial(p: &QubitArrayParams) -> Result<SecularPolynomial> {
    if p.m != 2 {
        return Err(Error::UnsupportedM {
            m: p.m,
            reason: "secular polynomial is defined for two qubits",
        });
    }
    let (d2, e2, g2, gam2) = (
        p.delta * p.delta,
        p.epsilon * p.epsilon,
        p.g * p.g,
        p.gamma * p.gamma,
    );
    Ok(SecularPolynomial {
        coefficients: [
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(gam2 - d2 - g2 - e2, 0.0),
            c(-p.g * d2, 0.0),
            c(e2 * (g2 - gam2), 0.0),
        ],
    })
}

/// Total polarization `sum_i sigma_i^z`, diagonal in the computational
/// basis.
pub fn total_polarization(m: usize) -> Result<ComplexMatrix> {
    if m < 1 {
        return Err(Error::UnsupportedM { m, reason: "need at least one qubit" });
    }
    let dim = 1usize << m;
    if dim > MAX_DIM {
        return Err(Error::DimensionBudget { m, max: MAX_DIM });
    }
    let sz = pauli_z();
    let mut out = ComplexMatrix::zeros(dim);
    for site in 0..m {
        out = &out + &embed(&sz, site, m);
    }
    Ok(out)
}

/// Checks PT symmetry with parity as the qubit-reversal permutation
/// (`sigma_j -> sigma_{M+1-j}`) and antilinear time reversal acting as
/// complex conjugation: returns true iff `P conj(H) P^{-1} = H` within a
/// fixed numerical tolerance.
pub fn check_pt_symmetry(h: &ComplexMatrix, m: usize) -> Result<bool> {
    let dim = 1usize << m;
    if h.dim() != dim {
        return Err(Error::DimensionMismatch { left: h.dim(), right: dim });
    }
    let rev = |idx: usize| -> usize {
        let mut out = 0usize;
        for b in 0..m {
            if idx & (1 << b) != 0 {
                out |= 1 << (m - 1 - b);
            }
        }
        out
    };
    let hc = h.conjugate();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mapped = hc[(rev(i), rev(j))];
            worst = worst.max((mapped - h[(i, j)]).norm());
        }
    }
    Ok(worst < 1e-10 * h.max_abs().max(1.0))
}

/// Ground state: the right eigenvector (bi-orthonormal scaling) of the
/// eigenvalue minimizing (Re E, then Im E) — index 0 under the sorting
/// convention.
pub fn ground_state(es: &EigenSystem) -> StateVector {
    StateVector::biorthogonal(es.right_vector(0).clone())
}

/// Which side of the exceptional point the single qubit sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Unbroken,
    Broken,
}

/// Bi-orthogonal matrix elements `<L_m| A |R_n>` of the lifted
/// polarization, indexed by the (-, +) eigenvalue branches.
#[derive(Clone, Copy, Debug)]
pub struct PolarizationElements {
    pub mm: C64,
    pub pp: C64,
    /// bra -, ket +
    pub mp: C64,
    /// bra +, ket -
    pub pm: C64,
}

/// Analytic single-qubit reference values, in the normalization with each
/// left vector's first component `1/sqrt(2)` (real positive).
///
/// Index 0 is the "-" branch (eigenvalue `-E` or `-i Etilde`), index 1
/// the "+" branch, matching the (Re, Im)-ascending sort of the numerical
/// pipeline.
#[derive(Clone, Debug)]
pub struct SingleQubitClosedForms {
    pub regime: Regime,
    /// `sqrt(|delta^2 - gamma^2|)`: the real eigenvalue scale `E` in the
    /// unbroken regime, `Etilde` in the broken one.
    pub energy: f64,
    pub eigenvalues: [C64; 2],
    pub right: [Array1<C64>; 2],
    pub left: [Array1<C64>; 2],
    pub eta: ComplexMatrix,
    pub sigma_z_lifted: ComplexMatrix,
    pub elements: PolarizationElements,
    delta: f64,
    gamma: f64,
}

impl SingleQubitClosedForms {
    /// Polarization of the initially-up qubit:
    /// `cos(2Et) + (gamma/E) sin(2Et)` unbroken,
    /// `cosh(2Et) + (gamma/E) sinh(2Et)` broken.
    pub fn polarization(&self, t: f64) -> f64 {
        let e = self.energy;
        match self.regime {
            Regime::Unbroken => (2.0 * e * t).cos() + (self.gamma / e) * (2.0 * e * t).sin(),
            Regime::Broken => (2.0 * e * t).cosh() + (self.gamma / e) * (2.0 * e * t).sinh(),
        }
    }

    /// Ground-state correlation function of the polarization:
    /// `(delta^2/E^2) e^{-2iEt}` unbroken, `(delta^2/E^2) e^{-2Et}`
    /// broken (purely real).
    pub fn correlation(&self, t: f64) -> C64 {
        let amp = self.delta * self.delta / (self.energy * self.energy);
        match self.regime {
            Regime::Unbroken => c(amp, 0.0) * (-2.0 * C64::i() * self.energy * t).exp(),
            Regime::Broken => c(amp * (-2.0 * self.energy * t).exp(), 0.0),
        }
    }

    /// Euclidean norm the ground state must carry for the literal
    /// correlation average to reproduce [`Self::correlation`]; equals
    /// `delta/E`, which bi-orthonormal scaling yields automatically in
    /// the unbroken regime.
    pub fn ground_state_norm(&self) -> f64 {
        self.delta / self.energy
    }
}

/// Closed-form eigensystem, metric, lifted polarization, and
/// bi-orthogonal matrix elements of the single qubit. Fails on the
/// exceptional point `gamma = delta`.
pub fn single_qubit_closed_forms(p: &SingleQubitParams) -> Result<SingleQubitClosedForms> {
    let (d, g) = (p.delta, p.gamma);
    if (g - d).abs() < 1e-14 * d {
        return Err(Error::ExceptionalPoint);
    }
    let s2 = 2.0f64.sqrt();
    let eta = ComplexMatrix::from_rows(&[
        vec![c(1.0, 0.0), c(0.0, -g / d)],
        vec![c(0.0, g / d), c(1.0, 0.0)],
    ])
    .unwrap();
    let f = d * d / (d * d - g * g);
    let sigma_z_lifted = ComplexMatrix::from_rows(&[
        vec![c(f, 0.0), c(0.0, -f * g / d)],
        vec![c(0.0, -f * g / d), c(-f, 0.0)],
    ])
    .unwrap();

    if g < d {
        let e = (d * d - g * g).sqrt();
        // N_{+-} = +-delta^2 / (E (+-E - i gamma))
        let n_plus = c(d * d, 0.0) / (c(e, 0.0) * c(e, -g));
        let n_minus = -c(d * d, 0.0) / (c(e, 0.0) * c(-e, -g));
        let right = [
            Array1::from(vec![n_minus / s2, n_minus * c(-e, -g) / (d * s2)]),
            Array1::from(vec![n_plus / s2, n_plus * c(e, -g) / (d * s2)]),
        ];
        let left = [
            Array1::from(vec![c(1.0 / s2, 0.0), c(-e / (d * s2), g / (d * s2))]),
            Array1::from(vec![c(1.0 / s2, 0.0), c(e / (d * s2), g / (d * s2))]),
        ];
        let elements = PolarizationElements {
            mm: c(0.0, 0.0),
            pp: c(0.0, 0.0),
            mp: c(d * d, 0.0) / (c(e, 0.0) * c(e, -g)),
            pm: c(d * d, 0.0) / (c(e, 0.0) * c(e, g)),
        };
        Ok(SingleQubitClosedForms {
            regime: Regime::Unbroken,
            energy: e,
            eigenvalues: [c(-e, 0.0), c(e, 0.0)],
            right,
            left,
            eta,
            sigma_z_lifted,
            elements,
            delta: d,
            gamma: p.gamma,
        })
    } else {
        let et = (g * g - d * d).sqrt();
        // N_{+-} = -delta^2 / (Etilde (Etilde -+ gamma))
        let n_plus = c(-d * d / (et * (et - g)), 0.0);
        let n_minus = c(-d * d / (et * (et + g)), 0.0);
        let right = [
            Array1::from(vec![n_minus / s2, n_minus * c(0.0, -(et + g)) / (d * s2)]),
            Array1::from(vec![n_plus / s2, n_plus * c(0.0, et - g) / (d * s2)]),
        ];
        let left = [
            Array1::from(vec![c(1.0 / s2, 0.0), c(0.0, (et + g) / (d * s2))]),
            Array1::from(vec![c(1.0 / s2, 0.0), c(0.0, (g - et) / (d * s2))]),
        ];
        // Direct evaluation of <L_m|Sigma^z|R_n> in this normalization.
        // (The off-diagonal signs follow from the eigenvectors above.)
        let elements = PolarizationElements {
            mm: c(0.0, 0.0),
            pp: c(0.0, 0.0),
            mp: c(d * d / (et * (g - et)), 0.0),
            pm: c(-d * d / (et * (g + et)), 0.0),
        };
        Ok(SingleQubitClosedForms {
            regime: Regime::Broken,
            energy: et,
            eigenvalues: [c(0.0, -et), c(0.0, et)],
            right,
            left,
            eta,
            sigma_z_lifted,
            elements,
            delta: d,
            gamma: p.gamma,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigendecompose, vdot, DEFAULT_TOL};

    #[test]
    fn single_qubit_matrix_layout() {
        let h = single_qubit_hamiltonian(&SingleQubitParams::new(1.0, 0.0).unwrap());
        assert_eq!(h[(0, 0)], c(0.0, 0.0));
        assert_eq!(h[(0, 1)], c(1.0, 0.0));
        let h = single_qubit_hamiltonian(&SingleQubitParams::new(1.0, 0.5).unwrap());
        assert_eq!(h[(0, 0)], c(0.0, 0.5));
        assert_eq!(h[(1, 1)], c(0.0, -0.5));
        let es = eigendecompose(&h, DEFAULT_TOL).unwrap();
        let e = 0.75f64.sqrt();
        assert!((es.eigenvalues()[1] - c(e, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn array_diagonal_and_couplings() {
        let p = QubitArrayParams::new(2, 1.0, 0.0, 0.2, 0.1).unwrap();
        let h = qubit_array_hamiltonian(&p).unwrap();
        // Diagonal (0, -0.4i, +0.4i, 0) in the uu, ud, du, dd basis.
        assert!((h[(0, 0)] - c(0.0, 0.0)).norm() < 1e-15);
        assert!((h[(1, 1)] - c(0.0, -0.4)).norm() < 1e-15);
        assert!((h[(2, 2)] - c(0.0, 0.4)).norm() < 1e-15);
        assert!((h[(3, 3)] - c(0.0, 0.0)).norm() < 1e-15);
        // sigma^x couplings delta/2, exchange between |ud> and |du>.
        assert!((h[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((h[(0, 2)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((h[(1, 2)] - c(0.1, 0.0)).norm() < 1e-15);
        assert!((h[(0, 3)]).norm() < 1e-15);
    }

    #[test]
    fn single_site_array_reduces_to_single_qubit() {
        let p = QubitArrayParams::new(1, 2.0, 0.0, 0.3, 0.0).unwrap();
        let h = qubit_array_hamiltonian(&p).unwrap();
        // (delta/2) sigma^x - i gamma sigma^z: the single-qubit form with
        // delta' = 1 and the stagger sign on gamma.
        let want = single_qubit_hamiltonian(&SingleQubitParams::new(1.0, 0.3).unwrap()).conjugate();
        assert!((&h - &want).max_abs() < 1e-15);
    }

    #[test]
    fn secular_polynomial_matches_quoted_values() {
        let p = QubitArrayParams::new(2, 1.0, 0.2, 0.2, 0.1)
            .unwrap()
            .with_gain_convention(GainConvention::Half);
        let s = secular_polynomial(&p).unwrap();
        assert!((s.coefficients[4] - c(-0.0012, 0.0)).norm() < 1e-15);
        // epsilon = 0: zero constant term, E = 0 is always a root.
        let p0 = QubitArrayParams::new(2, 1.0, 0.0, 0.37, 0.21).unwrap();
        let s0 = secular_polynomial(&p0).unwrap();
        assert_eq!(s0.coefficients[4], c(0.0, 0.0));
        assert!(s0.eval(c(0.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            secular_polynomial(&QubitArrayParams::new(3, 1.0, 0.0, 0.1, 0.1).unwrap()),
            Err(Error::UnsupportedM { .. })
        ));
    }

    #[test]
    fn total_polarization_values() {
        let z1 = total_polarization(1).unwrap();
        assert_eq!(z1[(0, 0)], c(1.0, 0.0));
        assert_eq!(z1[(1, 1)], c(-1.0, 0.0));
        let z2 = total_polarization(2).unwrap();
        for (i, want) in [2.0, 0.0, 0.0, -2.0].iter().enumerate() {
            assert_eq!(z2[(i, i)], c(*want, 0.0));
        }
        assert_eq!(z2.hermiticity_residual(), 0.0);
    }

    #[test]
    fn pt_symmetry_staggered_vs_uniform_gain() {
        let p = QubitArrayParams::new(2, 1.0, 0.0, 0.3, 0.2).unwrap();
        assert!(check_pt_symmetry(&qubit_array_hamiltonian(&p).unwrap(), 2).unwrap());
        // Biased but staggered: still PT-symmetric.
        let pb = QubitArrayParams::new(2, 1.0, 0.4, 0.3, 0.2).unwrap();
        assert!(check_pt_symmetry(&qubit_array_hamiltonian(&pb).unwrap(), 2).unwrap());
        // Same-sign gain on both sites breaks it.
        let h = qubit_array_hamiltonian(&p).unwrap();
        let z1 = embed(&pauli_z(), 0, 2);
        let broken = &h + &z1.scale(c(0.0, 2.0 * 0.3));
        assert!(!check_pt_symmetry(&broken, 2).unwrap());
        // Odd M with bias: not PT-symmetric.
        let podd = QubitArrayParams::new(3, 1.0, 0.2, 0.3, 0.2).unwrap();
        assert!(!check_pt_symmetry(&qubit_array_hamiltonian(&podd).unwrap(), 3).unwrap());
    }

    #[test]
    fn ground_state_selection() {
        let h = single_qubit_hamiltonian(&SingleQubitParams::new(1.0, 0.5).unwrap());
        let es = eigendecompose(&h, DEFAULT_TOL).unwrap();
        let g = ground_state(&es);
        let e = es.eigenvalues()[0];
        assert!((e - c(-0.75f64.sqrt(), 0.0)).norm() < 1e-12);
        let hg = ComplexMatrix::new(h.array().clone()).unwrap().apply(g.amplitudes());
        for i in 0..2 {
            assert!((hg[i] - e * g.amplitudes()[i]).norm() < 1e-10);
        }
        // Broken regime: ground carries Im E < 0 (Re tie broken by Im).
        let h = single_qubit_hamiltonian(&SingleQubitParams::new(1.0, 2.0).unwrap());
        let es = eigendecompose(&h, DEFAULT_TOL).unwrap();
        assert!((es.eigenvalues()[0] - c(0.0, -(3.0f64.sqrt()))).norm() < 1e-12);
        // Hermitian two-qubit: lowest eigenvalue -delta.
        let p = QubitArrayParams::new(2, 1.0, 0.0, 0.0, 0.0).unwrap();
        let es = eigendecompose(&qubit_array_hamiltonian(&p).unwrap(), DEFAULT_TOL).unwrap();
        assert!((es.eigenvalues()[0] - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn closed_forms_are_self_consistent() {
        for gamma in [0.25, 0.5, 0.75, 1.5, 2.0] {
            let p = SingleQubitParams::new(1.0, gamma).unwrap();
            let cf = single_qubit_closed_forms(&p).unwrap();
            let h = single_qubit_hamiltonian(&p);
            for k in 0..2 {
                // H R = E R and H^dagger L = conj(E) L
                let hr = h.apply(&cf.right[k]);
                let hl = h.adjoint().apply(&cf.left[k]);
                for i in 0..2 {
                    assert!((hr[i] - cf.eigenvalues[k] * cf.right[k][i]).norm() < 1e-12);
                    assert!((hl[i] - cf.eigenvalues[k].conj() * cf.left[k][i]).norm() < 1e-12);
                }
                // <L_m|R_n> = delta_mn
                for m in 0..2 {
                    let want = if m == k { 1.0 } else { 0.0 };
                    assert!((vdot(&cf.left[m], &cf.right[k]) - c(want, 0.0)).norm() < 1e-12);
                }
            }
            // eta and the lifted polarization agree with direct algebra.
            let eta_inv = cf.eta.inverse().unwrap();
            let direct = eta_inv.matmul(&pauli_z());
            assert!((&direct - &cf.sigma_z_lifted).max_abs() < 1e-12);
            // Matrix elements match <L_m|Sigma^z|R_n>.
            let got_mp = vdot(&cf.left[0], &cf.sigma_z_lifted.apply(&cf.right[1]));
            let got_pm = vdot(&cf.left[1], &cf.sigma_z_lifted.apply(&cf.right[0]));
            assert!((got_mp - cf.elements.mp).norm() < 1e-12, "gamma={gamma}");
            assert!((got_pm - cf.elements.pm).norm() < 1e-12, "gamma={gamma}");
            for k in 0..2 {
                let diag = vdot(&cf.left[k], &cf.sigma_z_lifted.apply(&cf.right[k]));
                assert!(diag.norm() < 1e-12);
            }
        }
        assert!(matches!(
            single_qubit_closed_forms(&SingleQubitParams::new(1.0, 1.0).unwrap()),
            Err(Error::ExceptionalPoint)
        ));
    }

    #[test]
    fn closed_form_element_values_at_reference_points() {
        // gamma = 0.5: |mp| = 1.1547005, arg = +pi/6.
        let cf =
            single_qubit_closed_forms(&SingleQubitParams::new(1.0, 0.5).unwrap()).unwrap();
        assert!((cf.elements.mp.norm() - 1.154_700_538_379_251_5).abs() < 1e-9);
        assert!((cf.elements.mp.arg() - 0.523_598_775_598_298_8).abs() < 1e-9);
        // gamma = 2: mp = delta^2/(Etilde (gamma - Etilde)) = +2.1547005.
        let cf =
            single_qubit_closed_forms(&SingleQubitParams::new(1.0, 2.0).unwrap()).unwrap();
        assert!((cf.elements.mp - c(2.154_700_538_379_251, 0.0)).norm() < 1e-9);
        assert!((cf.elements.pm - c(-0.154_700_538_379_251_55, 0.0)).norm() < 1e-9);
    }
}
