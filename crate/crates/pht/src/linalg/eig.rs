//! Non-Hermitian eigendecomposition: Householder reduction to Hessenberg
//! form, explicitly shifted QR iteration to complex Schur form, then
//! right/left eigenvector extraction by triangular substitution and
//! bi-orthonormalization.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::matrix::{vdot, vnorm, C64, ComplexMatrix};
use crate::error::{Error, Result};

/// Spectral role of one eigenvalue: real, or member of a complex
/// conjugate pair (index of the partner stored).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralTag {
    Real,
    /// Im E > 0; partner index carries the conjugate.
    PairPlus(usize),
    /// Im E < 0; partner index carries the conjugate.
    PairMinus(usize),
}

/// Eigenvalues with paired right/left eigenvectors satisfying
/// `<L_m|R_n> = delta_mn`, plus the spectral classification.
///
/// Normalization: each left vector has unit Euclidean norm with its first
/// nonzero component real positive; each right vector is scaled so that
/// `<L_n|R_n> = 1`. Eigenvalues are sorted by ascending real part, ties
/// broken by ascending imaginary part.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    eigenvalues: Vec<C64>,
    right: Vec<Array1<C64>>,
    left: Vec<Array1<C64>>,
    classification: Vec<SpectralTag>,
    tolerance_used: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn right_vector(&self, n: usize) -> &Array1<C64> {
        &self.right[n]
    }

    pub fn left_vector(&self, n: usize) -> &Array1<C64> {
        &self.left[n]
    }

    pub fn tags(&self) -> &[SpectralTag] {
        &self.classification
    }

    pub fn tolerance_used(&self) -> f64 {
        self.tolerance_used
    }

    /// `sum_n e^{-i E_n t} |R_n><L_n|`, the propagator over time `t`.
    pub fn evolution_operator(&self, t: f64) -> ComplexMatrix {
        let n = self.dim();
        let mut out = Array2::<C64>::zeros((n, n));
        for k in 0..n {
            let phase = (-C64::i() * self.eigenvalues[k] * t).exp();
            accumulate_outer(&mut out, &self.right[k], &self.left[k], phase);
        }
        ComplexMatrix::from_array_unchecked(out)
    }

    /// `sum_n E_n |R_n><L_n|`; reproduces the decomposed matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut out = Array2::<C64>::zeros((n, n));
        for k in 0..n {
            accumulate_outer(&mut out, &self.right[k], &self.left[k], self.eigenvalues[k]);
        }
        ComplexMatrix::from_array_unchecked(out)
    }

    /// `max_mn |<L_m|R_n> - delta_mn|`.
    pub fn biorthogonality_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for m in 0..n {
            for k in 0..n {
                let d = vdot(&self.left[m], &self.right[k]);
                let target = if m == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((d - target).norm());
            }
        }
        worst
    }

    /// `max |sum_n |R_n><L_n| - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.dim();
        let mut acc = Array2::<C64>::zeros((n, n));
        for k in 0..n {
            accumulate_outer(&mut acc, &self.right[k], &self.left[k], C64::new(1.0, 0.0));
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((acc[[i, j]] - target).norm());
            }
        }
        worst
    }

    /// Rescales eigenvector pair `n` by a positive factor:
    /// `L_n -> s_n L_n`, `R_n -> R_n / s_n`. Bi-orthonormality is
    /// preserved; the metric built from the rescaled system changes by
    /// per-term positive factors, which physical observables must not
    /// see.
    pub fn rescaled(&self, scales: &[f64]) -> Result<EigenSystem> {
        if scales.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: scales.len(),
                right: self.dim(),
            });
        }
        if let Some(&bad) = scales.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "rescale factors must be positive and finite, got {bad}"
            )));
        }
        let mut out = self.clone();
        for (n, &s) in scales.iter().enumerate() {
            out.left[n].mapv_inplace(|v| v * s);
            out.right[n].mapv_inplace(|v| v / s);
        }
        Ok(out)
    }
}

fn accumulate_outer(acc: &mut Array2<C64>, r: &Array1<C64>, l: &Array1<C64>, weight: C64) {
    let n = acc.nrows();
    for i in 0..n {
        let wi = weight * r[i];
        for j in 0..n {
            acc[[i, j]] += wi * l[j].conj();
        }
    }
}

/// Complex Givens rotation: returns `(c, s)` with `c` real such that
/// `[c s; -conj(s) c] * [f; g] = [r; 0]`.
fn givens(f: C64, g: C64) -> (f64, C64) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let rho = (fa * fa + ga * ga).sqrt();
    let c = fa / rho;
    let s = (f / fa) * g.conj() / rho;
    (c, s)
}

/// In-place Householder reduction to upper Hessenberg form; the unitary
/// similarity is accumulated into `q`.
fn hessenberg(t: &mut Array2<C64>, q: &mut Array2<C64>) {
    let n = t.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let mut xnorm_sq = 0.0;
        for i in k + 1..n {
            xnorm_sq += t[[i, k]].norm_sqr();
        }
        let xnorm = xnorm_sq.sqrt();
        if xnorm <= f64::EPSILON * t[[k + 1, k]].norm().max(1e-300) || xnorm == 0.0 {
            continue;
        }
        let x0 = t[[k + 1, k]];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        // v = x - alpha e0, normalized
        let mut v = Array1::<C64>::zeros(n - k - 1);
        for i in 0..n - k - 1 {
            v[i] = t[[k + 1 + i, k]];
        }
        v[0] -= alpha;
        let vn = vnorm(&v);
        if vn == 0.0 {
            continue;
        }
        v.mapv_inplace(|z| z / vn);
        // Left: rows k+1.., all columns k..: row_block -= 2 v (v^H row_block)
        for j in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..n - k - 1 {
                dot += v[i].conj() * t[[k + 1 + i, j]];
            }
            let dot = dot * 2.0;
            for i in 0..n - k - 1 {
                t[[k + 1 + i, j]] -= v[i] * dot;
            }
        }
        // Right: all rows, columns k+1..: col_block -= 2 (col_block v) v^H
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for j in 0..n - k - 1 {
                dot += t[[i, k + 1 + j]] * v[j];
            }
            let dot = dot * 2.0;
            for j in 0..n - k - 1 {
                t[[i, k + 1 + j]] -= dot * v[j].conj();
            }
        }
        // Accumulate q <- q P
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for j in 0..n - k - 1 {
                dot += q[[i, k + 1 + j]] * v[j];
            }
            let dot = dot * 2.0;
            for j in 0..n - k - 1 {
                q[[i, k + 1 + j]] -= dot * v[j].conj();
            }
        }
        // Force the exact zeros below the subdiagonal
        t[[k + 1, k]] = alpha;
        for i in k + 2..n {
            t[[i, k]] = C64::new(0.0, 0.0);
        }
    }
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 block closer to the
/// bottom-right entry.
fn wilkinson_shift(t: &Array2<C64>, hi: usize) -> C64 {
    let a = t[[hi - 1, hi - 1]];
    let b = t[[hi - 1, hi]];
    let c = t[[hi, hi - 1]];
    let d = t[[hi, hi]];
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let e1 = (a + d) * 0.5 + disc;
    let e2 = (a + d) * 0.5 - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One explicit-shift QR step on the active block `lo..=hi`.
fn qr_step(t: &mut Array2<C64>, q: &mut Array2<C64>, lo: usize, hi: usize, mu: C64) {
    let n = t.nrows();
    let m = hi - lo + 1;
    // Determine rotations on a shifted working copy of the block.
    let mut s = Array2::<C64>::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            s[[i, j]] = t[[lo + i, lo + j]];
        }
        s[[i, i]] -= mu;
    }
    let mut rots = Vec::with_capacity(m - 1);
    for k in 0..m - 1 {
        let (c, sn) = givens(s[[k, k]], s[[k + 1, k]]);
        for j in k..m {
            let a = s[[k, j]];
            let b = s[[k + 1, j]];
            s[[k, j]] = a * c + sn * b;
            s[[k + 1, j]] = -sn.conj() * a + b * c;
        }
        rots.push((c, sn));
    }
    // Similarity transform of the full matrix: rows then columns.
    for (k, &(c, sn)) in rots.iter().enumerate() {
        let (r0, r1) = (lo + k, lo + k + 1);
        for j in 0..n {
            let a = t[[r0, j]];
            let b = t[[r1, j]];
            t[[r0, j]] = a * c + sn * b;
            t[[r1, j]] = -sn.conj() * a + b * c;
        }
    }
    for (k, &(c, sn)) in rots.iter().enumerate() {
        let (c0, c1) = (lo + k, lo + k + 1);
        for i in 0..n {
            let a = t[[i, c0]];
            let b = t[[i, c1]];
            t[[i, c0]] = a * c + b * sn.conj();
            t[[i, c1]] = -a * sn + b * c;
        }
        for i in 0..n {
            let a = q[[i, c0]];
            let b = q[[i, c1]];
            q[[i, c0]] = a * c + b * sn.conj();
            q[[i, c1]] = -a * sn + b * c;
        }
    }
}

/// Full complex Schur decomposition `H = Q T Q^dagger` with `T` upper
/// triangular.
fn schur(h: &ComplexMatrix) -> Result<(Array2<C64>, Array2<C64>)> {
    let n = h.dim();
    let mut t = h.array().clone();
    let mut q = Array2::<C64>::eye(n);
    hessenberg(&mut t, &mut q);
    let anorm = t.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;

    let mut hi = n - 1;
    let mut since_deflation = 0usize;
    let mut total = 0usize;
    let budget = 40 * n * n + 100;
    while hi > 0 {
        for i in 1..=hi {
            let local = t[[i - 1, i - 1]].norm() + t[[i, i]].norm();
            let scale = if local == 0.0 { anorm } else { local };
            if t[[i, i - 1]].norm() <= eps * scale {
                t[[i, i - 1]] = C64::new(0.0, 0.0);
            }
        }
        let mut lo = hi;
        while lo > 0 && t[[lo, lo - 1]].norm() != 0.0 {
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        since_deflation += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence);
        }
        let mu = if since_deflation % 11 == 0 {
            t[[hi, hi]] + C64::new(0.75 * t[[hi, hi - 1]].norm(), 0.0)
        } else {
            wilkinson_shift(&t, hi)
        };
        qr_step(&mut t, &mut q, lo, hi, mu);
    }
    Ok((t, q))
}

/// Right eigenvector of triangular `t` for the eigenvalue at position `k`,
/// by back substitution with a perturbed denominator on (near-)degenerate
/// diagonal entries.
fn right_from_schur(t: &Array2<C64>, k: usize, floor: f64) -> Array1<C64> {
    let n = t.nrows();
    let lam = t[[k, k]];
    let mut x = Array1::<C64>::zeros(n);
    x[k] = C64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let mut s = C64::new(0.0, 0.0);
        for j in i + 1..=k {
            s += t[[i, j]] * x[j];
        }
        let mut den = t[[i, i]] - lam;
        if den.norm() < floor {
            den = C64::new(floor, 0.0);
        }
        x[i] = -s / den;
    }
    x
}

/// Left eigenvector (`u^H T = lam u^H`) by forward substitution.
fn left_from_schur(t: &Array2<C64>, k: usize, floor: f64) -> Array1<C64> {
    let n = t.nrows();
    let lam_c = t[[k, k]].conj();
    let mut u = Array1::<C64>::zeros(n);
    u[k] = C64::new(1.0, 0.0);
    for i in k + 1..n {
        let mut s = C64::new(0.0, 0.0);
        for j in k..i {
            s += t[[j, i]].conj() * u[j];
        }
        let mut den = t[[i, i]].conj() - lam_c;
        if den.norm() < floor {
            den = C64::new(floor, 0.0);
        }
        u[i] = -s / den;
    }
    u
}

/// Classification of eigenvalues into Real / conjugate-pair tags.
/// Greedy: each eigenvalue with `|Im| > tol` is paired with the unclaimed
/// partner minimizing `|E_m - conj(E_n)|`; failure to find one within
/// `tol` is an error.
pub(crate) fn classify_tags(eigenvalues: &[C64], tol: f64) -> Result<Vec<SpectralTag>> {
    let n = eigenvalues.len();
    let mut tags: Vec<Option<SpectralTag>> = vec![None; n];
    for i in 0..n {
        if tags[i].is_some() {
            continue;
        }
        let e = eigenvalues[i];
        if e.im.abs() <= tol {
            tags[i] = Some(SpectralTag::Real);
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (j, &f) in eigenvalues.iter().enumerate() {
            if j == i || tags[j].is_some() {
                continue;
            }
            let d = (f - e.conj()).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= tol => {
                if e.im > 0.0 {
                    tags[i] = Some(SpectralTag::PairPlus(j));
                    tags[j] = Some(SpectralTag::PairMinus(i));
                } else {
                    tags[i] = Some(SpectralTag::PairMinus(j));
                    tags[j] = Some(SpectralTag::PairPlus(i));
                }
            }
            _ => {
                return Err(Error::UnpairableEigenvalue { value: e, tol });
            }
        }
    }
    Ok(tags.into_iter().map(|t| t.unwrap()).collect())
}

/// Eigendecomposition of a general complex matrix into a bi-orthonormal
/// left/right eigenvector system.
///
/// Left vectors are eigenvectors of the adjoint with conjugated
/// eigenvalues. Eigenvalues are sorted by ascending (Re, then Im);
/// near-equal real parts are tie-broken tolerance-aware so that roundoff
/// does not scramble conjugate pairs. Degenerate but diagonalizable
/// eigenvalues are handled by Gram-Schmidt on `<L|R>` within the cluster.
///
/// Fails with `DefectiveMatrix` when some unit-normalized pair has
/// `|<L_n|R_n>| < tol` (non-diagonalizable input, e.g. at an exceptional
/// point) and with `UnpairableEigenvalue` when the spectrum is not
/// closed under conjugation at tolerance `tol`.
pub fn eigendecompose(h: &ComplexMatrix, tol: f64) -> Result<EigenSystem> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {tol}")));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    let n = h.dim();
    let (t, q) = schur(h)?;
    let scale = t.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let floor = f64::EPSILON * scale;

    let mut lam: Vec<C64> = (0..n).map(|k| t[[k, k]]).collect();
    let qm = ComplexMatrix::from_array_unchecked(q);
    let mut right: Vec<Array1<C64>> = (0..n)
        .map(|k| qm.apply(&right_from_schur(&t, k, floor)))
        .collect();
    let mut left: Vec<Array1<C64>> = (0..n)
        .map(|k| qm.apply(&left_from_schur(&t, k, floor)))
        .collect();

    // Sort by (Re, Im); runs of near-equal real parts are ordered by Im so
    // that roundoff in Re does not decide ground-state identity.
    let run_eps = 1e3 * f64::EPSILON * scale;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lam[a].re.total_cmp(&lam[b].re));
    let mut sorted = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && lam[order[j + 1]].re - lam[order[j]].re < run_eps {
            j += 1;
        }
        let mut run: Vec<usize> = order[i..=j].to_vec();
        run.sort_by(|&a, &b| lam[a].im.total_cmp(&lam[b].im));
        sorted.extend(run);
        i = j + 1;
    }
    lam = sorted.iter().map(|&k| lam[k]).collect();
    right = sorted.iter().map(|&k| right[k].clone()).collect();
    left = sorted.iter().map(|&k| left[k].clone()).collect();

    // Cluster degenerate eigenvalues; Gram-Schmidt bi-orthonormalization
    // inside each cluster, then the normalization convention per vector.
    let ctol = tol.max(100.0 * f64::EPSILON * scale);
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && (lam[j + 1] - lam[i]).norm() < ctol {
            j += 1;
        }
        for a in i..=j {
            for b in i..a {
                let overlap_r = vdot(&left[b], &right[a]);
                let rb = right[b].clone();
                right[a].zip_mut_with(&rb, |x, y| *x -= overlap_r * y);
                let overlap_l = vdot(&left[a], &right[b]).conj();
                let lb = left[b].clone();
                left[a].zip_mut_with(&lb, |x, y| *x -= overlap_l * y);
            }
            // Left: unit norm, first nonzero component real positive.
            let ln = vnorm(&left[a]);
            if ln == 0.0 {
                return Err(Error::DefectiveMatrix {
                    index: a,
                    overlap: 0.0,
                    tol,
                });
            }
            left[a].mapv_inplace(|v| v / ln);
            let lmax = left[a].iter().map(|v| v.norm()).fold(0.0, f64::max);
            let first = left[a]
                .iter()
                .position(|v| v.norm() > 1e-12 * lmax)
                .unwrap_or(0);
            let phase = left[a][first] / left[a][first].norm();
            left[a].mapv_inplace(|v| v / phase);
            // Right: <L|R> = 1, rejecting (near-)defective pairs.
            let rn = vnorm(&right[a]);
            if rn == 0.0 {
                return Err(Error::DefectiveMatrix {
                    index: a,
                    overlap: 0.0,
                    tol,
                });
            }
            right[a].mapv_inplace(|v| v / rn);
            let d = vdot(&left[a], &right[a]);
            if d.norm() < tol {
                return Err(Error::DefectiveMatrix {
                    index: a,
                    overlap: d.norm(),
                    tol,
                });
            }
            right[a].mapv_inplace(|v| v / d);
        }
        i = j + 1;
    }

    let classification = classify_tags(&lam, tol)?;
    Ok(EigenSystem {
        eigenvalues: lam,
        right,
        left,
        classification,
        tolerance_used: tol,
    })
}
