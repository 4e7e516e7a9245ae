//! Polynomial root finding by the Aberth-Ehrlich simultaneous iteration,
//! with cluster averaging to recover multiple roots at full accuracy.
//! Serves as an algebraically independent cross-check for eigenvalue
//! computations (secular equations), so it deliberately shares no code
//! with the QR path.

use num_complex::Complex64;

use super::matrix::C64;
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 8;
const MAX_ITER: usize = 500;

fn eval_poly(coeffs: &[C64], z: C64) -> (C64, C64) {
    // Horner for p and p'; coefficients are leading-first.
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of the polynomial with the given coefficients (leading
/// coefficient first), each satisfying `|P(root)| < tol * max|coeff|`.
///
/// Multiple roots are recovered by averaging converged iterates that
/// cluster within `1e-7 * scale`, which cancels the square-root-of-eps
/// splitting a multiple root suffers under coefficient rounding.
pub fn polynomial_roots(coeffs: &[C64], tol: f64) -> Result<Vec<C64>> {
    if coeffs.is_empty() || coeffs[0].norm() == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {tol}")));
    }
    let degree = coeffs.len() - 1;
    if degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree,
            max: MAX_DEGREE,
        });
    }
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[0];
    let monic: Vec<C64> = coeffs.iter().map(|&c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[1]]);
    }

    // Cauchy bound on root magnitudes for the starting circle.
    let bound = 1.0 + monic[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..degree)
        .map(|k| {
            let mut w = C64::new(1.0, 0.0);
            for _ in 0..=k {
                w *= seed;
            }
            w * (0.5 * bound / w.norm())
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        for k in 0..degree {
            let (p, dp) = eval_poly(&monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let dp = if dp.norm() == 0.0 {
                C64::new(f64::EPSILON, 0.0)
            } else {
                dp
            };
            let w = p / dp;
            let mut repulse = C64::new(0.0, 0.0);
            for j in 0..degree {
                if j == k {
                    continue;
                }
                let mut diff = z[k] - z[j];
                if diff.norm() == 0.0 {
                    diff = C64::new(f64::EPSILON, f64::EPSILON);
                }
                repulse += 1.0 / diff;
            }
            let denom = C64::new(1.0, 0.0) - w * repulse;
            let step = if denom.norm() == 0.0 { w } else { w / denom };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }

    // Average clusters of converged iterates (multiple roots).
    let scale = 1.0 + z.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let radius = 1e-7 * scale;
    let mut assigned = vec![false; degree];
    let mut roots = Vec::with_capacity(degree);
    for k in 0..degree {
        if assigned[k] {
            continue;
        }
        let mut members = vec![k];
        for j in k + 1..degree {
            if !assigned[j] && (z[j] - z[k]).norm() < radius {
                members.push(j);
            }
        }
        let mean = members.iter().map(|&m| z[m]).sum::<C64>() / members.len() as f64;
        for &m in &members {
            assigned[m] = true;
            roots.push(mean);
        }
    }

    let max_coeff = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for &r in &roots {
        let (p, _) = eval_poly(coeffs, r);
        if p.norm() >= tol * max_coeff {
            return Err(Error::NoConvergence);
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quadratic_unit_roots() {
        // x^2 - 1
        let roots = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)], 1e-10).unwrap();
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quartic_with_double_zero_root() {
        // E^4 + (gamma^2 - delta^2) E^2 with delta=1, gamma=0.5:
        // factorizes as E^2 (E^2 - 0.75), roots {0, 0, +-sqrt(0.75)}.
        let roots = polynomial_roots(
            &[
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.25 - 1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
            ],
            1e-10,
        )
        .unwrap();
        let e = 0.75f64.sqrt();
        assert!((roots[0] - c(-e, 0.0)).norm() < 1e-10);
        assert!(roots[1].norm() < 1e-10);
        assert!(roots[2].norm() < 1e-10);
        assert!((roots[3] - c(e, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn quartic_secular_form_has_zero_root() {
        // E^4 + (gamma^2 - delta^2 - g^2) E^2 - g delta^2 E at
        // delta=1, gamma=0.2, g=0.3: one root must be zero.
        let roots = polynomial_roots(
            &[
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.04 - 1.0 - 0.09, 0.0),
                c(-0.3, 0.0),
                c(0.0, 0.0),
            ],
            1e-10,
        )
        .unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots.iter().any(|r| r.norm() < 1e-12));
    }

    #[test]
    fn complex_conjugate_roots() {
        // (x^2 + 1)(x - 2)
        let roots = polynomial_roots(
            &[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)],
            1e-10,
        )
        .unwrap();
        assert!((roots[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((roots[1] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((roots[2] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_zero_leading_coefficient_and_high_degree() {
        assert!(matches!(
            polynomial_roots(&[c(0.0, 0.0), c(1.0, 0.0)], 1e-10),
            Err(Error::ZeroLeadingCoefficient)
        ));
        let coeffs = vec![c(1.0, 0.0); 11];
        assert!(matches!(
            polynomial_roots(&coeffs, 1e-10),
            Err(Error::UnsupportedDegree { .. })
        ));
    }
}
