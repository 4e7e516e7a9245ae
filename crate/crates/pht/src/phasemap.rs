//! Phase classification over (gamma, g) parameter grids and bisection
//! refinement of exceptional-point boundary lines.

use crate::error::{Error, Result};
use crate::linalg::{classify_spectrum, eigendecompose, ComplexMatrix, SpectralTag};
use crate::models::{
    qubit_array_hamiltonian, single_qubit_hamiltonian, QubitArrayParams, SingleQubitParams,
};

/// Phase of one grid point. `Exceptional` marks points where the
/// eigendecomposition was numerically defective (on a boundary); such
/// markers are recorded, not fatal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseLabel {
    Unbroken,
    Broken,
    Exceptional,
}

/// Classified grid point.
#[derive(Clone, Debug)]
pub struct PhasePoint {
    pub gamma: f64,
    pub g: f64,
    pub label: PhaseLabel,
    pub n_complex_pairs: usize,
    /// Indices of the eigenvalues belonging to complex pairs.
    pub which_levels: Vec<usize>,
}

/// Model family scanned over (gamma, g); the scan overrides the swept
/// parameters point by point.
#[derive(Clone, Debug)]
pub enum ModelTemplate {
    /// g is ignored.
    SingleQubit(SingleQubitParams),
    QubitArray(QubitArrayParams),
}

impl ModelTemplate {
    pub fn build(&self, gamma: f64, g: f64) -> Result<ComplexMatrix> {
        match self {
            ModelTemplate::SingleQubit(p) => {
                let p = SingleQubitParams::new(p.delta, gamma)?;
                Ok(single_qubit_hamiltonian(&p))
            }
            ModelTemplate::QubitArray(p) => {
                let mut q = *p;
                q.gamma = gamma;
                q.g = g;
                qubit_array_hamiltonian(&q)
            }
        }
    }
}

/// Classifies one Hamiltonian: `Broken` iff the spectrum has at least one
/// conjugate pair with `|Im E| > tol`; a defective decomposition is
/// reported as `Exceptional`.
pub fn classify_phase(h: &ComplexMatrix, tol: f64) -> Result<(PhaseLabel, usize, Vec<usize>)> {
    let es = match eigendecompose(h, tol) {
        Ok(es) => es,
        Err(Error::DefectiveMatrix { .. }) => return Ok((PhaseLabel::Exceptional, 0, Vec::new())),
        Err(e) => return Err(e),
    };
    let cls = classify_spectrum(&es, tol)?;
    let which: Vec<usize> = es
        .tags()
        .iter()
        .enumerate()
        .filter(|(_, t)| !matches!(t, SpectralTag::Real))
        .map(|(i, _)| i)
        .collect();
    let label = if cls.n_pairs >= 1 {
        PhaseLabel::Broken
    } else {
        PhaseLabel::Unbroken
    };
    Ok((label, cls.n_pairs, which))
}

/// One refined boundary vertex with the final bisection bracket width.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryVertex {
    pub gamma: f64,
    pub g: f64,
    pub bracket_width: f64,
}

/// A chained exceptional line in (gamma, g) space.
#[derive(Clone, Debug)]
pub struct Polyline {
    pub id: usize,
    pub vertices: Vec<BoundaryVertex>,
}

/// Classified grid with optional refined boundary polylines.
#[derive(Clone, Debug)]
pub struct PhaseDiagram {
    template: ModelTemplate,
    tol: f64,
    gamma_axis: Vec<f64>,
    g_axis: Vec<f64>,
    /// Row-major: index = gi * g_axis.len() + gj.
    points: Vec<PhasePoint>,
    boundaries: Vec<Polyline>,
}

impl PhaseDiagram {
    pub fn gamma_axis(&self) -> &[f64] {
        &self.gamma_axis
    }

    pub fn g_axis(&self) -> &[f64] {
        &self.g_axis
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn point(&self, gi: usize, gj: usize) -> &PhasePoint {
        &self.points[gi * self.g_axis.len() + gj]
    }

    pub fn boundaries(&self) -> &[Polyline] {
        &self.boundaries
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn template(&self) -> &ModelTemplate {
        &self.template
    }
}

fn validate_axis(axis: &[f64], name: &str) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::InvalidInput(format!("{name} axis must be nonempty")));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(format!(
            "{name} axis must be strictly increasing"
        )));
    }
    Ok(())
}

/// Classifies every (gamma, g) grid point. Deterministic for fixed
/// inputs; grid points are independent (evaluation order does not affect
/// the result).
pub fn scan(
    template: ModelTemplate,
    gamma_axis: Vec<f64>,
    g_axis: Vec<f64>,
    tol: f64,
) -> Result<PhaseDiagram> {
    validate_axis(&gamma_axis, "gamma")?;
    validate_axis(&g_axis, "g")?;
    let mut points = Vec::with_capacity(gamma_axis.len() * g_axis.len());
    for &gamma in &gamma_axis {
        for &g in &g_axis {
            let h = template.build(gamma, g)?;
            let (label, n_pairs, which) = classify_phase(&h, tol)?;
            points.push(PhasePoint {
                gamma,
                g,
                label,
                n_complex_pairs: n_pairs,
                which_levels: which,
            });
        }
    }
    Ok(PhaseDiagram {
        template,
        tol,
        gamma_axis,
        g_axis,
        points,
        boundaries: Vec::new(),
    })
}

/// Treats exceptional markers as the broken side for bracketing: they sit
/// on the boundary itself.
fn is_broken_side(label: PhaseLabel) -> bool {
    !matches!(label, PhaseLabel::Unbroken)
}

fn bisect(
    template: &ModelTemplate,
    tol: f64,
    mut a: (f64, f64),
    mut b: (f64, f64),
    a_broken: bool,
    bisect_tol: f64,
) -> Result<BoundaryVertex> {
    let width = |a: (f64, f64), b: (f64, f64)| ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
    while width(a, b) > bisect_tol {
        let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        let h = template.build(mid.0, mid.1)?;
        let (label, _, _) = classify_phase(&h, tol)?;
        if label == PhaseLabel::Exceptional {
            // Landed on the boundary itself; collapse the bracket.
            return Ok(BoundaryVertex {
                gamma: mid.0,
                g: mid.1,
                bracket_width: width(a, b) / 2.0,
            });
        }
        if is_broken_side(label) == a_broken {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(BoundaryVertex {
        gamma: (a.0 + b.0) / 2.0,
        g: (a.1 + b.1) / 2.0,
        bracket_width: width(a, b),
    })
}

/// Refines every grid edge whose endpoints carry opposite labels by
/// bisection along the edge until the bracket is narrower than
/// `bisect_tol`, then chains the vertices into polylines by grid-cell
/// adjacency.
pub fn refine_boundary(pd: &PhaseDiagram, bisect_tol: f64) -> Result<PhaseDiagram> {
    if !(bisect_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bisect_tol must be positive, got {bisect_tol}"
        )));
    }
    let (ng, nj) = (pd.gamma_axis.len(), pd.g_axis.len());
    // Vertex list plus, per vertex, the grid cells its parent edge borders.
    let mut vertices: Vec<BoundaryVertex> = Vec::new();
    let mut vertex_cells: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut handle_edge = |pd: &PhaseDiagram,
                           a_idx: (usize, usize),
                           b_idx: (usize, usize),
                           vertices: &mut Vec<BoundaryVertex>,
                           vertex_cells: &mut Vec<Vec<(usize, usize)>>|
     -> Result<()> {
        let pa = pd.point(a_idx.0, a_idx.1);
        let pb = pd.point(b_idx.0, b_idx.1);
        let a_broken = is_broken_side(pa.label);
        if a_broken == is_broken_side(pb.label) {
            return Ok(());
        }
        let v = bisect(
            &pd.template,
            pd.tol,
            (pa.gamma, pa.g),
            (pb.gamma, pb.g),
            a_broken,
            bisect_tol,
        )?;
        // Cells bordering this edge (clamped at the grid rim).
        let mut cells = Vec::new();
        if a_idx.0 == b_idx.0 {
            // g-direction edge inside row a_idx.0; cells above/below.
            let col = a_idx.1.min(b_idx.1);
            if a_idx.0 > 0 {
                cells.push((a_idx.0 - 1, col));
            }
            if a_idx.0 + 1 < ng {
                cells.push((a_idx.0, col));
            }
        } else {
            let row = a_idx.0.min(b_idx.0);
            if a_idx.1 > 0 {
                cells.push((row, a_idx.1 - 1));
            }
            if a_idx.1 + 1 < nj {
                cells.push((row, a_idx.1));
            }
        }
        vertices.push(v);
        vertex_cells.push(cells);
        Ok(())
    };
    for gi in 0..ng {
        for gj in 0..nj {
            if gj + 1 < nj {
                handle_edge(pd, (gi, gj), (gi, gj + 1), &mut vertices, &mut vertex_cells)?;
            }
            if gi + 1 < ng {
                handle_edge(pd, (gi, gj), (gi + 1, gj), &mut vertices, &mut vertex_cells)?;
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::NoBoundary);
    }
    // Chain vertices sharing a grid cell into polylines.
    let n = vertices.len();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if vertex_cells[i].iter().any(|c| vertex_cells[j].contains(c)) {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    // Prefer chain endpoints (degree <= 1) as traversal starts so open
    // lines come out end to end; loops start anywhere.
    let mut starts: Vec<usize> = (0..n).filter(|&i| adjacency[i].len() <= 1).collect();
    starts.extend(0..n);
    let mut visited = vec![false; n];
    let mut boundaries = Vec::new();
    for start in starts {
        if visited[start] {
            continue;
        }
        let mut path = vec![start];
        visited[start] = true;
        let mut head = start;
        while let Some(j) = adjacency[head].iter().copied().find(|&j| !visited[j]) {
            visited[j] = true;
            path.push(j);
            head = j;
        }
        boundaries.push(Polyline {
            id: boundaries.len(),
            vertices: path.into_iter().map(|i| vertices[i]).collect(),
        });
    }
    Ok(PhaseDiagram {
        template: pd.template.clone(),
        tol: pd.tol,
        gamma_axis: pd.gamma_axis.clone(),
        g_axis: pd.g_axis.clone(),
        points: pd.points.clone(),
        boundaries,
    })
}
