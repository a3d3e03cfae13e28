//! Radius solver: finds per-vertex radii that zero the curvature at every
//! interior vertex for prescribed boundary radii, in euclidean or hyperbolic
//! geometry. Unknowns are log-radii; the iteration is a damped Newton method
//! with a monotone single-vertex relaxation fallback.

use crate::complex::{
    check_c1_c2, classify_vertices, AngleAssignment, Triangulation, VertexClass, VertexId,
};
use crate::geom::{self, Geometry, TripleConfig};
use crate::linalg;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Finite hyperbolic radius that stands in for a horocyclic boundary disk.
/// The curvature equations are continuous in this limit and the residual
/// euclidean tangency gap decays like `exp(-R_CAP)`.
pub const R_CAP: f64 = 40.0;

pub const DEFAULT_TOL_EUCLIDEAN: f64 = 1e-10;
pub const DEFAULT_TOL_HYPERBOLIC: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RadiusMarker {
    Finite,
    Horocyclic,
}

/// Per-vertex radii: euclidean lengths, or hyperbolic lengths with horocyclic
/// boundary disks carried at [`R_CAP`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiusVector {
    pub values: Vec<f64>,
    pub markers: Vec<RadiusMarker>,
}

impl RadiusVector {
    pub fn uniform(n: usize, r: f64) -> Self {
        RadiusVector { values: vec![r; n], markers: vec![RadiusMarker::Finite; n] }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundaryRadius {
    Finite(f64),
    Horocyclic,
}

/// Curvatures at the interior vertices.
#[derive(Debug, Clone)]
pub struct CurvatureVector {
    pub interior: Vec<VertexId>,
    pub values: Vec<f64>,
}

impl CurvatureVector {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    pub fn get(&self, v: VertexId) -> Option<f64> {
        self.interior.iter().position(|&w| w == v).map(|i| self.values[i])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub final_max_curvature: f64,
    pub converged: bool,
    /// Newton step scales actually taken, one entry per iteration.
    pub damping: Vec<f64>,
    pub relaxation_sweeps: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Convergence threshold on `max |K|`; geometry default when `None`.
    pub tol: Option<f64>,
    pub max_iter: usize,
    /// Warm start for the interior log-radii, full-length per vertex.
    pub initial: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: None, max_iter: DEFAULT_MAX_ITER, initial: None }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("realizability conditions fail: {0} violations")]
    ConditionsFail(usize),
    #[error("boundary radius missing for boundary vertex {0}")]
    MissingBoundary(VertexId),
    #[error("boundary radius for vertex {v} must be positive, got {value}")]
    NonPositiveBoundary { v: VertexId, value: f64 },
    #[error("horocyclic boundary requires hyperbolic geometry (vertex {0})")]
    HorocyclicInEuclidean(VertexId),
    #[error("degenerate triple in face {face:?}: {source}")]
    Degenerate { face: [VertexId; 3], source: geom::GeomError },
    #[error("geometry error: {0}")]
    Geometry(#[from] geom::GeomError),
}

fn face_triple(
    f: [VertexId; 3],
    corner: usize,
    a: &AngleAssignment,
    t: &Triangulation,
    radii: &[f64],
) -> TripleConfig {
    let v0 = f[corner];
    let v1 = f[(corner + 1) % 3];
    let v2 = f[(corner + 2) % 3];
    let th01 = a.theta[t.edge_id(v0, v1).unwrap()];
    let th02 = a.theta[t.edge_id(v0, v2).unwrap()];
    let th12 = a.theta[t.edge_id(v1, v2).unwrap()];
    TripleConfig { radii: [radii[v0], radii[v1], radii[v2]], theta: [th01, th02, th12] }
}

/// Sum of corner angles at `v` over its incident faces.
fn angle_sum_at(
    t: &Triangulation,
    a: &AngleAssignment,
    radii: &[f64],
    g: Geometry,
    v: VertexId,
) -> Result<f64, SolveError> {
    let mut sum = 0.0;
    for &fi in t.vertex_faces(v) {
        let f = t.faces()[fi];
        let corner = f.iter().position(|&x| x == v).unwrap();
        let triple = face_triple(f, corner, a, t, radii);
        let phi = geom::triple_angles(&triple, g)
            .map_err(|source| SolveError::Degenerate { face: f, source })?;
        sum += phi[0];
    }
    Ok(sum)
}

/// Curvature `K(v) = sum of corner angles at v - 2 pi` at each interior
/// vertex, using the completed angle function on the complex faces.
pub fn curvature(
    t: &Triangulation,
    a: &AngleAssignment,
    r: &RadiusVector,
    g: Geometry,
) -> Result<CurvatureVector, SolveError> {
    let classes = classify_vertices(t, a);
    let interior: Vec<VertexId> = (0..t.n_vertices())
        .filter(|&v| classes[v] == VertexClass::Interior)
        .collect();
    let mut values = Vec::with_capacity(interior.len());
    for &v in &interior {
        values.push(angle_sum_at(t, a, &r.values, g, v)? - 2.0 * std::f64::consts::PI);
    }
    Ok(CurvatureVector { interior, values })
}

/// Sparse curvature Jacobian: row per interior vertex, entries
/// `d K(v) / d log rho(w)` over neighbors `w` plus the diagonal. In euclidean
/// geometry the diagonal is minus the row sum (degree-0 homogeneity); in
/// hyperbolic geometry it comes from a finite difference.
#[derive(Debug, Clone)]
pub struct CurvatureJacobian {
    pub interior: Vec<VertexId>,
    pub index_of: Vec<Option<usize>>,
    /// Per row: `(neighbor vertex, d K / d log rho(neighbor))`.
    pub rows: Vec<Vec<(VertexId, f64)>>,
    pub diag: Vec<f64>,
}

pub fn curvature_jacobian(
    t: &Triangulation,
    a: &AngleAssignment,
    r: &RadiusVector,
    g: Geometry,
) -> Result<CurvatureJacobian, SolveError> {
    let classes = classify_vertices(t, a);
    let interior: Vec<VertexId> = (0..t.n_vertices())
        .filter(|&v| classes[v] == VertexClass::Interior)
        .collect();
    let mut index_of = vec![None; t.n_vertices()];
    for (i, &v) in interior.iter().enumerate() {
        index_of[v] = Some(i);
    }
    let mut rows: Vec<Vec<(VertexId, f64)>> = Vec::with_capacity(interior.len());
    let mut diag = Vec::with_capacity(interior.len());
    for &v in &interior {
        let mut row: Vec<(VertexId, f64)> = t.neighbors(v).iter().map(|&w| (w, 0.0)).collect();
        for &fi in t.vertex_faces(v) {
            let f = t.faces()[fi];
            let corner = f.iter().position(|&x| x == v).unwrap();
            let triple = face_triple(f, corner, a, t, &r.values);
            for k in [1usize, 2usize] {
                let w = f[(corner + k) % 3];
                let d = geom::dphi_dlogrho(&triple, 0, k, g)
                    .map_err(|source| SolveError::Degenerate { face: f, source })?;
                let slot = row.iter_mut().find(|(x, _)| *x == w).unwrap();
                slot.1 += d;
            }
        }
        let dd = match g {
            Geometry::Euclidean => -row.iter().map(|&(_, x)| x).sum::<f64>(),
            Geometry::Hyperbolic => {
                let step = 1e-6 * r.values[v].max(1.0);
                let mut hi = r.values.to_vec();
                hi[v] += step;
                let mut lo = r.values.to_vec();
                lo[v] -= step;
                let s_hi = angle_sum_at(t, a, &hi, g, v)?;
                let s_lo = angle_sum_at(t, a, &lo, g, v)?;
                r.values[v] * (s_hi - s_lo) / (2.0 * step)
            }
        };
        rows.push(row);
        diag.push(dd);
    }
    Ok(CurvatureJacobian { interior, index_of, rows, diag })
}

impl CurvatureJacobian {
    /// Applies `-J` restricted to interior unknowns (an SPD operator).
    pub fn apply_neg_interior(&self, x: &[f64], y: &mut [f64]) {
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = -self.diag[i] * x[i];
            for &(w, val) in row {
                if let Some(j) = self.index_of[w] {
                    acc -= val * x[j];
                }
            }
            y[i] = acc;
        }
    }

    pub fn to_dense_neg_interior(&self) -> Vec<Vec<f64>> {
        let n = self.interior.len();
        let mut m = vec![vec![0.0; n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            m[i][i] = -self.diag[i];
            for &(w, val) in row {
                if let Some(j) = self.index_of[w] {
                    m[i][j] -= val;
                }
            }
        }
        m
    }
}

fn resolve_boundary(
    t: &Triangulation,
    a: &AngleAssignment,
    boundary: &[Option<BoundaryRadius>],
    g: Geometry,
) -> Result<(Vec<VertexId>, RadiusVector), SolveError> {
    let classes = classify_vertices(t, a);
    let n = t.n_vertices();
    let mut values = vec![0.0; n];
    let mut markers = vec![RadiusMarker::Finite; n];
    let mut interior = Vec::new();
    let mut finite_log_sum = 0.0;
    let mut finite_count = 0usize;
    for v in 0..n {
        match classes[v] {
            VertexClass::Interior => interior.push(v),
            VertexClass::Boundary => match boundary.get(v).copied().flatten() {
                Some(BoundaryRadius::Finite(x)) => {
                    if !(x > 0.0) {
                        return Err(SolveError::NonPositiveBoundary { v, value: x });
                    }
                    values[v] = x;
                    finite_log_sum += x.ln();
                    finite_count += 1;
                }
                Some(BoundaryRadius::Horocyclic) => {
                    if g != Geometry::Hyperbolic {
                        return Err(SolveError::HorocyclicInEuclidean(v));
                    }
                    values[v] = R_CAP;
                    markers[v] = RadiusMarker::Horocyclic;
                }
                None => return Err(SolveError::MissingBoundary(v)),
            },
        }
    }
    let init = if finite_count > 0 { (finite_log_sum / finite_count as f64).exp() } else { 1.0 };
    for &v in &interior {
        values[v] = init;
    }
    Ok((interior, RadiusVector { values, markers }))
}

/// Solves the boundary-value problem: interior radii with `max |K| < tol`.
/// Non-convergence is reported through the flag, not an error.
pub fn solve(
    t: &Triangulation,
    a: &AngleAssignment,
    boundary: &[Option<BoundaryRadius>],
    g: Geometry,
    opts: &SolveOptions,
) -> Result<(RadiusVector, SolveReport), SolveError> {
    let conditions = check_c1_c2(t, a);
    if !conditions.pass() {
        return Err(SolveError::ConditionsFail(conditions.violations.len()));
    }
    let tol = opts.tol.unwrap_or(match g {
        Geometry::Euclidean => DEFAULT_TOL_EUCLIDEAN,
        Geometry::Hyperbolic => DEFAULT_TOL_HYPERBOLIC,
    });
    let (interior, mut r) = resolve_boundary(t, a, boundary, g)?;
    if let Some(init) = &opts.initial {
        for &v in &interior {
            r.values[v] = init[v];
        }
    }
    let mut report = SolveReport {
        iterations: 0,
        final_max_curvature: f64::INFINITY,
        converged: false,
        damping: Vec::new(),
        relaxation_sweeps: 0,
        tolerance: tol,
    };
    if interior.is_empty() {
        report.converged = true;
        report.final_max_curvature = 0.0;
        return Ok((r, report));
    }

    let mut k = curvature(t, a, &r, g)?;
    for iter in 0..opts.max_iter {
        let max_k = k.max_abs();
        report.final_max_curvature = max_k;
        report.iterations = iter;
        if max_k < tol {
            report.converged = true;
            return Ok((r, report));
        }
        let jac = curvature_jacobian(t, a, &r, g)?;
        let delta = newton_step(&jac, &k.values, interior.len());

        // Damped line search on max |K|.
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=30 {
            let mut trial = r.clone();
            for (i, &v) in interior.iter().enumerate() {
                trial.values[v] = r.values[v] * (scale * delta[i]).exp();
            }
            match curvature(t, a, &trial, g) {
                Ok(k_trial) if k_trial.max_abs() < max_k => {
                    r = trial;
                    k = k_trial;
                    report.damping.push(scale);
                    accepted = true;
                    break;
                }
                _ => scale *= 0.5,
            }
        }
        if !accepted {
            // Monotone relaxation: solve K(v) = 0 in each vertex's own radius.
            relaxation_sweep(t, a, &mut r, g, &interior)?;
            report.relaxation_sweeps += 1;
            report.damping.push(0.0);
            k = curvature(t, a, &r, g)?;
        }
    }
    report.final_max_curvature = curvature(t, a, &r, g)?.max_abs();
    report.converged = report.final_max_curvature < tol;
    report.iterations = opts.max_iter;
    Ok((r, report))
}

/// Newton direction `delta` with `J delta = -K`, via CG on `-J` (dense LU for
/// small systems).
fn newton_step(jac: &CurvatureJacobian, k: &[f64], n: usize) -> Vec<f64> {
    if n <= 96 {
        if let Some(sol) = linalg::solve_dense(jac.to_dense_neg_interior(), k.to_vec()) {
            return sol;
        }
    }
    let diag: Vec<f64> = jac.diag.iter().map(|&d| (-d).max(1e-12)).collect();
    let (sol, _, _) = linalg::conjugate_gradient(
        |x, y| jac.apply_neg_interior(x, y),
        k,
        None,
        Some(&diag),
        1e-12,
        10 * n + 200,
    );
    sol
}

fn relaxation_sweep(
    t: &Triangulation,
    a: &AngleAssignment,
    r: &mut RadiusVector,
    g: Geometry,
    interior: &[VertexId],
) -> Result<(), SolveError> {
    let target = 2.0 * std::f64::consts::PI;
    for &v in interior {
        // K(v) is strictly decreasing in the vertex's own radius.
        let eval = |rv: f64, r: &RadiusVector, t, a, g| {
            let mut vals = r.values.clone();
            vals[v] = rv;
            angle_sum_at(t, a, &vals, g, v)
        };
        let mut lo = r.values[v];
        let mut hi = r.values[v];
        let mut k_lo = eval(lo, r, t, a, g)? - target;
        let mut k_hi = k_lo;
        for _ in 0..60 {
            if k_lo > 0.0 {
                break;
            }
            lo *= 0.5;
            k_lo = eval(lo, r, t, a, g)? - target;
        }
        for _ in 0..60 {
            if k_hi < 0.0 {
                break;
            }
            hi *= 2.0;
            k_hi = eval(hi, r, t, a, g)? - target;
        }
        if !(k_lo > 0.0 && k_hi < 0.0) {
            continue; // insensitive vertex; leave it to the Newton phase
        }
        for _ in 0..80 {
            let mid = (lo * hi).sqrt();
            let k_mid = eval(mid, r, t, a, g)? - target;
            if k_mid > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        r.values[v] = (lo * hi).sqrt();
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremumWitness {
    pub value: f64,
    pub vertex: VertexId,
    pub on_boundary: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxPrincipleReport {
    pub max: ExtremumWitness,
    pub min: ExtremumWitness,
    pub pass: bool,
}

/// Checks that the extrema of `r2(v) / r1(v)` over all vertices are attained
/// at boundary vertices (within 1e-12 relative slack).
pub fn max_principle_check(
    t: &Triangulation,
    a: &AngleAssignment,
    r1: &RadiusVector,
    r2: &RadiusVector,
) -> MaxPrincipleReport {
    let classes = classify_vertices(t, a);
    let ratio: Vec<f64> = r1.values.iter().zip(&r2.values).map(|(&x, &y)| y / x).collect();
    let mut max = (f64::NEG_INFINITY, 0usize);
    let mut min = (f64::INFINITY, 0usize);
    for (v, &q) in ratio.iter().enumerate() {
        if q > max.0 {
            max = (q, v);
        }
        if q < min.0 {
            min = (q, v);
        }
    }
    let attained_on_boundary = |target: f64| {
        (0..t.n_vertices()).any(|v| {
            classes[v] == VertexClass::Boundary && (ratio[v] - target).abs() <= 1e-12 * target.abs()
        })
    };
    let max_ok = attained_on_boundary(max.0);
    let min_ok = attained_on_boundary(min.0);
    MaxPrincipleReport {
        max: ExtremumWitness {
            value: max.0,
            vertex: max.1,
            on_boundary: classes[max.1] == VertexClass::Boundary,
        },
        min: ExtremumWitness {
            value: min.0,
            vertex: min.1,
            on_boundary: classes[min.1] == VertexClass::Boundary,
        },
        pass: max_ok && min_ok,
    }
}

/// Convenience: constant finite boundary data.
pub fn boundary_constant(t: &Triangulation, r: f64) -> Vec<Option<BoundaryRadius>> {
    (0..t.n_vertices())
        .map(|v| t.is_boundary_vertex(v).then_some(BoundaryRadius::Finite(r)))
        .collect()
}

/// Convenience: all-horocyclic boundary data.
pub fn boundary_horocyclic(t: &Triangulation) -> Vec<Option<BoundaryRadius>> {
    (0..t.n_vertices())
        .map(|v| t.is_boundary_vertex(v).then_some(BoundaryRadius::Horocyclic))
        .collect()
}
