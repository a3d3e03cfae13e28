//! Resistor networks of solved patterns: edge conductances from the curvature
//! derivative, the discrete Laplacian, Dirichlet solves, effective resistance,
//! and the resistance growth trace over exhaustions.

use crate::complex::{
    detect_reducible_edges, exhaustion, AngleAssignment, Triangulation, VertexId,
};
use crate::geom::{self, cx, Geometry};
use crate::layout::PlacedPattern;
use crate::linalg;
use crate::solver::{self, RadiusVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("pattern is not solved: max |K| = {0}")]
    Unsolved(f64),
    #[error("vertex {0} has no positive-conductance path to the boundary set")]
    Disconnected(VertexId),
    #[error("vertex sets must be nonvoid and disjoint")]
    BadSets,
    #[error("solver error: {0}")]
    Solve(#[from] solver::SolveError),
    #[error("linear solve stalled at relative residual {0}")]
    LinearSolve(f64),
}

/// Edge conductances over a graph. Zero-conductance edges stay in the
/// structure for reducibility bookkeeping but are skipped by the Laplacian.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResistorNetwork {
    pub n_vertices: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub mu: Vec<f64>,
    /// Adjacency into `edges`: `(neighbor, edge index)`.
    pub adj: Vec<Vec<(VertexId, usize)>>,
}

impl ResistorNetwork {
    pub fn from_edges(n_vertices: usize, edges: Vec<(VertexId, VertexId)>, mu: Vec<f64>) -> Self {
        assert_eq!(edges.len(), mu.len());
        let mut adj = vec![Vec::new(); n_vertices];
        for (e, &(u, w)) in edges.iter().enumerate() {
            adj[u].push((w, e));
            adj[w].push((u, e));
        }
        ResistorNetwork { n_vertices, edges, mu, adj }
    }

    /// Sum of conductances of the edges at `v`.
    pub fn vertex_conductance_sum(&self, v: VertexId) -> f64 {
        self.adj[v].iter().map(|&(_, e)| self.mu[e]).sum()
    }

    /// Edges with positive conductance.
    pub fn reduced_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.mu[e] > 0.0).collect()
    }

    /// True when the positive-conductance subgraph connects all vertices.
    pub fn reduced_is_connected(&self) -> bool {
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, e) in &self.adj[v] {
                if self.mu[e] > 0.0 && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n_vertices
    }
}

/// Builds the conductance network of a solved euclidean pattern: each edge's
/// conductance is the sum of the angle derivatives contributed by its one or
/// two incident faces. Reducible edges come out exactly zero.
pub fn conductances(
    t: &Triangulation,
    a: &AngleAssignment,
    r: &RadiusVector,
    g: Geometry,
) -> Result<ResistorNetwork, NetworkError> {
    assert_eq!(g, Geometry::Euclidean, "conductances are defined for euclidean patterns");
    let k = solver::curvature(t, a, r, g)?;
    let res = k.max_abs();
    if res > 1e-6 {
        return Err(NetworkError::Unsolved(res));
    }
    let reducible = detect_reducible_edges(t, a);
    let mut mu = vec![0.0; t.n_edges()];
    for (e, &(u, w)) in t.edges().iter().enumerate() {
        if reducible[e] {
            continue; // exactly zero by the reducibility identity
        }
        let mut total = 0.0;
        for &fi in t.edge_faces(e) {
            let f = t.faces()[fi];
            let cu = f.iter().position(|&x| x == u).unwrap();
            let other = f.iter().position(|&x| x == w).unwrap();
            let third = 3 - cu - other;
            let triple = geom::TripleConfig {
                radii: [r.values[u], r.values[w], r.values[f[third]]],
                theta: [
                    a.theta[t.edge_id(u, w).unwrap()],
                    a.theta[t.edge_id(u, f[third]).unwrap()],
                    a.theta[t.edge_id(w, f[third]).unwrap()],
                ],
            };
            total += geom::dphi_dlogrho(&triple, 0, 1, Geometry::Euclidean)
                .map_err(solver::SolveError::Geometry)?;
        }
        mu[e] = total;
    }
    Ok(ResistorNetwork::from_edges(t.n_vertices(), t.edges().to_vec(), mu))
}

/// Geometric cross-check of one interior edge's conductance: the ratio of the
/// dual-center segment to the edge segment, from placed circles.
pub fn conductance_geometric(
    p: &PlacedPattern,
    t: &Triangulation,
    e: usize,
) -> Option<f64> {
    let (u, w) = t.edges()[e];
    let fs = t.edge_faces(e);
    if fs.len() != 2 {
        return None;
    }
    let mut duals = Vec::with_capacity(2);
    for &fi in fs {
        let f = t.faces()[fi];
        duals.push(radical_center_of_circles(
            [p.centers[f[0]], p.centers[f[1]], p.centers[f[2]]],
            [p.radii[f[0]], p.radii[f[1]], p.radii[f[2]]],
        )?);
    }
    let seg = cx::abs(cx::sub(p.centers[u], p.centers[w]));
    Some(cx::abs(cx::sub(duals[0], duals[1])) / seg)
}

/// Center of the circle orthogonal to three placed circles (the radical
/// center), from the pairwise equal-power conditions.
fn radical_center_of_circles(c: [[f64; 2]; 3], r: [f64; 3]) -> Option<[f64; 2]> {
    let p = |k: usize| c[k][0] * c[k][0] + c[k][1] * c[k][1] - r[k] * r[k];
    let a11 = 2.0 * (c[1][0] - c[0][0]);
    let a12 = 2.0 * (c[1][1] - c[0][1]);
    let a21 = 2.0 * (c[2][0] - c[0][0]);
    let a22 = 2.0 * (c[2][1] - c[0][1]);
    let b1 = p(1) - p(0);
    let b2 = p(2) - p(0);
    let det = a11 * a22 - a12 * a21;
    if det.abs() < 1e-30 {
        return None;
    }
    Some([(b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det])
}

/// Weighted Laplacian at one vertex: `sum mu(v, w) (h(w) - h(v))`.
pub fn laplacian_apply(n: &ResistorNetwork, h: &[f64], v: VertexId) -> f64 {
    n.adj[v]
        .iter()
        .filter(|&&(_, e)| n.mu[e] > 0.0)
        .map(|&(w, e)| n.mu[e] * (h[w] - h[v]))
        .sum()
}

/// Solves the Dirichlet problem: `h` equals the given values on the boundary
/// set and is harmonic at every other vertex. Boundary is `(vertex, value)`.
pub fn solve_dirichlet(
    net: &ResistorNetwork,
    boundary: &[(VertexId, f64)],
    rel_residual: f64,
) -> Result<Vec<f64>, NetworkError> {
    if boundary.is_empty() {
        return Err(NetworkError::BadSets);
    }
    let n = net.n_vertices;
    let mut fixed = vec![None; n];
    for &(v, val) in boundary {
        fixed[v] = Some(val);
    }
    let free: Vec<VertexId> = (0..n).filter(|&v| fixed[v].is_none()).collect();
    let mut index_of = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        index_of[v] = i;
    }
    // Every free vertex needs a positive-conductance route to the boundary.
    {
        let mut seen: Vec<bool> = fixed.iter().map(|f| f.is_some()).collect();
        let mut stack: Vec<VertexId> = (0..n).filter(|&v| seen[v]).collect();
        while let Some(v) = stack.pop() {
            for &(w, e) in &net.adj[v] {
                if net.mu[e] > 0.0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if let Some(&v) = free.iter().find(|&&v| !seen[v]) {
            return Err(NetworkError::Disconnected(v));
        }
    }
    if free.is_empty() {
        let mut h = vec![0.0; n];
        for v in 0..n {
            h[v] = fixed[v].unwrap();
        }
        return Ok(h);
    }
    // SPD system: (D - A) x = rhs from the fixed values.
    let mut rhs = vec![0.0; free.len()];
    let mut diag = vec![0.0; free.len()];
    for (i, &v) in free.iter().enumerate() {
        for &(w, e) in &net.adj[v] {
            if net.mu[e] <= 0.0 {
                continue;
            }
            diag[i] += net.mu[e];
            if let Some(val) = fixed[w] {
                rhs[i] += net.mu[e] * val;
            }
        }
    }
    let apply = |x: &[f64], y: &mut [f64]| {
        for (i, &v) in free.iter().enumerate() {
            let mut acc = diag[i] * x[i];
            for &(w, e) in &net.adj[v] {
                if net.mu[e] > 0.0 && index_of[w] != usize::MAX {
                    acc -= net.mu[e] * x[index_of[w]];
                }
            }
            y[i] = acc;
        }
    };
    let (x, _, res) = linalg::conjugate_gradient(
        apply,
        &rhs,
        None,
        Some(&diag),
        rel_residual,
        20 * free.len() + 500,
    );
    if res > rel_residual * 10.0 {
        return Err(NetworkError::LinearSolve(res));
    }
    let mut h = vec![0.0; n];
    for v in 0..n {
        h[v] = match fixed[v] {
            Some(val) => val,
            None => x[index_of[v]],
        };
    }
    Ok(h)
}

/// Effective resistance between two vertex sets, or the infinite tag when the
/// reduced graph does not connect them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Resistance {
    Finite(f64),
    Infinite,
}

impl Resistance {
    pub fn finite(self) -> Option<f64> {
        match self {
            Resistance::Finite(x) => Some(x),
            Resistance::Infinite => None,
        }
    }
}

/// Dirichlet energy of a potential.
pub fn dirichlet_energy(net: &ResistorNetwork, h: &[f64]) -> f64 {
    net.edges
        .iter()
        .zip(&net.mu)
        .map(|(&(u, w), &m)| m * (h[u] - h[w]) * (h[u] - h[w]))
        .sum()
}

/// Effective resistance between `v1` and `v2`: the reciprocal of the Dirichlet
/// energy of the harmonic potential with values 0 on `v1` and 1 on `v2`.
pub fn effective_resistance(
    net: &ResistorNetwork,
    v1: &[VertexId],
    v2: &[VertexId],
) -> Result<Resistance, NetworkError> {
    if v1.is_empty() || v2.is_empty() || v1.iter().any(|v| v2.contains(v)) {
        return Err(NetworkError::BadSets);
    }
    // Connectivity in the reduced graph.
    let mut seen = vec![false; net.n_vertices];
    let mut stack: Vec<VertexId> = v1.to_vec();
    for &v in v1 {
        seen[v] = true;
    }
    let mut reached = false;
    while let Some(v) = stack.pop() {
        if v2.contains(&v) {
            reached = true;
            break;
        }
        for &(w, e) in &net.adj[v] {
            if net.mu[e] > 0.0 && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if !reached {
        return Ok(Resistance::Infinite);
    }
    let mut boundary: Vec<(VertexId, f64)> = v1.iter().map(|&v| (v, 0.0)).collect();
    boundary.extend(v2.iter().map(|&v| (v, 1.0)));
    // Strip vertices with no reduced route to the boundary before solving.
    let h = solve_dirichlet_ignoring_stranded(net, &boundary)?;
    let cond = dirichlet_energy(net, &h);
    Ok(Resistance::Finite(1.0 / cond))
}

fn solve_dirichlet_ignoring_stranded(
    net: &ResistorNetwork,
    boundary: &[(VertexId, f64)],
) -> Result<Vec<f64>, NetworkError> {
    match solve_dirichlet(net, boundary, 1e-12) {
        Ok(h) => Ok(h),
        Err(NetworkError::Disconnected(_)) => {
            // Pin stranded vertices at 0; they carry no current.
            let mut seen: Vec<bool> = vec![false; net.n_vertices];
            let mut stack: Vec<VertexId> = boundary.iter().map(|&(v, _)| v).collect();
            for &(v, _) in boundary {
                seen[v] = true;
            }
            while let Some(v) = stack.pop() {
                for &(w, e) in &net.adj[v] {
                    if net.mu[e] > 0.0 && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            let mut full: Vec<(VertexId, f64)> = boundary.to_vec();
            for v in 0..net.n_vertices {
                if !seen[v] {
                    full.push((v, 0.0));
                }
            }
            solve_dirichlet(net, &full, 1e-12)
        }
        Err(e) => Err(e),
    }
}

/// Resistance growth trace `RES({v0}, ring_k)` over nested exhaustion terms of
/// a network. Verdicts belong to the extremal-length classifier; this returns
/// the raw monotone trace.
pub fn recurrence_probe(
    t: &Triangulation,
    a: &AngleAssignment,
    net: &ResistorNetwork,
    v0: VertexId,
    depth: usize,
) -> Result<Vec<f64>, NetworkError> {
    let ex = exhaustion(t, a, v0, depth).map_err(|_| NetworkError::BadSets)?;
    let mut trace = Vec::new();
    for term in &ex.terms {
        // Network restricted to the term.
        let mut sub_edges = Vec::new();
        let mut sub_mu = Vec::new();
        let mut to_sub = vec![usize::MAX; t.n_vertices()];
        for (i, &v) in term.vertex_map.iter().enumerate() {
            to_sub[v] = i;
        }
        for (e, &(u, w)) in net.edges.iter().enumerate() {
            if to_sub[u] != usize::MAX && to_sub[w] != usize::MAX {
                sub_edges.push((to_sub[u], to_sub[w]));
                sub_mu.push(net.mu[e]);
            }
        }
        let sub = ResistorNetwork::from_edges(term.vertex_map.len(), sub_edges, sub_mu);
        let frontier: Vec<VertexId> = term
            .tri
            .boundary_cycles()
            .iter()
            .flatten()
            .copied()
            .collect();
        let v0_sub = to_sub[v0];
        if frontier.contains(&v0_sub) {
            continue;
        }
        match effective_resistance(&sub, &[v0_sub], &frontier)? {
            Resistance::Finite(r) => trace.push(r),
            Resistance::Infinite => break,
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{classify_vertices, complete_to_g_tilde, VertexClass};
    use crate::generators;
    use crate::layout::layout;
    use crate::solver::{boundary_constant, solve, SolveOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solved_hex(depth: usize) -> (Triangulation, AngleAssignment, RadiusVector) {
        let (t, a) = generators::hex_ball(depth);
        let opts = SolveOptions { tol: Some(1e-12), ..Default::default() };
        let (r, rep) =
            solve(&t, &a, &boundary_constant(&t, 1.0), Geometry::Euclidean, &opts).unwrap();
        assert!(rep.converged);
        (t, a, r)
    }

    #[test]
    fn hex_interior_edges_have_conductance_one_over_sqrt3() {
        let (t, a, r) = solved_hex(2);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let expect = 1.0 / 3f64.sqrt();
        for (e, &(u, w)) in t.edges().iter().enumerate() {
            if t.edge_faces(e).len() == 2 {
                assert!((net.mu[e] - expect).abs() < 1e-10, "edge ({u},{w}): {}", net.mu[e]);
            }
        }
        assert!(net.reduced_is_connected());
    }

    #[test]
    fn geometric_conductance_cross_check() {
        let (t, a, r) = solved_hex(2);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let p = layout(&t, &a, &r, Geometry::Euclidean).unwrap();
        for e in 0..t.n_edges() {
            if let Some(geomu) = conductance_geometric(&p, &t, e) {
                assert!((geomu - net.mu[e]).abs() < 1e-8, "edge {e}: {geomu} vs {}", net.mu[e]);
            }
        }
    }

    #[test]
    fn reducible_edges_carry_zero_conductance() {
        let (t, a) = generators::square_grid_ball(2);
        let a = complete_to_g_tilde(&t, &a).unwrap();
        let r0 = 0.5f64.sqrt();
        let opts = SolveOptions { tol: Some(1e-12), ..Default::default() };
        let (r, _) = solve(&t, &a, &boundary_constant(&t, r0), Geometry::Euclidean, &opts).unwrap();
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let reducible = detect_reducible_edges(&t, &a);
        for e in 0..t.n_edges() {
            if reducible[e] {
                assert_eq!(net.mu[e], 0.0);
            } else {
                assert!(net.mu[e] > 0.0);
            }
        }
    }

    #[test]
    fn conductance_sums_bounded_by_8pi() {
        let (t, a, r) = solved_hex(3);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let classes = classify_vertices(&t, &a);
        for v in 0..t.n_vertices() {
            if classes[v] == VertexClass::Interior {
                let s = net.vertex_conductance_sum(v);
                assert!(s <= 8.0 * std::f64::consts::PI, "sum at {v} is {s}");
            }
        }
    }

    #[test]
    fn laplacian_of_constants_vanishes() {
        let (t, a, r) = solved_hex(2);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let h = vec![3.25; net.n_vertices];
        for v in 0..net.n_vertices {
            assert!(laplacian_apply(&net, &h, v).abs() < 1e-12);
        }
        // One-hot neighbor: Laplacian equals the edge conductance.
        let mut h = vec![0.0; net.n_vertices];
        let w = t.neighbors(0)[0];
        h[w] = 1.0;
        let val = laplacian_apply(&net, &h, 0);
        assert!((val - 1.0 / 3f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn laplacian_is_self_adjoint() {
        let (t, a, r) = solved_hex(2);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let f: Vec<f64> = (0..net.n_vertices).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g: Vec<f64> = (0..net.n_vertices).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lhs: f64 = (0..net.n_vertices).map(|v| f[v] * laplacian_apply(&net, &g, v)).sum();
        let rhs: f64 = (0..net.n_vertices).map(|v| g[v] * laplacian_apply(&net, &f, v)).sum();
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn dirichlet_on_path_graph() {
        let net = ResistorNetwork::from_edges(4, vec![(0, 1), (1, 2), (2, 3)], vec![1.0; 3]);
        let h = solve_dirichlet(&net, &[(0, 0.0), (3, 1.0)], 1e-12).unwrap();
        assert!((h[1] - 1.0 / 3.0).abs() < 1e-10);
        assert!((h[2] - 2.0 / 3.0).abs() < 1e-10);
        // Defining property: residual at free vertices.
        for v in [1, 2] {
            assert!(laplacian_apply(&net, &h, v).abs() < 1e-10);
        }
        // Constant boundary forces a constant solution.
        let hc = solve_dirichlet(&net, &[(0, 2.0), (3, 2.0)], 1e-12).unwrap();
        for v in 0..4 {
            assert!((hc[v] - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dirichlet_extrema_sit_on_the_boundary_set() {
        let (t, a, r) = solved_hex(3);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let boundary: Vec<(VertexId, f64)> = t
            .boundary_vertices()
            .into_iter()
            .map(|v| (v, rng.gen_range(-1.0..1.0)))
            .collect();
        let h = solve_dirichlet(&net, &boundary, 1e-12).unwrap();
        let bmax = boundary.iter().map(|&(_, x)| x).fold(f64::MIN, f64::max);
        let bmin = boundary.iter().map(|&(_, x)| x).fold(f64::MAX, f64::min);
        for v in 0..net.n_vertices {
            assert!(h[v] <= bmax + 1e-10 && h[v] >= bmin - 1e-10);
        }
    }

    #[test]
    fn harmonic_solution_is_unique() {
        let (t, a, r) = solved_hex(2);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let boundary: Vec<(VertexId, f64)> = t
            .boundary_vertices()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, (i as f64 * 0.7).sin()))
            .collect();
        let h1 = solve_dirichlet(&net, &boundary, 1e-12).unwrap();
        let h2 = solve_dirichlet(&net, &boundary, 1e-13).unwrap();
        for v in 0..net.n_vertices {
            assert!((h1[v] - h2[v]).abs() < 1e-10);
        }
    }

    #[test]
    fn series_and_triangle_resistances() {
        let series = ResistorNetwork::from_edges(3, vec![(0, 1), (1, 2)], vec![1.0; 2]);
        let r = effective_resistance(&series, &[0], &[2]).unwrap().finite().unwrap();
        assert!((r - 2.0).abs() < 1e-10);

        let tri =
            ResistorNetwork::from_edges(3, vec![(0, 1), (1, 2), (0, 2)], vec![1.0; 3]);
        let r = effective_resistance(&tri, &[0], &[1]).unwrap().finite().unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn disconnected_sets_give_infinite_resistance() {
        let net = ResistorNetwork::from_edges(4, vec![(0, 1), (2, 3)], vec![1.0; 2]);
        assert_eq!(effective_resistance(&net, &[0], &[3]).unwrap(), Resistance::Infinite);
    }

    #[test]
    fn rayleigh_monotonicity() {
        let (t, a, r) = solved_hex(2);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let v2 = t.boundary_vertices();
        let base = effective_resistance(&net, &[0], &v2).unwrap().finite().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let mut net2 = net.clone();
            let e = rng.gen_range(0..net2.mu.len());
            net2.mu[e] *= 1.0 + rng.gen_range(0.0..1.0);
            let r2 = effective_resistance(&net2, &[0], &v2).unwrap().finite().unwrap();
            assert!(r2 <= base + 1e-12, "raising mu[{e}] raised RES: {r2} > {base}");
        }
    }

    #[test]
    fn green_identity_energy_equals_boundary_flux() {
        let (t, a, r) = solved_hex(2);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let v2 = t.boundary_vertices();
        let mut boundary: Vec<(VertexId, f64)> = vec![(0, 0.0)];
        boundary.extend(v2.iter().map(|&v| (v, 1.0)));
        let h = solve_dirichlet(&net, &boundary, 1e-13).unwrap();
        let energy = dirichlet_energy(&net, &h);
        let flux: f64 = v2.iter().map(|&v| -laplacian_apply(&net, &h, v)).sum();
        assert!((energy - flux).abs() < 1e-9, "energy {energy} vs flux {flux}");
    }

    #[test]
    fn hex_resistance_trace_grows_like_log() {
        let (t, a, r) = solved_hex(8);
        let net = conductances(&t, &a, &r, Geometry::Euclidean).unwrap();
        let trace = recurrence_probe(&t, &a, &net, 0, 8).unwrap();
        assert!(trace.len() >= 7);
        for k in 1..trace.len() {
            assert!(trace[k] >= trace[k - 1] - 1e-12, "trace must be monotone");
        }
        // Log-like growth: late increments stay within a band of the ratio
        // predicted by ring sizes, and the trace keeps growing.
        let last = trace[trace.len() - 1] - trace[trace.len() - 2];
        assert!(last > 1e-3, "increments should not vanish on the hex lattice");
    }

    #[test]
    fn degree7_unit_network_trace_is_cauchy() {
        let (t, a) = generators::degree7_ball(7);
        let net =
            ResistorNetwork::from_edges(t.n_vertices(), t.edges().to_vec(), vec![1.0; t.n_edges()]);
        let trace = recurrence_probe(&t, &a, &net, 0, 7).unwrap();
        assert!(trace.len() >= 6);
        let k = trace.len();
        assert!(trace[k - 1] - trace[k - 2] < 1e-3, "increments must shrink");
    }
}
