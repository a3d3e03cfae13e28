//! Combinatorial substrate: triangulation complexes, angle assignments,
//! validity conditions, reducible-edge completion, vertex classification, and
//! exhaustion sequences.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

/// Angles closer than this to 0 or pi/2 are treated as exactly tangent or
/// orthogonal when detecting reducible configurations.
pub const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    DegenerateFace { face: [VertexId; 3] },
    DuplicateFace { face: [VertexId; 3] },
    VertexOutOfRange { face: [VertexId; 3] },
    NonManifoldEdge { edge: (VertexId, VertexId), face_count: usize },
    NonOrientable,
    BadVertexLink { vertex: VertexId },
    IsolatedVertex { vertex: VertexId },
    Disconnected { components: usize },
    NotPlanar { euler: i64, boundary_cycles: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegenerateFace { face } => write!(f, "face {face:?} repeats a vertex"),
            Violation::DuplicateFace { face } => write!(f, "duplicate face {face:?}"),
            Violation::VertexOutOfRange { face } => write!(f, "face {face:?} names an unknown vertex"),
            Violation::NonManifoldEdge { edge, face_count } => {
                write!(f, "edge {edge:?} lies in {face_count} faces (at most 2 allowed)")
            }
            Violation::NonOrientable => write!(f, "faces cannot be consistently oriented"),
            Violation::BadVertexLink { vertex } => {
                write!(f, "link of vertex {vertex} is not a single path or cycle")
            }
            Violation::IsolatedVertex { vertex } => write!(f, "vertex {vertex} lies in no face"),
            Violation::Disconnected { components } => {
                write!(f, "complex has {components} connected components")
            }
            Violation::NotPlanar { euler, boundary_cycles } => write!(
                f,
                "Euler characteristic {euler} with {boundary_cycles} boundary cycles is not a planar surface"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            write!(f, "valid complex")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum ComplexError {
    #[error("invalid complex:\n{0}")]
    Invalid(ValidationReport),
    #[error("edge ({0}, {1}) already present with nonzero angle; cannot complete it with angle 0")]
    InconsistentCompletion(VertexId, VertexId),
    #[error("angle {angle} on edge ({u}, {v}) outside [0, pi/2]")]
    AngleOutOfRange { u: VertexId, v: VertexId, angle: f64 },
    #[error("angle assignment covers {got} edges, complex has {want}")]
    WrongEdgeCount { got: usize, want: usize },
}

/// A triangulation of a compact planar surface (in practice a closed disk),
/// immutable after construction.
#[derive(Debug, Clone)]
pub struct Triangulation {
    n_vertices: usize,
    faces: Vec<[VertexId; 3]>,
    edges: Vec<(VertexId, VertexId)>,
    edge_map: HashMap<(VertexId, VertexId), EdgeId>,
    edge_faces: Vec<Vec<FaceId>>,
    vertex_faces: Vec<Vec<FaceId>>,
    neighbors: Vec<Vec<VertexId>>,
    /// Ordered link of each vertex plus whether it closes into a cycle.
    links: Vec<(Vec<VertexId>, bool)>,
    boundary_cycles: Vec<Vec<VertexId>>,
    is_boundary: Vec<bool>,
}

/// Checks the raw face list against the triangulation invariants without
/// building the full structure.
pub fn validate_complex(n_vertices: usize, faces: &[[VertexId; 3]]) -> ValidationReport {
    match Triangulation::from_faces(n_vertices, faces.to_vec()) {
        Ok(_) => ValidationReport::default(),
        Err(report) => report,
    }
}

impl Triangulation {
    pub fn from_faces(
        n_vertices: usize,
        faces: Vec<[VertexId; 3]>,
    ) -> Result<Self, ValidationReport> {
        let mut report = ValidationReport::default();

        let mut seen = HashMap::new();
        for f in &faces {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                report.violations.push(Violation::DegenerateFace { face: *f });
                continue;
            }
            if f.iter().any(|&v| v >= n_vertices) {
                report.violations.push(Violation::VertexOutOfRange { face: *f });
                continue;
            }
            let mut key = *f;
            key.sort_unstable();
            if seen.insert(key, ()).is_some() {
                report.violations.push(Violation::DuplicateFace { face: *f });
            }
        }
        if !report.pass() {
            return Err(report);
        }

        // Edge table and incidence.
        let mut edge_map: HashMap<(VertexId, VertexId), EdgeId> = HashMap::new();
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        let mut edge_faces: Vec<Vec<FaceId>> = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let id = *edge_map.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edge_faces.push(Vec::new());
                    edges.len() - 1
                });
                edge_faces[id].push(fi);
            }
        }
        for (id, fs) in edge_faces.iter().enumerate() {
            if fs.len() > 2 {
                report
                    .violations
                    .push(Violation::NonManifoldEdge { edge: edges[id], face_count: fs.len() });
            }
        }
        if !report.pass() {
            return Err(report);
        }

        // Orient faces consistently by flipping across shared edges.
        let mut faces = faces;
        let mut oriented = vec![false; faces.len()];
        let mut ok = true;
        for start in 0..faces.len() {
            if oriented[start] {
                continue;
            }
            oriented[start] = true;
            let mut queue = vec![start];
            while let Some(fi) = queue.pop() {
                let f = faces[fi];
                for k in 0..3 {
                    let (a, b) = (f[k], f[(k + 1) % 3]);
                    let key = (a.min(b), a.max(b));
                    let id = edge_map[&key];
                    for &gi in &edge_faces[id] {
                        if gi == fi {
                            continue;
                        }
                        let g = faces[gi];
                        // The neighbor must traverse (b, a); same direction means a flip.
                        let same_dir = (0..3).any(|m| g[m] == a && g[(m + 1) % 3] == b);
                        if !oriented[gi] {
                            if same_dir {
                                faces[gi].swap(1, 2);
                            }
                            oriented[gi] = true;
                            queue.push(gi);
                        } else if same_dir {
                            ok = false;
                        }
                    }
                }
            }
        }
        if !ok {
            report.violations.push(Violation::NonOrientable);
            return Err(report);
        }

        let mut vertex_faces = vec![Vec::new(); n_vertices];
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                vertex_faces[v].push(fi);
            }
        }
        for (v, fs) in vertex_faces.iter().enumerate() {
            if fs.is_empty() {
                report.violations.push(Violation::IsolatedVertex { vertex: v });
            }
        }
        if !report.pass() {
            return Err(report);
        }

        // Links: directed opposite edges a -> b for faces (v, a, b).
        let mut links = Vec::with_capacity(n_vertices);
        for v in 0..n_vertices {
            match trace_link(v, &vertex_faces[v], &faces) {
                Some(l) => links.push(l),
                None => {
                    report.violations.push(Violation::BadVertexLink { vertex: v });
                    links.push((Vec::new(), false));
                }
            }
        }
        if !report.pass() {
            return Err(report);
        }

        let mut neighbors: Vec<Vec<VertexId>> = vec![Vec::new(); n_vertices];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for n in neighbors.iter_mut() {
            n.sort_unstable();
        }

        // Connectivity.
        let mut visited = vec![false; n_vertices];
        let mut stack = vec![0];
        visited[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &neighbors[v] {
                if !visited[w] {
                    visited[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n_vertices {
            report.violations.push(Violation::Disconnected { components: 2 });
            return Err(report);
        }

        // Boundary cycles from unpaired directed edges.
        let mut directed = HashMap::new();
        for f in &faces {
            for k in 0..3 {
                directed.insert((f[k], f[(k + 1) % 3]), ());
            }
        }
        let mut bnext: HashMap<VertexId, VertexId> = HashMap::new();
        for (&(a, b), _) in directed.iter() {
            if !directed.contains_key(&(b, a)) {
                // Boundary edge; traverse opposite to the face direction so the
                // cycle runs along the boundary.
                bnext.insert(b, a);
            }
        }
        let mut is_boundary = vec![false; n_vertices];
        for &v in bnext.keys() {
            is_boundary[v] = true;
        }
        let mut boundary_cycles = Vec::new();
        let mut done: Vec<bool> = vec![false; n_vertices];
        let mut starts: Vec<VertexId> = bnext.keys().copied().collect();
        starts.sort_unstable();
        for s in starts {
            if done[s] {
                continue;
            }
            let mut cycle = vec![s];
            done[s] = true;
            let mut cur = bnext[&s];
            while cur != s {
                cycle.push(cur);
                done[cur] = true;
                cur = bnext[&cur];
            }
            boundary_cycles.push(cycle);
        }

        let euler = n_vertices as i64 - edges.len() as i64 + faces.len() as i64;
        if euler != 2 - boundary_cycles.len() as i64 {
            report.violations.push(Violation::NotPlanar {
                euler,
                boundary_cycles: boundary_cycles.len(),
            });
            return Err(report);
        }

        Ok(Triangulation {
            n_vertices,
            faces,
            edges,
            edge_map,
            edge_faces,
            vertex_faces,
            neighbors,
            links,
            boundary_cycles,
            is_boundary,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }
    pub fn faces(&self) -> &[[VertexId; 3]] {
        &self.faces
    }
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn edge_id(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.edge_map.get(&(a.min(b), a.max(b))).copied()
    }
    pub fn edge_faces(&self, e: EdgeId) -> &[FaceId] {
        &self.edge_faces[e]
    }
    pub fn vertex_faces(&self, v: VertexId) -> &[FaceId] {
        &self.vertex_faces[v]
    }
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v]
    }
    /// Ordered link of `v` and whether it closes into a cycle.
    pub fn link(&self, v: VertexId) -> (&[VertexId], bool) {
        (&self.links[v].0, self.links[v].1)
    }
    pub fn boundary_cycles(&self) -> &[Vec<VertexId>] {
        &self.boundary_cycles
    }
    pub fn is_boundary_vertex(&self, v: VertexId) -> bool {
        self.is_boundary[v]
    }
    pub fn boundary_vertices(&self) -> Vec<VertexId> {
        (0..self.n_vertices).filter(|&v| self.is_boundary[v]).collect()
    }
    pub fn interior_vertices(&self) -> Vec<VertexId> {
        (0..self.n_vertices).filter(|&v| !self.is_boundary[v]).collect()
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Hop distances from `v0` over the one-skeleton.
    pub fn bfs_distances(&self, v0: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n_vertices];
        dist[v0] = 0;
        let mut queue = std::collections::VecDeque::from([v0]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.neighbors[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Orders the faces around `v` into a fan; returns the link vertices and
/// whether the fan closes. `None` when the star is not a single fan.
fn trace_link(
    v: VertexId,
    face_ids: &[FaceId],
    faces: &[[VertexId; 3]],
) -> Option<(Vec<VertexId>, bool)> {
    // Each face at v yields a directed link edge a -> b with (v, a, b) ccw.
    let mut succ: HashMap<VertexId, VertexId> = HashMap::new();
    for &fi in face_ids {
        let f = faces[fi];
        let k = f.iter().position(|&x| x == v)?;
        let a = f[(k + 1) % 3];
        let b = f[(k + 2) % 3];
        if succ.insert(a, b).is_some() {
            return None; // two faces leave the same link vertex
        }
    }
    let mut indeg: HashMap<VertexId, usize> = HashMap::new();
    for (&a, &b) in succ.iter() {
        *indeg.entry(b).or_insert(0) += 1;
        indeg.entry(a).or_insert(0);
    }
    if indeg.values().any(|&d| d > 1) {
        return None;
    }
    let starts: Vec<VertexId> = indeg
        .iter()
        .filter(|&(_, &d)| d == 0)
        .map(|(&a, _)| a)
        .collect();
    match starts.len() {
        0 => {
            // Single cycle expected.
            let &first = succ.keys().min()?;
            let mut order = vec![first];
            let mut cur = succ[&first];
            while cur != first {
                order.push(cur);
                if order.len() > succ.len() + 1 {
                    return None;
                }
                cur = *succ.get(&cur)?;
            }
            if order.len() != succ.len() {
                return None; // several disjoint cycles
            }
            Some((order, true))
        }
        1 => {
            let mut order = vec![starts[0]];
            let mut cur = starts[0];
            while let Some(&nxt) = succ.get(&cur) {
                order.push(nxt);
                cur = nxt;
                if order.len() > succ.len() + 2 {
                    return None;
                }
            }
            if order.len() != succ.len() + 1 {
                return None; // stray components
            }
            Some((order, false))
        }
        _ => None,
    }
}

/// Edge angles on a complex, together with the completion by missing partner
/// diagonals (which carry angle 0).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngleAssignment {
    /// Angle per complex edge, in `[0, pi/2]`, indexed by `EdgeId`.
    pub theta: Vec<f64>,
    /// Extra edges of the completed graph, not part of the complex.
    pub completed_edges: Vec<(VertexId, VertexId)>,
}

impl AngleAssignment {
    pub fn new(t: &Triangulation, theta: Vec<f64>) -> Result<Self, ComplexError> {
        if theta.len() != t.n_edges() {
            return Err(ComplexError::WrongEdgeCount { got: theta.len(), want: t.n_edges() });
        }
        for (e, &a) in theta.iter().enumerate() {
            if !((-ANGLE_EPS..=std::f64::consts::FRAC_PI_2 + ANGLE_EPS).contains(&a)) {
                let (u, v) = t.edges()[e];
                return Err(ComplexError::AngleOutOfRange { u, v, angle: a });
            }
        }
        Ok(AngleAssignment { theta, completed_edges: Vec::new() })
    }

    pub fn constant(t: &Triangulation, angle: f64) -> Result<Self, ComplexError> {
        Self::new(t, vec![angle; t.n_edges()])
    }

    pub fn theta(&self, e: EdgeId) -> f64 {
        self.theta[e]
    }

    /// Angle on the completed graph: original edges keep theta, completed
    /// edges carry 0.
    pub fn theta_tilde(&self, t: &Triangulation, a: VertexId, b: VertexId) -> Option<f64> {
        if let Some(e) = t.edge_id(a, b) {
            return Some(self.theta[e]);
        }
        let key = (a.min(b), a.max(b));
        self.completed_edges.iter().find(|&&e| e == key).map(|_| 0.0)
    }
}

fn is_right_angle(a: f64) -> bool {
    (a - std::f64::consts::FRAC_PI_2).abs() <= ANGLE_EPS
}

fn is_zero_angle(a: f64) -> bool {
    a.abs() <= ANGLE_EPS
}

/// Common neighbors `x` of `a` and `c` with both spokes at angle pi/2.
fn right_angle_common_neighbors(
    t: &Triangulation,
    a: &AngleAssignment,
    u: VertexId,
    w: VertexId,
) -> Vec<VertexId> {
    t.neighbors(u)
        .iter()
        .copied()
        .filter(|&x| {
            x != w
                && is_right_angle(a.theta[t.edge_id(u, x).unwrap()])
                && t.edge_id(x, w)
                    .map(|e| is_right_angle(a.theta[e]))
                    .unwrap_or(false)
        })
        .collect()
}

/// Every 0-angle edge that is the diagonal of a simple 4-loop of pi/2 edges,
/// as a boolean per `EdgeId`.
pub fn detect_reducible_edges(t: &Triangulation, a: &AngleAssignment) -> Vec<bool> {
    let mut reducible = vec![false; t.n_edges()];
    for (e, &(u, w)) in t.edges().iter().enumerate() {
        if !is_zero_angle(a.theta[e]) {
            continue;
        }
        if right_angle_common_neighbors(t, a, u, w).len() >= 2 {
            reducible[e] = true;
        }
    }
    reducible
}

/// Adds the missing partner diagonal of every reducible configuration. The
/// resulting assignment carries those edges in `completed_edges` with implied
/// angle 0. Idempotent.
pub fn complete_to_g_tilde(
    t: &Triangulation,
    a: &AngleAssignment,
) -> Result<AngleAssignment, ComplexError> {
    let mut completed: Vec<(VertexId, VertexId)> = Vec::new();
    for (e, &(u, w)) in t.edges().iter().enumerate() {
        if !is_zero_angle(a.theta[e]) {
            continue;
        }
        let common = right_angle_common_neighbors(t, a, u, w);
        for i in 0..common.len() {
            for j in (i + 1)..common.len() {
                let (b, d) = (common[i].min(common[j]), common[i].max(common[j]));
                match t.edge_id(b, d) {
                    Some(pe) => {
                        if !is_zero_angle(a.theta[pe]) {
                            return Err(ComplexError::InconsistentCompletion(b, d));
                        }
                    }
                    None => {
                        if !completed.contains(&(b, d)) {
                            completed.push((b, d));
                        }
                    }
                }
            }
        }
    }
    completed.sort_unstable();
    Ok(AngleAssignment { theta: a.theta.clone(), completed_edges: completed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConditionViolation {
    /// A 3-edge simple loop that is not a face boundary with angle sum >= pi.
    SeparatingTriangle { vertices: [VertexId; 3], angle_sum: f64 },
    /// A 4-loop of pi/2 edges with neither diagonal present.
    OpenOrthogonalLoop { vertices: [VertexId; 4] },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConditionReport {
    pub violations: Vec<ConditionViolation>,
}

impl ConditionReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the two realizability conditions: every separating 3-loop has angle
/// sum below pi (tested as "triangle of edges that is not a face", valid on
/// simplicial disk triangulations), and every 4-loop of orthogonal edges has a
/// diagonal in the graph or among the completed edges.
pub fn check_c1_c2(t: &Triangulation, a: &AngleAssignment) -> ConditionReport {
    let mut report = ConditionReport::default();

    // Non-facial triangles.
    let mut face_set = std::collections::HashSet::new();
    for f in t.faces() {
        let mut k = *f;
        k.sort_unstable();
        face_set.insert(k);
    }
    for (e, &(u, w)) in t.edges().iter().enumerate() {
        for &x in t.neighbors(u) {
            if x <= w || x == u {
                continue;
            }
            let (e1, e2) = match (t.edge_id(u, x), t.edge_id(w, x)) {
                (Some(e1), Some(e2)) => (e1, e2),
                _ => continue,
            };
            // Count each triangle once: require u < w < x.
            if u > w {
                continue;
            }
            let mut tri = [u, w, x];
            tri.sort_unstable();
            if face_set.contains(&tri) {
                continue;
            }
            let sum = a.theta[e] + a.theta[e1] + a.theta[e2];
            if sum >= std::f64::consts::PI - ANGLE_EPS {
                report
                    .violations
                    .push(ConditionViolation::SeparatingTriangle { vertices: tri, angle_sum: sum });
            }
        }
    }

    // Orthogonal 4-loops: for each vertex pair with >= 2 common pi/2 neighbors,
    // some diagonal must exist.
    let n = t.n_vertices();
    let mut right_nbrs: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (e, &(u, w)) in t.edges().iter().enumerate() {
        if is_right_angle(a.theta[e]) {
            right_nbrs[u].push(w);
            right_nbrs[w].push(u);
        }
    }
    for u in 0..n {
        // Candidate opposite vertices through two pi/2 edges.
        let mut through: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for &x in &right_nbrs[u] {
            for &w in &right_nbrs[x] {
                if w > u {
                    through.entry(w).or_default().push(x);
                }
            }
        }
        for (w, mids) in through {
            if mids.len() < 2 {
                continue;
            }
            let diag_uw = t.edge_id(u, w).is_some()
                || a.completed_edges.contains(&(u.min(w), u.max(w)));
            for i in 0..mids.len() {
                for j in (i + 1)..mids.len() {
                    let (b, d) = (mids[i].min(mids[j]), mids[i].max(mids[j]));
                    let diag_bd =
                        t.edge_id(b, d).is_some() || a.completed_edges.contains(&(b, d));
                    if !diag_uw && !diag_bd {
                        report.violations.push(ConditionViolation::OpenOrthogonalLoop {
                            vertices: [u, mids[i], w, mids[j]],
                        });
                    }
                }
            }
        }
    }
    report
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexClass {
    Interior,
    Boundary,
}

/// A vertex is interior when its neighbors form a closed chain of length at
/// least 4, or of length 3 with all three spokes irreducible. Everything else
/// is boundary.
pub fn classify_vertices(t: &Triangulation, a: &AngleAssignment) -> Vec<VertexClass> {
    let reducible = detect_reducible_edges(t, a);
    (0..t.n_vertices())
        .map(|v| {
            let (link, closed) = t.link(v);
            if !closed {
                return VertexClass::Boundary;
            }
            if link.len() >= 4 {
                return VertexClass::Interior;
            }
            let all_irreducible = link.iter().all(|&w| {
                let e = t.edge_id(v, w).expect("link vertex must be a neighbor");
                !reducible[e]
            });
            if link.len() == 3 && all_irreducible {
                VertexClass::Interior
            } else {
                VertexClass::Boundary
            }
        })
        .collect()
}

/// One term of an exhaustion: a sub-triangulation plus the map from its vertex
/// ids back to the parent complex.
#[derive(Debug, Clone)]
pub struct ExhaustionTerm {
    pub tri: Triangulation,
    pub angles: AngleAssignment,
    /// `vertex_map[sub_id] = parent_id`, strictly increasing.
    pub vertex_map: Vec<VertexId>,
}

#[derive(Debug, Clone)]
pub struct Exhaustion {
    pub terms: Vec<ExhaustionTerm>,
    /// True when fewer than the requested number of proper terms exist.
    pub truncated: bool,
}

/// Increasing sequence of disk sub-triangulations around `v0`: term `k` is the
/// k-fold closed-star closure, repaired (by adding the faces incident to any
/// defective boundary vertex) until the boundary is a single simple cycle.
pub fn exhaustion(
    t: &Triangulation,
    a: &AngleAssignment,
    v0: VertexId,
    n: usize,
) -> Result<Exhaustion, ComplexError> {
    let mut in_set: Vec<bool> = vec![false; t.n_vertices()];
    in_set[v0] = true;
    let mut terms = Vec::new();
    let mut truncated = false;
    for _ in 0..n {
        // Close the star: all faces touching the current vertex set.
        let mut face_in = vec![false; t.faces().len()];
        for (fi, f) in t.faces().iter().enumerate() {
            if f.iter().any(|&v| in_set[v]) {
                face_in[fi] = true;
            }
        }
        let mut next = vec![false; t.n_vertices()];
        for (fi, f) in t.faces().iter().enumerate() {
            if face_in[fi] {
                for &v in f {
                    next[v] = true;
                }
            }
        }
        // Repair: grow at defective vertices until the term is a valid disk.
        let term = loop {
            let sub = extract_subcomplex(t, a, &face_in)?;
            match sub {
                Ok(term) => break term,
                Err(defects) => {
                    let mut grew = false;
                    for v in defects {
                        for &fi in t.vertex_faces(v) {
                            if !face_in[fi] {
                                face_in[fi] = true;
                                grew = true;
                                for &w in &t.faces()[fi] {
                                    next[w] = true;
                                }
                            }
                        }
                    }
                    if !grew {
                        return Err(ComplexError::Invalid(ValidationReport {
                            violations: vec![Violation::BadVertexLink { vertex: v0 }],
                        }));
                    }
                }
            }
        };
        let full = term.vertex_map.len() == t.n_vertices();
        terms.push(term);
        in_set = next;
        if full {
            truncated = terms.len() < n;
            break;
        }
    }
    Ok(Exhaustion { terms, truncated })
}

/// Builds the induced sub-triangulation on a face subset. Returns
/// `Ok(Err(defective_vertices))` when the subset is not yet a disk.
#[allow(clippy::type_complexity)]
fn extract_subcomplex(
    t: &Triangulation,
    a: &AngleAssignment,
    face_in: &[bool],
) -> Result<Result<ExhaustionTerm, Vec<VertexId>>, ComplexError> {
    let mut vertex_map: Vec<VertexId> = Vec::new();
    let mut to_sub: HashMap<VertexId, usize> = HashMap::new();
    for (fi, f) in t.faces().iter().enumerate() {
        if face_in[fi] {
            for &v in f {
                to_sub.entry(v).or_insert_with(|| {
                    vertex_map.push(v);
                    usize::MAX
                });
            }
        }
    }
    vertex_map.sort_unstable();
    for (i, &v) in vertex_map.iter().enumerate() {
        to_sub.insert(v, i);
    }
    let sub_faces: Vec<[VertexId; 3]> = t
        .faces()
        .iter()
        .zip(face_in)
        .filter(|(_, &keep)| keep)
        .map(|(f, _)| [to_sub[&f[0]], to_sub[&f[1]], to_sub[&f[2]]])
        .collect();
    match Triangulation::from_faces(vertex_map.len(), sub_faces) {
        Ok(tri) => {
            if tri.boundary_cycles().len() > 1 {
                // An annulus or worse: grow at the innermost cycle's vertices.
                let defects: Vec<VertexId> =
                    tri.boundary_cycles()[1].iter().map(|&v| vertex_map[v]).collect();
                return Ok(Err(defects));
            }
            let theta: Vec<f64> = tri
                .edges()
                .iter()
                .map(|&(u, w)| {
                    let e = t
                        .edge_id(vertex_map[u], vertex_map[w])
                        .expect("sub-edge must exist in parent");
                    a.theta[e]
                })
                .collect();
            let angles = AngleAssignment::new(&tri, theta)?;
            Ok(Ok(ExhaustionTerm { tri, angles, vertex_map }))
        }
        Err(report) => {
            let defects: Vec<VertexId> = report
                .violations
                .iter()
                .filter_map(|v| match v {
                    Violation::BadVertexLink { vertex } => Some(vertex_map[*vertex]),
                    _ => None,
                })
                .collect();
            if defects.is_empty() {
                Err(ComplexError::Invalid(report))
            } else {
                Ok(Err(defects))
            }
        }
    }
}
