//! Layout engine: realizes a solved radius vector as placed circles, measures
//! the immersion consistency (holonomy), recovers dihedral angles from the
//! placement, and detects the crossings of reducible diagonals.

use crate::complex::{detect_reducible_edges, AngleAssignment, Triangulation, VertexId};
use crate::geom::{self, cx, Geometry};
use crate::solver::{self, RadiusVector};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

/// Curvature residual above which layout refuses to run (holonomy would
/// drift).
pub const LAYOUT_RESIDUAL_LIMIT: f64 = 1e-6;

/// Least-squares re-fit cadence during face propagation.
const REFIT_EVERY: usize = 64;

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("curvature residual {0} exceeds the layout limit {LAYOUT_RESIDUAL_LIMIT}")]
    Unsolved(f64),
    #[error("solver error: {0}")]
    Solve(#[from] solver::SolveError),
    #[error("geometry error: {0}")]
    Geometry(#[from] geom::GeomError),
    #[error("cannot place vertex {0}: both anchors sit numerically on the ideal boundary")]
    IdealAnchors(VertexId),
}

/// A placed pattern: euclidean circle data per vertex (for hyperbolic
/// patterns, circles of the disk model) plus the placement order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlacedPattern {
    pub geometry: Geometry,
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
    /// Solve-space radii (log-unknowns): euclidean radii again, or hyperbolic
    /// radii in hyperbolic mode.
    pub solve_radii: Vec<f64>,
    pub placement_order: Vec<VertexId>,
}

/// Places the pattern by anchoring one edge and propagating across faces in
/// breadth-first order. Euclidean: the first vertex of the first face goes to
/// the origin, its first neighbor on the positive axis. Hyperbolic: same in
/// the disk model, with distances realized as hyperbolic.
pub fn layout(
    t: &Triangulation,
    a: &AngleAssignment,
    r: &RadiusVector,
    g: Geometry,
) -> Result<PlacedPattern, LayoutError> {
    let k = solver::curvature(t, a, r, g)?;
    let res = k.max_abs();
    if res > LAYOUT_RESIDUAL_LIMIT {
        return Err(LayoutError::Unsolved(res));
    }
    layout_unchecked(t, a, r, g)
}

/// Layout without the curvature gate (used by perturbation experiments).
pub fn layout_unchecked(
    t: &Triangulation,
    a: &AngleAssignment,
    r: &RadiusVector,
    g: Geometry,
) -> Result<PlacedPattern, LayoutError> {
    let n = t.n_vertices();
    let dist = |u: VertexId, w: VertexId| -> Result<f64, LayoutError> {
        let e = t.edge_id(u, w).expect("edge must exist");
        Ok(geom::center_distance(r.values[u], r.values[w], a.theta[e], g)?)
    };

    let mut pos: Vec<Option<[f64; 2]>> = vec![None; n];
    // Euclidean circle data, built in the local placement chart for the
    // hyperbolic case (a horocyclic disk's model point saturates at the ideal
    // boundary, but its circle stays perfectly representable).
    let mut circ: Vec<Option<geom::Circle>> = vec![None; n];
    let mut order: Vec<VertexId> = Vec::with_capacity(n);

    // Anchor on the first face.
    let f0 = t.faces()[0];
    let (va, vb) = (f0[0], f0[1]);
    let d_ab = dist(va, vb)?;
    pos[va] = Some([0.0, 0.0]);
    match g {
        Geometry::Euclidean => {
            pos[vb] = Some([d_ab, 0.0]);
        }
        Geometry::Hyperbolic => {
            circ[va] = Some(geom::Circle { center: [0.0, 0.0], radius: (r.values[va] * 0.5).tanh() });
            let far = ((d_ab + r.values[vb]) * 0.5).tanh();
            let near = ((d_ab - r.values[vb]) * 0.5).tanh();
            circ[vb] = Some(geom::Circle {
                center: [(far + near) * 0.5, 0.0],
                radius: (far - near) * 0.5,
            });
            pos[vb] = Some([(d_ab * 0.5).tanh(), 0.0]);
        }
    }
    order.push(va);
    order.push(vb);

    let mut placed_count = 2usize;
    let mut face_seen = vec![false; t.faces().len()];
    let mut queue = VecDeque::from([0usize]);
    face_seen[0] = true;
    while let Some(fi) = queue.pop_front() {
        let f = t.faces()[fi];
        // Place the missing vertex if exactly one is missing.
        let missing: Vec<usize> = (0..3).filter(|&k| pos[f[k]].is_none()).collect();
        if missing.len() == 1 {
            let k = missing[0];
            let v = f[k];
            let (u, w) = (f[(k + 1) % 3], f[(k + 2) % 3]);
            // Face (u, w, v) keeps the complex orientation.
            let (p, c) = place_third(
                pos[u].unwrap(),
                pos[w].unwrap(),
                dist(u, w)?,
                dist(u, v)?,
                dist(w, v)?,
                r.values[v],
                g,
            )
            .ok_or(LayoutError::IdealAnchors(v))?;
            pos[v] = Some(p);
            circ[v] = c;
            order.push(v);
            placed_count += 1;
            if placed_count % REFIT_EVERY == 0 {
                refit_center(t, a, r, g, v, &mut pos);
            }
        }
        if missing.len() <= 1 {
            for k in 0..3 {
                let (x, y) = (f[k], f[(k + 1) % 3]);
                let e = t.edge_id(x, y).unwrap();
                for &gi in t.edge_faces(e) {
                    if !face_seen[gi] {
                        face_seen[gi] = true;
                        queue.push_back(gi);
                    }
                }
            }
        } else {
            // Revisit later once more of the face is placed.
            face_seen[fi] = false;
            if queue.is_empty() {
                break;
            }
        }
    }

    let centers: Vec<[f64; 2]>;
    let radii: Vec<f64>;
    match g {
        Geometry::Euclidean => {
            centers = pos.iter().map(|p| p.expect("connected complex placed fully")).collect();
            radii = r.values.clone();
        }
        Geometry::Hyperbolic => {
            let mut cs = Vec::with_capacity(n);
            let mut rs = Vec::with_capacity(n);
            for v in 0..n {
                let c = circ[v].expect("connected complex placed fully");
                cs.push(c.center);
                rs.push(c.radius);
            }
            centers = cs;
            radii = rs;
        }
    }
    Ok(PlacedPattern {
        geometry: g,
        centers,
        radii,
        solve_radii: r.values.clone(),
        placement_order: order,
    })
}

/// Places the third corner of an oriented face `(u, w, v)` given the two
/// placed anchors and the three side lengths (hyperbolic lengths in the
/// hyperbolic case; anchors are disk-model points). Returns the center point
/// plus, in hyperbolic mode, the disk's euclidean circle built in the local
/// chart and mapped back.
#[allow(clippy::too_many_arguments)]
fn place_third(
    pu: [f64; 2],
    pw: [f64; 2],
    d_uw: f64,
    d_uv: f64,
    d_wv: f64,
    r_v: f64,
    g: Geometry,
) -> Option<([f64; 2], Option<geom::Circle>)> {
    match g {
        Geometry::Euclidean => {
            let alpha = corner_angle(d_uv, d_uw, d_wv, g);
            let base = cx::sub(pw, pu);
            let blen = cx::abs(base);
            if blen == 0.0 {
                return None;
            }
            let dir = [base[0] / blen, base[1] / blen];
            let rot = cx::mul(dir, cx::polar(1.0, alpha));
            Some((cx::add(pu, cx::mul(rot, [d_uv, 0.0])), None))
        }
        Geometry::Hyperbolic => {
            // Work in the chart centered at the anchor closer to the origin.
            let anchored_at_u = cx::abs(pu) <= cx::abs(pw);
            let (a0, a1, d_anchor_v, d_other_v) = if anchored_at_u {
                (pu, pw, d_uv, d_wv)
            } else {
                (pw, pu, d_wv, d_uv)
            };
            if cx::abs(a0) >= 1.0 - 1e-12 {
                return None;
            }
            let m = geom::DiskAutomorphism::new(a0, 0.0).ok()?;
            let b = m.apply(a1);
            let beta = b[1].atan2(b[0]);
            let alpha = corner_angle(d_anchor_v, d_uw, d_other_v, g);
            // Faces (u, w, v) are ccw: seen from u the new vertex sits at
            // +alpha past w, seen from w at -alpha past u.
            let sign = if anchored_at_u { 1.0 } else { -1.0 };
            let angle = beta + sign * alpha;
            let rho = (d_anchor_v * 0.5).tanh();
            let p = cx::polar(rho, angle);
            let m_inv = m.inverse();
            // Disk of hyperbolic radius r_v about p, as a circle in the chart.
            let far = ((d_anchor_v + r_v) * 0.5).tanh();
            let near = ((d_anchor_v - r_v) * 0.5).tanh();
            let chart_circle = geom::Circle {
                center: cx::polar((far + near) * 0.5, angle),
                radius: (far - near) * 0.5,
            };
            let circle = match geom::mobius_on_circle(&m_inv, &chart_circle) {
                geom::GeneralizedCircle::Circle(c) => c,
                geom::GeneralizedCircle::Line { .. } => return None,
            };
            Some((m_inv.apply(p), Some(circle)))
        }
    }
}

/// Corner angle adjacent to sides `b`, `c` (euclidean or hyperbolic law of
/// cosines), where `b` joins the corner to the new vertex, `c` is the anchor
/// side, and `a_opp` is opposite.
fn corner_angle(b: f64, c: f64, a_opp: f64, g: Geometry) -> f64 {
    match g {
        Geometry::Euclidean => {
            let cos = (b * b + c * c - a_opp * a_opp) / (2.0 * b * c);
            cos.clamp(-1.0, 1.0).acos()
        }
        Geometry::Hyperbolic => {
            let num = b.cosh() * c.cosh() - a_opp.cosh();
            let den = b.sinh() * c.sinh();
            (num / den).clamp(-1.0, 1.0).acos()
        }
    }
}

/// Gauss-Newton re-fit of one placed center against all already-placed
/// neighbors (euclidean only; hyperbolic placement keeps the chart-based
/// construction).
fn refit_center(
    t: &Triangulation,
    a: &AngleAssignment,
    r: &RadiusVector,
    g: Geometry,
    v: VertexId,
    pos: &mut [Option<[f64; 2]>],
) {
    if g != Geometry::Euclidean {
        return;
    }
    let anchors: Vec<([f64; 2], f64)> = t
        .neighbors(v)
        .iter()
        .filter_map(|&w| {
            let p = pos[w]?;
            let e = t.edge_id(v, w).unwrap();
            let d = geom::center_distance(r.values[v], r.values[w], a.theta[e], g).ok()?;
            Some((p, d))
        })
        .collect();
    if anchors.len() < 3 {
        return;
    }
    let mut p = pos[v].unwrap();
    for _ in 0..4 {
        // Normal equations for sum (|p - q_i| - d_i)^2.
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(q, d) in &anchors {
            let dx = p[0] - q[0];
            let dy = p[1] - q[1];
            let len = dx.hypot(dy).max(1e-300);
            let (jx, jy) = (dx / len, dy / len);
            let res = len - d;
            a11 += jx * jx;
            a12 += jx * jy;
            a22 += jy * jy;
            b1 += jx * res;
            b2 += jy * res;
        }
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-14 {
            break;
        }
        p[0] -= (a22 * b1 - a12 * b2) / det;
        p[1] -= (a11 * b2 - a12 * b1) / det;
    }
    pos[v] = Some(p);
}

/// Maximum edge-length discrepancy of a placed pattern: each edge's measured
/// center distance against the two-disk law, over all edges (spanning and
/// cycle-closing alike). For hyperbolic patterns the comparison runs on edges
/// whose endpoints stay numerically inside the disk; boundary-touching edges
/// are covered by [`verify_angles`].
pub fn holonomy_residual(p: &PlacedPattern, t: &Triangulation, a: &AngleAssignment) -> f64 {
    let mut max = 0.0f64;
    for (e, &(u, w)) in t.edges().iter().enumerate() {
        match p.geometry {
            Geometry::Euclidean => {
                let measured = cx::abs(cx::sub(p.centers[u], p.centers[w]));
                let expected = geom::center_distance(
                    p.solve_radii[u],
                    p.solve_radii[w],
                    a.theta[e],
                    Geometry::Euclidean,
                )
                .unwrap_or(f64::NAN);
                max = max.max((measured - expected).abs());
            }
            Geometry::Hyperbolic => {
                let safe = |v: VertexId| {
                    cx::abs(p.centers[v]) + p.radii[v] < 1.0 - 1e-9
                };
                if !(safe(u) && safe(w)) {
                    continue;
                }
                let zu = geom::hyperbolic_center(&geom::Circle {
                    center: p.centers[u],
                    radius: p.radii[u],
                })
                .unwrap();
                let zw = geom::hyperbolic_center(&geom::Circle {
                    center: p.centers[w],
                    radius: p.radii[w],
                })
                .unwrap();
                let measured = geom::hyperbolic_distance(zu, zw);
                let expected = geom::center_distance(
                    p.solve_radii[u],
                    p.solve_radii[w],
                    a.theta[e],
                    Geometry::Hyperbolic,
                )
                .unwrap_or(f64::NAN);
                max = max.max((measured - expected).abs());
            }
        }
    }
    max
}

/// Maximum dihedral-angle discrepancy of a placed pattern, measured in the
/// cosine metric `|cos(recovered) - cos(prescribed)|`, which stays conditioned
/// at tangency where the angle itself responds like a square root to length
/// errors. Covers complex edges and completed diagonals.
pub fn verify_angles(p: &PlacedPattern, t: &Triangulation, a: &AngleAssignment) -> f64 {
    let mut max = 0.0f64;
    let mut check = |u: VertexId, w: VertexId, theta: f64| {
        let d = cx::abs(cx::sub(p.centers[u], p.centers[w]));
        let rec = geom::dihedral_from_geometry(d, p.radii[u], p.radii[w]);
        max = max.max((rec.cos() - theta.cos()).abs());
    };
    for (e, &(u, w)) in t.edges().iter().enumerate() {
        check(u, w, a.theta[e]);
    }
    for &(u, w) in &a.completed_edges {
        check(u, w, 0.0);
    }
    max
}

/// A proper crossing between the straight center segments of two edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub edge1: (VertexId, VertexId),
    pub edge2: (VertexId, VertexId),
}

/// All proper pairwise crossings among the given center segments.
pub fn segment_crossings(
    p: &PlacedPattern,
    edges: &[(VertexId, VertexId)],
) -> Vec<Crossing> {
    let mut out = Vec::new();
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let (a1, b1) = edges[i];
            let (a2, b2) = edges[j];
            if a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2 {
                continue; // shared endpoint, not a proper crossing
            }
            if segments_cross(
                p.centers[a1],
                p.centers[b1],
                p.centers[a2],
                p.centers[b2],
            ) {
                out.push(Crossing { edge1: edges[i], edge2: edges[j] });
            }
        }
    }
    out
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    };
    let scale = (cx::abs(cx::sub(p2, p1)) * cx::abs(cx::sub(q2, q1))).max(1e-300);
    let eps = 1e-12 * scale;
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < -eps * eps && d3 * d4 < -eps * eps
}

/// Crossings among all segments of the completed graph, asserting each one is
/// a pair of reducible diagonals.
pub fn detect_reducible_crossings(
    p: &PlacedPattern,
    t: &Triangulation,
    a: &AngleAssignment,
) -> Result<Vec<Crossing>, String> {
    let reducible = detect_reducible_edges(t, a);
    let mut segs: Vec<(VertexId, VertexId)> = t.edges().to_vec();
    segs.extend(a.completed_edges.iter().copied());
    let is_reducible_seg = |u: VertexId, w: VertexId| {
        t.edge_id(u, w)
            .map(|e| reducible[e])
            .unwrap_or_else(|| a.completed_edges.contains(&(u.min(w), u.max(w))))
    };
    let crossings = segment_crossings(p, &segs);
    for c in &crossings {
        if !is_reducible_seg(c.edge1.0, c.edge1.1) || !is_reducible_seg(c.edge2.0, c.edge2.1) {
            return Err(format!(
                "non-reducible crossing between {:?} and {:?}",
                c.edge1, c.edge2
            ));
        }
    }
    Ok(crossings)
}

/// True when every disk center lies outside every other disk (up to `tol`).
pub fn centers_outside_disks(p: &PlacedPattern, tol: f64) -> bool {
    let n = p.centers.len();
    for v in 0..n {
        for w in 0..n {
            if v == w {
                continue;
            }
            let d = cx::abs(cx::sub(p.centers[v], p.centers[w]));
            if d < p.radii[w] - tol {
                return false;
            }
        }
    }
    true
}

/// Maximum number of disks covering any point of a sample grid.
pub fn max_cover_on_grid(p: &PlacedPattern, samples_per_axis: usize) -> usize {
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    for (c, &r) in p.centers.iter().zip(&p.radii) {
        for k in 0..2 {
            lo[k] = lo[k].min(c[k] - r);
            hi[k] = hi[k].max(c[k] + r);
        }
    }
    let mut worst = 0usize;
    for i in 0..samples_per_axis {
        for j in 0..samples_per_axis {
            let x = lo[0] + (hi[0] - lo[0]) * (i as f64 + 0.5) / samples_per_axis as f64;
            let y = lo[1] + (hi[1] - lo[1]) * (j as f64 + 0.5) / samples_per_axis as f64;
            let count = p
                .centers
                .iter()
                .zip(&p.radii)
                .filter(|(c, &r)| (x - c[0]).hypot(y - c[1]) <= r)
                .count();
            worst = worst.max(count);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::complete_to_g_tilde;
    use crate::generators;
    use crate::solver::{boundary_constant, solve};

    fn solved_hex(depth: usize) -> (Triangulation, AngleAssignment, RadiusVector) {
        let (t, a) = generators::hex_ball(depth);
        let opts = solver::SolveOptions { tol: Some(1e-12), ..Default::default() };
        let (r, rep) = solve(&t, &a, &boundary_constant(&t, 1.0), Geometry::Euclidean, &opts).unwrap();
        assert!(rep.converged);
        (t, a, r)
    }

    #[test]
    fn hex_layout_lands_on_triangular_lattice() {
        let (t, a, r) = solved_hex(2);
        let p = layout(&t, &a, &r, Geometry::Euclidean).unwrap();
        // All pairwise adjacent distances are 2.
        for &(u, w) in t.edges() {
            let d = cx::abs(cx::sub(p.centers[u], p.centers[w]));
            assert!((d - 2.0).abs() < 1e-9);
        }
        assert!(holonomy_residual(&p, &t, &a) < 1e-9);
        assert!(verify_angles(&p, &t, &a) < 1e-9);
    }

    #[test]
    fn square_grid_layout_lands_on_integer_lattice() {
        let (t, a) = generators::square_grid_ball(2);
        let a = complete_to_g_tilde(&t, &a).unwrap();
        let r0 = 0.5f64.sqrt();
        let opts = solver::SolveOptions { tol: Some(1e-12), ..Default::default() };
        let (r, _) = solve(&t, &a, &boundary_constant(&t, r0), Geometry::Euclidean, &opts).unwrap();
        let p = layout(&t, &a, &r, Geometry::Euclidean).unwrap();
        for (e, &(u, w)) in t.edges().iter().enumerate() {
            let d = cx::abs(cx::sub(p.centers[u], p.centers[w]));
            let expect = if a.theta[e] == 0.0 { 2f64.sqrt() } else { 1.0 };
            assert!((d - expect).abs() < 1e-9, "edge ({u},{w}): {d} vs {expect}");
        }
        assert!(verify_angles(&p, &t, &a) < 1e-9);
        // Exactly one crossing per unit square, between reducible diagonals.
        let crossings = detect_reducible_crossings(&p, &t, &a).unwrap();
        assert_eq!(crossings.len(), 16);
        // The reduced graph (irreducible edges only) has no crossings.
        let red = detect_reducible_edges(&t, &a);
        let irreducible: Vec<_> = t
            .edges()
            .iter()
            .enumerate()
            .filter(|(e, _)| !red[*e])
            .map(|(_, &x)| x)
            .collect();
        assert!(segment_crossings(&p, &irreducible).is_empty());
    }

    #[test]
    fn perturbed_radii_break_holonomy() {
        let (t, a, mut r) = solved_hex(2);
        for v in 0..t.n_vertices() {
            if v % 3 == 0 {
                r.values[v] *= 1.01;
            }
        }
        assert!(layout(&t, &a, &r, Geometry::Euclidean).is_err());
        let p = layout_unchecked(&t, &a, &r, Geometry::Euclidean).unwrap();
        assert!(holonomy_residual(&p, &t, &a) > 1e-6);
    }

    #[test]
    fn single_triangle_has_zero_residual() {
        let t = Triangulation::from_faces(3, vec![[0, 1, 2]]).unwrap();
        let a = AngleAssignment::constant(&t, 0.0).unwrap();
        let r = RadiusVector::uniform(3, 1.0);
        let p = layout(&t, &a, &r, Geometry::Euclidean).unwrap();
        assert!(holonomy_residual(&p, &t, &a) < 1e-12);
        assert!(segment_crossings(&p, t.edges()).is_empty());
    }

    #[test]
    fn layouts_from_different_anchors_agree_up_to_rigid_motion() {
        let (t, a, r) = solved_hex(2);
        let p1 = layout(&t, &a, &r, Geometry::Euclidean).unwrap();
        // Re-anchor by rotating the face list.
        let mut faces = t.faces().to_vec();
        faces.rotate_left(7);
        let t2 = Triangulation::from_faces(t.n_vertices(), faces).unwrap();
        let theta2: Vec<f64> = t2
            .edges()
            .iter()
            .map(|&(u, w)| a.theta[t.edge_id(u, w).unwrap()])
            .collect();
        let a2 = AngleAssignment::new(&t2, theta2).unwrap();
        let p2 = layout(&t2, &a2, &r, Geometry::Euclidean).unwrap();
        for u in 0..t.n_vertices() {
            for w in (u + 1)..t.n_vertices() {
                let d1 = cx::abs(cx::sub(p1.centers[u], p1.centers[w]));
                let d2 = cx::abs(cx::sub(p2.centers[u], p2.centers[w]));
                assert!((d1 - d2).abs() < 1e-8, "pair ({u},{w}): {d1} vs {d2}");
            }
        }
    }

    #[test]
    fn hex_centers_stay_outside_other_disks_with_bounded_cover() {
        let (t, a, r) = solved_hex(3);
        let p = layout(&t, &a, &r, Geometry::Euclidean).unwrap();
        assert!(centers_outside_disks(&p, 1e-9));
        assert!(max_cover_on_grid(&p, 60) <= 4);
        let _ = a;
    }

    #[test]
    fn hyperbolic_wheel_layout_matches_closed_form() {
        let (t, a) = generators::hex_ball(1);
        let (r, rep) = solve(
            &t,
            &a,
            &solver::boundary_horocyclic(&t),
            Geometry::Hyperbolic,
            &Default::default(),
        )
        .unwrap();
        assert!(rep.converged);
        let p = layout(&t, &a, &r, Geometry::Hyperbolic).unwrap();
        // Center disk: euclidean radius 1/3 at the origin.
        assert!(cx::abs(p.centers[0]) < 1e-9);
        assert!((p.radii[0] - 1.0 / 3.0).abs() < 1e-6, "center radius {}", p.radii[0]);
        for v in 1..7 {
            assert!((p.radii[v] - 1.0 / 3.0).abs() < 1e-6, "boundary radius {}", p.radii[v]);
            let d = cx::abs(p.centers[v]);
            assert!((d - 2.0 / 3.0).abs() < 1e-6, "boundary center distance {d}");
            assert!((d + p.radii[v] - 1.0).abs() < 1e-6, "tangency gap");
        }
        assert!(verify_angles(&p, &t, &a) < 1e-9);
    }
}
