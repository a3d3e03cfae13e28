//! Built-in complex generators: hexagonal (triangular-lattice) balls, the
//! triangulated square grid, and the constant-degree-7 triangulation. Vertex 0
//! is always the center and vertices are emitted ring by ring, so the first
//! `|ball(k)|` ids of a deeper ball form exactly the radius-k ball.

use crate::complex::{AngleAssignment, Triangulation, VertexId};
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

/// Hop-ball of the triangular lattice (contact graph of the regular hexagonal
/// packing), all angles 0. `1 + 3 depth (depth + 1)` vertices.
pub fn hex_ball(depth: usize) -> (Triangulation, AngleAssignment) {
    assert!(depth >= 1, "hex ball needs depth >= 1");
    let r = depth as i64;
    let mut ids: HashMap<(i64, i64), VertexId> = HashMap::new();
    let mut coords: Vec<(i64, i64)> = Vec::new();
    // Ring order: hex distance, then angular walk along the ring.
    for n in 0..=r {
        for c in hex_ring(n) {
            ids.insert(c, coords.len());
            coords.push(c);
        }
    }
    let inside = |q: i64, s: i64| hex_norm(q, s) <= r;
    let mut faces = Vec::new();
    for &(q, s) in &coords {
        // Up and down lattice triangles anchored at (q, s).
        if inside(q + 1, s) && inside(q, s + 1) {
            faces.push([ids[&(q, s)], ids[&(q + 1, s)], ids[&(q, s + 1)]]);
        }
        if inside(q + 1, s) && inside(q + 1, s - 1) {
            faces.push([ids[&(q, s)], ids[&(q + 1, s - 1)], ids[&(q + 1, s)]]);
        }
    }
    let t = Triangulation::from_faces(coords.len(), faces).expect("hex ball is a valid disk");
    let a = AngleAssignment::constant(&t, 0.0).expect("zero angles are valid");
    (t, a)
}

fn hex_norm(q: i64, s: i64) -> i64 {
    // Axial coordinates: distance to origin on the triangular lattice.
    (q.abs() + s.abs() + (q + s).abs()) / 2
}

fn hex_ring(n: i64) -> Vec<(i64, i64)> {
    if n == 0 {
        return vec![(0, 0)];
    }
    let dirs = [(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)];
    let mut out = Vec::with_capacity(6 * n as usize);
    let (mut q, mut s) = (n, 0);
    for d in dirs {
        for _ in 0..n {
            out.push((q, s));
            q += d.0;
            s += d.1;
        }
    }
    out
}

/// Square window `max(|x|, |y|) <= depth` of the triangulated square grid:
/// axis edges orthogonal (pi/2), the drawn diagonal of each unit square
/// tangent (0). The partner diagonals arrive via completion.
pub fn square_grid_ball(depth: usize) -> (Triangulation, AngleAssignment) {
    assert!(depth >= 1, "square grid needs depth >= 1");
    let r = depth as i64;
    let mut ids: HashMap<(i64, i64), VertexId> = HashMap::new();
    let mut coords = Vec::new();
    // Frame order: Chebyshev rings.
    for n in 0..=r {
        for c in square_ring(n) {
            ids.insert(c, coords.len());
            coords.push(c);
        }
    }
    let mut faces = Vec::new();
    for x in -r..r {
        for y in -r..r {
            let v = ids[&(x, y)];
            let vx = ids[&(x + 1, y)];
            let vy = ids[&(x, y + 1)];
            let vxy = ids[&(x + 1, y + 1)];
            faces.push([v, vx, vxy]);
            faces.push([v, vxy, vy]);
        }
    }
    let t = Triangulation::from_faces(coords.len(), faces).expect("grid window is a valid disk");
    let mut theta = vec![0.0; t.n_edges()];
    for (e, &(u, w)) in t.edges().iter().enumerate() {
        let (x1, y1) = coords[u];
        let (x2, y2) = coords[w];
        let axis = x1 == x2 || y1 == y2;
        theta[e] = if axis { FRAC_PI_2 } else { 0.0 };
    }
    let a = AngleAssignment::new(&t, theta).expect("grid angles are valid");
    (t, a)
}

fn square_ring(n: i64) -> Vec<(i64, i64)> {
    if n == 0 {
        return vec![(0, 0)];
    }
    let mut out = Vec::new();
    for x in -n..=n {
        out.push((x, n));
    }
    for y in (-n..n).rev() {
        out.push((n, y));
    }
    for x in (-n..n).rev() {
        out.push((x, -n));
    }
    for y in (-n + 1..n).rev() {
        out.push((-n, -y));
    }
    // Deduplicate corners introduced by the sweep above.
    out.sort_unstable();
    out.dedup();
    out
}

/// Combinatorial ball of the triangulation of the plane in which every vertex
/// has degree 7, built layer by layer; all angles 0. Ring sizes follow
/// 7, 21, 56, 147, ... (growth ratio (3 + sqrt 5) / 2).
pub fn degree7_ball(depth: usize) -> (Triangulation, AngleAssignment) {
    assert!(depth >= 1, "degree-7 ball needs depth >= 1");
    let mut faces: Vec<[VertexId; 3]> = Vec::new();
    let mut next_id: VertexId = 1;

    // Ring 1: a 7-wheel around vertex 0.
    let mut ring: Vec<VertexId> = (0..7).map(|k| next_id + k).collect();
    next_id += 7;
    // Parents per current-ring vertex, in ccw order.
    let mut parent_count: Vec<usize> = vec![1; 7];
    for k in 0..7 {
        faces.push([0, ring[k], ring[(k + 1) % 7]]);
    }

    for _ in 1..depth {
        let m = ring.len();
        // Children per vertex: degree 7 minus two ring neighbors minus parents.
        let children: Vec<usize> = parent_count.iter().map(|&p| 5 - p).collect();
        let total: usize = children.iter().map(|&c| c - 1).sum();
        let new_ring: Vec<VertexId> = (0..total).map(|k| next_id + k).collect();
        next_id += total;

        let mut new_parents = vec![0usize; total];
        let mut pos = 0usize; // index into new_ring of the current vertex's first child
        for i in 0..m {
            let c = children[i];
            let v = ring[i];
            let w = ring[(i + 1) % m];
            // Children of v: new_ring[pos..pos+c], the last shared with w.
            for j in 0..c {
                new_parents[(pos + j) % total] += 1;
            }
            for j in 0..c - 1 {
                faces.push([v, new_ring[(pos + j) % total], new_ring[(pos + j + 1) % total]]);
            }
            // Triangle between consecutive ring vertices and their shared child.
            faces.push([v, w, new_ring[(pos + c - 1) % total]]);
            pos += c - 1;
        }
        // Each vertex counted its own children once; shared children got two.
        ring = new_ring;
        parent_count = new_parents;
    }

    let t = Triangulation::from_faces(next_id, faces).expect("degree-7 ball is a valid disk");
    let a = AngleAssignment::constant(&t, 0.0).expect("zero angles are valid");
    (t, a)
}

/// Ring sizes of [`degree7_ball`] up to `depth`, handy for sizing tests.
pub fn degree7_ring_sizes(depth: usize) -> Vec<usize> {
    let mut sizes = vec![1usize];
    let mut parent_count: Vec<usize> = vec![1; 7];
    sizes.push(7);
    for _ in 1..depth {
        let children: Vec<usize> = parent_count.iter().map(|&p| 5 - p).collect();
        let total: usize = children.iter().map(|&c| c - 1).sum();
        let m = parent_count.len();
        let mut new_parents = vec![0usize; total];
        let mut pos = 0usize;
        for i in 0..m {
            let c = children[i];
            for j in 0..c {
                new_parents[(pos + j) % total] += 1;
            }
            pos += c - 1;
        }
        parent_count = new_parents;
        sizes.push(total);
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_ball_sizes_and_boundary() {
        for depth in 1..=4 {
            let (t, _) = hex_ball(depth);
            assert_eq!(t.n_vertices(), 1 + 3 * depth * (depth + 1));
            assert_eq!(t.boundary_cycles().len(), 1);
            assert_eq!(t.boundary_cycles()[0].len(), 6 * depth);
            assert_eq!(t.euler_characteristic(), 1);
        }
        let (t, _) = hex_ball(3);
        // Interior vertices have degree 6.
        for v in 0..t.n_vertices() {
            if !t.is_boundary_vertex(v) {
                assert_eq!(t.neighbors(v).len(), 6);
            }
        }
    }

    #[test]
    fn hex_ball_ids_are_ring_ordered() {
        let (t5, _) = hex_ball(5);
        let dist = t5.bfs_distances(0);
        for v in 0..t5.n_vertices() {
            let ring = dist[v];
            let ball_before = if ring == 0 { 0 } else { 1 + 3 * (ring - 1) * ring };
            let ball_at = 1 + 3 * ring * (ring + 1);
            assert!(v >= ball_before && v < ball_at, "vertex {v} in ring {ring}");
        }
    }

    #[test]
    fn square_grid_window_shape() {
        let (t, a) = square_grid_ball(2);
        assert_eq!(t.n_vertices(), 25);
        assert_eq!(t.faces().len(), 32);
        assert_eq!(t.boundary_cycles().len(), 1);
        let n_right = a.theta.iter().filter(|&&x| x == FRAC_PI_2).count();
        let n_zero = a.theta.iter().filter(|&&x| x == 0.0).count();
        assert_eq!(n_right, 40); // 2 * 4 * 5 axis edges
        assert_eq!(n_zero, 16); // one diagonal per unit square
    }

    #[test]
    fn degree7_ball_is_7_regular_inside() {
        let (t, _) = degree7_ball(4);
        let dist = t.bfs_distances(0);
        for v in 0..t.n_vertices() {
            if !t.is_boundary_vertex(v) {
                assert_eq!(t.neighbors(v).len(), 7, "vertex {v} at distance {}", dist[v]);
            }
        }
        assert_eq!(t.boundary_cycles().len(), 1);
        assert_eq!(t.euler_characteristic(), 1);
    }

    #[test]
    fn degree7_ring_sizes_follow_recurrence() {
        let sizes = degree7_ring_sizes(6);
        assert_eq!(&sizes[..5], &[1, 7, 21, 56, 147]);
        for k in 3..sizes.len() {
            assert_eq!(sizes[k], 3 * sizes[k - 1] - sizes[k - 2]);
        }
        let (t, _) = degree7_ball(5);
        assert_eq!(t.n_vertices(), sizes[..6].iter().sum::<usize>());
        // Ring order: BFS distance matches id blocks.
        let dist = t.bfs_distances(0);
        let mut offset = 0;
        for (ring, &sz) in sizes[..6].iter().enumerate() {
            for v in offset..offset + sz {
                assert_eq!(dist[v], ring, "vertex {v}");
            }
            offset += sz;
        }
    }
}
