//! Metric kernel: two-disk center distances, triple configurations, the dual
//! (radical) point with its foot distances, closed-form angle derivatives, and
//! Möbius automorphisms of the unit disk.
//!
//! Conventions: the dihedral angle of two intersecting circles lies in
//! `[0, pi/2]`, with 0 meaning tangency and `pi/2` orthogonality. Hyperbolic
//! computations live in the Poincaré disk model.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative slack below which a triangle is treated as degenerate.
pub const DEGENERACY_EPS: f64 = 1e-12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("overlap angle {0} outside [0, pi/2]")]
    AngleOutOfRange(f64),
    #[error("degenerate triple: side lengths ({0}, {1}, {2}) violate the triangle inequality")]
    DegenerateTriple(f64, f64, f64),
    #[error("disk is not strictly inside the unit disk")]
    OutsideUnitDisk,
    #[error("Möbius parameter must satisfy |a| < 1, got |a| = {0}")]
    InvalidMobius(f64),
}

/// Distance between the centers of two disks of radii `r1`, `r2` meeting at
/// dihedral angle `theta`.
///
/// Euclidean: `d = sqrt(r1^2 + r2^2 + 2 r1 r2 cos theta)`.
/// Hyperbolic (radii are hyperbolic lengths):
/// `d = arccosh(cosh r1 cosh r2 + cos theta sinh r1 sinh r2)`.
pub fn center_distance(r1: f64, r2: f64, theta: f64, g: Geometry) -> Result<f64, GeomError> {
    if !(r1 > 0.0) {
        return Err(GeomError::NonPositiveRadius(r1));
    }
    if !(r2 > 0.0) {
        return Err(GeomError::NonPositiveRadius(r2));
    }
    check_angle(theta)?;
    Ok(match g {
        Geometry::Euclidean => (r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * theta.cos()).sqrt(),
        Geometry::Hyperbolic => {
            (r1.cosh() * r2.cosh() + theta.cos() * r1.sinh() * r2.sinh()).acosh()
        }
    })
}

/// Recovers the dihedral angle of two placed circles from the center distance
/// and the radii. Stable near tangency: evaluated through the half-angle
/// `tan(theta/2)` form rather than `acos`.
///
/// Returns 0 when the disks are separated or internally nested.
pub fn dihedral_from_geometry(d: f64, r1: f64, r2: f64) -> f64 {
    // 1 - cos = ((r1+r2)^2 - d^2) / (2 r1 r2), 1 + cos = (d^2 - (r1-r2)^2) / (2 r1 r2)
    let u = (r1 + r2 - d) * (r1 + r2 + d);
    let v = (d - (r1 - r2)) * (d + (r1 - r2));
    2.0 * f64::atan2(u.max(0.0).sqrt(), v.max(0.0).sqrt())
}

fn check_angle(theta: f64) -> Result<(), GeomError> {
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&theta) {
        return Err(GeomError::AngleOutOfRange(theta));
    }
    Ok(())
}

/// Three mutually intersecting disks: radii and the pairwise overlap angles,
/// ordered `[theta01, theta02, theta12]`.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
pub struct TripleConfig {
    pub radii: [f64; 3],
    pub theta: [f64; 3],
}

impl TripleConfig {
    pub fn new(radii: [f64; 3], theta: [f64; 3]) -> Result<Self, GeomError> {
        for &r in &radii {
            if !(r > 0.0) {
                return Err(GeomError::NonPositiveRadius(r));
            }
        }
        for &t in &theta {
            check_angle(t)?;
        }
        Ok(TripleConfig { radii, theta })
    }

    /// Pairwise center distances `[d01, d02, d12]`.
    pub fn side_lengths(&self, g: Geometry) -> Result<[f64; 3], GeomError> {
        let d01 = center_distance(self.radii[0], self.radii[1], self.theta[0], g)?;
        let d02 = center_distance(self.radii[0], self.radii[2], self.theta[1], g)?;
        let d12 = center_distance(self.radii[1], self.radii[2], self.theta[2], g)?;
        let sides = [d01, d02, d12];
        let perim = d01 + d02 + d12;
        for k in 0..3 {
            let (a, b, c) = (sides[k], sides[(k + 1) % 3], sides[(k + 2) % 3]);
            if b + c - a <= DEGENERACY_EPS * perim {
                return Err(GeomError::DegenerateTriple(d01, d02, d12));
            }
        }
        Ok(sides)
    }

    /// The overlap angle attached to the unordered corner pair `{i, j}`.
    pub fn theta_of_pair(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 1) => self.theta[0],
            (0, 2) => self.theta[1],
            (1, 2) => self.theta[2],
            _ => panic!("invalid corner pair ({i}, {j})"),
        }
    }
}

/// Euclidean sides together with the pairwise differences of their squares,
/// evaluated symbolically from the radii. Thin triples make `d_i - d_j`
/// cancel catastrophically when formed from the rounded lengths; the
/// difference of the defining quadratic forms avoids that.
struct EuclidSides {
    /// `[d01, d02, d12]`
    d: [f64; 3],
    /// `[d01^2 - d02^2, d01^2 - d12^2, d02^2 - d12^2]`
    sq_diff: [f64; 3],
}

impl EuclidSides {
    fn new(c: &TripleConfig) -> Result<Self, GeomError> {
        let d = c.side_lengths(Geometry::Euclidean)?;
        let [r0, r1, r2] = c.radii;
        let [c01, c02, c12] = [c.theta[0].cos(), c.theta[1].cos(), c.theta[2].cos()];
        let sq_diff = [
            (r1 - r2) * (r1 + r2) + 2.0 * r0 * (r1 * c01 - r2 * c02),
            (r0 - r2) * (r0 + r2) + 2.0 * r1 * (r0 * c01 - r2 * c12),
            (r0 - r1) * (r0 + r1) + 2.0 * r2 * (r0 * c02 - r1 * c12),
        ];
        Ok(EuclidSides { d, sq_diff })
    }

    /// `d[i] - d[j]` without large-scale cancellation.
    fn diff(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let num = match (lo, hi) {
            (0, 1) => self.sq_diff[0],
            (0, 2) => self.sq_diff[1],
            (1, 2) => self.sq_diff[2],
            _ => unreachable!(),
        };
        let signed = if i < j { num } else { -num };
        signed / (self.d[i] + self.d[j])
    }

    /// `(d[p] + d[q] - d[r]) / 2`, pairing the subtraction with the nearer of
    /// the two positive sides.
    fn half_excess(&self, p: usize, q: usize, r: usize) -> f64 {
        let (x, y) = if (self.d[p] - self.d[r]).abs() <= (self.d[q] - self.d[r]).abs() {
            (p, q)
        } else {
            (q, p)
        };
        ((self.diff(x, r) + self.d[y]) * 0.5).max(0.0)
    }

    /// Corner angle opposite side `opp`, adjacent sides `b` and `c`.
    fn corner(&self, opp: usize, b: usize, c: usize) -> f64 {
        let s = (self.d[0] + self.d[1] + self.d[2]) * 0.5;
        let s_opp = self.half_excess(b, c, opp);
        let s_b = self.half_excess(opp, c, b);
        let s_c = self.half_excess(opp, b, c);
        2.0 * f64::atan2((s_b * s_c).max(0.0).sqrt(), (s * s_opp).max(0.0).sqrt())
    }
}

fn corner_angle_hyperbolic(a_side: f64, b_side: f64, c_side: f64) -> f64 {
    let num = b_side.cosh() * c_side.cosh() - a_side.cosh();
    let den = b_side.sinh() * c_side.sinh();
    (num / den).clamp(-1.0, 1.0).acos()
}

/// Corner angles `[phi0, phi1, phi2]` of the triangle formed by the three
/// disk centers. The euclidean angles sum to pi.
pub fn triple_angles(c: &TripleConfig, g: Geometry) -> Result<[f64; 3], GeomError> {
    match g {
        Geometry::Euclidean => {
            // Side indices: 0 = d01, 1 = d02, 2 = d12.
            let sides = EuclidSides::new(c)?;
            Ok([sides.corner(2, 0, 1), sides.corner(1, 0, 2), sides.corner(0, 1, 2)])
        }
        Geometry::Hyperbolic => {
            let [d01, d02, d12] = c.side_lengths(g)?;
            Ok([
                corner_angle_hyperbolic(d12, d01, d02),
                corner_angle_hyperbolic(d02, d01, d12),
                corner_angle_hyperbolic(d01, d02, d12),
            ])
        }
    }
}

/// Canonically placed euclidean triple: corner positions, the common point of
/// the three radical axes, and its distances to the triangle sides.
#[derive(Clone, Debug)]
pub struct RadicalData {
    /// Corner positions `A0, A1, A2` (A0 at the origin, A1 on the positive axis).
    pub corners: [[f64; 2]; 3],
    /// The common point of the radical axes, inside the closed triangle.
    pub point: [f64; 2],
    /// Foot distances `[h01, h02, h12]` from the point to the triangle sides.
    pub feet: [f64; 3],
}

/// Radical point of a euclidean triple. The three pairwise radical axes (the
/// tangent line when the overlap angle is 0) meet at a single point contained
/// in the closed center triangle; `feet[k]` is its distance to side `k`.
pub fn radical_point(c: &TripleConfig) -> Result<RadicalData, GeomError> {
    let [d01, d02, d12] = c.side_lengths(Geometry::Euclidean)?;
    let a0 = [0.0, 0.0];
    let a1 = [d01, 0.0];
    // Third corner above the axis.
    let x2 = (d01 * d01 + d02 * d02 - d12 * d12) / (2.0 * d01);
    let y2 = (d02 * d02 - x2 * x2).max(0.0).sqrt();
    let a2 = [x2, y2];

    // Equal-power conditions: 2 (Aj - A0) . X = |Aj|^2 - rj^2 + r0^2.
    let [r0, r1, r2] = c.radii;
    let b1 = d01 * d01 - r1 * r1 + r0 * r0;
    let b2 = d02 * d02 - r2 * r2 + r0 * r0;
    let det = 2.0 * (a1[0] * a2[1] - a1[1] * a2[0]);
    let ox = (b1 * a2[1] - b2 * a1[1]) / det;
    let oy = (b2 * a1[0] - b1 * a2[0]) / det;
    let o = [ox, oy];

    let h01 = dist_point_line(o, a0, a1);
    let h02 = dist_point_line(o, a0, a2);
    let h12 = dist_point_line(o, a1, a2);
    Ok(RadicalData {
        corners: [a0, a1, a2],
        point: o,
        feet: [h01, h02, h12],
    })
}

fn dist_point_line(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ux = b[0] - a[0];
    let uy = b[1] - a[1];
    let wx = p[0] - a[0];
    let wy = p[1] - a[1];
    (ux * wy - uy * wx).abs() / (ux * ux + uy * uy).sqrt()
}

/// `d(phi_i) / d(log rho_j)` for a triple, `i != j`.
///
/// Euclidean: the closed form `h_ij / d_ij` where `h_ij` is the radical-point
/// foot distance on side `ij`. Hyperbolic: central finite difference of
/// [`triple_angles`] with a radius step of `1e-6 * max(1, rho_j)`.
pub fn dphi_dlogrho(c: &TripleConfig, i: usize, j: usize, g: Geometry) -> Result<f64, GeomError> {
    assert!(i < 3 && j < 3 && i != j, "corner indices must differ");
    match g {
        Geometry::Euclidean => {
            // Permute so that corner i plays role 0 and corner j role 1: the
            // canonical placement is anchored on the (i, j) edge, which makes
            // dphi(c, i, j) and dphi(c, j, i) follow different arithmetic.
            let k = 3 - i - j;
            let perm = [i, j, k];
            let radii = [c.radii[perm[0]], c.radii[perm[1]], c.radii[perm[2]]];
            let theta = [
                c.theta_of_pair(perm[0], perm[1]),
                c.theta_of_pair(perm[0], perm[2]),
                c.theta_of_pair(perm[1], perm[2]),
            ];
            let p = TripleConfig::new(radii, theta)?;
            let rad = radical_point(&p)?;
            let d01 = rad.corners[1][0];
            Ok(rad.feet[0] / d01)
        }
        Geometry::Hyperbolic => {
            let step = 1e-6 * c.radii[j].max(1.0);
            let mut hi = *c;
            hi.radii[j] += step;
            let mut lo = *c;
            lo.radii[j] -= step;
            let phi_hi = triple_angles(&hi, g)?[i];
            let phi_lo = triple_angles(&lo, g)?[i];
            // d/dlog rho = rho * d/drho
            Ok(c.radii[j] * (phi_hi - phi_lo) / (2.0 * step))
        }
    }
}

/// Margin of the derivative bound `d(phi0)/d(log rho_j) <= 2 phi0`, `j = 1, 2`,
/// for a euclidean triple. Returns `(margin, pass)` with
/// `margin = min_j (2 phi0 - d(phi0)/d(log rho_j))`.
pub fn derivative_bound_margin(c: &TripleConfig) -> Result<(f64, bool), GeomError> {
    let phi0 = triple_angles(c, Geometry::Euclidean)?[0];
    let d1 = dphi_dlogrho(c, 0, 1, Geometry::Euclidean)?;
    let d2 = dphi_dlogrho(c, 0, 2, Geometry::Euclidean)?;
    let margin = (2.0 * phi0 - d1).min(2.0 * phi0 - d2);
    Ok((margin, margin >= 0.0))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Circle {
    pub fn new(center: [f64; 2], radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0) {
            return Err(GeomError::NonPositiveRadius(radius));
        }
        Ok(Circle { center, radius })
    }
}

/// A Möbius image of a circle: either a circle or, when the source passes
/// through the pole of the map, a line.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum GeneralizedCircle {
    Circle(Circle),
    Line { point: [f64; 2], dir: [f64; 2] },
}

pub(crate) mod cx {
    //! Small complex-arithmetic helpers on `[f64; 2]`.
    pub type C = [f64; 2];

    pub fn add(a: C, b: C) -> C {
        [a[0] + b[0], a[1] + b[1]]
    }
    pub fn sub(a: C, b: C) -> C {
        [a[0] - b[0], a[1] - b[1]]
    }
    pub fn mul(a: C, b: C) -> C {
        [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]]
    }
    pub fn div(a: C, b: C) -> C {
        let d = b[0] * b[0] + b[1] * b[1];
        [(a[0] * b[0] + a[1] * b[1]) / d, (a[1] * b[0] - a[0] * b[1]) / d]
    }
    pub fn conj(a: C) -> C {
        [a[0], -a[1]]
    }
    pub fn abs(a: C) -> f64 {
        a[0].hypot(a[1])
    }
    pub fn polar(r: f64, phi: f64) -> C {
        [r * phi.cos(), r * phi.sin()]
    }
}

/// Automorphism of the unit disk: `z -> e^{i rotation} (z - a) / (1 - conj(a) z)`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskAutomorphism {
    pub a: [f64; 2],
    pub rotation: f64,
}

impl DiskAutomorphism {
    pub fn new(a: [f64; 2], rotation: f64) -> Result<Self, GeomError> {
        let n = cx::abs(a);
        if n >= 1.0 {
            return Err(GeomError::InvalidMobius(n));
        }
        Ok(DiskAutomorphism { a, rotation })
    }

    pub fn identity() -> Self {
        DiskAutomorphism { a: [0.0, 0.0], rotation: 0.0 }
    }

    pub fn apply(&self, z: [f64; 2]) -> [f64; 2] {
        let num = cx::sub(z, self.a);
        let den = cx::sub([1.0, 0.0], cx::mul(cx::conj(self.a), z));
        cx::mul(cx::polar(1.0, self.rotation), cx::div(num, den))
    }

    pub fn inverse(&self) -> Self {
        // w = e^{ip}(z-a)/(1-conj(a)z)  =>  z = (e^{-ip} w + a)/(1 + conj(a) e^{-ip} w)
        // which is the automorphism with a' = -e^{ip} a and rotation -p.
        let a_new = cx::mul(cx::polar(-1.0, self.rotation), self.a);
        DiskAutomorphism { a: a_new, rotation: -self.rotation }
    }

    /// The composition `self . first` (apply `first`, then `self`).
    pub fn compose(&self, first: &DiskAutomorphism) -> Self {
        // Matrix product of the two maps, renormalized to the standard form
        // e^{i phi} (z - a) / (1 - conj(a) z).
        let e1 = cx::polar(1.0, first.rotation);
        let e2 = cx::polar(1.0, self.rotation);
        let den_a = cx::add(e1, cx::mul(self.a, cx::conj(first.a)));
        let num_a = cx::add(cx::mul(e1, first.a), self.a);
        let a_new = cx::div(num_a, den_a);
        let top = cx::mul(e2, den_a);
        let bottom = cx::add([1.0, 0.0], cx::mul(cx::conj(self.a), cx::mul(e1, first.a)));
        let ratio = cx::div(top, bottom);
        DiskAutomorphism { a: a_new, rotation: ratio[1].atan2(ratio[0]) }
    }
}

/// Image of a circle under a disk automorphism, computed by mapping three
/// points and re-fitting. Circles through the pole map to lines.
pub fn mobius_on_circle(m: &DiskAutomorphism, c: &Circle) -> GeneralizedCircle {
    let pts: Vec<[f64; 2]> = [0.0, 2.0 * std::f64::consts::FRAC_PI_3, 4.0 * std::f64::consts::FRAC_PI_3]
        .iter()
        .map(|&t| m.apply(cx::add(c.center, cx::polar(c.radius, t))))
        .collect();
    circle_through(pts[0], pts[1], pts[2])
}

/// Circle (or line, if collinear) through three points.
pub fn circle_through(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> GeneralizedCircle {
    let d = 2.0 * (p[0] * (q[1] - r[1]) + q[0] * (r[1] - p[1]) + r[0] * (p[1] - q[1]));
    let scale = (p[0].hypot(p[1]) + q[0].hypot(q[1]) + r[0].hypot(r[1])).max(1.0);
    if d.abs() < 1e-12 * scale * scale {
        let dir = cx::sub(q, p);
        let n = cx::abs(dir).max(1e-300);
        return GeneralizedCircle::Line { point: p, dir: [dir[0] / n, dir[1] / n] };
    }
    let p2 = p[0] * p[0] + p[1] * p[1];
    let q2 = q[0] * q[0] + q[1] * q[1];
    let r2 = r[0] * r[0] + r[1] * r[1];
    let ux = (p2 * (q[1] - r[1]) + q2 * (r[1] - p[1]) + r2 * (p[1] - q[1])) / d;
    let uy = (p2 * (r[0] - q[0]) + q2 * (p[0] - r[0]) + r2 * (q[0] - p[0])) / d;
    let center = [ux, uy];
    GeneralizedCircle::Circle(Circle { center, radius: cx::abs(cx::sub(p, center)) })
}

/// Hyperbolic radius of a disk whose closure lies inside the open unit disk.
///
/// Measured along the diameter through the origin: for a disk centered at
/// euclidean distance `c` with euclidean radius `r`,
/// `rho_hyp = artanh(c + r) - artanh(c - r)`; a disk centered at the origin
/// gives `log((1 + r) / (1 - r))`.
pub fn hyperbolic_radius(c: &Circle) -> Result<f64, GeomError> {
    let n = cx::abs(c.center);
    if n + c.radius >= 1.0 {
        return Err(GeomError::OutsideUnitDisk);
    }
    Ok((n + c.radius).atanh() - (n - c.radius).atanh())
}

/// Hyperbolic center (as a point of the disk model) of a euclidean circle
/// strictly inside the unit disk.
pub fn hyperbolic_center(c: &Circle) -> Result<[f64; 2], GeomError> {
    let n = cx::abs(c.center);
    if n + c.radius >= 1.0 {
        return Err(GeomError::OutsideUnitDisk);
    }
    if n == 0.0 {
        return Ok([0.0, 0.0]);
    }
    let mid = (((n + c.radius).atanh() + (n - c.radius).atanh()) * 0.5).tanh();
    Ok([c.center[0] / n * mid, c.center[1] / n * mid])
}

/// Euclidean circle realizing the hyperbolic disk of radius `rho` centered at
/// the model point `p`.
pub fn circle_from_hyperbolic(p: [f64; 2], rho: f64) -> Circle {
    let n = cx::abs(p);
    let d = 2.0 * n.atanh();
    let far = ((d + rho) * 0.5).tanh();
    let near = ((d - rho) * 0.5).tanh();
    let (ux, uy) = if n == 0.0 { (1.0, 0.0) } else { (p[0] / n, p[1] / n) };
    let mid = (far + near) * 0.5;
    Circle { center: [ux * mid, uy * mid], radius: (far - near) * 0.5 }
}

/// Hyperbolic distance between two points of the disk model.
pub fn hyperbolic_distance(z: [f64; 2], w: [f64; 2]) -> f64 {
    let num = cx::abs(cx::sub(z, w));
    let den = cx::abs(cx::sub([1.0, 0.0], cx::mul(cx::conj(z), w)));
    2.0 * (num / den).atanh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    const E: Geometry = Geometry::Euclidean;
    const H: Geometry = Geometry::Hyperbolic;

    fn random_triple_gated(
        rng: &mut impl Rng,
        lo: f64,
        hi: f64,
        min_rel_slack: f64,
    ) -> TripleConfig {
        loop {
            let r = [
                10f64.powf(rng.gen_range(lo..hi)),
                10f64.powf(rng.gen_range(lo..hi)),
                10f64.powf(rng.gen_range(lo..hi)),
            ];
            let t = [
                rng.gen_range(0.0..FRAC_PI_2),
                rng.gen_range(0.0..FRAC_PI_2),
                rng.gen_range(0.0..FRAC_PI_2),
            ];
            let c = TripleConfig::new(r, t).unwrap();
            if let Ok(sides) = c.side_lengths(E) {
                let perim: f64 = sides.iter().sum();
                let slack = (0..3)
                    .map(|k| sides[(k + 1) % 3] + sides[(k + 2) % 3] - sides[k])
                    .fold(f64::MAX, f64::min);
                if slack >= min_rel_slack * perim {
                    return c;
                }
            }
        }
    }

    fn random_triple(rng: &mut impl Rng, lo: f64, hi: f64) -> TripleConfig {
        random_triple_gated(rng, lo, hi, 1e-9)
    }

    /// Fourth-order central difference of `phi_i` in `log rho_j`.
    pub(super) fn fd_dphi(c: &TripleConfig, i: usize, j: usize, h: f64) -> f64 {
        let eval = |scale: f64| {
            let mut p = *c;
            p.radii[j] *= scale.exp();
            triple_angles(&p, E).unwrap()[i]
        };
        (8.0 * (eval(h) - eval(-h)) - (eval(2.0 * h) - eval(-2.0 * h))) / (12.0 * h)
    }

    #[test]
    fn tangent_disks_touch_at_radius_sum() {
        assert_eq!(center_distance(1.0, 1.0, 0.0, E).unwrap(), 2.0);
        assert!((center_distance(1.0, 1.0, 0.0, H).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_disks_follow_pythagoras() {
        assert!((center_distance(3.0, 4.0, FRAC_PI_2, E).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn center_distance_matches_tangent_line_angle() {
        // Independent check of the two-disk law: intersect the circles
        // numerically and measure the angle between tangent directions.
        let (r1, r2, theta) = (1.0, 1.0, FRAC_PI_3);
        let d = center_distance(r1, r2, theta, E).unwrap();
        assert!((d - 3f64.sqrt()).abs() < 1e-12);
        // Circle centers at (0,0) and (d,0); intersection point.
        let x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
        let y = (r1 * r1 - x * x).sqrt();
        // Clockwise tangent of circle 1 at p, counterclockwise tangent of circle 2.
        let t1 = [y, -x];
        let t2 = [-y, x - d];
        let dot = t1[0] * t2[0] + t1[1] * t2[1];
        let ang = (dot / (t1[0].hypot(t1[1]) * t2[0].hypot(t2[1]))).acos();
        assert!((ang - theta).abs() < 1e-12, "measured {ang}, wanted {theta}");
    }

    #[test]
    fn nonpositive_radius_is_rejected() {
        assert!(center_distance(0.0, 1.0, 0.0, E).is_err());
        assert!(center_distance(1.0, -2.0, 0.0, E).is_err());
    }

    #[test]
    fn equilateral_triples() {
        let c = TripleConfig::new([1.0; 3], [0.0; 3]).unwrap();
        let phi = triple_angles(&c, E).unwrap();
        for p in phi {
            assert!((p - FRAC_PI_3).abs() < 1e-14);
        }
        // All-orthogonal unit triple: sides sqrt(2), still equilateral.
        let c = TripleConfig::new([1.0; 3], [FRAC_PI_2; 3]).unwrap();
        let phi = triple_angles(&c, E).unwrap();
        for p in phi {
            assert!((p - FRAC_PI_3).abs() < 1e-14);
        }
    }

    #[test]
    fn square_grid_triple_angles() {
        let r = 0.5f64.sqrt();
        let c = TripleConfig::new([r, r, r], [FRAC_PI_2, FRAC_PI_2, 0.0]).unwrap();
        let [d01, d02, d12] = c.side_lengths(E).unwrap();
        assert!((d01 - 1.0).abs() < 1e-14 && (d02 - 1.0).abs() < 1e-14);
        assert!((d12 - 2f64.sqrt()).abs() < 1e-14);
        let phi = triple_angles(&c, E).unwrap();
        assert!((phi[0] - FRAC_PI_2).abs() < 1e-13);
        assert!((phi[1] - PI / 4.0).abs() < 1e-13);
        assert!((phi[2] - PI / 4.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_triple_is_reported() {
        // Tangent chain: d01 = 3, d02 = 1, d12 = 2 exactly.
        let c = TripleConfig::new([2.0, 1.0, 1e-12], [0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(c.side_lengths(E), Err(GeomError::DegenerateTriple(..))));
    }

    #[test]
    fn angle_sum_is_pi_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let c = random_triple(&mut rng, -3.0, 3.0);
            let phi = triple_angles(&c, E).unwrap();
            let sum: f64 = phi.iter().sum();
            assert!((sum - PI).abs() < 1e-12, "sum {sum} for {c:?}");
        }
    }

    #[test]
    fn angles_are_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let c = random_triple(&mut rng, -2.0, 2.0);
            let phi = triple_angles(&c, E).unwrap();
            let scaled = TripleConfig::new(
                [c.radii[0] * 7.3, c.radii[1] * 7.3, c.radii[2] * 7.3],
                c.theta,
            )
            .unwrap();
            let phi2 = triple_angles(&scaled, E).unwrap();
            for k in 0..3 {
                assert!((phi[k] - phi2[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn radical_point_of_unit_tangent_triple() {
        let c = TripleConfig::new([1.0; 3], [0.0; 3]).unwrap();
        let rad = radical_point(&c).unwrap();
        // Incenter of the side-2 equilateral triangle; feet all 1/sqrt(3).
        let h = 1.0 / 3f64.sqrt();
        for k in 0..3 {
            assert!((rad.feet[k] - h).abs() < 1e-14, "foot {k} = {}", rad.feet[k]);
        }
        // Equal power of the point with respect to all three circles.
        let pow = |a: [f64; 2], r: f64| {
            let dx = rad.point[0] - a[0];
            let dy = rad.point[1] - a[1];
            dx * dx + dy * dy - r * r
        };
        let p0 = pow(rad.corners[0], 1.0);
        assert!((p0 - pow(rad.corners[1], 1.0)).abs() < 1e-13);
        assert!((p0 - pow(rad.corners[2], 1.0)).abs() < 1e-13);
    }

    #[test]
    fn radical_point_lands_on_side_for_square_grid_triple() {
        let r = 0.5f64.sqrt();
        let c = TripleConfig::new([r, r, r], [FRAC_PI_2, FRAC_PI_2, 0.0]).unwrap();
        let rad = radical_point(&c).unwrap();
        assert!(rad.feet[2].abs() < 1e-13, "h12 = {}", rad.feet[2]);
    }

    #[test]
    fn radical_point_inside_triangle_with_nonnegative_feet() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2000 {
            let c = random_triple(&mut rng, -2.0, 2.0);
            let rad = radical_point(&c).unwrap();
            // Barycentric coordinates of the point must be >= -tol.
            let [a0, a1, a2] = rad.corners;
            let area2 = (a1[0] - a0[0]) * (a2[1] - a0[1]) - (a1[1] - a0[1]) * (a2[0] - a0[0]);
            let w0 = ((a1[0] - rad.point[0]) * (a2[1] - rad.point[1])
                - (a1[1] - rad.point[1]) * (a2[0] - rad.point[0]))
                / area2;
            let w1 = ((a2[0] - rad.point[0]) * (a0[1] - rad.point[1])
                - (a2[1] - rad.point[1]) * (a0[0] - rad.point[0]))
                / area2;
            let w2 = 1.0 - w0 - w1;
            assert!(w0 > -1e-9 && w1 > -1e-9 && w2 > -1e-9, "point outside: {w0} {w1} {w2}");
        }
    }

    #[test]
    fn derivative_closed_form_values() {
        let c = TripleConfig::new([1.0; 3], [0.0; 3]).unwrap();
        let d = dphi_dlogrho(&c, 0, 1, E).unwrap();
        assert!((d - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-14);

        let r = 0.5f64.sqrt();
        let sq = TripleConfig::new([r, r, r], [FRAC_PI_2, FRAC_PI_2, 0.0]).unwrap();
        let d = dphi_dlogrho(&sq, 1, 2, E).unwrap();
        assert!(d.abs() < 1e-13, "expected 0 across the split side, got {d}");
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..500 {
            let c = random_triple_gated(&mut rng, -1.5, 1.5, 1e-3);
            for (i, j) in [(0usize, 1usize), (0, 2), (1, 2), (1, 0)] {
                let cf = dphi_dlogrho(&c, i, j, E).unwrap();
                let fd = fd_dphi(&c, i, j, 3e-5);
                let phi = triple_angles(&c, E).unwrap()[i];
                let scale = cf.abs().max(fd.abs()).max(phi * 1e-3);
                assert!((cf - fd).abs() <= 1e-6 * scale, "cf {cf} fd {fd} triple {c:?}");
            }
        }
    }

    #[test]
    fn derivative_is_symmetric_in_corner_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..2000 {
            let c = random_triple(&mut rng, -2.0, 2.0);
            for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
                let a = dphi_dlogrho(&c, i, j, E).unwrap();
                let b = dphi_dlogrho(&c, j, i, E).unwrap();
                assert!((a - b).abs() < 1e-9 * a.abs().max(b.abs()).max(1.0));
            }
        }
    }

    #[test]
    fn phi_nondecreasing_in_neighbor_radii() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..500 {
            let c = random_triple(&mut rng, -1.0, 1.0);
            for j in [1usize, 2usize] {
                let d = dphi_dlogrho(&c, 0, j, E).unwrap();
                assert!(d >= -1e-10, "phi0 decreasing in rho{j}: {d}");
            }
        }
    }

    #[test]
    fn derivative_bound_holds_on_random_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20000 {
            let c = random_triple(&mut rng, -3.0, 3.0);
            let (margin, pass) = derivative_bound_margin(&c).unwrap();
            assert!(pass, "bound violated with margin {margin} on {c:?}");
        }
    }

    #[test]
    fn hyperbolic_derivative_matches_euclidean_limit_for_small_radii() {
        // For tiny radii the hyperbolic plane is locally euclidean.
        let c = TripleConfig::new([1e-3; 3], [0.0; 3]).unwrap();
        let dh = dphi_dlogrho(&c, 0, 1, H).unwrap();
        let de = dphi_dlogrho(&c, 0, 1, E).unwrap();
        assert!((dh - de).abs() < 1e-5, "hyp {dh} vs euclid {de}");
    }

    #[test]
    fn mobius_identity_fixes_circles() {
        let m = DiskAutomorphism::identity();
        let c = Circle::new([0.3, 0.1], 0.2).unwrap();
        match mobius_on_circle(&m, &c) {
            GeneralizedCircle::Circle(img) => {
                assert!((img.center[0] - 0.3).abs() < 1e-12);
                assert!((img.center[1] - 0.1).abs() < 1e-12);
                assert!((img.radius - 0.2).abs() < 1e-12);
            }
            _ => panic!("expected a circle"),
        }
    }

    #[test]
    fn mobius_centered_circle_radius_formula() {
        // Circle of radius r about 0 mapped by a real translation parameter a:
        // the image has radius r (1 - a^2) / (1 - a^2 r^2).
        let (r, a) = (0.4, 0.35);
        let m = DiskAutomorphism::new([a, 0.0], 0.0).unwrap();
        let c = Circle::new([0.0, 0.0], r).unwrap();
        match mobius_on_circle(&m, &c) {
            GeneralizedCircle::Circle(img) => {
                let expect = r * (1.0 - a * a) / (1.0 - a * a * r * r);
                assert!((img.radius - expect).abs() < 1e-12, "{} vs {expect}", img.radius);
            }
            _ => panic!("expected a circle"),
        }
    }

    #[test]
    fn mobius_preserves_internal_tangency() {
        let c = Circle::new([0.7, 0.0], 0.3).unwrap(); // tangent to the unit circle
        let m = DiskAutomorphism::new([0.2, 0.4], 1.1).unwrap();
        match mobius_on_circle(&m, &c) {
            GeneralizedCircle::Circle(img) => {
                let gap = cx::abs(img.center) + img.radius - 1.0;
                assert!(gap.abs() < 1e-12, "tangency broken by {gap}");
            }
            _ => panic!("expected a circle"),
        }
    }

    #[test]
    fn mobius_composition_matches_sequential_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..200 {
            let m1 = DiskAutomorphism::new(
                [rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)],
                rng.gen_range(0.0..PI),
            )
            .unwrap();
            let m2 = DiskAutomorphism::new(
                [rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)],
                rng.gen_range(0.0..PI),
            )
            .unwrap();
            let m = m2.compose(&m1);
            for _ in 0..5 {
                let z = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
                let w1 = m2.apply(m1.apply(z));
                let w2 = m.apply(z);
                assert!(cx::abs(cx::sub(w1, w2)) < 1e-9, "{w1:?} vs {w2:?}");
            }
        }
    }

    #[test]
    fn mobius_rejects_parameter_outside_disk() {
        assert!(DiskAutomorphism::new([1.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn hyperbolic_radius_of_centered_circle() {
        let c = Circle::new([0.0, 0.0], 1.0 / 3.0).unwrap();
        let rho = hyperbolic_radius(&c).unwrap();
        assert!((rho - 2f64.ln()).abs() < 1e-14, "rho = {rho}");

        // Quadrature oracle: integrate 2/(1-t^2) dt from 0 to r by Simpson.
        let r = 1.0 / 3.0;
        let n = 2000;
        let h = r / n as f64;
        let f = |t: f64| 2.0 / (1.0 - t * t);
        let mut s = f(0.0) + f(r);
        for k in 1..n {
            s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let quad = s * h / 3.0;
        assert!((rho - quad).abs() < 1e-10, "rho {rho} vs quadrature {quad}");
    }

    #[test]
    fn hyperbolic_radius_vanishes_with_euclidean_radius() {
        let mut prev = f64::INFINITY;
        for &r in &[1e-2, 1e-4, 1e-6, 1e-8] {
            let c = Circle::new([0.0, 0.0], r).unwrap();
            let rho = hyperbolic_radius(&c).unwrap();
            assert!(rho < prev && rho > 0.0);
            prev = rho;
        }
        assert!(prev < 1e-7);
    }

    #[test]
    fn hyperbolic_radius_rejects_disks_meeting_the_boundary() {
        let c = Circle::new([0.8, 0.0], 0.25).unwrap();
        assert!(matches!(hyperbolic_radius(&c), Err(GeomError::OutsideUnitDisk)));
    }

    #[test]
    fn hyperbolic_center_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..500 {
            let p = [rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)];
            if cx::abs(p) >= 0.9 {
                continue;
            }
            let rho = rng.gen_range(0.01..1.5);
            let circ = circle_from_hyperbolic(p, rho);
            let p2 = hyperbolic_center(&circ).unwrap();
            let rho2 = hyperbolic_radius(&circ).unwrap();
            assert!(cx::abs(cx::sub(p, p2)) < 1e-10);
            assert!((rho - rho2).abs() < 1e-10);
        }
    }

    #[test]
    fn dihedral_recovery_anchor_cases() {
        assert!((dihedral_from_geometry(5.0, 3.0, 4.0) - FRAC_PI_2).abs() < 1e-14);
        assert_eq!(dihedral_from_geometry(2.0, 1.0, 1.0), 0.0);
        let d = center_distance(1.0, 2.0, 0.7, E).unwrap();
        assert!((dihedral_from_geometry(d, 1.0, 2.0) - 0.7).abs() < 1e-13);
    }
}
