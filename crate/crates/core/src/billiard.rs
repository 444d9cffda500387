//! Mirrors, mirror rooms, and the convex table they cut out.
//!
//! At a trajectory vertex `P_k` the mirror is the line through `P_k`
//! orthogonal to the internal bisector `u_k`. A closed polygon is a billiard
//! trajectory in the intersection of its mirror rooms when every other
//! vertex lies strictly on the bisector's side: `u_k · (P_i − P_k) > 0`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::RPoint;
use crate::real::Real;

pub const DEFAULT_MARGIN_FACTOR: f64 = 1e-12;

pub fn internal_bisector(prev: &RPoint, at: &RPoint, next: &RPoint) -> Result<RPoint> {
    let a = prev.sub(at);
    let b = next.sub(at);
    if a.x.is_zero() && a.y.is_zero() || b.x.is_zero() && b.y.is_zero() {
        return Err(Error::DegenerateAngle("repeated vertex".into()));
    }
    if a.cross(&b).is_zero() {
        return Err(Error::DegenerateAngle("collinear neighbours".into()));
    }
    let a = a.scale(&(Real::from_i64(1, a.x.precision()) / a.norm()));
    let b = b.scale(&(Real::from_i64(1, b.x.precision()) / b.norm()));
    let u = a.add(&b);
    Ok(u.scale(&(Real::from_i64(1, u.x.precision()) / u.norm())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Mirror {
    pub vertex: [f64; 2],
    /// unit internal bisector, pointing into the trajectory side
    pub normal: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MirrorRoomReport {
    pub pass: bool,
    /// `min u_k · (P_i − P_k)` over all pairs
    pub margin: f64,
    /// the pair attaining the minimum, in flattened vertex order
    pub witness: (usize, usize),
    pub threshold: f64,
}

/// Bisectors of every vertex, each computed within its own component.
pub fn bisectors(components: &[Vec<RPoint>]) -> Result<Vec<RPoint>> {
    let mut out = Vec::new();
    for comp in components {
        let m = comp.len();
        if m < 3 {
            return Err(Error::DegenerateAngle(format!("component with {m} vertices")));
        }
        for k in 0..m {
            out.push(internal_bisector(&comp[(k + m - 1) % m], &comp[k], &comp[(k + 1) % m])?);
        }
    }
    Ok(out)
}

pub fn diameter(points: &[RPoint]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max(a.sub(b).norm().to_f64());
        }
    }
    d
}

/// Strict mirror-room condition over all vertices of all components, with
/// margin `margin_factor × diameter`.
pub fn mirror_room_check(components: &[Vec<RPoint>], margin_factor: f64) -> Result<MirrorRoomReport> {
    let u = bisectors(components)?;
    let pts: Vec<RPoint> = components.iter().flatten().cloned().collect();
    let threshold = margin_factor * diameter(&pts);
    let mut best: Option<(Real, usize, usize)> = None;
    for (k, pk) in pts.iter().enumerate() {
        for (i, pi) in pts.iter().enumerate() {
            if i == k {
                continue;
            }
            let v = u[k].dot(&pi.sub(pk));
            if best.as_ref().map_or(true, |(b, _, _)| v < *b) {
                best = Some((v, k, i));
            }
        }
    }
    let (v, k, i) = best.ok_or_else(|| Error::DegenerateAngle("no vertex pairs".into()))?;
    let margin = v.to_f64();
    Ok(MirrorRoomReport { pass: margin > threshold, margin, witness: (k, i), threshold })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BilliardTable {
    /// one mirror per trajectory vertex, flattened component order
    pub mirrors: Vec<Mirror>,
    /// floor polygon `D`, counterclockwise
    pub floor: Vec<[f64; 2]>,
    /// mirror supporting the edge from `floor[i]` to `floor[i+1]`
    pub edge_mirrors: Vec<usize>,
    pub height: f64,
}

/// Intersection of the mirror half-planes `u_k · (x − P_k) ≥ 0`.
///
/// Every mirror touches the trajectory only at its own vertex, so each one
/// supports an edge of `D` and the edges follow the angular order of the
/// outward normals `−u_k`.
pub fn build_table(components: &[Vec<RPoint>]) -> Result<BilliardTable> {
    let u = bisectors(components)?;
    let pts: Vec<RPoint> = components.iter().flatten().cloned().collect();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let angle = |k: usize| {
        let [x, y] = u[k].to_f64();
        (-y).atan2(-x)
    };
    order.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
    let n = order.len();
    for w in 0..n {
        let (a, b) = (order[w], order[(w + 1) % n]);
        let mut gap = angle(b) - angle(a);
        if w + 1 == n {
            gap += 2.0 * std::f64::consts::PI;
        }
        if gap >= std::f64::consts::PI || (n > 1 && gap <= 0.0) {
            return Err(Error::UnboundedTable(format!("angular gap {gap:.6} between mirrors {a} and {b}")));
        }
    }
    let mut floor = Vec::with_capacity(n);
    for w in 0..n {
        let (a, b) = (order[w], order[(w + 1) % n]);
        // u_a·x = u_a·P_a, u_b·x = u_b·P_b
        let (ca, cb) = (u[a].dot(&pts[a]), u[b].dot(&pts[b]));
        let det = u[a].cross(&u[b]);
        if det.is_zero() {
            return Err(Error::UnboundedTable(format!("mirrors {a} and {b} are parallel")));
        }
        let x = &(&(&ca * &u[b].y) - &(&cb * &u[a].y)) / &det;
        let y = &(&(&cb * &u[a].x) - &(&ca * &u[b].x)) / &det;
        floor.push([x.to_f64(), y.to_f64()]);
    }
    // floor[w] ends edge w-1 and starts edge w: rotate so edge i runs floor[i] → floor[i+1]
    floor.rotate_right(1);
    let mirrors = pts.iter().zip(&u).map(|(p, u)| Mirror { vertex: p.to_f64(), normal: u.to_f64() }).collect();
    Ok(BilliardTable { mirrors, floor, edge_mirrors: order, height: 1.0 })
}

impl BilliardTable {
    /// Signed distance inside the floor polygon: positive in the interior.
    pub fn floor_depth(&self, p: [f64; 2]) -> f64 {
        self.mirrors
            .iter()
            .map(|m| m.normal[0] * (p[0] - m.vertex[0]) + m.normal[1] * (p[1] - m.vertex[1]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.floor.len();
        (0..n).all(|i| {
            let (a, b, c) = (self.floor[i], self.floor[(i + 1) % n], self.floor[(i + 2) % n]);
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) > 0.0
        })
    }

    /// Wavefront OBJ of the prism `D × [0, height]`.
    pub fn to_obj(&self) -> String {
        let n = self.floor.len();
        let mut s = String::from("# convex prism billiard table\n");
        for z in [0.0, self.height] {
            for v in &self.floor {
                let _ = writeln!(s, "v {:.12} {:.12} {:.12}", v[0], v[1], z);
            }
        }
        let bottom: Vec<String> = (1..=n).rev().map(|i| i.to_string()).collect();
        let top: Vec<String> = (n + 1..=2 * n).map(|i| i.to_string()).collect();
        let _ = writeln!(s, "f {}", bottom.join(" "));
        let _ = writeln!(s, "f {}", top.join(" "));
        for i in 0..n {
            let j = (i + 1) % n;
            let _ = writeln!(s, "f {} {} {} {}", i + 1, j + 1, j + n + 1, i + n + 1);
        }
        s
    }
}

/// One contact of a trajectory with the prism boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Contact {
    Wall(usize),
    Floor,
    Ceiling,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReflectionReport {
    pub pass: bool,
    pub max_error: f64,
    pub violations: Vec<String>,
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Check the reflection law at every point of closed 3D polylines and that
/// every point lies in the prism. Each point carries its contact face.
pub fn verify_reflection(paths: &[Vec<([f64; 3], Contact)>], table: &BilliardTable, tol: f64) -> ReflectionReport {
    let mut violations = Vec::new();
    let mut max_error: f64 = 0.0;
    for (c, path) in paths.iter().enumerate() {
        let m = path.len();
        for j in 0..m {
            let (p, contact) = path[j];
            let prev = path[(j + m - 1) % m].0;
            let next = path[(j + 1) % m].0;
            let depth = table.floor_depth([p[0], p[1]]);
            if depth < -tol || p[2] < -tol || p[2] > table.height + tol {
                violations.push(format!("point {j} of component {c} lies outside the prism"));
            }
            let d_in = unit([p[0] - prev[0], p[1] - prev[1], p[2] - prev[2]]);
            let d_out = unit([next[0] - p[0], next[1] - p[1], next[2] - p[2]]);
            let (normal, on_face) = match contact {
                Contact::Wall(k) => {
                    let Some(mirror) = table.mirrors.get(k) else {
                        violations.push(format!("unknown mirror {k} at vertex {j}"));
                        continue;
                    };
                    let u = mirror.normal;
                    let off = u[0] * (p[0] - mirror.vertex[0]) + u[1] * (p[1] - mirror.vertex[1]);
                    ([u[0], u[1], 0.0], off.abs())
                }
                Contact::Floor => ([0.0, 0.0, 1.0], p[2].abs()),
                Contact::Ceiling => ([0.0, 0.0, 1.0], (p[2] - table.height).abs()),
            };
            let dot = d_in[0] * normal[0] + d_in[1] * normal[1] + d_in[2] * normal[2];
            let reflected = [d_in[0] - 2.0 * dot * normal[0], d_in[1] - 2.0 * dot * normal[1], d_in[2] - 2.0 * dot * normal[2]];
            let err = (0..3).map(|i| (reflected[i] - d_out[i]).abs()).fold(0.0, f64::max);
            max_error = max_error.max(err).max(on_face);
            if err > tol || on_face > tol || !err.is_finite() {
                let at = match contact {
                    Contact::Wall(k) => format!("mirror {k}"),
                    Contact::Floor => "floor bounce".into(),
                    Contact::Ceiling => "ceiling bounce".into(),
                };
                violations.push(format!("reflection law violated at vertex {j} of component {c} ({at}, error {err:.3e})"));
            }
        }
    }
    ReflectionReport { pass: violations.is_empty(), max_error, violations }
}
