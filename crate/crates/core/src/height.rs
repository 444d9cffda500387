//! Sawtooth heights and the finite search replacing the density argument.
//!
//! A component parameterized by normalized arc length `t ∈ [0, 1)` gets the
//! height `z(t) = 2·|frac(f·t + φ) − 1/2|`. For fixed `f`, every requirement
//! on heights (a band for one arc, an order between two arcs) is a finite
//! union of intervals in `φ`, because `z` is piecewise linear in `φ` with
//! breakpoints where `f·t + φ` crosses `Z/2`. The search intersects those
//! sets exactly instead of sampling `φ`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::billiard::Contact;
use crate::error::{Error, Result};
use crate::geom::{QPoint, RPoint};
use crate::perturb::{ArcTable, PerturbedPolygon};
use crate::real::Real;

pub const DEFAULT_F_MAX: u64 = 100_000;
pub const DEFAULT_MARGIN: f64 = 1e-3;
/// Phase candidates tried per component before the last one in a link search.
pub const LINK_CANDIDATES: usize = 192;
const MIN_WIDTH: f64 = 1e-12;

/// `2·|frac(u) − 1/2|`.
pub fn tent(u: f64) -> f64 {
    2.0 * (u - u.floor() - 0.5).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SawtoothHeight {
    pub f: u64,
    pub phi: f64,
    /// `z(0)`; anchoring with `φ = 1/2 + z0/2` reproduces it
    pub z0: f64,
}

impl SawtoothHeight {
    pub fn new(f: u64, phi: f64) -> Self {
        let phi = phi - phi.floor();
        SawtoothHeight { f, phi, z0: tent(phi) }
    }

    /// `φ = 1/2 + z0/2`, so that `z(0) = z0`.
    pub fn anchored(f: u64, z0: f64) -> Self {
        SawtoothHeight::new(f, 0.5 + z0 / 2.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        evaluate_sawtooth(self, t)
    }

    pub fn eval_real(&self, t: &Real) -> Real {
        let prec = t.precision();
        let u = &(&Real::from_i64(self.f as i64, prec) * t) + &Real::from_f64(self.phi, prec);
        let half = Real::from_f64(0.5, prec);
        &Real::from_i64(2, prec) * &(&u.fract() - &half).abs()
    }
}

pub fn evaluate_sawtooth(s: &SawtoothHeight, t: f64) -> f64 {
    tent(s.f as f64 * t + s.phi)
}

/// Sorted, disjoint closed intervals inside `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet(pub Vec<(f64, f64)>);

impl IntervalSet {
    pub fn full() -> Self {
        IntervalSet(vec![(0.0, 1.0)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn from_unsorted(mut v: Vec<(f64, f64)>) -> Self {
        v.retain(|&(a, b)| b >= a);
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalSet(out)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.0.len() && j < other.0.len() {
            let (a0, a1) = self.0[i];
            let (b0, b1) = other.0[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet(out)
    }

    pub fn measure(&self) -> f64 {
        self.0.iter().map(|(a, b)| b - a).sum()
    }

    /// Midpoint of the widest interval, if it has positive width.
    pub fn widest_midpoint(&self) -> Option<f64> {
        self.0
            .iter()
            .filter(|(a, b)| b - a > MIN_WIDTH)
            .max_by(|x, y| (x.1 - x.0).total_cmp(&(y.1 - y.0)))
            .map(|(a, b)| (a + b) / 2.0)
    }

    /// Up to `cap` points spread evenly over the set by measure.
    pub fn spread(&self, cap: usize) -> Vec<f64> {
        let total = self.measure();
        let intervals: Vec<&(f64, f64)> = self.0.iter().filter(|(a, b)| b - a > MIN_WIDTH).collect();
        if intervals.is_empty() || cap == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for k in 0..cap {
            let mut target = total * (k as f64 + 0.5) / cap as f64;
            for &&(a, b) in &intervals {
                if target <= b - a {
                    out.push(a + target);
                    break;
                }
                target -= b - a;
            }
        }
        // every interval gets at least its midpoint
        for &&(a, b) in &intervals {
            if !out.iter().any(|&x| x >= a && x <= b) {
                out.push((a + b) / 2.0);
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// `{φ ∈ [0,1) : frac(c + φ) ∈ [a, b]}` for `0 ≤ a ≤ b ≤ 1`.
fn shifted(a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let c = c - c.floor();
    let (lo, hi) = (a - c, b - c);
    let mut out = Vec::new();
    for shift in [-1.0, 0.0, 1.0] {
        let (l, h) = ((lo + shift).max(0.0), (hi + shift).min(1.0));
        if l <= h {
            out.push((l, h));
        }
    }
    out
}

/// Phases with `tent(c + φ) ∈ [lo, hi]`.
pub fn band_set(c: f64, lo: f64, hi: f64) -> IntervalSet {
    let lo = lo.max(0.0);
    let hi = hi.min(1.0);
    if lo > hi {
        return IntervalSet(Vec::new());
    }
    let mut v = shifted((1.0 - hi) / 2.0, (1.0 - lo) / 2.0, c);
    v.extend(shifted((1.0 + lo) / 2.0, (1.0 + hi) / 2.0, c));
    IntervalSet::from_unsorted(v)
}

/// Phases with `tent(c1 + φ) − tent(c2 + φ) ≥ margin`.
pub fn order_set(c1: f64, c2: f64, margin: f64) -> IntervalSet {
    let mut cuts = vec![0.0, 1.0];
    for c in [c1, c2] {
        for k in [0.0, 0.5] {
            let x = k - c;
            cuts.push(x - x.floor());
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let g = |phi: f64| tent(c1 + phi) - tent(c2 + phi);
    let mut v = Vec::new();
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let (g0, g1) = (g(x0), g(x1));
        match (g0 >= margin, g1 >= margin) {
            (true, true) => v.push((x0, x1)),
            (false, false) => {}
            (true, false) => v.push((x0, x0 + (margin - g0) / (g1 - g0) * (x1 - x0))),
            (false, true) => v.push((x0 + (margin - g0) / (g1 - g0) * (x1 - x0), x1)),
        }
    }
    IntervalSet::from_unsorted(v)
}

/// A requirement on one sawtooth, stated on arcs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    /// `z(arc) ∈ [lo, hi]`
    Band { arc: f64, lo: f64, hi: f64 },
    /// `z(over) − z(under) ≥ margin`
    Order { over: f64, under: f64, margin: f64 },
}

fn frac_mul(f: u64, t: f64) -> f64 {
    let u = f as f64 * t;
    u - u.floor()
}

impl Target {
    pub fn phases(&self, f: u64) -> IntervalSet {
        match *self {
            Target::Band { arc, lo, hi } => band_set(frac_mul(f, arc), lo, hi),
            Target::Order { over, under, margin } => order_set(frac_mul(f, over), frac_mul(f, under), margin),
        }
    }

    pub fn holds(&self, s: &SawtoothHeight) -> bool {
        match *self {
            Target::Band { arc, lo, hi } => {
                let z = s.eval(arc);
                z >= lo && z <= hi
            }
            Target::Order { over, under, margin } => s.eval(over) - s.eval(under) >= margin,
        }
    }
}

/// Exact feasible phases for one frequency.
pub fn feasible_phases(f: u64, targets: &[Target]) -> IntervalSet {
    let mut set = IntervalSet::full();
    for t in targets {
        set = set.intersect(&t.phases(f));
        if set.is_empty() {
            break;
        }
    }
    set
}

/// Smallest `f ≤ f_max` admitting a phase, with the phase at the middle of
/// the widest feasible interval.
pub fn solve_targets(targets: &[Target], f_max: u64) -> Option<SawtoothHeight> {
    (1..=f_max).find_map(|f| feasible_phases(f, targets).widest_midpoint().map(|phi| SawtoothHeight::new(f, phi)))
}

/// Largest number of targets met by one phase at frequency `f` (a sweep
/// over interval endpoints).
pub fn max_satisfiable(f: u64, targets: &[Target]) -> usize {
    let mut events: Vec<(f64, i32)> = Vec::new();
    for t in targets {
        for &(a, b) in &t.phases(f).0 {
            events.push((a, 1));
            events.push((b, -1));
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.cmp(&x.1)));
    let mut depth = 0;
    let mut best = 0;
    for (_, d) in events {
        depth += d;
        best = best.max(depth);
    }
    best as usize
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeightConstraint {
    pub crossing: usize,
    pub first_component: usize,
    pub first_arc: f64,
    pub second_component: usize,
    pub second_arc: f64,
    pub first_over: bool,
}

impl HeightConstraint {
    fn over_under(&self) -> ((usize, f64), (usize, f64)) {
        let first = (self.first_component, self.first_arc);
        let second = (self.second_component, self.second_arc);
        if self.first_over {
            (first, second)
        } else {
            (second, first)
        }
    }
}

/// Everything the search needs: per component the arcs that must stay clear
/// of the floor and ceiling (vertices and passages), and the crossings.
#[derive(Clone, Debug)]
pub struct HeightProblem {
    pub clear_arcs: Vec<Vec<f64>>,
    pub constraints: Vec<HeightConstraint>,
}

impl HeightProblem {
    pub fn from_table(table: &ArcTable, first_over: &[bool]) -> HeightProblem {
        let mut clear_arcs: Vec<Vec<f64>> = table.vertex_arcs.iter().map(|v| v.iter().map(Real::to_f64).collect()).collect();
        for (c, list) in table.passages.iter().enumerate() {
            clear_arcs[c].extend(list.iter().map(|(_, t)| t.to_f64()));
        }
        let constraints = table
            .crossing_passages
            .iter()
            .enumerate()
            .map(|(id, [a, b])| HeightConstraint {
                crossing: id,
                first_component: a.component,
                first_arc: a.arc.to_f64(),
                second_component: b.component,
                second_arc: b.arc.to_f64(),
                first_over: first_over[id],
            })
            .collect();
        HeightProblem { clear_arcs, constraints }
    }

    pub fn component_count(&self) -> usize {
        self.clear_arcs.len()
    }

    /// Targets on component `c` given the already fixed heights of
    /// components before it.
    fn targets_for(&self, c: usize, fixed: &[SawtoothHeight], margin: f64) -> Vec<Target> {
        let mut out: Vec<Target> = Vec::new();
        for x in &self.constraints {
            let ((oc, ot), (uc, ut)) = x.over_under();
            if oc == c && uc == c {
                out.push(Target::Order { over: ot, under: ut, margin });
            } else if oc == c && uc < c {
                let zu = fixed[uc].eval(ut);
                out.push(Target::Band { arc: ot, lo: zu + margin, hi: 1.0 });
            } else if uc == c && oc < c {
                let zo = fixed[oc].eval(ot);
                out.push(Target::Band { arc: ut, lo: 0.0, hi: zo - margin });
            }
        }
        // selective bands first, so most frequencies fail early
        let clear = self.clear_arcs[c].iter().map(|&arc| Target::Band { arc, lo: margin, hi: 1.0 - margin });
        let mut all: Vec<Target> = out.iter().copied().filter(|t| matches!(t, Target::Band { .. })).collect();
        all.extend(out.iter().copied().filter(|t| matches!(t, Target::Order { .. })));
        all.extend(clear);
        all
    }

    /// Check a full assignment directly.
    pub fn satisfied_by(&self, heights: &[SawtoothHeight], margin: f64) -> bool {
        let z = |c: usize, t: f64| heights[c].eval(t);
        let eps = 1e-12;
        self.constraints.iter().all(|x| {
            let ((oc, ot), (uc, ut)) = x.over_under();
            z(oc, ot) - z(uc, ut) >= margin - eps
        }) && self
            .clear_arcs
            .iter()
            .enumerate()
            .all(|(c, arcs)| arcs.iter().all(|&t| z(c, t) >= margin - eps && z(c, t) <= 1.0 - margin + eps))
    }
}

/// Frequency tuples ordered by their maximum, then lexicographically.
fn tuples_with_max(m: u64, len: usize, out: &mut Vec<Vec<u64>>) {
    fn rec(m: u64, len: usize, cur: &mut Vec<u64>, has_max: bool, out: &mut Vec<Vec<u64>>) {
        if cur.len() == len {
            if has_max {
                out.push(cur.clone());
            }
            return;
        }
        for f in 1..=m {
            cur.push(f);
            rec(m, len, cur, has_max || f == m, out);
            cur.pop();
        }
    }
    rec(m, len, &mut Vec::new(), false, out);
}

fn dfs(problem: &HeightProblem, freqs: &[u64], fixed: &mut Vec<SawtoothHeight>, margin: f64) -> bool {
    let c = fixed.len();
    if c == freqs.len() {
        return true;
    }
    let targets = problem.targets_for(c, fixed, margin);
    let set = feasible_phases(freqs[c], &targets);
    if c + 1 == freqs.len() {
        if let Some(phi) = set.widest_midpoint() {
            fixed.push(SawtoothHeight::new(freqs[c], phi));
            return true;
        }
        return false;
    }
    for phi in set.spread(LINK_CANDIDATES) {
        fixed.push(SawtoothHeight::new(freqs[c], phi));
        if dfs(problem, freqs, fixed, margin) {
            return true;
        }
        fixed.pop();
    }
    false
}

/// Per-component sawtooth parameters realizing every crossing with height
/// gap at least `margin`, every vertex and passage height inside
/// `[margin, 1 − margin]`.
pub fn search_heights(problem: &HeightProblem, f_max: u64, margin: f64) -> Result<Vec<SawtoothHeight>> {
    if !(margin > 0.0 && margin < 0.5) {
        return Err(Error::Domain(format!("margin {margin} must lie in (0, 1/2)")));
    }
    let n = problem.component_count();
    if n == 1 {
        let targets = problem.targets_for(0, &[], margin);
        if let Some(s) = solve_targets(&targets, f_max) {
            return Ok(vec![s]);
        }
    } else {
        for m in 1..=f_max {
            let mut tuples = Vec::new();
            tuples_with_max(m, n, &mut tuples);
            for freqs in tuples {
                let mut fixed = Vec::with_capacity(n);
                if dfs(problem, &freqs, &mut fixed, margin) {
                    return Ok(fixed);
                }
            }
            // the tuple count grows like m^n; stop once it is hopeless
            if (m as f64).powi(n as i32) > 5e7 {
                return Err(exhausted(problem, m, margin));
            }
        }
    }
    Err(exhausted(problem, f_max, margin))
}

fn exhausted(problem: &HeightProblem, f_max: u64, margin: f64) -> Error {
    let total = problem.constraints.len();
    let diagnostics = if problem.component_count() == 1 {
        let orders: Vec<Target> = problem
            .constraints
            .iter()
            .map(|x| {
                let ((_, o), (_, u)) = x.over_under();
                Target::Order { over: o, under: u, margin }
            })
            .collect();
        let probe = f_max.min(2000);
        let (best, at) = (1..=probe).map(|f| (max_satisfiable(f, &orders), f)).max_by_key(|&(k, f)| (k, std::cmp::Reverse(f))).unwrap_or((0, 1));
        format!("at most {best} of {total} crossing constraints hold together (best f = {at}, scanned f ≤ {probe})")
    } else {
        format!("{total} crossing constraints across {} components", problem.component_count())
    };
    Error::SearchExhausted { f_max, diagnostics }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Wall,
    Floor,
    Ceiling,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub kind: PointKind,
    /// mirror index (flattened vertex order) of a wall contact
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror: Option<usize>,
    pub t: f64,
    pub xyz: [f64; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentPath {
    pub height: SawtoothHeight,
    /// exact floor projections of the wall contacts
    pub vertices: Vec<QPoint>,
    pub points: Vec<TrajectoryPoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PassageHeight {
    pub component: usize,
    pub chord: usize,
    pub arc: f64,
    pub z: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossingHeight {
    pub crossing: usize,
    pub first: PassageHeight,
    pub second: PassageHeight,
    pub first_over: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpatialTrajectory {
    pub components: Vec<ComponentPath>,
    pub crossings: Vec<CrossingHeight>,
}

impl SpatialTrajectory {
    pub fn contact_paths(&self) -> Vec<Vec<([f64; 3], Contact)>> {
        self.components
            .iter()
            .map(|c| {
                c.points
                    .iter()
                    .map(|p| {
                        let contact = match p.kind {
                            PointKind::Wall => Contact::Wall(p.mirror.unwrap_or(usize::MAX)),
                            PointKind::Floor => Contact::Floor,
                            PointKind::Ceiling => Contact::Ceiling,
                        };
                        (p.xyz, contact)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn wall_vertices(&self, prec: u32) -> Vec<Vec<RPoint>> {
        self.components.iter().map(|c| c.vertices.iter().map(|v| v.to_real(prec)).collect()).collect()
    }
}

/// The 3D polyline: wall vertices at their sawtooth heights plus a floor or
/// ceiling contact wherever `f·t + φ ∈ Z/2`.
pub fn emit_trajectory(
    poly: &PerturbedPolygon,
    table: &ArcTable,
    heights: &[SawtoothHeight],
    first_over: &[bool],
) -> Result<SpatialTrajectory> {
    if heights.len() != poly.components().len() {
        return Err(Error::DimensionMismatch(format!(
            "{} height functions for {} components",
            heights.len(),
            poly.components().len()
        )));
    }
    let prec = poly.precision();
    let one = Real::from_i64(1, prec);
    let mut components = Vec::new();
    for (c, comp) in poly.components().iter().enumerate() {
        let h = &heights[c];
        let f = Real::from_i64(h.f as i64, prec);
        let phi = Real::from_f64(h.phi, prec);
        let two = Real::from_i64(2, prec);
        let mut points = Vec::new();
        let mut vertices = Vec::new();
        for (j, &chord) in comp.iter().enumerate() {
            let v0 = table.vertex_arcs[c][j].clone();
            let v1 = if j + 1 < comp.len() { table.vertex_arcs[c][j + 1].clone() } else { one.clone() };
            let start = poly.chord_start(chord);
            let s = start.to_real(prec);
            let d = poly.chord_direction(chord).to_real(prec);
            vertices.push(start.clone());
            let [x, y] = s.to_f64();
            points.push(TrajectoryPoint {
                kind: PointKind::Wall,
                mirror: Some(poly.vertex_index(chord)),
                t: v0.to_f64(),
                xyz: [x, y, h.eval_real(&v0).to_f64()],
            });
            let u0 = &(&f * &v0) + &phi;
            let u1 = &(&f * &v1) + &phi;
            let k0: BigInt = (&two * &u0).floor() + 1;
            let k1: BigInt = (&two * &u1).floor();
            let mut k = k0;
            while k <= k1 {
                let kr = Real::from_bigint(k.clone(), prec);
                if (&kr / &two).exact_cmp(&u1) == Ordering::Equal {
                    break;
                }
                let t = &(&(&kr / &two) - &phi) / &f;
                let lambda = &(&t - &v0) / &(&v1 - &v0);
                let pt = s.add(&d.scale(&lambda));
                let [x, y] = pt.to_f64();
                let even = (&k % 2u32) == BigInt::from(0);
                let (kind, z) = if even { (PointKind::Ceiling, 1.0) } else { (PointKind::Floor, 0.0) };
                points.push(TrajectoryPoint { kind, mirror: None, t: t.to_f64(), xyz: [x, y, z] });
                k += 1;
            }
        }
        components.push(ComponentPath { height: *h, vertices, points });
    }
    let crossings = table
        .crossing_passages
        .iter()
        .enumerate()
        .map(|(id, [a, b])| {
            let ph = |p: &crate::star::Passage| PassageHeight {
                component: p.component,
                chord: p.chord,
                arc: p.arc.to_f64(),
                z: heights[p.component].eval_real(&p.arc).to_f64(),
            };
            CrossingHeight { crossing: id, first: ph(a), second: ph(b), first_over: first_over[id] }
        })
        .collect();
    Ok(SpatialTrajectory { components, crossings })
}
