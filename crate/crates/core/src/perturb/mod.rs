//! Symmetry breaking: every chord of the star is replaced by a nearby line
//! `y = a x + b` with rational coefficients, and the resulting polygon is
//! accepted only if its crossing combinatorics equals the star's.
//!
//! The star is first rotated by the angle with tangent 1/17 so that no chord
//! is vertical. Vertices and crossing abscissas are exact rationals; lengths
//! involve `sqrt(1 + a²)` and are evaluated as [`Real`]s.

pub mod relation;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{qcross, ratio_str, QPoint, RPoint};
use crate::real::Real;
use crate::star::{Passage, StarDiagram};

pub use relation::{independence_check, required_precision, IndependenceReport};

pub const MAX_HALVINGS: u32 = 60;

/// `y = a x + b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    #[serde(with = "ratio_str")]
    pub a: BigRational,
    #[serde(with = "ratio_str")]
    pub b: BigRational,
}

impl Line {
    pub fn meet(&self, other: &Line) -> Option<QPoint> {
        let da = &other.a - &self.a;
        if da.is_zero() {
            return None;
        }
        let x = (&self.b - &other.b) / da;
        let y = &self.a * &x + &self.b;
        Some(QPoint::new(x, y))
    }
}

#[derive(Clone, Debug)]
pub struct PolyCrossing {
    pub id: usize,
    pub chord_a: usize,
    pub chord_b: usize,
    /// `x_{a,b} = (b_a − b_b)/(a_b − a_a)`
    pub x: BigRational,
    pub point: QPoint,
}

#[derive(Clone, Debug)]
pub struct PerturbedPolygon {
    p: usize,
    q: usize,
    precision: u32,
    delta: BigRational,
    seed: u64,
    attempt: u32,
    lines: Vec<Line>,
    components: Vec<Vec<usize>>,
    chord_slot: Vec<(usize, usize)>,
    starts: Vec<QPoint>,
    crossings: Vec<PolyCrossing>,
    along_chord: Vec<Vec<usize>>,
}

/// Slopes and intercepts of the rotated star's chords.
pub fn star_lines(star: &StarDiagram, prec: u32) -> Vec<(Real, Real)> {
    let w = prec + 32;
    let r290 = Real::from_i64(290, w).sqrt();
    let (cos_t, sin_t) = (&Real::from_i64(17, w) / &r290, &Real::from_i64(1, w) / &r290);
    let rotated: Vec<RPoint> = star
        .vertices()
        .iter()
        .map(|v| {
            let v = RPoint::new(v.x.with_precision(w), v.y.with_precision(w));
            RPoint::new(&(&v.x * &cos_t) - &(&v.y * &sin_t), &(&v.x * &sin_t) + &(&v.y * &cos_t))
        })
        .collect();
    star.chords()
        .iter()
        .map(|&(s, e)| {
            let d = rotated[e].sub(&rotated[s]);
            let alpha = &d.y / &d.x;
            let beta = &rotated[s].y - &(&alpha * &rotated[s].x);
            (alpha, beta)
        })
        .collect()
}

fn round_to(v: &Real, den: &BigInt) -> BigRational {
    let scaled = v * &Real::from_bigint(den.clone(), v.precision());
    BigRational::new(scaled.round(), den.clone())
}

fn draw_lines(star: &StarDiagram, delta: &BigRational, rng: &mut ChaCha8Rng) -> Vec<Line> {
    let prec = star.precision().max(96);
    let delta = Real::from_ratio(delta, prec);
    star_lines(star, prec)
        .into_iter()
        .map(|(alpha, beta)| {
            let den = BigInt::from(rng.gen_range((1u64 << 30)..(1u64 << 31)));
            let ua = Real::from_f64(rng.gen_range(-1.0..=1.0), prec);
            let ub = Real::from_f64(rng.gen_range(-1.0..=1.0), prec);
            Line { a: round_to(&(&alpha + &(&delta * &ua)), &den), b: round_to(&(&beta + &(&delta * &ub)), &den) }
        })
        .collect()
}

/// Randomized perturbation within `delta`, halving `delta` until the
/// combinatorics matches the star.
pub fn perturb(star: &StarDiagram, delta: &BigRational, seed: u64) -> Result<PerturbedPolygon> {
    perturb_until(star, delta, seed, |_| true)
}

/// As [`perturb`], additionally requiring `accept` to hold; a rejected draw
/// counts as a failed attempt.
pub fn perturb_until(
    star: &StarDiagram,
    delta: &BigRational,
    seed: u64,
    mut accept: impl FnMut(&PerturbedPolygon) -> bool,
) -> Result<PerturbedPolygon> {
    if !delta.is_positive() {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let mut reason = String::new();
    let mut d = delta.clone();
    for attempt in 0..=MAX_HALVINGS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let lines = draw_lines(star, &d, &mut rng);
        match polygon_from_lines(star, lines) {
            Ok(mut poly) => {
                poly.delta = d.clone();
                poly.seed = seed;
                poly.attempt = attempt;
                if accept(&poly) {
                    return Ok(poly);
                }
                reason = format!("draw rejected at delta {d}");
            }
            Err(e) => reason = e.to_string(),
        }
        d /= BigRational::from_integer(BigInt::from(2));
    }
    Err(Error::CombinatorialCollapse { attempts: MAX_HALVINGS + 1, reason })
}

/// The rotated star itself, with line coefficients rounded to denominator 2^40.
pub fn unperturbed(star: &StarDiagram) -> Result<PerturbedPolygon> {
    let den = BigInt::one() << 40u32;
    let lines = star_lines(star, star.precision().max(96))
        .into_iter()
        .map(|(alpha, beta)| Line { a: round_to(&alpha, &den), b: round_to(&beta, &den) })
        .collect();
    polygon_from_lines(star, lines)
}

fn strictly_between(x: &BigRational, a: &BigRational, b: &BigRational) -> bool {
    (a < x && x < b) || (b < x && x < a)
}

/// Build the polygon cut out by `lines` (indexed by star chord) and check it
/// is combinatorially equivalent to `star`.
pub fn polygon_from_lines(star: &StarDiagram, lines: Vec<Line>) -> Result<PerturbedPolygon> {
    let p = star.p();
    let q = star.q();
    let collapse = |reason: String| Error::CombinatorialCollapse { attempts: 1, reason };
    if lines.len() != p {
        return Err(Error::DimensionMismatch(format!("{} lines for {p} chords", lines.len())));
    }
    let prev = |c: usize| (c + p - q) % p;
    let next = |c: usize| (c + q) % p;
    for c in 0..p {
        if lines[c].a == lines[next(c)].a {
            return Err(collapse(format!("lines {c} and {} are parallel", next(c))));
        }
    }
    let starts: Vec<QPoint> = (0..p).map(|c| lines[prev(c)].meet(&lines[c]).expect("slopes differ")).collect();
    let end = |c: usize| &starts[next(c)];

    let mut found = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            if j == next(i) || i == next(j) {
                continue;
            }
            // Parallel chords never cross.
            let Some(pt) = lines[i].meet(&lines[j]) else { continue };
            let on = |c: usize| -> Result<bool> {
                let (s, e) = (&starts[c].x, &end(c).x);
                if &pt.x == s || &pt.x == e {
                    return Err(collapse(format!("lines {i} and {j} meet at a vertex")));
                }
                Ok(strictly_between(&pt.x, s, e))
            };
            if on(i)? && on(j)? {
                found.push((i, j, pt));
            }
        }
    }
    if found.len() != star.crossings().len() {
        return Err(collapse(format!("{} crossings instead of {}", found.len(), star.crossings().len())));
    }
    let mut crossings: Vec<Option<PolyCrossing>> = vec![None; star.crossings().len()];
    for (i, j, pt) in found {
        let x = star
            .crossings()
            .iter()
            .find(|x| (x.chord_a, x.chord_b) == (i, j) || (x.chord_a, x.chord_b) == (j, i))
            .ok_or_else(|| collapse(format!("chords {i} and {j} cross but not in the star")))?;
        crossings[x.id] = Some(PolyCrossing { id: x.id, chord_a: x.chord_a, chord_b: x.chord_b, x: pt.x.clone(), point: pt });
    }
    let crossings: Vec<PolyCrossing> = crossings.into_iter().map(|c| c.expect("counts agree")).collect();

    let mut along_chord = Vec::with_capacity(p);
    for c in 0..p {
        let forward = end(c).x > starts[c].x;
        let mut ids: Vec<usize> = star.crossings_along(c).to_vec();
        let key = |id: &usize| {
            let d = &crossings[*id].x - &starts[c].x;
            if forward {
                d
            } else {
                -d
            }
        };
        ids.sort_by_key(key);
        for w in ids.windows(2) {
            if key(&w[0]) == key(&w[1]) {
                return Err(collapse(format!("tie along chord {c}")));
            }
        }
        if ids != star.crossings_along(c) {
            return Err(collapse(format!("crossing order along chord {c} changed")));
        }
        along_chord.push(ids);
    }

    let poly = PerturbedPolygon {
        p,
        q,
        precision: star.precision(),
        delta: BigRational::zero(),
        seed: 0,
        attempt: 0,
        lines,
        components: star.components().to_vec(),
        chord_slot: (0..p).map(|c| star.chord_slot(c)).collect(),
        starts,
        crossings,
        along_chord,
    };
    for x in star.crossings() {
        let star_turn = star.chord_direction(x.chord_a).cross(&star.chord_direction(x.chord_b)).signum();
        if poly.turn(x.chord_a, x.chord_b) != star_turn {
            return Err(collapse(format!("crossing {} changed orientation", x.id)));
        }
    }
    Ok(poly)
}

/// Per component, passages sorted by normalized arc, plus the arcs of the
/// vertices and the unnormalized component lengths.
#[derive(Clone, Debug)]
pub struct ArcTable {
    pub passages: Vec<Vec<(usize, Real)>>,
    /// `[first, second]` passage of every crossing, ordered by (component, arc)
    pub crossing_passages: Vec<[Passage; 2]>,
    /// arc of the start vertex of each chord, per component in traversal order
    pub vertex_arcs: Vec<Vec<Real>>,
    pub lengths: Vec<Real>,
}

impl ArcTable {
    pub fn flat_arcs(&self) -> Vec<Real> {
        self.passages.iter().flat_map(|c| c.iter().map(|(_, t)| t.clone())).collect()
    }
}

impl PerturbedPolygon {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of halvings before acceptance.
    pub fn attempt(&self) -> u32 {
        self.attempt
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn chord_slot(&self, chord: usize) -> (usize, usize) {
        self.chord_slot[chord]
    }

    pub fn crossings(&self) -> &[PolyCrossing] {
        &self.crossings
    }

    pub fn crossings_along(&self, chord: usize) -> &[usize] {
        &self.along_chord[chord]
    }

    pub fn chord_start(&self, chord: usize) -> &QPoint {
        &self.starts[chord]
    }

    pub fn chord_end(&self, chord: usize) -> &QPoint {
        &self.starts[(chord + self.q) % self.p]
    }

    pub fn chord_direction(&self, chord: usize) -> QPoint {
        self.chord_end(chord).sub(self.chord_start(chord))
    }

    /// Sign of `cross(dir(c1), dir(c2))`.
    pub fn turn(&self, c1: usize, c2: usize) -> i32 {
        match qcross(&self.chord_direction(c1), &self.chord_direction(c2)).cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Vertices `P_i` per component in traversal order.
    pub fn vertices(&self) -> Vec<Vec<QPoint>> {
        self.components.iter().map(|comp| comp.iter().map(|&c| self.starts[c].clone()).collect()).collect()
    }

    /// Position of a chord's start vertex in the flattened vertex list.
    pub fn vertex_index(&self, chord: usize) -> usize {
        let (comp, pos) = self.chord_slot[chord];
        self.components[..comp].iter().map(|c| c.len()).sum::<usize>() + pos
    }

    pub fn with_precision(&self, prec: u32) -> PerturbedPolygon {
        PerturbedPolygon { precision: prec, ..self.clone() }
    }

    /// `sqrt(1 + a²)` of a chord's line.
    fn stretch(&self, chord: usize) -> Real {
        let a = Real::from_ratio(&self.lines[chord].a, self.precision);
        (&a.square() + &Real::from_i64(1, self.precision)).sqrt()
    }

    /// `ℓ = sqrt(1 + a²)·(x − x_start)` for a point of abscissa `x` on `chord`.
    pub fn signed_length(&self, chord: usize, x: &BigRational) -> Real {
        let dx = x - &self.starts[chord].x;
        &self.stretch(chord) * &Real::from_ratio(&dx, self.precision)
    }

    pub fn chord_length(&self, chord: usize) -> Real {
        self.signed_length(chord, &self.chord_end(chord).x).abs()
    }

    pub fn arc_length_table(&self) -> ArcTable {
        let prec = self.precision;
        let mut lengths = Vec::new();
        let mut vertex_arcs = Vec::new();
        let mut start_of = vec![Real::zero(prec); self.p];
        for comp in &self.components {
            let mut acc = Real::zero(prec);
            let mut starts = Vec::new();
            for &c in comp {
                start_of[c] = acc.clone();
                starts.push(acc.clone());
                acc = &acc + &self.chord_length(c);
            }
            for (&c, s) in comp.iter().zip(starts.iter_mut()) {
                *s = &*s / &acc;
                start_of[c] = &start_of[c] / &acc;
            }
            vertex_arcs.push(starts);
            lengths.push(acc);
        }
        let passage = |chord: usize, x: &BigRational| -> Passage {
            let (component, _) = self.chord_slot[chord];
            let local = &self.signed_length(chord, x).abs() / &lengths[component];
            Passage { chord, component, arc: &start_of[chord] + &local }
        };
        let mut passages: Vec<Vec<(usize, Real)>> = vec![Vec::new(); self.components.len()];
        let mut crossing_passages = Vec::with_capacity(self.crossings.len());
        for x in &self.crossings {
            let pa = passage(x.chord_a, &x.x);
            let pb = passage(x.chord_b, &x.x);
            let a_first = if pa.component != pb.component { pa.component < pb.component } else { pa.arc < pb.arc };
            let pair = if a_first { [pa, pb] } else { [pb, pa] };
            for ps in &pair {
                passages[ps.component].push((x.id, ps.arc.clone()));
            }
            crossing_passages.push(pair);
        }
        for list in &mut passages {
            list.sort_by(|a, b| a.1.exact_cmp(&b.1));
        }
        ArcTable { passages, crossing_passages, vertex_arcs, lengths }
    }

    pub fn export(&self) -> PolygonExport {
        PolygonExport {
            p: self.p,
            q: self.q,
            delta: self.delta.clone(),
            seed: self.seed,
            attempt: self.attempt,
            components: self
                .components
                .iter()
                .map(|comp| ComponentExport {
                    chords: comp.clone(),
                    lines: comp.iter().map(|&c| self.lines[c].clone()).collect(),
                    vertices: comp.iter().map(|&c| self.starts[c].clone()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonExport {
    pub p: usize,
    pub q: usize,
    #[serde(with = "ratio_str")]
    pub delta: BigRational,
    pub seed: u64,
    pub attempt: u32,
    pub components: Vec<ComponentExport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentExport {
    pub chords: Vec<usize>,
    pub lines: Vec<Line>,
    pub vertices: Vec<QPoint>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ratio_from_i64;
    use crate::star::build_star;
    use proptest::prelude::*;

    fn thousandth() -> BigRational {
        ratio_from_i64(1, 1000)
    }

    #[test]
    fn meet_formula() {
        let l0 = Line { a: ratio_from_i64(0, 1), b: ratio_from_i64(0, 1) };
        let l1 = Line { a: ratio_from_i64(1, 1), b: ratio_from_i64(1, 1) };
        assert_eq!(l0.meet(&l1).unwrap().x, ratio_from_i64(-1, 1));
        assert!(l0.meet(&l0).is_none());
    }

    #[test]
    fn flat_segment_length_is_abscissa_difference() {
        let star = build_star(5, 2).unwrap();
        let poly = perturb(&star, &thousandth(), 42).unwrap();
        let mut lines = poly.lines().to_vec();
        // a horizontal line through the start vertex keeps the arithmetic visible
        lines[0].a = BigRational::zero();
        let poly = PerturbedPolygon { lines, ..poly };
        let x = ratio_from_i64(3, 7);
        let l = poly.signed_length(0, &x);
        let expect = Real::from_ratio(&(&x - &poly.chord_start(0).x), 128);
        assert!((&l - &expect).abs().to_f64() < 1e-30);
    }

    #[test]
    fn pentagram_keeps_its_crossings() {
        let star = build_star(5, 2).unwrap();
        let poly = perturb(&star, &thousandth(), 42).unwrap();
        assert_eq!(poly.vertices()[0].len(), 5);
        assert_eq!(poly.crossings().len(), 5);
        for (px, sx) in poly.crossings().iter().zip(star.crossings()) {
            assert_eq!((px.chord_a, px.chord_b), (sx.chord_a, sx.chord_b));
        }
        // x_{i,j} from the line coefficients
        for x in poly.crossings() {
            let (li, lj) = (&poly.lines()[x.chord_a], &poly.lines()[x.chord_b]);
            assert_eq!(x.x, (&li.b - &lj.b) / (&lj.a - &li.a));
        }
    }

    #[test]
    fn star_10_3_order_along_chords() {
        let star = build_star(10, 3).unwrap();
        let poly = perturb(&star, &thousandth(), 7).unwrap();
        assert_eq!(poly.crossings().len(), 20);
        for c in 0..10 {
            assert_eq!(poly.crossings_along(c), star.crossings_along(c));
        }
    }

    #[test]
    fn zero_draws_reproduce_the_star() {
        for (p, q) in [(5, 2), (7, 3), (10, 3), (9, 3), (11, 4)] {
            let star = build_star(p, q).unwrap();
            let poly = unperturbed(&star).unwrap();
            for c in 0..p {
                assert_eq!(poly.crossings_along(c), star.crossings_along(c));
            }
        }
    }

    #[test]
    fn delta_must_be_positive() {
        let star = build_star(5, 2).unwrap();
        assert!(perturb(&star, &BigRational::zero(), 1).is_err());
    }

    #[test]
    fn huge_delta_is_halved_until_valid() {
        let star = build_star(7, 2).unwrap();
        let poly = perturb(&star, &ratio_from_i64(5, 1), 3).unwrap();
        assert!(poly.attempt() > 0);
        assert!(poly.delta() < &ratio_from_i64(5, 1));
    }

    #[test]
    fn lengths_match_planar_distance() {
        let star = build_star(9, 4).unwrap();
        let poly = perturb(&star, &thousandth(), 11).unwrap();
        for x in poly.crossings() {
            for chord in [x.chord_a, x.chord_b] {
                let l = poly.signed_length(chord, &x.x).abs();
                let d = x.point.sub(poly.chord_start(chord)).to_real(128).norm();
                let rel = (&(&l - &d) / &d).abs().to_f64();
                assert!(rel < 1e-20, "relative error {rel}");
            }
        }
    }

    #[test]
    fn pentagram_arcs_are_separated() {
        let star = build_star(5, 2).unwrap();
        let table = perturb(&star, &thousandth(), 42).unwrap().arc_length_table();
        let arcs: Vec<f64> = table.passages[0].iter().map(|(_, t)| t.to_f64()).collect();
        assert_eq!(arcs.len(), 10);
        assert!(arcs.iter().all(|&t| t > 0.0 && t < 1.0));
        assert!(arcs.windows(2).all(|w| w[1] - w[0] >= 1e-9));
        for [a, b] in &table.crossing_passages {
            assert!(a.arc < b.arc);
        }
    }

    #[test]
    fn link_arcs_normalized_per_component() {
        let star = build_star(10, 2).unwrap();
        let table = perturb(&star, &thousandth(), 5).unwrap().arc_length_table();
        assert_eq!(table.passages.len(), 2);
        for comp in &table.passages {
            assert_eq!(comp.len(), 10);
            assert!(comp.iter().all(|(_, t)| t.to_f64() > 0.0 && t.to_f64() < 1.0));
        }
        for [a, b] in &table.crossing_passages {
            assert_ne!(a.component, b.component);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn halving_always_finds_a_delta(q in 2usize..5, extra in 1usize..12, seed in any::<u64>()) {
            let p = 2 * q + extra;
            let star = build_star(p, q).unwrap();
            let poly = perturb(&star, &ratio_from_i64(1, 100), seed).unwrap();
            prop_assert_eq!(poly.crossings().len(), p * (q - 1));
        }
    }
}
