//! Diagrams of the constructed objects and the final certificate.
//!
//! Three routes lead to a signed Gauss code:
//! - the abstract closure of a quasitoric braid, read strand by strand;
//! - a star or perturbed polygon together with an over/under flag per
//!   crossing, signs taken from the chord directions;
//! - the emitted 3D trajectory alone, by intersecting its floor projection
//!   and comparing interpolated heights.
//!
//! The certificate compares the Jones polynomial of the last one with that
//! of the first. Equal polynomials are evidence, not a proof, of isotopy.

use serde::{Deserialize, Serialize};

use super::bracket::{jones_from_bracket, kauffman_bracket};
use super::pd::{GaussVisit, PdCode, SignedGauss};
use super::poly::JonesPolynomial;
use super::skein::{skein_bracket, SKEIN_LIMIT};
use crate::braid::{QuasitoricPattern, Sign};
use crate::error::{Error, Result};
use crate::height::{PointKind, SpatialTrajectory};
use crate::perturb::PerturbedPolygon;
use crate::star::StarDiagram;

/// Closed polygonal curves whose crossings are indexed `0..n`, each
/// involving two segments.
pub trait TraversalDiagram {
    /// Segments of each component in traversal order.
    fn component_segments(&self) -> Vec<Vec<usize>>;
    /// Crossings met along a segment, in travel order.
    fn crossings_on(&self, segment: usize) -> Vec<usize>;
    fn crossing_total(&self) -> usize;
    /// Segments carrying the first and the second passage.
    fn crossing_segments(&self, crossing: usize) -> (usize, usize);
    /// Sign of `cross(dir(s1), dir(s2))`.
    fn turn(&self, s1: usize, s2: usize) -> i32;
}

impl TraversalDiagram for StarDiagram {
    fn component_segments(&self) -> Vec<Vec<usize>> {
        self.components().to_vec()
    }

    fn crossings_on(&self, segment: usize) -> Vec<usize> {
        self.crossings_along(segment).to_vec()
    }

    fn crossing_total(&self) -> usize {
        self.crossings().len()
    }

    fn crossing_segments(&self, crossing: usize) -> (usize, usize) {
        let x = &self.crossings()[crossing];
        (x.first.chord, x.second.chord)
    }

    fn turn(&self, s1: usize, s2: usize) -> i32 {
        self.chord_direction(s1).cross(&self.chord_direction(s2)).signum()
    }
}

impl TraversalDiagram for PerturbedPolygon {
    fn component_segments(&self) -> Vec<Vec<usize>> {
        self.components().to_vec()
    }

    fn crossings_on(&self, segment: usize) -> Vec<usize> {
        self.crossings_along(segment).to_vec()
    }

    fn crossing_total(&self) -> usize {
        self.crossings().len()
    }

    fn crossing_segments(&self, crossing: usize) -> (usize, usize) {
        // first passage in (component, arc) order, as in the star
        let x = &self.crossings()[crossing];
        let (ca, pa) = self.chord_slot(x.chord_a);
        let (cb, pb) = self.chord_slot(x.chord_b);
        let a_first = match ca.cmp(&cb) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => pa < pb,
        };
        if a_first {
            (x.chord_a, x.chord_b)
        } else {
            (x.chord_b, x.chord_a)
        }
    }

    fn turn(&self, s1: usize, s2: usize) -> i32 {
        PerturbedPolygon::turn(self, s1, s2)
    }
}

/// Over/under flags (`true`: the first passage is over) realizing `signs`.
pub fn first_over_from_signs<D: TraversalDiagram>(d: &D, signs: &[Sign]) -> Vec<bool> {
    (0..d.crossing_total())
        .map(|x| {
            let (s1, s2) = d.crossing_segments(x);
            (d.turn(s1, s2) > 0) == (signs[x] == Sign::Positive)
        })
        .collect()
}

pub fn extract_gauss<D: TraversalDiagram>(d: &D, first_over: &[bool]) -> Result<SignedGauss> {
    let n = d.crossing_total();
    if first_over.len() != n {
        return Err(Error::DimensionMismatch(format!("{} over flags for {n} crossings", first_over.len())));
    }
    let mut components = Vec::new();
    for comp in d.component_segments() {
        let mut visits = Vec::new();
        for seg in comp {
            for x in d.crossings_on(seg) {
                let (s1, _) = d.crossing_segments(x);
                visits.push(GaussVisit { crossing: x, over: first_over[x] == (seg == s1) });
            }
        }
        components.push(visits);
    }
    let signs = (0..n)
        .map(|x| {
            let (s1, s2) = d.crossing_segments(x);
            let (over, under) = if first_over[x] { (s1, s2) } else { (s2, s1) };
            if d.turn(over, under) > 0 {
                Sign::Positive
            } else {
                Sign::Negative
            }
        })
        .collect();
    let g = SignedGauss { components, signs };
    g.validate()?;
    Ok(g)
}

pub fn extract_pd<D: TraversalDiagram>(d: &D, first_over: &[bool]) -> Result<PdCode> {
    extract_gauss(d, first_over)?.to_pd()
}

/// Diagram of the standard closure of a quasitoric braid. Crossing `i` is
/// letter `i` of the row-major word; at `σ_g` the strand in position `g−1`
/// moves right and is over exactly when the letter is positive.
pub fn closure_diagram(pattern: &QuasitoricPattern) -> SignedGauss {
    let word = pattern.word();
    let k = pattern.strands();
    let mut done = vec![false; k];
    let mut components = Vec::new();
    for start in 0..k {
        if done[start] {
            continue;
        }
        let mut visits = Vec::new();
        let mut pos = start;
        loop {
            done[pos] = true;
            for (i, letter) in word.iter().enumerate() {
                let left = letter.generator - 1;
                if pos == left {
                    visits.push(GaussVisit { crossing: i, over: letter.sign == Sign::Positive });
                    pos = left + 1;
                } else if pos == left + 1 {
                    visits.push(GaussVisit { crossing: i, over: letter.sign == Sign::Negative });
                    pos = left;
                }
            }
            if pos == start {
                break;
            }
        }
        components.push(visits);
    }
    SignedGauss { components, signs: word.iter().map(|l| l.sign).collect() }
}

/// Diagram read off the trajectory alone: floor-projection intersections of
/// the wall-to-wall segments, over/under from interpolated heights.
pub fn trajectory_diagram(traj: &SpatialTrajectory) -> Result<SignedGauss> {
    struct Seg {
        a: [f64; 2],
        b: [f64; 2],
        /// (xy parameter, z) of every polyline point from wall to wall
        profile: Vec<(f64, f64)>,
    }
    let mut segs: Vec<Seg> = Vec::new();
    let mut comp_segs: Vec<Vec<usize>> = Vec::new();
    for (c, path) in traj.components.iter().enumerate() {
        let walls: Vec<usize> = path.points.iter().enumerate().filter(|(_, p)| p.kind == PointKind::Wall).map(|(i, _)| i).collect();
        if walls.len() < 3 {
            return Err(Error::Parse(format!("component {c} has {} wall contacts", walls.len())));
        }
        let m = path.points.len();
        let mut ids = Vec::new();
        for (w, &i0) in walls.iter().enumerate() {
            let i1 = walls[(w + 1) % walls.len()];
            let a = [path.points[i0].xyz[0], path.points[i0].xyz[1]];
            let b = [path.points[i1].xyz[0], path.points[i1].xyz[1]];
            let d = [b[0] - a[0], b[1] - a[1]];
            let len2 = d[0] * d[0] + d[1] * d[1];
            let mut profile = vec![(0.0, path.points[i0].xyz[2])];
            let mut i = (i0 + 1) % m;
            while i != i1 {
                let p = path.points[i].xyz;
                profile.push((((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2, p[2]));
                i = (i + 1) % m;
            }
            profile.push((1.0, path.points[i1].xyz[2]));
            ids.push(segs.len());
            segs.push(Seg { a, b, profile });
        }
        comp_segs.push(ids);
    }
    let z_at = |seg: &Seg, s: f64| -> f64 {
        let pr = &seg.profile;
        let k = pr.partition_point(|&(x, _)| x <= s).clamp(1, pr.len() - 1);
        let ((s0, z0), (s1, z1)) = (pr[k - 1], pr[k]);
        z0 + (z1 - z0) * (s - s0) / (s1 - s0)
    };

    // (segment, parameter, crossing)
    let mut hits: Vec<(usize, f64, usize)> = Vec::new();
    let mut signs = Vec::new();
    let mut over_seg = Vec::new();
    let eps = 1e-12;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (p, q) = (&segs[i], &segs[j]);
            let r = [p.b[0] - p.a[0], p.b[1] - p.a[1]];
            let w = [q.b[0] - q.a[0], q.b[1] - q.a[1]];
            let den = r[0] * w[1] - r[1] * w[0];
            if den.abs() < 1e-300 {
                continue;
            }
            let qp = [q.a[0] - p.a[0], q.a[1] - p.a[1]];
            let s = (qp[0] * w[1] - qp[1] * w[0]) / den;
            let u = (qp[0] * r[1] - qp[1] * r[0]) / den;
            if s <= eps || s >= 1.0 - eps || u <= eps || u >= 1.0 - eps {
                continue;
            }
            let (zi, zj) = (z_at(p, s), z_at(q, u));
            if (zi - zj).abs() < 1e-9 {
                return Err(Error::Parse(format!("segments {i} and {j} intersect in space")));
            }
            let id = signs.len();
            let (turn, over) = if zi > zj { (den, i) } else { (-den, j) };
            signs.push(if turn > 0.0 { Sign::Positive } else { Sign::Negative });
            over_seg.push(over);
            hits.push((i, s, id));
            hits.push((j, u, id));
        }
    }
    let mut per_seg: Vec<Vec<(f64, usize)>> = vec![Vec::new(); segs.len()];
    for (seg, s, id) in hits {
        per_seg[seg].push((s, id));
    }
    let components = comp_segs
        .iter()
        .map(|ids| {
            let mut visits = Vec::new();
            for &sid in ids {
                let mut list = per_seg[sid].clone();
                list.sort_by(|a, b| a.0.total_cmp(&b.0));
                visits.extend(list.into_iter().map(|(_, x)| GaussVisit { crossing: x, over: over_seg[x] == sid }));
            }
            visits
        })
        .collect();
    let g = SignedGauss { components, signs };
    g.validate()?;
    Ok(g)
}

/// Jones polynomial by the state sum.
pub fn jones_state_sum(g: &SignedGauss) -> Result<JonesPolynomial> {
    jones_from_bracket(&kauffman_bracket(&g.to_pd()?)?, g.writhe())
}

/// Jones polynomial by skein recursion, falling back to the state sum
/// beyond the recursion's budget.
pub fn jones_oracle(g: &SignedGauss) -> Result<JonesPolynomial> {
    let pd = g.to_pd()?;
    let bracket = if pd.len() <= SKEIN_LIMIT { skein_bracket(&pd)? } else { kauffman_bracket(&pd)? };
    jones_from_bracket(&bracket, g.writhe())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifyReport {
    pub pass: bool,
    pub constructed_jones: String,
    pub intended_jones: String,
    pub constructed_components: usize,
    pub intended_components: usize,
    pub constructed_crossings: usize,
    pub intended_crossings: usize,
}

pub fn certify_diagram(constructed: &SignedGauss, pattern: &QuasitoricPattern) -> Result<CertifyReport> {
    let intended = closure_diagram(pattern);
    let cj = jones_state_sum(constructed)?;
    let ij = jones_oracle(&intended)?;
    let (cc, ic) = (constructed.components.len(), intended.components.len());
    Ok(CertifyReport {
        pass: cj == ij && cc == ic,
        constructed_jones: cj.to_string(),
        intended_jones: ij.to_string(),
        constructed_components: cc,
        intended_components: ic,
        constructed_crossings: constructed.crossing_count(),
        intended_crossings: intended.crossing_count(),
    })
}

/// Compare the trajectory's own diagram with the closure of `pattern`.
pub fn certify(traj: &SpatialTrajectory, pattern: &QuasitoricPattern) -> Result<CertifyReport> {
    certify_diagram(&trajectory_diagram(traj)?, pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::toric_pattern;
    use crate::star::build_star;

    fn jones(g: &SignedGauss) -> JonesPolynomial {
        jones_state_sum(g).unwrap()
    }

    fn unlink(k: u32) -> JonesPolynomial {
        let loop_value = JonesPolynomial::from_half_terms(&[(1, -1), (-1, -1)]);
        JonesPolynomial { half_powers: loop_value.half_powers.pow(k - 1) }
    }

    #[test]
    fn trivial_blocks_close_to_unlinks() {
        for k in 2..=3 {
            let block = QuasitoricPattern::trivial_block(k).unwrap();
            assert_eq!(jones(&closure_diagram(&block)), unlink(k as u32), "k = {k}");
        }
        let id = QuasitoricPattern::from_ints(2, 2, &[&[1], &[-1]]).unwrap();
        assert_eq!(jones(&closure_diagram(&id)), unlink(2));
        assert_eq!(jones(&closure_diagram(&id.pad_to_min_repetitions())), unlink(2));
    }

    #[test]
    fn closure_polynomials() {
        let tref = toric_pattern(2, 3).unwrap();
        assert_eq!(jones(&closure_diagram(&tref)).to_string(), "t + t^3 - t^4");
        let t25 = toric_pattern(2, 5).unwrap();
        assert_eq!(jones(&closure_diagram(&t25)).to_string(), "t^2 + t^4 - t^5 + t^6 - t^7");
        let fig8 = QuasitoricPattern::from_ints(3, 2, &[&[1, -1], &[1, -1]]).unwrap();
        let j = jones(&closure_diagram(&fig8));
        assert_eq!(j.to_string(), "t^-2 - t^-1 + 1 - t + t^2");
        assert_eq!(jones(&closure_diagram(&fig8).mirror()), j);
        let hopf = toric_pattern(2, 2).unwrap();
        assert_eq!(jones(&closure_diagram(&hopf)).to_string(), "-t^(1/2) - t^(5/2)");
    }

    #[test]
    fn star_matches_closure_for_all_positive() {
        for (p, q) in [(5, 2), (7, 3), (7, 2), (9, 4)] {
            let star = build_star(p, q).unwrap();
            let pat = toric_pattern(q, p).unwrap();
            let signs = vec![Sign::Positive; star.crossings().len()];
            let g = extract_gauss(&star, &first_over_from_signs(&star, &signs)).unwrap();
            let closure = closure_diagram(&pat);
            assert_eq!(g.canonical(), closure.canonical(), "{{{p}/{q}}}");
            if g.crossing_count() <= 16 {
                assert_eq!(jones(&g), jones_oracle(&closure).unwrap());
            }
        }
    }

    #[test]
    fn corrupted_flag_changes_the_knot() {
        let star = build_star(5, 2).unwrap();
        let signs = vec![Sign::Positive; 5];
        let mut flags = first_over_from_signs(&star, &signs);
        let pat = toric_pattern(2, 5).unwrap();
        assert!(certify_diagram(&extract_gauss(&star, &flags).unwrap(), &pat).unwrap().pass);
        flags[2] = !flags[2];
        assert!(!certify_diagram(&extract_gauss(&star, &flags).unwrap(), &pat).unwrap().pass);
    }

    #[test]
    fn pentagram_pd_labels() {
        let star = build_star(5, 2).unwrap();
        let pd = extract_pd(&star, &first_over_from_signs(&star, &[Sign::Positive; 5])).unwrap();
        assert_eq!(pd.len(), 5);
        assert_eq!(pd.arc_count(), 10);
        let mut seen = std::collections::BTreeMap::new();
        for x in &pd.crossings {
            for &a in x {
                *seen.entry(a).or_insert(0) += 1;
            }
        }
        assert_eq!(seen.len(), 10);
        assert!(seen.values().all(|&k| k == 2));
    }

    struct Square;

    impl TraversalDiagram for Square {
        fn component_segments(&self) -> Vec<Vec<usize>> {
            vec![vec![0, 1, 2, 3]]
        }
        fn crossings_on(&self, _: usize) -> Vec<usize> {
            Vec::new()
        }
        fn crossing_total(&self) -> usize {
            0
        }
        fn crossing_segments(&self, _: usize) -> (usize, usize) {
            unreachable!()
        }
        fn turn(&self, _: usize, _: usize) -> i32 {
            1
        }
    }

    #[test]
    fn crossingless_curve_has_empty_pd() {
        assert!(extract_pd(&Square, &[]).unwrap().is_empty());
    }
}
