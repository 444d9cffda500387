//! The polygonal star `{p/q}`: vertices `e(k) = exp(2πik/p)` on the unit
//! circle and chords `(e(k), e(k+q))`.
//!
//! Crossing combinatorics is decided exactly by the cyclic gap between chord
//! indices. Chord `c` crosses chord `c + g` for `1 ≤ g ≤ q-1`; by the
//! reflection symmetry exchanging the two chords the crossing sits on the ray
//! at angle `π(2c+g+q)/p`, at radius `cos(πq/p) / cos(πg/p)`. Wider gaps lie
//! further out, so gap `g` has depth `q - g` counted from the outside.
//!
//! Reading crossings by that angle reproduces the closed braid
//! `(σ_1 ⋯ σ_{q-1})^p` with strand positions numbered from the centre:
//! letter `σ_g` of row `r` is the crossing of chords `r` and `r + g`.

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::braid::{QuasitoricPattern, Sign};
use crate::error::{Error, Result};
use crate::geom::RPoint;
use crate::real::Real;

#[derive(Clone, Debug)]
pub struct Passage {
    pub chord: usize,
    pub component: usize,
    /// arc length along the component, normalized to total length 1
    pub arc: Real,
}

#[derive(Clone, Debug)]
pub struct Crossing {
    pub id: usize,
    /// chord `c`, past its midpoint at the crossing
    pub chord_a: usize,
    /// chord `c + gap`, before its midpoint at the crossing
    pub chord_b: usize,
    pub gap: usize,
    pub sector: usize,
    pub depth: usize,
    pub point: RPoint,
    pub braid_row: usize,
    pub braid_col: usize,
    /// the passage that comes first in (component, arc) order
    pub first: Passage,
    pub second: Passage,
    pub sign: Option<Sign>,
}

#[derive(Clone, Debug)]
pub struct StarDiagram {
    p: usize,
    q: usize,
    precision: u32,
    vertices: Vec<RPoint>,
    chords: Vec<(usize, usize)>,
    components: Vec<Vec<usize>>,
    chord_slot: Vec<(usize, usize)>,
    crossings: Vec<Crossing>,
    along_chord: Vec<Vec<usize>>,
}

/// Cyclic-gap crossing rule for chords of `{p/q}`.
pub fn chords_cross(p: usize, q: usize, c: usize, other: usize) -> bool {
    let g = (other + p - c % p) % p;
    (1..q).contains(&g) || (p - q + 1..p).contains(&g)
}

/// Crossing id of the unordered chord pair `{c, c + g}`, `1 ≤ g < q`.
pub fn crossing_id(q: usize, c: usize, g: usize) -> usize {
    c * (q - 1) + (g - 1)
}

pub fn build_star(p: usize, q: usize) -> Result<StarDiagram> {
    build_star_with_precision(p, q, crate::real::DEFAULT_PRECISION)
}

pub fn build_star_with_precision(p: usize, q: usize, precision: u32) -> Result<StarDiagram> {
    if q < 2 {
        return Err(Error::Domain(format!("star {{{p}/{q}}}: q must be ≥ 2")));
    }
    if p < 2 * q + 1 {
        return Err(Error::Domain(format!(
            "star {{{p}/{q}}}: p must be ≥ 2q+1 = {}",
            2 * q + 1
        )));
    }
    let prec = precision;
    let pi = Real::pi(prec + 16).with_precision(prec);
    let pf = Real::from_i64(p as i64, prec);
    let angle = |num: i64| -> Real { &(&pi * &Real::from_i64(num, prec)) / &pf };

    let vertices: Vec<RPoint> = (0..p)
        .map(|k| {
            let (s, c) = angle(2 * k as i64).sin_cos();
            RPoint::new(c, s)
        })
        .collect();
    let chords: Vec<(usize, usize)> = (0..p).map(|c| (c, (c + q) % p)).collect();

    let ncomp = gcd(p, q);
    let per_comp = p / ncomp;
    let mut chord_slot = vec![(0, 0); p];
    let components: Vec<Vec<usize>> = (0..ncomp)
        .map(|r| {
            (0..per_comp)
                .map(|j| {
                    let c = (r + j * q) % p;
                    chord_slot[c] = (r, j);
                    c
                })
                .collect()
        })
        .collect();

    let (half_len, apothem) = angle(q as i64).sin_cos();
    let comp_len = &Real::from_i64(2 * per_comp as i64, prec) * &half_len;
    let mut tan_g = Vec::with_capacity(q);
    let mut cos_g = Vec::with_capacity(q);
    for g in 0..q {
        let (s, c) = angle(g as i64).sin_cos();
        tan_g.push(&s / &c);
        cos_g.push(c);
    }
    let arc_at = |chord: usize, offset: Real| -> Real {
        let (_, pos) = chord_slot[chord];
        let along = &(&Real::from_i64(2 * pos as i64, prec) * &half_len) + &offset;
        &along / &comp_len
    };

    let mut crossings = Vec::with_capacity(p * (q - 1));
    for c in 0..p {
        for g in 1..q {
            let b = (c + g) % p;
            let shift = &apothem * &tan_g[g];
            let pa = Passage { chord: c, component: chord_slot[c].0, arc: arc_at(c, &half_len + &shift) };
            let pb = Passage { chord: b, component: chord_slot[b].0, arc: arc_at(b, &half_len - &shift) };
            let a_first = if pa.component != pb.component {
                pa.component < pb.component
            } else {
                pa.arc < pb.arc
            };
            let (first, second) = if a_first { (pa, pb) } else { (pb, pa) };
            let half_steps = (2 * c + g + q) % (2 * p);
            let radius = &apothem / &cos_g[g];
            let (s, co) = angle(half_steps as i64).sin_cos();
            crossings.push(Crossing {
                id: crossing_id(q, c, g),
                chord_a: c,
                chord_b: b,
                gap: g,
                sector: half_steps / 2,
                depth: q - g,
                point: RPoint::new(&radius * &co, &radius * &s),
                braid_row: c,
                braid_col: g - 1,
                first,
                second,
                sign: None,
            });
        }
    }

    // along chord c: partners c-(q-1), …, c-1 (before the midpoint), then c+1, …, c+(q-1)
    let along_chord = (0..p)
        .map(|c| {
            let before = (1..q).rev().map(|g| crossing_id(q, (c + p - g) % p, g));
            let after = (1..q).map(|g| crossing_id(q, c, g));
            before.chain(after).collect()
        })
        .collect();

    Ok(StarDiagram { p, q, precision, vertices, chords, components, chord_slot, crossings, along_chord })
}

impl StarDiagram {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn vertices(&self) -> &[RPoint] {
        &self.vertices
    }

    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }

    /// Chords of each component in traversal order `v → v+q → v+2q → …`.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// `(component, position in traversal)` of a chord.
    pub fn chord_slot(&self, chord: usize) -> (usize, usize) {
        self.chord_slot[chord]
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Crossing ids met along a chord, in travel order.
    pub fn crossings_along(&self, chord: usize) -> &[usize] {
        &self.along_chord[chord]
    }

    pub fn chord_direction(&self, chord: usize) -> RPoint {
        let (a, b) = self.chords[chord];
        self.vertices[b].sub(&self.vertices[a])
    }

    /// Unnormalized length of one component.
    pub fn component_length(&self) -> Real {
        let chord_len = self.vertices[self.q].sub(&self.vertices[0]).norm();
        &Real::from_i64(self.components[0].len() as i64, self.precision) * &chord_len
    }

    /// Per component, `(crossing id, arc)` passages sorted by arc.
    pub fn trajectory_arc_lengths(&self) -> Vec<Vec<(usize, Real)>> {
        let mut out: Vec<Vec<(usize, Real)>> = vec![Vec::new(); self.components.len()];
        for x in &self.crossings {
            for pass in [&x.first, &x.second] {
                out[pass.component].push((x.id, pass.arc.clone()));
            }
        }
        for list in &mut out {
            list.sort_by(|a, b| a.1.exact_cmp(&b.1));
        }
        out
    }

    /// Attach the sign of letter `(braid_row, braid_col)` to each crossing.
    pub fn assign_braid_letters(&self, pattern: &QuasitoricPattern) -> Result<StarDiagram> {
        if pattern.repetitions() != self.p || pattern.strands() != self.q {
            return Err(Error::DimensionMismatch(format!(
                "pattern ({},{}) does not fit star {{{}/{}}}",
                pattern.strands(),
                pattern.repetitions(),
                self.p,
                self.q
            )));
        }
        let mut d = self.clone();
        for x in &mut d.crossings {
            x.sign = Some(pattern.sign(x.braid_row, x.braid_col));
        }
        Ok(d)
    }

    pub fn export(&self) -> StarExport {
        StarExport {
            p: self.p,
            q: self.q,
            vertices: self.vertices.iter().map(|v| v.to_f64()).collect(),
            chords: self.chords.clone(),
            components: self.components.clone(),
            crossings: self
                .crossings
                .iter()
                .map(|x| CrossingExport {
                    id: x.id,
                    chords: [x.chord_a, x.chord_b],
                    sector: x.sector,
                    depth: x.depth,
                    point: x.point.to_f64(),
                    braid_row: x.braid_row,
                    braid_col: x.braid_col,
                    first: PassageExport::from(&x.first),
                    second: PassageExport::from(&x.second),
                    sign: x.sign,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StarExport {
    pub p: usize,
    pub q: usize,
    pub vertices: Vec<[f64; 2]>,
    pub chords: Vec<(usize, usize)>,
    pub components: Vec<Vec<usize>>,
    pub crossings: Vec<CrossingExport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossingExport {
    pub id: usize,
    pub chords: [usize; 2],
    pub sector: usize,
    pub depth: usize,
    pub point: [f64; 2],
    pub braid_row: usize,
    pub braid_col: usize,
    pub first: PassageExport,
    pub second: PassageExport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PassageExport {
    pub chord: usize,
    pub component: usize,
    pub arc: f64,
}

impl From<&Passage> for PassageExport {
    fn from(p: &Passage) -> Self {
        PassageExport { chord: p.chord, component: p.component, arc: p.arc.to_f64() }
    }
}
