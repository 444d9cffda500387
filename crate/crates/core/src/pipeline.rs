//! The full construction: braid pattern → star → perturbed polygon →
//! prism table → sawtooth heights → 3D trajectory → certificate.

use std::time::Instant;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::billiard::{build_table, mirror_room_check, verify_reflection, BilliardTable, MirrorRoomReport, ReflectionReport, DEFAULT_MARGIN_FACTOR};
use crate::braid::{QuasitoricPattern, Sign};
use crate::error::Result;
use crate::geom::{ratio_from_i64, RPoint};
use crate::height::{emit_trajectory, search_heights, HeightProblem, SawtoothHeight, SpatialTrajectory, DEFAULT_F_MAX, DEFAULT_MARGIN};
use crate::invariants::certify::{certify, first_over_from_signs, CertifyReport};
use crate::perturb::{independence_check, perturb_until, required_precision, IndependenceReport, PerturbedPolygon};
use crate::real::DEFAULT_PRECISION;
use crate::star::{build_star_with_precision, StarDiagram};

pub const REFLECTION_TOL: f64 = 1e-9;
pub const INDEPENDENCE_MAX_COEFF: u64 = 10;
pub const INDEPENDENCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub delta: BigRational,
    pub f_max: u64,
    pub margin: f64,
    pub precision: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 42, delta: ratio_from_i64(1, 1000), f_max: DEFAULT_F_MAX, margin: DEFAULT_MARGIN, precision: DEFAULT_PRECISION }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub star_ms: f64,
    pub perturb_ms: f64,
    pub table_ms: f64,
    pub search_ms: f64,
    pub emit_ms: f64,
    pub certify_ms: f64,
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub pattern: QuasitoricPattern,
    pub padded: QuasitoricPattern,
    pub star: StarDiagram,
    pub polygon: PerturbedPolygon,
    pub independence: IndependenceReport,
    pub mirror_room: MirrorRoomReport,
    pub table: BilliardTable,
    pub first_over: Vec<bool>,
    pub heights: Vec<SawtoothHeight>,
    pub trajectory: SpatialTrajectory,
    pub reflection: ReflectionReport,
    pub certificate: CertifyReport,
    pub timings: Timings,
}

pub fn polygon_vertices(poly: &PerturbedPolygon) -> Vec<Vec<RPoint>> {
    poly.vertices().iter().map(|c| c.iter().map(|v| v.to_real(poly.precision())).collect()).collect()
}

/// Independence of `(1, t_i)` for all passage arcs, recomputed at the
/// precision the check needs.
pub fn polygon_independence(poly: &PerturbedPolygon) -> Result<IndependenceReport> {
    let n: usize = poly.crossings().len() * 2;
    let prec = required_precision(n, INDEPENDENCE_MAX_COEFF, INDEPENDENCE_TOL).max(poly.precision());
    let arcs = poly.with_precision(prec).arc_length_table().flat_arcs();
    independence_check(&arcs, INDEPENDENCE_MAX_COEFF, INDEPENDENCE_TOL)
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn realize(pattern: &QuasitoricPattern, opts: &Options) -> Result<Realization> {
    let padded = pattern.pad_to_min_repetitions();
    let mut timings = Timings::default();

    let t = Instant::now();
    let star = build_star_with_precision(padded.repetitions(), padded.strands(), opts.precision)?.assign_braid_letters(&padded)?;
    timings.star_ms = ms(t);

    let t = Instant::now();
    let mut independence = None;
    let polygon = perturb_until(&star, &opts.delta, opts.seed, |poly| {
        let room = mirror_room_check(&polygon_vertices(poly), DEFAULT_MARGIN_FACTOR).map(|r| r.pass).unwrap_or(false);
        if !room {
            return false;
        }
        match polygon_independence(poly) {
            Ok(rep) if rep.pass => {
                independence = Some(rep);
                true
            }
            _ => false,
        }
    })?;
    let independence = independence.expect("accepted polygons passed the check");
    timings.perturb_ms = ms(t);

    let t = Instant::now();
    let vertices = polygon_vertices(&polygon);
    let mirror_room = mirror_room_check(&vertices, DEFAULT_MARGIN_FACTOR)?;
    let table = build_table(&vertices)?;
    timings.table_ms = ms(t);

    let t = Instant::now();
    let signs: Vec<Sign> = star.crossings().iter().map(|x| x.sign.expect("letters assigned")).collect();
    let first_over = first_over_from_signs(&polygon, &signs);
    let arcs = polygon.arc_length_table();
    let problem = HeightProblem::from_table(&arcs, &first_over);
    let heights = search_heights(&problem, opts.f_max, opts.margin)?;
    timings.search_ms = ms(t);

    let t = Instant::now();
    let trajectory = emit_trajectory(&polygon, &arcs, &heights, &first_over)?;
    let reflection = verify_reflection(&trajectory.contact_paths(), &table, REFLECTION_TOL);
    timings.emit_ms = ms(t);

    let t = Instant::now();
    let certificate = certify(&trajectory, pattern)?;
    timings.certify_ms = ms(t);

    Ok(Realization {
        pattern: pattern.clone(),
        padded,
        star,
        polygon,
        independence,
        mirror_room,
        table,
        first_over,
        heights,
        trajectory,
        reflection,
        certificate,
        timings,
    })
}

impl Realization {
    pub fn verified(&self) -> bool {
        self.mirror_room.pass && self.reflection.pass && self.certificate.pass
    }
}

/// The first check that rejected a set of artifacts.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckFailure {
    pub check: &'static str,
    pub message: String,
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} failed: {}", self.check, self.message)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifySummary {
    pub mirror_room: MirrorRoomReport,
    pub reflection: ReflectionReport,
    pub certificate: CertifyReport,
}

/// Re-check stored artifacts without trusting any intermediate result: the
/// table is rebuilt from the wall contacts and the crossings are found again
/// from the 3D polylines.
pub fn verify_artifacts(
    traj: &SpatialTrajectory,
    pattern: &QuasitoricPattern,
    precision: u32,
) -> std::result::Result<VerifySummary, CheckFailure> {
    let fail = |check: &'static str| move |message: String| CheckFailure { check, message };
    let vertices = traj.wall_vertices(precision);
    let mirror_room = mirror_room_check(&vertices, DEFAULT_MARGIN_FACTOR).map_err(|e| fail("mirror_room_check")(e.to_string()))?;
    if !mirror_room.pass {
        return Err(fail("mirror_room_check")(format!(
            "vertex {} leaves the mirror room of vertex {} (margin {:e})",
            mirror_room.witness.1, mirror_room.witness.0, mirror_room.margin
        )));
    }
    let table = build_table(&vertices).map_err(|e| fail("build_table")(e.to_string()))?;
    let reflection = verify_reflection(&traj.contact_paths(), &table, REFLECTION_TOL);
    if let Some(v) = reflection.violations.first() {
        return Err(fail("verify_reflection")(v.clone()));
    }
    let certificate = certify(traj, pattern).map_err(|e| fail("certify")(e.to_string()))?;
    if !certificate.pass {
        return Err(fail("certify")(format!(
            "constructed Jones {} ({} components) differs from intended {} ({} components)",
            certificate.constructed_jones,
            certificate.constructed_components,
            certificate.intended_jones,
            certificate.intended_components
        )));
    }
    Ok(VerifySummary { mirror_room, reflection, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{build_table, mirror_room_check, DEFAULT_MARGIN_FACTOR};
    use crate::geom::ratio_from_i64;
    use crate::perturb::perturb;
    use crate::star::build_star;

    fn pentagram() -> PerturbedPolygon {
        perturb(&build_star(5, 2).unwrap(), &ratio_from_i64(1, 1000), 42).unwrap()
    }

    #[test]
    fn perturbed_pentagram_is_independent() {
        let rep = polygon_independence(&pentagram()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn perturbed_pentagram_has_an_irregular_table() {
        let comps = polygon_vertices(&pentagram());
        assert!(mirror_room_check(&comps, DEFAULT_MARGIN_FACTOR).unwrap().pass);
        let table = build_table(&comps).unwrap();
        assert_eq!(table.floor.len(), 5);
        assert!(table.is_convex());
        let r: Vec<f64> = table.floor.iter().map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt()).collect();
        let spread = r.iter().cloned().fold(f64::MIN, f64::max) - r.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 1e-6, "{r:?}");
    }
}
