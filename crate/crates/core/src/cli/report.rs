use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::billiard::{MirrorRoomReport, ReflectionReport};
use crate::braid::QuasitoricPattern;
use crate::geom::ratio_str;
use crate::height::CrossingHeight;
use crate::invariants::certify::CertifyReport;
use crate::perturb::IndependenceReport;
use crate::pipeline::{Options, Realization, Timings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }

    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentHeight {
    pub component: usize,
    pub f: u64,
    pub phi: f64,
    pub z0: f64,
}

/// File names of the other artifacts, relative to the report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArtifactFiles {
    pub trajectory: String,
    pub table: String,
    pub mesh: String,
    pub diagram: String,
    pub star: String,
    pub polygon: String,
}

impl Default for ArtifactFiles {
    fn default() -> Self {
        ArtifactFiles {
            trajectory: "trajectory.json".into(),
            table: "table.json".into(),
            mesh: "prism.obj".into(),
            diagram: "diagram.svg".into(),
            star: "star.json".into(),
            polygon: "polygon.json".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub pattern: QuasitoricPattern,
    pub padded: QuasitoricPattern,
    pub components: usize,
    pub seed: u64,
    #[serde(with = "ratio_str")]
    pub requested_delta: BigRational,
    #[serde(with = "ratio_str")]
    pub delta: BigRational,
    pub attempt: u32,
    pub f_max: u64,
    pub margin: f64,
    pub precision_bits: u32,
    pub stages: Vec<Stage>,
    pub verified: bool,
    pub heights: Vec<ComponentHeight>,
    pub crossings: Vec<CrossingHeight>,
    pub mirror_room: MirrorRoomReport,
    pub independence: IndependenceReport,
    pub reflection: ReflectionReport,
    pub certificate: CertifyReport,
    pub files: ArtifactFiles,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl RealizationReport {
    pub fn new(r: &Realization, preset: Option<String>, opts: &Options, canonical: bool) -> Self {
        let stages = vec![
            Stage {
                name: "star".into(),
                status: Status::Pass,
                detail: format!("{{{}/{}}}, {} crossings", r.star.p(), r.star.q(), r.star.crossings().len()),
            },
            Stage {
                name: "perturb".into(),
                status: Status::Pass,
                detail: format!("attempt {} at delta {}", r.polygon.attempt(), crate::geom::format_ratio(r.polygon.delta())),
            },
            Stage {
                name: "independence_check".into(),
                status: Status::of(r.independence.pass),
                detail: format!("norm bound {:.3} in dimension {}", r.independence.norm_bound, r.independence.dimension),
            },
            Stage {
                name: "mirror_room_check".into(),
                status: Status::of(r.mirror_room.pass),
                detail: format!("margin {:e}", r.mirror_room.margin),
            },
            Stage { name: "build_table".into(), status: Status::of(r.table.is_convex()), detail: String::new() },
            Stage {
                name: "height_search".into(),
                status: Status::Pass,
                detail: format!("f = {:?}", r.heights.iter().map(|h| h.f).collect::<Vec<_>>()),
            },
            Stage {
                name: "verify_reflection".into(),
                status: Status::of(r.reflection.pass),
                detail: format!("max error {:e}", r.reflection.max_error),
            },
            Stage {
                name: "certify".into(),
                status: Status::of(r.certificate.pass),
                detail: format!("{} vs {}", r.certificate.constructed_jones, r.certificate.intended_jones),
            },
        ];
        RealizationReport {
            preset,
            pattern: r.pattern.clone(),
            padded: r.padded.clone(),
            components: r.star.components().len(),
            seed: opts.seed,
            requested_delta: opts.delta.clone(),
            delta: r.polygon.delta().clone(),
            attempt: r.polygon.attempt(),
            f_max: opts.f_max,
            margin: opts.margin,
            precision_bits: opts.precision,
            stages,
            verified: r.verified(),
            heights: r
                .heights
                .iter()
                .enumerate()
                .map(|(component, h)| ComponentHeight { component, f: h.f, phi: h.phi, z0: h.z0 })
                .collect(),
            crossings: r.trajectory.crossings.clone(),
            mirror_room: r.mirror_room.clone(),
            independence: r.independence.clone(),
            reflection: r.reflection.clone(),
            certificate: r.certificate.clone(),
            files: ArtifactFiles::default(),
            timings: if canonical { None } else { Some(r.timings.clone()) },
        }
    }
}
