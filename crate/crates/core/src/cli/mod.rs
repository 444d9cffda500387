//! Command-line front end: `realize`, `verify` and `presets`.

pub mod presets;
pub mod report;
pub mod spec;
pub mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::height::SpatialTrajectory;
use crate::pipeline::{realize, verify_artifacts};
use report::RealizationReport;
use spec::RealizationSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_SEARCH: i32 = 2;
pub const EXIT_SPEC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "billiard-knot", version, about = "Realize knots and links as billiard trajectories in convex prisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the construction for a spec file and write all artifacts.
    Realize {
        spec: PathBuf,
        /// output directory (overrides `out` in the spec file)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        fmax: Option<u64>,
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long)]
        precision: Option<u32>,
        /// leave timings out so identical inputs give identical reports
        #[arg(long)]
        canonical: bool,
    },
    /// Re-check the artifacts referenced by a report.
    Verify {
        report: PathBuf,
        /// trajectory file to use instead of the one named in the report
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// List the built-in patterns.
    Presets,
}

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub f_max: Option<u64>,
    pub margin: Option<f64>,
    pub precision: Option<u32>,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Realize { spec, out: dir, seed, fmax, margin, precision, canonical } => {
            let o = Overrides { out: dir, seed, f_max: fmax, margin, precision };
            cmd_realize(&spec, &o, canonical, out, err)
        }
        Command::Verify { report, trajectory } => cmd_verify(&report, trajectory.as_deref(), out, err),
        Command::Presets => cmd_presets(out),
    }
}

pub fn cmd_presets(out: &mut dyn Write) -> i32 {
    match out.write_all(presets::listing().as_bytes()) {
        Ok(()) => EXIT_OK,
        Err(_) => EXIT_IO,
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

pub fn cmd_realize(spec_path: &Path, o: &Overrides, canonical: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match fs::read_to_string(spec_path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "cannot read {}: {e}", spec_path.display());
            return EXIT_SPEC;
        }
    };
    let mut spec = match RealizationSpec::parse(&text) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_SPEC;
        }
    };
    spec.seed = o.seed.or(spec.seed);
    spec.f_max = o.f_max.or(spec.f_max);
    spec.margin = o.margin.or(spec.margin);
    spec.precision_bits = o.precision.or(spec.precision_bits);
    spec.out = o.out.clone().or(spec.out);
    let resolved = match spec.resolve() {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "{}", bare_message(&e));
            return EXIT_SPEC;
        }
    };
    let Some(dir) = resolved.out.clone() else {
        let _ = writeln!(err, "an output directory is required (--out)");
        return EXIT_SPEC;
    };

    let r = match realize(&resolved.pattern, &resolved.options) {
        Ok(r) => r,
        Err(e @ (Error::SearchExhausted { .. } | Error::CombinatorialCollapse { .. })) => {
            let _ = writeln!(err, "{e}");
            return EXIT_SEARCH;
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_VERIFY;
        }
    };
    let report = RealizationReport::new(&r, resolved.preset.clone(), &resolved.options, canonical);
    let files = &report.files;
    let written = fs::create_dir_all(&dir)
        .and_then(|_| write_json(&dir.join("report.json"), &report))
        .and_then(|_| write_json(&dir.join(&files.trajectory), &r.trajectory))
        .and_then(|_| write_json(&dir.join(&files.table), &r.table))
        .and_then(|_| fs::write(dir.join(&files.mesh), r.table.to_obj()))
        .and_then(|_| fs::write(dir.join(&files.diagram), svg::star_svg(&r.star.export())))
        .and_then(|_| write_json(&dir.join(&files.star), &r.star.export()))
        .and_then(|_| write_json(&dir.join(&files.polygon), &r.polygon.export()));
    if let Err(e) = written {
        let _ = writeln!(err, "cannot write artifacts to {}: {e}", dir.display());
        return EXIT_IO;
    }
    for s in &report.stages {
        let detail = if s.detail.is_empty() { String::new() } else { format!(" ({})", s.detail) };
        let _ = writeln!(out, "{}: {}{detail}", s.name, s.status.as_str());
    }
    if report.verified {
        EXIT_OK
    } else {
        let failed = report.stages.iter().find(|s| s.status == report::Status::Fail).map(|s| s.name.as_str());
        let _ = writeln!(err, "verification failed at {}", failed.unwrap_or("an unknown stage"));
        EXIT_VERIFY
    }
}

fn bare_message(e: &Error) -> String {
    match e {
        Error::Domain(m) | Error::Parse(m) => m.clone(),
        other => other.to_string(),
    }
}

pub fn cmd_verify(report_path: &Path, trajectory: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let read = |path: &Path| fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()));
    let report: RealizationReport = match read(report_path)
        .and_then(|t| serde_json::from_str(&t).map_err(|e| format!("{}: {e}", report_path.display())))
    {
        Ok(r) => r,
        Err(m) => {
            let _ = writeln!(err, "{m}");
            return EXIT_SPEC;
        }
    };
    let traj_path = match trajectory {
        Some(p) => p.to_path_buf(),
        None => report_path.parent().unwrap_or(Path::new(".")).join(&report.files.trajectory),
    };
    let traj: SpatialTrajectory = match read(&traj_path)
        .and_then(|t| serde_json::from_str(&t).map_err(|e| format!("{}: {e}", traj_path.display())))
    {
        Ok(t) => t,
        Err(m) => {
            let _ = writeln!(err, "{m}");
            return EXIT_SPEC;
        }
    };
    match verify_artifacts(&traj, &report.pattern, report.precision_bits) {
        Ok(s) => {
            let _ = writeln!(out, "mirror_room_check: pass (margin {:e})", s.mirror_room.margin);
            let _ = writeln!(out, "verify_reflection: pass (max error {:e})", s.reflection.max_error);
            let _ = writeln!(out, "certify: pass ({})", s.certificate.constructed_jones);
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "{f}");
            EXIT_VERIFY
        }
    }
}
