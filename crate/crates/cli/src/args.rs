use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellipsoid_traj::families::OmegaMode;
use ellipsoid_traj::{EllipticMetric, Vec3};

#[derive(Parser, Debug)]
#[command(name = "ellipsoid-traj", version, about = "Curves and magnetic trajectories on the elliptical 2-sphere")]
pub struct Cli {
    /// Metric coefficients a1,a2,a3 of a1 x^2 + a2 y^2 + a3 z^2 = 1.
    #[arg(long, global = true, default_value = "4,9,16", value_parser = parse_metric)]
    pub metric: EllipticMetric,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ToleranceArgs {
    /// Integrator tolerance.
    #[arg(long, global = true, env = "ELLIPSOID_TRAJ_TOL", default_value_t = 1e-10)]
    pub tol: f64,
    /// Relative on-sphere tolerance |B(p,p) - r^2| / r^2.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub sphere_tol: f64,
    /// Frame orthonormality and handedness tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub frame_tol: f64,
    /// Finite-difference residual tolerance for the frame equations.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub frame_eq_tol: f64,
    /// Tolerance of curvature against the round-sphere oracle.
    #[arg(long, global = true, default_value_t = 1e-5)]
    pub oracle_tol: f64,
    /// Tolerance of curvature invariance under rotations.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub isometry_tol: f64,
    /// Tolerance between closed and rotation-composed forms.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub construction_tol: f64,
    /// Residual tolerance of the curvature equation k'' + d k k' = 0.
    #[arg(long, global = true, default_value_t = 1e-5)]
    pub curvature_tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a curve as CSV with a JSON metadata sidecar.
    Generate(GenerateArgs),
    /// Run the verification suite of a family, a CSV file or a magnetic scan.
    Verify(VerifyArgs),
    /// Write a triangulated ellipsoid as Wavefront OBJ.
    Mesh(MeshArgs),
    /// Write every gallery curve, its metadata and a verification report.
    Gallery(GalleryArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Helix,
    Satellite,
    Cycloid,
    Circle,
    Linear,
    Equator,
    Magnetic,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Helix rate (0 < k < 1) or satellite rate.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Satellite angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Radius of the sphere the helix or satellite lies on.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub radius: f64,
    /// Cycloid fixed-ellipse radius.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Cycloid rolling-ellipse radius.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Cycloid plane angle in radians; overrides --omega-mode.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Cycloid plane angle rule.
    #[arg(long, default_value = "spherical", value_parser = parse_omega_mode)]
    pub omega_mode: OmegaMode,
    /// Constant-curvature circle: 1 or 2 (4.1 and 4.2 are accepted too).
    #[arg(long, default_value = "1", value_parser = parse_example)]
    pub example: u8,
    /// Arclength of integrated curves.
    #[arg(long, allow_hyphen_values = true, default_value_t = 20.0)]
    pub length: f64,
    /// Axis of a Killing field, as x,y,z; normalized in the metric.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vec3)]
    pub axis: Option<Vec3>,
    /// Field strength along --axis.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub strength: f64,
    /// Frame-field quasislope d; without --axis the trajectory follows the
    /// tanh curvature branch with this d.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub delta: f64,
    /// First constant of the tanh branch.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub c1: f64,
    /// Shift of the tanh branch.
    #[arg(long, allow_hyphen_values = true, default_value_t = -5.0)]
    pub c2: f64,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    pub family: Family,
    #[command(flatten)]
    pub family_args: FamilyArgs,
    /// Number of output samples.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Output CSV; the sidecar gets the same stem with `.json`.
    #[arg(long)]
    pub out: PathBuf,
    /// Add tangent, side vector and curvature columns.
    #[arg(long)]
    pub frames: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Family to build and verify; omit with --input.
    #[arg(required_unless_present = "input")]
    pub family: Option<Family>,
    #[command(flatten)]
    pub family_args: FamilyArgs,
    /// Verify a curve CSV instead of a generated family.
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    /// For `magnetic --axis`: scan field strengths start:stop:step.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub delta_scan: Option<ScanRange>,
    /// Write the report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MeshArgs {
    /// Latitude rows; the grid has twice as many longitude columns.
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct GalleryArgs {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("`{p}`: {e}"))?;
    }
    Ok(out)
}

pub fn parse_metric(s: &str) -> Result<EllipticMetric, String> {
    let [a1, a2, a3] = parse_triple(s)?;
    EllipticMetric::new(a1, a2, a3).map_err(|e| e.to_string())
}

pub fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let [x, y, z] = parse_triple(s)?;
    Ok(Vec3::new(x, y, z))
}

fn parse_omega_mode(s: &str) -> Result<OmegaMode, String> {
    s.parse().map_err(|e: ellipsoid_traj::Error| e.to_string())
}

fn parse_example(s: &str) -> Result<u8, String> {
    match s {
        "1" | "4.1" => Ok(1),
        "2" | "4.2" => Ok(2),
        _ => Err(format!("unknown circle example `{s}`; use 1 or 2")),
    }
}

/// Values of a `start:stop:step` range.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRange(pub Vec<f64>);

/// `start:stop:step`, both ends included.
pub fn parse_range(s: &str) -> Result<ScanRange, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(format!("expected start:stop:step, got `{s}`"));
    };
    if !(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite()) {
        return Err("range needs step > 0 and stop >= start".into());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n > 10_000 {
        return Err("range has more than 10000 values".into());
    }
    Ok(ScanRange((0..=n).map(|i| start + i as f64 * step).collect()))
}
