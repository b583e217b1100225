mod args;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use ellipsoid_traj::export::{read_curve_csv, write_curve_csv, write_json, write_obj, CurveMetadata, EllipsoidMesh};
use ellipsoid_traj::families::{
    circle_constant_kg, cycloid, equator, helix, linear_kg_curve, satellite, CircleParams, CycloidParams, HelixParams,
    SatelliteParams,
};
use ellipsoid_traj::gallery::write_gallery;
use ellipsoid_traj::magnetic::{curvature_solution, integrate_magnetic_trajectory_with, CurvatureBranch, TrajectoryIntegration};
use ellipsoid_traj::verify::{
    axis_start, magnetic_delta_scan, verify_circle, verify_cycloid, verify_helix, verify_linear_curve, verify_satellite,
    verify_spherical_curve, verify_trajectory, Tolerances, VerificationReport,
};
use ellipsoid_traj::{Curve, DarbouxFrame, EllipticMetric, Error, KillingField, Result};

use args::{Cli, Command, Family, FamilyArgs, GalleryArgs, GenerateArgs, MeshArgs, ToleranceArgs, VerifyArgs};

fn tolerances(t: &ToleranceArgs) -> Tolerances {
    Tolerances {
        integrator: t.tol,
        on_sphere: t.sphere_tol,
        frame: t.frame_tol,
        frame_equations: t.frame_eq_tol,
        oracle: t.oracle_tol,
        isometry: t.isometry_tol,
        construction: t.construction_tol,
        curvature_ode: t.curvature_tol,
    }
}

fn required(v: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Domain(format!("{family} needs --{flag}")))
}

fn helix_params(a: &FamilyArgs, m: EllipticMetric) -> Result<HelixParams> {
    Ok(HelixParams {
        radius: a.radius,
        ..HelixParams::new(required(a.k, "k", "helix")?, m)
    })
}

fn satellite_params(a: &FamilyArgs, m: EllipticMetric) -> Result<SatelliteParams> {
    Ok(SatelliteParams {
        radius: a.radius,
        ..SatelliteParams::new(required(a.alpha, "alpha", "satellite")?, required(a.k, "k", "satellite")?, m)
    })
}

fn cycloid_params(a: &FamilyArgs, m: EllipticMetric) -> Result<CycloidParams> {
    let (ra, rb) = (required(a.a, "a", "cycloid")?, required(a.b, "b", "cycloid")?);
    match a.omega {
        Some(omega) => Ok(CycloidParams::new(ra, rb, omega, m)),
        None => CycloidParams::with_mode(ra, rb, a.omega_mode, m),
    }
}

fn circle_params(a: &FamilyArgs, m: EllipticMetric) -> CircleParams {
    if a.example == 2 {
        CircleParams::example_4_2(m)
    } else {
        CircleParams::example_4_1(m)
    }
}

fn magnetic_field(a: &FamilyArgs, m: EllipticMetric) -> Result<KillingField> {
    match a.axis {
        Some(axis) => KillingField::axis(m.normalize(&axis)?, a.strength, m),
        None => {
            let profile = curvature_solution(CurvatureBranch::Tanh {
                delta: a.delta,
                c1: a.c1,
                c2: a.c2,
            })?;
            Ok(KillingField::frame(a.delta, profile, m))
        }
    }
}

fn magnetic_curve(a: &FamilyArgs, m: EllipticMetric, tol: &Tolerances) -> Result<(KillingField, Curve)> {
    let field = magnetic_field(a, m)?;
    let (p0, t0) = match a.axis {
        Some(axis) => {
            let axis = m.normalize(&axis)?;
            let (p, t) = axis_start(&axis, &m)?;
            // Start at 45 degrees to the field circle so the path is not a trivial orbit.
            let side = m.cross(&p, &t);
            (p, (t + side) * std::f64::consts::FRAC_1_SQRT_2)
        }
        None => {
            let f = DarbouxFrame::equatorial(&m);
            (f.gamma, f.t)
        }
    };
    let opts = TrajectoryIntegration {
        tolerance: tol.integrator,
        ..Default::default()
    };
    let c = integrate_magnetic_trajectory_with(&field, p0, t0, a.length, &opts)?.with_label("magnetic trajectory");
    Ok((field, c))
}

fn build(family: Family, a: &FamilyArgs, m: EllipticMetric, tol: &Tolerances) -> Result<(Curve, serde_json::Value)> {
    Ok(match family {
        Family::Helix => {
            let p = helix_params(a, m)?;
            (helix(&p)?, serde_json::json!({ "k": p.k, "radius": p.radius }))
        }
        Family::Satellite => {
            let p = satellite_params(a, m)?;
            (satellite(&p)?, serde_json::json!({ "alpha": p.alpha, "k": p.k, "radius": p.radius }))
        }
        Family::Cycloid => {
            let p = cycloid_params(a, m)?;
            (cycloid(&p)?, serde_json::json!({ "a": p.a, "b": p.b, "omega": p.omega }))
        }
        Family::Circle => {
            let p = circle_params(a, m);
            (circle_constant_kg(&p)?, serde_json::json!({ "example": a.example, "circle": p }))
        }
        Family::Linear => (linear_kg_curve(m, a.length)?, serde_json::json!({ "length": a.length, "slope": 1.0 })),
        Family::Equator => (equator(m), serde_json::json!({})),
        Family::Magnetic => {
            let (_, c) = magnetic_curve(a, m, tol)?;
            let params = match a.axis {
                Some(axis) => serde_json::json!({ "axis": [axis.x, axis.y, axis.z], "strength": a.strength, "length": a.length }),
                None => serde_json::json!({ "delta": a.delta, "c1": a.c1, "c2": a.c2, "length": a.length }),
            };
            (c, params)
        }
    })
}

fn verify_family(family: Family, a: &FamilyArgs, m: EllipticMetric, tol: &Tolerances) -> Result<VerificationReport> {
    Ok(match family {
        Family::Helix => verify_helix(&helix_params(a, m)?, tol),
        Family::Satellite => verify_satellite(&satellite_params(a, m)?, tol),
        Family::Cycloid => verify_cycloid(&cycloid_params(a, m)?, tol),
        Family::Circle => verify_circle(&circle_constant_kg(&circle_params(a, m))?, tol),
        Family::Linear => verify_linear_curve(&linear_kg_curve(m, a.length)?, tol),
        Family::Equator => verify_spherical_curve(&equator(m), tol),
        Family::Magnetic => {
            let (field, c) = magnetic_curve(a, m, tol)?;
            verify_trajectory(&field, &c, tol)
        }
    })
}

fn family_name(f: Family) -> String {
    format!("{f:?}").to_lowercase()
}

fn generate(g: &GenerateArgs, m: EllipticMetric, tol: &Tolerances) -> Result<bool> {
    let (curve, params) = build(g.family, &g.family_args, m, tol)?;
    write_curve_csv(&g.out, &curve, g.samples, g.frames)?;
    let meta = CurveMetadata {
        name: g.out.file_stem().map_or("curve".into(), |s| s.to_string_lossy().into_owned()),
        family: family_name(g.family),
        metric: m,
        params,
        samples: g.samples,
        domain: curve.domain(),
        radius: curve.radius(),
        generator_version: ellipsoid_traj::VERSION.into(),
        verification: None,
    };
    write_json(&g.out.with_extension("json"), &meta)?;
    println!("wrote {} samples to {}", g.samples, g.out.display());
    Ok(true)
}

fn verify_input(path: &Path, m: EllipticMetric, tol: &Tolerances) -> Result<VerificationReport> {
    let table = read_curve_csv(path)?;
    let radius = m.norm(&table.points[0]);
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("{}: first point has no usable radius", path.display())));
    }
    let curve = table
        .to_curve(m)?
        .with_radius(Some(radius))
        .with_label(path.display().to_string());
    let mut report = verify_spherical_curve(&curve, tol);
    let worst = table
        .points
        .iter()
        .map(|p| (m.inner(p, p) - radius * radius).abs() / (radius * radius))
        .fold(0.0, ellipsoid_traj::curve::nan_max);
    report.at_most("on-sphere at every stored row", worst, tol.on_sphere);
    Ok(report)
}

fn verify(v: &VerifyArgs, m: EllipticMetric, tol: &Tolerances) -> Result<bool> {
    if let Some(args::ScanRange(deltas)) = &v.delta_scan {
        let axis = v
            .family_args
            .axis
            .ok_or_else(|| Error::Domain("--delta-scan needs --axis".into()))?;
        if v.family != Some(Family::Magnetic) {
            return Err(Error::Domain("--delta-scan applies to `verify magnetic`".into()));
        }
        let rows = magnetic_delta_scan(&axis, deltas, &m, v.family_args.length, tol)?;
        println!(
            "{:>8} {:>12} {:>14} {:>12} {:>12} {:>10}  status",
            "d", "measured d", "k''+dkk' res", "sphere", "speed", "max |k_g|"
        );
        for r in &rows {
            println!(
                "{:>8.3} {:>12.6} {:>14.3e} {:>12.3e} {:>12.3e} {:>10.3e}  {}",
                r.delta,
                r.measured_delta,
                r.curvature_residual,
                r.sphere_drift,
                r.speed_drift,
                r.max_geodesic_curvature,
                if r.passed { "pass" } else { "FAIL" }
            );
        }
        if let Some(out) = &v.out {
            write_json(out, &rows)?;
        }
        return Ok(rows.iter().all(|r| r.passed));
    }
    let report = match (&v.input, v.family) {
        (Some(path), _) => verify_input(path, m, tol)?,
        (None, Some(f)) => verify_family(f, &v.family_args, m, tol)?,
        (None, None) => unreachable!("clap requires a family or --input"),
    };
    print!("{}", report.summary_table());
    if let Some(out) = &v.out {
        write_json(out, &report)?;
    }
    Ok(report.passed())
}

fn mesh(a: &MeshArgs, m: EllipticMetric) -> Result<bool> {
    let mesh = EllipsoidMesh::new(&m, a.resolution)?;
    write_obj(&a.out, &mesh)?;
    println!(
        "wrote {} vertices and {} faces to {}",
        mesh.vertices.len(),
        mesh.faces.len(),
        a.out.display()
    );
    Ok(true)
}

fn gallery(a: &GalleryArgs, m: EllipticMetric, tol: &Tolerances) -> Result<bool> {
    let summary = write_gallery(&a.out, m, a.samples, tol)?;
    for r in &summary.curves {
        println!("{} {}", if r.passed { "pass" } else { "FAIL" }, r.subject);
        for c in r.checks.iter().filter(|c| !c.passed) {
            println!("    {}: {:.3e} (tol {:.1e})", c.name, c.measured, c.tolerance);
        }
    }
    println!("{} curves written to {}", summary.curves.len(), a.out.display());
    Ok(summary.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = tolerances(&cli.tolerances);
    let result = match &cli.command {
        Command::Generate(g) => generate(g, cli.metric, &tol),
        Command::Verify(v) => verify(v, cli.metric, &tol),
        Command::Mesh(a) => mesh(a, cli.metric),
        Command::Gallery(a) => gallery(a, cli.metric, &tol),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
