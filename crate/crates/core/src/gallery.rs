//! The full figure set: three magnetic examples, eight helices, eight
//! satellites and seven spherical cycloids, each with its verification.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fs;
use std::path::Path;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::export::{write_curve_csv, write_json, CurveMetadata};
use crate::families::{
    circle_constant_kg, cycloid, helix, linear_kg_curve, satellite, CircleParams, CycloidParams, HelixParams,
    OmegaMode, SatelliteParams,
};
use crate::metric::EllipticMetric;
use crate::verify::{
    example_4_1_discrepancy, verify_circle, verify_cycloid, verify_helix, verify_linear_curve, verify_satellite,
    Tolerances, VerificationReport,
};

pub const HELIX_RATES: [f64; 8] = [0.56, 0.17, 0.75, 0.5, 0.4, 0.6, 0.9, 0.3];
pub const SATELLITE_PARAMS: [(f64, f64); 8] = [
    (FRAC_1_SQRT_2, 1.0),
    (FRAC_PI_2, 1.0),
    (FRAC_PI_2, 0.5),
    (2.1, 0.5),
    (2.5, 2.0),
    (1.8, 2.0),
    (1.57, 2.0),
    (1.5, 2.0),
];
pub const CYCLOID_RADII: [(f64, f64); 7] = [(4.0, 3.0), (4.0, 2.0), (7.0, 1.0), (7.0, 5.0), (25.0, 4.0), (7.0, 3.0), (1.09, 1.0)];
/// Arclength of the `k_g(s) = s` spiral.
pub const LINEAR_LENGTH: f64 = 6.0;

/// One gallery curve before it is built.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GallerySpec {
    Circle { example: u8 },
    Linear { length: f64 },
    Helix(HelixParams),
    Satellite(SatelliteParams),
    Cycloid(CycloidParams),
}

impl GallerySpec {
    pub fn family(&self) -> &'static str {
        match self {
            GallerySpec::Circle { .. } => "circle",
            GallerySpec::Linear { .. } => "linear",
            GallerySpec::Helix(_) => "helix",
            GallerySpec::Satellite(_) => "satellite",
            GallerySpec::Cycloid(_) => "cycloid",
        }
    }

    pub fn name(&self) -> String {
        match self {
            GallerySpec::Circle { example } => format!("circle-{example}"),
            GallerySpec::Linear { .. } => "linear-kg".into(),
            GallerySpec::Helix(p) => format!("helix-k{}", p.k),
            GallerySpec::Satellite(p) => format!("satellite-alpha{:.4}-k{}", p.alpha, p.k),
            GallerySpec::Cycloid(p) => format!("cycloid-a{}-b{}", p.a, p.b),
        }
    }

    fn circle_params(example: u8, m: EllipticMetric) -> Result<CircleParams> {
        match example {
            1 => Ok(CircleParams::example_4_1(m)),
            2 => Ok(CircleParams::example_4_2(m)),
            _ => Err(Error::domain(format!("unknown circle example {example}"))),
        }
    }

    pub fn build(&self, m: EllipticMetric) -> Result<Curve> {
        let c = match self {
            GallerySpec::Circle { example } => circle_constant_kg(&Self::circle_params(*example, m)?)?,
            GallerySpec::Linear { length } => linear_kg_curve(m, *length)?,
            GallerySpec::Helix(p) => helix(&HelixParams { metric: m, ..*p })?,
            GallerySpec::Satellite(p) => satellite(&SatelliteParams { metric: m, ..*p })?,
            GallerySpec::Cycloid(p) => cycloid(&CycloidParams { metric: m, ..*p })?,
        };
        Ok(c.with_label(self.name()))
    }

    pub fn verify(&self, c: &Curve, tol: &Tolerances) -> VerificationReport {
        let m = *c.metric();
        let mut r = match self {
            GallerySpec::Circle { example } => {
                let mut r = verify_circle(c, tol);
                if *example == 1 {
                    r.absorb(example_4_1_discrepancy(&m));
                }
                r
            }
            GallerySpec::Linear { .. } => verify_linear_curve(c, tol),
            GallerySpec::Helix(p) => verify_helix(&HelixParams { metric: m, ..*p }, tol),
            GallerySpec::Satellite(p) => verify_satellite(&SatelliteParams { metric: m, ..*p }, tol),
            GallerySpec::Cycloid(p) => verify_cycloid(&CycloidParams { metric: m, ..*p }, tol),
        };
        r.subject = self.name();
        r
    }

    pub fn params_json(&self, m: EllipticMetric) -> serde_json::Value {
        match self {
            GallerySpec::Circle { example } => match Self::circle_params(*example, m) {
                Ok(p) => serde_json::json!({ "example": example, "circle": p }),
                Err(_) => serde_json::json!({ "example": example }),
            },
            GallerySpec::Linear { length } => serde_json::json!({ "length": length, "slope": 1.0 }),
            GallerySpec::Helix(p) => serde_json::json!({ "k": p.k, "radius": p.radius }),
            GallerySpec::Satellite(p) => serde_json::json!({ "alpha": p.alpha, "k": p.k, "radius": p.radius }),
            GallerySpec::Cycloid(p) => serde_json::json!({ "a": p.a, "b": p.b, "omega": p.omega }),
        }
    }
}

/// The 26 gallery curves in `m`.
pub fn gallery_specs(m: EllipticMetric) -> Result<Vec<GallerySpec>> {
    let mut specs = vec![
        GallerySpec::Circle { example: 1 },
        GallerySpec::Circle { example: 2 },
        GallerySpec::Linear { length: LINEAR_LENGTH },
    ];
    specs.extend(HELIX_RATES.iter().map(|&k| GallerySpec::Helix(HelixParams::new(k, m))));
    specs.extend(
        SATELLITE_PARAMS
            .iter()
            .map(|&(alpha, k)| GallerySpec::Satellite(SatelliteParams::new(alpha, k, m))),
    );
    for &(a, b) in &CYCLOID_RADII {
        specs.push(GallerySpec::Cycloid(CycloidParams::with_mode(a, b, OmegaMode::Spherical, m)?));
    }
    Ok(specs)
}

#[derive(Debug)]
pub struct GalleryEntry {
    pub spec: GallerySpec,
    pub curve: Result<Curve>,
    pub report: VerificationReport,
}

impl GalleryEntry {
    pub fn passed(&self) -> bool {
        self.curve.is_ok() && self.report.passed()
    }
}

fn build_entry(spec: GallerySpec, m: EllipticMetric, tol: &Tolerances) -> GalleryEntry {
    let curve = spec.build(m);
    let report = match &curve {
        Ok(c) => spec.verify(c, tol),
        Err(e) => {
            let mut r = VerificationReport::new(spec.name());
            r.error("construction", e);
            r
        }
    };
    GalleryEntry { spec, curve, report }
}

/// Builds and verifies every gallery curve, spreading the work over the
/// available cores.
pub fn build_gallery(m: EllipticMetric, tol: &Tolerances) -> Result<Vec<GalleryEntry>> {
    let specs = gallery_specs(m)?;
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(specs.len());
    let chunk = specs.len().div_ceil(workers);
    let entries = thread::scope(|scope| {
        let handles: Vec<_> = specs
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&s| build_entry(s, m, tol)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("gallery worker panicked"))
            .collect()
    });
    Ok(entries)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GallerySummary {
    pub metric: EllipticMetric,
    pub samples: usize,
    pub passed: bool,
    pub curves: Vec<VerificationReport>,
}

/// Writes `<name>.csv`, `<name>.json` per curve and `report.json` into `dir`.
pub fn write_gallery(dir: &Path, m: EllipticMetric, samples: usize, tol: &Tolerances) -> Result<GallerySummary> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let entries = build_gallery(m, tol)?;
    for entry in &entries {
        let Ok(c) = &entry.curve else { continue };
        let name = entry.spec.name();
        write_curve_csv(&dir.join(format!("{name}.csv")), c, samples, false)?;
        let meta = CurveMetadata {
            name: name.clone(),
            family: entry.spec.family().into(),
            metric: m,
            params: entry.spec.params_json(m),
            samples,
            domain: c.domain(),
            radius: c.radius(),
            generator_version: crate::VERSION.into(),
            verification: Some((&entry.report).into()),
        };
        write_json(&dir.join(format!("{name}.json")), &meta)?;
    }
    let summary = GallerySummary {
        metric: m,
        samples,
        passed: entries.iter().all(GalleryEntry::passed),
        curves: entries.into_iter().map(|e| e.report).collect(),
    };
    write_json(&dir.join("report.json"), &summary)?;
    Ok(summary)
}
