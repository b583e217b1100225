use ellipsoid_traj::EllipticMetric;
use ellipsoid_traj_web::{build_family_curve, build_magnetic_trajectory, build_wireframe};

fn m() -> EllipticMetric {
    EllipticMetric::new(4.0, 9.0, 16.0).unwrap()
}

fn on_sphere(triples: impl Iterator<Item = [f64; 3]>, m: &EllipticMetric) -> f64 {
    triples
        .map(|[x, y, z]| (m.a(0) * x * x + m.a(1) * y * y + m.a(2) * z * z - 1.0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn family_curves_come_back_on_the_sphere() {
    let m = m();
    for (family, first, second) in [("helix", 0.5, 0.0), ("satellite", 1.8, 2.0), ("cycloid", 4.0, 3.0), ("circle", 2.0, 0.0)] {
        let d = build_family_curve(family, first, second, m, 400).unwrap();
        assert_eq!(d.len(), 400);
        assert_eq!(d.positions().len(), 1200);
        assert!(on_sphere(d.position_triples(), &m) < 1e-9, "{family}");
        assert!(d.summary().contains("max |B(p,p) - 1|"));
    }
    assert!(build_family_curve("spiral", 1.0, 1.0, m, 100).is_err());
    assert!(build_family_curve("helix", 2.0, 0.0, m, 100).is_err());
}

#[test]
fn circle_curvature_is_constant() {
    let d = build_family_curve("circle", 1.0, 0.0, m(), 200).unwrap();
    let k = d.curvature();
    assert!(k.iter().all(|v| (v.abs() - 1.0).abs() < 1e-8));
}

#[test]
fn magnetic_trajectory_follows_the_tanh_branch() {
    let d = build_magnetic_trajectory(m(), 1.0, 0.5, -5.0, 10.0).unwrap();
    assert!(on_sphere(d.position_triples(), &m()) < 1e-8);
    let amp = 1.0f64;
    let rate = 0.5f64;
    for (s, k) in d.params().iter().zip(d.curvature()).skip(10).step_by(50) {
        assert!((k - amp * (rate * (s - 5.0)).tanh()).abs() < 1e-5, "s = {s}");
    }
    assert!(build_magnetic_trajectory(m(), -1.0, 0.5, 0.0, 10.0).is_err());
    assert!(build_magnetic_trajectory(m(), 1.0, 0.5, 0.0, 0.0).is_err());
}

#[test]
fn wireframe_segments_lie_on_the_sphere() {
    let w = build_wireframe(m(), 16).unwrap();
    assert_eq!(w.len() % 6, 0);
    assert!(on_sphere(w.chunks_exact(3).map(|c| [c[0], c[1], c[2]]), &m()) < 1e-12);
}
