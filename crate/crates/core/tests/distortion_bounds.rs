//! Bounds with pilot-calibrated constants. Pilots on 30, 10³ and 2·10³
//! samples gave maxima 1.64, 3.21 and 2.00; the constants below allow a
//! factor of two.

use innerlab_core::distortion::{distortion_at_disk, image_geodesic_curvature, radial_distortion_integral, Quantity};
use innerlab_core::hypgeo::{disk_distance, Moebius};
use innerlab_core::{BoundaryPoint, Complex, DiskPoint, InnerModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOTAL_RADIAL_RATIO: f64 = 3.5;
const CURVATURE_PER_MU: f64 = 6.5;
const MU_LOG_LIPSCHITZ: f64 = 4.0;

const TAU: f64 = std::f64::consts::TAU;

fn model(rng: &mut ChaCha8Rng) -> InnerModel {
    let d = rng.gen_range(2..=6);
    InnerModel::random_centered(rng, d, 0.9)
}

fn point(rng: &mut ChaCha8Rng, max: f64) -> Complex {
    Complex::from_polar(max * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

#[test]
fn total_radial_distortion_is_comparable_to_log_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..30 {
        let f = model(&mut rng);
        let zeta = BoundaryPoint::new(rng.gen_range(0.0..TAU)).unwrap();
        let q = radial_distortion_integral(&f, zeta, Quantity::Delta, 1.0 - 1e-6, 1e-8).unwrap();
        let ratio = q.value / f.angular_derivative(zeta).ln().max(0.1);
        assert!(ratio <= TOTAL_RADIAL_RATIO, "{ratio}");
    }
}

#[test]
fn image_curvature_is_controlled_by_mu() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut tested = 0;
    while tested < 1000 {
        let f = model(&mut rng);
        let z = DiskPoint::new(point(&mut rng, 0.95)).unwrap();
        let phi = rng.gen_range(0.0..TAU);
        let (Ok(s), Ok(k)) = (distortion_at_disk(&f, z), image_geodesic_curvature(&f, z, phi)) else { continue };
        tested += 1;
        assert!(k.min(1.0) <= CURVATURE_PER_MU * s.mu, "curvature {k} vs μ {}", s.mu);
    }
}

#[test]
fn mu_is_stable_on_nearby_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut tested = 0;
    while tested < 2000 {
        let f = model(&mut rng);
        let a = point(&mut rng, 0.95);
        let b = a + Complex::from_polar(rng.gen_range(0.0..0.2) * (1.0 - a.norm_sqr()), rng.gen_range(0.0..TAU));
        let d = disk_distance(a, b);
        if b.norm() >= 0.99 || d == 0.0 || d > 0.5 {
            continue;
        }
        let (Ok(sa), Ok(sb)) =
            (distortion_at_disk(&f, DiskPoint::new(a).unwrap()), distortion_at_disk(&f, DiskPoint::new(b).unwrap()))
        else {
            continue;
        };
        tested += 1;
        let rate = (sb.mu.ln() - sa.mu.ln()).abs() / d;
        assert!(rate <= MU_LOG_LIPSCHITZ, "{rate} at d = {d}");
    }
}

#[test]
fn automorphisms_attain_schwarz_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..200 {
        let m = Moebius::disk_automorphism(point(&mut rng, 0.9), rng.gen_range(0.0..TAU)).unwrap();
        let s = distortion_at_disk(&m, DiskPoint::new(point(&mut rng, 0.95)).unwrap()).unwrap();
        assert!(1.0 - s.p.norm() < 1e-12, "{}", s.p.norm());
    }
}
