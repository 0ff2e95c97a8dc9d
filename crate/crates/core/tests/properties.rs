use innerlab_core::counting::CountingProfile;
use innerlab_core::distortion::distortion_at_disk;
use innerlab_core::hypgeo::{disk_distance, Moebius};
use innerlab_core::parabolic::{hp_raw_preimages, HalfPlaneInner};
use innerlab_core::preimage::{enumerate_ball, verify_sum_of_heights};
use innerlab_core::quad;
use innerlab_core::{BoundaryPoint, Complex, DiskPoint, InnerModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn disk(max: f64) -> impl Strategy<Value = Complex> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

fn model(max_degree: usize) -> impl Strategy<Value = InnerModel> {
    (any::<u64>(), 2..=max_degree).prop_map(|(seed, d)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        InnerModel::random_centered(&mut rng, d, 0.9)
    })
}

fn halfplane_model() -> impl Strategy<Value = HalfPlaneInner> {
    (-2.0..2.0f64, prop::collection::vec((-3.0..3.0f64, 0.1..2.0f64), 1..4))
        .prop_map(|(beta, atoms)| HalfPlaneInner::new(beta, atoms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn moebius_preserves_distance(a in disk(0.9), rot in 0.0..6.3f64, z in disk(0.95), w in disk(0.95)) {
        let m = Moebius::disk_automorphism(a, rot).unwrap();
        let d = disk_distance(z, w);
        let dm = disk_distance(m.apply(z).unwrap(), m.apply(w).unwrap());
        prop_assert!((d - dm).abs() < 1e-10 * d.max(1.0));
    }

    #[test]
    fn distance_is_a_metric(x in disk(0.95), y in disk(0.95), z in disk(0.95)) {
        prop_assert!((disk_distance(x, y) - disk_distance(y, x)).abs() < 1e-10);
        prop_assert!(disk_distance(x, z) <= disk_distance(x, y) + disk_distance(y, z) + 1e-10);
    }

    #[test]
    fn centered_maps_contract_toward_origin(f in model(6), z in disk(0.95)) {
        prop_assume!(z.norm() > 1e-6);
        let w = f.eval(DiskPoint::new(z).unwrap()).unwrap();
        prop_assert!(disk_distance(Complex::new(0.0, 0.0), w.value()) <= disk_distance(Complex::new(0.0, 0.0), z) + 1e-10);
    }

    #[test]
    fn ahern_clark_bound(f in model(6), t in 0.0..6.3f64, r in 0.0..0.999f64) {
        let zeta = BoundaryPoint::new(t).unwrap();
        let (_, d) = f.eval_deriv_raw(Complex::from_polar(r, t)).unwrap();
        prop_assert!(d.norm() <= 4.0 * f.boundary_deriv_modulus(zeta) + 1e-9);
    }

    #[test]
    fn boundary_winding_is_degree(f in model(6)) {
        let n = 4096;
        let mut turns = 0.0;
        let mut prev = f.eval_deriv_raw(Complex::new(1.0, 0.0)).unwrap().0;
        for k in 1..=n {
            let z = Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
            let w = f.eval_deriv_raw(z).unwrap().0;
            turns += (w / prev).arg();
            prev = w;
        }
        prop_assert_eq!((turns / std::f64::consts::TAU).round() as usize, f.degree());
    }

    #[test]
    fn distortion_inequalities(f in model(5), z in disk(0.98)) {
        let Ok(s) = distortion_at_disk(&f, DiskPoint::new(z).unwrap()) else { return Ok(()) };
        prop_assert!(s.mu <= s.eta + 1e-13);
        prop_assert!(s.delta <= s.alpha + s.eta + 1e-13);
        prop_assert!(s.p.norm() <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tree_residuals_and_heights(f in model(4), z in disk(0.8)) {
        prop_assume!(z.norm() > 0.1);
        let tree = enumerate_ball(&f, DiskPoint::new(z).unwrap(), 4.0).unwrap();
        prop_assert!(tree.max_residual() < 1e-10);
        for node in &tree.nodes {
            if let Some(p) = node.parent {
                prop_assert!(node.radius >= tree.nodes[p].radius - 1e-12);
            }
        }
        for n in 1..tree.generations() {
            if tree.complete[n] {
                prop_assert!(verify_sum_of_heights(&tree, n).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn larger_cutoff_gives_superset(f in model(3), z in disk(0.8)) {
        prop_assume!(z.norm() > 0.1);
        let p = DiskPoint::new(z).unwrap();
        let small = CountingProfile::from_tree(&enumerate_ball(&f, p, 3.0).unwrap());
        let large = CountingProfile::from_tree(&enumerate_ball(&f, p, 4.0).unwrap());
        for s in [0.5, 1.5, 2.5, 3.0] {
            prop_assert_eq!(small.count(s).unwrap(), large.count(s).unwrap());
        }
    }

    #[test]
    fn cesaro_matches_quadrature(mut radii in prop::collection::vec(0.0..5.0f64, 0..30), r in 0.5..5.0f64) {
        radii.sort_by(f64::total_cmp);
        let p = CountingProfile::new(Complex::new(0.5, 0.0), radii.clone(), 5.0).unwrap();
        let mut breaks = vec![0.0];
        breaks.extend(radii.iter().copied().filter(|&d| d < r));
        breaks.push(r);
        let q = quad::integrate_pieces(|s| p.count(s).unwrap() as f64 * (-s).exp(), &breaks, 1e-12, 200);
        prop_assert!((p.cesaro(r).unwrap() - q.value / r).abs() < 1e-9);
    }

    #[test]
    fn halfplane_julia_and_derivative_bounds(f in halfplane_model(), x in -5.0..5.0f64, y in 1e-3..5.0f64) {
        let z = Complex::new(x, y);
        let (w, d) = f.eval_deriv(z);
        prop_assert!(w.im >= y - 1e-12);
        prop_assume!(f.atoms().iter().all(|a| (a.0 - x).abs() > 1e-6));
        prop_assert!(d.norm() <= f.real_derivative(x) * (1.0 + 1e-12));
    }

    #[test]
    fn halfplane_preimage_heights(f in halfplane_model(), x in -5.0..5.0f64, y in 1e-3..5.0f64) {
        let z = Complex::new(x, y);
        let pre = hp_raw_preimages(&f, z).unwrap();
        prop_assert_eq!(pre.len(), f.degree());
        prop_assert!(pre.iter().all(|w| w.im <= y + 1e-12));
        let sum: f64 = pre.iter().map(|w| w.im).sum();
        prop_assert!((sum - y).abs() < 1e-9);
    }
}
