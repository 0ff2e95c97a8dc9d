//! Möbius and linear distortion of a holomorphic self-map relative to the
//! radial (disk) or downward (half-plane) unit vector field.
//!
//! Everything is driven by the complex ratio `p` of the pushed-forward field
//! to the field at the image: `μ = 1 - |p|`, `δ = |1 - p|`,
//! `η = 1 - Re p`, `α = |arg p|`.

use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::hypgeo::{DiskPoint, HalfPlanePoint};
use crate::innerfn::{BoundaryPoint, DiskMap, InnerModel};
use crate::logpolar::{self, LogPolar};
use crate::math::{cis, modulus_from_radius, radius_from_modulus};
use crate::quad::{self, Quadrature};
use crate::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Mu,
    Delta,
    Eta,
    Alpha,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::Mu, Quantity::Eta, Quantity::Delta, Quantity::Alpha];
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistortionSample {
    pub z: Complex,
    pub p: Complex,
    pub mu: f64,
    pub delta: f64,
    pub eta: f64,
    pub alpha: f64,
}

impl DistortionSample {
    pub fn from_ratio(z: Complex, p: Complex) -> Self {
        Self {
            z,
            p,
            mu: 1.0 - p.norm(),
            delta: (Complex::new(1.0, 0.0) - p).norm(),
            eta: 1.0 - p.re,
            alpha: p.arg().abs(),
        }
    }

    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Mu => self.mu,
            Quantity::Delta => self.delta,
            Quantity::Eta => self.eta,
            Quantity::Alpha => self.alpha,
        }
    }
}

/// Maps of the disk for which `1 - |F(z)|²` can be supplied directly.
pub trait DiskGap: DiskMap {
    /// `(F(z), F'(z), 1 - |F(z)|²)`.
    fn eval_with_gap(&self, z: Complex) -> Result<(Complex, Complex, f64)> {
        let (w, dw) = self.eval_deriv(z)?;
        Ok((w, dw, 1.0 - w.norm_sqr()))
    }
}

impl DiskGap for InnerModel {
    fn eval_with_gap(&self, z: Complex) -> Result<(Complex, Complex, f64)> {
        let (w, dw) = self.eval_deriv_raw(z)?;
        if self.is_finite_blaschke() || z.norm() < 0.5 {
            let img = logpolar::forward(self, LogPolar::from_complex(z))?;
            if img.height.is_finite() && img.height > 0.0 {
                return Ok((w, dw, img.gap2()));
            }
        }
        Ok((w, dw, 1.0 - w.norm_sqr()))
    }
}

impl DiskGap for crate::hypgeo::Moebius {}
impl<A: DiskMap, B: DiskMap> DiskGap for crate::innerfn::Compose<A, B> {}
impl<F: Fn(Complex) -> (Complex, Complex)> DiskGap for crate::innerfn::FnMap<F> {}
impl DiskGap for crate::innerfn::FrostmanShift<'_> {}

/// Distortion at a point of the disk.
pub fn distortion_at_disk(f: &impl DiskGap, z: DiskPoint) -> Result<DistortionSample> {
    let z = z.value();
    if z.norm() == 0.0 {
        return Err(Error::UndefinedDirection(alloc::format!("{z} (radial field vanishes)")));
    }
    let (w, dw, gap_w) = f.eval_with_gap(z)?;
    if w.norm() == 0.0 {
        return Err(Error::UndefinedDirection(alloc::format!("{z} (image is the origin)")));
    }
    let gap_z = 1.0 - z.norm_sqr();
    let p = dw * (gap_z / gap_w) * (z / z.norm()) * (w.norm() / w);
    Ok(DistortionSample::from_ratio(z, p))
}

/// Distortion at a log-polar point, for points too close to the circle for
/// complex coordinates.
pub fn distortion_at_logpolar(f: &InnerModel, z: LogPolar) -> Result<DistortionSample> {
    let w = z.to_complex();
    let img = logpolar::forward(f, z)?;
    if !img.height.is_finite() {
        return Err(Error::UndefinedDirection(alloc::format!("{w} (image is the origin)")));
    }
    let (_, dw) = f.eval_deriv_raw(w)?;
    let p = dw * (z.gap2() / img.gap2()) * cis(z.angle - img.angle);
    Ok(DistortionSample::from_ratio(w, p))
}

/// Holomorphic self-maps of the upper half-plane.
pub trait HalfPlaneMap {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)>;
}

impl HalfPlaneMap for crate::hypgeo::Moebius {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        Ok((self.apply(z)?, self.derivative(z)?))
    }
}

/// Closure returning value and derivative on the half-plane.
pub struct HalfPlaneFn<F>(pub F);

impl<F: Fn(Complex) -> (Complex, Complex)> HalfPlaneMap for HalfPlaneFn<F> {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        Ok((self.0)(z))
    }
}

/// Distortion at a point of the half-plane: `p = F'(z) Im z / Im F(z)`.
pub fn distortion_at_halfplane(f: &impl HalfPlaneMap, z: HalfPlanePoint) -> Result<DistortionSample> {
    let z = z.value();
    let (w, dw) = f.eval_deriv(z)?;
    if !(w.im > 0.0) {
        bail!(Domain, "image {w} is not in the upper half-plane");
    }
    Ok(DistortionSample::from_ratio(z, dw * z.im / w.im))
}

/// Puncture removed around parameter values where the radial field is
/// undefined.
pub const PUNCTURE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialIntegral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    /// Largest modulus actually integrated to.
    pub r_reached: f64,
}

/// `∫ q(rζ) dρ` along the radius from `0` to `r_max`, with `ρ = d(0, rζ)`.
/// Zeros of `F` on the radius are cut out with [`PUNCTURE`].
pub fn radial_distortion_integral(
    f: &InnerModel,
    zeta: BoundaryPoint,
    quantity: Quantity,
    r_max: f64,
    tol: f64,
) -> Result<RadialIntegral> {
    if !(r_max > 0.0 && r_max < 1.0) {
        bail!(Domain, "r_max must lie in (0, 1), got {r_max}");
    }
    let u = zeta.point();
    let rho_max = radius_from_modulus(r_max);
    let mut cuts: Vec<f64> = f
        .zeros()
        .iter()
        .filter(|a| a.norm() > 0.0 && (*a / a.norm() - u).norm() < 1e-12 && a.norm() < r_max)
        .map(|a| radius_from_modulus(a.norm()))
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut pieces = alloc::vec![(PUNCTURE, 0.0)];
    for c in cuts {
        pieces.last_mut().expect("nonempty").1 = c - PUNCTURE;
        pieces.push((c + PUNCTURE, 0.0));
    }
    pieces.last_mut().expect("nonempty").1 = rho_max;
    let mut failure = None;
    let mut integrand = |rho: f64| -> f64 {
        let z = u * modulus_from_radius(rho);
        match DiskPoint::new(z).and_then(|p| distortion_at_disk(f, p)) {
            Ok(s) => s.get(quantity),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let mut total = Quadrature { value: 0.0, error: 0.0, converged: true, intervals: 0 };
    let n = pieces.len();
    for (lo, hi) in pieces {
        if hi > lo {
            let q = quad::integrate(&mut integrand, lo, hi, tol / n as f64, 5_000);
            total.value += q.value;
            total.error += q.error;
            total.converged &= q.converged;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(RadialIntegral { value: total.value, error: total.error, converged: total.converged, r_reached: r_max })
}

/// `d(0, r) - d(0, F(rζ))`, which equals `∫_0^r η dρ` for centered `F`.
pub fn radial_inefficiency(f: &InnerModel, zeta: BoundaryPoint, r: f64) -> Result<f64> {
    let z = LogPolar::new(zeta.angle(), -r.ln());
    let img = logpolar::forward(f, z)?;
    Ok(z.radius() - if img.height.is_finite() { img.radius() } else { 0.0 })
}

/// `Σ_{n=1}^{N} δ(z_{-n})` along backward orbit coordinates `z_{-1}, …, z_{-N}`.
/// Where the radial direction is undefined the two radial neighbours at
/// distance `1e-8` are averaged.
pub fn cumulative_orbit_distortion(f: &InnerModel, points: &[LogPolar]) -> Result<f64> {
    let mut sum = 0.0;
    for &z in points {
        match distortion_at_logpolar(f, z) {
            Ok(s) => sum += s.delta,
            Err(Error::UndefinedDirection(at)) => {
                log::debug!("distortion undefined at {at}; using radial neighbours");
                let up = distortion_at_logpolar(f, LogPolar { height: z.height + 1e-8, ..z })?;
                let down = distortion_at_logpolar(f, LogPolar { height: (z.height - 1e-8).max(1e-300), ..z })?;
                sum += 0.5 * (up.delta + down.delta);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub model_index: usize,
    pub r_max: f64,
    pub integral_mu: f64,
    pub integral_eta: f64,
    pub integral_delta: f64,
    pub integral_alpha: f64,
    pub log_angular_derivative: f64,
}

/// Radial distortion integrals and the angular derivative for each model and
/// each `r_max`.
pub fn angular_derivative_criterion_scan(
    family: &[InnerModel],
    zeta: BoundaryPoint,
    r_grid: &[f64],
    tol: f64,
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for (k, f) in family.iter().enumerate() {
        let ad = f.angular_derivative(zeta);
        for &r in r_grid {
            let mut vals = [0.0; 4];
            for (slot, q) in vals.iter_mut().zip(Quantity::ALL) {
                *slot = if f.is_identity() { 0.0 } else { radial_distortion_integral(f, zeta, q, r, tol)?.value };
            }
            rows.push(ScanRow {
                model_index: k,
                r_max: r,
                integral_mu: vals[0],
                integral_eta: vals[1],
                integral_delta: vals[2],
                integral_alpha: vals[3],
                log_angular_derivative: ad.ln(),
            });
        }
    }
    Ok(rows)
}

/// Geodesic curvature at `F(z)` of the image of the geodesic through `z` in
/// direction `e^{iφ}`.
pub fn image_geodesic_curvature(f: &impl DiskMap, z: DiskPoint, phi: f64) -> Result<f64> {
    let z = z.value();
    let dir = cis(phi);
    let curve = |t: f64| {
        let w = dir * modulus_from_radius(t);
        let g = (w + z) / (Complex::new(1.0, 0.0) + z.conj() * w);
        f.eval(g).unwrap_or(Complex::new(f64::NAN, f64::NAN))
    };
    crate::hypgeo::geodesic_curvature_of(curve, 0.0, 0.05)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::Moebius;
    use crate::innerfn::{Compose, FnMap};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn dp(z: Complex) -> DiskPoint {
        DiskPoint::new(z).unwrap()
    }

    #[test]
    fn disk_examples() {
        let s = distortion_at_disk(&InnerModel::power(2), dp(c(0.5, 0.0))).unwrap();
        assert!((s.p - c(0.8, 0.0)).norm() < 1e-15);
        assert!((s.mu - 0.2).abs() < 1e-15 && (s.delta - 0.2).abs() < 1e-15 && (s.eta - 0.2).abs() < 1e-15);
        assert_eq!(s.alpha, 0.0);
        let m = Moebius::disk_automorphism(c(0.3, -0.2), 0.7).unwrap();
        let s = distortion_at_disk(&m, dp(c(-0.4, 0.5))).unwrap();
        assert!(s.mu.abs() < 1e-12);
        let id = InnerModel::power(1);
        let s = distortion_at_disk(&id, dp(c(0.1, 0.6))).unwrap();
        assert!(s.mu.abs() < 1e-14 && s.delta < 1e-14 && s.eta.abs() < 1e-14 && s.alpha < 1e-14);
    }

    #[test]
    fn undefined_directions() {
        let f = InnerModel::blaschke(alloc::vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(matches!(distortion_at_disk(&f, DiskPoint::origin()), Err(Error::UndefinedDirection(_))));
        assert!(matches!(distortion_at_disk(&f, dp(c(0.5, 0.0))), Err(Error::UndefinedDirection(_))));
    }

    #[test]
    fn halfplane_examples() {
        let f = HalfPlaneFn(|z: Complex| (z - z.inv(), Complex::new(1.0, 0.0) + (z * z).inv()));
        let s = distortion_at_halfplane(&f, HalfPlanePoint::new(c(0.0, 2.0)).unwrap()).unwrap();
        assert!((s.p - c(0.6, 0.0)).norm() < 1e-15);
        assert!((s.mu - 0.4).abs() < 1e-15 && (s.delta - 0.4).abs() < 1e-15 && (s.eta - 0.4).abs() < 1e-15);
        let lin = Moebius::halfplane_affine(2.0, 0.0).unwrap();
        let s = distortion_at_halfplane(&lin, HalfPlanePoint::new(c(0.3, 0.7)).unwrap()).unwrap();
        assert!(s.delta < 1e-15);
        let shift = HalfPlaneFn(|z: Complex| (z + c(0.0, 1.0), c(1.0, 0.0)));
        let y = 0.7;
        let s = distortion_at_halfplane(&shift, HalfPlanePoint::new(c(0.3, y)).unwrap()).unwrap();
        assert!((s.p.re - y / (y + 1.0)).abs() < 1e-15 && s.alpha == 0.0);
        assert!((s.mu - 1.0 / (y + 1.0)).abs() < 1e-15);
        let down = HalfPlaneFn(|z: Complex| (z - c(0.0, 1.0), c(1.0, 0.0)));
        assert!(distortion_at_halfplane(&down, HalfPlanePoint::new(c(0.0, 0.5)).unwrap()).is_err());
    }

    #[test]
    fn logpolar_matches_complex() {
        let f = InnerModel::blaschke(alloc::vec![c(0.0, 0.0), c(0.3, 0.5)]).unwrap();
        let z = c(0.6, -0.3);
        let a = distortion_at_disk(&f, dp(z)).unwrap();
        let b = distortion_at_logpolar(&f, LogPolar::from_complex(z)).unwrap();
        assert!((a.p - b.p).norm() < 1e-13);
    }

    #[test]
    fn exact_inequalities_and_subadditivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let (df, dg) = (2 + rng.gen_range(0..4), 2 + rng.gen_range(0..4));
            let f = InnerModel::random_centered(&mut rng, df, 0.9);
            let g = InnerModel::random_centered(&mut rng, dg, 0.9);
            let a = Complex::from_polar(0.98 * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * 7.0);
            let Ok(s) = distortion_at_disk(&f, dp(a)) else { continue };
            assert!(s.mu <= s.eta + 1e-13);
            assert!(s.delta <= s.alpha + s.eta + 1e-13);
            assert!(s.p.norm() <= 1.0 + 1e-12);
            let ga = g.eval_deriv_raw(a).unwrap().0;
            let (Ok(sg), Ok(sf)) = (distortion_at_disk(&g, dp(a)), distortion_at_disk(&f, dp(ga))) else { continue };
            let fg = Compose { outer: &f, inner: &g };
            let Ok(sfg) = distortion_at_disk(&fg, dp(a)) else { continue };
            assert!(sfg.delta <= sf.delta + sg.delta + 1e-12);
        }
    }

    #[test]
    fn eta_integral_matches_inefficiency() {
        let f = InnerModel::blaschke(alloc::vec![c(0.0, 0.0), c(0.4, 0.3), c(-0.2, 0.6)]).unwrap();
        let zeta = BoundaryPoint::new(2.2).unwrap();
        for r in [0.5, 0.9, 0.999] {
            let q = radial_distortion_integral(&f, zeta, Quantity::Eta, r, 1e-11).unwrap();
            let l = radial_inefficiency(&f, zeta, r).unwrap();
            assert!((q.value - l).abs() < 1e-8, "{} {}", q.value, l);
        }
    }

    #[test]
    fn radial_examples() {
        let sq = InnerModel::power(2);
        let one = BoundaryPoint::new(0.0).unwrap();
        let q = radial_distortion_integral(&sq, one, Quantity::Eta, 1.0 - 1e-9, 1e-11).unwrap();
        assert!(q.value <= 2f64.ln() + 1e-6);
        assert!((q.value - 2f64.ln()).abs() < 1e-6);
        let a = radial_distortion_integral(&sq, one, Quantity::Alpha, 0.999, 1e-11).unwrap();
        assert!(a.value.abs() < 1e-14);
        let m = FnMap(|z: Complex| {
            let aut = Moebius::disk_automorphism(c(0.2, 0.1), 0.0).unwrap();
            (aut.apply(z).unwrap(), aut.derivative(z).unwrap())
        });
        let s = distortion_at_disk(&m, dp(c(0.5, 0.5))).unwrap();
        assert!(s.mu.abs() < 1e-12);
    }

    #[test]
    fn puncture_on_zero() {
        let f = InnerModel::blaschke(alloc::vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let q = radial_distortion_integral(&f, BoundaryPoint::new(0.0).unwrap(), Quantity::Eta, 0.9, 1e-10).unwrap();
        let l = radial_inefficiency(&f, BoundaryPoint::new(0.0).unwrap(), 0.9).unwrap();
        assert!((q.value - l).abs() < 1e-7);
    }

    #[test]
    fn cumulative_zero_terms() {
        assert_eq!(cumulative_orbit_distortion(&InnerModel::power(2), &[]).unwrap(), 0.0);
    }

    #[test]
    fn curvature_of_image_geodesic() {
        // automorphisms send geodesics to geodesics
        let m = Moebius::disk_automorphism(c(0.3, 0.2), 1.0).unwrap();
        let k = image_geodesic_curvature(&m, dp(c(0.1, -0.4)), 0.7).unwrap();
        assert!(k < 1e-6);
        // z² maps the diameter to a diameter: the radial geodesic through 0.5
        let k = image_geodesic_curvature(&InnerModel::power(2), dp(c(0.5, 0.0)), 0.0).unwrap();
        assert!(k < 1e-6);
    }
}
