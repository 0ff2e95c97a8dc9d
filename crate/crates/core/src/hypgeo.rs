//! Hyperbolic geometry in the unit disk and the upper half-plane.
//!
//! Möbius maps are 2×2 complex matrices normalized to determinant one and
//! tagged with the pair of models they map between. Composition is matrix
//! multiplication; the tag is checked at every composition.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::Complex;

/// Points closer than this to the boundary circle are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-14;

const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint(Complex);

impl DiskPoint {
    pub fn new(value: Complex) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) || value.norm() >= 1.0 - BOUNDARY_MARGIN {
            bail!(Domain, "{value} is not inside the unit disk");
        }
        Ok(Self(value))
    }

    pub fn origin() -> Self {
        Self(Complex::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex {
        self.0
    }

    pub fn distance(self, other: DiskPoint) -> f64 {
        disk_distance(self.0, other.0)
    }
}

impl From<DiskPoint> for Complex {
    fn from(p: DiskPoint) -> Complex {
        p.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint(Complex);

impl HalfPlanePoint {
    pub fn new(value: Complex) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) || value.im <= 0.0 {
            bail!(Domain, "{value} is not in the upper half-plane");
        }
        Ok(Self(value))
    }

    pub fn value(self) -> Complex {
        self.0
    }

    pub fn distance(self, other: HalfPlanePoint) -> f64 {
        halfplane_distance(self.0, other.0)
    }
}

impl From<HalfPlanePoint> for Complex {
    fn from(p: HalfPlanePoint) -> Complex {
        p.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Disk,
    HalfPlane,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Disk(DiskPoint),
    HalfPlane(HalfPlanePoint),
}

impl Point {
    pub fn model(&self) -> Model {
        match self {
            Point::Disk(_) => Model::Disk,
            Point::HalfPlane(_) => Model::HalfPlane,
        }
    }

    pub fn value(&self) -> Complex {
        match self {
            Point::Disk(p) => p.value(),
            Point::HalfPlane(p) => p.value(),
        }
    }

    fn in_model(model: Model, z: Complex) -> Result<Point> {
        match model {
            Model::Disk => DiskPoint::new(z).map(Point::Disk),
            Model::HalfPlane => HalfPlanePoint::new(z).map(Point::HalfPlane),
        }
    }
}

/// Hyperbolic distance between two points of the same model.
pub fn hyp_distance(x: Point, y: Point) -> Result<f64> {
    match (x, y) {
        (Point::Disk(a), Point::Disk(b)) => Ok(a.distance(b)),
        (Point::HalfPlane(a), Point::HalfPlane(b)) => Ok(a.distance(b)),
        _ => Err(Error::Usage(format!(
            "distance between points of different models: {:?} and {:?}",
            x.model(),
            y.model()
        ))),
    }
}

/// `2 artanh |(x-y)/(1-ȳx)|`, evaluated in the `asinh` form that stays
/// accurate close to the boundary.
pub fn disk_distance(x: Complex, y: Complex) -> f64 {
    let gap = (x - y).norm();
    if gap == 0.0 {
        return 0.0;
    }
    let denom = ((1.0 - x.norm_sqr()) * (1.0 - y.norm_sqr())).sqrt();
    2.0 * (gap / denom).asinh()
}

pub fn halfplane_distance(x: Complex, y: Complex) -> f64 {
    let gap = (x - y).norm();
    if gap == 0.0 {
        return 0.0;
    }
    2.0 * (gap / (2.0 * (x.im * y.im).sqrt())).asinh()
}

/// Distance from `z` to the radial geodesic ray `[0, ζ)`, `ζ = e^{iθ}`.
pub fn disk_distance_to_ray(z: Complex, theta: f64) -> f64 {
    let w = z * crate::math::cis(-theta);
    if w.re <= 0.0 {
        return disk_distance(z, Complex::new(0.0, 0.0));
    }
    // distance to the real diameter: sinh d = 2|Im w| / (1 - |w|²)
    (2.0 * w.im.abs() / (1.0 - w.norm_sqr())).asinh()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoebiusDomain {
    DiskAutomorphism,
    HalfPlaneAutomorphism,
    DiskToHalfPlane,
    HalfPlaneToDisk,
}

impl MoebiusDomain {
    pub fn source(self) -> Model {
        match self {
            MoebiusDomain::DiskAutomorphism | MoebiusDomain::DiskToHalfPlane => Model::Disk,
            _ => Model::HalfPlane,
        }
    }

    pub fn target(self) -> Model {
        match self {
            MoebiusDomain::DiskAutomorphism | MoebiusDomain::HalfPlaneToDisk => Model::Disk,
            _ => Model::HalfPlane,
        }
    }

    fn between(source: Model, target: Model) -> Self {
        match (source, target) {
            (Model::Disk, Model::Disk) => MoebiusDomain::DiskAutomorphism,
            (Model::Disk, Model::HalfPlane) => MoebiusDomain::DiskToHalfPlane,
            (Model::HalfPlane, Model::Disk) => MoebiusDomain::HalfPlaneToDisk,
            (Model::HalfPlane, Model::HalfPlane) => MoebiusDomain::HalfPlaneAutomorphism,
        }
    }
}

/// `z ↦ (a z + b) / (c z + d)` with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moebius {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
    pub domain: MoebiusDomain,
}

const DOMAIN_TOL: f64 = 1e-12;

impl Moebius {
    /// Builds and validates a map. The matrix is rescaled to unit determinant.
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex, domain: MoebiusDomain) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.norm() > 1e-300) || !det.re.is_finite() || !det.im.is_finite() {
            bail!(Domain, "degenerate Möbius matrix (determinant {det})");
        }
        let s = det.sqrt();
        let m = Self { a: a / s, b: b / s, c: c / s, d: d / s, domain };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let boundary: [Complex; 5] = match self.domain.source() {
            Model::Disk => [ONE, I, -ONE, -I, crate::math::cis(0.7)],
            Model::HalfPlane => [Complex::new(0.0, 0.0), ONE, -ONE, Complex::new(2.5, 0.0), Complex::new(-0.3, 0.0)],
        };
        let mut checked = 0;
        for z in boundary {
            let denom = self.c * z + self.d;
            if denom.norm() < 1e-9 * (self.c.norm() + self.d.norm()) {
                // image at infinity: fine for a half-plane target, never for the disk
                if self.domain.target() == Model::Disk {
                    bail!(Domain, "boundary point {z} maps to infinity under a map into the disk");
                }
                continue;
            }
            let w = (self.a * z + self.b) / denom;
            let ok = match self.domain.target() {
                Model::Disk => (w.norm() - 1.0).abs() < DOMAIN_TOL,
                Model::HalfPlane => w.im.abs() < DOMAIN_TOL * (1.0 + w.norm()),
            };
            if !ok {
                bail!(Domain, "{:?} tag rejected: boundary point {z} maps to {w}", self.domain);
            }
            checked += 1;
            if checked == 3 {
                break;
            }
        }
        if checked < 3 {
            bail!(Domain, "could not validate {:?} tag on three boundary points", self.domain);
        }
        let interior = match self.domain.source() {
            Model::Disk => Complex::new(0.0, 0.0),
            Model::HalfPlane => I,
        };
        let image = self.apply(interior)?;
        let inside = match self.domain.target() {
            Model::Disk => image.norm() < 1.0,
            Model::HalfPlane => image.im > 0.0,
        };
        if !inside {
            bail!(Domain, "{:?} tag rejected: interior maps outside the target", self.domain);
        }
        Ok(())
    }

    pub fn identity(model: Model) -> Self {
        let domain = MoebiusDomain::between(model, model);
        Self { a: ONE, b: Complex::new(0.0, 0.0), c: Complex::new(0.0, 0.0), d: ONE, domain }
    }

    /// `z ↦ e^{iθ} (z - center) / (1 - conj(center) z)`.
    pub fn disk_automorphism(center: Complex, rotation: f64) -> Result<Self> {
        if center.norm() >= 1.0 {
            bail!(Domain, "automorphism center {center} outside the disk");
        }
        let u = crate::math::cis(rotation);
        Self::new(u, -u * center, -center.conj(), ONE, MoebiusDomain::DiskAutomorphism)
    }

    /// `z ↦ A z + B` with `A > 0`, `B` real.
    pub fn halfplane_affine(scale: f64, shift: f64) -> Result<Self> {
        if !(scale > 0.0) {
            bail!(Domain, "affine scale must be positive, got {scale}");
        }
        Self::new(
            Complex::new(scale, 0.0),
            Complex::new(shift, 0.0),
            Complex::new(0.0, 0.0),
            ONE,
            MoebiusDomain::HalfPlaneAutomorphism,
        )
    }

    /// Cayley map `z ↦ i (1 + z) / (1 - z)` from the disk to the half-plane.
    pub fn cayley() -> Self {
        Self::new(I, I, -ONE, ONE, MoebiusDomain::DiskToHalfPlane).expect("cayley map is valid")
    }

    /// The map `M_p` from the half-plane to the disk with
    /// `0 ↦ p/|p|`, `i ↦ p`, `∞ ↦ -p/|p|`.
    pub fn normalizing(p: DiskPoint) -> Result<Self> {
        let p = p.value();
        let r = p.norm();
        if r == 0.0 {
            return Err(Error::UndefinedDirection(format!("{p}")));
        }
        let u = p / r;
        let s = (1.0 - r) / (1.0 + r);
        let is = I * s;
        Self::new(is * u, u, -is, ONE, MoebiusDomain::HalfPlaneToDisk)
    }

    /// The disk automorphism with `a ↦ b`, `a/|a| ↦ b/|b|`, `-a/|a| ↦ -b/|b|`.
    pub fn straight(a: DiskPoint, b: DiskPoint) -> Result<Self> {
        let to_b = Self::normalizing(b)?;
        let from_a = Self::normalizing(a)?.inverse();
        to_b.compose(&from_a)
    }

    pub fn inverse(&self) -> Self {
        let domain = MoebiusDomain::between(self.domain.target(), self.domain.source());
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a, domain }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Moebius) -> Result<Self> {
        if inner.domain.target() != self.domain.source() {
            bail!(Usage, "cannot compose {:?} after {:?}", self.domain, inner.domain);
        }
        let domain = MoebiusDomain::between(inner.domain.source(), self.domain.target());
        Self::new(
            self.a * inner.a + self.b * inner.c,
            self.a * inner.b + self.b * inner.d,
            self.c * inner.a + self.d * inner.c,
            self.c * inner.b + self.d * inner.d,
            domain,
        )
    }

    /// Raw evaluation of the fractional linear map.
    pub fn apply(&self, z: Complex) -> Result<Complex> {
        let denom = self.c * z + self.d;
        if denom.norm() <= 1e-15 * (self.c.norm() * z.norm() + self.d.norm()) {
            bail!(Pole, "Möbius map has a pole at {z}");
        }
        Ok((self.a * z + self.b) / denom)
    }

    pub fn derivative(&self, z: Complex) -> Result<Complex> {
        let denom = self.c * z + self.d;
        if denom.norm() <= 1e-15 * (self.c.norm() * z.norm() + self.d.norm()) {
            bail!(Pole, "Möbius map has a pole at {z}");
        }
        Ok(ONE / (denom * denom))
    }

    /// Evaluation on a validated point, checking both source and target models.
    pub fn apply_point(&self, x: Point) -> Result<Point> {
        if x.model() != self.domain.source() {
            bail!(Usage, "{:?} point given to a {:?} map", x.model(), self.domain);
        }
        let w = self.apply(x.value())?;
        Point::in_model(self.domain.target(), w)
    }
}

/// A curve given by samples `points[j] = γ(params[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    pub params: Vec<f64>,
    pub points: Vec<Complex>,
}

impl SampledPath {
    pub fn from_fn(curve: impl Fn(f64) -> Complex, t0: f64, t1: f64, samples: usize) -> Self {
        let n = samples.max(2);
        let params: Vec<f64> = (0..n).map(|j| t0 + (t1 - t0) * j as f64 / (n - 1) as f64).collect();
        let points = params.iter().map(|&t| curve(t)).collect();
        Self { params, points }
    }
}

/// Curvature estimate together with the gap between the five- and
/// three-point stencils.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureEstimate {
    pub value: f64,
    pub residual: f64,
}

/// Residual above which [`geodesic_curvature_of`] re-samples.
pub const STENCIL_RESIDUAL: f64 = 1e-4;

/// Hyperbolic geodesic curvature of a sampled path at an interior sample.
///
/// The path is moved by a disk automorphism so the sample sits at the origin,
/// where the hyperbolic curvature is half the Euclidean one.
pub fn geodesic_curvature(path: &SampledPath, index: usize) -> Result<f64> {
    curvature_with_residual(path, index).map(|c| c.value)
}

pub fn curvature_with_residual(path: &SampledPath, index: usize) -> Result<CurvatureEstimate> {
    if path.params.len() != path.points.len() {
        bail!(Usage, "path has {} parameters but {} points", path.params.len(), path.points.len());
    }
    if path.points.len() < 5 {
        bail!(Stencil, "need at least five samples, got {}", path.points.len());
    }
    if index < 2 || index + 2 >= path.points.len() {
        bail!(Stencil, "index {index} is not strictly interior to a five-point stencil");
    }
    let center = path.points[index];
    if center.norm() >= 1.0 - BOUNDARY_MARGIN {
        bail!(Domain, "sample {center} is not inside the disk");
    }
    let ts = &path.params[index - 2..=index + 2];
    let mut ws = [Complex::new(0.0, 0.0); 5];
    for (k, z) in path.points[index - 2..=index + 2].iter().enumerate() {
        ws[k] = (z - center) / (ONE - center.conj() * z);
    }
    for j in 0..5 {
        for k in (j + 1)..5 {
            if ts[j] == ts[k] || (ws[j] - ws[k]).norm() == 0.0 {
                bail!(Stencil, "repeated samples in the stencil around index {index}");
            }
        }
    }
    let k5 = stencil_curvature(ts, &ws, ts[2])?;
    let k3 = stencil_curvature(&ts[1..4], &ws[1..4], ts[2])?;
    Ok(CurvatureEstimate { value: 0.5 * k5, residual: 0.5 * (k5 - k3).abs() })
}

/// Curvature of a parametrized curve at `t`, halving the stencil spacing
/// until the five- and three-point estimates agree to [`STENCIL_RESIDUAL`].
pub fn geodesic_curvature_of(curve: impl Fn(f64) -> Complex, t: f64, h0: f64) -> Result<f64> {
    let mut h = h0;
    let mut last = None;
    for _ in 0..30 {
        let params: Vec<f64> = (-2..=2).map(|k| t + k as f64 * h).collect();
        let points = params.iter().map(|&s| curve(s)).collect();
        let est = curvature_with_residual(&SampledPath { params, points }, 2)?;
        if est.residual < STENCIL_RESIDUAL {
            return Ok(est.value);
        }
        last = Some(est);
        h *= 0.5;
    }
    Err(Error::Stencil(format!("curvature stencil did not settle at t = {t}: {last:?}")))
}

fn stencil_curvature(ts: &[f64], ws: &[Complex], at: f64) -> Result<f64> {
    let weights = fornberg_weights(ts, at);
    let mut d1 = Complex::new(0.0, 0.0);
    let mut d2 = Complex::new(0.0, 0.0);
    for (k, w) in ws.iter().enumerate() {
        d1 += *w * weights[k][1];
        d2 += *w * weights[k][2];
    }
    let speed = d1.norm();
    if !(speed > 1e-300) {
        bail!(Stencil, "vanishing tangent in stencil");
    }
    Ok((d1.conj() * d2).im.abs() / (speed * speed * speed))
}

/// Finite difference weights for derivatives 0..=2 at `at` (Fornberg 1988).
fn fornberg_weights(nodes: &[f64], at: f64) -> Vec<[f64; 3]> {
    let n = nodes.len();
    let mut c = alloc::vec![[0.0f64; 3]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - at;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(2);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - at;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    #[test]
    fn disk_distance_examples() {
        assert_eq!(hyp_distance(Point::Disk(dp(0.0, 0.0)), Point::Disk(dp(0.0, 0.0))).unwrap(), 0.0);
        let d = hyp_distance(Point::Disk(dp(0.0, 0.0)), Point::Disk(dp(0.5, 0.0))).unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn halfplane_distance_vertical() {
        let a = HalfPlanePoint::new(c(0.0, 1.0)).unwrap();
        let b = HalfPlanePoint::new(c(0.0, 2.0)).unwrap();
        let d = hyp_distance(Point::HalfPlane(a), Point::HalfPlane(b)).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn mixed_models_rejected() {
        let a = HalfPlanePoint::new(c(0.0, 1.0)).unwrap();
        let err = hyp_distance(Point::Disk(dp(0.1, 0.0)), Point::HalfPlane(a)).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn boundary_points_rejected() {
        assert!(DiskPoint::new(c(1.0, 0.0)).is_err());
        assert!(DiskPoint::new(c(1.0 - 1e-15, 0.0)).is_err());
        assert!(HalfPlanePoint::new(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn moebius_apply_examples() {
        let id = Moebius::identity(Model::Disk);
        assert_eq!(id.apply(c(0.3, 0.1)).unwrap(), c(0.3, 0.1));

        let m = Moebius::normalizing(dp(0.5, 0.0)).unwrap();
        assert!((m.apply(c(0.0, 1.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert!((m.apply(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);

        let aut = Moebius::disk_automorphism(c(0.5, 0.0), 0.0).unwrap();
        assert!(aut.apply(c(0.5, 0.0)).unwrap().norm() < 1e-16);
    }

    #[test]
    fn pole_detected() {
        let cay = Moebius::cayley();
        assert!(matches!(cay.apply(c(1.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn wrong_tag_rejected() {
        // z ↦ 2z is not a disk automorphism
        let r = Moebius::new(c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), MoebiusDomain::DiskAutomorphism);
        assert!(r.is_err());
        assert!(
            Moebius::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), MoebiusDomain::DiskAutomorphism).is_err()
        );
    }

    #[test]
    fn compose_checks_models() {
        let cay = Moebius::cayley();
        assert!(cay.compose(&cay).is_err());
        let back = cay.inverse().compose(&cay).unwrap();
        assert_eq!(back.domain, MoebiusDomain::DiskAutomorphism);
        assert!((back.apply(c(0.2, -0.4)).unwrap() - c(0.2, -0.4)).norm() < 1e-14);
    }

    #[test]
    fn apply_point_checks_target() {
        let cay = Moebius::cayley();
        let out = cay.apply_point(Point::Disk(dp(0.0, 0.0))).unwrap();
        assert!((out.value() - c(0.0, 1.0)).norm() < 1e-15);
        let hp = Point::HalfPlane(HalfPlanePoint::new(c(0.0, 1.0)).unwrap());
        assert!(cay.apply_point(hp).is_err());
    }

    /// Solves the three-point interpolation `z_k ↦ w_k` directly through
    /// cross ratios; independent of the normalizing-map construction.
    fn three_point_map(z: [Complex; 3], w: [Complex; 3], x: Complex) -> Complex {
        let cr = |p: [Complex; 3], q: Complex| (q - p[0]) * (p[1] - p[2]) / ((q - p[2]) * (p[1] - p[0]));
        let k = cr(z, x);
        // invert the cross ratio in the w-frame
        let (w0, w1, w2) = (w[0], w[1], w[2]);
        let a = (w1 - w2) / (w1 - w0);
        // k = (y - w0) a / (y - w2)  =>  y = (k w2 - a w0) / (k - a)
        (k * w2 - a * w0) / (k - a)
    }

    #[test]
    fn straight_moebius_identity_case() {
        let m = Moebius::straight(dp(0.5, 0.0), dp(0.5, 0.0)).unwrap();
        for z in [c(0.1, 0.2), c(-0.4, 0.3), c(0.0, 0.0)] {
            assert!((m.apply(z).unwrap() - z).norm() < 1e-13);
        }
    }

    #[test]
    fn straight_moebius_matches_three_point_oracle() {
        for (a, b) in [(c(0.5, 0.0), c(0.25, 0.0)), (c(0.0, 0.5), c(0.0, 0.25)), (c(0.3, -0.2), c(-0.6, 0.1))] {
            let m = Moebius::straight(DiskPoint::new(a).unwrap(), DiskPoint::new(b).unwrap()).unwrap();
            let (ua, ub) = (a / a.norm(), b / b.norm());
            assert!((m.apply(a).unwrap() - b).norm() < 1e-12);
            assert!((m.apply(ua).unwrap() - ub).norm() < 1e-12);
            assert!((m.apply(-ua).unwrap() + ub).norm() < 1e-12);
            for x in [c(0.1, 0.1), c(-0.3, 0.5), c(0.7, -0.2)] {
                let oracle = three_point_map([a, ua, -ua], [b, ub, -ub], x);
                assert!((m.apply(x).unwrap() - oracle).norm() < 1e-12, "{a} {b} {x}");
            }
        }
    }

    #[test]
    fn straight_needs_direction() {
        assert!(matches!(Moebius::straight(DiskPoint::origin(), dp(0.2, 0.0)), Err(Error::UndefinedDirection(_))));
    }

    #[test]
    fn curvature_of_diameter_is_zero() {
        let path = SampledPath::from_fn(|t| c(t, 0.0), -0.2, 0.2, 41);
        assert!(geodesic_curvature(&path, 20).unwrap() < 1e-12);
    }

    #[test]
    fn horocycle_has_unit_curvature() {
        // circle of radius 1/2 centered at 1/2, passing through the origin
        let horo = |t: f64| c(0.5, 0.0) - c(0.5, 0.0) * crate::math::cis(t);
        let path = SampledPath::from_fn(horo, -0.3, 0.3, 61);
        let k = geodesic_curvature(&path, 30).unwrap();
        assert!((k - 1.0).abs() < 1e-3, "{k}");
        // away from the origin too
        let k = geodesic_curvature(&path, 45).unwrap();
        assert!((k - 1.0).abs() < 1e-3, "{k}");
    }

    #[test]
    fn circle_curvature_matches_closed_form() {
        for r in [0.2, 0.5, 0.8] {
            let path = SampledPath::from_fn(|t| c(r, 0.0) * crate::math::cis(t), 0.0, TAU, 2001);
            let expected = (1.0 + r * r) / (2.0 * r);
            for idx in [10, 500, 1500] {
                let k = geodesic_curvature(&path, idx).unwrap();
                assert!((k - expected).abs() < 1e-3, "r={r} idx={idx} k={k}");
            }
        }
    }

    #[test]
    fn adaptive_curvature_refines() {
        let r = 0.6;
        let k = geodesic_curvature_of(|t| c(r, 0.0) * crate::math::cis(t), 1.0, 0.5).unwrap();
        assert!((k - (1.0 + r * r) / (2.0 * r)).abs() < 1e-4);
    }

    #[test]
    fn stencil_errors() {
        let path = SampledPath {
            params: alloc::vec![0.0, 0.1, 0.1, 0.3, 0.4],
            points: alloc::vec![c(0.0, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0)],
        };
        assert!(matches!(geodesic_curvature(&path, 2), Err(Error::Stencil(_))));
        let short = SampledPath::from_fn(|t| c(t, 0.0), 0.0, 0.1, 4);
        assert!(geodesic_curvature(&short, 2).is_err());
        let ok = SampledPath::from_fn(|t| c(t, 0.0), 0.0, 0.1, 5);
        assert!(geodesic_curvature(&ok, 1).is_err());
        let _ = PI;
    }
}
