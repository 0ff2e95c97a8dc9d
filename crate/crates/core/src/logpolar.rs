//! Points near the unit circle stored as `(angle, height)` with
//! `z = exp(-height + i angle)`.
//!
//! Backward orbits approach the circle exponentially fast and `1 - |z|` drops
//! below the resolution of `f64` after a few dozen steps. Heights are carried
//! through every Blaschke factor with the identity
//! `1 - |b_a(w)|² = (1 - |a|²)(1 - |w|²) / |1 - ā w|²`, which keeps them
//! accurate to relative precision no matter how small they get.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{bail, Result};
use crate::innerfn::{BoundaryPoint, InnerModel};
use crate::math::{cis, wrap_pi, wrap_tau};
use crate::Complex;

const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogPolar {
    pub angle: f64,
    pub height: f64,
}

impl LogPolar {
    pub fn new(angle: f64, height: f64) -> Self {
        Self { angle: wrap_tau(angle), height }
    }

    pub fn from_complex(z: Complex) -> Self {
        Self::new(z.arg(), -z.norm().ln())
    }

    pub fn to_complex(self) -> Complex {
        Complex::from_polar((-self.height).exp(), self.angle)
    }

    /// `1 - |z|`, exact for tiny heights.
    pub fn gap(self) -> f64 {
        -(-self.height).exp_m1()
    }

    /// `1 - |z|²`.
    pub fn gap2(self) -> f64 {
        -(-2.0 * self.height).exp_m1()
    }

    /// Hyperbolic distance to the origin.
    pub fn radius(self) -> f64 {
        // d(0, r) = log((1+r)/(1-r)) with 1-r = gap
        let g = self.gap();
        ((2.0 - g) / g).ln()
    }
}

/// Hyperbolic distance between two log-polar points, accurate when both are
/// close to the circle.
pub fn distance(x: LogPolar, y: LogPolar) -> f64 {
    let rx = (-x.height).exp();
    let ry = (-y.height).exp();
    // |x| - |y| = e^{-hy} (e^{hy - hx} - 1)
    let radial = ry * (y.height - x.height).exp_m1();
    let s = (0.5 * wrap_pi(x.angle - y.angle)).sin();
    let gap2 = radial * radial + 4.0 * rx * ry * s * s;
    if gap2 == 0.0 {
        return 0.0;
    }
    2.0 * (gap2.sqrt() / (x.gap2() * y.gap2()).sqrt()).asinh()
}

/// `F` in log-polar coordinates.
pub fn forward(f: &InnerModel, p: LogPolar) -> Result<LogPolar> {
    let w = p.to_complex();
    let g2 = p.gap2();
    let mut height = 0.0;
    let mut angle = f.rotation().arg();
    for &a in f.zeros() {
        if a.norm() == 0.0 {
            height += p.height;
            angle += p.angle;
            continue;
        }
        let den = ONE - a.conj() * w;
        let x = (1.0 - a.norm_sqr()) * g2 / den.norm_sqr();
        if !(x < 1.0) {
            // w sits on the zero a (to rounding)
            height = f64::INFINITY;
        } else {
            height += -0.5 * (-x).ln_1p();
        }
        angle += ((a.norm() / a) * (a - w) / den).arg();
    }
    for atom in f.atoms() {
        let zeta = cis(atom.angle);
        let gap = zeta - w;
        if gap.norm() == 0.0 {
            bail!(Singularity, "evaluation at the atom base point angle {}", atom.angle);
        }
        height += atom.weight * g2 / gap.norm_sqr();
        angle -= atom.weight * ((zeta + w) / gap).im;
    }
    Ok(LogPolar::new(angle, height))
}

/// `w F'(w) / F(w)`; real and equal to `|F'(w)|` on the circle.
pub fn log_derivative(f: &InnerModel, p: LogPolar) -> Complex {
    let w = p.to_complex();
    let mut s = Complex::new(0.0, 0.0);
    for &a in f.zeros() {
        if a.norm() == 0.0 {
            s += ONE;
        } else {
            s += w * (a.norm_sqr() - 1.0) / ((ONE - a.conj() * w) * (a - w));
        }
    }
    for atom in f.atoms() {
        let zeta = cis(atom.angle);
        let gap = zeta - w;
        s += w * (-2.0 * atom.weight) * zeta / (gap * gap);
    }
    s
}

/// Angles `φ` with `F(e^{iφ}) = e^{iθ}`, sorted ascending in `[0, 2π)`.
pub fn boundary_preimages(f: &InnerModel, theta: f64) -> Result<Vec<f64>> {
    if !f.is_finite_blaschke() {
        bail!(Precondition, "boundary preimages need a finite Blaschke product");
    }
    let (p, q) = f.numerator_denominator();
    let target = cis(theta);
    let eqn = crate::poly::sub(&p, &crate::poly::scale(&q, target));
    let roots = crate::poly::roots(&eqn)?;
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let mut phi = r.arg();
        for _ in 0..60 {
            let img = forward(f, LogPolar { angle: phi, height: 0.0 })?;
            let slope = f.boundary_deriv_modulus(BoundaryPoint::new(phi)?);
            let step = wrap_pi(img.angle - theta) / slope;
            phi -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push(wrap_tau(phi));
    }
    out.sort_by(f64::total_cmp);
    for k in 0..out.len() {
        let next = if k + 1 < out.len() { out[k + 1] } else { out[0] + TAU };
        if next - out[k] < 1e-13 {
            bail!(Numerical, "boundary preimages of angle {theta} collided");
        }
    }
    Ok(out)
}

/// Below this height preimages are seeded from the boundary map.
const SEED_HEIGHT: f64 = 1e-4;

/// All `d` preimages of `p`, sorted by angle.
pub fn preimages(f: &InnerModel, p: LogPolar) -> Result<Vec<LogPolar>> {
    if !f.is_finite_blaschke() {
        bail!(Precondition, "preimages need a finite Blaschke product");
    }
    if !(p.height > 0.0) || !p.height.is_finite() {
        bail!(Domain, "log-polar preimages need a finite positive height, got {}", p.height);
    }
    let seeds: Vec<LogPolar> = if p.height < SEED_HEIGHT {
        let mut seeds = Vec::new();
        for phi in boundary_preimages(f, p.angle)? {
            let slope = f.boundary_deriv_modulus(BoundaryPoint::new(phi)?);
            seeds.push(LogPolar::new(phi, p.height / slope));
        }
        seeds
    } else {
        crate::preimage::raw_preimages(f, p.to_complex())?.into_iter().map(LogPolar::from_complex).collect()
    };
    let mut out = Vec::with_capacity(seeds.len());
    for s in seeds {
        out.push(polish(f, s, p)?);
    }
    out.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    Ok(out)
}

/// `τ(F(e^{i(τ_b + δ)})) - τ(F(e^{iτ_b}))` for an offset `δ` in
/// `τ = angle + i height` from the base point `b`, computed factor by factor
/// without cancellation.
pub fn forward_offset(f: &InnerModel, base: LogPolar, offset: Complex) -> Result<Complex> {
    if !f.is_finite_blaschke() {
        bail!(Precondition, "offsets need a finite Blaschke product");
    }
    let b = base.to_complex();
    // w_b - w_x = -w_b (e^{iδ} - 1)
    let step = -b * expm1_complex(Complex::new(-offset.im, offset.re));
    let x = b - step;
    let mut dlog = Complex::new(0.0, 0.0);
    for &a in f.zeros() {
        if a.norm() == 0.0 {
            dlog += Complex::new(-offset.im, offset.re);
            continue;
        }
        // b_a(x) / b_a(w_b) - 1 = (w_b - x)(1 - |a|²) / ((a - w_b)(1 - ā x))
        let u = step * (1.0 - a.norm_sqr()) / ((a - b) * (ONE - a.conj() * x));
        dlog += ln1p_complex(u);
    }
    // log F = i τ
    Ok(Complex::new(dlog.im, -dlog.re))
}

fn expm1_complex(z: Complex) -> Complex {
    let s = (0.5 * z.im).sin();
    Complex::new(z.re.exp_m1() * z.im.cos() - 2.0 * s * s, z.re.exp() * z.im.sin())
}

fn ln1p_complex(u: Complex) -> Complex {
    Complex::new(0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p(), u.im.atan2(1.0 + u.re))
}

/// Newton iteration on `τ = angle + i height` against
/// `log F(e^{iτ}) = -height_p + i angle_p`.
pub fn polish(f: &InnerModel, mut x: LogPolar, target: LogPolar) -> Result<LogPolar> {
    for _ in 0..80 {
        let img = forward(f, x)?;
        let resid = Complex::new(target.height - img.height, wrap_pi(img.angle - target.angle));
        // d/dτ log F(e^{iτ}) = i · w F'(w)/F(w)
        let mut ld = log_derivative(f, x);
        if x.height < 1e-8 {
            // Im ld is O(height); computed, it is rounding noise that couples the
            // angle residual into the height step
            ld.im = 0.0;
        }
        let slope = Complex::new(0.0, 1.0) * ld;
        let step = resid / slope;
        let (mut angle, mut height) = (x.angle - step.re, x.height - step.im);
        if !(height > 0.0) {
            height = 0.5 * x.height;
        }
        if !angle.is_finite() || !height.is_finite() {
            bail!(Numerical, "log-polar Newton diverged");
        }
        angle = wrap_tau(angle);
        let done = step.re.abs() < 1e-15 && step.im.abs() <= 1e-14 * x.height;
        x = LogPolar { angle, height };
        if done {
            break;
        }
    }
    let img = forward(f, x)?;
    let herr = (img.height - target.height).abs() / target.height;
    let aerr = wrap_pi(img.angle - target.angle).abs();
    if herr > 1e-9 || aerr > 1e-11 {
        bail!(Numerical, "log-polar Newton residual too large (height {herr:e}, angle {aerr:e})");
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn deg2() -> InnerModel {
        InnerModel::blaschke(alloc::vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap()
    }

    #[test]
    fn forward_matches_complex_evaluation() {
        let f = InnerModel::new(cis(0.4), alloc::vec![c(0.0, 0.0), c(0.3, -0.5), c(-0.6, 0.1)], Vec::new()).unwrap();
        for z in [c(0.2, 0.3), c(-0.7, 0.5), c(0.05, -0.9)] {
            let lp = forward(&f, LogPolar::from_complex(z)).unwrap();
            let direct = f.eval_deriv_raw(z).unwrap().0;
            assert!((lp.to_complex() - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn offsets_match_direct_forward() {
        let f = InnerModel::new(cis(0.4), alloc::vec![c(0.0, 0.0), c(0.3, -0.5), c(-0.6, 0.1)], Vec::new()).unwrap();
        let theta = 1.1;
        let base = forward(&f, LogPolar::new(theta, 0.0)).unwrap();
        let d = c(0.02, 0.03);
        let img = forward(&f, LogPolar::new(theta + d.re, d.im)).unwrap();
        let off = forward_offset(&f, LogPolar::new(theta, 0.0), d).unwrap();
        assert!((off.re - wrap_pi(img.angle - base.angle)).abs() < 1e-14);
        assert!((off.im - img.height).abs() < 1e-14);
        // first order: δ ↦ |F'(e^{iθ})| δ
        let tiny = c(3e-13, 2e-13);
        let slope = f.boundary_deriv_modulus(BoundaryPoint::new(theta).unwrap());
        assert!((forward_offset(&f, LogPolar::new(theta, 0.0), tiny).unwrap() / tiny - slope).norm() < 1e-10);
        let base = LogPolar::new(2.0, 0.3);
        let img = forward(&f, LogPolar::new(2.0 + d.re, 0.3 + d.im)).unwrap();
        let b_img = forward(&f, base).unwrap();
        let off = forward_offset(&f, base, d).unwrap();
        assert!((off.re - wrap_pi(img.angle - b_img.angle)).abs() < 1e-14);
        assert!((off.im - (img.height - b_img.height)).abs() < 1e-14);
    }

    #[test]
    fn tiny_heights_scale_with_boundary_derivative() {
        let f = deg2();
        let h = 1e-20;
        let img = forward(&f, LogPolar::new(0.0, h)).unwrap();
        // |F'(1)| = 4
        assert!((img.height / h - 4.0).abs() < 1e-12);
    }

    #[test]
    fn preimages_of_power_map() {
        let f = InnerModel::power(2);
        for h in [1e-12, 1e-3, 0.5] {
            let pre = preimages(&f, LogPolar::new(1.0, h)).unwrap();
            assert_eq!(pre.len(), 2);
            for q in &pre {
                assert!((q.height - h / 2.0).abs() < 1e-14 * h);
            }
            assert!((pre[0].angle - 0.5).abs() < 1e-14);
            assert!((pre[1].angle - 0.5 - core::f64::consts::PI).abs() < 1e-14);
        }
    }

    #[test]
    fn preimage_heights_sum() {
        let f = deg2();
        for h in [1e-15, 1e-6, 0.01, 1.2] {
            let pre = preimages(&f, LogPolar::new(2.0, h)).unwrap();
            let s: f64 = pre.iter().map(|q| q.height).sum();
            assert!((s - h).abs() < 1e-10 * h, "h={h} s={s}");
        }
    }

    #[test]
    fn boundary_preimage_weights_sum_to_one() {
        let f = deg2();
        let pre = boundary_preimages(&f, 0.7).unwrap();
        let s: f64 = pre.iter().map(|&phi| 1.0 / f.boundary_deriv_modulus(BoundaryPoint::new(phi).unwrap())).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_agrees_with_complex_formula() {
        let a = LogPolar::new(0.3, 0.2);
        let b = LogPolar::new(0.5, 0.05);
        let d = crate::hypgeo::disk_distance(a.to_complex(), b.to_complex());
        assert!((distance(a, b) - d).abs() < 1e-12);
        // vertical pair deep in the boundary layer
        let x = LogPolar::new(1.0, 1e-18);
        let y = LogPolar::new(1.0, 2e-18);
        assert!((distance(x, y) - 2f64.ln()).abs() < 1e-9);
    }
}
