//! Exponential coordinates on a backward boundary orbit and the geodesic
//! flow they carry.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::innerfn::BoundaryPoint;
use crate::logpolar::{self, LogPolar};
use crate::math::{modulus_from_radius, wrap_pi};
use crate::Complex;

use super::orbit::{InverseOrbit, OrbitKind};

pub const DEFAULT_T_CAP: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpPoint {
    pub point: LogPolar,
    /// Hyperbolic distance to the approximation one level shallower.
    pub increment: f64,
}

/// `|(F^n)'(u_{-n})| = Π_{k=1}^{n} |F'(u_{-k})|`.
fn expansion(orbit: &InverseOrbit, n: usize) -> Result<f64> {
    let mut prod = 1.0;
    for k in 1..=n {
        prod *= orbit.model().boundary_deriv_modulus(BoundaryPoint::new(orbit.point(k).angle)?);
    }
    Ok(prod)
}

fn check(orbit: &InverseOrbit, t: f64, n: usize) -> Result<()> {
    if orbit.kind() != OrbitKind::Boundary {
        bail!(Precondition, "exponential coordinates live on boundary orbits");
    }
    if !(t > 0.0 && t < DEFAULT_T_CAP) {
        bail!(Domain, "t = {t} outside (0, {DEFAULT_T_CAP})");
    }
    if n > orbit.len() {
        bail!(Precondition, "approximation depth {n} exceeds orbit length {}", orbit.len());
    }
    Ok(())
}

/// The `-k` coordinate of the depth-`n` approximation:
/// `F^{n-k}(u_{-n} (1 - t / |(F^n)'(u_{-n})|))`.
fn coordinate(orbit: &InverseOrbit, t: f64, n: usize, k: usize) -> Result<LogPolar> {
    let s = t / expansion(orbit, n)?;
    if !(s < 1.0) {
        bail!(Domain, "displacement {s} leaves the disk");
    }
    orbit.push_offset(Complex::new(0.0, -(-s).ln_1p()), n, k)
}

/// `E(u, t)_0` approximated at depth `n_approx`.
pub fn exponential_map(orbit: &InverseOrbit, t: f64, n_approx: usize) -> Result<ExpPoint> {
    check(orbit, t, n_approx)?;
    let point = coordinate(orbit, t, n_approx, 0)?;
    let increment = if n_approx == 0 { 0.0 } else { logpolar::distance(point, coordinate(orbit, t, n_approx - 1, 0)?) };
    Ok(ExpPoint { point, increment })
}

/// Increments `d(E_n, E_{n-1})` for `n = 1..=n_max`.
pub fn cauchy_increments(orbit: &InverseOrbit, t: f64, n_max: usize) -> Result<Vec<f64>> {
    check(orbit, t, n_max)?;
    let mut prev = coordinate(orbit, t, 0, 0)?;
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let cur = coordinate(orbit, t, n, 0)?;
        out.push(logpolar::distance(cur, prev));
        prev = cur;
    }
    Ok(out)
}

/// Hyperbolic discrepancy between `g_s(E(u, t))` and `E(u, e^s t)`.
///
/// The flow is applied at coordinate `-k`, `k = n_approx / 2`, by moving the
/// point a hyperbolic distance `s` toward the origin along its radius, and
/// then pushed forward by `F^k`.
pub fn geodesic_intertwining_check(orbit: &InverseOrbit, t: f64, s: f64, n_approx: usize) -> Result<f64> {
    let ts = s.exp() * t;
    check(orbit, t, n_approx)?;
    check(orbit, ts, n_approx)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let k = n_approx / 2;
    let deep = coordinate(orbit, t, n_approx, k)?;
    let rho = deep.radius() - s;
    if !(rho > 0.0) {
        bail!(Domain, "flow by {s} passes through the origin");
    }
    let shift = Complex::new(wrap_pi(deep.angle - orbit.point(k).angle), -modulus_from_radius(rho).ln());
    let x = orbit.push_offset(shift, k, 0)?;
    let target = coordinate(orbit, ts, n_approx, 0)?;
    Ok(logpolar::distance(x, target))
}

#[cfg(test)]
mod tests {
    use super::super::orbit::SolenoidSampler;
    use super::*;
    use crate::innerfn::InnerModel;

    fn fixed_orbit(d: usize, n: usize) -> InverseOrbit {
        let mut o = InverseOrbit::boundary(InnerModel::power(d), BoundaryPoint::new(0.0).unwrap()).unwrap();
        o.extend_with(n, |_| 0).unwrap();
        o
    }

    fn deg2() -> InnerModel {
        InnerModel::blaschke(alloc::vec![Complex::new(0.0, 0.0), Complex::new(0.5, 0.0)]).unwrap()
    }

    #[test]
    fn fixed_point_closed_form() {
        let o = fixed_orbit(2, 30);
        let e = exponential_map(&o, 0.5, 30).unwrap();
        assert!((e.point.to_complex() - Complex::new((-0.5f64).exp(), 0.0)).norm() < 1e-6);
        let e0 = exponential_map(&o, 0.3, 0).unwrap();
        assert!((e0.point.to_complex() - Complex::new(0.7, 0.0)).norm() < 1e-15);
        assert_eq!(e0.increment, 0.0);
    }

    #[test]
    fn small_t_is_radial() {
        let mut s = SolenoidSampler::new(deg2(), 5).unwrap();
        let o = s.sample_backward_orbit(40).unwrap();
        let u0 = o.point(0).to_complex();
        let mut prev = f64::INFINITY;
        for t in [1e-2, 1e-3] {
            let e = exponential_map(&o, t, 40).unwrap().point.to_complex();
            let rel = (e - u0 * (1.0 - t)).norm() / t;
            assert!(rel < prev);
            assert!(rel < 0.1);
            prev = rel;
        }
    }

    #[test]
    fn increments_decay() {
        // per-step ratios follow 1/|F'| along the orbit, so the rate is a geometric mean
        let mut s = SolenoidSampler::new(deg2(), 11).unwrap();
        for _ in 0..10 {
            let o = s.sample_backward_orbit(40).unwrap();
            let inc = cauchy_increments(&o, 0.5, 40).unwrap();
            let rate = (inc[39] / inc[9]).powf(1.0 / 30.0);
            assert!(rate < 0.9, "{rate} {inc:?}");
        }
    }

    #[test]
    fn intertwining() {
        let o = fixed_orbit(2, 30);
        assert_eq!(geodesic_intertwining_check(&o, 0.3, 0.0, 30).unwrap(), 0.0);
        assert!(geodesic_intertwining_check(&o, 0.3, -0.5, 30).unwrap() < 1e-6);
        let mut s = SolenoidSampler::new(InnerModel::power(2), 2).unwrap();
        for _ in 0..5 {
            let o = s.sample_backward_orbit(30).unwrap();
            assert!(geodesic_intertwining_check(&o, 0.3, -0.5, 30).unwrap() < 1e-3);
        }
    }

    #[test]
    fn gh_commutation_on_fixed_leaf() {
        // leaf chart (x, y) ↦ E(u^x, y)_0 where u^x_{-n} = e^{ix/dⁿ}; closed form e^{-y + ix}
        let d = 2usize;
        let chart = |x: f64, y: f64| {
            let mut o = InverseOrbit::boundary(InnerModel::power(d), BoundaryPoint::new(x).unwrap()).unwrap();
            let mut want = x;
            o.extend_with(30, |c| {
                want /= d as f64;
                (0..c.len())
                    .min_by(|&a, &b| {
                        let da = wrap_pi(c[a].angle - want).abs();
                        let db = wrap_pi(c[b].angle - want).abs();
                        da.total_cmp(&db)
                    })
                    .unwrap()
            })
            .unwrap();
            exponential_map(&o, y, 30).unwrap().point.to_complex()
        };
        let geo = |r: f64, (x, y): (f64, f64)| (x, (-r).exp() * y);
        let horo = |s: f64, (x, y): (f64, f64)| (x + s * y, y);
        let (x, y, t, s) = (0.4, 0.6, 0.5, 0.7);
        // g_{-t} h_s versus h_{e^t s} g_{-t}
        let lhs = geo(t, horo(s, (x, y)));
        let rhs = horo(t.exp() * s, geo(t, (x, y)));
        let a = chart(lhs.0, lhs.1);
        let b = chart(rhs.0, rhs.1);
        assert!((a - b).norm() < 1e-6);
        assert!((a - Complex::from_polar((-lhs.1).exp(), lhs.0)).norm() < 1e-6);
    }
}
