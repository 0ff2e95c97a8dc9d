//! Radial shadowing of backward orbits and the good/bad times simulation in
//! the upper half-plane.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{bail, Result};
use crate::logpolar::LogPolar;
use crate::math::wrap_pi;

use super::orbit::{InverseOrbit, OrbitKind};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShadowingStat {
    pub value: f64,
    pub limit_angle: f64,
    /// The last quarter of the orbit spreads over more than 0.1 rad.
    pub inconclusive: bool,
}

/// `d(z, ray at angle θ)` for a log-polar point.
fn distance_to_ray(z: LogPolar, theta: f64) -> f64 {
    let phi = wrap_pi(z.angle - theta).abs();
    if phi >= 0.5 * PI {
        return z.radius();
    }
    // sinh d = sinh(d(0,z)) sin φ, sinh(d(0,z)) = 2|z| / (1 - |z|²)
    (2.0 * (-z.height).exp() * phi.sin() / z.gap2()).asinh()
}

/// `g_{-t}(z)_0`, the backward geodesic through the orbit at time `t`,
/// realized at depth `n`: `z_{-n}` moves a hyperbolic distance `t` outward
/// along its radius and is pushed forward by `F^n`.
pub fn leaf_geodesic_point(orbit: &InverseOrbit, n: usize, t: f64) -> Result<LogPolar> {
    if orbit.kind() != OrbitKind::Interior {
        bail!(Precondition, "leaf geodesics start from interior orbits");
    }
    let base = orbit.point(n);
    let g = base.gap();
    // 1 - r after moving out by t: 2g / (g + (2 - g) e^t)
    let moved = 2.0 * g / (g + (2.0 - g) * t.exp());
    if !(moved > 0.0) {
        bail!(Domain, "time {t} moves past the resolution of f64");
    }
    orbit.push_point(0.0, -(-moved).ln_1p(), n, 0)
}

/// Time average of `min{1, d(γ(t), ray)}` over `t ∈ [0, T]` along the
/// backward leaf geodesic `γ` realized at depth `n`, with
/// `T = τ_n - τ_0` and `τ = -log(1 - |z|)`. The ray points at the angle of
/// `γ(T)`; distance to the ray as a set is the infimum over time offsets.
pub fn radial_shadowing_stat(orbit: &InverseOrbit, n: usize) -> Result<ShadowingStat> {
    if orbit.kind() != OrbitKind::Interior {
        bail!(Precondition, "radial shadowing needs an interior orbit");
    }
    if n == 0 || n > orbit.len() {
        bail!(Precondition, "need 1 ≤ n ≤ {}, got {n}", orbit.len());
    }
    let tau = |p: LogPolar| -p.gap().ln();
    let horizon = tau(orbit.point(n)) - tau(orbit.point(0));
    if !(horizon > 0.0) {
        bail!(Precondition, "orbit does not approach the circle");
    }
    let samples = SHADOW_SAMPLES;
    let path: Vec<LogPolar> = (0..=samples)
        .map(|k| leaf_geodesic_point(orbit, n, horizon * k as f64 / samples as f64))
        .collect::<Result<_>>()?;
    let limit = path[samples].angle;
    let spread = path[3 * samples / 4..].iter().map(|p| wrap_pi(p.angle - limit).abs()).fold(0.0, f64::max);
    let dist: Vec<f64> = path.iter().map(|&p| distance_to_ray(p, limit).min(1.0)).collect();
    let area: f64 = dist.windows(2).map(|w| 0.5 * (w[0] + w[1])).sum::<f64>() / samples as f64;
    Ok(ShadowingStat { value: area, limit_angle: limit, inconclusive: spread > 0.1 })
}

const SHADOW_SAMPLES: usize = 2000;

/// Which times are bad.
#[derive(Clone, Debug, PartialEq)]
pub enum BadTimes {
    Never,
    Always,
    /// `⋃_{k ≥ 1} [2^k, 2^k + k]`.
    Dyadic,
    /// Disjoint sorted intervals.
    Intervals(Vec<(f64, f64)>),
}

impl BadTimes {
    /// Whether `t` is bad, and the next time the answer may change.
    fn state(&self, t: f64) -> (bool, f64) {
        match self {
            BadTimes::Never => (false, f64::INFINITY),
            BadTimes::Always => (true, f64::INFINITY),
            BadTimes::Dyadic => {
                let mut k = 1u32;
                loop {
                    let start = 2f64.powi(k as i32);
                    let end = start + k as f64;
                    if t < start {
                        return (false, start);
                    }
                    if t < end {
                        return (true, end);
                    }
                    k += 1;
                }
            }
            BadTimes::Intervals(iv) => {
                for &(a, b) in iv {
                    if t < a {
                        return (false, a);
                    }
                    if t < b {
                        return (true, b);
                    }
                }
                (false, f64::INFINITY)
            }
        }
    }

    /// Fraction of `[0, t]` that is bad.
    pub fn density(&self, t: f64) -> f64 {
        let mut s = 0.0;
        let mut bad = 0.0;
        while s < t {
            let (b, next) = self.state(s);
            let e = next.min(t);
            if b {
                bad += e - s;
            }
            s = e;
        }
        if t > 0.0 {
            bad / t
        } else {
            0.0
        }
    }
}

/// Unit-speed direction taken at bad times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adversary {
    /// `(v_↑ + v_→)/√2`.
    UpRight,
    /// `v_→`.
    Right,
    /// `v_↑`.
    Up,
}

impl Adversary {
    /// `(dx/dt / y, d log y / dt)`.
    fn rates(self) -> (f64, f64) {
        match self {
            Adversary::UpRight => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            Adversary::Right => (1.0, 0.0),
            Adversary::Up => (0.0, 1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowingRun {
    /// Final real part, the estimate of `ζ`.
    pub limit: f64,
    /// `(t, (1/t) ∫_0^t min{1, d(γ(s), vertical line at ζ)} ds)`.
    pub curve: Vec<(f64, f64)>,
    pub final_average: f64,
}

/// Integrates `γ' = v_↓` at good times and the adversary at bad times from
/// `x0 + i y0` up to `horizon`, by RK4 in `(x, log y)` with steps of at most
/// `max_step`. The curve holds `curve_points` evenly spaced samples.
///
/// Real parts are carried relative to the current height so that the
/// distance `(ζ - x)/y` stays accurate after `y` underflows.
pub fn shadowing_simulation(
    bad: &BadTimes,
    horizon: f64,
    adversary: Adversary,
    x0: f64,
    y0: f64,
    max_step: f64,
    curve_points: usize,
) -> Result<ShadowingRun> {
    if !(horizon > 0.0 && y0 > 0.0 && max_step > 0.0) {
        bail!(Domain, "horizon, start height and step must be positive");
    }
    // per step: length, scaled displacement dx / y_start, change of log y
    let mut steps: Vec<(f64, f64, f64)> = Vec::new();
    let mut t = 0.0;
    let mut x = x0;
    let mut ly = y0.ln();
    while t < horizon {
        let (is_bad, next) = bad.state(t);
        let until = next.min(horizon) - t;
        let h = until.min(max_step);
        if !(h > 1e-12) {
            if until <= 1e-12 {
                // zero-length segment
                t = next.min(horizon);
                continue;
            }
            bail!(Numerical, "step size underflow at t = {t}");
        }
        let (a, b) = if is_bad { adversary.rates() } else { (0.0, -1.0) };
        let (dxi, dl) = rk4(a, b, h);
        steps.push((h, dxi, dl));
        x += dxi * ly.exp();
        ly += dl;
        t += h;
    }
    // backward pass: D_i = (ζ - x_i) / y_i
    let n = steps.len();
    let mut dist = alloc::vec![0.0; n + 1];
    for i in (0..n).rev() {
        let (_, dxi, dl) = steps[i];
        dist[i] = dist[i + 1] * dl.exp() + dxi;
    }
    let spacing = horizon / curve_points.max(1) as f64;
    let mut curve = Vec::with_capacity(curve_points);
    let mut area = 0.0;
    let mut t = 0.0;
    let mut mark = spacing;
    for i in 0..n {
        let h = steps[i].0;
        area += 0.5 * h * (dist[i].min(1.0) + dist[i + 1].min(1.0));
        t += h;
        while curve_points > 0 && t >= mark * (1.0 - 1e-12) && curve.len() < curve_points {
            curve.push((t, area / t));
            mark += spacing;
        }
    }
    let final_average = if t > 0.0 { area / t } else { 0.0 };
    Ok(ShadowingRun { limit: x, curve, final_average })
}

/// One RK4 step for `ξ' = a e^λ`, `λ' = b` from `(0, 0)`.
fn rk4(a: f64, b: f64, h: f64) -> (f64, f64) {
    let f = |l: f64| a * l.exp();
    let k1 = (f(0.0), b);
    let k2 = (f(0.5 * h * k1.1), b);
    let k3 = (f(0.5 * h * k2.1), b);
    let k4 = (f(h * k3.1), b);
    (h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0), h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1))
}
