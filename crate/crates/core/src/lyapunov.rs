//! The Lyapunov exponent `χ = ∫ log|F'| dm` of the boundary map, by
//! quadrature, by Jensen's formula applied to `F'`, and by a Birkhoff average.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{bail, Result};
use crate::innerfn::{BoundaryPoint, InnerModel};
use crate::logpolar::{forward, LogPolar};
use crate::poly;
use crate::stats::batch_means;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    Jensen,
    Birkhoff,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::Jensen => "jensen",
            Method::Birkhoff => "birkhoff",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LyapunovEstimate {
    pub value: f64,
    pub method: Method,
    /// Quadrature: error bound. Jensen: zero. Birkhoff: standard error.
    pub error: f64,
}

/// Half-width of the window cut out around each atom.
const ATOM_WINDOW: f64 = 1e-6;
/// Floor for the Birkhoff standard error, so constant integrands still admit
/// rounding noise.
const BIRKHOFF_SE_FLOOR: f64 = 1e-12;

/// Adaptive Gauss–Kronrod quadrature of `(1/2π) ∫ log|F'(e^{iθ})| dθ`.
/// Atoms are cut out with a window whose contribution is integrated in closed
/// form against the local `1/t²` envelope.
pub fn chi_quadrature(f: &InnerModel, tol: f64) -> Result<LyapunovEstimate> {
    if f.is_rotation() {
        return Ok(LyapunovEstimate { value: 0.0, method: Method::Quadrature, error: 0.0 });
    }
    let integrand = |theta: f64| -> f64 {
        let b = BoundaryPoint::new(theta).expect("finite angle");
        f.boundary_deriv_modulus(b).ln()
    };
    let mut atom_angles: Vec<f64> = f.atoms().iter().map(|a| a.angle).collect();
    atom_angles.sort_by(f64::total_cmp);
    let abs_tol = tol * TAU;
    let (value, error, converged) = if atom_angles.is_empty() {
        let q = crate::quad::integrate(integrand, 0.0, TAU, abs_tol, 20_000);
        (q.value, q.error, q.converged)
    } else {
        // integrate over one period starting at the first atom
        let start = atom_angles[0];
        let mut breaks: Vec<f64> = Vec::new();
        for &a in &atom_angles {
            breaks.push(a);
        }
        breaks.push(start + TAU);
        let mut value = 0.0;
        let mut error = 0.0;
        let mut converged = true;
        let pieces = breaks.len() - 1;
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0] + ATOM_WINDOW, w[1] - ATOM_WINDOW);
            if hi > lo {
                let q = crate::quad::integrate(integrand, lo, hi, 0.5 * abs_tol / pieces as f64, 20_000);
                value += q.value;
                error += q.error;
                converged &= q.converged;
            }
        }
        for &a in &atom_angles {
            let (v, e) = atom_window(f, a);
            value += v;
            error += e;
        }
        (value, error, converged)
    };
    if !converged {
        log::warn!("Lyapunov quadrature reached its interval limit with error {:e}", error / TAU);
    }
    Ok(LyapunovEstimate { value: value / TAU, method: Method::Quadrature, error: error / TAU })
}

/// `∫_{-ε}^{ε} log(B + c/t²) dt` for the atom at `angle`, with `B` the rest
/// of the Ahern–Clark sum at the atom and `c = 2σ` its own weight, plus a
/// bound on the mismatch with the true integrand.
fn atom_window(f: &InnerModel, angle: f64) -> (f64, f64) {
    let eps = ATOM_WINDOW;
    let u = crate::math::cis(angle);
    let mut rest = 0.0;
    let mut own = 0.0;
    for &a in f.zeros() {
        rest += (1.0 - a.norm_sqr()) / (u - a).norm_sqr();
    }
    for atom in f.atoms() {
        if crate::math::wrap_pi(atom.angle - angle) == 0.0 {
            own += 2.0 * atom.weight;
        } else {
            rest += 2.0 * atom.weight / (crate::math::cis(atom.angle) - u).norm_sqr();
        }
    }
    let model = |t: f64| (rest + own / (t * t)).ln();
    let value = if rest > 0.0 {
        let a = (own / rest).sqrt();
        2.0 * eps * rest.ln() + 2.0 * (eps * (1.0 + a * a / (eps * eps)).ln() + 2.0 * a * (eps / a).atan())
    } else {
        2.0 * eps * (own.ln() - 2.0 * eps.ln() + 2.0)
    };
    // compare model and true integrand at the window edges
    let edge = |s: f64| {
        let b = BoundaryPoint::new(angle + s * eps).expect("finite angle");
        (f.boundary_deriv_modulus(b).ln() - model(eps)).abs()
    };
    (value, 2.0 * eps * edge(1.0).max(edge(-1.0)) + 1e-3 * eps)
}

/// `log|c| + Σ log(1/|c_j|)` over the critical points `c_j ≠ 0` in the disk,
/// `c` the first nonzero Taylor coefficient of `F'` at the origin.
pub fn chi_jensen_oracle(f: &InnerModel) -> Result<LyapunovEstimate> {
    if !f.is_finite_blaschke() {
        bail!(Precondition, "Jensen oracle needs a finite Blaschke product");
    }
    let d = f.degree();
    if d < 2 {
        bail!(Precondition, "Jensen oracle needs degree at least 2, got {d}");
    }
    let (p, q) = f.numerator_denominator();
    // F' = (P'Q - PQ') / Q² and Q(0) = 1
    let num = poly::sub(&poly::mul(&poly::derivative(&p), &q), &poly::mul(&p, &poly::derivative(&q)));
    let lead_idx = num.iter().position(|c| c.norm() != 0.0);
    let Some(lead_idx) = lead_idx else {
        bail!(Numerical, "derivative vanishes identically");
    };
    let c_lead = num[lead_idx] / (q[0] * q[0]);
    let roots = poly::roots(&num)?;
    let inside: Vec<_> = roots.iter().filter(|c| c.norm() < 1.0).collect();
    if inside.len() != d - 1 {
        bail!(Numerical, "found {} critical points in the disk, expected {}", inside.len(), d - 1);
    }
    let mut value = c_lead.norm().ln();
    for c in inside {
        if c.norm() != 0.0 {
            value -= c.norm().ln();
        }
    }
    Ok(LyapunovEstimate { value, method: Method::Jensen, error: 0.0 })
}

/// Time average of `log|F'|` along `n` steps of the boundary orbit of `ζ0`,
/// iterated in angle coordinates. The standard error is from 50 batch means.
pub fn chi_birkhoff(f: &InnerModel, zeta0: BoundaryPoint, n: usize, seed: u64) -> Result<LyapunovEstimate> {
    f.require_centered_blaschke()?;
    if n == 0 {
        bail!(Precondition, "Birkhoff average needs at least one step");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = zeta0.angle();
    let mut terms = Vec::with_capacity(n);
    while terms.len() < n {
        let b = BoundaryPoint::new(theta)?;
        let slope = f.boundary_deriv_modulus(b);
        if !(slope.is_finite() && slope > 0.0) {
            // cannot happen for Blaschke boundary maps; restart nearby
            theta += 1e-9 * (rng.gen::<f64>() - 0.5);
            log::warn!("Birkhoff orbit restarted from a perturbed angle");
            continue;
        }
        terms.push(slope.ln());
        theta = forward(f, LogPolar { angle: theta, height: 0.0 })?.angle;
    }
    let est = batch_means(&terms, 50);
    Ok(LyapunovEstimate {
        value: est.mean,
        method: Method::Birkhoff,
        error: est.std_error.max(BIRKHOFF_SE_FLOOR * (1.0 + est.mean.abs())),
    })
}

/// Angular derivative `|F'(ζ)|`, `+∞` if it does not exist.
pub fn angular_derivative(f: &InnerModel, zeta: BoundaryPoint) -> f64 {
    f.angular_derivative(zeta)
}

/// `∫ log(1 + a²/t²) dt` from `0` to `t`.
pub fn log_envelope_integral(a: f64, t: f64) -> f64 {
    t * (1.0 + a * a / (t * t)).ln() + 2.0 * a * (t / a).atan()
}
