//! Masses of the natural measure on boxes and on a fundamental annulus.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{bail, Error, Result};
use crate::innerfn::InnerModel;
use crate::logpolar::{self, LogPolar};
use crate::lyapunov::chi_jensen_oracle;
use crate::quad::gauss_legendre;

/// `{r_min ≤ |z| ≤ r_max, angle_min ≤ arg z ≤ angle_max}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnularBox {
    pub r_min: f64,
    pub r_max: f64,
    pub angle_min: f64,
    pub angle_max: f64,
}

impl AnnularBox {
    pub fn new(r_min: f64, r_max: f64, angle_min: f64, angle_max: f64) -> Result<Self> {
        if !(0.0 < r_min && r_min < r_max && r_max < 1.0) {
            bail!(Domain, "box radii must satisfy 0 < r_min < r_max < 1, got {r_min}, {r_max}");
        }
        if !(angle_min < angle_max && angle_max - angle_min <= TAU) {
            bail!(Domain, "box angles must span (0, 2π]");
        }
        Ok(Self { r_min, r_max, angle_min, angle_max })
    }

    /// `(1/2π) ∫_A dA / (1 - |z|)`.
    pub fn boundary_reference(&self) -> f64 {
        let prim = |r: f64| -r - (-r).ln_1p();
        (self.angle_max - self.angle_min) / TAU * (prim(self.r_max) - prim(self.r_min))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxMassEstimate {
    pub region: AnnularBox,
    pub depth: usize,
    pub mass: f64,
    /// Difference between the `m` and `2m` tensor grids.
    pub error: f64,
}

/// `Σ_{F^n(w) = z} log(1/|w|) / ‖(F^n)'(w)‖²_hyp`.
fn pullback_density(f: &InnerModel, z: LogPolar, depth: usize, budget: &mut usize) -> Result<f64> {
    let mut level = alloc::vec![(z, 1.0)];
    for g in 0..depth {
        let mut next = Vec::with_capacity(level.len() * f.degree());
        for &(x, factor) in &level {
            for w in logpolar::preimages(f, x)? {
                // ‖F'(w)‖_hyp = |F'(w)| (1 - |w|²) / (1 - |F(w)|²)
                let dmod = logpolar::log_derivative(f, w).norm() * (w.height - x.height).exp();
                let norm = dmod * w.gap2() / x.gap2();
                next.push((w, factor / (norm * norm)));
            }
        }
        if next.len() > *budget {
            return Err(Error::Budget { budget: *budget, completed_depth: g });
        }
        *budget -= next.len();
        level = next;
    }
    Ok(level.iter().map(|(w, factor)| w.height * factor).sum())
}

fn box_grid(f: &InnerModel, region: &AnnularBox, depth: usize, m: usize, budget: &mut usize) -> Result<f64> {
    let (x, w) = gauss_legendre(m);
    let (ra, rb) = (0.5 * (region.r_max - region.r_min), 0.5 * (region.r_max + region.r_min));
    let (ta, tb) = (0.5 * (region.angle_max - region.angle_min), 0.5 * (region.angle_max + region.angle_min));
    let mut total = 0.0;
    for i in 0..m {
        let r = ra * x[i] + rb;
        // dA_hyp = 4 r dr dθ / (1 - r²)²
        let area = 4.0 * r / ((1.0 - r * r) * (1.0 - r * r)) * ra * w[i];
        let mut row = 0.0;
        for j in 0..m {
            let theta = ta * x[j] + tb;
            row += w[j] * pullback_density(f, LogPolar::new(theta, -r.ln()), depth, budget)?;
        }
        total += area * ta * row;
    }
    Ok(total / TAU)
}

/// `(1/2π) ∫_{F^{-n}(A)} log(1/|w|) dA_hyp(w)`, evaluated on `A` through the
/// change of variables. Uses Gauss–Legendre tensor grids with `m` and `2m`
/// points per direction.
pub fn xi_box_mass(
    f: &InnerModel,
    region: AnnularBox,
    depth: usize,
    m: usize,
    budget: usize,
) -> Result<BoxMassEstimate> {
    if !f.is_finite_blaschke() || f.degree() == 0 {
        bail!(Precondition, "box masses need a nonconstant finite Blaschke product");
    }
    let mut left = budget;
    let coarse = box_grid(f, &region, depth, m, &mut left)?;
    let fine = box_grid(f, &region, depth, 2 * m, &mut left)?;
    Ok(BoxMassEstimate { region, depth, mass: fine, error: (fine - coarse).abs() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TotalMass {
    pub r0: f64,
    pub mass: f64,
    pub std_error: f64,
    pub chi: f64,
    pub samples: usize,
}

/// Stratified Monte Carlo over `u = -log(1 - r) ∈ [u_0, u_max]` and the
/// angle. Each stratum has its own ChaCha8 stream, so strata can be
/// evaluated in any order.
#[derive(Clone, Debug)]
pub struct TotalMassPlan {
    model: InnerModel,
    r0: f64,
    u_lo: f64,
    u_hi: f64,
    radial: usize,
    angular: usize,
    per_stratum: usize,
    seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StratumSum {
    pub sum: f64,
    pub sum_sq: f64,
    pub count: usize,
}

impl TotalMassPlan {
    pub fn new(f: &InnerModel, r0: f64, samples: usize, seed: u64) -> Result<Self> {
        if !f.is_finite_blaschke() || !f.is_centered() || f.is_rotation() {
            bail!(Precondition, "total mass needs a centered finite Blaschke product that is not a rotation");
        }
        if !(r0 > 0.0 && r0 < 1.0) {
            bail!(Domain, "r0 must lie in (0, 1), got {r0}");
        }
        // |F'| ≤ L on the closed disk, so |F(z)| ≥ r0 once 1 - |z| < (1 - r0)/L
        let lip: f64 = f.zeros().iter().map(|a| (1.0 + a.norm()) / (1.0 - a.norm())).sum();
        let u_lo = -(-r0).ln_1p();
        let u_hi = u_lo + lip.ln();
        let (radial, angular) = (32, 64);
        let per_stratum = samples.div_ceil(radial * angular).max(2);
        Ok(Self { model: f.clone(), r0, u_lo, u_hi, radial, angular, per_stratum, seed })
    }

    pub fn strata(&self) -> usize {
        self.radial * self.angular
    }

    pub fn eval_stratum(&self, k: usize) -> StratumSum {
        let (i, j) = (k / self.angular, k % self.angular);
        let du = (self.u_hi - self.u_lo) / self.radial as f64;
        let dt = TAU / self.angular as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k as u64);
        let h0 = -self.r0.ln();
        let mut out = StratumSum::default();
        for _ in 0..self.per_stratum {
            let u = self.u_lo + du * (i as f64 + rng.gen::<f64>());
            let theta = dt * (j as f64 + rng.gen::<f64>());
            let gap = (-u).exp();
            let r = 1.0 - gap;
            let height = -(-gap).ln_1p();
            let inside = logpolar::forward(&self.model, LogPolar::new(theta, height)).is_ok_and(|w| w.height > h0);
            // log(1/r) · 4r / (1 - r²)² · dr/du
            let v = if inside { 4.0 * r * height / (gap * (1.0 + r) * (1.0 + r)) } else { 0.0 };
            out.sum += v;
            out.sum_sq += v * v;
            out.count += 1;
        }
        out
    }

    /// Combines stratum sums given in stratum order.
    pub fn combine(&self, sums: &[StratumSum]) -> Result<TotalMass> {
        let cell = (self.u_hi - self.u_lo) / self.radial as f64 * TAU / self.angular as f64 / TAU;
        let mut mass = 0.0;
        let mut var = 0.0;
        let mut samples = 0;
        for s in sums {
            let n = s.count as f64;
            let mean = s.sum / n;
            let v = (s.sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
            mass += cell * mean;
            var += cell * cell * v / n;
            samples += s.count;
        }
        let chi = chi_jensen_oracle(&self.model)?.value;
        Ok(TotalMass { r0: self.r0, mass, std_error: var.sqrt(), chi, samples })
    }
}

/// `(1/2π) ∫_{E*} log(1/|z|) dA_hyp` over `E* = F^{-1}(B(0, r0)) \ B(0, r0)`,
/// paired with the Jensen value of the Lyapunov exponent.
pub fn total_mass_check(f: &InnerModel, r0: f64, samples: usize, seed: u64) -> Result<TotalMass> {
    let plan = TotalMassPlan::new(f, r0, samples, seed)?;
    let sums: Vec<StratumSum> = (0..plan.strata()).map(|k| plan.eval_stratum(k)).collect();
    plan.combine(&sums)
}
