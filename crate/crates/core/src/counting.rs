//! Counting functions of repeated preimages and their normalizations.

use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::hypgeo::disk_distance;
use crate::innerfn::InnerModel;
use crate::math::{cis, modulus_from_radius, radius_from_modulus};
use crate::preimage::PreimageTree;
use crate::Complex;

/// Grid step for [`apriori_constant`].
pub const APRIORI_STEP: f64 = 0.25;

#[derive(Clone, Debug, PartialEq)]
pub struct CountingProfile {
    pub base: Complex,
    /// Sorted ascending, all at most `cutoff`.
    pub radii: Vec<f64>,
    pub cutoff: f64,
    pub chi: Option<f64>,
}

impl CountingProfile {
    pub fn new(base: Complex, mut radii: Vec<f64>, cutoff: f64) -> Result<Self> {
        radii.sort_by(f64::total_cmp);
        if radii.last().is_some_and(|&r| r > cutoff) {
            bail!(Precondition, "profile radius beyond the cutoff {cutoff}");
        }
        Ok(Self { base, radii, cutoff, chi: None })
    }

    pub fn from_tree(tree: &PreimageTree) -> Self {
        Self { base: tree.base, radii: tree.radii(), cutoff: tree.cutoff, chi: None }
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = Some(chi);
        self
    }

    fn check(&self, s: f64) -> Result<()> {
        if s > self.cutoff {
            return Err(Error::OutOfCutoff { requested: s, cutoff: self.cutoff });
        }
        if !(s >= 0.0) {
            bail!(Domain, "radius must be nonnegative, got {s}");
        }
        Ok(())
    }

    /// `#{radii ≤ s}`.
    pub fn count(&self, s: f64) -> Result<usize> {
        self.check(s)?;
        Ok(self.radii.partition_point(|&r| r <= s))
    }

    /// `(1/R) ∫_0^R N(S) e^{-S} dS`, summed exactly as
    /// `(1/R) Σ_{d ≤ R} (e^{-d} - e^{-R})`.
    pub fn cesaro(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        if r == 0.0 {
            bail!(Domain, "Cesàro average needs a positive radius");
        }
        let tail = (-r).exp();
        let n = self.radii.partition_point(|&d| d <= r);
        Ok(self.radii[..n].iter().map(|&d| (-d).exp() - tail).sum::<f64>() / r)
    }

    /// `N(R) e^{-R}`.
    pub fn normalized_count(&self, r: f64) -> Result<f64> {
        Ok(self.count(r)? as f64 * (-r).exp())
    }

    /// Largest `N(R') e^{-(R' - d(0,z))}` over `R' = 0.25, 0.5, …, cutoff`.
    pub fn apriori_constant(&self) -> f64 {
        if self.radii.is_empty() {
            return 0.0;
        }
        let d0 = radius_from_modulus(self.base.norm());
        let steps = (self.cutoff / APRIORI_STEP).floor() as usize;
        let mut grid: Vec<f64> = (1..=steps).map(|k| k as f64 * APRIORI_STEP).collect();
        if grid.last().is_none_or(|&g| g < self.cutoff) {
            grid.push(self.cutoff);
        }
        grid.into_iter().map(|s| self.radii.partition_point(|&r| r <= s) as f64 * (d0 - s).exp()).fold(0.0, f64::max)
    }
}

/// `(1/2) log(1/|z|) / χ`.
pub fn target_constant(z: Complex, chi: f64) -> Result<f64> {
    if !(chi > 0.0) {
        bail!(Domain, "Lyapunov exponent must be positive, got {chi}");
    }
    let r = z.norm();
    if r == 0.0 {
        bail!(Precondition, "base point must not be the origin");
    }
    if !(r < 1.0) {
        bail!(Domain, "base point {z} is not inside the disk");
    }
    Ok(0.5 * (-r.ln()) / chi)
}

/// Empirical Schwarz gap: a quarter of the smallest `d(0,z) - d(0,F(z))`
/// over `1 ≤ d(0,z) ≤ 12`, from a polar grid refined by pattern search.
/// A rotation gives zero.
pub fn estimate_schwarz_gap(f: &InnerModel, samples: usize) -> Result<f64> {
    if !f.is_centered() {
        bail!(Precondition, "Schwarz gap needs a centered model");
    }
    if f.is_rotation() {
        log::warn!("Schwarz gap of a rotation is zero");
        return Ok(0.0);
    }
    const LO: f64 = 1.0;
    const HI: f64 = 12.0;
    let gap = |d: f64, theta: f64| -> Result<f64> {
        let z = cis(theta) * modulus_from_radius(d);
        let w = f.eval_deriv_raw(z)?.0;
        Ok(d - disk_distance(Complex::new(0.0, 0.0), w))
    };
    let n_d = ((samples as f64).sqrt().ceil() as usize).max(4);
    let n_t = (samples / n_d).max(4);
    let mut best = (f64::INFINITY, LO, 0.0);
    for i in 0..n_d {
        let d = LO + (HI - LO) * i as f64 / (n_d - 1) as f64;
        for j in 0..n_t {
            let t = core::f64::consts::TAU * j as f64 / n_t as f64;
            let g = gap(d, t)?;
            if g < best.0 {
                best = (g, d, t);
            }
        }
    }
    let (mut sd, mut st) = ((HI - LO) / (n_d - 1) as f64, core::f64::consts::TAU / n_t as f64);
    while sd > 1e-7 || st > 1e-7 {
        let mut moved = false;
        for (dd, dt) in
            [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
        {
            let d = (best.1 + dd * sd).clamp(LO, HI);
            let t = best.2 + dt * st;
            let g = gap(d, t)?;
            if g < best.0 {
                best = (g, d, t);
                moved = true;
            }
        }
        if !moved {
            sd *= 0.5;
            st *= 0.5;
        }
    }
    Ok(best.0.max(0.0) / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::DiskPoint;
    use crate::preimage::enumerate_ball;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn z2_profile(r: f64) -> CountingProfile {
        let z = DiskPoint::new(c((-1.0f64).exp(), 0.0)).unwrap();
        CountingProfile::from_tree(&enumerate_ball(&InnerModel::power(2), z, r).unwrap())
    }

    /// Closed-form packet radii for z² at z = e^{-1}.
    fn packet(n: i32) -> f64 {
        let r = (-(0.5f64).powi(n)).exp();
        ((1.0 + r) / (1.0 - r)).ln()
    }

    #[test]
    fn count_examples() {
        let p = z2_profile(2.0);
        assert_eq!(p.count(1.0).unwrap(), 1);
        assert_eq!(p.count(1.5).unwrap(), 3);
        assert_eq!(p.count(0.0).unwrap(), 0);
        assert!(matches!(p.count(2.5), Err(Error::OutOfCutoff { .. })));
    }

    #[test]
    fn cesaro_examples() {
        let empty = CountingProfile::new(c(0.5, 0.0), Vec::new(), 3.0).unwrap();
        assert_eq!(empty.cesaro(2.0).unwrap(), 0.0);
        let single = CountingProfile::new(c(0.5, 0.0), alloc::vec![1.3], 3.0).unwrap();
        assert_eq!(single.cesaro(1.3).unwrap(), 0.0);
        let p = z2_profile(2.0);
        let oracle = 0.5 * (((-packet(0)).exp() - (-2.0f64).exp()) + 2.0 * ((-packet(1)).exp() - (-2.0f64).exp()));
        assert!((p.cesaro(2.0).unwrap() - oracle).abs() < 1e-14);
        assert!((p.cesaro(2.0).unwrap() - 0.272974316178795).abs() < 1e-12);
    }

    #[test]
    fn cesaro_matches_quadrature() {
        let p = z2_profile(5.0);
        for r in [1.0, 2.7, 5.0] {
            let q = crate::quad::integrate_pieces(
                |s| p.count(s).unwrap() as f64 * (-s).exp(),
                &core::iter::once(0.0)
                    .chain(p.radii.iter().copied().filter(|&d| d < r))
                    .chain(core::iter::once(r))
                    .collect::<Vec<_>>(),
                1e-13,
                100,
            );
            assert!((q.value / r - p.cesaro(r).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn target_examples() {
        let t = target_constant(c((-1.0f64).exp(), 0.0), 2f64.ln()).unwrap();
        assert!((t - 0.7213475204444817).abs() < 1e-15);
        let chi = (1.0 + 3f64.sqrt() / 2.0).ln();
        let t = target_constant(c(0.3, 0.0), chi).unwrap();
        assert!((t - 0.5 * (1.0f64 / 0.3).ln() / chi).abs() < 1e-15);
        assert!((t - 0.9650145250324008).abs() < 1e-12);
        assert!(target_constant(c(1.0 - 1e-15, 0.0), 1.0).unwrap() < 1e-14);
        assert!(target_constant(c(0.3, 0.0), 0.0).is_err());
    }

    #[test]
    fn apriori_examples() {
        let empty = CountingProfile::new(c(0.5, 0.0), Vec::new(), 3.0).unwrap();
        assert_eq!(empty.apriori_constant(), 0.0);
        let c6 = z2_profile(6.0).apriori_constant();
        let c8 = z2_profile(8.0).apriori_constant();
        assert!(c6 > 0.0 && c6.is_finite());
        assert!((c8 / c6 - 1.0).abs() < 0.2);
    }

    #[test]
    fn schwarz_gap_of_square() {
        // gap is radial for z²: 1-d scan over r is the oracle
        let mut oracle = f64::INFINITY;
        for k in 0..=110_000 {
            let d = 1.0 + 11.0 * k as f64 / 110_000.0;
            let r = modulus_from_radius(d);
            oracle = oracle.min(d - radius_from_modulus(r * r));
        }
        let g = estimate_schwarz_gap(&InnerModel::power(2), 400).unwrap();
        assert!((g - oracle / 4.0).abs() < 1e-6);
        assert_eq!(estimate_schwarz_gap(&InnerModel::power(1), 100).unwrap(), 0.0);
    }

    #[test]
    fn schwarz_gap_reproducible() {
        let f = InnerModel::blaschke(alloc::vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let a = estimate_schwarz_gap(&f, 900).unwrap();
        let b = estimate_schwarz_gap(&f, 2500).unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-3);
    }
}
