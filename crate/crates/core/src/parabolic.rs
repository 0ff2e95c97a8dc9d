//! Half-plane self-maps with a parabolic fixed point at infinity:
//! `F(z) = z + β + Σ c_k (1 + z x_k)/(x_k - z)` with real `x_k` and `c_k > 0`.
//!
//! Preimages solve a polynomial equation of degree `k + 1`, all of whose
//! roots lie in the upper half-plane. Strip counting enumerates the tree of
//! repeated preimages below a base point, down to height `e^{-R}`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::distortion::HalfPlaneMap;
use crate::error::{bail, Error, Result};
use crate::hypgeo::HalfPlanePoint;
use crate::poly;
use crate::quad::{self, Quadrature};
use crate::Complex;

/// Relative tolerance for the identity `Σ Im w = Im z` over preimages.
pub const IM_SUM_TOL: f64 = 1e-9;
pub const DEFAULT_STRIP_BUDGET: usize = 20_000_000;
/// Below this the constant term at infinity counts as zero.
pub const DRIFT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct HalfPlaneInner {
    beta: f64,
    /// `(x_k, c_k)` sorted by position, positions distinct.
    atoms: Vec<(f64, f64)>,
}

impl HalfPlaneInner {
    /// Atoms at equal positions are merged.
    pub fn new(beta: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        if !beta.is_finite() {
            bail!(Domain, "β must be finite, got {beta}");
        }
        let mut atoms = atoms;
        for &(x, c) in &atoms {
            if !(x.is_finite() && c.is_finite() && c > 0.0) {
                bail!(Domain, "atom ({x}, {c}) needs a finite position and positive mass");
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (x, c) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += c,
                _ => merged.push((x, c)),
            }
        }
        Ok(Self { beta, atoms: merged })
    }

    /// `z - 1/z + β`.
    pub fn z_minus_inverse(beta: f64) -> Self {
        Self { beta, atoms: alloc::vec![(0.0, 1.0)] }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Number of preimages of a point.
    pub fn degree(&self) -> usize {
        self.atoms.len() + 1
    }

    /// `c_k (1 + x_k²)`, the residue weight of each atom.
    fn weights(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().map(|&(x, c)| (x, c * (1.0 + x * x)))
    }

    /// `Σ c_k (1 + x_k²)`.
    pub fn total_weight(&self) -> f64 {
        self.weights().map(|(_, m)| m).sum()
    }

    /// `b = β - Σ c_k x_k`, so that `F(z) = z + b - Σ m_k/(z - x_k)`.
    pub fn drift(&self) -> f64 {
        self.beta - self.atoms.iter().map(|&(x, c)| c * x).sum::<f64>()
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let b = self.drift();
        z + b - self.weights().map(|(x, m)| m / (z - x)).sum::<Complex>()
    }

    pub fn eval_deriv(&self, z: Complex) -> (Complex, Complex) {
        let b = self.drift();
        let mut value = z + b;
        let mut deriv = Complex::new(1.0, 0.0);
        for (x, m) in self.weights() {
            let q = (z - x).inv();
            value -= m * q;
            deriv += m * q * q;
        }
        (value, deriv)
    }

    /// `F'(x)` on the real line away from the atoms.
    pub fn real_derivative(&self, x: f64) -> f64 {
        1.0 + self.weights().map(|(a, m)| m / ((x - a) * (x - a))).sum::<f64>()
    }

    /// Coefficients of `-1/F(-1/w) = w + a₂ w² + a₃ w³ + …`.
    pub fn taylor_at_infinity(&self) -> (f64, f64) {
        let b = self.drift();
        (b, b * b + self.total_weight())
    }

    pub fn parabolicity(&self) -> Parabolicity {
        let (a2, a3) = self.taylor_at_infinity();
        if a2.abs() > DRIFT_TOL {
            Parabolicity::Single
        } else if a3 > 0.0 {
            Parabolicity::Double
        } else {
            Parabolicity::Identity
        }
    }
}

impl HalfPlaneMap for HalfPlaneInner {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        if !(z.im > 0.0) {
            bail!(Domain, "{z} is not in the upper half-plane");
        }
        Ok(HalfPlaneInner::eval_deriv(self, z))
    }
}

/// Value and derivative at a point of the upper half-plane.
pub fn hp_eval_deriv(f: &HalfPlaneInner, z: HalfPlanePoint) -> (Complex, Complex) {
    f.eval_deriv(z.value())
}

/// `(w + b - z) Π (x_j - w) + Σ_k m_k Π_{j≠k} (x_j - w)`, ascending.
fn preimage_polynomial(f: &HalfPlaneInner, z: Complex) -> Vec<Complex> {
    let factor = |x: f64| alloc::vec![Complex::new(x, 0.0), Complex::new(-1.0, 0.0)];
    let weights: Vec<(f64, f64)> = f.weights().collect();
    let mut p = alloc::vec![Complex::new(f.drift(), 0.0) - z, Complex::new(1.0, 0.0)];
    for &(x, _) in &weights {
        p = poly::mul(&p, &factor(x));
    }
    for (k, &(_, m)) in weights.iter().enumerate() {
        let mut q = alloc::vec![Complex::new(m, 0.0)];
        for (j, &(x, _)) in weights.iter().enumerate() {
            if j != k {
                q = poly::mul(&q, &factor(x));
            }
        }
        for (i, c) in q.into_iter().enumerate() {
            p[i] += c;
        }
    }
    p
}

fn polish(f: &HalfPlaneInner, z: Complex, mut w: Complex) -> Complex {
    for _ in 0..60 {
        let (v, d) = f.eval_deriv(w);
        let step = (v - z) / d;
        let next = w - step;
        // never step across the real axis
        w = if next.im > 0.0 { next } else { Complex::new(next.re, 0.5 * w.im) };
        if step.norm() <= 1e-16 * w.norm().max(w.im) {
            break;
        }
    }
    w
}

/// All solutions of `F(w) = z`, ordered by real part, as raw values.
pub fn hp_raw_preimages(f: &HalfPlaneInner, z: Complex) -> Result<Vec<Complex>> {
    if !(z.im > 0.0) {
        bail!(Domain, "{z} is not in the upper half-plane");
    }
    let mut roots: Vec<Complex> = if f.atoms.is_empty() {
        alloc::vec![z - f.beta]
    } else {
        poly::roots(&preimage_polynomial(f, z))?
            .into_iter()
            .map(|w| polish(f, z, if w.im > 0.0 { w } else { Complex::new(w.re, z.im * 1e-3) }))
            .collect()
    };
    if roots.iter().any(|w| !(w.im > 0.0)) {
        bail!(Numerical, "a preimage of {z} left the upper half-plane");
    }
    let scale = z.norm().max(1.0);
    for &w in &roots {
        let residual = (f.eval(w) - z).norm();
        if !(residual < 1e-12 * scale) {
            bail!(Numerical, "preimage {w} of {z} has residual {residual:e}");
        }
    }
    let sum: f64 = roots.iter().map(|w| w.im).sum();
    if !((sum - z.im).abs() <= IM_SUM_TOL * z.im) {
        bail!(Numerical, "preimages of {z} carry height {sum}, expected {}", z.im);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// The `k + 1` preimages of `z`, checked against the identity
/// `Σ Im w = Im z`.
pub fn hp_preimages(f: &HalfPlaneInner, z: HalfPlanePoint) -> Result<Vec<HalfPlanePoint>> {
    hp_raw_preimages(f, z.value())?.into_iter().map(HalfPlanePoint::new).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parabolicity {
    /// `a₂ ≠ 0`: finite height.
    Single,
    /// `a₂ = 0, a₃ ≠ 0`: infinite height.
    Double,
    /// `F(z) = z`.
    Identity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Height {
    Finite,
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightReport {
    /// Verdict of the iterate test; a heuristic.
    pub height: Height,
    /// From the expansion at infinity; exact for these models.
    pub taylor: Parabolicity,
    /// `Im F^{n/10}(z₀)`.
    pub im_early: f64,
    /// `Im F^n(z₀)`.
    pub im_final: f64,
}

/// Iterates `n_iters ≥ 1000` times and calls the height infinite when the
/// imaginary part at least doubles between iterate `n/10` and iterate `n`.
pub fn height_classify(f: &HalfPlaneInner, z0: HalfPlanePoint, n_iters: usize) -> Result<HeightReport> {
    if n_iters < 1000 {
        bail!(Precondition, "height classification needs at least 1000 iterates, got {n_iters}");
    }
    let mut z = z0.value();
    let mut im_early = z.im;
    for k in 1..=n_iters {
        z = f.eval(z);
        if !z.is_finite() {
            bail!(Numerical, "orbit of {} overflowed at iterate {k}", z0.value());
        }
        if k == n_iters / 10 {
            im_early = z.im;
        }
    }
    let height = if z.im >= 2.0 * im_early { Height::Infinite } else { Height::Finite };
    if height == Height::Infinite && f.parabolicity() == Parabolicity::Single {
        log::warn!("iterate test says infinite height for a singly parabolic map");
    }
    Ok(HeightReport { height, taylor: f.parabolicity(), im_early, im_final: z.im })
}

/// `∫_ℝ log F'(x) dx` through `x = tan φ`, split at the atoms.
pub fn chi_ell(f: &HalfPlaneInner, tol: f64) -> Result<Quadrature> {
    if !(tol > 0.0) {
        bail!(Precondition, "tolerance must be positive");
    }
    let mut breaks: Vec<f64> = alloc::vec![-FRAC_PI_2];
    breaks.extend(f.atoms.iter().map(|&(x, _)| x.atan()));
    breaks.push(FRAC_PI_2);
    let weights: Vec<(f64, f64)> = f.weights().collect();
    let integrand = |phi: f64| {
        let x = phi.tan();
        let s: f64 = weights.iter().map(|&(a, m)| m / ((x - a) * (x - a))).sum();
        s.ln_1p() * (1.0 + x * x)
    };
    let q = quad::integrate_pieces(integrand, &breaks, tol, 4000);
    if !q.converged || q.error > tol {
        bail!(Numerical, "χ_ℓ quadrature did not reach {tol:e}: estimate {} ± {:e}", q.value, q.error);
    }
    Ok(q)
}

/// Smallest `F'(x)` over `points` evenly spaced samples of `[lo, hi]`.
pub fn real_derivative_min(f: &HalfPlaneInner, lo: f64, hi: f64, points: usize) -> Result<f64> {
    if !(lo < hi) || points < 2 {
        bail!(Precondition, "need lo < hi and at least two points");
    }
    Ok((0..points)
        .map(|k| f.real_derivative(lo + (hi - lo) * k as f64 / (points - 1) as f64))
        .fold(f64::INFINITY, f64::min))
}

/// A closed interval of the real line; empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn len(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripPoint {
    pub point: Complex,
    pub generation: usize,
}

impl StripPoint {
    /// `-log Im w`.
    pub fn level(&self) -> f64 {
        -self.point.im.ln()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StripProfile {
    pub base: Complex,
    pub interval: Interval,
    pub cutoff: f64,
    /// Points in `I × [e^{-R}, 1]`, in enumeration order.
    pub counted: Vec<StripPoint>,
    /// `-log Im w` of every node that was kept, counted or not.
    pub levels: Vec<f64>,
    /// Nodes whose subtrees were skipped by the far-field bound.
    pub far_pruned: usize,
    pub generations: usize,
    sorted: Vec<f64>,
}

impl StripProfile {
    fn finish(mut self) -> Self {
        self.sorted = self.counted.iter().map(StripPoint::level).collect();
        self.sorted.sort_by(f64::total_cmp);
        self
    }

    fn check(&self, s: f64) -> Result<()> {
        if !(s >= 0.0) || s > self.cutoff {
            return Err(Error::OutOfCutoff { requested: s, cutoff: self.cutoff });
        }
        Ok(())
    }

    /// `N_I(z, S)` for `S ≤ R`.
    pub fn count(&self, s: f64) -> Result<usize> {
        self.check(s)?;
        Ok(self.sorted.partition_point(|&l| l <= s))
    }

    /// `(1/S) ∫_0^S N_I(z, t) e^{-t} dt`, exactly: a point at level `l`
    /// contributes `e^{-l} - e^{-S}`.
    pub fn cesaro(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        if s == 0.0 {
            bail!(Domain, "Cesàro average needs a positive cutoff");
        }
        let tail = (-s).exp();
        let n = self.sorted.partition_point(|&l| l <= s);
        Ok(self.sorted[..n].iter().map(|&l| (-l).exp() - tail).sum::<f64>() / s)
    }

    /// `N_I(z, S) e^{-S}`.
    pub fn normalized_count(&self, s: f64) -> Result<f64> {
        Ok(self.count(s)? as f64 * (-s).exp())
    }
}

/// Preimages of a batch of parents, in parent order.
pub trait HalfPlaneExpander {
    fn expand(&self, f: &HalfPlaneInner, parents: &[Complex]) -> Result<Vec<Vec<Complex>>>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SequentialHalfPlane;

impl HalfPlaneExpander for SequentialHalfPlane {
    fn expand(&self, f: &HalfPlaneInner, parents: &[Complex]) -> Result<Vec<Vec<Complex>>> {
        parents.iter().map(|&z| hp_raw_preimages(f, z)).collect()
    }
}

/// Whether no descendant of `w` can land in `I × [floor, ∞)`.
///
/// With zero drift a preimage `u` of `w` satisfies
/// `u - w = Σ m_k/(u - x_k)`. Right of every atom this has positive real
/// part, so such children sit further right than `w`; any other child is
/// at distance at least `Re w - max x_k` from `w`, and by Cauchy–Schwarz
/// its height is at most `Im w / (1 + (Re w - max x_k)²/M)`. The mirror
/// argument covers the left side.
fn beyond_far_field(f: &HalfPlaneInner, w: Complex, interval: Interval, floor: f64) -> bool {
    let (Some(first), Some(last)) = (f.atoms.first(), f.atoms.last()) else {
        return false;
    };
    let m = f.total_weight();
    let shrink = |gap: f64| w.im / (1.0 + gap * gap / m) < floor;
    let right = w.re > last.0 && (interval.is_empty() || w.re > interval.hi) && shrink(w.re - last.0);
    let left = w.re < first.0 && (interval.is_empty() || w.re < interval.lo) && shrink(first.0 - w.re);
    right || left
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripOptions {
    /// Maximum number of kept nodes.
    pub budget: usize,
}

impl Default for StripOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_STRIP_BUDGET }
    }
}

pub fn enumerate_strip(f: &HalfPlaneInner, z: HalfPlanePoint, interval: Interval, r: f64) -> Result<StripProfile> {
    enumerate_strip_with(f, z, interval, r, StripOptions::default(), &SequentialHalfPlane)
}

/// Counts repeated preimages of `z` in `I × [e^{-R}, 1]`.
///
/// A node is dropped with its subtree when `Im w < e^{-R}`, which is sound
/// since heights only decrease along the tree, or when the far-field bound
/// shows that its subtree never returns.
pub fn enumerate_strip_with(
    f: &HalfPlaneInner,
    z: HalfPlanePoint,
    interval: Interval,
    r: f64,
    opts: StripOptions,
    expander: &impl HalfPlaneExpander,
) -> Result<StripProfile> {
    if f.parabolicity() != Parabolicity::Double {
        bail!(Precondition, "strip counting needs a doubly parabolic map (infinite height)");
    }
    if !(r >= 0.0 && r.is_finite()) {
        bail!(Precondition, "cutoff must be finite and nonnegative, got {r}");
    }
    let floor = (-r).exp();
    let base = z.value();
    let mut profile = StripProfile {
        base,
        interval,
        cutoff: r,
        counted: Vec::new(),
        levels: Vec::new(),
        far_pruned: 0,
        generations: 0,
        sorted: Vec::new(),
    };
    if base.im < floor {
        return Ok(profile.finish());
    }
    let mut level = alloc::vec![base];
    let mut generation = 0;
    loop {
        let mut parents = Vec::with_capacity(level.len());
        for &w in &level {
            profile.levels.push(-w.im.ln());
            if w.im <= 1.0 && interval.contains(w.re) {
                profile.counted.push(StripPoint { point: w, generation });
            }
            if beyond_far_field(f, w, interval, floor) {
                profile.far_pruned += 1;
            } else {
                parents.push(w);
            }
        }
        if profile.levels.len() > opts.budget {
            return Err(Error::Budget { budget: opts.budget, completed_depth: generation });
        }
        if parents.is_empty() {
            break;
        }
        let children = expander.expand(f, &parents)?;
        level = children.into_iter().flatten().filter(|w| w.im >= floor).collect();
        generation += 1;
        if level.is_empty() {
            break;
        }
    }
    profile.generations = generation + 1;
    Ok(profile.finish())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripRow {
    pub r: f64,
    pub count: usize,
    pub cesaro: f64,
    pub normalized: f64,
    /// `|I| / χ_ℓ`.
    pub target: f64,
    /// `Im z · |I| / χ_ℓ`, the observed limit of `N_I(z, R) e^{-R}`.
    pub scaled_target: f64,
}

pub fn strip_counting_report(profile: &StripProfile, chi: f64, grid: &[f64]) -> Result<Vec<StripRow>> {
    if !(chi > 0.0) {
        bail!(Precondition, "χ_ℓ must be positive, got {chi}");
    }
    let target = profile.interval.len() / chi;
    let scaled_target = profile.base.im * target;
    grid.iter()
        .map(|&r| {
            Ok(StripRow {
                r,
                count: profile.count(r)?,
                cesaro: profile.cesaro(r)?,
                normalized: profile.normalized_count(r)?,
                target,
                scaled_target,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn hp(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(c(re, im)).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let f = HalfPlaneInner::z_minus_inverse(0.0);
        let (v, d) = hp_eval_deriv(&f, hp(0.0, 1.0));
        assert!((v - c(0.0, 2.0)).norm() < 1e-15 && d.norm() < 1e-15);
        let (v, d) = hp_eval_deriv(&f, hp(0.0, 2.0));
        assert!((v - c(0.0, 2.5)).norm() < 1e-15 && (d - c(0.75, 0.0)).norm() < 1e-15);
        let g = HalfPlaneInner::new(1.5, Vec::new()).unwrap();
        let (v, d) = hp_eval_deriv(&g, hp(0.3, 0.2));
        assert_eq!((v, d), (c(1.8, 0.2), c(1.0, 0.0)));
    }

    #[test]
    fn atom_form_matches_herglotz_sum() {
        let f = HalfPlaneInner::new(0.4, alloc::vec![(1.0, 0.5), (-2.0, 0.25)]).unwrap();
        let z = c(0.3, 0.7);
        let direct = z + 0.4 + 0.5 * (1.0 + z) / (1.0 - z) + 0.25 * (1.0 - 2.0 * z) / (-2.0 - z);
        assert!((f.eval(z) - direct).norm() < 1e-14);
        let h = 1e-6;
        let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
        assert!((fd - f.eval_deriv(z).1).norm() < 1e-8 * f.eval_deriv(z).1.norm());
    }

    #[test]
    fn duplicate_atoms_merge() {
        let f = HalfPlaneInner::new(0.0, alloc::vec![(0.0, 0.5), (0.0, 0.5)]).unwrap();
        assert_eq!(f, HalfPlaneInner::z_minus_inverse(0.0));
        assert!(HalfPlaneInner::new(0.0, alloc::vec![(0.0, -1.0)]).is_err());
    }

    #[test]
    fn preimage_examples() {
        let f = HalfPlaneInner::z_minus_inverse(0.0);
        let w = hp_raw_preimages(&f, c(0.0, 2.5)).unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.iter().any(|p| (p - c(0.0, 2.0)).norm() < 1e-14));
        assert!(w.iter().any(|p| (p - c(0.0, 0.5)).norm() < 1e-14));
        // w² - 0.5i w - 1 = 0: w = ±√(15/16) + i/4
        let w = hp_raw_preimages(&f, c(0.0, 0.5)).unwrap();
        let s = (15.0f64 / 16.0).sqrt();
        assert!((w[0] - c(-s, 0.25)).norm() < 1e-14 && (w[1] - c(s, 0.25)).norm() < 1e-14, "{w:?}");
        let g = HalfPlaneInner::new(2.0, Vec::new()).unwrap();
        assert_eq!(hp_raw_preimages(&g, c(1.0, 1.0)).unwrap(), alloc::vec![c(-1.0, 1.0)]);
    }

    #[test]
    fn chi_ell_examples() {
        let f = HalfPlaneInner::z_minus_inverse(0.0);
        assert!((chi_ell(&f, 1e-9).unwrap().value - 2.0 * PI).abs() < 1e-6);
        // x = 2u turns ∫ log(1 + 4/x²) dx into 2 ∫ log(1 + 1/u²) du
        let g = HalfPlaneInner::new(0.0, alloc::vec![(0.0, 4.0)]).unwrap();
        assert!((chi_ell(&g, 1e-9).unwrap().value - 4.0 * PI).abs() < 1e-6);
        let t = HalfPlaneInner::new(0.7, Vec::new()).unwrap();
        assert_eq!(chi_ell(&t, 1e-9).unwrap().value, 0.0);
    }

    #[test]
    fn chi_ell_off_center_atoms() {
        // each atom contributes 2π √m independently of its position when alone
        let f = HalfPlaneInner::new(0.0, alloc::vec![(1.0, 1.0)]).unwrap();
        assert!((chi_ell(&f, 1e-9).unwrap().value - 2.0 * PI * 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn height_examples() {
        let f = HalfPlaneInner::z_minus_inverse(0.0);
        let r = height_classify(&f, hp(0.0, 0.7), 1000).unwrap();
        assert_eq!((r.height, r.taylor), (Height::Infinite, Parabolicity::Double));
        let g = HalfPlaneInner::z_minus_inverse(3.0);
        let r = height_classify(&g, hp(0.0, 0.7), 1000).unwrap();
        assert_eq!((r.height, r.taylor), (Height::Finite, Parabolicity::Single));
        let t = HalfPlaneInner::new(1.0, Vec::new()).unwrap();
        assert_eq!(height_classify(&t, hp(0.0, 0.7), 1000).unwrap().height, Height::Finite);
        assert!(height_classify(&f, hp(0.0, 0.7), 999).is_err());
    }

    #[test]
    fn strip_small_cutoffs() {
        let f = HalfPlaneInner::z_minus_inverse(0.0);
        let i = Interval::new(-1.0, 1.0);
        let p = enumerate_strip(&f, hp(0.0, 0.5), i, 0.0).unwrap();
        assert_eq!(p.count(0.0).unwrap(), 0);
        let empty = enumerate_strip(&f, hp(0.0, 0.5), Interval::new(1.0, -1.0), 2.0).unwrap();
        assert_eq!(empty.count(2.0).unwrap(), 0);
        assert!(empty.levels.len() > 1);
        assert!(enumerate_strip(&HalfPlaneInner::z_minus_inverse(3.0), hp(0.0, 0.5), i, 2.0).is_err());
    }

    /// Plain recursion with only the height cutoff, up to a fixed depth.
    fn brute_count(f: &HalfPlaneInner, w: Complex, i: Interval, floor: f64, depth: usize) -> usize {
        if w.im < floor {
            return 0;
        }
        let here = usize::from(w.im <= 1.0 && i.contains(w.re));
        if depth == 0 {
            return here;
        }
        here + hp_raw_preimages(f, w)
            .unwrap()
            .into_iter()
            .map(|u| brute_count(f, u, i, floor, depth - 1))
            .sum::<usize>()
    }

    #[test]
    fn far_field_pruning_loses_nothing() {
        let f = HalfPlaneInner::z_minus_inverse(0.0);
        let i = Interval::new(-1.0, 1.0);
        let r = 2.5;
        let p = enumerate_strip(&f, hp(0.0, 0.5), i, r).unwrap();
        assert!(p.far_pruned > 0);
        let brute = brute_count(&f, c(0.0, 0.5), i, (-r).exp(), p.generations + 40);
        assert_eq!(p.count(r).unwrap(), brute);
        assert!(p.counted.iter().all(|s| i.contains(s.point.re) && s.point.im <= 1.0 && s.level() <= r));
    }

    #[test]
    fn cesaro_is_exact() {
        let f = HalfPlaneInner::z_minus_inverse(0.0);
        let p = enumerate_strip(&f, hp(0.0, 0.5), Interval::new(-1.0, 1.0), 4.0).unwrap();
        let breaks: Vec<f64> =
            core::iter::once(0.0).chain(p.sorted.iter().copied()).chain(core::iter::once(4.0)).collect();
        let q = quad::integrate_pieces(|s| p.count(s.min(4.0)).unwrap() as f64 * (-s).exp(), &breaks, 1e-12, 200);
        assert!((p.cesaro(4.0).unwrap() - q.value / 4.0).abs() < 1e-10);
    }

    #[test]
    fn report_target() {
        let f = HalfPlaneInner::z_minus_inverse(0.0);
        let p = enumerate_strip(&f, hp(0.0, 0.5), Interval::new(-1.0, 1.0), 3.0).unwrap();
        let rows = strip_counting_report(&p, 2.0 * PI, &[1.0, 3.0]).unwrap();
        assert!((rows[0].target - 1.0 / PI).abs() < 1e-15);
        assert!((rows[1].scaled_target - 0.5 / PI).abs() < 1e-15);
        assert!(strip_counting_report(&p, 0.0, &[1.0]).is_err());
    }

    #[test]
    fn derivative_floor_on_compact_intervals() {
        let f = HalfPlaneInner::new(0.0, alloc::vec![(-1.0, 0.3), (2.0, 0.5)]).unwrap();
        let coarse = real_derivative_min(&f, -5.0, 5.0, 1001).unwrap();
        let fine = real_derivative_min(&f, -5.0, 5.0, 4001).unwrap();
        assert!(coarse > 1.0 && (coarse - fine).abs() < 1e-3);
    }
}
