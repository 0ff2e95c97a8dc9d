//! Backward orbits, the solenoid sampler and transverse weights.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{bail, Error, Result};
use crate::hypgeo::DiskPoint;
use crate::innerfn::{BoundaryPoint, InnerModel};
use crate::logpolar::{self, LogPolar};
use crate::math::wrap_pi;
use crate::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitKind {
    Interior,
    Boundary,
}

/// A backward orbit `z_0, z_{-1}, …` with `F(z_{-n-1}) = z_{-n}`, stored in
/// log-polar form. Boundary orbits have height zero.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseOrbit {
    model: InnerModel,
    kind: OrbitKind,
    points: Vec<LogPolar>,
    branches: Vec<usize>,
}

impl InverseOrbit {
    pub fn interior(model: InnerModel, z0: DiskPoint) -> Result<Self> {
        require_blaschke(&model)?;
        if z0.value().norm() == 0.0 {
            bail!(Precondition, "the constant orbit at the origin is excluded");
        }
        Ok(Self {
            model,
            kind: OrbitKind::Interior,
            points: alloc::vec![LogPolar::from_complex(z0.value())],
            branches: Vec::new(),
        })
    }

    pub fn boundary(model: InnerModel, zeta: BoundaryPoint) -> Result<Self> {
        require_blaschke(&model)?;
        Ok(Self {
            model,
            kind: OrbitKind::Boundary,
            points: alloc::vec![LogPolar::new(zeta.angle(), 0.0)],
            branches: Vec::new(),
        })
    }

    pub fn model(&self) -> &InnerModel {
        &self.model
    }

    pub fn kind(&self) -> OrbitKind {
        self.kind
    }

    /// Number of backward steps taken.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.points.len() == 1
    }

    /// `z_{-n}`.
    pub fn point(&self, n: usize) -> LogPolar {
        self.points[n]
    }

    pub fn points(&self) -> &[LogPolar] {
        &self.points
    }

    /// Index into the angle-sorted preimage list chosen at each step.
    pub fn branches(&self) -> &[usize] {
        &self.branches
    }

    /// Preimages of the deepest point, sorted by angle.
    pub fn candidates(&self) -> Result<Vec<LogPolar>> {
        let last = *self.points.last().expect("nonempty");
        match self.kind {
            OrbitKind::Interior => logpolar::preimages(&self.model, last),
            OrbitKind::Boundary => Ok(logpolar::boundary_preimages(&self.model, last.angle)?
                .into_iter()
                .map(|a| LogPolar::new(a, 0.0))
                .collect()),
        }
    }

    pub fn extend(&mut self, branch: usize) -> Result<()> {
        let c = self.candidates()?;
        let Some(&next) = c.get(branch) else {
            bail!(Precondition, "branch {branch} out of range for {} preimages", c.len());
        };
        self.points.push(next);
        self.branches.push(branch);
        Ok(())
    }

    /// Takes `n` more steps, letting `choose` pick among the candidates.
    pub fn extend_with(&mut self, n: usize, mut choose: impl FnMut(&[LogPolar]) -> usize) -> Result<()> {
        for _ in 0..n {
            let c = self.candidates()?;
            let k = choose(&c);
            let Some(&next) = c.get(k) else {
                bail!(Precondition, "branch {k} out of range for {} preimages", c.len());
            };
            self.points.push(next);
            self.branches.push(k);
        }
        Ok(())
    }

    /// `F^{n-k}` of the point with log-polar offset `offset` from `z_{-n}`.
    pub fn push_offset(&self, offset: Complex, n: usize, k: usize) -> Result<LogPolar> {
        if n > self.len() {
            bail!(Precondition, "depth {n} exceeds orbit length {}", self.len());
        }
        self.push_point(offset.re, self.points[n].height + offset.im, n, k)
    }

    /// `F^{n-k}` of the point at angle `angle(z_{-n}) + angle_offset` and the
    /// given height. The angle is carried relative to the stored orbit, so
    /// rounding in the orbit is not amplified by the expansion of `F`;
    /// heights are carried absolutely and keep their relative precision.
    pub fn push_point(&self, mut angle_offset: f64, mut height: f64, n: usize, k: usize) -> Result<LogPolar> {
        if k > n || n > self.len() {
            bail!(Precondition, "need k ≤ n ≤ {}, got k = {k}, n = {n}", self.len());
        }
        if !(height > 0.0) {
            bail!(Domain, "point is not inside the disk");
        }
        for j in (k + 1..=n).rev() {
            let base = self.points[j];
            let off = Complex::new(angle_offset, height - base.height);
            angle_offset = logpolar::forward_offset(&self.model, base, off)?.re;
            height = logpolar::forward(&self.model, LogPolar::new(base.angle + angle_offset, height))?.height;
            if !(height > 0.0) {
                bail!(Domain, "pushed point left the disk");
            }
        }
        Ok(LogPolar::new(self.points[k].angle + angle_offset, height))
    }

    /// Largest `|F(z_{-n-1}) - z_{-n}|` over the cached points.
    pub fn max_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for pair in self.points.windows(2) {
            let img = logpolar::forward(&self.model, pair[1])?;
            let r = match self.kind {
                OrbitKind::Boundary => wrap_pi(img.angle - pair[0].angle).abs(),
                OrbitKind::Interior => (img.to_complex() - pair[0].to_complex()).norm(),
            };
            worst = worst.max(r);
        }
        Ok(worst)
    }

    pub fn to_complex(&self) -> Vec<Complex> {
        self.points.iter().map(|p| p.to_complex()).collect()
    }
}

fn require_blaschke(f: &InnerModel) -> Result<()> {
    if !f.is_finite_blaschke() || f.degree() == 0 {
        bail!(Precondition, "inverse orbits need a nonconstant finite Blaschke product");
    }
    Ok(())
}

/// Interior backward orbit of length `n`, choosing each preimage `w` of `z`
/// with probability `log(1/|w|) / log(1/|z|)`.
pub fn sample_interior_orbit(model: InnerModel, z0: DiskPoint, n: usize, rng: &mut impl Rng) -> Result<InverseOrbit> {
    let mut orbit = InverseOrbit::interior(model, z0)?;
    orbit.extend_with(n, |c| {
        let total: f64 = c.iter().map(|p| p.height).sum();
        pick(rng, c.iter().map(|p| p.height / total))
    })?;
    Ok(orbit)
}

fn pick(rng: &mut impl Rng, weights: impl Iterator<Item = f64>) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (k, w) in weights.enumerate() {
        acc += w;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

/// Samples backward boundary orbits: from `u` the preimage `u'` is taken
/// with probability `1/|F'(u')|`.
#[derive(Clone, Debug)]
pub struct SolenoidSampler {
    model: InnerModel,
    rng: ChaCha8Rng,
}

impl SolenoidSampler {
    pub fn new(model: InnerModel, seed: u64) -> Result<Self> {
        require_blaschke(&model)?;
        if !model.is_centered() || model.is_rotation() {
            bail!(Precondition, "solenoid sampling needs a centered non-rotation");
        }
        Ok(Self { model, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn model(&self) -> &InnerModel {
        &self.model
    }

    /// Preimage angles of `theta` with their transition probabilities.
    pub fn step_weights(&self, theta: f64) -> Result<Vec<(f64, f64)>> {
        logpolar::boundary_preimages(&self.model, theta)?
            .into_iter()
            .map(|a| Ok((a, 1.0 / self.model.boundary_deriv_modulus(BoundaryPoint::new(a)?))))
            .collect()
    }

    pub fn sample_from(&mut self, zeta: BoundaryPoint, n: usize) -> Result<InverseOrbit> {
        let mut orbit = InverseOrbit::boundary(self.model.clone(), zeta)?;
        for _ in 0..n {
            let last = orbit.point(orbit.len());
            let w = self.step_weights(last.angle)?;
            let k = pick(&mut self.rng, w.iter().map(|x| x.1));
            orbit.points.push(LogPolar::new(w[k].0, 0.0));
            orbit.branches.push(k);
        }
        Ok(orbit)
    }

    /// Backward orbit of length `n` from a uniformly distributed start.
    pub fn sample_backward_orbit(&mut self, n: usize) -> Result<InverseOrbit> {
        let theta = self.rng.gen::<f64>() * core::f64::consts::TAU;
        self.sample_from(BoundaryPoint::new(theta)?, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransverseWeight {
    pub point: LogPolar,
    pub parent: Option<usize>,
    pub generation: usize,
    /// `log(1/|w|)`.
    pub weight: f64,
    /// `log(1/|w|) / log(1/|z|)`.
    pub normalized: f64,
}

/// Full `d`-ary tree of preimages with their transverse weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTree {
    pub base: LogPolar,
    pub nodes: Vec<TransverseWeight>,
    generation_starts: Vec<usize>,
}

impl WeightTree {
    pub fn generation(&self, n: usize) -> &[TransverseWeight] {
        let lo = self.generation_starts[n];
        let hi = self.generation_starts.get(n + 1).copied().unwrap_or(self.nodes.len());
        &self.nodes[lo..hi]
    }

    pub fn depth(&self) -> usize {
        self.generation_starts.len() - 1
    }

    pub fn leaves(&self) -> &[TransverseWeight] {
        self.generation(self.depth())
    }

    /// Largest `|Σ children - parent|` over interior nodes.
    pub fn max_consistency_error(&self) -> f64 {
        let mut sums = alloc::vec![0.0; self.nodes.len()];
        for n in &self.nodes {
            if let Some(p) = n.parent {
                sums[p] += n.weight;
            }
        }
        let interior = self.generation_starts[self.depth()];
        (0..interior).map(|i| (sums[i] - self.nodes[i].weight).abs()).fold(0.0, f64::max)
    }
}

pub fn transverse_weights(f: &InnerModel, z: DiskPoint, depth: usize, budget: usize) -> Result<WeightTree> {
    require_blaschke(f)?;
    if z.value().norm() == 0.0 {
        bail!(Precondition, "transverse weights need a base point other than the origin");
    }
    let base = LogPolar::from_complex(z.value());
    let total = base.height;
    let mut nodes =
        alloc::vec![TransverseWeight { point: base, parent: None, generation: 0, weight: total, normalized: 1.0 }];
    let mut generation_starts = alloc::vec![0];
    for g in 1..=depth {
        let lo = generation_starts[g - 1];
        let hi = nodes.len();
        if nodes.len() + (hi - lo) * f.degree() > budget {
            return Err(Error::Budget { budget, completed_depth: g - 1 });
        }
        generation_starts.push(hi);
        for i in lo..hi {
            for w in logpolar::preimages(f, nodes[i].point)? {
                nodes.push(TransverseWeight {
                    point: w,
                    parent: Some(i),
                    generation: g,
                    weight: w.height,
                    normalized: w.height / total,
                });
            }
        }
    }
    Ok(WeightTree { base, nodes, generation_starts })
}
