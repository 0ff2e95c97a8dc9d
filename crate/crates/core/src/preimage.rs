//! Exact preimages under finite Blaschke products and the breadth-first tree
//! of repeated preimages inside a hyperbolic ball.

use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::hypgeo::DiskPoint;
use crate::innerfn::InnerModel;
use crate::math::{canonical_cmp, radius_from_modulus};
use crate::Complex;

/// Aberth roots closer than this are treated as one multiple root.
const CLUSTER_TOL: f64 = 1e-7;
/// Points of one generation closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: usize = 50_000_000;

/// The `d` solutions of `F(w) = z` with multiplicity, sorted canonically.
pub fn preimages_of(f: &InnerModel, z: DiskPoint) -> Result<Vec<DiskPoint>> {
    if !f.is_finite_blaschke() {
        bail!(Precondition, "preimages need a finite Blaschke product");
    }
    if f.degree() == 0 {
        bail!(Precondition, "constant model has no preimages");
    }
    raw_preimages(f, z.value())?.into_iter().map(DiskPoint::new).collect()
}

/// Like [`preimages_of`] on a raw value.
pub fn raw_preimages(f: &InnerModel, z: Complex) -> Result<Vec<Complex>> {
    let (p, q) = f.numerator_denominator();
    let eqn = crate::poly::sub(&p, &crate::poly::scale(&q, z));
    let mut roots = crate::poly::roots(&eqn)
        .map_err(|e| Error::Numerical(alloc::format!("{e}; model:\n{}z = {z}", f.to_text())))?;
    for w in roots.iter_mut() {
        *w = newton_polish(f, *w, z);
    }
    merge_clusters(&mut roots);
    for &w in &roots {
        let resid = (f.eval_deriv_raw(w)?.0 - z).norm();
        if !(w.norm() < 1.0) || !(resid < 1e-12) {
            bail!(Numerical, "preimage {w} of {z} failed (residual {resid:e}); model:\n{}", f.to_text());
        }
    }
    roots.sort_by(canonical_cmp);
    Ok(roots)
}

fn newton_polish(f: &InnerModel, mut w: Complex, z: Complex) -> Complex {
    let Ok((v, _)) = f.eval_deriv_raw(w) else { return w };
    let mut resid = (v - z).norm();
    for _ in 0..8 {
        if resid == 0.0 {
            break;
        }
        let Ok((v, dv)) = f.eval_deriv_raw(w) else { break };
        if dv.norm() == 0.0 {
            break;
        }
        let cand = w - (v - z) / dv;
        let Ok((cv, _)) = f.eval_deriv_raw(cand) else { break };
        let cr = (cv - z).norm();
        if !(cr < resid) {
            break;
        }
        w = cand;
        resid = cr;
    }
    w
}

/// Replaces each cluster of nearly equal roots by its centroid, repeated
/// with the cluster's size.
fn merge_clusters(roots: &mut [Complex]) {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() < CLUSTER_TOL {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == b {
                        *l = a;
                    }
                }
            }
        }
    }
    for c in 0..n {
        let members: Vec<usize> = (0..n).filter(|&k| label[k] == c).collect();
        if members.len() > 1 {
            let centroid = members.iter().map(|&k| roots[k]).sum::<Complex>() / members.len() as f64;
            for k in members {
                roots[k] = centroid;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreimageNode {
    pub point: Complex,
    pub generation: usize,
    /// `log(1/|w|)`.
    pub height: f64,
    /// `d(0, w)`.
    pub radius: f64,
    /// Index of the parent in [`PreimageTree::nodes`]; `None` for the base.
    pub parent: Option<usize>,
    /// Number of coincident solutions merged into this node.
    pub multiplicity: u32,
}

impl PreimageNode {
    fn new(point: Complex, generation: usize, parent: Option<usize>) -> Self {
        let r = point.norm();
        Self { point, generation, height: -r.ln(), radius: radius_from_modulus(r), parent, multiplicity: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreimageTree {
    pub base: Complex,
    pub model: InnerModel,
    pub cutoff: f64,
    /// Nodes in generation order; inside a generation by parent, then
    /// canonically.
    pub nodes: Vec<PreimageNode>,
    /// `generation_starts[n]..generation_starts[n + 1]` are the nodes of
    /// generation `n`.
    pub generation_starts: Vec<usize>,
    /// Whether generation `n` holds every solution of `F^n(w) = z`.
    pub complete: Vec<bool>,
}

impl PreimageTree {
    pub fn generations(&self) -> usize {
        self.generation_starts.len().saturating_sub(1)
    }

    pub fn generation(&self, n: usize) -> &[PreimageNode] {
        if n + 1 >= self.generation_starts.len() {
            return &[];
        }
        &self.nodes[self.generation_starts[n]..self.generation_starts[n + 1]]
    }

    /// Retained radii, sorted ascending.
    pub fn radii(&self) -> Vec<f64> {
        let mut r: Vec<f64> = self.nodes.iter().map(|n| n.radius).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    pub fn max_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for node in &self.nodes {
            if let Some(p) = node.parent {
                let img = self.model.eval_deriv_raw(node.point).map(|v| v.0).unwrap_or(Complex::new(f64::NAN, 0.0));
                worst = worst.max((img - self.nodes[p].point).norm());
            }
        }
        worst
    }
}

/// Computes the preimages of a batch of parents. Implementations may work
/// in parallel but must return results in parent order.
pub trait Expander {
    fn expand(&self, model: &InnerModel, parents: &[Complex]) -> Result<Vec<Vec<Complex>>>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Expander for Sequential {
    fn expand(&self, model: &InnerModel, parents: &[Complex]) -> Result<Vec<Vec<Complex>>> {
        parents.iter().map(|&z| raw_preimages(model, z)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnumerateOptions {
    /// Maximum number of retained nodes.
    pub budget: usize,
    /// Last generation to expand.
    pub max_generation: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, max_generation: usize::MAX }
    }
}

/// All repeated preimages `w` of `z` with `d(0, w) ≤ radius`.
pub fn enumerate_ball(f: &InnerModel, z: DiskPoint, radius: f64) -> Result<PreimageTree> {
    enumerate_ball_with(f, z, radius, EnumerateOptions::default(), &Sequential)
}

pub fn enumerate_ball_with(
    f: &InnerModel,
    z: DiskPoint,
    radius: f64,
    opts: EnumerateOptions,
    expander: &impl Expander,
) -> Result<PreimageTree> {
    f.require_centered_blaschke()?;
    let z = z.value();
    if z.norm() == 0.0 {
        bail!(Precondition, "base point must not be the origin");
    }
    if !(radius > 0.0) {
        bail!(Precondition, "cutoff radius must be positive, got {radius}");
    }
    let mut tree = PreimageTree {
        base: z,
        model: f.clone(),
        cutoff: radius,
        nodes: Vec::new(),
        generation_starts: alloc::vec![0],
        complete: Vec::new(),
    };
    let root = PreimageNode::new(z, 0, None);
    if root.radius > radius {
        tree.generation_starts.push(0);
        tree.complete.push(false);
        return Ok(tree);
    }
    tree.nodes.push(root);
    tree.generation_starts.push(1);
    tree.complete.push(true);

    let mut generation = 0;
    loop {
        if generation >= opts.max_generation {
            break;
        }
        let start = tree.generation_starts[generation];
        let end = tree.generation_starts[generation + 1];
        if start == end {
            break;
        }
        let parents: Vec<Complex> = tree.nodes[start..end].iter().map(|n| n.point).collect();
        let children = expander.expand(f, &parents)?;
        let mut fresh: Vec<PreimageNode> = Vec::new();
        let mut full = tree.complete[generation];
        for (k, kids) in children.into_iter().enumerate() {
            let parent = start + k;
            let mult = tree.nodes[parent].multiplicity;
            for w in kids {
                let mut node = PreimageNode::new(w, generation + 1, Some(parent));
                node.multiplicity = mult;
                if node.radius <= radius {
                    fresh.push(node);
                } else {
                    full = false;
                }
            }
            if tree.nodes.len() + fresh.len() > opts.budget {
                return Err(Error::Budget { budget: opts.budget, completed_depth: generation });
            }
        }
        dedup_generation(&mut fresh);
        if fresh.is_empty() {
            break;
        }
        tree.nodes.extend(fresh);
        tree.generation_starts.push(tree.nodes.len());
        tree.complete.push(full);
        generation += 1;
    }
    Ok(tree)
}

/// Merges points closer than [`DEDUP_TOL`], keeping the first occurrence
/// and adding multiplicities.
fn dedup_generation(nodes: &mut Vec<PreimageNode>) {
    if nodes.len() < 2 {
        return;
    }
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| nodes[a].point.re.total_cmp(&nodes[b].point.re).then(a.cmp(&b)));
    let mut absorbed_into: Vec<Option<usize>> = alloc::vec![None; nodes.len()];
    for (pos, &i) in order.iter().enumerate() {
        if absorbed_into[i].is_some() {
            continue;
        }
        for &j in &order[pos + 1..] {
            if nodes[j].point.re - nodes[i].point.re > DEDUP_TOL {
                break;
            }
            if absorbed_into[j].is_none() && (nodes[j].point - nodes[i].point).norm() < DEDUP_TOL {
                absorbed_into[j] = Some(i);
            }
        }
    }
    if absorbed_into.iter().all(Option::is_none) {
        return;
    }
    let mut groups: Vec<(usize, usize)> = (0..nodes.len()).map(|i| (root_of(&absorbed_into, i), i)).collect();
    groups.sort();
    let mut keep = alloc::vec![true; nodes.len()];
    let mut extra = alloc::vec![0u32; nodes.len()];
    let mut k = 0;
    while k < groups.len() {
        let g = groups[k].0;
        let first = groups[k].1;
        let mut m = 0;
        while k < groups.len() && groups[k].0 == g {
            if groups[k].1 != first {
                keep[groups[k].1] = false;
                m += nodes[groups[k].1].multiplicity;
            }
            k += 1;
        }
        extra[first] = m;
        if m > 0 {
            log::debug!("merged coincident preimages at {}", nodes[first].point);
        }
    }
    let mut idx = 0;
    nodes.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
    let mut kept = 0;
    for (i, &k) in keep.iter().enumerate() {
        if k {
            nodes[kept].multiplicity += extra[i];
            kept += 1;
        }
    }
}

fn root_of(parent: &[Option<usize>], mut i: usize) -> usize {
    while let Some(j) = parent[i] {
        i = j;
    }
    i
}

/// `|Σ_{gen n} height − log(1/|z|)|` over a complete generation.
pub fn verify_sum_of_heights(tree: &PreimageTree, n: usize) -> Result<f64> {
    if n >= tree.complete.len() || !tree.complete[n] {
        bail!(Precondition, "generation {n} is not fully expanded");
    }
    let total: f64 = tree.generation(n).iter().map(|w| w.height * w.multiplicity as f64).sum();
    Ok((total - (-tree.base.norm().ln())).abs())
}
