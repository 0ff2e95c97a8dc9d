//! The acceptance suite: thirteen criteria, each a list of named checks with
//! pinned tolerances.
//!
//! A few checks are listed in [`KNOWN_FAILURES`]. They are evaluated and
//! reported like every other check, but callers may choose not to treat
//! them as fatal.

use std::fmt;
use std::time::{Duration, Instant};

use innerlab_core::counting::{target_constant, CountingProfile};
use innerlab_core::distortion::{distortion_at_disk, radial_distortion_integral, Quantity};
use innerlab_core::innerfn::Compose;
use innerlab_core::lamination::{
    exponential_map, geodesic_intertwining_check, shadowing_simulation, Adversary, BadTimes, InverseOrbit,
    SolenoidSampler, StratumSum, TotalMassPlan,
};
use innerlab_core::lyapunov::{chi_birkhoff, chi_jensen_oracle, chi_quadrature};
use innerlab_core::parabolic::{
    chi_ell, enumerate_strip_with, hp_raw_preimages, strip_counting_report, HalfPlaneInner, Interval, StripOptions,
};
use innerlab_core::preimage::{enumerate_ball_with, verify_sum_of_heights, EnumerateOptions};
use innerlab_core::{BoundaryPoint, Complex, DiskPoint, HalfPlanePoint, InnerModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::ExperimentConfig;
use crate::experiments;
use crate::format::ModelSpec;
use crate::parallel::{build_pool, RayonExpander};
use crate::table::render_csv;
use crate::Error;

/// `(criterion, check)` pairs that are expected to fail.
pub const KNOWN_FAILURES: &[(u32, &str)] = &[(4, "ratio_closer_at_12_than_10"), (11, "strip_cesaro_band")];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Failed checks that are not listed as known failures.
    pub fn unexpected_failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed && !KNOWN_FAILURES.contains(&(self.id, c.name))).collect()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() {
            "PASS"
        } else if self.unexpected_failures().is_empty() {
            "FAIL (known)"
        } else {
            "FAIL"
        };
        write!(f, "criterion {:>2} {:<32} {verdict} [{:.1}s]", self.id, self.name, self.elapsed.as_secs_f64())?;
        for c in &self.checks {
            write!(f, "\n    {} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { name, passed, detail: detail.into() });
    }

    fn runtime(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.add("runtime", t < limit, format!("{:.2}s < {}s", t.as_secs_f64(), limit.as_secs()));
    }
}

type Body = fn(&mut Checks, &ThreadPool) -> Result<(), Error>;

pub const CRITERIA: &[(u32, &str)] = &[
    (1, "sum of heights"),
    (2, "boundary derivative"),
    (3, "lyapunov agreement"),
    (4, "counting asymptotics"),
    (5, "power map packets"),
    (6, "a-priori bound"),
    (7, "distortion algebra"),
    (8, "angular-derivative criterion"),
    (9, "total mass"),
    (10, "exponential map and flow"),
    (11, "parabolic counting"),
    (12, "shadowing"),
    (13, "determinism"),
];

const BODIES: &[Body] = &[
    sum_of_heights,
    boundary_derivative,
    lyapunov_agreement,
    counting_asymptotics,
    power_packets,
    apriori_bound,
    distortion_algebra,
    angular_derivative_criterion,
    total_mass,
    exponential_map_flow,
    parabolic_counting,
    shadowing,
    determinism,
];

pub fn run_one(id: u32, pool: &ThreadPool) -> Option<Outcome> {
    let k = CRITERIA.iter().position(|c| c.0 == id)?;
    let start = Instant::now();
    let mut checks = Checks::default();
    if let Err(e) = BODIES[k](&mut checks, pool) {
        checks.add("completed", false, format!("error: {e}"));
    }
    Some(Outcome { id, name: CRITERIA[k].1, checks: checks.0, elapsed: start.elapsed() })
}

pub fn run_all(pool: &ThreadPool) -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|&(id, _)| run_one(id, pool)).collect()
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn deg2() -> InnerModel {
    InnerModel::blaschke(vec![c(0.0, 0.0), c(0.5, 0.0)]).expect("valid zeros")
}

fn deg3() -> InnerModel {
    InnerModel::blaschke(vec![c(0.0, 0.0), c(0.3, 0.4), c(-0.5, 0.1)]).expect("valid zeros")
}

fn random_model(rng: &mut ChaCha8Rng) -> InnerModel {
    let d = rng.gen_range(2..=6);
    InnerModel::random_centered(rng, d, 0.9)
}

fn sum_of_heights(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    const TOL: f64 = 1e-8;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    let mut incomplete = 0;
    for _ in 0..50 {
        let f = random_model(&mut rng);
        let z = Complex::from_polar(rng.gen_range(0.1..0.9), rng.gen_range(0.0..std::f64::consts::TAU));
        let opts = EnumerateOptions { max_generation: 4, ..EnumerateOptions::default() };
        let tree =
            enumerate_ball_with(&f, DiskPoint::new(z)?, f64::INFINITY, opts, &innerlab_core::preimage::Sequential)?;
        for n in 1..=4 {
            match verify_sum_of_heights(&tree, n) {
                Ok(r) => worst = worst.max(r),
                Err(_) => incomplete += 1,
            }
        }
    }
    out.add("generations_complete", incomplete == 0, format!("{incomplete} incomplete generations"));
    out.add("residual", worst < TOL, format!("max residual {worst:.3e} < {TOL:e}"));
    out.runtime(start, Duration::from_secs(30));
    Ok(())
}

/// `|F(ζ) - F((1 - h)ζ)| / h`, extrapolated from `h` and `h/10`.
fn radial_quotient(f: &InnerModel, zeta: Complex, h: f64) -> Result<f64, Error> {
    let (fz, _) = f.eval_deriv_raw(zeta)?;
    let q = |h: f64| -> Result<f64, Error> { Ok((fz - f.eval_deriv_raw(zeta * (1.0 - h))?.0).norm() / h) };
    let (coarse, fine) = (q(h)?, q(h / 10.0)?);
    Ok((10.0 * fine - coarse) / 9.0)
}

fn boundary_derivative(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    const TOL: f64 = 1e-4;
    const SLACK: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_rel: f64 = 0.0;
    let mut worst_ac = f64::NEG_INFINITY;
    for _ in 0..100 {
        let f = random_model(&mut rng);
        let zeta = BoundaryPoint::new(rng.gen_range(0.0..std::f64::consts::TAU))?;
        let exact = f.boundary_deriv_modulus(zeta);
        let fd = radial_quotient(&f, zeta.point(), 1e-4)?;
        worst_rel = worst_rel.max((fd - exact).abs() / exact);
        for r in [0.0, 0.5, 0.9, 0.99, 0.999, 0.9999] {
            let d = f.eval_deriv_raw(zeta.point() * r)?.1.norm();
            worst_ac = worst_ac.max(d - 4.0 * exact);
        }
    }
    out.add("formula_vs_difference", worst_rel < TOL, format!("max relative error {worst_rel:.3e} < {TOL:e}"));
    out.add("ahern_clark", worst_ac <= SLACK, format!("max |F'(rζ)| - 4|F'(ζ)| = {worst_ac:.3e} ≤ {SLACK:e}"));
    Ok(())
}

fn lyapunov_agreement(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    const AGREE: f64 = 1e-8;
    const POWER: f64 = 1e-10;
    const SIGMAS: f64 = 4.0;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst: f64 = 0.0;
    let mut models = Vec::new();
    for _ in 0..30 {
        let f = random_model(&mut rng);
        let q = chi_quadrature(&f, 1e-11)?.value;
        let j = chi_jensen_oracle(&f)?.value;
        worst = worst.max((q - j).abs());
        models.push((f, j));
    }
    out.add("quadrature_vs_jensen", worst < AGREE, format!("max difference {worst:.3e} < {AGREE:e}"));
    let mut worst_pow: f64 = 0.0;
    for d in 2..=6 {
        let f = InnerModel::power(d);
        let ln = (d as f64).ln();
        worst_pow =
            worst_pow.max((chi_quadrature(&f, 1e-11)?.value - ln).abs()).max((chi_jensen_oracle(&f)?.value - ln).abs());
    }
    out.add("power_maps", worst_pow < POWER, format!("max |χ - log d| {worst_pow:.3e} < {POWER:e}"));
    let mut worst_z: f64 = 0.0;
    for (k, (f, j)) in models.iter().take(5).enumerate() {
        let b = chi_birkhoff(f, BoundaryPoint::new(0.1234 + k as f64)?, 1_000_000, 7 + k as u64)?;
        worst_z = worst_z.max((b.value - j).abs() / b.error);
    }
    out.add("birkhoff", worst_z < SIGMAS, format!("max deviation {worst_z:.2} standard errors < {SIGMAS}"));
    out.runtime(start, Duration::from_secs(120));
    Ok(())
}

fn counting_asymptotics(out: &mut Checks, pool: &ThreadPool) -> Result<(), Error> {
    const BAND: (f64, f64) = (0.8, 1.25);
    const CESARO_BAND: (f64, f64) = (0.85, 1.15);
    const MAX_NODES: usize = 5_000_000;
    let start = Instant::now();
    let f = deg2();
    let z = c(0.3, 0.0);
    let opts = EnumerateOptions { budget: MAX_NODES, ..EnumerateOptions::default() };
    let tree = enumerate_ball_with(&f, DiskPoint::new(z)?, 12.0, opts, &RayonExpander::new(pool))?;
    let target = target_constant(z, chi_jensen_oracle(&f)?.value)?;
    let p = CountingProfile::from_tree(&tree);
    let r12 = p.normalized_count(12.0)? / target;
    let r10 = p.normalized_count(10.0)? / target;
    let ces = p.cesaro(12.0)? / target;
    out.add(
        "ratio_band_at_12",
        (BAND.0..=BAND.1).contains(&r12),
        format!("ratio {r12:.5} in [{}, {}]", BAND.0, BAND.1),
    );
    out.add(
        "ratio_closer_at_12_than_10",
        (r12 - 1.0).abs() <= (r10 - 1.0).abs(),
        format!("|ratio - 1| {:.5} at R = 12 vs {:.5} at R = 10", (r12 - 1.0).abs(), (r10 - 1.0).abs()),
    );
    out.add(
        "cesaro_band_at_12",
        (CESARO_BAND.0..=CESARO_BAND.1).contains(&ces),
        format!("Cesàro ratio {ces:.5} in [{}, {}]", CESARO_BAND.0, CESARO_BAND.1),
    );
    out.add("tree_size", tree.nodes.len() <= MAX_NODES, format!("{} nodes ≤ {MAX_NODES}", tree.nodes.len()));
    out.runtime(start, Duration::from_secs(60));
    Ok(())
}

fn power_packets(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    const RADIUS: f64 = 10.0;
    let z = c((-1.0f64).exp(), 0.0);
    let tree = enumerate_ball_with(
        &InnerModel::power(2),
        DiskPoint::new(z)?,
        RADIUS,
        EnumerateOptions::default(),
        &innerlab_core::preimage::Sequential,
    )?;
    let p = CountingProfile::from_tree(&tree);
    // generation n sits on the circle |w| = exp(-2^-n)
    let packet = |n: i32| {
        let r = (-(0.5f64).powi(n)).exp();
        ((1.0 + r) / (1.0 - r)).ln()
    };
    let mut mismatches = Vec::new();
    let mut packets = 0;
    let mut n = 0;
    while packet(n) <= RADIUS {
        let (below, at) = (p.count(packet(n) - 1e-9)?, p.count(packet(n) + 1e-9)?);
        if below != (1 << n) - 1 || at != (1 << (n + 1)) - 1 {
            mismatches.push(format!("packet {n}: {below}/{at}"));
        }
        packets += 1;
        n += 1;
    }
    let total = (1usize << n) - 1;
    out.add(
        "packet_counts",
        mismatches.is_empty() && p.count(RADIUS)? == total,
        if mismatches.is_empty() {
            format!("{packets} packets, {total} points, all counts exact")
        } else {
            mismatches.join(", ")
        },
    );
    Ok(())
}

fn apriori_bound(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    const REL: f64 = 0.25;
    let z = DiskPoint::new(c(0.3, 0.0))?;
    let mut details = Vec::new();
    let mut ok = true;
    for (label, f) in [("deg2", deg2()), ("deg3", deg3())] {
        let tree = enumerate_ball_with(&f, z, 12.0, EnumerateOptions::default(), &innerlab_core::preimage::Sequential)?;
        let p12 = CountingProfile::from_tree(&tree);
        let small: Vec<f64> = p12.radii.iter().copied().filter(|&r| r <= 8.0).collect();
        let p8 = CountingProfile::new(p12.base, small, 8.0)?;
        let (c8, c12) = (p8.apriori_constant(), p12.apriori_constant());
        let rel = (c8 - c12).abs() / c12;
        ok &= rel <= REL;
        details.push(format!("{label}: C8 {c8:.4}, C12 {c12:.4}, rel {rel:.3}"));
    }
    out.add("constants_agree", ok, format!("{} (≤ {REL})", details.join("; ")));
    Ok(())
}

fn distortion_algebra(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    const EXACT: f64 = 1e-13;
    const SUBADD: f64 = 1e-12;
    const RADIAL_TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let (mut worst_mu, mut worst_delta, mut worst_sub) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut samples = 0;
    while samples < 10_000 {
        let f = random_model(&mut rng);
        let g = random_model(&mut rng);
        let a = Complex::from_polar(0.98 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        let Ok(s) = distortion_at_disk(&f, DiskPoint::new(a)?) else { continue };
        samples += 1;
        worst_mu = worst_mu.max(s.mu - s.eta);
        worst_delta = worst_delta.max(s.delta - s.alpha - s.eta);
        let ga = g.eval_deriv_raw(a)?.0;
        let fg = Compose { outer: &f, inner: &g };
        if let (Ok(sg), Ok(sf), Ok(sfg)) = (
            distortion_at_disk(&g, DiskPoint::new(a)?),
            distortion_at_disk(&f, DiskPoint::new(ga)?),
            distortion_at_disk(&fg, DiskPoint::new(a)?),
        ) {
            worst_sub = worst_sub.max(sfg.delta - sf.delta - sg.delta);
        }
    }
    out.add("mu_le_eta", worst_mu <= EXACT, format!("max μ - η {worst_mu:.3e} ≤ {EXACT:e} on {samples} samples"));
    out.add("delta_le_alpha_eta", worst_delta <= EXACT, format!("max δ - α - η {worst_delta:.3e} ≤ {EXACT:e}"));
    out.add("subadditivity", worst_sub <= SUBADD, format!("max δ(f∘g) - δ(f) - δ(g) {worst_sub:.3e} ≤ {SUBADD:e}"));
    let mut worst_eta = f64::NEG_INFINITY;
    for _ in 0..30 {
        let f = random_model(&mut rng);
        let zeta = BoundaryPoint::new(rng.gen_range(0.0..std::f64::consts::TAU))?;
        let q = radial_distortion_integral(&f, zeta, Quantity::Eta, 1.0 - 1e-6, RADIAL_TOL)?;
        worst_eta = worst_eta.max(q.value - f.angular_derivative(zeta).ln() - q.error);
    }
    out.add(
        "eta_integral_bound",
        worst_eta <= RADIAL_TOL,
        format!("max ∫η dρ - log|F'(ζ)| {worst_eta:.3e} ≤ {RADIAL_TOL:e}"),
    );
    Ok(())
}

fn angular_derivative_criterion(out: &mut Checks, pool: &ThreadPool) -> Result<(), Error> {
    const GROWTH: f64 = 1.0;
    const TOL: f64 = 1e-9;
    let one = BoundaryPoint::new(0.0)?;
    let family = experiments::truncation_family(12)?;
    let ints: Vec<_> = pool.install(|| {
        [5usize, 11]
            .par_iter()
            .map(|&k| radial_distortion_integral(&family[k], one, Quantity::Mu, 1.0 - 1e-6, TOL))
            .collect()
    });
    let (k6, k12) = (ints[0].clone()?.value, ints[1].clone()?.value);
    out.add(
        "truncations_grow",
        k12 - k6 > GROWTH,
        format!("μ-integral {k12:.4} at K = 12 vs {k6:.4} at K = 6, difference > {GROWTH}"),
    );
    let f = deg2();
    let zeta = BoundaryPoint::new(1.0)?;
    let a = radial_distortion_integral(&f, zeta, Quantity::Mu, 1.0 - 1e-4, TOL)?;
    let b = radial_distortion_integral(&f, zeta, Quantity::Mu, 1.0 - 1e-6, TOL)?;
    let inc = (b.value - a.value).abs();
    out.add("finite_product_stabilizes", inc < 10.0 * TOL, format!("increment {inc:.3e} < 10 × {TOL:e}"));
    Ok(())
}

fn total_mass(out: &mut Checks, pool: &ThreadPool) -> Result<(), Error> {
    const REL: f64 = 0.05;
    const SAMPLES: usize = 10_000_000;
    let start = Instant::now();
    for (label, f) in [("z²", InnerModel::power(2)), ("deg2", deg2())] {
        let mut devs = Vec::new();
        for r0 in [0.9, 0.99] {
            let plan = TotalMassPlan::new(&f, r0, SAMPLES, 909)?;
            let sums: Vec<StratumSum> =
                pool.install(|| (0..plan.strata()).into_par_iter().map(|k| plan.eval_stratum(k)).collect());
            let m = plan.combine(&sums)?;
            devs.push((m.mass / m.chi - 1.0).abs());
        }
        let (at90, at99) = (devs[0], devs[1]);
        out.add(
            if label == "z²" { "power_map_within_5pc" } else { "deg2_within_5pc" },
            at99 < REL,
            format!("{label}: |mass/χ - 1| {at99:.2e} at r0 = 0.99 < {REL}"),
        );
        out.add(
            if label == "z²" { "power_map_improves" } else { "deg2_improves" },
            at99 <= at90,
            format!("{label}: {at99:.2e} at r0 = 0.99 ≤ {at90:.2e} at r0 = 0.9"),
        );
    }
    out.runtime(start, Duration::from_secs(120));
    Ok(())
}

fn exponential_map_flow(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    const CLOSED: f64 = 1e-6;
    const INTERTWINE: f64 = 1e-3;
    let mut fixed = InverseOrbit::boundary(InnerModel::power(2), BoundaryPoint::new(0.0)?)?;
    fixed.extend_with(30, |_| 0)?;
    let e = exponential_map(&fixed, 0.5, 30)?;
    let err = (e.point.to_complex() - c((-0.5f64).exp(), 0.0)).norm();
    out.add("fixed_point_closed_form", err < CLOSED, format!("|E - e^-t| {err:.3e} < {CLOSED:e}"));
    let mut sampler = SolenoidSampler::new(deg2(), 1010)?;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let o = sampler.sample_backward_orbit(30)?;
        worst = worst.max(geodesic_intertwining_check(&o, 0.3, -0.5, 30)?);
    }
    out.add("intertwining", worst < INTERTWINE, format!("max discrepancy {worst:.3e} < {INTERTWINE:e} on 50 orbits"));
    Ok(())
}

fn parabolic_counting(out: &mut Checks, pool: &ThreadPool) -> Result<(), Error> {
    const CHI_TOL: f64 = 1e-6;
    const IM_SUM: f64 = 1e-9;
    const BAND: (f64, f64) = (0.8, 1.2);
    let start = Instant::now();
    let f = HalfPlaneInner::z_minus_inverse(0.0);
    let chi = chi_ell(&f, 1e-10)?.value;
    let tau = std::f64::consts::TAU;
    out.add("chi_ell", (chi - tau).abs() < CHI_TOL, format!("χ_ℓ {chi:.10} vs 2π, tolerance {CHI_TOL:e}"));
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let g = if k % 2 == 0 {
            f.clone()
        } else {
            let atoms = (0..rng.gen_range(1..4)).map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..2.0))).collect();
            HalfPlaneInner::new(rng.gen_range(-2.0..2.0), atoms)?
        };
        let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(1e-3..5.0));
        let s: f64 = hp_raw_preimages(&g, z)?.iter().map(|w| w.im).sum();
        worst = worst.max((s - z.im).abs());
    }
    out.add("im_sum", worst < IM_SUM, format!("max |Σ Im w - Im z| {worst:.3e} < {IM_SUM:e}"));
    let z = HalfPlanePoint::new(c(0.0, 0.5))?;
    let profile = enumerate_strip_with(
        &f,
        z,
        Interval::new(-1.0, 1.0),
        10.0,
        StripOptions::default(),
        &RayonExpander::new(pool),
    )?;
    let row = strip_counting_report(&profile, chi, &[10.0])?[0];
    let ratio = row.cesaro / row.target;
    out.add(
        "strip_cesaro_band",
        (BAND.0..=BAND.1).contains(&ratio),
        format!(
            "Cesàro/(|I|/χ_ℓ) {ratio:.4} in [{}, {}] ({:.4} with the Im z factor)",
            BAND.0,
            BAND.1,
            row.cesaro / row.scaled_target
        ),
    );
    out.runtime(start, Duration::from_secs(60));
    Ok(())
}

fn shadowing(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    const SMALL: f64 = 0.05;
    const LARGE: f64 = 0.5;
    const HORIZON: f64 = 1e4;
    let never = shadowing_simulation(&BadTimes::Never, HORIZON, Adversary::UpRight, 0.25, 1.0, 0.01, 10)?;
    out.add(
        "no_bad_times_exact",
        never.final_average == 0.0 && never.limit == 0.25,
        format!("average {:e}, limit {}", never.final_average, never.limit),
    );
    let dyadic = shadowing_simulation(&BadTimes::Dyadic, HORIZON, Adversary::UpRight, 0.0, 1.0, 0.01, 10)?;
    out.add(
        "density_zero",
        dyadic.final_average < SMALL,
        format!("average {:.4} < {SMALL} at T = {HORIZON:e}", dyadic.final_average),
    );
    let always = shadowing_simulation(&BadTimes::Always, HORIZON, Adversary::UpRight, 0.0, 1.0, 0.01, 10)?;
    out.add("density_one", always.final_average > LARGE, format!("average {:.4} > {LARGE}", always.final_average));
    Ok(())
}

fn determinism(out: &mut Checks, _: &ThreadPool) -> Result<(), Error> {
    for command in ["count", "cesaro"] {
        let mut cfg = ExperimentConfig::new(command);
        cfg.seed = 13;
        cfg.model = Some(ModelSpec::Disk(deg2()));
        cfg.set("R", 10);
        experiments::complete(&mut cfg)?;
        let mut outputs = Vec::new();
        for threads in [1, 4, 8, 8] {
            let pool = build_pool(threads)?;
            outputs.push(render_csv(&cfg, &experiments::run(&cfg, &pool)?)?);
        }
        let same = outputs.windows(2).all(|w| w[0] == w[1]);
        out.add(
            if command == "count" { "count_bytes" } else { "cesaro_bytes" },
            same,
            format!("{command}: {} bytes, identical across 1/4/8 threads and a repeat run: {same}", outputs[0].len()),
        );
    }
    Ok(())
}
