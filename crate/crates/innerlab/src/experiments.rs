//! One experiment per subcommand. Each reads its parameters from an
//! [`ExperimentConfig`] and returns a [`Table`].

use innerlab_core::counting::{target_constant, CountingProfile};
use innerlab_core::distortion::angular_derivative_criterion_scan;
use innerlab_core::lamination::{
    sample_interior_orbit, shadowing_simulation, xi_box_mass, Adversary, AnnularBox, BadTimes, InverseOrbit,
    SolenoidSampler, StratumSum, TotalMassPlan,
};
use innerlab_core::lyapunov::{chi_birkhoff, chi_jensen_oracle, chi_quadrature, LyapunovEstimate};
use innerlab_core::parabolic::{chi_ell, enumerate_strip_with, strip_counting_report, Interval, StripOptions};
use innerlab_core::preimage::{enumerate_ball_with, EnumerateOptions};
use innerlab_core::{BoundaryPoint, Complex, DiskPoint, HalfPlanePoint, InnerModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::ExperimentConfig;
use crate::parallel::RayonExpander;
use crate::table::{num, Table};
use crate::Error;

pub struct Command {
    pub name: &'static str,
    pub about: &'static str,
    pub needs_model: bool,
    pub defaults: &'static [(&'static str, &'static str)],
    pub columns: &'static [&'static str],
    run: fn(&ExperimentConfig, &ThreadPool) -> Result<Table, Error>,
}

pub const COMMANDS: &[Command] = &[
    Command {
        name: "count",
        about: "Count repeated preimages of z in hyperbolic balls B(0, R).",
        needs_model: true,
        defaults: &[
            ("z", "0.3,0"),
            ("R", "12"),
            ("step", "0.5"),
            ("budget", "5000000"),
            ("chi", "jensen"),
            ("tol", "1e-10"),
        ],
        columns: &["R", "count", "normalized", "cesaro", "target", "ratio", "cesaro_ratio"],
        run: count,
    },
    Command {
        name: "cesaro",
        about: "Cesàro averages of the counting function.",
        needs_model: true,
        defaults: &[
            ("z", "0.3,0"),
            ("R", "12"),
            ("step", "0.5"),
            ("budget", "5000000"),
            ("chi", "jensen"),
            ("tol", "1e-10"),
        ],
        columns: &["R", "cesaro", "target", "cesaro_ratio"],
        run: cesaro,
    },
    Command {
        name: "lyapunov",
        about: "Lyapunov exponent by quadrature, Jensen's formula and a Birkhoff average.",
        needs_model: true,
        defaults: &[("method", "all"), ("tol", "1e-10"), ("steps", "1000000"), ("start", "0.1234")],
        columns: &["method", "value", "error"],
        run: lyapunov,
    },
    Command {
        name: "distortion-scan",
        about: "Radial integrals of the distortion quantities toward a boundary point. \
                With truncations = K > 0, scans the products with zeros 1 - 2^-k, k = 1..n, for n = 1..K instead.",
        needs_model: false,
        defaults: &[("zeta", "0"), ("r", "0.99,0.9999,0.999999"), ("tol", "1e-9"), ("truncations", "0")],
        columns: &["model", "r_max", "mu", "eta", "delta", "alpha", "log_angular_derivative"],
        run: distortion_scan,
    },
    Command {
        name: "orbit",
        about: "Random backward orbit: interior (branch weights by height) or boundary (weights 1/|F'|).",
        needs_model: true,
        defaults: &[("kind", "interior"), ("z", "0.3,0.2"), ("zeta", "1"), ("n", "50")],
        columns: &["n", "angle", "height", "re", "im", "branch"],
        run: orbit,
    },
    Command {
        name: "xi-mass",
        about: "Pulled-back transverse mass of an annular box at increasing depth.",
        needs_model: true,
        defaults: &[("box", "0.9,0.95,0,0.5"), ("depth", "8"), ("m", "8"), ("budget", "16777216")],
        columns: &["depth", "mass", "error", "reference", "ratio"],
        run: xi_mass,
    },
    Command {
        name: "total-mass",
        about: "Monte Carlo mass of the fundamental annulus against the Lyapunov exponent.",
        needs_model: true,
        defaults: &[("r0", "0.9,0.99"), ("samples", "10000000")],
        columns: &["r0", "mass", "std_error", "chi", "ratio", "samples"],
        run: total_mass,
    },
    Command {
        name: "shadow-sim",
        about: "Leaf curve driven downward at good times and by an adversary at bad times.",
        needs_model: false,
        defaults: &[
            ("bad", "dyadic"),
            ("horizon", "10000"),
            ("adversary", "up-right"),
            ("start", "0,1"),
            ("step", "0.01"),
            ("points", "100"),
        ],
        columns: &["t", "average", "limit"],
        run: shadow_sim,
    },
    Command {
        name: "parabolic-count",
        about: "Count repeated preimages in the strip I x [e^-R, 1] for a half-plane model.",
        needs_model: true,
        defaults: &[
            ("z", "0,0.5"),
            ("interval", "-1,1"),
            ("R", "10"),
            ("step", "0.5"),
            ("tol", "1e-10"),
            ("budget", "20000000"),
        ],
        columns: &["R", "count", "normalized", "cesaro", "target", "scaled_target", "ratio", "cesaro_ratio"],
        run: parabolic_count,
    },
];

pub fn command(name: &str) -> Option<&'static Command> {
    COMMANDS.iter().find(|c| c.name == name)
}

/// Help text: columns and parameter defaults.
pub fn help(name: &str) -> String {
    let Some(c) = command(name) else { return String::new() };
    let mut s = format!("CSV columns: {}\n\nParameter defaults:\n", c.columns.join(", "));
    for (k, v) in c.defaults {
        s.push_str(&format!("  {k} = {v}\n"));
    }
    s
}

/// Inserts defaults for parameters the config leaves out and rejects
/// unknown ones.
pub fn complete(cfg: &mut ExperimentConfig) -> Result<&'static Command, Error> {
    let c = command(&cfg.command).ok_or_else(|| Error::Usage(format!("unknown command `{}`", cfg.command)))?;
    if let Some(k) = cfg.params.keys().find(|k| !c.defaults.iter().any(|(d, _)| d == k)) {
        return Err(Error::Usage(format!("`{}` has no parameter `{k}`", c.name)));
    }
    for (k, v) in c.defaults {
        cfg.params.entry((*k).to_owned()).or_insert_with(|| (*v).to_owned());
    }
    Ok(c)
}

pub fn run(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Table, Error> {
    let mut cfg = cfg.clone();
    let c = complete(&mut cfg)?;
    if c.needs_model {
        cfg.model()?;
    }
    let table = (c.run)(&cfg, pool)?;
    debug_assert_eq!(table.columns, c.columns);
    Ok(table)
}

/// `step, 2·step, …`, ending exactly at `r`.
fn grid(step: f64, r: f64) -> Result<Vec<f64>, Error> {
    if !(step > 0.0 && r > 0.0) {
        return Err(Error::Usage("radius and step must be positive".into()));
    }
    let n = (r / step - 1e-9).floor() as usize;
    let mut g: Vec<f64> = (1..=n).map(|k| k as f64 * step).collect();
    g.push(r);
    Ok(g)
}

fn point(cfg: &ExperimentConfig, key: &str) -> Result<Complex, Error> {
    let (re, im) = cfg.get_pair(key)?;
    Ok(Complex::new(re, im))
}

fn chi_for(f: &InnerModel, cfg: &ExperimentConfig) -> Result<f64, Error> {
    match cfg.get_str("chi")? {
        "jensen" => Ok(chi_jensen_oracle(f)?.value),
        "quadrature" => Ok(chi_quadrature(f, cfg.get_f64("tol")?)?.value),
        other => Err(Error::Usage(format!("chi must be jensen or quadrature, got `{other}`"))),
    }
}

fn disk_profile(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<(CountingProfile, f64, Vec<f64>), Error> {
    let f = cfg.model()?.disk()?;
    let z = point(cfg, "z")?;
    let r = cfg.get_f64("R")?;
    let opts = EnumerateOptions { budget: cfg.get_usize("budget")?, ..EnumerateOptions::default() };
    let tree = enumerate_ball_with(f, DiskPoint::new(z)?, r, opts, &RayonExpander::new(pool))?;
    log::info!("{} nodes in {} generations", tree.nodes.len(), tree.generations());
    let chi = chi_for(f, cfg)?;
    let target = target_constant(z, chi)?;
    Ok((CountingProfile::from_tree(&tree).with_chi(chi), target, grid(cfg.get_f64("step")?, r)?))
}

fn count(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Table, Error> {
    let (p, target, radii) = disk_profile(cfg, pool)?;
    let mut t = Table::new(&["R", "count", "normalized", "cesaro", "target", "ratio", "cesaro_ratio"]);
    for r in radii {
        let (n, norm, ces) = (p.count(r)?, p.normalized_count(r)?, p.cesaro(r)?);
        t.push(vec![num(r), n.to_string(), num(norm), num(ces), num(target), num(norm / target), num(ces / target)]);
    }
    Ok(t)
}

fn cesaro(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Table, Error> {
    let (p, target, radii) = disk_profile(cfg, pool)?;
    let mut t = Table::new(&["R", "cesaro", "target", "cesaro_ratio"]);
    for r in radii {
        let ces = p.cesaro(r)?;
        t.push(vec![num(r), num(ces), num(target), num(ces / target)]);
    }
    Ok(t)
}

fn lyapunov(cfg: &ExperimentConfig, _: &ThreadPool) -> Result<Table, Error> {
    let f = cfg.model()?.disk()?;
    let method = cfg.get_str("method")?;
    let mut rows: Vec<LyapunovEstimate> = Vec::new();
    let want = |m: &str| method == "all" || method == m;
    if !["all", "quadrature", "jensen", "birkhoff"].contains(&method) {
        return Err(Error::Usage(format!("unknown method `{method}`")));
    }
    if want("quadrature") {
        rows.push(chi_quadrature(f, cfg.get_f64("tol")?)?);
    }
    if want("jensen") {
        rows.push(chi_jensen_oracle(f)?);
    }
    if want("birkhoff") {
        let start = BoundaryPoint::new(cfg.get_f64("start")?)?;
        rows.push(chi_birkhoff(f, start, cfg.get_usize("steps")?, cfg.seed)?);
    }
    let mut t = Table::new(&["method", "value", "error"]);
    for e in rows {
        t.push(vec![e.method.name().to_owned(), num(e.value), num(e.error)]);
    }
    Ok(t)
}

/// Products with zeros `1 - 2^-k`, `k = 1..=n`, for `n = 1..=max`.
pub fn truncation_family(max: usize) -> Result<Vec<InnerModel>, Error> {
    (1..=max)
        .map(|n| {
            let zeros = (1..=n).map(|k| Complex::new(1.0 - 0.5f64.powi(k as i32), 0.0)).collect();
            Ok(InnerModel::blaschke(zeros)?)
        })
        .collect()
}

fn distortion_scan(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Table, Error> {
    let k = cfg.get_usize("truncations")?;
    let family = if k > 0 { truncation_family(k)? } else { vec![cfg.model()?.disk()?.clone()] };
    let zeta = BoundaryPoint::new(cfg.get_f64("zeta")?)?;
    let grid = cfg.get_list("r")?;
    let tol = cfg.get_f64("tol")?;
    let per_model: Vec<_> = pool.install(|| {
        family
            .par_iter()
            .map(|f| angular_derivative_criterion_scan(std::slice::from_ref(f), zeta, &grid, tol))
            .collect()
    });
    let mut t = Table::new(&["model", "r_max", "mu", "eta", "delta", "alpha", "log_angular_derivative"]);
    for (i, rows) in per_model.into_iter().enumerate() {
        for row in rows? {
            t.push(vec![
                (i + 1).to_string(),
                num(row.r_max),
                num(row.integral_mu),
                num(row.integral_eta),
                num(row.integral_delta),
                num(row.integral_alpha),
                num(row.log_angular_derivative),
            ]);
        }
    }
    Ok(t)
}

fn orbit(cfg: &ExperimentConfig, _: &ThreadPool) -> Result<Table, Error> {
    let f = cfg.model()?.disk()?.clone();
    let n = cfg.get_usize("n")?;
    let orbit: InverseOrbit = match cfg.get_str("kind")? {
        "interior" => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            sample_interior_orbit(f, DiskPoint::new(point(cfg, "z")?)?, n, &mut rng)?
        }
        "boundary" => SolenoidSampler::new(f, cfg.seed)?.sample_from(BoundaryPoint::new(cfg.get_f64("zeta")?)?, n)?,
        other => return Err(Error::Usage(format!("orbit kind must be interior or boundary, got `{other}`"))),
    };
    let mut t = Table::new(&["n", "angle", "height", "re", "im", "branch"]);
    for (k, p) in orbit.points().iter().enumerate() {
        let z = p.to_complex();
        let branch = if k == 0 { String::new() } else { orbit.branches()[k - 1].to_string() };
        t.push(vec![k.to_string(), num(p.angle), num(p.height), num(z.re), num(z.im), branch]);
    }
    Ok(t)
}

fn xi_mass(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Table, Error> {
    let f = cfg.model()?.disk()?;
    let b = cfg.get_list("box")?;
    let [r_min, r_max, a_min, a_max] = b[..] else {
        return Err(Error::Usage("box needs r_min,r_max,angle_min,angle_max".into()));
    };
    let region = AnnularBox::new(r_min, r_max, a_min, a_max)?;
    let (depth, m, budget) = (cfg.get_usize("depth")?, cfg.get_usize("m")?, cfg.get_usize("budget")?);
    let reference = region.boundary_reference();
    let rows: Vec<_> =
        pool.install(|| (0..=depth).into_par_iter().map(|n| xi_box_mass(f, region, n, m, budget)).collect());
    let mut t = Table::new(&["depth", "mass", "error", "reference", "ratio"]);
    for e in rows {
        let e = e?;
        t.push(vec![e.depth.to_string(), num(e.mass), num(e.error), num(reference), num(e.mass / reference)]);
    }
    Ok(t)
}

fn total_mass(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Table, Error> {
    let f = cfg.model()?.disk()?;
    let samples = cfg.get_usize("samples")?;
    let mut t = Table::new(&["r0", "mass", "std_error", "chi", "ratio", "samples"]);
    for r0 in cfg.get_list("r0")? {
        let plan = TotalMassPlan::new(f, r0, samples, cfg.seed)?;
        let sums: Vec<StratumSum> =
            pool.install(|| (0..plan.strata()).into_par_iter().map(|k| plan.eval_stratum(k)).collect());
        let m = plan.combine(&sums)?;
        t.push(vec![num(r0), num(m.mass), num(m.std_error), num(m.chi), num(m.mass / m.chi), m.samples.to_string()]);
    }
    Ok(t)
}

fn shadow_sim(cfg: &ExperimentConfig, _: &ThreadPool) -> Result<Table, Error> {
    let bad = match cfg.get_str("bad")? {
        "never" => BadTimes::Never,
        "always" => BadTimes::Always,
        "dyadic" => BadTimes::Dyadic,
        other => return Err(Error::Usage(format!("bad must be never, always or dyadic, got `{other}`"))),
    };
    let adversary = match cfg.get_str("adversary")? {
        "up-right" => Adversary::UpRight,
        "right" => Adversary::Right,
        "up" => Adversary::Up,
        other => return Err(Error::Usage(format!("adversary must be up-right, right or up, got `{other}`"))),
    };
    let (x0, y0) = cfg.get_pair("start")?;
    let run = shadowing_simulation(
        &bad,
        cfg.get_f64("horizon")?,
        adversary,
        x0,
        y0,
        cfg.get_f64("step")?,
        cfg.get_usize("points")?,
    )?;
    let mut t = Table::new(&["t", "average", "limit"]);
    for (s, avg) in run.curve {
        t.push(vec![num(s), num(avg), num(run.limit)]);
    }
    Ok(t)
}

fn parabolic_count(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Table, Error> {
    let f = cfg.model()?.half_plane()?;
    let z = HalfPlanePoint::new(point(cfg, "z")?)?;
    let (lo, hi) = cfg.get_pair("interval")?;
    let r = cfg.get_f64("R")?;
    let opts = StripOptions { budget: cfg.get_usize("budget")? };
    let profile = enumerate_strip_with(f, z, Interval::new(lo, hi), r, opts, &RayonExpander::new(pool))?;
    let chi = chi_ell(f, cfg.get_f64("tol")?)?.value;
    let rows = strip_counting_report(&profile, chi, &grid(cfg.get_f64("step")?, r)?)?;
    let mut t = Table::new(&["R", "count", "normalized", "cesaro", "target", "scaled_target", "ratio", "cesaro_ratio"]);
    for row in rows {
        t.push(vec![
            num(row.r),
            row.count.to_string(),
            num(row.normalized),
            num(row.cesaro),
            num(row.target),
            num(row.scaled_target),
            num(row.normalized / row.scaled_target),
            num(row.cesaro / row.target),
        ]);
    }
    Ok(t)
}
