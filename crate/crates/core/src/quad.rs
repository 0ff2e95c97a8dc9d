//! One-dimensional quadrature: globally adaptive Gauss–Kronrod (7/15) and
//! Gauss–Legendre rules for tensor grids.

// tabulated nodes and weights keep their published digits
#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;
use core::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the per-interval Kronrod error estimates.
    pub error: f64,
    pub converged: bool,
    pub intervals: usize,
}

/// Kronrod estimate and |Kronrod − Gauss| on one interval.
pub fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive integration of `f` over `[a, b]`: the interval with the
/// largest error estimate is bisected until the total estimate is below `tol`
/// or `max_intervals` is reached.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, max_intervals: usize) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, error: 0.0, converged: true, intervals: 0 };
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut parts: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    loop {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        let done = total_err <= tol;
        if done || parts.len() >= max_intervals.max(1) {
            // summation in interval order keeps the result independent of split history
            parts.sort_by(|x, y| x.0.total_cmp(&y.0));
            let value = parts.iter().map(|p| p.2).sum();
            return Quadrature { value, error: total_err, converged: done, intervals: parts.len() };
        }
        let (worst, _) = parts.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            // cannot split further in floating point
            parts.push((lo, hi, 0.0, 0.0));
            let value = parts.iter().map(|p| p.2).sum::<f64>();
            let error = parts.iter().map(|p| p.3).sum::<f64>();
            return Quadrature { value, error, converged: false, intervals: parts.len() };
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Integrates over consecutive pieces `[breaks[i], breaks[i+1]]`, splitting
/// the tolerance evenly.
pub fn integrate_pieces(mut f: impl FnMut(f64) -> f64, breaks: &[f64], tol: f64, max_intervals: usize) -> Quadrature {
    let pieces = breaks.len().saturating_sub(1).max(1);
    let mut out = Quadrature { value: 0.0, error: 0.0, converged: true, intervals: 0 };
    for w in breaks.windows(2) {
        let q = integrate(&mut f, w[0], w[1], tol / pieces as f64, max_intervals);
        out.value += q.value;
        out.error += q.error;
        out.converged &= q.converged;
        out.intervals += q.intervals;
    }
    out
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| x * x * x * x, 0.0, 1.0, 1e-14, 10);
        assert!((q.value - 0.2).abs() < 1e-15);
    }

    #[test]
    fn log_singularity() {
        // ∫_0^1 log x dx = -1
        let q = integrate(|x| if x > 0.0 { x.ln() } else { 0.0 }, 0.0, 1.0, 1e-12, 500);
        assert!(q.converged);
        assert!((q.value + 1.0).abs() < 1e-11);
    }

    #[test]
    fn oscillatory() {
        let q = integrate(|x| (10.0 * x).sin(), 0.0, PI, 1e-12, 500);
        assert!((q.value - (1.0 - (10.0 * PI).cos()) / 10.0).abs() < 1e-12);
    }

    #[test]
    fn legendre_rule() {
        for n in [1, 2, 5, 16, 40] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}");
            // exact for degree 2n-1
            let deg = 2 * n - 2;
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((m - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }
}
