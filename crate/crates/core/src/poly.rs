//! Dense complex polynomials (coefficients in ascending order) and a
//! simultaneous Aberth–Ehrlich root finder.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{bail, Result};
use crate::Complex;

const ZERO: Complex = Complex::new(0.0, 0.0);

pub fn eval(coeffs: &[Complex], z: Complex) -> Complex {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

/// Value and derivative by Horner's scheme.
pub fn eval_deriv(coeffs: &[Complex], z: Complex) -> (Complex, Complex) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn derivative(coeffs: &[Complex]) -> Vec<Complex> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

pub fn mul(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn sub(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let n = a.len().max(b.len());
    (0..n).map(|k| a.get(k).copied().unwrap_or(ZERO) - b.get(k).copied().unwrap_or(ZERO)).collect()
}

pub fn scale(a: &[Complex], s: Complex) -> Vec<Complex> {
    a.iter().map(|c| c * s).collect()
}

/// Drops trailing coefficients that are negligible relative to the largest.
pub fn trim(mut coeffs: Vec<Complex>) -> Vec<Complex> {
    let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= 1e-15 * big) {
        coeffs.pop();
    }
    coeffs
}

/// All roots of the polynomial, by Aberth–Ehrlich iteration from points on
/// a circle. A failed run is retried once from a rotated circle.
pub fn roots(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    let coeffs = trim(coeffs.to_vec());
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        bail!(Numerical, "zero polynomial");
    }
    // zeros at the origin are split off exactly
    let low = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[low..];
    let mut out = alloc::vec![ZERO; low];
    if reduced.len() == 1 {
        return Ok(out);
    }
    for offset in [0.4, 1.3, 2.2] {
        if let Some(r) = aberth(reduced, offset) {
            out.extend(r);
            return Ok(out);
        }
        log::debug!("aberth retry with start offset {offset}");
    }
    bail!(Numerical, "Aberth iteration did not converge for polynomial of degree {n}")
}

fn aberth(coeffs: &[Complex], offset: f64) -> Option<Vec<Complex>> {
    let n = coeffs.len() - 1;
    let radius = (coeffs[0].norm() / coeffs[n].norm()).powf(1.0 / n as f64);
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex> =
        (0..n).map(|k| Complex::from_polar(radius, TAU * k as f64 / n as f64 + offset / n as f64)).collect();
    let dcoeffs = derivative(coeffs);
    let mut settled = alloc::vec![false; n];
    for _ in 0..2000 {
        let mut all = true;
        for k in 0..n {
            if settled[k] {
                continue;
            }
            let p = eval(coeffs, z[k]);
            let dp = eval(&dcoeffs, z[k]);
            if p.norm() == 0.0 {
                settled[k] = true;
                continue;
            }
            let ratio = if dp.norm() == 0.0 { p / 1e-300 } else { p / dp };
            let mut repulsion = ZERO;
            for j in 0..n {
                if j != k {
                    let gap = z[k] - z[j];
                    if gap.norm() > 0.0 {
                        repulsion += gap.inv();
                    }
                }
            }
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                return None;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(1e-300) {
                settled[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Some(z);
        }
    }
    // Multiple roots converge only linearly; accept if residuals are tiny.
    let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
    if z.iter().all(|&w| eval(coeffs, w).norm() <= 1e-12 * scale * (1.0 + w.norm()).powi(n as i32)) {
        Some(z)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn from_roots(rs: &[Complex]) -> Vec<Complex> {
        rs.iter().fold(alloc::vec![c(1.0, 0.0)], |acc, r| mul(&acc, &[-r, c(1.0, 0.0)]))
    }

    fn matched(found: &[Complex], expected: &[Complex], tol: f64) -> bool {
        let mut used = alloc::vec![false; expected.len()];
        found.iter().all(|f| {
            let best = expected
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .min_by(|a, b| (a.1 - f).norm().total_cmp(&(b.1 - f).norm()));
            match best {
                Some((i, e)) if (e - f).norm() < tol => {
                    used[i] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn simple_roots() {
        let rs = [c(0.5, 0.1), c(-0.3, 0.7), c(0.9, -0.2), c(-0.6, -0.6), c(0.0, 0.2)];
        let found = roots(&from_roots(&rs)).unwrap();
        assert_eq!(found.len(), 5);
        assert!(matched(&found, &rs, 1e-12));
    }

    #[test]
    fn zero_roots_split_exactly() {
        let rs = [c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)];
        let found = roots(&from_roots(&rs)).unwrap();
        assert_eq!(found.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(matched(&found, &rs, 1e-14));
    }

    #[test]
    fn double_root() {
        let rs = [c(0.3, 0.2), c(0.3, 0.2), c(-0.5, 0.0)];
        let found = roots(&from_roots(&rs)).unwrap();
        assert!(matched(&found, &rs, 1e-6));
    }

    #[test]
    fn horner_derivative() {
        let p = from_roots(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let (v, d) = eval_deriv(&p, c(3.0, 0.0));
        assert!((v - c(2.0, 0.0)).norm() < 1e-15);
        assert!((d - c(3.0, 0.0)).norm() < 1e-15);
    }
}
