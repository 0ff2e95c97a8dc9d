//! Small scalar helpers shared across modules.

use core::f64::consts::{PI, TAU};

use crate::Complex;

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_tau(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `(-π, π]`.
pub fn wrap_pi(theta: f64) -> f64 {
    let mut r = wrap_tau(theta);
    if r > PI {
        r -= TAU;
    }
    r
}

pub fn cis(theta: f64) -> Complex {
    Complex::new(theta.cos(), theta.sin())
}

/// `d(0, r)` in the disk, `log((1+r)/(1-r))`.
pub fn radius_from_modulus(r: f64) -> f64 {
    2.0 * r.atanh()
}

/// Inverse of [`radius_from_modulus`].
pub fn modulus_from_radius(d: f64) -> f64 {
    (0.5 * d).tanh()
}

/// Total order on complex numbers by (argument, modulus), then raw parts.
pub fn canonical_cmp(a: &Complex, b: &Complex) -> core::cmp::Ordering {
    let arg_a = wrap_tau(a.arg());
    let arg_b = wrap_tau(b.arg());
    arg_a.total_cmp(&arg_b).then(a.norm().total_cmp(&b.norm())).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping() {
        assert_eq!(wrap_tau(-0.5), TAU - 0.5);
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_pi(PI), PI);
    }

    #[test]
    fn radius_round_trip() {
        let d = radius_from_modulus(0.5);
        assert!((d - 3f64.ln()).abs() < 1e-15);
        assert!((modulus_from_radius(d) - 0.5).abs() < 1e-15);
    }
}
