//! Evaluable inner functions: finite Blaschke products times optional
//! singular atoms `exp(-σ (ζ + z) / (ζ - z))`.
//!
//! Blaschke factors use `b_a(z) = (|a|/a) (a - z) / (1 - ā z)` and
//! `b_0(z) = z`, so every factor is real and nonnegative at the origin.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use rand::Rng;

use crate::error::{bail, Error, Result};
use crate::hypgeo::{DiskPoint, Moebius};
use crate::math::{cis, wrap_tau};
use crate::Complex;

const ONE: Complex = Complex::new(1.0, 0.0);
const ZERO: Complex = Complex::new(0.0, 0.0);

/// A point `e^{iθ}` of the unit circle, stored by its angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BoundaryPoint(f64);

impl BoundaryPoint {
    pub fn new(angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            bail!(Domain, "boundary angle must be finite, got {angle}");
        }
        Ok(Self(wrap_tau(angle)))
    }

    pub fn angle(self) -> f64 {
        self.0
    }

    pub fn point(self) -> Complex {
        cis(self.0)
    }
}

/// Point mass of weight `weight` at `e^{i angle}` in the singular measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub angle: f64,
    pub weight: f64,
}

/// Anything that can be evaluated with its derivative on the disk.
pub trait DiskMap {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)>;

    fn eval(&self, z: Complex) -> Result<Complex> {
        self.eval_deriv(z).map(|(w, _)| w)
    }
}

impl<T: DiskMap + ?Sized> DiskMap for &T {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        (**self).eval_deriv(z)
    }

    fn eval(&self, z: Complex) -> Result<Complex> {
        (**self).eval(z)
    }
}

impl DiskMap for Moebius {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        Ok((self.apply(z)?, self.derivative(z)?))
    }
}

/// `outer ∘ inner`.
#[derive(Clone, Debug)]
pub struct Compose<A, B> {
    pub outer: A,
    pub inner: B,
}

impl<A: DiskMap, B: DiskMap> DiskMap for Compose<A, B> {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        let (w, dw) = self.inner.eval_deriv(z)?;
        let (v, dv) = self.outer.eval_deriv(w)?;
        Ok((v, dv * dw))
    }
}

/// Wraps a closure returning value and derivative.
pub struct FnMap<F>(pub F);

impl<F: Fn(Complex) -> (Complex, Complex)> DiskMap for FnMap<F> {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        Ok((self.0)(z))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InnerModel {
    rotation: Complex,
    zeros: Vec<Complex>,
    atoms: Vec<Atom>,
}

impl InnerModel {
    pub fn new(rotation: Complex, zeros: Vec<Complex>, atoms: Vec<Atom>) -> Result<Self> {
        let r = rotation.norm();
        if !((r - 1.0).abs() < 1e-12) {
            bail!(Domain, "rotation {rotation} is not unimodular");
        }
        for a in &zeros {
            if !(a.norm() < 1.0) || !a.re.is_finite() || !a.im.is_finite() {
                bail!(Domain, "zero {a} is not inside the unit disk");
            }
        }
        for atom in &atoms {
            if !(atom.weight > 0.0) || !atom.weight.is_finite() || !atom.angle.is_finite() {
                bail!(Domain, "atom {atom:?} needs a finite angle and positive weight");
            }
        }
        let atoms = atoms.into_iter().map(|a| Atom { angle: wrap_tau(a.angle), weight: a.weight }).collect();
        Ok(Self { rotation: rotation / r, zeros, atoms })
    }

    /// Finite Blaschke product with unit rotation.
    pub fn blaschke(zeros: Vec<Complex>) -> Result<Self> {
        Self::new(ONE, zeros, Vec::new())
    }

    /// `z ↦ z^d`.
    pub fn power(d: usize) -> Self {
        Self { rotation: ONE, zeros: alloc::vec![ZERO; d], atoms: Vec::new() }
    }

    pub fn atom(angle: f64, weight: f64) -> Result<Self> {
        Self::new(ONE, Vec::new(), alloc::vec![Atom { angle, weight }])
    }

    /// Random centered finite Blaschke product of the given degree: one zero
    /// at the origin, the rest uniform in angle with modulus below `max_modulus`.
    pub fn random_centered(rng: &mut impl Rng, degree: usize, max_modulus: f64) -> Self {
        let mut zeros = alloc::vec![ZERO];
        for _ in 1..degree.max(1) {
            let r = max_modulus * rng.gen::<f64>().sqrt();
            zeros.push(Complex::from_polar(r, core::f64::consts::TAU * rng.gen::<f64>()));
        }
        let rotation = cis(core::f64::consts::TAU * rng.gen::<f64>());
        Self { rotation, zeros, atoms: Vec::new() }
    }

    pub fn rotation(&self) -> Complex {
        self.rotation
    }

    pub fn zeros(&self) -> &[Complex] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Number of Blaschke zeros counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_finite_blaschke(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_centered(&self) -> bool {
        self.zeros.iter().any(|a| a.norm() == 0.0)
    }

    /// `z ↦ λ z`.
    pub fn is_rotation(&self) -> bool {
        self.atoms.is_empty() && self.zeros.len() == 1 && self.zeros[0].norm() == 0.0
    }

    pub fn is_identity(&self) -> bool {
        self.is_rotation() && (self.rotation - ONE).norm() == 0.0
    }

    pub(crate) fn require_centered_blaschke(&self) -> Result<()> {
        if !self.is_finite_blaschke() {
            bail!(Precondition, "a finite Blaschke product is required (model has singular atoms)");
        }
        if !self.is_centered() {
            bail!(Precondition, "a centered model is required (no zero at the origin)");
        }
        if self.is_rotation() {
            bail!(Precondition, "the model is a rotation");
        }
        Ok(())
    }

    fn check_atoms(&self, z: Complex) -> Result<()> {
        for atom in &self.atoms {
            if (cis(atom.angle) - z).norm() == 0.0 {
                bail!(Singularity, "evaluation at the atom base point angle {}", atom.angle);
            }
        }
        Ok(())
    }

    /// Value and derivative at any finite `z` off the atoms and off the poles
    /// `1/ā`. Accumulated by the product rule so zeros of `F` are harmless.
    pub fn eval_deriv_raw(&self, z: Complex) -> Result<(Complex, Complex)> {
        self.check_atoms(z)?;
        let mut f = self.rotation;
        let mut df = ZERO;
        for &a in &self.zeros {
            let (b, db) = blaschke_factor(a, z)?;
            df = df * b + f * db;
            f *= b;
        }
        for atom in &self.atoms {
            let zeta = cis(atom.angle);
            let gap = zeta - z;
            let s = (-(zeta + z) / gap * atom.weight).exp();
            let ds = s * (-2.0 * atom.weight) * zeta / (gap * gap);
            df = df * s + f * ds;
            f *= s;
        }
        Ok((f, df))
    }

    pub fn eval(&self, z: DiskPoint) -> Result<DiskPoint> {
        let w = self.eval_deriv_raw(z.value())?.0;
        DiskPoint::new(w)
    }

    pub fn deriv(&self, z: DiskPoint) -> Result<Complex> {
        self.eval_deriv_raw(z.value()).map(|(_, d)| d)
    }

    /// `|F'(ζ)|` from the Ahern–Clark sum; `+∞` at an atom.
    pub fn boundary_deriv_modulus(&self, zeta: BoundaryPoint) -> f64 {
        let u = zeta.point();
        let mut s = 0.0;
        for &a in &self.zeros {
            s += (1.0 - a.norm_sqr()) / (u - a).norm_sqr();
        }
        for atom in &self.atoms {
            let gap = (cis(atom.angle) - u).norm_sqr();
            if gap == 0.0 || crate::math::wrap_pi(atom.angle - zeta.angle()) == 0.0 {
                return f64::INFINITY;
            }
            s += 2.0 * atom.weight / gap;
        }
        s
    }

    /// Angular derivative at `ζ`; `+∞` when there is none.
    pub fn angular_derivative(&self, zeta: BoundaryPoint) -> f64 {
        self.boundary_deriv_modulus(zeta)
    }

    pub fn frostman_shift(&self, a: DiskPoint) -> FrostmanShift<'_> {
        FrostmanShift { model: self, shift: a.value() }
    }

    pub fn iterate(&self, z: DiskPoint, n: usize) -> Result<DiskPoint> {
        let mut w = z;
        for _ in 0..n {
            w = self.eval(w)?;
        }
        Ok(w)
    }

    /// `(F^n(z), (F^n)'(z))` on raw values.
    pub fn iterate_deriv(&self, z: Complex, n: usize) -> Result<(Complex, Complex)> {
        let mut w = z;
        let mut d = ONE;
        for _ in 0..n {
            let (v, dv) = self.eval_deriv_raw(w)?;
            d *= dv;
            w = v;
        }
        Ok((w, d))
    }

    /// `(P, Q)` with `F = P / Q`, coefficients ascending. Only for finite
    /// Blaschke products.
    pub fn numerator_denominator(&self) -> (Vec<Complex>, Vec<Complex>) {
        let mut p = alloc::vec![self.rotation];
        let mut q = alloc::vec![ONE];
        for &a in &self.zeros {
            let r = a.norm();
            if r == 0.0 {
                p = crate::poly::mul(&p, &[ZERO, ONE]);
            } else {
                let u = r / a;
                p = crate::poly::mul(&p, &[u * a, -u]);
                q = crate::poly::mul(&q, &[ONE, -a.conj()]);
            }
        }
        (p, q)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        use core::fmt::Write;
        let _ = write!(s, "{self}");
        s
    }
}

fn blaschke_factor(a: Complex, z: Complex) -> Result<(Complex, Complex)> {
    let r = a.norm();
    if r == 0.0 {
        return Ok((z, ONE));
    }
    let den = ONE - a.conj() * z;
    if den.norm() == 0.0 {
        bail!(Pole, "Blaschke factor pole at {z}");
    }
    let u = r / a;
    Ok((u * (a - z) / den, u * (r * r - 1.0) / (den * den)))
}

impl DiskMap for InnerModel {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        self.eval_deriv_raw(z)
    }
}

/// `F_a = (F - a) / (1 - ā F)`, kept as a lazy composition.
#[derive(Clone, Copy, Debug)]
pub struct FrostmanShift<'a> {
    pub model: &'a InnerModel,
    pub shift: Complex,
}

impl DiskMap for FrostmanShift<'_> {
    fn eval_deriv(&self, z: Complex) -> Result<(Complex, Complex)> {
        let (f, df) = self.model.eval_deriv_raw(z)?;
        let a = self.shift;
        let den = ONE - a.conj() * f;
        Ok(((f - a) / den, df * (1.0 - a.norm_sqr()) / (den * den)))
    }
}

impl FrostmanShift<'_> {
    pub fn eval_point(&self, z: DiskPoint) -> Result<DiskPoint> {
        DiskPoint::new(self.eval(z.value())?)
    }
}

impl fmt::Display for InnerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rotation={:.16e},{:.16e}", self.rotation.re, self.rotation.im)?;
        for a in &self.zeros {
            writeln!(f, "zero={:.16e},{:.16e}", a.re, a.im)?;
        }
        for atom in &self.atoms {
            writeln!(f, "atom={:.16e},{:.16e}", atom.angle, atom.weight)?;
        }
        Ok(())
    }
}

/// Parses `a,b` into two floats.
pub fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let mut parts = s.split(',');
    let (Some(x), Some(y), None) = (parts.next(), parts.next(), parts.next()) else {
        bail!(Usage, "expected `re,im`, got `{s}`");
    };
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Usage(alloc::format!("bad number `{t}`")));
    Ok((parse(x)?, parse(y)?))
}

impl FromStr for InnerModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rotation = None;
        let mut zeros = Vec::new();
        let mut atoms = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(Usage, "line {}: expected key=value", lineno + 1);
            };
            let (x, y) = parse_pair(value)?;
            match key.trim() {
                "rotation" => {
                    if rotation.replace(Complex::new(x, y)).is_some() {
                        bail!(Usage, "line {}: duplicate rotation", lineno + 1);
                    }
                }
                "zero" => zeros.push(Complex::new(x, y)),
                "atom" => atoms.push(Atom { angle: x, weight: y }),
                other => bail!(Usage, "line {}: unknown key `{other}`", lineno + 1),
            }
        }
        let Some(rotation) = rotation else {
            bail!(Usage, "model text has no rotation line");
        };
        // keep the stored rotation bit-exact: only renormalize when clearly off
        let m = Self::new(rotation, zeros, atoms)?;
        Ok(Self { rotation, ..m })
    }
}
