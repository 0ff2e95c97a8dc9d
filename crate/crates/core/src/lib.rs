//! Numerics for orbit counting under inner functions.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches files,
//! threads or the command line lives in the `innerlab` companion crate.
//!
//! Layout:
//!
//! - [`hypgeo`]: hyperbolic distance, Möbius maps, numerical geodesic curvature.
//! - [`innerfn`]: finite Blaschke products with optional singular atoms.
//! - [`preimage`]: exact preimages and the pruned tree of repeated preimages.
//! - [`counting`]: counting functions, Cesàro averages and their targets.
//! - [`lyapunov`]: the Lyapunov exponent by quadrature, Jensen and Birkhoff.
//! - [`distortion`]: Möbius and linear distortion, radial integrals.
//! - [`lamination`]: inverse orbits, the solenoid, exponential coordinates,
//!   box masses and shadowing.
//! - [`parabolic`]: half-plane maps with a parabolic point at infinity.
#![no_std]
// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod counting;
pub mod distortion;
pub mod error;
pub mod hypgeo;
pub mod innerfn;
pub mod lamination;
pub mod logpolar;
pub mod lyapunov;
pub mod math;
pub mod parabolic;
pub mod poly;
pub mod preimage;
pub mod quad;
pub mod stats;

pub use num_complex::Complex64 as Complex;

pub use error::{Error, ErrorKind, Result};
pub use hypgeo::{DiskPoint, HalfPlanePoint, Moebius, MoebiusDomain, Point};
pub use innerfn::{Atom, BoundaryPoint, DiskMap, InnerModel};
