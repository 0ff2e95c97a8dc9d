//! Backward orbits and the natural extension of the boundary map.
//!
//! - [`orbit`]: inverse orbits, the solenoid sampler, transverse weights.
//! - [`expmap`]: exponential coordinates and the geodesic flow.
//! - [`mass`]: box masses and the total mass on a fundamental annulus.
//! - [`shadow`]: radial shadowing of orbits and the good/bad times model.

pub mod expmap;
pub mod mass;
pub mod orbit;
pub mod shadow;

pub use expmap::{cauchy_increments, exponential_map, geodesic_intertwining_check, ExpPoint, DEFAULT_T_CAP};
pub use mass::{total_mass_check, xi_box_mass, AnnularBox, BoxMassEstimate, StratumSum, TotalMass, TotalMassPlan};
pub use orbit::{
    sample_interior_orbit, transverse_weights, InverseOrbit, OrbitKind, SolenoidSampler, TransverseWeight, WeightTree,
};
pub use shadow::{
    leaf_geodesic_point, radial_shadowing_stat, shadowing_simulation, Adversary, BadTimes, ShadowingRun, ShadowingStat,
};
