//! Rayon-backed expanders.
//!
//! Each parent is expanded independently and results are collected in
//! parent order, so trees do not depend on the thread count.

use innerlab_core::parabolic::{hp_raw_preimages, HalfPlaneExpander, HalfPlaneInner};
use innerlab_core::preimage::{raw_preimages, Expander};
use innerlab_core::{Complex, InnerModel};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::Error;

/// Below this many parents a batch is expanded on the calling thread.
const MIN_PARALLEL_BATCH: usize = 64;

pub const THREADS_ENV: &str = "INNERLAB_THREADS";

/// Flag value, else `INNERLAB_THREADS`, else all cores (0).
pub fn thread_count(flag: Option<usize>) -> Result<usize, Error> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Usage(format!("{THREADS_ENV}={v} is not a thread count"))),
        Err(_) => Ok(0),
    }
}

pub fn build_pool(threads: usize) -> Result<ThreadPool, Error> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::Pool(e.to_string()))
}

pub struct RayonExpander<'a> {
    pool: &'a ThreadPool,
}

impl<'a> RayonExpander<'a> {
    pub fn new(pool: &'a ThreadPool) -> Self {
        Self { pool }
    }

    fn run<T: Sync>(
        &self,
        parents: &[Complex],
        model: &T,
        f: impl Fn(&T, Complex) -> innerlab_core::Result<Vec<Complex>> + Sync,
    ) -> innerlab_core::Result<Vec<Vec<Complex>>> {
        if parents.len() < MIN_PARALLEL_BATCH || self.pool.current_num_threads() == 1 {
            return parents.iter().map(|&z| f(model, z)).collect();
        }
        self.pool.install(|| parents.par_iter().map(|&z| f(model, z)).collect())
    }
}

impl Expander for RayonExpander<'_> {
    fn expand(&self, model: &InnerModel, parents: &[Complex]) -> innerlab_core::Result<Vec<Vec<Complex>>> {
        self.run(parents, model, raw_preimages)
    }
}

impl HalfPlaneExpander for RayonExpander<'_> {
    fn expand(&self, f: &HalfPlaneInner, parents: &[Complex]) -> innerlab_core::Result<Vec<Vec<Complex>>> {
        self.run(parents, f, hp_raw_preimages)
    }
}
