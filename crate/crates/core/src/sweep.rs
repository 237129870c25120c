//! Batch workloads: classifying many systems, flux-sector census, and random
//! Stokes trials. Each runs sequentially or on the rayon pool; results do
//! not depend on the choice.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::cohomology;
use crate::complex::CellComplex;
use crate::constraint::{
    boundary_holonomy, classify, extend_coupling, total_curvature, Classification, CouplingSystem, FreeEdgeValues,
};
use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is on, otherwise sequential.
    #[default]
    Parallel,
}

fn map_indexed<R, F>(n: usize, exec: Exec, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

pub fn classify_batch(systems: &[CouplingSystem], exec: Exec) -> Vec<Classification> {
    map_indexed(systems.len(), exec, |i| classify(&systems[i]))
}

/// Number of fluxes in each H² sector, enumerating all 2^F fluxes.
pub fn sector_census(x: &CellComplex, exec: Exec) -> Result<BTreeMap<BitVector, u64>> {
    let f = x.n_faces();
    if f > 24 {
        return Err(Error::InvalidParams(format!("census over {f} faces is too large")));
    }
    let h2 = cohomology(x, 2)?;
    const CHUNK: u64 = 1 << 10;
    let total = 1u64 << f;
    let chunks = total.div_ceil(CHUNK) as usize;
    let partial = map_indexed(chunks, exec, |c| -> Result<BTreeMap<BitVector, u64>> {
        let mut counts = BTreeMap::new();
        let lo = c as u64 * CHUNK;
        for m in lo..(lo + CHUNK).min(total) {
            *counts.entry(h2.coords(&BitVector::from_u64(f, m))?).or_insert(0) += 1;
        }
        Ok(counts)
    });
    let mut out = BTreeMap::new();
    for p in partial {
        for (k, v) in p? {
            *out.entry(k).or_insert(0) += v;
        }
    }
    Ok(out)
}

/// Outcome of [`stokes_trials`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StokesReport {
    pub trials: usize,
    /// (trial, region) pairs where Σ_D μ differed from the boundary holonomy.
    pub failures: Vec<(usize, usize)>,
}

/// Checks Σ_D μ = Σ_∂D c over `trials` seeded random extensions for every
/// region. Trial i uses seed `seed + i`.
pub fn stokes_trials(
    sys: &CouplingSystem,
    regions: &[Vec<usize>],
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<StokesReport> {
    let expected: Vec<bool> = regions.iter().map(|d| boundary_holonomy(sys, d)).collect::<Result<_>>()?;
    let per_trial = map_indexed(trials, exec, |t| -> Result<Vec<(usize, usize)>> {
        let ext = extend_coupling(sys, FreeEdgeValues::Seed(seed.wrapping_add(t as u64)))?;
        let mut bad = Vec::new();
        for (r, d) in regions.iter().enumerate() {
            if total_curvature(&ext, d)? != expected[r] {
                bad.push((t, r));
            }
        }
        Ok(bad)
    });
    let mut failures = Vec::new();
    for b in per_trial {
        failures.extend(b?);
    }
    Ok(StokesReport { trials, failures })
}

/// Random coupling system on a random graph with at most `max_vertices`
/// vertices: random edges, coupling, twist, and occasional pins.
pub fn random_system<R: Rng>(rng: &mut R, max_vertices: usize) -> CouplingSystem {
    let n = rng.random_range(1..=max_vertices.max(1));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.3) {
                edges.push((u, v));
            }
        }
    }
    let m = edges.len();
    let x = CellComplex::graph(n, edges).expect("simple graph");
    let mask = BitVector::from_bools(&(0..m).map(|_| rng.random_bool(0.85)).collect::<Vec<_>>());
    let coupling = BitVector::from_bools(&(0..m).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>()).and(&mask);
    let twist = rng
        .random_bool(0.3)
        .then(|| BitVector::from_bools(&(0..m).map(|_| rng.random_bool(0.2)).collect::<Vec<_>>()).and(&mask));
    let mut pinned = BTreeMap::new();
    if rng.random_bool(0.3) {
        for v in 0..n {
            if rng.random_bool(0.25) {
                pinned.insert(v, rng.random_bool(0.5));
            }
        }
    }
    CouplingSystem::new(x, mask, coupling, twist, pinned).expect("consistent random system")
}

/// `count` random systems from a seeded stream.
pub fn random_systems(count: usize, max_vertices: usize, seed: u64) -> Vec<CouplingSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_system(&mut rng, max_vertices)).collect()
}
