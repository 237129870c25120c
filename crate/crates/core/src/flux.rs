//! Fluxes, potentials and the edge-toggle game.
//!
//! A flux is a bit per face; a potential is a bit per edge with δA = μ.
//! Toggling edge e flips A(e) and therefore μ on the faces containing e.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology, relative_cohomology};
use crate::complex::{CellComplex, Subcomplex};
use crate::constraint::{Classification, Level, Witness};
use crate::error::{Error, Result};
use crate::gf2::{solve_affine, AffineSolution, BitVector};

fn check_flux(x: &CellComplex, mu: &BitVector) -> Result<()> {
    if mu.len() != x.n_faces() {
        return Err(Error::DimensionMismatch { expected: x.n_faces(), got: mu.len() });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PotentialResult {
    Potential(BitVector),
    /// Coordinates of the flux class in H².
    Obstructed(BitVector),
}

/// Solves δA = μ.
pub fn find_potential(x: &CellComplex, mu: &BitVector) -> Result<PotentialResult> {
    check_flux(x, mu)?;
    match solve_affine(&x.coboundary(1)?, mu)? {
        AffineSolution::Solvable { particular, .. } => Ok(PotentialResult::Potential(particular)),
        AffineSolution::Infeasible { .. } => Ok(PotentialResult::Obstructed(sector(x, mu)?)),
    }
}

/// Coordinates of [μ] in H²(X).
pub fn sector(x: &CellComplex, mu: &BitVector) -> Result<BitVector> {
    check_flux(x, mu)?;
    cohomology(x, 2)?.coords(mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Every edge may be toggled.
    #[default]
    Free,
    /// Edges on the boundary of the surface are fixed.
    Frozen,
}

impl std::str::FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Self::Free),
            "frozen" => Ok(Self::Frozen),
            other => Err(Error::InvalidParams(format!("unknown boundary mode {other}"))),
        }
    }
}

/// Mask of edges that may be toggled under `mode`.
pub fn toggleable(x: &CellComplex, mode: BoundaryMode) -> BitVector {
    let mut m = BitVector::ones(x.n_edges());
    if mode == BoundaryMode::Frozen {
        for e in x.boundary_edges() {
            m.set(e, false);
        }
    }
    m
}

/// Sector invariant under `mode`: H²(X) when free, H²(X, ∂X) when frozen.
pub fn sector_in(x: &CellComplex, mu: &BitVector, mode: BoundaryMode) -> Result<BitVector> {
    match mode {
        BoundaryMode::Free => sector(x, mu),
        BoundaryMode::Frozen => {
            check_flux(x, mu)?;
            let rim = Subcomplex::from_edges(x, &x.boundary_edges())?;
            relative_cohomology(x, &rim, 2)?.coords(mu)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reachability {
    /// Toggling these edges once each turns the source flux into the target.
    Reachable { moves: Vec<usize> },
    /// The invariants of the two fluxes differ.
    Unreachable { from: BitVector, to: BitVector },
}

impl Reachability {
    pub fn is_reachable(&self) -> bool {
        matches!(self, Reachability::Reachable { .. })
    }
}

/// Whether `to` can be reached from `from` by toggles allowed under `mode`.
pub fn reachable(x: &CellComplex, from: &BitVector, to: &BitVector, mode: BoundaryMode) -> Result<Reachability> {
    check_flux(x, from)?;
    check_flux(x, to)?;
    let allowed = toggleable(x, mode).support();
    let d = x.coboundary(1)?.select_columns(&allowed);
    match solve_affine(&d, &from.xor(to))? {
        AffineSolution::Solvable { particular, .. } => {
            Ok(Reachability::Reachable { moves: particular.iter_ones().map(|i| allowed[i]).collect() })
        }
        AffineSolution::Infeasible { .. } => {
            Ok(Reachability::Unreachable { from: sector_in(x, from, mode)?, to: sector_in(x, to, mode)? })
        }
    }
}

/// A flux reachable from `from`: each allowed edge is toggled with
/// probability one half, drawn from a seeded ChaCha8 stream in edge order.
pub fn scramble(x: &CellComplex, from: &BitVector, mode: BoundaryMode, seed: u64) -> Result<BitVector> {
    check_flux(x, from)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let allowed = toggleable(x, mode);
    let a =
        BitVector::from_bools(&(0..x.n_edges()).map(|e| rng.random_bool(0.5) && allowed.get(e)).collect::<Vec<_>>());
    Ok(from.xor(&x.apply_coboundary(1, &a)?))
}

/// Inaccessibility verdict for a pair of fluxes, or `None` when reachable.
pub fn classify_reachability(
    x: &CellComplex,
    from: &BitVector,
    to: &BitVector,
    mode: BoundaryMode,
) -> Result<Option<Classification>> {
    Ok(match reachable(x, from, to, mode)? {
        Reachability::Reachable { .. } => None,
        Reachability::Unreachable { from, to } => {
            let key = match mode {
                BoundaryMode::Free => "H2(X)",
                BoundaryMode::Frozen => "H2(X,dX)",
            };
            Some(Classification {
                level: Level::Inaccessibility,
                groups: BTreeMap::from([(key.to_string(), from.len())]),
                witness: Witness::Sectors { from, to },
                secondary: None,
                class: None,
            })
        }
    })
}

/// Toggle game: the current flux is always `start + δA`, A being the XOR of
/// all toggled edges.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSession {
    complex: Arc<CellComplex>,
    mode: BoundaryMode,
    start: BitVector,
    target: BitVector,
    allowed: BitVector,
    potential: BitVector,
    current: BitVector,
    log: Vec<usize>,
}

impl GameSession {
    pub fn new(complex: Arc<CellComplex>, mode: BoundaryMode, start: BitVector, target: BitVector) -> Result<Self> {
        check_flux(&complex, &start)?;
        check_flux(&complex, &target)?;
        Ok(Self {
            allowed: toggleable(&complex, mode),
            potential: BitVector::zeros(complex.n_edges()),
            current: start.clone(),
            complex,
            mode,
            start,
            target,
            log: Vec::new(),
        })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn start(&self) -> &BitVector {
        &self.start
    }

    pub fn target(&self) -> &BitVector {
        &self.target
    }

    pub fn current(&self) -> &BitVector {
        &self.current
    }

    pub fn potential(&self) -> &BitVector {
        &self.potential
    }

    pub fn log(&self) -> &[usize] {
        &self.log
    }

    pub fn won(&self) -> bool {
        self.current == self.target
    }

    pub fn toggleable_edges(&self) -> Vec<usize> {
        self.allowed.support()
    }

    pub fn toggle(&mut self, edge: usize) -> Result<()> {
        let ne = self.complex.n_edges();
        if edge >= ne {
            return Err(Error::OutOfRange { what: "edge", index: edge, count: ne });
        }
        if !self.allowed.get(edge) {
            return Err(Error::FrozenEdge(edge));
        }
        self.potential.flip(edge);
        for (f, walk) in self.complex.faces().iter().enumerate() {
            if walk.iter().filter(|&&e| e == edge).count() % 2 == 1 {
                self.current.flip(f);
            }
        }
        self.log.push(edge);
        Ok(())
    }

    pub fn toggled(&self, edge: usize) -> Result<Self> {
        let mut next = self.clone();
        next.toggle(edge)?;
        Ok(next)
    }

    pub fn reset(&mut self) {
        self.potential = BitVector::zeros(self.complex.n_edges());
        self.current = self.start.clone();
        self.log.clear();
    }

    /// Rebuilds a session from its start state and move log.
    pub fn replay(
        complex: Arc<CellComplex>,
        mode: BoundaryMode,
        start: BitVector,
        target: BitVector,
        moves: &[usize],
    ) -> Result<Self> {
        let mut s = Self::new(complex, mode, start, target)?;
        for &e in moves {
            s.toggle(e)?;
        }
        Ok(s)
    }

    /// Invariant of the current flux under this session's boundary mode.
    pub fn sector(&self) -> Result<BitVector> {
        sector_in(&self.complex, &self.current, self.mode)
    }

    /// Moves from the current flux to the target, or the separating invariants.
    pub fn solve(&self) -> Result<Reachability> {
        reachable(&self.complex, &self.current, &self.target, self.mode)
    }

    pub fn state(&self) -> Result<GameState> {
        Ok(GameState {
            faces: self.current.clone(),
            target: self.target.clone(),
            sector: self.sector()?,
            moves: self.log.len(),
            won: self.won(),
            toggleable_edges: self.toggleable_edges(),
            mode: self.mode,
        })
    }
}

/// Snapshot of a session as served to clients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub faces: BitVector,
    pub target: BitVector,
    pub sector: BitVector,
    pub moves: usize,
    pub won: bool,
    pub toggleable_edges: Vec<usize>,
    pub mode: BoundaryMode,
}
