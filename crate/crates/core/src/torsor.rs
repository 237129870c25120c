//! Double covers presented by couplings, monodromy, and aperture transport.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology, CohomologyBasis};
use crate::complex::{walk_vertices, CellComplex};
use crate::constraint::{solve_sections, CouplingSystem, SectionResult};
use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// The two-sheeted cover of the constraint graph: lifted vertex `s * n + v`
/// sits on sheet `s` over base vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCover {
    n_base: usize,
    base_edges: Vec<(usize, usize)>,
    /// parent edge index of each base edge
    parent_edges: Vec<usize>,
    crossed: BitVector,
}

impl DoubleCover {
    pub fn n_base_vertices(&self) -> usize {
        self.n_base
    }

    pub fn n_vertices(&self) -> usize {
        2 * self.n_base
    }

    pub fn lift(&self, v: usize, sheet: bool) -> usize {
        sheet as usize * self.n_base + v
    }

    /// Base vertex and sheet of a lifted vertex.
    pub fn project(&self, lifted: usize) -> (usize, bool) {
        (lifted % self.n_base, lifted >= self.n_base)
    }

    /// Parent-complex edge indices of the base graph, in order.
    pub fn parent_edges(&self) -> &[usize] {
        &self.parent_edges
    }

    pub fn is_crossed(&self, base_edge: usize) -> bool {
        self.crossed.get(base_edge)
    }

    /// Lifted edges, two per base edge: the one leaving sheet 0 first.
    pub fn lifted_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(2 * self.base_edges.len());
        for (i, &(u, v)) in self.base_edges.iter().enumerate() {
            let c = self.crossed.get(i);
            out.push((self.lift(u, false), self.lift(v, c)));
            out.push((self.lift(u, true), self.lift(v, !c)));
        }
        out
    }

    /// Normalized lifted edge set, for comparing covers.
    pub fn lifted_edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.lifted_edges().into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect()
    }

    /// Image of the cover under the sheet relabeling (s, v) → (s + ξ(v), v).
    pub fn relabel(&self, xi: &BitVector) -> BTreeSet<(usize, usize)> {
        let map = |x: usize| {
            let (v, s) = self.project(x);
            self.lift(v, s ^ xi.get(v))
        };
        self.lifted_edges()
            .into_iter()
            .map(|(a, b)| {
                let (a, b) = (map(a), map(b));
                (a.min(b), a.max(b))
            })
            .collect()
    }

    /// Connected components of the total space, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.n_vertices());
        for (a, b) in self.lifted_edges() {
            uf.union(a, b);
        }
        group(&mut uf, self.n_vertices())
    }

    /// The deck transformation swaps sheets everywhere.
    pub fn deck_flip(&self, lifted: usize) -> usize {
        let (v, s) = self.project(lifted);
        self.lift(v, !s)
    }

    fn base_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.n_base);
        for &(u, v) in &self.base_edges {
            uf.union(u, v);
        }
        group(&mut uf, self.n_base)
    }
}

fn group(uf: &mut UnionFind<usize>, n: usize) -> Vec<Vec<usize>> {
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        by_root.entry(uf.find_mut(v)).or_default().push(v);
    }
    let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Cover of the constraint graph presented by the effective coupling.
pub fn build_cover(sys: &CouplingSystem) -> Result<DoubleCover> {
    let x = sys.complex();
    let g = sys.constraint_edges();
    if g.is_zero() {
        return Err(Error::EmptyConstraintGraph);
    }
    let c = sys.effective_coupling();
    let parent_edges = g.support();
    let base_edges = parent_edges.iter().map(|&e| x.edge(e)).collect();
    let crossed = c.select(&parent_edges);
    Ok(DoubleCover { n_base: x.n_vertices(), base_edges, parent_edges, crossed })
}

/// Triviality of the cover over one component of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Triviality {
    /// Two components; the sections give each base vertex's sheet in them.
    Trivial { sections: [BitVector; 2] },
    /// The lift over this component is connected.
    Nontrivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCover {
    pub base_vertices: Vec<usize>,
    pub triviality: Triviality,
}

/// Per base component: trivial with both sections, or connected.
pub fn cover_triviality(cover: &DoubleCover) -> Vec<ComponentCover> {
    let lifted = cover.components();
    let mut owner = vec![0; cover.n_vertices()];
    for (i, comp) in lifted.iter().enumerate() {
        for &x in comp {
            owner[x] = i;
        }
    }
    cover
        .base_components()
        .into_iter()
        .map(|base| {
            let root = base[0];
            let triviality = if owner[cover.lift(root, false)] == owner[cover.lift(root, true)] {
                Triviality::Nontrivial
            } else {
                let mut s = BitVector::zeros(cover.n_base);
                for &v in &base {
                    if owner[cover.lift(v, true)] == owner[cover.lift(root, false)] {
                        s.set(v, true);
                    }
                }
                let mut t = s.clone();
                for &v in &base {
                    t.flip(v);
                }
                Triviality::Trivial { sections: [s, t] }
            };
            ComponentCover { base_vertices: base, triviality }
        })
        .collect()
}

/// Lifts a closed walk (parent edge indices) from sheet 0 and reports
/// whether it ends on sheet 1.
pub fn monodromy(cover: &DoubleCover, walk: &[usize]) -> Result<bool> {
    let index: HashMap<usize, usize> = cover.parent_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let local: Vec<usize> =
        walk.iter().map(|e| index.get(e).copied().ok_or(Error::WalkLeavesGraph(*e))).collect::<Result<_>>()?;
    let verts = walk_vertices(&cover.base_edges, &local).ok_or(Error::OpenWalk)?;
    let mut at = cover.lift(verts[0], false);
    for (step, &i) in local.iter().enumerate() {
        let (u, v) = cover.base_edges[i];
        let (base, sheet) = cover.project(at);
        debug_assert_eq!(base, verts[step]);
        let next = if base == u { v } else { u };
        at = cover.lift(next, sheet ^ cover.crossed.get(i));
    }
    Ok(cover.project(at).1)
}

/// A sheet relabeling ξ with c_b = c_a + δξ on the constraint graph, if the
/// two systems are cohomologous.
pub fn cover_isomorphism(a: &CouplingSystem, b: &CouplingSystem) -> Result<Option<BitVector>> {
    if a.complex() != b.complex() || a.constraint_edges() != b.constraint_edges() {
        return Err(Error::ComplexMismatch);
    }
    let diff = a.effective_coupling().xor(&b.effective_coupling());
    let probe = CouplingSystem::new(a.complex().clone(), a.constraint_edges().clone(), diff, None, BTreeMap::new())?;
    Ok(match solve_sections(&probe) {
        SectionResult::Feasible(s) => Some(s.particular().clone()),
        SectionResult::Infeasible(_) => None,
    })
}

/// A constraint graph that is a single cycle through every vertex, read off
/// in a fixed order: position 0 is vertex 0's ring slot, and ring edge `p`
/// joins positions `p` and `p + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingView {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    coupling: Vec<bool>,
}

impl RingView {
    pub fn new(sys: &CouplingSystem) -> Result<Self> {
        let x = sys.complex();
        let n = x.n_vertices();
        let g: Vec<usize> = sys.constraint_edges().support();
        if n < 3 || g.len() != n {
            return Err(Error::NotACycle(format!("{} vertices, {} constraint edges", n, g.len())));
        }
        let mut inc = vec![Vec::new(); n];
        for &e in &g {
            let (u, v) = x.edge(e);
            if u == v {
                return Err(Error::NotACycle(format!("loop edge {e}")));
            }
            inc[u].push(e);
            inc[v].push(e);
        }
        if let Some(v) = (0..n).find(|&v| inc[v].len() != 2) {
            return Err(Error::NotACycle(format!("vertex {v} has degree {}", inc[v].len())));
        }
        let mut vertices = vec![0];
        let mut edges = Vec::with_capacity(n);
        let mut at = 0;
        let mut via = inc[0][0].min(inc[0][1]);
        loop {
            edges.push(via);
            let (u, v) = x.edge(via);
            at = if u == at { v } else { u };
            if at == 0 {
                break;
            }
            vertices.push(at);
            via = if inc[at][0] == via { inc[at][1] } else { inc[at][0] };
        }
        if vertices.len() != n {
            return Err(Error::NotACycle("constraint graph is disconnected".into()));
        }
        let c = sys.effective_coupling();
        let coupling = edges.iter().map(|&e| c.get(e)).collect();
        Ok(Self { vertices, edges, coupling })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, position: usize) -> usize {
        self.vertices[position % self.len()]
    }

    pub fn edge(&self, position: usize) -> usize {
        self.edges[position % self.len()]
    }

    pub fn coupling(&self, position: usize) -> bool {
        self.coupling[position % self.len()]
    }

    /// The full cycle as an edge walk.
    pub fn walk(&self) -> &[usize] {
        &self.edges
    }

    pub fn holonomy(&self) -> bool {
        self.coupling.iter().filter(|&&b| b).count() % 2 == 1
    }
}

/// A contiguous window of `k` ring positions showing a local section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aperture<'a> {
    ring: &'a RingView,
    start: usize,
    display: Vec<bool>,
}

impl<'a> Aperture<'a> {
    /// Window at `start` whose first vertex shows `first`; the rest follows
    /// by transport inside the window.
    pub fn new(ring: &'a RingView, start: usize, k: usize, first: bool) -> Result<Self> {
        let n = ring.len();
        if k == 0 {
            return Err(Error::InvalidParams("window length must be at least 1".into()));
        }
        if k >= n {
            return Err(Error::ApertureNotContractible { window: k, cycle: n });
        }
        let mut display = vec![first];
        for j in 1..k {
            display.push(display[j - 1] ^ ring.coupling(start + j - 1));
        }
        Ok(Self { ring, start: start % n, display })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.display.len()
    }

    pub fn is_empty(&self) -> bool {
        self.display.is_empty()
    }

    pub fn display(&self) -> &[bool] {
        &self.display
    }

    pub fn window(&self) -> Vec<usize> {
        (0..self.len()).map(|j| self.ring.vertex(self.start + j)).collect()
    }

    /// Every constraint edge inside the window is satisfied.
    pub fn is_consistent(&self) -> bool {
        (1..self.len()).all(|j| self.display[j] == self.display[j - 1] ^ self.ring.coupling(self.start + j - 1))
    }

    /// Advances one position forward (`true`) or backward.
    pub fn slide(&self, forward: bool) -> Aperture<'a> {
        let n = self.ring.len();
        let k = self.len();
        let mut display = self.display.clone();
        let start = if forward {
            let last = display[k - 1] ^ self.ring.coupling(self.start + k - 1);
            display.remove(0);
            display.push(last);
            (self.start + 1) % n
        } else {
            let prev = (self.start + n - 1) % n;
            let first = display[0] ^ self.ring.coupling(prev);
            display.pop();
            display.insert(0, first);
            prev
        };
        Aperture { ring: self.ring, start, display }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub window: Vec<usize>,
    pub display: Vec<u8>,
}

/// Display snapshots of a transport run, for animation export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub flip: u8,
}

impl Trace {
    pub fn flipped(&self) -> bool {
        self.flip == 1
    }
}

/// Slides a `k`-window around the ring `laps` times from position `start`,
/// starting with display `sheet` at the window's first vertex.
pub fn circuit_from(sys: &CouplingSystem, k: usize, laps: usize, start: usize, sheet: bool) -> Result<Trace> {
    let ring = RingView::new(sys)?;
    let mut ap = Aperture::new(&ring, start, k, sheet)?;
    let snap = |a: &Aperture| TraceStep { window: a.window(), display: a.display().iter().map(|&b| b as u8).collect() };
    let mut steps = vec![snap(&ap)];
    for _ in 0..laps * ring.len() {
        ap = ap.slide(true);
        debug_assert!(ap.is_consistent());
        steps.push(snap(&ap));
    }
    let flip = steps[0].display[0] ^ steps[steps.len() - 1].display[0];
    Ok(Trace { steps, flip })
}

/// Full-circuit transport from position 0 on sheet 0.
pub fn circuit_monodromy(sys: &CouplingSystem, k: usize, laps: usize) -> Result<Trace> {
    circuit_from(sys, k, laps, 0, false)
}

/// The graph of unordered pairs of disjoint windows on a ring, with the
/// cocycle induced by the opposite-spin rule.
///
/// Configuration `{a, b}` (a < b, window starts as ring positions) carries a
/// partition bit: the display at the anchor of window `a`. Sliding a window
/// transports its anchor display across one ring edge, and a slide across
/// position n−1 → 0 exchanges which window is `a`; the cocycle on a move is
/// the XOR of those two effects.
#[derive(Debug, Clone)]
pub struct DualConfig {
    n: usize,
    k: usize,
    configs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    graph: CellComplex,
    cocycle: BitVector,
    moves: HashMap<(usize, usize), usize>,
    h1: CohomologyBasis,
}

impl DualConfig {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn configs(&self) -> &[(usize, usize)] {
        &self.configs
    }

    pub fn config_index(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn graph(&self) -> &CellComplex {
        &self.graph
    }

    pub fn cocycle(&self) -> &BitVector {
        &self.cocycle
    }

    pub fn h1(&self) -> &CohomologyBasis {
        &self.h1
    }

    /// The torsor as a coupling system on the configuration graph.
    pub fn as_system(&self) -> CouplingSystem {
        CouplingSystem::uniform(self.graph.clone(), false)
            .with_coupling(self.cocycle.clone())
            .expect("cocycle lives on the configuration graph")
    }

    /// Sum of the cocycle around a closed walk of configuration edges.
    pub fn monodromy(&self, walk: &[usize]) -> Result<bool> {
        if let Some(&e) = walk.iter().find(|&&e| e >= self.graph.n_edges()) {
            return Err(Error::OutOfRange { what: "edge", index: e, count: self.graph.n_edges() });
        }
        walk_vertices(self.graph.edges(), walk).ok_or(Error::OpenWalk)?;
        Ok(walk.iter().filter(|&&e| self.cocycle.get(e)).count() % 2 == 1)
    }

    /// Both windows slide forward until they have traded places: the one
    /// starting at 0 advances n/2 steps, the other the remaining n − n/2.
    pub fn exchange_loop(&self) -> Result<Vec<usize>> {
        let (n, k) = (self.n, self.k);
        let gap = |from: usize, to: usize| (to + n - from) % n;
        let (mut s, mut t) = (0, n / 2);
        let (mut ds, mut dt) = (n / 2, n - n / 2);
        let mut walk = Vec::new();
        while ds + dt > 0 {
            let from = self.config_index(s, t).expect("valid configuration");
            if ds > 0 && gap(s + 1, t) >= k {
                s = (s + 1) % n;
                ds -= 1;
            } else if dt > 0 && gap(t + 1, s) >= k {
                t = (t + 1) % n;
                dt -= 1;
            } else {
                return Err(Error::InvalidParams("windows cannot pass".into()));
            }
            let to = self.config_index(s, t).expect("valid configuration");
            walk.push(self.moves[&(from.min(to), from.max(to))]);
        }
        Ok(walk)
    }
}

/// Configuration torsor of two disjoint k-windows on an n-ring whose
/// neighbours agree.
pub fn dual_config_torsor(n: usize, k: usize) -> Result<DualConfig> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("ring needs n >= 3, got {n}")));
    }
    let ring = CellComplex::graph(n, (0..n).map(|i| (i, (i + 1) % n)).collect())?;
    dual_config_on(&CouplingSystem::uniform(ring, false), k)
}

/// Configuration torsor over an arbitrary ring system.
pub fn dual_config_on(sys: &CouplingSystem, k: usize) -> Result<DualConfig> {
    let ring = RingView::new(sys)?;
    let n = ring.len();
    if k == 0 || 2 * k >= n {
        return Err(Error::InvalidParams(format!("two disjoint {k}-windows need 2k < n = {n}")));
    }
    let disjoint = |a: usize, b: usize| (b + n - a) % n >= k && (a + n - b) % n >= k;
    let mut configs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if disjoint(a, b) {
                configs.push((a, b));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = configs.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges = Vec::new();
    let mut bits = Vec::new();
    let mut moves = HashMap::new();
    for (i, &(a, b)) in configs.iter().enumerate() {
        for (mover, other) in [(a, b), (b, a)] {
            let to = (mover + 1) % n;
            if !disjoint(to, other) {
                continue;
            }
            let j = index[&(to.min(other), to.max(other))];
            let swap = to == 0;
            moves.insert((i.min(j), i.max(j)), edges.len());
            edges.push((i, j));
            bits.push(swap ^ ring.coupling(mover));
        }
    }
    let graph = CellComplex::graph(configs.len(), edges)?;
    let h1 = cohomology(&graph, 1)?;
    Ok(DualConfig { n, k, configs, index, graph, cocycle: BitVector::from_bools(&bits), moves, h1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{gear_ring, gear_torus, ring_system, torus_generators};
    use crate::constraint::holonomy;

    #[test]
    fn single_agreement_edge_cover() {
        let x = CellComplex::graph(2, vec![(0, 1)]).unwrap();
        let cover = build_cover(&CouplingSystem::uniform(x, false)).unwrap();
        assert_eq!(cover.lifted_edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(cover.components().len(), 2);
    }

    #[test]
    fn ring_covers() {
        let odd = build_cover(&gear_ring(5).unwrap()).unwrap();
        assert_eq!(odd.components().len(), 1);
        assert_eq!(cover_triviality(&odd)[0].triviality, Triviality::Nontrivial);
        let even = build_cover(&ring_system(6, true).unwrap()).unwrap();
        assert_eq!(even.components().len(), 2);
        match &cover_triviality(&even)[0].triviality {
            Triviality::Trivial { sections } => {
                assert_eq!(sections[0], BitVector::from_u8s(&[0, 1, 0, 1, 0, 1]));
                assert_eq!(sections[1], BitVector::from_u8s(&[1, 0, 1, 0, 1, 0]));
            }
            t => panic!("expected trivial, got {t:?}"),
        }
    }

    #[test]
    fn empty_graph_has_no_cover() {
        let x = CellComplex::graph(2, vec![(0, 1)]).unwrap();
        let sys = CouplingSystem::new(x, BitVector::zeros(1), BitVector::zeros(1), None, BTreeMap::new()).unwrap();
        assert_eq!(build_cover(&sys).unwrap_err(), Error::EmptyConstraintGraph);
    }

    #[test]
    fn monodromy_examples() {
        let sys = gear_ring(5).unwrap();
        let cover = build_cover(&sys).unwrap();
        assert!(!monodromy(&cover, &[1, 1]).unwrap());
        let lap: Vec<usize> = (0..5).collect();
        assert!(monodromy(&cover, &lap).unwrap());
        let twice: Vec<usize> = lap.iter().chain(&lap).copied().collect();
        assert!(!monodromy(&cover, &twice).unwrap());
        assert_eq!(monodromy(&cover, &[0, 1]).unwrap_err(), Error::OpenWalk);
    }

    #[test]
    fn torus_generator_is_nontrivial() {
        let sys = gear_torus(3, 3).unwrap();
        let cover = build_cover(&sys).unwrap();
        let (h, v) = torus_generators(3, 3);
        assert!(monodromy(&cover, &h).unwrap());
        assert!(monodromy(&cover, &v).unwrap());
        assert_eq!(holonomy(&sys, &h).unwrap(), monodromy(&cover, &h).unwrap());
    }

    #[test]
    fn cohomologous_couplings_give_isomorphic_covers() {
        let a = gear_ring(5).unwrap();
        let xi = BitVector::from_u8s(&[1, 0, 0, 1, 1]);
        let shift = a.complex().apply_coboundary(0, &xi).unwrap();
        let b = a.with_coupling(a.coupling().xor(&shift)).unwrap();
        let found = cover_isomorphism(&a, &b).unwrap().unwrap();
        let (ca, cb) = (build_cover(&a).unwrap(), build_cover(&b).unwrap());
        assert_eq!(ca.relabel(&found), cb.lifted_edge_set());
        let c = a.with_coupling(BitVector::from_u8s(&[1, 1, 1, 1, 0])).unwrap();
        assert_eq!(cover_isomorphism(&a, &c).unwrap(), None);
    }

    #[test]
    fn aperture_slides() {
        let agree = ring_system(5, false).unwrap();
        let ring = RingView::new(&agree).unwrap();
        let mut ap = Aperture::new(&ring, 0, 1, true).unwrap();
        for _ in 0..7 {
            ap = ap.slide(true);
            assert_eq!(ap.display(), &[true]);
        }
        let oppose = gear_ring(5).unwrap();
        let ring = RingView::new(&oppose).unwrap();
        let ap = Aperture::new(&ring, 0, 2, false).unwrap();
        assert_eq!(ap.display(), &[false, true]);
        let next = ap.slide(true);
        assert_eq!(next.display(), &[true, false]);
        assert_eq!(next.slide(false), ap);
        assert!(matches!(
            Aperture::new(&ring, 0, 5, false),
            Err(Error::ApertureNotContractible { window: 5, cycle: 5 })
        ));
    }

    #[test]
    fn circuit_examples() {
        assert_eq!(circuit_monodromy(&ring_system(6, true).unwrap(), 2, 1).unwrap().flip, 0);
        let five = gear_ring(5).unwrap();
        let one = circuit_monodromy(&five, 1, 1).unwrap();
        assert_eq!(one.flip, 1);
        assert_eq!(one.steps.len(), 6);
        assert_eq!(circuit_monodromy(&five, 3, 2).unwrap().flip, 0);
        let x = CellComplex::graph(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert!(matches!(circuit_monodromy(&CouplingSystem::uniform(x, true), 1, 1), Err(Error::NotACycle(_))));
    }

    #[test]
    fn deck_flip_swaps_the_trace() {
        let sys = gear_ring(7).unwrap();
        let a = circuit_from(&sys, 3, 1, 2, false).unwrap();
        let b = circuit_from(&sys, 3, 1, 2, true).unwrap();
        for (x, y) in a.steps.iter().zip(&b.steps) {
            assert_eq!(x.window, y.window);
            assert!(x.display.iter().zip(&y.display).all(|(p, q)| p ^ q == 1));
        }
        assert_eq!(a.flip, b.flip);
    }

    #[test]
    fn dual_config_small() {
        let d = dual_config_torsor(3, 1).unwrap();
        assert_eq!(d.configs().len(), 3);
        assert_eq!(d.graph().n_edges(), 3);
        let lp = d.exchange_loop().unwrap();
        assert_eq!(lp.len(), 3);
        assert!(d.monodromy(&lp).unwrap());
        assert!(dual_config_torsor(6, 3).is_err());
    }

    #[test]
    fn trace_json_shape() {
        let t = circuit_monodromy(&gear_ring(3).unwrap(), 1, 1).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["flip"], 1);
        assert_eq!(v["steps"][0]["window"], serde_json::json!([0]));
        assert_eq!(v["steps"][1]["display"], serde_json::json!([1]));
    }
}
