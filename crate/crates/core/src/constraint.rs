//! Coupling systems on constraint graphs.
//!
//! A [`CouplingSystem`] marks which edges of an ambient complex carry a
//! bistable constraint and, for each, whether its endpoints must agree (0) or
//! oppose (1). An optional twist cochain records frame reversals; the
//! constraint that is actually enforced is the XOR of the two. Only cycle sums
//! of either field are ever reported, since splitting a coupling into flat and
//! twist parts is gauge-dependent at the cochain level.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology, relative_cohomology, RelativeClass};
use crate::complex::{region_boundary_edges, walk_vertices, CellComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A constraint graph inside an ambient complex, with coupling, optional
/// twist, and optional pinned vertex values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct CouplingSystem {
    complex: CellComplex,
    constraint_edges: BitVector,
    coupling: BitVector,
    twist: Option<BitVector>,
    pinned: BTreeMap<usize, bool>,
}

/// On-disk form: per-constraint-edge arrays aligned with `constraint_edges`.
#[derive(Serialize, Deserialize)]
struct SystemRepr {
    #[serde(default)]
    schema_version: Option<u32>,
    complex: CellComplex,
    constraint_edges: Vec<usize>,
    coupling: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twist: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pinned: Option<BTreeMap<usize, u8>>,
}

impl TryFrom<SystemRepr> for CouplingSystem {
    type Error = Error;

    fn try_from(r: SystemRepr) -> Result<Self> {
        if let Some(v) = r.schema_version.filter(|&v| v != crate::SCHEMA_VERSION) {
            return Err(Error::InvalidParams(format!("unsupported schema version {v}")));
        }
        let ne = r.complex.n_edges();
        let mut mask = BitVector::zeros(ne);
        for &e in &r.constraint_edges {
            if e >= ne {
                return Err(Error::OutOfRange { what: "edge", index: e, count: ne });
            }
            if mask.get(e) {
                return Err(Error::InvalidParams(format!("constraint edge {e} listed twice")));
            }
            mask.set(e, true);
        }
        let spread = |bits: &[u8], what: &str| -> Result<BitVector> {
            if bits.len() != r.constraint_edges.len() {
                return Err(Error::InvalidParams(format!(
                    "{what} has {} entries for {} constraint edges",
                    bits.len(),
                    r.constraint_edges.len()
                )));
            }
            let mut v = BitVector::zeros(ne);
            for (&e, &b) in r.constraint_edges.iter().zip(bits) {
                if b > 1 {
                    return Err(Error::InvalidParams(format!("{what} value {b} is not a bit")));
                }
                v.set(e, b == 1);
            }
            Ok(v)
        };
        let coupling = spread(&r.coupling, "coupling")?;
        let twist = r.twist.as_deref().map(|t| spread(t, "twist")).transpose()?;
        let mut pinned = BTreeMap::new();
        for (v, b) in r.pinned.unwrap_or_default() {
            if b > 1 {
                return Err(Error::InvalidParams(format!("pinned value {b} is not a bit")));
            }
            pinned.insert(v, b == 1);
        }
        CouplingSystem::new(r.complex, mask, coupling, twist, pinned)
    }
}

impl From<CouplingSystem> for SystemRepr {
    fn from(s: CouplingSystem) -> Self {
        let edges: Vec<usize> = s.constraint_edges.support();
        let gather = |v: &BitVector| edges.iter().map(|&e| v.get(e) as u8).collect::<Vec<_>>();
        SystemRepr {
            schema_version: Some(crate::SCHEMA_VERSION),
            coupling: gather(&s.coupling),
            twist: s.twist.as_ref().map(gather),
            pinned: if s.pinned.is_empty() {
                None
            } else {
                Some(s.pinned.iter().map(|(&v, &b)| (v, b as u8)).collect())
            },
            constraint_edges: edges,
            complex: s.complex,
        }
    }
}

impl CouplingSystem {
    pub fn new(
        complex: CellComplex,
        constraint_edges: BitVector,
        coupling: BitVector,
        twist: Option<BitVector>,
        pinned: BTreeMap<usize, bool>,
    ) -> Result<Self> {
        let ne = complex.n_edges();
        for v in [Some(&constraint_edges), Some(&coupling), twist.as_ref()].into_iter().flatten() {
            if v.len() != ne {
                return Err(Error::DimensionMismatch { expected: ne, got: v.len() });
            }
        }
        let outside = constraint_edges.not();
        if let Some(e) = coupling.and(&outside).first_one() {
            return Err(Error::InvalidParams(format!("coupling set on free edge {e}")));
        }
        if let Some(e) = twist.as_ref().and_then(|t| t.and(&outside).first_one()) {
            return Err(Error::InvalidParams(format!("twist set on free edge {e}")));
        }
        if let Some((&v, _)) = pinned.iter().find(|(&v, _)| v >= complex.n_vertices()) {
            return Err(Error::OutOfRange { what: "vertex", index: v, count: complex.n_vertices() });
        }
        Ok(Self { complex, constraint_edges, coupling, twist, pinned })
    }

    /// Every edge constrained with the same coupling value.
    pub fn uniform(complex: CellComplex, value: bool) -> Self {
        let ne = complex.n_edges();
        let coupling = if value { BitVector::ones(ne) } else { BitVector::zeros(ne) };
        Self::new(complex, BitVector::ones(ne), coupling, None, BTreeMap::new()).expect("uniform system is valid")
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn constraint_edges(&self) -> &BitVector {
        &self.constraint_edges
    }

    pub fn is_constraint(&self, e: usize) -> bool {
        self.constraint_edges.get(e)
    }

    pub fn coupling(&self) -> &BitVector {
        &self.coupling
    }

    pub fn twist(&self) -> Option<&BitVector> {
        self.twist.as_ref()
    }

    pub fn pinned(&self) -> &BTreeMap<usize, bool> {
        &self.pinned
    }

    /// Coupling XOR twist, zero off the constraint graph.
    pub fn effective_coupling(&self) -> BitVector {
        match &self.twist {
            Some(t) => self.coupling.xor(t),
            None => self.coupling.clone(),
        }
    }

    pub fn with_pins(&self, pinned: BTreeMap<usize, bool>) -> Result<Self> {
        Self::new(
            self.complex.clone(),
            self.constraint_edges.clone(),
            self.coupling.clone(),
            self.twist.clone(),
            pinned,
        )
    }

    pub fn with_coupling(&self, coupling: BitVector) -> Result<Self> {
        Self::new(
            self.complex.clone(),
            self.constraint_edges.clone(),
            coupling,
            self.twist.clone(),
            self.pinned.clone(),
        )
    }

    /// Removes vertices together with every incident edge and face.
    pub fn delete_vertices(&self, doomed: &[usize]) -> Result<Self> {
        if let Some(&v) = doomed.iter().find(|&&v| v >= self.complex.n_vertices()) {
            return Err(Error::OutOfRange { what: "vertex", index: v, count: self.complex.n_vertices() });
        }
        let (x, vmap, emap) = self.complex.delete_vertices(doomed);
        let ne = x.n_edges();
        let carry = |v: &BitVector| BitVector::from_support(ne, v.iter_ones().filter_map(|e| emap[e]));
        let pinned = self.pinned.iter().filter_map(|(&v, &b)| vmap[v].map(|nv| (nv, b))).collect();
        Self::new(x, carry(&self.constraint_edges), carry(&self.coupling), self.twist.as_ref().map(carry), pinned)
    }

    /// The constraint graph as a standalone complex (all vertices, constraint
    /// edges only) with the parent index of each kept edge.
    pub fn constraint_graph(&self) -> (CellComplex, Vec<usize>) {
        self.complex.subgraph(&self.constraint_edges)
    }

    /// Adjacency lists of the constraint graph, sorted by edge index.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.complex.n_vertices()];
        for e in self.constraint_edges.iter_ones() {
            let (u, v) = self.complex.edge(e);
            adj[u].push((v, e));
            if u != v {
                adj[v].push((u, e));
            }
        }
        adj
    }

    /// Breadth-first spanning forest of the constraint graph.
    pub fn spanning_forest(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.complex.n_vertices()];
        let mut tree = Vec::new();
        for root in 0..self.complex.n_vertices() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut q = VecDeque::from([root]);
            while let Some(u) = q.pop_front() {
                for &(w, e) in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        tree.push(e);
                        q.push_back(w);
                    }
                }
            }
        }
        tree.sort_unstable();
        tree
    }

    /// Converts a cyclic vertex list into an edge walk through the constraint
    /// graph, taking the lowest-index constraint edge between neighbours.
    pub fn walk_from_vertices(&self, cycle: &[usize]) -> Result<Vec<usize>> {
        let n = cycle.len();
        if n < 2 {
            return Err(Error::OpenWalk);
        }
        (0..n)
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % n]);
                self.constraint_edges
                    .iter_ones()
                    .find(|&e| {
                        let (u, v) = self.complex.edge(e);
                        (u, v) == (a, b) || (u, v) == (b, a)
                    })
                    .ok_or(Error::MissingEdge(a, b))
            })
            .collect()
    }

    fn check_walk(&self, walk: &[usize]) -> Result<Vec<usize>> {
        if let Some(&e) = walk.iter().find(|&&e| e >= self.complex.n_edges() || !self.constraint_edges.get(e)) {
            return Err(Error::WalkLeavesGraph(e));
        }
        walk_vertices(self.complex.edges(), walk).ok_or(Error::OpenWalk)
    }
}

/// XOR of the effective coupling around a closed walk in the constraint graph.
pub fn holonomy(sys: &CouplingSystem, walk: &[usize]) -> Result<bool> {
    sys.check_walk(walk)?;
    let c = sys.effective_coupling();
    Ok(walk.iter().filter(|&&e| c.get(e)).count() % 2 == 1)
}

/// Flat-frame, twist, and total holonomy of a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDecomposition {
    pub flat: bool,
    pub twist: bool,
    pub total: bool,
}

/// Splits the holonomy of a cycle into its coupling and twist sums. A missing
/// twist field counts as zero.
pub fn twist_decompose(sys: &CouplingSystem, walk: &[usize]) -> Result<TwistDecomposition> {
    sys.check_walk(walk)?;
    let sum = |v: &BitVector| walk.iter().filter(|&&e| v.get(e)).count() % 2 == 1;
    let flat = sum(sys.coupling());
    let twist = sys.twist().is_some_and(sum);
    Ok(TwistDecomposition { flat, twist, total: flat ^ twist })
}

/// Evidence attached to solver results and classifications.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A particular section and the number of sections as a power of two.
    Sections { particular: BitVector, log2_count: usize },
    /// A closed walk with holonomy 1.
    Cycle { vertices: Vec<usize>, edges: Vec<usize> },
    /// Two pinned vertices whose values clash under transport along the path.
    PinnedPath { from: usize, to: usize, vertices: Vec<usize>, edges: Vec<usize> },
    /// A face region whose constrained boundary has holonomy 1.
    Region { faces: Vec<usize>, boundary: Vec<usize> },
    /// Sector coordinates separating two fluxes.
    Sectors { from: BitVector, to: BitVector },
}

/// All global sections of a feasible system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sections {
    particular: BitVector,
    free_components: Vec<Vec<usize>>,
}

impl Sections {
    pub fn particular(&self) -> &BitVector {
        &self.particular
    }

    /// Components of the constraint graph with no pinned vertex; flipping any
    /// of them maps sections to sections.
    pub fn free_components(&self) -> &[Vec<usize>] {
        &self.free_components
    }

    pub fn log2_count(&self) -> usize {
        self.free_components.len()
    }

    pub fn count(&self) -> Option<u128> {
        1u128.checked_shl(self.free_components.len() as u32)
    }

    /// Indicator vectors of the free components: a basis of the solution
    /// space of the homogeneous system.
    pub fn flip_basis(&self) -> Vec<BitVector> {
        let n = self.particular.len();
        self.free_components.iter().map(|c| BitVector::from_support(n, c.iter().copied())).collect()
    }

    /// Enumerates every section. Only sensible for a handful of free components.
    pub fn iter(&self) -> impl Iterator<Item = BitVector> + '_ {
        let basis = self.flip_basis();
        let k = basis.len();
        assert!(k < 32, "too many sections to enumerate");
        (0u64..1 << k).map(move |mask| {
            let mut x = self.particular.clone();
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x.xor_assign(b);
                }
            }
            x
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionResult {
    Feasible(Sections),
    Infeasible(Witness),
}

impl SectionResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SectionResult::Feasible(_))
    }
}

/// Transport data for one component of the constraint graph.
struct Transport {
    vertices: Vec<usize>,
    /// value relative to the root
    value: Vec<bool>,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
}

struct Analysis {
    components: Vec<Vec<usize>>,
    transport: Transport,
    /// first odd cycle per component, by component index
    odd_cycles: Vec<Option<Witness>>,
}

fn analyze(sys: &CouplingSystem) -> Analysis {
    let n = sys.complex.n_vertices();
    let adj = sys.adjacency();
    let c = sys.effective_coupling();
    let mut t = Transport { vertices: Vec::new(), value: vec![false; n], parent: vec![None; n], depth: vec![0; n] };
    let mut comp_of = vec![usize::MAX; n];
    let mut components = Vec::new();
    for root in 0..n {
        if comp_of[root] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![root];
        comp_of[root] = id;
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            for &(w, e) in &adj[u] {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    t.value[w] = t.value[u] ^ c.get(e);
                    t.parent[w] = Some((u, e));
                    t.depth[w] = t.depth[u] + 1;
                    members.push(w);
                    q.push_back(w);
                }
            }
        }
        members.sort_unstable();
        t.vertices.extend(&members);
        components.push(members);
    }

    let mut odd_cycles = vec![None; components.len()];
    for e in sys.constraint_edges.iter_ones() {
        let (u, v) = sys.complex.edge(e);
        let id = comp_of[u];
        if odd_cycles[id].is_none() && (t.value[u] ^ t.value[v] ^ c.get(e)) {
            odd_cycles[id] = Some(cycle_through(&t, u, v, e));
        }
    }
    Analysis { components, transport: t, odd_cycles }
}

/// Closed walk: tree path lca→u, edge e to v, tree path v→lca.
fn cycle_through(t: &Transport, u: usize, v: usize, e: usize) -> Witness {
    let (mut a, mut b) = (u, v);
    let mut up_a: Vec<(usize, usize)> = Vec::new();
    let mut up_b: Vec<(usize, usize)> = Vec::new();
    while a != b {
        if t.depth[a] >= t.depth[b] {
            let (p, pe) = t.parent[a].expect("non-root");
            up_a.push((a, pe));
            a = p;
        } else {
            let (p, pe) = t.parent[b].expect("non-root");
            up_b.push((b, pe));
            b = p;
        }
    }
    let lca = a;
    let mut vertices = vec![lca];
    let mut edges = Vec::new();
    for &(w, pe) in up_a.iter().rev() {
        edges.push(pe);
        vertices.push(w);
    }
    edges.push(e);
    vertices.push(v);
    for &(w, pe) in &up_b {
        let _ = w;
        edges.push(pe);
        let (p, _) = t.parent[w].expect("non-root");
        vertices.push(p);
    }
    Witness::Cycle { vertices, edges }
}

/// BFS path between two vertices of the constraint graph.
fn bfs_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        if u == to {
            break;
        }
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((u, e));
                q.push_back(w);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let (mut vs, mut es) = (vec![to], Vec::new());
    let mut cur = to;
    while let Some((p, e)) = prev[cur] {
        es.push(e);
        vs.push(p);
        cur = p;
    }
    vs.reverse();
    es.reverse();
    Some((vs, es))
}

fn bfs_dist(adj: &[Vec<(usize, usize)>], from: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[from] = Some(0);
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        let d = dist[u].expect("queued");
        for &(w, _) in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                q.push_back(w);
            }
        }
    }
    dist
}

/// Shortest pinned pair whose values clash under transport, skipping
/// components that contain an odd cycle.
fn pin_clash(sys: &CouplingSystem, an: &Analysis) -> Option<Witness> {
    let adj = sys.adjacency();
    let mut comp_of = vec![0; sys.complex.n_vertices()];
    for (i, c) in an.components.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let pins: Vec<(usize, bool)> =
        sys.pinned.iter().map(|(&v, &b)| (v, b)).filter(|&(v, _)| an.odd_cycles[comp_of[v]].is_none()).collect();
    let value = &an.transport.value;
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, &(a, pa)) in pins.iter().enumerate() {
        let clashing: Vec<usize> = pins[i + 1..]
            .iter()
            .filter(|&&(b, pb)| comp_of[a] == comp_of[b] && (pa ^ pb) != (value[a] ^ value[b]))
            .map(|&(b, _)| b)
            .collect();
        if clashing.is_empty() {
            continue;
        }
        let dist = bfs_dist(&adj, a);
        for b in clashing {
            let d = dist[b].expect("same component");
            if best.is_none_or(|(bd, _, _)| d < bd) {
                best = Some((d, a, b));
            }
        }
    }
    best.map(|(_, a, b)| {
        let (vertices, edges) = bfs_path(&adj, a, b).expect("same component");
        Witness::PinnedPath { from: a, to: b, vertices, edges }
    })
}

/// Solves δx = c_eff on the constraint graph with x fixed on pinned vertices.
pub fn solve_sections(sys: &CouplingSystem) -> SectionResult {
    let an = analyze(sys);
    if let Some(w) = an.odd_cycles.iter().flatten().next() {
        return SectionResult::Infeasible(w.clone());
    }
    if let Some(w) = pin_clash(sys, &an) {
        return SectionResult::Infeasible(w);
    }
    let n = sys.complex.n_vertices();
    let mut x = BitVector::zeros(n);
    let mut free = Vec::new();
    for comp in &an.components {
        let anchor = comp.iter().find_map(|v| sys.pinned.get(v).map(|&b| (*v, b)));
        let offset = match anchor {
            Some((v, b)) => b ^ an.transport.value[v],
            None => {
                free.push(comp.clone());
                false
            }
        };
        for &v in comp {
            if an.transport.value[v] ^ offset {
                x.set(v, true);
            }
        }
    }
    SectionResult::Feasible(Sections { particular: x, free_components: free })
}

/// The five levels of the obstruction hierarchy, in increasing degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    Ambiguity,
    Conflict,
    Impossibility,
    Curvature,
    Inaccessibility,
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub level: Level,
    pub witness: Witness,
    /// A lower-severity obstruction found alongside the reported one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary: Option<Witness>,
    /// Dimensions of the cohomology groups behind the verdict.
    pub groups: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<RelativeClass>,
}

impl Classification {
    /// Re-checks the witness against the system.
    pub fn verify(&self, sys: &CouplingSystem) -> bool {
        match &self.witness {
            Witness::Cycle { edges, .. } => holonomy(sys, edges).unwrap_or(false),
            Witness::PinnedPath { from, to, edges, .. } => {
                let c = sys.effective_coupling();
                let transported = edges.iter().filter(|&&e| c.get(e)).count() % 2 == 1;
                match (sys.pinned.get(from), sys.pinned.get(to)) {
                    (Some(&a), Some(&b)) => (a ^ b) != transported,
                    _ => false,
                }
            }
            Witness::Sections { particular, .. } => {
                let x = &sys.complex;
                let d = x.apply_coboundary(0, particular).expect("vertex cochain");
                d.and(sys.constraint_edges()) == sys.effective_coupling()
                    && sys.pinned.iter().all(|(&v, &b)| particular.get(v) == b)
            }
            Witness::Region { boundary, .. } => {
                let c = sys.effective_coupling();
                boundary.iter().filter(|&&e| c.get(e)).count() % 2 == 1
            }
            Witness::Sectors { from, to } => from != to,
        }
    }
}

/// Coordinates of the effective coupling in H¹ of the constraint graph.
pub fn coupling_class(sys: &CouplingSystem) -> Result<BitVector> {
    let (g, kept) = sys.constraint_graph();
    let c = sys.effective_coupling().select(&kept);
    cohomology(&g, 1)?.coords(&c)
}

/// Relative class in H¹(G, A) obstructing the pinned problem, A = pinned vertices.
fn pin_obstruction(sys: &CouplingSystem) -> Result<(RelativeClass, usize)> {
    let (g, kept) = sys.constraint_graph();
    let pins: Vec<usize> = sys.pinned.keys().copied().collect();
    let a = Subcomplex::from_vertices(&g, &pins)?;
    let x0 = BitVector::from_support(g.n_vertices(), sys.pinned.iter().filter(|(_, &b)| b).map(|(&v, _)| v));
    let rep = sys.effective_coupling().select(&kept).xor(&g.apply_coboundary(0, &x0)?);
    let h = relative_cohomology(&g, &a, 1)?;
    let coordinates = h.coords(&rep)?;
    Ok((RelativeClass { degree: 1, coordinates, representative: rep }, h.dim()))
}

/// Classifies the system as Impossibility, Conflict, or Ambiguity.
///
/// An odd cycle outranks a pin clash; when both occur the clash is kept as
/// the secondary witness.
pub fn classify(sys: &CouplingSystem) -> Classification {
    let an = analyze(sys);
    let (g, _) = sys.constraint_graph();
    let mut groups = BTreeMap::new();
    groups.insert("H0(G)".to_string(), an.components.len());
    let h1 = cohomology(&g, 1).map(|h| h.dim()).unwrap_or(0);
    groups.insert("H1(G)".to_string(), h1);

    if let Some(w) = an.odd_cycles.iter().flatten().next() {
        return Classification {
            level: Level::Impossibility,
            witness: w.clone(),
            secondary: pin_clash(sys, &an),
            groups,
            class: None,
        };
    }
    if let Some(w) = pin_clash(sys, &an) {
        groups.insert("H0(A)".to_string(), sys.pinned.len());
        let class = pin_obstruction(sys).ok().map(|(cls, dim)| {
            groups.insert("H1(G,A)".to_string(), dim);
            cls
        });
        return Classification { level: Level::Conflict, witness: w, secondary: None, groups, class };
    }
    match solve_sections(sys) {
        SectionResult::Feasible(s) => Classification {
            level: Level::Ambiguity,
            witness: Witness::Sections { particular: s.particular.clone(), log2_count: s.log2_count() },
            secondary: None,
            groups,
            class: None,
        },
        SectionResult::Infeasible(_) => unreachable!("analysis found no obstruction"),
    }
}

/// Classification relative to a face region D with ∂D in the constraint
/// graph: nonzero boundary holonomy is reported as Curvature with its class
/// in H²(D, ∂D); otherwise this defers to [`classify`].
pub fn classify_region(sys: &CouplingSystem, faces: &[usize]) -> Result<Classification> {
    let hol = boundary_holonomy(sys, faces)?;
    if !hol {
        return Ok(classify(sys));
    }
    let x = sys.complex();
    let region = Subcomplex::closure_of_faces(x, faces)?;
    let (d, [_, es, _]) = x.restrict(&region);
    let boundary = region_boundary_edges(x, faces)?;
    let local: Vec<usize> =
        boundary.iter().map(|e| es.binary_search(e).expect("boundary edge lies in the region")).collect();
    let rim = Subcomplex::from_edges(&d, &local)?;
    let c = sys.effective_coupling().select(&es).and(&rim.edges);
    let class = crate::cohomology::connecting(&d, &rim, 1, &c)?;
    let mut groups = BTreeMap::new();
    groups.insert("H1(dD)".to_string(), cohomology(&d.restrict(&rim).0, 1)?.dim());
    groups.insert("H2(D,dD)".to_string(), relative_cohomology(&d, &rim, 2)?.dim());
    let mut faces = faces.to_vec();
    faces.sort_unstable();
    faces.dedup();
    Ok(Classification {
        level: Level::Curvature,
        witness: Witness::Region { faces, boundary },
        secondary: None,
        groups,
        class: Some(class),
    })
}

/// How free edges are filled when extending a coupling over the 1-skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreeEdgeValues {
    Zero,
    /// Independent fair bits from a seeded ChaCha8 stream, in edge order.
    Seed(u64),
    /// Explicit values; unspecified free edges are zero.
    Assignment(BTreeMap<usize, bool>),
}

/// A coupling extended to every edge of the ambient complex, with its curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedCoupling<'a> {
    base: &'a CouplingSystem,
    values: BitVector,
    curvature: BitVector,
}

impl<'a> ExtendedCoupling<'a> {
    pub fn base(&self) -> &'a CouplingSystem {
        self.base
    }

    pub fn values(&self) -> &BitVector {
        &self.values
    }

    /// μ = δ(extension), one bit per face.
    pub fn curvature(&self) -> &BitVector {
        &self.curvature
    }

    pub fn frustrated_faces(&self) -> Vec<usize> {
        self.curvature.support()
    }
}

pub fn extend_coupling(sys: &CouplingSystem, free: FreeEdgeValues) -> Result<ExtendedCoupling<'_>> {
    let x = sys.complex();
    let mut values = sys.effective_coupling();
    match free {
        FreeEdgeValues::Zero => {}
        FreeEdgeValues::Seed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for e in 0..x.n_edges() {
                let bit: bool = rng.random();
                if !sys.is_constraint(e) && bit {
                    values.set(e, true);
                }
            }
        }
        FreeEdgeValues::Assignment(map) => {
            for (&e, &b) in &map {
                if e >= x.n_edges() {
                    return Err(Error::OutOfRange { what: "edge", index: e, count: x.n_edges() });
                }
                if sys.is_constraint(e) {
                    return Err(Error::ConstraintEdge(e));
                }
                values.set(e, b);
            }
        }
    }
    let curvature = x.apply_coboundary(1, &values)?;
    Ok(ExtendedCoupling { base: sys, values, curvature })
}

/// Sum of the effective coupling over ∂D; errors if ∂D leaves the constraint graph.
pub fn boundary_holonomy(sys: &CouplingSystem, faces: &[usize]) -> Result<bool> {
    let boundary = region_boundary_edges(sys.complex(), faces)?;
    let free: Vec<usize> = boundary.iter().copied().filter(|&e| !sys.is_constraint(e)).collect();
    if !free.is_empty() {
        return Err(Error::BoundaryNotConstrained(free));
    }
    let c = sys.effective_coupling();
    Ok(boundary.iter().filter(|&&e| c.get(e)).count() % 2 == 1)
}

/// Total curvature Σ_{f∈D} μ(f) of a region whose boundary is constrained.
pub fn total_curvature(ext: &ExtendedCoupling<'_>, faces: &[usize]) -> Result<bool> {
    // validates ∂D ⊆ G
    boundary_holonomy(ext.base, faces)?;
    let mut region = BitVector::zeros(ext.curvature.len());
    for &f in faces {
        region.set(f, true);
    }
    Ok(region.dot(&ext.curvature))
}

/// Toggles the extension on a free edge; curvature flips on its incident faces.
pub fn move_defect<'a>(ext: &ExtendedCoupling<'a>, edge: usize) -> Result<ExtendedCoupling<'a>> {
    let x = ext.base.complex();
    if edge >= x.n_edges() {
        return Err(Error::OutOfRange { what: "edge", index: edge, count: x.n_edges() });
    }
    if ext.base.is_constraint(edge) {
        return Err(Error::ConstraintEdge(edge));
    }
    let mut values = ext.values.clone();
    values.flip(edge);
    let mut curvature = ext.curvature.clone();
    for (f, walk) in x.faces().iter().enumerate() {
        if walk.iter().filter(|&&e| e == edge).count() % 2 == 1 {
            curvature.flip(f);
        }
    }
    Ok(ExtendedCoupling { base: ext.base, values, curvature })
}
