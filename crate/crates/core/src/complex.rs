//! Combinatorial 2-complexes over Z2.
//!
//! A [`CellComplex`] has indexed vertices, edges given by endpoint pairs, and
//! faces given as closed edge-walks. Faces are stored as edge sequences rather
//! than vertex cycles so parallel edges stay representable.
//!
//! Cup products need ordered simplices, so [`CellComplex::triangulate`] fans
//! every face from its lowest-indexed vertex and returns a [`DeltaComplex`]
//! together with cochain pullbacks that commute with the coboundary.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// A problem found by [`CellComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EdgeVertexOutOfRange { edge: usize, vertex: usize },
    LoopEdge { edge: usize },
    EmptyFace { face: usize },
    FaceEdgeOutOfRange { face: usize, edge: usize },
    RepeatedEdgeInFace { face: usize, edge: usize },
    OpenFaceWalk { face: usize },
    BoundaryOfBoundary,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeVertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge} references missing vertex {vertex}")
            }
            Violation::LoopEdge { edge } => write!(f, "edge {edge} is a loop"),
            Violation::EmptyFace { face } => write!(f, "face {face} has zero length"),
            Violation::FaceEdgeOutOfRange { face, edge } => {
                write!(f, "face {face} references missing edge {edge}")
            }
            Violation::RepeatedEdgeInFace { face, edge } => {
                write!(f, "face {face} traverses edge {edge} more than once")
            }
            Violation::OpenFaceWalk { face } => write!(f, "open face walk (face {face})"),
            Violation::BoundaryOfBoundary => write!(f, "boundary of boundary is nonzero"),
        }
    }
}

/// Options for [`CellComplex::validate_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ValidationOptions {
    pub allow_loops: bool,
}

/// Vertex sequence of a closed edge-walk: `seq[i]` and `seq[i + 1]` are the
/// ends of `walk[i]`, and `seq[walk.len()] == seq[0]`. Returns `None` if the
/// walk is empty, not contiguous, or does not close.
pub fn walk_vertices(edges: &[(usize, usize)], walk: &[usize]) -> Option<Vec<usize>> {
    let &first = walk.first()?;
    let (a, b) = *edges.get(first)?;
    for start in [a, b] {
        let mut seq = Vec::with_capacity(walk.len() + 1);
        seq.push(start);
        let mut cur = start;
        let mut ok = true;
        for &e in walk {
            let &(u, v) = edges.get(e)?;
            cur = if u == cur {
                v
            } else if v == cur {
                u
            } else {
                ok = false;
                break;
            };
            seq.push(cur);
        }
        if ok && cur == start {
            return Some(seq);
        }
        if a == b {
            break;
        }
    }
    None
}

/// A combinatorial 2-dimensional cell complex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexRepr", into = "ComplexRepr")]
pub struct CellComplex {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<usize>>,
    labels: BTreeMap<String, serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    faces: Vec<Vec<usize>>,
    #[serde(default)]
    labels: BTreeMap<String, serde_json::Value>,
}

impl TryFrom<ComplexRepr> for CellComplex {
    type Error = Error;

    fn try_from(r: ComplexRepr) -> Result<Self> {
        let mut x = CellComplex::new(r.vertices, r.edges.into_iter().map(|[u, v]| (u, v)).collect(), r.faces)?;
        x.labels = r.labels;
        Ok(x)
    }
}

impl From<CellComplex> for ComplexRepr {
    fn from(x: CellComplex) -> Self {
        ComplexRepr {
            vertices: x.n_vertices,
            edges: x.edges.into_iter().map(|(u, v)| [u, v]).collect(),
            faces: x.faces,
            labels: x.labels,
        }
    }
}

impl CellComplex {
    /// Builds and validates a complex with default options.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let x = Self::new_unchecked(n_vertices, edges, faces);
        let v = x.validate();
        if v.is_empty() {
            Ok(x)
        } else {
            Err(Error::InvalidComplex(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")))
        }
    }

    pub fn new_unchecked(n_vertices: usize, edges: Vec<(usize, usize)>, faces: Vec<Vec<usize>>) -> Self {
        Self { n_vertices, edges, faces, labels: BTreeMap::new() }
    }

    /// A graph: vertices and edges, no faces.
    pub fn graph(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(n_vertices, edges, Vec::new())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    /// Number of k-cells.
    pub fn n_cells(&self, k: usize) -> usize {
        match k {
            0 => self.n_vertices,
            1 => self.edges.len(),
            2 => self.faces.len(),
            _ => 0,
        }
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn labels(&self) -> &BTreeMap<String, serde_json::Value> {
        &self.labels
    }

    pub fn set_label(&mut self, key: impl Into<String>, value: serde_json::Value) {
        self.labels.insert(key.into(), value);
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with(ValidationOptions::default())
    }

    /// Checks edge endpoints, face walks, and that ∂₁∂₂ vanishes.
    pub fn validate_with(&self, opts: ValidationOptions) -> Vec<Violation> {
        let mut out = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            for w in [u, v] {
                if w >= self.n_vertices {
                    out.push(Violation::EdgeVertexOutOfRange { edge: e, vertex: w });
                }
            }
            if u == v && !opts.allow_loops {
                out.push(Violation::LoopEdge { edge: e });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut faces_ok = true;
        for (f, walk) in self.faces.iter().enumerate() {
            if walk.is_empty() {
                out.push(Violation::EmptyFace { face: f });
                faces_ok = false;
                continue;
            }
            if let Some(&e) = walk.iter().find(|&&e| e >= self.edges.len()) {
                out.push(Violation::FaceEdgeOutOfRange { face: f, edge: e });
                faces_ok = false;
                continue;
            }
            let mut seen = vec![false; self.edges.len()];
            for &e in walk {
                if seen[e] {
                    out.push(Violation::RepeatedEdgeInFace { face: f, edge: e });
                    break;
                }
                seen[e] = true;
            }
            if walk_vertices(&self.edges, walk).is_none() {
                out.push(Violation::OpenFaceWalk { face: f });
                faces_ok = false;
            }
        }
        if faces_ok {
            let dd = self
                .boundary_matrix(1)
                .and_then(|d1| d1.mul(&self.boundary_matrix(2)?))
                .expect("degrees 1 and 2 exist");
            if !dd.is_zero() {
                out.push(Violation::BoundaryOfBoundary);
            }
        }
        out
    }

    /// ∂₁ (vertices × edges) or ∂₂ (edges × faces), entries mod 2.
    pub fn boundary_matrix(&self, k: usize) -> Result<BitMatrix> {
        match k {
            1 => {
                let mut m = BitMatrix::zeros(self.n_vertices, self.edges.len());
                for (e, &(u, v)) in self.edges.iter().enumerate() {
                    m.flip(u, e);
                    m.flip(v, e);
                }
                Ok(m)
            }
            2 => {
                let mut m = BitMatrix::zeros(self.edges.len(), self.faces.len());
                for (f, walk) in self.faces.iter().enumerate() {
                    for &e in walk {
                        m.flip(e, f);
                    }
                }
                Ok(m)
            }
            _ => Err(Error::DegreeOutOfRange(k)),
        }
    }

    /// δᵏ : Cᵏ → Cᵏ⁺¹ as a matrix. δ² is the empty map to the zero space.
    pub fn coboundary(&self, k: usize) -> Result<BitMatrix> {
        match k {
            0 | 1 => Ok(self.boundary_matrix(k + 1)?.transpose()),
            2 => Ok(BitMatrix::zeros(0, self.faces.len())),
            _ => Err(Error::DegreeOutOfRange(k)),
        }
    }

    /// Applies δᵏ to a k-cochain.
    pub fn apply_coboundary(&self, k: usize, c: &BitVector) -> Result<BitVector> {
        if c.len() != self.n_cells(k) {
            return Err(Error::DimensionMismatch { expected: self.n_cells(k), got: c.len() });
        }
        match k {
            0 => {
                let mut out = BitVector::zeros(self.edges.len());
                for (e, &(u, v)) in self.edges.iter().enumerate() {
                    if c.get(u) != c.get(v) {
                        out.set(e, true);
                    }
                }
                Ok(out)
            }
            1 => {
                let mut out = BitVector::zeros(self.faces.len());
                for (f, walk) in self.faces.iter().enumerate() {
                    if walk.iter().filter(|&&e| c.get(e)).count() % 2 == 1 {
                        out.set(f, true);
                    }
                }
                Ok(out)
            }
            2 => Ok(BitVector::zeros(0)),
            _ => Err(Error::DegreeOutOfRange(k)),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Cyclic vertex sequence of a face: walk edge `i` joins `seq[i]` and `seq[(i+1) % n]`.
    pub fn face_vertices(&self, f: usize) -> Result<Vec<usize>> {
        let mut seq = walk_vertices(&self.edges, &self.faces[f]).ok_or(Error::OpenWalk)?;
        seq.pop();
        Ok(seq)
    }

    /// Faces incident to each edge (with traversal multiplicity).
    pub fn edge_faces(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.edges.len()];
        for (f, walk) in self.faces.iter().enumerate() {
            for &e in walk {
                inc[e].push(f);
            }
        }
        inc
    }

    /// Edges lying in exactly one face.
    pub fn boundary_edges(&self) -> Vec<usize> {
        self.edge_faces().iter().enumerate().filter(|(_, fs)| fs.len() == 1).map(|(e, _)| e).collect()
    }

    /// Every edge lies in exactly two faces.
    pub fn is_closed_surface(&self) -> bool {
        !self.faces.is_empty() && self.edge_faces().iter().all(|fs| fs.len() == 2)
    }

    /// Connected components of the 1-skeleton restricted to `edge_mask`, as
    /// sorted vertex lists ordered by smallest vertex.
    pub fn components(&self, edge_mask: Option<&BitVector>) -> Vec<Vec<usize>> {
        let mut uf = petgraph::unionfind::UnionFind::<usize>::new(self.n_vertices);
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if edge_mask.is_none_or(|m| m.get(e)) {
                uf.union(u, v);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut root_first: HashMap<usize, usize> = HashMap::new();
        for v in 0..self.n_vertices {
            let r = uf.find(v);
            let key = *root_first.entry(r).or_insert(v);
            groups.entry(key).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// The graph with all vertices and only the masked edges.
    pub fn subgraph(&self, edge_mask: &BitVector) -> (CellComplex, Vec<usize>) {
        let kept: Vec<usize> = edge_mask.iter_ones().collect();
        let edges = kept.iter().map(|&e| self.edges[e]).collect();
        (CellComplex::new_unchecked(self.n_vertices, edges, Vec::new()), kept)
    }

    /// Extracts a subcomplex as a complex of its own, reindexing cells in
    /// ascending order. Returns the complex and the parent index of each cell.
    pub fn restrict(&self, sub: &Subcomplex) -> (CellComplex, [Vec<usize>; 3]) {
        let vs: Vec<usize> = sub.vertices.iter_ones().collect();
        let es: Vec<usize> = sub.edges.iter_ones().collect();
        let fs: Vec<usize> = sub.faces.iter_ones().collect();
        let mut vmap = vec![usize::MAX; self.n_vertices];
        for (i, &v) in vs.iter().enumerate() {
            vmap[v] = i;
        }
        let mut emap = vec![usize::MAX; self.edges.len()];
        for (i, &e) in es.iter().enumerate() {
            emap[e] = i;
        }
        let edges = es
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (vmap[u], vmap[v])
            })
            .collect();
        let faces = fs.iter().map(|&f| self.faces[f].iter().map(|&e| emap[e]).collect()).collect();
        (CellComplex::new_unchecked(vs.len(), edges, faces), [vs, es, fs])
    }

    /// Removes vertices with every cell touching them. Returns the new complex
    /// and, per old vertex and edge, its new index if it survived.
    pub fn delete_vertices(&self, doomed: &[usize]) -> (CellComplex, Vec<Option<usize>>, Vec<Option<usize>>) {
        let mut dead = vec![false; self.n_vertices];
        for &v in doomed {
            dead[v] = true;
        }
        let mut vmap = vec![None; self.n_vertices];
        let mut nv = 0;
        for v in 0..self.n_vertices {
            if !dead[v] {
                vmap[v] = Some(nv);
                nv += 1;
            }
        }
        let mut emap = vec![None; self.edges.len()];
        let mut edges = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if let (Some(a), Some(b)) = (vmap[u], vmap[v]) {
                emap[e] = Some(edges.len());
                edges.push((a, b));
            }
        }
        let faces = self.faces.iter().filter_map(|w| w.iter().map(|&e| emap[e]).collect::<Option<Vec<_>>>()).collect();
        let mut x = CellComplex::new_unchecked(nv, edges, faces);
        x.labels = self.labels.clone();
        (x, vmap, emap)
    }

    /// Fan triangulation from each face's lowest-indexed vertex.
    pub fn triangulate(&self) -> Result<DeltaComplex> {
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(self.edges.len());
        let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                return Err(Error::DegenerateTriangulation(format!("edge {e} is a loop")));
            }
            let key = (u.min(v), u.max(v));
            if let Some(prev) = by_pair.insert(key, e) {
                return Err(Error::DegenerateTriangulation(format!("parallel edges {prev} and {e}")));
            }
            edges.push(key);
        }

        let mut diagonals: Vec<Vec<usize>> = Vec::new();
        let mut triangles: Vec<[usize; 3]> = Vec::new();
        let mut face_last_triangle = Vec::with_capacity(self.faces.len());
        for f in 0..self.faces.len() {
            let walk = &self.faces[f];
            let seq = self.face_vertices(f)?;
            let n = seq.len();
            if n < 3 {
                return Err(Error::DegenerateTriangulation(format!("face {f} has fewer than 3 sides")));
            }
            let mut sorted = seq.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NonSimpleFace(f));
            }
            let pos = (0..n).min_by_key(|&i| seq[i]).expect("nonempty face");
            let verts: Vec<usize> = (0..n).map(|i| seq[(pos + i) % n]).collect();
            let walk_edges: Vec<usize> = (0..n).map(|i| walk[(pos + i) % n]).collect();
            let pivot = verts[0];
            // spoke[i] = refined edge from pivot to verts[i]
            let mut spoke = vec![usize::MAX; n];
            spoke[1] = walk_edges[0];
            spoke[n - 1] = walk_edges[n - 1];
            for i in 2..n - 1 {
                let key = (pivot.min(verts[i]), pivot.max(verts[i]));
                if by_pair.contains_key(&key) {
                    return Err(Error::DegenerateTriangulation(format!(
                        "diagonal {}-{} of face {f} duplicates an existing edge",
                        key.0, key.1
                    )));
                }
                by_pair.insert(key, edges.len());
                spoke[i] = edges.len();
                edges.push(key);
                diagonals.push(walk_edges[..i].to_vec());
            }
            for i in 1..n - 1 {
                let mut t = [pivot, verts[i], verts[i + 1]];
                t.sort_unstable();
                triangles.push(t);
            }
            face_last_triangle.push(triangles.len() - 1);
        }

        let tri_edges = triangles
            .iter()
            .map(|t| {
                let find = |a: usize, b: usize| {
                    by_pair
                        .get(&(a, b))
                        .copied()
                        .ok_or_else(|| Error::DegenerateTriangulation(format!("missing edge {a}-{b}")))
                };
                Ok([find(t[0], t[1])?, find(t[1], t[2])?, find(t[0], t[2])?])
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(DeltaComplex {
            n_vertices: self.n_vertices,
            n_parent_edges: self.edges.len(),
            n_parent_faces: self.faces.len(),
            edges,
            triangles,
            tri_edges,
            diagonals,
            face_last_triangle,
        })
    }
}

/// Incremental constructor that shares edges between polygons.
#[derive(Debug, Default, Clone)]
pub struct ComplexBuilder {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<usize>>,
    by_pair: HashMap<(usize, usize), usize>,
}

impl ComplexBuilder {
    pub fn new(n_vertices: usize) -> Self {
        Self { n_vertices, ..Self::default() }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n_vertices += 1;
        self.n_vertices - 1
    }

    /// Returns the edge joining `u` and `v`, creating it if needed.
    pub fn edge(&mut self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        if let Some(&e) = self.by_pair.get(&key) {
            return e;
        }
        self.new_edge(u, v)
    }

    /// Always creates a fresh edge, even if `u` and `v` are already joined.
    pub fn new_edge(&mut self, u: usize, v: usize) -> usize {
        let e = self.edges.len();
        self.edges.push((u, v));
        self.by_pair.entry((u.min(v), u.max(v))).or_insert(e);
        e
    }

    /// Adds a face from a cyclic vertex list, creating edges as needed.
    pub fn polygon(&mut self, verts: &[usize]) -> usize {
        let n = verts.len();
        let walk = (0..n).map(|i| self.edge(verts[i], verts[(i + 1) % n])).collect();
        self.face(walk)
    }

    pub fn face(&mut self, walk: Vec<usize>) -> usize {
        self.faces.push(walk);
        self.faces.len() - 1
    }

    pub fn build(self) -> Result<CellComplex> {
        CellComplex::new(self.n_vertices, self.edges, self.faces)
    }
}

/// A closed subcomplex, stored as cell masks over its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    pub vertices: BitVector,
    pub edges: BitVector,
    pub faces: BitVector,
}

impl Subcomplex {
    /// Checks mask lengths and closure under taking boundaries.
    pub fn new(x: &CellComplex, vertices: BitVector, edges: BitVector, faces: BitVector) -> Result<Self> {
        for (mask, n) in [(&vertices, x.n_vertices()), (&edges, x.n_edges()), (&faces, x.n_faces())] {
            if mask.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: mask.len() });
            }
        }
        for e in edges.iter_ones() {
            let (u, v) = x.edge(e);
            if !vertices.get(u) || !vertices.get(v) {
                return Err(Error::NotClosed(format!("edge {e} present without its endpoints")));
            }
        }
        for f in faces.iter_ones() {
            if let Some(&e) = x.face(f).iter().find(|&&e| !edges.get(e)) {
                return Err(Error::NotClosed(format!("face {f} present without edge {e}")));
            }
        }
        Ok(Self { vertices, edges, faces })
    }

    pub fn empty(x: &CellComplex) -> Self {
        Self {
            vertices: BitVector::zeros(x.n_vertices()),
            edges: BitVector::zeros(x.n_edges()),
            faces: BitVector::zeros(x.n_faces()),
        }
    }

    pub fn from_vertices(x: &CellComplex, vs: &[usize]) -> Result<Self> {
        if let Some(&v) = vs.iter().find(|&&v| v >= x.n_vertices()) {
            return Err(Error::OutOfRange { what: "vertex", index: v, count: x.n_vertices() });
        }
        let mut s = Self::empty(x);
        for &v in vs {
            s.vertices.set(v, true);
        }
        Ok(s)
    }

    /// Closure of a set of edges.
    pub fn from_edges(x: &CellComplex, es: &[usize]) -> Result<Self> {
        let mut s = Self::empty(x);
        for &e in es {
            if e >= x.n_edges() {
                return Err(Error::OutOfRange { what: "edge", index: e, count: x.n_edges() });
            }
            let (u, v) = x.edge(e);
            s.edges.set(e, true);
            s.vertices.set(u, true);
            s.vertices.set(v, true);
        }
        Ok(s)
    }

    /// Closure of a set of faces.
    pub fn closure_of_faces(x: &CellComplex, fs: &[usize]) -> Result<Self> {
        let mut s = Self::empty(x);
        for &f in fs {
            if f >= x.n_faces() {
                return Err(Error::OutOfRange { what: "face", index: f, count: x.n_faces() });
            }
            s.faces.set(f, true);
            for &e in x.face(f) {
                let (u, v) = x.edge(e);
                s.edges.set(e, true);
                s.vertices.set(u, true);
                s.vertices.set(v, true);
            }
        }
        Ok(s)
    }

    /// The mod-2 boundary of a face region, as a closed subcomplex.
    pub fn region_boundary(x: &CellComplex, fs: &[usize]) -> Result<Self> {
        let es = region_boundary_edges(x, fs)?;
        Self::from_edges(x, &es)
    }

    pub fn mask(&self, k: usize) -> &BitVector {
        match k {
            0 => &self.vertices,
            1 => &self.edges,
            _ => &self.faces,
        }
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        let or = |a: &BitVector, b: &BitVector| a.xor(b).xor(&a.and(b));
        Subcomplex {
            vertices: or(&self.vertices, &other.vertices),
            edges: or(&self.edges, &other.edges),
            faces: or(&self.faces, &other.faces),
        }
    }
}

/// Edges appearing an odd number of times across the region's face walks.
pub fn region_boundary_edges(x: &CellComplex, fs: &[usize]) -> Result<Vec<usize>> {
    let mut b = BitVector::zeros(x.n_edges());
    let mut seen = BitVector::zeros(x.n_faces());
    for &f in fs {
        if f >= x.n_faces() {
            return Err(Error::OutOfRange { what: "face", index: f, count: x.n_faces() });
        }
        if seen.get(f) {
            continue;
        }
        seen.set(f, true);
        for &e in x.face(f) {
            b.flip(e);
        }
    }
    Ok(b.support())
}

/// An ordered simplicial 2-complex produced by [`CellComplex::triangulate`].
///
/// Refined edges `0..n_parent_edges` are the parent's edges (reoriented low
/// to high); the rest are fan diagonals.
#[derive(Debug, Clone)]
pub struct DeltaComplex {
    n_vertices: usize,
    n_parent_edges: usize,
    n_parent_faces: usize,
    edges: Vec<(usize, usize)>,
    triangles: Vec<[usize; 3]>,
    tri_edges: Vec<[usize; 3]>,
    /// Parent edges along the face walk from the pivot to each diagonal's far end.
    diagonals: Vec<Vec<usize>>,
    face_last_triangle: Vec<usize>,
}

impl DeltaComplex {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Ordered triangles `(v0, v1, v2)` with `v0 < v1 < v2`.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Refined edges of each triangle: `[v0v1, v1v2, v0v2]`.
    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.tri_edges
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn is_closed_surface(&self) -> bool {
        let mut count = vec![0usize; self.edges.len()];
        for t in &self.tri_edges {
            for &e in t {
                count[e] += 1;
            }
        }
        !self.triangles.is_empty() && count.iter().all(|&c| c == 2)
    }

    /// The same cells viewed as a plain cell complex.
    pub fn as_cell_complex(&self) -> CellComplex {
        let faces = self.tri_edges.iter().map(|t| vec![t[0], t[1], t[2]]).collect();
        CellComplex::new_unchecked(self.n_vertices, self.edges.clone(), faces)
    }

    pub fn coboundary(&self, k: usize) -> Result<BitMatrix> {
        self.as_cell_complex().coboundary(k)
    }

    pub fn apply_coboundary(&self, k: usize, c: &BitVector) -> Result<BitVector> {
        match k {
            0 => {
                if c.len() != self.n_vertices {
                    return Err(Error::DimensionMismatch { expected: self.n_vertices, got: c.len() });
                }
                Ok(BitVector::from_bools(&self.edges.iter().map(|&(u, v)| c.get(u) != c.get(v)).collect::<Vec<_>>()))
            }
            1 => {
                if c.len() != self.edges.len() {
                    return Err(Error::DimensionMismatch { expected: self.edges.len(), got: c.len() });
                }
                Ok(BitVector::from_bools(
                    &self.tri_edges.iter().map(|t| c.get(t[0]) ^ c.get(t[1]) ^ c.get(t[2])).collect::<Vec<_>>(),
                ))
            }
            _ => Err(Error::DegreeOutOfRange(k)),
        }
    }

    /// Pullback of a parent 1-cochain. A diagonal from the pivot `p` to walk
    /// vertex `w` gets the sum of the parent cochain along the walk from `p` to `w`.
    pub fn pullback1(&self, c: &BitVector) -> Result<BitVector> {
        if c.len() != self.n_parent_edges {
            return Err(Error::DimensionMismatch { expected: self.n_parent_edges, got: c.len() });
        }
        let mut out = BitVector::zeros(self.edges.len());
        for e in c.iter_ones() {
            out.set(e, true);
        }
        for (i, path) in self.diagonals.iter().enumerate() {
            if path.iter().filter(|&&e| c.get(e)).count() % 2 == 1 {
                out.set(self.n_parent_edges + i, true);
            }
        }
        Ok(out)
    }

    /// Pullback of a parent 2-cochain: each face value lands on the face's
    /// last fan triangle, which makes pullback commute with δ.
    pub fn pullback2(&self, mu: &BitVector) -> Result<BitVector> {
        if mu.len() != self.n_parent_faces {
            return Err(Error::DimensionMismatch { expected: self.n_parent_faces, got: mu.len() });
        }
        let mut out = BitVector::zeros(self.triangles.len());
        for f in mu.iter_ones() {
            out.set(self.face_last_triangle[f], true);
        }
        Ok(out)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn torus_grid(rows: usize, cols: usize) -> CellComplex {
        let id = |r: usize, c: usize| (r % rows) * cols + (c % cols);
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
        }
        for r in 0..rows {
            for c in 0..cols {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
        let h = |r: usize, c: usize| (r % rows) * cols + (c % cols);
        let v = |r: usize, c: usize| rows * cols + (r % rows) * cols + (c % cols);
        let faces =
            (0..rows).flat_map(|r| (0..cols).map(move |c| vec![h(r, c), v(r, c + 1), h(r + 1, c), v(r, c)])).collect();
        CellComplex::new(rows * cols, edges, faces).unwrap()
    }

    #[test]
    fn triangle_validates() {
        let x = CellComplex::new(3, vec![(0, 1), (1, 2), (2, 0)], vec![vec![0, 1, 2]]).unwrap();
        assert!(x.validate().is_empty());
        assert_eq!(x.euler_characteristic(), 1);
    }

    #[test]
    fn open_walk_is_reported() {
        let x = CellComplex::new_unchecked(4, vec![(0, 1), (1, 2), (2, 3)], vec![vec![0, 1, 2]]);
        let v = x.validate();
        assert_eq!(v, vec![Violation::OpenFaceWalk { face: 0 }]);
        assert!(v[0].to_string().contains("open face walk"));
        assert!(CellComplex::new(4, vec![(0, 1), (1, 2), (2, 3)], vec![vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn loops_and_empty_faces() {
        let x = CellComplex::new_unchecked(1, vec![(0, 0)], vec![vec![]]);
        let v = x.validate();
        assert!(v.contains(&Violation::LoopEdge { edge: 0 }));
        let x = CellComplex::new_unchecked(1, vec![(0, 0)], vec![vec![0]]);
        assert!(x.validate_with(ValidationOptions { allow_loops: true }).is_empty());
        let x = CellComplex::new_unchecked(2, vec![(0, 1)], vec![vec![]]);
        assert_eq!(x.validate(), vec![Violation::EmptyFace { face: 0 }]);
    }

    #[test]
    fn repeated_edge_in_face_is_rejected() {
        let x = CellComplex::new_unchecked(2, vec![(0, 1)], vec![vec![0, 0]]);
        assert!(x.validate().contains(&Violation::RepeatedEdgeInFace { face: 0, edge: 0 }));
    }

    #[test]
    fn doubled_edges_form_a_bigon() {
        let x = CellComplex::new(2, vec![(0, 1), (1, 0)], vec![vec![0, 1]]).unwrap();
        assert_eq!(x.face_vertices(0).unwrap(), vec![0, 1]);
    }

    #[test]
    fn torus_grid_boundary_of_boundary() {
        let x = torus_grid(3, 3);
        assert_eq!((x.n_vertices(), x.n_edges(), x.n_faces()), (9, 18, 9));
        let d1 = x.boundary_matrix(1).unwrap();
        let d2 = x.boundary_matrix(2).unwrap();
        assert!(d1.mul(&d2).unwrap().is_zero());
        assert!(x.validate().is_empty());
        assert_eq!(x.euler_characteristic(), 0);
        assert!(x.is_closed_surface());
    }

    #[test]
    fn boundary_columns() {
        let x = CellComplex::graph(2, vec![(0, 1)]).unwrap();
        assert_eq!(x.boundary_matrix(1).unwrap().column(0), BitVector::ones(2));
        let sq = CellComplex::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(sq.boundary_matrix(2).unwrap().column(0).count_ones(), 4);
        assert!(matches!(sq.boundary_matrix(3), Err(Error::DegreeOutOfRange(3))));
        assert!(matches!(sq.boundary_matrix(0), Err(Error::DegreeOutOfRange(0))));
    }

    #[test]
    fn triangulate_triangle_is_identity() {
        let x = CellComplex::new(3, vec![(0, 1), (1, 2), (2, 0)], vec![vec![0, 1, 2]]).unwrap();
        let t = x.triangulate().unwrap();
        assert_eq!(t.n_triangles(), 1);
        assert_eq!(t.n_edges(), 3);
        for bits in 0..8 {
            let c = BitVector::from_u64(3, bits);
            assert_eq!(t.pullback1(&c).unwrap(), c);
        }
    }

    #[test]
    fn triangulate_square_adds_one_diagonal() {
        let x = CellComplex::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], vec![vec![0, 1, 2, 3]]).unwrap();
        let t = x.triangulate().unwrap();
        assert_eq!(t.n_triangles(), 2);
        assert_eq!(t.n_edges(), 5);
        assert_eq!(t.edges()[4], (0, 2));
    }

    #[test]
    fn triangulate_torus_counts() {
        let t = torus_grid(3, 3).triangulate().unwrap();
        assert_eq!(t.n_triangles(), 18);
        assert_eq!(t.n_edges(), 27);
        assert_eq!(t.euler_characteristic(), 0);
        assert!(t.is_closed_surface());
    }

    #[test]
    fn pullback_commutes_with_coboundary() {
        let x = torus_grid(3, 4);
        let t = x.triangulate().unwrap();
        for seed in 0..64u64 {
            let c = BitVector::from_support(
                x.n_edges(),
                (0..x.n_edges()).filter(|e| (seed.wrapping_mul(0x9E37_79B9) >> (e % 61)) & 1 == 1),
            );
            let lhs = t.pullback2(&x.apply_coboundary(1, &c).unwrap()).unwrap();
            let rhs = t.apply_coboundary(1, &t.pullback1(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let x0 = BitVector::from_u64(x.n_vertices(), seed * 2654435761 % (1 << 12));
            assert_eq!(t.pullback1(&x.apply_coboundary(0, &x0).unwrap()).unwrap(), t.apply_coboundary(0, &x0).unwrap());
        }
    }

    #[test]
    fn triangulate_rejects_non_simple_faces() {
        // figure-eight walk through vertex 0 twice
        let x = CellComplex::new(5, vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)], vec![vec![0, 1, 2, 3, 4, 5]])
            .unwrap();
        assert_eq!(x.triangulate().unwrap_err(), Error::NonSimpleFace(0));
        assert!(x.triangulate().unwrap_err().to_string().contains("pre-subdivide"));
    }

    #[test]
    fn subcomplex_closure_is_checked() {
        let x = CellComplex::new(3, vec![(0, 1), (1, 2), (2, 0)], vec![vec![0, 1, 2]]).unwrap();
        let bad = Subcomplex::new(&x, BitVector::zeros(3), BitVector::unit(3, 0), BitVector::zeros(1));
        assert!(matches!(bad, Err(Error::NotClosed(_))));
        let ok = Subcomplex::region_boundary(&x, &[0]).unwrap();
        assert_eq!(ok.edges, BitVector::ones(3));
        assert!(Subcomplex::new(&x, ok.vertices.clone(), ok.edges.clone(), ok.faces.clone()).is_ok());
    }

    #[test]
    fn json_round_trip_is_stable() {
        let mut x = torus_grid(2, 3);
        x.set_label("name", serde_json::json!("torus"));
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with("{\"vertices\":6,\"edges\":"));
        let y: CellComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(serde_json::to_string(&y).unwrap(), s);
        let bad = r#"{"vertices":3,"edges":[[0,1],[1,2]],"faces":[[0,1]]}"#;
        assert!(serde_json::from_str::<CellComplex>(bad).is_err());
    }
}
