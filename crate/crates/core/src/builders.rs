//! Catalog of constraint systems and board complexes.
//!
//! Every builder is a pure function of its parameters. Grids are indexed
//! row-major; cycles number vertex `i` and edge `i = (i, i+1 mod n)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, ComplexBuilder};
use crate::constraint::CouplingSystem;
use crate::error::{Error, Result};
use crate::gf2::BitVector;

fn need(ok: bool, msg: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(msg.into()))
    }
}

fn cycle_complex(n: usize) -> Result<CellComplex> {
    CellComplex::graph(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

fn all_edges(x: CellComplex, coupling: bool) -> CouplingSystem {
    CouplingSystem::uniform(x, coupling)
}

/// n-cycle with every edge constrained to `value`.
pub fn ring_system(n: usize, value: bool) -> Result<CouplingSystem> {
    need(n >= 3, format!("ring needs n >= 3, got {n}"))?;
    Ok(all_edges(cycle_complex(n)?, value))
}

/// Ring of n meshing spur gears: every neighbour pair opposes.
pub fn gear_ring(n: usize) -> Result<CouplingSystem> {
    ring_system(n, true)
}

/// Gear ring whose axis frame reverses across the listed edges.
pub fn mobius_ring(n: usize, twist_edges: &[usize]) -> Result<CouplingSystem> {
    let base = gear_ring(n)?;
    let twist = twisted(n, twist_edges)?;
    CouplingSystem::new(base.complex().clone(), BitVector::ones(n), BitVector::ones(n), Some(twist), BTreeMap::new())
}

fn twisted(n: usize, edges: &[usize]) -> Result<BitVector> {
    if let Some(&e) = edges.iter().find(|&&e| e >= n) {
        return Err(Error::OutOfRange { what: "edge", index: e, count: n });
    }
    Ok(BitVector::from_support(n, edges.iter().copied()))
}

/// Ring of Necker cubes that agree with their neighbours, with one frame
/// reversal on edge n−1.
pub fn spinning_necker_ring(n: usize) -> Result<CouplingSystem> {
    need(n >= 3, format!("ring needs n >= 3, got {n}"))?;
    let x = cycle_complex(n)?;
    let twist = twisted(n, &[n - 1])?;
    CouplingSystem::new(x, BitVector::ones(n), BitVector::zeros(n), Some(twist), BTreeMap::new())
}

/// Path of n agreement edges on vertices 0..=n with both endpoints pinned.
pub fn necker_path(n: usize, pins: (bool, bool)) -> Result<CouplingSystem> {
    need(n >= 1, "path needs at least one edge")?;
    let x = CellComplex::graph(n + 1, (0..n).map(|i| (i, i + 1)).collect())?;
    let pinned = BTreeMap::from([(0, pins.0), (n, pins.1)]);
    all_edges(x, false).with_pins(pinned)
}

/// Quad grid complex on w columns and h rows of vertices.
pub fn grid_complex(w: usize, h: usize) -> Result<CellComplex> {
    need(w >= 2 && h >= 2, format!("grid needs w, h >= 2, got {w}x{h}"))?;
    let id = |r: usize, c: usize| r * w + c;
    let mut b = ComplexBuilder::new(w * h);
    for r in 0..h {
        for c in 0..w - 1 {
            b.edge(id(r, c), id(r, c + 1));
        }
    }
    for r in 0..h - 1 {
        for c in 0..w {
            b.edge(id(r, c), id(r + 1, c));
        }
    }
    for r in 0..h - 1 {
        for c in 0..w - 1 {
            b.polygon(&[id(r, c), id(r, c + 1), id(r + 1, c + 1), id(r + 1, c)]);
        }
    }
    b.build()
}

/// Grid of Necker cubes, neighbours agreeing, with arbitrary pins.
pub fn necker_grid(w: usize, h: usize, pins: &BTreeMap<usize, bool>) -> Result<CouplingSystem> {
    all_edges(grid_complex(w, h)?, false).with_pins(pins.clone())
}

/// Quad cellulation of the torus with `rows` x `cols` vertices and every
/// edge an opposing gear mesh.
///
/// Horizontal edges come first (row-major), then vertical ones. Row 0's
/// horizontal edges and column 0's vertical edges are the two generators.
pub fn gear_torus(rows: usize, cols: usize) -> Result<CouplingSystem> {
    Ok(all_edges(torus_complex(rows, cols)?, true))
}

pub fn torus_complex(rows: usize, cols: usize) -> Result<CellComplex> {
    need(rows >= 2 && cols >= 2, format!("torus needs rows, cols >= 2, got {rows}x{cols}"))?;
    let id = |r: usize, c: usize| (r % rows) * cols + c % cols;
    let h = |r: usize, c: usize| (r % rows) * cols + c % cols;
    let v = |r: usize, c: usize| rows * cols + (r % rows) * cols + c % cols;
    let mut edges = Vec::with_capacity(2 * rows * cols);
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
    let mut faces = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            faces.push(vec![h(r, c), v(r, c + 1), h(r + 1, c), v(r, c)]);
        }
    }
    CellComplex::new(rows * cols, edges, faces)
}

/// The two generator walks of [`gear_torus`]: row 0 and column 0.
pub fn torus_generators(rows: usize, cols: usize) -> (Vec<usize>, Vec<usize>) {
    let horizontal = (0..cols).collect();
    let vertical = (0..rows).map(|r| rows * cols + r * cols).collect();
    (horizontal, vertical)
}

/// Brick-wall honeycomb of rhombic-tiling vertices, neighbours opposing.
///
/// Vertex (r, c) is `r * w + c`; a vertical edge joins (r, c) and (r+1, c)
/// when r + c is even. With `pinned`, the class-0 vertices of the left column
/// are pinned to 0 and the class-0 vertices of the right column to 1.
pub fn lozenge_patch(w: usize, h: usize, pinned: bool) -> Result<CouplingSystem> {
    need(w >= 3 && h >= 2, format!("lozenge patch needs w >= 3, h >= 2, got {w}x{h}"))?;
    let id = |r: usize, c: usize| r * w + c;
    let mut b = ComplexBuilder::new(w * h);
    for r in 0..h {
        for c in 0..w - 1 {
            b.edge(id(r, c), id(r, c + 1));
        }
    }
    for r in 0..h - 1 {
        for c in (0..w).filter(|c| (r + c) % 2 == 0) {
            b.edge(id(r, c), id(r + 1, c));
        }
    }
    for r in 0..h - 1 {
        for c in (0..w.saturating_sub(2)).filter(|c| (r + c) % 2 == 0) {
            b.polygon(&[id(r, c), id(r, c + 1), id(r, c + 2), id(r + 1, c + 2), id(r + 1, c + 1), id(r + 1, c)]);
        }
    }
    let sys = all_edges(b.build()?, true);
    if !pinned {
        return Ok(sys);
    }
    let mut pins = BTreeMap::new();
    for r in 0..h {
        if r % 2 == 0 {
            pins.insert(id(r, 0), false);
        }
        if (r + w - 1).is_multiple_of(2) {
            pins.insert(id(r, w - 1), true);
        }
    }
    sys.with_pins(pins)
}

/// Five-rhombus rosette: a constrained pentagon around a free hub.
///
/// Vertices 0..5 form the pentagon (edges 0..5), vertex 5 is the hub with
/// free spokes 5..10, and face i is the wedge over pentagon edge i.
pub fn p3_rosette() -> Result<CouplingSystem> {
    let mut b = ComplexBuilder::new(6);
    for i in 0..5 {
        b.edge(i, (i + 1) % 5);
    }
    for i in 0..5 {
        b.edge(5, i);
    }
    for i in 0..5 {
        b.polygon(&[i, (i + 1) % 5, 5]);
    }
    let x = b.build()?;
    let g = BitVector::from_support(10, 0..5);
    CouplingSystem::new(x, g.clone(), g, None, BTreeMap::new())
}

/// Combinatorial {7,3} patch: a central heptagon plus `r` rings of heptagons.
pub fn heptagonal_patch(r: usize) -> Result<CouplingSystem> {
    need(r >= 1, format!("heptagonal patch needs r >= 1, got {r}"))?;
    let mut b = ComplexBuilder::new(7);
    let mut degree = vec![2usize; 7];
    let mut boundary: Vec<usize> = (0..7).collect();
    b.polygon(&boundary);
    for _ in 0..r {
        let spokes: Vec<usize> = (0..boundary.len()).filter(|&i| degree[boundary[i]] == 2).collect();
        let tips: Vec<usize> = spokes
            .iter()
            .map(|&i| {
                let t = b.add_vertex();
                degree.push(0);
                degree[boundary[i]] += 1;
                b.edge(boundary[i], t);
                t
            })
            .collect();
        let mut next = Vec::new();
        let len = boundary.len();
        for (s, &start) in spokes.iter().enumerate() {
            let end = spokes[(s + 1) % spokes.len()];
            let run = (end + len - start) % len;
            let run = if run == 0 { len } else { run };
            if run > 4 {
                return Err(Error::InvalidParams(format!("boundary run of {run} edges cannot close a heptagon")));
            }
            let fresh: Vec<usize> = (0..4 - run)
                .map(|_| {
                    degree.push(0);
                    b.add_vertex()
                })
                .collect();
            let mut poly: Vec<usize> = (0..=run).map(|j| boundary[(start + j) % len]).collect();
            poly.push(tips[(s + 1) % tips.len()]);
            poly.extend(fresh.iter().rev());
            poly.push(tips[s]);
            b.polygon(&poly);
            let chain: Vec<usize> = std::iter::once(tips[s]).chain(fresh.iter().copied()).collect();
            next.extend(&chain);
        }
        // outer-ring degrees: tips gain two ring edges, fresh vertices have two
        for &v in &next {
            degree[v] = if tips.contains(&v) { 3 } else { 2 };
        }
        boundary = next;
    }
    Ok(all_edges(b.build()?, true))
}

fn icosahedron_complex() -> Result<CellComplex> {
    let up = |i: usize| 1 + i % 5;
    let lo = |i: usize| 6 + i % 5;
    let mut b = ComplexBuilder::new(12);
    for i in 0..5 {
        b.polygon(&[0, up(i), up(i + 1)]);
        b.polygon(&[up(i), lo(i), up(i + 1)]);
        b.polygon(&[up(i + 1), lo(i), lo(i + 1)]);
        b.polygon(&[11, lo(i + 1), lo(i)]);
    }
    b.build()
}

/// Icosahedral sphere triangulation (12 / 30 / 20), a flux-game board.
pub fn icosahedron() -> Result<CouplingSystem> {
    Ok(all_edges(icosahedron_complex()?, false))
}

/// Tetrahedral sphere (4 / 6 / 4), a flux-game board.
pub fn tetrahedron() -> Result<CouplingSystem> {
    let mut b = ComplexBuilder::new(4);
    b.polygon(&[0, 1, 2]);
    b.polygon(&[0, 1, 3]);
    b.polygon(&[0, 2, 3]);
    b.polygon(&[1, 2, 3]);
    Ok(all_edges(b.build()?, false))
}

/// n-gonal prism: bottom ring 0..n, top ring n..2n, caps first then sides.
pub fn prism(n: usize) -> Result<CouplingSystem> {
    need(n >= 3, format!("prism needs n >= 3, got {n}"))?;
    let mut b = ComplexBuilder::new(2 * n);
    b.polygon(&(0..n).collect::<Vec<_>>());
    b.polygon(&(n..2 * n).collect::<Vec<_>>());
    for i in 0..n {
        let j = (i + 1) % n;
        b.polygon(&[i, j, n + j, n + i]);
    }
    Ok(all_edges(b.build()?, false))
}

/// Edges at `v` in cyclic order around it, for a closed surface.
fn rotation(x: &CellComplex, edge_faces: &[Vec<usize>], v: usize) -> Result<Vec<usize>> {
    let incident: Vec<usize> = (0..x.n_edges())
        .filter(|&e| {
            let (a, b) = x.edge(e);
            a == v || b == v
        })
        .collect();
    let Some(&first) = incident.first() else {
        return Err(Error::InvalidComplex(format!("isolated vertex {v}")));
    };
    let mut order = vec![first];
    let mut face = edge_faces[first][0];
    let mut cur = first;
    loop {
        let next = x
            .face(face)
            .iter()
            .copied()
            .find(|&e| e != cur && incident.contains(&e))
            .ok_or_else(|| Error::InvalidComplex(format!("face {face} does not turn at vertex {v}")))?;
        if next == first {
            break;
        }
        order.push(next);
        let fs = &edge_faces[next];
        face = if fs[0] == face { fs[1] } else { fs[0] };
        cur = next;
        if order.len() > incident.len() {
            return Err(Error::InvalidComplex(format!("vertex {v} link is not a cycle")));
        }
    }
    if order.len() != incident.len() {
        return Err(Error::InvalidComplex(format!("vertex {v} link is not a single cycle")));
    }
    Ok(order)
}

/// Faces on each edge and the cyclic edge order around each vertex.
type SurfaceParts = (Vec<Vec<usize>>, Vec<Vec<usize>>);

fn closed_surface_parts(x: &CellComplex) -> Result<SurfaceParts> {
    if !x.is_closed_surface() {
        return Err(Error::NotClosedSurface("dual needs every edge in exactly two faces".into()));
    }
    let edge_faces = x.edge_faces();
    let rot = (0..x.n_vertices()).map(|v| rotation(x, &edge_faces, v)).collect::<Result<_>>()?;
    Ok((edge_faces, rot))
}

/// Poincaré dual cellulation of a closed surface: face f becomes vertex f,
/// edge e joins the two faces containing it, vertex v becomes a face.
pub fn dual_complex(x: &CellComplex) -> Result<CellComplex> {
    let (edge_faces, rot) = closed_surface_parts(x)?;
    let edges = edge_faces.iter().map(|fs| (fs[0], fs[1])).collect();
    CellComplex::new(x.n_faces(), edges, rot)
}

/// Truncation of a closed surface: every vertex becomes a polygon, every
/// face grows to twice its size.
pub fn truncate_complex(x: &CellComplex) -> Result<CellComplex> {
    let (_, rot) = closed_surface_parts(x)?;
    let mut corner = BTreeMap::new();
    let mut b = ComplexBuilder::new(0);
    for (v, ring) in rot.iter().enumerate() {
        for &e in ring {
            corner.insert((v, e), b.add_vertex());
        }
    }
    for e in 0..x.n_edges() {
        let (u, v) = x.edge(e);
        b.edge(corner[&(u, e)], corner[&(v, e)]);
    }
    for (v, ring) in rot.iter().enumerate() {
        let poly: Vec<usize> = ring.iter().map(|&e| corner[&(v, e)]).collect();
        b.polygon(&poly);
    }
    for f in 0..x.n_faces() {
        let walk = x.face(f);
        let verts = crate::complex::walk_vertices(x.edges(), walk).ok_or(Error::OpenWalk)?;
        let mut poly = Vec::with_capacity(2 * walk.len());
        for (i, &e) in walk.iter().enumerate() {
            poly.push(corner[&(verts[i], e)]);
            poly.push(corner[&(verts[i + 1], e)]);
        }
        b.polygon(&poly);
    }
    b.build()
}

/// Dodecahedral sphere (20 / 30 / 12 pentagons), every edge opposing.
pub fn dodecahedral_sphere() -> Result<CouplingSystem> {
    Ok(all_edges(dual_complex(&icosahedron_complex()?)?, true))
}

/// Truncated icosahedral sphere (60 / 90 / 12 pentagons + 20 hexagons),
/// every edge opposing. Faces 0..12 are the pentagons.
pub fn truncated_icosahedral_sphere() -> Result<CouplingSystem> {
    Ok(all_edges(truncate_complex(&icosahedron_complex()?)?, true))
}

/// Three k x k quad meshes of gears meeting at a corner.
///
/// Vertex (p, i, j) of plane p is `p*k*k + i*k + j`. Bevel edges join
/// (p, t, 0) to (p−1, 0, t), bevel quads fill between them, and the three
/// corner vertices (p, 0, 0) bound a single triangle, the last face.
pub fn gear_corner(k: usize) -> Result<CouplingSystem> {
    need(k >= 2, format!("gear corner needs k >= 2, got {k}"))?;
    let g = |p: usize, i: usize, j: usize| (p % 3) * k * k + i * k + j;
    let prev = |p: usize| (p + 2) % 3;
    let mut b = ComplexBuilder::new(3 * k * k);
    for p in 0..3 {
        for i in 0..k {
            for j in 0..k - 1 {
                b.edge(g(p, i, j), g(p, i, j + 1));
            }
        }
        for i in 0..k - 1 {
            for j in 0..k {
                b.edge(g(p, i, j), g(p, i + 1, j));
            }
        }
    }
    for p in 0..3 {
        for t in 0..k {
            b.edge(g(p, t, 0), g(prev(p), 0, t));
        }
    }
    for p in 0..3 {
        for i in 0..k - 1 {
            for j in 0..k - 1 {
                b.polygon(&[g(p, i, j), g(p, i, j + 1), g(p, i + 1, j + 1), g(p, i + 1, j)]);
            }
        }
    }
    for p in 0..3 {
        for t in 0..k - 1 {
            b.polygon(&[g(p, t, 0), g(p, t + 1, 0), g(prev(p), 0, t + 1), g(prev(p), 0, t)]);
        }
    }
    b.polygon(&[g(0, 0, 0), g(1, 0, 0), g(2, 0, 0)]);
    Ok(all_edges(b.build()?, true))
}

/// The three vertices bounding the corner triangle of [`gear_corner`].
pub fn gear_corner_vertices(k: usize) -> [usize; 3] {
    [0, k * k, 2 * k * k]
}

/// Six-vertex real projective plane.
pub fn rp2_minimal() -> Result<CouplingSystem> {
    const TRIANGLES: [[usize; 3]; 10] =
        [[1, 2, 4], [1, 2, 6], [1, 3, 5], [1, 3, 6], [1, 4, 5], [2, 3, 4], [2, 3, 5], [2, 5, 6], [3, 4, 6], [4, 5, 6]];
    let mut b = ComplexBuilder::new(6);
    for t in TRIANGLES {
        b.polygon(&[t[0] - 1, t[1] - 1, t[2] - 1]);
    }
    Ok(all_edges(b.build()?, false))
}

/// A builder name plus integer parameters, as read from the command line or
/// a catalog entry.
///
/// Pins use keys `pin.<vertex>` with value 0 or 1; twist edges use
/// `twist.<edge>` with value 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SystemSpec {
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
}

impl SystemSpec {
    pub fn new(kind: impl Into<String>) -> Self {
        Self { kind: kind.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: i64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    fn count(&self, key: &str, default: Option<usize>) -> Result<usize> {
        match (self.params.get(key), default) {
            (Some(&v), _) => {
                usize::try_from(v).map_err(|_| Error::InvalidParams(format!("{key} must be >= 0, got {v}")))
            }
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::InvalidParams(format!("{} needs parameter {key}", self.kind))),
        }
    }

    fn bit(&self, key: &str, default: bool) -> Result<bool> {
        match self.params.get(key) {
            None => Ok(default),
            Some(0) => Ok(false),
            Some(1) => Ok(true),
            Some(v) => Err(Error::InvalidParams(format!("{key} must be 0 or 1, got {v}"))),
        }
    }

    fn indexed(&self, prefix: &str) -> Result<BTreeMap<usize, bool>> {
        let mut out = BTreeMap::new();
        for (k, &v) in &self.params {
            if let Some(idx) = k.strip_prefix(prefix) {
                let i = idx.parse().map_err(|_| Error::InvalidParams(format!("bad index in {k}")))?;
                out.insert(
                    i,
                    self.bit(k, false).map_err(|_| Error::InvalidParams(format!("{k} must be 0 or 1, got {v}")))?,
                );
            }
        }
        Ok(out)
    }

    fn check_keys(&self, allowed: &[&str], prefixes: &[&str]) -> Result<()> {
        for k in self.params.keys() {
            if !allowed.contains(&k.as_str()) && !prefixes.iter().any(|p| k.starts_with(p)) {
                return Err(Error::InvalidParams(format!("{} does not take parameter {k}", self.kind)));
            }
        }
        Ok(())
    }
}

/// One entry of the builder catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub kind: &'static str,
    pub params: &'static [&'static str],
    pub defaults: &'static [(&'static str, i64)],
    pub description: &'static str,
    /// Closed surface or disc usable as a flux-game board.
    pub board: bool,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        kind: "gear_ring",
        params: &["n"],
        defaults: &[("n", 5)],
        description: "cycle of meshing gears",
        board: false,
    },
    CatalogEntry {
        kind: "gear_torus",
        params: &["rows", "cols"],
        defaults: &[("rows", 3), ("cols", 3)],
        description: "quad torus mesh of gears",
        board: true,
    },
    CatalogEntry {
        kind: "mobius_ring",
        params: &["n", "twist.<e>"],
        defaults: &[("n", 5)],
        description: "gear ring with axis frame reversals (default edge n-1)",
        board: false,
    },
    CatalogEntry {
        kind: "spinning_necker_ring",
        params: &["n"],
        defaults: &[("n", 6)],
        description: "agreeing Necker ring with one frame reversal",
        board: false,
    },
    CatalogEntry {
        kind: "necker_path",
        params: &["n", "a", "b"],
        defaults: &[("n", 4), ("a", 0), ("b", 1)],
        description: "agreeing Necker path with pinned endpoints",
        board: false,
    },
    CatalogEntry {
        kind: "necker_grid",
        params: &["w", "h", "pin.<v>"],
        defaults: &[("w", 4), ("h", 4)],
        description: "agreeing Necker grid disc",
        board: true,
    },
    CatalogEntry {
        kind: "lozenge_patch",
        params: &["w", "h", "pinned"],
        defaults: &[("w", 5), ("h", 4), ("pinned", 1)],
        description: "honeycomb rhombus patch, optional opposite boundary pins",
        board: true,
    },
    CatalogEntry {
        kind: "p3_rosette",
        params: &[],
        defaults: &[],
        description: "five-rhombus rosette disc",
        board: true,
    },
    CatalogEntry {
        kind: "heptagonal_patch",
        params: &["r"],
        defaults: &[("r", 1)],
        description: "{7,3} patch",
        board: true,
    },
    CatalogEntry {
        kind: "dodecahedral_sphere",
        params: &[],
        defaults: &[],
        description: "pentagonal sphere",
        board: true,
    },
    CatalogEntry {
        kind: "truncated_icosahedral_sphere",
        params: &[],
        defaults: &[],
        description: "pentagon and hexagon sphere",
        board: true,
    },
    CatalogEntry {
        kind: "gear_corner",
        params: &["k"],
        defaults: &[("k", 3)],
        description: "three gear quarter-planes around a corner triangle",
        board: true,
    },
    CatalogEntry {
        kind: "rp2_minimal",
        params: &[],
        defaults: &[],
        description: "six-vertex projective plane",
        board: true,
    },
    CatalogEntry { kind: "icosahedron", params: &[], defaults: &[], description: "icosahedral sphere", board: true },
    CatalogEntry { kind: "tetrahedron", params: &[], defaults: &[], description: "tetrahedral sphere", board: true },
    CatalogEntry {
        kind: "prism",
        params: &["n"],
        defaults: &[("n", 4)],
        description: "n-gonal prism sphere",
        board: true,
    },
];

pub fn catalog_entry(kind: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.kind == kind)
}

/// Builds any catalog system from its spec.
pub fn build_system(spec: &SystemSpec) -> Result<CouplingSystem> {
    let entry = catalog_entry(&spec.kind).ok_or_else(|| Error::InvalidParams(format!("unknown kind {}", spec.kind)))?;
    let plain: Vec<&str> = entry.params.iter().copied().filter(|p| !p.contains('<')).collect();
    let prefixes: Vec<&str> = entry.params.iter().filter_map(|p| p.find('<').map(|i| &p[..i])).collect();
    spec.check_keys(&plain, &prefixes)?;
    let d = |key: &str| entry.defaults.iter().find(|(k, _)| *k == key).map(|&(_, v)| v as usize);
    let n = || spec.count("n", d("n"));
    match entry.kind {
        "gear_ring" => gear_ring(n()?),
        "gear_torus" => gear_torus(spec.count("rows", d("rows"))?, spec.count("cols", d("cols"))?),
        "mobius_ring" => {
            let n = n()?;
            let twists = spec.indexed("twist.")?;
            let edges: Vec<usize> = if twists.is_empty() {
                vec![n.saturating_sub(1)]
            } else {
                twists.iter().filter(|(_, &b)| b).map(|(&e, _)| e).collect()
            };
            mobius_ring(n, &edges)
        }
        "spinning_necker_ring" => spinning_necker_ring(n()?),
        "necker_path" => necker_path(n()?, (spec.bit("a", false)?, spec.bit("b", true)?)),
        "necker_grid" => necker_grid(spec.count("w", d("w"))?, spec.count("h", d("h"))?, &spec.indexed("pin.")?),
        "lozenge_patch" => lozenge_patch(spec.count("w", d("w"))?, spec.count("h", d("h"))?, spec.bit("pinned", true)?),
        "p3_rosette" => p3_rosette(),
        "heptagonal_patch" => heptagonal_patch(spec.count("r", d("r"))?),
        "dodecahedral_sphere" => dodecahedral_sphere(),
        "truncated_icosahedral_sphere" => truncated_icosahedral_sphere(),
        "gear_corner" => gear_corner(spec.count("k", d("k"))?),
        "rp2_minimal" => rp2_minimal(),
        "icosahedron" => icosahedron(),
        "tetrahedron" => tetrahedron(),
        "prism" => prism(n()?),
        other => Err(Error::InvalidParams(format!("unknown kind {other}"))),
    }
}
