//! Brute-force oracles shared by the integration tests. They work from raw
//! edge lists and bit masks and never call the solvers under test.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use bistable::{BitVector, CellComplex, CouplingSystem};

/// (u, v, coupling) for every constraint edge, using the effective coupling.
pub fn constraints(sys: &CouplingSystem) -> Vec<(usize, usize, bool)> {
    let c = sys.effective_coupling();
    sys.constraint_edges()
        .iter_ones()
        .map(|e| {
            let (u, v) = sys.complex().edge(e);
            (u, v, c.get(e))
        })
        .collect()
}

/// Every assignment (as a bit mask over vertices) satisfying all constraints
/// and pins. Exhaustive over 2^V, so V must stay small.
pub fn brute_sections(sys: &CouplingSystem) -> Vec<u64> {
    let n = sys.complex().n_vertices();
    assert!(n <= 22, "too many vertices for brute force");
    let cs = constraints(sys);
    (0u64..1 << n)
        .filter(|&x| {
            cs.iter().all(|&(u, v, c)| ((x >> u ^ x >> v) & 1 == 1) == c)
                && sys.pinned().iter().all(|(&v, &b)| (x >> v & 1 == 1) == b)
        })
        .collect()
}

/// Two-colouring by BFS: true iff the unpinned constraints are satisfiable.
pub fn parity_consistent(n: usize, cs: &[(usize, usize, bool)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, c) in cs {
        adj[u].push((v, c));
        adj[v].push((u, c));
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let cu = color[u].unwrap();
            for &(w, c) in &adj[u] {
                match color[w] {
                    None => {
                        color[w] = Some(cu ^ c);
                        q.push_back(w);
                    }
                    Some(cw) if cw != cu ^ c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// XOR of a cochain over a list of edges.
pub fn sum_over(c: &BitVector, edges: &[usize]) -> bool {
    edges.iter().filter(|&&e| c.get(e)).count() % 2 == 1
}

/// Edges appearing an odd number of times in the walks of the given faces.
pub fn odd_boundary(x: &CellComplex, faces: &[usize]) -> Vec<usize> {
    let mut count = vec![0usize; x.n_edges()];
    for &f in faces {
        for &e in x.face(f) {
            count[e] += 1;
        }
    }
    (0..x.n_edges()).filter(|&e| count[e] % 2 == 1).collect()
}

/// Faces flipped by toggling edge e, as a bit mask.
pub fn toggle_mask(x: &CellComplex, e: usize) -> u64 {
    let mut m = 0u64;
    for (f, walk) in x.faces().iter().enumerate() {
        if walk.iter().filter(|&&w| w == e).count() % 2 == 1 {
            m ^= 1 << f;
        }
    }
    m
}

/// All fluxes reachable from `start` by toggling the allowed edges.
pub fn bfs_fluxes(x: &CellComplex, start: u64, allowed: &[usize]) -> BTreeSet<u64> {
    let moves: Vec<u64> = allowed.iter().map(|&e| toggle_mask(x, e)).collect();
    let mut seen = BTreeSet::from([start]);
    let mut q = VecDeque::from([start]);
    while let Some(s) = q.pop_front() {
        for &m in &moves {
            if seen.insert(s ^ m) {
                q.push_back(s ^ m);
            }
        }
    }
    seen
}

/// Coboundary of a vertex cochain, computed edge by edge.
pub fn delta0(x: &CellComplex, xi: &BitVector) -> BitVector {
    let bits: Vec<bool> = x.edges().iter().map(|&(u, v)| xi.get(u) ^ xi.get(v)).collect();
    BitVector::from_bools(&bits)
}

/// True iff `c` restricted to the listed edges equals δx for some vertex x.
pub fn brute_is_coboundary(x: &CellComplex, c: &BitVector) -> bool {
    let n = x.n_vertices();
    assert!(n <= 20);
    (0u64..1 << n).any(|m| delta0(x, &BitVector::from_u64(n, m)) == *c)
}
