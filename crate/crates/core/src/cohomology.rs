//! Absolute and relative cohomology over Z2, the connecting homomorphism,
//! the cup product on ordered triangulations, and seams of couplings.
//!
//! Relative cochains are full-length vectors that vanish on the subcomplex,
//! so every map stays a plain matrix on the parent's cells.

use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, DeltaComplex, Subcomplex};
use crate::constraint::CouplingSystem;
use crate::error::{Error, Result};
use crate::gf2::{kernel_basis, quotient_basis, BitMatrix, BitVector, QuotientBasis};

/// A basis of Hᵏ(X) or Hᵏ(X, A) with a coordinate map on cocycles.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    degree: usize,
    coboundary: BitMatrix,
    vanish_on: Option<BitVector>,
    quotient: QuotientBasis,
}

impl CohomologyBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn is_relative(&self) -> bool {
        self.vanish_on.is_some()
    }

    /// Cocycle representatives of the basis classes.
    pub fn representatives(&self) -> &[BitVector] {
        self.quotient.representatives()
    }

    pub fn is_cocycle(&self, v: &BitVector) -> bool {
        v.len() == self.coboundary.cols()
            && self.coboundary.mul_vec(v).is_ok_and(|d| d.is_zero())
            && self.vanish_on.as_ref().is_none_or(|m| v.and(m).is_zero())
    }

    /// Coordinates of the class of a cocycle.
    pub fn coords(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.coboundary.cols() {
            return Err(Error::DimensionMismatch { expected: self.coboundary.cols(), got: v.len() });
        }
        if !self.coboundary.mul_vec(v)?.is_zero() {
            return Err(Error::NotCocycle(format!(" in degree {}", self.degree)));
        }
        if let Some(m) = &self.vanish_on {
            if !v.and(m).is_zero() {
                return Err(Error::NotCocycle(" (does not vanish on the subcomplex)".into()));
            }
        }
        self.quotient.coords(v)
    }

    pub fn is_coboundary(&self, v: &BitVector) -> Result<bool> {
        Ok(self.coords(v)?.is_zero())
    }

    /// Cocycle representing the class with the given coordinates.
    pub fn element(&self, coords: &BitVector) -> BitVector {
        self.quotient.element(coords)
    }
}

fn cocycles_and_coboundaries(
    x: &CellComplex,
    k: usize,
    vanish: Option<&Subcomplex>,
) -> Result<(BitMatrix, Vec<BitVector>, Vec<BitVector>)> {
    if k > 2 {
        return Err(Error::DegreeOutOfRange(k));
    }
    let delta = x.coboundary(k)?;
    let n = x.n_cells(k);
    let constraint = match vanish {
        Some(a) => {
            let rows = a.mask(k).iter_ones().map(|i| BitVector::unit(n, i)).collect();
            delta.vstack(&BitMatrix::from_rows(n, rows)?)?
        }
        None => delta.clone(),
    };
    let z = kernel_basis(&constraint);
    let b = if k == 0 {
        Vec::new()
    } else {
        let prev = x.coboundary(k - 1)?;
        (0..x.n_cells(k - 1))
            .filter(|&j| vanish.is_none_or(|a| !a.mask(k - 1).get(j)))
            .map(|j| prev.column(j))
            .collect()
    };
    Ok((delta, z, b))
}

/// Hᵏ(X; Z2) for k in 0..=2.
pub fn cohomology(x: &CellComplex, k: usize) -> Result<CohomologyBasis> {
    let (delta, z, b) = cocycles_and_coboundaries(x, k, None)?;
    let quotient = quotient_basis(x.n_cells(k), &z, &b)?;
    Ok(CohomologyBasis { degree: k, coboundary: delta, vanish_on: None, quotient })
}

/// Hᵏ(X, A; Z2) with representatives vanishing on A.
pub fn relative_cohomology(x: &CellComplex, a: &Subcomplex, k: usize) -> Result<CohomologyBasis> {
    let a = Subcomplex::new(x, a.vertices.clone(), a.edges.clone(), a.faces.clone())?;
    let (delta, z, b) = cocycles_and_coboundaries(x, k, Some(&a))?;
    let quotient = quotient_basis(x.n_cells(k), &z, &b)?;
    Ok(CohomologyBasis { degree: k, coboundary: delta, vanish_on: Some(a.mask(k).clone()), quotient })
}

/// A class in relative cohomology with a representative vanishing on A.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeClass {
    pub degree: usize,
    pub coordinates: BitVector,
    #[serde(rename = "representative_support")]
    #[serde(with = "support_serde")]
    pub representative: BitVector,
}

impl RelativeClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_zero()
    }
}

mod support_serde {
    use super::BitVector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Support {
        len: usize,
        cells: Vec<usize>,
    }

    pub fn serialize<S: Serializer>(v: &BitVector, s: S) -> Result<S::Ok, S::Error> {
        Support { len: v.len(), cells: v.support() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BitVector, D::Error> {
        let s = Support::deserialize(d)?;
        if s.cells.iter().any(|&c| c >= s.len) {
            return Err(serde::de::Error::custom("support index out of range"));
        }
        Ok(BitVector::from_support(s.len, s.cells))
    }
}

/// Checks that `data` is a k-cochain supported on A and a cocycle there.
fn check_cocycle_on(x: &CellComplex, a: &Subcomplex, k: usize, data: &BitVector) -> Result<()> {
    if data.len() != x.n_cells(k) {
        return Err(Error::DimensionMismatch { expected: x.n_cells(k), got: data.len() });
    }
    if !data.and(&a.mask(k).not()).is_zero() {
        return Err(Error::NotCocycle(" on A (support leaves the subcomplex)".into()));
    }
    let d = x.apply_coboundary(k, data)?;
    if k < 2 && !d.and(a.mask(k + 1)).is_zero() {
        return Err(Error::NotCocycle(" on A".into()));
    }
    Ok(())
}

/// δ* : Hᵏ(A) → Hᵏ⁺¹(X, A). `data` is a k-cocycle on A given as a parent
/// cochain supported on A; it is extended by zero before applying δ.
pub fn connecting(x: &CellComplex, a: &Subcomplex, k: usize, data: &BitVector) -> Result<RelativeClass> {
    connecting_with_extension(x, a, k, data, data)
}

/// δ* computed from an explicit extension, which must agree with `data` on A.
pub fn connecting_with_extension(
    x: &CellComplex,
    a: &Subcomplex,
    k: usize,
    data: &BitVector,
    extension: &BitVector,
) -> Result<RelativeClass> {
    if k >= 2 {
        return Err(Error::DegreeOutOfRange(k + 1));
    }
    check_cocycle_on(x, a, k, data)?;
    if extension.len() != data.len() || extension.and(a.mask(k)) != *data {
        return Err(Error::InvalidParams("extension disagrees with the data on A".into()));
    }
    let rep = x.apply_coboundary(k, extension)?;
    let h = relative_cohomology(x, a, k + 1)?;
    let coordinates = h.coords(&rep)?;
    Ok(RelativeClass { degree: k + 1, coordinates, representative: rep })
}

/// Output of [`cup_product`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CupProduct {
    pub representative: BitVector,
    pub pairing: bool,
}

/// (α⌣β)(v0v1v2) = α(v0v1)·β(v1v2), paired with the all-ones fundamental class.
pub fn cup_product(t: &DeltaComplex, alpha: &BitVector, beta: &BitVector) -> Result<CupProduct> {
    if !t.is_closed_surface() {
        return Err(Error::NotClosedSurface("some edge is not in exactly two triangles".into()));
    }
    for (name, c) in [("alpha", alpha), ("beta", beta)] {
        if !t.apply_coboundary(1, c)?.is_zero() {
            return Err(Error::NotCocycle(format!(" ({name})")));
        }
    }
    let values: Vec<bool> = t.triangle_edges().iter().map(|e| alpha.get(e[0]) && beta.get(e[1])).collect();
    let representative = BitVector::from_bools(&values);
    let pairing = representative.parity();
    Ok(CupProduct { representative, pairing })
}

/// Support of the coupling after gauge-fixing it to zero on a spanning forest.
///
/// Vertex labels are transported along the tree so every tree edge is
/// satisfied; the edges that remain violated form the seam. The result is
/// cohomologous to the effective coupling and is empty iff its class vanishes.
pub fn seam(sys: &CouplingSystem, tree: &[usize]) -> Result<Vec<usize>> {
    let x = sys.complex();
    let c = sys.effective_coupling();
    let g = sys.constraint_edges();
    let mut in_tree = BitVector::zeros(x.n_edges());
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(x.n_vertices());
    for &e in tree {
        if e >= x.n_edges() || !g.get(e) {
            return Err(Error::WalkLeavesGraph(e));
        }
        let (u, v) = x.edge(e);
        if !uf.union(u, v) {
            return Err(Error::InvalidParams(format!("tree edge {e} closes a cycle")));
        }
        in_tree.set(e, true);
    }
    for e in g.iter_ones() {
        let (u, v) = x.edge(e);
        if uf.find(u) != uf.find(v) {
            return Err(Error::InvalidParams(format!("tree does not span the component of edge {e}")));
        }
    }

    // transport labels outward from each component's lowest vertex
    let mut adj = vec![Vec::new(); x.n_vertices()];
    for e in in_tree.iter_ones() {
        let (u, v) = x.edge(e);
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut label = vec![None; x.n_vertices()];
    for root in 0..x.n_vertices() {
        if label[root].is_some() {
            continue;
        }
        label[root] = Some(false);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let lu = label[u].expect("visited");
            for &(w, e) in &adj[u] {
                if label[w].is_none() {
                    label[w] = Some(lu ^ c.get(e));
                    stack.push(w);
                }
            }
        }
    }
    Ok(g.iter_ones()
        .filter(|&e| {
            let (u, v) = x.edge(e);
            c.get(e) ^ label[u].expect("labelled") ^ label[v].expect("labelled")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexBuilder;

    fn path(n_edges: usize) -> CellComplex {
        CellComplex::graph(n_edges + 1, (0..n_edges).map(|i| (i, i + 1)).collect()).unwrap()
    }

    #[test]
    fn path_graph_cohomology() {
        let x = path(4);
        assert_eq!(cohomology(&x, 0).unwrap().dim(), 1);
        assert_eq!(cohomology(&x, 1).unwrap().dim(), 0);
    }

    #[test]
    fn components_count_h0() {
        let x = CellComplex::graph(5, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(cohomology(&x, 0).unwrap().dim(), 3);
    }

    #[test]
    fn necker_path_relative_h1() {
        for n in 1..=8 {
            let x = path(n);
            let a = Subcomplex::from_vertices(&x, &[0, n]).unwrap();
            assert_eq!(relative_cohomology(&x, &a, 1).unwrap().dim(), 1, "n={n}");
            let opposite = BitVector::from_support(n + 1, [n]);
            assert!(!connecting(&x, &a, 0, &opposite).unwrap().is_zero());
            let equal = BitVector::from_support(n + 1, [0, n]);
            assert!(connecting(&x, &a, 0, &equal).unwrap().is_zero());
        }
    }

    #[test]
    fn empty_subcomplex_gives_absolute() {
        let x = crate::builders::gear_torus(3, 3).unwrap().complex().clone();
        let a = Subcomplex::empty(&x);
        for k in 0..=2 {
            assert_eq!(relative_cohomology(&x, &a, k).unwrap().dim(), cohomology(&x, k).unwrap().dim());
        }
    }

    fn pentagon_disc() -> CellComplex {
        let mut b = ComplexBuilder::new(6);
        for i in 0..5 {
            b.polygon(&[i, (i + 1) % 5, 5]);
        }
        b.build().unwrap()
    }

    #[test]
    fn disc_relative_h2_and_connecting() {
        let x = pentagon_disc();
        let a = Subcomplex::region_boundary(&x, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(relative_cohomology(&x, &a, 2).unwrap().dim(), 1);
        let ones_on_rim = a.edges.clone();
        let cls = connecting(&x, &a, 1, &ones_on_rim).unwrap();
        assert_eq!(cls.degree, 2);
        assert!(!cls.is_zero());
    }

    #[test]
    fn connecting_rejects_non_cocycles() {
        let x = pentagon_disc();
        let a = Subcomplex::closure_of_faces(&x, &[0]).unwrap();
        // a single edge of the triangle is not a cocycle on the closed triangle
        let e = x.face(0)[0];
        let data = BitVector::unit(x.n_edges(), e);
        assert!(matches!(connecting(&x, &a, 1, &data), Err(Error::NotCocycle(_))));
    }

    #[test]
    fn relative_rejects_open_subcomplex() {
        let x = path(3);
        let a = Subcomplex { vertices: BitVector::zeros(4), edges: BitVector::unit(3, 1), faces: BitVector::zeros(0) };
        assert!(matches!(relative_cohomology(&x, &a, 1), Err(Error::NotClosed(_))));
    }

    #[test]
    fn cup_with_zero_vanishes() {
        let x = crate::complex::tests::torus_grid(3, 3);
        let t = x.triangulate().unwrap();
        let h = cohomology(&x, 1).unwrap();
        let beta = t.pullback1(&h.representatives()[0]).unwrap();
        let cp = cup_product(&t, &BitVector::zeros(t.n_edges()), &beta).unwrap();
        assert!(cp.representative.is_zero());
        assert!(!cp.pairing);
    }

    #[test]
    fn cup_needs_closed_surface() {
        let t = pentagon_disc().triangulate().unwrap();
        let z = BitVector::zeros(t.n_edges());
        let err = cup_product(&t, &z, &z).unwrap_err();
        assert!(err.to_string().contains("fundamental class undefined"));
    }
}
