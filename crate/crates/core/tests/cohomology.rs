mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bistable::builders::{self, CATALOG};
use bistable::cohomology::{cohomology, connecting, connecting_with_extension, cup_product, seam};
use bistable::gf2::rank;
use bistable::{BitVector, CellComplex, DeltaComplex, Subcomplex};

use common::*;

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> BitVector {
    BitVector::from_bools(&(0..n).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>())
}

fn all_coords(dim: usize) -> impl Iterator<Item = BitVector> {
    (0u64..1 << dim).map(move |m| BitVector::from_u64(dim, m))
}

fn span(vectors: &[BitVector], len: usize) -> BTreeSet<BitVector> {
    let mut out = BTreeSet::from([BitVector::zeros(len)]);
    for v in vectors {
        let grown: Vec<BitVector> = out.iter().map(|w| w.xor(v)).collect();
        out.extend(grown);
    }
    out
}

/// Checks image(H^k(X) → H^k(A)) = ker(δ*) by enumerating H^k(A).
fn assert_exact_at_a(x: &CellComplex, a: &Subcomplex, k: usize, name: &str) {
    let (ca, idx) = x.restrict(a);
    let cells = &idx[k];
    let ha = cohomology(&ca, k).unwrap();
    let hx = cohomology(x, k).unwrap();
    let restricted: Vec<BitVector> =
        hx.representatives().iter().map(|z| ha.coords(&z.select(cells)).unwrap()).collect();
    let image = span(&restricted, ha.dim());
    for coords in all_coords(ha.dim()) {
        let local = ha.element(&coords);
        let parent = BitVector::from_support(x.n_cells(k), local.iter_ones().map(|i| cells[i]));
        let killed = connecting(x, a, k, &parent).unwrap().is_zero();
        assert_eq!(killed, image.contains(&coords), "{name}, k={k}, class {coords}");
    }
}

#[test]
fn long_exact_sequence_is_exact_at_the_subcomplex() {
    let path = builders::necker_path(5, (false, true)).unwrap();
    let px = path.complex();
    assert_exact_at_a(px, &Subcomplex::from_vertices(px, &[0, 5]).unwrap(), 0, "necker path");

    let rosette = builders::p3_rosette().unwrap();
    let rx = rosette.complex();
    let rim = Subcomplex::from_edges(rx, &[0, 1, 2, 3, 4]).unwrap();
    for k in 0..2 {
        assert_exact_at_a(rx, &rim, k, "rosette");
    }

    let disc = builders::grid_complex(4, 3).unwrap();
    let b = Subcomplex::from_edges(&disc, &disc.boundary_edges()).unwrap();
    for k in 0..2 {
        assert_exact_at_a(&disc, &b, k, "grid disc");
    }

    let torus = builders::torus_complex(3, 4).unwrap();
    let (h, _) = builders::torus_generators(3, 4);
    let row = Subcomplex::from_edges(&torus, &h).unwrap();
    for k in 0..2 {
        assert_exact_at_a(&torus, &row, k, "torus row");
    }

    let corner = builders::gear_corner(3).unwrap();
    let cx = corner.complex();
    let cb = Subcomplex::from_edges(cx, &cx.boundary_edges()).unwrap();
    for k in 0..2 {
        assert_exact_at_a(cx, &cb, k, "gear corner");
    }
}

#[test]
fn connecting_map_ignores_the_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cases: Vec<(CellComplex, Vec<usize>)> = vec![
        (builders::p3_rosette().unwrap().complex().clone(), vec![0, 1, 2, 3, 4]),
        (builders::heptagonal_patch(1).unwrap().complex().clone(), vec![]),
        (builders::grid_complex(5, 4).unwrap(), vec![]),
    ];
    for (x, rim_edges) in cases {
        let rim_edges = if rim_edges.is_empty() { x.boundary_edges() } else { rim_edges };
        let a = Subcomplex::from_edges(&x, &rim_edges).unwrap();
        let off_a = a.edges.not();
        for _ in 0..5 {
            // any 1-cochain on a graph is a cocycle
            let data = random_bits(&mut rng, x.n_edges()).and(&a.edges);
            let base = connecting(&x, &a, 1, &data).unwrap();
            for _ in 0..50 {
                let ext = data.xor(&random_bits(&mut rng, x.n_edges()).and(&off_a));
                let other = connecting_with_extension(&x, &a, 1, &data, &ext).unwrap();
                assert_eq!(other.coordinates, base.coordinates);
            }
            // H²(D, ∂D) is one bit, detected by the rim total
            assert_eq!(base.is_zero(), !sum_over(&data, &rim_edges));
        }
    }
}

fn random_cocycle(rng: &mut ChaCha8Rng, t: &DeltaComplex, reps: &[BitVector]) -> BitVector {
    let mut z = t.apply_coboundary(0, &random_bits(rng, t.n_vertices())).unwrap();
    for r in reps {
        if rng.random_bool(0.5) {
            z.xor_assign(r);
        }
    }
    z
}

#[test]
fn cup_pairing_is_bilinear_and_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for x in [
        builders::torus_complex(3, 3).unwrap(),
        builders::rp2_minimal().unwrap().complex().clone(),
        builders::torus_complex(3, 4).unwrap(),
    ] {
        let t = x.triangulate().unwrap();
        let reps: Vec<BitVector> =
            cohomology(&x, 1).unwrap().representatives().iter().map(|r| t.pullback1(r).unwrap()).collect();
        let pair = |a: &BitVector, b: &BitVector| cup_product(&t, a, b).unwrap().pairing;
        for _ in 0..40 {
            let a1 = random_cocycle(&mut rng, &t, &reps);
            let a2 = random_cocycle(&mut rng, &t, &reps);
            let b = random_cocycle(&mut rng, &t, &reps);
            assert_eq!(pair(&a1.xor(&a2), &b), pair(&a1, &b) ^ pair(&a2, &b));
            assert_eq!(pair(&a1, &b), pair(&b, &a1));
        }
    }
}

#[test]
fn triangulation_preserves_h1() {
    for x in [
        builders::torus_complex(3, 3).unwrap(),
        builders::dodecahedral_sphere().unwrap().complex().clone(),
        builders::gear_corner(3).unwrap().complex().clone(),
        builders::heptagonal_patch(1).unwrap().complex().clone(),
        builders::truncated_icosahedral_sphere().unwrap().complex().clone(),
    ] {
        let t = x.triangulate().unwrap();
        assert_eq!(t.euler_characteristic(), x.euler_characteristic());
        let hx = cohomology(&x, 1).unwrap();
        let ht = cohomology(&t.as_cell_complex(), 1).unwrap();
        assert_eq!(hx.dim(), ht.dim());
        let images: Vec<BitVector> = hx
            .representatives()
            .iter()
            .map(|r| {
                let p = t.pullback1(r).unwrap();
                assert!(t.apply_coboundary(1, &p).unwrap().is_zero());
                ht.coords(&p).unwrap()
            })
            .collect();
        if !images.is_empty() {
            let m = bistable::BitMatrix::from_rows(images[0].len(), images).unwrap();
            assert_eq!(rank(&m), hx.dim());
        }
    }
}

#[test]
fn boundary_of_boundary_vanishes_for_every_builder() {
    for entry in CATALOG {
        let sys = builders::build_system(&builders::SystemSpec::new(entry.kind)).unwrap();
        let x = sys.complex();
        let d1 = x.boundary_matrix(1).unwrap();
        let d2 = x.boundary_matrix(2).unwrap();
        assert!(d1.mul(&d2).unwrap().is_zero(), "{}", entry.kind);
        let g = sys.constraint_edges().support();
        assert!(g.iter().all(|&e| e < x.n_edges()));
    }
}

#[test]
fn coboundary_rank_of_connected_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let n = rng.random_range(2..15);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
        for _ in 0..rng.random_range(0..10) {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u != v {
                edges.push((u, v));
            }
        }
        let x = CellComplex::graph(n, edges).unwrap();
        assert_eq!(rank(&x.coboundary(0).unwrap()), n - 1);
        assert_eq!(cohomology(&x, 0).unwrap().dim(), 1);
    }
}

#[test]
fn seam_is_cohomologous_to_the_coupling() {
    let mut systems = vec![
        builders::gear_ring(6).unwrap(),
        builders::gear_ring(7).unwrap(),
        builders::gear_torus(3, 3).unwrap(),
        builders::dodecahedral_sphere().unwrap(),
        builders::mobius_ring(5, &[2]).unwrap(),
    ];
    systems.extend(bistable::sweep::random_systems(40, 10, 77));
    for sys in systems {
        let tree = sys.spanning_forest();
        let s = seam(&sys, &tree).unwrap();
        let indicator = BitVector::from_support(sys.complex().n_edges(), s.iter().copied());
        assert!(s.iter().all(|e| !tree.contains(e)));
        let residual = indicator.xor(&sys.effective_coupling());
        let cs: Vec<_> = sys
            .constraint_edges()
            .iter_ones()
            .map(|e| {
                let (u, v) = sys.complex().edge(e);
                (u, v, residual.get(e))
            })
            .collect();
        assert!(parity_consistent(sys.complex().n_vertices(), &cs));
        assert_eq!(s.is_empty(), parity_consistent(sys.complex().n_vertices(), &constraints(&sys)));
    }

    let odd = builders::gear_ring(7).unwrap();
    assert_eq!(seam(&odd, &odd.spanning_forest()).unwrap().len(), 1);
    assert!(seam(&builders::gear_ring(6).unwrap(), &(0..5).collect::<Vec<_>>()).unwrap().is_empty());

    let torus = builders::gear_torus(3, 3).unwrap();
    let s = seam(&torus, &torus.spanning_forest()).unwrap();
    let ind = BitVector::from_support(18, s.iter().copied());
    let (h, v) = builders::torus_generators(3, 3);
    assert!(sum_over(&ind, &h) && sum_over(&ind, &v));
}
