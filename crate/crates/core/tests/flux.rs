mod common;

use std::sync::Arc;

use proptest::prelude::*;

use bistable::builders;
use bistable::flux::{
    classify_reachability, find_potential, reachable, sector, sector_in, BoundaryMode, GameSession, GameState,
    PotentialResult, Reachability,
};
use bistable::sweep::{sector_census, Exec};
use bistable::{BitVector, CellComplex, Error, Level};

use common::*;

fn prism4() -> CellComplex {
    builders::prism(4).unwrap().complex().clone()
}

/// Edges lying in exactly one face, counted from the face walks.
fn rim(x: &CellComplex) -> Vec<usize> {
    let mut count = vec![0; x.n_edges()];
    for walk in x.faces() {
        for &e in walk {
            count[e] += 1;
        }
    }
    (0..x.n_edges()).filter(|&e| count[e] == 1).collect()
}

fn flux_of(x: &CellComplex, mask: u64) -> BitVector {
    BitVector::from_u64(x.n_faces(), mask)
}

fn mask_of(v: &BitVector) -> u64 {
    v.iter_ones().map(|i| 1u64 << i).sum()
}

#[test]
fn prism_reachability_matches_search() {
    let x = prism4();
    let f = x.n_faces();
    let all: Vec<usize> = (0..x.n_edges()).collect();
    for a in 0u64..1 << f {
        let orbit = bfs_fluxes(&x, a, &all);
        for b in 0u64..1 << f {
            let (fa, fb) = (flux_of(&x, a), flux_of(&x, b));
            let same = sector(&x, &fa).unwrap() == sector(&x, &fb).unwrap();
            assert_eq!(same, orbit.contains(&b), "{a:06b} -> {b:06b}");
            match reachable(&x, &fa, &fb, BoundaryMode::Free).unwrap() {
                Reachability::Reachable { moves } => {
                    let applied = moves.iter().fold(a, |m, &e| m ^ toggle_mask(&x, e));
                    assert_eq!(applied, b);
                }
                Reachability::Unreachable { from, to } => {
                    assert!(!orbit.contains(&b));
                    assert_ne!(from, to);
                }
            }
        }
    }
}

#[test]
fn frozen_reachability_matches_search() {
    for (w, h) in [(3, 2), (2, 3), (4, 3)] {
        let x = builders::grid_complex(w, h).unwrap();
        let b = rim(&x);
        let interior: Vec<usize> = (0..x.n_edges()).filter(|e| !b.contains(e)).collect();
        let orbit = bfs_fluxes(&x, 0, &interior);
        for m in 0u64..1 << x.n_faces() {
            let mu = flux_of(&x, m);
            let lib = reachable(&x, &BitVector::zeros(x.n_faces()), &mu, BoundaryMode::Frozen).unwrap();
            assert_eq!(lib.is_reachable(), orbit.contains(&m), "{w}x{h} {m:b}");
            let zero = sector_in(&x, &mu, BoundaryMode::Frozen).unwrap().is_zero();
            assert_eq!(zero, orbit.contains(&m));
            // with the rim free every flux on a disc is reachable
            assert!(reachable(&x, &BitVector::zeros(x.n_faces()), &mu, BoundaryMode::Free).unwrap().is_reachable());
        }
        let verdict = classify_reachability(
            &x,
            &BitVector::zeros(x.n_faces()),
            &BitVector::unit(x.n_faces(), 0),
            BoundaryMode::Frozen,
        )
        .unwrap()
        .expect("one defect cannot be created with a frozen rim");
        assert_eq!(verdict.level, Level::Inaccessibility);
        assert_eq!(verdict.groups["H2(X,dX)"], 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potentials_solve_the_flux(m in 0u64..1 << 20, n in 0usize..30) {
        let x = builders::icosahedron().unwrap().complex().clone();
        let mu = flux_of(&x, m);
        match find_potential(&x, &mu).unwrap() {
            PotentialResult::Potential(a) => {
                let produced = a.iter_ones().fold(0, |acc, e| acc ^ toggle_mask(&x, e));
                prop_assert_eq!(produced, m);
                prop_assert_eq!(m.count_ones() % 2, 0);
                // another potential differs by a cocycle
                let mut other = a.clone();
                let star: Vec<usize> = (0..x.n_edges()).filter(|&e| { let (u, v) = x.edge(e); u == n % 12 || v == n % 12 }).collect();
                for e in star {
                    other.flip(e);
                }
                let diff = other.xor(&a);
                prop_assert!(x.apply_coboundary(1, &diff).unwrap().is_zero());
                let again = other.iter_ones().fold(0, |acc, e| acc ^ toggle_mask(&x, e));
                prop_assert_eq!(again, m);
            }
            PotentialResult::Obstructed(coords) => {
                prop_assert_eq!(m.count_ones() % 2, 1);
                prop_assert_eq!(coords, BitVector::ones(1));
            }
        }
    }

    #[test]
    fn toggles_flip_two_faces_on_closed_surfaces(edges in proptest::collection::vec(0usize..30, 0..40)) {
        let x = Arc::new(builders::dodecahedral_sphere().unwrap().complex().clone());
        let start = BitVector::zeros(x.n_faces());
        let mut game = GameSession::new(x.clone(), BoundaryMode::Free, start.clone(), start.clone()).unwrap();
        for &e in &edges {
            let before = game.current().clone();
            game.toggle(e).unwrap();
            prop_assert_eq!(game.current().xor(&before).count_ones(), 2);
        }
        prop_assert_eq!(game.current().count_ones() % 2, 0);
        prop_assert!(game.sector().unwrap().is_zero());
        prop_assert_eq!(game.log(), &edges[..]);
    }
}

#[test]
fn solved_sessions_replay_to_a_win() {
    let x = Arc::new(builders::grid_complex(4, 4).unwrap());
    let target = flux_of(&x, 0b100010001);
    let start = BitVector::zeros(9);
    let game = GameSession::new(x.clone(), BoundaryMode::Free, start.clone(), target.clone()).unwrap();
    let Reachability::Reachable { moves } = game.solve().unwrap() else {
        panic!("a free disc reaches every flux");
    };
    let done = GameSession::replay(x.clone(), BoundaryMode::Free, start.clone(), target.clone(), &moves).unwrap();
    assert!(done.won());
    assert_eq!(mask_of(done.current()), 0b100010001);

    let mut frozen = GameSession::new(x.clone(), BoundaryMode::Frozen, start.clone(), target).unwrap();
    let edge = rim(&x)[0];
    assert!(matches!(frozen.toggle(edge), Err(Error::FrozenEdge(e)) if e == edge));
    assert!(matches!(frozen.toggle(999), Err(Error::OutOfRange { .. })));
    assert!(!frozen.solve().unwrap().is_reachable());
    let inner = frozen.toggleable_edges()[0];
    frozen.toggle(inner).unwrap();
    assert_eq!(frozen.log(), &[inner]);
    frozen.reset();
    assert_eq!(frozen.current(), &start);
    assert!(frozen.log().is_empty());
}

#[test]
fn game_state_round_trips_through_json() {
    let x = Arc::new(builders::tetrahedron().unwrap().complex().clone());
    let mut game =
        GameSession::new(x, BoundaryMode::Free, BitVector::zeros(4), BitVector::from_u64(4, 0b0011)).unwrap();
    game.toggle(0).unwrap();
    let state = game.state().unwrap();
    let text = serde_json::to_string(&state).unwrap();
    let back: GameState = serde_json::from_str(&text).unwrap();
    assert_eq!(back, state);
    assert_eq!(back.moves, 1);
    assert_eq!(back.faces.count_ones(), 2);
}

#[test]
fn sector_census_counts_match_enumeration() {
    for x in [
        builders::tetrahedron().unwrap().complex().clone(),
        prism4(),
        builders::rp2_minimal().unwrap().complex().clone(),
        builders::torus_complex(2, 3).unwrap(),
    ] {
        let f = x.n_faces();
        let seq = sector_census(&x, Exec::Sequential).unwrap();
        assert_eq!(seq, sector_census(&x, Exec::Parallel).unwrap());
        // closed connected surface: H² has one bit, the face parity
        assert_eq!(seq.len(), 2);
        for (class, &count) in &seq {
            assert_eq!(count, 1 << (f - 1));
            let odd = (0u64..1 << f).find(|m| m.count_ones() % 2 == 1).unwrap();
            let odd_class = sector(&x, &flux_of(&x, odd)).unwrap();
            assert_eq!(class == &odd_class, !class.is_zero());
        }
    }
    assert!(
        sector_census(&builders::truncated_icosahedral_sphere().unwrap().complex().clone(), Exec::Sequential).is_err()
    );
}
