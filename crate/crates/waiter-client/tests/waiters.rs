use std::sync::Arc;
use std::time::Instant;

use waiter_client::board::EdgeBoard;
use waiter_client::client::{cycle_avoiding_client, PotentialAvoid, UniformRandom};
use waiter_client::families::{enumerate, FamilySpec};
use waiter_client::game::{play_match, Convention, GameState, Owner};
use waiter_client::graph::{girth, is_linear_forest, verify_branch_sets, GraphView};
use waiter_client::waiter::{
    h1_degree_bound, ColorabilityWaiter, ConnectivityWaiter, MinorForcingWaiter, MinorParams, OddCycleWaiter,
    PathForcingWaiter, TreeForcingWaiter,
};

fn client_graph(n: usize, state: &GameState) -> GraphView {
    GraphView::from_owner(&EdgeBoard::new(n).unwrap(), state, Owner::Client)
}

#[test]
fn path_forcing_reaches_m_minus_q_vertices() {
    for m in [5, 9, 14] {
        for q in 1..=3 {
            let fam = Arc::new(enumerate(&FamilySpec::Cycles { n: m, lmin: 3, lmax: 3 }).unwrap());
            for seed in 0..5 {
                let state = GameState::new(EdgeBoard::new(m).unwrap().size(), q, Convention::WaiterClient).unwrap();
                let mut w = PathForcingWaiter::new(m).unwrap();
                play_match(&mut w, &mut PotentialAvoid::new(fam.clone()), state, seed).unwrap();
                assert!(w.path().len() >= m - q, "m={m} q={q}: path {:?}", w.path());
            }
        }
    }
}

#[test]
fn connectivity_waiter_connects_below_threshold() {
    for (n, q) in [(4, 1), (5, 1), (8, 3), (9, 2), (11, 4), (20, 9), (21, 5)] {
        for seed in 0..10 {
            let state = GameState::new(EdgeBoard::new(n).unwrap().size(), q, Convention::WaiterClient).unwrap();
            let mut w = ConnectivityWaiter::new(n, q).unwrap();
            let out = play_match(&mut w, &mut UniformRandom, state, seed).unwrap();
            assert!(client_graph(n, &out.state).is_connected(), "n={n} q={q} seed={seed}");
        }
    }
    assert!(ConnectivityWaiter::new(10, 5).is_err());
}

#[test]
fn tree_forcing_keeps_client_acyclic() {
    for (n, q) in [(6, 2), (7, 3), (10, 4), (11, 5)] {
        for seed in 0..50 {
            let state = GameState::new(EdgeBoard::new(n).unwrap().size(), q, Convention::ClientWaiter).unwrap();
            let mut w = TreeForcingWaiter::new(n, q).unwrap();
            let out = play_match(&mut w, &mut UniformRandom, state, seed).unwrap();
            assert!(client_graph(n, &out.state).is_forest(), "n={n} q={q} seed={seed}");
        }
    }
    assert!(TreeForcingWaiter::new(6, 1).is_err());
}

#[test]
fn odd_cycle_waiter_forces_an_odd_cycle() {
    for (n, q) in [(12, 2), (20, 3), (30, 5)] {
        for seed in 0..10 {
            let state = GameState::new(EdgeBoard::new(n).unwrap().size(), q, Convention::WaiterClient).unwrap();
            let mut w = OddCycleWaiter::new(n, q, 0.5).unwrap();
            let out = play_match(&mut w, &mut UniformRandom, state, seed).unwrap();
            assert!(!client_graph(n, &out.state).is_bipartite(), "n={n} q={q} seed={seed}");
        }
    }
    assert!(OddCycleWaiter::new(10, 10, 0.0).is_err());
}

#[test]
fn minor_waiter_emits_valid_branch_sets() {
    let params = MinorParams { n: 400, q: 40, eps: 0.9, t: 3 };
    for seed in 0..3 {
        let t0 = Instant::now();
        let state = GameState::new(EdgeBoard::new(400).unwrap().size(), 40, Convention::WaiterClient).unwrap();
        let mut w = MinorForcingWaiter::new(params).unwrap();
        let out = play_match(&mut w, &mut UniformRandom, state, seed).unwrap();
        let witness = w.witness().expect("all stages finished");
        let g = client_graph(400, &out.state);
        assert!(verify_branch_sets(&g, &witness).unwrap());
        assert_eq!(witness.sets.len(), 3);
        eprintln!("minor n=400 seed={seed}: {:?}", t0.elapsed());
    }
}

#[test]
fn colorability_waiter_structure() {
    let (n, k, q) = (60, 10, 59);
    for seed in 0..3 {
        let state = GameState::new(EdgeBoard::new(n).unwrap().size(), q, Convention::ClientWaiter).unwrap();
        let mut w = ColorabilityWaiter::new(n, k, q, 0.1, 0.0).unwrap();
        play_match(&mut w, &mut UniformRandom, state, seed).unwrap();
        let h1 = w.h1_graph();
        assert!(girth(&h1).is_none_or(|g| g >= 5));
        assert!(h1.max_degree() <= h1_degree_bound(n, q));
        assert!(is_linear_forest(&w.h2_graph()));
    }
}

#[test]
fn cycle_avoiding_client_respects_potential_floor() {
    let n = 6;
    let q = 5;
    let client = cycle_avoiding_client(n).unwrap();
    let fam = client.family().clone();
    let bound = waiter_client::families::phi_wc(&fam, q).floor() as usize;
    for seed in 0..50 {
        let state = GameState::new(EdgeBoard::new(n).unwrap().size(), q, Convention::WaiterClient).unwrap();
        let out = play_match(
            &mut waiter_client::waiter::UniformRandomWaiter,
            &mut client.clone(),
            state,
            seed,
        )
        .unwrap();
        assert!(waiter_client::families::client_fully_claims(&out.state, &fam).len() <= bound);
    }
}
