use std::sync::Arc;

use proptest::prelude::*;

use waiter_client::board::EdgeBoard;
use waiter_client::client::{PotentialAvoid, UniformRandom};
use waiter_client::families::{phi_wc, phi_wc_live, client_fully_claims, FamilySpec, WinningFamily};
use waiter_client::game::{
    play_match, rng_from_seed, ClientStrategy, Convention, ElementId, GameState, Transcript, WaiterStrategy,
};
use waiter_client::graph::{
    chromatic_number, degeneracy, girth, has_kt_minor, independence_number, clique_number, is_planar, GraphView,
};
use waiter_client::waiter::UniformRandomWaiter;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = GraphView> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            GraphView::from_edges(n, edges).unwrap()
        })
    })
}

fn family_strategy() -> impl Strategy<Value = WinningFamily> {
    (2usize..=20).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::btree_set(0..n as u32, 1..=n.min(5)), 1..=12).prop_map(
            move |sets| {
                let sets = sets.into_iter().map(|s| s.into_iter().map(ElementId).collect()).collect();
                WinningFamily::new("prop", n, sets).unwrap()
            },
        )
    })
}

fn conv_strategy() -> impl Strategy<Value = Convention> {
    prop_oneof![Just(Convention::WaiterClient), Just(Convention::ClientWaiter)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn board_ids_are_a_bijection(n in 2usize..40) {
        let b = EdgeBoard::new(n).unwrap();
        prop_assert_eq!(b.size(), n * (n - 1) / 2);
        for e in 0..b.size() as u32 {
            let (u, v) = b.ends(ElementId(e));
            prop_assert!(u < v && v < n);
            prop_assert_eq!(b.id(u, v), ElementId(e));
            prop_assert_eq!(b.id(v, u), ElementId(e));
        }
    }

    #[test]
    fn random_play_partitions_the_board(size in 1usize..40, q in 1usize..6, conv in conv_strategy(), seed in any::<u64>()) {
        let state = GameState::new(size, q, conv).unwrap();
        let out = play_match(&mut UniformRandomWaiter, &mut UniformRandom, state, seed).unwrap();
        let s = &out.state;
        prop_assert!(s.is_terminal());
        prop_assert_eq!(s.client_count() + s.waiter_count(), size);
        prop_assert!(s.client_count() <= s.round());
        for r in s.history() {
            prop_assert!(r.client.len() <= 1);
            prop_assert!(r.offer.len() <= q + 1);
            if conv == Convention::WaiterClient {
                prop_assert_eq!(r.client.len(), usize::from(r.offer.len() > q));
            } else {
                prop_assert_eq!(r.client.len(), 1);
            }
        }
    }

    #[test]
    fn transcripts_round_trip(size in 1usize..30, q in 1usize..5, conv in conv_strategy(), seed in any::<u64>()) {
        let state = GameState::new(size, q, conv).unwrap();
        let out = play_match(&mut UniformRandomWaiter, &mut UniformRandom, state, seed).unwrap();
        let back = Transcript::from_json(&out.transcript.to_json()).unwrap();
        prop_assert_eq!(&back, &out.transcript);
        let replayed = back.replay().unwrap();
        prop_assert_eq!(replayed.owners(), out.state.owners());
    }

    #[test]
    fn potential_never_rises(family in family_strategy(), q in 1usize..5, seed in any::<u64>()) {
        let family = Arc::new(family);
        let mut state = GameState::new(family.n_elements(), q, Convention::WaiterClient).unwrap();
        let mut client = PotentialAvoid::new(family.clone());
        let mut waiter = UniformRandomWaiter;
        let (mut wr, mut cr) = (rng_from_seed(seed, 1), rng_from_seed(seed, 2));
        let mut prev = phi_wc_live(&family, &state);
        prop_assert!((prev - phi_wc(&family, q)).abs() < 1e-12);
        while !state.is_terminal() {
            let offer = waiter.offer(&state, &mut wr).unwrap();
            let pick = if state.offer_needs_pick(&offer) { Some(client.pick(&state, &offer, &mut cr).unwrap()) } else { None };
            state.resolve_round(offer, pick).unwrap();
            let now = phi_wc_live(&family, &state);
            prop_assert!(now <= prev + 1e-12, "{} -> {}", prev, now);
            prev = now;
        }
        prop_assert!(client_fully_claims(&state, &family).len() as f64 <= phi_wc(&family, q).floor());
    }

    #[test]
    fn minors_are_monotone_in_t(g in graph_strategy(8)) {
        let mut prev = true;
        for t in 1..=5 {
            let now = has_kt_minor(&g, t).unwrap().present;
            prop_assert!(prev || !now, "K_{} minor without K_{}", t, t - 1);
            prev = now;
        }
    }

    #[test]
    fn forest_equivalences(g in graph_strategy(10)) {
        let forest = g.is_forest();
        prop_assert_eq!(forest, !has_kt_minor(&g, 3).unwrap().present);
        prop_assert_eq!(forest, girth(&g).is_none());
    }

    #[test]
    fn nonplanar_graphs_have_k4_minors(g in graph_strategy(10)) {
        if !is_planar(&g) {
            prop_assert!(has_kt_minor(&g, 4).unwrap().present);
        }
        if g.edge_count() > 3 * g.n().saturating_sub(2).max(1) {
            prop_assert!(!is_planar(&g));
        }
    }

    #[test]
    fn coloring_bounds(g in graph_strategy(9)) {
        let chi = chromatic_number(&g);
        prop_assert!(chi.exact);
        prop_assert!(chi.value <= degeneracy(&g) + 1);
        let alpha = independence_number(&g);
        prop_assert!(alpha.value * chi.value >= g.n());
        prop_assert_eq!(alpha.value, clique_number(&g.complement()).value);
        prop_assert!(clique_number(&g).value <= chi.value);
    }

    #[test]
    fn family_specs_round_trip(n in 3usize..9, a in 3usize..9, b in 3usize..9) {
        let (lmin, lmax) = (a.min(b).min(n), a.max(b).min(n));
        for spec in [FamilySpec::Cycles { n, lmin, lmax }, FamilySpec::Cliques { n, r: lmin }] {
            let parsed: FamilySpec = spec.to_string().parse().unwrap();
            prop_assert_eq!(parsed, spec);
        }
    }
}

#[test]
fn strategies_are_object_safe_clones() {
    let w: Box<dyn WaiterStrategy> = Box::new(UniformRandomWaiter);
    let c: Box<dyn ClientStrategy> = Box::new(UniformRandom);
    assert_eq!(w.box_clone().name(), w.name());
    assert_eq!(c.box_clone().name(), c.name());
}
