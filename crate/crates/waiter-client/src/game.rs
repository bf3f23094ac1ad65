//! Rules engine and referee for (1:q) Waiter-Client and Client-Waiter games.
//!
//! A board is the index set `0..board_size`. Each round Waiter offers a set of
//! free elements; Client keeps one of them (or none in the short final round
//! of a Waiter-Client game) and Waiter claims the rest.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};

/// Random number generator used by every seeded strategy.
pub type GameRng = ChaCha8Rng;

/// Builds the generator for `seed`; `stream` separates independent consumers.
pub fn rng_from_seed(seed: u64, stream: u64) -> GameRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl ElementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(i as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    #[serde(rename = "WC")]
    WaiterClient,
    #[serde(rename = "CW")]
    ClientWaiter,
}

impl Convention {
    pub fn short(self) -> &'static str {
        match self {
            Convention::WaiterClient => "WC",
            Convention::ClientWaiter => "CW",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "WC" | "WAITERCLIENT" | "WAITER-CLIENT" => Ok(Convention::WaiterClient),
            "CW" | "CLIENTWAITER" | "CLIENT-WAITER" => Ok(Convention::ClientWaiter),
            _ => Err(Error::Parse(format!("unknown convention `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Owner {
    Free,
    Waiter,
    Client,
}

/// A set of offered elements, kept sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Offer(Vec<ElementId>);

impl Offer {
    /// Sorts the elements; duplicates are a rule violation.
    pub fn new(mut elements: Vec<ElementId>) -> Result<Self> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Rule("offer contains a repeated element".into()));
        }
        Ok(Offer(elements))
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.0.binary_search(&e).is_ok()
    }
}

impl<'a> IntoIterator for &'a Offer {
    type Item = &'a ElementId;
    type IntoIter = std::slice::Iter<'a, ElementId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub offer: Offer,
    pub client: Vec<ElementId>,
    pub waiter: Vec<ElementId>,
}

#[derive(Debug, Clone)]
pub struct GameState {
    board_size: usize,
    q: usize,
    convention: Convention,
    owner: Vec<Owner>,
    free: usize,
    client: usize,
    round: usize,
    history: Vec<RoundRecord>,
}

impl GameState {
    pub fn new(board_size: usize, q: usize, convention: Convention) -> Result<Self> {
        if board_size == 0 {
            return Err(Error::Parameter("board size must be at least 1".into()));
        }
        if q == 0 {
            return Err(Error::Parameter("bias q must be at least 1".into()));
        }
        if board_size > u32::MAX as usize {
            return Err(Error::Parameter("board too large".into()));
        }
        Ok(GameState {
            board_size,
            q,
            convention,
            owner: vec![Owner::Free; board_size],
            free: board_size,
            client: 0,
            round: 0,
            history: Vec::new(),
        })
    }

    pub fn board_size(&self) -> usize {
        self.board_size
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    pub fn owner(&self, e: ElementId) -> Owner {
        self.owner[e.index()]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owner
    }

    pub fn is_free(&self, e: ElementId) -> bool {
        self.owner[e.index()] == Owner::Free
    }

    pub fn free_count(&self) -> usize {
        self.free
    }

    pub fn client_count(&self) -> usize {
        self.client
    }

    pub fn waiter_count(&self) -> usize {
        self.board_size - self.free - self.client
    }

    pub fn is_terminal(&self) -> bool {
        self.free == 0
    }

    pub fn free_elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elements_owned_by(Owner::Free)
    }

    pub fn client_elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elements_owned_by(Owner::Client)
    }

    pub fn waiter_elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elements_owned_by(Owner::Waiter)
    }

    fn elements_owned_by(&self, who: Owner) -> impl Iterator<Item = ElementId> + '_ {
        self.owner
            .iter()
            .enumerate()
            .filter(move |(_, &o)| o == who)
            .map(|(i, _)| ElementId(i as u32))
    }

    /// Number of elements a Waiter-Client offer must contain right now.
    pub fn required_wc_offer_size(&self) -> usize {
        (self.q + 1).min(self.free)
    }

    /// Largest legal offer in the current position.
    pub fn max_offer_size(&self) -> usize {
        (self.q + 1).min(self.free)
    }

    /// Whether resolving `offer` requires a Client pick.
    pub fn offer_needs_pick(&self, offer: &Offer) -> bool {
        match self.convention {
            Convention::WaiterClient => offer.len() > self.q,
            Convention::ClientWaiter => true,
        }
    }

    pub fn validate_offer(&self, offer: &Offer) -> Result<()> {
        if self.is_terminal() {
            return Err(Error::Rule("game is over".into()));
        }
        if offer.is_empty() {
            return Err(Error::Rule("offer is empty".into()));
        }
        for &e in offer {
            if e.index() >= self.board_size {
                return Err(Error::UnknownElement(e));
            }
            if !self.is_free(e) {
                return Err(Error::Rule(format!("offered element {e} is not free")));
            }
        }
        match self.convention {
            Convention::WaiterClient => {
                let want = self.required_wc_offer_size();
                if offer.len() != want {
                    return Err(Error::Rule(format!(
                        "Waiter-Client offer must contain {want} elements, got {}",
                        offer.len()
                    )));
                }
            }
            Convention::ClientWaiter => {
                if offer.len() > self.q + 1 {
                    return Err(Error::Rule(format!(
                        "Client-Waiter offer may contain at most {} elements, got {}",
                        self.q + 1,
                        offer.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies one round. `pick` must be `None` exactly when the last-round
    /// rule leaves Client nothing (Waiter-Client offer of at most q elements).
    pub fn resolve_round(&mut self, offer: Offer, pick: Option<ElementId>) -> Result<&RoundRecord> {
        self.validate_offer(&offer)?;
        let needs_pick = self.offer_needs_pick(&offer);
        let client: Vec<ElementId> = match (needs_pick, pick) {
            (true, Some(p)) if offer.contains(p) => vec![p],
            (true, Some(p)) => return Err(Error::Rule(format!("pick {p} is not in the offer"))),
            (true, None) => return Err(Error::Rule("Client must pick an offered element".into())),
            (false, Some(_)) => {
                return Err(Error::Rule("the last-round rule gives Client no element".into()))
            }
            (false, None) => Vec::new(),
        };
        let waiter: Vec<ElementId> = offer
            .elements()
            .iter()
            .copied()
            .filter(|e| !client.contains(e))
            .collect();
        for &e in &client {
            self.owner[e.index()] = Owner::Client;
        }
        for &e in &waiter {
            self.owner[e.index()] = Owner::Waiter;
        }
        self.free -= offer.len();
        self.client += client.len();
        self.round += 1;
        self.history.push(RoundRecord { offer, client, waiter });
        Ok(self.history.last().expect("just pushed"))
    }

    /// Rebuilds a state by applying `rounds` to a fresh board.
    pub fn replay(
        board_size: usize,
        q: usize,
        convention: Convention,
        rounds: &[RoundRecord],
    ) -> Result<Self> {
        let mut state = GameState::new(board_size, q, convention)?;
        for r in rounds {
            let pick = r.client.first().copied();
            if r.client.len() > 1 {
                return Err(Error::Rule("a round gives Client at most one element".into()));
            }
            let rec = state.resolve_round(r.offer.clone(), pick)?;
            if rec.waiter != r.waiter {
                return Err(Error::Rule("recorded Waiter share does not match the rules".into()));
            }
        }
        Ok(state)
    }
}

/// Serializable record of a complete match.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub convention: Convention,
    pub n_elements: usize,
    pub q: usize,
    pub seed: u64,
    pub rounds: Vec<RoundRecord>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn replay(&self) -> Result<GameState> {
        GameState::replay(self.n_elements, self.q, self.convention, &self.rounds)
    }
}

pub trait WaiterStrategy: Send {
    fn name(&self) -> String;

    fn offer(&mut self, state: &GameState, rng: &mut GameRng) -> Result<Offer>;

    /// Called after each resolved round with the updated state.
    fn observe(&mut self, _state: &GameState, _record: &RoundRecord) {}

    /// Non-fatal notes such as unverified guarantees.
    fn diagnostics(&self) -> Vec<String> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy>;
}

pub trait ClientStrategy: Send {
    fn name(&self) -> String;

    fn pick(&mut self, state: &GameState, offer: &Offer, rng: &mut GameRng) -> Result<ElementId>;

    fn observe(&mut self, _state: &GameState, _record: &RoundRecord) {}

    fn diagnostics(&self) -> Vec<String> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn ClientStrategy>;
}

impl Clone for Box<dyn WaiterStrategy> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

impl Clone for Box<dyn ClientStrategy> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

#[derive(Debug, Clone)]
pub struct MatchOutcome {
    pub transcript: Transcript,
    pub state: GameState,
}

/// Plays `state` to the end. Waiter and Client draw from separate streams
/// of the match seed, so identical seeds give identical transcripts.
pub fn play_match(
    waiter: &mut dyn WaiterStrategy,
    client: &mut dyn ClientStrategy,
    mut state: GameState,
    seed: u64,
) -> Result<MatchOutcome> {
    let mut waiter_rng = rng_from_seed(seed, 1);
    let mut client_rng = rng_from_seed(seed, 2);
    let start_round = state.round();
    while !state.is_terminal() {
        let offer = waiter.offer(&state, &mut waiter_rng)?;
        state.validate_offer(&offer).map_err(|e| Error::Forfeit {
            side: Side::Waiter,
            reason: format!("{} in round {}: {e}", waiter.name(), state.round() + 1),
        })?;
        let pick = if state.offer_needs_pick(&offer) {
            let p = client.pick(&state, &offer, &mut client_rng)?;
            if !offer.contains(p) {
                return Err(Error::Forfeit {
                    side: Side::Client,
                    reason: format!(
                        "{} picked {p} outside the offer in round {}",
                        client.name(),
                        state.round() + 1
                    ),
                });
            }
            Some(p)
        } else {
            None
        };
        let record = state.resolve_round(offer, pick)?.clone();
        waiter.observe(&state, &record);
        client.observe(&state, &record);
    }
    let transcript = Transcript {
        convention: state.convention(),
        n_elements: state.board_size(),
        q: state.q(),
        seed,
        rounds: state.history()[start_round..].to_vec(),
    };
    Ok(MatchOutcome { transcript, state })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<ElementId> {
        v.iter().map(|&i| ElementId(i)).collect()
    }

    #[test]
    fn new_game_rejects_degenerate_parameters() {
        assert!(GameState::new(0, 1, Convention::WaiterClient).is_err());
        assert!(GameState::new(5, 0, Convention::ClientWaiter).is_err());
        let s = GameState::new(21, 3, Convention::WaiterClient).unwrap();
        assert_eq!(s.free_count(), 21);
        assert_eq!(s.round(), 0);
    }

    #[test]
    fn wc_offer_size_is_exact() {
        let s = GameState::new(10, 2, Convention::WaiterClient).unwrap();
        assert!(s.validate_offer(&Offer::new(ids(&[0, 1, 2])).unwrap()).is_ok());
        assert!(s.validate_offer(&Offer::new(ids(&[0, 1])).unwrap()).is_err());
        let c = GameState::new(10, 2, Convention::ClientWaiter).unwrap();
        assert!(c.validate_offer(&Offer::new(ids(&[4])).unwrap()).is_ok());
        assert!(c.validate_offer(&Offer::new(ids(&[0, 1, 2, 3])).unwrap()).is_err());
    }

    #[test]
    fn duplicate_offer_is_rejected() {
        assert!(Offer::new(ids(&[1, 1])).is_err());
    }

    #[test]
    fn short_final_round_goes_to_waiter() {
        let mut s = GameState::new(2, 3, Convention::WaiterClient).unwrap();
        let offer = Offer::new(ids(&[0, 1])).unwrap();
        assert!(s.resolve_round(offer.clone(), Some(ElementId(0))).is_err());
        let rec = s.resolve_round(offer, None).unwrap();
        assert!(rec.client.is_empty());
        assert_eq!(rec.waiter.len(), 2);
        assert!(s.is_terminal());
    }

    #[test]
    fn cw_single_offer_goes_to_client() {
        let mut s = GameState::new(3, 2, Convention::ClientWaiter).unwrap();
        s.resolve_round(Offer::new(ids(&[1])).unwrap(), Some(ElementId(1))).unwrap();
        assert_eq!(s.owner(ElementId(1)), Owner::Client);
        assert_eq!(s.waiter_count(), 0);
    }

    #[test]
    fn pick_outside_offer_is_rejected() {
        let mut s = GameState::new(4, 1, Convention::WaiterClient).unwrap();
        let r = s.resolve_round(Offer::new(ids(&[0, 1])).unwrap(), Some(ElementId(3)));
        assert!(r.is_err());
        assert_eq!(s.free_count(), 4);
    }
}
