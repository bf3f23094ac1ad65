//! C ABI over the `waiter_client` crate.
//!
//! Every fallible function returns a [`WcStatus`]; on failure the message is
//! kept per thread and can be fetched with [`wc_last_error_message`].
//! Objects are opaque handles freed by their `_free` function. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! must be released with [`wc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use waiter_client::board::EdgeBoard;
use waiter_client::families::{enumerate, phi_cw, phi_wc, FamilySpec, WinningFamily};
use waiter_client::game::{play_match, ClientStrategy, Convention, ElementId, GameState, Offer, Owner, WaiterStrategy};
use waiter_client::harness::{run_experiment, ClientSpec, ExperimentConfig, Predicate, WaiterSpec};
use waiter_client::solver::{solve, Objective};
use waiter_client::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    RuleViolation = 3,
    CapExceeded = 4,
    StrategyFailure = 5,
    ParseError = 6,
    Io = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcConvention {
    WaiterClient = 0,
    ClientWaiter = 1,
}

impl From<WcConvention> for Convention {
    fn from(c: WcConvention) -> Self {
        match c {
            WcConvention::WaiterClient => Convention::WaiterClient,
            WcConvention::ClientWaiter => Convention::ClientWaiter,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcOwner {
    Free = 0,
    Client = 1,
    Waiter = 2,
}

/// Game state handle.
pub struct WcGame(GameState);

/// Waiter strategy handle.
pub struct WcWaiter(Box<dyn WaiterStrategy>);

/// Client strategy handle.
pub struct WcClient(Box<dyn ClientStrategy>);

/// Winning family handle.
pub struct WcFamily(Arc<WinningFamily>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> WcStatus {
    match e {
        Error::Parameter(_) | Error::UnknownElement(_) => WcStatus::InvalidArgument,
        Error::Rule(_) | Error::Forfeit { .. } => WcStatus::RuleViolation,
        Error::Cap(_) | Error::InfeasibleEnumeration { .. } => WcStatus::CapExceeded,
        Error::StrategyFailure(_) => WcStatus::StrategyFailure,
        Error::Parse(_) => WcStatus::ParseError,
        Error::Io(_) => WcStatus::Io,
        Error::Invariant(_) => WcStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, records any failure and maps it to a status. Panics are caught
/// so they never unwind into C.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WcStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer passed for `{what}`"));
            WcStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            WcStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Lib(Error::Parse(format!("`{what}` is not UTF-8"))))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn handle_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or NULL. Free with
/// [`wc_string_free`].
#[no_mangle]
pub extern "C" fn wc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a fresh game on `board_size` elements.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_game_new(
    board_size: usize,
    q: usize,
    convention: WcConvention,
    out: *mut *mut WcGame,
) -> WcStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(WcGame(GameState::new(board_size, q, convention.into())?)));
        Ok(())
    })
}

/// # Safety
/// `game` must come from [`wc_game_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wc_game_free(game: *mut WcGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of resolved rounds, or 0 for NULL.
///
/// # Safety
/// `game` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn wc_game_round(game: *const WcGame) -> usize {
    game.as_ref().map_or(0, |g| g.0.round())
}

/// Whether the game is over; NULL counts as over.
///
/// # Safety
/// `game` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn wc_game_is_terminal(game: *const WcGame) -> bool {
    game.as_ref().is_none_or(|g| g.0.is_terminal())
}

/// # Safety
/// `game` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn wc_game_owner(game: *const WcGame, element: u32, out: *mut WcOwner) -> WcStatus {
    guard(|| {
        let g = handle(game, "game")?;
        let out = out_arg(out, "out")?;
        if element as usize >= g.0.board_size() {
            return Err(Error::UnknownElement(ElementId(element)).into());
        }
        *out = match g.0.owner(ElementId(element)) {
            Owner::Free => WcOwner::Free,
            Owner::Client => WcOwner::Client,
            Owner::Waiter => WcOwner::Waiter,
        };
        Ok(())
    })
}

/// Resolves one round. `pick < 0` means no pick, which is only legal when
/// the offer gives Client nothing.
///
/// # Safety
/// `game` must be valid and `offer` must point to `len` elements.
#[no_mangle]
pub unsafe extern "C" fn wc_game_resolve_round(game: *mut WcGame, offer: *const u32, len: usize, pick: i64) -> WcStatus {
    guard(|| {
        let g = handle_mut(game, "game")?;
        if offer.is_null() && len > 0 {
            return Err(Fail::Null("offer"));
        }
        let ids = if len == 0 { &[][..] } else { std::slice::from_raw_parts(offer, len) };
        let offer = Offer::new(ids.iter().map(|&e| ElementId(e)).collect())?;
        let pick = u32::try_from(pick).ok().map(ElementId);
        g.0.resolve_round(offer, pick)?;
        Ok(())
    })
}

/// Builds a Waiter strategy from a spec such as `minor(eps=0.9,t=4)` for E(K_n).
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_waiter_new(spec: *const c_char, n: usize, q: usize, out: *mut *mut WcWaiter) -> WcStatus {
    guard(|| {
        let spec: WaiterSpec = str_arg(spec, "spec")?.parse()?;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(WcWaiter(spec.build(n, q)?)));
        Ok(())
    })
}

/// # Safety
/// `w` must come from [`wc_waiter_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wc_waiter_free(w: *mut WcWaiter) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Builds a Client strategy from a spec such as `potential(cycles(6,3,6))`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_client_new(spec: *const c_char, n: usize, out: *mut *mut WcClient) -> WcStatus {
    guard(|| {
        let spec: ClientSpec = str_arg(spec, "spec")?.parse()?;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(WcClient(spec.build(n)?)));
        Ok(())
    })
}

/// # Safety
/// `c` must come from [`wc_client_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wc_client_free(c: *mut WcClient) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Plays a match on E(K_n) with clones of the given strategies and returns
/// the transcript as JSON.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wc_play_match(
    waiter: *const WcWaiter,
    client: *const WcClient,
    n: usize,
    q: usize,
    convention: WcConvention,
    seed: u64,
    transcript_json: *mut *mut c_char,
) -> WcStatus {
    guard(|| {
        let w = handle(waiter, "waiter")?;
        let c = handle(client, "client")?;
        let out = out_arg(transcript_json, "transcript_json")?;
        let board = EdgeBoard::new(n)?;
        let state = GameState::new(board.size(), q, convention.into())?;
        let m = play_match(w.0.box_clone().as_mut(), c.0.box_clone().as_mut(), state, seed)?;
        *out = to_c(m.transcript.to_json());
        Ok(())
    })
}

/// Evaluates a predicate such as `kt_minor(4)` on the Client graph of a
/// transcript produced on an edge board.
///
/// # Safety
/// Both strings must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wc_evaluate_predicate(
    predicate: *const c_char,
    transcript_json: *const c_char,
    out: *mut bool,
) -> WcStatus {
    guard(|| {
        let p: Predicate = str_arg(predicate, "predicate")?.parse()?;
        let t = waiter_client::game::Transcript::from_json(str_arg(transcript_json, "transcript_json")?)?;
        let out = out_arg(out, "out")?;
        let (board, client) = waiter_client::harness::replay_client_graph(&t)?;
        *out = p.evaluate(&board, &client)?;
        Ok(())
    })
}

/// Enumerates a family such as `cycles(6,3,6)`.
///
/// # Safety
/// `spec` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wc_family_new(spec: *const c_char, out: *mut *mut WcFamily) -> WcStatus {
    guard(|| {
        let spec: FamilySpec = str_arg(spec, "spec")?.parse()?;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(WcFamily(Arc::new(enumerate(&spec)?))));
        Ok(())
    })
}

/// # Safety
/// `f` must come from [`wc_family_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wc_family_free(f: *mut WcFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of sets, or 0 for NULL.
///
/// # Safety
/// `f` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn wc_family_len(f: *const WcFamily) -> usize {
    f.as_ref().map_or(0, |f| f.0.len())
}

/// Σ (q+1)^{-|A|} over the family.
///
/// # Safety
/// `f` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wc_phi_wc(f: *const WcFamily, q: usize, out: *mut f64) -> WcStatus {
    guard(|| {
        let f = handle(f, "family")?;
        *out_arg(out, "out")? = phi_wc(&f.0, q);
        Ok(())
    })
}

/// Σ (q/(q+1))^{|A|} over the family.
///
/// # Safety
/// `f` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wc_phi_cw(f: *const WcFamily, q: usize, out: *mut f64) -> WcStatus {
    guard(|| {
        let f = handle(f, "family")?;
        *out_arg(out, "out")? = phi_cw(&f.0, q);
        Ok(())
    })
}

/// Solves "Client fully claims a set of the family" (or, with `transversal`,
/// "Client's elements meet every set") exactly and returns the result JSON.
///
/// # Safety
/// `f` and `result_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wc_solve(
    f: *const WcFamily,
    transversal: bool,
    q: usize,
    convention: WcConvention,
    result_json: *mut *mut c_char,
) -> WcStatus {
    guard(|| {
        let f = handle(f, "family")?;
        let out = out_arg(result_json, "result_json")?;
        let obj = if transversal { Objective::Transversal(f.0.clone()) } else { Objective::ClaimsSome(f.0.clone()) };
        *out = to_c(solve(&obj, q, convention.into())?.to_json());
        Ok(())
    })
}

/// Runs an experiment described by a JSON config and returns the report JSON.
///
/// # Safety
/// `config_json` must be NUL-terminated and `report_json` valid.
#[no_mangle]
pub unsafe extern "C" fn wc_run_experiment(config_json: *const c_char, report_json: *mut *mut c_char) -> WcStatus {
    guard(|| {
        let cfg: ExperimentConfig =
            serde_json::from_str(str_arg(config_json, "config_json")?).map_err(|e| Error::Parse(e.to_string()))?;
        let out = out_arg(report_json, "report_json")?;
        *out = to_c(run_experiment(&cfg)?.to_json());
        Ok(())
    })
}
