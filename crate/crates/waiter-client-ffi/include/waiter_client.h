#ifndef WAITER_CLIENT_H
#define WAITER_CLIENT_H

/* Generated by cbindgen from crates/waiter-client-ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WcStatus {
  WC_STATUS_OK = 0,
  WC_STATUS_NULL_POINTER = 1,
  WC_STATUS_INVALID_ARGUMENT = 2,
  WC_STATUS_RULE_VIOLATION = 3,
  WC_STATUS_CAP_EXCEEDED = 4,
  WC_STATUS_STRATEGY_FAILURE = 5,
  WC_STATUS_PARSE_ERROR = 6,
  WC_STATUS_IO = 7,
  WC_STATUS_INTERNAL = 8,
} WcStatus;

typedef enum WcConvention {
  WC_CONVENTION_WAITER_CLIENT = 0,
  WC_CONVENTION_CLIENT_WAITER = 1,
} WcConvention;

typedef enum WcOwner {
  WC_OWNER_FREE = 0,
  WC_OWNER_CLIENT = 1,
  WC_OWNER_WAITER = 2,
} WcOwner;

/*
 Client strategy handle.
 */
typedef struct WcClient WcClient;

/*
 Winning family handle.
 */
typedef struct WcFamily WcFamily;

/*
 Game state handle.
 */
typedef struct WcGame WcGame;

/*
 Waiter strategy handle.
 */
typedef struct WcWaiter WcWaiter;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. Free with
 [`wc_string_free`].
 */
char *wc_last_error_message(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void wc_string_free(char *s);

/*
 Library version as a static string.
 */
const char *wc_version(void);

/*
 Creates a fresh game on `board_size` elements.

 # Safety
 `out` must be a valid pointer.
 */
enum WcStatus wc_game_new(uintptr_t board_size,
                          uintptr_t q,
                          enum WcConvention convention,
                          struct WcGame **out);

/*
 # Safety
 `game` must come from [`wc_game_new`] and not be used afterwards.
 */
void wc_game_free(struct WcGame *game);

/*
 Number of resolved rounds, or 0 for NULL.

 # Safety
 `game` must be a valid handle or NULL.
 */
uintptr_t wc_game_round(const struct WcGame *game);

/*
 Whether the game is over; NULL counts as over.

 # Safety
 `game` must be a valid handle or NULL.
 */
bool wc_game_is_terminal(const struct WcGame *game);

/*
 # Safety
 `game` and `out` must be valid pointers.
 */
enum WcStatus wc_game_owner(const struct WcGame *game, uint32_t element, enum WcOwner *out);

/*
 Resolves one round. `pick < 0` means no pick, which is only legal when
 the offer gives Client nothing.

 # Safety
 `game` must be valid and `offer` must point to `len` elements.
 */
enum WcStatus wc_game_resolve_round(struct WcGame *game,
                                    const uint32_t *offer,
                                    uintptr_t len,
                                    int64_t pick);

/*
 Builds a Waiter strategy from a spec such as `minor(eps=0.9,t=4)` for E(K_n).

 # Safety
 `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WcStatus wc_waiter_new(const char *spec, uintptr_t n, uintptr_t q, struct WcWaiter **out);

/*
 # Safety
 `w` must come from [`wc_waiter_new`] and not be used afterwards.
 */
void wc_waiter_free(struct WcWaiter *w);

/*
 Builds a Client strategy from a spec such as `potential(cycles(6,3,6))`.

 # Safety
 `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WcStatus wc_client_new(const char *spec, uintptr_t n, struct WcClient **out);

/*
 # Safety
 `c` must come from [`wc_client_new`] and not be used afterwards.
 */
void wc_client_free(struct WcClient *c);

/*
 Plays a match on E(K_n) with clones of the given strategies and returns
 the transcript as JSON.

 # Safety
 All pointers must be valid.
 */
enum WcStatus wc_play_match(const struct WcWaiter *waiter,
                            const struct WcClient *client,
                            uintptr_t n,
                            uintptr_t q,
                            enum WcConvention convention,
                            uint64_t seed,
                            char **transcript_json);

/*
 Evaluates a predicate such as `kt_minor(4)` on the Client graph of a
 transcript produced on an edge board.

 # Safety
 Both strings must be NUL-terminated and `out` valid.
 */
enum WcStatus wc_evaluate_predicate(const char *predicate, const char *transcript_json, bool *out);

/*
 Enumerates a family such as `cycles(6,3,6)`.

 # Safety
 `spec` must be NUL-terminated and `out` valid.
 */
enum WcStatus wc_family_new(const char *spec, struct WcFamily **out);

/*
 # Safety
 `f` must come from [`wc_family_new`] and not be used afterwards.
 */
void wc_family_free(struct WcFamily *f);

/*
 Number of sets, or 0 for NULL.

 # Safety
 `f` must be a valid handle or NULL.
 */
uintptr_t wc_family_len(const struct WcFamily *f);

/*
 Σ (q+1)^{-|A|} over the family.

 # Safety
 `f` and `out` must be valid.
 */
enum WcStatus wc_phi_wc(const struct WcFamily *f, uintptr_t q, double *out);

/*
 Σ (q/(q+1))^{|A|} over the family.

 # Safety
 `f` and `out` must be valid.
 */
enum WcStatus wc_phi_cw(const struct WcFamily *f, uintptr_t q, double *out);

/*
 Solves "Client fully claims a set of the family" (or, with `transversal`,
 "Client's elements meet every set") exactly and returns the result JSON.

 # Safety
 `f` and `result_json` must be valid.
 */
enum WcStatus wc_solve(const struct WcFamily *f,
                       bool transversal,
                       uintptr_t q,
                       enum WcConvention convention,
                       char **result_json);

/*
 Runs an experiment described by a JSON config and returns the report JSON.

 # Safety
 `config_json` must be NUL-terminated and `report_json` valid.
 */
enum WcStatus wc_run_experiment(const char *config_json, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WAITER_CLIENT_H */
