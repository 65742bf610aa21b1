#ifndef UPLINK_H
#define UPLINK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UplinkStatus {
  UPLINK_STATUS_OK = 0,
  UPLINK_STATUS_NULL_POINTER = 1,
  UPLINK_STATUS_INVALID_ARGUMENT = 2,
  UPLINK_STATUS_NO_BRACKET = 3,
  UPLINK_STATUS_NO_CONVERGENCE = 4,
  UPLINK_STATUS_DEGENERATE_TAPS = 5,
  UPLINK_STATUS_SUPPORT_TOO_LARGE = 6,
  UPLINK_STATUS_NUMERICAL_FAILURE = 7,
  UPLINK_STATUS_DIVISION_BY_ZERO = 8,
  UPLINK_STATUS_PANIC = 9,
} UplinkStatus;

typedef enum UplinkScheme {
  UPLINK_SCHEME_NPC = 0,
  UPLINK_SCHEME_APC = 1,
  UPLINK_SCHEME_CPC = 2,
} UplinkScheme;

/*
 Opaque virtual-gain law.
 */
typedef struct UplinkDistribution UplinkDistribution;

/*
 Opaque channel profile.
 */
typedef struct UplinkProfile UplinkProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Static, NUL-terminated description of a status code.
 */
const char *uplink_status_string(enum UplinkStatus status);

const char *uplink_version(void);

/*
 Builds a profile from `n_taps` taps `α_{-l1}..α_{l2}`. `taps_im` may be NULL
 for real taps.

 # Safety
 `taps_re` (and `taps_im` if non-NULL) must point to `n_taps` doubles.
 */
enum UplinkStatus uplink_profile_new(const double *taps_re,
                                     const double *taps_im,
                                     uintptr_t n_taps,
                                     uintptr_t l1,
                                     struct UplinkProfile **out);

/*
 Real two-tap soft-handoff profile.

 # Safety
 `out` must be a valid pointer.
 */
enum UplinkStatus uplink_profile_sho(double alpha0, double alpha1, struct UplinkProfile **out);

/*
 # Safety
 `profile` must come from `uplink_profile_*` and not be freed twice. NULL is ignored.
 */
void uplink_profile_free(struct UplinkProfile *profile);

/*
 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_psd(const struct UplinkProfile *profile, double f, double *out);

/*
 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_log_integral(const struct UplinkProfile *profile, double x, double *out);

/*
 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_resolvent_integral(const struct UplinkProfile *profile,
                                            double x,
                                            double *out);

/*
 Gain law of a power-control scheme for `users` users, non-activity `q`
 and linear cell power `power`.

 # Safety
 `out` must be a valid pointer.
 */
enum UplinkStatus uplink_distribution_scheme(enum UplinkScheme scheme,
                                             uint32_t users,
                                             double q,
                                             double power,
                                             struct UplinkDistribution **out);

/*
 Arbitrary gain law from `n` (gain², mass) pairs.

 # Safety
 `gains_sq` and `probs` must point to `n` doubles.
 */
enum UplinkStatus uplink_distribution_custom(const double *gains_sq,
                                             const double *probs,
                                             uintptr_t n,
                                             struct UplinkDistribution **out);

/*
 # Safety
 `dist` must come from `uplink_distribution_*` and not be freed twice. NULL is ignored.
 */
void uplink_distribution_free(struct UplinkDistribution *dist);

/*
 Number of atoms after merging and pruning; 0 for NULL.

 # Safety
 `dist` must be valid or NULL.
 */
uintptr_t uplink_distribution_len(const struct UplinkDistribution *dist);

/*
 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_distribution_atom(const struct UplinkDistribution *dist,
                                           uintptr_t index,
                                           double *gain_sq,
                                           double *prob);

/*
 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_distribution_mean(const struct UplinkDistribution *dist, double *out);

/*
 MCP rate with fading scale `gamma` (use 1 when the law carries the power).

 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_mcp_rate(const struct UplinkProfile *profile,
                                  const struct UplinkDistribution *dist,
                                  double gamma,
                                  double *out);

/*
 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_mcp_rate_erasure(const struct UplinkProfile *profile,
                                          double q_tilde,
                                          double gamma,
                                          double *out);

/*
 Closed-form soft-handoff MCP rate under adaptive power control.

 # Safety
 `out` must be a valid pointer.
 */
enum UplinkStatus uplink_sho_apc_rate(double alpha0,
                                      double alpha1,
                                      uint32_t users,
                                      double q,
                                      double power,
                                      double *out);

/*
 SCP rate: exact enumeration, Monte Carlo beyond the enumeration cap.

 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_scp_rate(const struct UplinkProfile *profile,
                                  const struct UplinkDistribution *dist,
                                  double *out);

/*
 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_scp_rate_mc(const struct UplinkProfile *profile,
                                     const struct UplinkDistribution *dist,
                                     uint64_t samples,
                                     uint64_t seed,
                                     double *mean,
                                     double *stderr);

/*
 Finite-size log-det Monte Carlo estimate over `trials` arrays of `cells` cells.

 # Safety
 Pointers must be valid.
 */
enum UplinkStatus uplink_oracle_estimate(const struct UplinkProfile *profile,
                                         const struct UplinkDistribution *dist,
                                         uintptr_t cells,
                                         uintptr_t trials,
                                         uint64_t seed,
                                         double *mean,
                                         double *stderr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UPLINK_H */
