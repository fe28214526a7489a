/* Copyright 2026 The qsteer Authors.

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

/* C interface to the qsteer library: quadrature steering parameters,
   thresholds, steering-region search, and the finite-bandwidth validation
   integrator, behind opaque handles and status codes.

   Conventions:
     - modes are encoded 0 = m (mirror), 1 = a (cavity output), 2 = c (atoms);
     - classifications are 0 = not steered, 1 = ordinary tripartite,
       2 = collective tripartite;
     - steering parameter arrays are ordered
       [m|a, m|c, a|m, a|c, c|a, c|m, m|ac, a|mc, c|am];
     - moment arrays are ordered
       [var_X_a, var_X_c, var_X_m, c_XmPa, c_XmXc, c_PaXc];
     - covariances are row-major 6x6 over (X_m, P_m, X_a, P_a, X_c, P_c).

   Every function returning qs_status sets a thread-local message retrievable
   via qs_last_error() on failure; output parameters are untouched then. */

#ifndef QSTEER_QSTEER_H_
#define QSTEER_QSTEER_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qs_status {
  QS_OK = 0,
  QS_ERR_INVALID_ARGUMENT = 1,
  QS_ERR_NUMERICAL = 2,
  QS_ERR_RANGE = 3,
  QS_ERR_NULL_POINTER = 4,
  QS_ERR_INTERNAL = 5
} qs_status;

typedef struct qs_params qs_params; /* opaque: interaction parameters */
typedef struct qs_noise qs_noise;   /* opaque: input occupations */

/* Library version string, e.g. "1.0.0". */
const char* qs_version(void);

/* Thread-local message describing the most recent failure in this thread;
   empty string after a successful call. */
const char* qs_last_error(void);

/* Parametric strength G = g^2/kappa, beamsplitter strength G_a = g_a^2/kappa,
   cavity bandwidth kappa, interaction time tau.  Requires G > G_a >= 0,
   kappa > 0, tau >= 0. */
qs_status qs_params_create(double G, double G_a, double kappa, double tau, qs_params** out);

/* Convenience constructor at G = 1: picks G_a = 1 - 1/alpha^2 and tau = r.
   Requires alpha >= 1, r >= 0, kappa_over_g > 0. */
qs_status qs_params_from_alpha_r(double alpha, double r, double kappa_over_g, qs_params** out);

void qs_params_destroy(qs_params* p);

/* Reads back stored and derived values; any output pointer may be NULL. */
qs_status qs_params_get(const qs_params* p, double* G, double* G_a, double* kappa, double* tau,
                        double* alpha, double* beta, double* r, double* r_alpha);

/* Mirror input occupation n0 and cavity/atomic occupation n1 (both >= 0). */
qs_status qs_noise_create(double n0, double n1, qs_noise** out);

void qs_noise_destroy(qs_noise* n);

/* Nine steering parameters (closed forms) and per-mode classification.
   Either output array may be NULL when not wanted. */
qs_status qs_report(const qs_params* p, const qs_noise* n, double e[9], int cls[3]);

/* Output temporal-mode second moments; these overflow to inf at extreme
   squeezing (the steering parameters above do not). */
qs_status qs_output_moments(const qs_params* p, const qs_noise* n, double m[6]);

/* The same moments assembled into the full 6x6 covariance. */
qs_status qs_output_covariance(const qs_params* p, const qs_noise* n, double cov[36]);

/* Gain-optimized steering report for an arbitrary covariance (not assuming
   the model's closed forms). */
qs_status qs_report_from_covariance(const double cov[36], double e[9], int cls[3]);

/* Equal-occupation threshold for collective steering of target_mode. */
qs_status qs_tripartite_threshold(const qs_params* p, int target_mode, double* n_th);

/* Equal-occupation threshold for bipartite steering.  *has_threshold is 0
   for the pairs (a|c) and (c|a), which never steer; then the remaining
   outputs are untouched.  *clamped is 1 when the raw root was negative and
   the reported n_th was clamped to 0.  unclamped and clamped may be NULL. */
qs_status qs_bipartite_threshold(const qs_params* p, int target_mode, int steerer_mode,
                                 int* has_threshold, double* n_th, double* unclamped,
                                 int* clamped);

/* Squeezing at which collective steering of the mirror sets in. */
qs_status qs_steering_onset_r_alpha(double alpha, double n, double* r_alpha);

typedef struct qs_region_interval {
  double r_lo;
  double r_hi;
  double residual_lo; /* min |E - 1/2| over the mode's parameters at r_lo */
  double residual_hi;
  int lo_is_crossing; /* 0 when clipped at the search range end */
  int hi_is_crossing;
} qs_region_interval;

/* Scans r in [r_lo, r_hi] on a grid of grid_points and refines each
   classification boundary by bisection to r_tol.  Writes up to capacity
   intervals and the total found into *count; returns QS_ERR_RANGE when the
   result was truncated (count still reports the total). */
qs_status qs_find_regions(double alpha, const qs_noise* n, int mode, int cls, double r_lo,
                          double r_hi, int grid_points, double r_tol, qs_region_interval* out,
                          size_t capacity, size_t* count);

typedef struct qs_oracle_config {
  double kappa_over_g;    /* > 0 overrides the ratio implied by the params */
  double gamma_m;         /* mechanical damping, default 0 */
  double gamma_a;         /* atomic damping, default 0 */
  double n_m;             /* bath occupations; < 0 means n0 / n1 / n1 */
  double n_cav;
  double n_at;
  double steps_per_kappa; /* integrator resolution, >= 10 */
} qs_oracle_config;

/* Fills the defaults documented above. */
void qs_oracle_config_init(qs_oracle_config* cfg);

/* Output covariance from the finite-bandwidth second-moment integrator. */
qs_status qs_oracle_covariance(const qs_params* p, const qs_noise* n,
                               const qs_oracle_config* cfg, double cov[36]);

/* Trajectory Monte Carlo cross-check; deterministic for a given seed.
   Requires samples >= 1000 and tau > 0.  std_err may be NULL. */
qs_status qs_oracle_monte_carlo(const qs_params* p, const qs_noise* n,
                                const qs_oracle_config* cfg, int64_t samples, uint64_t seed,
                                double cov[36], double std_err[36]);

#ifdef __cplusplus
}
#endif

#endif /* QSTEER_QSTEER_H_ */
