// Copyright 2026 The qsteer Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsteer/qsteer.h"

#include <new>
#include <stdexcept>
#include <string>

#include "qsteer/analytic.hpp"
#include "qsteer/engine.hpp"
#include "qsteer/model.hpp"
#include "qsteer/oracle.hpp"
#include "qsteer/regions.hpp"

struct qs_params {
  qsteer::ModelParams v;
};

struct qs_noise {
  qsteer::NoiseConfig v;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
qs_status wrap(Fn&& fn) {
  try {
    const qs_status st = fn();
    if (st == QS_OK) g_last_error.clear();
    return st;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return QS_ERR_INVALID_ARGUMENT;
  } catch (const std::range_error& e) {
    g_last_error = e.what();
    return QS_ERR_RANGE;
  } catch (const std::bad_alloc& e) {
    g_last_error = e.what();
    return QS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QS_ERR_NUMERICAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QS_ERR_INTERNAL;
  }
}

qs_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return QS_ERR_NULL_POINTER;
}

bool decode_mode(int value, qsteer::Mode& out) {
  if (value < 0 || value > 2) return false;
  out = static_cast<qsteer::Mode>(value);
  return true;
}

bool decode_class(int value, qsteer::SteeringClass& out) {
  if (value < 0 || value > 2) return false;
  out = static_cast<qsteer::SteeringClass>(value);
  return true;
}

void fill_report(const qsteer::SteeringReport& rep, double e[9], int cls[3]) {
  if (e != nullptr) {
    e[0] = rep.E_m_a;
    e[1] = rep.E_m_c;
    e[2] = rep.E_a_m;
    e[3] = rep.E_a_c;
    e[4] = rep.E_c_a;
    e[5] = rep.E_c_m;
    e[6] = rep.E_m_ac;
    e[7] = rep.E_a_mc;
    e[8] = rep.E_c_am;
  }
  if (cls != nullptr) {
    for (int i = 0; i < 3; ++i) cls[i] = static_cast<int>(rep.classification[i]);
  }
}

qsteer::OracleConfig decode_oracle_config(const qs_oracle_config& cfg) {
  qsteer::OracleConfig out;
  out.kappa_over_g = cfg.kappa_over_g;
  out.gamma_m = cfg.gamma_m;
  out.gamma_a = cfg.gamma_a;
  out.n_m = cfg.n_m;
  out.n_cav = cfg.n_cav;
  out.n_at = cfg.n_at;
  out.steps_per_kappa = cfg.steps_per_kappa;
  return out;
}

void fill_covariance(const qsteer::QuadCovariance& v, double cov[36]) {
  for (int i = 0; i < 36; ++i) cov[i] = v.entries[i];
}

}  // namespace

extern "C" {

const char* qs_version(void) { return qsteer::kVersion; }

const char* qs_last_error(void) { return g_last_error.c_str(); }

qs_status qs_params_create(double G, double G_a, double kappa, double tau, qs_params** out) {
  if (out == nullptr) return null_arg("out");
  return wrap([&] {
    *out = new qs_params{qsteer::make_params(G, G_a, kappa, tau)};
    return QS_OK;
  });
}

qs_status qs_params_from_alpha_r(double alpha, double r, double kappa_over_g, qs_params** out) {
  if (out == nullptr) return null_arg("out");
  return wrap([&] {
    *out = new qs_params{qsteer::params_from_alpha_r(alpha, r, kappa_over_g)};
    return QS_OK;
  });
}

void qs_params_destroy(qs_params* p) { delete p; }

qs_status qs_params_get(const qs_params* p, double* G, double* G_a, double* kappa, double* tau,
                        double* alpha, double* beta, double* r, double* r_alpha) {
  if (p == nullptr) return null_arg("params");
  return wrap([&] {
    if (G != nullptr) *G = p->v.G;
    if (G_a != nullptr) *G_a = p->v.G_a;
    if (kappa != nullptr) *kappa = p->v.kappa;
    if (tau != nullptr) *tau = p->v.tau;
    if (alpha != nullptr) *alpha = p->v.alpha;
    if (beta != nullptr) *beta = p->v.beta;
    if (r != nullptr) *r = p->v.r;
    if (r_alpha != nullptr) *r_alpha = p->v.r_alpha;
    return QS_OK;
  });
}

qs_status qs_noise_create(double n0, double n1, qs_noise** out) {
  if (out == nullptr) return null_arg("out");
  return wrap([&] {
    *out = new qs_noise{qsteer::make_noise(n0, n1)};
    return QS_OK;
  });
}

void qs_noise_destroy(qs_noise* n) { delete n; }

qs_status qs_report(const qs_params* p, const qs_noise* n, double e[9], int cls[3]) {
  if (p == nullptr) return null_arg("params");
  if (n == nullptr) return null_arg("noise");
  return wrap([&] {
    fill_report(qsteer::analytic_report(p->v, n->v), e, cls);
    return QS_OK;
  });
}

qs_status qs_output_moments(const qs_params* p, const qs_noise* n, double m[6]) {
  if (p == nullptr) return null_arg("params");
  if (n == nullptr) return null_arg("noise");
  if (m == nullptr) return null_arg("m");
  return wrap([&] {
    const qsteer::OutputMoments om = qsteer::output_moments(p->v, n->v);
    m[0] = om.var_X_a;
    m[1] = om.var_X_c;
    m[2] = om.var_X_m;
    m[3] = om.c_XmPa;
    m[4] = om.c_XmXc;
    m[5] = om.c_PaXc;
    return QS_OK;
  });
}

qs_status qs_output_covariance(const qs_params* p, const qs_noise* n, double cov[36]) {
  if (p == nullptr) return null_arg("params");
  if (n == nullptr) return null_arg("noise");
  if (cov == nullptr) return null_arg("cov");
  return wrap([&] {
    fill_covariance(qsteer::to_covariance(qsteer::output_moments(p->v, n->v), n->v), cov);
    return QS_OK;
  });
}

qs_status qs_report_from_covariance(const double cov[36], double e[9], int cls[3]) {
  if (cov == nullptr) return null_arg("cov");
  return wrap([&] {
    qsteer::QuadCovariance v;
    for (int i = 0; i < 36; ++i) v.entries[i] = cov[i];
    fill_report(qsteer::full_report(v), e, cls);
    return QS_OK;
  });
}

qs_status qs_tripartite_threshold(const qs_params* p, int target_mode, double* n_th) {
  if (p == nullptr) return null_arg("params");
  if (n_th == nullptr) return null_arg("n_th");
  return wrap([&] {
    qsteer::Mode target;
    if (!decode_mode(target_mode, target)) {
      throw std::invalid_argument("qs_tripartite_threshold: mode must be 0, 1, or 2");
    }
    *n_th = qsteer::tripartite_threshold_n(p->v, target);
    return QS_OK;
  });
}

qs_status qs_bipartite_threshold(const qs_params* p, int target_mode, int steerer_mode,
                                 int* has_threshold, double* n_th, double* unclamped,
                                 int* clamped) {
  if (p == nullptr) return null_arg("params");
  if (has_threshold == nullptr) return null_arg("has_threshold");
  if (n_th == nullptr) return null_arg("n_th");
  return wrap([&] {
    qsteer::Mode target, steerer;
    if (!decode_mode(target_mode, target) || !decode_mode(steerer_mode, steerer)) {
      throw std::invalid_argument("qs_bipartite_threshold: modes must be 0, 1, or 2");
    }
    const auto th = qsteer::bipartite_threshold_n(p->v, target, steerer);
    if (!th.has_value()) {
      *has_threshold = 0;
      return QS_OK;
    }
    *has_threshold = 1;
    *n_th = th->n_th;
    if (unclamped != nullptr) *unclamped = th->unclamped;
    if (clamped != nullptr) *clamped = th->clamped ? 1 : 0;
    return QS_OK;
  });
}

qs_status qs_steering_onset_r_alpha(double alpha, double n, double* r_alpha) {
  if (r_alpha == nullptr) return null_arg("r_alpha");
  return wrap([&] {
    *r_alpha = qsteer::steering_onset_r_alpha(alpha, n);
    return QS_OK;
  });
}

qs_status qs_find_regions(double alpha, const qs_noise* n, int mode, int cls, double r_lo,
                          double r_hi, int grid_points, double r_tol, qs_region_interval* out,
                          size_t capacity, size_t* count) {
  if (n == nullptr) return null_arg("noise");
  if (count == nullptr) return null_arg("count");
  if (out == nullptr && capacity > 0) return null_arg("out");
  return wrap([&] {
    qsteer::RegionQuery query;
    if (!decode_mode(mode, query.mode)) {
      throw std::invalid_argument("qs_find_regions: mode must be 0, 1, or 2");
    }
    if (!decode_class(cls, query.cls)) {
      throw std::invalid_argument("qs_find_regions: class must be 0, 1, or 2");
    }
    query.r_lo = r_lo;
    query.r_hi = r_hi;
    query.grid_points = grid_points;
    query.r_tol = r_tol;
    const qsteer::RegionResult res = qsteer::find_regions(alpha, n->v, query);
    *count = res.intervals.size();
    for (size_t i = 0; i < res.intervals.size() && i < capacity; ++i) {
      const auto& iv = res.intervals[i];
      out[i] = {iv.r_lo,          iv.r_hi,
                iv.residual_lo,   iv.residual_hi,
                iv.lo_is_crossing ? 1 : 0, iv.hi_is_crossing ? 1 : 0};
    }
    if (res.intervals.size() > capacity) {
      g_last_error = "qs_find_regions: result truncated to capacity";
      return QS_ERR_RANGE;
    }
    return QS_OK;
  });
}

void qs_oracle_config_init(qs_oracle_config* cfg) {
  if (cfg == nullptr) return;
  const qsteer::OracleConfig d;
  cfg->kappa_over_g = d.kappa_over_g;
  cfg->gamma_m = d.gamma_m;
  cfg->gamma_a = d.gamma_a;
  cfg->n_m = d.n_m;
  cfg->n_cav = d.n_cav;
  cfg->n_at = d.n_at;
  cfg->steps_per_kappa = d.steps_per_kappa;
}

qs_status qs_oracle_covariance(const qs_params* p, const qs_noise* n,
                               const qs_oracle_config* cfg, double cov[36]) {
  if (p == nullptr) return null_arg("params");
  if (n == nullptr) return null_arg("noise");
  if (cfg == nullptr) return null_arg("cfg");
  if (cov == nullptr) return null_arg("cov");
  return wrap([&] {
    fill_covariance(qsteer::propagate(p->v, n->v, decode_oracle_config(*cfg)), cov);
    return QS_OK;
  });
}

qs_status qs_oracle_monte_carlo(const qs_params* p, const qs_noise* n,
                                const qs_oracle_config* cfg, int64_t samples, uint64_t seed,
                                double cov[36], double std_err[36]) {
  if (p == nullptr) return null_arg("params");
  if (n == nullptr) return null_arg("noise");
  if (cfg == nullptr) return null_arg("cfg");
  if (cov == nullptr) return null_arg("cov");
  return wrap([&] {
    const qsteer::MonteCarloResult res =
        qsteer::monte_carlo_check(p->v, n->v, decode_oracle_config(*cfg), samples, seed);
    fill_covariance(res.cov, cov);
    if (std_err != nullptr) fill_covariance(res.std_err, std_err);
    return QS_OK;
  });
}

}  // extern "C"
