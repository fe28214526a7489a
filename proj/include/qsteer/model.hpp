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

#pragma once

#include <array>
#include <cstddef>

#include "qsteer/detail/linalg.hpp"

namespace qsteer {

inline constexpr const char* kVersion = "1.0.0";

// Mode ordering is fixed as (m, a, c) = (mirror, cavity output, atoms) with
// (X, P) interleaved; every module uses this ordering.
enum class Mode : int { m = 0, a = 1, c = 2 };
enum class Quad : int { X = 0, P = 1 };
enum class SteeringClass : int {
  NotSteered = 0,
  OrdinaryTripartite = 1,
  CollectiveTripartite = 2,
};

constexpr std::size_t quad_index(Mode mode, Quad quad) {
  return 2 * static_cast<std::size_t>(mode) + static_cast<std::size_t>(quad);
}

const char* to_string(Mode mode);
const char* to_string(Quad quad);
const char* to_string(SteeringClass cls);

// E values within kBoundaryTol of 1/2 sit on the threshold and do not count
// as steering; the thresholds themselves are defined by equality with 1/2.
inline constexpr double kBoundaryTol = 1e-12;

template <class S>
bool is_steering(S e) {
  return e < S(0.5) - S(kBoundaryTol);
}

// Couplings and the derived squeezing parameters.  beta2 is stored as
// alpha2 - 1, so alpha2 - beta2 == 1 holds exactly; several closed-form
// identities (q - w == alpha2 * e2) rely on that.
struct ModelParams {
  double G = 0.0;        // parametric rate g^2 / kappa
  double G_a = 0.0;      // beamsplitter rate g_a^2 / kappa
  double kappa = 0.0;    // cavity decay rate (used only by the oracle)
  double tau = 0.0;      // pulse duration
  double alpha = 1.0;    // sqrt(G / (G - G_a))
  double beta = 0.0;     // sqrt(G_a / (G - G_a))
  double r = 0.0;        // G * tau
  double r_alpha = 0.0;  // r / alpha^2 = (G - G_a) * tau
  double alpha2 = 1.0;
  double beta2 = 0.0;
};

ModelParams make_params(double G, double G_a, double kappa, double tau);

// Convenience parametrization with G = 1, tau = r, G_a = 1 - 1/alpha^2 and
// kappa chosen from the kappa/g ratio.  Requires alpha >= 1.
ModelParams params_from_alpha_r(double alpha, double r, double kappa_over_g = 100.0);

// Thermal occupations of the inputs: n0 feeds the mirror, n1 feeds both the
// cavity and atomic inputs.
struct NoiseConfig {
  double n0 = 0.0;
  double n1 = 0.0;
  double nbar = 0.0;  // (n0 + n1) / 2
};

NoiseConfig make_noise(double n0, double n1);
inline NoiseConfig make_noise(double n) { return make_noise(n, n); }

// 6x6 symmetrized second moments <A,B> = <AB + BA>/2 - <A><B> over the
// quadrature vector (X_m, P_m, X_a, P_a, X_c, P_c); vacuum variance is 1/2.
template <class S>
struct QuadCovarianceT {
  static constexpr std::size_t dim = 6;
  std::array<S, dim * dim> entries{};

  S& operator()(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
  S at(Mode mi, Quad qi, Mode mj, Quad qj) const {
    return entries[quad_index(mi, qi) * dim + quad_index(mj, qj)];
  }
  void set_sym(std::size_t i, std::size_t j, S v) {
    entries[i * dim + j] = v;
    entries[j * dim + i] = v;
  }
};
using QuadCovariance = QuadCovarianceT<double>;

template <class S>
bool is_symmetric(const QuadCovarianceT<S>& v, S tol) {
  for (std::size_t i = 0; i < v.dim; ++i)
    for (std::size_t j = i + 1; j < v.dim; ++j)
      if (detail::sm_abs(v(i, j) - v(j, i)) > tol) return false;
  return true;
}

template <class S>
S min_eigenvalue(const QuadCovarianceT<S>& v) {
  return detail::sym_min_eigenvalue<S, QuadCovarianceT<S>::dim>(v.entries);
}

template <class S>
bool is_psd(const QuadCovarianceT<S>& v, S tol) {
  S scale = S(1);
  for (std::size_t i = 0; i < v.dim; ++i) scale = detail::sm_max(scale, detail::sm_abs(v(i, i)));
  return min_eigenvalue(v) >= -tol * scale;
}

// Thermal input covariance: diag(n0+1/2, n0+1/2, n1+1/2, ..., n1+1/2).
QuadCovariance vacuum_input_covariance(const NoiseConfig& n);

// All six bipartite and three tripartite steering parameters plus the
// per-mode classification.
struct SteeringReport {
  double E_m_a = 0.5, E_m_c = 0.5, E_a_m = 0.5, E_a_c = 0.5, E_c_a = 0.5, E_c_m = 0.5;
  double E_m_ac = 0.5, E_a_mc = 0.5, E_c_am = 0.5;
  std::array<SteeringClass, 3> classification{};  // indexed by Mode

  double bipartite(Mode target, Mode steerer) const;
  double tripartite(Mode target) const;
};

// CollectiveTripartite:  E_tri < 1/2 and both bipartite >= 1/2.
// OrdinaryTripartite:    E_tri < 1/2 and at least one bipartite < 1/2.
SteeringClass classify_mode(double e_tri, double e_bip1, double e_bip2);

}  // namespace qsteer
