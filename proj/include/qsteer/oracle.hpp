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
#include <cstdint>

#include "qsteer/model.hpp"

namespace qsteer {

// Independent validation of the adiabatic model: integrates the exact second
// moments of the full linearized dynamics at finite cavity bandwidth.  The
// extended state is 8-dimensional, ordered
//   (X_m, P_m, X_cav, P_cav, X_at, P_at, X_acc, P_acc),
// where (X_acc, P_acc) accumulate the normalized output temporal mode of the
// cavity; at t = tau the rows (m, acc, at) are read out as the (m, a, c)
// output covariance in core ordering.

struct OracleConfig {
  double kappa_over_g = 0.0;  // > 0 overrides the ratio implied by p.kappa
  double gamma_m = 0.0;       // mechanical damping (model assumes 0)
  double gamma_a = 0.0;       // atomic damping (model assumes 0)
  double n_m = -1.0;          // mirror bath occupation; < 0 means use n0
  double n_cav = -1.0;        // cavity input occupation; < 0 means use n1
  double n_at = -1.0;         // atomic bath occupation; < 0 means use n1
  double steps_per_kappa = 50.0;  // integrator resolution per 1/kappa
};

// Fully resolved physical rates; the adiabatic parameters only fix the
// combinations g^2/kappa and g_a^2/kappa, so the ratio kappa/g selects one
// representative system.
struct RawSystem {
  double g = 0.0;
  double g_a = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
  double gamma_m = 0.0;
  double gamma_a = 0.0;
  double n_m = 0.0;
  double n_cav = 0.0;
  double n_at = 0.0;
  double eps = 0.0;   // (g^2 - g_a^2)/kappa, growth rate of the temporal weight
  double norm = 0.0;  // weight prefactor; integral of weight^2 over [0, tau] is 1
  double steps_per_kappa = 0.0;
};

using Mat8 = std::array<double, 64>;  // row-major 8x8

RawSystem make_raw_system(const ModelParams& p, const NoiseConfig& n, const OracleConfig& cfg);

// w(t) = norm * e^{eps t}; the accumulator integrates w(t) times the output field.
double temporal_weight(const RawSystem& sys, double t);

Mat8 drift_matrix(const RawSystem& sys, double t);
Mat8 diffusion_matrix(const RawSystem& sys, double t);
Mat8 drift_matrix(const ModelParams& p, const OracleConfig& cfg, double t);
Mat8 diffusion_matrix(const ModelParams& p, const NoiseConfig& n, const OracleConfig& cfg,
                      double t);

// RK4 integration of dV/dt = M V + V M^T + D from the thermal input state to
// t = tau; returns the symmetrized 6x6 output readout.  Throws
// std::range_error when the required step count exceeds the safety cap or
// the moments overflow, and std::runtime_error (with a step-size hint) if
// positivity is lost mid-integration.
QuadCovariance propagate(const RawSystem& sys);
QuadCovariance propagate(const ModelParams& p, const NoiseConfig& n, const OracleConfig& cfg);

struct MonteCarloResult {
  QuadCovariance cov;      // sample second moments of the readout
  QuadCovariance std_err;  // per-entry standard error estimates
  std::int64_t samples = 0;
};

// Stochastic cross-check of propagate: samples trajectories of the linear
// Langevin dynamics (Strang splitting, shared cavity/accumulator noise) and
// reports sample moments with standard errors.  Deterministic for a given
// seed, independent of thread count.  Requires samples >= 1000 and tau > 0.
MonteCarloResult monte_carlo_check(const RawSystem& sys, std::int64_t samples,
                                   std::uint64_t seed);
MonteCarloResult monte_carlo_check(const ModelParams& p, const NoiseConfig& n,
                                   const OracleConfig& cfg, std::int64_t samples,
                                   std::uint64_t seed);

}  // namespace qsteer
