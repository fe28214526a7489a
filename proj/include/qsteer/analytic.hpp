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

#include <optional>

#include "qsteer/model.hpp"

namespace qsteer {

// Steady-state second moments of the three output temporal modes.  Only six
// numbers are independent; the symmetry partners are fixed by the model (see
// to_covariance).  Values grow like e^{2 r_alpha} and are reported as
// written, overflowing to inf at extreme squeezing; the steering parameters
// below stay finite through an internal rescaled branch instead.
struct OutputMoments {
  double var_X_a = 0.0;
  double var_X_c = 0.0;
  double var_X_m = 0.0;
  double c_XmPa = 0.0;
  double c_XmXc = 0.0;
  double c_PaXc = 0.0;
};

OutputMoments output_moments(const ModelParams& p, const NoiseConfig& n);

// Assembles the 6x6 covariance: dP_i^2 = dX_i^2 per mode,
// <P_m,X_a> = <X_m,P_a>, <P_m,P_c> = -<X_m,X_c>, <X_a,P_c> = -<P_a,X_c>,
// every remaining off-diagonal entry exactly 0.  Throws
// std::invalid_argument when a moment is non-finite or a variance sits below
// its thermal floor (n0+1/2 for the mirror mode, n1+1/2 for the others).
QuadCovariance to_covariance(const OutputMoments& m, const NoiseConfig& n);

// Steering parameters E_{i|j(k)} from the closed forms; valid for n0 != n1.
double tripartite_E(const ModelParams& p, const NoiseConfig& n, Mode target);
double bipartite_E(const ModelParams& p, const NoiseConfig& n, Mode target, Mode steerer);

// Critical equal occupation: for n0 = n1 = n, E_{target|jk} < 1/2 iff
// n < n_th.  Grows like e^{2 r_alpha} (inf once that overflows).
double tripartite_threshold_n(const ModelParams& p, Mode target);

struct BipartiteThreshold {
  double n_th = 0.0;       // reported threshold, clamped at 0
  double unclamped = 0.0;  // raw root of E = 1/2; may be negative
  bool clamped = false;    // true when the raw root was negative
};

// Equal-occupation threshold for E_{target|steerer} = 1/2.  Saturates at a
// finite limit as r_alpha grows.  The pairs (a,c) and (c,a) never steer
// (E >= 1/2 for every n), so no threshold exists and nullopt is returned.
std::optional<BipartiteThreshold> bipartite_threshold_n(const ModelParams& p, Mode target,
                                                        Mode steerer);

// Squeezing at which collective steering of the mirror sets in for equal
// occupation n: r_alpha = log(1 + (sqrt(n+1) - 1)/alpha^2).
double steering_onset_r_alpha(double alpha, double n);

enum class AsymptoticRegime {
  large_r = 0,      // r_alpha >> 1 at fixed alpha
  large_alpha = 1,  // alpha^2 >> r at fixed r
};

// Leading-order tripartite E in the stated regime; requires n0 == n1.
double asymptotic_E(const ModelParams& p, const NoiseConfig& n, Mode target,
                    AsymptoticRegime regime);

// E_{c|am} / E_{m|ac} for equal occupations; independent of n, >= 1, and
// equal to 1 only at r_alpha = 0.
double ratio_Ecam_over_Emac(const ModelParams& p);

// n0-independent limits of E_{a|m} and E_{c|m} as n0 -> inf; target must be
// a or c (the steerer is the mirror mode).
double large_n0_bipartite_limits(const ModelParams& p, double n1, Mode target);

// All nine steering parameters plus the per-mode classification, evaluated
// from the closed forms.
SteeringReport analytic_report(const ModelParams& p, const NoiseConfig& n);

}  // namespace qsteer
