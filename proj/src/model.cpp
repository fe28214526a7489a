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

#include "qsteer/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsteer {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::m: return "m";
    case Mode::a: return "a";
    case Mode::c: return "c";
  }
  return "?";
}

const char* to_string(Quad quad) {
  return quad == Quad::X ? "X" : "P";
}

const char* to_string(SteeringClass cls) {
  switch (cls) {
    case SteeringClass::NotSteered: return "NotSteered";
    case SteeringClass::OrdinaryTripartite: return "OrdinaryTripartite";
    case SteeringClass::CollectiveTripartite: return "CollectiveTripartite";
  }
  return "?";
}

ModelParams make_params(double G, double G_a, double kappa, double tau) {
  if (!(std::isfinite(G) && std::isfinite(G_a) && std::isfinite(kappa) && std::isfinite(tau)))
    throw std::invalid_argument("make_params: requires finite G, G_a, kappa, tau");
  if (!(G_a >= 0.0)) throw std::invalid_argument("make_params: requires G_a >= 0");
  if (!(G > G_a))
    throw std::invalid_argument("make_params: requires G > G_a (temporal-mode normalization undefined otherwise)");
  if (!(kappa > 0.0)) throw std::invalid_argument("make_params: requires kappa > 0");
  if (!(tau >= 0.0)) throw std::invalid_argument("make_params: requires tau >= 0");

  ModelParams p;
  p.G = G;
  p.G_a = G_a;
  p.kappa = kappa;
  p.tau = tau;
  const double denom = G - G_a;
  p.alpha2 = G / denom;
  p.beta2 = p.alpha2 - 1.0;  // exact companion of alpha2
  p.alpha = std::sqrt(p.alpha2);
  p.beta = std::sqrt(p.beta2);
  p.r = G * tau;
  p.r_alpha = p.r / p.alpha2;
  return p;
}

ModelParams params_from_alpha_r(double alpha, double r, double kappa_over_g) {
  if (!(std::isfinite(alpha) && alpha >= 1.0))
    throw std::invalid_argument("params_from_alpha_r: requires alpha >= 1");
  if (!(std::isfinite(r) && r >= 0.0)) throw std::invalid_argument("params_from_alpha_r: requires r >= 0");
  if (!(std::isfinite(kappa_over_g) && kappa_over_g > 0.0))
    throw std::invalid_argument("params_from_alpha_r: requires kappa_over_g > 0");
  const double alpha2 = alpha * alpha;
  const double G = 1.0;
  const double G_a = 1.0 - 1.0 / alpha2;
  return make_params(G, G_a, kappa_over_g * kappa_over_g * G, r);
}

NoiseConfig make_noise(double n0, double n1) {
  if (!(std::isfinite(n0) && n0 >= 0.0)) throw std::invalid_argument("make_noise: requires n0 >= 0");
  if (!(std::isfinite(n1) && n1 >= 0.0)) throw std::invalid_argument("make_noise: requires n1 >= 0");
  NoiseConfig n;
  n.n0 = n0;
  n.n1 = n1;
  n.nbar = 0.5 * (n0 + n1);
  return n;
}

QuadCovariance vacuum_input_covariance(const NoiseConfig& n) {
  QuadCovariance v{};
  v(0, 0) = v(1, 1) = n.n0 + 0.5;
  for (std::size_t i = 2; i < v.dim; ++i) v(i, i) = n.n1 + 0.5;
  return v;
}

double SteeringReport::bipartite(Mode target, Mode steerer) const {
  if (target == Mode::m && steerer == Mode::a) return E_m_a;
  if (target == Mode::m && steerer == Mode::c) return E_m_c;
  if (target == Mode::a && steerer == Mode::m) return E_a_m;
  if (target == Mode::a && steerer == Mode::c) return E_a_c;
  if (target == Mode::c && steerer == Mode::a) return E_c_a;
  if (target == Mode::c && steerer == Mode::m) return E_c_m;
  throw std::invalid_argument("SteeringReport::bipartite: target and steerer must differ");
}

double SteeringReport::tripartite(Mode target) const {
  switch (target) {
    case Mode::m: return E_m_ac;
    case Mode::a: return E_a_mc;
    case Mode::c: return E_c_am;
  }
  throw std::invalid_argument("SteeringReport::tripartite: unknown mode");
}

SteeringClass classify_mode(double e_tri, double e_bip1, double e_bip2) {
  if (!is_steering(e_tri)) return SteeringClass::NotSteered;
  if (is_steering(e_bip1) || is_steering(e_bip2)) return SteeringClass::OrdinaryTripartite;
  return SteeringClass::CollectiveTripartite;
}

}  // namespace qsteer
