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
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsteer/detail/linalg.hpp"
#include "qsteer/detail/scalar_math.hpp"
#include "qsteer/model.hpp"

namespace qsteer {

// One additive term u * sign * O in an inference combination, where O is the
// given quadrature of a steerer mode and u is the (signed) gain.
struct PairingTerm {
  Mode steerer = Mode::a;
  Quad quad = Quad::X;
  int sign = 1;  // +1 or -1; kept separate from u so shared gains stay meaningful
};

// Which quadratures the steerers contribute to the two inference factors of
// the target.  shared_gains = true constrains each steerer to one gain used
// in both factors; false optimizes the factors independently.
struct PairingSpec {
  Mode target = Mode::m;
  std::vector<PairingTerm> factor_X;  // terms added to X_target
  std::vector<PairingTerm> factor_P;  // terms added to P_target
  bool shared_gains = false;
};

template <class S>
struct GainSetT {
  std::map<Mode, S> u;  // empty set means all gains 0
};
using GainSet = GainSetT<double>;

template <class S>
struct SteeringResultT {
  S E{};  // product of the two minimized inferred standard deviations
  GainSetT<S> gains_X;
  GainSetT<S> gains_P;
  PairingSpec pairing;
  bool used_fallback = false;  // singular-Gram single-steerer fallback was taken
};
using SteeringResult = SteeringResultT<double>;

namespace detail {

inline void validate_terms(Mode target, const std::vector<PairingTerm>& terms,
                           std::size_t want) {
  if (terms.size() != want) {
    throw std::invalid_argument("pairing factor has the wrong number of terms");
  }
  for (const auto& t : terms) {
    if (t.steerer == target) {
      throw std::invalid_argument("pairing term references the target mode");
    }
    if (t.sign != 1 && t.sign != -1) {
      throw std::invalid_argument("pairing term sign must be +1 or -1");
    }
  }
  if (terms.size() == 2 && terms[0].steerer == terms[1].steerer) {
    throw std::invalid_argument("pairing factor repeats a steerer mode");
  }
}

// Var(Q_t + sum_i u_i s_i O_i) = c0 + 2 sum_i b_i u_i + sum_ij g_ij u_i u_j,
// with the term signs folded into b and g.
template <class S>
struct FactorQuadratic {
  S c0{};
  std::array<S, 2> b{};
  std::array<S, 4> g{};  // row-major; only [0] used when k == 1
  std::size_t k = 0;
};

template <class S>
FactorQuadratic<S> factor_quadratic(const QuadCovarianceT<S>& cov, Mode target, Quad tq,
                                    const std::vector<PairingTerm>& terms) {
  FactorQuadratic<S> f;
  f.k = terms.size();
  const int ti = quad_index(target, tq);
  f.c0 = cov(ti, ti);
  for (std::size_t i = 0; i < f.k; ++i) {
    const int oi = quad_index(terms[i].steerer, terms[i].quad);
    f.b[i] = S(terms[i].sign) * cov(ti, oi);
    for (std::size_t j = 0; j < f.k; ++j) {
      const int oj = quad_index(terms[j].steerer, terms[j].quad);
      f.g[i * 2 + j] = S(terms[i].sign) * S(terms[j].sign) * cov(oi, oj);
    }
  }
  return f;
}

template <class S>
S eval_factor(const FactorQuadratic<S>& f, S u0, S u1 = S(0)) {
  S v = f.c0 + S(2) * f.b[0] * u0 + f.g[0] * u0 * u0;
  if (f.k == 2) {
    v += S(2) * f.b[1] * u1 + S(2) * f.g[1] * u0 * u1 + f.g[3] * u1 * u1;
  }
  return v;
}

template <class S>
void require_positive_diagonal(const FactorQuadratic<S>& f, const char* who) {
  for (std::size_t i = 0; i < f.k; ++i) {
    if (!(f.g[i * 2 + i] > S(0))) {
      throw std::invalid_argument(std::string(who) + ": steerer quadrature has zero variance");
    }
  }
}

template <class S>
struct PairGainsT {
  S u0{};
  S u1{};
  bool used_fallback = false;
};

// Normal-equation solve for two gains; on a singular or ill-conditioned Gram
// (condition number > 1e12 via the closed-form 2x2 eigenvalues) falls back to
// single-gain regression on the steerer with the larger variance reduction.
template <class S>
PairGainsT<S> minimize_quadratic_pair(const FactorQuadratic<S>& f) {
  const S g00 = f.g[0], g01 = f.g[1], g11 = f.g[3];
  const S mean = (g00 + g11) / S(2);
  const S half_diff = (g00 - g11) / S(2);
  const S spread = detail::sm_sqrt(half_diff * half_diff + g01 * g01);
  const S lmin = mean - spread;
  const S lmax = mean + spread;
  PairGainsT<S> g;
  if (lmin > S(0) && lmax <= S(1e12) * lmin) {
    const S det = g00 * g11 - g01 * g01;
    g.u0 = -(g11 * f.b[0] - g01 * f.b[1]) / det;
    g.u1 = -(g00 * f.b[1] - g01 * f.b[0]) / det;
    return g;
  }
  g.used_fallback = true;
  const S red0 = g00 > S(0) ? f.b[0] * f.b[0] / g00 : S(-1);
  const S red1 = g11 > S(0) ? f.b[1] * f.b[1] / g11 : S(-1);
  if (red0 < S(0) && red1 < S(0)) {
    throw std::invalid_argument("optimal_gains_pair: both steerer quadratures have zero variance");
  }
  if (red0 >= red1) {
    g.u0 = -f.b[0] / g00;
  } else {
    g.u1 = -f.b[1] / g11;
  }
  return g;
}

// Minimizer of the product (A0 + 2 A1 u + A2 u^2)(B0 + 2 B1 u + B2 u^2) over
// the shared gain u: stationary points are the real roots of the cubic
// derivative; u = 0 is kept as a guard candidate.
template <class S>
S minimize_shared_product(S a0, S a1, S a2, S b0, S b1, S b2) {
  const S c3 = S(2) * a2 * b2;
  const S c2 = S(3) * (a1 * b2 + a2 * b1);
  const S c1 = a2 * b0 + a0 * b2 + S(4) * a1 * b1;
  const S c0 = a1 * b0 + a0 * b1;
  std::array<S, 3> roots{};
  const int count = solve_cubic_real(c3, c2, c1, c0, roots);
  auto value = [&](S u) {
    const S va = a0 + S(2) * a1 * u + a2 * u * u;
    const S vb = b0 + S(2) * b1 * u + b2 * u * u;
    return detail::sm_max(va, S(0)) * detail::sm_max(vb, S(0));
  };
  S best_u = S(0);
  S best = value(best_u);
  for (int i = 0; i < count; ++i) {
    const S v = value(roots[i]);
    if (v < best) {
      best = v;
      best_u = roots[i];
    }
  }
  return best_u;
}

template <class S>
S clamped_sqrt_product(S var_x, S var_p) {
  return detail::sm_sqrt(detail::sm_max(var_x, S(0))) * detail::sm_sqrt(detail::sm_max(var_p, S(0)));
}

}  // namespace detail

// Var(Q_target + sum u_s sign_s O_s) under the given gains (missing gains are
// 0).  Returned unclamped; tiny negative values can appear at near-perfect
// inference from round-off.
template <class S>
S inferred_variance(const QuadCovarianceT<S>& cov, Mode target, Quad target_quad,
                    const std::vector<PairingTerm>& terms, const GainSetT<S>& gains) {
  if (terms.empty() || terms.size() > 2) {
    throw std::invalid_argument("inferred_variance: need 1 or 2 terms");
  }
  detail::validate_terms(target, terms, terms.size());
  const auto f = detail::factor_quadratic(cov, target, target_quad, terms);
  std::array<S, 2> u{};
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto it = gains.u.find(terms[i].steerer);
    u[i] = it == gains.u.end() ? S(0) : it->second;
  }
  return detail::eval_factor(f, u[0], u[1]);
}

// Regression gain minimizing the single-steerer inferred variance.
template <class S>
S optimal_gain_single(const QuadCovarianceT<S>& cov, Mode target, Quad target_quad,
                      const PairingTerm& term) {
  detail::validate_terms(target, {term}, 1);
  const int ti = quad_index(target, target_quad);
  const int oi = quad_index(term.steerer, term.quad);
  const S var_o = cov(oi, oi);
  if (!(var_o > S(0))) {
    throw std::invalid_argument("optimal_gain_single: steerer quadrature has zero variance");
  }
  return -S(term.sign) * cov(ti, oi) / var_o;
}

// Two-steerer regression gains (normal equations), with the flagged
// singular-Gram fallback described above.
template <class S>
detail::PairGainsT<S> optimal_gains_pair(const QuadCovarianceT<S>& cov, Mode target,
                                         Quad target_quad,
                                         const std::vector<PairingTerm>& terms) {
  detail::validate_terms(target, terms, 2);
  return detail::minimize_quadratic_pair(detail::factor_quadratic(cov, target, target_quad, terms));
}

template <class S>
SteeringResultT<S> bipartite_steering(const QuadCovarianceT<S>& cov, const PairingSpec& pairing) {
  detail::validate_terms(pairing.target, pairing.factor_X, 1);
  detail::validate_terms(pairing.target, pairing.factor_P, 1);
  const Mode s = pairing.factor_X[0].steerer;
  if (pairing.factor_P[0].steerer != s) {
    throw std::invalid_argument("bipartite_steering: factors must use the same steerer");
  }
  const auto fx = detail::factor_quadratic(cov, pairing.target, Quad::X, pairing.factor_X);
  const auto fp = detail::factor_quadratic(cov, pairing.target, Quad::P, pairing.factor_P);
  detail::require_positive_diagonal(fx, "bipartite_steering");
  detail::require_positive_diagonal(fp, "bipartite_steering");
  SteeringResultT<S> res;
  res.pairing = pairing;
  S ux, up;
  if (pairing.shared_gains) {
    ux = up = detail::minimize_shared_product(fx.c0, fx.b[0], fx.g[0], fp.c0, fp.b[0], fp.g[0]);
  } else {
    ux = -fx.b[0] / fx.g[0];
    up = -fp.b[0] / fp.g[0];
  }
  res.gains_X.u[s] = ux;
  res.gains_P.u[s] = up;
  res.E = detail::clamped_sqrt_product(detail::eval_factor(fx, ux), detail::eval_factor(fp, up));
  return res;
}

template <class S>
SteeringResultT<S> tripartite_steering(const QuadCovarianceT<S>& cov, const PairingSpec& pairing) {
  detail::validate_terms(pairing.target, pairing.factor_X, 2);
  detail::validate_terms(pairing.target, pairing.factor_P, 2);
  // Factors must address the same steerer pair; order may differ.
  std::array<std::size_t, 2> pidx{};  // factor_P index of factor_X steerer i
  for (std::size_t i = 0; i < 2; ++i) {
    const Mode s = pairing.factor_X[i].steerer;
    if (pairing.factor_P[0].steerer == s) {
      pidx[i] = 0;
    } else if (pairing.factor_P[1].steerer == s) {
      pidx[i] = 1;
    } else {
      throw std::invalid_argument("tripartite_steering: factors must use the same steerer pair");
    }
  }
  const auto fx = detail::factor_quadratic(cov, pairing.target, Quad::X, pairing.factor_X);
  const auto fp = detail::factor_quadratic(cov, pairing.target, Quad::P, pairing.factor_P);
  detail::require_positive_diagonal(fx, "tripartite_steering");
  detail::require_positive_diagonal(fp, "tripartite_steering");
  SteeringResultT<S> res;
  res.pairing = pairing;
  std::array<S, 2> ux{}, up{};  // indexed like factor_X / factor_P respectively
  if (!pairing.shared_gains) {
    const auto gx = detail::minimize_quadratic_pair(fx);
    const auto gp = detail::minimize_quadratic_pair(fp);
    res.used_fallback = gx.used_fallback || gp.used_fallback;
    ux = {gx.u0, gx.u1};
    up = {gp.u0, gp.u1};
  } else {
    // Coordinate descent on the variance product, one shared gain per
    // steerer, seeded by the independent X-factor solution.
    const auto seed = detail::minimize_quadratic_pair(fx);
    res.used_fallback = seed.used_fallback;
    std::array<S, 2> v = {seed.u0, seed.u1};  // indexed like factor_X
    for (int iter = 0; iter < 100; ++iter) {
      S step = S(0);
      for (std::size_t c = 0; c < 2; ++c) {
        const std::size_t o = 1 - c;
        const std::size_t cp = pidx[c], op = pidx[o];
        const S a0 = fx.c0 + S(2) * fx.b[o] * v[o] + fx.g[o * 2 + o] * v[o] * v[o];
        const S a1 = fx.b[c] + fx.g[c * 2 + o] * v[o];
        const S a2 = fx.g[c * 2 + c];
        const S b0 = fp.c0 + S(2) * fp.b[op] * v[o] + fp.g[op * 2 + op] * v[o] * v[o];
        const S b1 = fp.b[cp] + fp.g[cp * 2 + op] * v[o];
        const S b2 = fp.g[cp * 2 + cp];
        const S next = detail::minimize_shared_product(a0, a1, a2, b0, b1, b2);
        step = detail::sm_max(step, detail::sm_abs(next - v[c]));
        v[c] = next;
      }
      if (step <= S(1e-14) * (S(1) + detail::sm_max(detail::sm_abs(v[0]), detail::sm_abs(v[1])))) break;
    }
    ux = v;
    up[pidx[0]] = v[0];
    up[pidx[1]] = v[1];
  }
  for (std::size_t i = 0; i < 2; ++i) {
    res.gains_X.u[pairing.factor_X[i].steerer] = ux[i];
    res.gains_P.u[pairing.factor_P[i].steerer] = up[i];
  }
  res.E = detail::clamped_sqrt_product(detail::eval_factor(fx, ux[0], ux[1]),
                                       detail::eval_factor(fp, up[0], up[1]));
  return res;
}

// The inference combinations under which the model covariance is optimal
// (verified by pairing_search in tests).
PairingSpec canonical_bipartite_pairing(Mode target, Mode steerer);
PairingSpec canonical_tripartite_pairing(Mode target);

// All six bipartite and three tripartite parameters from the canonical
// pairings with independently optimized gains, plus per-mode classification.
SteeringReport full_report(const QuadCovariance& cov);

// Exhaustive minimum over the quadrature/sign pairing choices (shared
// gains; the X-factor term sign is normalized to +1).
SteeringResult pairing_search(const QuadCovariance& cov, Mode target,
                              const std::vector<Mode>& steerers);

}  // namespace qsteer
