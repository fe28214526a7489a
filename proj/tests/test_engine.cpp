// Copyright 2026 The qsteer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsteer/analytic.hpp"
#include "qsteer/detail/closed_form.hpp"
#include "qsteer/engine.hpp"
#include "qsteer/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace qsteer;

namespace {

QuadCovariance model_covariance(double G_a, double r, double n0, double n1) {
  const ModelParams p = make_params(1.0, G_a, 100.0, r);
  const NoiseConfig n = make_noise(n0, n1);
  return to_covariance(output_moments(p, n), n);
}

// Generic unequal-noise point: alpha^2 = 1.69, r_alpha = 0.8.
QuadCovariance generic_covariance() {
  return model_covariance(1.0 - 1.0 / 1.69, 1.352, 0.7, 0.3);
}

SteeringReport generic_analytic() {
  const ModelParams p = make_params(1.0, 1.0 - 1.0 / 1.69, 100.0, 1.352);
  return analytic_report(p, make_noise(0.7, 0.3));
}

QuadCovariance random_psd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double b[6][6];
  for (auto& row : b) {
    for (double& x : row) x = dist(rng);
  }
  QuadCovariance v;
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) {
      double s = (i == j) ? 0.5 : 0.0;
      for (int k = 0; k < 6; ++k) s += b[i][k] * b[j][k];
      v.set_sym(i, j, s);
    }
  }
  return v;
}

}  // namespace

TEST_CASE("engine reproduces the closed-form report on model states") {
  const QuadCovariance cov = generic_covariance();
  const SteeringReport engine = full_report(cov);
  const SteeringReport analytic = generic_analytic();

  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-10 * std::max(1.0, y); };
  CHECK(close(engine.E_m_a, analytic.E_m_a));
  CHECK(close(engine.E_m_c, analytic.E_m_c));
  CHECK(close(engine.E_a_m, analytic.E_a_m));
  CHECK(close(engine.E_a_c, analytic.E_a_c));
  CHECK(close(engine.E_c_a, analytic.E_c_a));
  CHECK(close(engine.E_c_m, analytic.E_c_m));
  CHECK(close(engine.E_m_ac, analytic.E_m_ac));
  CHECK(close(engine.E_a_mc, analytic.E_a_mc));
  CHECK(close(engine.E_c_am, analytic.E_c_am));
  CHECK(engine.classification == analytic.classification);
}

TEST_CASE("regression gain and optimized E at a frozen point") {
  // alpha^2 = 2, e^{r_alpha} = sqrt(2), vacuum inputs.
  const QuadCovariance cov = model_covariance(0.5, 0.6931471805599453, 0.0, 0.0);

  const double u = optimal_gain_single(cov, Mode::a, Quad::X,
                                       PairingTerm{Mode::m, Quad::P, +1});
  CHECK(u == doctest::Approx(0.909480788019831375553109700163).epsilon(1e-12));

  const SteeringResult res = bipartite_steering(cov, canonical_bipartite_pairing(Mode::a, Mode::m));
  CHECK(res.E == doctest::Approx(0.1482769130560899330383414932462).epsilon(1e-12));
  CHECK(res.gains_X.u.at(Mode::m) == doctest::Approx(u).epsilon(1e-12));
  CHECK_FALSE(res.used_fallback);

  // The gain is a strict local minimum of the inferred variance.
  const std::vector<PairingTerm> terms = {PairingTerm{Mode::m, Quad::P, +1}};
  GainSet at;
  at.u[Mode::m] = u;
  const double v0 = inferred_variance(cov, Mode::a, Quad::X, terms, at);
  for (double du : {-1e-4, 1e-4}) {
    GainSet g;
    g.u[Mode::m] = u + du * (1.0 + std::abs(u));
    CHECK(inferred_variance(cov, Mode::a, Quad::X, terms, g) >= v0);
  }
}

TEST_CASE("shared gains match independent gains on model states") {
  const QuadCovariance cov = generic_covariance();
  for (Mode target : {Mode::m, Mode::a, Mode::c}) {
    for (Mode steerer : {Mode::m, Mode::a, Mode::c}) {
      if (steerer == target) continue;
      PairingSpec spec = canonical_bipartite_pairing(target, steerer);
      const double indep = bipartite_steering(cov, spec).E;
      spec.shared_gains = true;
      const double shared = bipartite_steering(cov, spec).E;
      CHECK(std::abs(indep - shared) <= 1e-10 * std::max(1.0, indep));
    }
    PairingSpec tri = canonical_tripartite_pairing(target);
    const double indep = tripartite_steering(cov, tri).E;
    tri.shared_gains = true;
    const double shared = tripartite_steering(cov, tri).E;
    CHECK(std::abs(indep - shared) <= 1e-10 * std::max(1.0, indep));
  }
}

TEST_CASE("collective E never exceeds the individual-steerer E") {
  for (const QuadCovariance& cov :
       {generic_covariance(), model_covariance(0.75, 5.2, 2.0, 2.0),
        model_covariance(0.5, 0.2, 1.0, 0.0)}) {
    const SteeringReport rep = full_report(cov);
    CHECK(rep.E_m_ac <= std::min(rep.E_m_a, rep.E_m_c) + 1e-12);
    CHECK(rep.E_a_mc <= std::min(rep.E_a_m, rep.E_a_c) + 1e-12);
    CHECK(rep.E_c_am <= std::min(rep.E_c_a, rep.E_c_m) + 1e-12);
  }
}

TEST_CASE("pairing search recovers the canonical pairings on model states") {
  const QuadCovariance cov = generic_covariance();
  for (Mode target : {Mode::m, Mode::a, Mode::c}) {
    std::vector<Mode> others;
    for (Mode s : {Mode::m, Mode::a, Mode::c}) {
      if (s != target) others.push_back(s);
    }
    for (Mode steerer : others) {
      const double canonical = bipartite_steering(cov, canonical_bipartite_pairing(target, steerer)).E;
      const SteeringResult best = pairing_search(cov, target, {steerer});
      CHECK(best.E <= canonical + 1e-12);
      CHECK(best.E >= canonical * (1.0 - 1e-9));
      CHECK(best.pairing.target == target);
      CHECK(best.pairing.factor_X.size() == 1);
    }
    const double canonical = tripartite_steering(cov, canonical_tripartite_pairing(target)).E;
    const SteeringResult best = pairing_search(cov, target, others);
    CHECK(best.E <= canonical + 1e-12);
    CHECK(best.E >= canonical * (1.0 - 1e-9));
    CHECK(best.pairing.factor_X.size() == 2);
  }
}

TEST_CASE("pairing validation rejects malformed specs") {
  const QuadCovariance cov = generic_covariance();
  PairingSpec bad;
  bad.target = Mode::m;
  bad.factor_X = {PairingTerm{Mode::m, Quad::P, +1}};  // steerer equals target
  bad.factor_P = {PairingTerm{Mode::a, Quad::X, +1}};
  CHECK_THROWS_AS(bipartite_steering(cov, bad), std::invalid_argument);

  bad.factor_X = {PairingTerm{Mode::a, Quad::P, 0}};  // invalid sign
  CHECK_THROWS_AS(bipartite_steering(cov, bad), std::invalid_argument);

  PairingSpec tri;
  tri.target = Mode::m;
  tri.factor_X = {PairingTerm{Mode::a, Quad::P, +1}, PairingTerm{Mode::a, Quad::X, +1}};
  tri.factor_P = {PairingTerm{Mode::a, Quad::X, +1}, PairingTerm{Mode::c, Quad::P, -1}};
  CHECK_THROWS_AS(tripartite_steering(cov, tri), std::invalid_argument);  // repeated steerer

  CHECK_THROWS_AS(pairing_search(cov, Mode::m, {}), std::invalid_argument);
  CHECK_THROWS_AS(pairing_search(cov, Mode::m, {Mode::m}), std::invalid_argument);
}

TEST_CASE("zero-variance steerer quadrature is rejected") {
  QuadCovariance cov;
  for (int i = 0; i < 6; ++i) cov(i, i) = 1.0;
  cov(1, 1) = 0.0;  // mirror P
  CHECK_THROWS_AS(optimal_gain_single(cov, Mode::a, Quad::X, PairingTerm{Mode::m, Quad::P, +1}),
                  std::invalid_argument);
}

TEST_CASE("singular steerer Gram falls back to the dominant steerer") {
  QuadCovariance cov;
  for (int i = 0; i < 6; ++i) cov(i, i) = 1.0;
  // Canonical X factor for target m reads a_P and c_X; make them identical.
  cov.set_sym(3, 4, 1.0);
  cov.set_sym(0, 3, 0.3);
  cov.set_sym(0, 4, 0.3);
  const SteeringResult res = tripartite_steering(cov, canonical_tripartite_pairing(Mode::m));
  CHECK(res.used_fallback);
  CHECK(std::isfinite(res.E));
  CHECK(res.E >= 0.0);
  CHECK(res.E <= std::sqrt(cov(0, 0) * cov(1, 1)) + 1e-12);  // no worse than zero gains
}

TEST_CASE("optimized gains are unimprovable on random covariances") {
  std::mt19937_64 rng(20260814u);
  for (int sample = 0; sample < 50; ++sample) {
    const QuadCovariance cov = random_psd(rng);
    for (Mode target : {Mode::m, Mode::a, Mode::c}) {
      const PairingSpec tri = canonical_tripartite_pairing(target);
      const SteeringResultT<double> res = tripartite_steering(cov, tri);
      CHECK_FALSE(res.used_fallback);

      for (const auto& [factor, quad, gains] :
           {std::tuple{tri.factor_X, Quad::X, res.gains_X},
            std::tuple{tri.factor_P, Quad::P, res.gains_P}}) {
        const double v0 = inferred_variance(cov, target, quad, factor, gains);
        for (const auto& term : factor) {
          for (double dir : {-1.0, 1.0}) {
            GainSet g = gains;
            double& u = g.u[term.steerer];
            u += dir * 1e-4 * (1.0 + std::abs(u));
            const double v = inferred_variance(cov, target, quad, factor, g);
            CHECK(v >= v0 - 1e-12 * (1.0 + std::abs(v0)));
          }
        }
      }

      // Collective inference cannot be worse than either single steerer.
      const SteeringReport rep = full_report(cov);
      const double tri_e = rep.tripartite(target);
      for (Mode s : {Mode::m, Mode::a, Mode::c}) {
        if (s == target) continue;
        CHECK(tri_e <= rep.bipartite(target, s) + 1e-12);
      }
    }
  }
}

#ifdef QSTEER_HAVE_FLOAT128
TEST_CASE("quad-precision engine matches quad-precision closed forms") {
  using Q = __float128;
  const Q alpha2 = Q(1.69);
  const Q ralpha = Q(0.8);
  const Q n0 = Q(0.7);
  const Q n1 = Q(0.3);
  const auto cov = detail::moment_covariance<Q>(detail::moment_set<Q>(alpha2, ralpha, n0, n1));
  const auto st = detail::squeeze_terms<Q>(alpha2, ralpha);

  for (Mode target : {Mode::m, Mode::a, Mode::c}) {
    const Q engine = tripartite_steering<Q>(cov, canonical_tripartite_pairing(target)).E;
    const Q closed = detail::closed_form_tripartite<Q>(st, n0, n1, target);
    const double rel = static_cast<double>((engine - closed) / closed);
    CHECK(std::abs(rel) <= 1e-20);
    for (Mode s : {Mode::m, Mode::a, Mode::c}) {
      if (s == target) continue;
      const Q eb = bipartite_steering<Q>(cov, canonical_bipartite_pairing(target, s)).E;
      const Q cb = detail::closed_form_bipartite<Q>(st, n0, n1, target, s);
      CHECK(std::abs(static_cast<double>((eb - cb) / cb)) <= 1e-20);
    }
  }
}
#endif
