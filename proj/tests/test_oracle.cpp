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

// Golden covariances in this file were frozen from an independent
// implementation of the same finite-bandwidth integration (matching scheme,
// step rule and stage times), so agreement is expected at round-off level.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsteer/analytic.hpp"
#include "qsteer/engine.hpp"
#include "qsteer/model.hpp"
#include "qsteer/oracle.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

using namespace qsteer;

namespace {

double max_abs_dev(const QuadCovariance& x, const QuadCovariance& y) {
  double dev = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      dev = std::max(dev, std::abs(x(i, j) - y(i, j)));
    }
  }
  return dev;
}

}  // namespace

TEST_CASE("make_raw_system resolves physical rates") {
  const ModelParams p = make_params(0.2, 0.05, 20.0, 0.3);
  OracleConfig cfg;
  cfg.n_m = 0.3;
  cfg.n_cav = 0.2;
  cfg.n_at = 0.1;
  const RawSystem sys = make_raw_system(p, make_noise(0.0), cfg);
  CHECK(sys.g == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sys.g_a == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sys.kappa == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(sys.tau == 0.3);
  CHECK(sys.eps == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(sys.n_m == 0.3);
  CHECK(sys.n_cav == 0.2);
  CHECK(sys.n_at == 0.1);

  // Occupations default to the model noise when left negative.
  const RawSystem def = make_raw_system(p, make_noise(1.0, 0.5), OracleConfig{});
  CHECK(def.n_m == 1.0);
  CHECK(def.n_cav == 0.5);
  CHECK(def.n_at == 0.5);

  OracleConfig bad;
  bad.steps_per_kappa = 5.0;
  CHECK_THROWS_AS(make_raw_system(p, make_noise(0.0), bad), std::invalid_argument);
  bad = OracleConfig{};
  bad.kappa_over_g = -1.0;
  CHECK_THROWS_AS(make_raw_system(p, make_noise(0.0), bad), std::invalid_argument);
  bad = OracleConfig{};
  bad.gamma_m = -0.1;
  CHECK_THROWS_AS(make_raw_system(p, make_noise(0.0), bad), std::invalid_argument);
}

TEST_CASE("temporal weight is normalized over the pulse") {
  const ModelParams p = make_params(0.2, 0.05, 20.0, 0.3);
  const RawSystem sys = make_raw_system(p, make_noise(0.0), OracleConfig{});
  CHECK(temporal_weight(sys, 0.0) == doctest::Approx(sys.norm).epsilon(1e-15));

  // Simpson integration of w(t)^2 over [0, tau].
  const int segments = 2000;
  const double h = sys.tau / segments;
  double integral = 0.0;
  for (int i = 0; i <= segments; ++i) {
    const double w = temporal_weight(sys, i * h);
    const double coeff = (i == 0 || i == segments) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    integral += coeff * w * w;
  }
  integral *= h / 3.0;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("drift and diffusion matrices carry the expected couplings") {
  const ModelParams p = make_params(0.2, 0.05, 20.0, 0.3);
  OracleConfig cfg;
  cfg.gamma_m = 0.05;
  cfg.gamma_a = 0.02;
  cfg.n_m = 0.3;
  cfg.n_cav = 0.2;
  cfg.n_at = 0.1;
  const RawSystem sys = make_raw_system(p, make_noise(0.0), cfg);
  const double t = 0.1;
  const double w = temporal_weight(sys, t);
  const Mat8 m = drift_matrix(sys, t);
  CHECK(m[0 * 8 + 0] == -sys.gamma_m);
  CHECK(m[0 * 8 + 3] == -sys.g);
  CHECK(m[1 * 8 + 2] == -sys.g);
  CHECK(m[2 * 8 + 2] == -sys.kappa);
  CHECK(m[2 * 8 + 5] == sys.g_a);
  CHECK(m[3 * 8 + 4] == -sys.g_a);
  CHECK(m[4 * 8 + 3] == sys.g_a);
  CHECK(m[5 * 8 + 2] == -sys.g_a);
  CHECK(m[6 * 8 + 2] == doctest::Approx(std::sqrt(2.0 * sys.kappa) * w).epsilon(1e-15));
  CHECK(m[7 * 8 + 3] == m[6 * 8 + 2]);
  CHECK(m[6 * 8 + 6] == 0.0);

  const Mat8 d = diffusion_matrix(sys, t);
  CHECK(d[2 * 8 + 2] == doctest::Approx(2.0 * sys.kappa * (sys.n_cav + 0.5)).epsilon(1e-15));
  CHECK(d[0 * 8 + 0] == doctest::Approx(2.0 * sys.gamma_m * (sys.n_m + 0.5)).epsilon(1e-15));
  CHECK(d[4 * 8 + 4] == doctest::Approx(2.0 * sys.gamma_a * (sys.n_at + 0.5)).epsilon(1e-15));
  CHECK(d[6 * 8 + 6] == doctest::Approx(w * w * (sys.n_cav + 0.5)).epsilon(1e-15));
  CHECK(d[2 * 8 + 6] ==
        doctest::Approx(-std::sqrt(2.0 * sys.kappa) * w * (sys.n_cav + 0.5)).epsilon(1e-15));
  CHECK(d[2 * 8 + 6] == d[6 * 8 + 2]);
}

TEST_CASE("zero pulse duration reads out the input thermal state") {
  const ModelParams p = make_params(1.0, 0.5, 100.0, 0.0);
  const QuadCovariance v = propagate(p, make_noise(1.0, 0.25), OracleConfig{});
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      CHECK(v(i, j) == 0.0);
    }
  }
  CHECK(v(0, 0) == 1.5);
  CHECK(v(1, 1) == 1.5);
  CHECK(v(2, 2) == 0.75);  // short-pulse limit: output mode carries the input
  CHECK(v(4, 4) == 0.75);
}

TEST_CASE("finite-bandwidth covariance matches golden values (no damping)") {
  const ModelParams p = make_params(0.2, 0.05, 20.0, 0.3);
  OracleConfig cfg;
  cfg.n_m = 0.3;
  cfg.n_cav = 0.2;
  cfg.n_at = 0.1;
  const QuadCovariance v = propagate(p, make_noise(0.0), cfg);

  CHECK(v(0, 0) == doctest::Approx(9.5589999354953559e-01).epsilon(1e-9));
  CHECK(v(2, 2) == doctest::Approx(8.2716103921610862e-01).epsilon(1e-9));
  CHECK(v(4, 4) == doctest::Approx(6.0348310461724830e-01).epsilon(1e-9));
  CHECK(v(0, 3) == doctest::Approx(-4.6238390088271980e-01).epsilon(1e-9));
  CHECK(v(0, 4) == doctest::Approx(-4.2458103004631410e-02).epsilon(1e-9));
  CHECK(v(3, 4) == doctest::Approx(2.5660132266625606e-02).epsilon(1e-9));

  // The X/P symmetry of the ideal model survives the finite-bandwidth
  // dynamics: mirrored slots agree and the forbidden slots stay near zero.
  CHECK(v(1, 1) == doctest::Approx(v(0, 0)).epsilon(1e-9));
  CHECK(v(3, 3) == doctest::Approx(v(2, 2)).epsilon(1e-9));
  CHECK(v(5, 5) == doctest::Approx(v(4, 4)).epsilon(1e-9));
  CHECK(v(1, 2) == doctest::Approx(v(0, 3)).epsilon(1e-9));
  CHECK(v(1, 5) == doctest::Approx(-v(0, 4)).epsilon(1e-9));
  CHECK(v(2, 5) == doctest::Approx(-v(3, 4)).epsilon(1e-9));
  const int zero_pairs[][2] = {{0, 1}, {2, 3}, {4, 5}, {0, 2}, {1, 3},
                               {0, 5}, {1, 4}, {2, 4}, {3, 5}};
  for (const auto& ij : zero_pairs) {
    CHECK(std::abs(v(ij[0], ij[1])) <= 1e-9);
  }
}

TEST_CASE("finite-bandwidth covariance matches golden values (model point)") {
  const ModelParams p = params_from_alpha_r(1.2, 1.0, 5.0);
  const NoiseConfig n = make_noise(1.0, 0.5);
  const QuadCovariance v = propagate(p, n, OracleConfig{});
  CHECK(v(0, 0) == doctest::Approx(1.2442434183380129e+01).epsilon(1e-9));
  CHECK(v(2, 2) == doctest::Approx(1.0185016508833204e+01).epsilon(1e-9));
  CHECK(v(4, 4) == doctest::Approx(2.3286420255280529e+00).epsilon(1e-9));
  CHECK(v(0, 3) == doctest::Approx(-1.1111659637211870e+01).epsilon(1e-9));
  CHECK(v(0, 4) == doctest::Approx(-4.2261309706910364e+00).epsilon(1e-9));
  CHECK(v(3, 4) == doctest::Approx(3.4933649879171145e+00).epsilon(1e-9));
}

TEST_CASE("finite-bandwidth covariance matches golden values (with damping)") {
  const ModelParams p = params_from_alpha_r(1.2, 1.0, 5.0);
  const NoiseConfig n = make_noise(1.0, 0.5);
  OracleConfig cfg;
  cfg.gamma_m = 0.05;
  cfg.gamma_a = 0.02;
  const QuadCovariance v = propagate(p, n, cfg);
  CHECK(v(0, 0) == doctest::Approx(1.1792724112275812e+01).epsilon(1e-9));
  CHECK(v(2, 2) == doctest::Approx(9.9209813019440354e+00).epsilon(1e-9));
  CHECK(v(4, 4) == doctest::Approx(2.2709188587319220e+00).epsilon(1e-9));
  CHECK(v(0, 3) == doctest::Approx(-1.0649317695150540e+01).epsilon(1e-9));
  CHECK(v(0, 4) == doctest::Approx(-4.0163075885053621e+00).epsilon(1e-9));
  CHECK(v(3, 4) == doctest::Approx(3.3669077007830013e+00).epsilon(1e-9));
}

TEST_CASE("deviation from the adiabatic closed forms shrinks with kappa/g") {
  const double frozen_r1[] = {0.180365, 0.0205964, 0.00185953};
  const double ratios[] = {10.0, 30.0, 100.0};
  const ModelParams p = params_from_alpha_r(1.2, 1.0);
  const NoiseConfig n = make_noise(0.0);
  const QuadCovariance exact = to_covariance(output_moments(p, n), n);
  double prev = 1e300;
  for (int k = 0; k < 3; ++k) {
    OracleConfig cfg;
    cfg.kappa_over_g = ratios[k];
    const double dev = max_abs_dev(propagate(p, n, cfg), exact);
    CHECK(dev == doctest::Approx(frozen_r1[k]).epsilon(1e-4));
    CHECK(dev < prev);
    prev = dev;
  }

  // A hotter, more strongly squeezed point; first two ratios only.
  const double frozen_r3[] = {2.00313, 0.224802};
  const ModelParams p2 = params_from_alpha_r(2.0, 3.0);
  const NoiseConfig n2 = make_noise(2.0);
  const QuadCovariance exact2 = to_covariance(output_moments(p2, n2), n2);
  for (int k = 0; k < 2; ++k) {
    OracleConfig cfg;
    cfg.kappa_over_g = ratios[k];
    const double dev = max_abs_dev(propagate(p2, n2, cfg), exact2);
    CHECK(dev == doctest::Approx(frozen_r3[k]).epsilon(1e-4));
  }
}

TEST_CASE("steering classification transfers at kappa/g = 100") {
  const ModelParams p = params_from_alpha_r(1.2, 2.0);
  const NoiseConfig n = make_noise(2.0);
  OracleConfig cfg;
  cfg.kappa_over_g = 100.0;
  const SteeringReport from_oracle = full_report(propagate(p, n, cfg));
  const SteeringReport analytic = analytic_report(p, n);
  CHECK(from_oracle.classification == analytic.classification);
  for (int mode = 0; mode < 3; ++mode) {
    CHECK(analytic.classification[mode] == SteeringClass::CollectiveTripartite);
  }
}

TEST_CASE("uncoupled cavity output mode reproduces its input exactly") {
  RawSystem sys;
  sys.g = 0.0;
  sys.g_a = 0.0;
  sys.kappa = 3.0;
  sys.tau = 2.0;
  sys.n_m = 0.25;
  sys.n_cav = 0.5;
  sys.n_at = 0.75;
  sys.eps = 0.0;
  sys.norm = std::sqrt(1.0 / sys.tau);  // flat weight, unit norm
  sys.steps_per_kappa = 50.0;
  const QuadCovariance v = propagate(sys);
  CHECK(v(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(v(2, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v(3, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v(4, 4) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(std::abs(v(2, 3)) <= 1e-12);
  CHECK(std::abs(v(0, 3)) <= 1e-12);
}

TEST_CASE("step-count safety cap raises a range error") {
  const ModelParams p = params_from_alpha_r(1.2, 800.0);
  CHECK_THROWS_AS(propagate(p, make_noise(0.0), OracleConfig{}), std::range_error);
}

TEST_CASE("Monte Carlo agrees with the moment integration within 5 sigma") {
  const ModelParams p = params_from_alpha_r(1.2, 1.0, 5.0);
  const NoiseConfig n = make_noise(1.0, 0.5);
  OracleConfig cfg;
  cfg.kappa_over_g = 3.0;
  cfg.steps_per_kappa = 20.0;
  const QuadCovariance ref = propagate(p, n, cfg);

  const MonteCarloResult mc = monte_carlo_check(p, n, cfg, 30000, 20260814u);
  CHECK(mc.samples == 30000);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      CHECK(mc.std_err(i, j) > 0.0);
      CHECK(std::abs(mc.cov(i, j) - ref(i, j)) <= 5.0 * mc.std_err(i, j));
    }
  }

  // Bit-identical rerun under the same seed; a different seed must differ.
  const MonteCarloResult again = monte_carlo_check(p, n, cfg, 30000, 20260814u);
  CHECK(std::memcmp(again.cov.entries.data(), mc.cov.entries.data(),
                    sizeof(double) * 36) == 0);
  const MonteCarloResult other = monte_carlo_check(p, n, cfg, 1000, 1u);
  bool identical = true;
  for (int i = 0; i < 36; ++i) {
    identical = identical && other.cov.entries[i] == mc.cov.entries[i];
  }
  CHECK_FALSE(identical);

  CHECK_THROWS_AS(monte_carlo_check(p, n, cfg, 999, 1u), std::invalid_argument);
  const ModelParams zero_tau = make_params(1.0, 0.5, 100.0, 0.0);
  CHECK_THROWS_AS(monte_carlo_check(zero_tau, n, cfg, 2000, 1u), std::invalid_argument);
}
