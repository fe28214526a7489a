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

#include "qsteer/model.hpp"

#include <cmath>
#include <stdexcept>

using namespace qsteer;

TEST_CASE("make_params derives the squeezing parametrization") {
  const ModelParams p = make_params(1.0, 0.5, 100.0, 3.0);
  CHECK(p.G == 1.0);
  CHECK(p.G_a == 0.5);
  CHECK(p.kappa == 100.0);
  CHECK(p.tau == 3.0);
  CHECK(p.alpha2 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.beta2 == p.alpha2 - 1.0);  // exact by construction
  CHECK(p.r == 3.0);
  CHECK(p.r_alpha == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(p.alpha == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("make_params validates its domain") {
  CHECK_THROWS_AS(make_params(1.0, 1.0, 1.0, 1.0), std::invalid_argument);  // G == G_a
  CHECK_THROWS_AS(make_params(0.5, 1.0, 1.0, 1.0), std::invalid_argument);  // G < G_a
  CHECK_THROWS_AS(make_params(1.0, -0.1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_params(1.0, 0.5, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_params(1.0, 0.5, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_params(1.0, 0.5, 1.0, -1.0), std::invalid_argument);
  CHECK_NOTHROW(make_params(1.0, 0.0, 1.0, 0.0));  // G_a = 0 and tau = 0 are valid
}

TEST_CASE("params_from_alpha_r fixes G = 1") {
  const ModelParams p = params_from_alpha_r(1.2, 2.0);
  CHECK(p.G == 1.0);
  CHECK(p.tau == 2.0);
  CHECK(p.G_a == doctest::Approx(1.0 - 1.0 / 1.44).epsilon(1e-15));
  CHECK(p.kappa == doctest::Approx(1.0e4).epsilon(1e-15));  // default kappa/g = 100
  CHECK(p.alpha2 == doctest::Approx(1.44).epsilon(1e-14));
  CHECK(p.r == 2.0);
  CHECK(p.r_alpha == doctest::Approx(2.0 / 1.44).epsilon(1e-14));

  const ModelParams q = params_from_alpha_r(1.2, 2.0, 10.0);
  CHECK(q.kappa == doctest::Approx(100.0).epsilon(1e-15));

  // alpha = 1 (no beamsplitter) is the lower edge of the domain.
  const ModelParams edge = params_from_alpha_r(1.0, 1.0);
  CHECK(edge.G_a == 0.0);
  CHECK(edge.beta2 == 0.0);

  CHECK_THROWS_AS(params_from_alpha_r(0.99, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(params_from_alpha_r(1.2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(params_from_alpha_r(1.2, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("make_noise stores occupations and the mean") {
  const NoiseConfig n = make_noise(2.0, 0.5);
  CHECK(n.n0 == 2.0);
  CHECK(n.n1 == 0.5);
  CHECK(n.nbar == doctest::Approx(1.25).epsilon(1e-15));
  const NoiseConfig eq = make_noise(3.0);
  CHECK(eq.n0 == 3.0);
  CHECK(eq.n1 == 3.0);
  CHECK_THROWS_AS(make_noise(-0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_noise(0.0, -0.1), std::invalid_argument);
}

TEST_CASE("quad_index follows the (mode, quadrature) interleaving") {
  CHECK(quad_index(Mode::m, Quad::X) == 0);
  CHECK(quad_index(Mode::m, Quad::P) == 1);
  CHECK(quad_index(Mode::a, Quad::X) == 2);
  CHECK(quad_index(Mode::a, Quad::P) == 3);
  CHECK(quad_index(Mode::c, Quad::X) == 4);
  CHECK(quad_index(Mode::c, Quad::P) == 5);
}

TEST_CASE("QuadCovariance set_sym mirrors entries") {
  QuadCovariance v;
  v.set_sym(0, 3, -2.5);
  CHECK(v(0, 3) == -2.5);
  CHECK(v(3, 0) == -2.5);
  v(4, 4) = 1.5;
  CHECK(v.at(Mode::c, Quad::X, Mode::c, Quad::X) == 1.5);
  CHECK(is_symmetric(v, 0.0));
}

TEST_CASE("vacuum_input_covariance is diagonal thermal") {
  const QuadCovariance v = vacuum_input_covariance(make_noise(1.0, 0.25));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      CHECK(v(i, j) == 0.0);
    }
  }
  CHECK(v(0, 0) == 1.5);   // mirror slot: n0 + 1/2
  CHECK(v(1, 1) == 1.5);
  CHECK(v(2, 2) == 0.75);  // cavity temporal mode: n1 + 1/2
  CHECK(v(5, 5) == 0.75);
  CHECK(is_psd(v, 1e-12));
  CHECK(min_eigenvalue(v) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("is_steering applies the boundary tolerance") {
  CHECK(is_steering(0.4));
  CHECK_FALSE(is_steering(0.5));
  CHECK_FALSE(is_steering(0.6));
  CHECK_FALSE(is_steering(0.5 - 0.5e-12));  // inside the boundary band
  CHECK(is_steering(0.5 - 1.0e-11));
}

TEST_CASE("classify_mode distinguishes the three steering classes") {
  CHECK(classify_mode(0.6, 0.6, 0.6) == SteeringClass::NotSteered);
  CHECK(classify_mode(0.6, 0.4, 0.6) == SteeringClass::NotSteered);  // tri not steered
  CHECK(classify_mode(0.4, 0.4, 0.6) == SteeringClass::OrdinaryTripartite);
  CHECK(classify_mode(0.4, 0.6, 0.4) == SteeringClass::OrdinaryTripartite);
  CHECK(classify_mode(0.4, 0.6, 0.6) == SteeringClass::CollectiveTripartite);
  // Bipartite values exactly on the boundary do not count as steering.
  CHECK(classify_mode(0.4, 0.5, 0.5) == SteeringClass::CollectiveTripartite);
}

TEST_CASE("SteeringReport accessors map onto the named fields") {
  SteeringReport rep;
  rep.E_m_a = 0.1;
  rep.E_m_c = 0.2;
  rep.E_a_m = 0.3;
  rep.E_a_c = 0.4;
  rep.E_c_a = 0.6;
  rep.E_c_m = 0.7;
  rep.E_m_ac = 0.01;
  rep.E_a_mc = 0.02;
  rep.E_c_am = 0.03;
  CHECK(rep.bipartite(Mode::m, Mode::a) == 0.1);
  CHECK(rep.bipartite(Mode::m, Mode::c) == 0.2);
  CHECK(rep.bipartite(Mode::a, Mode::m) == 0.3);
  CHECK(rep.bipartite(Mode::a, Mode::c) == 0.4);
  CHECK(rep.bipartite(Mode::c, Mode::a) == 0.6);
  CHECK(rep.bipartite(Mode::c, Mode::m) == 0.7);
  CHECK(rep.tripartite(Mode::m) == 0.01);
  CHECK(rep.tripartite(Mode::a) == 0.02);
  CHECK(rep.tripartite(Mode::c) == 0.03);
  CHECK_THROWS_AS(rep.bipartite(Mode::a, Mode::a), std::invalid_argument);
}

TEST_CASE("mode and class names") {
  CHECK(std::string(to_string(Mode::m)) == "m");
  CHECK(std::string(to_string(Mode::a)) == "a");
  CHECK(std::string(to_string(Mode::c)) == "c");
  CHECK(std::string(to_string(SteeringClass::NotSteered)) == "NotSteered");
  CHECK(std::string(to_string(SteeringClass::OrdinaryTripartite)) == "OrdinaryTripartite");
  CHECK(std::string(to_string(SteeringClass::CollectiveTripartite)) == "CollectiveTripartite");
}
