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

// Region boundaries below were frozen from a high-precision bisection of the
// closed-form classification predicate; the finder must reproduce them to
// within its bisection tolerance.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsteer/analytic.hpp"
#include "qsteer/model.hpp"
#include "qsteer/regions.hpp"

#include <cmath>
#include <stdexcept>

using namespace qsteer;

namespace {

RegionResult collective(double alpha, const NoiseConfig& n, Mode mode,
                        int grid_points = 601) {
  RegionQuery q;
  q.mode = mode;
  q.cls = SteeringClass::CollectiveTripartite;
  q.grid_points = grid_points;
  return find_regions(alpha, n, q);
}

}  // namespace

TEST_CASE("equal-noise collective onsets at n = 2") {
  const NoiseConfig n = make_noise(2.0);
  const double onsets[3] = {
      0.5918812995996812,  // m
      0.6269964176151729,  // a
      1.4706047771077427,  // c
  };
  for (int mi = 0; mi < 3; ++mi) {
    const Mode mode = static_cast<Mode>(mi);
    const RegionResult res = collective(1.2, n, mode);
    CHECK(res.mode == mode);
    CHECK(res.cls == SteeringClass::CollectiveTripartite);
    REQUIRE(res.intervals.size() == 1);
    const RegionInterval& iv = res.intervals[0];
    CHECK(iv.r_lo == doctest::Approx(onsets[mi]).epsilon(1e-9));
    CHECK(iv.lo_is_crossing);
    CHECK(iv.residual_lo <= 1e-10);
    CHECK(iv.r_hi == 30.0);
    CHECK_FALSE(iv.hi_is_crossing);
    CHECK(iv.residual_hi > 0.1);

    // The finder's midpoint check agrees with a direct classification.
    const double mid = 0.5 * (iv.r_lo + iv.r_hi);
    const SteeringReport rep = analytic_report(params_from_alpha_r(1.2, mid), n);
    CHECK(rep.classification[mi] == SteeringClass::CollectiveTripartite);
  }
}

TEST_CASE("vacuum inputs never reach the collective class") {
  const NoiseConfig n = make_noise(0.0);
  for (int mi = 0; mi < 3; ++mi) {
    CHECK(collective(1.2, n, static_cast<Mode>(mi)).intervals.empty());
  }
}

TEST_CASE("grid resolution bounds which windows are visible") {
  // With n0 = 4, n1 = 0 the mode-m collective window is narrower than the
  // default grid spacing and straddles no default grid point, so the scan
  // misses it; a tenfold finer grid pins it down.
  const NoiseConfig n = make_noise(4.0, 0.0);
  for (int mi = 0; mi < 3; ++mi) {
    CHECK(collective(1.2, n, static_cast<Mode>(mi)).intervals.empty());
  }

  const RegionResult fine = collective(1.2, n, Mode::m, 6001);
  REQUIRE(fine.intervals.size() == 1);
  const RegionInterval& iv = fine.intervals[0];
  CHECK(iv.r_lo == doctest::Approx(0.30656392746807253).epsilon(1e-9));
  CHECK(iv.r_hi == doctest::Approx(0.33165267051363659).epsilon(1e-9));
  CHECK(iv.lo_is_crossing);
  CHECK(iv.hi_is_crossing);
  CHECK(iv.residual_lo <= 1e-10);
  CHECK(iv.residual_hi <= 1e-10);
}

TEST_CASE("strong coupling splits the mode-m collective region in two") {
  const NoiseConfig n = make_noise(4.0, 0.0);
  const RegionResult res = collective(4.0, n, Mode::m);
  REQUIRE(res.intervals.size() == 2);
  CHECK(res.intervals[0].r_lo ==
        doctest::Approx(0.33804443970087124).epsilon(1e-9));
  CHECK(res.intervals[0].r_hi ==
        doctest::Approx(0.50871489602479503).epsilon(1e-9));
  CHECK(res.intervals[1].r_lo ==
        doctest::Approx(1.67770942334319806).epsilon(1e-9));
  CHECK(res.intervals[1].r_hi ==
        doctest::Approx(2.43749380446844288).epsilon(1e-9));
  for (const RegionInterval& iv : res.intervals) {
    CHECK(iv.lo_is_crossing);
    CHECK(iv.hi_is_crossing);
    CHECK(iv.residual_lo <= 1e-10);
    CHECK(iv.residual_hi <= 1e-10);
  }
  CHECK(res.intervals[0].r_hi < res.intervals[1].r_lo);
}

TEST_CASE("asymmetric hot input orders ordinary and collective regions") {
  const NoiseConfig n = make_noise(0.0, 4.0);

  // Mode m steers ordinarily from the start, then collectively.
  RegionQuery q;
  q.mode = Mode::m;
  q.cls = SteeringClass::OrdinaryTripartite;
  const RegionResult ord = find_regions(1.2, n, q);
  REQUIRE(ord.intervals.size() == 1);
  CHECK(ord.intervals[0].r_lo > 0.0);
  CHECK(ord.intervals[0].r_lo <= 1e-11);  // steering begins immediately
  CHECK(ord.intervals[0].lo_is_crossing);
  CHECK(ord.intervals[0].r_hi ==
        doctest::Approx(0.74335172025515799).epsilon(1e-9));
  CHECK(ord.intervals[0].hi_is_crossing);

  const RegionResult coll_m = collective(1.2, n, Mode::m);
  REQUIRE(coll_m.intervals.size() == 1);
  CHECK(coll_m.intervals[0].r_lo ==
        doctest::Approx(ord.intervals[0].r_hi).epsilon(1e-9));
  CHECK(coll_m.intervals[0].r_hi == 30.0);
  CHECK_FALSE(coll_m.intervals[0].hi_is_crossing);

  // Modes a and c enter the collective class directly (no ordinary prefix).
  const RegionResult coll_a = collective(1.2, n, Mode::a);
  REQUIRE(coll_a.intervals.size() == 1);
  CHECK(coll_a.intervals[0].r_lo ==
        doctest::Approx(0.31811958164148682).epsilon(1e-9));
  const RegionResult coll_c = collective(1.2, n, Mode::c);
  REQUIRE(coll_c.intervals.size() == 1);
  CHECK(coll_c.intervals[0].r_lo ==
        doctest::Approx(1.08452742699907733).epsilon(1e-9));
  RegionQuery qa = q;
  qa.mode = Mode::a;
  CHECK(find_regions(1.2, n, qa).intervals.empty());
  qa.mode = Mode::c;
  CHECK(find_regions(1.2, n, qa).intervals.empty());
}

TEST_CASE("region query validation") {
  const NoiseConfig n = make_noise(0.0);
  RegionQuery q;
  q.r_lo = -0.1;
  CHECK_THROWS_AS(find_regions(1.2, n, q), std::invalid_argument);
  q = RegionQuery{};
  q.r_hi = q.r_lo;
  CHECK_THROWS_AS(find_regions(1.2, n, q), std::invalid_argument);
  q = RegionQuery{};
  q.grid_points = 1;
  CHECK_THROWS_AS(find_regions(1.2, n, q), std::invalid_argument);
  q = RegionQuery{};
  q.r_tol = 0.0;
  CHECK_THROWS_AS(find_regions(1.2, n, q), std::invalid_argument);
  CHECK_THROWS_AS(find_regions(0.9, n, RegionQuery{}), std::invalid_argument);
}
