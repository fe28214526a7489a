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

#include <vector>

#include "qsteer/model.hpp"

namespace qsteer {

// Locates the r-intervals over which a mode carries a requested steering
// classification, at fixed alpha and occupations (G = 1, so r = tau).
// Brackets come from a uniform grid scan, refined by bisection on the
// classification predicate; features narrower than the grid spacing are
// invisible to the scan.
struct RegionQuery {
  Mode mode = Mode::m;
  SteeringClass cls = SteeringClass::CollectiveTripartite;
  double r_lo = 0.0;
  double r_hi = 30.0;
  int grid_points = 601;
  double r_tol = 1e-12;  // bisection width target on r
};

struct RegionInterval {
  double r_lo = 0.0;
  double r_hi = 0.0;
  // min over the mode's three steering parameters of |E - 1/2| at the
  // endpoint; small only where the endpoint is a genuine crossing.
  double residual_lo = 0.0;
  double residual_hi = 0.0;
  bool lo_is_crossing = true;  // false when clipped at the query range end
  bool hi_is_crossing = true;
};

struct RegionResult {
  Mode mode = Mode::m;
  SteeringClass cls = SteeringClass::CollectiveTripartite;
  std::vector<RegionInterval> intervals;  // disjoint, sorted by r_lo
};

RegionResult find_regions(double alpha, const NoiseConfig& noise, const RegionQuery& query);

}  // namespace qsteer
