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

#include "qsteer/regions.hpp"

#include <cmath>
#include <stdexcept>

#include "qsteer/analytic.hpp"

namespace qsteer {
namespace {

struct Probe {
  double alpha;
  NoiseConfig noise;
  Mode mode;

  SteeringReport report_at(double r) const {
    return analytic_report(params_from_alpha_r(alpha, r), noise);
  }

  SteeringClass classify(double r) const {
    return report_at(r).classification[static_cast<int>(mode)];
  }

  double residual(double r) const {
    const SteeringReport rep = report_at(r);
    double best = std::abs(rep.tripartite(mode) - 0.5);
    for (Mode s : {Mode::m, Mode::a, Mode::c}) {
      if (s == mode) continue;
      const double d = std::abs(rep.bipartite(mode, s) - 0.5);
      if (d < best) best = d;
    }
    return best;
  }
};

// pre: classify(r_bad) != cls, classify(r_good) == cls.  Returns the
// matching-side bracket end, so the reported endpoint carries the class.
double bisect_boundary(const Probe& probe, SteeringClass cls, double r_bad, double r_good,
                       double tol) {
  while (std::abs(r_good - r_bad) > tol) {
    const double mid = 0.5 * (r_bad + r_good);
    if (mid == r_bad || mid == r_good) break;  // bracket at ulp resolution
    if (probe.classify(mid) == cls) {
      r_good = mid;
    } else {
      r_bad = mid;
    }
  }
  return r_good;
}

}  // namespace

RegionResult find_regions(double alpha, const NoiseConfig& noise, const RegionQuery& query) {
  if (!(query.r_hi > query.r_lo) || !(query.r_lo >= 0.0)) {
    throw std::invalid_argument("find_regions: requires 0 <= r_lo < r_hi");
  }
  if (query.grid_points < 2) {
    throw std::invalid_argument("find_regions: requires at least 2 grid points");
  }
  if (!(query.r_tol > 0.0)) {
    throw std::invalid_argument("find_regions: requires r_tol > 0");
  }
  const Probe probe{alpha, noise, query.mode};
  const int pts = query.grid_points;
  const double step = (query.r_hi - query.r_lo) / static_cast<double>(pts - 1);
  std::vector<double> grid(pts);
  std::vector<bool> match(pts);
  for (int i = 0; i < pts; ++i) {
    grid[i] = i == pts - 1 ? query.r_hi : query.r_lo + step * static_cast<double>(i);
    match[i] = probe.classify(grid[i]) == query.cls;
  }

  RegionResult result;
  result.mode = query.mode;
  result.cls = query.cls;
  int i = 0;
  while (i < pts) {
    if (!match[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < pts && match[j + 1]) ++j;
    RegionInterval iv;
    if (i == 0) {
      iv.r_lo = grid[0];
      iv.lo_is_crossing = false;
    } else {
      iv.r_lo = bisect_boundary(probe, query.cls, grid[i - 1], grid[i], query.r_tol);
    }
    if (j == pts - 1) {
      iv.r_hi = grid[pts - 1];
      iv.hi_is_crossing = false;
    } else {
      iv.r_hi = bisect_boundary(probe, query.cls, grid[j + 1], grid[j], query.r_tol);
    }
    iv.residual_lo = probe.residual(iv.r_lo);
    iv.residual_hi = probe.residual(iv.r_hi);
    if (probe.classify(0.5 * (iv.r_lo + iv.r_hi)) != query.cls) {
      throw std::runtime_error("find_regions: classification inconsistent at interval midpoint");
    }
    result.intervals.push_back(iv);
    i = j + 1;
  }
  return result;
}

}  // namespace qsteer
