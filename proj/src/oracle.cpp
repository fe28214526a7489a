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

#include "qsteer/oracle.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsteer/detail/linalg.hpp"
#include "qsteer/detail/parallel.hpp"
#include "qsteer/detail/rng.hpp"

namespace qsteer {
namespace {

constexpr double kMaxSteps = 4e8;      // safety cap on integrator work
constexpr int kMonitorStride = 50;     // positivity/overflow check cadence
constexpr int kReadout[6] = {0, 1, 6, 7, 4, 5};  // (m, acc, at) -> (m, a, c)

long step_count(const RawSystem& sys) {
  const double raw = std::ceil(sys.kappa * sys.tau * sys.steps_per_kappa);
  if (!(raw < kMaxSteps)) {
    throw std::range_error("oracle: step count exceeds the safety cap; tau too large");
  }
  const long n = static_cast<long>(raw);
  return n < 1 ? 1 : n;
}

// out = m v + (m v)^T + d
void lyapunov_rhs(const RawSystem& sys, const Mat8& v, double t, Mat8& out) {
  const Mat8 m = drift_matrix(sys, t);
  const Mat8 d = diffusion_matrix(sys, t);
  Mat8 b{};
  for (int i = 0; i < 8; ++i) {
    for (int k = 0; k < 8; ++k) {
      const double mik = m[i * 8 + k];
      if (mik == 0.0) continue;
      for (int j = 0; j < 8; ++j) b[i * 8 + j] += mik * v[k * 8 + j];
    }
  }
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) out[i * 8 + j] = b[i * 8 + j] + b[j * 8 + i] + d[i * 8 + j];
  }
}

void monitor_state(const Mat8& v, long step) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::range_error("oracle: second moments overflowed at step " + std::to_string(step));
    }
  }
  Mat8 sym;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) sym[i * 8 + j] = 0.5 * (v[i * 8 + j] + v[j * 8 + i]);
  }
  const auto eig = detail::sym_eigenvalues<double, 8>(sym);
  const double lmax = eig[7];
  if (eig[0] < -1e-8 * (lmax > 1.0 ? lmax : 1.0)) {
    throw std::runtime_error("oracle: covariance lost positivity at step " + std::to_string(step) +
                             "; increase steps_per_kappa");
  }
}

QuadCovariance thermal_readout(const RawSystem& sys) {
  QuadCovariance out{};
  out(0, 0) = out(1, 1) = sys.n_m + 0.5;
  out(2, 2) = out(3, 3) = sys.n_cav + 0.5;
  out(4, 4) = out(5, 5) = sys.n_at + 0.5;
  return out;
}

void mat_vec(const Mat8& m, const double* z, double* out) {
  for (int i = 0; i < 8; ++i) {
    double s = 0.0;
    for (int j = 0; j < 8; ++j) s += m[i * 8 + j] * z[j];
    out[i] = s;
  }
}

}  // namespace

RawSystem make_raw_system(const ModelParams& p, const NoiseConfig& n, const OracleConfig& cfg) {
  if (cfg.kappa_over_g < 0.0) {
    throw std::invalid_argument("make_raw_system: kappa_over_g must be positive (or 0 to infer)");
  }
  if (!(cfg.steps_per_kappa >= 10.0)) {
    throw std::invalid_argument("make_raw_system: steps_per_kappa must be at least 10");
  }
  if (cfg.gamma_m < 0.0 || cfg.gamma_a < 0.0) {
    throw std::invalid_argument("make_raw_system: damping rates must be nonnegative");
  }
  const double ratio = cfg.kappa_over_g > 0.0 ? cfg.kappa_over_g : std::sqrt(p.kappa / p.G);
  RawSystem s;
  s.kappa = ratio * ratio * p.G;
  s.g = ratio * p.G;
  s.g_a = std::sqrt(p.G_a * s.kappa);
  s.tau = p.tau;
  s.gamma_m = cfg.gamma_m;
  s.gamma_a = cfg.gamma_a;
  s.n_m = cfg.n_m >= 0.0 ? cfg.n_m : n.n0;
  s.n_cav = cfg.n_cav >= 0.0 ? cfg.n_cav : n.n1;
  s.n_at = cfg.n_at >= 0.0 ? cfg.n_at : n.n1;
  s.eps = (s.g * s.g - s.g_a * s.g_a) / s.kappa;
  s.steps_per_kappa = cfg.steps_per_kappa;
  if (s.tau > 0.0) {
    const double x = 2.0 * s.eps * s.tau;
    s.norm = std::sqrt(std::abs(x) < 1e-12 ? 1.0 / s.tau : 2.0 * s.eps / std::expm1(x));
  }
  return s;
}

double temporal_weight(const RawSystem& sys, double t) { return sys.norm * std::exp(sys.eps * t); }

Mat8 drift_matrix(const RawSystem& sys, double t) {
  Mat8 m{};
  const double sq = std::sqrt(2.0 * sys.kappa);
  m[0 * 8 + 0] = -sys.gamma_m;
  m[0 * 8 + 3] = -sys.g;
  m[1 * 8 + 1] = -sys.gamma_m;
  m[1 * 8 + 2] = -sys.g;
  m[2 * 8 + 1] = -sys.g;
  m[2 * 8 + 2] = -sys.kappa;
  m[2 * 8 + 5] = sys.g_a;
  m[3 * 8 + 0] = -sys.g;
  m[3 * 8 + 3] = -sys.kappa;
  m[3 * 8 + 4] = -sys.g_a;
  m[4 * 8 + 3] = sys.g_a;
  m[4 * 8 + 4] = -sys.gamma_a;
  m[5 * 8 + 2] = -sys.g_a;
  m[5 * 8 + 5] = -sys.gamma_a;
  const double w = temporal_weight(sys, t);
  m[6 * 8 + 2] = sq * w;
  m[7 * 8 + 3] = sq * w;
  return m;
}

Mat8 diffusion_matrix(const RawSystem& sys, double t) {
  Mat8 d{};
  const double hc = sys.n_cav + 0.5;
  const double w = temporal_weight(sys, t);
  const double cross = -std::sqrt(2.0 * sys.kappa) * w * hc;
  d[0 * 8 + 0] = d[1 * 8 + 1] = 2.0 * sys.gamma_m * (sys.n_m + 0.5);
  d[2 * 8 + 2] = d[3 * 8 + 3] = 2.0 * sys.kappa * hc;
  d[4 * 8 + 4] = d[5 * 8 + 5] = 2.0 * sys.gamma_a * (sys.n_at + 0.5);
  d[6 * 8 + 6] = d[7 * 8 + 7] = w * w * hc;
  d[2 * 8 + 6] = d[6 * 8 + 2] = cross;  // shared input noise, cavity vs accumulator
  d[3 * 8 + 7] = d[7 * 8 + 3] = cross;
  return d;
}

Mat8 drift_matrix(const ModelParams& p, const OracleConfig& cfg, double t) {
  return drift_matrix(make_raw_system(p, make_noise(0.0), cfg), t);
}

Mat8 diffusion_matrix(const ModelParams& p, const NoiseConfig& n, const OracleConfig& cfg,
                      double t) {
  return diffusion_matrix(make_raw_system(p, n, cfg), t);
}

QuadCovariance propagate(const RawSystem& sys) {
  if (sys.tau == 0.0) return thermal_readout(sys);
  const long nsteps = step_count(sys);
  const double h = sys.tau / static_cast<double>(nsteps);
  Mat8 v{};
  v[0 * 8 + 0] = v[1 * 8 + 1] = sys.n_m + 0.5;
  v[2 * 8 + 2] = v[3 * 8 + 3] = sys.n_cav + 0.5;
  v[4 * 8 + 4] = v[5 * 8 + 5] = sys.n_at + 0.5;
  Mat8 k1, k2, k3, k4, tmp;
  for (long step = 0; step < nsteps; ++step) {
    const double t = h * static_cast<double>(step);
    lyapunov_rhs(sys, v, t, k1);
    for (int i = 0; i < 64; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
    lyapunov_rhs(sys, tmp, t + 0.5 * h, k2);
    for (int i = 0; i < 64; ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
    lyapunov_rhs(sys, tmp, t + 0.5 * h, k3);
    for (int i = 0; i < 64; ++i) tmp[i] = v[i] + h * k3[i];
    lyapunov_rhs(sys, tmp, t + h, k4);
    for (int i = 0; i < 64; ++i) {
      v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (step % kMonitorStride == kMonitorStride - 1) monitor_state(v, step + 1);
  }
  monitor_state(v, nsteps);
  QuadCovariance out;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      out(i, j) = 0.5 * (v[kReadout[i] * 8 + kReadout[j]] + v[kReadout[j] * 8 + kReadout[i]]);
    }
  }
  return out;
}

QuadCovariance propagate(const ModelParams& p, const NoiseConfig& n, const OracleConfig& cfg) {
  return propagate(make_raw_system(p, n, cfg));
}

MonteCarloResult monte_carlo_check(const RawSystem& sys, std::int64_t samples,
                                   std::uint64_t seed) {
  if (samples < 1000) {
    throw std::invalid_argument("monte_carlo_check: need at least 1000 samples");
  }
  if (!(sys.tau > 0.0)) {
    throw std::invalid_argument("monte_carlo_check: tau must be positive");
  }
  const long nsteps = step_count(sys);
  const double h = sys.tau / static_cast<double>(nsteps);
  const double sd_init[6] = {std::sqrt(sys.n_m + 0.5),  std::sqrt(sys.n_m + 0.5),
                             std::sqrt(sys.n_cav + 0.5), std::sqrt(sys.n_cav + 0.5),
                             std::sqrt(sys.n_at + 0.5),  std::sqrt(sys.n_at + 0.5)};
  const double sq = std::sqrt(2.0 * sys.kappa);
  const double sd_cav = std::sqrt((sys.n_cav + 0.5) * 0.5 * h);
  const double sd_m = std::sqrt(2.0 * sys.gamma_m * (sys.n_m + 0.5) * 0.5 * h);
  const double sd_at = std::sqrt(2.0 * sys.gamma_a * (sys.n_at + 0.5) * 0.5 * h);

  // Half step of every noise channel; the cavity and the accumulator share
  // one Wiener increment per quadrature (the cross-diffusion above).
  auto half_kick = [&](double* z, double t, detail::NormalRng& rng) {
    const double w = temporal_weight(sys, t);
    const double dwx = sd_cav * rng.next();
    z[2] -= sq * dwx;
    z[6] += w * dwx;
    const double dwp = sd_cav * rng.next();
    z[3] -= sq * dwp;
    z[7] += w * dwp;
    if (sys.gamma_m > 0.0) {
      z[0] += sd_m * rng.next();
      z[1] += sd_m * rng.next();
    }
    if (sys.gamma_a > 0.0) {
      z[4] += sd_at * rng.next();
      z[5] += sd_at * rng.next();
    }
  };

  constexpr std::int64_t kChunk = 1024;  // substream granularity for reduction order
  const std::size_t nchunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  std::vector<std::array<double, 36>> partial(nchunks);
  detail::parallel_for(nchunks, [&](std::size_t chunk) {
    std::array<double, 36> acc{};
    const std::int64_t lo = static_cast<std::int64_t>(chunk) * kChunk;
    const std::int64_t hi = lo + kChunk < samples ? lo + kChunk : samples;
    for (std::int64_t traj = lo; traj < hi; ++traj) {
      detail::NormalRng rng(detail::substream_seed(seed, static_cast<std::uint64_t>(traj)));
      double z[8] = {};
      for (int i = 0; i < 6; ++i) z[i] = sd_init[i] * rng.next();
      double k1[8], k2[8], k3[8], k4[8], zt[8];
      for (long step = 0; step < nsteps; ++step) {
        const double t = h * static_cast<double>(step);
        half_kick(z, t, rng);
        const Mat8 m1 = drift_matrix(sys, t);
        const Mat8 m2 = drift_matrix(sys, t + 0.5 * h);
        const Mat8 m3 = drift_matrix(sys, t + h);
        mat_vec(m1, z, k1);
        for (int i = 0; i < 8; ++i) zt[i] = z[i] + 0.5 * h * k1[i];
        mat_vec(m2, zt, k2);
        for (int i = 0; i < 8; ++i) zt[i] = z[i] + 0.5 * h * k2[i];
        mat_vec(m2, zt, k3);
        for (int i = 0; i < 8; ++i) zt[i] = z[i] + h * k3[i];
        mat_vec(m3, zt, k4);
        for (int i = 0; i < 8; ++i) {
          z[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        half_kick(z, t + h, rng);
      }
      double out[6];
      for (int i = 0; i < 6; ++i) out[i] = z[kReadout[i]];
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) acc[i * 6 + j] += out[i] * out[j];
      }
    }
    partial[chunk] = acc;
  });

  std::array<double, 36> total{};
  for (const auto& acc : partial) {
    for (int i = 0; i < 36; ++i) total[i] += acc[i];
  }
  MonteCarloResult res;
  res.samples = samples;
  const double inv = 1.0 / static_cast<double>(samples);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) res.cov(i, j) = total[i * 6 + j] * inv;
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double vii = res.cov(i, i), vjj = res.cov(j, j), vij = res.cov(i, j);
      res.std_err(i, j) = std::sqrt((vii * vjj + vij * vij) * inv);
    }
  }
  return res;
}

MonteCarloResult monte_carlo_check(const ModelParams& p, const NoiseConfig& n,
                                   const OracleConfig& cfg, std::int64_t samples,
                                   std::uint64_t seed) {
  return monte_carlo_check(make_raw_system(p, n, cfg), samples, seed);
}

}  // namespace qsteer
