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

#include "qsteer/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qsteer/detail/closed_form.hpp"

namespace qsteer {
namespace {

detail::SqueezeTerms<double> terms_of(const ModelParams& p) {
  return detail::squeeze_terms<double>(p.alpha2, p.r_alpha);
}

void check_variance(double v, double floor, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("to_covariance: ") + name + " is not finite");
  }
  // Relative slack tolerates round-off in externally assembled moments.
  if (v < floor * (1.0 - 1e-9)) {
    throw std::invalid_argument(std::string("to_covariance: ") + name +
                                " is below its thermal floor");
  }
}

}  // namespace

OutputMoments output_moments(const ModelParams& p, const NoiseConfig& n) {
  const auto m = detail::moment_set<double>(p.alpha2, p.r_alpha, n.n0, n.n1);
  OutputMoments out;
  out.var_X_a = m.var_X_a;
  out.var_X_c = m.var_X_c;
  out.var_X_m = m.var_X_m;
  out.c_XmPa = m.c_XmPa;
  out.c_XmXc = m.c_XmXc;
  out.c_PaXc = m.c_PaXc;
  return out;
}

QuadCovariance to_covariance(const OutputMoments& m, const NoiseConfig& n) {
  check_variance(m.var_X_m, n.n0 + 0.5, "var_X_m");
  check_variance(m.var_X_a, n.n1 + 0.5, "var_X_a");
  check_variance(m.var_X_c, n.n1 + 0.5, "var_X_c");
  for (double c : {m.c_XmPa, m.c_XmXc, m.c_PaXc}) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("to_covariance: correlation is not finite");
    }
  }
  detail::MomentSet<double> ms;
  ms.var_X_a = m.var_X_a;
  ms.var_X_c = m.var_X_c;
  ms.var_X_m = m.var_X_m;
  ms.c_XmPa = m.c_XmPa;
  ms.c_XmXc = m.c_XmXc;
  ms.c_PaXc = m.c_PaXc;
  return detail::moment_covariance(ms);
}

double tripartite_E(const ModelParams& p, const NoiseConfig& n, Mode target) {
  return detail::closed_form_tripartite(terms_of(p), n.n0, n.n1, target);
}

double bipartite_E(const ModelParams& p, const NoiseConfig& n, Mode target, Mode steerer) {
  return detail::closed_form_bipartite(terms_of(p), n.n0, n.n1, target, steerer);
}

double tripartite_threshold_n(const ModelParams& p, Mode target) {
  const auto st = terms_of(p);
  if (!st.rescaled) {
    switch (target) {
      case Mode::m: return st.q;
      case Mode::a: return st.ae2;
      case Mode::c: return st.w;
    }
  } else {
    switch (target) {
      case Mode::m: return st.qs / st.y2;
      case Mode::a: return st.as2 / st.y2;
      case Mode::c: return st.ws / st.y2;
    }
  }
  throw std::invalid_argument("tripartite_threshold_n: unknown mode");
}

std::optional<BipartiteThreshold> bipartite_threshold_n(const ModelParams& p, Mode target,
                                                        Mode steerer) {
  if (target == steerer) {
    throw std::invalid_argument("bipartite_threshold_n: target and steerer must differ");
  }
  if ((target == Mode::a && steerer == Mode::c) || (target == Mode::c && steerer == Mode::a)) {
    return std::nullopt;  // E >= 1/2 for every occupation; no threshold
  }
  const auto st = terms_of(p);
  double raw = 0.0;
  if (!st.rescaled) {
    if (target == Mode::a) {
      raw = st.ae2 / (1.0 + 2.0 * st.w);
    } else if (target == Mode::c) {
      raw = st.w / (1.0 + 2.0 * st.ae2);
    } else if (steerer == Mode::a) {
      raw = (st.ae2 - st.w) / (1.0 + 2.0 * st.w);
    } else {
      raw = (st.w - st.ae2) / (1.0 + 2.0 * st.ae2);
    }
  } else {
    if (target == Mode::a) {
      raw = st.as2 / (st.y2 + 2.0 * st.ws);
    } else if (target == Mode::c) {
      raw = st.ws / (st.y2 + 2.0 * st.as2);
    } else if (steerer == Mode::a) {
      raw = (st.as2 - st.ws) / (st.y2 + 2.0 * st.ws);
    } else {
      raw = (st.ws - st.as2) / (st.y2 + 2.0 * st.as2);
    }
  }
  BipartiteThreshold th;
  th.unclamped = raw;
  th.clamped = raw < 0.0;  // negative occupation is unphysical
  th.n_th = th.clamped ? 0.0 : raw;
  return th;
}

double steering_onset_r_alpha(double alpha, double n) {
  if (!(alpha >= 1.0)) {
    throw std::invalid_argument("steering_onset_r_alpha: requires alpha >= 1");
  }
  if (!(n >= 0.0)) {
    throw std::invalid_argument("steering_onset_r_alpha: requires n >= 0");
  }
  // sqrt(n+1) - 1 written without cancellation at small n.
  const double ustar = n / (std::sqrt(n + 1.0) + 1.0);
  return std::log1p(ustar / (alpha * alpha));
}

double asymptotic_E(const ModelParams& p, const NoiseConfig& n, Mode target,
                    AsymptoticRegime regime) {
  if (n.n0 != n.n1) {
    throw std::invalid_argument("asymptotic_E: requires equal occupations n0 == n1");
  }
  const double h = n.n0 + 0.5;
  if (regime == AsymptoticRegime::large_r) {
    const double y2 = std::exp(-2.0 * p.r_alpha);
    switch (target) {
      case Mode::m: return h * y2 / (2.0 * p.alpha2 * p.alpha2);
      case Mode::a: return h * y2 / (2.0 * p.alpha2);
      case Mode::c: return h * y2 / (2.0 * p.alpha2 * p.beta2);  // inf at beta = 0
    }
  } else {
    switch (target) {
      case Mode::m: return h / (2.0 * (p.r + 1.0) * (p.r + 1.0) - 1.0);
      case Mode::a: return h / (4.0 * p.r + 1.0);
      case Mode::c: return h / (1.0 + 2.0 * p.beta2 * p.r * p.r / p.alpha2);
    }
  }
  throw std::invalid_argument("asymptotic_E: unknown mode");
}

double ratio_Ecam_over_Emac(const ModelParams& p) {
  const auto st = terms_of(p);
  if (!st.rescaled) return 1.0 + 2.0 * st.ae2 / (2.0 * st.w + 1.0);
  return 1.0 + 2.0 * st.as2 / (2.0 * st.ws + st.y2);
}

double large_n0_bipartite_limits(const ModelParams& p, double n1, Mode target) {
  if (target == Mode::m) {
    throw std::invalid_argument(
        "large_n0_bipartite_limits: target must be a or c (steered by the mirror mode)");
  }
  if (!(n1 >= 0.0)) {
    throw std::invalid_argument("large_n0_bipartite_limits: requires n1 >= 0");
  }
  const auto st = terms_of(p);
  const double h1 = n1 + 0.5;
  if (!st.rescaled) {
    const double s2 = st.s * st.s;  // = 1 + q
    return target == Mode::a ? h1 * (1.0 - st.ae2 / s2) : h1 * (1.0 - st.w / s2);
  }
  const double ss2 = st.ss * st.ss;  // = qs + y2
  return target == Mode::a ? h1 * (1.0 - st.as2 / ss2) : h1 * (1.0 - st.ws / ss2);
}

SteeringReport analytic_report(const ModelParams& p, const NoiseConfig& n) {
  const auto st = terms_of(p);
  SteeringReport rep;
  rep.E_m_a = detail::closed_form_bipartite(st, n.n0, n.n1, Mode::m, Mode::a);
  rep.E_m_c = detail::closed_form_bipartite(st, n.n0, n.n1, Mode::m, Mode::c);
  rep.E_a_m = detail::closed_form_bipartite(st, n.n0, n.n1, Mode::a, Mode::m);
  rep.E_a_c = detail::closed_form_bipartite(st, n.n0, n.n1, Mode::a, Mode::c);
  rep.E_c_a = detail::closed_form_bipartite(st, n.n0, n.n1, Mode::c, Mode::a);
  rep.E_c_m = detail::closed_form_bipartite(st, n.n0, n.n1, Mode::c, Mode::m);
  rep.E_m_ac = detail::closed_form_tripartite(st, n.n0, n.n1, Mode::m);
  rep.E_a_mc = detail::closed_form_tripartite(st, n.n0, n.n1, Mode::a);
  rep.E_c_am = detail::closed_form_tripartite(st, n.n0, n.n1, Mode::c);
  rep.classification[static_cast<int>(Mode::m)] = classify_mode(rep.E_m_ac, rep.E_m_a, rep.E_m_c);
  rep.classification[static_cast<int>(Mode::a)] = classify_mode(rep.E_a_mc, rep.E_a_m, rep.E_a_c);
  rep.classification[static_cast<int>(Mode::c)] = classify_mode(rep.E_c_am, rep.E_c_a, rep.E_c_m);
  return rep;
}

}  // namespace qsteer
