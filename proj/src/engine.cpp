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

#include "qsteer/engine.hpp"

#include <stdexcept>

namespace qsteer {
namespace {

PairingSpec make_spec(Mode target, std::vector<PairingTerm> fx, std::vector<PairingTerm> fp) {
  PairingSpec spec;
  spec.target = target;
  spec.factor_X = std::move(fx);
  spec.factor_P = std::move(fp);
  return spec;
}

}  // namespace

PairingSpec canonical_bipartite_pairing(Mode target, Mode steerer) {
  if (target == steerer) {
    throw std::invalid_argument("canonical_bipartite_pairing: target and steerer must differ");
  }
  const Mode m = Mode::m, a = Mode::a, c = Mode::c;
  if (target == m && steerer == a) return make_spec(m, {{a, Quad::P, +1}}, {{a, Quad::X, +1}});
  if (target == m && steerer == c) return make_spec(m, {{c, Quad::X, +1}}, {{c, Quad::P, -1}});
  if (target == a && steerer == m) return make_spec(a, {{m, Quad::P, +1}}, {{m, Quad::X, +1}});
  if (target == a && steerer == c) return make_spec(a, {{c, Quad::P, +1}}, {{c, Quad::X, -1}});
  if (target == c && steerer == a) return make_spec(c, {{a, Quad::P, +1}}, {{a, Quad::X, -1}});
  return make_spec(c, {{m, Quad::X, +1}}, {{m, Quad::P, -1}});  // (c|m)
}

PairingSpec canonical_tripartite_pairing(Mode target) {
  const Mode m = Mode::m, a = Mode::a, c = Mode::c;
  // Each factor restricted to one steerer (other gain 0) reproduces the
  // canonical bipartite pairing, so E_tri <= min of the two bipartite E's.
  switch (target) {
    case Mode::m:
      return make_spec(m, {{a, Quad::P, +1}, {c, Quad::X, +1}},
                       {{a, Quad::X, +1}, {c, Quad::P, -1}});
    case Mode::a:
      return make_spec(a, {{m, Quad::P, +1}, {c, Quad::P, +1}},
                       {{m, Quad::X, +1}, {c, Quad::X, -1}});
    case Mode::c:
      return make_spec(c, {{a, Quad::P, +1}, {m, Quad::X, +1}},
                       {{a, Quad::X, -1}, {m, Quad::P, -1}});
  }
  throw std::invalid_argument("canonical_tripartite_pairing: unknown mode");
}

SteeringReport full_report(const QuadCovariance& cov) {
  auto bip = [&](Mode t, Mode s) {
    return bipartite_steering(cov, canonical_bipartite_pairing(t, s)).E;
  };
  auto tri = [&](Mode t) { return tripartite_steering(cov, canonical_tripartite_pairing(t)).E; };
  SteeringReport rep;
  rep.E_m_a = bip(Mode::m, Mode::a);
  rep.E_m_c = bip(Mode::m, Mode::c);
  rep.E_a_m = bip(Mode::a, Mode::m);
  rep.E_a_c = bip(Mode::a, Mode::c);
  rep.E_c_a = bip(Mode::c, Mode::a);
  rep.E_c_m = bip(Mode::c, Mode::m);
  rep.E_m_ac = tri(Mode::m);
  rep.E_a_mc = tri(Mode::a);
  rep.E_c_am = tri(Mode::c);
  rep.classification[static_cast<int>(Mode::m)] = classify_mode(rep.E_m_ac, rep.E_m_a, rep.E_m_c);
  rep.classification[static_cast<int>(Mode::a)] = classify_mode(rep.E_a_mc, rep.E_a_m, rep.E_a_c);
  rep.classification[static_cast<int>(Mode::c)] = classify_mode(rep.E_c_am, rep.E_c_a, rep.E_c_m);
  return rep;
}

SteeringResult pairing_search(const QuadCovariance& cov, Mode target,
                              const std::vector<Mode>& steerers) {
  if (steerers.empty() || steerers.size() > 2) {
    throw std::invalid_argument("pairing_search: need 1 or 2 steerers");
  }
  if (steerers.size() == 2 && steerers[0] == steerers[1]) {
    throw std::invalid_argument("pairing_search: steerers must be distinct");
  }
  for (Mode s : steerers) {
    if (s == target) throw std::invalid_argument("pairing_search: steerer equals target");
  }
  // Per steerer: quadrature entering the X factor, quadrature entering the
  // P factor, and the relative sign between them (the X-term sign is
  // normalized to +1; a global sign is absorbed into the gain).
  const std::size_t k = steerers.size();
  const std::size_t combos = k == 1 ? 8 : 64;
  SteeringResult best;
  bool have_best = false;
  for (std::size_t code = 0; code < combos; ++code) {
    PairingSpec spec;
    spec.target = target;
    spec.shared_gains = true;
    std::size_t rem = code;
    for (std::size_t i = 0; i < k; ++i) {
      const Quad qx = (rem & 1) ? Quad::P : Quad::X;
      const Quad qp = (rem & 2) ? Quad::P : Quad::X;
      const int rel = (rem & 4) ? -1 : +1;
      rem >>= 3;
      spec.factor_X.push_back({steerers[i], qx, +1});
      spec.factor_P.push_back({steerers[i], qp, rel});
    }
    const SteeringResult res = k == 1 ? bipartite_steering(cov, spec)
                                      : tripartite_steering(cov, spec);
    if (!have_best || res.E < best.E) {
      best = res;
      have_best = true;
    }
  }
  return best;
}

}  // namespace qsteer
