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

#include <stdexcept>

#include "qsteer/detail/scalar_math.hpp"
#include "qsteer/model.hpp"

namespace qsteer::detail {

// Exponential building blocks shared by every closed form.  Two branches:
// the direct one carries q, e2, ae2, w; the rescaled one carries the same
// quantities multiplied by e^{-2 r_alpha} (suffixed fields), which stays
// finite at arbitrarily large r_alpha.  Both branches preserve the exact
// identities q - w = ae2 and e2 = x1 (x1 + 2); every consumer relies on
// them, notably the monogamy products and the threshold identities.
template <class S>
struct SqueezeTerms {
  S alpha2{}, beta2{}, ralpha{};
  bool rescaled = false;
  // direct branch
  S x1{};   // e^{r_alpha} - 1
  S u{};    // alpha2 * x1
  S s{};    // u + 1
  S q{};    // u * (u + 2)
  S e2{};   // e^{2 r_alpha} - 1
  S ae2{};  // alpha2 * e2
  S w{};    // alpha2 * beta2 * x1^2
  // rescaled branch (all carry a factor e^{-2 r_alpha} relative to above)
  S y{};    // e^{-r_alpha}
  S y2{};   // e^{-2 r_alpha}
  S ss{};   // s * y = alpha2 - beta2 * y
  S qs{};   // q * y2 = ss^2 - y2
  S ws{};   // w * y2 = alpha2 * beta2 * (1 - y)^2
  S as2{};  // ae2 * y2 = alpha2 * (1 - y2)
  // both branches
  S t{};    // x1 / (x1 + 2) = (1 - y) / (1 + y)
};

// Rescale well before e^{2 r_alpha} terms overflow double; the rescaled
// branch is algebraically exact, so the cutoff is not delicate.
inline constexpr double kRescaleLogLimit = 300.0;

template <class S>
SqueezeTerms<S> squeeze_terms(S alpha2, S ralpha) {
  SqueezeTerms<S> st;
  st.alpha2 = alpha2;
  st.beta2 = alpha2 - S(1);
  st.ralpha = ralpha;
  st.rescaled = static_cast<double>(ralpha + sm_log(alpha2)) > kRescaleLogLimit;
  if (!st.rescaled) {
    st.x1 = sm_expm1(ralpha);
    st.u = alpha2 * st.x1;
    st.s = st.u + S(1);
    st.q = st.u * (st.u + S(2));
    st.e2 = st.x1 * (st.x1 + S(2));
    st.ae2 = alpha2 * st.e2;
    st.w = alpha2 * st.beta2 * st.x1 * st.x1;
    st.t = st.x1 / (st.x1 + S(2));
  } else {
    st.y = sm_exp(-ralpha);
    st.y2 = st.y * st.y;
    const S omy = S(1) - st.y;
    st.ss = alpha2 - st.beta2 * st.y;
    st.qs = st.ss * st.ss - st.y2;
    st.ws = alpha2 * st.beta2 * omy * omy;
    st.as2 = alpha2 * (S(1) - st.y2);
    st.t = omy / (S(1) + st.y);
  }
  return st;
}

// Tripartite steering parameter E_{target|rest} (general n0 != n1 form).
template <class S>
S closed_form_tripartite(const SqueezeTerms<S>& st, S n0, S n1, Mode target) {
  const S h0 = n0 + S(0.5);
  const S h1 = n1 + S(0.5);
  const S big = n0 + n1 + S(1);
  if (!st.rescaled) {
    switch (target) {
      case Mode::m: return h0 * h1 / (h1 + big * st.q);
      case Mode::a: return h0 * h1 / (h0 + big * st.ae2);
      case Mode::c: return h0 * h1 / (h0 + big * st.w);
    }
  } else {
    switch (target) {
      case Mode::m: return h0 * h1 * st.y2 / (h1 * st.y2 + big * st.qs);
      case Mode::a: return h0 * h1 * st.y2 / (h0 * st.y2 + big * st.as2);
      case Mode::c: return h0 * h1 * st.y2 / (h0 * st.y2 + big * st.ws);
    }
  }
  throw std::invalid_argument("closed_form_tripartite: unknown mode");
}

// Bipartite steering parameter E_{target|steerer} (general n0 != n1 form).
template <class S>
S closed_form_bipartite(const SqueezeTerms<S>& st, S n0, S n1, Mode target, Mode steerer) {
  if (target == steerer) throw std::invalid_argument("closed_form_bipartite: target and steerer must differ");
  const S h0 = n0 + S(0.5);
  const S h1 = n1 + S(0.5);
  const S big = n0 + n1 + S(1);
  const S ratio = (S(2) * n1 + S(1)) / (S(2) * n0 + S(1));
  // Variances of X_m, X_a, X_c, rescaled alongside the numerators.
  S vm, va, vc, ae2, w;
  if (!st.rescaled) {
    vm = h0 + big * st.q;
    va = h1 + big * st.ae2;
    vc = h1 + big * st.w;
    ae2 = st.ae2;
    w = st.w;
  } else {
    vm = h0 * st.y2 + big * st.qs;
    va = h1 * st.y2 + big * st.as2;
    vc = h1 * st.y2 + big * st.ws;
    ae2 = st.as2;
    w = st.ws;
  }
  if (target == Mode::a && steerer == Mode::m) return h1 * (S(1) - big * ae2 / vm);
  if (target == Mode::a && steerer == Mode::c) return h1 * (S(1) + big * ae2 / vc);
  if (target == Mode::c && steerer == Mode::a) return h1 * (S(1) + big * w / va);
  if (target == Mode::c && steerer == Mode::m) return h1 * (S(1) - big * w / vm);
  if (target == Mode::m && steerer == Mode::a) {
    const S b = S(1) - ratio * st.beta2 * st.t;
    return h0 * (S(1) - b * big * ae2 / va);
  }
  // target == m, steerer == c
  const S c = ratio - st.beta2 * st.t;
  return h0 * (S(1) + c * big * ae2 / vc);
}

// Output-field second moments.  These grow like e^{2 r_alpha} and are
// reported as written (overflowing to inf at extreme r_alpha); the steering
// parameters above stay finite through the rescaled branch instead.
template <class S>
struct MomentSet {
  S var_X_a{}, var_X_c{}, var_X_m{};
  S c_XmPa{}, c_XmXc{}, c_PaXc{};
};

template <class S>
MomentSet<S> moment_set(S alpha2, S ralpha, S n0, S n1) {
  const S beta2 = alpha2 - S(1);
  const S h0 = n0 + S(0.5);
  const S h1 = n1 + S(0.5);
  const S big = n0 + n1 + S(1);
  const S x1 = sm_expm1(ralpha);
  const S u = alpha2 * x1;
  const S s = u + S(1);
  const S q = u * (u + S(2));
  const S e2 = x1 * (x1 + S(2));
  const S ae2 = alpha2 * e2;
  const S w = alpha2 * beta2 * x1 * x1;
  MomentSet<S> m;
  m.var_X_m = h0 + big * q;
  m.var_X_a = h1 + big * ae2;
  m.var_X_c = h1 + big * w;
  m.c_XmPa = -big * sm_sqrt(alpha2 * e2) * s;
  m.c_XmXc = -big * sm_sqrt(alpha2 * beta2) * x1 * s;
  m.c_PaXc = big * alpha2 * sm_sqrt(beta2) * sm_sqrt(e2) * x1;
  return m;
}

// Assembles the 6x6 covariance from the independent moments and their
// symmetry partners: dP_i^2 = dX_i^2, <P_m,X_a> = <X_m,P_a>,
// <P_m,P_c> = -<X_m,X_c>, <X_a,P_c> = -<P_a,X_c>, all other entries 0.
template <class S>
QuadCovarianceT<S> moment_covariance(const MomentSet<S>& m) {
  QuadCovarianceT<S> v{};
  v(0, 0) = v(1, 1) = m.var_X_m;
  v(2, 2) = v(3, 3) = m.var_X_a;
  v(4, 4) = v(5, 5) = m.var_X_c;
  v.set_sym(0, 3, m.c_XmPa);
  v.set_sym(1, 2, m.c_XmPa);
  v.set_sym(0, 4, m.c_XmXc);
  v.set_sym(1, 5, -m.c_XmXc);
  v.set_sym(3, 4, m.c_PaXc);
  v.set_sym(2, 5, -m.c_PaXc);
  return v;
}

}  // namespace qsteer::detail
