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

#include <cmath>

#if defined(__SIZEOF_FLOAT128__) && __has_include(<quadmath.h>)
#define QSTEER_HAVE_FLOAT128 1
#include <quadmath.h>
#endif

namespace qsteer::detail {

// Scalar-generic math shims so the closed forms and the steering engine can
// be instantiated with double or (for tight-tolerance verification) with
// __float128.

inline double sm_exp(double x) { return std::exp(x); }
inline double sm_expm1(double x) { return std::expm1(x); }
inline double sm_log(double x) { return std::log(x); }
inline double sm_log1p(double x) { return std::log1p(x); }
inline double sm_sqrt(double x) { return std::sqrt(x); }
inline double sm_abs(double x) { return std::fabs(x); }
inline double sm_cos(double x) { return std::cos(x); }
inline double sm_acos(double x) { return std::acos(x); }
inline double sm_cbrt(double x) { return std::cbrt(x); }
inline bool sm_finite(double x) { return std::isfinite(x); }

#ifdef QSTEER_HAVE_FLOAT128
inline __float128 sm_exp(__float128 x) { return expq(x); }
inline __float128 sm_expm1(__float128 x) { return expm1q(x); }
inline __float128 sm_log(__float128 x) { return logq(x); }
inline __float128 sm_log1p(__float128 x) { return log1pq(x); }
inline __float128 sm_sqrt(__float128 x) { return sqrtq(x); }
inline __float128 sm_abs(__float128 x) { return fabsq(x); }
inline __float128 sm_cos(__float128 x) { return cosq(x); }
inline __float128 sm_acos(__float128 x) { return acosq(x); }
inline __float128 sm_cbrt(__float128 x) { return cbrtq(x); }
inline bool sm_finite(__float128 x) { return finiteq(x) != 0; }
#endif

template <class S>
S sm_max(S a, S b) { return a < b ? b : a; }
template <class S>
S sm_min(S a, S b) { return b < a ? b : a; }

}  // namespace qsteer::detail
