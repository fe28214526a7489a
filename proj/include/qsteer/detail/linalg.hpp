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

#include <array>
#include <cstddef>

#include "qsteer/detail/scalar_math.hpp"

namespace qsteer::detail {

template <class S>
constexpr S sm_eps();
template <>
constexpr double sm_eps<double>() { return 2.220446049250313e-16; }
#ifdef QSTEER_HAVE_FLOAT128
template <>
constexpr __float128 sm_eps<__float128>() { return FLT128_EPSILON; }
#endif

template <class S>
constexpr S sm_pi();
template <>
constexpr double sm_pi<double>() { return 3.141592653589793238462643383279; }
#ifdef QSTEER_HAVE_FLOAT128
template <>
constexpr __float128 sm_pi<__float128>() { return M_PIq; }
#endif

// Eigenvalues of a symmetric row-major N x N matrix by cyclic Jacobi sweeps,
// returned ascending.  Sized for the tiny matrices used here (N <= 8).
template <class S, std::size_t N>
std::array<S, N> sym_eigenvalues(std::array<S, N * N> a) {
  const S eps = sm_eps<S>();
  for (int sweep = 0; sweep < 100; ++sweep) {
    S off = S(0);
    S diag = S(0);
    for (std::size_t p = 0; p < N; ++p) {
      diag += sm_abs(a[p * N + p]);
      for (std::size_t q = p + 1; q < N; ++q) off += sm_abs(a[p * N + q]);
    }
    if (off <= eps * (diag + off)) break;
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const S apq = a[p * N + q];
        if (sm_abs(apq) == S(0)) continue;
        const S theta = (a[q * N + q] - a[p * N + p]) / (S(2) * apq);
        S t;
        if (sm_abs(theta) > S(1) / sm_sqrt(eps)) {
          t = S(1) / (S(2) * theta);  // avoids theta*theta overflow
        } else {
          const S sign = theta >= S(0) ? S(1) : S(-1);
          t = sign / (sm_abs(theta) + sm_sqrt(theta * theta + S(1)));
        }
        const S c = S(1) / sm_sqrt(t * t + S(1));
        const S s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const S akp = a[k * N + p];
          const S akq = a[k * N + q];
          a[k * N + p] = c * akp - s * akq;
          a[k * N + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const S apk = a[p * N + k];
          const S aqk = a[q * N + k];
          a[p * N + k] = c * apk - s * aqk;
          a[q * N + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::array<S, N> ev{};
  for (std::size_t i = 0; i < N; ++i) ev[i] = a[i * N + i];
  for (std::size_t i = 1; i < N; ++i) {  // insertion sort: N is tiny
    const S v = ev[i];
    std::size_t j = i;
    for (; j > 0 && v < ev[j - 1]; --j) ev[j] = ev[j - 1];
    ev[j] = v;
  }
  return ev;
}

template <class S, std::size_t N>
S sym_min_eigenvalue(const std::array<S, N * N>& a) {
  return sym_eigenvalues<S, N>(a)[0];
}

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0; returns the root count
// (0 to 3) with roots unordered.  Degenerate leading coefficients fall
// through to the quadratic and linear cases.
template <class S>
int solve_cubic_real(S c3, S c2, S c1, S c0, std::array<S, 3>& roots) {
  const S eps = sm_eps<S>();
  const S scale = sm_max(sm_max(sm_abs(c3), sm_abs(c2)), sm_max(sm_abs(c1), sm_abs(c0)));
  if (scale == S(0)) return 0;
  if (sm_abs(c3) <= eps * scale) {
    if (sm_abs(c2) <= eps * scale) {
      if (sm_abs(c1) <= eps * scale) return 0;
      roots[0] = -c0 / c1;
      return 1;
    }
    const S disc = c1 * c1 - S(4) * c2 * c0;
    if (disc < S(0)) return 0;
    const S sq = sm_sqrt(disc);
    const S qq = -(c1 + (c1 >= S(0) ? sq : -sq)) / S(2);
    if (qq == S(0)) {  // c1 == 0 and disc == 0, so c0 == 0 as well
      roots[0] = S(0);
      return 1;
    }
    roots[0] = qq / c2;
    roots[1] = c0 / qq;
    return 2;
  }
  const S b = c2 / c3;
  const S c = c1 / c3;
  const S d = c0 / c3;
  const S p = c - b * b / S(3);
  const S q = S(2) * b * b * b / S(27) - b * c / S(3) + d;
  const S shift = -b / S(3);
  int count = 0;
  const S disc = q * q / S(4) + p * p * p / S(27);
  if (disc > S(0)) {
    const S sq = sm_sqrt(disc);
    const S mag = sm_abs(q) / S(2) + sq;
    const S big = sm_cbrt(mag);
    const S a1 = q >= S(0) ? -big : big;  // the non-cancelling Cardano branch
    const S t = (a1 == S(0)) ? S(0) : a1 - p / (S(3) * a1);
    roots[0] = t + shift;
    count = 1;
  } else if (p == S(0)) {
    roots[0] = shift;  // triple root
    count = 1;
  } else {
    const S m = S(2) * sm_sqrt(-p / S(3));
    S arg = S(3) * q / (p * m);
    if (arg > S(1)) arg = S(1);
    if (arg < S(-1)) arg = S(-1);
    const S phi = sm_acos(arg) / S(3);
    const S twopi3 = S(2) * sm_pi<S>() / S(3);
    roots[0] = m * sm_cos(phi) + shift;
    roots[1] = m * sm_cos(phi - twopi3) + shift;
    roots[2] = m * sm_cos(phi - S(2) * twopi3) + shift;
    count = 3;
  }
  for (int i = 0; i < count; ++i) {  // one Newton polish per root
    const S x = roots[i];
    const S f = ((c3 * x + c2) * x + c1) * x + c0;
    const S df = (S(3) * c3 * x + S(2) * c2) * x + c1;
    if (sm_abs(df) > S(0)) {
      const S step = f / df;
      if (sm_finite(step)) roots[i] = x - step;
    }
  }
  return count;
}

// Solves the N x N system a x = b by Gaussian elimination with partial
// pivoting; returns false when a pivot vanishes.
template <class S, std::size_t N>
bool solve_linear(std::array<S, N * N> a, std::array<S, N> b, std::array<S, N>& x) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < N; ++row)
      if (sm_abs(a[row * N + col]) > sm_abs(a[piv * N + col])) piv = row;
    if (sm_abs(a[piv * N + col]) == S(0)) return false;
    if (piv != col) {
      for (std::size_t k = col; k < N; ++k) {
        const S tmp = a[col * N + k];
        a[col * N + k] = a[piv * N + k];
        a[piv * N + k] = tmp;
      }
      const S tmp = b[col];
      b[col] = b[piv];
      b[piv] = tmp;
    }
    for (std::size_t row = col + 1; row < N; ++row) {
      const S f = a[row * N + col] / a[col * N + col];
      if (f == S(0)) continue;
      for (std::size_t k = col; k < N; ++k) a[row * N + k] -= f * a[col * N + k];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = N; i-- > 0;) {
    S acc = b[i];
    for (std::size_t k = i + 1; k < N; ++k) acc -= a[i * N + k] * x[k];
    x[i] = acc / a[i * N + i];
  }
  return true;
}

}  // namespace qsteer::detail
