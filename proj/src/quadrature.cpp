/* Copyright 2026 The honesty-lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
======================================================================== */

#include "honesty/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace honesty {

namespace {

GaussRule make_rule(std::size_t n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    r.x[i] = 0.5 * (1.0 - x);
    r.w[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

// Monomial coefficients of the Lagrange basis on nodes s, s+1, s+2, s+3.
std::array<std::array<double, 4>, 4> lagrange_coefficients(int s) {
  std::array<std::array<double, 4>, 4> c{};
  for (int j = 0; j < 4; ++j) {
    std::array<double, 4> poly{1.0, 0.0, 0.0, 0.0};
    double denom = 1.0;
    for (int i = 0; i < 4; ++i) {
      if (i == j)
        continue;
      double xi = s + i;
      std::array<double, 4> next{};
      for (int d = 0; d < 3; ++d) {
        next[d + 1] += poly[d];
        next[d] -= xi * poly[d];
      }
      poly = next;
      denom *= static_cast<double>(j - i);
    }
    for (int d = 0; d < 4; ++d)
      c[j][d] = poly[d] / denom;
  }
  return c;
}

} // namespace

const GaussRule &gauss_legendre(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

std::array<double, 4> exp_moments(double z) {
  std::array<double, 4> I{};
  if (z == 0.0) {
    for (int m = 0; m < 4; ++m)
      I[m] = 1.0 / (m + 1);
    return I;
  }
  if (z > 5.0) {
    // forward recurrence, stable once z exceeds the moment order
    I[0] = -std::expm1(-z) / z;
    for (int m = 1; m < 4; ++m)
      I[m] = (1.0 - m * I[m - 1]) / z;
    return I;
  }
  const GaussRule &g = gauss_legendre(std::abs(z) <= 5.0 ? 32 : 64);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    double x = g.x[i];
    double e = g.w[i] * std::exp(-z * (1.0 - x));
    I[0] += e;
    I[1] += e * x;
    I[2] += e * x * x;
    I[3] += e * x * x * x;
  }
  return I;
}

std::array<double, 4> product_weights(Stencil s, double z) {
  static const auto left = lagrange_coefficients(0);
  static const auto interior = lagrange_coefficients(-1);
  static const auto right = lagrange_coefficients(-2);
  const auto &c = s == Stencil::Left ? left : (s == Stencil::Interior ? interior : right);
  auto I = exp_moments(z);
  std::array<double, 4> w{};
  for (int j = 0; j < 4; ++j)
    for (int d = 0; d < 4; ++d)
      w[j] += c[j][d] * I[d];
  return w;
}

} // namespace honesty
