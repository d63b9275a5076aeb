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

// Product-integration rules for integrals of the form
//   int_0^1 exp(-z (1 - x)) p(x) dx
// with p a cubic through four equispaced samples.

#ifndef HONESTY_QUADRATURE_HPP
#define HONESTY_QUADRATURE_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace honesty {

struct GaussRule {
  std::vector<double> x; // nodes on [0, 1]
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule mapped to [0, 1].
const GaussRule &gauss_legendre(std::size_t n);

/// I_m(z) = int_0^1 exp(-z (1 - x)) x^m dx for m = 0..3.
std::array<double, 4> exp_moments(double z);

/// Position of the integration interval inside its 4-point stencil.
enum class Stencil { Left, Interior, Right };

/// Offset of the first stencil node relative to the interval start.
inline int stencil_start(Stencil s) {
  return s == Stencil::Left ? 0 : (s == Stencil::Interior ? -1 : -2);
}

/// Weights w_j with int_0^1 exp(-z (1 - x)) p(x) dx = sum_j w_j p(x_j)
/// for every cubic p, where x_j = stencil_start + j.
std::array<double, 4> product_weights(Stencil s, double z);

} // namespace honesty

#endif // HONESTY_QUADRATURE_HPP
