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

#ifndef HONESTY_DYSON_PHILLIPS_HPP
#define HONESTY_DYSON_PHILLIPS_HPP

#include <cstddef>
#include <vector>

#include "honesty/model.hpp"
#include "honesty/state_space.hpp"

namespace honesty {

struct QuadParams {
  /// Intervals of the first grid; doubled until the Richardson estimate
  /// drops below `tol`.
  std::size_t m_start = 32;
  std::size_t m_max = std::size_t{1} << 15;
  /// Absolute l1 tolerance per returned quantity.
  double tol = 1e-10;
};

/// A quadrature result with its Richardson error estimate. Negative
/// entries produced by the rule are dropped and their mass added to
/// `error`.
struct QuadResult {
  PosSeq value;
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

/// Dyson-Phillips iterates V_n(s)u sampled on the uniform grid
/// s_i = i T / M, computed by the recursion
///   V_{n+1}(t) = int_0^t U(t - s) B V_n(s) ds
/// with exponential product integration (U is diagonal).
class DPState {
public:
  DPState(const ModelSpec &m, const PosSeq &u, double T, std::size_t M);

  /// Makes levels 0..n available.
  void extend_to(std::size_t n);
  /// Frees the samples of levels below n; only the newest level is needed
  /// to go on extending.
  void release_below(std::size_t n);
  std::size_t levels() const { return levels_.size(); }

  std::size_t intervals() const { return M_; }
  double step() const { return h_; }
  double horizon() const { return T_; }

  /// Raw (possibly slightly negative) samples on the level window.
  struct Dense {
    std::size_t offset = 0;
    std::vector<double> v;
  };
  /// V_n(s_i)u.
  Dense term(std::size_t n, std::size_t i) const;
  /// int_0^{s_i} V_n(s)u ds.
  Dense integral(std::size_t n, std::size_t i) const;
  /// int_0^{s_i} exp(-lambda s) V_n(s)u ds.
  Dense weighted_integral(std::size_t n, std::size_t i, double lambda) const;

private:
  struct Level {
    std::size_t lo = 0;
    std::size_t width = 0;
    std::vector<double> data; // (M + 1) rows of `width`
    bool released = false;
    double at(std::size_t i, std::size_t j) const { return data[i * width + j]; }
  };

  const ModelSpec &m_;
  double T_, h_;
  std::size_t M_;
  std::vector<Level> levels_;
};

QuadResult dp_term(const ModelSpec &m, std::size_t n, double t, const PosSeq &u,
                   const QuadParams &q = {});
QuadResult dp_partial_sum(const ModelSpec &m, std::size_t K, double t, const PosSeq &u,
                          const QuadParams &q = {});

struct ConvolutionCheck {
  /// ||V_n(t+s)u - sum_k V_k(t) V_{n-k}(s)u||
  double residual = 0.0;
  /// Combined quadrature error of both sides.
  double error = 0.0;
};
/// Requires n <= 4.
ConvolutionCheck dp_convolution_residual(const ModelSpec &m, std::size_t n, double t, double s,
                                         const PosSeq &u, const QuadParams &q = {});

/// B int_0^t V_n(s)u ds.
QuadResult dp_B_integral(const ModelSpec &m, std::size_t n, double t, const PosSeq &u,
                         const QuadParams &q = {});
/// int_0^t V_n(s)u ds.
QuadResult dp_integral(const ModelSpec &m, std::size_t n, double t, const PosSeq &u,
                       const QuadParams &q = {});

/// int_0^infinity exp(-lambda s) V_n(s)u ds. The horizon is cut where
/// exp(-lambda T) ||u|| / lambda <= tol / 10; that tail is included in
/// `error`.
QuadResult dp_laplace(const ModelSpec &m, std::size_t n, double lambda, const PosSeq &u,
                      const QuadParams &q = {});

struct UniformTail {
  /// exp(-lambda t) ||u|| + ||B int_t^infinity exp(-lambda s) U(s)u ds||,
  /// the same for every n.
  double bound = 0.0;
  /// ||B int_t^infinity exp(-lambda s) V_n(s)u ds|| for n = 0..n_max,
  /// with quadrature errors.
  std::vector<double> computed;
  std::vector<double> errors;
  bool all_below = true;
};
UniformTail dp_uniform_tail(const ModelSpec &m, std::size_t n_max, double lambda, double t,
                            const PosSeq &u, const QuadParams &q = {});

/// Sums of the Dyson-Phillips series over n at one time t.
struct DPSeries {
  /// Levels used; the series is cut when the in-flight mass
  /// ||B int_0^t V_K(s)u ds|| falls below `tol`.
  std::size_t K = 0;
  /// sum_n a_frak(int_0^t V_n(s)u ds)
  double deficit_sum = 0.0;
  /// ||B int_0^t V_K(s)u ds||, bounds the omitted part of `deficit_sum`.
  double in_flight = 0.0;
  /// sum_{n <= K} ||V_n(t)u||
  double mass_sum = 0.0;
  double error = 0.0;
  bool converged = false;
};
DPSeries dp_series(const ModelSpec &m, double t, const PosSeq &u, std::size_t max_levels = 4096,
                   const QuadParams &q = {});

} // namespace honesty

#endif // HONESTY_DYSON_PHILLIPS_HPP
