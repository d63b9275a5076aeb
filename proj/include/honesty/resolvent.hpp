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

#ifndef HONESTY_RESOLVENT_HPP
#define HONESTY_RESOLVENT_HPP

#include <cstddef>
#include <vector>

#include "honesty/model.hpp"
#include "honesty/state_space.hpp"

namespace honesty {

/// Partial sum of a positive series. The exact sum dominates `value`
/// entrywise and its mass lies in `mass()`.
struct SeriesResult {
  PosSeq value;
  double defect = 0.0;
  std::size_t terms_used = 0;
  /// defect <= requested tol.
  bool converged = false;

  Bracket mass() const {
    double s = value.sum();
    return {s, s + value.tail_bound() + defect};
  }
};

inline constexpr std::size_t kDefaultMaxTerms = std::size_t{1} << 20;

/// (lambda - G)^{-1} u as sum_n (lambda - A)^{-1} J^n u.
SeriesResult resolvent_G(const ModelSpec &m, double lambda, const PosSeq &u,
                         double tol = 1e-8, std::size_t max_terms = kDefaultMaxTerms);

/// (lambda - G_r)^{-1} u = sum_n r^n (lambda - A)^{-1} J^n u, 0 <= r < 1.
SeriesResult resolvent_Gr(const ModelSpec &m, double lambda, double r, const PosSeq &u,
                          double tol = 1e-8, std::size_t max_terms = kDefaultMaxTerms);

struct TruncationParams {
  std::size_t n_start = 64;
  std::size_t n_max = std::size_t{1} << 20;
  double tol = 1e-8;
  /// Rough flop budget for one ladder level; the ladder stops before a
  /// level that would exceed it.
  double max_work = 3e9;
};

struct TruncationLadder {
  std::vector<std::size_t> levels;
  /// Per level, one approximation of V(t)u per requested time.
  std::vector<std::vector<PosSeq>> values;
  /// Entrywise nondecreasing along levels, up to rounding.
  bool monotone = true;
};

/// Result of the truncated uniformization at one time t.
struct SemigroupResult {
  double t = 0.0;
  /// Lower bound for V(t)u, entrywise.
  PosSeq value;
  /// ||V(t)u||: lo is certified, hi uses the extrapolated truncation gap
  /// when it is smaller than the certified one.
  Bracket mass;
  /// Certified upper bound: ||value|| + mass that crossed the boundary.
  double certified_hi = 0.0;
  /// Lower bound for int_0^t V(s)u ds.
  PosSeq integral;
  Bracket integral_mass;
  /// Mass sent past the truncation during [0, t] at the final level.
  double boundary_flux = 0.0;
  std::size_t level = 0;
  /// The ladder met `tol`; false means N_max or the work budget stopped it.
  bool converged = false;
};

struct Evolution {
  std::vector<SemigroupResult> at;
  TruncationLadder ladder;
};

/// V(t)u and int_0^t V(s)u ds for every t in `times` (any order) from
/// one ladder of truncations e^{t(A_N + B_N)}.
Evolution evolve(const ModelSpec &m, const std::vector<double> &times, const PosSeq &u,
                 const TruncationParams &params = {});

SemigroupResult semigroup_V(const ModelSpec &m, double t, const PosSeq &u,
                            const TruncationParams &params = {});

/// int_0^t V(s)u ds; see `semigroup_V` for the mass bracket.
PosSeq integrate_V(const ModelSpec &m, double t, const PosSeq &u,
                   const TruncationParams &params = {});

} // namespace honesty

#endif // HONESTY_RESOLVENT_HPP
