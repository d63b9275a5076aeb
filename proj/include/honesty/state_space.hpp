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

#ifndef HONESTY_STATE_SPACE_HPP
#define HONESTY_STATE_SPACE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace honesty {

/// Closed interval [lo, hi] known to contain a quantity that can only be
/// approximated. The width is the certified error.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;

  Bracket() = default;
  Bracket(double lo_, double hi_);
  static Bracket point(double x) { return {x, x}; }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
  bool overlaps(const Bracket &o, double slack = 0.0) const {
    return lo <= o.hi + slack && o.lo <= hi + slack;
  }
  bool operator==(const Bracket &) const = default;
};

Bracket operator+(const Bracket &a, const Bracket &b);
Bracket operator-(const Bracket &a, const Bracket &b);
Bracket operator*(double s, const Bracket &a);

/// Entries smaller than this are moved into the tail bound.
inline constexpr double kFlushThreshold = 1e-300;

/// Finitely supported nonnegative sequence in l1 plus a bound on the mass
/// of every coordinate outside the stored support.
///
/// Stored entries are exact: the represented element agrees with them on
/// the support and carries at most `tail_bound()` mass elsewhere.
class PosSeq {
public:
  struct Entry {
    std::size_t index;
    double value;
    bool operator==(const Entry &) const = default;
  };

  PosSeq() = default;

  /// Sorts, merges duplicate indices, drops zeros and flushes tiny values
  /// into the tail. Throws std::invalid_argument on negative or non-finite
  /// input.
  static PosSeq from_entries(std::vector<Entry> entries, double tail_bound = 0.0);
  static PosSeq from_dense(std::size_t offset, std::span<const double> values,
                           double tail_bound = 0.0);
  static PosSeq basis(std::size_t k, double scale = 1.0);

  const std::vector<Entry> &entries() const { return entries_; }
  double tail_bound() const { return tail_; }
  bool empty() const { return entries_.empty(); }
  bool is_zero() const { return entries_.empty() && tail_ == 0.0; }
  std::size_t support_size() const { return entries_.size(); }
  std::optional<std::size_t> min_index() const;
  std::optional<std::size_t> max_index() const;

  double at(std::size_t k) const;
  /// Compensated sum of the stored entries.
  double sum() const;

  PosSeq with_tail(double tail_bound) const;
  /// Dense copy of coordinates [offset, offset + size).
  std::vector<double> dense(std::size_t offset, std::size_t size) const;

  bool operator==(const PosSeq &) const = default;

private:
  std::vector<Entry> entries_;
  double tail_ = 0.0;
};

/// u = plus - minus. `canonical()` gives disjoint supports.
struct SignedSeq {
  PosSeq plus;
  PosSeq minus;

  SignedSeq canonical() const;
  static SignedSeq difference(const PosSeq &a, const PosSeq &b) {
    return SignedSeq{a, b}.canonical();
  }
  /// l1 norm of the canonical form, ignoring tail bounds.
  double norm() const;
};

enum class Tri { False, True, Unknown };
std::string to_string(Tri t);

/// <Psi, u> on the cone: [sum entries, sum entries + tail].
Bracket mass(const PosSeq &u);
Bracket pair_psi(const SignedSeq &u);

/// Certified coordinatewise comparison u <= v.
Tri leq(const PosSeq &u, const PosSeq &v);

/// alpha * u + v for alpha >= 0.
PosSeq axpy(double alpha, const PosSeq &u, const PosSeq &v);
PosSeq scale(double alpha, const PosSeq &u);

/// Neumaier summation, used wherever masses are accumulated.
double compensated_sum(std::span<const double> xs);

} // namespace honesty

#endif // HONESTY_STATE_SPACE_HPP
