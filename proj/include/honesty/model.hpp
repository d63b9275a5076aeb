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

#ifndef HONESTY_MODEL_HPP
#define HONESTY_MODEL_HPP

#include <cstddef>
#include <map>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "honesty/state_space.hpp"

namespace honesty {

/// Nonnegative coefficient sequence: c * (k+1)^p, or an explicit table
/// followed by a power rule.
class RateFn {
public:
  static RateFn power(double c, double p);
  static RateFn constant(double c) { return power(c, 0.0); }
  static RateFn table(std::vector<double> values, double tail_c, double tail_p);

  double operator()(std::size_t k) const;

  bool is_table() const { return !values_.empty(); }
  const std::vector<double> &values() const { return values_; }
  double c() const { return c_; }
  double p() const { return p_; }

  /// Identically zero.
  bool is_zero() const;
  /// Strictly positive at every index.
  bool is_positive() const;
  /// sup_k value, +inf when the power tail grows.
  double sup() const;
  /// Upper bound on sum_{k >= K} 1 / value(k); +inf when not summable.
  double reciprocal_tail_sum(std::size_t K) const;

  bool operator==(const RateFn &) const = default;

private:
  std::vector<double> values_;
  double c_ = 0.0;
  double p_ = 0.0;
};

/// Upper bound on sum_{k >= K} coef * (k+1)^(-e); +inf when e <= 1.
double power_sum_tail(double coef, double e, std::size_t K);

struct Transition {
  std::size_t target;
  double rate;
  bool operator==(const Transition &) const = default;
};

struct ZeroKernel {
  bool operator==(const ZeroKernel &) const = default;
};
/// k -> k+1 at rate a_k.
struct PureBirthKernel {
  bool operator==(const PureBirthKernel &) const = default;
};
/// k -> k+1 at rate b_k, k -> k-1 at rate d_k (k >= 1), killing at kill_k.
struct BirthDeathKernel {
  RateFn b, d, kill;
  bool operator==(const BirthDeathKernel &) const = default;
};
enum class TableTail { None, PureBirth };
struct TableKernel {
  std::map<std::size_t, std::vector<Transition>> columns;
  TableTail tail = TableTail::None;
  bool operator==(const TableKernel &) const = default;
};

using Kernel =
    std::variant<ZeroKernel, PureBirthKernel, BirthDeathKernel, TableKernel>;

/// Generator pair (A, B): A = -diag(a_k), B given column by column.
class ModelSpec {
public:
  ModelSpec(std::string name, RateFn a, Kernel kernel, bool conservative);

  static ModelSpec zero(std::string name, RateFn a, bool conservative = false);
  static ModelSpec pure_birth(std::string name, RateFn a);
  /// The diagonal is derived: a_k = b_k + d_k [k >= 1] + kill_k.
  static ModelSpec birth_death(std::string name, RateFn b, RateFn d,
                               RateFn kill, bool conservative);
  static ModelSpec table(std::string name, RateFn a,
                         std::map<std::size_t, std::vector<Transition>> columns,
                         TableTail tail, bool conservative);

  const std::string &name() const { return name_; }
  const RateFn &diagonal() const { return a_; }
  const Kernel &kernel() const { return kernel_; }
  bool conservative() const { return conservative_; }

  double rate(std::size_t k) const;

  template <class F> void for_each_transition(std::size_t k, F &&f) const {
    std::visit(
        [&](const auto &kern) {
          using K = std::decay_t<decltype(kern)>;
          if constexpr (std::is_same_v<K, PureBirthKernel>) {
            f(k + 1, a_(k));
          } else if constexpr (std::is_same_v<K, BirthDeathKernel>) {
            double b = kern.b(k);
            if (b > 0)
              f(k + 1, b);
            if (k > 0) {
              double d = kern.d(k);
              if (d > 0)
                f(k - 1, d);
            }
          } else if constexpr (std::is_same_v<K, TableKernel>) {
            auto it = kern.columns.find(k);
            if (it != kern.columns.end()) {
              for (const auto &tr : it->second)
                if (tr.rate > 0)
                  f(tr.target, tr.rate);
            } else if (kern.tail == TableTail::PureBirth) {
              f(k + 1, a_(k));
            }
          }
        },
        kernel_);
  }

  /// Total transition rate out of column k.
  double column_sum(std::size_t k) const;
  /// a_k minus the column sum; negative means the column is not dissipative.
  double deficit(std::size_t k) const;

  std::size_t up_stride() const { return up_; }
  std::size_t down_stride() const { return down_; }
  /// Every transition strictly increases the index.
  bool upward_only() const { return down_ == 0 && !has_self_loop_; }
  /// The kernel is identically zero.
  bool trivial_kernel() const;
  /// Every column has zero deficit, read off the kernel structure.
  bool structurally_conservative() const;

  /// sup_k a_k, +inf for growing rates.
  double rate_sup() const;

  /// For upward-only models: upper bound on sum_{k >= K} log(1/r_k) with
  /// r_k = column_sum(k) / (lambda + a_k). +inf when no bound is available.
  double log_ratio_tail(double lambda, std::size_t K) const;
  /// Upper bound on sum_{k >= K} 1 / (lambda + a_k).
  double resolvent_tail(double lambda, std::size_t K) const;
  /// For upward-only models: upper bound on sum_{k >= K} 1 / a_k along any
  /// path, the expected remaining time to explosion from state K.
  double explosion_time_tail(std::size_t K) const;

private:
  std::string name_;
  RateFn a_;
  Kernel kernel_;
  bool conservative_;
  std::size_t up_ = 0;
  std::size_t down_ = 0;
  bool has_self_loop_ = false;
};

SignedSeq apply_A(const ModelSpec &m, const PosSeq &u);
PosSeq apply_B(const ModelSpec &m, const PosSeq &u);
PosSeq apply_resolvent_A(const ModelSpec &m, double lambda, const PosSeq &u);
PosSeq apply_U(const ModelSpec &m, double t, const PosSeq &u);
PosSeq apply_J(const ModelSpec &m, double lambda, const PosSeq &u);

struct AuditReport {
  std::size_t checked_up_to = 0;
  std::vector<double> deficits;
  std::vector<std::size_t> violations;
  bool conservative_observed = true;
  bool flag_mismatch = false;
  bool ok() const { return violations.empty() && !flag_mismatch; }
};

/// Column deficits a_k - sum of rates for k <= N, plus every explicitly
/// listed table column.
AuditReport dissipativity_audit(const ModelSpec &m, std::size_t N);

} // namespace honesty

#endif // HONESTY_MODEL_HPP
