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

#include "honesty/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace honesty {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_value(double c, double p, std::size_t k) {
  double x = static_cast<double>(k) + 1.0;
  if (p == 0.0)
    return c;
  if (p == 1.0)
    return c * x;
  if (p == 2.0)
    return c * x * x;
  if (p == 3.0)
    return c * x * x * x;
  return c * std::pow(x, p);
}

void check_coefficient(double c, double p) {
  if (!(c >= 0.0) || !std::isfinite(c) || !(p >= 0.0) || !std::isfinite(p))
    throw std::invalid_argument("RateFn: need finite c >= 0 and p >= 0");
}

} // namespace

RateFn RateFn::power(double c, double p) {
  check_coefficient(c, p);
  RateFn r;
  r.c_ = c;
  r.p_ = p;
  return r;
}

RateFn RateFn::table(std::vector<double> values, double tail_c, double tail_p) {
  check_coefficient(tail_c, tail_p);
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("RateFn: table values must be finite and >= 0");
  RateFn r;
  r.values_ = std::move(values);
  r.c_ = tail_c;
  r.p_ = tail_p;
  return r;
}

double RateFn::operator()(std::size_t k) const {
  if (k < values_.size())
    return values_[k];
  return power_value(c_, p_, k);
}

bool RateFn::is_zero() const {
  return c_ == 0.0 &&
         std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

bool RateFn::is_positive() const {
  return c_ > 0.0 &&
         std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

double RateFn::sup() const {
  double tail = (p_ > 0.0 && c_ > 0.0) ? kInf : c_;
  double s = tail;
  for (double v : values_)
    s = std::max(s, v);
  return s;
}

double power_sum_tail(double coef, double e, std::size_t K) {
  if (coef == 0.0)
    return 0.0;
  if (e <= 1.0)
    return kInf;
  double x = static_cast<double>(K) + 1.0;
  return coef * std::pow(x, -e) + coef * std::pow(x, 1.0 - e) / (e - 1.0);
}

double RateFn::reciprocal_tail_sum(std::size_t K) const {
  double s = 0.0;
  for (std::size_t k = K; k < values_.size(); ++k) {
    if (values_[k] <= 0.0)
      return kInf;
    s += 1.0 / values_[k];
  }
  if (c_ <= 0.0)
    return kInf;
  return s + power_sum_tail(1.0 / c_, p_, std::max(K, values_.size()));
}

ModelSpec::ModelSpec(std::string name, RateFn a, Kernel kernel, bool conservative)
    : name_(std::move(name)), a_(std::move(a)), kernel_(std::move(kernel)),
      conservative_(conservative) {
  std::visit(
      [&](const auto &kern) {
        using K = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<K, PureBirthKernel>) {
          up_ = 1;
        } else if constexpr (std::is_same_v<K, BirthDeathKernel>) {
          up_ = kern.b.is_zero() ? 0 : 1;
          down_ = kern.d.is_zero() ? 0 : 1;
          bool positive = kern.b.is_positive() || kern.kill.is_positive() ||
                          (kern.d.is_positive() && kern.b(0) + kern.kill(0) > 0);
          if (!positive)
            throw std::invalid_argument("birth_death: total rate must be positive");
        } else if constexpr (std::is_same_v<K, TableKernel>) {
          for (const auto &[k, col] : kern.columns) {
            for (const auto &tr : col) {
              if (!(tr.rate >= 0.0) || !std::isfinite(tr.rate))
                throw std::invalid_argument("table: rates must be finite and >= 0");
              if (tr.target > k)
                up_ = std::max(up_, tr.target - k);
              else if (tr.target < k)
                down_ = std::max(down_, k - tr.target);
              else if (tr.rate > 0)
                has_self_loop_ = true;
            }
          }
          if (kern.tail == TableTail::PureBirth)
            up_ = std::max<std::size_t>(up_, 1);
        }
      },
      kernel_);
  if (!std::holds_alternative<BirthDeathKernel>(kernel_) && !a_.is_positive())
    throw std::invalid_argument("model: diagonal rates must be strictly positive");
}

ModelSpec ModelSpec::zero(std::string name, RateFn a, bool conservative) {
  return ModelSpec(std::move(name), std::move(a), ZeroKernel{}, conservative);
}

ModelSpec ModelSpec::pure_birth(std::string name, RateFn a) {
  return ModelSpec(std::move(name), std::move(a), PureBirthKernel{}, true);
}

ModelSpec ModelSpec::birth_death(std::string name, RateFn b, RateFn d, RateFn kill,
                                 bool conservative) {
  return ModelSpec(std::move(name), RateFn::constant(0.0),
                   BirthDeathKernel{std::move(b), std::move(d), std::move(kill)},
                   conservative);
}

ModelSpec ModelSpec::table(std::string name, RateFn a,
                           std::map<std::size_t, std::vector<Transition>> columns,
                           TableTail tail, bool conservative) {
  return ModelSpec(std::move(name), std::move(a),
                   TableKernel{std::move(columns), tail}, conservative);
}

double ModelSpec::rate(std::size_t k) const {
  if (const auto *bd = std::get_if<BirthDeathKernel>(&kernel_))
    return bd->b(k) + (k > 0 ? bd->d(k) : 0.0) + bd->kill(k);
  return a_(k);
}

double ModelSpec::rate_sup() const {
  if (const auto *bd = std::get_if<BirthDeathKernel>(&kernel_))
    return bd->b.sup() + bd->d.sup() + bd->kill.sup();
  return a_.sup();
}

double ModelSpec::column_sum(std::size_t k) const {
  double s = 0.0;
  for_each_transition(k, [&](std::size_t, double r) { s += r; });
  return s;
}

double ModelSpec::deficit(std::size_t k) const {
  if (const auto *bd = std::get_if<BirthDeathKernel>(&kernel_))
    return bd->kill(k);
  if (std::holds_alternative<PureBirthKernel>(kernel_))
    return 0.0;
  return rate(k) - column_sum(k);
}

bool ModelSpec::trivial_kernel() const {
  if (std::holds_alternative<ZeroKernel>(kernel_))
    return true;
  if (const auto *t = std::get_if<TableKernel>(&kernel_)) {
    if (t->tail != TableTail::None)
      return false;
    for (const auto &[k, col] : t->columns)
      for (const auto &tr : col)
        if (tr.rate > 0)
          return false;
    return true;
  }
  return false;
}

bool ModelSpec::structurally_conservative() const {
  if (std::holds_alternative<PureBirthKernel>(kernel_))
    return true;
  if (const auto *bd = std::get_if<BirthDeathKernel>(&kernel_))
    return bd->kill.is_zero();
  return false;
}

double ModelSpec::log_ratio_tail(double lambda, std::size_t K) const {
  if (!upward_only())
    return kInf;
  // log(1/r_k) = log(1 + (lambda + deficit_k) / s_k) <= (lambda + deficit_k) / s_k
  auto explicit_term = [&](std::size_t k) {
    double s = column_sum(k);
    return s > 0.0 ? (lambda + deficit(k)) / s : kInf;
  };
  return std::visit(
      [&](const auto &kern) -> double {
        using Kt = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<Kt, PureBirthKernel>) {
          return lambda * a_.reciprocal_tail_sum(K);
        } else if constexpr (std::is_same_v<Kt, BirthDeathKernel>) {
          std::size_t L = std::max({kern.b.values().size(), kern.kill.values().size()});
          double s = 0.0;
          for (std::size_t k = K; k < L; ++k)
            s += explicit_term(k);
          std::size_t K2 = std::max(K, L);
          if (kern.b.c() <= 0.0)
            return kInf;
          s += lambda * power_sum_tail(1.0 / kern.b.c(), kern.b.p(), K2);
          s += power_sum_tail(kern.kill.c() / kern.b.c(), kern.b.p() - kern.kill.p(), K2);
          return s;
        } else if constexpr (std::is_same_v<Kt, TableKernel>) {
          if (kern.tail != TableTail::PureBirth)
            return kInf;
          std::size_t last = kern.columns.empty() ? 0 : kern.columns.rbegin()->first + 1;
          std::size_t L = std::max(last, a_.values().size());
          double s = 0.0;
          for (std::size_t k = K; k < L; ++k)
            s += explicit_term(k);
          return s + lambda * a_.reciprocal_tail_sum(std::max(K, L));
        } else {
          return kInf;
        }
      },
      kernel_);
}

double ModelSpec::resolvent_tail(double lambda, std::size_t K) const {
  if (const auto *bd = std::get_if<BirthDeathKernel>(&kernel_)) {
    // a_k >= b_k and a_k >= kill_k
    double s = std::min(bd->b.reciprocal_tail_sum(K), bd->kill.reciprocal_tail_sum(K));
    return s;
  }
  (void)lambda;
  return a_.reciprocal_tail_sum(K);
}

double ModelSpec::explosion_time_tail(std::size_t K) const {
  if (!upward_only())
    return kInf;
  return resolvent_tail(0.0, K);
}

SignedSeq apply_A(const ModelSpec &m, const PosSeq &u) {
  double tail = 0.0;
  if (u.tail_bound() > 0.0) {
    double sup = m.rate_sup();
    if (!std::isfinite(sup))
      throw std::invalid_argument("apply_A: unbounded rates with nonzero tail bound");
    tail = sup * u.tail_bound();
  }
  std::vector<PosSeq::Entry> out;
  out.reserve(u.support_size());
  for (const auto &e : u.entries())
    out.push_back({e.index, m.rate(e.index) * e.value});
  return {PosSeq{}, PosSeq::from_entries(std::move(out), tail)};
}

namespace {

PosSeq apply_B_with_tail(const ModelSpec &m, const PosSeq &u, double tail) {
  std::vector<PosSeq::Entry> out;
  for (const auto &e : u.entries())
    m.for_each_transition(e.index, [&](std::size_t j, double r) {
      out.push_back({j, r * e.value});
    });
  return PosSeq::from_entries(std::move(out), tail);
}

} // namespace

PosSeq apply_B(const ModelSpec &m, const PosSeq &u) {
  double tail = 0.0;
  if (u.tail_bound() > 0.0) {
    double sup = m.rate_sup();
    if (!std::isfinite(sup))
      throw std::invalid_argument("apply_B: unbounded rates with nonzero tail bound");
    tail = sup * u.tail_bound();
  }
  return apply_B_with_tail(m, u, tail);
}

PosSeq apply_resolvent_A(const ModelSpec &m, double lambda, const PosSeq &u) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("apply_resolvent_A: lambda must be > 0");
  std::vector<PosSeq::Entry> out;
  out.reserve(u.support_size());
  for (const auto &e : u.entries())
    out.push_back({e.index, e.value / (lambda + m.rate(e.index))});
  return PosSeq::from_entries(std::move(out), u.tail_bound() / lambda);
}

PosSeq apply_U(const ModelSpec &m, double t, const PosSeq &u) {
  if (!(t >= 0.0))
    throw std::invalid_argument("apply_U: t must be >= 0");
  std::vector<PosSeq::Entry> out;
  out.reserve(u.support_size());
  for (const auto &e : u.entries())
    out.push_back({e.index, std::exp(-m.rate(e.index) * t) * e.value});
  return PosSeq::from_entries(std::move(out), u.tail_bound());
}

PosSeq apply_J(const ModelSpec &m, double lambda, const PosSeq &u) {
  PosSeq r = apply_resolvent_A(m, lambda, u);
  // J is a contraction on the cone, so the tail mass cannot grow.
  return apply_B_with_tail(m, r.with_tail(0.0), u.tail_bound());
}

AuditReport dissipativity_audit(const ModelSpec &m, std::size_t N) {
  AuditReport rep;
  rep.checked_up_to = N;
  auto check = [&](std::size_t k) {
    double a = m.rate(k);
    double d = a - m.column_sum(k);
    double slack = 1e-12 * std::max(1.0, a);
    if (d < -slack)
      rep.violations.push_back(k);
    if (std::abs(d) > slack)
      rep.conservative_observed = false;
    return d;
  };
  rep.deficits.reserve(N + 1);
  for (std::size_t k = 0; k <= N; ++k)
    rep.deficits.push_back(check(k));
  if (const auto *t = std::get_if<TableKernel>(&m.kernel()))
    for (const auto &[k, col] : t->columns)
      if (k > N)
        check(k);
  rep.flag_mismatch = rep.conservative_observed != m.conservative();
  return rep;
}

} // namespace honesty
