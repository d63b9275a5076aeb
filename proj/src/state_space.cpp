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

#include "honesty/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace honesty {

Bracket::Bracket(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo <= hi))
    throw std::invalid_argument("Bracket: lo > hi");
}

Bracket operator+(const Bracket &a, const Bracket &b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

Bracket operator-(const Bracket &a, const Bracket &b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

Bracket operator*(double s, const Bracket &a) {
  return s >= 0 ? Bracket{s * a.lo, s * a.hi} : Bracket{s * a.hi, s * a.lo};
}

double compensated_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

PosSeq PosSeq::from_entries(std::vector<Entry> entries, double tail_bound) {
  if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound))
    throw std::invalid_argument("PosSeq: tail bound must be finite and >= 0");
  std::sort(entries.begin(), entries.end(),
            [](const Entry &a, const Entry &b) { return a.index < b.index; });
  PosSeq out;
  out.tail_ = tail_bound;
  out.entries_.reserve(entries.size());
  for (const auto &e : entries) {
    if (!(e.value >= 0.0) || !std::isfinite(e.value))
      throw std::invalid_argument("PosSeq: entries must be finite and >= 0");
    if (!out.entries_.empty() && out.entries_.back().index == e.index)
      out.entries_.back().value += e.value;
    else
      out.entries_.push_back(e);
  }
  std::erase_if(out.entries_, [&out](const Entry &e) {
    if (e.value == 0.0)
      return true;
    if (e.value < kFlushThreshold) {
      out.tail_ += e.value;
      return true;
    }
    return false;
  });
  return out;
}

PosSeq PosSeq::from_dense(std::size_t offset, std::span<const double> values,
                          double tail_bound) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0)
      entries.push_back({offset + i, values[i]});
  return from_entries(std::move(entries), tail_bound);
}

PosSeq PosSeq::basis(std::size_t k, double scale) {
  return from_entries({{k, scale}});
}

std::optional<std::size_t> PosSeq::min_index() const {
  if (entries_.empty())
    return std::nullopt;
  return entries_.front().index;
}

std::optional<std::size_t> PosSeq::max_index() const {
  if (entries_.empty())
    return std::nullopt;
  return entries_.back().index;
}

double PosSeq::at(std::size_t k) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), k,
      [](const Entry &e, std::size_t idx) { return e.index < idx; });
  return (it != entries_.end() && it->index == k) ? it->value : 0.0;
}

double PosSeq::sum() const {
  std::vector<double> xs;
  xs.reserve(entries_.size());
  for (const auto &e : entries_)
    xs.push_back(e.value);
  return compensated_sum(xs);
}

PosSeq PosSeq::with_tail(double tail_bound) const {
  if (!(tail_bound >= 0.0))
    throw std::invalid_argument("PosSeq: negative tail bound");
  PosSeq out = *this;
  out.tail_ = tail_bound;
  return out;
}

std::vector<double> PosSeq::dense(std::size_t offset, std::size_t size) const {
  std::vector<double> out(size, 0.0);
  for (const auto &e : entries_)
    if (e.index >= offset && e.index < offset + size)
      out[e.index - offset] = e.value;
  return out;
}

SignedSeq SignedSeq::canonical() const {
  std::vector<PosSeq::Entry> p, m;
  const auto &a = plus.entries();
  const auto &b = minus.entries();
  std::size_t i = 0, j = 0;
  auto push = [&](std::size_t k, double net) {
    if (net > 0)
      p.push_back({k, net});
    else if (net < 0)
      m.push_back({k, -net});
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      p.push_back(a[i++]);
    } else if (i == a.size() || b[j].index < a[i].index) {
      m.push_back(b[j++]);
    } else {
      push(a[i].index, a[i].value - b[j].value);
      ++i;
      ++j;
    }
  }
  return {PosSeq::from_entries(std::move(p), plus.tail_bound()),
          PosSeq::from_entries(std::move(m), minus.tail_bound())};
}

double SignedSeq::norm() const {
  SignedSeq c = canonical();
  return c.plus.sum() + c.minus.sum();
}

std::string to_string(Tri t) {
  switch (t) {
  case Tri::True:
    return "true";
  case Tri::False:
    return "false";
  default:
    return "unknown";
  }
}

Bracket mass(const PosSeq &u) {
  double s = u.sum();
  return {s, s + u.tail_bound()};
}

Bracket pair_psi(const SignedSeq &u) {
  SignedSeq c = u.canonical();
  return mass(c.plus) - mass(c.minus);
}

// Tail mass lives off the stored support, so a stored coordinate is exact
// and an unstored one lies in [0, tail_bound].
Tri leq(const PosSeq &u, const PosSeq &v) {
  bool unknown = u.tail_bound() > 0.0;
  const auto &a = u.entries();
  const auto &b = v.entries();
  std::size_t j = 0;
  for (const auto &e : a) {
    while (j < b.size() && b[j].index < e.index)
      ++j;
    if (j < b.size() && b[j].index == e.index) {
      if (e.value > b[j].value)
        return Tri::False;
    } else if (e.value > v.tail_bound()) {
      return Tri::False;
    } else {
      unknown = true;
    }
  }
  return unknown ? Tri::Unknown : Tri::True;
}

PosSeq axpy(double alpha, const PosSeq &u, const PosSeq &v) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("axpy: alpha must be >= 0");
  std::vector<PosSeq::Entry> out;
  out.reserve(u.support_size() + v.support_size());
  if (alpha > 0.0)
    for (const auto &e : u.entries())
      out.push_back({e.index, alpha * e.value});
  out.insert(out.end(), v.entries().begin(), v.entries().end());
  return PosSeq::from_entries(std::move(out),
                              alpha * u.tail_bound() + v.tail_bound());
}

PosSeq scale(double alpha, const PosSeq &u) { return axpy(alpha, u, PosSeq{}); }

} // namespace honesty
