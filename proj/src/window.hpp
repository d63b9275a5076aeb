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

// Dense index windows used by the hot loops. Not part of the public API.

#ifndef HONESTY_SRC_WINDOW_HPP
#define HONESTY_SRC_WINDOW_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "honesty/model.hpp"
#include "honesty/state_space.hpp"

namespace honesty::detail {

/// Coordinates [offset, offset + v.size()).
struct Window {
  std::size_t offset = 0;
  std::vector<double> v;

  static Window from(const PosSeq &u) {
    Window w;
    if (u.empty())
      return w;
    w.offset = *u.min_index();
    w.v = u.dense(w.offset, *u.max_index() - w.offset + 1);
    return w;
  }
  bool empty() const { return v.empty(); }
  std::size_t end() const { return offset + v.size(); }
  double sum() const { return compensated_sum(v); }
  PosSeq to_posseq(double tail = 0.0) const {
    std::vector<double> c(v);
    for (double &x : c)
      if (x < 0.0)
        x = 0.0;
    return PosSeq::from_dense(offset, c, tail);
  }

  /// Drops leading and trailing entries below `threshold`; returns the
  /// dropped mass.
  double trim(double threshold) {
    std::size_t b = 0, e = v.size();
    double dropped = 0.0;
    while (b < e && v[b] <= threshold)
      dropped += v[b++];
    while (e > b && v[e - 1] <= threshold)
      dropped += v[--e];
    if (b == e) {
      v.clear();
      return dropped;
    }
    if (b > 0 || e < v.size()) {
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(e), v.end());
      v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(b));
      offset += b;
    }
    return dropped;
  }
};

/// Iterates x_{n+1} = B (lambda - A)^{-1} x_n on windows, keeping track
/// of the mass trimmed away so computed norms stay two-sided bounds.
class JIterator {
public:
  JIterator(const ModelSpec &m, double lambda, const PosSeq &u)
      : m_(m), lambda_(lambda), x_(Window::from(u)) {
    norm_ = x_.sum();
  }

  /// Applies one step. When `resolvent_out` is non-null it receives
  /// (lambda - A)^{-1} x_n before the B application.
  void step(std::vector<double> *resolvent_out = nullptr,
            std::size_t *resolvent_offset = nullptr) {
    if (x_.empty()) {
      ++n_;
      return;
    }
    std::size_t up = m_.up_stride(), down = m_.down_stride();
    buf_.offset = x_.offset >= down ? x_.offset - down : 0;
    buf_.v.assign(x_.end() - 1 + up - buf_.offset + 1, 0.0);
    if (resolvent_out) {
      resolvent_out->resize(x_.v.size());
      *resolvent_offset = x_.offset;
    }
    for (std::size_t i = 0; i < x_.v.size(); ++i) {
      double xi = x_.v[i];
      if (xi == 0.0) {
        if (resolvent_out)
          (*resolvent_out)[i] = 0.0;
        continue;
      }
      std::size_t k = x_.offset + i;
      double y = xi / (lambda_ + m_.rate(k));
      if (resolvent_out)
        (*resolvent_out)[i] = y;
      m_.for_each_transition(k, [&](std::size_t j, double r) {
        buf_.v[j - buf_.offset] += r * y;
      });
    }
    std::swap(x_, buf_);
    double total = x_.sum();
    dropped_ += x_.trim(kTrimRelative * total);
    norm_ = x_.empty() ? 0.0 : x_.sum();
    ++n_;
  }

  const Window &x() const { return x_; }
  /// Computed ||J^n u||.
  double norm() const { return norm_; }
  /// Two-sided bounds for the true ||J^n u||. Each step rounds every entry
  /// by a few ulps (one division, one product, a short positive sum), so
  /// the computed norm is off by at most gamma_n relative.
  double norm_lower() const { return norm_ * (1.0 - gamma()); }
  double norm_upper() const { return (norm_ + dropped_) * (1.0 + gamma()); }
  double gamma() const {
    double g = kStepUlps * std::numeric_limits<double>::epsilon() * static_cast<double>(n_ + 1);
    return g / (1.0 - g);
  }
  double dropped() const { return dropped_; }
  std::size_t n() const { return n_; }
  std::size_t min_index() const { return x_.offset; }

  static constexpr double kTrimRelative = 1e-22;
  static constexpr double kStepUlps = 8.0;

private:
  const ModelSpec &m_;
  double lambda_;
  Window x_;
  Window buf_;
  double norm_ = 0.0;
  double dropped_ = 0.0;
  std::size_t n_ = 0;
};

} // namespace honesty::detail

#endif // HONESTY_SRC_WINDOW_HPP
