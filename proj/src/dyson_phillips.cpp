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

#include "honesty/dyson_phillips.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "honesty/quadrature.hpp"

namespace honesty {

namespace {

// First grid node of the stencil serving interval p.
std::size_t stencil_base(std::size_t p, Stencil s) {
  return p + 2 - static_cast<std::size_t>(2 - stencil_start(s));
}

Stencil stencil_for(std::size_t interval, std::size_t M) {
  if (interval == 0)
    return Stencil::Left;
  if (interval + 1 == M)
    return Stencil::Right;
  return Stencil::Interior;
}

using Dense = DPState::Dense;

void accumulate(Dense &acc, const Dense &x, double scale = 1.0) {
  if (x.v.empty())
    return;
  if (acc.v.empty()) {
    acc.offset = x.offset;
    acc.v.assign(x.v.size(), 0.0);
  }
  std::size_t lo = std::min(acc.offset, x.offset);
  std::size_t hi = std::max(acc.offset + acc.v.size(), x.offset + x.v.size());
  if (lo != acc.offset || hi != acc.offset + acc.v.size()) {
    std::vector<double> v(hi - lo, 0.0);
    std::copy(acc.v.begin(), acc.v.end(), v.begin() + static_cast<std::ptrdiff_t>(acc.offset - lo));
    acc.offset = lo;
    acc.v = std::move(v);
  }
  for (std::size_t i = 0; i < x.v.size(); ++i)
    acc.v[x.offset - acc.offset + i] += scale * x.v[i];
}

double l1_distance(const Dense &a, const Dense &b) {
  Dense d = a;
  accumulate(d, b, -1.0);
  double s = 0.0;
  for (double x : d.v)
    s += std::abs(x);
  return s;
}

// Positive part as a PosSeq; the dropped negative mass is returned.
PosSeq positive_part(const Dense &x, double &dropped) {
  std::vector<double> v(x.v);
  for (double &e : v)
    if (e < 0.0) {
      dropped += -e;
      e = 0.0;
    }
  return PosSeq::from_dense(x.offset, v);
}

Dense to_dense(const PosSeq &u) {
  Dense d;
  if (u.empty())
    return d;
  d.offset = *u.min_index();
  d.v = u.dense(d.offset, *u.max_index() - d.offset + 1);
  return d;
}

double b_norm(const ModelSpec &m, const Dense &x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.v.size(); ++i)
    if (x.v[i] != 0.0)
      s += m.column_sum(x.offset + i) * x.v[i];
  return s;
}

double deficit_pairing(const ModelSpec &m, const Dense &x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.v.size(); ++i)
    if (x.v[i] != 0.0)
      s += m.deficit(x.offset + i) * x.v[i];
  return s;
}

Dense dense_of_scalars(std::initializer_list<double> xs) {
  return Dense{0, std::vector<double>(xs)};
}

void check_input(const PosSeq &u) {
  if (u.tail_bound() > 0.0)
    throw std::invalid_argument("Dyson-Phillips routines need a finitely supported input");
}

struct Refined {
  Dense value;
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

// Runs `f` on grids of M, 2M, ... intervals over [0, T] until successive
// results agree to tol. The difference itself is reported as the error;
// dividing by 15 would trust the asymptotic fourth-order regime, which
// coarse grids have not always reached. M stays a multiple of
// `grid_multiple`.
template <class F>
Refined refine(const ModelSpec &m, const PosSeq &u, double T, const QuadParams &q,
               std::size_t grid_multiple, F f) {
  std::size_t M = std::max<std::size_t>(q.m_start, 4);
  M = (M + grid_multiple - 1) / grid_multiple * grid_multiple;
  Refined out;
  Dense prev;
  bool have = false;
  while (true) {
    DPState st(m, u, T, M);
    Dense cur = f(st);
    if (have) {
      double err = l1_distance(cur, prev);
      if (err <= q.tol || 2 * M > q.m_max) {
        out.value = std::move(cur);
        out.error = err;
        out.intervals = M;
        out.converged = err <= q.tol;
        return out;
      }
    }
    prev = std::move(cur);
    have = true;
    M *= 2;
  }
}

QuadResult finish(const Refined &r) {
  QuadResult q;
  double dropped = 0.0;
  q.value = positive_part(r.value, dropped);
  q.error = r.error + dropped;
  q.intervals = r.intervals;
  q.converged = r.converged;
  return q;
}

double laplace_horizon(double lambda, double unorm, double tol) {
  double T = std::log(std::max(10.0 * unorm / (lambda * tol), 1.0)) / lambda;
  return std::max(T, 1.0);
}

} // namespace

DPState::DPState(const ModelSpec &m, const PosSeq &u, double T, std::size_t M)
    : m_(m), T_(T), h_(T / static_cast<double>(M)), M_(M) {
  if (M < 3)
    throw std::invalid_argument("DPState: need at least 3 intervals");
  if (!(T >= 0.0))
    throw std::invalid_argument("DPState: negative horizon");
  check_input(u);
  Level l0;
  if (!u.empty()) {
    l0.lo = *u.min_index();
    l0.width = *u.max_index() - l0.lo + 1;
  }
  l0.data.assign((M_ + 1) * l0.width, 0.0);
  for (const auto &e : u.entries()) {
    double a = m_.rate(e.index);
    for (std::size_t i = 0; i <= M_; ++i)
      l0.data[i * l0.width + (e.index - l0.lo)] = std::exp(-a * h_ * static_cast<double>(i)) * e.value;
  }
  levels_.push_back(std::move(l0));
}

void DPState::extend_to(std::size_t n) {
  while (levels_.size() <= n) {
    const Level &p = levels_.back();
    Level l;
    if (p.width == 0) {
      levels_.push_back(l);
      continue;
    }
    std::size_t up = m_.up_stride(), down = m_.down_stride();
    l.lo = p.lo >= down ? p.lo - down : 0;
    l.width = p.lo + p.width - 1 + up - l.lo + 1;
    const std::size_t W = l.width;

    struct Tr {
      std::size_t from, to;
      double r;
    };
    std::vector<Tr> trs;
    for (std::size_t j = 0; j < p.width; ++j)
      m_.for_each_transition(p.lo + j, [&](std::size_t k, double r) {
        trs.push_back({j, k - l.lo, r});
      });

    std::vector<double> g((M_ + 1) * W, 0.0);
    for (std::size_t i = 0; i <= M_; ++i)
      for (const auto &t : trs)
        g[i * W + t.to] += t.r * p.data[i * p.width + t.from];

    std::vector<double> E(W);
    std::vector<std::array<double, 4>> wl(W), wi(W), wr(W);
    for (std::size_t k = 0; k < W; ++k) {
      double z = m_.rate(l.lo + k) * h_;
      E[k] = std::exp(-z);
      wl[k] = product_weights(Stencil::Left, z);
      wi[k] = product_weights(Stencil::Interior, z);
      wr[k] = product_weights(Stencil::Right, z);
    }

    l.data.assign((M_ + 1) * W, 0.0);
    for (std::size_t i = 0; i < M_; ++i) {
      Stencil s = stencil_for(i, M_);
      const auto &wt = s == Stencil::Left ? wl : (s == Stencil::Interior ? wi : wr);
      std::size_t base = stencil_base(i, s);
      for (std::size_t k = 0; k < W; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < 4; ++j)
          acc += wt[k][j] * g[(base + j) * W + k];
        l.data[(i + 1) * W + k] = E[k] * l.data[i * W + k] + h_ * acc;
      }
    }
    levels_.push_back(std::move(l));
  }
}

void DPState::release_below(std::size_t n) {
  for (std::size_t k = 0; k < std::min(n, levels_.size()); ++k) {
    levels_[k].released = true;
    std::vector<double>().swap(levels_[k].data);
  }
}

Dense DPState::term(std::size_t n, std::size_t i) const {
  if (n >= levels_.size() || i > M_ || levels_[n].released)
    throw std::out_of_range("DPState::term");
  const Level &l = levels_[n];
  Dense d;
  d.offset = l.lo;
  d.v.assign(l.data.begin() + static_cast<std::ptrdiff_t>(i * l.width),
             l.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * l.width));
  return d;
}

Dense DPState::weighted_integral(std::size_t n, std::size_t i, double lambda) const {
  if (n >= levels_.size() || i > M_ || levels_[n].released)
    throw std::out_of_range("DPState::weighted_integral");
  const Level &l = levels_[n];
  Dense d;
  d.offset = l.lo;
  d.v.assign(l.width, 0.0);
  const double z = -lambda * h_;
  const std::array<std::array<double, 4>, 3> w = {product_weights(Stencil::Left, z),
                                                  product_weights(Stencil::Interior, z),
                                                  product_weights(Stencil::Right, z)};
  for (std::size_t p = 0; p < i; ++p) {
    Stencil s = stencil_for(p, M_);
    const auto &wt = w[static_cast<std::size_t>(s)];
    std::size_t base = stencil_base(p, s);
    double scale = h_ * std::exp(-lambda * h_ * static_cast<double>(p + 1));
    for (std::size_t j = 0; j < 4; ++j) {
      double c = scale * wt[j];
      const double *row = &l.data[(base + j) * l.width];
      for (std::size_t k = 0; k < l.width; ++k)
        d.v[k] += c * row[k];
    }
  }
  return d;
}

Dense DPState::integral(std::size_t n, std::size_t i) const { return weighted_integral(n, i, 0.0); }

QuadResult dp_term(const ModelSpec &m, std::size_t n, double t, const PosSeq &u,
                   const QuadParams &q) {
  check_input(u);
  if (!(t >= 0.0))
    throw std::invalid_argument("dp_term: t must be nonnegative");
  if (n == 0) {
    QuadResult r;
    r.value = apply_U(m, t, u);
    r.converged = true;
    return r;
  }
  return finish(refine(m, u, t, q, 1, [&](DPState &st) {
    st.extend_to(n);
    return st.term(n, st.intervals());
  }));
}

QuadResult dp_partial_sum(const ModelSpec &m, std::size_t K, double t, const PosSeq &u,
                          const QuadParams &q) {
  check_input(u);
  if (K == 0)
    return dp_term(m, 0, t, u, q);
  return finish(refine(m, u, t, q, 1, [&](DPState &st) {
    st.extend_to(K);
    Dense acc;
    for (std::size_t k = 0; k <= K; ++k)
      accumulate(acc, st.term(k, st.intervals()));
    return acc;
  }));
}

QuadResult dp_integral(const ModelSpec &m, std::size_t n, double t, const PosSeq &u,
                       const QuadParams &q) {
  check_input(u);
  return finish(refine(m, u, t, q, 1, [&](DPState &st) {
    st.extend_to(n);
    return st.integral(n, st.intervals());
  }));
}

QuadResult dp_B_integral(const ModelSpec &m, std::size_t n, double t, const PosSeq &u,
                         const QuadParams &q) {
  QuadResult in = dp_integral(m, n, t, u, q);
  QuadResult r;
  r.value = apply_B(m, in.value);
  // B is bounded on the finite window touched by the integral
  double bmax = 0.0;
  if (!in.value.empty())
    for (std::size_t k = *in.value.min_index(); k <= *in.value.max_index(); ++k)
      bmax = std::max(bmax, m.column_sum(k));
  r.error = bmax * in.error;
  r.intervals = in.intervals;
  r.converged = in.converged;
  return r;
}

ConvolutionCheck dp_convolution_residual(const ModelSpec &m, std::size_t n, double t, double s,
                                         const PosSeq &u, const QuadParams &q) {
  if (n > 4)
    throw std::invalid_argument("dp_convolution_residual: n must be at most 4");
  ConvolutionCheck c;
  QuadResult lhs = dp_term(m, n, t + s, u, q);
  c.error = lhs.error;
  Dense diff = to_dense(lhs.value);
  for (std::size_t k = 0; k <= n; ++k) {
    QuadResult inner = dp_term(m, n - k, s, u, q);
    if (inner.value.empty()) {
      c.error += inner.error;
      continue;
    }
    QuadResult outer = dp_term(m, k, t, inner.value, q);
    // ||V_k(t)|| <= 1 on the cone, so the inner error passes through
    c.error += inner.error + outer.error;
    accumulate(diff, to_dense(outer.value), -1.0);
  }
  for (double x : diff.v)
    c.residual += std::abs(x);
  return c;
}

QuadResult dp_laplace(const ModelSpec &m, std::size_t n, double lambda, const PosSeq &u,
                      const QuadParams &q) {
  check_input(u);
  if (!(lambda > 0.0))
    throw std::invalid_argument("dp_laplace: lambda must be positive");
  double unorm = u.sum();
  double T = laplace_horizon(lambda, unorm, q.tol);
  QuadResult r = finish(refine(m, u, T, q, 1, [&](DPState &st) {
    st.extend_to(n);
    return st.weighted_integral(n, st.intervals(), lambda);
  }));
  r.error += std::exp(-lambda * T) * unorm / lambda;
  return r;
}

UniformTail dp_uniform_tail(const ModelSpec &m, std::size_t n_max, double lambda, double t,
                            const PosSeq &u, const QuadParams &q) {
  check_input(u);
  if (!(lambda > 0.0) || !(t >= 0.0))
    throw std::invalid_argument("dp_uniform_tail: need lambda > 0 and t >= 0");
  UniformTail out;
  double unorm = u.sum();
  double tailU = 0.0;
  for (const auto &e : u.entries()) {
    double a = m.rate(e.index);
    tailU += m.column_sum(e.index) * e.value * std::exp(-(lambda + a) * t) / (lambda + a);
  }
  out.bound = std::exp(-lambda * t) * unorm + tailU;

  double TL = laplace_horizon(lambda, unorm, q.tol);
  std::size_t mult = t > 0.0 ? static_cast<std::size_t>(std::ceil(std::max(TL, t) / t)) : 1;
  double T = t > 0.0 ? t * static_cast<double>(mult) : TL;
  Refined r = refine(m, u, T, q, mult, [&](DPState &st) {
    st.extend_to(n_max);
    std::size_t it = t > 0.0 ? st.intervals() / mult : 0;
    Dense vals;
    vals.v.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
      Dense rest = st.weighted_integral(n, st.intervals(), lambda);
      accumulate(rest, st.weighted_integral(n, it, lambda), -1.0);
      vals.v[n] = b_norm(m, rest);
    }
    return vals;
  });
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.computed.push_back(std::max(0.0, r.value.v[n]));
    out.errors.push_back(r.error);
    if (out.computed.back() > out.bound + r.error + 1e-12)
      out.all_below = false;
  }
  return out;
}

DPSeries dp_series(const ModelSpec &m, double t, const PosSeq &u, std::size_t max_levels,
                   const QuadParams &q) {
  check_input(u);
  DPSeries out;
  std::size_t K = 0;
  bool K_fixed = false;
  Refined r = refine(m, u, t, q, 1, [&](DPState &st) {
    const std::size_t end = st.intervals();
    double dsum = 0.0, msum = 0.0, flight = 0.0;
    for (std::size_t n = 0;; ++n) {
      st.extend_to(n);
      Dense in = st.integral(n, end);
      dsum += deficit_pairing(m, in);
      Dense vt = st.term(n, end);
      for (double x : vt.v)
        msum += x;
      flight = b_norm(m, in);
      st.release_below(n);
      if (K_fixed ? n >= K : (flight <= 0.1 * q.tol || n + 1 >= max_levels)) {
        K = n;
        K_fixed = true;
        break;
      }
    }
    return dense_of_scalars({dsum, flight, msum});
  });
  out.K = K;
  out.deficit_sum = std::max(0.0, r.value.v[0]);
  out.in_flight = std::max(0.0, r.value.v[1]);
  out.mass_sum = r.value.v[2];
  out.error = r.error;
  out.converged = r.converged && out.in_flight <= q.tol;
  return out;
}

} // namespace honesty
