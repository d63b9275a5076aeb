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

#include "honesty/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "window.hpp"

namespace honesty {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void add_into(std::vector<double> &acc, std::size_t offset, const std::vector<double> &y,
              double scale) {
  if (acc.size() < offset + y.size())
    acc.resize(offset + y.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i)
    acc[offset + i] += scale * y[i];
}

PosSeq dense_to_posseq(const std::vector<double> &acc, double tail = 0.0) {
  std::size_t b = 0;
  while (b < acc.size() && acc[b] <= 0.0)
    ++b;
  std::vector<double> v(acc.begin() + static_cast<std::ptrdiff_t>(b), acc.end());
  for (double &x : v)
    x = std::max(x, 0.0);
  return PosSeq::from_dense(b, v, tail);
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be positive");
}

// Shared driver for the two resolvent series. `r` < 0 means no damping.
SeriesResult resolvent_series(const ModelSpec &m, double lambda, double r, const PosSeq &u,
                              double tol, std::size_t max_terms) {
  check_lambda(lambda);
  if (!(tol > 0.0))
    throw std::invalid_argument("tol must be positive");
  const bool damped = r >= 0.0;
  const bool upward = m.upward_only();
  const double unorm = u.sum() + u.tail_bound();
  const double tail_part = u.tail_bound() / lambda;

  detail::JIterator it(m, lambda, u);
  std::vector<double> acc, y;
  std::size_t yoff = 0;
  double acc_mass = 0.0, rn = 1.0, defect = kInf;
  std::size_t terms = 0;

  while (true) {
    if (it.x().empty()) {
      defect = it.dropped() / lambda;
      if (damped)
        defect *= rn / (1.0 - r);
      break;
    }
    it.step(&y, &yoff);
    ++terms;
    double scale = damped ? rn : 1.0;
    add_into(acc, yoff, y, scale);
    acc_mass += scale * compensated_sum(y);
    double xn_hi = it.norm_upper();
    if (damped) {
      rn *= r;
      defect = rn * xn_hi / ((1.0 - r) * lambda);
    } else {
      double xi_lo = 0.0;
      if (upward && !it.x().empty())
        xi_lo = it.norm_lower() * std::exp(-m.log_ratio_tail(lambda, it.min_index()));
      double d1 = std::max(0.0, xn_hi - xi_lo) / lambda;
      double d2 = kInf;
      if (upward && !it.x().empty())
        d2 = it.norm_upper() * m.resolvent_tail(lambda, it.min_index()) + it.dropped() / lambda;
      defect = std::min(d1, d2);
    }
    if (defect + tail_part <= tol || terms >= max_terms)
      break;
  }
  defect += tail_part;
  // lambda * ||(lambda - G)^{-1} u|| <= ||u||, less the rounding that piled
  // up in acc_mass over `terms` steps
  double rounding = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(terms + 1) * acc_mass;
  defect = std::min(defect, std::max(0.0, unorm / lambda - acc_mass) + rounding);

  SeriesResult res;
  res.value = dense_to_posseq(acc);
  res.defect = defect;
  res.terms_used = terms;
  res.converged = defect <= tol;
  return res;
}

// Leading N x N truncation of A + B, scaled for uniformization.
struct Truncation {
  std::size_t N = 0;
  double c = 0.0;
  std::vector<double> diag;     // 1 - a_k / c
  std::vector<double> out_rate; // rate of transitions to indices >= N
  std::vector<std::size_t> row_start, src;
  std::vector<double> w; // rate / c, grouped by target

  Truncation(const ModelSpec &m, std::size_t n) : N(n) {
    std::vector<double> a(N);
    for (std::size_t k = 0; k < N; ++k) {
      a[k] = m.rate(k);
      c = std::max(c, a[k]);
    }
    diag.resize(N);
    for (std::size_t k = 0; k < N; ++k)
      diag[k] = c > 0.0 ? 1.0 - a[k] / c : 1.0;
    out_rate.assign(N, 0.0);
    std::vector<std::size_t> count(N + 1, 0);
    struct T {
      std::size_t to, from;
      double r;
    };
    std::vector<T> trs;
    for (std::size_t k = 0; k < N; ++k)
      m.for_each_transition(k, [&](std::size_t j, double r) {
        if (j < N)
          trs.push_back({j, k, r});
        else
          out_rate[k] += r;
      });
    for (const auto &t : trs)
      ++count[t.to + 1];
    row_start.assign(N + 1, 0);
    for (std::size_t j = 0; j < N; ++j)
      row_start[j + 1] = row_start[j] + count[j + 1];
    src.resize(trs.size());
    w.resize(trs.size());
    std::vector<std::size_t> fill(row_start.begin(), row_start.end() - 1);
    for (const auto &t : trs) {
      src[fill[t.to]] = t.from;
      w[fill[t.to]] = t.r / c;
      ++fill[t.to];
    }
  }

  // y = (I + Q/c) x
  void apply(const std::vector<double> &x, std::vector<double> &y) const {
    for (std::size_t j = 0; j < N; ++j) {
      double s = diag[j] * x[j];
      for (std::size_t p = row_start[j]; p < row_start[j + 1]; ++p)
        s += w[p] * x[src[p]];
      y[j] = s;
    }
  }
};

// Poisson(mean) weights on [lo, lo + w.size()), with suffix sums
// P(K > k) for the integral weights. Mass outside the window is < 1e-15.
struct PoissonWindow {
  std::size_t lo = 0, hi = 0;
  std::vector<double> w, above;

  explicit PoissonWindow(double mean) {
    const double eps = 1e-15;
    auto logw = [&](double k) {
      return mean > 0.0 ? -mean + k * std::log(mean) - std::lgamma(k + 1.0) : (k == 0 ? 0.0 : -kInf);
    };
    std::size_t mode = static_cast<std::size_t>(std::floor(mean));
    lo = mode;
    while (lo > 0) {
      double wl = std::exp(logw(static_cast<double>(lo)));
      double q = static_cast<double>(lo) / mean;
      if (q < 1.0 && wl * q / (1.0 - q) < eps)
        break;
      --lo;
    }
    hi = mode;
    while (true) {
      double wh = std::exp(logw(static_cast<double>(hi)));
      double q = mean / static_cast<double>(hi + 1);
      if (q < 1.0 && wh * q / (1.0 - q) < eps)
        break;
      ++hi;
    }
    w.resize(hi - lo + 1);
    for (std::size_t k = lo; k <= hi; ++k)
      w[k - lo] = std::exp(logw(static_cast<double>(k)));
    above.assign(w.size(), 0.0);
    double s = 0.0;
    for (std::size_t i = w.size(); i-- > 0;) {
      above[i] = s;
      s += w[i];
    }
  }
};

struct LevelOutput {
  std::vector<std::vector<double>> V, I;
  std::vector<double> flux;
};

double level_work(const ModelSpec &m, std::size_t N, double t_max) {
  double c = 0.0;
  for (std::size_t k = 0; k < N; ++k)
    c = std::max(c, m.rate(k));
  double mean = c * t_max;
  double steps = mean + 12.0 * std::sqrt(mean) + 20.0;
  double per_step = 3.0 * static_cast<double>(N) + static_cast<double>(m.up_stride() + m.down_stride()) * N;
  return steps * per_step;
}

LevelOutput run_level(const ModelSpec &m, std::size_t N, const std::vector<double> &times,
                      const PosSeq &u) {
  Truncation tr(m, N);
  const std::size_t G = times.size();
  LevelOutput out;
  out.V.assign(G, std::vector<double>(N, 0.0));
  out.I.assign(G, std::vector<double>(N, 0.0));
  out.flux.assign(G, 0.0);

  std::vector<double> x(N, 0.0), y(N, 0.0), S(N, 0.0);
  double beyond = 0.0;
  for (const auto &e : u.entries()) {
    if (e.index < N)
      x[e.index] = e.value;
    else
      beyond += e.value;
  }
  beyond += u.tail_bound();

  if (tr.c == 0.0) {
    for (std::size_t g = 0; g < G; ++g)
      for (std::size_t k = 0; k < N; ++k) {
        out.V[g][k] = x[k];
        out.I[g][k] = times[g] * x[k];
      }
    for (std::size_t g = 0; g < G; ++g)
      out.flux[g] = beyond;
    return out;
  }

  std::vector<PoissonWindow> win;
  std::size_t last = 0;
  for (double t : times) {
    win.emplace_back(tr.c * t);
    last = std::max(last, win.back().hi);
  }
  for (std::size_t k = 0; k <= last; ++k) {
    for (std::size_t g = 0; g < G; ++g) {
      const auto &pw = win[g];
      if (k == pw.lo)
        out.I[g] = S;
      if (k >= pw.lo && k <= pw.hi) {
        double wv = pw.w[k - pw.lo], wi = pw.above[k - pw.lo];
        auto &V = out.V[g];
        auto &I = out.I[g];
        for (std::size_t j = 0; j < N; ++j) {
          V[j] += wv * x[j];
          I[j] += wi * x[j];
        }
      }
    }
    if (k == last)
      break;
    for (std::size_t j = 0; j < N; ++j)
      S[j] += x[j];
    tr.apply(x, y);
    std::swap(x, y);
  }
  for (std::size_t g = 0; g < G; ++g) {
    double f = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      out.I[g][j] /= tr.c;
      f += tr.out_rate[j] * out.I[g][j];
    }
    out.flux[g] = f + beyond;
  }
  return out;
}

// Extrapolated remaining increment from the last two ladder increments.
double extrapolated_gap(double d_prev, double d_last) {
  if (d_last <= 0.0)
    return 0.0;
  if (!(d_prev > 0.0))
    return kInf;
  double rho = d_last / d_prev;
  if (rho >= 1.0)
    return kInf;
  return 2.0 * d_last * rho / (1.0 - rho);
}

bool dominates(const PosSeq &fine, const PosSeq &coarse, double abs_slack) {
  for (const auto &e : coarse.entries())
    if (fine.at(e.index) < e.value * (1.0 - 1e-10) - abs_slack)
      return false;
  return true;
}

} // namespace

SeriesResult resolvent_G(const ModelSpec &m, double lambda, const PosSeq &u, double tol,
                         std::size_t max_terms) {
  return resolvent_series(m, lambda, -1.0, u, tol, max_terms);
}

SeriesResult resolvent_Gr(const ModelSpec &m, double lambda, double r, const PosSeq &u,
                          double tol, std::size_t max_terms) {
  if (!(r >= 0.0 && r < 1.0))
    throw std::invalid_argument("r must lie in [0, 1)");
  return resolvent_series(m, lambda, r, u, tol, max_terms);
}

Evolution evolve(const ModelSpec &m, const std::vector<double> &times, const PosSeq &u,
                 const TruncationParams &params) {
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("times must be finite and nonnegative");
  if (params.n_start < 1 || params.n_max < params.n_start)
    throw std::invalid_argument("invalid truncation parameters");

  const double unorm = u.sum() + u.tail_bound();
  Evolution ev;
  ev.at.resize(times.size());

  std::vector<double> pos;
  std::vector<std::size_t> pos_of(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    ev.at[i].t = times[i];
    if (times[i] == 0.0) {
      ev.at[i].value = u;
      ev.at[i].mass = Bracket(u.sum(), unorm);
      ev.at[i].certified_hi = unorm;
      ev.at[i].converged = true;
      continue;
    }
    auto itp = std::find(pos.begin(), pos.end(), times[i]);
    pos_of[i] = static_cast<std::size_t>(itp - pos.begin());
    if (itp == pos.end())
      pos.push_back(times[i]);
  }
  if (pos.empty())
    return ev;
  const std::size_t G = pos.size();
  const double t_max = *std::max_element(pos.begin(), pos.end());

  std::size_t N = params.n_start;
  if (!u.empty())
    while (N < *u.max_index() + 2 && N < params.n_max)
      N *= 2;
  N = std::min(N, params.n_max);

  std::vector<std::vector<double>> mass_hist(G), imass_hist(G);
  LevelOutput cur;
  bool converged = false;
  while (true) {
    if (!ev.ladder.levels.empty() && level_work(m, N, t_max) > params.max_work)
      break;
    cur = run_level(m, N, pos, u);
    ev.ladder.levels.push_back(N);
    std::vector<PosSeq> vals;
    bool flux_ok = true, inc_ok = ev.ladder.levels.size() >= 2;
    for (std::size_t g = 0; g < G; ++g) {
      vals.push_back(PosSeq::from_dense(0, cur.V[g]));
      double ms = compensated_sum(cur.V[g]);
      mass_hist[g].push_back(ms);
      imass_hist[g].push_back(compensated_sum(cur.I[g]));
      flux_ok = flux_ok && cur.flux[g] <= params.tol;
      if (inc_ok)
        inc_ok = ms - mass_hist[g][mass_hist[g].size() - 2] < params.tol;
    }
    if (!ev.ladder.values.empty()) {
      const auto &prev = ev.ladder.values.back();
      for (std::size_t g = 0; g < G; ++g)
        if (!dominates(vals[g], prev[g], 1e-13 * unorm))
          ev.ladder.monotone = false;
    }
    ev.ladder.values.push_back(std::move(vals));
    if (flux_ok || inc_ok) {
      converged = true;
      break;
    }
    if (N >= params.n_max)
      break;
    N = std::min(2 * N, params.n_max);
  }

  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] == 0.0)
      continue;
    std::size_t g = pos_of[i];
    auto &r = ev.at[i];
    const auto &mh = mass_hist[g];
    const auto &ih = imass_hist[g];
    std::size_t L = mh.size();
    r.value = PosSeq::from_dense(0, cur.V[g]);
    r.integral = PosSeq::from_dense(0, cur.I[g]);
    r.boundary_flux = cur.flux[g];
    r.level = ev.ladder.levels.back();
    r.converged = converged;

    double lo = std::min(mh.back(), unorm);
    double gap = cur.flux[g];
    double igap = r.t * cur.flux[g];
    if (L >= 3) {
      gap = std::min(gap, extrapolated_gap(mh[L - 2] - mh[L - 3], mh[L - 1] - mh[L - 2]));
      igap = std::min(igap, extrapolated_gap(ih[L - 2] - ih[L - 3], ih[L - 1] - ih[L - 2]));
    }
    r.certified_hi = std::min(unorm, lo + cur.flux[g]);
    r.mass = Bracket(lo, std::max(lo, std::min(unorm, lo + gap)));
    double ilo = ih.back();
    r.integral_mass = Bracket(ilo, std::max(ilo, std::min(r.t * unorm, ilo + igap)));
  }
  return ev;
}

SemigroupResult semigroup_V(const ModelSpec &m, double t, const PosSeq &u,
                            const TruncationParams &params) {
  return evolve(m, {t}, u, params).at.front();
}

PosSeq integrate_V(const ModelSpec &m, double t, const PosSeq &u,
                   const TruncationParams &params) {
  return semigroup_V(m, t, u, params).integral;
}

} // namespace honesty
