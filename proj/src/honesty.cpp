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

#include "honesty/honesty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "honesty/philox.hpp"
#include "window.hpp"

namespace honesty {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be positive");
}

double norm_upper(const PosSeq &u) { return u.sum() + u.tail_bound(); }

// abar on int_0^t V(s)u ds through (lambda - G) v = lambda v + u - V(t)u.
Bracket abar_on_integral(const ModelSpec &m, double lambda, const SemigroupResult &r,
                         const PosSeq &u, const Bracket &a0, double tol) {
  if (m.structurally_conservative() || r.t == 0.0)
    return {0.0, 0.0};
  Bracket A1 = abar_resolvent(m, lambda, axpy(lambda, r.integral, u), tol);
  Bracket A2 = abar_resolvent(m, lambda, r.value, tol);
  double gap = r.mass.hi - r.mass.lo;
  double igap = r.integral_mass.hi - r.integral_mass.lo;
  double lo = std::max(0.0, A1.lo - A2.hi - gap);
  double hi = std::min(a0.hi, A1.hi + lambda * igap - A2.lo);
  return {std::min(lo, hi), std::max(lo, hi)};
}

Bracket delta_from(const Bracket &mass, const Bracket &functional, const PosSeq &u) {
  // the three terms nearly cancel; allow for their rounding
  double slack = 8 * std::numeric_limits<double>::epsilon() * norm_upper(u);
  double hi = std::min(0.0, mass.hi + functional.hi - u.sum() + slack);
  double lo = std::min(hi, mass.lo + functional.lo - norm_upper(u) - slack);
  return {lo, hi};
}

} // namespace

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Honest:
    return "Honest";
  case Verdict::Dishonest:
    return "Dishonest";
  default:
    return "Undetermined";
  }
}

std::string to_string(Route r) {
  switch (r) {
  case Route::Resolvent:
    return "resolvent";
  case Route::DysonPhillips:
    return "dyson_phillips";
  case Route::Dual:
    return "dual";
  case Route::Subsolution:
    return "subsolution";
  default:
    return "both";
  }
}

Verdict verdict_from_string(const std::string &s) {
  for (Verdict v : {Verdict::Honest, Verdict::Dishonest, Verdict::Undetermined})
    if (to_string(v) == s)
      return v;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

Route route_from_string(const std::string &s) {
  for (Route r : {Route::Resolvent, Route::DysonPhillips, Route::Dual, Route::Subsolution, Route::Both})
    if (to_string(r) == s)
      return r;
  throw std::invalid_argument("unknown route '" + s + "'");
}

double a_frak(const ModelSpec &m, const PosSeq &u) {
  double s = 0.0;
  for (const auto &e : u.entries())
    s += m.deficit(e.index) * e.value;
  return s;
}

double a_frak(const ModelSpec &m, const SignedSeq &u) {
  return a_frak(m, u.plus) - a_frak(m, u.minus);
}

Bracket a0_on_integral(const SemigroupResult &r, const PosSeq &u) {
  double lo = std::max(0.0, u.sum() - r.mass.hi);
  double hi = std::max(lo, norm_upper(u) - r.mass.lo);
  return {lo, hi};
}

Bracket a0_on_integral(const ModelSpec &m, double t, const PosSeq &u,
                       const TruncationParams &params) {
  return a0_on_integral(semigroup_V(m, t, u, params), u);
}

Bracket abar_resolvent(const ModelSpec &m, double lambda, const PosSeq &u, double tol,
                       std::size_t max_terms) {
  check_lambda(lambda);
  if (m.structurally_conservative())
    return {0.0, 0.0};
  const bool upward = m.upward_only();
  detail::JIterator it(m, lambda, u);
  std::vector<double> y;
  std::size_t yoff = 0;
  double s = 0.0, rest = kInf;
  for (std::size_t n = 0; n < max_terms && !it.x().empty(); ++n) {
    it.step(&y, &yoff);
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] != 0.0)
        s += m.deficit(yoff + i) * y[i];
    // a_frak(R J^n x) <= ||J^n x|| - ||J^{n+1} x||, so the rest telescopes
    double xi_lo = 0.0;
    if (upward && !it.x().empty())
      xi_lo = it.norm_lower() * std::exp(-m.log_ratio_tail(lambda, it.min_index()));
    rest = std::max(0.0, it.norm_upper() - xi_lo);
    if (rest <= tol)
      break;
  }
  if (it.x().empty())
    rest = it.dropped();
  return {s, s + rest + u.tail_bound()};
}

XiResult xi(const ModelSpec &m, double lambda, const PosSeq &u, const XiPolicy &policy) {
  check_lambda(lambda);
  XiResult res;
  const double tail = u.tail_bound();
  const bool upward = m.upward_only();
  detail::JIterator it(m, lambda, u);

  auto lower_now = [&]() {
    if (!upward || it.x().empty())
      return 0.0;
    double L = m.log_ratio_tail(lambda, it.min_index());
    return it.norm_lower() * std::exp(-L);
  };

  double hi = it.norm_upper() + tail;
  double lo = lower_now();
  res.lower_certified = lo > 0.0;
  res.norms.push_back({0, it.norm()});
  std::size_t next_record = 1;

  double s0 = -1.0, s1 = -1.0, s2 = it.norm();
  double last_ratio = -1.0;
  std::size_t stable = 0;

  std::size_t n = 0;
  while (n < policy.max_iter) {
    if (hi <= policy.verdict_tol || hi - lo <= policy.width_tol || it.x().empty())
      break;
    it.step();
    ++n;
    hi = std::min(hi, it.norm_upper() + tail);
    if (upward && (n < 4096 || n % 16 == 0)) {
      double l = lower_now();
      if (l > lo) {
        lo = l;
        res.lower_certified = true;
      }
    }
    if (n == next_record) {
      res.norms.push_back({n, it.norm()});
      next_record = n < 64 ? n + 1 : static_cast<std::size_t>(std::ceil(n * 1.25));
    }
    s0 = s1;
    s1 = s2;
    s2 = it.norm();
    if (s1 > 0.0) {
      double ratio = s2 / s1;
      if (last_ratio >= 0.0 && std::abs(ratio - last_ratio) <= policy.stable_tol)
        ++stable;
      else
        stable = 0;
      last_ratio = ratio;
    }
  }
  if (res.norms.back().n != n)
    res.norms.push_back({n, it.norm()});
  if (it.x().empty())
    hi = std::min(hi, it.dropped() + tail);
  res.iterations = n;
  res.bracket = Bracket(std::min(lo, hi), hi);

  if (stable >= policy.stable_window && s0 >= 0.0) {
    double d1 = s1 - s0, d2 = s2 - s1, dd = d2 - d1;
    double est = dd != 0.0 ? s2 - d2 * d2 / dd : s2;
    res.estimate = std::clamp(est, 0.0, hi);
  }
  return res;
}

double DualWeight::pair(const PosSeq &u) const {
  double s = u.tail_bound();
  for (const auto &e : u.entries())
    s += e.value * (e.index <= N ? values[e.index] : 1.0);
  return s;
}

DualWeight xi_dual(const ModelSpec &m, double lambda, std::size_t N, std::size_t iters,
                   DualSweep sweep) {
  check_lambda(lambda);
  if (N < 1 || iters < 1)
    throw std::invalid_argument("xi_dual: N and iters must be at least 1");
  DualWeight d;
  d.N = N;
  d.values.assign(N + 1, 1.0);
  std::vector<double> inv(N + 1);
  for (std::size_t k = 0; k <= N; ++k)
    inv[k] = 1.0 / (lambda + m.rate(k));

  auto apply_at = [&](const std::vector<double> &psi, std::size_t k) {
    double s = 0.0;
    m.for_each_transition(k, [&](std::size_t j, double r) { s += r * (j <= N ? psi[j] : 1.0); });
    return s * inv[k];
  };

  std::vector<double> next;
  for (std::size_t it = 0; it < iters; ++it) {
    double change = 0.0;
    if (sweep == DualSweep::GaussSeidel) {
      for (std::size_t k = N + 1; k-- > 0;) {
        double v = apply_at(d.values, k);
        change = std::max(change, std::abs(v - d.values[k]));
        d.values[k] = v;
      }
    } else {
      next.resize(N + 1);
      for (std::size_t k = 0; k <= N; ++k) {
        next[k] = apply_at(d.values, k);
        change = std::max(change, std::abs(next[k] - d.values[k]));
      }
      d.values.swap(next);
    }
    d.iterations = it + 1;
    if (change == 0.0)
      break;
  }
  double res = 0.0;
  for (std::size_t k = 0; k <= N; ++k)
    res = std::max(res, std::abs(apply_at(d.values, k) - d.values[k]));
  d.residual = res;
  return d;
}

AhatResult ahat_dp(const ModelSpec &m, double t, const PosSeq &u, double a0_hi,
                   const QuadParams &q, std::size_t max_levels) {
  AhatResult r;
  if (m.structurally_conservative() || t == 0.0) {
    r.value = {0.0, 0.0};
    r.series.converged = true;
    return r;
  }
  r.series = dp_series(m, t, u, max_levels, q);
  double lo = std::max(0.0, r.series.deficit_sum - r.series.error);
  double hi = std::min(a0_hi, r.series.deficit_sum + r.series.in_flight + r.series.error);
  r.value = Bracket(std::min(lo, hi), std::max(lo, hi));
  return r;
}

Bracket ahat_dp(const ModelSpec &m, double t, const PosSeq &u, double tol,
                const TruncationParams &params) {
  QuadParams q;
  q.tol = tol;
  double a0_hi = m.structurally_conservative() ? 0.0 : a0_on_integral(m, t, u, params).hi;
  return ahat_dp(m, t, u, a0_hi, q).value;
}

std::vector<DeltaResult> mass_loss_delta(const ModelSpec &m, const std::vector<double> &times,
                                         const PosSeq &u, double lambda,
                                         const DeltaParams &params) {
  check_lambda(lambda);
  Evolution ev = evolve(m, times, u, params.truncation);
  std::vector<DeltaResult> out;
  for (const auto &r : ev.at) {
    DeltaResult d;
    d.t = r.t;
    d.mass = r.mass;
    d.a0 = a0_on_integral(r, u);
    d.abar = abar_on_integral(m, lambda, r, u, d.a0, params.abar_tol);
    d.ahat = ahat_dp(m, r.t, u, d.a0.hi, params.quadrature, params.max_levels).value;
    if (r.t == 0.0) {
      d.via_abar = d.via_ahat = {0.0, 0.0};
    } else {
      d.via_abar = delta_from(d.mass, d.abar, u);
      d.via_ahat = delta_from(d.mass, d.ahat, u);
    }
    out.push_back(d);
  }
  return out;
}

DeltaResult mass_loss_delta(const ModelSpec &m, double t, const PosSeq &u, double lambda,
                            const DeltaParams &params) {
  return mass_loss_delta(m, std::vector<double>{t}, u, lambda, params).front();
}

Verdict classify(const Bracket &xi, double tol) {
  if (xi.hi <= tol)
    return Verdict::Honest;
  if (xi.lo > tol)
    return Verdict::Dishonest;
  return Verdict::Undetermined;
}

HonestyReport honesty_verdict(const ModelSpec &m, const PosSeq &u, double lambda,
                              const VerdictPolicy &policy) {
  check_lambda(lambda);
  if (!(u.sum() > 0.0))
    throw std::invalid_argument("honesty_verdict: u must be nonzero");
  HonestyReport rep;
  rep.model = m.name();
  rep.input = u;
  rep.lambda_used = lambda;
  rep.tol = policy.xi.verdict_tol;

  XiResult x = xi(m, lambda, u, policy.xi);
  rep.xi = x.bracket;
  rep.verdict = classify(x.bracket, rep.tol);
  rep.lower_certified = x.lower_certified;
  rep.xi_estimate = x.estimate;
  rep.iterations = x.iterations;
  rep.jn_norms = std::move(x.norms);

  for (double mu : policy.lambda_sweep)
    rep.lambda_sweep.push_back({mu, xi(m, mu, u, policy.xi).bracket});
  if (!policy.delta_times.empty())
    for (const auto &d : mass_loss_delta(m, policy.delta_times, u, lambda, policy.delta))
      rep.delta_samples.push_back({d.t, d.via_abar});
  if (policy.witness_t > 0.0) {
    DPSeries s = dp_series(m, policy.witness_t, u, policy.witness_levels, policy.delta.quadrature);
    rep.mild_witness = MildWitness{policy.witness_t, s.in_flight, s.K + 1, s.converged};
    rep.route = Route::Both;
  }
  return rep;
}

SubsolutionResult subsolution_check(const ModelSpec &m, double lambda, const PosSeq &u) {
  check_lambda(lambda);
  SubsolutionResult r;
  r.holds = leq(apply_J(m, lambda, u), u);
  r.implies_honest = r.holds == Tri::True;
  if (u.tail_bound() > 0.0)
    return r;
  std::vector<PosSeq::Entry> v;
  for (const auto &e : u.entries())
    v.push_back({e.index, (lambda + m.rate(e.index)) * e.value});
  r.v = PosSeq::from_entries(std::move(v));
  r.sub_eigen = leq(apply_B(m, u), r.v);
  return r;
}

HereditaryReport hereditary_audit(const ModelSpec &m, double lambda, const PosSeq &v,
                                  std::size_t samples, std::uint64_t seed,
                                  const XiPolicy &policy,
                                  const std::vector<double> &delta_times) {
  HereditaryReport rep;
  if (v.sum() == 0.0 && v.tail_bound() == 0.0) {
    rep.precondition = true;
    return rep;
  }
  if (classify(xi(m, lambda, v, policy).bracket, policy.verdict_tol) != Verdict::Honest)
    return rep;
  rep.precondition = true;
  for (std::size_t i = 0; i < samples; ++i) {
    PhiloxStream rng(seed, i);
    std::vector<PosSeq::Entry> es;
    for (const auto &e : v.entries())
      es.push_back({e.index, rng.uniform() * e.value});
    PosSeq u = PosSeq::from_entries(std::move(es), rng.uniform() * v.tail_bound());
    ++rep.samples;
    switch (classify(xi(m, lambda, u, policy).bracket, policy.verdict_tol)) {
    case Verdict::Honest:
      ++rep.honest;
      break;
    case Verdict::Dishonest:
      ++rep.dishonest;
      break;
    default:
      ++rep.undetermined;
    }
    if (!delta_times.empty()) {
      auto ds = mass_loss_delta(m, delta_times, u, lambda);
      std::sort(ds.begin(), ds.end(), [](const auto &a, const auto &b) { return a.t < b.t; });
      for (std::size_t j = 1; j < ds.size(); ++j)
        if (ds[j].via_abar.lo > ds[j - 1].via_abar.hi)
          rep.delta_monotone = false;
    }
  }
  return rep;
}

} // namespace honesty
