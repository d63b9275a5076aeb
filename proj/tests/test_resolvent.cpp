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

#include <cmath>

#include "doctest.h"
#include "honesty/model_io.hpp"
#include "honesty/quadrature.hpp"
#include "honesty/resolvent.hpp"

using namespace honesty;

namespace {

// prod_{k < n} (k+1)^2 / ((k+1)^2 + lambda) with a sum 1/m^2 tail bound
Bracket quadratic_product(double lambda, std::size_t n = 1000000) {
  double logp = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    double kk = static_cast<double>(k) * static_cast<double>(k);
    logp -= std::log1p(lambda / kk);
  }
  double tail = lambda / static_cast<double>(n); // sum_{m > n} lambda / m^2
  return {std::exp(logp - tail), std::exp(logp)};
}

// Bracket membership up to a few ulps of rounding in the bracket edges.
bool holds(const Bracket &b, double x, double slack = 1e-14) {
  return b.lo - slack <= x && x <= b.hi + slack;
}

} // namespace

TEST_CASE("two-state resolvent closed form") {
  ModelSpec m = zoo_model("two_state");
  for (double lambda : {0.25, 1.0, 3.0}) {
    auto r = resolvent_G(m, lambda, PosSeq::basis(0), 1e-14);
    CHECK(r.converged);
    double x0 = 1 / (lambda + 1);
    CHECK(r.value.at(0) == doctest::Approx(x0).epsilon(1e-14));
    CHECK(r.value.at(1) == doctest::Approx(x0 / (lambda + 2)).epsilon(1e-14));
    CHECK(holds(r.mass(), x0 + x0 / (lambda + 2)));
  }
}

TEST_CASE("honest conservative models keep lambda R(lambda) mass one") {
  for (const char *name : {"yule", "birth_death"}) {
    ModelSpec m = zoo_model(name);
    auto r = resolvent_G(m, 1.0, PosSeq::basis(0), 1e-6);
    CHECK(r.converged);
    CHECK(holds(r.mass(), 1.0));
    CHECK(r.mass().width() <= 1e-6 + 1e-12);
  }
}

TEST_CASE("quadratic birth loses exactly the partial-product mass") {
  ModelSpec m = zoo_model("quadratic_birth");
  Bracket xi = quadratic_product(1.0);
  // the certified defect shrinks like 1/n here, so 1e-6 is what 2^20 terms buy
  auto r = resolvent_G(m, 1.0, PosSeq::basis(0), 1e-6);
  CHECK(r.converged);
  // lambda ||R u|| = ||u|| - xi for a conservative kernel
  CHECK(r.mass().overlaps(Bracket{1 - xi.hi, 1 - xi.lo}));
  CHECK(r.mass().width() <= 1e-6 + 1e-12);
  auto tight = resolvent_G(m, 1.0, PosSeq::basis(0), 1e-9);
  CHECK_FALSE(tight.converged);
  CHECK(tight.terms_used == kDefaultMaxTerms);
  CHECK(tight.mass().overlaps(Bracket{1 - xi.hi, 1 - xi.lo}));
}

TEST_CASE("resolvent_G is linear and positive") {
  ModelSpec m = zoo_model("killed_birth_death");
  PosSeq u = PosSeq::from_entries({{0, 0.3}, {4, 0.7}});
  auto a = resolvent_G(m, 2.0, PosSeq::basis(0, 0.3), 1e-13);
  auto b = resolvent_G(m, 2.0, PosSeq::basis(4, 0.7), 1e-13);
  auto ab = resolvent_G(m, 2.0, u, 1e-13);
  for (std::size_t k = 0; k < 12; ++k) {
    CHECK(ab.value.at(k) >= 0);
    CHECK(ab.value.at(k) == doctest::Approx(a.value.at(k) + b.value.at(k)).epsilon(1e-10));
  }
}

TEST_CASE("resolvent_Gr is monotone in r and tends to resolvent_G") {
  ModelSpec m = zoo_model("yule");
  double prev = 0;
  for (double r : {0.0, 0.5, 0.9, 0.99}) {
    auto g = resolvent_Gr(m, 1.0, r, PosSeq::basis(0), 1e-10);
    CHECK(g.converged);
    CHECK(g.mass().lo >= prev);
    prev = g.mass().lo;
    if (r == 0.0)
      CHECK(g.value.at(0) == doctest::Approx(0.5));
  }
  // Yule: the r-series sums a geometric law, ||.|| = sum_n r^n / (n+2) ... bounded by 1
  CHECK(prev < 1.0);
  CHECK_THROWS(resolvent_Gr(m, 1.0, 1.0, PosSeq::basis(0)));
}

TEST_CASE("two-state semigroup and its integral") {
  ModelSpec m = zoo_model("two_state");
  for (double t : {0.5, 1.0, 2.0}) {
    auto r = semigroup_V(m, t, PosSeq::basis(0));
    double e1 = std::exp(-t), e2 = std::exp(-2 * t);
    CHECK(r.value.at(0) == doctest::Approx(e1).epsilon(1e-12));
    CHECK(r.value.at(1) == doctest::Approx(e1 - e2).epsilon(1e-12));
    CHECK(r.integral.at(0) == doctest::Approx(1 - e1).epsilon(1e-12));
    CHECK(r.integral.at(1) == doctest::Approx((1 - e1) - (1 - e2) / 2).epsilon(1e-12));
    CHECK(holds(r.mass, 2 * e1 - e2));
  }
}

TEST_CASE("Yule semigroup is the geometric law") {
  ModelSpec m = zoo_model("yule");
  double t = 0.7, p = std::exp(-t);
  auto r = semigroup_V(m, t, PosSeq::basis(0));
  for (std::size_t k = 0; k < 30; ++k)
    CHECK(r.value.at(k) == doctest::Approx(p * std::pow(1 - p, static_cast<double>(k))).epsilon(1e-9));
  CHECK(holds(r.mass, 1.0));
  CHECK(r.converged);
}

TEST_CASE("semigroup law V(s)V(t) = V(s+t)") {
  ModelSpec m = zoo_model("killed_birth_death");
  PosSeq u = PosSeq::from_entries({{0, 0.5}, {3, 0.5}});
  auto vt = semigroup_V(m, 0.4, u);
  auto vst = semigroup_V(m, 0.3, vt.value);
  auto direct = semigroup_V(m, 0.7, u);
  for (std::size_t k = 0; k < 20; ++k)
    CHECK(vst.value.at(k) == doctest::Approx(direct.value.at(k)).epsilon(1e-8).scale(1));
}

TEST_CASE("quadratic birth mass brackets contain the inverse-Laplace reference") {
  // 1 - P(explosion by t), from numerical Laplace inversion of the
  // first-passage transform prod (k+1)^2 / ((k+1)^2 + s)
  ModelSpec m = zoo_model("quadratic_birth");
  std::vector<double> times{0.25, 0.5, 1.0, 2.0};
  std::vector<double> ref{0.9996332922, 0.9639452437, 0.6993741991, 0.2699996717};
  auto ev = evolve(m, times, PosSeq::basis(0));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto &r = ev.at[i];
    CHECK(r.t == times[i]);
    CHECK(r.mass.contains(ref[i]));
    CHECK(r.mass.hi <= r.certified_hi + 1e-15);
    CHECK(r.mass.width() < 5e-3);
  }
  CHECK(ev.ladder.monotone);
}

TEST_CASE("truncation ladder is monotone and t = 0 is the identity") {
  ModelSpec m = zoo_model("yule");
  PosSeq u = PosSeq::from_entries({{1, 0.25}, {2, 0.75}});
  auto ev = evolve(m, {0.0, 0.5}, u);
  CHECK(ev.ladder.monotone);
  CHECK(ev.at[0].value.at(1) == 0.25);
  CHECK(ev.at[0].value.at(2) == 0.75);
  CHECK(ev.at[0].integral.is_zero());
  CHECK_THROWS(semigroup_V(m, -1.0, u));
}

TEST_CASE("Laplace transform of the mass matches the resolvent mass") {
  // lambda int_0^inf e^{-lambda t} ||V(t)u|| dt = lambda ||R(lambda)u|| for u >= 0
  const double lambda = 1.0, T = 40.0;
  const GaussRule &g = gauss_legendre(64);
  for (const char *name : {"two_state", "killed_birth_death", "quadratic_birth"}) {
    ModelSpec m = zoo_model(name);
    PosSeq u = PosSeq::basis(0);
    // four panels over [0, T], the tail beyond T is below e^{-40}
    std::vector<double> times, weights;
    for (int p = 0; p < 4; ++p)
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        double a = T * p / 4, h = T / 4;
        times.push_back(a + h * g.x[i]);
        weights.push_back(h * g.w[i]);
      }
    auto ev = evolve(m, times, u);
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      double w = lambda * weights[i] * std::exp(-lambda * times[i]);
      lo += w * ev.at[i].mass.lo;
      hi += w * ev.at[i].mass.hi;
    }
    auto r = resolvent_G(m, lambda, u, 1e-6);
    Bracket lap{lo - 1e-6, hi + 1e-6 + std::exp(-lambda * T)};
    Bracket res{lambda * r.mass().lo, lambda * r.mass().hi};
    CHECK_MESSAGE(lap.overlaps(res), name << ": [" << lap.lo << ", " << lap.hi << "] vs ["
                                          << res.lo << ", " << res.hi << "]");
  }
}
