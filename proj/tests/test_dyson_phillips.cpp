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
#include "honesty/dyson_phillips.hpp"
#include "honesty/model_io.hpp"
#include "honesty/resolvent.hpp"

using namespace honesty;

TEST_CASE("V_0 is the diagonal semigroup") {
  ModelSpec m = zoo_model("killed_birth_death");
  PosSeq u = PosSeq::from_entries({{0, 0.5}, {2, 0.5}});
  auto r = dp_term(m, 0, 0.8, u);
  CHECK(r.value.at(0) == doctest::Approx(0.5 * std::exp(-0.8 * m.rate(0))).epsilon(1e-15));
  CHECK(r.value.at(2) == doctest::Approx(0.5 * std::exp(-0.8 * m.rate(2))).epsilon(1e-15));
  CHECK(r.error == 0.0);
}

TEST_CASE("two-state first iterate closed form") {
  ModelSpec m = zoo_model("two_state");
  for (double t : {0.3, 1.0, 2.5}) {
    auto r = dp_term(m, 1, t, PosSeq::basis(0));
    CHECK(r.converged);
    CHECK(r.value.at(0) == 0.0);
    CHECK(r.value.at(1) == doctest::Approx(std::exp(-t) - std::exp(-2 * t)).epsilon(1e-10));
    CHECK(dp_term(m, 2, t, PosSeq::basis(0)).value.is_zero());
  }
}

TEST_CASE("Yule iterates are the n-jump probabilities") {
  ModelSpec m = zoo_model("yule");
  double t = 1.0, p = std::exp(-t);
  for (std::size_t n = 0; n <= 6; ++n) {
    auto r = dp_term(m, n, t, PosSeq::basis(0));
    double exact = p * std::pow(1 - p, static_cast<double>(n));
    CHECK(r.value.at(n) == doctest::Approx(exact).epsilon(1e-9));
    CHECK(r.value.sum() == doctest::Approx(exact).epsilon(1e-9));
    CHECK(std::abs(r.value.at(n) - exact) <= r.error + 1e-12);
  }
}

TEST_CASE("partial sums increase to the semigroup") {
  ModelSpec m = zoo_model("two_state");
  auto s = dp_partial_sum(m, 3, 1.0, PosSeq::basis(0));
  auto v = semigroup_V(m, 1.0, PosSeq::basis(0));
  CHECK(s.value.at(0) == doctest::Approx(v.value.at(0)).epsilon(1e-10));
  CHECK(s.value.at(1) == doctest::Approx(v.value.at(1)).epsilon(1e-10));

  ModelSpec y = zoo_model("yule");
  double prev = 0.0;
  for (std::size_t K : {0u, 2u, 5u, 10u}) {
    auto ps = dp_partial_sum(y, K, 0.5, PosSeq::basis(0));
    CHECK(ps.value.sum() >= prev);
    CHECK(ps.value.sum() <= 1.0 + ps.error);
    prev = ps.value.sum();
  }
  // 1 - (1 - e^{-t})^{K+1}
  CHECK(prev == doctest::Approx(1 - std::pow(1 - std::exp(-0.5), 11)).epsilon(1e-9));
}

TEST_CASE("Laplace transform of V_n is (lambda - A)^{-1} J^n u") {
  for (const char *name : {"two_state", "yule", "killed_birth_death", "quadratic_birth"}) {
    ModelSpec m = zoo_model(name);
    double lambda = 1.0;
    PosSeq jn = PosSeq::basis(0);
    for (std::size_t n = 0; n <= 6; ++n) {
      PosSeq expect = apply_resolvent_A(m, lambda, jn);
      auto lap = dp_laplace(m, n, lambda, PosSeq::basis(0));
      double diff = 0;
      for (std::size_t k = 0; k < 16; ++k)
        diff += std::abs(lap.value.at(k) - expect.at(k));
      CHECK_MESSAGE(diff <= lap.error + 1e-10, name << " n=" << n << " diff=" << diff);
      jn = apply_J(m, lambda, jn);
    }
  }
}

TEST_CASE("convolution identity for n <= 4") {
  for (const char *name : {"two_state", "yule", "killed_birth_death"}) {
    ModelSpec m = zoo_model(name);
    for (std::size_t n = 0; n <= 4; ++n) {
      auto c = dp_convolution_residual(m, n, 0.4, 0.7, PosSeq::basis(0));
      CHECK_MESSAGE(c.residual <= 1e-9, name << " n=" << n);
      CHECK(c.error < 1e-8);
    }
  }
  CHECK_THROWS(dp_convolution_residual(zoo_model("yule"), 5, 0.1, 0.1, PosSeq::basis(0)));
}

TEST_CASE("integrals of iterates") {
  ModelSpec m = zoo_model("two_state");
  double t = 1.0, e1 = std::exp(-t), e2 = std::exp(-2 * t);
  auto i0 = dp_integral(m, 0, t, PosSeq::basis(0));
  auto i1 = dp_integral(m, 1, t, PosSeq::basis(0));
  CHECK(i0.value.at(0) == doctest::Approx(1 - e1).epsilon(1e-10));
  CHECK(i1.value.at(1) == doctest::Approx((1 - e1) - (1 - e2) / 2).epsilon(1e-10));
  // B int V_0: the mass carried across to state 1
  auto b0 = dp_B_integral(m, 0, t, PosSeq::basis(0));
  CHECK(b0.value.at(1) == doctest::Approx(1 - e1).epsilon(1e-10));
}

TEST_CASE("uniform tail bound dominates every iterate") {
  ModelSpec m = zoo_model("two_state");
  auto ut = dp_uniform_tail(m, 4, 1.0, 1.0, PosSeq::basis(0));
  CHECK(ut.all_below);
  // e^{-lambda t} + int_t^inf e^{-2s} ds
  CHECK(ut.bound == doctest::Approx(std::exp(-1.0) + std::exp(-2.0) / 2).epsilon(1e-12));
  for (std::size_t n = 0; n < ut.computed.size(); ++n)
    CHECK(ut.computed[n] <= ut.bound + ut.errors[n]);
}

TEST_CASE("dp_series: deficit sums") {
  // killed birth-death: every unit of mass is eventually killed at rate 1
  ModelSpec kbd = zoo_model("killed_birth_death");
  auto s = dp_series(kbd, 1.0, PosSeq::basis(0));
  CHECK(s.converged);
  CHECK(s.deficit_sum == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-8));

  // two-state: the kernel moves 0 -> 1 once, deficits are 0 at state 0 and 2 at state 1
  ModelSpec ts = zoo_model("two_state");
  auto t2 = dp_series(ts, 1.0, PosSeq::basis(0));
  CHECK(t2.converged);
  CHECK(t2.K <= 2);
  double i1 = (1 - std::exp(-1.0)) - (1 - std::exp(-2.0)) / 2;
  CHECK(t2.deficit_sum == doctest::Approx(2 * i1).epsilon(1e-9));

  // Yule is conservative, all deficits vanish
  auto yl = dp_series(zoo_model("yule"), 1.0, PosSeq::basis(0));
  CHECK(yl.deficit_sum == 0.0);
}
