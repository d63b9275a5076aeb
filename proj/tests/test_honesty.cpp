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
#include "honesty/honesty.hpp"
#include "honesty/model_io.hpp"

using namespace honesty;

namespace {

const double kPi = std::acos(-1.0);

// prod_{k >= 1} k^2 / (k^2 + lambda), first n factors plus a bound on the rest
Bracket quadratic_product(double lambda, std::size_t n = 1000000) {
  double logp = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    double kk = static_cast<double>(k) * static_cast<double>(k);
    logp -= std::log1p(lambda / kk);
  }
  return {std::exp(logp - lambda / static_cast<double>(n)), std::exp(logp)};
}

double quadratic_closed(double lambda) {
  return std::sqrt(lambda) * kPi / std::sinh(std::sqrt(lambda) * kPi);
}

} // namespace

TEST_CASE("a_frak sums the column deficits") {
  ModelSpec ts = zoo_model("two_state");
  CHECK(a_frak(ts, PosSeq::basis(0)) == 0.0);
  CHECK(a_frak(ts, PosSeq::basis(1, 0.5)) == doctest::Approx(1.0));
  CHECK(a_frak(zoo_model("decay"), PosSeq::from_entries({{0, 1}, {9, 2}})) == doctest::Approx(3.0));
  CHECK(a_frak(zoo_model("yule"), PosSeq::basis(5)) == 0.0);
}

TEST_CASE("xi on quadratic birth matches the product oracle") {
  ModelSpec m = zoo_model("quadratic_birth");
  for (double lambda : {0.5, 1.0, 2.0}) {
    Bracket oracle = quadratic_product(lambda);
    double closed = quadratic_closed(lambda);
    CHECK(oracle.contains(closed));
    XiResult r = xi(m, lambda, PosSeq::basis(0));
    CHECK(r.lower_certified);
    CHECK(r.bracket.overlaps(oracle));
    CHECK(r.bracket.width() <= 1e-7 + 1e-15);
    CHECK(classify(r.bracket, 1e-7) == Verdict::Dishonest);
  }
}

TEST_CASE("xi norms are nonincreasing") {
  for (const char *name : {"quadratic_birth", "yule", "killed_birth_death"}) {
    XiResult r = xi(zoo_model(name), 1.0, PosSeq::basis(0), XiPolicy{.max_iter = 100000});
    for (std::size_t i = 1; i < r.norms.size(); ++i) {
      CHECK(r.norms[i].n > r.norms[i - 1].n);
      CHECK(r.norms[i].norm <= r.norms[i - 1].norm * (1 + 1e-12));
    }
  }
}

TEST_CASE("xi certifies honesty of Yule and of finite models") {
  XiResult y = xi(zoo_model("yule"), 1.0, PosSeq::basis(0));
  CHECK(y.bracket.lo == 0.0);
  CHECK(y.bracket.hi <= 1e-7);
  // ||J^n e_0|| = 1 / (n + 1) for Yule at lambda = 1
  CHECK(y.norms[9].norm == doctest::Approx(0.1).epsilon(1e-12));

  XiResult ts = xi(zoo_model("two_state"), 1.0, PosSeq::basis(0));
  CHECK(ts.bracket.hi == 0.0);
  CHECK(ts.iterations <= 3);
}

TEST_CASE("classify is three-valued") {
  CHECK(classify({0.0, 1e-8}, 1e-7) == Verdict::Honest);
  CHECK(classify({0.3, 0.4}, 1e-7) == Verdict::Dishonest);
  CHECK(classify({0.0, 0.4}, 1e-7) == Verdict::Undetermined);
  CHECK(classify({1e-7, 1e-7}, 1e-7) == Verdict::Honest);
}

TEST_CASE("dual weights stay in [0, 1] and pair with basis vectors") {
  ModelSpec m = zoo_model("quadratic_birth");
  DualWeight w = xi_dual(m, 1.0, 1 << 16, 50);
  CHECK(w.residual <= 1e-12);
  for (double v : w.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  for (std::size_t i = 0; i <= 10; ++i) {
    XiResult r = xi(m, 1.0, PosSeq::basis(i));
    // psi = 1 past N overestimates by about lambda / N
    CHECK(w.values[i] >= r.bracket.lo - 1e-12);
    CHECK(w.values[i] - r.bracket.hi <= 2.0 / (1 << 16));
  }
  CHECK(w.pair(PosSeq::basis(0)) == w.values[0]);

  DualWeight jac = xi_dual(m, 1.0, 256, 2000, DualSweep::Jacobi);
  DualWeight gs = xi_dual(m, 1.0, 256, 2000, DualSweep::GaussSeidel);
  CHECK(jac.values[0] == doctest::Approx(gs.values[0]).epsilon(1e-6));
}

TEST_CASE("dual weights vanish on an honest model") {
  DualWeight w = xi_dual(zoo_model("killed_birth_death"), 1.0, 512, 20000);
  CHECK(w.values[0] < 1e-6);
}

TEST_CASE("two-state functionals agree") {
  ModelSpec m = zoo_model("two_state");
  double exact = 1 - (2 * std::exp(-1.0) - std::exp(-2.0));
  Bracket a0 = a0_on_integral(m, 1.0, PosSeq::basis(0));
  CHECK(a0.mid() == doctest::Approx(exact).epsilon(1e-10));
  Bracket ah = ahat_dp(m, 1.0, PosSeq::basis(0));
  CHECK(ah.mid() == doctest::Approx(exact).epsilon(1e-9));
  // a_frak((1 - A)^{-1} ... ) : 2 * x_1 with x = (1/2, 1/6)
  Bracket ab = abar_resolvent(m, 1.0, PosSeq::basis(0));
  CHECK(ab.mid() == doctest::Approx(1.0 / 3).epsilon(1e-12));
  DeltaResult d = mass_loss_delta(m, 1.0, PosSeq::basis(0), 1.0);
  CHECK(d.abar.mid() == doctest::Approx(exact).epsilon(1e-9));
  CHECK(std::abs(d.via_abar.mid()) <= 1e-9);
  CHECK(std::abs(d.via_ahat.mid()) <= 1e-9);
}

TEST_CASE("ahat never exceeds a0") {
  for (const auto &name : zoo_names()) {
    ModelSpec m = zoo_model(name);
    DeltaResult d = mass_loss_delta(m, 0.7, PosSeq::basis(0), 1.0);
    CHECK_MESSAGE(d.ahat.lo <= d.a0.hi + 1e-12, name);
  }
}

TEST_CASE("mass loss on quadratic birth is negative and nonincreasing") {
  ModelSpec m = zoo_model("quadratic_birth");
  std::vector<double> times{0.25, 0.5, 1.0, 1.5, 2.0};
  auto rows = mass_loss_delta(m, times, PosSeq::basis(0), 1.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].via_abar.hi < 0);
    CHECK(rows[i].via_abar.lo <= rows[i].via_abar.hi);
    if (i > 0)
      CHECK(rows[i].via_abar.lo <= rows[i - 1].via_abar.hi);
  }
  // 1 - P(no explosion by 1), from numerical Laplace inversion
  CHECK(rows[2].via_abar.contains(0.6993741991 - 1));
}

TEST_CASE("mass loss vanishes on honest models") {
  for (const char *name : {"yule", "killed_birth_death", "decay", "birth_death"}) {
    DeltaResult d = mass_loss_delta(zoo_model(name), 1.0, PosSeq::basis(0), 1.0);
    CHECK_MESSAGE(d.via_abar.lo >= -1e-6, name);
    CHECK(d.via_abar.hi <= 0.0);
  }
}

TEST_CASE("honesty_verdict fills the report") {
  ModelSpec m = zoo_model("quadratic_birth");
  VerdictPolicy pol;
  pol.lambda_sweep = {0.5, 2.0};
  pol.delta_times = {0.5, 1.0};
  pol.witness_t = 1.0;
  HonestyReport r = honesty_verdict(m, PosSeq::basis(0), 1.0, pol);
  CHECK(r.verdict == Verdict::Dishonest);
  CHECK(r.model == "quadratic_birth");
  CHECK(r.lower_certified);
  CHECK(r.xi.contains(quadratic_closed(1.0)));
  REQUIRE(r.lambda_sweep.size() == 2);
  CHECK(r.lambda_sweep[0].xi.contains(quadratic_closed(0.5)));
  REQUIRE(r.delta_samples.size() == 2);
  CHECK(r.delta_samples[1].delta.hi < 0);
  REQUIRE(r.mild_witness);
  CHECK(r.mild_witness->in_flight > 0.0);
  CHECK_THROWS(honesty_verdict(m, PosSeq{}, 1.0));
  CHECK_THROWS(honesty_verdict(m, PosSeq::basis(0), -1.0));
}

TEST_CASE("honest trajectories stay honest") {
  ModelSpec m = zoo_model("killed_birth_death");
  PosSeq u = PosSeq::from_entries({{0, 0.2}, {3, 0.8}});
  REQUIRE(honesty_verdict(m, u, 1.0).verdict == Verdict::Honest);
  for (double t : {0.3, 1.0, 2.0}) {
    PosSeq vt = semigroup_V(m, t, u).value;
    CHECK(honesty_verdict(m, vt, 1.0).verdict == Verdict::Honest);
  }
}

TEST_CASE("subsolution criterion") {
  SubsolutionResult two = subsolution_check(zoo_model("two_state"), 1.0,
                                            PosSeq::from_entries({{0, 1}, {1, 1}}));
  CHECK(two.holds == Tri::True);
  CHECK(two.implies_honest);
  CHECK(two.sub_eigen == Tri::True);

  SubsolutionResult zero = subsolution_check(zoo_model("decay"), 1.0, PosSeq::basis(3));
  CHECK(zero.holds == Tri::True);

  // J e_0 = e_1 / 2 is not dominated by e_0
  SubsolutionResult q = subsolution_check(zoo_model("quadratic_birth"), 1.0, PosSeq::basis(0));
  CHECK(q.holds == Tri::False);
  CHECK_FALSE(q.implies_honest);
}

TEST_CASE("hereditary audit") {
  HereditaryReport empty = hereditary_audit(zoo_model("yule"), 1.0, PosSeq{}, 5, 11);
  CHECK(empty.ok());

  HereditaryReport kbd = hereditary_audit(zoo_model("killed_birth_death"), 1.0,
                                          PosSeq::from_entries({{0, 1}, {2, 1}}), 8, 3, {},
                                          {0.5, 1.0});
  CHECK(kbd.precondition);
  CHECK(kbd.samples == 8);
  CHECK(kbd.honest == 8);
  CHECK(kbd.ok());

  HereditaryReport q = hereditary_audit(zoo_model("quadratic_birth"), 1.0, PosSeq::basis(0), 3, 3);
  CHECK_FALSE(q.precondition);
  CHECK(q.ok());
}
