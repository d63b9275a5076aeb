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

#include <cstring>

#include "doctest.h"
#include "honesty/model_io.hpp"
#include "honesty/report_io.hpp"

using namespace honesty;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void check_same(const HonestyReport &a, const HonestyReport &b) {
  CHECK(a.model == b.model);
  CHECK(a.input == b.input);
  CHECK(a.verdict == b.verdict);
  CHECK(same_bits(a.xi.lo, b.xi.lo));
  CHECK(same_bits(a.xi.hi, b.xi.hi));
  CHECK(same_bits(a.lambda_used, b.lambda_used));
  CHECK(same_bits(a.tol, b.tol));
  CHECK(a.route == b.route);
  CHECK(a.lower_certified == b.lower_certified);
  CHECK(a.xi_estimate.has_value() == b.xi_estimate.has_value());
  if (a.xi_estimate && b.xi_estimate)
    CHECK(same_bits(*a.xi_estimate, *b.xi_estimate));
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.jn_norms.size() == b.jn_norms.size());
  for (std::size_t i = 0; i < a.jn_norms.size(); ++i) {
    CHECK(a.jn_norms[i].n == b.jn_norms[i].n);
    CHECK(same_bits(a.jn_norms[i].norm, b.jn_norms[i].norm));
  }
  CHECK(a.lambda_sweep == b.lambda_sweep);
  CHECK(a.delta_samples == b.delta_samples);
  CHECK(a.mild_witness == b.mild_witness);
}

} // namespace

TEST_CASE("report round trip is bit exact") {
  VerdictPolicy pol;
  pol.lambda_sweep = {0.5, 2.0};
  pol.delta_times = {0.5, 1.0};
  pol.witness_t = 0.5;
  pol.witness_levels = 32;
  for (const char *name : {"quadratic_birth", "two_state", "killed_birth_death"}) {
    HonestyReport r = honesty_verdict(zoo_model(name), PosSeq::from_entries({{0, 0.3}, {2, 0.7}}),
                                      1.0, pol);
    std::string text = report_to_json(r);
    HonestyReport back = report_from_json(text);
    check_same(r, back);
    CHECK(report_to_json(back) == text);
  }
}

TEST_CASE("optional fields are written as null") {
  HonestyReport r;
  r.model = "m";
  r.input = PosSeq::basis(0);
  r.xi = {0.0, 0.0};
  std::string text = report_to_json(r);
  CHECK(text.find("\"xi_estimate\": null") != std::string::npos);
  CHECK(text.find("\"mild_witness\": null") != std::string::npos);
  HonestyReport back = report_from_json(text);
  CHECK_FALSE(back.xi_estimate);
  CHECK_FALSE(back.mild_witness);
}

TEST_CASE("awkward doubles survive") {
  HonestyReport r;
  r.model = "edge";
  r.input = PosSeq::from_entries({{3, 0.1}, {7, 1e-300}}, 5e-324);
  r.xi = {0.1 + 0.2, 1.0 / 3};
  r.xi_estimate = 2.2250738585072014e-308;
  r.tol = 1e-7;
  HonestyReport back = report_from_json(report_to_json(r));
  check_same(r, back);
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(report_from_json("{"), SchemaError);
  CHECK_THROWS_AS(report_from_json("{}"), SchemaError);
  HonestyReport r;
  r.model = "m";
  r.input = PosSeq::basis(0);
  std::string text = report_to_json(r);
  auto pos = text.find("Undetermined");
  text.replace(pos, std::strlen("Undetermined"), "Maybe");
  CHECK_THROWS_AS(report_from_json(text), SchemaError);
}
