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

#include "honesty/report_io.hpp"

#include "honesty/model_io.hpp"
#include "json.hpp"

namespace honesty {

using nlohmann::json;

namespace {

json bracket_json(const Bracket &b) { return {{"lo", b.lo}, {"hi", b.hi}}; }
Bracket bracket_of(const json &j) { return {j.at("lo").get<double>(), j.at("hi").get<double>()}; }

} // namespace

std::string report_to_json(const HonestyReport &r) {
  json entries = json::array();
  for (const auto &e : r.input.entries())
    entries.push_back({e.index, e.value});
  json norms = json::array();
  for (const auto &s : r.jn_norms)
    norms.push_back({s.n, s.norm});
  json sweep = json::array();
  for (const auto &s : r.lambda_sweep)
    sweep.push_back({{"lambda", s.lambda}, {"xi", bracket_json(s.xi)}});
  json deltas = json::array();
  for (const auto &s : r.delta_samples)
    deltas.push_back({{"t", s.t}, {"lo", s.delta.lo}, {"hi", s.delta.hi}});
  json witness = nullptr;
  if (r.mild_witness)
    witness = {{"t", r.mild_witness->t},
               {"in_flight", r.mild_witness->in_flight},
               {"levels", r.mild_witness->levels},
               {"converged", r.mild_witness->converged}};
  json doc = {
      {"model", r.model},
      {"input", {{"entries", entries}, {"tail_bound", r.input.tail_bound()}}},
      {"verdict", to_string(r.verdict)},
      {"xi", bracket_json(r.xi)},
      {"lambda_used", r.lambda_used},
      {"tol", r.tol},
      {"route", to_string(r.route)},
      {"evidence",
       {{"lower_certified", r.lower_certified},
        {"xi_estimate", r.xi_estimate ? json(*r.xi_estimate) : json(nullptr)},
        {"iterations", r.iterations},
        {"jn_norms", norms},
        {"lambda_sweep", sweep},
        {"delta_samples", deltas},
        {"mild_witness", witness}}},
  };
  return doc.dump(2);
}

HonestyReport report_from_json(const std::string &text) {
  HonestyReport r;
  try {
    json doc = json::parse(text);
    r.model = doc.at("model").get<std::string>();
    std::vector<PosSeq::Entry> es;
    for (const auto &e : doc.at("input").at("entries"))
      es.push_back({e.at(0).get<std::size_t>(), e.at(1).get<double>()});
    r.input = PosSeq::from_entries(std::move(es), doc.at("input").at("tail_bound").get<double>());
    r.verdict = verdict_from_string(doc.at("verdict").get<std::string>());
    r.xi = bracket_of(doc.at("xi"));
    r.lambda_used = doc.at("lambda_used").get<double>();
    r.tol = doc.at("tol").get<double>();
    r.route = route_from_string(doc.at("route").get<std::string>());
    const json &ev = doc.at("evidence");
    r.lower_certified = ev.at("lower_certified").get<bool>();
    if (!ev.at("xi_estimate").is_null())
      r.xi_estimate = ev.at("xi_estimate").get<double>();
    r.iterations = ev.at("iterations").get<std::size_t>();
    for (const auto &s : ev.at("jn_norms"))
      r.jn_norms.push_back({s.at(0).get<std::size_t>(), s.at(1).get<double>()});
    for (const auto &s : ev.at("lambda_sweep"))
      r.lambda_sweep.push_back({s.at("lambda").get<double>(), bracket_of(s.at("xi"))});
    for (const auto &s : ev.at("delta_samples"))
      r.delta_samples.push_back({s.at("t").get<double>(), {s.at("lo").get<double>(), s.at("hi").get<double>()}});
    const json &w = ev.at("mild_witness");
    if (!w.is_null())
      r.mild_witness = MildWitness{w.at("t").get<double>(), w.at("in_flight").get<double>(),
                                   w.at("levels").get<std::size_t>(), w.at("converged").get<bool>()};
  } catch (const json::exception &e) {
    throw SchemaError(std::string("report: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
  return r;
}

} // namespace honesty
