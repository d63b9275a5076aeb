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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "honesty/honesty.hpp"
#include "honesty/jump_sim.hpp"
#include "honesty/model_io.hpp"
#include "honesty/report_io.hpp"

namespace py = pybind11;
using namespace honesty;

namespace {

PosSeq to_seq(const std::map<std::size_t, double> &u, double tail) {
  std::vector<PosSeq::Entry> es;
  for (const auto &[k, v] : u)
    es.push_back({k, v});
  return PosSeq::from_entries(std::move(es), tail);
}

std::map<std::size_t, double> from_seq(const PosSeq &u) {
  std::map<std::size_t, double> out;
  for (const auto &e : u.entries())
    out[e.index] = e.value;
  return out;
}

py::tuple bracket(const Bracket &b) { return py::make_tuple(b.lo, b.hi); }

} // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Honesty diagnostics for perturbed substochastic semigroups on l1";

  py::register_exception<SchemaError>(mod, "SchemaError", PyExc_ValueError);

  py::class_<ModelSpec>(mod, "Model")
      .def_property_readonly("name", &ModelSpec::name)
      .def_property_readonly("conservative", &ModelSpec::conservative)
      .def("rate", &ModelSpec::rate)
      .def("deficit", &ModelSpec::deficit)
      .def("to_json", [](const ModelSpec &m) { return model_to_json(m); })
      .def("__repr__", [](const ModelSpec &m) { return "<Model " + m.name() + ">"; });

  mod.def("zoo_model", &zoo_model, py::arg("name"));
  mod.def("zoo_names", &zoo_names);
  mod.def("parse_model", &parse_model, py::arg("text"));
  mod.def("load_model", &load_model_file, py::arg("path"));

  mod.def(
      "resolvent",
      [](const ModelSpec &m, double lambda, const std::map<std::size_t, double> &u, double tol) {
        SeriesResult r = resolvent_G(m, lambda, to_seq(u, 0.0), tol);
        return py::make_tuple(from_seq(r.value), bracket(r.mass()), r.converged);
      },
      py::arg("model"), py::arg("lam"), py::arg("u"), py::arg("tol") = 1e-8,
      "(lambda - G)^{-1} u: (entries, mass bracket, converged)");

  mod.def(
      "semigroup",
      [](const ModelSpec &m, double t, const std::map<std::size_t, double> &u) {
        SemigroupResult r = semigroup_V(m, t, to_seq(u, 0.0));
        return py::make_tuple(from_seq(r.value), bracket(r.mass), bracket(r.integral_mass));
      },
      py::arg("model"), py::arg("t"), py::arg("u"),
      "V(t)u: (entries, mass bracket, integral mass bracket)");

  mod.def(
      "xi",
      [](const ModelSpec &m, double lambda, const std::map<std::size_t, double> &u) {
        return bracket(xi(m, lambda, to_seq(u, 0.0)).bracket);
      },
      py::arg("model"), py::arg("lam"), py::arg("u"));

  mod.def(
      "xi_dual",
      [](const ModelSpec &m, double lambda, std::size_t N, std::size_t iters) {
        DualWeight w = xi_dual(m, lambda, N, iters);
        return py::make_tuple(w.values, w.residual);
      },
      py::arg("model"), py::arg("lam"), py::arg("N"), py::arg("iters"));

  mod.def(
      "verdict_report",
      [](const ModelSpec &m, const std::map<std::size_t, double> &u, double lambda, double tol,
         std::vector<double> delta_times) {
        VerdictPolicy pol;
        pol.xi.verdict_tol = tol;
        pol.xi.width_tol = tol;
        pol.delta_times = std::move(delta_times);
        return report_to_json(honesty_verdict(m, to_seq(u, 0.0), lambda, pol));
      },
      py::arg("model"), py::arg("u"), py::arg("lam") = 1.0, py::arg("tol") = 1e-7,
      py::arg("delta_times") = std::vector<double>{}, "HonestyReport as a JSON string");

  mod.def(
      "mass_loss",
      [](const ModelSpec &m, const std::vector<double> &times,
         const std::map<std::size_t, double> &u, double lambda) {
        py::list out;
        for (const auto &r : mass_loss_delta(m, times, to_seq(u, 0.0), lambda))
          out.append(py::make_tuple(r.t, bracket(r.via_abar), bracket(r.via_ahat)));
        return out;
      },
      py::arg("model"), py::arg("times"), py::arg("u"), py::arg("lam") = 1.0,
      "[(t, delta via abar, delta via ahat)]");

  mod.def(
      "simulate",
      [](const ModelSpec &m, const std::map<std::size_t, double> &u, double t,
         std::size_t paths, std::uint64_t seed) {
        SimResult r = simulate(m, to_seq(u, 0.0), t, paths, seed);
        py::dict d;
        d["survival"] = py::make_tuple(r.survival.p, r.survival.ci);
        d["exploded"] = py::make_tuple(r.exploded.p, r.exploded.ci);
        d["killed"] = py::make_tuple(r.killed.p, r.killed.ci);
        d["aborted"] = r.aborted;
        return d;
      },
      py::arg("model"), py::arg("u"), py::arg("t"), py::arg("paths"), py::arg("seed"));
}
