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

// honesty_lab: command-line front end.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "honesty/honesty.hpp"
#include "honesty/jump_sim.hpp"
#include "honesty/model_io.hpp"
#include "honesty/report_io.hpp"
#include "json.hpp"

using namespace honesty;

namespace {

constexpr int kExitHonest = 0;
constexpr int kExitDishonest = 10;
constexpr int kExitUndetermined = 20;
constexpr int kExitError = 1;
constexpr int kExitMismatch = 2;

struct RunConfig {
  std::string model;
  double lambda = 1.0;
  double tol = 1e-7;
  std::string t_grid;
  std::size_t paths = 100000;
  std::uint64_t seed = 1;
  std::string out;
  std::string u = "0:1";
  std::vector<double> sweep;
  double witness = 0.0;
  std::size_t n_max = TruncationParams{}.n_max;
};

ModelSpec load_model(const std::string &what) {
  for (const auto &n : zoo_names())
    if (n == what)
      return zoo_model(n);
  return load_model_file(what);
}

/// "a:b:step", both ends included; a bare number is a one-point grid.
std::vector<double> parse_grid(const std::string &s) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    std::size_t used = 0;
    double x = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(x))
      throw std::invalid_argument("bad number '" + tok + "' in grid");
    parts.push_back(x);
  }
  if (parts.size() == 1)
    parts = {parts[0], parts[0], 1.0};
  if (parts.size() != 3)
    throw std::invalid_argument("grid must be a:b:step");
  double a = parts[0], b = parts[1], h = parts[2];
  if (a < 0 || b < a || h <= 0)
    throw std::invalid_argument("grid needs 0 <= a <= b and step > 0");
  std::vector<double> g;
  auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
  for (std::size_t i = 0; i <= n; ++i)
    g.push_back(a + static_cast<double>(i) * h);
  if (b - g.back() > 1e-9 * std::max(1.0, b))
    g.push_back(b);
  else
    g.back() = b;
  return g;
}

/// "k:v,k:v,..."
PosSeq parse_u(const std::string &s) {
  std::vector<PosSeq::Entry> es;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--u entries are index:value");
    long long k = std::stoll(tok.substr(0, colon));
    double v = std::stod(tok.substr(colon + 1));
    if (k < 0 || !(v >= 0) || !std::isfinite(v))
      throw std::invalid_argument("--u needs nonnegative indices and values");
    es.push_back({static_cast<std::size_t>(k), v});
  }
  return PosSeq::from_entries(std::move(es));
}

void emit(const std::string &text, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f)
    throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int exit_for(Verdict v) {
  switch (v) {
  case Verdict::Honest: return kExitHonest;
  case Verdict::Dishonest: return kExitDishonest;
  default: return kExitUndetermined;
  }
}

DeltaParams delta_params(const RunConfig &c) {
  DeltaParams p;
  p.truncation.n_max = c.n_max;
  return p;
}

int cmd_verdict(const RunConfig &c) {
  ModelSpec m = load_model(c.model);
  VerdictPolicy pol;
  pol.xi.verdict_tol = c.tol;
  pol.xi.width_tol = c.tol;
  pol.lambda_sweep = c.sweep;
  pol.witness_t = c.witness;
  pol.delta = delta_params(c);
  if (!c.t_grid.empty())
    pol.delta_times = parse_grid(c.t_grid);
  HonestyReport r = honesty_verdict(m, parse_u(c.u), c.lambda, pol);
  emit(report_to_json(r) + "\n", c.out);
  std::cerr << m.name() << ": " << to_string(r.verdict) << ", xi in [" << num(r.xi.lo) << ", "
            << num(r.xi.hi) << "]\n";
  return exit_for(r.verdict);
}

int cmd_trajectory(const RunConfig &c) {
  ModelSpec m = load_model(c.model);
  if (c.t_grid.empty())
    throw std::invalid_argument("trajectory needs --t-grid");
  auto rows = mass_loss_delta(m, parse_grid(c.t_grid), parse_u(c.u), c.lambda, delta_params(c));
  std::string csv = "t,mass_lo,mass_hi,abar,ahat,delta_lo,delta_hi\n";
  for (const auto &r : rows)
    csv += num(r.t) + "," + num(r.mass.lo) + "," + num(r.mass.hi) + "," + num(r.abar.mid()) +
           "," + num(r.ahat.mid()) + "," + num(r.via_abar.lo) + "," + num(r.via_abar.hi) + "\n";
  emit(csv, c.out);
  return 0;
}

int cmd_compare(const RunConfig &c) {
  ModelSpec m = load_model(c.model);
  std::vector<double> grid = c.t_grid.empty() ? std::vector<double>{0.5, 1.0} : parse_grid(c.t_grid);
  auto rows = mass_loss_delta(m, grid, parse_u(c.u), c.lambda, delta_params(c));
  nlohmann::json samples = nlohmann::json::array();
  double worst = 0.0;
  for (const auto &r : rows) {
    double d = std::abs(r.via_abar.mid() - r.via_ahat.mid());
    worst = std::max(worst, d);
    samples.push_back({{"t", r.t},
                       {"resolvent", {{"lo", r.via_abar.lo}, {"hi", r.via_abar.hi}}},
                       {"dyson_phillips", {{"lo", r.via_ahat.lo}, {"hi", r.via_ahat.hi}}},
                       {"discrepancy", d}});
  }
  bool pass = worst <= c.tol;
  nlohmann::json doc = {{"model", m.name()},  {"lambda", c.lambda}, {"tol", c.tol},
                        {"max_discrepancy", worst}, {"pass", pass}, {"samples", samples}};
  emit(doc.dump(2) + "\n", c.out);
  std::cerr << m.name() << ": max discrepancy " << num(worst) << (pass ? " (pass)\n" : " (FAIL)\n");
  return pass ? 0 : kExitMismatch;
}

int cmd_simulate(const RunConfig &c) {
  ModelSpec m = load_model(c.model);
  std::vector<double> grid = c.t_grid.empty() ? std::vector<double>{1.0} : parse_grid(c.t_grid);
  PosSeq u = parse_u(c.u);
  std::vector<SimResult> rows;
  std::size_t aborted = 0;
  for (double t : grid) {
    rows.push_back(simulate(m, u, t, c.paths, c.seed));
    aborted += rows.back().aborted;
  }
  emit(simulation_csv(rows), c.out);
  if (aborted)
    std::cerr << "warning: " << aborted << " paths hit the jump cap and were excluded\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Honesty diagnostics for perturbed substochastic semigroups on l1"};
  app.require_subcommand(1);
  RunConfig c;
  auto common = [&](CLI::App *s) {
    s->add_option("--model", c.model, "model JSON file or zoo name")->required();
    s->add_option("--lambda", c.lambda, "resolvent parameter")->check(CLI::PositiveNumber);
    s->add_option("--tol", c.tol, "verdict or comparison tolerance")->check(CLI::PositiveNumber);
    s->add_option("--t-grid", c.t_grid, "a:b:step, both ends included");
    s->add_option("--u", c.u, "initial vector as index:value,...");
    s->add_option("--out", c.out, "output file (stdout when omitted)");
    s->add_option("--n-max", c.n_max, "largest truncation size")->check(CLI::PositiveNumber);
  };
  auto *verdict = app.add_subcommand("verdict", "certify honesty of u, write a JSON report");
  common(verdict);
  verdict->add_option("--sweep", c.sweep, "extra lambda values to record")->delimiter(',');
  verdict->add_option("--witness", c.witness, "record the Dyson-Phillips in-flight mass at t");
  auto *traj = app.add_subcommand("trajectory", "mass and mass-loss CSV over a time grid");
  common(traj);
  auto *cmp = app.add_subcommand("compare", "resolvent vs Dyson-Phillips mass loss");
  common(cmp);
  auto *sim = app.add_subcommand("simulate", "Monte Carlo survival/explosion CSV");
  common(sim);
  sim->add_option("--paths", c.paths, "number of paths")->check(CLI::PositiveNumber);
  sim->add_option("--seed", c.seed, "generator seed, nonzero")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }
  try {
    if (*verdict)
      return cmd_verdict(c);
    if (*traj)
      return cmd_trajectory(c);
    if (*cmp)
      return cmd_compare(c);
    return cmd_simulate(c);
  } catch (const SchemaError &e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
