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

#include "honesty/jump_sim.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace honesty {

namespace {

Estimate binomial(std::size_t k, std::size_t n) {
  if (n == 0)
    return {0.0, 0.0};
  double p = static_cast<double>(k) / static_cast<double>(n);
  return {p, 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

struct InitialSampler {
  std::vector<std::size_t> states;
  std::vector<double> cdf;

  explicit InitialSampler(const PosSeq &u) {
    if (u.tail_bound() > 0.0)
      throw std::invalid_argument("simulate: initial distribution must be finitely supported");
    double total = u.sum();
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("simulate: initial distribution must have mass 1");
    double c = 0.0;
    for (const auto &e : u.entries()) {
      c += e.value;
      states.push_back(e.index);
      cdf.push_back(c / total);
    }
  }
  std::size_t draw(PhiloxStream &rng) const {
    if (states.size() == 1)
      return states.front();
    double x = rng.uniform();
    for (std::size_t i = 0; i < cdf.size(); ++i)
      if (x < cdf[i])
        return states[i];
    return states.back();
  }
};

void check_args(double t, std::size_t n_paths, std::uint64_t seed) {
  if (seed == 0)
    throw std::invalid_argument("simulate: seed 0 is reserved");
  if (n_paths == 0)
    throw std::invalid_argument("simulate: need at least one path");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("simulate: t must be finite and nonnegative");
}

SimResult tally(double t, const std::vector<PathOutcome> &outs) {
  SimResult r;
  r.t = t;
  r.paths = outs.size();
  for (const auto &o : outs) {
    switch (o.status) {
    case PathStatus::Alive:
      ++r.alive_count;
      break;
    case PathStatus::Killed:
      ++r.killed_count;
      break;
    case PathStatus::Exploded:
      ++r.exploded_count;
      break;
    case PathStatus::Aborted:
      ++r.aborted;
      break;
    }
  }
  std::size_t n = r.paths - r.aborted;
  r.survival = binomial(r.alive_count, n);
  r.exploded = binomial(r.exploded_count, n);
  r.killed = binomial(r.killed_count, n);
  return r;
}

} // namespace

PathOutcome simulate_path(const ModelSpec &m, std::size_t start, double t, PhiloxStream &rng,
                          const SimParams &params) {
  PathOutcome out;
  std::size_t k = start;
  double time = 0.0;
  const bool can_detect = m.upward_only();
  // every jump goes to k + 1, so no draw is needed to pick the target
  const bool pure_birth = std::holds_alternative<PureBirthKernel>(m.kernel());
  while (true) {
    double a = m.rate(k);
    if (a <= 0.0)
      break;
    double hold = -std::log(rng.uniform()) / a;
    if (time + hold > t)
      break;
    time += hold;
    ++out.jumps;

    bool moved = false;
    std::size_t next = k;
    if (pure_birth) {
      next = k + 1;
      moved = true;
    } else {
      double x = rng.uniform() * a, acc = 0.0;
      m.for_each_transition(k, [&](std::size_t j, double r) {
        if (moved)
          return;
        acc += r;
        if (x < acc) {
          next = j;
          moved = true;
        }
      });
    }
    if (!moved) {
      out.status = PathStatus::Killed;
      out.state = k;
      out.time_of_absorption = time;
      return out;
    }
    k = next;

    if (out.jumps % params.checkpoint == 0) {
      if (can_detect && m.explosion_time_tail(k) < (t - time) * params.explosion_factor) {
        out.status = PathStatus::Exploded;
        out.state = k;
        out.time_of_absorption = time;
        return out;
      }
      if (out.jumps >= params.jump_cap) {
        out.status = PathStatus::Aborted;
        out.state = k;
        return out;
      }
    }
  }
  out.status = PathStatus::Alive;
  out.state = k;
  return out;
}

SimResult simulate(const ModelSpec &m, const PosSeq &initial, double t, std::size_t n_paths,
                   std::uint64_t seed, const SimParams &params) {
  check_args(t, n_paths, seed);
  InitialSampler init(initial);
  std::vector<PathOutcome> outs(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    PhiloxStream rng(seed, i);
    std::size_t s = init.draw(rng);
    outs[i] = simulate_path(m, s, t, rng, params);
  }
  return tally(t, outs);
}

std::vector<SimResult> explosion_cdf(const ModelSpec &m, std::size_t i,
                                     const std::vector<double> &t_grid, std::size_t n_paths,
                                     std::uint64_t seed, const SimParams &params) {
  std::vector<SimResult> rows;
  for (double t : t_grid)
    rows.push_back(simulate(m, PosSeq::basis(i), t, n_paths, seed, params));
  return rows;
}

std::string simulation_csv(const std::vector<SimResult> &rows) {
  std::string s = "t,survival,survival_ci,exploded,exploded_ci,killed,killed_ci\n";
  char buf[256];
  for (const auto &r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                  r.survival.p, r.survival.ci, r.exploded.p, r.exploded.ci, r.killed.p,
                  r.killed.ci);
    s += buf;
  }
  return s;
}

} // namespace honesty
