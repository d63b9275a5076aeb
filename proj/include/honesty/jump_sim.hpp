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

#ifndef HONESTY_JUMP_SIM_HPP
#define HONESTY_JUMP_SIM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "honesty/model.hpp"
#include "honesty/philox.hpp"
#include "honesty/state_space.hpp"

namespace honesty {

enum class PathStatus { Alive, Killed, Exploded, Aborted };

struct PathOutcome {
  PathStatus status = PathStatus::Alive;
  /// Final state for Alive (and the state reached for Aborted).
  std::size_t state = 0;
  /// Killing time, or the time explosion was detected.
  std::optional<double> time_of_absorption;
  std::size_t jumps = 0;
};

struct SimParams {
  /// Paths still running after this many jumps are aborted.
  std::size_t jump_cap = 1'000'000;
  /// The explosion test runs every `checkpoint` jumps.
  std::size_t checkpoint = 10'000;
  /// Declared exploded once the expected remaining time to explosion is
  /// below `explosion_factor` times the time left.
  double explosion_factor = 1e-3;
};

struct Estimate {
  double p = 0.0;
  /// 1.96 binomial standard errors.
  double ci = 0.0;
  double sigma() const { return ci / 1.96; }
};

struct SimResult {
  double t = 0.0;
  Estimate survival, exploded, killed;
  std::size_t paths = 0;
  std::size_t alive_count = 0, killed_count = 0, exploded_count = 0;
  /// Excluded from every estimate.
  std::size_t aborted = 0;
};

/// One path of the jump process started from `start`.
PathOutcome simulate_path(const ModelSpec &m, std::size_t start, double t, PhiloxStream &rng,
                          const SimParams &params = {});

/// `initial` must have mass 1 and no tail. Path i uses Philox stream i of
/// `seed`; seed 0 is rejected.
SimResult simulate(const ModelSpec &m, const PosSeq &initial, double t, std::size_t n_paths,
                   std::uint64_t seed, const SimParams &params = {});

/// Explosion probability from e_i at each grid time. Each grid time
/// replays the same per-path streams, so estimates are nondecreasing in t.
std::vector<SimResult> explosion_cdf(const ModelSpec &m, std::size_t i,
                                     const std::vector<double> &t_grid, std::size_t n_paths,
                                     std::uint64_t seed, const SimParams &params = {});

/// `t,survival,survival_ci,exploded,exploded_ci,killed,killed_ci`
std::string simulation_csv(const std::vector<SimResult> &rows);

} // namespace honesty

#endif // HONESTY_JUMP_SIM_HPP
