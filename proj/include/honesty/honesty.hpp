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

#ifndef HONESTY_HONESTY_HPP
#define HONESTY_HONESTY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "honesty/dyson_phillips.hpp"
#include "honesty/model.hpp"
#include "honesty/resolvent.hpp"
#include "honesty/state_space.hpp"

namespace honesty {

enum class Verdict { Honest, Dishonest, Undetermined };
enum class Route { Resolvent, DysonPhillips, Dual, Subsolution, Both };

std::string to_string(Verdict v);
std::string to_string(Route r);
Verdict verdict_from_string(const std::string &s);
Route route_from_string(const std::string &s);

/// -<Psi, (A + B)u> = sum_k deficit_k u_k.
double a_frak(const ModelSpec &m, const SignedSeq &u);
double a_frak(const ModelSpec &m, const PosSeq &u);

/// a_0 on int_0^t V(s)u ds, which equals ||u|| - ||V(t)u||.
Bracket a0_on_integral(const ModelSpec &m, double t, const PosSeq &u,
                       const TruncationParams &params = {});
Bracket a0_on_integral(const SemigroupResult &r, const PosSeq &u);

/// abar_lambda((lambda - G)^{-1} u) = sum_n a_frak((lambda - A)^{-1} J^n u).
Bracket abar_resolvent(const ModelSpec &m, double lambda, const PosSeq &u, double tol = 1e-10,
                       std::size_t max_terms = kDefaultMaxTerms);

struct XiPolicy {
  double verdict_tol = 1e-7;
  /// Iteration stops once the bracket is narrower than this.
  double width_tol = 1e-7;
  std::size_t max_iter = 20'000'000;
  /// Ratio test for the uncertified estimate.
  std::size_t stable_window = 20;
  double stable_tol = 1e-4;
};

struct NormSample {
  std::size_t n;
  double norm;
  bool operator==(const NormSample &) const = default;
};

struct XiResult {
  /// Certified bracket for lim ||J^n u||.
  Bracket bracket;
  /// True when the lower edge comes from a tail product bound; otherwise
  /// it is 0.
  bool lower_certified = false;
  /// Aitken extrapolation of ||J^n u|| once successive ratios stabilize.
  /// Never used for a verdict.
  std::optional<double> estimate;
  std::size_t iterations = 0;
  /// ||J^n u|| at n = 0..64 and then at geometrically spaced n.
  std::vector<NormSample> norms;
};

/// <Xi_lambda, u> = lim_n ||J(lambda)^n u||.
XiResult xi(const ModelSpec &m, double lambda, const PosSeq &u, const XiPolicy &policy = {});

enum class DualSweep { Jacobi, GaussSeidel };

struct DualWeight {
  /// psi(k) for k = 0..N; psi = 1 is assumed beyond N.
  std::vector<double> values;
  std::size_t N = 0;
  std::size_t iterations = 0;
  /// max_{k <= N} |(J* psi)(k) - psi(k)|
  double residual = 0.0;
  /// Upper bound for <Xi_lambda, u>.
  double pair(const PosSeq &u) const;
};

/// Iterates psi <- J(lambda)* psi from psi = 1. Gauss-Seidel sweeps run
/// from index N down to 0.
DualWeight xi_dual(const ModelSpec &m, double lambda, std::size_t N, std::size_t iters,
                   DualSweep sweep = DualSweep::GaussSeidel);

struct AhatResult {
  Bracket value;
  DPSeries series;
};
/// ahat(int_0^t V(s)u ds) = sum_n a_frak(int_0^t V_n(s)u ds). The upper
/// edge is capped by `a0_hi`.
AhatResult ahat_dp(const ModelSpec &m, double t, const PosSeq &u, double a0_hi,
                   const QuadParams &q = {}, std::size_t max_levels = 4096);
Bracket ahat_dp(const ModelSpec &m, double t, const PosSeq &u, double tol = 1e-10,
                const TruncationParams &params = {});

struct DeltaResult {
  double t = 0.0;
  Bracket mass;
  Bracket a0;
  Bracket abar;
  Bracket ahat;
  /// ||V(t)u|| - ||u|| + abar(int_0^t V(s)u ds)
  Bracket via_abar;
  /// the same with ahat from the Dyson-Phillips route
  Bracket via_ahat;
};

struct DeltaParams {
  TruncationParams truncation{};
  QuadParams quadrature{};
  double abar_tol = 1e-10;
  std::size_t max_levels = 4096;
};

/// Delta_u(t) by both routes, at several times from one truncation ladder.
std::vector<DeltaResult> mass_loss_delta(const ModelSpec &m, const std::vector<double> &times,
                                         const PosSeq &u, double lambda,
                                         const DeltaParams &params = {});
DeltaResult mass_loss_delta(const ModelSpec &m, double t, const PosSeq &u, double lambda,
                            const DeltaParams &params = {});

struct LambdaSample {
  double lambda;
  Bracket xi;
  bool operator==(const LambdaSample &) const = default;
};

struct DeltaSample {
  double t;
  Bracket delta;
  bool operator==(const DeltaSample &) const = default;
};

struct MildWitness {
  double t = 0.0;
  /// ||B int_0^t V_K(s)u ds|| at the last level computed.
  double in_flight = 0.0;
  std::size_t levels = 0;
  bool converged = false;
  bool operator==(const MildWitness &) const = default;
};

struct VerdictPolicy {
  XiPolicy xi{};
  /// Extra lambda values whose Xi brackets are recorded.
  std::vector<double> lambda_sweep;
  /// Times at which Delta_u is sampled into the evidence.
  std::vector<double> delta_times;
  /// When positive, records the Dyson-Phillips in-flight mass at this t.
  double witness_t = 0.0;
  /// Levels for the witness. On an explosive model the in-flight mass
  /// tends to the explosion probability, so it never drops below tol.
  std::size_t witness_levels = 256;
  DeltaParams delta{};
};

struct HonestyReport {
  std::string model;
  PosSeq input;
  Verdict verdict = Verdict::Undetermined;
  Bracket xi;
  double lambda_used = 1.0;
  double tol = 1e-7;
  Route route = Route::Resolvent;
  bool lower_certified = false;
  std::optional<double> xi_estimate;
  std::size_t iterations = 0;
  std::vector<NormSample> jn_norms;
  std::vector<LambdaSample> lambda_sweep;
  std::vector<DeltaSample> delta_samples;
  std::optional<MildWitness> mild_witness;
};

Verdict classify(const Bracket &xi, double tol);

HonestyReport honesty_verdict(const ModelSpec &m, const PosSeq &u, double lambda,
                              const VerdictPolicy &policy = {});

struct SubsolutionResult {
  /// J(lambda)u <= u
  Tri holds = Tri::Unknown;
  bool implies_honest = false;
  /// v = (lambda - A)u.
  PosSeq v;
  /// (A + B)u <= lambda u, equivalently B u <= v. When true both u and v
  /// are honest.
  Tri sub_eigen = Tri::Unknown;
};
SubsolutionResult subsolution_check(const ModelSpec &m, double lambda, const PosSeq &u);

struct HereditaryReport {
  bool precondition = false;
  std::size_t samples = 0;
  std::size_t honest = 0;
  std::size_t dishonest = 0;
  std::size_t undetermined = 0;
  /// Delta_u nonincreasing in t on every sample, up to bracket widths.
  bool delta_monotone = true;
  bool ok() const { return precondition ? dishonest == 0 && undetermined == 0 && delta_monotone : true; }
};

/// Draws u_k = U_k v_k with U_k uniform on (0, 1) from per-sample Philox
/// streams and checks that every u is honest.
HereditaryReport hereditary_audit(const ModelSpec &m, double lambda, const PosSeq &v,
                                  std::size_t samples, std::uint64_t seed,
                                  const XiPolicy &policy = {},
                                  const std::vector<double> &delta_times = {});

} // namespace honesty

#endif // HONESTY_HONESTY_HPP
