#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <boost/rational.hpp>

#include "orw/orientation.hpp"
#include "orw/walk.hpp"

// Two exact oracles for the oriented-lattice walk:
//  - full path enumeration (small n; quenched and annealed, float and
//    rational arithmetic), and
//  - sparse/dense distribution propagation with an optional taboo (killed)
//    site (moderate n, quenched only; the annealed process is not Markovian,
//    so no site-space recursion exists for it).
// Everything downstream is validated against these.

namespace orw {

using Rational = boost::rational<long long>;

/// Largest n accepted by the enumeration routines (3^n move sequences).
inline constexpr int kMaxEnumerationSteps = 14;
/// Largest n for the exact-rational variants.
inline constexpr int kMaxExactSteps = 10;

/// Snapshot of the quenched site distribution after `step` steps.
struct ExactDistribution {
  std::unordered_map<std::uint64_t, double> mass;  // packed position -> probability
  int step = 0;
  std::optional<Position> taboo;
  double leaked = 0.0;  // probability absorbed at the taboo site so far

  double at(Position p) const {
    const auto it = mass.find(packed_key(p));
    return it == mass.end() ? 0.0 : it->second;
  }
  double total_mass() const;
};

/// Dense one-step evolution engine for the quenched law. Support after k
/// steps lives in the L1 ball of radius k, only on sites with x+y+k even.
/// With a taboo site, mass arriving there at steps >= 1 is killed and
/// accumulated; survival() is then the no-visit probability.
class DistributionEvolver {
 public:
  DistributionEvolver(int max_steps, const OrientationField& field,
                      std::optional<Position> taboo = std::nullopt);

  void advance();
  int step() const { return step_; }
  int max_steps() const { return n_; }
  double mass_at(Position p) const;
  double leaked() const { return leaked_; }
  double survival() const { return 1.0 - leaked_; }
  ExactDistribution snapshot() const;

 private:
  std::size_t index(std::int64_t x, std::int64_t y) const {
    return static_cast<std::size_t>((y + n_) * width_ + (x + n_));
  }

  int n_;
  std::int64_t width_;
  int step_ = 0;
  std::optional<Position> taboo_;
  double leaked_ = 0.0;
  std::vector<double> cur_, next_;
  std::vector<std::int8_t> eps_;  // memoized field signs for levels [-n, n]
};

/// Exact quenched site distributions at steps 0..n. O(n^3) time; the
/// materialized snapshots cost O(k^2) memory each, so keep n modest and use
/// quenched_series() when only the origin/survival series are needed.
std::vector<ExactDistribution> propagate(int n, const OrientationField& field,
                                         std::optional<Position> taboo = std::nullopt);

/// u[k] = P[M_k = 0] and gamma[k] = P[no return to 0 in steps 1..k],
/// k = 0..n, from two evolver passes (plain and taboo-at-origin).
struct QuenchedSeries {
  std::vector<double> u, gamma;
};
QuenchedSeries quenched_series(int n, const OrientationField& field);

/// Annealed weight of a concrete lattice path: 3^-n * 2^-|H| when all
/// horizontal steps on each level share one direction (|H| = number of
/// distinct levels carrying horizontal steps), otherwise 0.
struct PathWeight {
  double probability = 0.0;
  bool consistent = false;
};
PathWeight annealed_path_weight(std::span<const Position> positions);

/// Path event: receives positions M_0..M_n.
using PathEvent = std::function<bool(std::span<const Position>)>;

/// Probability of the event under the quenched law, summing 3^-n over all
/// 3^n move sequences realized against the field. Refuses n over budget.
double enumerate_quenched(int n, const OrientationField& field, const PathEvent& event);
Rational enumerate_quenched_exact(int n, const OrientationField& field, const PathEvent& event);

/// Probability under the annealed law via the consistent-path weight rule
/// (equals the average of enumerate_quenched over all orientation
/// assignments; cross-validated in the tests).
double enumerate_annealed(int n, const PathEvent& event);
Rational enumerate_annealed_exact(int n, const PathEvent& event);

/// P[A_k] (new site), P[B_k] (no return) and u(k) for k = 0..n, computed in
/// one enumeration pass with exact integer counts.
struct EventTables {
  std::vector<double> a, b, u;
};
EventTables quenched_event_tables(int n, const OrientationField& field);
EventTables annealed_event_tables(int n);

/// Last-return decomposition residual
///   | sum_{k=0}^{floor((n-1)/2)} u(2k) * gamma(n-1-2k)  -  1 |.
/// The index convention is the one validated against enumeration: the sum
/// partitions paths by the last visit to the origin strictly before time n,
/// and the no-return factor spans the n-1-2k remaining steps.
double renewal_residual(std::span<const double> u, std::span<const double> gamma, int n);

/// Residual above with the series computed exactly for the given field.
double verify_renewal(int n, const OrientationField& field);

/// Max |w(p) - w(p*)| over all consistent n-step paths p, where p* is the
/// reversed path translated back to the origin and w the annealed weight.
/// Exact integer arithmetic inside; reversibility makes this 0.
double verify_reversibility(int n);

struct SubadditivityReport {
  bool holds = false;               // P[Aj ∩ Ak] <= P[Aj] P[Aj,k] for all j<k (exact check)
  double max_violation = 0.0;       // most positive P[Aj∩Ak] - P[Aj]P[Aj,k]
  double max_a_gamma_dev = 0.0;     // max_k |P[A_k] - gamma(k)|, this field
  double max_reflection_dev = 0.0;  // max_k |gamma^(-eps)(k) - gamma^(eps)(k)|
};

/// Checks the pairwise new-site subadditivity inequality for all
/// 0 <= j < k <= n by enumeration, plus the reflection identity of the
/// no-return series and the (annealed-only) escape/new-site symmetry.
SubadditivityReport verify_subadditivity(int n, const OrientationField& field);

}  // namespace orw
