#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "orw/exact.hpp"
#include "orw/orientation.hpp"
#include "orw/walk.hpp"

// Estimators for the walk's characteristic quantities: Green functions,
// escape probabilities, return-probability series and their power-law
// exponents, range growth, and range-variance scaling. Exact series come
// from the propagation engine; Monte Carlo quantities accumulate in exact
// integer arithmetic so results are bit-identical for any thread count.

namespace orw {

enum class TailMethod { none, power_law };

/// Truncated Green function: partial_sum = sum_{k<=N} u(k), plus an
/// extrapolated tail when requested. The power-law tail is a heuristic
/// (no quenched pointwise decay law is established) and is always reported
/// separately from the partial sum so it can be audited.
struct GreenEstimate {
  double partial_sum = 0.0;
  int truncation = 0;
  double tail_estimate = 0.0;
  TailMethod tail_method = TailMethod::none;
  std::optional<double> std_error;
  double total() const { return partial_sum + tail_estimate; }
};

struct PowerLawFit {
  double amplitude = 0.0;  // C in value ~= C * n^-exponent
  double exponent = 0.0;   // positive for decaying series
  double exponent_std_error = 0.0;
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  double residual_rms = 0.0;  // RMS residual in log-log coordinates
  int points = 0;
};

enum class GammaMethod { survival, inverse_green };

struct GammaEstimate {
  double value = 0.0;
  GammaMethod method = GammaMethod::survival;
  std::optional<double> std_error;
};

struct RangeMoments {
  std::vector<std::int64_t> grid;
  std::vector<double> mean;      // E[R_n] per grid point
  std::vector<double> variance;  // unbiased sample variance of R_n
  std::int64_t samples = 0;
  double mean_std_error(std::size_t i) const;
};

struct SeriesEstimate {
  std::vector<std::int64_t> n;
  std::vector<double> value;
  std::vector<double> std_error;
};

/// Least-squares line in (log n, log value) over window [lo, hi].
/// Throws std::domain_error when the window holds nonpositive values or
/// fewer than two points.
PowerLawFit fit_power_law(std::span<const std::int64_t> n, std::span<const double> value,
                          std::int64_t window_lo, std::int64_t window_hi);

/// sum over even j > from of amplitude * j^-exponent (infinite for
/// exponent <= 1).
double power_tail_even(double amplitude, double exponent, std::int64_t from_exclusive);

GreenEstimate green_from_series(std::span<const double> u, int truncation, TailMethod tail);

/// Green estimate from the exact propagation series of this field.
/// truncation must be even and >= 2.
GreenEstimate quenched_green(const OrientationField& field, int truncation, TailMethod tail);

/// survival: gamma(N) from taboo propagation (upper bound on the escape
/// probability, non-increasing in N). inverse_green: 1 / green.total().
GammaEstimate quenched_gamma(const OrientationField& field, int truncation, GammaMethod method,
                             TailMethod tail = TailMethod::power_law);

/// Independent Green estimates for env_index = 0..num_envs-1.
std::vector<GreenEstimate> annealed_green_ensemble(std::uint64_t master_seed, int num_envs,
                                                   int truncation, TailMethod tail,
                                                   int threads = 0);

/// gamma_cp estimator: mean over environments of 1/U^(eps), with the
/// standard error across environments.
GammaEstimate annealed_gamma(std::uint64_t master_seed, int num_envs, int truncation,
                             int threads = 0);

/// Annealed return series u(2k), k <= truncation/2, as the environment
/// average of exact quenched series; the only variance is environmental.
SeriesEstimate annealed_return_series(std::uint64_t master_seed, int num_envs, int truncation,
                                      int threads = 0);

/// Monte Carlo mean/variance of R_n on an ascending grid. Annealed mode
/// redraws the environment per trajectory; quenched mode keeps the given
/// field. samples >= 2.
RangeMoments range_moments(const WalkMode& mode, std::span<const std::int64_t> grid,
                           std::int64_t samples, int threads = 0);

struct WllnPoint {
  std::int64_t n = 0;
  std::int64_t exceed_count = 0;
  double frequency = 0.0;
  double std_error = 0.0;  // binomial
};

/// Empirical P[|R_n/n - gamma_ref| > delta] per grid point.
std::vector<WllnPoint> wlln_check(const WalkMode& mode, double delta,
                                  std::span<const std::int64_t> grid, std::int64_t samples,
                                  double gamma_ref, int threads = 0);

/// Fits V(n) ~ C n^beta over the window; beta is a diagnostic (the proven
/// statement is only that V(n)/n^2 vanishes).
PowerLawFit variance_exponent(const RangeMoments& moments, std::int64_t window_lo,
                              std::int64_t window_hi);

/// V(n)/n^2 strictly decreasing over the top half of the grid.
bool variance_ratio_decreasing_top_half(const RangeMoments& moments);

/// Plain planar SRW moments, for calibrating against the classical
/// pi*n/log n range law.
RangeMoments baseline_planar_range(std::uint64_t master_seed,
                                   std::span<const std::int64_t> grid, std::int64_t samples,
                                   int threads = 0);

/// E[R_n] * log(n) / (pi * n) per grid point.
std::vector<double> dvoretzky_erdos_ratio(const RangeMoments& moments);

}  // namespace orw
