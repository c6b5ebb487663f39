#include "orw/estimators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "orw/parallel.hpp"
#include "orw/range.hpp"

namespace orw {

namespace {

void check_grid(std::span<const std::int64_t> grid) {
  if (grid.empty()) throw std::invalid_argument("grid must be nonempty");
  std::int64_t prev = 0;
  for (const std::int64_t n : grid) {
    if (n <= prev) throw std::invalid_argument("grid must be strictly increasing and positive");
    prev = n;
  }
}

void check_even_truncation(int truncation) {
  if (truncation < 2 || truncation % 2 != 0) {
    throw std::invalid_argument("truncation must be even and >= 2");
  }
}

// Integer accumulators per grid point; exact, so merging commutes and
// results do not depend on the thread partition.
struct ScanTotals {
  std::vector<std::uint64_t> sum_r;
  std::vector<unsigned __int128> sum_r2;
  std::vector<std::int64_t> exceed;

  explicit ScanTotals(std::size_t points)
      : sum_r(points, 0), sum_r2(points, 0), exceed(points, 0) {}

  void merge(const ScanTotals& other) {
    for (std::size_t i = 0; i < sum_r.size(); ++i) {
      sum_r[i] += other.sum_r[i];
      sum_r2[i] += other.sum_r2[i];
      exceed[i] += other.exceed[i];
    }
  }
};

struct ExceedRule {
  double gamma_ref = 0.0;
  double delta = 0.0;
};

ScanTotals range_scan(const WalkMode& mode, std::span<const std::int64_t> grid,
                      std::int64_t samples, const std::optional<ExceedRule>& rule,
                      int threads) {
  check_grid(grid);
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  const std::int64_t n_max = grid.back();
  const std::size_t points = grid.size();
  const int blocks = std::max(1, resolve_threads(threads));

  std::vector<ScanTotals> partial(static_cast<std::size_t>(blocks), ScanTotals(points));
  parallel_blocks(samples, blocks, [&](int block, std::int64_t lo, std::int64_t hi) {
    ScanTotals& acc = partial[static_cast<std::size_t>(block)];
    RangeTracker tracker(n_max + 2);
    for (std::int64_t i = lo; i < hi; ++i) {
      tracker.reset();
      std::size_t g = 0;
      walk(static_cast<int>(n_max), mode, static_cast<std::uint64_t>(i),
           [&](int k, Position pos, MoveKind) {
             if (k == grid[g]) {
               const std::int64_t r = tracker.distinct_sites();  // R_k: sites M_0..M_{k-1}
               acc.sum_r[g] += static_cast<std::uint64_t>(r);
               acc.sum_r2[g] +=
                   static_cast<unsigned __int128>(r) * static_cast<unsigned __int128>(r);
               if (rule) {
                 const double ratio = static_cast<double>(r) / static_cast<double>(grid[g]);
                 if (std::abs(ratio - rule->gamma_ref) > rule->delta) ++acc.exceed[g];
               }
               ++g;
             }
             tracker.push(pos);
           });
    }
  });

  ScanTotals total(points);
  for (const ScanTotals& p : partial) total.merge(p);
  return total;
}

RangeMoments moments_from_totals(std::span<const std::int64_t> grid, std::int64_t samples,
                                 const ScanTotals& totals) {
  RangeMoments m;
  m.grid.assign(grid.begin(), grid.end());
  m.samples = samples;
  m.mean.resize(grid.size());
  m.variance.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const long double sum = static_cast<long double>(totals.sum_r[i]);
    const long double sumsq = static_cast<long double>(totals.sum_r2[i]);
    const long double mean = sum / samples;
    m.mean[i] = static_cast<double>(mean);
    m.variance[i] =
        static_cast<double>((sumsq - sum * sum / samples) / (samples - 1));
  }
  return m;
}

}  // namespace

double RangeMoments::mean_std_error(std::size_t i) const {
  return std::sqrt(variance[i] / static_cast<double>(samples));
}

PowerLawFit fit_power_law(std::span<const std::int64_t> n, std::span<const double> value,
                          std::int64_t window_lo, std::int64_t window_hi) {
  if (n.size() != value.size()) throw std::invalid_argument("series size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < window_lo || n[i] > window_hi) continue;
    if (!(value[i] > 0.0)) {
      throw std::domain_error("power-law fit window contains nonpositive values");
    }
    lx.push_back(std::log(static_cast<double>(n[i])));
    ly.push_back(std::log(value[i]));
  }
  const std::size_t m = lx.size();
  if (m < 2) throw std::domain_error("power-law fit needs at least two points in window");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss_res += r * r;
  }

  PowerLawFit fit;
  fit.amplitude = std::exp(intercept);
  fit.exponent = -slope;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.points = static_cast<int>(m);
  fit.residual_rms = std::sqrt(ss_res / static_cast<double>(m));
  fit.exponent_std_error =
      m > 2 ? std::sqrt(ss_res / static_cast<double>(m - 2) / sxx) : 0.0;
  return fit;
}

double power_tail_even(double amplitude, double exponent, std::int64_t from_exclusive) {
  if (!(exponent > 1.0)) return std::numeric_limits<double>::infinity();
  // sum over even j > N equals 2^-a * sum over m > N/2 of m^-a
  const std::int64_t m0 = from_exclusive / 2;
  constexpr std::int64_t kExplicitTerms = 1 << 16;
  double sum = 0.0;
  for (std::int64_t m = m0 + kExplicitTerms; m > m0; --m) {
    sum += std::pow(static_cast<double>(m), -exponent);
  }
  const double x = static_cast<double>(m0 + kExplicitTerms) + 0.5;
  sum += std::pow(x, 1.0 - exponent) / (exponent - 1.0);  // midpoint integral remainder
  return amplitude * std::pow(2.0, -exponent) * sum;
}

GreenEstimate green_from_series(std::span<const double> u, int truncation, TailMethod tail) {
  check_even_truncation(truncation);
  if (static_cast<int>(u.size()) <= truncation) {
    throw std::invalid_argument("series shorter than truncation");
  }
  GreenEstimate g;
  g.truncation = truncation;
  g.tail_method = tail;
  for (int k = 0; k <= truncation; ++k) g.partial_sum += u[static_cast<std::size_t>(k)];
  if (tail == TailMethod::power_law) {
    // fit the upper half-window of the even subsequence
    std::vector<std::int64_t> ns;
    std::vector<double> vs;
    for (int k = truncation / 2; k <= truncation; ++k) {
      if (k % 2 != 0) continue;
      ns.push_back(k);
      vs.push_back(u[static_cast<std::size_t>(k)]);
    }
    const PowerLawFit fit = fit_power_law(ns, vs, ns.front(), ns.back());
    g.tail_estimate = power_tail_even(fit.amplitude, fit.exponent, truncation);
  }
  return g;
}

GreenEstimate quenched_green(const OrientationField& field, int truncation, TailMethod tail) {
  check_even_truncation(truncation);
  DistributionEvolver evolver(truncation, field);
  std::vector<double> u(static_cast<std::size_t>(truncation) + 1, 0.0);
  u[0] = 1.0;
  for (int k = 1; k <= truncation; ++k) {
    evolver.advance();
    u[static_cast<std::size_t>(k)] = evolver.mass_at({0, 0});
  }
  return green_from_series(u, truncation, tail);
}

GammaEstimate quenched_gamma(const OrientationField& field, int truncation, GammaMethod method,
                             TailMethod tail) {
  check_even_truncation(truncation);
  GammaEstimate est;
  est.method = method;
  if (method == GammaMethod::survival) {
    DistributionEvolver killed(truncation, field, Position{0, 0});
    for (int k = 1; k <= truncation; ++k) killed.advance();
    est.value = killed.survival();
  } else {
    est.value = 1.0 / quenched_green(field, truncation, tail).total();
  }
  return est;
}

std::vector<GreenEstimate> annealed_green_ensemble(std::uint64_t master_seed, int num_envs,
                                                   int truncation, TailMethod tail,
                                                   int threads) {
  if (num_envs < 1) throw std::invalid_argument("need at least one environment");
  std::vector<GreenEstimate> out(static_cast<std::size_t>(num_envs));
  parallel_for(num_envs, threads, [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = quenched_green(
        sample_environment(master_seed, static_cast<std::uint64_t>(i)), truncation, tail);
  });
  return out;
}

GammaEstimate annealed_gamma(std::uint64_t master_seed, int num_envs, int truncation,
                             int threads) {
  if (num_envs < 1) throw std::invalid_argument("need at least one environment");
  const auto greens =
      annealed_green_ensemble(master_seed, num_envs, truncation, TailMethod::power_law, threads);
  GammaEstimate est;
  est.method = GammaMethod::inverse_green;
  double sum = 0.0;
  for (const GreenEstimate& g : greens) sum += 1.0 / g.total();
  est.value = sum / num_envs;
  if (num_envs > 1) {
    double ss = 0.0;
    for (const GreenEstimate& g : greens) {
      const double d = 1.0 / g.total() - est.value;
      ss += d * d;
    }
    est.std_error = std::sqrt(ss / (num_envs - 1) / num_envs);
  }
  return est;
}

SeriesEstimate annealed_return_series(std::uint64_t master_seed, int num_envs, int truncation,
                                      int threads) {
  if (num_envs < 1) throw std::invalid_argument("need at least one environment");
  if (truncation < 0) throw std::invalid_argument("truncation must be nonnegative");
  const std::size_t points = static_cast<std::size_t>(truncation / 2) + 1;
  std::vector<std::vector<double>> per_env(static_cast<std::size_t>(num_envs));
  parallel_for(num_envs, threads, [&](std::int64_t i) {
    const OrientationField field = sample_environment(master_seed, static_cast<std::uint64_t>(i));
    DistributionEvolver evolver(truncation, field);
    std::vector<double> u(points);
    u[0] = 1.0;
    for (int k = 1; k <= truncation; ++k) {
      evolver.advance();
      if (k % 2 == 0) u[static_cast<std::size_t>(k / 2)] = evolver.mass_at({0, 0});
    }
    per_env[static_cast<std::size_t>(i)] = std::move(u);
  });

  SeriesEstimate series;
  series.n.resize(points);
  series.value.assign(points, 0.0);
  series.std_error.assign(points, 0.0);
  for (std::size_t p = 0; p < points; ++p) series.n[p] = 2 * static_cast<std::int64_t>(p);
  for (const auto& u : per_env) {  // fixed env order: thread-count independent
    for (std::size_t p = 0; p < points; ++p) series.value[p] += u[p];
  }
  for (std::size_t p = 0; p < points; ++p) series.value[p] /= num_envs;
  if (num_envs > 1) {
    for (std::size_t p = 0; p < points; ++p) {
      double ss = 0.0;
      for (const auto& u : per_env) {
        const double d = u[p] - series.value[p];
        ss += d * d;
      }
      series.std_error[p] = std::sqrt(ss / (num_envs - 1) / num_envs);
    }
  }
  return series;
}

RangeMoments range_moments(const WalkMode& mode, std::span<const std::int64_t> grid,
                           std::int64_t samples, int threads) {
  const ScanTotals totals = range_scan(mode, grid, samples, std::nullopt, threads);
  return moments_from_totals(grid, samples, totals);
}

std::vector<WllnPoint> wlln_check(const WalkMode& mode, double delta,
                                  std::span<const std::int64_t> grid, std::int64_t samples,
                                  double gamma_ref, int threads) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const ScanTotals totals =
      range_scan(mode, grid, samples, ExceedRule{gamma_ref, delta}, threads);
  std::vector<WllnPoint> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = static_cast<double>(totals.exceed[i]) / static_cast<double>(samples);
    out[i] = {grid[i], totals.exceed[i], p,
              std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
  }
  return out;
}

PowerLawFit variance_exponent(const RangeMoments& moments, std::int64_t window_lo,
                              std::int64_t window_hi) {
  return fit_power_law(moments.grid, moments.variance, window_lo, window_hi);
}

bool variance_ratio_decreasing_top_half(const RangeMoments& moments) {
  const std::size_t count = moments.grid.size();
  const std::size_t start = count / 2;  // top half = last ceil(count/2) points
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < count; ++i) {
    const double ratio = moments.variance[i] / (static_cast<double>(moments.grid[i]) *
                                                static_cast<double>(moments.grid[i]));
    if (ratio >= prev) return false;
    prev = ratio;
  }
  return true;
}

RangeMoments baseline_planar_range(std::uint64_t master_seed,
                                   std::span<const std::int64_t> grid, std::int64_t samples,
                                   int threads) {
  return range_moments(BaselineMode{master_seed}, grid, samples, threads);
}

std::vector<double> dvoretzky_erdos_ratio(const RangeMoments& moments) {
  std::vector<double> out(moments.grid.size());
  for (std::size_t i = 0; i < moments.grid.size(); ++i) {
    const double n = static_cast<double>(moments.grid[i]);
    out[i] = moments.mean[i] * std::log(n) / (std::numbers::pi * n);
  }
  return out;
}

}  // namespace orw
