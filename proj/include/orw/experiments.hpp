#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "orw/estimators.hpp"
#include "orw/exact.hpp"

// Experiment runners behind the CLI subcommands and the verification suite.
// Every runner is a pure function of its config (master seed included), so
// reruns and different thread counts produce byte-identical CSV output.

namespace orw::experiments {

inline constexpr std::string_view kVersion = "0.1.0";

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// FNV-1a 64-bit digest, used to fingerprint output files in the manifest.
std::uint64_t fnv1a(std::string_view bytes);

/// %.17g: enough digits to round-trip any double.
std::string format_g17(double v);

struct Manifest {
  std::string command;
  nlohmann::json config;
  nlohmann::json summary;
  double wall_seconds = 0.0;
  std::vector<CheckResult> checks;
  std::map<std::string, std::string> output_digests;  // filename -> hex fnv1a

  bool all_passed() const;
  nlohmann::json to_json() const;
};

/// Walk-law selector for the Monte Carlo commands. quenched needs an
/// environment spec: either an explicit-field file or a (seed, index) pair.
struct ModeSpec {
  std::string mode = "annealed";  // quenched | annealed | alternating | baseline
  std::optional<std::uint64_t> env_seed;
  std::uint64_t env_index = 0;
  std::string env_file;

  nlohmann::json to_json() const;
};

/// Resolves the spec into a WalkMode; master_seed keys the walk randomness.
/// Throws std::invalid_argument for unknown modes or a missing environment.
WalkMode make_walk_mode(const ModeSpec& spec, std::uint64_t master_seed);

// ---------------------------------------------------------------------------
// oracle: exact identity suite at enumeration scale, plus the
// propagation/enumeration cross-check.

struct OracleConfig {
  std::uint64_t master_seed = 1;
  int n = 8;                // enumeration horizon for the identity suite
  int num_random_envs = 5;  // plus Constant(+1) and Alternating when >= 0
  bool include_deterministic_envs = true;
  int dp_cross_check_n = 12;  // propagation vs enumeration horizon
  int dp_cross_check_envs = 10;
};

struct OracleEnvResult {
  std::string env;
  bool deterministic = false;
  double renewal_residual_max = 0.0;
  SubadditivityReport subadditivity;
  std::vector<double> u, gamma, a;  // enumeration tables, k = 0..n
};

struct OracleReport {
  OracleConfig config;
  std::vector<OracleEnvResult> envs;
  double reversibility_deviation = 0.0;
  double annealed_ab_dev = 0.0;         // max_k |P[A_k] - P[B_k]| annealed
  double dp_agreement_dev = 0.0;        // propagate vs enumeration on u, gamma
  double mass_conservation_dev = 0.0;   // |sum mass + leaked - 1| over steps
  double parity_support_dev = 0.0;      // mass found on odd-parity sites
  double monotone_gamma_violation = 0.0;

  std::vector<CheckResult> checks() const;
  std::string series_csv() const;
  nlohmann::json summary() const;
};

OracleReport run_oracle(const OracleConfig& cfg);

// ---------------------------------------------------------------------------
// renewal: last-return identity at propagation scale.

struct RenewalConfig {
  std::uint64_t master_seed = 1;
  int n_max = 400;
  int num_envs = 10;
  int threads = 0;
};

struct RenewalReport {
  RenewalConfig config;
  std::vector<double> per_env_residual_max;
  double residual_max = 0.0;
  std::vector<QuenchedSeries> series;  // per environment

  std::vector<CheckResult> checks() const;
  std::string series_csv() const;
  nlohmann::json summary() const;
};

RenewalReport run_renewal(const RenewalConfig& cfg);

// ---------------------------------------------------------------------------
// llt: annealed return-probability series and its decay exponent.

struct LltConfig {
  std::uint64_t master_seed = 1;
  int num_envs = 100;
  int truncation = 512;  // series horizon; u(2k) for 2k <= truncation
  std::int64_t window_lo = 64;
  std::int64_t window_hi = 512;
  double exponent_lo = 1.10;  // accepted band around the asymptotic 5/4
  double exponent_hi = 1.40;
  int threads = 0;
};

struct LltReport {
  LltConfig config;
  SeriesEstimate series;
  PowerLawFit fit;

  std::vector<CheckResult> checks() const;
  std::string series_csv() const;
  nlohmann::json summary() const;
};

LltReport run_llt(const LltConfig& cfg);

// ---------------------------------------------------------------------------
// green: quenched Green functions, escape probabilities and the duality
// product at finite truncation.

struct GreenConfig {
  std::uint64_t master_seed = 1;
  int num_envs = 10;
  int truncation = 400;
  double duality_tolerance = 0.05;
  int threads = 0;
};

struct GreenEnvResult {
  double gamma_survival = 0.0;
  GreenEstimate green;
  double duality_product = 0.0;  // gamma(N) * green.total()
};

struct GreenReport {
  GreenConfig config;
  std::vector<GreenEnvResult> envs;
  double duality_dev_max = 0.0;
  bool bound_chain_ok = false;     // renewal-derived split-point inequality
  double mean_inverse_green = 0.0; // E_env[1/U]
  double inverse_mean_green = 0.0; // 1/E_env[U]

  std::vector<CheckResult> checks() const;
  std::string series_csv() const;
  nlohmann::json summary() const;
};

GreenReport run_green(const GreenConfig& cfg);

// ---------------------------------------------------------------------------
// range: linear growth of the expected range (annealed by default).

struct RangeConfig {
  std::uint64_t master_seed = 1;
  ModeSpec mode;  // annealed, quenched or alternating
  std::vector<std::int64_t> grid = {512, 1024, 2048, 4096};
  std::int64_t samples = 10000;
  int gamma_envs = 100;     // environments for the inverse-Green reference
  int gamma_truncation = 400;
  int threads = 0;
};

struct RangeReport {
  RangeConfig config;
  RangeMoments moments;
  GammaEstimate gamma_ref;      // E_env[1/U]
  double plateau_ratio = 0.0;   // E[R_n]/n at the largest grid point
  double plateau_std_error = 0.0;
  bool ratio_decreasing = false;
  double consistency_sigmas = 0.0;  // |plateau - gamma_ref| in joint SEs

  std::vector<CheckResult> checks() const;
  std::string series_csv() const;
  nlohmann::json summary() const;
};

RangeReport run_range(const RangeConfig& cfg);

// ---------------------------------------------------------------------------
// wlln: empirical exceedance frequencies of |R_n/n - gamma_ref|.

struct WllnConfig {
  std::uint64_t master_seed = 1;
  ModeSpec mode;
  double delta = 0.05;
  std::vector<std::int64_t> grid = {512, 1024, 2048, 4096};
  std::int64_t samples = 10000;
  // NaN = derive gamma_ref from the range plateau at these settings.
  double gamma_ref = std::numeric_limits<double>::quiet_NaN();
  int threads = 0;
};

struct WllnReport {
  WllnConfig config;
  double gamma_ref_used = 0.0;
  std::vector<WllnPoint> points;
  bool monotone_within_2sigma = false;

  std::vector<CheckResult> checks() const;
  std::string series_csv() const;
  nlohmann::json summary() const;
};

WllnReport run_wlln(const WllnConfig& cfg);

// ---------------------------------------------------------------------------
// variance: range-variance scaling.

struct VarianceConfig {
  std::uint64_t master_seed = 1;
  std::vector<std::int64_t> grid = {512, 1024, 2048, 4096, 8192};
  std::int64_t samples = 20000;
  std::int64_t window_lo = 512;
  std::int64_t window_hi = 8192;
  int threads = 0;
};

struct VarianceReport {
  VarianceConfig config;
  RangeMoments moments;
  PowerLawFit fit;                 // V(n) ~ C n^beta
  bool subquadratic = false;       // beta + 2*SE < 2
  bool ratio_decreasing = false;   // V/n^2 on the top half
  double beta_minus_conjecture = 0.0;  // beta - 1.5, diagnostic only

  std::vector<CheckResult> checks() const;
  std::string series_csv() const;
  nlohmann::json summary() const;
};

VarianceReport run_variance(const VarianceConfig& cfg);

// ---------------------------------------------------------------------------
// baseline: planar SRW calibration of the range machinery.

struct BaselineConfig {
  std::uint64_t master_seed = 1;
  std::vector<std::int64_t> grid = {1000, 10000, 100000};
  std::int64_t samples = 1000;
  double ratio_lo = 0.7;
  double ratio_hi = 1.3;
  int threads = 0;
};

struct BaselineReport {
  BaselineConfig config;
  RangeMoments moments;
  std::vector<double> ratios;  // E[R_n] log n / (pi n)
  bool ratio_in_band = false;
  bool density_decreasing = false;  // E[R_n]/n decreasing

  std::vector<CheckResult> checks() const;
  std::string series_csv() const;
  nlohmann::json summary() const;
};

BaselineReport run_baseline(const BaselineConfig& cfg);

}  // namespace orw::experiments
