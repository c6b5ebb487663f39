#include "orw/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "orw/parallel.hpp"
#include "orw/range.hpp"

namespace orw::experiments {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool Manifest::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

nlohmann::json Manifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = std::string(kVersion);
  j["config"] = config;
  j["summary"] = summary;
  j["wall_seconds"] = wall_seconds;
  nlohmann::json jc = nlohmann::json::object();
  for (const CheckResult& c : checks) {
    jc[c.name] = {{"passed", c.passed}, {"detail", c.detail}};
  }
  j["checks"] = jc;
  j["outputs"] = output_digests;
  j["all_passed"] = all_passed();
  return j;
}

namespace {

std::string csv_header(const std::string& command, const nlohmann::json& config) {
  std::ostringstream out;
  out << "# command=" << command << " version=" << kVersion << '\n';
  out << "# config=" << config.dump() << '\n';
  return out.str();
}

CheckResult make_check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

std::string grid_to_string(const std::vector<std::int64_t>& grid) {
  std::string s;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(grid[i]);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// oracle

namespace {

nlohmann::json oracle_config_json(const OracleConfig& c) {
  return {{"master_seed", c.master_seed},
          {"n", c.n},
          {"num_random_envs", c.num_random_envs},
          {"include_deterministic_envs", c.include_deterministic_envs},
          {"dp_cross_check_n", c.dp_cross_check_n},
          {"dp_cross_check_envs", c.dp_cross_check_envs}};
}

}  // namespace

OracleReport run_oracle(const OracleConfig& cfg) {
  OracleReport report;
  report.config = cfg;

  std::vector<std::pair<std::string, OrientationField>> fields;
  if (cfg.include_deterministic_envs) {
    fields.emplace_back("constant", OrientationField::constant(+1));
    fields.emplace_back("alternating", OrientationField::alternating());
  }
  for (int i = 0; i < cfg.num_random_envs; ++i) {
    fields.emplace_back("random" + std::to_string(i),
                        sample_environment(cfg.master_seed, static_cast<std::uint64_t>(i)));
  }

  for (const auto& [name, field] : fields) {
    OracleEnvResult env;
    env.env = name;
    env.deterministic = name == "constant" || name == "alternating";
    const EventTables tables = quenched_event_tables(cfg.n, field);
    env.u = tables.u;
    env.gamma = tables.b;
    env.a = tables.a;
    for (int n = 1; n <= cfg.n; ++n) {
      env.renewal_residual_max =
          std::max(env.renewal_residual_max, renewal_residual(tables.u, tables.b, n));
    }
    env.subadditivity = verify_subadditivity(cfg.n, field);
    report.envs.push_back(std::move(env));
  }

  report.reversibility_deviation = verify_reversibility(cfg.n);

  const EventTables annealed = annealed_event_tables(cfg.n);
  for (int k = 0; k <= cfg.n; ++k) {
    report.annealed_ab_dev =
        std::max(report.annealed_ab_dev,
                 std::abs(annealed.a[static_cast<std::size_t>(k)] -
                          annealed.b[static_cast<std::size_t>(k)]));
  }

  // propagation vs enumeration, plus the distribution-level assertions
  for (int i = 0; i < cfg.dp_cross_check_envs; ++i) {
    const OrientationField field =
        sample_environment(cfg.master_seed, static_cast<std::uint64_t>(i));
    const int n = cfg.dp_cross_check_n;
    const EventTables tables = quenched_event_tables(n, field);
    const QuenchedSeries series = quenched_series(n, field);
    for (int k = 0; k <= n; ++k) {
      report.dp_agreement_dev =
          std::max({report.dp_agreement_dev,
                    std::abs(series.u[static_cast<std::size_t>(k)] -
                             tables.u[static_cast<std::size_t>(k)]),
                    std::abs(series.gamma[static_cast<std::size_t>(k)] -
                             tables.b[static_cast<std::size_t>(k)])});
      if (k > 0) {
        report.monotone_gamma_violation =
            std::max(report.monotone_gamma_violation,
                     series.gamma[static_cast<std::size_t>(k)] -
                         series.gamma[static_cast<std::size_t>(k - 1)]);
      }
    }
    for (const bool taboo : {false, true}) {
      const auto dists =
          propagate(n, field, taboo ? std::optional<Position>(Position{0, 0}) : std::nullopt);
      for (const ExactDistribution& d : dists) {
        report.mass_conservation_dev = std::max(
            report.mass_conservation_dev, std::abs(d.total_mass() + d.leaked - 1.0));
        for (const auto& [key, m] : d.mass) {
          const auto x = static_cast<std::int32_t>(key >> 32);
          const auto y = static_cast<std::int32_t>(key & 0xffffffffu);
          if (((x + y + d.step) & 1) != 0) {
            report.parity_support_dev = std::max(report.parity_support_dev, m);
          }
        }
      }
    }
  }
  return report;
}

std::vector<CheckResult> OracleReport::checks() const {
  double renewal_max = 0.0, a_gamma_det = 0.0, a_gamma_random = 0.0, reflection = 0.0;
  bool subadd = true;
  for (const OracleEnvResult& e : envs) {
    renewal_max = std::max(renewal_max, e.renewal_residual_max);
    reflection = std::max(reflection, e.subadditivity.max_reflection_dev);
    subadd = subadd && e.subadditivity.holds;
    (e.deterministic ? a_gamma_det : a_gamma_random) =
        std::max(e.deterministic ? a_gamma_det : a_gamma_random,
                 e.subadditivity.max_a_gamma_dev);
  }
  std::vector<CheckResult> out;
  out.push_back(make_check("renewal_enumeration", renewal_max < 1e-12,
                           "max residual " + format_g17(renewal_max)));
  out.push_back(make_check("reversibility", reversibility_deviation < 1e-15,
                           "max weight deviation " + format_g17(reversibility_deviation)));
  out.push_back(make_check("annealed_new_site_equals_no_return", annealed_ab_dev < 1e-12,
                           "max deviation " + format_g17(annealed_ab_dev)));
  out.push_back(make_check("subadditivity", subadd,
                           subadd ? "holds for all j<k on every field" : "violated"));
  out.push_back(make_check("reflection_identity", reflection < 1e-12,
                           "max deviation " + format_g17(reflection)));
  out.push_back(make_check("escape_symmetry_deterministic", a_gamma_det < 1e-12,
                           "max |P[A_k]-gamma(k)| " + format_g17(a_gamma_det)));
  out.push_back(make_check("escape_symmetry_random", a_gamma_random < 1e-12,
                           "max |P[A_k]-gamma(k)| " + format_g17(a_gamma_random)));
  out.push_back(make_check("dp_enumeration_agreement", dp_agreement_dev < 1e-12,
                           "max deviation " + format_g17(dp_agreement_dev)));
  out.push_back(make_check("mass_conservation", mass_conservation_dev < 1e-12,
                           "max deviation " + format_g17(mass_conservation_dev)));
  out.push_back(make_check("parity_support", parity_support_dev == 0.0,
                           "odd-parity mass " + format_g17(parity_support_dev)));
  out.push_back(make_check("monotone_no_return", monotone_gamma_violation <= 0.0,
                           "max increase " + format_g17(monotone_gamma_violation)));
  return out;
}

std::string OracleReport::series_csv() const {
  std::ostringstream out;
  out << csv_header("oracle", oracle_config_json(config));
  out << "env,k,u,gamma,new_site_prob\n";
  for (const OracleEnvResult& e : envs) {
    for (std::size_t k = 0; k < e.u.size(); ++k) {
      out << e.env << ',' << k << ',' << format_g17(e.u[k]) << ',' << format_g17(e.gamma[k])
          << ',' << format_g17(e.a[k]) << '\n';
    }
  }
  return out.str();
}

nlohmann::json OracleReport::summary() const {
  nlohmann::json envs_json = nlohmann::json::array();
  for (const OracleEnvResult& e : envs) {
    envs_json.push_back({{"env", e.env},
                         {"renewal_residual_max", e.renewal_residual_max},
                         {"subadditivity_holds", e.subadditivity.holds},
                         {"max_subadditivity_violation", e.subadditivity.max_violation},
                         {"max_a_gamma_dev", e.subadditivity.max_a_gamma_dev},
                         {"max_reflection_dev", e.subadditivity.max_reflection_dev}});
  }
  return {{"environments", envs_json},
          {"reversibility_deviation", reversibility_deviation},
          {"annealed_ab_dev", annealed_ab_dev},
          {"dp_agreement_dev", dp_agreement_dev},
          {"mass_conservation_dev", mass_conservation_dev},
          {"parity_support_dev", parity_support_dev},
          {"monotone_gamma_violation", monotone_gamma_violation}};
}

// ---------------------------------------------------------------------------
// renewal

namespace {

nlohmann::json renewal_config_json(const RenewalConfig& c) {
  return {{"master_seed", c.master_seed}, {"n_max", c.n_max}, {"num_envs", c.num_envs}};
}

}  // namespace

RenewalReport run_renewal(const RenewalConfig& cfg) {
  if (cfg.n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  RenewalReport report;
  report.config = cfg;
  report.series.resize(static_cast<std::size_t>(cfg.num_envs));
  report.per_env_residual_max.assign(static_cast<std::size_t>(cfg.num_envs), 0.0);

  parallel_for(cfg.num_envs, cfg.threads, [&](std::int64_t i) {
    const OrientationField field =
        sample_environment(cfg.master_seed, static_cast<std::uint64_t>(i));
    QuenchedSeries series = quenched_series(cfg.n_max, field);
    double worst = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
      worst = std::max(worst, renewal_residual(series.u, series.gamma, n));
    }
    report.per_env_residual_max[static_cast<std::size_t>(i)] = worst;
    report.series[static_cast<std::size_t>(i)] = std::move(series);
  });
  for (const double r : report.per_env_residual_max) {
    report.residual_max = std::max(report.residual_max, r);
  }
  return report;
}

std::vector<CheckResult> RenewalReport::checks() const {
  return {make_check("renewal_at_scale", residual_max < 1e-10,
                     "max residual " + format_g17(residual_max) + " over n<=" +
                         std::to_string(config.n_max))};
}

std::string RenewalReport::series_csv() const {
  std::ostringstream out;
  out << csv_header("renewal", renewal_config_json(config));
  out << "env,k,u,gamma\n";
  for (std::size_t e = 0; e < series.size(); ++e) {
    for (std::size_t k = 0; k < series[e].u.size(); ++k) {
      out << e << ',' << k << ',' << format_g17(series[e].u[k]) << ','
          << format_g17(series[e].gamma[k]) << '\n';
    }
  }
  return out.str();
}

nlohmann::json RenewalReport::summary() const {
  return {{"residual_max", residual_max}, {"per_env_residual_max", per_env_residual_max}};
}

// ---------------------------------------------------------------------------
// llt

namespace {

nlohmann::json llt_config_json(const LltConfig& c) {
  return {{"master_seed", c.master_seed},   {"num_envs", c.num_envs},
          {"truncation", c.truncation},     {"window_lo", c.window_lo},
          {"window_hi", c.window_hi},       {"exponent_lo", c.exponent_lo},
          {"exponent_hi", c.exponent_hi}};
}

nlohmann::json fit_json(const PowerLawFit& f) {
  return {{"amplitude", f.amplitude},
          {"exponent", f.exponent},
          {"exponent_std_error", f.exponent_std_error},
          {"window", {f.window_lo, f.window_hi}},
          {"residual_rms", f.residual_rms},
          {"points", f.points}};
}

}  // namespace

LltReport run_llt(const LltConfig& cfg) {
  LltReport report;
  report.config = cfg;
  report.series =
      annealed_return_series(cfg.master_seed, cfg.num_envs, cfg.truncation, cfg.threads);
  report.fit =
      fit_power_law(report.series.n, report.series.value, cfg.window_lo, cfg.window_hi);
  return report;
}

std::vector<CheckResult> LltReport::checks() const {
  const bool in_band =
      fit.exponent >= config.exponent_lo && fit.exponent <= config.exponent_hi;
  return {make_check("llt_exponent_band", in_band,
                     "alpha " + format_g17(fit.exponent) + " in [" +
                         format_g17(config.exponent_lo) + "," +
                         format_g17(config.exponent_hi) + "], amplitude " +
                         format_g17(fit.amplitude))};
}

std::string LltReport::series_csv() const {
  std::ostringstream out;
  out << csv_header("llt", llt_config_json(config));
  out << "n,u,stderr\n";
  for (std::size_t i = 0; i < series.n.size(); ++i) {
    out << series.n[i] << ',' << format_g17(series.value[i]) << ','
        << format_g17(series.std_error[i]) << '\n';
  }
  return out.str();
}

nlohmann::json LltReport::summary() const {
  return {{"fit", fit_json(fit)}};
}

// ---------------------------------------------------------------------------
// green

namespace {

nlohmann::json green_config_json(const GreenConfig& c) {
  return {{"master_seed", c.master_seed},
          {"num_envs", c.num_envs},
          {"truncation", c.truncation},
          {"duality_tolerance", c.duality_tolerance}};
}

// Split-point inequality inherited from the last-return decomposition:
// for every l <= m, gamma(n-1-2l) * sum_{k<=l} u(2k) >= 1 - sum_{k=l+1}^m u(2k).
bool bound_chain_holds(const QuenchedSeries& s, int n) {
  const int m = (n - 1) / 2;
  double partial = 0.0;
  double upper_tail = 0.0;
  for (int k = 1; k <= m; ++k) upper_tail += s.u[static_cast<std::size_t>(2 * k)];
  for (int l = 0; l <= m; ++l) {
    partial += s.u[static_cast<std::size_t>(2 * l)];
    if (l >= 1) upper_tail -= s.u[static_cast<std::size_t>(2 * l)];
    const double lhs = s.gamma[static_cast<std::size_t>(n - 1 - 2 * l)] * partial;
    if (lhs < 1.0 - upper_tail - 1e-12) return false;
  }
  return true;
}

}  // namespace

GreenReport run_green(const GreenConfig& cfg) {
  GreenReport report;
  report.config = cfg;
  report.envs.resize(static_cast<std::size_t>(cfg.num_envs));
  std::vector<char> chain_ok(static_cast<std::size_t>(cfg.num_envs), 0);

  parallel_for(cfg.num_envs, cfg.threads, [&](std::int64_t i) {
    const OrientationField field =
        sample_environment(cfg.master_seed, static_cast<std::uint64_t>(i));
    const QuenchedSeries series = quenched_series(cfg.truncation, field);
    GreenEnvResult env;
    env.gamma_survival = series.gamma[static_cast<std::size_t>(cfg.truncation)];
    env.green = green_from_series(series.u, cfg.truncation, TailMethod::power_law);
    env.duality_product = env.gamma_survival * env.green.total();
    chain_ok[static_cast<std::size_t>(i)] = bound_chain_holds(series, cfg.truncation) ? 1 : 0;
    report.envs[static_cast<std::size_t>(i)] = env;
  });

  report.bound_chain_ok =
      std::all_of(chain_ok.begin(), chain_ok.end(), [](char c) { return c != 0; });
  double sum_inv = 0.0, sum_total = 0.0;
  for (const GreenEnvResult& e : report.envs) {
    report.duality_dev_max = std::max(report.duality_dev_max, std::abs(e.duality_product - 1.0));
    sum_inv += 1.0 / e.green.total();
    sum_total += e.green.total();
  }
  report.mean_inverse_green = sum_inv / cfg.num_envs;
  report.inverse_mean_green = static_cast<double>(cfg.num_envs) / sum_total;
  return report;
}

std::vector<CheckResult> GreenReport::checks() const {
  std::vector<CheckResult> out;
  out.push_back(make_check(
      "duality_product", duality_dev_max <= config.duality_tolerance,
      "max |gamma(N)*U_est - 1| = " + format_g17(duality_dev_max) + " at N=" +
          std::to_string(config.truncation) + ", tolerance " +
          format_g17(config.duality_tolerance)));
  out.push_back(make_check("bound_chain_inequality", bound_chain_ok,
                           "split-point inequality over all l"));
  out.push_back(make_check(
      "jensen_gap_nonnegative", mean_inverse_green >= inverse_mean_green - 1e-15,
      "E[1/U] = " + format_g17(mean_inverse_green) + " vs 1/E[U] = " +
          format_g17(inverse_mean_green)));
  return out;
}

std::string GreenReport::series_csv() const {
  std::ostringstream out;
  out << csv_header("green", green_config_json(config));
  out << "env,gamma_survival,green_partial,green_tail,green_total,duality_product\n";
  for (std::size_t e = 0; e < envs.size(); ++e) {
    const GreenEnvResult& r = envs[e];
    out << e << ',' << format_g17(r.gamma_survival) << ',' << format_g17(r.green.partial_sum)
        << ',' << format_g17(r.green.tail_estimate) << ',' << format_g17(r.green.total())
        << ',' << format_g17(r.duality_product) << '\n';
  }
  return out.str();
}

nlohmann::json GreenReport::summary() const {
  return {{"duality_dev_max", duality_dev_max},
          {"bound_chain_ok", bound_chain_ok},
          {"mean_inverse_green", mean_inverse_green},
          {"inverse_mean_green", inverse_mean_green}};
}

// ---------------------------------------------------------------------------
// range

namespace {

nlohmann::json range_config_json(const RangeConfig& c) {
  return {{"master_seed", c.master_seed},
          {"grid", c.grid},
          {"samples", c.samples},
          {"gamma_envs", c.gamma_envs},
          {"gamma_truncation", c.gamma_truncation}};
}

}  // namespace

RangeReport run_range(const RangeConfig& cfg) {
  RangeReport report;
  report.config = cfg;
  report.moments = range_moments(AnnealedMode{cfg.master_seed}, cfg.grid, cfg.samples,
                                 cfg.threads);
  report.gamma_ref =
      annealed_gamma(cfg.master_seed, cfg.gamma_envs, cfg.gamma_truncation, cfg.threads);

  const std::size_t last = cfg.grid.size() - 1;
  report.plateau_ratio =
      report.moments.mean[last] / static_cast<double>(cfg.grid[last]);
  report.plateau_std_error =
      report.moments.mean_std_error(last) / static_cast<double>(cfg.grid[last]);

  report.ratio_decreasing = true;
  for (std::size_t i = 0; i + 1 < cfg.grid.size(); ++i) {
    const double ri = report.moments.mean[i] / static_cast<double>(cfg.grid[i]);
    const double rj = report.moments.mean[i + 1] / static_cast<double>(cfg.grid[i + 1]);
    const double se_i = report.moments.mean_std_error(i) / static_cast<double>(cfg.grid[i]);
    const double se_j =
        report.moments.mean_std_error(i + 1) / static_cast<double>(cfg.grid[i + 1]);
    if (rj > ri + 2.0 * std::sqrt(se_i * se_i + se_j * se_j)) report.ratio_decreasing = false;
  }

  const double joint = std::sqrt(report.plateau_std_error * report.plateau_std_error +
                                 report.gamma_ref.std_error.value_or(0.0) *
                                     report.gamma_ref.std_error.value_or(0.0));
  report.consistency_sigmas =
      joint > 0.0 ? std::abs(report.plateau_ratio - report.gamma_ref.value) / joint
                  : std::numeric_limits<double>::infinity();
  return report;
}

std::vector<CheckResult> RangeReport::checks() const {
  std::vector<CheckResult> out;
  out.push_back(make_check("range_ratio_decreasing", ratio_decreasing,
                           "E[R_n]/n decreasing toward plateau (2 sigma slack)"));
  out.push_back(make_check(
      "range_matches_inverse_green", consistency_sigmas <= 3.0,
      "plateau " + format_g17(plateau_ratio) + " vs E[1/U] " +
          format_g17(gamma_ref.value) + " differ by " + format_g17(consistency_sigmas) +
          " joint standard errors"));
  return out;
}

std::string RangeReport::series_csv() const {
  std::ostringstream out;
  out << csv_header("range", range_config_json(config));
  out << "n,mean_range,ratio,variance,ratio_stderr\n";
  for (std::size_t i = 0; i < moments.grid.size(); ++i) {
    const double n = static_cast<double>(moments.grid[i]);
    out << moments.grid[i] << ',' << format_g17(moments.mean[i]) << ','
        << format_g17(moments.mean[i] / n) << ',' << format_g17(moments.variance[i]) << ','
        << format_g17(moments.mean_std_error(i) / n) << '\n';
  }
  return out.str();
}

nlohmann::json RangeReport::summary() const {
  return {{"plateau_ratio", plateau_ratio},
          {"plateau_std_error", plateau_std_error},
          {"gamma_ref", gamma_ref.value},
          {"gamma_ref_std_error", gamma_ref.std_error.value_or(0.0)},
          {"consistency_sigmas", consistency_sigmas}};
}

// ---------------------------------------------------------------------------
// wlln

namespace {

nlohmann::json wlln_config_json(const WllnConfig& c) {
  return {{"master_seed", c.master_seed},
          {"delta", c.delta},
          {"grid", c.grid},
          {"samples", c.samples},
          {"gamma_ref", std::isnan(c.gamma_ref) ? nlohmann::json() : nlohmann::json(c.gamma_ref)}};
}

}  // namespace

WllnReport run_wlln(const WllnConfig& cfg) {
  WllnReport report;
  report.config = cfg;
  report.gamma_ref_used = cfg.gamma_ref;
  if (std::isnan(report.gamma_ref_used)) {
    // default reference: the measured plateau of E[R_n]/n on this grid
    const RangeMoments moments =
        range_moments(AnnealedMode{cfg.master_seed}, cfg.grid, cfg.samples, cfg.threads);
    report.gamma_ref_used =
        moments.mean.back() / static_cast<double>(cfg.grid.back());
  }
  report.points = wlln_check(AnnealedMode{cfg.master_seed}, cfg.delta, cfg.grid, cfg.samples,
                             report.gamma_ref_used, cfg.threads);
  report.monotone_within_2sigma = true;
  for (std::size_t i = 0; i + 1 < report.points.size(); ++i) {
    const WllnPoint& a = report.points[i];
    const WllnPoint& b = report.points[i + 1];
    const double slack =
        2.0 * std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    if (b.frequency > a.frequency + slack) report.monotone_within_2sigma = false;
  }
  return report;
}

std::vector<CheckResult> WllnReport::checks() const {
  std::string freqs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) freqs += ' ';
    freqs += format_g17(points[i].frequency);
  }
  return {make_check("wlln_monotone_exceedance", monotone_within_2sigma,
                     "frequencies " + freqs + " at delta " + format_g17(config.delta) +
                         ", gamma_ref " + format_g17(gamma_ref_used))};
}

std::string WllnReport::series_csv() const {
  std::ostringstream out;
  out << csv_header("wlln", wlln_config_json(config));
  out << "n,frequency,stderr\n";
  for (const WllnPoint& p : points) {
    out << p.n << ',' << format_g17(p.frequency) << ',' << format_g17(p.std_error) << '\n';
  }
  return out.str();
}

nlohmann::json WllnReport::summary() const {
  return {{"gamma_ref_used", gamma_ref_used},
          {"monotone_within_2sigma", monotone_within_2sigma}};
}

// ---------------------------------------------------------------------------
// variance

namespace {

nlohmann::json variance_config_json(const VarianceConfig& c) {
  return {{"master_seed", c.master_seed},
          {"grid", c.grid},
          {"samples", c.samples},
          {"window_lo", c.window_lo},
          {"window_hi", c.window_hi}};
}

}  // namespace

VarianceReport run_variance(const VarianceConfig& cfg) {
  VarianceReport report;
  report.config = cfg;
  report.moments =
      range_moments(AnnealedMode{cfg.master_seed}, cfg.grid, cfg.samples, cfg.threads);
  report.fit = variance_exponent(report.moments, cfg.window_lo, cfg.window_hi);
  report.subquadratic = report.fit.exponent + 2.0 * report.fit.exponent_std_error < 2.0;
  report.ratio_decreasing = variance_ratio_decreasing_top_half(report.moments);
  report.beta_minus_conjecture = report.fit.exponent - 1.5;
  return report;
}

std::vector<CheckResult> VarianceReport::checks() const {
  std::vector<CheckResult> out;
  out.push_back(make_check(
      "variance_subquadratic", subquadratic,
      "beta " + format_g17(fit.exponent) + " +- " + format_g17(fit.exponent_std_error) +
          " (2 sigma below 2); beta - 1.5 = " + format_g17(beta_minus_conjecture) +
          " (diagnostic)"));
  out.push_back(
      make_check("variance_ratio_decreasing", ratio_decreasing,
                 "V(n)/n^2 decreasing on the top half of the grid"));
  return out;
}

std::string VarianceReport::series_csv() const {
  std::ostringstream out;
  out << csv_header("variance", variance_config_json(config));
  out << "n,mean_range,variance,var_over_n2\n";
  for (std::size_t i = 0; i < moments.grid.size(); ++i) {
    const double n = static_cast<double>(moments.grid[i]);
    out << moments.grid[i] << ',' << format_g17(moments.mean[i]) << ','
        << format_g17(moments.variance[i]) << ',' << format_g17(moments.variance[i] / (n * n))
        << '\n';
  }
  return out.str();
}

nlohmann::json VarianceReport::summary() const {
  return {{"fit", fit_json(fit)},
          {"subquadratic", subquadratic},
          {"ratio_decreasing", ratio_decreasing},
          {"beta_minus_conjecture", beta_minus_conjecture}};
}

// ---------------------------------------------------------------------------
// baseline

namespace {

nlohmann::json baseline_config_json(const BaselineConfig& c) {
  return {{"master_seed", c.master_seed},
          {"grid", c.grid},
          {"samples", c.samples},
          {"ratio_lo", c.ratio_lo},
          {"ratio_hi", c.ratio_hi}};
}

}  // namespace

BaselineReport run_baseline(const BaselineConfig& cfg) {
  BaselineReport report;
  report.config = cfg;
  report.moments =
      baseline_planar_range(cfg.master_seed, cfg.grid, cfg.samples, cfg.threads);
  report.ratios = dvoretzky_erdos_ratio(report.moments);
  report.ratio_in_band =
      report.ratios.back() >= cfg.ratio_lo && report.ratios.back() <= cfg.ratio_hi;
  report.density_decreasing = true;
  for (std::size_t i = 0; i + 1 < cfg.grid.size(); ++i) {
    if (report.moments.mean[i + 1] / static_cast<double>(cfg.grid[i + 1]) >=
        report.moments.mean[i] / static_cast<double>(cfg.grid[i])) {
      report.density_decreasing = false;
    }
  }
  return report;
}

std::vector<CheckResult> BaselineReport::checks() const {
  std::vector<CheckResult> out;
  out.push_back(make_check("baseline_ratio_band", ratio_in_band,
                           "E[R_n] log n / (pi n) = " + format_g17(ratios.back()) +
                               " at n=" + std::to_string(config.grid.back())));
  out.push_back(make_check("baseline_density_decreasing", density_decreasing,
                           "E[R_n]/n decreasing on grid " + grid_to_string(config.grid)));
  return out;
}

std::string BaselineReport::series_csv() const {
  std::ostringstream out;
  out << csv_header("baseline", baseline_config_json(config));
  out << "n,mean_range,ratio\n";
  for (std::size_t i = 0; i < moments.grid.size(); ++i) {
    out << moments.grid[i] << ',' << format_g17(moments.mean[i]) << ','
        << format_g17(ratios[i]) << '\n';
  }
  return out.str();
}

nlohmann::json BaselineReport::summary() const {
  return {{"ratios", ratios},
          {"ratio_in_band", ratio_in_band},
          {"density_decreasing", density_decreasing}};
}

}  // namespace orw::experiments
