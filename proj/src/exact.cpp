#include "orw/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace orw {

namespace {

std::int64_t pow3(int n) {
  std::int64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 3;
  return v;
}

void check_enumeration_budget(int n, int limit, const char* what) {
  if (n < 0) throw std::invalid_argument("step count must be nonnegative");
  if (n > limit) {
    throw std::invalid_argument(std::string(what) + ": n=" + std::to_string(n) +
                                " exceeds the enumeration budget of " + std::to_string(limit));
  }
}

// Shared DFS over the 3^n quenched move sequences. Visit(positions) runs at
// every leaf; all paths carry the same weight 3^-n.
template <class Visit>
void for_each_quenched_path(int n, const OrientationField& field, Visit&& visit) {
  std::vector<Position> pos(static_cast<std::size_t>(n) + 1, Position{0, 0});
  const auto rec = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      visit(std::span<const Position>(pos));
      return;
    }
    const Position cur = pos[static_cast<std::size_t>(depth)];
    auto& slot = pos[static_cast<std::size_t>(depth) + 1];
    slot = {cur.x, cur.y + 1};
    self(self, depth + 1);
    slot = {cur.x, cur.y - 1};
    self(self, depth + 1);
    slot = {cur.x + field(cur.y), cur.y};
    self(self, depth + 1);
  };
  rec(rec, 0);
}

// DFS over consistent annealed paths. Horizontal moves at an unconstrained
// level branch over both directions; each leaf reports the scaled weight
// 2^(n-|H|), so that probability = scaled / (3^n 2^n), exactly in int64.
template <class Visit>
void for_each_annealed_path(int n, Visit&& visit) {
  std::vector<Position> pos(static_cast<std::size_t>(n) + 1, Position{0, 0});
  std::vector<std::int8_t> level_sign(2 * static_cast<std::size_t>(n) + 1, 0);
  const auto rec = [&](auto&& self, int depth, int constrained_levels) -> void {
    if (depth == n) {
      visit(std::span<const Position>(pos), std::int64_t{1} << (n - constrained_levels));
      return;
    }
    const Position cur = pos[static_cast<std::size_t>(depth)];
    auto& slot = pos[static_cast<std::size_t>(depth) + 1];
    slot = {cur.x, cur.y + 1};
    self(self, depth + 1, constrained_levels);
    slot = {cur.x, cur.y - 1};
    self(self, depth + 1, constrained_levels);
    auto& sign = level_sign[static_cast<std::size_t>(cur.y + n)];
    if (sign != 0) {
      slot = {cur.x + sign, cur.y};
      self(self, depth + 1, constrained_levels);
    } else {
      for (const int s : {+1, -1}) {
        sign = static_cast<std::int8_t>(s);
        slot = {cur.x + s, cur.y};
        self(self, depth + 1, constrained_levels + 1);
      }
      sign = 0;
    }
  };
  rec(rec, 0, 0);
}

// Scaled annealed weight of an arbitrary position sequence: returns
// 2^(n-|H|) when the path is consistent (and made of lattice steps), else 0.
std::int64_t scaled_annealed_weight(std::span<const Position> positions) {
  const int n = static_cast<int>(positions.size()) - 1;
  std::vector<std::pair<std::int64_t, int>> level_dir;  // level -> direction
  int constrained = 0;
  for (int k = 0; k < n; ++k) {
    const Position d = positions[static_cast<std::size_t>(k) + 1] -
                       positions[static_cast<std::size_t>(k)];
    if (d.x == 0 && (d.y == 1 || d.y == -1)) continue;
    if (d.y == 0 && (d.x == 1 || d.x == -1)) {
      const std::int64_t level = positions[static_cast<std::size_t>(k)].y;
      const auto it = std::find_if(level_dir.begin(), level_dir.end(),
                                   [level](const auto& e) { return e.first == level; });
      if (it == level_dir.end()) {
        level_dir.emplace_back(level, static_cast<int>(d.x));
        ++constrained;
      } else if (it->second != d.x) {
        return 0;  // two horizontal directions on one level
      }
      continue;
    }
    return 0;  // not a lattice step
  }
  return std::int64_t{1} << (n - constrained);
}

}  // namespace

double ExactDistribution::total_mass() const {
  double sum = 0.0;
  for (const auto& [key, m] : mass) sum += m;
  return sum;
}

DistributionEvolver::DistributionEvolver(int max_steps, const OrientationField& field,
                                         std::optional<Position> taboo)
    : n_(max_steps), width_(2 * std::int64_t{static_cast<std::int64_t>(max_steps)} + 1),
      taboo_(taboo) {
  if (max_steps < 0) throw std::invalid_argument("max_steps must be nonnegative");
  cur_.assign(static_cast<std::size_t>(width_ * width_), 0.0);
  next_.assign(static_cast<std::size_t>(width_ * width_), 0.0);
  eps_.resize(static_cast<std::size_t>(width_));
  for (std::int64_t y = -n_; y <= n_; ++y) {
    eps_[static_cast<std::size_t>(y + n_)] = static_cast<std::int8_t>(field(y));
  }
  cur_[index(0, 0)] = 1.0;
}

void DistributionEvolver::advance() {
  if (step_ >= n_) throw std::logic_error("evolver advanced past its horizon");
  const int r = step_;
  const int s = step_ + 1;
  // clear the destination region (L1 ball of radius s)
  for (std::int64_t y = -s; y <= s; ++y) {
    const std::int64_t half = s - std::abs(y);
    std::fill_n(next_.begin() + static_cast<std::ptrdiff_t>(index(-half, y)),
                2 * half + 1, 0.0);
  }
  const double third = 1.0 / 3.0;
  for (std::int64_t y = -r; y <= r; ++y) {
    const std::int64_t half = r - std::abs(y);
    // only sites with x + y + step even carry mass
    std::int64_t x = -half;
    if (((x + y + r) & 1) != 0) ++x;
    const std::int8_t dir = eps_[static_cast<std::size_t>(y + n_)];
    for (; x <= half; x += 2) {
      const double m = cur_[index(x, y)];
      if (m == 0.0) continue;
      const double share = m * third;
      next_[index(x, y + 1)] += share;
      next_[index(x, y - 1)] += share;
      next_[index(x + dir, y)] += share;
    }
  }
  step_ = s;
  if (taboo_) {
    double& cell = next_[index(taboo_->x, taboo_->y)];
    leaked_ += cell;
    cell = 0.0;
  }
  cur_.swap(next_);
}

double DistributionEvolver::mass_at(Position p) const {
  if (std::abs(p.x) > n_ || std::abs(p.y) > n_) return 0.0;
  return cur_[index(p.x, p.y)];
}

ExactDistribution DistributionEvolver::snapshot() const {
  ExactDistribution d;
  d.step = step_;
  d.taboo = taboo_;
  d.leaked = leaked_;
  const int r = step_;
  for (std::int64_t y = -r; y <= r; ++y) {
    const std::int64_t half = r - std::abs(y);
    for (std::int64_t x = -half; x <= half; ++x) {
      const double m = cur_[index(x, y)];
      if (m != 0.0) d.mass.emplace(packed_key({x, y}), m);
    }
  }
  return d;
}

std::vector<ExactDistribution> propagate(int n, const OrientationField& field,
                                         std::optional<Position> taboo) {
  DistributionEvolver evolver(n, field, taboo);
  std::vector<ExactDistribution> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(evolver.snapshot());
  for (int k = 1; k <= n; ++k) {
    evolver.advance();
    out.push_back(evolver.snapshot());
  }
  return out;
}

QuenchedSeries quenched_series(int n, const OrientationField& field) {
  QuenchedSeries s;
  s.u.reserve(static_cast<std::size_t>(n) + 1);
  s.gamma.reserve(static_cast<std::size_t>(n) + 1);
  {
    DistributionEvolver plain(n, field);
    s.u.push_back(1.0);
    for (int k = 1; k <= n; ++k) {
      plain.advance();
      s.u.push_back(plain.mass_at({0, 0}));
    }
  }
  {
    DistributionEvolver killed(n, field, Position{0, 0});
    s.gamma.push_back(1.0);
    for (int k = 1; k <= n; ++k) {
      killed.advance();
      s.gamma.push_back(killed.survival());
    }
  }
  return s;
}

PathWeight annealed_path_weight(std::span<const Position> positions) {
  if (positions.empty() || positions.front() != Position{0, 0}) return {0.0, false};
  const int n = static_cast<int>(positions.size()) - 1;
  const std::int64_t scaled = scaled_annealed_weight(positions);
  if (scaled == 0) return {0.0, false};
  return {static_cast<double>(scaled) / (static_cast<double>(pow3(n)) * std::ldexp(1.0, n)),
          true};
}

double enumerate_quenched(int n, const OrientationField& field, const PathEvent& event) {
  check_enumeration_budget(n, kMaxEnumerationSteps, "enumerate_quenched");
  std::int64_t satisfied = 0;
  for_each_quenched_path(n, field, [&](std::span<const Position> p) {
    if (event(p)) ++satisfied;
  });
  return static_cast<double>(satisfied) / static_cast<double>(pow3(n));
}

Rational enumerate_quenched_exact(int n, const OrientationField& field, const PathEvent& event) {
  check_enumeration_budget(n, kMaxExactSteps, "enumerate_quenched_exact");
  std::int64_t satisfied = 0;
  for_each_quenched_path(n, field, [&](std::span<const Position> p) {
    if (event(p)) ++satisfied;
  });
  return {satisfied, pow3(n)};
}

double enumerate_annealed(int n, const PathEvent& event) {
  check_enumeration_budget(n, kMaxEnumerationSteps, "enumerate_annealed");
  std::int64_t scaled_sum = 0;
  for_each_annealed_path(n, [&](std::span<const Position> p, std::int64_t scaled) {
    if (event(p)) scaled_sum += scaled;
  });
  return static_cast<double>(scaled_sum) /
         (static_cast<double>(pow3(n)) * std::ldexp(1.0, n));
}

Rational enumerate_annealed_exact(int n, const PathEvent& event) {
  check_enumeration_budget(n, kMaxExactSteps, "enumerate_annealed_exact");
  std::int64_t scaled_sum = 0;
  for_each_annealed_path(n, [&](std::span<const Position> p, std::int64_t scaled) {
    if (event(p)) scaled_sum += scaled;
  });
  return {scaled_sum, pow3(n) << n};
}

namespace {

// Integer event counters shared by the quenched/annealed table builders.
struct TableCounters {
  std::vector<std::int64_t> a, b, u;
  explicit TableCounters(int n)
      : a(static_cast<std::size_t>(n) + 1, 0),
        b(static_cast<std::size_t>(n) + 1, 0),
        u(static_cast<std::size_t>(n) + 1, 0) {}

  void absorb(std::span<const Position> pos, std::int64_t weight) {
    const int n = static_cast<int>(pos.size()) - 1;
    int first_return = n + 1;
    for (int k = 1; k <= n; ++k) {
      if (pos[static_cast<std::size_t>(k)] == Position{0, 0}) {
        first_return = k;
        break;
      }
    }
    for (int k = 0; k <= n; ++k) {
      const Position pk = pos[static_cast<std::size_t>(k)];
      bool fresh = true;
      for (int l = k - 1; l >= 0; --l) {
        if (pos[static_cast<std::size_t>(l)] == pk) {
          fresh = false;
          break;
        }
      }
      if (fresh) a[static_cast<std::size_t>(k)] += weight;
      if (k < first_return) b[static_cast<std::size_t>(k)] += weight;
      if (pk == Position{0, 0}) u[static_cast<std::size_t>(k)] += weight;
    }
  }

  EventTables scale(double denom) const {
    EventTables t;
    const auto convert = [denom](const std::vector<std::int64_t>& c) {
      std::vector<double> v(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) v[i] = static_cast<double>(c[i]) / denom;
      return v;
    };
    t.a = convert(a);
    t.b = convert(b);
    t.u = convert(u);
    return t;
  }
};

}  // namespace

EventTables quenched_event_tables(int n, const OrientationField& field) {
  check_enumeration_budget(n, kMaxEnumerationSteps, "quenched_event_tables");
  TableCounters counters(n);
  for_each_quenched_path(n, field,
                         [&](std::span<const Position> p) { counters.absorb(p, 1); });
  return counters.scale(static_cast<double>(pow3(n)));
}

EventTables annealed_event_tables(int n) {
  check_enumeration_budget(n, kMaxEnumerationSteps, "annealed_event_tables");
  TableCounters counters(n);
  for_each_annealed_path(
      n, [&](std::span<const Position> p, std::int64_t w) { counters.absorb(p, w); });
  return counters.scale(static_cast<double>(pow3(n)) * std::ldexp(1.0, n));
}

double renewal_residual(std::span<const double> u, std::span<const double> gamma, int n) {
  if (n < 1) throw std::invalid_argument("renewal residual needs n >= 1");
  const int m = (n - 1) / 2;
  if (2 * m >= static_cast<int>(u.size()) || n - 1 >= static_cast<int>(gamma.size())) {
    throw std::invalid_argument("series too short for renewal residual at n=" +
                                std::to_string(n));
  }
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    sum += u[static_cast<std::size_t>(2 * k)] * gamma[static_cast<std::size_t>(n - 1 - 2 * k)];
  }
  return std::abs(sum - 1.0);
}

double verify_renewal(int n, const OrientationField& field) {
  const QuenchedSeries s = quenched_series(std::max(n - 1, 1), field);
  return renewal_residual(s.u, s.gamma, n);
}

double verify_reversibility(int n) {
  check_enumeration_budget(n, kMaxEnumerationSteps, "verify_reversibility");
  std::int64_t max_dev_scaled = 0;
  std::vector<Position> reversed(static_cast<std::size_t>(n) + 1);
  for_each_annealed_path(n, [&](std::span<const Position> p, std::int64_t scaled) {
    const Position end = p.back();
    for (int j = 0; j <= n; ++j) {
      reversed[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(n - j)] - end;
    }
    const std::int64_t back = scaled_annealed_weight(reversed);
    max_dev_scaled = std::max(max_dev_scaled, std::abs(scaled - back));
  });
  return static_cast<double>(max_dev_scaled) /
         (static_cast<double>(pow3(n)) * std::ldexp(1.0, n));
}

SubadditivityReport verify_subadditivity(int n, const OrientationField& field) {
  check_enumeration_budget(n, 12, "verify_subadditivity");
  const std::size_t dim = static_cast<std::size_t>(n) + 1;
  std::vector<std::int64_t> cnt_a(dim, 0), cnt_b(dim, 0), cnt_b_neg(dim, 0);
  std::vector<std::int64_t> cnt_joint(dim * dim, 0);  // A_j ∩ A_k, j < k
  std::vector<std::int64_t> cnt_jk(dim * dim, 0);     // A_{j,k}
  std::vector<int> last(dim, -1);

  for_each_quenched_path(n, field, [&](std::span<const Position> pos) {
    for (int k = 0; k <= n; ++k) {
      const Position pk = pos[static_cast<std::size_t>(k)];
      last[static_cast<std::size_t>(k)] = -1;
      for (int l = k - 1; l >= 0; --l) {
        if (pos[static_cast<std::size_t>(l)] == pk) {
          last[static_cast<std::size_t>(k)] = l;
          break;
        }
      }
    }
    int first_return = n + 1;
    for (int k = 1; k <= n; ++k) {
      if (pos[static_cast<std::size_t>(k)] == Position{0, 0}) {
        first_return = k;
        break;
      }
    }
    for (int k = 0; k <= n; ++k) {
      if (last[static_cast<std::size_t>(k)] < 0) ++cnt_a[static_cast<std::size_t>(k)];
      if (k < first_return) ++cnt_b[static_cast<std::size_t>(k)];
    }
    for (int k = 1; k <= n; ++k) {
      const int lk = last[static_cast<std::size_t>(k)];
      for (int j = 0; j < k; ++j) {
        const std::size_t pair = static_cast<std::size_t>(j) * dim + static_cast<std::size_t>(k);
        if (lk < j) ++cnt_jk[pair];
        if (lk < 0 && last[static_cast<std::size_t>(j)] < 0) ++cnt_joint[pair];
      }
    }
  });
  for_each_quenched_path(n, field.negated(), [&](std::span<const Position> pos) {
    int first_return = n + 1;
    for (int k = 1; k <= n; ++k) {
      if (pos[static_cast<std::size_t>(k)] == Position{0, 0}) {
        first_return = k;
        break;
      }
    }
    for (int k = 0; k <= n && k < first_return; ++k) ++cnt_b_neg[static_cast<std::size_t>(k)];
  });

  SubadditivityReport report;
  report.holds = true;
  const std::int64_t total = pow3(n);
  const double denom = static_cast<double>(total);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k <= n; ++k) {
      const std::size_t pair = static_cast<std::size_t>(j) * dim + static_cast<std::size_t>(k);
      // exact comparison: joint/T <= (a_j/T)(a_jk/T)  <=>  joint*T <= a_j*a_jk
      if (cnt_joint[pair] * total > cnt_a[static_cast<std::size_t>(j)] * cnt_jk[pair]) {
        report.holds = false;
      }
      const double slack =
          static_cast<double>(cnt_joint[pair]) / denom -
          (static_cast<double>(cnt_a[static_cast<std::size_t>(j)]) / denom) *
              (static_cast<double>(cnt_jk[pair]) / denom);
      report.max_violation = std::max(report.max_violation, slack);
    }
  }
  for (int k = 0; k <= n; ++k) {
    report.max_a_gamma_dev =
        std::max(report.max_a_gamma_dev,
                 std::abs(cnt_a[static_cast<std::size_t>(k)] - cnt_b[static_cast<std::size_t>(k)]) / denom);
    report.max_reflection_dev =
        std::max(report.max_reflection_dev,
                 std::abs(cnt_b_neg[static_cast<std::size_t>(k)] - cnt_b[static_cast<std::size_t>(k)]) / denom);
  }
  return report;
}

}  // namespace orw
