#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "orw/orientation.hpp"
#include "orw/rng.hpp"

namespace orw {

struct Position {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend auto operator<=>(const Position&, const Position&) = default;
  friend Position operator-(Position a, Position b) { return {a.x - b.x, a.y - b.y}; }
};

/// Packs (x,y) into one hash key, two 32-bit halves; lossless for |x|,|y| < 2^31.
inline std::uint64_t packed_key(Position p) {
  return (std::uint64_t{static_cast<std::uint32_t>(p.x)} << 32) |
         static_cast<std::uint32_t>(p.y);
}

enum class MoveKind : std::uint8_t { up, down, horizontal };

struct Trajectory {
  std::vector<Position> positions;  // n+1 entries, positions[0] == (0,0)
  std::vector<MoveKind> moves;      // n entries
  int steps() const { return static_cast<int>(moves.size()); }
};

struct QuenchedMode {
  OrientationField field;
  std::uint64_t walk_seed = 0;
};
struct AnnealedMode {
  std::uint64_t master_seed = 0;  // fresh environment per trajectory index
};
/// Standard unoriented planar SRW (four moves, probability 1/4 each);
/// only used to calibrate the range against the classical pi*n/log n law.
struct BaselineMode {
  std::uint64_t master_seed = 0;
};
using WalkMode = std::variant<QuenchedMode, AnnealedMode, BaselineMode>;

/// One transition of the oriented-lattice walk: draw in {0,1,2} selects
/// (x,y+1), (x,y-1) or (x + eps_y, y), each with probability 1/3.
inline Position step(Position pos, const OrientationField& field, std::uint32_t draw) {
  switch (draw) {
    case 0: return {pos.x, pos.y + 1};
    case 1: return {pos.x, pos.y - 1};
    default: return {pos.x + field(pos.y), pos.y};
  }
}

namespace detail {

struct ResolvedWalk {
  OrientationField field = OrientationField::constant(+1);
  std::uint64_t step_key = 0;
  bool planar = false;
};

inline ResolvedWalk resolve_walk(const WalkMode& mode, std::uint64_t trajectory_index) {
  ResolvedWalk r;
  if (const auto* q = std::get_if<QuenchedMode>(&mode)) {
    r.field = q->field;
    r.step_key = rng::prf64(q->walk_seed, trajectory_index, rng::kDomainWalk);
  } else if (const auto* a = std::get_if<AnnealedMode>(&mode)) {
    r.field = sample_environment(a->master_seed, trajectory_index);
    r.step_key = rng::prf64(a->master_seed, trajectory_index, rng::kDomainWalk);
  } else {
    const auto& b = std::get<BaselineMode>(mode);
    r.planar = true;
    r.step_key = rng::prf64(b.master_seed, trajectory_index, rng::kDomainWalk);
  }
  return r;
}

}  // namespace detail

/// Streams a walk without materializing it: visit(k, position, move) is
/// called for k = 1..n with the state after step k. Pure function of
/// (mode, trajectory_index), independent of execution order.
template <class Visitor>
void walk(int n, const WalkMode& mode, std::uint64_t trajectory_index, Visitor&& visit) {
  const detail::ResolvedWalk r = detail::resolve_walk(mode, trajectory_index);
  Position pos{};
  for (int k = 1; k <= n; ++k) {
    const std::uint64_t bits = rng::prf64(r.step_key, static_cast<std::uint64_t>(k));
    MoveKind move;
    if (r.planar) {
      switch (rng::uniform4(bits)) {
        case 0: ++pos.y; move = MoveKind::up; break;
        case 1: --pos.y; move = MoveKind::down; break;
        case 2: ++pos.x; move = MoveKind::horizontal; break;
        default: --pos.x; move = MoveKind::horizontal; break;
      }
    } else {
      const std::uint32_t draw = rng::uniform3(bits);
      pos = step(pos, r.field, draw);
      move = draw == 0 ? MoveKind::up : draw == 1 ? MoveKind::down : MoveKind::horizontal;
    }
    visit(k, pos, move);
  }
}

/// Materialized n-step trajectory from the origin.
Trajectory simulate(int n, const WalkMode& mode, std::uint64_t trajectory_index);

struct Decomposition {
  std::vector<std::int64_t> vertical_path;  // levels y_0..y_n
  bool horizontal_check = false;  // x_n equals the scenery sum over horizontal steps
};

/// Splits a trajectory into its vertical SRW component and verifies the
/// random-scenery identity x_n = sum of eps(y_k) over horizontal steps k.
/// A mismatched field makes the check return false.
Decomposition decompose(const Trajectory& trajectory, const OrientationField& field);

/// CSV rows "k,x,y,move" (move of step k, empty for k=0).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace orw
