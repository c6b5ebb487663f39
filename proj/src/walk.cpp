#include "orw/walk.hpp"

#include <ostream>
#include <stdexcept>

namespace orw {

Trajectory simulate(int n, const WalkMode& mode, std::uint64_t trajectory_index) {
  if (n < 0) throw std::invalid_argument("step count must be nonnegative");
  Trajectory t;
  t.positions.reserve(static_cast<std::size_t>(n) + 1);
  t.moves.reserve(static_cast<std::size_t>(n));
  t.positions.push_back({0, 0});
  walk(n, mode, trajectory_index, [&t](int, Position pos, MoveKind move) {
    t.positions.push_back(pos);
    t.moves.push_back(move);
  });
  return t;
}

Decomposition decompose(const Trajectory& trajectory, const OrientationField& field) {
  Decomposition d;
  d.vertical_path.reserve(trajectory.positions.size());
  for (const Position& p : trajectory.positions) d.vertical_path.push_back(p.y);

  std::int64_t scenery_sum = 0;
  for (int k = 0; k < trajectory.steps(); ++k) {
    if (trajectory.moves[static_cast<std::size_t>(k)] == MoveKind::horizontal) {
      scenery_sum += field(trajectory.positions[static_cast<std::size_t>(k)].y);
    }
  }
  d.horizontal_check = trajectory.positions.empty()
                           ? false
                           : trajectory.positions.back().x == scenery_sum;
  return d;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "k,x,y,move\n";
  for (std::size_t k = 0; k < trajectory.positions.size(); ++k) {
    const Position& p = trajectory.positions[k];
    out << k << ',' << p.x << ',' << p.y << ',';
    if (k > 0) {
      switch (trajectory.moves[k - 1]) {
        case MoveKind::up: out << "up"; break;
        case MoveKind::down: out << "down"; break;
        case MoveKind::horizontal: out << "horizontal"; break;
      }
    }
    out << '\n';
  }
}

}  // namespace orw
