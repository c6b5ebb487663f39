#include "orw/orientation.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "orw/rng.hpp"

namespace orw {

OrientationField OrientationField::random(std::uint64_t seed) {
  OrientationField f;
  f.kind_ = FieldKind::random;
  f.seed_ = seed;
  return f;
}

OrientationField OrientationField::alternating() {
  OrientationField f;
  f.kind_ = FieldKind::alternating;
  return f;
}

OrientationField OrientationField::constant(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("constant field sign must be +1 or -1");
  OrientationField f;
  f.kind_ = FieldKind::constant;
  f.sign_ = sign;
  return f;
}

OrientationField OrientationField::explicit_table(std::map<std::int64_t, int> table) {
  for (const auto& [level, sign] : table) {
    if (sign != 1 && sign != -1) {
      throw std::invalid_argument("explicit field sign must be +1 or -1 at level " +
                                  std::to_string(level));
    }
  }
  OrientationField f;
  f.kind_ = FieldKind::explicit_table;
  f.table_ = std::make_shared<const std::map<std::int64_t, int>>(std::move(table));
  return f;
}

OrientationField OrientationField::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open orientation file: " + path.string());
  std::map<std::int64_t, int> table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::int64_t level = 0;
    int sign = 0;
    if (!(row >> level)) continue;  // blank or comment-only line
    if (!(row >> sign) || (sign != 1 && sign != -1)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected \"level sign\" with sign +1 or -1");
    }
    table[level] = sign;
  }
  return explicit_table(std::move(table));
}

int OrientationField::operator()(std::int64_t level) const {
  int value = 0;
  switch (kind_) {
    case FieldKind::random:
      value = (rng::prf64(seed_, static_cast<std::uint64_t>(level), rng::kDomainLevel) & 1u)
                  ? +1
                  : -1;
      break;
    case FieldKind::alternating:
      value = (level & 1) ? -1 : +1;
      break;
    case FieldKind::constant:
      value = sign_;
      break;
    case FieldKind::explicit_table: {
      const auto it = table_->find(level);
      if (it == table_->end()) {
        throw std::out_of_range("level not covered by explicit orientation table: " +
                                std::to_string(level));
      }
      value = it->second;
      break;
    }
  }
  return negate_ ? -value : value;
}

OrientationField OrientationField::negated() const {
  OrientationField f = *this;
  f.negate_ = !f.negate_;
  return f;
}

OrientationField OrientationField::reflected() const {
  OrientationField f = *this;
  f.reflect_mark_ = !f.reflect_mark_;
  return f;
}

FieldTransform OrientationField::transform() const {
  if (negate_) return FieldTransform::negated;
  if (reflect_mark_) return FieldTransform::reflected;
  return FieldTransform::identity;
}

std::string OrientationField::describe() const {
  std::string base;
  switch (kind_) {
    case FieldKind::random:
      base = "random(seed=" + std::to_string(seed_) + ")";
      break;
    case FieldKind::alternating:
      base = "alternating";
      break;
    case FieldKind::constant:
      base = sign_ > 0 ? "constant(+1)" : "constant(-1)";
      break;
    case FieldKind::explicit_table:
      base = "explicit(" + std::to_string(table_->size()) + " levels)";
      break;
  }
  if (negate_) base = "negated:" + base;
  if (reflect_mark_) base = "reflected:" + base;
  return base;
}

OrientationField sample_environment(std::uint64_t master_seed, std::uint64_t env_index) {
  return OrientationField::random(rng::prf64(master_seed, env_index, rng::kDomainEnvironment));
}

}  // namespace orw
