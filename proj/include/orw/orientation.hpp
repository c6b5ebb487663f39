#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

namespace orw {

enum class FieldKind { random, alternating, constant, explicit_table };
enum class FieldTransform { identity, negated, reflected };

/// The orientation environment: a map level -> {-1,+1} giving the one-way
/// direction of each horizontal line of the lattice.
///
/// Random fields are evaluated lazily through a keyed PRF of (seed, level),
/// so the infinite field is reproducible, order-independent and shareable
/// across threads without synchronization. Immutable after construction.
class OrientationField {
 public:
  static OrientationField random(std::uint64_t seed);
  static OrientationField alternating();  // +1 on even levels, -1 on odd
  static OrientationField constant(int sign);
  static OrientationField explicit_table(std::map<std::int64_t, int> table);
  /// Text format: one "level sign" pair per line, sign in {+1,-1};
  /// blank lines and '#' comments allowed.
  static OrientationField from_file(const std::filesystem::path& path);

  /// Orientation of level y; always exactly -1 or +1.
  /// Throws std::out_of_range for explicit tables queried outside coverage.
  int operator()(std::int64_t level) const;

  /// Pointwise sign flip, as a lazy view. Involution.
  OrientationField negated() const;

  /// Identity on the field itself; marks the x -> -x pairing used when
  /// comparing walks under eps and -eps.
  OrientationField reflected() const;

  FieldKind kind() const { return kind_; }
  FieldTransform transform() const;
  std::uint64_t seed() const { return seed_; }

  /// Short human-readable tag for file headers and manifests.
  std::string describe() const;

 private:
  OrientationField() = default;

  FieldKind kind_ = FieldKind::constant;
  int sign_ = +1;
  std::uint64_t seed_ = 0;
  bool negate_ = false;
  bool reflect_mark_ = false;
  std::shared_ptr<const std::map<std::int64_t, int>> table_;
};

/// Draw the env_index-th environment of a reproducible i.i.d. ensemble:
/// distinct indices give statistically independent fields.
OrientationField sample_environment(std::uint64_t master_seed, std::uint64_t env_index);

}  // namespace orw
