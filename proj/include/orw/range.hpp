#pragma once

#include <cstdint>
#include <vector>

#include "orw/walk.hpp"

namespace orw {

/// Open-addressing set of packed (x,y) keys with generation-stamped slots,
/// so clearing between trajectories is O(1). No deletion.
class PackedSiteSet {
 public:
  explicit PackedSiteSet(std::int64_t expected_sites = 64);

  /// Inserts the key; returns true when it was not present.
  bool insert(std::uint64_t key);
  bool contains(std::uint64_t key) const;
  std::int64_t size() const { return size_; }
  void clear();

 private:
  std::size_t slot(std::uint64_t key) const {
    return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> shift_);
  }
  void grow();

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> stamps_;
  std::uint32_t generation_ = 1;
  int shift_ = 0;
  std::int64_t size_ = 0;
};

/// Range series of one trajectory: counts[k-1] = R_k = Card{M_0..M_{k-1}}
/// for k = 1..n, the new-site indicators 1[A_k] for k = 0..n-1, and the
/// largest horizon k with no return to the origin among steps 1..k.
struct RangeSeries {
  std::vector<std::int64_t> counts;
  std::vector<bool> new_site;
  std::int64_t no_return_horizon = 0;

  /// R_k with the degenerate extension R_0 = 0.
  std::int64_t r(std::int64_t k) const { return k == 0 ? 0 : counts[static_cast<std::size_t>(k - 1)]; }
  bool b_holds(std::int64_t k) const { return k <= no_return_horizon; }
};

/// Single pass, O(1) amortized per step via the hash-keyed visited-site set.
RangeSeries track(const Trajectory& trajectory);

/// Incremental tracker for streamed walks; feeds on positions M_1, M_2, ...
/// (M_0 = origin is pre-registered).
class RangeTracker {
 public:
  explicit RangeTracker(std::int64_t expected_sites = 64);

  void push(Position p);
  void reset();

  std::int64_t steps() const { return step_; }
  /// R_k for the current k = steps(): distinct sites among M_0..M_{k-1}.
  std::int64_t range_excluding_last() const { return range_before_; }
  /// Card{M_0..M_k}: distinct sites including the current position.
  std::int64_t distinct_sites() const { return visited_.size(); }
  bool last_was_new() const { return last_new_; }
  bool returned_to_origin() const { return first_return_ > 0; }
  /// Largest k with no return in steps 1..k (== steps() while unreturned).
  std::int64_t no_return_horizon() const { return first_return_ > 0 ? first_return_ - 1 : step_; }

 private:
  PackedSiteSet visited_;
  std::int64_t step_ = 0;
  std::int64_t range_before_ = 0;
  std::int64_t first_return_ = 0;  // 0 = none yet
  bool last_new_ = false;
};

/// Path events on a trajectory:
///   new_site(k)          A_k   : M_k differs from all of M_0..M_{k-1}
///   no_return(k)         B_k   : M_l != (0,0) for all l in [1,k]
///   fresh_since(j,k)     A_j,k : M_k differs from all of M_j..M_{k-1}
///   rediscover_old(j,k)  fresh since j but visited before j
struct EventKind {
  enum class Type { new_site, no_return, fresh_since, rediscover_old };
  Type type;
  std::int64_t j = 0;
  std::int64_t k = 0;

  static EventKind new_site(std::int64_t k) { return {Type::new_site, 0, k}; }
  static EventKind no_return(std::int64_t k) { return {Type::no_return, 0, k}; }
  static EventKind fresh_since(std::int64_t j, std::int64_t k) { return {Type::fresh_since, j, k}; }
  static EventKind rediscover_old(std::int64_t j, std::int64_t k) {
    return {Type::rediscover_old, j, k};
  }
};

/// Exact truth value of the event on this trajectory.
/// Throws std::out_of_range for indices beyond the trajectory length or
/// pairs not satisfying 0 <= j < k.
bool event_probe(const Trajectory& trajectory, const EventKind& kind);

}  // namespace orw
