#include "orw/range.hpp"

#include <bit>
#include <stdexcept>

namespace orw {

namespace {

std::size_t capacity_for(std::int64_t expected_sites) {
  // keep load factor below ~0.66
  const auto wanted = static_cast<std::uint64_t>(expected_sites + expected_sites / 2 + 16);
  return std::bit_ceil(wanted);
}

}  // namespace

PackedSiteSet::PackedSiteSet(std::int64_t expected_sites) {
  const std::size_t cap = capacity_for(expected_sites);
  keys_.resize(cap);
  stamps_.assign(cap, 0);
  shift_ = 64 - std::countr_zero(cap);
}

bool PackedSiteSet::insert(std::uint64_t key) {
  if (3 * static_cast<std::size_t>(size_) >= 2 * keys_.size()) grow();
  std::size_t i = slot(key);
  const std::size_t mask = keys_.size() - 1;
  while (stamps_[i] == generation_) {
    if (keys_[i] == key) return false;
    i = (i + 1) & mask;
  }
  keys_[i] = key;
  stamps_[i] = generation_;
  ++size_;
  return true;
}

bool PackedSiteSet::contains(std::uint64_t key) const {
  std::size_t i = slot(key);
  const std::size_t mask = keys_.size() - 1;
  while (stamps_[i] == generation_) {
    if (keys_[i] == key) return true;
    i = (i + 1) & mask;
  }
  return false;
}

void PackedSiteSet::clear() {
  ++generation_;
  size_ = 0;
  if (generation_ == 0) {  // stamp wrap-around: invalidate everything once
    stamps_.assign(stamps_.size(), 0);
    generation_ = 1;
  }
}

void PackedSiteSet::grow() {
  PackedSiteSet bigger(static_cast<std::int64_t>(keys_.size()));
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (stamps_[i] == generation_) bigger.insert(keys_[i]);
  }
  *this = std::move(bigger);
}

RangeTracker::RangeTracker(std::int64_t expected_sites) : visited_(expected_sites) {
  visited_.insert(packed_key({0, 0}));
}

void RangeTracker::push(Position p) {
  ++step_;
  range_before_ = visited_.size();
  last_new_ = visited_.insert(packed_key(p));
  if (first_return_ == 0 && p.x == 0 && p.y == 0) first_return_ = step_;
}

void RangeTracker::reset() {
  visited_.clear();
  visited_.insert(packed_key({0, 0}));
  step_ = 0;
  range_before_ = 0;
  first_return_ = 0;
  last_new_ = false;
}

RangeSeries track(const Trajectory& trajectory) {
  const int n = trajectory.steps();
  RangeSeries series;
  series.counts.reserve(static_cast<std::size_t>(n));
  series.new_site.reserve(static_cast<std::size_t>(n));
  RangeTracker tracker(n + 1);
  if (n > 0) series.new_site.push_back(true);  // A_0 holds on every trajectory
  for (int k = 1; k <= n; ++k) {
    tracker.push(trajectory.positions[static_cast<std::size_t>(k)]);
    series.counts.push_back(tracker.range_excluding_last());
    if (k < n) series.new_site.push_back(tracker.last_was_new());
  }
  series.no_return_horizon = tracker.no_return_horizon();
  return series;
}

bool event_probe(const Trajectory& trajectory, const EventKind& kind) {
  const std::int64_t n = trajectory.steps();
  const auto& pos = trajectory.positions;
  const auto check_k = [n](std::int64_t k) {
    if (k < 0 || k > n) throw std::out_of_range("event index out of range");
  };
  const auto fresh_since = [&pos](std::int64_t j, std::int64_t k) {
    for (std::int64_t l = j; l < k; ++l) {
      if (pos[static_cast<std::size_t>(l)] == pos[static_cast<std::size_t>(k)]) return false;
    }
    return true;
  };

  switch (kind.type) {
    case EventKind::Type::new_site:
      check_k(kind.k);
      return fresh_since(0, kind.k);
    case EventKind::Type::no_return:
      check_k(kind.k);
      for (std::int64_t l = 1; l <= kind.k; ++l) {
        if (pos[static_cast<std::size_t>(l)] == Position{0, 0}) return false;
      }
      return true;
    case EventKind::Type::fresh_since:
    case EventKind::Type::rediscover_old: {
      check_k(kind.k);
      if (kind.j < 0 || kind.j >= kind.k) throw std::out_of_range("need 0 <= j < k");
      const bool fresh = fresh_since(kind.j, kind.k);
      if (kind.type == EventKind::Type::fresh_since) return fresh;
      return fresh && !fresh_since(0, kind.k);
    }
  }
  return false;  // unreachable
}

}  // namespace orw
