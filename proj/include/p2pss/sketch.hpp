#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "p2pss/types.hpp"

namespace p2pss {

struct Counter {
  ItemId item = 0;
  double freq = 0.0;

  friend bool operator==(const Counter&, const Counter&) = default;
};

/// Rank order used for pruning: larger frequency first, then smaller item id.
inline bool ranks_before(const Counter& a, const Counter& b) {
  return a.freq > b.freq || (a.freq == b.freq && a.item < b.item);
}

/**
 * Space-Saving stream summary with real-valued frequencies.
 *
 * Counters are kept in a flat vector sorted by item id, which gives
 * O(log k) lookup and a linear-time merge. The smallest stored frequency is
 * cached. The summary's minimum follows the under-full convention: it is 0
 * while fewer than capacity() counters are held.
 */
class StreamSummary {
 public:
  explicit StreamSummary(std::size_t capacity);

  /// Builds a summary from arbitrary counters. Throws std::invalid_argument
  /// on duplicate items, negative frequencies or more counters than capacity.
  static StreamSummary from_counters(std::vector<Counter> counters, std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return counters_.size(); }
  bool empty() const { return counters_.empty(); }
  bool full() const { return counters_.size() >= capacity_; }

  /// 0 when under-full, else the smallest stored frequency.
  double min_frequency() const { return full() ? min_ : 0.0; }

  std::optional<double> find(ItemId item) const;
  bool contains(ItemId item) const { return find(item).has_value(); }

  /// Counters sorted by item id.
  std::span<const Counter> counters() const { return counters_; }

  /// Counters sorted by decreasing frequency, ties by increasing item id.
  std::vector<Counter> ranked() const;

  /// Sum of all stored frequencies.
  double total() const;

  /// One Space-Saving update. Linear in k; use SpaceSaving for bulk input.
  void process(ItemId item);

  friend bool operator==(const StreamSummary& a, const StreamSummary& b) {
    return a.capacity_ == b.capacity_ && a.counters_ == b.counters_;
  }

 private:
  struct Sorted {};
  StreamSummary(Sorted, std::vector<Counter> counters, std::size_t capacity);
  void refresh_min();

  friend StreamSummary merge(const StreamSummary&, const StreamSummary&, std::size_t);
  friend StreamSummary scale(const StreamSummary&, double);
  friend StreamSummary prune(std::vector<Counter>, std::size_t);

  std::vector<Counter> counters_;
  std::size_t capacity_;
  double min_ = 0.0;
};

/**
 * Streaming Space-Saving builder with O(log k) updates.
 *
 * Counts are integral here; summary() snapshots them into a StreamSummary.
 * On eviction the minimum-frequency counter with the smallest item id is
 * replaced.
 */
class SpaceSaving {
 public:
  explicit SpaceSaving(std::size_t capacity);

  void process(ItemId item);

  template <typename Range>
  void process_all(const Range& items) {
    for (ItemId item : items) process(item);
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return counts_.size(); }
  std::uint64_t processed() const { return processed_; }
  std::uint64_t min_frequency() const;

  StreamSummary summary() const;

 private:
  std::size_t capacity_;
  std::uint64_t processed_ = 0;
  std::unordered_map<ItemId, std::uint64_t> counts_;
  std::set<std::pair<std::uint64_t, ItemId>> order_;
};

/// Space-Saving over a whole sequence with k counters.
StreamSummary space_saving(std::span<const ItemId> items, std::size_t k);

/// Unscaled k-bounded merge. Items present in both inputs get the sum of
/// their frequencies; an item in only one input gets its frequency plus the
/// other input's minimum. The result is pruned to k counters.
StreamSummary merge(const StreamSummary& a, const StreamSummary& b, std::size_t k);

/// Divides every frequency by d (> 0); the support is unchanged.
StreamSummary scale(const StreamSummary& s, double d);

/// Keeps the k highest-ranked candidates (see ranks_before).
StreamSummary prune(std::vector<Counter> candidates, std::size_t k);

}  // namespace p2pss
