#include "p2pss/sketch.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace p2pss {

namespace {

bool by_item(const Counter& a, const Counter& b) { return a.item < b.item; }

}  // namespace

StreamSummary::StreamSummary(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("summary capacity must be positive");
}

StreamSummary::StreamSummary(Sorted, std::vector<Counter> counters, std::size_t capacity)
    : counters_(std::move(counters)), capacity_(capacity) {
  refresh_min();
}

StreamSummary StreamSummary::from_counters(std::vector<Counter> counters, std::size_t capacity) {
  if (capacity == 0) throw std::invalid_argument("summary capacity must be positive");
  if (counters.size() > capacity) {
    throw std::invalid_argument("summary holds " + std::to_string(counters.size()) +
                                " counters but capacity is " + std::to_string(capacity));
  }
  std::sort(counters.begin(), counters.end(), by_item);
  for (std::size_t i = 0; i < counters.size(); ++i) {
    if (!(counters[i].freq >= 0.0)) throw std::invalid_argument("negative counter frequency");
    if (i > 0 && counters[i].item == counters[i - 1].item) {
      throw std::invalid_argument("duplicate item " + std::to_string(counters[i].item));
    }
  }
  return StreamSummary(Sorted{}, std::move(counters), capacity);
}

void StreamSummary::refresh_min() {
  min_ = 0.0;
  if (counters_.empty()) return;
  min_ = std::numeric_limits<double>::infinity();
  for (const auto& c : counters_) min_ = std::min(min_, c.freq);
}

std::optional<double> StreamSummary::find(ItemId item) const {
  auto it = std::lower_bound(counters_.begin(), counters_.end(), Counter{item, 0.0}, by_item);
  if (it == counters_.end() || it->item != item) return std::nullopt;
  return it->freq;
}

std::vector<Counter> StreamSummary::ranked() const {
  std::vector<Counter> out = counters_;
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

double StreamSummary::total() const {
  return std::accumulate(counters_.begin(), counters_.end(), 0.0,
                         [](double acc, const Counter& c) { return acc + c.freq; });
}

void StreamSummary::process(ItemId item) {
  auto it = std::lower_bound(counters_.begin(), counters_.end(), Counter{item, 0.0}, by_item);
  if (it != counters_.end() && it->item == item) {
    const bool was_min = it->freq == min_;
    it->freq += 1.0;
    if (was_min) refresh_min();
    return;
  }
  if (!full()) {
    counters_.insert(it, Counter{item, 1.0});
    refresh_min();
    return;
  }
  // Evict the minimum counter with the smallest item id; the scan runs in
  // item order so the first minimum found is that one.
  auto victim = std::min_element(counters_.begin(), counters_.end(),
                                 [](const Counter& a, const Counter& b) { return a.freq < b.freq; });
  const double inherited = victim->freq + 1.0;
  counters_.erase(victim);
  it = std::lower_bound(counters_.begin(), counters_.end(), Counter{item, 0.0}, by_item);
  counters_.insert(it, Counter{item, inherited});
  refresh_min();
}

SpaceSaving::SpaceSaving(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("summary capacity must be positive");
  counts_.reserve(capacity * 2);
}

void SpaceSaving::process(ItemId item) {
  ++processed_;
  if (auto it = counts_.find(item); it != counts_.end()) {
    auto node = order_.extract({it->second, item});
    ++it->second;
    node.value().first = it->second;
    order_.insert(std::move(node));
    return;
  }
  if (counts_.size() < capacity_) {
    counts_.emplace(item, 1);
    order_.emplace(1, item);
    return;
  }
  auto node = order_.extract(order_.begin());
  const auto [min_count, victim] = node.value();
  counts_.erase(victim);
  counts_.emplace(item, min_count + 1);
  node.value() = {min_count + 1, item};
  order_.insert(std::move(node));
}

std::uint64_t SpaceSaving::min_frequency() const {
  if (counts_.size() < capacity_ || order_.empty()) return 0;
  return order_.begin()->first;
}

StreamSummary SpaceSaving::summary() const {
  std::vector<Counter> counters;
  counters.reserve(counts_.size());
  for (const auto& [item, count] : counts_) counters.push_back({item, static_cast<double>(count)});
  return StreamSummary::from_counters(std::move(counters), capacity_);
}

StreamSummary space_saving(std::span<const ItemId> items, std::size_t k) {
  SpaceSaving builder(k);
  builder.process_all(items);
  return builder.summary();
}

StreamSummary merge(const StreamSummary& a, const StreamSummary& b, std::size_t k) {
  if (k == 0) throw std::invalid_argument("merge capacity must be positive");
  const double min_a = a.min_frequency();
  const double min_b = b.min_frequency();
  const auto& ca = a.counters_;
  const auto& cb = b.counters_;

  std::vector<Counter> out;
  out.reserve(ca.size() + cb.size());
  std::size_t i = 0, j = 0;
  while (i < ca.size() || j < cb.size()) {
    if (j == cb.size() || (i < ca.size() && ca[i].item < cb[j].item)) {
      out.push_back({ca[i].item, ca[i].freq + min_b});
      ++i;
    } else if (i == ca.size() || cb[j].item < ca[i].item) {
      out.push_back({cb[j].item, cb[j].freq + min_a});
      ++j;
    } else {
      out.push_back({ca[i].item, ca[i].freq + cb[j].freq});
      ++i;
      ++j;
    }
  }
  if (out.size() <= k) return StreamSummary(StreamSummary::Sorted{}, std::move(out), k);
  return prune(std::move(out), k);
}

StreamSummary scale(const StreamSummary& s, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("scale divisor must be positive");
  std::vector<Counter> out = s.counters_;
  for (auto& c : out) c.freq /= d;
  return StreamSummary(StreamSummary::Sorted{}, std::move(out), s.capacity_);
}

StreamSummary prune(std::vector<Counter> candidates, std::size_t k) {
  if (k == 0) throw std::invalid_argument("prune capacity must be positive");
  std::sort(candidates.begin(), candidates.end(), by_item);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].item == candidates[i - 1].item) {
      throw std::invalid_argument("duplicate item " + std::to_string(candidates[i].item));
    }
  }
  if (candidates.size() > k) {
    std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     candidates.end(), ranks_before);
    candidates.resize(k);
    std::sort(candidates.begin(), candidates.end(), by_item);
  }
  return StreamSummary(StreamSummary::Sorted{}, std::move(candidates), k);
}

}  // namespace p2pss
