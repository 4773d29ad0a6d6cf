#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "p2pss/types.hpp"

namespace p2pss {

struct StreamSpec {
  std::uint64_t n = 2'000'000;
  std::uint32_t m = 1'000'000;
  double rho = 1.2;
  std::uint64_t seed = 1;

  void validate() const;
};

/// n Zipf(rho) draws over ranks 1..m; P(rank i) is proportional to i^-rho.
/// Ranks map to item ids through a seeded permutation of [0, m).
std::vector<ItemId> gen_zipf(const StreamSpec& spec);

/// Sum of i^-rho for i = 1..m.
double zipf_normalizer(std::uint32_t m, double rho);

enum class PartitionKind { Contiguous, RoundRobin, Shuffled, Adversarial };

struct PartitionScheme {
  PartitionKind kind = PartitionKind::Contiguous;
  /// Shuffled: permutation seed.
  std::uint64_t seed = 0;
  /// Adversarial: every copy of this item goes to peer 0.
  ItemId item = 0;
};

/// Disjoint local streams covering the input. Except for Adversarial, sizes
/// differ by at most one. Adversarial keeps sizes as even as the forced
/// placement allows.
std::vector<std::vector<ItemId>> partition(std::span<const ItemId> stream, std::size_t peers,
                                           const PartitionScheme& scheme);

/// Exact counts and the phi-frequent set {s : f_s > phi n}.
struct GroundTruth {
  std::unordered_map<ItemId, std::uint64_t> counts;
  std::uint64_t n = 0;
  double phi = 0.0;
  /// Sorted by item.
  std::vector<ItemId> frequent;

  std::uint64_t count(ItemId item) const;
  bool is_frequent(ItemId item) const;
};

GroundTruth exact_frequencies(std::span<const ItemId> stream, double phi);

/// Item with the largest exact count (smallest id on ties).
ItemId most_frequent_item(const GroundTruth& truth);

/// Flat little-endian uint32 dump.
void write_stream(const std::filesystem::path& path, std::span<const ItemId> stream);
std::vector<ItemId> read_stream(const std::filesystem::path& path);

}  // namespace p2pss
