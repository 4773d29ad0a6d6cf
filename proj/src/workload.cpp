#include "p2pss/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "p2pss/random.hpp"

namespace p2pss {

void StreamSpec::validate() const {
  if (n < 1) throw ConfigError("stream length must be at least 1");
  if (m < 1) throw ConfigError("universe size must be at least 1");
  if (!(rho > 0.0)) throw ConfigError("Zipf skew must be positive");
}

double zipf_normalizer(std::uint32_t m, double rho) {
  double h = 0.0;
  // Smallest terms first for accuracy.
  for (std::uint32_t i = m; i >= 1; --i) h += std::pow(static_cast<double>(i), -rho);
  return h;
}

std::vector<ItemId> gen_zipf(const StreamSpec& spec) {
  spec.validate();
  std::vector<double> cumulative(spec.m);
  double acc = 0.0;
  for (std::uint32_t i = 0; i < spec.m; ++i) {
    acc += std::pow(static_cast<double>(i + 1), -spec.rho);
    cumulative[i] = acc;
  }

  std::vector<ItemId> rank_to_item(spec.m);
  std::iota(rank_to_item.begin(), rank_to_item.end(), ItemId{0});
  Rng perm_rng(derive_seed(spec.seed, 0x2A11));
  shuffle(std::span<ItemId>(rank_to_item), perm_rng);

  Rng rng(derive_seed(spec.seed, 0x21BF));
  std::vector<ItemId> out(spec.n);
  for (auto& item : out) {
    const double u = uniform_unit(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    item = rank_to_item[static_cast<std::size_t>(it - cumulative.begin())];
  }
  return out;
}

namespace {

std::vector<std::vector<ItemId>> split_contiguous(std::span<const ItemId> stream,
                                                  std::span<const std::size_t> sizes) {
  std::vector<std::vector<ItemId>> parts(sizes.size());
  std::size_t pos = 0;
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    parts[l].assign(stream.begin() + static_cast<std::ptrdiff_t>(pos),
                    stream.begin() + static_cast<std::ptrdiff_t>(pos + sizes[l]));
    pos += sizes[l];
  }
  return parts;
}

std::vector<std::size_t> even_sizes(std::size_t n, std::size_t peers) {
  std::vector<std::size_t> sizes(peers, n / peers);
  for (std::size_t l = 0; l < n % peers; ++l) ++sizes[l];
  return sizes;
}

}  // namespace

std::vector<std::vector<ItemId>> partition(std::span<const ItemId> stream, std::size_t peers,
                                           const PartitionScheme& scheme) {
  if (peers < 1) throw ConfigError("partition needs at least one peer");
  const std::size_t n = stream.size();
  switch (scheme.kind) {
    case PartitionKind::Contiguous:
      return split_contiguous(stream, even_sizes(n, peers));
    case PartitionKind::RoundRobin: {
      std::vector<std::vector<ItemId>> parts(peers);
      for (std::size_t i = 0; i < n; ++i) parts[i % peers].push_back(stream[i]);
      return parts;
    }
    case PartitionKind::Shuffled: {
      std::vector<ItemId> shuffled(stream.begin(), stream.end());
      Rng rng(derive_seed(scheme.seed, 0x5B0F));
      shuffle(std::span<ItemId>(shuffled), rng);
      return split_contiguous(shuffled, even_sizes(n, peers));
    }
    case PartitionKind::Adversarial: {
      std::vector<ItemId> rest;
      rest.reserve(n);
      std::size_t copies = 0;
      for (ItemId x : stream) {
        if (x == scheme.item) {
          ++copies;
        } else {
          rest.push_back(x);
        }
      }
      std::vector<std::vector<ItemId>> parts(peers);
      parts[0].assign(copies, scheme.item);
      if (peers == 1) {
        parts[0].insert(parts[0].end(), rest.begin(), rest.end());
        return parts;
      }
      // Fill the other peers evenly first, then top peer 0 up if it is the
      // smallest.
      auto sizes = even_sizes(n, peers);
      std::vector<std::size_t> rest_sizes(peers, 0);
      if (copies >= sizes[0]) {
        const auto others = even_sizes(rest.size(), peers - 1);
        std::copy(others.begin(), others.end(), rest_sizes.begin() + 1);
      } else {
        rest_sizes = sizes;
        rest_sizes[0] -= copies;
      }
      std::size_t pos = 0;
      for (std::size_t l = 0; l < peers; ++l) {
        parts[l].insert(parts[l].end(), rest.begin() + static_cast<std::ptrdiff_t>(pos),
                        rest.begin() + static_cast<std::ptrdiff_t>(pos + rest_sizes[l]));
        pos += rest_sizes[l];
      }
      return parts;
    }
  }
  throw std::logic_error("unknown partition scheme");
}

std::uint64_t GroundTruth::count(ItemId item) const {
  auto it = counts.find(item);
  return it == counts.end() ? 0 : it->second;
}

bool GroundTruth::is_frequent(ItemId item) const {
  return std::binary_search(frequent.begin(), frequent.end(), item);
}

GroundTruth exact_frequencies(std::span<const ItemId> stream, double phi) {
  GroundTruth truth;
  truth.n = stream.size();
  truth.phi = phi;
  for (ItemId x : stream) ++truth.counts[x];
  const double threshold = phi * static_cast<double>(truth.n);
  for (const auto& [item, f] : truth.counts) {
    if (static_cast<double>(f) > threshold) truth.frequent.push_back(item);
  }
  std::sort(truth.frequent.begin(), truth.frequent.end());
  return truth;
}

ItemId most_frequent_item(const GroundTruth& truth) {
  ItemId best = 0;
  std::uint64_t best_count = 0;
  for (const auto& [item, f] : truth.counts) {
    if (f > best_count || (f == best_count && item < best)) {
      best = item;
      best_count = f;
    }
  }
  return best;
}

void write_stream(const std::filesystem::path& path, std::span<const ItemId> stream) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (ItemId x : stream) {
    const unsigned char bytes[4] = {static_cast<unsigned char>(x), static_cast<unsigned char>(x >> 8),
                                    static_cast<unsigned char>(x >> 16),
                                    static_cast<unsigned char>(x >> 24)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
  }
  if (!out) throw Error("write to " + path.string() + " failed");
}

std::vector<ItemId> read_stream(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() % 4 != 0) throw Error(path.string() + " is not a whole number of uint32 items");
  std::vector<ItemId> out(raw.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto* b = reinterpret_cast<const unsigned char*>(raw.data() + 4 * i);
    out[i] = static_cast<ItemId>(b[0]) | (static_cast<ItemId>(b[1]) << 8) |
             (static_cast<ItemId>(b[2]) << 16) | (static_cast<ItemId>(b[3]) << 24);
  }
  return out;
}

}  // namespace p2pss
