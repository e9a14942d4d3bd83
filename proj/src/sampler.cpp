#include "commgraph/sampler.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace commgraph {

void validate(const GraphConfig& config) {
  if (config.n < 1) throw std::invalid_argument("n >= 1 required");
  if (config.n > std::numeric_limits<Vertex>::max()) {
    throw std::invalid_argument("n exceeds the supported vertex range");
  }
  if (auto issues = validate(config.law); !issues.empty()) throw LawError(std::move(issues));
}

void SubsetSampler::reset(std::uint64_t x) {
  const auto wanted = static_cast<std::uint32_t>(std::bit_ceil(std::max<std::uint64_t>(2 * x, 16)));
  if (wanted > keys_.size()) {
    keys_.assign(wanted, kEmpty);
    values_.assign(wanted, 0);
    mask_ = wanted - 1;
    used_.clear();
    return;
  }
  for (const auto slot : used_) keys_[slot] = kEmpty;
  used_.clear();
}

Vertex SubsetSampler::get(Vertex key) const noexcept {
  std::uint32_t slot = static_cast<std::uint32_t>(mix64(key)) & mask_;
  while (keys_[slot] != kEmpty) {
    if (keys_[slot] == key) return values_[slot];
    slot = (slot + 1) & mask_;
  }
  return key;
}

void SubsetSampler::put(Vertex key, Vertex value) {
  std::uint32_t slot = static_cast<std::uint32_t>(mix64(key)) & mask_;
  while (keys_[slot] != kEmpty && keys_[slot] != key) slot = (slot + 1) & mask_;
  if (keys_[slot] == kEmpty) {
    keys_[slot] = key;
    used_.push_back(slot);
  }
  values_[slot] = value;
}

void SubsetSampler::sample(std::uint64_t n, std::uint64_t x, RandomState& rng,
                           std::vector<Vertex>& out) {
  if (x > n) throw std::invalid_argument("subset size exceeds vertex count");
  out.clear();
  out.reserve(x);
  if (x <= kSmall) {
    // At most x entries are displaced, so a linear scan beats hashing here.
    std::size_t used = 0;
    auto lookup = [&](Vertex key) -> Vertex {
      for (std::size_t s = 0; s < used; ++s) {
        if (small_keys_[s] == key) return small_values_[s];
      }
      return key;
    };
    for (std::uint64_t i = 0; i < x; ++i) {
      const auto j = static_cast<Vertex>(i + rng.below(n - i));
      const auto slot_i = static_cast<Vertex>(i);
      out.push_back(lookup(j));
      if (j == slot_i) continue;
      const Vertex moved = lookup(slot_i);
      std::size_t s = 0;
      while (s < used && small_keys_[s] != j) ++s;
      if (s == used) small_keys_[used++] = j;
      small_values_[s] = moved;
    }
    return;
  }
  reset(x);
  for (std::uint64_t i = 0; i < x; ++i) {
    const auto j = static_cast<Vertex>(i + rng.below(n - i));
    const auto slot_i = static_cast<Vertex>(i);
    out.push_back(get(j));
    if (j != slot_i) put(j, get(slot_i));
  }
}

GraphSampler::GraphSampler(GraphConfig config)
    : config_((validate(config), std::move(config))), law_(config_.law) {}

ComponentCensus GraphSampler::sample(std::uint64_t replicate) const {
  return sample_detailed(replicate, SampleOptions{}).census;
}

SampleDetail GraphSampler::sample_detailed(std::uint64_t replicate,
                                           const SampleOptions& options) const {
  const std::uint64_t n = config_.n;
  RandomState rng(substream(config_.seed, replicate));
  DisjointSets dsu(n);
  SubsetSampler subsets;
  std::vector<Vertex> members;
  std::vector<bool> touched(options.track_degree ? n : 0, false);

  SampleDetail detail;
  auto sink = [&](Vertex u, Vertex v) {
    dsu.unite(u, v);
    if (options.track_degree) {
      touched[u] = true;
      touched[v] = true;
    }
    if (options.edge_dump != nullptr) *options.edge_dump << u << ' ' << v << '\n';
  };

  double cached_q = -1.0;
  double cached_log = 0.0;
  for (std::uint64_t i = 0; i < config_.m; ++i) {
    const CommunityDraw draw = law_.sample(i, n, rng);
    subsets.sample(n, draw.size, rng, members);
    detail.vertex_slots += draw.size;
    if (draw.density != cached_q) {
      cached_q = draw.density;
      cached_log = std::log1p(-draw.density);
    }
    detail.edges_emitted += sample_community_edges(members, draw.density, rng, sink, cached_log);
  }

  detail.census = dsu.census();
  detail.rng_draws = rng.draws();
  if (options.track_degree) {
    std::uint64_t zero = 0;
    for (bool t : touched) zero += t ? 0 : 1;
    detail.degree_zero = zero;
    if (zero != detail.census.y0) {
      throw std::logic_error("isolated-vertex count disagrees with degree bitset");
    }
  }
  return detail;
}

ComponentCensus sample_graph(const GraphConfig& config, std::uint64_t replicate) {
  return GraphSampler(config).sample(replicate);
}

}  // namespace commgraph
