#ifndef COMMGRAPH_SAMPLER_HPP
#define COMMGRAPH_SAMPLER_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "commgraph/connectivity.hpp"
#include "commgraph/laws.hpp"
#include "commgraph/random.hpp"

namespace commgraph {

/// One simulation ensemble: n vertices, m communities drawn from `law`.
struct GraphConfig {
  std::uint64_t n = 1;
  std::uint64_t m = 0;
  CommunityLaw law;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument (or LawError) if the config is unusable.
void validate(const GraphConfig& config);

/// Uniform x-subsets of [0, n) by partial Fisher-Yates over an implicit
/// identity array. Only displaced entries are stored (a linear table for
/// small x, otherwise an open addressing table reset per call), so the cost
/// is O(x) and not O(n).
class SubsetSampler {
 public:
  /// Writes x distinct vertices, in draw order, into `out` (replacing its contents).
  void sample(std::uint64_t n, std::uint64_t x, RandomState& rng, std::vector<Vertex>& out);

  std::vector<Vertex> sample(std::uint64_t n, std::uint64_t x, RandomState& rng) {
    std::vector<Vertex> out;
    sample(n, x, rng, out);
    return out;
  }

 private:
  Vertex get(Vertex key) const noexcept;
  void put(Vertex key, Vertex value);
  void reset(std::uint64_t x);

  static constexpr Vertex kEmpty = ~Vertex{0};
  static constexpr std::size_t kSmall = 32;
  std::array<Vertex, kSmall> small_keys_{};
  std::array<Vertex, kSmall> small_values_{};
  std::vector<Vertex> keys_;
  std::vector<Vertex> values_;
  std::vector<std::uint32_t> used_;
  std::uint32_t mask_ = 0;
};

/// Emits each of the C(x,2) pairs of `members` independently with probability q.
///
/// Pairs are ranked row-major, (0,1), (0,2), ..., (1,2), ..., and visited by
/// geometric jumps floor(ln U / ln(1-q)) with U uniform on (0,1), so one
/// random draw is spent per emitted edge plus one to run off the end.
/// Returns the number of emitted edges. Callers drawing many communities
/// with one density may pass log1p(-q) precomputed.
template <typename Sink>
std::uint64_t sample_community_edges(std::span<const Vertex> members, double q,
                                     RandomState& rng, Sink&& sink,
                                     double log_one_minus_q = std::nan("")) {
  const std::uint64_t x = members.size();
  if (x < 2 || !(q > 0.0)) return 0;
  if (q >= 1.0) {
    for (std::uint64_t i = 0; i + 1 < x; ++i) {
      for (std::uint64_t j = i + 1; j < x; ++j) sink(members[i], members[j]);
    }
    return x * (x - 1) / 2;
  }

  const std::uint64_t total = x * (x - 1) / 2;
  const double inv_log =
      1.0 / (std::isnan(log_one_minus_q) ? std::log1p(-q) : log_one_minus_q);
  auto gap = [&]() -> std::uint64_t {
    const double g = std::floor(std::log(rng.uniform_open()) * inv_log);
    return g >= static_cast<double>(total) ? total : static_cast<std::uint64_t>(g);
  };

  std::uint64_t emitted = 0;
  std::uint64_t t = 0;  // rank of the current candidate pair
  std::uint64_t row = 0;
  std::uint64_t col = 1;
  for (std::uint64_t skip = gap(); skip < total - t; skip = gap()) {
    t += skip;
    col += skip;
    while (col >= x) {  // row r holds columns r+1 .. x-1
      const std::uint64_t over = col - x;
      ++row;
      col = row + 1 + over;
    }
    sink(members[row], members[col]);
    ++emitted;
    ++t;
    ++col;
    if (t == total) break;
  }
  return emitted;
}

struct SampleOptions {
#ifdef NDEBUG
  bool track_degree = false;
#else
  bool track_degree = true;
#endif
  std::ostream* edge_dump = nullptr;  // "u v" lines when set
};

/// Census plus bookkeeping of one realisation.
struct SampleDetail {
  ComponentCensus census;
  std::uint64_t edges_emitted = 0;  // with multiplicity across communities
  std::uint64_t vertex_slots = 0;   // sum of truncated community sizes
  std::uint64_t rng_draws = 0;
  std::optional<std::uint64_t> degree_zero;  // set when track_degree
};

/// Realises G[n,m] for a fixed config; replicate r uses substream(seed, r).
/// Edges are streamed into union-find and never stored.
class GraphSampler {
 public:
  explicit GraphSampler(GraphConfig config);

  ComponentCensus sample(std::uint64_t replicate) const;
  SampleDetail sample_detailed(std::uint64_t replicate, const SampleOptions& options) const;

  const GraphConfig& config() const noexcept { return config_; }
  const LawSampler& law_sampler() const noexcept { return law_; }

 private:
  GraphConfig config_;
  LawSampler law_;
};

/// Convenience wrapper around GraphSampler.
ComponentCensus sample_graph(const GraphConfig& config, std::uint64_t replicate);

}  // namespace commgraph

#endif  // COMMGRAPH_SAMPLER_HPP
