#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "commgraph/sampler.hpp"
#include "oracles.hpp"

using namespace commgraph;

TEST_CASE("substream derivation is bit-exact") {
  // First output of splitmix64 seeded with 0.
  CHECK(mix64(kGoldenGamma) == 0xE220A8397B1DCDAFULL);
  CHECK(substream(0, 1) == mix64(kGoldenGamma));
  CHECK(substream(12345, 0) == mix64(12345));
  RandomState a(substream(7, 3));
  RandomState b(substream(7, 3));
  RandomState c(substream(7, 4));
  CHECK(a.next() == b.next());
  CHECK(a.next() != c.next());
}

TEST_CASE("uniform_open stays inside (0, 1)") {
  RandomState rng(8);
  for (int i = 0; i < 100'000; ++i) {
    const double u = rng.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("subset sampling edge cases") {
  SubsetSampler subsets;
  RandomState rng(1);
  CHECK(subsets.sample(10, 0, rng).empty());
  for (std::uint64_t n : {1u, 5u, 31u, 32u, 33u, 500u}) {
    auto all = subsets.sample(n, n, rng);
    std::sort(all.begin(), all.end());
    std::vector<Vertex> expected(n);
    std::iota(expected.begin(), expected.end(), Vertex{0});
    CHECK(all == expected);
  }
  CHECK_THROWS_AS(subsets.sample(3, 4, rng), std::invalid_argument);
}

TEST_CASE("subsets are distinct and in range") {
  SubsetSampler subsets;
  RandomState rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint64_t n = 1 + rng.below(5000);
    const std::uint64_t x = rng.below(std::min<std::uint64_t>(n, 200) + 1);
    const auto s = subsets.sample(n, x, rng);
    REQUIRE(s.size() == x);
    REQUIRE(std::set<Vertex>(s.begin(), s.end()).size() == x);
    for (Vertex v : s) REQUIRE(v < n);
  }
}

TEST_CASE("every pair is equally likely (n=5, x=2)") {
  SubsetSampler subsets;
  RandomState rng(3);
  constexpr int kDraws = 100'000;
  std::map<std::pair<Vertex, Vertex>, int> counts;
  for (int i = 0; i < kDraws; ++i) {
    const auto s = subsets.sample(5, 2, rng);
    ++counts[{std::min(s[0], s[1]), std::max(s[0], s[1])}];
  }
  REQUIRE(counts.size() == 10);
  for (const auto& [pair, count] : counts) {
    CHECK(std::fabs(count / double(kDraws) - 0.1) <= 3.0 * std::sqrt(0.1 * 0.9 / kDraws));
  }
}

TEST_CASE("inclusion frequencies are uniform on the hashed path") {
  // x above the linear-table size exercises the open-addressing map.
  SubsetSampler subsets;
  RandomState rng(4);
  const std::uint64_t n = 60;
  const std::uint64_t x = 45;
  constexpr int kDraws = 40'000;
  std::vector<int> counts(n, 0);
  std::vector<int> first(n, 0);
  for (int i = 0; i < kDraws; ++i) {
    const auto s = subsets.sample(n, x, rng);
    for (Vertex v : s) ++counts[v];
    ++first[s.front()];
  }
  const double p = double(x) / n;
  for (std::uint64_t v = 0; v < n; ++v) {
    CHECK(std::fabs(counts[v] / double(kDraws) - p) <= 4.5 * std::sqrt(p * (1 - p) / kDraws));
    CHECK(std::fabs(first[v] / double(kDraws) - 1.0 / n) <=
          4.5 * std::sqrt((1.0 / n) * (1 - 1.0 / n) / kDraws));
  }
}

TEST_CASE("community edge examples") {
  RandomState rng(5);
  const std::vector<Vertex> one{7};
  CHECK(sample_community_edges(one, 0.9, rng, [](Vertex, Vertex) { FAIL("no pairs"); }) == 0);

  const std::vector<Vertex> four{3, 1, 4, 9};
  std::set<std::pair<Vertex, Vertex>> seen;
  CHECK(sample_community_edges(four, 1.0, rng, [&](Vertex u, Vertex v) {
          seen.insert({std::min(u, v), std::max(u, v)});
        }) == 6);
  CHECK(seen.size() == 6);

  CHECK(sample_community_edges(four, 0.0, rng, [](Vertex, Vertex) { FAIL("q = 0"); }) == 0);
}

TEST_CASE("mean edge count is C(x,2) q") {
  RandomState rng(6);
  const std::vector<Vertex> six{0, 1, 2, 3, 4, 5};
  constexpr int kReps = 100'000;
  double total = 0.0;
  for (int i = 0; i < kReps; ++i) {
    total += double(sample_community_edges(six, 0.3, rng, [](Vertex, Vertex) {}));
  }
  CHECK(std::fabs(total / kReps - 4.5) <= 3.0 * std::sqrt(15 * 0.3 * 0.7 / kReps));
}

TEST_CASE("geometric skipping matches per-pair Bernoulli trials") {
  const std::vector<Vertex> eight{0, 1, 2, 3, 4, 5, 6, 7};
  constexpr int kReps = 100'000;
  for (double q : {0.1, 0.5, 0.9}) {
    RandomState rng(static_cast<std::uint64_t>(q * 1000));
    std::map<std::pair<Vertex, Vertex>, int> kept;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < kReps; ++i) {
      const auto e = double(sample_community_edges(eight, q, rng, [&](Vertex u, Vertex v) {
        REQUIRE(u < v);  // row-major order over an increasing member list
        ++kept[{u, v}];
      }));
      sum += e;
      sum_sq += e * e;
    }
    REQUIRE(kept.size() == 28);
    const double se = std::sqrt(q * (1 - q) / kReps);
    for (const auto& [pair, count] : kept) CHECK(std::fabs(count / double(kReps) - q) <= 4 * se);
    const double mean = sum / kReps;
    const double var = sum_sq / kReps - mean * mean;
    CHECK(std::fabs(var - 28 * q * (1 - q)) <= 0.1 * 28 * q * (1 - q));
  }
}

TEST_CASE("tiny densities never overflow the pair index") {
  RandomState rng(9);
  std::vector<Vertex> big(3000);
  std::iota(big.begin(), big.end(), Vertex{0});
  std::uint64_t edges = 0;
  for (int i = 0; i < 200; ++i) {
    edges += sample_community_edges(big, 1e-300, rng, [](Vertex, Vertex) {});
  }
  CHECK(edges == 0);
}

TEST_CASE("sample_graph examples") {
  SUBCASE("no communities") {
    const auto c = sample_graph(
        {5, 0, CommunityLaw::iid(SizeLaw::point(2), DensityLaw::point(1.0)), 1}, 0);
    CHECK(c.component_count == 5);
    CHECK(c.y0 == 5);
    CHECK_FALSE(c.is_connected);
    CHECK(c.size_histogram == std::map<std::uint64_t, std::uint64_t>{{1, 5}});
  }
  SUBCASE("one complete community") {
    const std::uint64_t n = 50;
    const auto c = sample_graph(
        {n, 1, CommunityLaw::iid(SizeLaw::point(n), DensityLaw::point(1.0)), 2}, 0);
    CHECK(c.is_connected);
    CHECK(c.component_count == 1);
    CHECK(c.y0 == 0);
  }
  SUBCASE("singleton communities never connect") {
    const GraphSampler sampler(
        {30, 500, CommunityLaw::iid(SizeLaw::point(1), DensityLaw::point(1.0)), 3});
    for (std::uint64_t r = 0; r < 20; ++r) CHECK(sampler.sample(r).y0 == 30);
  }
  SUBCASE("invalid configs") {
    const auto law = CommunityLaw::iid(SizeLaw::point(2), DensityLaw::point(1.0));
    CHECK_THROWS_AS(GraphSampler({0, 1, law, 0}), std::invalid_argument);
    CHECK_THROWS_AS(GraphSampler({5, 1, CommunityLaw::noniid({}), 0}), LawError);
  }
}

TEST_CASE("sample_graph is deterministic per (config, replicate)") {
  const GraphConfig config{2000, 900,
                           CommunityLaw::iid(SizeLaw::zipf(2.1, 2, 300), DensityLaw::uniform(0.1, 0.9)),
                           0xDEADBEEF};
  const GraphSampler a(config);
  const GraphSampler b(config);
  for (std::uint64_t r = 0; r < 5; ++r) CHECK(a.sample(r) == b.sample(r));
  CHECK_FALSE(a.sample(0) == a.sample(1));
}

TEST_CASE("isolated vertices equal untouched vertices") {
  const GraphSampler sampler({3000, 2500,
                              CommunityLaw::iid(SizeLaw::poisson(3.0, 40), DensityLaw::uniform(0.2, 1.0)),
                              17});
  SampleOptions options;
  options.track_degree = true;
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto detail = sampler.sample_detailed(r, options);
    REQUIRE(detail.degree_zero.has_value());
    CHECK(*detail.degree_zero == detail.census.y0);
  }
}

TEST_CASE("random draws are proportional to communities plus retained pairs") {
  const GraphSampler sampler({10'000, 20'000,
                              CommunityLaw::iid(SizeLaw::pmf({{3, 0.5}, {40, 0.5}}),
                                                DensityLaw::uniform(0.01, 0.3)),
                              23});
  SampleOptions options;
  options.track_degree = false;
  for (std::uint64_t r = 0; r < 3; ++r) {
    const auto d = sampler.sample_detailed(r, options);
    // Per community: size draw, density draw, one bounded draw per member,
    // one gap draw per emitted edge, plus a terminal gap unless the last
    // pair was emitted.
    const std::uint64_t base = 2 * 20'000 + d.vertex_slots + d.edges_emitted;
    CHECK(d.rng_draws >= base);
    CHECK(d.rng_draws <= base + 20'000 + base / 1000);  // rare bounded-draw rejections
  }
}

TEST_CASE("edge dump lists every emitted edge") {
  const GraphSampler sampler(
      {12, 3, CommunityLaw::iid(SizeLaw::point(4), DensityLaw::point(1.0)), 5});
  std::ostringstream dump;
  SampleOptions options;
  options.edge_dump = &dump;
  const auto d = sampler.sample_detailed(0, options);
  CHECK(d.edges_emitted == 18);
  std::istringstream in(dump.str());
  Vertex u = 0;
  Vertex v = 0;
  std::vector<std::pair<unsigned, unsigned>> edges;
  while (in >> u >> v) edges.emplace_back(u, v);
  CHECK(edges.size() == 18);
  CHECK(oracle::bfs_component_sizes(12, edges) == d.census.size_histogram);
}
