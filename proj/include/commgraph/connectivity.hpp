#ifndef COMMGRAPH_CONNECTIVITY_HPP
#define COMMGRAPH_CONNECTIVITY_HPP

#include <cstdint>
#include <map>
#include <vector>

namespace commgraph {

using Vertex = std::uint32_t;

/// Component summary of one graph realisation.
struct ComponentCensus {
  bool is_connected = false;
  std::uint64_t component_count = 0;
  std::uint64_t largest = 0;
  std::uint64_t y0 = 0;  // singleton components, i.e. isolated vertices
  std::map<std::uint64_t, std::uint64_t> size_histogram;  // size -> count

  friend bool operator==(const ComponentCensus&, const ComponentCensus&) = default;
};

/// Union-find over [0, n) with union by size and path compression.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);

  std::size_t size() const noexcept { return parent_.size(); }
  std::uint64_t component_count() const noexcept { return components_; }

  /// Root of v's set. Throws std::out_of_range for v >= n.
  Vertex find(Vertex v);

  /// Merges the sets of u and v; false iff they already shared a root.
  bool unite(Vertex u, Vertex v);

  /// Size of the set containing v.
  std::uint64_t set_size(Vertex v) { return size_[find(v)]; }

  ComponentCensus census();

 private:
  Vertex find_root(Vertex v) noexcept;
  void check(Vertex v) const;

  std::vector<Vertex> parent_;
  std::vector<Vertex> size_;
  std::uint64_t components_;
};

}  // namespace commgraph

#endif  // COMMGRAPH_CONNECTIVITY_HPP
