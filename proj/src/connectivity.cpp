#include "commgraph/connectivity.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace commgraph {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
  if (n > std::numeric_limits<Vertex>::max()) {
    throw std::length_error("DisjointSets: too many vertices");
  }
  std::iota(parent_.begin(), parent_.end(), Vertex{0});
}

void DisjointSets::check(Vertex v) const {
  if (v >= parent_.size()) {
    throw std::out_of_range("vertex " + std::to_string(v) + " outside [0, " +
                            std::to_string(parent_.size()) + ")");
  }
}

Vertex DisjointSets::find_root(Vertex v) noexcept {
  Vertex root = v;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[v] != root) {
    const Vertex next = parent_[v];
    parent_[v] = root;
    v = next;
  }
  return root;
}

Vertex DisjointSets::find(Vertex v) {
  check(v);
  return find_root(v);
}

bool DisjointSets::unite(Vertex u, Vertex v) {
  check(u);
  check(v);
  Vertex a = find_root(u);
  Vertex b = find_root(v);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  --components_;
  return true;
}

ComponentCensus DisjointSets::census() {
  ComponentCensus out;
  for (Vertex v = 0; v < parent_.size(); ++v) {
    if (find_root(v) != v) continue;
    const std::uint64_t s = size_[v];
    ++out.size_histogram[s];
    out.largest = std::max(out.largest, s);
  }
  out.component_count = components_;
  out.is_connected = components_ == 1;
  const auto singles = out.size_histogram.find(1);
  out.y0 = singles == out.size_histogram.end() ? 0 : singles->second;
  return out;
}

}  // namespace commgraph
