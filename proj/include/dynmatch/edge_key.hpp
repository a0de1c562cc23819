#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "dynmatch/errors.hpp"

namespace dynmatch {

using Vertex = std::uint64_t;

/// Canonical identity of a hyperedge: the strictly increasing list of its
/// endpoints. Two vertex lists describing the same set map to the same key.
class EdgeKey {
 public:
  EdgeKey() = default;
  explicit EdgeKey(std::vector<Vertex> sorted_unique) : vs_(std::move(sorted_unique)) {}

  const std::vector<Vertex>& vertices() const { return vs_; }
  std::size_t rank() const { return vs_.size(); }
  bool contains(Vertex v) const { return std::binary_search(vs_.begin(), vs_.end(), v); }

  bool operator==(const EdgeKey& o) const { return vs_ == o.vs_; }
  bool operator!=(const EdgeKey& o) const { return vs_ != o.vs_; }
  bool operator<(const EdgeKey& o) const { return vs_ < o.vs_; }

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < vs_.size(); ++i) {
      if (i) os << ',';
      os << vs_[i];
    }
    os << ')';
    return os.str();
  }

 private:
  std::vector<Vertex> vs_;
};

/// Sorts and deduplicates a vertex list into an EdgeKey.
/// Throws EmptyEdge for an empty list, RankExceeded if the number of
/// distinct vertices exceeds `max_rank`.
inline EdgeKey canonical_edge(std::vector<Vertex> vertices, std::size_t max_rank) {
  if (vertices.empty()) throw EmptyEdgeError();
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (vertices.size() > max_rank) throw RankExceededError(vertices.size(), max_rank);
  return EdgeKey(std::move(vertices));
}

inline EdgeKey canonical_edge(std::initializer_list<Vertex> vertices, std::size_t max_rank) {
  return canonical_edge(std::vector<Vertex>(vertices), max_rank);
}

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Vertex v : k.vertices()) {
      h ^= std::hash<Vertex>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace dynmatch
