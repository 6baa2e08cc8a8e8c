#pragma once

// Gset graph ingestion and the Max-Cut weight matrix.
//
// File format: first whitespace-separated line "n m", then m lines "u v w"
// with 1-indexed vertices and integer weights (possibly negative). Vertices
// are 0-indexed internally.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwsdp {

struct Edge {
  int u = 0;  // 0-indexed, u < v after parsing
  int v = 0;
  double w = 0.0;
};

struct Graph {
  int n = 0;
  std::vector<Edge> edges;
};

/// Parses a Gset-format stream. Throws GraphParseError on malformed input,
/// out-of-range or duplicate edges, self-loops, or edge-count mismatch.
Graph parse_gset(std::istream& in);
Graph parse_gset(const std::string& text);
Graph load_gset_file(const std::string& path);

/// Canonical Gset text (edges sorted by (u, v), 1-indexed).
std::string serialize_gset(const Graph& g);

struct GraphParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense symmetric weight matrix C with c_uv = c_vu = w, zero diagonal,
/// stored at native 64-bit double precision.
class WeightMatrix {
public:
  WeightMatrix() = default;
  explicit WeightMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int order() const noexcept { return n_; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, double w) {
    a_[static_cast<std::size_t>(i) * n_ + j] = w;
    a_[static_cast<std::size_t>(j) * n_ + i] = w;
  }

private:
  int n_ = 0;
  std::vector<double> a_;
};

WeightMatrix weight_matrix(const Graph& g);

/// Sum over all ordered pairs: sum_{i,j} c_ij = 2 * (sum of edge weights).
double total_weight(const Graph& g);

/// Seeded uniform random graph used by tests and benches: each unordered
/// pair is an edge with probability edge_prob; weights uniform integers in
/// [wmin, wmax] \ {0}. Deterministic for a given seed.
Graph random_graph(int n, double edge_prob, int wmin, int wmax, std::uint64_t seed);

}  // namespace gwsdp
