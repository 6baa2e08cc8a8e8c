#include "gwsdp/graph.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gwsdp {

Graph parse_gset(std::istream& in) {
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw GraphParseError("gset: missing 'n m' header");
  if (n < 0 || m < 0) throw GraphParseError("gset: negative n or m");

  Graph g;
  g.n = static_cast<int>(n);
  g.edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<int, int>> seen;

  for (long long e = 0; e < m; ++e) {
    long long u = 0, v = 0;
    double w = 0.0;
    if (!(in >> u >> v >> w)) {
      throw GraphParseError("gset: declared " + std::to_string(m) + " edges, found " +
                            std::to_string(e));
    }
    if (u < 1 || u > n || v < 1 || v > n) {
      throw GraphParseError("gset: vertex out of range on edge " + std::to_string(e + 1));
    }
    if (u == v) throw GraphParseError("gset: self-loop on vertex " + std::to_string(u));
    int a = static_cast<int>(std::min(u, v)) - 1;
    int b = static_cast<int>(std::max(u, v)) - 1;
    if (!seen.insert({a, b}).second) {
      throw GraphParseError("gset: duplicate edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ")");
    }
    g.edges.push_back({a, b, w});
  }

  double trailing;
  if (in >> trailing) throw GraphParseError("gset: trailing data after last edge");
  return g;
}

Graph parse_gset(const std::string& text) {
  std::istringstream in(text);
  return parse_gset(in);
}

Graph load_gset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphParseError("cannot open graph file: " + path);
  return parse_gset(in);
}

std::string serialize_gset(const Graph& g) {
  auto edges = g.edges;
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  std::ostringstream out;
  out << g.n << ' ' << edges.size() << '\n';
  for (const Edge& e : edges) {
    out << e.u + 1 << ' ' << e.v + 1 << ' ' << static_cast<long long>(e.w) << '\n';
  }
  return out.str();
}

WeightMatrix weight_matrix(const Graph& g) {
  WeightMatrix c(g.n);
  for (const Edge& e : g.edges) c.set(e.u, e.v, e.w);
  return c;
}

double total_weight(const Graph& g) {
  double s = 0.0;
  for (const Edge& e : g.edges) s += e.w;
  return 2.0 * s;
}

Graph random_graph(int n, double edge_prob, int wmin, int wmax, std::uint64_t seed) {
  if (wmin > wmax) throw std::invalid_argument("random_graph: wmin > wmax");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> weight(wmin, wmax);
  Graph g;
  g.n = n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng) < edge_prob) {
        int w = weight(rng);
        if (w == 0) w = wmax > 0 ? 1 : -1;  // keep edges meaningful
        g.edges.push_back({u, v, static_cast<double>(w)});
      }
    }
  }
  return g;
}

}  // namespace gwsdp
