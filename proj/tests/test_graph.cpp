#include <doctest.h>

#include "gwsdp/graph.hpp"

using namespace gwsdp;

TEST_CASE("parse_gset: triangle and negative weights") {
  Graph k3 = parse_gset("3 3\n1 2 1\n2 3 1\n1 3 1");
  CHECK(k3.n == 3);
  CHECK(k3.edges.size() == 3);

  Graph neg = parse_gset("2 1\n1 2 -5");
  CHECK(neg.edges[0].w == -5.0);
  CHECK(neg.edges[0].u == 0);
  CHECK(neg.edges[0].v == 1);
}

TEST_CASE("parse_gset: malformed inputs") {
  CHECK_THROWS_AS(parse_gset("3 2\n1 2 1"), GraphParseError);         // count short
  CHECK_THROWS_AS(parse_gset("3 1\n1 4 1"), GraphParseError);         // out of range
  CHECK_THROWS_AS(parse_gset("3 2\n1 2 1\n2 1 1"), GraphParseError);  // duplicate pair
  CHECK_THROWS_AS(parse_gset("3 1\n2 2 1"), GraphParseError);         // self-loop
  CHECK_THROWS_AS(parse_gset(""), GraphParseError);                   // no header
  CHECK_THROWS_AS(parse_gset("2 1\n1 2 1\n9"), GraphParseError);      // trailing data
}

TEST_CASE("parse-serialize-parse round trip") {
  Graph g = random_graph(12, 0.4, -3, 3, 99);
  std::string text = serialize_gset(g);
  Graph h = parse_gset(text);
  CHECK(serialize_gset(h) == text);
  CHECK(h.n == g.n);
  CHECK(h.edges.size() == g.edges.size());
}

TEST_CASE("weight_matrix: symmetry, zero diagonal, entries") {
  Graph k3 = parse_gset("3 3\n1 2 1\n2 3 1\n1 3 1");
  WeightMatrix c = weight_matrix(k3);
  for (int i = 0; i < 3; ++i) {
    CHECK(c.at(i, i) == 0.0);
    for (int j = 0; j < 3; ++j) {
      CHECK(c.at(i, j) == c.at(j, i));
      if (i != j) CHECK(c.at(i, j) == 1.0);
    }
  }

  Graph neg = parse_gset("2 1\n1 2 -5");
  WeightMatrix cn = weight_matrix(neg);
  CHECK(cn.at(0, 1) == -5.0);
  CHECK(cn.at(1, 0) == -5.0);

  // sum_{i,j} c_ij = 2 * (sum of edge weights)
  Graph g = random_graph(10, 0.5, -3, 3, 5);
  WeightMatrix cg = weight_matrix(g);
  double s = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) s += cg.at(i, j);
  CHECK(s == doctest::Approx(total_weight(g)));
}

TEST_CASE("total_weight") {
  CHECK(total_weight(parse_gset("3 3\n1 2 1\n2 3 1\n1 3 1")) == 6.0);
  CHECK(total_weight(parse_gset("2 1\n1 2 -5")) == -10.0);
  CHECK(total_weight(parse_gset("4 0")) == 0.0);
}

TEST_CASE("random_graph is deterministic per seed") {
  Graph a = random_graph(20, 0.3, -2, 2, 42);
  Graph b = random_graph(20, 0.3, -2, 2, 42);
  CHECK(serialize_gset(a) == serialize_gset(b));
  Graph c = random_graph(20, 0.3, -2, 2, 43);
  CHECK(serialize_gset(a) != serialize_gset(c));
}
