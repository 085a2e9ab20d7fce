#include <cmath>
#include <doctest.h>
#include <sstream>

#include "heat/errors.hpp"
#include "heat/graph.hpp"
#include "heat/rng.hpp"

using namespace heat;

namespace {

AttributedGraph from_strings(const std::string& edges,
                             const std::string& attrs = "",
                             const std::string& labels = "") {
  std::stringstream es(edges), as(attrs), ls(labels);
  return load_graph(es, attrs.empty() ? nullptr : &as,
                    labels.empty() ? nullptr : &ls);
}

}  // namespace

TEST_CASE("load_graph basics") {
  auto g = from_strings("a b\nb c 2.5\n# comment\nc a\n");
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 3);
  CHECK(g.weight(0, 1) == 1.0);
  CHECK(g.weight(g.index_of.at("b"), g.index_of.at("c")) == 2.5);
  // W symmetric
  for (auto [u, v] : g.edges) CHECK(g.weight(u, v) == g.weight(v, u));
}

TEST_CASE("symmetric duplicate collapses to one edge of weight 1") {
  auto g = from_strings("a b\nb a\n");
  CHECK(g.num_edges() == 1);
  CHECK(g.weight(0, 1) == 1.0);
  CHECK(g.merged_duplicates == 1);
}

TEST_CASE("same-orientation duplicates sum") {
  auto g = from_strings("a b\na b 2\n");
  CHECK(g.num_edges() == 1);
  CHECK(g.weight(0, 1) == 3.0);
  CHECK(g.merged_duplicates == 1);
}

TEST_CASE("self-loops dropped") {
  auto g = from_strings("a b\na a\n");
  CHECK(g.num_nodes() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.dropped_self_loops == 1);
}

TEST_CASE("load errors carry context") {
  CHECK_THROWS_WITH_AS(from_strings("a\n"),
                       doctest::Contains("line 1"), DataError);
  CHECK_THROWS_WITH_AS(from_strings("a b -1\n"),
                       doctest::Contains("negative"), DataError);
  CHECK_THROWS_WITH_AS(from_strings("a b\n", "id,f1\na,1\nb,2\nz,3\n"),
                       doctest::Contains("unknown node"), DataError);
  CHECK_THROWS_AS(from_strings("a b x y\n"), DataError);
}

TEST_CASE("BOM is stripped") {
  auto g = from_strings("\xEF\xBB\xBF""a b\n");
  CHECK(g.num_nodes() == 2);
  CHECK(g.index_of.count("a") == 1);
}

TEST_CASE("attribute and label loading") {
  auto g = from_strings("a b\nb c\n",
                        "id,f1,f2\na,1,0\nb,0,1\nc,1,1\n",
                        "a,red\nb,blue\nc,red;blue\n");
  CHECK(g.has_attributes);
  CHECK(g.num_attributes() == 2);
  CHECK(g.attributes(g.index_of.at("c"), 0) == 1.0);
  CHECK(g.has_labels);
  CHECK(g.multilabel);
  CHECK(g.labels[g.index_of.at("c")].size() == 2);
}

TEST_CASE("standardize_attributes") {
  auto g = from_strings("a b\nb c\n",
                        "id,f1,f2\na,1,5\nb,2,5\nc,3,5\n");
  auto s = standardize_attributes(g);
  int a = s.index_of.at("a");
  // column (1,2,3) with population sigma sqrt(2/3)
  CHECK(s.attributes(a, 0) ==
        doctest::Approx(-1.224744871391589).epsilon(1e-12));
  CHECK(std::abs(s.attributes.col(0).mean()) <= 1e-9);
  double var = s.attributes.col(0).squaredNorm() / 3.0;
  CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  // constant column becomes zero
  CHECK(s.attributes.col(1).cwiseAbs().maxCoeff() == 0.0);
  // idempotence
  auto twice = standardize_attributes(s);
  CHECK((twice.attributes - s.attributes).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("attribute_similarity examples") {
  auto g = from_strings("a b\nb c\nc d\n",
                        "id,f1,f2\na,1,1\nb,1,1\nc,1,0\nd,-1,0\n");
  auto y = attribute_similarity(g);
  int a = g.index_of.at("a"), b = g.index_of.at("b");
  int c = g.index_of.at("c"), d = g.index_of.at("d");
  CHECK(y(a, b) == doctest::Approx(1.0).epsilon(1e-12));  // identical
  CHECK(y(c, d) == 0.0);                                  // opposite, clamped
  CHECK(y(a, a) == 0.0);                                  // zero diagonal
  CHECK((y - y.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(y.minCoeff() >= 0.0);
  CHECK(y.maxCoeff() <= 1.0);
}

TEST_CASE("orthogonal attributes give zero similarity") {
  auto g = from_strings("a b\n", "id,f1,f2\na,1,0\nb,0,1\n");
  auto y = attribute_similarity(g);
  CHECK(y(0, 1) == 0.0);
}

TEST_CASE("similarity matches brute-force cosine on random matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 10 + static_cast<int>(rng.index(41));  // up to ~50
    int d = 2 + static_cast<int>(rng.index(19));
    std::stringstream edges, attrs;
    attrs << "id";
    for (int k = 0; k < d; ++k) attrs << ",f" << k;
    attrs << "\n";
    for (int u = 0; u + 1 < n; ++u) edges << "n" << u << " n" << u + 1 << "\n";
    for (int u = 0; u < n; ++u) {
      attrs << "n" << u;
      for (int k = 0; k < d; ++k) attrs << "," << rng.uniform(-1, 1);
      attrs << "\n";
    }
    auto g = from_strings(edges.str(), attrs.str());
    auto y = attribute_similarity(g);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        double expected = 0.0;
        if (u != v) {
          double dot = g.attributes.row(u).dot(g.attributes.row(v));
          double nu = g.attributes.row(u).norm();
          double nv = g.attributes.row(v).norm();
          if (nu > 0 && nv > 0) expected = std::max(dot / (nu * nv), 0.0);
        }
        CHECK(std::abs(y(u, v) - std::min(expected, 1.0)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("build_transition_tables") {
  // weights (2, 0, 2) in row a; node d is isolated (self-loop only)
  auto g = from_strings("a b 2\na c 2\nd d\n",
                        "id,f1,f2\na,1,1\nb,1,0.5\nc,0.5,1\nd,1,1\n");
  auto y = attribute_similarity(g);
  auto t = build_transition_tables(g, y);
  int a = g.index_of.at("a"), b = g.index_of.at("b");
  int c = g.index_of.at("c"), d = g.index_of.at("d");
  CHECK(t.topo.prob(a, b) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.topo.prob(a, c) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.topo.row_empty(d));  // zero row preserved
  CHECK(t.topo.row_sum(a) == doctest::Approx(1.0).epsilon(1e-9));

  for (int u = 0; u < g.num_nodes(); ++u) {
    double topo_sum = t.topo.row_sum(u);
    CHECK((topo_sum == 0.0 || std::abs(topo_sum - 1.0) <= 1e-9));
    double attr_sum = t.attr.row_sum(u);
    CHECK((attr_sum == 0.0 || std::abs(attr_sum - 1.0) <= 1e-9));
    CHECK(t.attr.prob(u, u) == 0.0);  // zero diagonal
    for (int v = 0; v < g.num_nodes(); ++v) {
      CHECK(t.attr.prob(u, v) >= 0.0);
      CHECK(t.attr.prob(u, v) <= 1.0);
    }
  }

  // streamed construction gives the same table
  auto streamed = build_transition_tables(g);
  CHECK((streamed.attr.cum - t.attr.cum).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("already normalized similarity row passes through") {
  Eigen::MatrixXd y(3, 3);
  y << 0.0, 0.5, 0.5,
       0.5, 0.0, 0.5,
       0.25, 0.25, 0.0;
  auto g = from_strings("a b\nb c\n");
  auto t = build_transition_tables(g, y);
  CHECK(t.attr.prob(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.attr.prob(2, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("subgraph_with_edges keeps nodes and attributes") {
  auto g = from_strings("a b\nb c\nc a\n", "id,f1\na,1\nb,2\nc,3\n");
  auto sub = subgraph_with_edges(g, {{0, 1}});
  CHECK(sub.num_nodes() == 3);
  CHECK(sub.num_edges() == 1);
  CHECK(sub.has_attributes);
  CHECK(!sub.has_edge(1, 2));
  CHECK(sub.weight(0, 1) == 1.0);
}
