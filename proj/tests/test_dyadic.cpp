#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "parablo/dyadic.hpp"

using namespace parablo;

namespace {

CBox gamma_block(int n, double L, double p, double gamma) {
  CBox b;
  b.xlo.assign(static_cast<std::size_t>(n), -L);
  b.xhi.assign(static_cast<std::size_t>(n), L);
  b.tlo = 0.0;
  b.thi = (1.0 - gamma) * std::pow(L, p);
  return b;
}

// Full (D0)-(D4) sweep via the streaming visitor.
void check_d0_to_d4(int n, double p, double gamma, int depth, double L) {
  CBox root = gamma_block(n, L, p, gamma);
  const double band = (1.0 - gamma) * std::pow(L, p);
  std::map<int, double> level_volume;
  std::map<int, long> level_nodes;
  std::map<int, double> level_lt;

  const long fl = static_cast<long>(std::floor(std::pow(2.0, p)));
  const long ce = static_cast<long>(std::ceil(std::pow(2.0, p)));

  dyadic_visit(root, p, gamma, depth, [&](const CBox& b, int level) {
    level_volume[level] += b.volume();
    level_nodes[level] += 1;
    // (D4) within every level: l_x = L/2^j exactly, l_t inside the band
    const double lx_expect = L / std::pow(2.0, level);
    CHECK(std::abs(b.lx() - lx_expect) <= 1e-12 * lx_expect);
    const double hi = band / std::pow(2.0, p * level);
    CHECK(b.lt() <= hi * (1 + 1e-12));
    CHECK(b.lt() >= 0.5 * hi * (1 - 1e-12));
    // levels are geometrically uniform: every node at a level shares l_t
    auto it = level_lt.find(level);
    if (it == level_lt.end())
      level_lt[level] = b.lt();
    else
      CHECK(std::abs(it->second - b.lt()) <= 1e-12 * it->second);
    return true;
  });

  // (D0): each level tiles the root volume exactly
  const double v0 = root.volume();
  for (int j = 0; j <= depth; ++j) {
    REQUIRE(level_volume.count(j) == 1);
    CHECK(std::abs(level_volume[j] - v0) <= 1e-9 * v0);
  }
  // (D2): per-level node counts multiply by 2^n*floor(2^p) or 2^n*ceil(2^p)
  for (int j = 1; j <= depth; ++j) {
    long ratio = level_nodes[j] / level_nodes[j - 1];
    CHECK(level_nodes[j] % level_nodes[j - 1] == 0);
    bool ok = ratio == (1L << n) * fl || ratio == (1L << n) * ce;
    CHECK(ok);
  }
}

}  // namespace

TEST_CASE("dyadic: D0-D4 across n, p, gamma") {
  for (int n : {1, 2})
    for (double p : {1.5, 2.0, 3.0})
      for (double gamma : {0.0, 0.25, 0.5})
        check_d0_to_d4(n, p, gamma, n == 2 && p == 3.0 ? 3 : 4, 1.0);
}

TEST_CASE("dyadic: p=2 always 2^n*4 children, l_t exact") {
  for (int n : {1, 2}) {
    CBox root = gamma_block(n, 1.0, 2.0, 0.0);
    dyadic_visit(root, 2.0, 0.0, 4, [&](const CBox& b, int level) {
      double expect = 1.0 / std::pow(4.0, level);
      CHECK(std::abs(b.lt() - expect) <= 1e-12 * expect);
      return true;
    });
    auto tree = dyadic_decompose(root, 2.0, 0.0, 2);
    REQUIRE(tree.children.size() == static_cast<std::size_t>((1 << n) * 4));
    for (const auto& c : tree.children)
      CHECK(c.children.size() == static_cast<std::size_t>((1 << n) * 4));
  }
}

TEST_CASE("dyadic: p=1.5 child counts in {2^n*2, 2^n*3}") {
  CBox root = gamma_block(1, 1.0, 1.5, 0.0);
  auto tree = dyadic_decompose(root, 1.5, 0.0, 4);
  std::function<void(const DyadicNode&)> walk = [&](const DyadicNode& nd) {
    if (nd.children.empty()) return;
    bool ok = nd.children.size() == 4 || nd.children.size() == 6;
    CHECK(ok);
    for (const auto& c : nd.children) walk(c);
  };
  walk(tree);
}

TEST_CASE("dyadic: depth 0 is the root only") {
  CBox root = gamma_block(1, 2.0, 2.0, 0.25);
  auto tree = dyadic_decompose(root, 2.0, 0.25, 0);
  CHECK(tree.children.empty());
  CHECK(tree.level == 0);
  CHECK(tree.box.lt() == Catch::Approx(root.lt()));
}

TEST_CASE("dyadic: nodes nest inside their parent (D1/D3 structural)") {
  CBox root = gamma_block(2, 1.0, 1.5, 0.25);
  auto tree = dyadic_decompose(root, 1.5, 0.25, 3);
  std::function<void(const DyadicNode&)> walk = [&](const DyadicNode& nd) {
    for (std::size_t i = 0; i < nd.children.size(); ++i) {
      const auto& c = nd.children[i].box;
      for (std::size_t a = 0; a < c.xlo.size(); ++a) {
        CHECK(c.xlo[a] >= nd.box.xlo[a] - 1e-12);
        CHECK(c.xhi[a] <= nd.box.xhi[a] + 1e-12);
      }
      CHECK(c.tlo >= nd.box.tlo - 1e-12);
      CHECK(c.thi <= nd.box.thi + 1e-12);
      // siblings disjoint: same-level boxes share no volume (spot pairwise)
      for (std::size_t j = i + 1; j < nd.children.size(); ++j) {
        const auto& d = nd.children[j].box;
        bool disjoint = c.tlo >= d.thi || d.tlo >= c.thi;
        for (std::size_t a = 0; a < c.xlo.size() && !disjoint; ++a)
          disjoint = c.xlo[a] >= d.xhi[a] || d.xlo[a] >= c.xhi[a];
        CHECK(disjoint);
      }
      walk(nd.children[i]);
    }
  };
  walk(tree);
}
