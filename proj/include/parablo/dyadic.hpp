#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "parablo/core.hpp"

namespace parablo {

// Axis-aligned half-open box in R^n x R with exact real edges. The dyadic
// tree keeps these continuous coordinates so the (D4) length bounds are
// checked on the construction itself, not on grid rounding.
struct CBox {
  std::vector<double> xlo, xhi;
  double tlo = 0.0, thi = 1.0;

  int n() const { return static_cast<int>(xlo.size()); }
  double lx() const { return 0.5 * (xhi[0] - xlo[0]); }  // paper's l_x: half edge
  double lt() const { return thi - tlo; }
  double volume() const {
    double v = lt();
    for (std::size_t a = 0; a < xlo.size(); ++a) v *= xhi[a] - xlo[a];
    return v;
  }
};

struct DyadicNode {
  CBox box;
  int level = 0;
  std::vector<DyadicNode> children;
};

// Split rule for the parabolic dyadic decomposition of an R-(gamma) or
// R+(gamma) block: every spatial edge halves; the temporal edge splits into
// floor(2^p) parts when l_t(P)/floor(2^p) < (1-gamma) L^p / 2^{p j}, else
// into ceil(2^p) parts (j is the level being produced).
inline int dyadic_time_parts(double lt_parent, double root_band, double p, int j) {
  const double fl = std::floor(std::pow(2.0, p));
  const double threshold = root_band / std::pow(2.0, p * j);
  if (lt_parent / fl < threshold) return static_cast<int>(fl);
  return static_cast<int>(std::ceil(std::pow(2.0, p)));
}

namespace detail {

template <typename Visit>
inline void dyadic_visit_rec(const CBox& box, int level, int max_depth, double p,
                             double root_band, Visit&& visit) {
  if (!visit(box, level) || level >= max_depth) return;
  const int parts = dyadic_time_parts(box.lt(), root_band, p, level + 1);
  const int n = box.n();
  std::vector<int> sel(static_cast<std::size_t>(n), 0);
  for (;;) {
    CBox child;
    child.xlo.resize(static_cast<std::size_t>(n));
    child.xhi.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      double mid = 0.5 * (box.xlo[static_cast<std::size_t>(a)] + box.xhi[static_cast<std::size_t>(a)]);
      child.xlo[static_cast<std::size_t>(a)] = sel[static_cast<std::size_t>(a)] ? mid : box.xlo[static_cast<std::size_t>(a)];
      child.xhi[static_cast<std::size_t>(a)] = sel[static_cast<std::size_t>(a)] ? box.xhi[static_cast<std::size_t>(a)] : mid;
    }
    const double step = box.lt() / parts;
    for (int q = 0; q < parts; ++q) {
      child.tlo = box.tlo + q * step;
      child.thi = (q + 1 == parts) ? box.thi : box.tlo + (q + 1) * step;
      dyadic_visit_rec(child, level + 1, max_depth, p, root_band,
                       std::forward<Visit>(visit));
    }
    int a = n - 1;
    for (; a >= 0; --a) {
      if (sel[static_cast<std::size_t>(a)] == 0) {
        sel[static_cast<std::size_t>(a)] = 1;
        break;
      }
      sel[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
}

}  // namespace detail

// Streaming traversal; visit(box, level) returns false to prune that subtree.
// root must be a (1-gamma) L^p tall gamma-block, i.e. l_t = (1-gamma) l_x^p.
template <typename Visit>
inline void dyadic_visit(const CBox& root, double p, double gamma, int max_depth,
                         Visit&& visit) {
  require(p > 1.0, "dyadic: p must exceed 1");
  require(gamma >= 0.0 && gamma < 1.0, "dyadic: gamma must be in [0,1)");
  require(max_depth >= 0, "dyadic: negative depth");
  const double root_band = (1.0 - gamma) * std::pow(root.lx(), p);
  detail::dyadic_visit_rec(root, 0, max_depth, p, root_band,
                           std::forward<Visit>(visit));
}

inline DyadicNode dyadic_decompose(const CBox& root, double p, double gamma,
                                   int max_depth) {
  DyadicNode tree;
  std::vector<DyadicNode*> stack;
  dyadic_visit(root, p, gamma, max_depth, [&](const CBox& b, int level) {
    while (static_cast<int>(stack.size()) > level) stack.pop_back();
    if (level == 0) {
      tree.box = b;
      tree.level = 0;
      tree.children.clear();
      stack = {&tree};
    } else {
      DyadicNode* parent = stack.back();
      parent->children.push_back(DyadicNode{b, level, {}});
      stack.push_back(&parent->children.back());
    }
    return true;
  });
  return tree;
}

}  // namespace parablo
