#pragma once

#include <deque>

#include "parablo/geometry.hpp"

namespace parablo {

enum class Engine { Fast, Naive };

// One-sided maximal operators on a sampled line. Window families are
// grid-realizable whole-cell windows inside the data window:
//
//   standard-minus   sup over k >= 1 of the mean of |f| on [x-k, x-1]
//                    (the open-window (x-h, x) of the continuum definition;
//                    the cell holding x is excluded)
//   standard-plus    mirror image
//   gapped-minus     sup of left-block means of |f| over gap pairs whose
//                    right block contains x
//   natural-minus    sup of signed means over I- of anatomies with x in I+
//   hardy-littlewood sup of means of |f| over windows containing x
//
// Cells with an empty family (the first cell for the minus variants) fall
// back to |f(x)| resp. f(x), the one-cell limit of the continuum windows.
struct MaxVariant1D {
  enum class Kind {
    StandardMinus,
    StandardPlus,
    GappedMinus,
    NaturalMinus,
    HardyLittlewood,
  };
  Kind kind = Kind::StandardMinus;
  double gamma = 0.5;  // gapped-minus only
  long cap = 0;        // max window span in cells; 0 = whole window

  static MaxVariant1D standard_minus(long cap = 0) { return {Kind::StandardMinus, 0.5, cap}; }
  static MaxVariant1D standard_plus(long cap = 0) { return {Kind::StandardPlus, 0.5, cap}; }
  static MaxVariant1D gapped_minus(double g, long cap = 0) { return {Kind::GappedMinus, g, cap}; }
  static MaxVariant1D natural_minus(long cap = 0) { return {Kind::NaturalMinus, 0.5, cap}; }
  static MaxVariant1D hardy_littlewood(long cap = 0) { return {Kind::HardyLittlewood, 0.5, cap}; }
};

// Per-cell argmax window. Semantics depend on the variant:
//   standard / hardy-littlewood: cells [a, a+len)
//   gapped: left block [a, a+len), right block starts at b
//   natural: anatomy starting at a with half-length len
struct MaxWitness {
  long a = -1;
  long len = 0;
  long b = -1;
};

namespace detail {

inline std::vector<double> prefix_of(const std::vector<double>& g) {
  std::vector<double> p(g.size() + 1, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) p[i + 1] = p[i] + g[i];
  return p;
}

inline std::vector<double> abs_values(const std::vector<double>& v) {
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::abs(v[i]);
  return a;
}

// Incremental lower convex hull over points (i, P[i]) with max-slope queries
// from a point strictly right of everything inserted.
class SlopeHull {
 public:
  explicit SlopeHull(const std::vector<double>& prefix) : p_(prefix) {}

  void push(long i) {
    while (hull_.size() >= 2) {
      long o = hull_[hull_.size() - 2], a = hull_[hull_.size() - 1];
      double cross = (a - o) * (p_[static_cast<std::size_t>(i)] - p_[static_cast<std::size_t>(o)]) -
                     (p_[static_cast<std::size_t>(a)] - p_[static_cast<std::size_t>(o)]) * (i - o);
      if (cross > 0.0) break;  // middle point not on the lower hull
      hull_.pop_back();
    }
    hull_.push_back(i);
  }

  bool empty() const { return hull_.empty(); }

  // max over hull vertices v of (P[x]-P[v])/(x-v); returns the vertex.
  long query(long x, double& best) const {
    auto slope = [&](std::size_t idx) {
      long v = hull_[idx];
      return (p_[static_cast<std::size_t>(x)] - p_[static_cast<std::size_t>(v)]) / static_cast<double>(x - v);
    };
    std::size_t lo = 0, hi = hull_.size() - 1;
    while (hi - lo > 2) {
      std::size_t m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (slope(m1) < slope(m2))
        lo = m1 + 1;
      else
        hi = m2;
    }
    best = slope(lo);
    std::size_t arg = lo;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
      double s = slope(i);
      if (s > best) {
        best = s;
        arg = i;
      }
    }
    return hull_[arg];
  }

 private:
  const std::vector<double>& p_;
  std::vector<long> hull_;
};

// Sliding-window maximum of idx -> value over a fixed-width index window.
class SlidingMax {
 public:
  void push(long idx, double v) {
    while (!dq_.empty() && dq_.back().second < v) dq_.pop_back();
    dq_.emplace_back(idx, v);
  }
  void drop_before(long idx) {
    while (!dq_.empty() && dq_.front().first < idx) dq_.pop_front();
  }
  bool empty() const { return dq_.empty(); }
  std::pair<long, double> top() const { return dq_.front(); }

 private:
  std::deque<std::pair<long, double>> dq_;
};

inline std::vector<double> reversed(const std::vector<double>& v) {
  return std::vector<double>(v.rbegin(), v.rend());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1D engines
// ---------------------------------------------------------------------------

inline SampledLine onesided_max(const SampledLine& f, const MaxVariant1D& v,
                                Engine engine = Engine::Fast,
                                std::vector<MaxWitness>* witness = nullptr) {
  f.validate();
  const long n = f.cells();
  const long cap = v.cap > 0 ? std::min(v.cap, n) : n;
  SampledLine out = f;
  std::vector<MaxWitness> wit(static_cast<std::size_t>(n));

  using Kind = MaxVariant1D::Kind;

  if (v.kind == Kind::StandardPlus) {
    SampledLine rev = f;
    rev.values = detail::reversed(f.values);
    MaxVariant1D mv = v;
    mv.kind = Kind::StandardMinus;
    std::vector<MaxWitness> rw;
    SampledLine r = onesided_max(rev, mv, engine, witness ? &rw : nullptr);
    out.values = detail::reversed(r.values);
    if (witness) {
      for (long x = 0; x < n; ++x) {
        const MaxWitness& w = rw[static_cast<std::size_t>(n - 1 - x)];
        wit[static_cast<std::size_t>(x)] = {w.a < 0 ? -1 : n - w.a - w.len, w.len, -1};
      }
      *witness = std::move(wit);
    }
    return out;
  }

  const bool signed_means = v.kind == Kind::NaturalMinus;
  const std::vector<double> g = signed_means ? f.values : detail::abs_values(f.values);

  if (engine == Engine::Naive) {
    // Direct re-summation, the oracle for the fast paths.
    for (long x = 0; x < n; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      MaxWitness w;
      auto consider = [&](long a, long len, long b) {
        double s = 0.0;
        for (long i = a; i < a + len; ++i) s += g[static_cast<std::size_t>(i)];
        double mean = s / static_cast<double>(len);
        if (mean > best) {
          best = mean;
          w = {a, len, b};
        }
      };
      switch (v.kind) {
        case Kind::StandardMinus:
          for (long k = 1; k <= std::min(cap, x); ++k) consider(x - k, k, -1);
          break;
        case Kind::GappedMinus:
          for (long s = 2; s <= cap; ++s) {
            long m = gap_pair_block(v.gamma, s);
            for (long j = std::max(0L, x - s + 1); j <= std::min(n - s, x - s + m); ++j)
              consider(j, m, j + s - m);
          }
          break;
        case Kind::NaturalMinus:
          for (long m = 1; 2 * m <= cap; ++m)
            for (long j = std::max(0L, x - 2 * m + 1); j <= std::min(n - 2 * m, x - m); ++j)
              consider(j, m, -1);
          break;
        case Kind::HardyLittlewood:
          for (long a = std::max(0L, x - cap + 1); a <= x; ++a)
            for (long b = x; b < std::min(n, a + cap); ++b) consider(a, b - a + 1, -1);
          break;
        default:
          fail("onesided_max: unhandled variant");
      }
      if (best == -std::numeric_limits<double>::infinity()) {
        best = g[static_cast<std::size_t>(x)];
        w = {-1, 0, -1};
      }
      out.values[static_cast<std::size_t>(x)] = best;
      wit[static_cast<std::size_t>(x)] = w;
    }
    if (witness) *witness = std::move(wit);
    return out;
  }

  const std::vector<double> P = detail::prefix_of(g);
  auto block_mean = [&](long a, long len) {
    return (P[static_cast<std::size_t>(a + len)] - P[static_cast<std::size_t>(a)]) / static_cast<double>(len);
  };

  switch (v.kind) {
    case Kind::StandardMinus: {
      if (cap >= n) {
        detail::SlopeHull hull(P);
        for (long x = 0; x < n; ++x) {
          if (x > 0) hull.push(x - 1);
          if (hull.empty()) {
            out.values[0] = g[0];
            wit[0] = {-1, 0, -1};
            continue;
          }
          double best;
          long a = hull.query(x, best);
          out.values[static_cast<std::size_t>(x)] = best;
          wit[static_cast<std::size_t>(x)] = {a, x - a, -1};
        }
      } else {
        // Capped windows: per-length sliding maxima.
        std::vector<double> best(static_cast<std::size_t>(n),
                                 -std::numeric_limits<double>::infinity());
        for (long k = 1; k <= cap; ++k) {
          for (long x = k; x < n; ++x) {
            double m = block_mean(x - k, k);
            if (m > best[static_cast<std::size_t>(x)]) {
              best[static_cast<std::size_t>(x)] = m;
              wit[static_cast<std::size_t>(x)] = {x - k, k, -1};
            }
          }
        }
        for (long x = 0; x < n; ++x) {
          if (best[static_cast<std::size_t>(x)] == -std::numeric_limits<double>::infinity()) {
            best[static_cast<std::size_t>(x)] = g[static_cast<std::size_t>(x)];
            wit[static_cast<std::size_t>(x)] = {-1, 0, -1};
          }
          out.values[static_cast<std::size_t>(x)] = best[static_cast<std::size_t>(x)];
        }
      }
      break;
    }
    case Kind::GappedMinus: {
      std::vector<double> best(static_cast<std::size_t>(n),
                               -std::numeric_limits<double>::infinity());
      for (long s = 2; s <= cap; ++s) {
        const long m = gap_pair_block(v.gamma, s);
        detail::SlidingMax sm;
        long pushed = 0;  // next j to push
        for (long x = s - m; x < n; ++x) {
          const long j_lo = std::max(0L, x - s + 1);
          const long j_hi = std::min(n - s, x - s + m);
          if (j_hi < j_lo) continue;
          while (pushed <= j_hi) {
            sm.push(pushed, block_mean(pushed, m));
            ++pushed;
          }
          sm.drop_before(j_lo);
          auto [j, val] = sm.top();
          if (val > best[static_cast<std::size_t>(x)]) {
            best[static_cast<std::size_t>(x)] = val;
            wit[static_cast<std::size_t>(x)] = {j, m, j + s - m};
          }
        }
      }
      for (long x = 0; x < n; ++x) {
        if (best[static_cast<std::size_t>(x)] == -std::numeric_limits<double>::infinity()) {
          best[static_cast<std::size_t>(x)] = g[static_cast<std::size_t>(x)];
          wit[static_cast<std::size_t>(x)] = {-1, 0, -1};
        }
        out.values[static_cast<std::size_t>(x)] = best[static_cast<std::size_t>(x)];
      }
      break;
    }
    case Kind::NaturalMinus: {
      std::vector<double> best(static_cast<std::size_t>(n),
                               -std::numeric_limits<double>::infinity());
      for (long m = 1; 2 * m <= cap; ++m) {
        detail::SlidingMax sm;
        long pushed = 0;
        for (long x = m; x < n; ++x) {
          const long j_lo = std::max(0L, x - 2 * m + 1);
          const long j_hi = std::min(n - 2 * m, x - m);
          if (j_hi < j_lo) continue;
          while (pushed <= j_hi) {
            sm.push(pushed, block_mean(pushed, m));
            ++pushed;
          }
          sm.drop_before(j_lo);
          auto [j, val] = sm.top();
          if (val > best[static_cast<std::size_t>(x)]) {
            best[static_cast<std::size_t>(x)] = val;
            wit[static_cast<std::size_t>(x)] = {j, m, -1};
          }
        }
      }
      for (long x = 0; x < n; ++x) {
        if (best[static_cast<std::size_t>(x)] == -std::numeric_limits<double>::infinity()) {
          best[static_cast<std::size_t>(x)] = g[static_cast<std::size_t>(x)];
          wit[static_cast<std::size_t>(x)] = {-1, 0, -1};
        }
        out.values[static_cast<std::size_t>(x)] = best[static_cast<std::size_t>(x)];
      }
      break;
    }
    case Kind::HardyLittlewood: {
      std::vector<double> best(static_cast<std::size_t>(n),
                               -std::numeric_limits<double>::infinity());
      for (long len = 1; len <= cap; ++len) {
        detail::SlidingMax sm;
        long pushed = 0;
        for (long x = 0; x < n; ++x) {
          const long a_lo = std::max(0L, x - len + 1);
          const long a_hi = std::min(n - len, x);
          if (a_hi < a_lo) continue;
          while (pushed <= a_hi) {
            sm.push(pushed, block_mean(pushed, len));
            ++pushed;
          }
          sm.drop_before(a_lo);
          auto [a, val] = sm.top();
          if (val > best[static_cast<std::size_t>(x)]) {
            best[static_cast<std::size_t>(x)] = val;
            wit[static_cast<std::size_t>(x)] = {a, len, -1};
          }
        }
      }
      for (long x = 0; x < n; ++x) out.values[static_cast<std::size_t>(x)] = best[static_cast<std::size_t>(x)];
      break;
    }
    default:
      fail("onesided_max: unhandled variant");
  }
  if (witness) *witness = std::move(wit);
  return out;
}

// Pointwise closure max(T f, |f|) (or signed f), the discrete stand-in for
// the Lebesgue-point inequality M-(f) >= f a.e.; decompositions that need
// the operator to dominate the identity use this.
inline SampledLine pointwise_closure(const SampledLine& tf, const SampledLine& f,
                                     bool signed_values = false) {
  SampledLine out = tf;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double v = signed_values ? f.values[i] : std::abs(f.values[i]);
    out.values[i] = std::max(out.values[i], v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parabolic engines: per cell (x,t), sup over family rectangles R with
// (x,t) in R+(gamma) of the mean over R-(gamma) of |f| (maximal) or f
// (natural). Cells in no future block fall back to |f| resp. f.
// ---------------------------------------------------------------------------

struct SlabPrefix {
  std::vector<long> dims;  // padded dims (+1 per axis)
  std::vector<long> strides;
  std::vector<double> sum;

  explicit SlabPrefix(const SampledSlab& f, const std::vector<double>& g) {
    const std::size_t rank = f.dims.size();
    dims.resize(rank);
    for (std::size_t a = 0; a < rank; ++a) dims[a] = f.dims[a] + 1;
    strides.resize(rank);
    long acc = 1;
    for (std::size_t a = rank; a-- > 0;) {
      strides[a] = acc;
      acc *= dims[a];
    }
    sum.assign(static_cast<std::size_t>(acc), 0.0);
    auto fstr = f.strides();
    std::vector<long> idx(rank, 0);
    for (;;) {
      long src = 0, dst = 0;
      for (std::size_t a = 0; a < rank; ++a) {
        src += idx[a] * fstr[a];
        dst += (idx[a] + 1) * strides[a];
      }
      double v = g[static_cast<std::size_t>(src)];
      // sum[idx+1] = g[idx] + sum over lower corners (inclusion-exclusion)
      for (long mask = 1; mask < (1L << rank); ++mask) {
        long off = dst;
        int bits = 0;
        bool valid = true;
        for (std::size_t a = 0; a < rank; ++a) {
          if (mask & (1L << a)) {
            off -= strides[a];
            ++bits;
          }
        }
        (void)valid;
        v += (bits % 2 == 1 ? 1.0 : -1.0) * sum[static_cast<std::size_t>(off)];
      }
      sum[static_cast<std::size_t>(dst)] = v;
      std::size_t a = rank;
      bool done = true;
      while (a > 0) {
        --a;
        if (++idx[a] < f.dims[a]) {
          done = false;
          break;
        }
        idx[a] = 0;
      }
      if (done) break;
    }
  }

  double box_sum(const IndexBox& b) const {
    const std::size_t rank = b.dims();
    double total = 0.0;
    for (long mask = 0; mask < (1L << rank); ++mask) {
      long off = 0;
      int low = 0;
      for (std::size_t a = 0; a < rank; ++a) {
        long edge;
        if (mask & (1L << a)) {
          edge = b.start[a];
          ++low;
        } else {
          edge = b.start[a] + b.count[a];
        }
        off += edge * strides[a];
      }
      total += (low % 2 == 0 ? 1.0 : -1.0) * sum[static_cast<std::size_t>(off)];
    }
    return total;
  }

  double box_mean(const IndexBox& b) const {
    return box_sum(b) / static_cast<double>(b.cells());
  }
};

enum class ParabolicKind { Maximal, Natural };

inline SampledSlab parabolic_max(const SampledSlab& f, double gamma,
                                 ParabolicKind kind, Engine engine = Engine::Fast,
                                 const PRectOptions& opt_in = PRectOptions{},
                                 std::vector<long>* witness_rect = nullptr) {
  PRectOptions opt = opt_in;
  opt.need_pp = false;
  auto rects = prect_family(f, gamma, opt);
  const bool signed_means = kind == ParabolicKind::Natural;
  std::vector<double> g = signed_means ? f.values : detail::abs_values(f.values);

  SampledSlab out = f;
  std::vector<double> best(g.size(), -std::numeric_limits<double>::infinity());
  std::vector<long> bestR(witness_rect ? g.size() : 0, -1);
  auto fstr = f.strides();

  if (engine == Engine::Fast) {
    SlabPrefix pre(f, g);
    for (std::size_t r = 0; r < rects.size(); ++r) {
      double mean = pre.box_mean(rects[r].past());
      detail::for_each_offset(rects[r].future(), fstr, [&](long off) {
        if (mean > best[static_cast<std::size_t>(off)]) {
          best[static_cast<std::size_t>(off)] = mean;
          if (witness_rect) bestR[static_cast<std::size_t>(off)] = static_cast<long>(r);
        }
      });
    }
  } else {
    for (std::size_t r = 0; r < rects.size(); ++r) {
      double s = 0.0;
      long cells = 0;
      detail::for_each_offset(rects[r].past(), fstr, [&](long off) {
        s += g[static_cast<std::size_t>(off)];
        ++cells;
      });
      double mean = s / static_cast<double>(cells);
      detail::for_each_offset(rects[r].future(), fstr, [&](long off) {
        if (mean > best[static_cast<std::size_t>(off)]) {
          best[static_cast<std::size_t>(off)] = mean;
          if (witness_rect) bestR[static_cast<std::size_t>(off)] = static_cast<long>(r);
        }
      });
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    out.values[i] = best[i] == -std::numeric_limits<double>::infinity() ? g[i] : best[i];
  if (witness_rect) *witness_rect = std::move(bestR);
  return out;
}

inline SampledSlab pointwise_closure(const SampledSlab& tf, const SampledSlab& f,
                                     bool signed_values = false) {
  SampledSlab out = tf;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double v = signed_values ? f.values[i] : std::abs(f.values[i]);
    out.values[i] = std::max(out.values[i], v);
  }
  return out;
}

}  // namespace parablo
