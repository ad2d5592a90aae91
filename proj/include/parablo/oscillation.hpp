#pragma once

#include <optional>

#include "parablo/maximal.hpp"

namespace parablo {

// Oscillation functionals. 1D kinds run over interval anatomies or gap
// pairs; parabolic kinds run over a parabolic rectangle family.
//
//   blo-plus              sup_I  mean_{I-} (f - min_{I+} f)_+
//   bmo-plus              sup_I  mean_{I-} (f - mean_{I+} f)_+
//   blo-plus-gapped       sup over gap pairs of mean_left (f - min_right f)_+
//   blo-plus-q            sup_I  ( mean_{I-} (f - min_{I+} f)_+^q )^{1/q}
//   bmo-plus-gapped       sup over gap pairs of inf_a [ mean_left (f-a)_+
//                                                     + mean_right (f-a)_- ]
//   pblo-minus            sup_R  mean_{R-} (f - min_{R+} f)_+
//                               + mean_{R++} (f - min_{R+} f)_-
//   pbmo-minus            sup_R  inf_c [ mean_{R-} (f-c)_+ + mean_{R+} (f-c)_- ]
//   pblo-minus-gapped     the lag-independence variant on R-(alpha), S+(alpha),
//                         S++(alpha) with S-translates by tau L^p, tau > 1-alpha
//
// Inner infima over the centering scalar are computed exactly by scanning
// the breakpoints of the piecewise-linear objective (the sorted cell values
// of the participating blocks).
struct OscKind {
  enum class Kind {
    BloPlus,
    BmoPlus,
    BloPlusGapped,
    BloPlusQ,
    BmoPlusGapped,
    PbloMinus,
    PbmoMinus,
    PbloMinusGapped,
  };
  Kind kind = Kind::BloPlus;
  double gamma = 0.5;  // gapped 1D / parabolic lag
  double q = 1.0;
  double alpha = 0.5;  // parabolic gapped
  double tau = 1.0;

  static OscKind blo_plus() { return {Kind::BloPlus}; }
  static OscKind bmo_plus() { return {Kind::BmoPlus}; }
  static OscKind blo_plus_gapped(double g) { return {Kind::BloPlusGapped, g}; }
  static OscKind blo_plus_q(double qq) { return {Kind::BloPlusQ, 0.5, qq}; }
  static OscKind bmo_plus_gapped(double g) { return {Kind::BmoPlusGapped, g}; }
  static OscKind pblo_minus(double g) { return {Kind::PbloMinus, g}; }
  static OscKind pbmo_minus(double g) { return {Kind::PbmoMinus, g}; }
  static OscKind pblo_minus_gapped(double g, double a, double t) {
    return {Kind::PbloMinusGapped, g, 1.0, a, t};
  }
};

struct OscWitness {
  long a = -1, m = 0, b = -1;   // 1D anatomy / pair
  std::vector<long> cx;         // parabolic rect
  long ct = 0, k = 0;
};

struct OscResult {
  double norm = 0.0;
  OscWitness witness;
  long family_size = 0;
  long cap = 0;
};

namespace detail {

inline double mean_pos_part(const std::vector<double>& v, long a, long m, double c) {
  double s = 0.0;
  for (long i = a; i < a + m; ++i) {
    double d = v[static_cast<std::size_t>(i)] - c;
    if (d > 0) s += d;
  }
  return s / static_cast<double>(m);
}

inline double mean_pos_part_q(const std::vector<double>& v, long a, long m, double c,
                              double q) {
  double s = 0.0;
  for (long i = a; i < a + m; ++i) {
    double d = v[static_cast<std::size_t>(i)] - c;
    if (d > 0) s += std::pow(d, q);
  }
  return s / static_cast<double>(m);
}

// inf over c of mean of (x-c)_+ over `lo` + mean of (x-c)_- over `hi`.
// The objective is convex piecewise linear in c; the minimum sits at a
// breakpoint, i.e. one of the participating cell values.
inline double centered_two_block_inf(const std::vector<double>& lo_vals,
                                     const std::vector<double>& hi_vals) {
  std::vector<double> cands = lo_vals;
  cands.insert(cands.end(), hi_vals.begin(), hi_vals.end());
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  double best = std::numeric_limits<double>::infinity();
  for (double c : cands) {
    double s1 = 0.0, s2 = 0.0;
    for (double v : lo_vals)
      if (v > c) s1 += v - c;
    for (double v : hi_vals)
      if (v < c) s2 += c - v;
    double val = s1 / static_cast<double>(lo_vals.size()) +
                 s2 / static_cast<double>(hi_vals.size());
    best = std::min(best, val);
  }
  return best;
}

inline std::vector<double> gather(const SampledSlab& f, const IndexBox& b) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(b.cells()));
  auto st = f.strides();
  for_each_offset(b, st, [&](long off) { out.push_back(f.values[static_cast<std::size_t>(off)]); });
  return out;
}

inline double slab_mean_pos(const SampledSlab& f, const IndexBox& b, double c) {
  double s = 0.0;
  auto st = f.strides();
  for_each_offset(b, st, [&](long off) {
    double d = f.values[static_cast<std::size_t>(off)] - c;
    if (d > 0) s += d;
  });
  return s / static_cast<double>(b.cells());
}

inline double slab_mean_neg(const SampledSlab& f, const IndexBox& b, double c) {
  double s = 0.0;
  auto st = f.strides();
  for_each_offset(b, st, [&](long off) {
    double d = f.values[static_cast<std::size_t>(off)] - c;
    if (d < 0) s -= d;
  });
  return s / static_cast<double>(b.cells());
}

}  // namespace detail

inline OscResult osc_norm(const SampledLine& f, const OscKind& k, long cap = 0) {
  f.validate();
  using Kind = OscKind::Kind;
  OscResult res;
  res.cap = cap > 0 ? cap : f.cells();
  const auto& v = f.values;

  auto track = [&](double val, long a, long m, long b) {
    if (val > res.norm) {
      res.norm = val;
      res.witness = {a, m, b, {}, 0, 0};
    }
  };

  switch (k.kind) {
    case Kind::BloPlus:
    case Kind::BmoPlus:
    case Kind::BloPlusQ: {
      require(k.q >= 1.0, "osc_norm: q must be >= 1");
      auto fam = anatomy_family(f, res.cap / 2);
      res.family_size = static_cast<long>(fam.size());
      for (const auto& a : fam) {
        auto sp = block_stats(f, a.plus);
        double val = 0;
        if (k.kind == Kind::BmoPlus)
          val = detail::mean_pos_part(v, a.minus.start[0], a.m, sp.mean);
        else if (k.kind == Kind::BloPlus)
          val = detail::mean_pos_part(v, a.minus.start[0], a.m, sp.min);
        else
          val = std::pow(detail::mean_pos_part_q(v, a.minus.start[0], a.m, sp.min, k.q),
                         1.0 / k.q);
        track(val, a.start, a.m, -1);
      }
      break;
    }
    case Kind::BloPlusGapped: {
      auto fam = gap_pair_family(f, k.gamma, PairMode::Exhaustive, res.cap);
      res.family_size = static_cast<long>(fam.size());
      for (const auto& p : fam) {
        auto sr = block_stats(f, p.right());
        double val = detail::mean_pos_part(v, p.left_start, p.m, sr.min);
        track(val, p.left_start, p.m, p.right_start);
      }
      break;
    }
    case Kind::BmoPlusGapped: {
      auto fam = gap_pair_family(f, k.gamma, PairMode::Exhaustive, res.cap);
      res.family_size = static_cast<long>(fam.size());
      for (const auto& p : fam) {
        std::vector<double> lo(v.begin() + p.left_start, v.begin() + p.left_start + p.m);
        std::vector<double> hi(v.begin() + p.right_start, v.begin() + p.right_start + p.m);
        track(detail::centered_two_block_inf(lo, hi), p.left_start, p.m, p.right_start);
      }
      break;
    }
    default:
      fail("osc_norm: parabolic kind applied to a line");
  }
  return res;
}

struct ParabolicOscOptions {
  long k_cap = 0;
  bool exhaustive = true;
};

inline OscResult osc_norm(const SampledSlab& f, const OscKind& k,
                          const ParabolicOscOptions& opt = {}) {
  f.validate();
  using Kind = OscKind::Kind;
  OscResult res;
  res.cap = opt.k_cap;

  PRectOptions po;
  po.k_cap = opt.k_cap;
  po.exhaustive = opt.exhaustive;

  auto track = [&](double val, const PRect& r) {
    if (val > res.norm) {
      res.norm = val;
      res.witness = {-1, 0, -1, r.cx, r.ct, r.k};
    }
  };

  switch (k.kind) {
    case Kind::PbloMinus: {
      po.need_pp = true;
      auto fam = prect_family(f, k.gamma, po);
      res.family_size = static_cast<long>(fam.size());
      for (const auto& r : fam) {
        double c = block_stats(f, r.future()).min;
        double val = detail::slab_mean_pos(f, r.past(), c) +
                     detail::slab_mean_neg(f, r.far_future(), c);
        track(val, r);
      }
      break;
    }
    case Kind::PbmoMinus: {
      auto fam = prect_family(f, k.gamma, po);
      res.family_size = static_cast<long>(fam.size());
      for (const auto& r : fam) {
        auto lo = detail::gather(f, r.past());
        auto hi = detail::gather(f, r.future());
        track(detail::centered_two_block_inf(lo, hi), r);
      }
      break;
    }
    case Kind::PbloMinusGapped: {
      require(k.tau > 1.0 - k.alpha, "pblo-minus-gapped: tau must exceed 1 - alpha");
      po.trans_alpha = k.alpha;
      po.trans_tau = k.tau;
      auto fam = prect_family(f, k.gamma, po);
      res.family_size = static_cast<long>(fam.size());
      for (const auto& r : fam) {
        long A = r.lag_cells(k.alpha);
        long D = r.shift_cells(k.tau);
        if (r.T - A < 1 || D < 1) continue;
        auto past = r.past_alpha(A);
        auto splus = r.translate(past, D);
        auto spp = r.translate(past, 2 * D);
        double c = block_stats(f, splus).min;
        double val = detail::slab_mean_pos(f, past, c) + detail::slab_mean_neg(f, spp, c);
        track(val, r);
      }
      break;
    }
    default:
      fail("osc_norm: 1D kind applied to a slab");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Null space detectors: the discrete analogue of ||f|| = 0.
// ---------------------------------------------------------------------------

struct NullSpaceReport {
  bool in_null_space = true;
  // violating pair of flat offsets when false
  long i = -1, j = -1;
};

inline NullSpaceReport null_space_check(const SampledLine& f) {
  for (long i = 1; i < f.cells(); ++i) {
    if (f.values[static_cast<std::size_t>(i)] < f.values[static_cast<std::size_t>(i - 1)])
      return {false, i - 1, i};
  }
  return {};
}

// Parabolic: f constant in space per time slice and non-decreasing in time.
// (With the past/future block layout of the displayed definition, the first
// oscillation term vanishes exactly when past values never exceed future
// minima, i.e. for functions non-decreasing in t; f(x,t) = t has norm 0
// while f(x,t) = -t does not.)
inline NullSpaceReport null_space_check(const SampledSlab& f) {
  auto st = f.strides();
  const long nt = f.time_cells();
  std::vector<long> idx(f.dims.size(), 0);
  // space-constancy: compare every cell against the spatial origin cell
  for (;;) {
    long off = 0, base = 0;
    for (std::size_t a = 0; a + 1 < f.dims.size(); ++a) off += idx[a] * st[a];
    for (long it = 0; it < nt; ++it) {
      double v = f.values[static_cast<std::size_t>(off + it * st.back())];
      double v0 = f.values[static_cast<std::size_t>(base + it * st.back())];
      if (v != v0) return {false, base + it * st.back(), off + it * st.back()};
    }
    std::size_t a = f.dims.size() - 1;
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
  for (long it = 1; it < nt; ++it) {
    double prev = f.values[static_cast<std::size_t>((it - 1) * st.back())];
    double cur = f.values[static_cast<std::size_t>(it * st.back())];
    if (cur < prev) return {false, (it - 1) * st.back(), it * st.back()};
  }
  return {};
}

}  // namespace parablo
