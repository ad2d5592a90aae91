#pragma once

#include <algorithm>
#include <cmath>

#include "parablo/grid.hpp"

namespace parablo {

// ---------------------------------------------------------------------------
// Interval anatomy. For I = (a,b) on the grid, grid-snapped versions of
//   I- = (a, (a+b)/2)       I+ = ((a+b)/2, b)      I++ = (b, b + (b-a)/2)
//   I-- = (a - (b-a)/2, a)  I+++ = (b + (b-a)/2, 2b - a)
// I spans 2m cells starting at `start`; every derived block spans m cells.
// ---------------------------------------------------------------------------

struct IntervalAnatomy {
  long start = 0;  // first cell of I
  long m = 1;      // half-length in cells
  IndexBox minus, plus;          // always available when I fits
  IndexBox mm, pp, ppp;          // flagged blocks
  bool has_mm = false, has_pp = false, has_ppp = false;
};

inline IntervalAnatomy interval_anatomy(const SampledLine& line, long start, long m) {
  require(m >= 1, "interval_anatomy: m must be >= 1");
  const long n = line.cells();
  require(start >= 0 && start + 2 * m <= n,
          "interval_anatomy: I does not fit in the window");
  IntervalAnatomy a;
  a.start = start;
  a.m = m;
  a.minus = IndexBox::range1d(start, m);
  a.plus = IndexBox::range1d(start + m, m);
  a.has_mm = start - m >= 0;
  a.has_pp = start + 3 * m <= n;
  a.has_ppp = start + 4 * m <= n;
  if (a.has_mm) a.mm = IndexBox::range1d(start - m, m);
  if (a.has_pp) a.pp = IndexBox::range1d(start + 2 * m, m);
  if (a.has_ppp) a.ppp = IndexBox::range1d(start + 3 * m, m);
  return a;
}

// All anatomies with I inside the window and m <= m_cap (0 = window/2).
// need_pp / need_ppp restrict to anatomies whose lagged blocks fit.
inline std::vector<IntervalAnatomy> anatomy_family(const SampledLine& line,
                                                   long m_cap = 0,
                                                   bool need_pp = false,
                                                   bool need_ppp = false) {
  const long n = line.cells();
  if (m_cap <= 0) m_cap = n / 2;
  std::vector<IntervalAnatomy> out;
  for (long m = 1; m <= m_cap; ++m) {
    long blocks = 2 + (need_ppp ? 2 : (need_pp ? 1 : 0));
    if (blocks * m > n) break;
    for (long start = 0; start + blocks * m <= n; ++start)
      out.push_back(interval_anatomy(line, start, m));
  }
  require(!out.empty(), "anatomy_family: window too small");
  return out;
}

// ---------------------------------------------------------------------------
// Gapped interval pairs (a,b) , (c,d) with b-a = d-c = gamma (d-a),
// snapped to cells: equal blocks of m cells whose total span is s cells,
// m = round(gamma * s) clamped to [1, s/2]. Every span s >= 2 is enumerated;
// this makes the per-cell maximal sandwich an exact identity (each suffix
// window admits a same-span pair whose left block is its prefix).
// gamma_eff = m/s is recorded per pair and differs from gamma by at most
// one cell of span.
// ---------------------------------------------------------------------------

struct GapPairConfig {
  long left_start = 0;
  long right_start = 0;
  long m = 1;
  double gamma_eff = 0.5;

  long span() const { return right_start + m - left_start; }
  long gap() const { return right_start - (left_start + m); }
  IndexBox left() const { return IndexBox::range1d(left_start, m); }
  IndexBox right() const { return IndexBox::range1d(right_start, m); }
};

inline long gap_pair_block(double gamma, long span) {
  long m = std::lround(gamma * static_cast<double>(span));
  return std::clamp(m, 1L, span / 2);
}

enum class PairMode { Exhaustive, DyadicLadder };

inline std::vector<GapPairConfig> gap_pair_family(const SampledLine& line,
                                                  double gamma,
                                                  PairMode mode = PairMode::Exhaustive,
                                                  long span_cap = 0) {
  require(gamma > 0.0 && gamma <= 0.5, "gap_pair_family: gamma must be in (0, 1/2]");
  const long n = line.cells();
  require(n >= static_cast<long>(std::ceil(1.0 / gamma)) || n >= 2,
          "gap_pair_family: window too small");
  if (span_cap <= 0) span_cap = n;
  span_cap = std::min(span_cap, n);
  require(span_cap >= 2, "gap_pair_family: window too small");
  std::vector<GapPairConfig> out;
  for (long s = 2; s <= span_cap; ++s) {
    long m = gap_pair_block(gamma, s);
    if (mode == PairMode::DyadicLadder && (m & (m - 1)) != 0) continue;
    for (long a = 0; a + s <= n; ++a)
      out.push_back({a, a + s - m, m, static_cast<double>(m) / static_cast<double>(s)});
  }
  require(!out.empty(), "gap_pair_family: no admissible pair");
  return out;
}

// ---------------------------------------------------------------------------
// Parabolic rectangles on a slab.
//
// R(x,t,L) = Q(x,L) x [t - L^p, t + L^p) with the gamma-blocks
//   R-(g)  = Q x [t - L^p,        t - g L^p)
//   R+(g)  = Q x [t + g L^p,      t + L^p)
//   R++(g) = Q x [t + (1+2g) L^p, t + (2+g) L^p)
// Centers sit on cell edges; L = k*hx. Time extents snap to whole cells:
// T = round(L^p / ht) and G = round(gamma * T), so |R-| = |R+| = |R++|
// exactly and the shifted rectangle R' = R + (0, (1+g) L^p) satisfies
// (R'-, R'+) = (R+, R++) as index boxes.
// ---------------------------------------------------------------------------

struct PRect {
  std::vector<long> cx;  // spatial center edge indices
  long ct = 0;           // time center edge index
  long k = 1;            // spatial half-edge in cells (L = k*hx)
  long T = 1;            // time half-extent in cells
  long G = 0;            // lag in cells
  double gamma_eff = 0.0;
  double Lp_eff = 0.0;
  double L = 0.0;

  bool has_pp = false;

  IndexBox spatial_box() const {
    std::vector<long> s, c;
    for (long e : cx) {
      s.push_back(e - k);
      c.push_back(2 * k);
    }
    return IndexBox(std::move(s), std::move(c));
  }

  IndexBox with_time(long lo, long hi) const {
    IndexBox b = spatial_box();
    b.start.push_back(lo);
    b.count.push_back(hi - lo);
    return b;
  }

  IndexBox past() const { return with_time(ct - T, ct - G); }
  IndexBox future() const { return with_time(ct + G, ct + T); }
  IndexBox far_future() const { return with_time(ct + T + 2 * G, ct + 2 * T + G); }

  // R-(alpha) for an alternative lag, plus its tau-translates S+ and S++.
  IndexBox past_alpha(long A) const { return with_time(ct - T, ct - A); }
  IndexBox translate(const IndexBox& b, long rows) const {
    IndexBox r = b;
    r.start.back() += rows;
    return r;
  }

  long lag_cells(double alpha) const { return std::lround(alpha * static_cast<double>(T)); }
  long shift_cells(double tau) const { return std::lround(tau * static_cast<double>(T)); }
};

struct PRectOptions {
  long k_cap = 0;          // 0: min spatial extent / 4
  bool need_pp = false;    // R++ must fit
  bool exhaustive = true;  // else ladder: k doubling, centers on k-stride
  double trans_tau = 0.0;  // >0: S-translates must fit
  double trans_alpha = 0.0;
};

inline std::vector<PRect> prect_family(const SampledSlab& slab, double gamma,
                                       const PRectOptions& opt = {}) {
  require(gamma >= 0.0 && gamma < 1.0, "prect_family: gamma must be in [0,1)");
  slab.validate();
  long min_sp = slab.dims[0];
  for (int a = 1; a < slab.n; ++a) min_sp = std::min(min_sp, slab.dims[static_cast<std::size_t>(a)]);
  long k_cap = opt.k_cap > 0 ? opt.k_cap : std::max(1L, min_sp / 4);
  const long nt = slab.time_cells();
  std::vector<PRect> out;
  for (long k = 1; k <= k_cap; opt.exhaustive ? ++k : k *= 2) {
    const double L = k * slab.hx;
    const long T = std::lround(std::pow(L, slab.p) / slab.ht);
    if (T < 1) continue;
    const long G = std::lround(gamma * static_cast<double>(T));
    if (T - G < 1) continue;
    long t_hi = nt - T;  // ct + T <= nt
    if (opt.need_pp) t_hi = nt - 2 * T - G;
    if (opt.trans_tau > 0.0) {
      long A = std::lround(opt.trans_alpha * static_cast<double>(T));
      long D = std::lround(opt.trans_tau * static_cast<double>(T));
      if (T - A < 1 || D < 1) continue;
      // S++(alpha) = R-(alpha) + (0, 2D) reaches up to ct - A + 2D.
      t_hi = std::min(t_hi, nt - std::max(0L, 2 * D - A));
    }
    const long stride = opt.exhaustive ? 1 : std::max(1L, k);
    std::vector<long> clo(static_cast<std::size_t>(slab.n)), chi(static_cast<std::size_t>(slab.n));
    for (int a = 0; a < slab.n; ++a) {
      clo[static_cast<std::size_t>(a)] = k;
      chi[static_cast<std::size_t>(a)] = slab.dims[static_cast<std::size_t>(a)] - k;
    }
    if (chi[0] < clo[0]) continue;
    std::vector<long> cx = clo;
    for (;;) {
      for (long ct = T; ct <= t_hi; ct += stride) {
        PRect r;
        r.cx = cx;
        r.ct = ct;
        r.k = k;
        r.T = T;
        r.G = G;
        r.gamma_eff = static_cast<double>(G) / static_cast<double>(T);
        r.Lp_eff = T * slab.ht;
        r.L = L;
        r.has_pp = ct + 2 * T + G <= nt;
        out.push_back(r);
      }
      int a = slab.n - 1;
      for (; a >= 0; --a) {
        if (cx[static_cast<std::size_t>(a)] + stride <= chi[static_cast<std::size_t>(a)]) {
          cx[static_cast<std::size_t>(a)] += stride;
          break;
        }
        cx[static_cast<std::size_t>(a)] = clo[static_cast<std::size_t>(a)];
      }
      if (a < 0) break;
    }
  }
  require(!out.empty(), "prect_family: no admissible rectangle");
  return out;
}

}  // namespace parablo
