#pragma once

#include "parablo/oscillation.hpp"

namespace parablo {

// ---------------------------------------------------------------------------
// Muckenhoupt constants.
//
// 1D, adjacent, q = 1:   sup over cells of M-(w)(x) / w(x)
// 1D, gapped,  q = 1:    sup over gap pairs of mean_left(w) / min_right(w)
// q in (1,oo):           sup of mean_left(w) * ( mean_right(w^{1/(1-q)}) )^{q-1}
// q = oo (1D only):      sup of mean_left(w) * exp( mean_right( ln(1/w) ) )
// parabolic:             the same pair functionals over (R-, R+), extended by
//                        the closure pairs (R+, R++) and the S-translates of
//                        R-(alpha) when requested.
//
// Zero cells: a ratio with zero denominator counts 0 when the numerator is
// also 0 and +infinity (with witness) otherwise. Computed constants are
// family-relative lower bounds of the continuum constants; on monotone
// weights they may dip below 1 because the window family is finite.
// ---------------------------------------------------------------------------

struct WeightResult {
  double constant = 0.0;
  OscWitness witness;
  long family_size = 0;
  bool infinite = false;
};

namespace detail {

// mean_left * (mean_right w^{1/(1-q)})^{q-1}; +inf if the dual mean diverges.
inline double pair_value_q(const std::vector<double>& w, long la, long ra, long m,
                           double q) {
  double s = 0.0;
  for (long i = la; i < la + m; ++i) s += w[static_cast<std::size_t>(i)];
  double meanL = s / static_cast<double>(m);
  if (q == 1.0) {
    double mn = std::numeric_limits<double>::infinity();
    for (long i = ra; i < ra + m; ++i) mn = std::min(mn, w[static_cast<std::size_t>(i)]);
    if (mn == 0.0) return meanL == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return meanL / mn;
  }
  if (std::isinf(q)) {
    double s2 = 0.0;
    for (long i = ra; i < ra + m; ++i) {
      double v = w[static_cast<std::size_t>(i)];
      if (v == 0.0) return meanL == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      s2 += std::log(1.0 / v);
    }
    return meanL * std::exp(s2 / static_cast<double>(m));
  }
  double r = 1.0 / (1.0 - q);
  double s2 = 0.0;
  for (long i = ra; i < ra + m; ++i) {
    double v = w[static_cast<std::size_t>(i)];
    if (v == 0.0) return meanL == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    s2 += std::pow(v, r);
  }
  double dual = std::pow(s2 / static_cast<double>(m), q - 1.0);
  return meanL * dual;
}

inline void check_weight(const std::vector<double>& w) {
  for (double v : w) require(v >= 0.0, "weights: negative cell value");
}

}  // namespace detail

struct WeightSpec {
  double q = 1.0;      // in [1, oo]; use std::numeric_limits<double>::infinity()
  bool gapped = false;
  double gamma = 0.5;  // gapped block ratio / parabolic lag
  long cap = 0;

  static WeightSpec a1_adjacent() { return {1.0, false, 0.5, 0}; }
  static WeightSpec a1_gapped(double g) { return {1.0, true, g, 0}; }
  static WeightSpec aq_adjacent(double q) { return {q, false, 0.5, 0}; }
  static WeightSpec aq_gapped(double q, double g) { return {q, true, g, 0}; }
};

inline WeightResult weight_constant(const SampledLine& w, const WeightSpec& spec) {
  w.validate();
  require(spec.q >= 1.0, "weight_constant: q must be >= 1");
  detail::check_weight(w.values);
  WeightResult res;

  if (spec.q == 1.0 && !spec.gapped) {
    // ess sup M-(w)/w over cells with a nonempty window family
    auto M = onesided_max(w, MaxVariant1D::standard_minus(spec.cap));
    for (long x = 1; x < w.cells(); ++x) {
      double num = M.values[static_cast<std::size_t>(x)];
      double den = w.values[static_cast<std::size_t>(x)];
      double val;
      if (den == 0.0)
        val = num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      else
        val = num / den;
      if (val > res.constant) {
        res.constant = val;
        res.witness = {x, 0, -1, {}, 0, 0};
      }
    }
    res.family_size = w.cells() - 1;
    res.infinite = std::isinf(res.constant);
    return res;
  }

  // pair families: anatomy halves (adjacent) or gap pairs
  std::vector<std::array<long, 3>> pairs;  // left_start, right_start, m
  if (spec.gapped) {
    auto fam = gap_pair_family(w, spec.gamma, PairMode::Exhaustive, spec.cap);
    for (const auto& p : fam) pairs.push_back({p.left_start, p.right_start, p.m});
  } else {
    auto fam = anatomy_family(w, spec.cap > 0 ? spec.cap / 2 : 0);
    for (const auto& a : fam) pairs.push_back({a.start, a.start + a.m, a.m});
  }
  res.family_size = static_cast<long>(pairs.size());
  for (const auto& pr : pairs) {
    double val = detail::pair_value_q(w.values, pr[0], pr[1], pr[2], spec.q);
    if (val > res.constant) {
      res.constant = val;
      res.witness = {pr[0], pr[2], pr[1], {}, 0, 0};
    }
  }
  res.infinite = std::isinf(res.constant);
  return res;
}

// Parabolic pair list: (past, future) per rectangle, plus closures.
struct ParabolicPairs {
  std::vector<std::pair<IndexBox, IndexBox>> pairs;
  std::vector<PRect> rects;
};

struct ParabolicWeightOptions {
  long k_cap = 0;
  bool exhaustive = true;
  bool closures = false;   // add (R+, R++) pairs
  double trans_tau = 0.0;  // >0: add (R-(alpha), S+(alpha)) pairs
  double trans_alpha = 0.0;
};

inline ParabolicPairs parabolic_pair_family(const SampledSlab& w, double gamma,
                                            const ParabolicWeightOptions& opt) {
  PRectOptions po;
  po.k_cap = opt.k_cap;
  po.exhaustive = opt.exhaustive;
  po.need_pp = opt.closures;
  po.trans_tau = opt.trans_tau;
  po.trans_alpha = opt.trans_alpha;
  ParabolicPairs out;
  out.rects = prect_family(w, gamma, po);
  for (const auto& r : out.rects) {
    out.pairs.emplace_back(r.past(), r.future());
    if (opt.closures && r.has_pp) out.pairs.emplace_back(r.future(), r.far_future());
    if (opt.trans_tau > 0.0) {
      long A = r.lag_cells(opt.trans_alpha);
      long D = r.shift_cells(opt.trans_tau);
      if (r.T - A >= 1 && D >= 1) {
        auto past = r.past_alpha(A);
        out.pairs.emplace_back(past, r.translate(past, D));
      }
    }
  }
  return out;
}

inline WeightResult weight_constant(const SampledSlab& w, double q, double gamma,
                                    const ParabolicWeightOptions& opt = {}) {
  w.validate();
  require(q >= 1.0 && !std::isinf(q),
          "parabolic weight_constant: q must be finite and >= 1");
  detail::check_weight(w.values);
  auto fam = parabolic_pair_family(w, gamma, opt);
  WeightResult res;
  res.family_size = static_cast<long>(fam.pairs.size());
  auto st = w.strides();
  for (std::size_t i = 0; i < fam.pairs.size(); ++i) {
    const auto& [pb, fb] = fam.pairs[i];
    double meanL = 0.0;
    detail::for_each_offset(pb, st, [&](long off) { meanL += w.values[static_cast<std::size_t>(off)]; });
    meanL /= static_cast<double>(pb.cells());
    double val;
    if (q == 1.0) {
      double mn = std::numeric_limits<double>::infinity();
      detail::for_each_offset(fb, st, [&](long off) {
        mn = std::min(mn, w.values[static_cast<std::size_t>(off)]);
      });
      val = mn == 0.0 ? (meanL == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                      : meanL / mn;
    } else {
      double r = 1.0 / (1.0 - q);
      double s2 = 0.0;
      bool zero = false;
      detail::for_each_offset(fb, st, [&](long off) {
        double v = w.values[static_cast<std::size_t>(off)];
        if (v == 0.0)
          zero = true;
        else
          s2 += std::pow(v, r);
      });
      if (zero)
        val = meanL == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      else
        val = meanL * std::pow(s2 / static_cast<double>(fb.cells()), q - 1.0);
    }
    if (val > res.constant) {
      res.constant = val;
      res.witness = {static_cast<long>(i), 0, -1, {}, 0, 0};
    }
  }
  res.infinite = std::isinf(res.constant);
  return res;
}

// ---------------------------------------------------------------------------
// Exponential / logarithmic bridges between weights and BLO norms.
//
//   1D:        || ln w ||_{BLO+}        <= ln(1 + 2 [w]_{A1+})
//   parabolic: || ln w ||_{PBLO_g^-}    <= 2 ln(1 + [w]_{A1+(g)})
//
// Both sides are evaluated on the same snapped family. The discrete
// inequality is exact: its proof is finite Jensen plus ratio bounds on cell
// means and minima, and the parabolic weight family is closed under the
// shift that maps (R-, R+) to (R+, R++).
// ---------------------------------------------------------------------------

struct BridgeReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 1e-9;
  bool pass = false;
  double weight_constant = 0.0;
};

inline SampledLine log_of(const SampledLine& w) {
  SampledLine f = w;
  for (auto& v : f.values) {
    require(v > 0.0, "bridge_check: weight must be positive at every cell");
    v = std::log(v);
  }
  return f;
}

inline SampledSlab log_of(const SampledSlab& w) {
  SampledSlab f = w;
  for (auto& v : f.values) {
    require(v > 0.0, "bridge_check: weight must be positive at every cell");
    v = std::log(v);
  }
  return f;
}

inline BridgeReport bridge_check(const SampledLine& w, long cap = 0,
                                 double slack = 1e-9) {
  BridgeReport rep;
  rep.slack = slack;
  WeightSpec spec = WeightSpec::a1_adjacent();
  spec.cap = cap;
  auto wc = weight_constant(w, spec);
  rep.weight_constant = wc.constant;
  rep.lhs = osc_norm(log_of(w), OscKind::blo_plus(), cap).norm;
  rep.rhs = std::log(1.0 + 2.0 * wc.constant);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + slack) + slack;
  return rep;
}

inline BridgeReport bridge_check(const SampledSlab& w, double gamma, long k_cap = 0,
                                 double slack = 1e-9) {
  BridgeReport rep;
  rep.slack = slack;
  ParabolicWeightOptions opt;
  opt.k_cap = k_cap;
  opt.closures = true;
  auto wc = weight_constant(w, 1.0, gamma, opt);
  rep.weight_constant = wc.constant;
  ParabolicOscOptions oo;
  oo.k_cap = k_cap;
  rep.lhs = osc_norm(log_of(w), OscKind::pblo_minus(gamma), oo).norm;
  rep.rhs = 2.0 * std::log(1.0 + wc.constant);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + slack) + slack;
  return rep;
}

// ---------------------------------------------------------------------------
// eps scan: A1+ constants of e^{eps f} across a ladder of nested windows.
// e^{eps f} is computed after subtracting max f (the constant is invariant
// under that shift); the critical eps estimate is the smallest grid eps
// whose constant-vs-window-size curve grows with log-log slope above the
// divergence threshold. On bounded windows every constant is finite, so
// membership is detected through growth, not a finite/infinite dichotomy.
// ---------------------------------------------------------------------------

struct EpsScanPoint {
  double eps = 0.0;
  long window_cells = 0;
  double constant = 0.0;
};

struct EpsScanResult {
  std::vector<EpsScanPoint> curve;
  double critical_eps = std::numeric_limits<double>::infinity();
  bool bounded_plateau = false;
  double slope_threshold = 0.5;
};

inline std::vector<double> default_eps_grid() {
  // geometric from 1/64 to 64, quarter-octave steps
  std::vector<double> g;
  for (int k = -24; k <= 24; ++k) g.push_back(std::pow(2.0, k / 4.0));
  return g;
}

struct EpsScanOptions {
  std::vector<double> eps_grid;
  int ladder_levels = 4;        // windows of n, n/2, ..., n/2^(levels-1) cells
  double slope_threshold = 0.5; // spec default; desk-scale runs use ~0.2
  long cap = 0;
};

inline EpsScanResult eps_scan(const SampledLine& f, const EpsScanOptions& opt_in = {}) {
  f.validate();
  EpsScanOptions opt = opt_in;
  if (opt.eps_grid.empty()) opt.eps_grid = default_eps_grid();
  require(std::is_sorted(opt.eps_grid.begin(), opt.eps_grid.end()),
          "eps_scan: eps grid must be increasing");
  EpsScanResult res;
  res.slope_threshold = opt.slope_threshold;
  const double fmax = *std::max_element(f.values.begin(), f.values.end());

  std::vector<long> windows;
  for (int j = opt.ladder_levels - 1; j >= 0; --j) {
    long cells = f.cells() >> j;
    if (cells >= 4) windows.push_back(cells);
  }
  require(!windows.empty(), "eps_scan: window too small");

  for (double eps : opt.eps_grid) {
    std::vector<double> consts;
    for (long cells : windows) {
      SampledLine w;
      w.x0 = f.x0;
      w.h = f.h;
      w.values.resize(static_cast<std::size_t>(cells));
      bool overflow = false;
      for (long i = 0; i < cells; ++i) {
        double e = eps * (f.values[static_cast<std::size_t>(i)] - fmax);
        if (e < -700.0) {
          overflow = true;
          break;
        }
        w.values[static_cast<std::size_t>(i)] = std::exp(e);
      }
      if (overflow) {
        consts.push_back(std::numeric_limits<double>::infinity());
        res.curve.push_back({eps, cells, consts.back()});
        continue;
      }
      WeightSpec spec = WeightSpec::a1_adjacent();
      spec.cap = opt.cap;
      double c = weight_constant(w, spec).constant;
      consts.push_back(c);
      res.curve.push_back({eps, cells, c});
    }
    if (windows.size() >= 2 && std::isinf(res.critical_eps)) {
      double c1 = consts[consts.size() - 2], c2 = consts.back();
      long n1 = windows[windows.size() - 2], n2 = windows.back();
      double slope = (std::isinf(c2) || c1 <= 0.0)
                         ? std::numeric_limits<double>::infinity()
                         : std::log(c2 / c1) / std::log(static_cast<double>(n2) / n1);
      if (slope > opt.slope_threshold) res.critical_eps = eps;
    }
  }
  res.bounded_plateau = std::isinf(res.critical_eps);
  return res;
}

}  // namespace parablo
