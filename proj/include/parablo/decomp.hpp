#pragma once

#include "parablo/weights.hpp"

namespace parablo {

// ---------------------------------------------------------------------------
// John-Nirenberg level-set profiling.
//
// For each configuration the relative measure inside the lower block of
// {(f - min over the upper block)_+ > lambda}; tails = sup over the family.
// 1d-adjacent profiles I- against I+, 1d-lagged against I++ (the lemma's
// form, whose proof yields the reference constants A = 2, B = ln2/6).
// The parabolic profile adds the negative-part tail on R++(gamma).
// ---------------------------------------------------------------------------

struct JNProfile {
  std::vector<double> lambdas;
  std::vector<double> tails;      // positive-part tails
  std::vector<double> neg_tails;  // parabolic only
  double a_fit = 0.0, b_fit = 0.0;
  bool fit_valid = false;
  double norm_used = 0.0;
  double ref_A = 2.0;                   // lagged 1D benchmark from the proof
  double ref_B = 0.11552453009332421;   // ln(2)/6
};

enum class JNSetting { Adjacent1D, Lagged1D };

namespace detail {

inline void jn_fit(JNProfile& p) {
  // least squares on log tails over the informative sub-grid
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
    double t = p.tails[i];
    if (t <= 1e-6 || t >= 1.0) continue;
    double x = p.lambdas[i], y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && sxx * n - sx * sx > 0) {
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double inter = (sy - slope * sx) / n;
    p.b_fit = -slope;
    p.a_fit = std::exp(inter);
    p.fit_valid = true;
  }
}

inline std::vector<double> auto_lambda_grid(double top) {
  std::vector<double> g;
  if (top <= 0) top = 1.0;
  for (int i = 1; i <= 32; ++i) g.push_back(top * i / 32.0);
  return g;
}

}  // namespace detail

inline JNProfile jn_profile(const SampledLine& f, JNSetting setting,
                            std::vector<double> lambda_grid = {}, long cap = 0) {
  f.validate();
  JNProfile prof;
  const bool lagged = setting == JNSetting::Lagged1D;
  auto fam = anatomy_family(f, cap > 0 ? cap / 2 : 0, lagged);
  prof.norm_used = osc_norm(f, OscKind::blo_plus(), cap).norm;
  if (lambda_grid.empty()) {
    double top = 0.0;
    for (const auto& a : fam) {
      double c = block_stats(f, lagged ? a.pp : a.plus).min;
      for (long i = a.minus.start[0]; i < a.minus.start[0] + a.m; ++i)
        top = std::max(top, f.values[static_cast<std::size_t>(i)] - c);
    }
    lambda_grid = detail::auto_lambda_grid(top);
  }
  prof.lambdas = lambda_grid;
  prof.tails.assign(lambda_grid.size(), 0.0);
  for (const auto& a : fam) {
    double c = block_stats(f, lagged ? a.pp : a.plus).min;
    for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
      long cnt = 0;
      for (long i = a.minus.start[0]; i < a.minus.start[0] + a.m; ++i)
        if (f.values[static_cast<std::size_t>(i)] - c > lambda_grid[li]) ++cnt;
      prof.tails[li] = std::max(prof.tails[li],
                                static_cast<double>(cnt) / static_cast<double>(a.m));
    }
  }
  detail::jn_fit(prof);
  return prof;
}

inline JNProfile jn_profile(const SampledSlab& f, double gamma,
                            std::vector<double> lambda_grid = {},
                            const ParabolicOscOptions& opt = {}) {
  f.validate();
  JNProfile prof;
  PRectOptions po;
  po.k_cap = opt.k_cap;
  po.exhaustive = opt.exhaustive;
  po.need_pp = true;
  auto fam = prect_family(f, gamma, po);
  ParabolicOscOptions oo = opt;
  prof.norm_used = osc_norm(f, OscKind::pblo_minus(gamma), oo).norm;
  auto st = f.strides();
  if (lambda_grid.empty()) {
    double top = 0.0;
    for (const auto& r : fam) {
      double c = block_stats(f, r.future()).min;
      detail::for_each_offset(r.past(), st, [&](long off) {
        top = std::max(top, f.values[static_cast<std::size_t>(off)] - c);
      });
      detail::for_each_offset(r.far_future(), st, [&](long off) {
        top = std::max(top, c - f.values[static_cast<std::size_t>(off)]);
      });
    }
    lambda_grid = detail::auto_lambda_grid(top);
  }
  prof.lambdas = lambda_grid;
  prof.tails.assign(lambda_grid.size(), 0.0);
  prof.neg_tails.assign(lambda_grid.size(), 0.0);
  for (const auto& r : fam) {
    double c = block_stats(f, r.future()).min;
    auto past = r.past();
    auto far2 = r.far_future();
    for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
      long cnt = 0;
      detail::for_each_offset(past, st, [&](long off) {
        if (f.values[static_cast<std::size_t>(off)] - c > lambda_grid[li]) ++cnt;
      });
      prof.tails[li] = std::max(
          prof.tails[li], static_cast<double>(cnt) / static_cast<double>(past.cells()));
      long neg = 0;
      detail::for_each_offset(far2, st, [&](long off) {
        if (c - f.values[static_cast<std::size_t>(off)] > lambda_grid[li]) ++neg;
      });
      prof.neg_tails[li] = std::max(
          prof.neg_tails[li], static_cast<double>(neg) / static_cast<double>(far2.cells()));
    }
  }
  detail::jn_fit(prof);
  return prof;
}

// ---------------------------------------------------------------------------
// Coifman-Rochberg: power check and factorization.
//
// cr_factor writes w = b (M(g))^delta with g = w^{1/delta} and
// b = w / (M(g))^delta, where M is the one-sided (or parabolic) maximal
// operator completed pointwise with the identity (max(. , |f|)); that
// completion is the discrete stand-in for the a.e. inequality M-(f) >= f
// and makes b lie in (0, 1] cell by cell. Under the paper's normalization
// sup b is the constant-1 end of 1 <= ||b||_oo <= C; ours pins sup b = 1.
// ---------------------------------------------------------------------------

struct CRFactorization {
  SampledLine g, b, reconstruction;
  double residual = 0.0;
  double b_min = 1.0, b_max = 1.0;
};

struct CRFactorizationSlab {
  SampledSlab g, b, reconstruction;
  double residual = 0.0;
  double b_min = 1.0, b_max = 1.0;
};

inline SampledLine closed_standard_minus(const SampledLine& g, long cap = 0) {
  return pointwise_closure(onesided_max(g, MaxVariant1D::standard_minus(cap)), g);
}

inline SampledSlab closed_parabolic_max(const SampledSlab& g, double gamma,
                                        const PRectOptions& opt = {}) {
  return pointwise_closure(parabolic_max(g, gamma, ParabolicKind::Maximal, Engine::Fast, opt), g);
}

inline double cr_power_check(const SampledLine& g, double delta, long cap = 0,
                             OscWitness* wit = nullptr) {
  require(delta > 0.0 && delta < 1.0, "cr_power_check: delta must be in (0,1)");
  for (double v : g.values) require(v >= 0.0, "cr_power_check: g must be nonnegative");
  SampledLine m = closed_standard_minus(g, cap);
  for (auto& v : m.values) v = std::pow(v, delta);
  WeightSpec spec = WeightSpec::a1_adjacent();
  spec.cap = cap;
  auto r = weight_constant(m, spec);
  if (wit) *wit = r.witness;
  return r.constant;
}

inline double cr_power_check(const SampledSlab& g, double delta, double gamma,
                             const ParabolicWeightOptions& opt = {}) {
  require(delta > 0.0 && delta < 1.0, "cr_power_check: delta must be in (0,1)");
  for (double v : g.values) require(v >= 0.0, "cr_power_check: g must be nonnegative");
  PRectOptions po;
  po.k_cap = opt.k_cap;
  po.exhaustive = opt.exhaustive;
  SampledSlab m = closed_parabolic_max(g, gamma, po);
  for (auto& v : m.values) v = std::pow(v, delta);
  return weight_constant(m, 1.0, gamma, opt).constant;
}

inline CRFactorization cr_factor(const SampledLine& w, double delta, long cap = 0) {
  require(delta > 0.0 && delta < 1.0, "cr_factor: delta must be in (0,1)");
  w.validate();
  CRFactorization out;
  out.g = w;
  double wmax = 0.0;
  for (double v : w.values) {
    require(v > 0.0, "cr_factor: w must be positive");
    wmax = std::max(wmax, v);
  }
  for (auto& v : out.g.values) {
    double e = std::log(v) / delta;
    require(e < 700.0 && e > -700.0, "cr_factor: overflow in w^{1/delta}; rescale");
    v = std::exp(e);
  }
  SampledLine mg = closed_standard_minus(out.g, cap);
  out.b = w;
  out.reconstruction = w;
  out.b_min = std::numeric_limits<double>::infinity();
  out.b_max = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    double md = std::pow(mg.values[i], delta);
    out.b.values[i] = w.values[i] / md;
    out.reconstruction.values[i] = out.b.values[i] * md;
    out.residual = std::max(out.residual,
                            std::abs(out.reconstruction.values[i] - w.values[i]) /
                                std::max(1.0, std::abs(w.values[i])));
    out.b_min = std::min(out.b_min, out.b.values[i]);
    out.b_max = std::max(out.b_max, out.b.values[i]);
  }
  return out;
}

inline CRFactorizationSlab cr_factor(const SampledSlab& w, double delta, double gamma,
                                     const PRectOptions& opt = {}) {
  require(delta > 0.0 && delta < 1.0, "cr_factor: delta must be in (0,1)");
  w.validate();
  CRFactorizationSlab out;
  out.g = w;
  for (auto& v : out.g.values) {
    require(v > 0.0, "cr_factor: w must be positive");
    double e = std::log(v) / delta;
    require(e < 700.0 && e > -700.0, "cr_factor: overflow in w^{1/delta}; rescale");
    v = std::exp(e);
  }
  SampledSlab mg = closed_parabolic_max(out.g, gamma, opt);
  out.b = w;
  out.reconstruction = w;
  out.b_min = std::numeric_limits<double>::infinity();
  out.b_max = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    double md = std::pow(mg.values[i], delta);
    out.b.values[i] = w.values[i] / md;
    out.reconstruction.values[i] = out.b.values[i] * md;
    out.residual = std::max(out.residual,
                            std::abs(out.reconstruction.values[i] - w.values[i]) /
                                std::max(1.0, std::abs(w.values[i])));
    out.b_min = std::min(out.b_min, out.b.values[i]);
    out.b_max = std::max(out.b_max, out.b.values[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// BLO decomposition f = alpha ln(M(g)) + b via the exponential bridge:
// pick the largest scanned eps whose A1+ constant stays below the cap,
// factor e^{eps (f - max f)} at each scanned delta, keep the delta whose
// alpha + max|b| estimate is smallest. Everything runs in the shifted
// domain, where e^{eps f~} <= 1.
// ---------------------------------------------------------------------------

struct BLODecomposition {
  double alpha = 0.0;
  double eps = 0.0, delta = 0.0;
  SampledLine g, b;
  double residual = 0.0;
  double star_estimate = 0.0;  // alpha + max|b|
  bool ok = false;
};

struct BLODecompOptions {
  std::vector<double> eps_grid;    // default: geometric 1/64..64
  std::vector<double> delta_grid;  // default: 0.1..0.9
  double const_cap = 64.0;
  long cap = 0;
};

namespace detail {

inline std::vector<double> default_delta_grid() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

}  // namespace detail

inline BLODecomposition blo_decompose(const SampledLine& f,
                                      const BLODecompOptions& opt_in = {}) {
  f.validate();
  BLODecompOptions opt = opt_in;
  if (opt.eps_grid.empty()) opt.eps_grid = default_eps_grid();
  if (opt.delta_grid.empty()) opt.delta_grid = detail::default_delta_grid();
  const double fmax = *std::max_element(f.values.begin(), f.values.end());
  const double fmin = *std::min_element(f.values.begin(), f.values.end());

  double best_eps = 0.0;
  for (double eps : opt.eps_grid) {
    if (eps * (fmax - fmin) > 600.0) break;
    SampledLine w = f;
    for (auto& v : w.values) v = std::exp(eps * (v - fmax));
    WeightSpec spec = WeightSpec::a1_adjacent();
    spec.cap = opt.cap;
    if (weight_constant(w, spec).constant <= opt.const_cap) best_eps = eps;
  }
  BLODecomposition out;
  if (best_eps == 0.0) return out;  // no usable eps: f not BLO at this resolution
  out.eps = best_eps;

  SampledLine w = f;
  for (auto& v : w.values) v = std::exp(best_eps * (v - fmax));
  double best_score = std::numeric_limits<double>::infinity();
  for (double delta : opt.delta_grid) {
    if (best_eps * (fmax - fmin) / delta > 600.0) continue;
    auto fac = cr_factor(w, delta, opt.cap);
    // f = (delta/eps) ln M(g) + [ (1/eps) ln b + fmax ]
    double alpha = delta / best_eps;
    double bmax = 0.0;
    for (double bv : fac.b.values) bmax = std::max(bmax, std::abs(std::log(bv) / best_eps));
    double score = alpha + bmax;
    if (score < best_score) {
      best_score = score;
      out.delta = delta;
      out.alpha = alpha;
      out.g = fac.g;
      out.b = fac.b;
      for (std::size_t i = 0; i < out.b.values.size(); ++i)
        out.b.values[i] = std::log(fac.b.values[i]) / best_eps + fmax;
      out.star_estimate = score;
      out.ok = true;
    }
  }
  if (!out.ok) return out;
  // residual of f = alpha ln(Mcl(g)) + b
  SampledLine mg = closed_standard_minus(out.g, opt.cap);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double rec = out.alpha * std::log(mg.values[i]) + out.b.values[i];
    out.residual = std::max(out.residual, std::abs(rec - f.values[i]) /
                                              std::max(1.0, std::abs(f.values[i])));
  }
  return out;
}

struct BLODecompositionSlab {
  double alpha = 0.0;
  double eps = 0.0, delta = 0.0;
  SampledSlab g, b;
  double residual = 0.0;
  double star_estimate = 0.0;
  bool ok = false;
};

inline BLODecompositionSlab blo_decompose(const SampledSlab& f, double gamma,
                                          const BLODecompOptions& opt_in = {},
                                          const ParabolicWeightOptions& wopt = {}) {
  f.validate();
  BLODecompOptions opt = opt_in;
  if (opt.eps_grid.empty()) opt.eps_grid = default_eps_grid();
  if (opt.delta_grid.empty()) opt.delta_grid = detail::default_delta_grid();
  const double fmax = *std::max_element(f.values.begin(), f.values.end());
  const double fmin = *std::min_element(f.values.begin(), f.values.end());

  double best_eps = 0.0;
  for (double eps : opt.eps_grid) {
    if (eps * (fmax - fmin) > 600.0) break;
    SampledSlab w = f;
    for (auto& v : w.values) v = std::exp(eps * (v - fmax));
    if (weight_constant(w, 1.0, gamma, wopt).constant <= opt.const_cap) best_eps = eps;
  }
  BLODecompositionSlab out;
  if (best_eps == 0.0) return out;
  out.eps = best_eps;

  SampledSlab w = f;
  for (auto& v : w.values) v = std::exp(best_eps * (v - fmax));
  PRectOptions po;
  po.k_cap = wopt.k_cap;
  po.exhaustive = wopt.exhaustive;
  double best_score = std::numeric_limits<double>::infinity();
  for (double delta : opt.delta_grid) {
    if (best_eps * (fmax - fmin) / delta > 600.0) continue;
    auto fac = cr_factor(w, delta, gamma, po);
    double alpha = delta / best_eps;
    double bmax = 0.0;
    for (double bv : fac.b.values) bmax = std::max(bmax, std::abs(std::log(bv) / best_eps));
    double score = alpha + bmax;
    if (score < best_score) {
      best_score = score;
      out.delta = delta;
      out.alpha = alpha;
      out.g = fac.g;
      out.b = fac.b;
      for (std::size_t i = 0; i < out.b.values.size(); ++i)
        out.b.values[i] = std::log(fac.b.values[i]) / best_eps + fmax;
      out.star_estimate = score;
      out.ok = true;
    }
  }
  if (!out.ok) return out;
  SampledSlab mg = closed_parabolic_max(out.g, gamma, po);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double rec = out.alpha * std::log(mg.values[i]) + out.b.values[i];
    out.residual = std::max(out.residual, std::abs(rec - f.values[i]) /
                                              std::max(1.0, std::abs(f.values[i])));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bennett decomposition f = N(F) + h with F = f, h = f - N(f).
//
// Exact bounds: -h <= blo norm (pointwise, from the definition of N) and
// h <= the local oscillation allowance, i.e. the largest one-step jump
// f(c) - mean over the smallest admissible past block of c (the discrete
// stand-in for the Lebesgue-point argument). In 1D the allowance is the
// largest adjacent-cell increment.
// ---------------------------------------------------------------------------

struct BennettDecomposition {
  SampledLine natural, h;
  double h_min = 0.0, h_max = 0.0;
  double blo_norm = 0.0;
  double jump_allowance = 0.0;
};

inline double adjacent_jump_allowance(const SampledLine& f) {
  double a = 0.0;
  for (long i = 1; i < f.cells(); ++i)
    a = std::max(a, f.values[static_cast<std::size_t>(i)] -
                        f.values[static_cast<std::size_t>(i - 1)]);
  return std::max(a, 0.0);
}

inline BennettDecomposition bennett_decompose(const SampledLine& f, long cap = 0) {
  BennettDecomposition out;
  out.natural = onesided_max(f, MaxVariant1D::natural_minus(cap));
  out.h = f;
  out.h_min = std::numeric_limits<double>::infinity();
  out.h_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    out.h.values[i] = f.values[i] - out.natural.values[i];
    out.h_min = std::min(out.h_min, out.h.values[i]);
    out.h_max = std::max(out.h_max, out.h.values[i]);
  }
  out.blo_norm = osc_norm(f, OscKind::blo_plus(), cap).norm;
  out.jump_allowance = adjacent_jump_allowance(f);
  return out;
}

struct BennettDecompositionSlab {
  SampledSlab natural, h;
  double h_min = 0.0, h_max = 0.0;
  double pblo_norm = 0.0;
  double jump_allowance = 0.0;
};

// Largest increment of f over the past mean of its smallest covering
// rectangle; cells outside every future block contribute 0 (there h = 0).
inline double parabolic_jump_allowance(const SampledSlab& f, double gamma,
                                       const PRectOptions& opt = {}) {
  auto rects = prect_family(f, gamma, opt);
  auto st = f.strides();
  std::vector<double> small_mean(f.values.size(),
                                 std::numeric_limits<double>::quiet_NaN());
  std::vector<long> small_vol(f.values.size(), std::numeric_limits<long>::max());
  SlabPrefix pre(f, f.values);
  for (const auto& r : rects) {
    long vol = r.past().cells();
    double mean = pre.box_mean(r.past());
    detail::for_each_offset(r.future(), st, [&](long off) {
      if (vol < small_vol[static_cast<std::size_t>(off)]) {
        small_vol[static_cast<std::size_t>(off)] = vol;
        small_mean[static_cast<std::size_t>(off)] = mean;
      }
    });
  }
  double a = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (!std::isnan(small_mean[i])) a = std::max(a, f.values[i] - small_mean[i]);
  return std::max(a, 0.0);
}

inline BennettDecompositionSlab bennett_decompose(const SampledSlab& f, double gamma,
                                                  const PRectOptions& opt = {}) {
  BennettDecompositionSlab out;
  out.natural = parabolic_max(f, gamma, ParabolicKind::Natural, Engine::Fast, opt);
  out.h = f;
  out.h_min = std::numeric_limits<double>::infinity();
  out.h_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    out.h.values[i] = f.values[i] - out.natural.values[i];
    out.h_min = std::min(out.h_min, out.h.values[i]);
    out.h_max = std::max(out.h_max, out.h.values[i]);
  }
  ParabolicOscOptions oo;
  oo.k_cap = opt.k_cap;
  oo.exhaustive = opt.exhaustive;
  out.pblo_norm = osc_norm(f, OscKind::pblo_minus(gamma), oo).norm;
  out.jump_allowance = parabolic_jump_allowance(f, gamma, opt);
  return out;
}

// ---------------------------------------------------------------------------
// Distance to L^infinity: sup{ eps : e^{eps f} in A1+ } estimated two ways.
//
//   route 1: the critical eps of the window-ladder scan.
//   route 2: 1 / (min alpha over validated decompositions f = a ln M(g) + b);
//            a decomposition validates when the A1+ constant of e^{eps f}
//            stays under the cap and the bounded part has small oscillation.
// A plateauing scan (bounded f) reports infinity from both routes.
// ---------------------------------------------------------------------------

struct DistanceReport {
  double route_scan = std::numeric_limits<double>::infinity();
  double route_decomp = std::numeric_limits<double>::infinity();
  double gap = 0.0;
  bool bounded = false;
};

struct DistanceOptions {
  EpsScanOptions scan;
  BLODecompOptions decomp;
  double osc_cap = 0.5;  // admissible oscillation of the bounded part
};

inline DistanceReport dist_to_linfty(const SampledLine& f,
                                     const DistanceOptions& opt_in = {}) {
  f.validate();
  DistanceOptions opt = opt_in;
  if (opt.decomp.eps_grid.empty()) opt.decomp.eps_grid = default_eps_grid();
  if (opt.decomp.delta_grid.empty()) opt.decomp.delta_grid = detail::default_delta_grid();
  DistanceReport rep;
  auto scan = eps_scan(f, opt.scan);
  rep.route_scan = scan.critical_eps;
  if (scan.bounded_plateau) {
    rep.bounded = true;
    return rep;  // both routes infinity
  }
  const double fmax = *std::max_element(f.values.begin(), f.values.end());
  const double fmin = *std::min_element(f.values.begin(), f.values.end());
  double alpha_min = std::numeric_limits<double>::infinity();
  for (double eps : opt.decomp.eps_grid) {
    if (eps * (fmax - fmin) > 600.0) break;
    SampledLine w = f;
    for (auto& v : w.values) v = std::exp(eps * (v - fmax));
    WeightSpec spec = WeightSpec::a1_adjacent();
    spec.cap = opt.decomp.cap;
    if (weight_constant(w, spec).constant > opt.decomp.const_cap) continue;
    for (double delta : opt.decomp.delta_grid) {
      if (eps * (fmax - fmin) / delta > 600.0) continue;
      auto fac = cr_factor(w, delta, opt.decomp.cap);
      double blo = 1e300, bhi = -1e300;
      for (double bv : fac.b.values) {
        double lb = std::log(bv) / eps;
        blo = std::min(blo, lb);
        bhi = std::max(bhi, lb);
      }
      if (bhi - blo <= opt.osc_cap) alpha_min = std::min(alpha_min, delta / eps);
    }
  }
  rep.route_decomp = 1.0 / alpha_min;
  rep.gap = std::abs(rep.route_scan - rep.route_decomp);
  return rep;
}

}  // namespace parablo
