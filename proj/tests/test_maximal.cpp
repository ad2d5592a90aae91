#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "parablo/maximal.hpp"

using namespace parablo;

namespace {

double remark_f(double x) { return x >= 0 ? 2 * x : 1.0 / ((x - 1) * (x - 1)) - 1.0; }

SampledLine seeded_line(unsigned seed, long n, double lo = -2.0, double hi = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  return SampledLine::sample(0.0, 1.0, n, [&](double) { return u(rng); });
}

bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("constant functions: every variant returns the constant") {
  SampledLine f = SampledLine::sample(0.0, 1.0, 32, [](double) { return 5.0; });
  for (auto v : {MaxVariant1D::standard_minus(), MaxVariant1D::standard_plus(),
                 MaxVariant1D::gapped_minus(0.25), MaxVariant1D::natural_minus(),
                 MaxVariant1D::hardy_littlewood()}) {
    auto out = onesided_max(f, v);
    for (double y : out.values) CHECK(y == Catch::Approx(5.0).margin(1e-13));
  }
}

TEST_CASE("fast equals naive on seeded random lines") {
  for (unsigned seed = 1; seed <= 8; ++seed) {
    SampledLine f = seeded_line(seed, 80);
    for (auto v : {MaxVariant1D::standard_minus(), MaxVariant1D::standard_plus(),
                   MaxVariant1D::gapped_minus(0.3), MaxVariant1D::natural_minus(),
                   MaxVariant1D::hardy_littlewood()}) {
      auto a = onesided_max(f, v, Engine::Fast);
      auto b = onesided_max(f, v, Engine::Naive);
      for (long i = 0; i < f.cells(); ++i)
        CHECK(close_rel(a.values[static_cast<std::size_t>(i)],
                        b.values[static_cast<std::size_t>(i)]));
    }
  }
}

TEST_CASE("standard-minus: truncated closed form on the increasing counterexample") {
  // On the bounded window [-10,10] the sup over in-window left windows has the
  // closed form max(one-cell window, full-reach window):
  //   full-reach mean at x: (x_+^2 + s^2/(s+1)) / (x + s), s = min(x,0)+10
  // with int_{-s}^0 |f| = s^2/(s+1) for f = 1/(y-1)^2 - 1 on y<0.
  const long n = 2000;
  SampledLine f = SampledLine::sample(-10.0, 10.0, n, remark_f);
  auto M = onesided_max(f, MaxVariant1D::standard_minus());
  auto F = [](double y) { return y + 1.0 / (y - 1.0); };  // antiderivative of |f| on y<0
  for (long i = 40; i < n; i += 13) {
    double x = f.cell_mid(i);
    double one_cell = std::abs(remark_f(x - f.h));
    double xp = std::max(x, 0.0);
    double intneg = F(std::min(x, 0.0)) - F(-10.0);
    double full = (xp * xp + intneg) / (x + 10.0);
    double expect = std::max(one_cell, full);
    CHECK(M.values[static_cast<std::size_t>(i)] ==
          Catch::Approx(expect).epsilon(0.01));
  }
  // the output is not monotone: it sags toward x=0 and rises after
  long i_left = 100, i_mid = 1000, i_right = 1500;
  CHECK(M.values[static_cast<std::size_t>(i_left)] > M.values[static_cast<std::size_t>(i_mid)]);
  CHECK(M.values[static_cast<std::size_t>(i_right)] > M.values[static_cast<std::size_t>(i_mid)]);
}

TEST_CASE("pointwise sandwich M- <= gapped <= (1/gamma_eff) M-") {
  auto check = [](const SampledLine& f, double gamma) {
    auto M = onesided_max(f, MaxVariant1D::standard_minus());
    std::vector<MaxWitness> wit;
    auto G = onesided_max(f, MaxVariant1D::gapped_minus(gamma), Engine::Fast, &wit);
    for (long i = 0; i < f.cells(); ++i) {
      double m = M.values[static_cast<std::size_t>(i)];
      double g = G.values[static_cast<std::size_t>(i)];
      CHECK(m <= g * (1 + 1e-9) + 1e-12);
      const auto& w = wit[static_cast<std::size_t>(i)];
      double geff = w.a < 0 ? gamma
                            : static_cast<double>(w.len) /
                                  static_cast<double>(w.b + w.len - w.a);
      CHECK(g <= m / geff * (1 + 1e-9) + 1e-12);
    }
  };
  for (double gamma : {0.1, 0.25, 0.5}) {
    check(seeded_line(3, 60, 0.0, 3.0), gamma);
    check(seeded_line(4, 60, -2.0, 2.0), gamma);
    check(SampledLine::sample(-10.0, 10.0, 300, remark_f), gamma);
    // adversarial: spike
    SampledLine spike = SampledLine::sample(0.0, 1.0, 50, [](double) { return 0.0; });
    spike.values[37] = 100.0;
    spike.values[12] = 40.0;
    check(spike, gamma);
  }
}

TEST_CASE("monotone: f <= g cellwise implies variant(f) <= variant(g)") {
  SampledLine f = seeded_line(9, 50, 0.0, 1.0);
  SampledLine g = f;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : g.values) v += u(rng);
  for (auto v : {MaxVariant1D::standard_minus(), MaxVariant1D::gapped_minus(0.25),
                 MaxVariant1D::natural_minus(), MaxVariant1D::hardy_littlewood()}) {
    auto a = onesided_max(f, v);
    auto b = onesided_max(g, v);
    for (long i = 0; i < f.cells(); ++i)
      CHECK(a.values[static_cast<std::size_t>(i)] <=
            b.values[static_cast<std::size_t>(i)] + 1e-12);
  }
}

TEST_CASE("positive homogeneity") {
  SampledLine f = seeded_line(21, 40);
  const double c = 3.25;
  SampledLine cf = f;
  for (auto& v : cf.values) v *= c;
  for (auto v : {MaxVariant1D::standard_minus(), MaxVariant1D::gapped_minus(0.4),
                 MaxVariant1D::natural_minus(), MaxVariant1D::hardy_littlewood()}) {
    auto a = onesided_max(f, v);
    auto b = onesided_max(cf, v);
    for (long i = 0; i < f.cells(); ++i)
      CHECK(close_rel(c * a.values[static_cast<std::size_t>(i)],
                      b.values[static_cast<std::size_t>(i)]));
  }
  // |.|-based variants: any real scale
  SampledLine nf = f;
  for (auto& v : nf.values) v *= -c;
  auto a = onesided_max(f, MaxVariant1D::standard_minus());
  auto b = onesided_max(nf, MaxVariant1D::standard_minus());
  for (long i = 0; i < f.cells(); ++i)
    CHECK(close_rel(c * a.values[static_cast<std::size_t>(i)],
                    b.values[static_cast<std::size_t>(i)]));
}

TEST_CASE("natural-minus uses signed averages") {
  // f = -1 on the left half, +1 on the right: at the first right cell the
  // natural operator still sees negative left means
  SampledLine f = SampledLine::sample(0.0, 1.0, 20,
                                      [](double x) { return x < 0.5 ? -1.0 : 1.0; });
  auto N = onesided_max(f, MaxVariant1D::natural_minus());
  CHECK(N.values[10] == Catch::Approx(-1.0));
  auto M = onesided_max(f, MaxVariant1D::standard_minus());
  CHECK(M.values[10] == Catch::Approx(1.0));
}

TEST_CASE("standard-plus mirrors standard-minus") {
  SampledLine f = seeded_line(33, 45);
  SampledLine rev = f;
  std::reverse(rev.values.begin(), rev.values.end());
  auto plus = onesided_max(f, MaxVariant1D::standard_plus());
  auto minus_rev = onesided_max(rev, MaxVariant1D::standard_minus());
  for (long i = 0; i < f.cells(); ++i)
    CHECK(close_rel(plus.values[static_cast<std::size_t>(i)],
                    minus_rev.values[static_cast<std::size_t>(f.cells() - 1 - i)]));
}

TEST_CASE("parabolic: constant slab stays constant") {
  SampledSlab s = SampledSlab::sample(1, 2.0, {0.0}, {1.0}, 8, 0.0, 1.0, 16,
                                      [](const std::vector<double>&, double) { return 3.5; });
  for (auto kind : {ParabolicKind::Maximal, ParabolicKind::Natural}) {
    auto out = parabolic_max(s, 0.25, kind);
    for (double v : out.values) CHECK(v == Catch::Approx(3.5).margin(1e-13));
  }
}

TEST_CASE("parabolic: fast equals naive on seeded slabs") {
  for (unsigned seed = 40; seed < 44; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    SampledSlab s = SampledSlab::sample(1, 2.0, {0.0}, {2.0}, 8, 0.0, 1.0, 16,
                                        [&](const std::vector<double>&, double) { return u(rng); });
    for (auto kind : {ParabolicKind::Maximal, ParabolicKind::Natural}) {
      for (double gamma : {0.0, 0.25, 0.5}) {
        auto a = parabolic_max(s, gamma, kind, Engine::Fast);
        auto b = parabolic_max(s, gamma, kind, Engine::Naive);
        for (std::size_t i = 0; i < a.values.size(); ++i)
          CHECK(close_rel(a.values[i], b.values[i]));
      }
    }
  }
}

TEST_CASE("parabolic counterexample: profile bounded on the past, large late") {
  // F(x,t) = f(t) with the increasing 1D profile; gamma=0.5, p=2
  SampledSlab s = SampledSlab::sample(
      1, 2.0, {-2.0}, {2.0}, 16, -3.0, 10.5, 216,
      [](const std::vector<double>&, double t) { return remark_f(t); });
  auto M = parabolic_max(s, 0.5, ParabolicKind::Maximal, Engine::Fast);
  auto st = s.strides();
  double late = -1e300;
  for (long ix = 0; ix < s.dims[0]; ++ix) {
    for (long it = 0; it < s.dims[1]; ++it) {
      double t = s.time_mid(it);
      double v = M.values[static_cast<std::size_t>(ix * st[0] + it * st[1])];
      if (t <= 0.0) CHECK(v <= 1.0 + 1e-12);
      if (std::abs(t - 10.0) < s.ht) late = std::max(late, v);
    }
  }
  CHECK(late >= 16.0 * 0.95);
}
