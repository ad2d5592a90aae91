#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "parablo/grid.hpp"

using namespace parablo;
namespace fs = std::filesystem;

namespace {
fs::path tmpdir() {
  auto d = fs::temp_directory_path() / "parablo_grid_test";
  fs::create_directories(d);
  return d;
}
}  // namespace

TEST_CASE("csv line load: direct transcription") {
  auto p = tmpdir() / "line.csv";
  {
    std::ofstream f(p);
    f << "x,value\n0,1\n0.5,1\n1.0,2\n";
  }
  SampledLine g = load_line_csv(p.string());
  CHECK(g.h == Catch::Approx(0.5));
  CHECK(g.x0 == Catch::Approx(-0.25));
  REQUIRE(g.values == std::vector<double>{1, 1, 2});
}

TEST_CASE("csv line load: non-uniform spacing reported with row") {
  auto p = tmpdir() / "bad.csv";
  {
    std::ofstream f(p);
    f << "x,value\n0,1\n0.4,1\n1.0,2\n";
  }
  try {
    load_line_csv(p.string());
    FAIL("expected error");
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("non-uniform spacing at row 3") != std::string::npos);
  }
}

TEST_CASE("csv line load: NaN rejected") {
  auto p = tmpdir() / "nan.csv";
  {
    std::ofstream f(p);
    f << "x,value\n0,1\n0.5,nan\n1.0,2\n";
  }
  CHECK_THROWS_AS(load_line_csv(p.string()), error);
}

TEST_CASE("json slab: metadata validation") {
  auto p = tmpdir() / "slab.json";
  {
    std::ofstream f(p);
    f << R"({"n":1,"p":2.0,"x0":[0.0],"hx":0.25,"t0":0.0,"ht":0.125,"dims":[4,8],)";
    f << R"("values":[)";
    for (int i = 0; i < 32; ++i) f << (i ? "," : "") << i * 0.5;
    f << "]}";
  }
  SampledSlab s = load_slab_json(p.string());
  CHECK(s.n == 1);
  CHECK(s.total_cells() == 32);
  CHECK(s.value_at({3, 7}) == Catch::Approx(31 * 0.5));

  // dimension mismatch between metadata and payload
  auto q = tmpdir() / "slab_bad.json";
  {
    std::ofstream f(q);
    f << R"({"n":1,"p":2.0,"x0":[0.0],"hx":0.25,"t0":0.0,"ht":0.125,"dims":[4,8],"values":[1,2,3]})";
  }
  CHECK_THROWS_AS(load_slab_json(q.string()), error);
}

TEST_CASE("json+raw slab round-trips bit-exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  SampledSlab s = SampledSlab::sample(
      2, 2.5, {0.0, 0.0}, {1.0, 1.0}, 5, 0.0, 2.0, 7,
      [&](const std::vector<double>&, double) { return u(rng); });
  auto p = tmpdir() / "raw.json";
  save_slab_json(s, p.string(), "raw.bin");
  SampledSlab r = load_slab_json(p.string());
  REQUIRE(r.values == s.values);  // bit-exact
  CHECK(r.dims == s.dims);
}

TEST_CASE("csv emission round-trips bit-exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SampledLine f = SampledLine::sample(-2.0, 2.0, 64, [&](double) { return u(rng); });
  auto p = tmpdir() / "rt.csv";
  save_line_csv(f, p.string());
  SampledLine r = load_line_csv(p.string());
  REQUIRE(r.values == f.values);
}

TEST_CASE("block stats basics") {
  SampledLine f;
  f.x0 = 0;
  f.h = 1;
  f.values = {0, 1, 2, 3};

  auto [mean, mn] = block_mean_min(f, IndexBox::range1d(0, 4));
  CHECK(mean == Catch::Approx(1.5));
  CHECK(mn == 0.0);

  SampledLine c;
  c.x0 = 0;
  c.h = 0.5;
  c.values.assign(10, 5.0);
  auto [m2, mn2] = block_mean_min(c, IndexBox::range1d(2, 6));
  CHECK(m2 == 5.0);
  CHECK(mn2 == 5.0);

  CHECK_THROWS_AS(block_mean_min(f, IndexBox::range1d(2, 5)), error);
  CHECK_THROWS_AS(block_mean_min(f, IndexBox::range1d(0, 0)), error);
}

TEST_CASE("block mean of linear function: closed form") {
  // f(x) = -x sampled at midpoints on [0,4]: mean over all = -2 exactly
  // (midpoint sampling makes the piecewise-constant integral the midpoint
  // rule, exact in the mean for linear f), min = -(4 - h/2).
  const long n = 16;
  SampledLine f = SampledLine::sample(0.0, 4.0, n, [](double x) { return -x; });
  auto [mean, mn] = block_mean_min(f, IndexBox::range1d(0, n));
  CHECK(mean == Catch::Approx(-2.0).margin(1e-12));
  CHECK(mn == Catch::Approx(-(4.0 - f.h / 2)).margin(1e-12));
}

TEST_CASE("mean monotone under cellwise domination, min<=mean<=max") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> bump(0.0, 1.0);
  SampledLine f = SampledLine::sample(0.0, 1.0, 40, [&](double) { return u(rng); });
  SampledLine g = f;
  for (auto& v : g.values) v += bump(rng);
  for (long s = 0; s < 40; s += 7) {
    for (long c = 1; s + c <= 40; c += 5) {
      auto bf = block_stats(f, IndexBox::range1d(s, c));
      auto bg = block_stats(g, IndexBox::range1d(s, c));
      CHECK(bf.mean <= bg.mean);
      CHECK(bf.min <= bf.mean);
      CHECK(bf.mean <= bf.max);
    }
  }
}

TEST_CASE("slab block stats match direct loop") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SampledSlab s = SampledSlab::sample(
      2, 2.0, {0.0, 0.0}, {1.0, 1.0}, 4, 0.0, 1.0, 6,
      [&](const std::vector<double>&, double) { return u(rng); });
  IndexBox b({1, 0, 2}, {2, 3, 3});
  auto st = block_stats(s, b);
  double sum = 0, mn = 1e300;
  long cnt = 0;
  for (long i = 1; i < 3; ++i)
    for (long j = 0; j < 3; ++j)
      for (long k = 2; k < 5; ++k) {
        double v = s.value_at({i, j, k});
        sum += v;
        mn = std::min(mn, v);
        ++cnt;
      }
  CHECK(st.cells == cnt);
  CHECK(st.mean == Catch::Approx(sum / cnt).epsilon(1e-14));
  CHECK(st.min == mn);
}
