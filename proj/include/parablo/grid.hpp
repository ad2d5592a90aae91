#pragma once

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "parablo/core.hpp"

#include <json.hpp>

namespace parablo {

// Uniformly sampled function on a bounded 1D window. Cell i holds the
// constant value of f on [x0 + i*h, x0 + (i+1)*h); integrals over cell
// blocks are exact sums for this piecewise-constant model.
struct SampledLine {
  double x0 = 0.0;
  double h = 1.0;
  std::vector<double> values;

  long cells() const { return static_cast<long>(values.size()); }
  double cell_mid(long i) const { return x0 + (i + 0.5) * h; }
  double left_edge(long i) const { return x0 + i * h; }

  void validate() const {
    require(values.size() >= 2, "SampledLine: need at least 2 cells");
    require(h > 0.0, "SampledLine: cell width must be positive");
    for (std::size_t i = 0; i < values.size(); ++i)
      require(is_finite(values[i]),
              "SampledLine: non-finite value at cell " + std::to_string(i));
  }

  template <typename F>
  static SampledLine sample(double a, double b, long n, F&& f) {
    SampledLine g;
    g.x0 = a;
    g.h = (b - a) / static_cast<double>(n);
    g.values.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) g.values[static_cast<std::size_t>(i)] = f(g.cell_mid(i));
    g.validate();
    return g;
  }
};

// Uniformly sampled function on a bounded space-time window in R^n x R.
// dims = [spatial dims..., time]; values are row-major with the time axis
// fastest. p is the fixed scaling exponent of the parabolic geometry.
struct SampledSlab {
  int n = 1;
  double p = 2.0;
  std::vector<double> x0;
  double hx = 1.0;
  double t0 = 0.0;
  double ht = 1.0;
  std::vector<long> dims;  // size n+1, last axis = time
  std::vector<double> values;

  long time_cells() const { return dims.back(); }
  long spatial_cells(int axis) const { return dims[static_cast<std::size_t>(axis)]; }

  long total_cells() const {
    long t = 1;
    for (long d : dims) t *= d;
    return t;
  }

  // Row-major strides, time fastest.
  std::vector<long> strides() const {
    std::vector<long> s(dims.size());
    long acc = 1;
    for (std::size_t a = dims.size(); a-- > 0;) {
      s[a] = acc;
      acc *= dims[a];
    }
    return s;
  }

  double value_at(const std::vector<long>& idx) const {
    auto s = strides();
    long off = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) off += idx[a] * s[a];
    return values[static_cast<std::size_t>(off)];
  }

  double spatial_mid(int axis, long i) const {
    return x0[static_cast<std::size_t>(axis)] + (i + 0.5) * hx;
  }
  double time_mid(long i) const { return t0 + (i + 0.5) * ht; }

  void validate() const {
    require(n >= 1, "SampledSlab: spatial dimension must be >= 1");
    require(p > 1.0, "SampledSlab: scaling exponent p must exceed 1");
    require(hx > 0.0 && ht > 0.0, "SampledSlab: cell sizes must be positive");
    require(dims.size() == static_cast<std::size_t>(n) + 1,
            "SampledSlab: dims must have n+1 entries");
    require(x0.size() == static_cast<std::size_t>(n),
            "SampledSlab: x0 must have n entries");
    long t = 1;
    for (long d : dims) {
      require(d >= 1, "SampledSlab: empty axis");
      t *= d;
    }
    require(t == static_cast<long>(values.size()),
            "SampledSlab: dims product " + std::to_string(t) +
                " does not match value count " + std::to_string(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
      require(is_finite(values[i]),
              "SampledSlab: non-finite value at offset " + std::to_string(i));
  }

  // f(x_vec, t)
  template <typename F>
  static SampledSlab sample(int n_, double p_, std::vector<double> xlo,
                            std::vector<double> xhi, long nx, double tlo,
                            double thi, long nt, F&& f) {
    SampledSlab s;
    s.n = n_;
    s.p = p_;
    s.x0 = std::move(xlo);
    s.hx = (xhi[0] - s.x0[0]) / static_cast<double>(nx);
    s.t0 = tlo;
    s.ht = (thi - tlo) / static_cast<double>(nt);
    s.dims.assign(static_cast<std::size_t>(n_), nx);
    s.dims.push_back(nt);
    s.values.resize(static_cast<std::size_t>(s.total_cells()));
    std::vector<long> idx(s.dims.size(), 0);
    std::vector<double> x(static_cast<std::size_t>(n_), 0.0);
    for (std::size_t off = 0; off < s.values.size(); ++off) {
      for (int a = 0; a < n_; ++a) x[static_cast<std::size_t>(a)] = s.spatial_mid(a, idx[static_cast<std::size_t>(a)]);
      s.values[off] = f(x, s.time_mid(idx.back()));
      for (std::size_t a = s.dims.size(); a-- > 0;) {
        if (++idx[a] < s.dims[a]) break;
        idx[a] = 0;
      }
    }
    s.validate();
    return s;
  }
};

namespace detail {

inline void check_box_in(const IndexBox& b, const std::vector<long>& dims) {
  require(!b.empty(), "box is empty");
  require(b.dims() == dims.size(), "box rank does not match grid rank");
  for (std::size_t a = 0; a < dims.size(); ++a) {
    require(b.start[a] >= 0 && b.start[a] + b.count[a] <= dims[a],
            "box exceeds grid bounds on axis " + std::to_string(a));
  }
}

// Visits offsets of a box in ascending row-major order.
template <typename Fn>
inline void for_each_offset(const IndexBox& b, const std::vector<long>& strides,
                            Fn&& fn) {
  std::vector<long> idx = b.start;
  const std::size_t rank = idx.size();
  for (;;) {
    long off = 0;
    for (std::size_t a = 0; a < rank; ++a) off += idx[a] * strides[a];
    fn(off);
    std::size_t a = rank;
    while (a > 0) {
      --a;
      if (++idx[a] < b.start[a] + b.count[a]) break;
      idx[a] = b.start[a];
      if (a == 0) return;
    }
  }
}

}  // namespace detail

// Mean and min over a cell block. Summation in ascending index order so the
// result is deterministic.
inline BlockStats block_stats(const SampledLine& f, const IndexBox& b) {
  detail::check_box_in(b, {f.cells()});
  BlockStats s;
  s.cells = b.count[0];
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  for (long i = b.start[0]; i < b.start[0] + b.count[0]; ++i) {
    double v = f.values[static_cast<std::size_t>(i)];
    s.sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = s.sum / static_cast<double>(s.cells);
  return s;
}

inline BlockStats block_stats(const SampledSlab& f, const IndexBox& b) {
  detail::check_box_in(b, f.dims);
  BlockStats s;
  s.cells = b.cells();
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  auto strides = f.strides();
  detail::for_each_offset(b, strides, [&](long off) {
    double v = f.values[static_cast<std::size_t>(off)];
    s.sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  });
  s.mean = s.sum / static_cast<double>(s.cells);
  return s;
}

inline std::pair<double, double> block_mean_min(const SampledLine& f, const IndexBox& b) {
  auto s = block_stats(f, b);
  return {s.mean, s.min};
}
inline std::pair<double, double> block_mean_min(const SampledSlab& f, const IndexBox& b) {
  auto s = block_stats(f, b);
  return {s.mean, s.min};
}

// ---------------------------------------------------------------------------
// File ingestion / emission.
//
//   csv-line:      header "x,value", one row per cell midpoint.
//   json-slab:     {n, p, x0[], hx, t0, ht, dims[], values[]} (row-major,
//                  last axis = time).
//   json+raw-slab: same metadata, "raw" names a sidecar of little-endian
//                  binary64 values in row-major order.
// ---------------------------------------------------------------------------

inline SampledLine load_line_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  std::string header;
  std::getline(in, header);
  require(header.rfind("x,value", 0) == 0,
          path + ": expected header 'x,value', got '" + header + "'");
  std::vector<double> xs, vs;
  std::string row;
  long rowno = 1;
  while (std::getline(in, row)) {
    ++rowno;
    if (row.empty()) continue;
    std::istringstream ss(row);
    std::string xf, vf;
    require(std::getline(ss, xf, ',') && std::getline(ss, vf),
            path + ": malformed row " + std::to_string(rowno));
    try {
      xs.push_back(std::stod(xf));
      vs.push_back(std::stod(vf));
    } catch (const std::exception&) {
      fail(path + ": unparsable number at row " + std::to_string(rowno));
    }
    require(is_finite(xs.back()) && is_finite(vs.back()),
            path + ": NaN/Inf at row " + std::to_string(rowno));
  }
  require(xs.size() >= 2, path + ": need at least 2 rows");
  double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  require(h > 0.0, path + ": abscissae must be increasing");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    double d = xs[i] - xs[i - 1];
    if (std::abs(d - h) > 1e-9 * std::max(std::abs(h), 1.0))
      fail(path + ": non-uniform spacing at row " + std::to_string(i + 2));
  }
  SampledLine g;
  g.h = h;
  g.x0 = xs.front() - 0.5 * h;
  g.values = std::move(vs);
  g.validate();
  return g;
}

inline void save_line_csv(const SampledLine& f, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  out << "x,value\n";
  for (long i = 0; i < f.cells(); ++i)
    out << format_double(f.cell_mid(i)) << ","
        << format_double(f.values[static_cast<std::size_t>(i)]) << "\n";
}

namespace detail {

inline std::string sidecar_path(const std::string& json_path, const std::string& raw) {
  auto slash = json_path.find_last_of('/');
  if (slash == std::string::npos || raw.find('/') == 0) return raw;
  return json_path.substr(0, slash + 1) + raw;
}

inline SampledSlab slab_from_json(const nlohmann::json& j, const std::string& path) {
  SampledSlab s;
  try {
    s.n = j.at("n").get<int>();
    s.p = j.at("p").get<double>();
    s.x0 = j.at("x0").get<std::vector<double>>();
    s.hx = j.at("hx").get<double>();
    s.t0 = j.at("t0").get<double>();
    s.ht = j.at("ht").get<double>();
    s.dims = j.at("dims").get<std::vector<long>>();
  } catch (const nlohmann::json::exception& e) {
    fail(path + ": bad slab metadata: " + e.what());
  }
  if (j.contains("raw")) {
    std::string rp = sidecar_path(path, j.at("raw").get<std::string>());
    std::ifstream in(rp, std::ios::binary);
    require(in.good(), path + ": cannot open raw sidecar " + rp);
    long total = 1;
    for (long d : s.dims) total *= d;
    s.values.resize(static_cast<std::size_t>(total));
    static_assert(sizeof(double) == 8);
    in.read(reinterpret_cast<char*>(s.values.data()),
            static_cast<std::streamsize>(s.values.size() * 8));
    require(in.gcount() == static_cast<std::streamsize>(s.values.size() * 8),
            rp + ": raw payload shorter than dims product");
    char probe;
    require(!in.read(&probe, 1), rp + ": raw payload longer than dims product");
  } else {
    try {
      s.values = j.at("values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      fail(path + ": bad values array: " + e.what());
    }
  }
  try {
    s.validate();
  } catch (const error& e) {
    fail(path + ": " + e.what());
  }
  return s;
}

}  // namespace detail

inline SampledSlab load_slab_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(path + ": JSON parse error: " + e.what());
  }
  return detail::slab_from_json(j, path);
}

inline void save_slab_json(const SampledSlab& s, const std::string& path,
                           const std::string& raw_sidecar = "") {
  nlohmann::json j;
  j["n"] = s.n;
  j["p"] = s.p;
  j["x0"] = s.x0;
  j["hx"] = s.hx;
  j["t0"] = s.t0;
  j["ht"] = s.ht;
  j["dims"] = s.dims;
  if (raw_sidecar.empty()) {
    j["values"] = s.values;
  } else {
    j["raw"] = raw_sidecar;
    std::ofstream rf(detail::sidecar_path(path, raw_sidecar), std::ios::binary);
    require(rf.good(), "cannot write raw sidecar for " + path);
    rf.write(reinterpret_cast<const char*>(s.values.data()),
             static_cast<std::streamsize>(s.values.size() * 8));
  }
  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace parablo
