#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace parablo {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

inline bool is_finite(double v) { return std::isfinite(v); }

// Round-trips IEEE-754 binary64: 17 significant digits.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

// Multi-dimensional index box: per-axis start and cell count.
struct IndexBox {
  std::vector<long> start;
  std::vector<long> count;

  IndexBox() = default;
  IndexBox(std::vector<long> s, std::vector<long> c)
      : start(std::move(s)), count(std::move(c)) {}

  // 1D convenience.
  static IndexBox range1d(long s, long c) { return IndexBox({s}, {c}); }

  std::size_t dims() const { return start.size(); }

  long cells() const {
    long n = 1;
    for (long c : count) n *= c;
    return n;
  }

  bool empty() const {
    if (start.empty()) return true;
    for (long c : count)
      if (c <= 0) return true;
    return false;
  }

  IndexBox shifted(std::size_t axis, long delta) const {
    IndexBox b = *this;
    b.start[axis] += delta;
    return b;
  }

  bool operator==(const IndexBox& o) const {
    return start == o.start && count == o.count;
  }
};

struct BlockStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double sum = 0.0;
  long cells = 0;
};

}  // namespace parablo
